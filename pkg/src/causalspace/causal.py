"""Primitive-event sequences, causal tables, atom masses and interventions.

A causal space fixes an ordered list of primitive events ``E_1 .. E_N``.
After ``n`` steps the process sits in one atom of ``atoms[n]``, the
partition generated by the first ``n`` events. For every step ``n`` and
every atom ``B`` of ``atoms[n-1]`` on which ``E_n`` is still unresolved, the
table stores the probability that ``E_n`` happens next. Resolved pairs
(``B`` inside ``E_n`` or disjoint from it) are forced to 1 or 0 and are never
stored.

All probabilities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    ContradictsTruth,
    DuplicateEntry,
    EmptyCondition,
    LevelOutOfRange,
    MissingEntry,
    NotAnAtom,
    NoveltyViolation,
    OutOfRange,
    RepeatedLevel,
    TooManyEvents,
    UniverseMismatch,
)
from .events import Event, Partition, Universe, algebra_contains

DEFAULT_MAX_EVENTS = 20

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Literal:
    """``E_level`` when ``positive``, otherwise its complement."""

    level: int
    positive: bool = True

    def __invert__(self) -> "Literal":
        return Literal(self.level, not self.positive)

    def __repr__(self) -> str:
        return f"{'' if self.positive else '~'}E{self.level}"


@dataclass(frozen=True)
class PrimitiveSequence:
    universe: Universe
    events: tuple[Event, ...]
    atoms: tuple[Partition, ...]  # atoms[n] is generated by events[:n]
    _lookup: tuple[dict, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = tuple({b.bits: i for i, b in enumerate(p)} for p in self.atoms)
        object.__setattr__(self, "_lookup", lookup)

    @property
    def depth(self) -> int:
        return len(self.events)

    def event(self, literal: Literal) -> Event:
        self.check_level(literal.level)
        e = self.events[literal.level - 1]
        return e if literal.positive else ~e

    def check_level(self, level: int) -> None:
        if not 1 <= level <= len(self.events):
            raise LevelOutOfRange(f"level {level} outside 1..{len(self.events)}")

    def atom_index(self, level: int, atom: Event) -> int:
        """Index of ``atom`` among the blocks of ``atoms[level]``."""
        try:
            return self._lookup[level][atom.bits]
        except KeyError:
            raise NotAnAtom(f"{atom} is not an atom at level {level}") from None

    def is_atom(self, level: int, atom: Event) -> bool:
        return atom.bits in self._lookup[level]

    def path_level(self, event: Event) -> int | None:
        """Smallest level at which ``event`` is an atom, or None."""
        for level, table in enumerate(self._lookup):
            if event.bits in table:
                return level
        return None

    def uncertain(self, level: int) -> list[int]:
        """Indices of the atoms of ``atoms[level-1]`` that ``E_level`` splits."""
        e = self.events[level - 1].bits
        return [
            i
            for i, b in enumerate(self.atoms[level - 1])
            if b.bits & e and b.bits & ~e
        ]

    def forced(self, level: int, index: int) -> Fraction | None:
        """Forced value of ``cause(E_level | atom)``, or None if unresolved."""
        b = self.atoms[level - 1][index].bits
        e = self.events[level - 1].bits
        if b & ~e == 0:
            return ONE
        if b & e == 0:
            return ZERO
        return None


def validate_primitive_sequence(
    universe: Universe, events: Sequence[Event], max_events: int = DEFAULT_MAX_EVENTS
) -> PrimitiveSequence:
    """Check novelty of each event and cache the per-level atom sets.

    Raises :class:`NoveltyViolation` naming the first (1-based) event that is
    already in the algebra generated by its predecessors.
    """
    events = tuple(events)
    if not events:
        raise ValueError("at least one primitive event is required")
    if len(events) > max_events:
        raise TooManyEvents(f"{len(events)} primitive events exceeds the limit of {max_events}")
    atoms = [Partition.trivial(universe)]
    for n, e in enumerate(events, start=1):
        if e.universe != universe:
            raise UniverseMismatch(f"event {n} belongs to a different universe")
        if algebra_contains(atoms[-1], e):
            raise NoveltyViolation(n)
        atoms.append(atoms[-1].refine(e))
    return PrimitiveSequence(universe, events, tuple(atoms))


def _as_probability(p) -> Fraction:
    if isinstance(p, float):
        raise TypeError("cause values must be exact; pass a Fraction, int or string")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise OutOfRange(p)
    return p


AtomSelector = Union[int, Event]


def resolve_atom(seq: PrimitiveSequence, level: int, selector: AtomSelector) -> int:
    """Index of the atom of ``atoms[level-1]`` picked by ``selector``."""
    seq.check_level(level)
    if isinstance(selector, Event):
        if selector.universe != seq.universe:
            raise UniverseMismatch("atom selector from another universe")
        return seq.atom_index(level - 1, selector)
    n_atoms = len(seq.atoms[level - 1])
    if not 0 <= selector < n_atoms:
        raise NotAnAtom(f"atom index {selector} outside 0..{n_atoms - 1} at level {level - 1}")
    return selector


def check_entry(seq: PrimitiveSequence, level: int, selector: AtomSelector, p) -> tuple[int, Fraction, bool]:
    """Validate one ``(level, atom, p)`` entry.

    Returns ``(atom index, p, stored)``; ``stored`` is False for pairs whose
    value is forced and therefore not kept in the table.
    """
    index = resolve_atom(seq, level, selector)
    p = _as_probability(p)
    forced = seq.forced(level, index)
    if forced is not None:
        if p != forced:
            raise ContradictsTruth(level, seq.atoms[level - 1][index], forced)
        return index, p, False
    return index, p, True


@dataclass(frozen=True)
class CausalTable:
    """``levels[n-1]`` maps atom indices of ``atoms[n-1]`` to ``cause(E_n | atom)``."""

    levels: tuple[Mapping[int, Fraction], ...]

    def __post_init__(self):
        frozen = tuple(MappingProxyType(dict(sorted(m.items()))) for m in self.levels)
        object.__setattr__(self, "levels", frozen)

    def get(self, level: int, index: int) -> Fraction:
        return self.levels[level - 1][index]

    def replace_level(self, level: int, values: Mapping[int, Fraction]) -> "CausalTable":
        levels = list(self.levels)
        levels[level - 1] = values
        return CausalTable(tuple(levels))

    def __len__(self) -> int:
        return sum(len(m) for m in self.levels)


@dataclass(frozen=True)
class CausalSpace:
    sequence: PrimitiveSequence
    table: CausalTable

    @property
    def universe(self) -> Universe:
        return self.sequence.universe

    @property
    def depth(self) -> int:
        return self.sequence.depth

    @property
    def atoms(self) -> tuple[Partition, ...]:
        return self.sequence.atoms

    @property
    def finest(self) -> Partition:
        return self.sequence.atoms[-1]

    def entries(self) -> Iterable[tuple[int, Event, Fraction]]:
        """Stored ``(level, atom, p)`` triples in level and atom order."""
        for level, values in enumerate(self.table.levels, start=1):
            for index, p in values.items():
                yield level, self.sequence.atoms[level - 1][index], p

    @cached_property
    def level_masses(self) -> tuple[tuple[Fraction, ...], ...]:
        """Unconditional mass of every atom, level by level."""
        seq = self.sequence
        masses = [(ONE,)]
        for level in range(1, seq.depth + 1):
            parent_atoms = seq.atoms[level - 1]
            e = seq.events[level - 1]
            row = []
            for block in seq.atoms[level]:
                parent = parent_atoms.block_of(block.min())
                p = _cause_at(self, level, parent)
                row.append(masses[-1][parent] * (p if block <= e else 1 - p))
            masses.append(tuple(row))
        return tuple(masses)


def _cause_at(space: CausalSpace, level: int, index: int) -> Fraction:
    forced = space.sequence.forced(level, index)
    return forced if forced is not None else space.table.get(level, index)


def build_causal_space(seq: PrimitiveSequence, entries: Iterable[tuple[int, AtomSelector, object]]) -> CausalSpace:
    """Validate a causal table and attach it to ``seq``.

    Each entry gives ``cause(E_level | atom)``. Every unresolved pair must be
    covered exactly once; entries for resolved pairs are accepted only when
    they repeat the forced value.
    """
    values: list[dict[int, Fraction]] = [{} for _ in seq.events]
    seen: set[tuple[int, int]] = set()
    for level, selector, p in entries:
        index, p, stored = check_entry(seq, level, selector, p)
        if (level, index) in seen:
            raise DuplicateEntry(level, seq.atoms[level - 1][index])
        seen.add((level, index))
        if stored:
            values[level - 1][index] = p
    for level in range(1, seq.depth + 1):
        for index in seq.uncertain(level):
            if index not in values[level - 1]:
                raise MissingEntry(level, seq.atoms[level - 1][index])
    return CausalSpace(seq, CausalTable(tuple(values)))


def cause(space: CausalSpace, literal: Literal, atom: AtomSelector) -> Fraction:
    """``cause(literal | atom)`` where ``atom`` belongs to ``atoms[literal.level - 1]``."""
    index = resolve_atom(space.sequence, literal.level, atom)
    p = _cause_at(space, literal.level, index)
    return p if literal.positive else 1 - p


def _atom_level(seq: PrimitiveSequence, event: Event, level: int | None, what: str) -> int:
    if event.universe != seq.universe:
        raise UniverseMismatch(f"{what} belongs to another universe")
    if level is None:
        level = seq.path_level(event)
        if level is None:
            raise NotAnAtom(f"{what} {event} is not an atom at any level")
    elif not 0 <= level <= seq.depth or not seq.is_atom(level, event):
        raise NotAnAtom(f"{what} {event} is not an atom at level {level}")
    return level


def atom_mass(
    space: CausalSpace,
    atom: Event,
    root: Event | None = None,
    *,
    level: int | None = None,
    root_level: int | None = None,
) -> Fraction:
    """Conditional mass of the path leading from ``root`` down to ``atom``.

    The product of ``cause`` values along the path, starting below ``root``
    (default: the whole universe). Defined even when ``root`` has zero
    unconditional mass. Levels are inferred as the shallowest level where
    each event is an atom; deeper choices give the same product because the
    extra factors are forced to 1.
    """
    seq = space.sequence
    if root is None:
        root = seq.universe.full
        root_level = 0
    level = _atom_level(seq, atom, level, "atom")
    root_level = _atom_level(seq, root, root_level, "root")
    if not atom <= root:
        raise NotAnAtom(f"atom {atom} is not contained in root {root}")
    if root_level > level:
        if atom == root:
            return ONE
        raise NotAnAtom(f"root level {root_level} is below atom level {level}")
    mass = ONE
    anchor = atom.min()
    for j in range(root_level + 1, level + 1):
        parent = seq.atoms[j - 1].block_of(anchor)
        p = _cause_at(space, j, parent)
        mass *= p if atom <= seq.events[j - 1] else 1 - p
        if not mass:
            break
    return mass


def intervene(space: CausalSpace, literal: Literal) -> CausalSpace:
    """The ``literal``-intervention: force it on every atom where it is unresolved."""
    seq = space.sequence
    seq.check_level(literal.level)
    value = ONE if literal.positive else ZERO
    forced = {index: value for index in seq.uncertain(literal.level)}
    return CausalSpace(seq, space.table.replace_level(literal.level, forced))


def intervene_composite(space: CausalSpace, literals: Sequence[Literal]) -> CausalSpace:
    """Apply several interventions at distinct levels in succession."""
    levels = [lit.level for lit in literals]
    if len(set(levels)) != len(levels):
        raise RepeatedLevel(f"composite intervention repeats a level: {list(literals)}")
    target = space.universe.full
    for lit in literals:
        target = target & space.sequence.event(lit)
    if not target:
        raise EmptyCondition(f"intervention {list(literals)} targets the impossible event")
    for lit in literals:
        space = intervene(space, lit)
    return space
