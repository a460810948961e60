"""Finite outcome universes, events as bit vectors, and generated atom sets.

An event over a universe of ``M`` outcomes is stored as a Python ``int``
whose bit ``i`` is set iff outcome ``i`` belongs to it. A finite algebra is
represented by its atoms: a :class:`Partition` of the universe. Membership
of an event in the algebra is decided against the partition without ever
enumerating the algebra itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import EmptyCondition, UniverseMismatch, UniverseTooLarge

DEFAULT_MAX_OUTCOMES = 4096


@dataclass(frozen=True)
class Universe:
    """The outcomes ``0 .. size-1``."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"universe needs at least one outcome, got {self.size!r}")

    @classmethod
    def checked(cls, size: int, max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> "Universe":
        """Build a universe, refusing sizes above ``max_outcomes``."""
        if size > max_outcomes:
            raise UniverseTooLarge(f"{size} outcomes exceeds the limit of {max_outcomes}")
        return cls(size)

    @property
    def mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def full(self) -> "Event":
        return Event(self, self.mask)

    @property
    def empty(self) -> "Event":
        return Event(self, 0)

    def event(self, members: Iterable[int]) -> "Event":
        return Event.of(self, members)


@dataclass(frozen=True)
class Event:
    """An immutable subset of a finite universe.

    Supports ``&``, ``|``, ``-`` (difference), ``~`` (complement) and the
    subset comparisons ``<=`` / ``<``.
    """

    universe: Universe
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.universe.size:
            raise ValueError("event has members outside its universe")

    @classmethod
    def of(cls, universe: Universe, members: Iterable[int]) -> "Event":
        bits = 0
        for i in members:
            if not 0 <= i < universe.size:
                raise ValueError(f"outcome {i} is outside a universe of size {universe.size}")
            bits |= 1 << i
        return cls(universe, bits)

    def _check(self, other: "Event") -> None:
        if not isinstance(other, Event):
            raise TypeError(f"expected an Event, got {type(other).__name__}")
        if other.universe != self.universe:
            raise UniverseMismatch(
                f"universe of size {self.universe.size} vs size {other.universe.size}"
            )

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.universe, self.bits & other.bits)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.universe, self.bits | other.bits)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.universe, self.bits & ~other.bits)

    def __invert__(self) -> "Event":
        return Event(self.universe, self.universe.mask & ~self.bits)

    complement = __invert__

    def __le__(self, other: "Event") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Event") -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: "Event") -> bool:
        return other <= self

    def __gt__(self, other: "Event") -> bool:
        return other < self

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    def __contains__(self, outcome: int) -> bool:
        return 0 <= outcome < self.universe.size and bool(self.bits >> outcome & 1)

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.universe.mask

    def min(self) -> int:
        """Smallest outcome index; the event must be nonempty."""
        if not self.bits:
            raise ValueError("empty event has no minimum")
        return (self.bits & -self.bits).bit_length() - 1

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


def _same_universe(events: Sequence[Event], universe: Universe | None) -> Universe:
    if universe is None:
        if not events:
            raise ValueError("a universe is required when no events are given")
        universe = events[0].universe
    for e in events:
        if e.universe != universe:
            raise UniverseMismatch(
                f"universe of size {universe.size} vs size {e.universe.size}"
            )
    return universe


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering the universe, ordered by minimum outcome."""

    universe: Universe
    blocks: tuple[Event, ...]

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b.universe != self.universe:
                raise UniverseMismatch("partition block from another universe")
            if not b.bits or b.bits & seen:
                raise ValueError("partition blocks must be nonempty and disjoint")
            seen |= b.bits
        if seen != self.universe.mask:
            raise ValueError("partition blocks do not cover the universe")
        mins = [b.min() for b in self.blocks]
        if mins != sorted(mins):
            raise ValueError("partition blocks are not in canonical order")

    @classmethod
    def from_blocks(cls, universe: Universe, blocks: Iterable[Event]) -> "Partition":
        return cls(universe, tuple(sorted(blocks, key=Event.min)))

    @classmethod
    def trivial(cls, universe: Universe) -> "Partition":
        return cls(universe, (universe.full,))

    def __iter__(self) -> Iterator[Event]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, i: int) -> Event:
        return self.blocks[i]

    def index(self, block: Event) -> int:
        """Position of ``block`` in the partition; ``ValueError`` if it is not a block."""
        return self.blocks.index(block)

    @cached_property
    def _owner(self) -> tuple[int, ...]:
        owner = [0] * self.universe.size
        for i, b in enumerate(self.blocks):
            for x in b:
                owner[x] = i
        return tuple(owner)

    def block_of(self, outcome: int) -> int:
        """Index of the block containing ``outcome``."""
        if not 0 <= outcome < self.universe.size:
            raise ValueError(f"outcome {outcome} is outside the universe")
        return self._owner[outcome]

    def refine(self, event: Event) -> "Partition":
        """Split every block by ``event`` and its complement, dropping empty pieces."""
        if event.universe != self.universe:
            raise UniverseMismatch("refining by an event from another universe")
        pieces = []
        for b in self.blocks:
            inside = b.bits & event.bits
            outside = b.bits & ~event.bits
            if inside:
                pieces.append(Event(self.universe, inside))
            if outside:
                pieces.append(Event(self.universe, outside))
        return Partition.from_blocks(self.universe, pieces)


def generate_atoms(events: Sequence[Event], universe: Universe | None = None) -> Partition:
    """Atoms of the algebra generated by ``events``.

    Starts from the trivial partition and refines by each event in turn.
    ``universe`` is needed only when ``events`` is empty.
    """
    events = list(events)
    universe = _same_universe(events, universe)
    atoms = Partition.trivial(universe)
    for e in events:
        atoms = atoms.refine(e)
    return atoms


def algebra_contains(atoms: Partition, event: Event) -> bool:
    """True iff ``event`` is a union of blocks of ``atoms``."""
    if event.universe != atoms.universe:
        raise UniverseMismatch("event and partition come from different universes")
    bits = event.bits
    for b in atoms.blocks:
        common = b.bits & bits
        if common and common != b.bits:
            return False
    return True


class TruthValue(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNCERTAIN = "Uncertain"

    def __str__(self) -> str:
        return self.value


def truth(a: Event, b: Event) -> TruthValue:
    """Truth value of ``a`` given that ``b`` is known to hold.

    ``b`` must be nonempty: for the impossible event both the "contained"
    and the "disjoint" cases apply at once.
    """
    a._check(b)
    if not b.bits:
        raise EmptyCondition("truth value given the empty event is undefined")
    if b.bits & ~a.bits == 0:
        return TruthValue.TRUE
    if a.bits & b.bits == 0:
        return TruthValue.FALSE
    return TruthValue.UNCERTAIN
