"""Brute-force reference computations for cross-checking the engine.

Nothing here reuses the engine's partitions, mass recursion or belief
code. Events become plain ``frozenset`` objects, atoms are found by grouping
outcomes on their membership signature, and each atom's mass is the product
of cause values along its full history, recomputed from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .causal import CausalSpace
from .errors import EventNotMeasurable, ZeroMassCondition


def _as_set(event) -> frozenset[int]:
    return frozenset(event)


@dataclass(frozen=True)
class JointTable:
    """Mass of each finest atom; atoms are sorted by smallest outcome."""

    atoms: tuple[frozenset, ...]
    masses: dict[int, Fraction]

    def __getitem__(self, index: int) -> Fraction:
        return self.masses[index]

    def __len__(self) -> int:
        return len(self.atoms)

    def values(self) -> list[Fraction]:
        return [self.masses[i] for i in range(len(self.atoms))]


def oracle_joint(space: CausalSpace) -> JointTable:
    omega = range(space.universe.size)
    events = [_as_set(e) for e in space.sequence.events]
    table = {(level, _as_set(atom)): p for level, atom, p in space.entries()}

    groups: dict[tuple[bool, ...], set[int]] = {}
    for w in omega:
        groups.setdefault(tuple(w in e for e in events), set()).add(w)
    atoms = sorted((frozenset(g) for g in groups.values()), key=min)

    masses = {}
    for index, atom in enumerate(atoms):
        w = min(atom)
        product = Fraction(1)
        for j, e in enumerate(events, start=1):
            history = frozenset(
                x for x in omega if all((x in events[i]) == (w in events[i]) for i in range(j - 1))
            )
            here = e if w in e else frozenset(omega) - e
            if history <= here:
                factor = Fraction(1)
            elif not history & here:
                factor = Fraction(0)
            else:
                p = table[(j, history)]
                factor = p if w in e else 1 - p
            product *= factor
        masses[index] = product
    return JointTable(tuple(atoms), masses)


def oracle_belief(space: CausalSpace, a, b, joint: JointTable | None = None) -> Fraction:
    """``mass(a & b) / mass(b)`` summed straight from the joint table."""
    if joint is None:
        joint = oracle_joint(space)
    a, b = _as_set(a), _as_set(b)
    for event in (a, b):
        for atom in joint.atoms:
            if atom & event and not atom <= event:
                raise EventNotMeasurable(f"{sorted(event)} splits atom {sorted(atom)}")
    both = a & b
    num = sum((joint[i] for i, atom in enumerate(joint.atoms) if atom <= both), Fraction(0))
    den = sum((joint[i] for i, atom in enumerate(joint.atoms) if atom <= b), Fraction(0))
    if not den:
        raise ZeroMassCondition(f"{sorted(b)} has zero mass")
    return num / den
