"""The belief function induced by a causal space, and queries built on it.

Conditioning on an event ``B`` of positive mass is the mass ratio. For a
zero-mass ``B`` the answer is still determined when the truth function
resolves it, or when ``B`` is a path event (an atom of some level): the
masses below ``B`` are then recomputed with ``B`` as the root of the tree.
Any other zero-mass condition raises :class:`UndeterminedConditional`.

Everything here is exact except the log diagnostics at the bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .causal import ONE, ZERO, CausalSpace, Literal, atom_mass, intervene_composite
from .errors import (
    EmptyCondition,
    EventNotMeasurable,
    InvalidPartition,
    UndeterminedConditional,
    UniverseMismatch,
    ZeroEvidence,
)
from .events import Event, Partition, TruthValue, algebra_contains, truth


def is_measurable(space: CausalSpace, event: Event) -> bool:
    return algebra_contains(space.finest, event)


def _require_measurable(space: CausalSpace, *events: Event) -> None:
    for e in events:
        if e.universe != space.universe:
            raise UniverseMismatch(f"event {e} belongs to another universe")
        if not is_measurable(space, e):
            raise EventNotMeasurable(f"{e} is not a union of atoms {list(space.finest)}")


def mass(space: CausalSpace, event: Event) -> Fraction:
    """Unconditional belief in a measurable ``event``."""
    total = ZERO
    bits = event.bits
    for block, m in zip(space.finest.blocks, space.level_masses[-1]):
        if block.bits & ~bits == 0:
            total += m
    return total


def belief(space: CausalSpace, a: Event, b: Event | None = None) -> Fraction:
    """Degree of belief in ``a`` given ``b`` (default: the whole universe)."""
    if b is None:
        b = space.universe.full
    _require_measurable(space, a, b)
    if not b:
        raise EmptyCondition("cannot condition on the empty event")
    t = truth(a, b)
    if t is TruthValue.TRUE:
        return ONE
    if t is TruthValue.FALSE:
        return ZERO
    mb = mass(space, b)
    if mb:
        return mass(space, a & b) / mb
    root_level = space.sequence.path_level(b)
    if root_level is None:
        raise UndeterminedConditional(
            f"{b} has zero belief and is not an atom of any level; "
            "the causal table does not determine beliefs conditioned on it"
        )
    inside = a & b
    total = ZERO
    for block in space.finest:
        if block.bits & ~inside.bits == 0:
            total += atom_mass(space, block, b, level=space.depth, root_level=root_level)
    return total


def belief_do(
    space: CausalSpace,
    do_literals: Sequence[Literal],
    b: Event,
    given: Event | None = None,
) -> Fraction:
    """Belief in ``b`` after intervening on ``do_literals``, also observing ``given``."""
    target = space.universe.full
    for lit in do_literals:
        target = target & space.sequence.event(lit)
    if given is not None:
        target = target & given
    if not target:
        raise EmptyCondition("intervention and observation together are impossible")
    return belief(intervene_composite(space, do_literals), b, target)


@dataclass(frozen=True)
class HypothesisSet:
    """Mutually exclusive, exhaustive hypotheses in a fixed order."""

    hypotheses: tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))

    def __iter__(self):
        return iter(self.hypotheses)

    def __len__(self):
        return len(self.hypotheses)

    def __getitem__(self, i):
        return self.hypotheses[i]


def _check_partition(space: CausalSpace, cells) -> tuple[Event, ...]:
    if isinstance(cells, (HypothesisSet, Partition)):
        cells = tuple(cells)
    cells = tuple(cells)
    if not cells:
        raise InvalidPartition("a partition needs at least one cell")
    seen = 0
    for c in cells:
        if c.universe != space.universe:
            raise InvalidPartition(f"cell {c} belongs to another universe")
        if not c:
            raise InvalidPartition("partition cells must be nonempty")
        if c.bits & seen:
            raise InvalidPartition(f"cell {c} overlaps an earlier cell")
        if not is_measurable(space, c):
            raise InvalidPartition(f"cell {c} is not measurable")
        seen |= c.bits
    if seen != space.universe.mask:
        raise InvalidPartition("cells do not cover the universe")
    return cells


@dataclass(frozen=True)
class PosteriorVector:
    values: tuple[Fraction, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def bayes_posterior(space: CausalSpace, hyps, d: Event) -> PosteriorVector:
    """Posterior over ``hyps`` after observing ``d``, via prior times likelihood."""
    hyps = _check_partition(space, hyps)
    _require_measurable(space, d)
    if not mass(space, d):
        raise ZeroEvidence(f"observation {d} has zero belief")
    joint = []
    for h in hyps:
        prior = belief(space, h)
        joint.append(prior * belief(space, d, h) if prior else ZERO)
    evidence = sum(joint)
    return PosteriorVector(tuple(j / evidence for j in joint))


def sequential_posterior(space: CausalSpace, hyps, data: Sequence[Event]) -> PosteriorVector:
    """Fold observations in one at a time.

    At step ``t`` the prior is the previous posterior and the likelihood of
    ``D_t`` is conditioned on the hypothesis together with everything seen so
    far.
    """
    hyps = _check_partition(space, hyps)
    _require_measurable(space, *data)
    current = [belief(space, h) for h in hyps]
    seen = space.universe.full
    for t, d in enumerate(data, start=1):
        joint = [
            prior * belief(space, d, h & seen) if prior else ZERO
            for prior, h in zip(current, hyps)
        ]
        evidence = sum(joint)
        if not evidence:
            raise ZeroEvidence(f"observation {t} ({d}) has zero belief given the earlier ones")
        current = [j / evidence for j in joint]
        seen = seen & d
    return PosteriorVector(tuple(current))


# -- log diagnostics --------------------------------------------------------


def _log(p: Fraction) -> float:
    # log of numerator and denominator separately so tiny values never round to 0
    if p == 0:
        return -math.inf
    return math.log(p.numerator) - math.log(p.denominator)


@dataclass(frozen=True)
class DiagnosticsReport:
    """Per-hypothesis log terms in nats.

    For a single observation ``log_likelihood[n]`` is ``log belief(X_k|H_n)``
    and ``log_evidence`` is ``log belief(X_k)``. When ``expected`` is set the
    likelihood and evidence terms are averaged over observations drawn under
    the true hypothesis. A likelihood that the space leaves undetermined
    (zero-mass hypothesis that is not a path event) is NaN.
    """

    log_likelihood: tuple[float, ...]
    log_prior: tuple[float, ...]
    log_evidence: float
    expected: bool = False

    @property
    def log_posterior(self) -> tuple[float, ...]:
        out = []
        for l, p in zip(self.log_likelihood, self.log_prior):
            if p == -math.inf or l == -math.inf:
                out.append(-math.inf)
            else:
                out.append(l + p - self.log_evidence)
        return tuple(out)


def _cell(cells: tuple[Event, ...], k: int) -> Event:
    if not 0 <= k < len(cells):
        raise IndexError(f"observation index {k} outside 0..{len(cells) - 1}")
    return cells[k]


def _conditional_or_none(space: CausalSpace, a: Event, b: Event) -> Fraction | None:
    try:
        return belief(space, a, b)
    except UndeterminedConditional:
        return None


def posterior_log_decomposition(space: CausalSpace, hyps, obs_partition, k: int) -> DiagnosticsReport:
    hyps = _check_partition(space, hyps)
    cells = _check_partition(space, obs_partition)
    x = _cell(cells, k)
    evidence = belief(space, x)
    if not evidence:
        raise ZeroEvidence(f"observation {x} has zero belief")
    likelihood = []
    for h in hyps:
        q = _conditional_or_none(space, x, h)
        likelihood.append(math.nan if q is None else _log(q))
    return DiagnosticsReport(
        tuple(likelihood),
        tuple(_log(belief(space, h)) for h in hyps),
        _log(evidence),
    )


def expected_log_posterior(space: CausalSpace, hyps, obs_partition, true_index: int) -> DiagnosticsReport:
    """Log terms averaged over observations generated under ``hyps[true_index]``.

    Uses ``0 * log 0 = 0``. A hypothesis that gives zero belief to a cell the
    true hypothesis can produce gets ``-inf``.
    """
    hyps = _check_partition(space, hyps)
    cells = _check_partition(space, obs_partition)
    if not 0 <= true_index < len(hyps):
        raise IndexError(f"hypothesis index {true_index} outside 0..{len(hyps) - 1}")
    weights = [belief(space, x, hyps[true_index]) for x in cells]

    expected = []
    for h in hyps:
        terms = []
        for w, x in zip(weights, cells):
            if not w:
                continue
            q = _conditional_or_none(space, x, h)
            if q is None:
                terms = [math.nan]
                break
            terms.append(float(w) * _log(q) if q else -math.inf)
        expected.append(-math.inf if -math.inf in terms else math.fsum(terms))

    c_terms = [float(w) * _log(belief(space, x)) for w, x in zip(weights, cells) if w]
    evidence = -math.inf if -math.inf in c_terms else math.fsum(c_terms)
    return DiagnosticsReport(
        tuple(expected),
        tuple(_log(belief(space, h)) for h in hyps),
        evidence,
        expected=True,
    )

