import math
import random
from fractions import Fraction as F

import pytest

from causalspace.belief import (
    HypothesisSet,
    bayes_posterior,
    belief,
    belief_do,
    expected_log_posterior,
    mass,
    posterior_log_decomposition,
    sequential_posterior,
)
from causalspace.causal import Literal, build_causal_space, intervene, validate_primitive_sequence
from causalspace.errors import (
    EmptyCondition,
    EventNotMeasurable,
    InvalidPartition,
    UndeterminedConditional,
    ZeroEvidence,
)
from causalspace.events import TruthValue, Universe, truth
from causalspace.oracle import oracle_belief, oracle_joint

from spaces import corpus, measurable_events, random_coarsening, unions

E1, E2 = Literal(1), Literal(2)


class TestBelief:
    def test_rx_values(self, rx):
        space, e1, e2 = rx
        assert belief(space, e1, e2) == F(4, 7)
        assert belief(space, e1) == F(1, 2)
        assert belief(space, e1, e1 & e2) == 1

    def test_zero_mass_path_event(self, rz):
        space, e1, e2 = rz
        assert belief(space, e1) == 0
        assert belief(space, e2, e1) == F(1, 3)
        assert belief(space, ~e2, e1) == F(2, 3)

    def test_truth_resolved_zero_mass_condition(self, rz):
        space, e1, _ = rz
        assert belief(space, e1, space.universe.event([0])) == 1
        assert belief(space, ~e1, space.universe.event([1])) == 0

    def test_zero_mass_union_of_leaves(self):
        u = Universe(4)
        seq = validate_primitive_sequence(u, [u.event([0, 1]), u.event([0, 2])])
        s = build_causal_space(seq, [(1, 0, F(1, 2)), (2, 0, 0), (2, 1, 1)])
        # {0} and {3} both have mass 0 and sit under different level-1 atoms
        with pytest.raises(UndeterminedConditional):
            belief(s, u.event([0]), u.event([0, 3]))

    def test_errors(self, rx):
        space, e1, _ = rx
        with pytest.raises(EmptyCondition):
            belief(space, e1, space.universe.empty)
        u = Universe(4)
        seq = validate_primitive_sequence(u, [u.event([0, 1])])
        coarse = build_causal_space(seq, [(1, 0, F(1, 2))])
        with pytest.raises(EventNotMeasurable):
            belief(coarse, u.event([0]))

    @pytest.mark.parametrize("seed", range(4))
    def test_truth_consistency(self, seed):
        for space in corpus(200 + seed, 15, max_atoms=6):
            events = measurable_events(space)
            conditions = [b for b in events if b] + [
                a for lvl in space.atoms for a in lvl
            ]
            for b in conditions:
                for a in events:
                    t = truth(a, b)
                    if t is TruthValue.UNCERTAIN:
                        continue
                    assert belief(space, a, b) == (1 if t is TruthValue.TRUE else 0)

    @pytest.mark.parametrize("seed", range(4))
    def test_zero_mass_paths_are_distributions(self, seed):
        for space in corpus(300 + seed, 20, zero_one=0.4):
            events = measurable_events(space) if len(space.finest) <= 6 else list(space.finest)
            for level in space.atoms:
                for b in level:
                    if mass(space, b):
                        continue
                    assert belief(space, b, b) == 1
                    for a in events:
                        assert belief(space, a, b) + belief(space, ~a, b) == 1
                        assert 0 <= belief(space, a, b) <= 1


class TestBeliefDo:
    def test_rx(self, rx):
        space, e1, e2 = rx
        assert belief_do(space, [E2], e1) == F(1, 2)
        assert belief_do(space, [E1], e1) == 1
        assert belief_do(space, [], e1, e2) == belief(space, e1, e2)

    def test_given_narrows_the_condition(self, rx):
        space, e1, e2 = rx
        u = space.universe
        # after do(E1): w' = (1/3, 2/3, 0, 0)
        assert belief_do(space, [E1], e2, u.event([0, 1, 2])) == F(1, 3)

    def test_observation_vs_intervention_gap(self, rx):
        space, e1, e2 = rx
        assert belief(space, e1, e2) == F(4, 7)
        assert belief_do(space, [E2], e1) == F(1, 2)

    def test_matches_oracle_on_intervened_space(self):
        rng = random.Random(3)
        for space in corpus(51, 30):
            n = rng.randint(1, space.depth)
            lit = Literal(n, rng.random() < 0.5)
            after = intervene(space, lit)
            target = space.sequence.event(lit)
            if not mass(after, target):
                continue
            joint = oracle_joint(after)
            for a in space.finest:
                assert belief_do(space, [lit], a) == oracle_belief(after, a, target, joint)

    def test_certainty_after_intervention(self):
        for space in corpus(61, 40):
            for n in range(1, space.depth + 1):
                if len(space.sequence.uncertain(n)) == len(space.atoms[n - 1]):
                    after = intervene(space, Literal(n))
                    assert belief(after, space.sequence.events[n - 1]) == 1

    def test_past_is_unchanged(self):
        for space in corpus(71, 40, max_atoms=6):
            for n in range(1, space.depth + 1):
                for lit in (Literal(n), Literal(n, False)):
                    after = intervene(space, lit)
                    for c in unions(space.atoms[n - 1]):
                        assert belief(after, c) == belief(space, c)

    def test_past_unchanged_given_target_when_target_reachable_everywhere(self):
        # belief'(C | A) = belief(C) holds when every positive-mass atom of the
        # previous level can still reach A. Atoms disjoint from A drop out.
        checked = 0
        for space in corpus(81, 60, max_atoms=6):
            for n in range(1, space.depth + 1):
                for lit in (Literal(n), Literal(n, False)):
                    a = space.sequence.event(lit)
                    prev = space.atoms[n - 1]
                    reachable = all(
                        not b.isdisjoint(a) for b in prev if mass(space, b)
                    )
                    after = intervene(space, lit)
                    if not reachable or not mass(after, a):
                        continue
                    checked += 1
                    for c in unions(prev):
                        assert belief(after, c, a) == belief(space, c)
        assert checked > 50

    def test_counterexample_when_target_unreachable(self):
        u = Universe(4)
        e1, e2 = u.event([0, 1]), u.event([0])
        s = build_causal_space(validate_primitive_sequence(u, [e1, e2]), [(1, 0, F(1, 2)), (2, 0, F(1, 3))])
        # choosing E2 is only possible inside E1, so it reveals E1
        assert belief_do(s, [Literal(2)], e1) == 1
        assert belief(s, e1) == F(1, 2)


def _random_hyps(rng, space):
    return random_coarsening(rng, space.finest)


class TestBayes:
    def test_rx(self, rx):
        space, e1, e2 = rx
        post = bayes_posterior(space, HypothesisSet((e1, ~e1)), e2)
        assert post.values == (F(4, 7), F(3, 7))

    def test_omega_returns_prior(self, rx):
        space, e1, _ = rx
        post = bayes_posterior(space, [e1, ~e1], space.universe.full)
        assert post.values == (belief(space, e1), belief(space, ~e1))

    def test_data_inside_first_hypothesis(self, rx):
        space, e1, e2 = rx
        assert bayes_posterior(space, [e1, ~e1], e1 & e2).values == (1, 0)

    def test_errors(self, rz):
        space, e1, e2 = rz
        with pytest.raises(ZeroEvidence):
            bayes_posterior(space, [e2, ~e2], e1)
        with pytest.raises(InvalidPartition):
            bayes_posterior(space, [e1, e2], e2)
        with pytest.raises(InvalidPartition):
            bayes_posterior(space, [e1], e2)

    def test_sequential_examples(self, rx):
        space, e1, e2 = rx
        hyps = [e1, ~e1]
        assert sequential_posterior(space, hyps, [e2]) == bayes_posterior(space, hyps, e2)
        assert sequential_posterior(space, hyps, [e2, e2]).values == (F(4, 7), F(3, 7))

    def test_sequential_zero_evidence_step(self, rx):
        space, e1, e2 = rx
        with pytest.raises(ZeroEvidence, match="observation 2"):
            sequential_posterior(space, [e1, ~e1], [e2, ~e2])

    def test_sequential_equals_batch_on_random_spaces(self):
        rng = random.Random(11)
        for space in corpus(91, 40, max_atoms=8):
            hyps = _random_hyps(rng, space)
            events = measurable_events(space)
            data = [rng.choice(events) for _ in range(rng.randint(1, 3))]
            both = space.universe.full
            for d in data:
                both = both & d
            if not mass(space, both):
                continue
            assert sequential_posterior(space, hyps, data) == bayes_posterior(space, hyps, both)

    def test_more_data_never_adds_mass(self):
        rng = random.Random(12)
        for space in corpus(92, 40, max_atoms=8):
            events = measurable_events(space)
            d, d2 = rng.choice(events), rng.choice(events)
            assert mass(space, d & d2) <= mass(space, d)


class TestDiagnostics:
    def test_rx_decomposition(self, rx):
        space, e1, e2 = rx
        report = posterior_log_decomposition(space, [e1, ~e1], [e2, ~e2], 0)
        # belief(E2|E1) = 1/3, belief(E1) = 1/2, belief(E2) = 7/24
        assert report.log_likelihood[0] == pytest.approx(math.log(1 / 3), abs=1e-15)
        assert report.log_prior[0] == pytest.approx(math.log(1 / 2), abs=1e-15)
        assert report.log_evidence == pytest.approx(math.log(7 / 24), abs=1e-15)
        assert abs(report.log_posterior[0] - math.log(4 / 7)) < 1e-12
        assert abs(report.log_posterior[1] - math.log(3 / 7)) < 1e-12

    def test_zero_likelihood_is_minus_infinity(self, rx):
        space, e1, e2 = rx
        report = posterior_log_decomposition(space, [e1, ~e1], [e1, ~e1], 0)
        assert report.log_likelihood[1] == -math.inf
        assert report.log_posterior[1] == -math.inf

    def test_zero_prior(self, rz):
        space, e1, e2 = rz
        report = posterior_log_decomposition(space, [e1, ~e1], [e2, ~e2], 0)
        assert report.log_prior[0] == -math.inf
        assert report.log_likelihood[0] == pytest.approx(math.log(1 / 3))
        assert report.log_posterior[0] == -math.inf

    def test_index_errors(self, rx):
        space, e1, e2 = rx
        with pytest.raises(IndexError):
            posterior_log_decomposition(space, [e1, ~e1], [e2, ~e2], 2)
        with pytest.raises(IndexError):
            expected_log_posterior(space, [e1, ~e1], [e2, ~e2], -1)

    def test_expected_single_cell(self, rx):
        space, e1, _ = rx
        report = expected_log_posterior(space, [e1, ~e1], [space.universe.full], 0)
        assert report.log_likelihood == (0.0, 0.0)
        assert report.expected

    def test_expected_rx_finest_cells(self, rx):
        space, e1, _ = rx
        report = expected_log_posterior(space, [e1, ~e1], list(space.finest), 0)
        l1, l2 = report.log_likelihood
        # true hypothesis E1 puts weight (1/3, 2/3) on {0},{1}; E1^c gives those zero
        assert l1 == pytest.approx(F(1, 3) * math.log(1 / 3) + F(2, 3) * math.log(2 / 3))
        assert l2 == -math.inf
        assert l1 >= l2

    def test_tiny_probabilities_do_not_underflow(self):
        u = Universe(2)
        s = build_causal_space(validate_primitive_sequence(u, [u.event([0])]), [(1, 0, F(1, 10**400))])
        report = posterior_log_decomposition(s, [u.full], [u.event([0]), u.event([1])], 0)
        assert report.log_evidence == pytest.approx(-400 * math.log(10))
