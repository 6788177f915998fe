"""Simplex primitives: beliefs, events, conditioning, sampling."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from probdistort import (
    Belief,
    Event,
    Partition,
    StateSpace,
    ZeroProbabilityEvent,
    belief,
    belief_distance,
    condition,
    event_prob,
    point_mass,
    sample_belief,
    uniform_belief,
)

W3 = StateSpace(["w1", "w2", "w3"])


class TestSpacesAndTypes:
    def test_labels_must_be_unique(self):
        with pytest.raises(ValueError):
            StateSpace(["a", "a"])

    def test_empty_space_rejected(self):
        with pytest.raises(ValueError):
            StateSpace([])

    def test_belief_entries_validated(self):
        with pytest.raises(ValueError):
            Belief(W3, np.array([0.5, 0.6, -0.1]))
        with pytest.raises(ValueError):
            Belief(W3, np.array([0.5, 0.4, 0.2]))

    def test_belief_probs_frozen(self):
        p = uniform_belief(W3)
        with pytest.raises(ValueError):
            p.probs[0] = 0.9

    def test_builder_renormalizes_drift(self):
        p = belief(W3, [1.0, 2.0, 1.0])
        assert p.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_event_nonempty(self):
        with pytest.raises(ValueError):
            Event([])

    def test_partition_must_cover_and_be_disjoint(self):
        Partition(W3, [Event([0]), Event([1, 2])])
        with pytest.raises(ValueError):
            Partition(W3, [Event([0]), Event([0, 1, 2])])
        with pytest.raises(ValueError):
            Partition(W3, [Event([0]), Event([1])])

    def test_nontrivial_partition_predicate(self):
        assert Partition(W3, [Event([0]), Event([1, 2])]).is_nontrivial()
        assert not Partition(W3, [Event([0]), Event([1]), Event([2])]).is_nontrivial()
        assert not Partition(W3, [Event([0, 1, 2])]).is_nontrivial()


class TestCondition:
    def test_halves_and_quarters(self):
        p = belief(W3, [0.5, 0.25, 0.25])
        out = condition(p, Event([0, 1]))
        np.testing.assert_allclose(out.probs, [2 / 3, 1 / 3, 0.0], atol=1e-15)

    def test_point_mass_on_its_own_state(self):
        p = point_mass(W3, 0)
        out = condition(p, Event([0]))
        np.testing.assert_array_equal(out.probs, [1.0, 0.0, 0.0])

    def test_sure_event_is_no_op(self):
        p = uniform_belief(W3)
        out = condition(p, Event([0, 1, 2]))
        np.testing.assert_allclose(out.probs, p.probs, atol=1e-15)

    def test_zero_mass_event_raises(self):
        p = point_mass(W3, 0)
        with pytest.raises(ZeroProbabilityEvent):
            condition(p, Event([2]))

    def test_idempotent(self):
        p = belief(W3, [0.7, 0.2, 0.1])
        e = Event([0, 2])
        once = condition(p, e)
        assert belief_distance(condition(once, e), once) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_chain_rule(self, seed):
        """Conditioning on E then on a subset E' equals conditioning on E' directly."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 7))
        space = StateSpace([f"s{i}" for i in range(n)])
        p = belief(space, rng.exponential(size=n))
        e_size = int(rng.integers(2, n + 1))
        e_members = rng.choice(n, size=e_size, replace=False)
        sub_size = int(rng.integers(1, e_size + 1))
        sub_members = rng.choice(e_members, size=sub_size, replace=False)
        e, sub = Event(e_members), Event(sub_members)
        lhs = condition(condition(p, e), sub)
        rhs = condition(p, sub)
        assert belief_distance(lhs, rhs) <= 1e-12


class TestEventProb:
    def test_direct_sum(self):
        assert event_prob(belief(W3, [0.5, 0.25, 0.25]), Event([1, 2])) == pytest.approx(0.5)

    def test_whole_space_is_one(self):
        assert event_prob(uniform_belief(W3), Event([0, 1, 2])) == pytest.approx(1.0)

    def test_zero_mass(self):
        assert event_prob(point_mass(W3, 0), Event([2])) == 0.0


class TestSampleBelief:
    def test_singleton_support_forces_point_mass(self):
        out = sample_belief(W3, Event([1]), seed=0)
        np.testing.assert_array_equal(out.probs, [0.0, 1.0, 0.0])

    def test_full_support_sums_to_one(self):
        out = sample_belief(W3, Event([0, 1, 2]), seed=3)
        assert np.all(out.probs > 0.0)
        assert out.probs.sum() == pytest.approx(1.0, abs=1e-12)

    def test_deterministic_given_seed(self):
        a = sample_belief(W3, Event([0, 2]), seed=42)
        b = sample_belief(W3, Event([0, 2]), seed=42)
        np.testing.assert_array_equal(a.probs, b.probs)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10_000), size=st.integers(1, 3))
    def test_support_is_exact(self, seed, size):
        members = list(range(size))
        out = sample_belief(W3, Event(members), seed=seed)
        assert set(np.flatnonzero(out.probs > 0.0)) == set(members)


class TestBeliefDistance:
    def test_identical(self):
        p = uniform_belief(W3)
        assert belief_distance(p, p) == 0.0

    def test_extreme_points(self):
        space = StateSpace(["a", "b"])
        assert belief_distance(point_mass(space, 0), point_mass(space, 1)) == 1.0

    def test_direct_value(self):
        space = StateSpace(["a", "b"])
        assert belief_distance(belief(space, [0.5, 0.5]), belief(space, [0.6, 0.4])) == pytest.approx(0.1)

    def test_mismatched_spaces_rejected(self):
        with pytest.raises(ValueError):
            belief_distance(uniform_belief(W3), uniform_belief(StateSpace(["a", "b"])))
