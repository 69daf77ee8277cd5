import random

import pytest

from normcast import (
    CumulativeSeparation,
    NoCommonElementsError,
    NotFoundError,
    PreferenceMatrix,
    common_elements,
    cumulative_separation,
    get_separation_measure,
)
from support import copy_matrix, make_random_matrix, naive_separation


class TestCommonElements:
    def test_single_overlap(self, example_matrix):
        c = common_elements(example_matrix, "u1", "u2")
        assert c.elements == frozenset({"x1"})

    def test_disjoint_known_sets(self):
        m = PreferenceMatrix()
        m.set("a", "x1", 0.0)
        m.set("b", "x2", 0.0)
        assert common_elements(m, "a", "b").elements == frozenset()

    def test_full_overlap(self):
        m = PreferenceMatrix()
        for x in ["x1", "x2", "x3"]:
            m.set("a", x, 0.5)
            m.set("b", x, -0.5)
        assert common_elements(m, "a", "b").elements == frozenset({"x1", "x2", "x3"})

    def test_symmetric(self, example_matrix):
        ab = common_elements(example_matrix, "u1", "u3")
        ba = common_elements(example_matrix, "u3", "u1")
        assert ab.elements == ba.elements

    def test_unknown_user(self, example_matrix):
        with pytest.raises(NotFoundError):
            common_elements(example_matrix, "u1", "ghost")


class TestCumulativeSeparation:
    def test_agreeing_pair(self, example_matrix):
        assert cumulative_separation(example_matrix, "u1", "u2") == 0.0

    def test_disagreeing_pair(self, example_matrix):
        assert cumulative_separation(example_matrix, "u1", "u3") == 2.0

    def test_fractional_values(self):
        m = PreferenceMatrix()
        m.set("u1", "x1", 0.5)
        m.set("u1", "x3", -1.0)
        m.set("u2", "x1", 0.0)
        m.set("u2", "x2", 1.0)
        m.set("u2", "x3", -1.0)
        assert cumulative_separation(m, "u1", "u2") == 0.5

    def test_restrict_to_subset(self, example_matrix):
        m = example_matrix
        m.set("u1", "x3", 0.0)  # now u1/u3 share x1 and x3
        assert cumulative_separation(m, "u1", "u3", restrict_to={"x3"}) == 1.0
        assert cumulative_separation(m, "u1", "u3") == 3.0

    def test_no_common_elements(self):
        m = PreferenceMatrix()
        m.set("a", "x1", 0.0)
        m.set("b", "x2", 0.0)
        with pytest.raises(NoCommonElementsError):
            cumulative_separation(m, "a", "b")

    def test_empty_restriction(self, example_matrix):
        with pytest.raises(NoCommonElementsError):
            cumulative_separation(example_matrix, "u1", "u2", restrict_to={"x2"})

    def test_unknown_user(self, example_matrix):
        with pytest.raises(NotFoundError):
            cumulative_separation(example_matrix, "ghost", "u1")


class TestRegistry:
    def test_lookup(self):
        assert isinstance(get_separation_measure("cumulative"), CumulativeSeparation)

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown separation measure"):
            get_separation_measure("learned")


def _pairs_with_commons(m, rng, want):
    users = m.users
    pairs = []
    for _ in range(want * 4):
        u1, u2 = rng.sample(users, 2)
        if common_elements(m, u1, u2).elements:
            pairs.append((u1, u2))
        if len(pairs) >= want:
            break
    return pairs


class TestSeparationAxioms:
    """The five defining properties, checked over >= 1000 random sparse pairs."""

    def setup_method(self):
        self.rng = random.Random(20240917)
        self.sep = CumulativeSeparation()

    def collect(self, n_pairs=1000):
        collected = []
        while len(collected) < n_pairs:
            m = make_random_matrix(self.rng, density=0.4)
            for u1, u2 in _pairs_with_commons(m, self.rng, 25):
                collected.append((m, u1, u2))
        return collected

    def test_non_negativity_and_symmetry(self):
        checked = 0
        for m, u1, u2 in self.collect():
            s = self.sep.evaluate(m, u1, u2)
            assert s >= 0.0
            assert s == self.sep.evaluate(m, u2, u1)
            checked += 1
        assert checked >= 1000

    def test_zero_iff_equal_on_commons(self):
        for m, u1, u2 in self.collect():
            commons = common_elements(m, u1, u2).elements
            s = self.sep.evaluate(m, u1, u2)
            all_equal = all(m.get(u1, x) == m.get(u2, x) for x in commons)
            assert (s == 0.0) == all_equal
        # construct a pair equal on commons but different elsewhere
        m = PreferenceMatrix()
        m.set("a", "x1", 0.5)
        m.set("a", "x2", -1.0)
        m.set("b", "x1", 0.5)
        m.set("b", "x3", 1.0)
        assert self.sep.evaluate(m, "a", "b") == 0.0

    def test_locality_outside_commons(self):
        # perturbations must keep C(u1, u2) intact: change the value of an
        # entry the pair does not share, or any entry of a third user
        checked = 0
        for m, u1, u2 in self.collect():
            commons = common_elements(m, u1, u2).elements
            before = self.sep.evaluate(m, u1, u2)
            outside = [
                (u, x)
                for u in (u1, u2)
                for x in m.known_elements(u)
                if x not in commons
            ]
            other_users = [u for u in m.users if u not in (u1, u2)]
            if other_users:
                outside.append((self.rng.choice(other_users), self.rng.choice(m.elements)))
            if not outside:
                continue
            perturbed = copy_matrix(m)
            u, x = self.rng.choice(outside)
            old = perturbed.get(u, x)
            new = self.rng.uniform(-1.0, 1.0)
            if old == new:
                new = -new if new != 0 else 0.5
            perturbed.set(u, x, new)
            assert self.sep.evaluate(perturbed, u1, u2) == before
            checked += 1
        assert checked >= 900

    def test_restricted_triangle_inequality(self):
        checked = 0
        for m, u1, u2 in self.collect():
            commons = common_elements(m, u1, u2).elements
            thirds = [
                u3
                for u3 in m.users
                if u3 not in (u1, u2)
                and all(m.get(u3, x) is not None for x in commons)
            ]
            if not thirds:
                continue
            u3 = self.rng.choice(thirds)
            lhs = self.sep.evaluate(m, u1, u2)
            rhs = self.sep.evaluate(m, u1, u3, restrict_to=commons) + self.sep.evaluate(
                m, u3, u2, restrict_to=commons
            )
            assert lhs <= rhs + 1e-12
            checked += 1
        assert checked >= 200

    def test_matches_direct_summation(self):
        for m, u1, u2 in self.collect(200):
            assert self.sep.evaluate(m, u1, u2) == pytest.approx(
                naive_separation(m, u1, u2), abs=1e-12
            )
