"""
Core Lattice Test Suite
=======================
Directions, orthogonality counts and the signed-permutation action.
"""

import itertools

import pytest

from src.core_lattice import (
    Direction,
    FrequencyPoint,
    Modulus,
    SignedPermutation,
    act_on_direction,
    apply,
    balanced,
    compose,
    direction_set,
    dot_mod,
    identity,
    inverse,
    is_generic_odd,
    iter_points,
    mu,
    mu_array,
    negate,
    require_generic,
    signed_permutation_group,
)
from src.exceptions import InvalidModulus, NonGenericModulus


class TestDirections:

    @pytest.mark.smoke
    def test_direction_set_has_thirteen_members_in_listed_order(self):
        dirs = direction_set()
        assert len(dirs) == 13
        assert dirs[0].components == (1, 0, 0)
        assert dirs[9].components == (1, 1, 1)
        assert [d.index for d in dirs] == list(range(13))

    def test_no_direction_is_the_negative_of_another(self):
        comps = {d.components for d in direction_set()}
        for c in comps:
            assert tuple(-x for x in c) not in comps

    def test_directions_cover_all_nonzero_sign_vectors_up_to_sign(self):
        comps = {d.components for d in direction_set()}
        for v in itertools.product((-1, 0, 1), repeat=3):
            if v != (0, 0, 0):
                assert v in comps or tuple(-x for x in v) in comps

    @pytest.mark.parametrize("bad", [(0, 0, 0), (-1, 0, 0), (2, 0, 0), (0, -1, 1)])
    def test_non_canonical_direction_rejected(self, bad):
        with pytest.raises(ValueError):
            Direction(bad)


class TestModulus:

    @pytest.mark.parametrize("n, expected", [
        (1, False), (2, False), (3, False), (4, False), (5, True), (6, False),
        (7, True), (9, False), (11, True), (15, False), (25, True), (35, True), (49, True),
    ])
    def test_generic_odd_predicate(self, n, expected):
        assert is_generic_odd(n) is expected
        assert Modulus(n).is_generic_odd is expected

    def test_invalid_modulus(self):
        with pytest.raises(InvalidModulus):
            Modulus(0)
        with pytest.raises(InvalidModulus):
            mu((0, 0, 0), -3)

    def test_require_generic_rejects_non_generic(self):
        with pytest.raises(NonGenericModulus):
            require_generic(9)
        assert require_generic(13) == 13


class TestFrequencyPoints:

    def test_points_are_reduced(self):
        assert FrequencyPoint.of((-1, 7, 12), 5) == (4, 2, 2)

    def test_index_round_trip_matches_layout(self):
        n = 4
        for i, p in enumerate(iter_points(n)):
            assert p.index(n) == i
            assert FrequencyPoint.from_index(i, n) == p

    def test_derived_views(self):
        assert negate((1, 0, 4), 5) == (4, 0, 1)
        assert balanced((1, 3, 4), 5) == (1, -2, -1)


class TestOrthogonality:

    @pytest.mark.parametrize("a, u, n, expected", [
        ((0, 0, 0), (1, 1, 1), 5, 0),
        ((1, 2, 3), (1, 1, -1), 7, 0),
        ((1, 0, 0), (1, 0, 0), 5, 1),
        ((4, 4, 4), (1, -1, -1), 5, 1),
    ])
    def test_dot_mod(self, a, u, n, expected):
        assert dot_mod(a, u, n) == expected

    @pytest.mark.smoke
    @pytest.mark.parametrize("a, n, expected", [
        ((0, 0, 0), 5, 13),
        ((0, 0, 1), 7, 4),
        ((1, 1, 2), 5, 2),
        ((1, 2, 3), 7, 1),
        ((1, 1, 1), 7, 3),
    ])
    def test_mu_examples(self, a, n, expected):
        assert mu(a, n) == expected

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 9, 12])
    def test_mu_sum_is_thirteen_n_squared(self, n):
        values = mu_array(n)
        assert values.min() >= 0 and values.max() <= 13
        assert int(values.sum()) == 13 * n * n

    def test_mu_array_agrees_with_scalar_mu(self):
        n = 7
        values = mu_array(n)
        for i, p in enumerate(iter_points(n)):
            assert values[i] == mu(p, n)

    def test_mu_array_slices_concatenate(self):
        n = 6
        full = mu_array(n)
        assert list(mu_array(n, 0, 100)) + list(mu_array(n, 100, n ** 3)) == list(full)


class TestSignedPermutations:

    @pytest.mark.smoke
    def test_group_has_48_distinct_elements_with_identity_first(self):
        group = signed_permutation_group()
        assert len(group) == 48
        assert len(set(group)) == 48
        assert group[0] == identity()

    def test_group_is_closed_under_composition_and_inverse(self):
        group = set(signed_permutation_group())
        for g in group:
            assert inverse(g) in group
            assert compose(g, inverse(g)) == identity()
            for h in group:
                assert compose(g, h) in group

    def test_identity_and_swap_examples(self):
        assert apply(identity(), (1, 2, 3), 5) == (1, 2, 3)
        swap = SignedPermutation((1, 0, 2), (1, 1, 1))
        assert apply(swap, (1, 2, 3), 5) == (2, 1, 3)

    def test_action_is_a_group_action(self):
        n = 7
        group = signed_permutation_group()
        a = (1, 2, 3)
        for g in group[::5]:
            for h in group[::7]:
                assert apply(g @ h, a, n) == apply(g, apply(h, a, n), n)

    def test_every_element_permutes_the_direction_set(self):
        dirs = direction_set()
        for g in signed_permutation_group():
            image = {act_on_direction(g, u) for u in dirs}
            assert image == set(dirs)

    @pytest.mark.regression
    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_mu_is_invariant_under_the_group(self, n):
        group = signed_permutation_group()
        for a in iter_points(n):
            m = mu(a, n)
            assert all(mu(apply(g, a, n), n) == m for g in group)
