"""Boolean-lattice set families: masses, chains and extremal searches."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowposet import (
    BadParams,
    CapExceeded,
    PreconditionViolated,
    SetFamily,
    antichain,
    are_isomorphic,
    chain,
    check_klym,
    check_lubm,
    check_stab,
    complete_multilevel,
    family_from_text,
    family_poset,
    family_to_text,
    greedy_pattern_free_family,
    harp,
    is_complete_multipartite,
    is_k_sperner,
    iter_antichain_families,
    la_rainbow_star,
    la_star,
    lubell_mass,
    max_mass_pattern_free_with_extremes,
    middle_layers,
    minmax_partition,
    organ,
    rainbow_free_layer_check,
    sigma,
    vee,
)

b4_families = st.builds(
    lambda masks: SetFamily.from_masks(4, masks),
    st.sets(st.integers(min_value=0, max_value=15), max_size=16),
)


class TestBasics:
    def test_family_poset_bridge(self):
        assert are_isomorphic(family_poset(middle_layers(4, 1)), antichain(6))
        assert are_isomorphic(
            family_poset(SetFamily.from_sets(3, [[], [1], [1, 2]])), chain(3)
        )
        assert are_isomorphic(
            family_poset(SetFamily.from_sets(3, [[], [1], [2]])), vee()
        )

    def test_masses(self):
        assert lubell_mass(middle_layers(5, 1)) == 1
        assert lubell_mass(SetFamily.from_masks(2, range(4))) == 3
        tight = SetFamily.from_sets(
            4, [[], [1], [2], [1, 2], [1, 2, 3], [1, 2, 4], [1, 2, 3, 4]]
        )
        assert lubell_mass(tight) == Fraction(19, 6)

    def test_sigma(self):
        assert sigma(4, 1) == 6
        assert sigma(5, 2) == 20
        for n in range(1, 8):
            assert sigma(n, n + 1) == 2**n
        with pytest.raises(BadParams):
            sigma(4, 6)

    def test_distinctness_enforced(self):
        with pytest.raises(BadParams):
            SetFamily(3, (1, 1))


class TestSperner:
    def test_k_sperner(self):
        assert is_k_sperner(middle_layers(5, 2), 2)
        ch = SetFamily.from_sets(4, [[], [1], [1, 2]])
        assert not is_k_sperner(ch, 2)
        assert is_k_sperner(ch, 3)

    def test_klym(self):
        assert check_klym(middle_layers(5, 2), 2)
        for f in iter_antichain_families(3):
            assert check_klym(f, 1)

    def test_mass_at_most_height_exhaustive_b4(self):
        # every family of the 4-cube: mass bounded by its longest chain
        from fractions import Fraction
        from math import comb

        weight = [Fraction(1, comb(4, m.bit_count())) for m in range(16)]
        from rainbowposet.families import family_height

        for bits in range(1 << 16):
            masks = []
            rest = bits
            while rest:
                low = rest & -rest
                masks.append(low.bit_length() - 1)
                rest ^= low
            fam = SetFamily(4, tuple(masks))
            assert sum((weight[m] for m in masks), Fraction(0)) <= family_height(fam)

    def test_lubm(self):
        full = middle_layers(4, 1)
        assert len(full) == lubell_mass(full) * 6
        assert check_lubm(SetFamily.from_masks(4, [0]))
        rng = random.Random(2)
        for _ in range(1000):
            f = SetFamily.from_masks(6, rng.sample(range(64), rng.randrange(0, 20)))
            assert check_lubm(f)

    def test_stab_equality_case(self):
        f = SetFamily.from_masks(4, [0])
        assert check_stab(f, 1, 0)
        assert sigma(4, 1) - Fraction(6, 1) + 1 == 1

    def test_stab_preconditions(self):
        tall = SetFamily.from_sets(5, [[1], [1, 2], [1, 2, 3]])
        with pytest.raises(PreconditionViolated):
            check_stab(tall, 1, 1)
        with pytest.raises(PreconditionViolated):
            check_stab(SetFamily.from_masks(4, [0]), 1, 2)

    def test_stab_sampled(self):
        rng = random.Random(9)
        done = 0
        while done < 1000:
            masks = rng.sample(range(64), rng.randrange(1, 25))
            f = SetFamily.from_masks(6, masks)
            if not is_k_sperner(f, 2):
                continue
            small = [m.bit_count() for m in masks if m.bit_count() < 3]
            if not small:
                continue
            assert check_stab(f, 2, small[0])
            done += 1


class TestMultipartite:
    def test_examples(self):
        assert is_complete_multipartite(middle_layers(4, 1))
        assert is_complete_multipartite(
            SetFamily.from_sets(3, [[], [1], [2], [1, 2, 3]])
        )
        assert not is_complete_multipartite(
            SetFamily.from_sets(3, [[3], [1], [1, 2]])
        )

    @settings(max_examples=120, deadline=None)
    @given(b4_families)
    def test_detections_cross_check(self, f):
        is_complete_multipartite(f)  # raises if the two detections disagree


class TestMinMax:
    def test_antichain_all_leftover(self):
        rep = minmax_partition(middle_layers(4, 1))
        assert not rep.classes
        assert rep.leftover_count == 24

    def test_extremes_single_class(self):
        f = SetFamily.from_masks(4, [0, 15])
        rep = minmax_partition(f)
        assert set(rep.classes) == {(0, 15)}
        assert rep.classes[(0, 15)] == (24, 48)
        assert rep.leftover_count == 0

    def test_identity_random_b5(self):
        rng = random.Random(1)
        for _ in range(100):
            f = SetFamily.from_masks(5, rng.sample(range(32), rng.randrange(0, 16)))
            assert minmax_partition(f).identity_holds

    @settings(max_examples=80, deadline=None)
    @given(b4_families)
    def test_identity_random_b4(self, f):
        assert minmax_partition(f).identity_holds


class TestExtremalSearches:
    def test_la_star_examples(self):
        assert la_star(3, [chain(2)]).value == 3
        assert la_star(4, [chain(3)]).value == sigma(4, 2) == 10
        assert la_star(3, [organ(2)]).value == 5

    def test_la_star_witness_is_free_and_lex_least(self):
        res = la_star(3, [chain(2)])
        assert res.witness.sets == (1, 2, 4)

    def test_la_star_cap(self):
        with pytest.raises(CapExceeded):
            la_star(5, [chain(2)])

    def test_la_star_bracket(self):
        from rainbowposet import la_star_bracket

        lo, hi = la_star_bracket(4, [chain(3)])
        assert lo == hi == 10
        lo, hi = la_star_bracket(5, [chain(2)], node_budget=300_000)
        assert lo <= 10 <= hi  # the one-layer maximum
        tiny_lo, tiny_hi = la_star_bracket(4, [chain(3)], node_budget=40)
        assert tiny_lo <= 10 <= tiny_hi

    def test_lar_star_examples(self):
        assert la_rainbow_star(3, antichain(2)).value == 5 == sigma(3, 1) + 2
        assert la_rainbow_star(2, chain(2)).value == 2
        res = la_rainbow_star(4, antichain(2))
        assert res.value == sigma(4, 1) + 2 == 8
        from rainbowposet import has_rainbow_copy, is_proper

        p = family_poset(res.witness)
        assert is_proper(p, res.coloring)
        assert not has_rainbow_copy(p, res.coloring, antichain(2))

    def test_mass_maximum_with_extremes(self):
        best, witness = max_mass_pattern_free_with_extremes(4, harp(2))
        assert best == Fraction(19, 6)
        assert 0 in witness.sets and 15 in witness.sets

    def test_greedy_families_are_pattern_free(self):
        from rainbowposet import contains_induced

        rng = random.Random(0)
        for _ in range(20):
            fam = greedy_pattern_free_family(4, harp(2), rng)
            assert not contains_induced(family_poset(fam), harp(2))


class TestLayers:
    def test_middle_layers(self):
        assert middle_layers(4, 1).sets == tuple(
            m for m in range(16) if m.bit_count() == 2
        )
        assert len(middle_layers(6, 2)) == sigma(6, 2)
        with_extremes = middle_layers(6, 2, include_extremes=True)
        assert 0 in with_extremes.sets and 63 in with_extremes.sets

    def test_rainbow_free_checks(self):
        assert rainbow_free_layer_check(4, 1, chain(2))
        assert rainbow_free_layer_check(6, 2, antichain(3), include_extremes=True)
        assert rainbow_free_layer_check(6, 3, antichain(4), include_extremes=True)
        assert rainbow_free_layer_check(6, 4, complete_multilevel([2, 2]))
        assert not rainbow_free_layer_check(4, 2, chain(2))


class TestTextFormat:
    def test_round_trip(self):
        fam = SetFamily.from_sets(4, [[], [1, 3], [1, 2, 3, 4]])
        back = family_from_text(family_to_text(fam))
        assert back == fam

    def test_bad_element(self):
        with pytest.raises(BadParams):
            family_from_text("family n=3\n5\n")
