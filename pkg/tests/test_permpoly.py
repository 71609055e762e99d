"""Tests for the generic coupled quadratic maps and exhaustive oracles."""

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vsc.core import PARTNER, MaskRule, VscError, multiplication_layer, CipherState
from vsc.permpoly import (
    GenericVectorMap,
    MapRule,
    apply_map,
    bijectivity_check,
    scaled_round,
    scaled_round_check,
    scaled_round_packed,
)


class TestApplyMap:
    def test_affine_examples(self):
        m = GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=3, m=2)
        assert apply_map(m, (0, 0)) == (0, 0)
        assert apply_map(m, (1, 1)) == (7, 7)

    def test_clear_mask_example(self):
        m = GenericVectorMap(MapRule.CLEAR2_SET1, n=4, m=2)
        assert apply_map(m, (2, 3)) == (10, 5)

    def test_validation(self):
        m = GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=3, m=2)
        with pytest.raises(VscError):
            apply_map(m, (8, 0))
        with pytest.raises(VscError):
            apply_map(m, (0, 0, 0))
        with pytest.raises(VscError):
            GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=0, m=2)
        with pytest.raises(VscError):
            GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=3, m=0)
        with pytest.raises(VscError):
            GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=3, m=2, partner=(0, 0))

    @given(st.integers(2, 8), st.integers(1, 4), st.data())
    @settings(max_examples=100)
    def test_parity_preserved_elementwise(self, n, m, data):
        # each output element has the parity of its input element, so
        # non-all-odd tuples can never map into the all-odd set
        v = tuple(data.draw(st.integers(0, 2**n - 1)) for _ in range(m))
        for rule in MapRule:
            out = apply_map(GenericVectorMap(rule, n, m), v)
            assert all(a % 2 == b % 2 for a, b in zip(v, out))

    def test_cipher_partner_table_matches_multiplication_layer(self):
        rng = random.Random(42)
        vmap_affine = GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n=32, m=8,
                                       partner=PARTNER)
        vmap_clear = GenericVectorMap(MapRule.CLEAR2_SET1, n=32, m=8,
                                      partner=PARTNER)
        for _ in range(10_000):
            s = CipherState(*(rng.getrandbits(32) for _ in range(8)))
            assert apply_map(vmap_affine, tuple(s)) == tuple(
                multiplication_layer(s, MaskRule.AFFINE_4X_PLUS_1))
            assert apply_map(vmap_clear, tuple(s)) == tuple(
                multiplication_layer(s, MaskRule.CLEAR2_SET1))


class TestBijectivityCheck:
    def test_affine_rule_small(self):
        r = bijectivity_check(GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, 3, 2))
        assert r.is_bijection and r.domain_size == 64
        assert r.first_collision is None

    def test_clear_rule_restricted(self):
        r = bijectivity_check(GenericVectorMap(MapRule.CLEAR2_SET1, 3, 2),
                              restrict_non_all_odd=True)
        assert r.is_bijection and r.restricted
        assert r.domain_size == 64 - 16  # 2^(nm) - 2^((n-1)m)

    def test_clear_rule_unrestricted_collides(self):
        vmap = GenericVectorMap(MapRule.CLEAR2_SET1, 3, 2)
        r = bijectivity_check(vmap)
        assert not r.is_bijection
        a, b = r.first_collision
        assert a != b
        assert apply_map(vmap, a) == apply_map(vmap, b)

    def test_first_collision_is_earliest(self):
        # brute-force re-derivation of the lexicographically first event
        vmap = GenericVectorMap(MapRule.CLEAR2_SET1, 3, 2)
        seen = {}
        expected = None
        for v in itertools.product(range(8), repeat=2):
            out = apply_map(vmap, v)
            if out in seen:
                expected = (seen[out], v)
                break
            seen[out] = v
        r = bijectivity_check(vmap)
        assert r.first_collision == expected

    def test_domain_limit(self):
        with pytest.raises(VscError):
            bijectivity_check(GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, 13, 2))

    def test_custom_partner(self):
        # involution partner (swap) on m=2 equals the default cycle; a
        # 4-cycle partner on m=4 must still give a bijection for the
        # affine rule (the proofs only need masks congruent to 1 mod 4)
        r = bijectivity_check(GenericVectorMap(
            MapRule.AFFINE_4X_PLUS_1, 3, 4, partner=(2, 3, 0, 1)))
        assert r.is_bijection

    def test_report_serialization(self):
        r = bijectivity_check(GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, 3, 2))
        d = r.to_dict()
        assert d["is_bijection"] is True and d["domain_size"] == 64
        assert "is_bijection=true" in r.to_text()


class TestDifferencePropagation:
    @given(st.integers(3, 8), st.integers(2, 4), st.data())
    @settings(max_examples=200)
    def test_single_element_difference_structure(self, n, m, data):
        # pairs differing in exactly one element by an odd multiple of 2^s
        # produce outputs whose difference in that element is again an odd
        # multiple of 2^s -- the injectivity engine of the affine rule
        vmap = GenericVectorMap(MapRule.AFFINE_4X_PLUS_1, n, m)
        v = [data.draw(st.integers(0, 2**n - 1)) for _ in range(m)]
        k = data.draw(st.integers(0, m - 1))
        s = data.draw(st.integers(0, n - 1))
        odd = data.draw(st.integers(0, 2**(n - s - 1) - 1)) * 2 + 1
        w = list(v)
        w[k] = (w[k] + odd * 2**s) % 2**n
        out_v = apply_map(vmap, v)
        out_w = apply_map(vmap, w)
        delta = (out_w[k] - out_v[k]) % 2**n
        assert delta != 0
        # 2-adic valuation of the output difference equals s
        assert delta % 2**s == 0 and (delta // 2**s) % 2 == 1


class TestScaledRound:
    def test_zero_fixed_point(self):
        for n in (1, 2, 3):
            assert scaled_round(n, (0,) * 8) == (0,) * 8

    def test_width_validation(self):
        with pytest.raises(VscError):
            scaled_round(4, (0,) * 8)
        with pytest.raises(VscError):
            scaled_round(2, (0,) * 7)
        with pytest.raises(VscError):
            scaled_round(2, (4,) + (0,) * 7)

    def test_scalar_matches_packed(self):
        rng = random.Random(3)
        for n in (1, 2, 3):
            for _ in range(200):
                state = tuple(rng.getrandbits(n) for _ in range(8))
                packed = 0
                for w in state:
                    packed = (packed << n) | w
                out = scaled_round_packed(n, np.array([packed], dtype=np.uint64))
                want = 0
                for w in scaled_round(n, state):
                    want = (want << n) | w
                assert int(out[0]) == want

    def test_exhaustive_n2(self):
        r = scaled_round_check(2)
        assert r.is_bijection and r.domain_size == 1 << 16

    def test_structure_mirrors_full_round(self):
        # same mask rule, partner table and rotation amount as VSC 2.1;
        # at n=3 the top 3 bits of each word behave like a tiny cipher
        out = scaled_round(3, (1,) * 8)
        # multiplication gives 1*(2+4+1)=7 for every word; rotation by 5
        # of the 24-bit all-111 pattern stays all ones
        assert out == (7,) * 8
