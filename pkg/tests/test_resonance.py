import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from remkdv.resonance import (
    MED_RATIO,
    TripleClass,
    classify,
    d1_triples,
    d2_triples_medcut,
    dyadic_shadow,
    enumerate_D1,
    enumerate_D1_M,
    enumerate_D2,
    enumerate_gamma3,
    omega3,
    omega3_factored,
    omega5,
    omega7,
    pair_sums,
)

WIDE = st.integers(min_value=-(2 ** 20), max_value=2 ** 20)


def _brute_d_sets(k, bound):
    """All D1 and D2 triples of Gamma^3(k) with |k_i| <= bound, by direct scan."""
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    K1, K2 = np.meshgrid(r, r, indexing="ij")
    K3 = k - K1 - K2
    ok = np.abs(K3) <= bound
    rows = np.stack([K1[ok], K2[ok], K3[ok]], axis=1)
    m = np.abs(np.stack([rows[:, 1] + rows[:, 2],
                         rows[:, 0] + rows[:, 2],
                         rows[:, 0] + rows[:, 1]], axis=1))
    m.sort(axis=1)
    in_d = m[:, 0] >= 1
    d1 = in_d & (m[:, 1] <= MED_RATIO * abs(k))
    d2 = in_d & ~d1
    return rows[d1], rows[d2]


def _rowset(arr):
    return set(map(tuple, np.asarray(arr, dtype=np.int64).reshape(-1, 3).tolist()))


class TestOmega:
    def test_known_value(self):
        assert omega3(1, 2, 3) == -180
        assert omega3_factored(1, 2, 3) == -180

    def test_zero_iff_pair_vanishes(self):
        assert omega3(1, -1, 5) == 0
        assert omega3(4, 4, -4) == 0
        assert omega3(1, 1, 1) != 0

    @given(WIDE, WIDE, WIDE)
    @settings(max_examples=300, deadline=None)
    def test_factored_formula_agrees(self, k1, k2, k3):
        # exercised at widths where (k1+k2+k3)^3 overflows int64
        assert omega3(k1, k2, k3) == omega3_factored(k1, k2, k3)

    def test_omega5_domain(self):
        assert omega5((1, -1, 2, -2, 3, -3)) == 0
        assert omega5((1, 2, 3, -1, -2, -3)) == 0
        with pytest.raises(ValueError):
            omega5((1, 2, 3))
        with pytest.raises(ValueError):
            omega5((1, 1, 1, 1, 1, 1))

    def test_omega7_domain(self):
        assert omega7((2, -2, 1, -1, 3, -3, 4, -4)) == 0
        with pytest.raises(ValueError):
            omega7((1, -1, 2, -2, 3, -3))
        with pytest.raises(ValueError):
            omega7((1, 1, 1, 1, 1, 1, 1, 1))

    def test_omega5_splits_into_two_cubics(self):
        # sum-of-cubes additivity across the two halves of a zero-sum 6-tuple
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = rng.integers(-50, 51, size=5)
            ks = list(map(int, a)) + [-int(a.sum())]
            assert omega5(ks) == omega3(*ks[:3]) + omega3(*ks[3:])

    def test_omega7_peels_off_a_cubic(self):
        # collapsing one inner triple to its sum costs exactly one omega3
        rng = np.random.default_rng(1)
        for _ in range(200):
            a = rng.integers(-50, 51, size=7)
            ks = list(map(int, a)) + [-int(a.sum())]
            inner = ks[3:6]
            collapsed = ks[:3] + [sum(inner)] + ks[6:]
            assert omega7(ks) == omega5(collapsed) + omega3(*inner)


class TestShadow:
    def test_values(self):
        assert dyadic_shadow(0) == 0
        assert dyadic_shadow(1) == 1
        assert dyadic_shadow(5) == 4
        assert dyadic_shadow(1024) == 1024
        assert dyadic_shadow(1025) == 1024

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            dyadic_shadow(-1)

    @given(st.integers(min_value=1, max_value=10 ** 9))
    @settings(max_examples=100, deadline=None)
    def test_halfopen_bracket(self, m):
        M = dyadic_shadow(m)
        assert M <= m < 2 * M


class TestClassify:
    def test_generic_triple(self):
        c = classify(1, 2, 3)
        assert (c.m1, c.m2, c.m3) == (5, 4, 3)
        assert c.m_min == 3 and c.m_med == 4
        assert c.a_class == 3
        assert c.d_class == "D2"
        assert c.omega3 == -180
        assert c.k == 6

    def test_resonant_triple(self):
        c = classify(1, -1, 5)
        assert c.m3 == 0
        assert c.d_class == "none"
        assert c.omega3 == 0

    def test_d1_triple(self):
        c = classify(1024, -1023, 1024)
        assert (c.m1, c.m2, c.m3) == (1, 2048, 1)
        assert c.k == 1025
        assert c.m_med == 1
        assert c.d_class == "D1"
        assert c.a_class == 1
        assert c.shadow == 1

    def test_a_priority(self):
        # ties go to the lower index
        c = classify(2, 2, -1)  # m = (1, 1, 4)
        assert (c.m1, c.m2, c.m3) == (1, 1, 4)
        assert c.a_class == 1

    @given(st.integers(-200, 200), st.integers(-200, 200), st.integers(-200, 200))
    @settings(max_examples=300, deadline=None)
    def test_invariants(self, k1, k2, k3):
        c = classify(k1, k2, k3)
        assert isinstance(c, TripleClass)
        assert (c.d_class == "none") == (c.omega3 == 0) == (c.m_min == 0)
        sums = pair_sums(k1, k2, k3)
        assert sorted(sums)[:2] == [c.m_min, c.m_med]
        assert c.a_class == 1 + [c.m1, c.m2, c.m3].index(c.m_min)


class TestEnumerateGamma3:
    def test_small_exhaustive(self):
        triples = list(enumerate_gamma3(0, 1))
        assert len(triples) == 7
        assert (0, 0, 0) in triples
        assert (1, -1, 0) in triples

    def test_infeasible_is_empty(self):
        assert list(enumerate_gamma3(5, 1)) == []

    def test_zero_sum_count_closed_form(self):
        for B in (1, 2, 5, 11):
            assert sum(1 for _ in enumerate_gamma3(0, B)) == 3 * B * B + 3 * B + 1

    def test_stream_is_valid_and_sorted(self):
        out = list(enumerate_gamma3(3, 4))
        assert all(sum(t) == 3 and max(map(abs, t)) <= 4 for t in out)
        assert out == sorted(out)
        assert len(out) == len(set(out))


class TestD1Enumeration:
    def test_empty_below_threshold(self):
        # m_med <= |k|/512 needs |k| >= 512 to admit a nonzero pair sum
        assert d1_triples(511, 2048).shape == (0, 3)
        assert d1_triples(-300, 2048).shape == (0, 3)
        assert d1_triples(512, 2048).shape[0] > 0

    @pytest.mark.parametrize("k", [512, 700, 1025])
    def test_matches_brute_scan(self, k):
        brute_d1, _ = _brute_d_sets(k, 2048)
        fast = d1_triples(k, 2048)
        assert _rowset(fast) == _rowset(brute_d1)
        assert fast.shape[0] == len(_rowset(fast))  # no duplicate rows

    def test_tight_bound_is_respected(self):
        k = 1025
        brute_d1, _ = _brute_d_sets(k, 1026)
        assert _rowset(d1_triples(k, 1026)) == _rowset(brute_d1)

    def test_negation_symmetry(self):
        a = _rowset(d1_triples(1025, 4096))
        b = _rowset(-d1_triples(-1025, 4096))
        assert a == b

    def test_membership(self):
        for row in d1_triples(1025, 4096):
            assert classify(*row).d_class == "D1"

    def test_enumerator_wraps_array(self):
        assert set(enumerate_D1(600, 2048)) == _rowset(d1_triples(600, 2048))

    def test_shadow_partition(self):
        k, bound = 8193, 2 * 8193
        whole = set(enumerate_D1(k, bound))
        parts = {}
        for M in (1, 2, 4, 8, 16, 32):
            parts[M] = set(enumerate_D1_M(k, M, bound))
        union = set().union(*parts.values())
        assert union == whole
        total = sum(len(p) for p in parts.values())
        assert total == len(whole)  # pairwise disjoint
        for M, p in parts.items():
            for t in p:
                assert dyadic_shadow(min(pair_sums(*t))) == M

    def test_structural_bounds_exhaustively(self):
        # every D1 triple with |k_i| <= 2^11: component ratio <= 8 and the
        # large pair sum is >= |k|/8 (it is in fact ~2|k|)
        found = 0
        for k in range(512, 3 * 2048 + 1):
            arr = d1_triples(k, 2048)
            if arr.shape[0] == 0:
                continue
            found += arr.shape[0]
            a = np.abs(arr)
            assert np.all(a.max(axis=1) <= 8 * a.min(axis=1))
            m = np.abs(np.stack([arr[:, 1] + arr[:, 2],
                                 arr[:, 0] + arr[:, 2],
                                 arr[:, 0] + arr[:, 1]], axis=1))
            assert np.all(m.max(axis=1) >= k / 8)
        assert found > 10000


class TestD2Enumeration:
    def test_fast_branch_matches_brute_scan(self):
        k, bound = 1024, 2048
        cut = float(k) ** (2.0 / 3.0)
        _, brute_d2 = _brute_d_sets(k, bound)
        absrows = np.abs(brute_d2)
        med = np.sort(absrows, axis=1)[:, 1]
        want = _rowset(brute_d2[med < cut])
        got = d2_triples_medcut(k, bound, cut)
        assert _rowset(got) == want
        assert got.shape[0] == len(want)

    def test_fallback_matches_brute_scan(self):
        k, bound, cut = 100, 150, 40.0  # 3*ceil(cut) > |k| forces the walk
        _, brute_d2 = _brute_d_sets(k, bound)
        absrows = np.abs(brute_d2)
        med = np.sort(absrows, axis=1)[:, 1]
        want = _rowset(brute_d2[med < cut])
        assert _rowset(d2_triples_medcut(k, bound, cut)) == want

    def test_membership_and_cut(self):
        k = 1024
        cut = float(k) ** (2.0 / 3.0)
        for row in d2_triples_medcut(k, 2048, cut)[:200]:
            c = classify(*row)
            assert c.d_class == "D2"
            assert sorted(abs(int(v)) for v in row)[1] < cut

    def test_enumerate_d2_predicate(self):
        picky = list(enumerate_D2(20, 30, lambda t: t[0] == 5))
        assert picky
        assert all(t[0] == 5 and classify(*t).d_class == "D2" for t in picky)

    def test_pair_median_bounds_components(self):
        # Calibrated regression bound: on D2 with |k_i| <= 2^10 the pair-sum
        # median controls the largest component, max|k_i| <= 513 * m_med, and
        # 513 is sharp: (513,-512,-512) has m_med = 1 > 511/512 so it is D2,
        # with max = 513.  (Sharpness in general: two pair sums of size <= d
        # force max <= |p_big|/2 + d and |k| >= |p_big|/2 - d, and the D2 cut
        # d > |k|/512 then gives max < 514 d.)
        # Violations of 513 would need m_med = 1 (since 513*2 > 1024), i.e.
        # two signed pair sums of size <= 15; scanning that thin region is
        # therefore exhaustive-equivalent for the claim at this bound.
        RATIO_BOUND = 513
        t = 15
        vals = np.concatenate([np.arange(-t, 0), np.arange(1, t + 1)])
        a, b = np.meshgrid(vals, vals, indexing="ij")
        a, b = a.ravel(), b.ravel()
        checked = 0
        worst = 0.0
        for k in range(-3 * 1024, 3 * 1024 + 1):
            if k == 0:
                continue
            cells = [
                np.stack([k - a, k - b, a + b - k], axis=1),
                np.stack([k - a, a + b - k, k - b], axis=1),
                np.stack([a + b - k, k - a, k - b], axis=1),
            ]
            for tri in cells:
                keep = np.all(np.abs(tri) <= 1024, axis=1)
                if not np.any(keep):
                    continue
                tri = tri[keep]
                m = np.abs(np.stack([tri[:, 1] + tri[:, 2],
                                     tri[:, 0] + tri[:, 2],
                                     tri[:, 0] + tri[:, 1]], axis=1))
                m.sort(axis=1)
                d2 = (m[:, 0] >= 1) & (m[:, 1] > MED_RATIO * abs(k)) & (m[:, 1] <= 15)
                if not np.any(d2):
                    continue
                tri, m = tri[d2], m[d2]
                checked += tri.shape[0]
                ratios = np.abs(tri).max(axis=1) / m[:, 1]
                worst = max(worst, float(ratios.max()))
                assert np.all(ratios <= RATIO_BOUND)
        assert checked > 1000
        assert worst == RATIO_BOUND  # the witness is in range, so the bound is sharp
        assert classify(513, -512, -512).d_class == "D2"
