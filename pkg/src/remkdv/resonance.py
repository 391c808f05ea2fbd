"""Exact integer combinatorics of frequency interactions.

Everything here is arithmetic on lattice triples (k1, k2, k3): the cubic
resonance functions, the pair-sum magnitudes m1, m2, m3, the A1/A2/A3
classification, the D / D1 / D2 split of nonresonant triples, and bounded
enumerators for the sets the energy functionals sum over.

All arithmetic is done in Python integers, which are exact at any size; the
vectorized scan helpers use int64 and are only safe for |k_i| well below
2^21 (cubes must fit in 63 bits), which every scan here respects.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

__all__ = [
    "MED_RATIO",
    "omega3",
    "omega3_factored",
    "omega5",
    "omega7",
    "pair_sums",
    "dyadic_shadow",
    "TripleClass",
    "classify",
    "enumerate_gamma3",
    "enumerate_D1",
    "enumerate_D1_M",
    "enumerate_D2",
    "d1_triples",
    "d2_triples_medcut",
]

# D1 cut: m_med <= MED_RATIO * |k1+k2+k3|, with the constant frozen at 2^-9 so
# the enumerators and the classifier stay in exact agreement.
MED_RATIO = 2.0 ** -9


def omega3(k1: int, k2: int, k3: int) -> int:
    """k1^3 + k2^3 + k3^3 - (k1+k2+k3)^3, exactly."""
    s = k1 + k2 + k3
    return k1 ** 3 + k2 ** 3 + k3 ** 3 - s ** 3


def omega3_factored(k1: int, k2: int, k3: int) -> int:
    """-3 (k1+k2)(k1+k3)(k2+k3); equal to omega3 on every triple."""
    return -3 * (k1 + k2) * (k1 + k3) * (k2 + k3)


def omega5(ks) -> int:
    """Sum of cubes of a 6-tuple with zero sum (order-5 resonance function)."""
    ks = [int(k) for k in ks]
    if len(ks) != 6:
        raise ValueError("omega5 takes a 6-tuple")
    if sum(ks) != 0:
        raise ValueError("omega5 is only defined on zero-sum tuples")
    return sum(k ** 3 for k in ks)


def omega7(ks) -> int:
    """Sum of cubes of an 8-tuple with zero sum (order-7 resonance function)."""
    ks = [int(k) for k in ks]
    if len(ks) != 8:
        raise ValueError("omega7 takes an 8-tuple")
    if sum(ks) != 0:
        raise ValueError("omega7 is only defined on zero-sum tuples")
    return sum(k ** 3 for k in ks)


def pair_sums(k1: int, k2: int, k3: int) -> tuple[int, int, int]:
    """(m1, m2, m3) = (|k2+k3|, |k1+k3|, |k1+k2|)."""
    return abs(k2 + k3), abs(k1 + k3), abs(k1 + k2)


def dyadic_shadow(m: int) -> int:
    """Largest power of two <= m (0 for m = 0), so m lies in [M, 2M)."""
    if m < 0:
        raise ValueError("dyadic_shadow takes a nonnegative integer")
    if m == 0:
        return 0
    return 1 << (m.bit_length() - 1)


@dataclass(frozen=True)
class TripleClass:
    """Full classification record for one lattice triple."""

    triple: tuple[int, int, int]
    k: int
    m1: int
    m2: int
    m3: int
    m_min: int
    m_med: int
    omega3: int
    a_class: int        # 1, 2 or 3
    d_class: str        # "none", "D1" or "D2"

    @property
    def shadow(self) -> int:
        return dyadic_shadow(self.m_min)


def classify(k1: int, k2: int, k3: int) -> TripleClass:
    """Classify a triple: A_j by priority (A1 first, then A2), D1/D2 within D.

    D is the set where no pair sums to zero; within D, D1 holds when
    m_med <= MED_RATIO * |k1+k2+k3| and D2 is the rest.
    """
    k1, k2, k3 = int(k1), int(k2), int(k3)
    k = k1 + k2 + k3
    m1, m2, m3 = pair_sums(k1, k2, k3)
    srt = sorted((m1, m2, m3))
    m_min, m_med = srt[0], srt[1]
    if m1 == m_min:
        a_class = 1
    elif m2 == m_min:
        a_class = 2
    else:
        a_class = 3
    if m_min == 0:
        d_class = "none"
    elif m_med <= MED_RATIO * abs(k):
        d_class = "D1"
    else:
        d_class = "D2"
    return TripleClass((k1, k2, k3), k, m1, m2, m3, m_min, m_med,
                       omega3(k1, k2, k3), a_class, d_class)


def enumerate_gamma3(k: int, bound: int) -> Iterator[tuple[int, int, int]]:
    """All (k1,k2,k3) with k1+k2+k3 = k and |k_i| <= bound, lexicographically.

    Lazy; the stream is empty when bound < |k|/3.
    """
    k = int(k)
    bound = int(bound)
    for k1 in range(-bound, bound + 1):
        lo = max(-bound, k - k1 - bound)
        hi = min(bound, k - k1 + bound)
        for k2 in range(lo, hi + 1):
            yield (k1, k2, k - k1 - k2)


def enumerate_D1(k: int, bound: int) -> Iterator[tuple[int, int, int]]:
    """Triples of D1(k) with |k_i| <= bound (lazy, via the two-small-pair-sums form)."""
    arr = d1_triples(k, bound)
    for row in arr:
        yield (int(row[0]), int(row[1]), int(row[2]))


def enumerate_D1_M(k: int, M: int, bound: int) -> Iterator[tuple[int, int, int]]:
    """The D1(k) stream restricted to dyadic_shadow(m_min) == M.

    The shadows partition D1 over dyadic M (each m_min lies in exactly one
    [M, 2M)), so summing the streams over M recovers D1(k) with no overlap.
    """
    for t in enumerate_D1(k, bound):
        m_min = min(pair_sums(*t))
        if dyadic_shadow(m_min) == M:
            yield t


def enumerate_D2(k: int, bound: int,
                 predicate: Callable[[tuple[int, int, int]], bool] | None = None
                 ) -> Iterator[tuple[int, int, int]]:
    """Triples of D2(k) with |k_i| <= bound, optionally filtered by a predicate.

    Full lattice walk; fine for test scales. The energy code uses the
    vectorized median-cut specialization d2_triples_medcut instead.
    """
    for t in enumerate_gamma3(k, bound):
        if classify(*t).d_class != "D2":
            continue
        if predicate is None or predicate(t):
            yield t


def _d1_threshold(k: int) -> int:
    return int(np.floor(MED_RATIO * abs(k)))


def d1_triples(k: int, bound: int) -> np.ndarray:
    """D1(k) with |k_i| <= bound as an (n, 3) int64 array.

    On D1 exactly two of the three pair sums are small (their sum over all
    three is at least 2|k|), so the set is parametrized by which two indices
    carry the small values and by those values a, b with 1 <= |a|,|b| <= t,
    t = floor(MED_RATIO*|k|). The three branches are disjoint and complete.
    """
    k = int(k)
    t = _d1_threshold(k)
    if t < 1:
        return np.zeros((0, 3), dtype=np.int64)
    vals = np.concatenate([np.arange(-t, 0), np.arange(1, t + 1)])
    a, b = np.meshgrid(vals, vals, indexing="ij")
    a = a.ravel()
    b = b.ravel()
    # p_i = k - k_i are the signed pair sums; branch on which two are small.
    branches = [
        np.stack([k - a, k - b, a + b - k], axis=1),   # p1 = a, p2 = b
        np.stack([k - a, a + b - k, k - b], axis=1),   # p1 = a, p3 = b
        np.stack([a + b - k, k - a, k - b], axis=1),   # p2 = a, p3 = b
    ]
    keep = []
    for tri in branches:
        m = np.abs(np.stack([tri[:, 1] + tri[:, 2],
                             tri[:, 0] + tri[:, 2],
                             tri[:, 0] + tri[:, 1]], axis=1))
        m_sorted = np.sort(m, axis=1)
        ok = (m_sorted[:, 0] >= 1) & (m_sorted[:, 1] <= MED_RATIO * abs(k))
        ok &= np.all(np.abs(tri) <= bound, axis=1)
        keep.append(tri[ok])
    if not keep:
        return np.zeros((0, 3), dtype=np.int64)
    out = np.concatenate(keep, axis=0)
    # The branches are disjoint by construction (the third pair sum is of
    # size ~2|k| and cannot be <= t), so no dedup is needed.
    return out


def d2_triples_medcut(k: int, bound: int, med_cut: float) -> np.ndarray:
    """D2(k) triples with median(|k1|,|k2|,|k3|) < med_cut, |k_i| <= bound.

    Vectorized: a median below med_cut forces exactly two entries below it
    (three is impossible once 3*med_cut <= |k|, which the caller's cuts
    satisfy; when it is possible the full walk is used instead).
    """
    k = int(k)
    c = int(np.ceil(med_cut))
    if 3 * c > abs(k):
        # small-k fallback: exact lattice walk
        rows = [t for t in enumerate_D2(k, bound,
                lambda t: float(np.median(np.abs(t))) < med_cut)]
        return np.asarray(rows, dtype=np.int64).reshape(-1, 3)
    vals = np.arange(-c + 1, c)
    a, b = np.meshgrid(vals, vals, indexing="ij")
    a = a.ravel()
    b = b.ravel()
    third = k - a - b
    branches = [
        np.stack([a, b, third], axis=1),
        np.stack([a, third, b], axis=1),
        np.stack([third, a, b], axis=1),
    ]
    keep = []
    for tri in branches:
        absk = np.abs(tri)
        med = np.sort(absk, axis=1)[:, 1]
        ok = (med < med_cut) & np.all(absk <= bound, axis=1)
        # membership in the right branch: the entry NOT in {a,b} must be the
        # largest, else the same triple appears from another branch
        ok &= np.abs(third) >= c
        m = np.abs(np.stack([tri[:, 1] + tri[:, 2],
                             tri[:, 0] + tri[:, 2],
                             tri[:, 0] + tri[:, 1]], axis=1))
        m_sorted = np.sort(m, axis=1)
        ok &= m_sorted[:, 0] >= 1                       # in D
        ok &= m_sorted[:, 1] > MED_RATIO * abs(k)       # not in D1
        keep.append(tri[ok])
    if not keep:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(keep, axis=0)
