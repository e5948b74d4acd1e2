"""Exact big-integer / rational combinatorics shared by the bound evaluators.

Everything here is exact: binomials as Python ints, probabilities as
Fraction.  Conversion to float happens only at the callers, once per final
quantity.  Polynomials are plain lists of nonnegative ints indexed by
degree, truncated at the highest degree a caller will ever read.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np


def binom(n: int, k: int) -> int:
    """Binomial coefficient with the convention C(n,k)=0 for k>n, k<0, n<0."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def hyge(k: int, n: int, i: int, j: int) -> Fraction:
    """Hypergeometric p.m.f.: k marked among j draws from n items, i marked.

    Zero outside the support max(0, i+j-n) <= k <= min(i, j).
    """
    if k < max(0, i + j - n) or k > min(i, j):
        return Fraction(0)
    return Fraction(binom(i, k) * binom(n - i, j - k), binom(n, j))


# -- truncated integer polynomials -------------------------------------

def poly_mul_trunc(a: list[int], b: list[int], max_degree: int) -> list[int]:
    """Product of coefficient lists, truncated at max_degree."""
    out = [0] * (max_degree + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > max_degree:
            continue
        top = min(len(b) - 1, max_degree - i)
        for j in range(top + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def poly_pow_trunc(base: list[int], c: int, max_degree: int) -> list[int]:
    """base(x)^c truncated at max_degree, by binary exponentiation."""
    if c < 0:
        raise ValueError("exponent must be nonnegative")
    result = [1] + [0] * max_degree
    sq = list(base[: max_degree + 1]) + [0] * max(0, max_degree + 1 - len(base))
    e = c
    while e:
        if e & 1:
            result = poly_mul_trunc(result, sq, max_degree)
        e >>= 1
        if e:
            sq = poly_mul_trunc(sq, sq, max_degree)
    return result


def coef_power(base: list[int], c: int, target_degree: int) -> int:
    """Coefficient of x^target_degree in base(x)^c, computed exactly."""
    if target_degree < 0:
        return 0
    return poly_pow_trunc(base, c, target_degree)[target_degree]


def stopping_set_poly(r: int) -> list[int]:
    """(1+x)^r - 1 - rx: one check node touched at least twice."""
    p = [binom(r, i) for i in range(r + 1)]
    p[0] -= 1
    if r >= 1:
        p[1] -= r
    return p


# -- random-matrix rank machinery ---------------------------------------

def zeta(r: int, m: int, q: int) -> Fraction:
    """Probability that r i.i.d. uniform vectors in GF(q)^m are independent."""
    if r < 0 or m < 0:
        raise ValueError("r and m must be nonnegative")
    out = Fraction(1)
    qm = Fraction(1, q**m) if m else Fraction(1)
    for i in range(r):
        out *= 1 - qm * q**i
    return out


def hbar_prime(k: int, h, q: int) -> Fraction:
    """Probability that a batch of degree k is decodable, given rank law h."""
    probs = getattr(h, "probs", h)
    M = len(probs) - 1
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > M:
        return Fraction(0)
    return sum((zeta(k, s, q) * Fraction(probs[s]) for s in range(k, M + 1)), Fraction(0))


def rank_dist(r: int, d: int, k: int, q: int) -> Fraction:
    """P{rank = r} for a d x k matrix with i.i.d. uniform GF(q) entries."""
    if min(r, d, k) < 0:
        raise ValueError("arguments must be nonnegative")
    if r > min(d, k):
        return Fraction(0)
    return zeta(r, d, q) * zeta(r, k, q) / (zeta(r, r, q) * q ** ((d - r) * (k - r)))


def capacity(h) -> float:
    """Mean rank: the maximum achievable rate in symbols per batch."""
    probs = np.asarray(getattr(h, "probs", h), dtype=float)
    return float(np.arange(len(probs)) @ probs)
