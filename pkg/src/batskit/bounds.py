"""Closed-form upper bounds on the BP and ML word error probability of
(LDPC-precoded) BATS code ensembles, with every supporting function.

Numerics follow two rules.  Combinatorial quantities that mix huge
binomials (the extended-stopping-set bounds, the expected weight
enumerator) are evaluated with exact integers/rationals and converted to
double once.  The union-cardinality distribution is propagated as powers
of a substochastic transition matrix, entirely in probability space, so
no alternating sums of large terms ever appear; the alternating closed
form is kept only as a small-size cross-check oracle.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numba
import numpy as np
from scipy.special import gammaln

from batskit import combin
from batskit.code_model import CodeSpec, DegreeDistribution, expected_weight_enumerator
from batskit.combin import binom, hyge, stopping_set_poly

_LOG2 = math.log(2.0)


def log_int(n: int) -> float:
    """Natural log of a positive big integer without float overflow."""
    if n <= 0:
        raise ValueError("need a positive integer")
    bl = n.bit_length()
    if bl <= 900:
        return math.log(float(n))
    shift = bl - 64
    return math.log(float(n >> shift)) + shift * _LOG2


# -- supporting functions (exact) -----------------------------------------

def varphi(d: int, k: int, K: int, Psi: DegreeDistribution) -> Fraction:
    """Probability that a batch has degree d with all neighbors inside a
    fixed k-subset of the K variable nodes."""
    if not 1 <= d <= K:
        raise ValueError("d outside [1, K]")
    return Fraction(Psi.psi[d]) * Fraction(binom(k, d), binom(K, d))


def xi(d: int, k: int, a: int, K: int, h, q: int) -> Fraction:
    """Probability that a degree-d batch meets a fixed a-subset in exactly
    k symbols and is undecodable restricted to them."""
    return (1 - combin.hbar_prime(k, h, q)) * hyge(k, K, a, d)


def phi_conditional(k: int, K: int, Psi: DegreeDistribution) -> np.ndarray:
    """Degree distribution conditioned on all neighbors lying in a fixed
    k-subset; a point mass at degree 0 when no degree fits (k < D_min)."""
    if not 0 <= k <= K:
        raise ValueError("k outside [0, K]")
    out = np.zeros(k + 1)
    if k < Psi.d_min:
        out[0] = 1.0
        return out
    for d in range(1, k + 1):
        out[d] = float(varphi(d, k, K, Psi))
    out /= out.sum()
    return out


def _union_transition(m: int, beta: np.ndarray) -> np.ndarray:
    """(m+1)x(m+1) Markov matrix of the union size: from i covered
    elements, a fresh uniform d-subset lands on j = i + (new elements)."""
    T = np.zeros((m + 1, m + 1))
    for d in range(len(beta)):
        bd = beta[d]
        if bd == 0 or d > m:
            continue
        for i in range(m + 1):
            for k in range(max(0, i + d - m), min(i, d) + 1):
                T[i, i + d - k] += bd * float(hyge(k, m, i, d))
    # row renormalization guard against accumulated rounding
    s = T.sum(axis=1, keepdims=True)
    s[s == 0] = 1.0
    return T / s


def union_cardinality(j: int, m: int, s: int, beta) -> float:
    """P{|S_1 u ... u S_s| = j} for i.i.d. uniform subsets with size law
    beta, via s steps of the transition matrix."""
    beta = np.asarray(beta, dtype=float)
    if not 0 <= j <= m:
        raise ValueError("j outside [0, m]")
    if s < 0:
        raise ValueError("s must be nonnegative")
    T = _union_transition(m, beta)
    v = np.zeros(m + 1)
    v[0] = 1.0
    for _ in range(s):
        v = v @ T
    return float(v[j])


def union_cardinality_closed(j: int, m: int, s: int, beta) -> Fraction:
    """Exact alternating-sum closed form of the union-size law; the
    cross-check oracle for the matrix-power path."""
    bf = [Fraction(b) for b in beta]
    total = Fraction(0)
    for k in range(j + 1):
        lam = sum((bf[d] * Fraction(binom(k, d), binom(m, d)) for d in range(min(len(bf), k + 1))), Fraction(0))
        total += (-1) ** (j - k) * binom(j, k) * lam**s
    return binom(m, j) * total


@lru_cache(maxsize=None)
def _ssp_coef_table(K: int, l: int, r: int) -> tuple:
    """coef{((1+x)^r - 1 - rx)^c, x^{a*l}} for c in [0:Kl/r], a in [0:K]."""
    mL = K * l // r if l else 0
    deg = K * l
    p = stopping_set_poly(r) if l else [1]
    rows = []
    cur = [1] + [0] * deg
    for c in range(mL + 1):
        rows.append(tuple(cur[a * l] for a in range(K + 1)))
        if c < mL:
            cur = combin.poly_mul_trunc(cur, p, deg)
    return tuple(rows)


def hat_p(a: int, a_prime: int, c: int, K: int, l: int, r: int, nu_min: int) -> Fraction:
    """Probability-style weight of one extended-stopping-set constellation:
    a fixed stopping set of size a with c fixed neighboring checks, grown
    by a_prime peelable VNs.  Zero below the expurgation size."""
    if a < nu_min:
        return Fraction(0)
    if l <= 0:
        base = Fraction(1 if c == 0 else 0)
    else:
        coef = _ssp_coef_table(K, l, r)[c][a]
        base = Fraction(coef, binom(K * l, a * l))
    for t in range(1, a_prime + 1):
        num = (
            t
            * (c + t)
            * r
            * binom((K * l // r - a_prime + t - 1) * r - (a + t - 1) * l, l - 1)
            * math.factorial(l)
        )
        den = 1
        for i in range(l):
            den *= K * l - (a + t - 1) * l - i
        if num == 0 or den <= 0:
            return Fraction(0)
        base *= Fraction(num, den)
    return base


def ess_bound_closed(a: int, a_prime: int, K: int, l: int, r: int, nu_min: int) -> float:
    """Closed-form upper bound on the probability that fixed disjoint VN
    sets of sizes (a, a_prime) form an extended stopping set with maximal
    stopping set the a-set, over the expurgated regular ensemble."""
    mL = K * l // r if l else 0
    total = Fraction(0)
    for c in range(mL + 1):
        lhs = binom(mL, c) * hat_p(a, 0, c, K, l, r, nu_min)
        rhs = binom(mL, a_prime + c) * hat_p(a, a_prime, c, K, l, r, nu_min)
        total += min(lhs, rhs)
    return float(min(Fraction(1), total))


@lru_cache(maxsize=None)
def _recursion_coef(r: int, sigma: int, dt: int, target: int) -> int:
    if target < 0:
        return 0
    poly = combin.poly_pow_trunc(_deg_ge1_poly(r), sigma, target)
    poly = combin.poly_mul_trunc(poly, combin.poly_pow_trunc(stopping_set_poly(r), dt, target), target)
    return poly[target]


def _deg_ge1_poly(r: int) -> list[int]:
    # (1+x)^(r-1) - 1: a previously degree-1 check receives >= 1 new edges
    p = [binom(r - 1, i) for i in range(r)]
    p[0] -= 1
    return p


def ess_bound_recursive(a: int, a_prime: int, K: int, l: int, r: int, nu_min: int) -> float:
    """Tighter extended-stopping-set bound by exact big-integer recursion
    over (VNs added, checks of degree >= 2, checks of degree 1)."""
    if l <= 0:
        return 1.0 if a >= nu_min else 0.0
    mL = K * l // r
    lf = math.factorial(l)
    coefs = _ssp_coef_table(K, l, r)
    # A[t][s] for the current v, as exact Fractions
    cur = [[Fraction(0)] * (mL + 1) for _ in range(mL + 1)]
    if a >= nu_min:
        fac = math.factorial(a * l)
        for t in range(mL + 1):
            cur[t][0] = Fraction(coefs[t][a] * fac)
    for v in range(a + 1, a + a_prime + 1):
        nxt = [[Fraction(0)] * (mL + 1) for _ in range(mL + 1)]
        for t in range(mL + 1):
            for s in range(1, mL + 1 - t):
                acc = Fraction(0)
                for ds in range(1, l + 1):
                    for sigma in range(0, l - ds + 1):
                        for dt in range(0, (l - ds - sigma) // 2 + 1):
                            t_prev = t - dt - sigma
                            s_prev = s + sigma - ds
                            if not (0 <= t_prev <= mL and 0 <= s_prev <= mL):
                                continue
                            for tau in range(0, l - ds - sigma - 2 * dt + 1):
                                prev = cur[t_prev][s_prev]
                                if prev == 0:
                                    continue
                                cf = _recursion_coef(r, sigma, dt, l - ds - tau)
                                if cf == 0:
                                    continue
                                free = (t_prev) * r - (v - 1) * l + s_prev
                                acc += (
                                    prev
                                    * (v - a)
                                    * lf
                                    * binom(t + s, dt + ds)
                                    * binom(dt + ds, dt)
                                    * cf
                                    * binom(free, tau)
                                    * binom(s_prev, sigma)
                                    * r**ds
                                    * Fraction(ds, s)
                                )
                nxt[t][s] = acc
        cur = nxt
    v_tot = a + a_prime
    num = Fraction(0)
    for t in range(mL + 1):
        for s in range(mL + 1):
            if cur[t][s]:
                num += binom(mL, t + s) * cur[t][s]
    den = Fraction(binom(K * l, v_tot * l)) * math.factorial(v_tot * l)
    return float(min(Fraction(1), num / den))


# -- L table ---------------------------------------------------------------

@dataclass
class LTable:
    """Pre-generated ess_bound_closed values L(a, j) for a in [1:K],
    j in [0 : (K-1)l/r]."""

    K: int
    l: int
    r: int
    nu_min: int
    values: np.ndarray

    def smax(self, a: int) -> int:
        return (self.K - a) * self.l // self.r if self.l else 0

    def row(self, a: int) -> np.ndarray:
        return self.values[a]


_TABLE_VERSION = 1


def default_cache_dir() -> Path:
    root = os.environ.get("BATSKIT_CACHE") or os.environ.get("XDG_CACHE_HOME")
    base = Path(root) if root else Path.home() / ".cache"
    return base / "batskit"


def _compute_L_table(K: int, l: int, r: int, nu_min: int) -> np.ndarray:
    jmax = (K - 1) * l // r if l else 0
    vals = np.zeros((K + 1, jmax + 1))
    if l == 0:
        for a in range(1, K + 1):
            vals[a, 0] = 1.0 if a >= nu_min else 0.0
        return vals
    mL = K * l // r
    coefs = _ssp_coef_table(K, l, r)
    bin_mL = [binom(mL, c) for c in range(mL + 1)]
    lf = math.factorial(l)
    for a in range(max(1, nu_min), K + 1):
        denom_al = binom(K * l, a * l)
        base = [Fraction(coefs[c][a], denom_al) for c in range(mL + 1)]
        smax_a = (K - a) * l // r
        for j in range(min(smax_a, jmax) + 1):
            # c-independent part of the a'-product; the c-dependent part
            # factors out as j! * (c+j)!/c!
            p2 = Fraction(1)
            for t in range(1, j + 1):
                num = r * binom((mL - j + t - 1) * r - (a + t - 1) * l, l - 1) * lf
                den = 1
                for i in range(l):
                    den *= K * l - (a + t - 1) * l - i
                if num == 0 or den <= 0:
                    p2 = Fraction(0)
                    break
                p2 *= Fraction(num, den)
            p2 *= math.factorial(j)
            total = Fraction(0)
            for c in range(mL + 1):
                if base[c] == 0:
                    continue
                lhs = Fraction(bin_mL[c])
                rising = 1
                for u_ in range(c + 1, c + j + 1):
                    rising *= u_
                rhs = bin_mL[j + c] * p2 * rising if j + c <= mL else Fraction(0)
                total += base[c] * min(lhs, rhs)
            vals[a, j] = float(min(Fraction(1), total))
    return vals


def build_L_table(K: int, l: int, r: int, nu_min: int, cache_dir: Path | str | None = None) -> LTable:
    """Load the L table from the cache directory, or compute and persist it.

    The cache is keyed by (K, l, r, nu_min); entries are stored as hex
    floats so a reload is bit-identical to a recompute."""
    if cache_dir is None:
        cache_dir = default_cache_dir()
    cache_dir = Path(cache_dir)
    path = cache_dir / f"Ltable_v{_TABLE_VERSION}_K{K}_l{l}_r{r}_nu{nu_min}.json"
    if path.exists():
        obj = json.loads(path.read_text())
        vals = np.array([[float.fromhex(x) for x in row] for row in obj["values"]])
        return LTable(K, l, r, nu_min, vals)
    vals = _compute_L_table(K, l, r, nu_min)
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        obj = {
            "version": _TABLE_VERSION,
            "K": K,
            "l": l,
            "r": r,
            "nu_min": nu_min,
            "values": [[float(x).hex() for x in row] for row in vals],
        }
        path.write_text(json.dumps(obj))
    except OSError:
        pass  # cache write failure is non-fatal; recompute next time
    return LTable(K, l, r, nu_min, vals)


# -- BP bound ---------------------------------------------------------------

@dataclass
class BoundReport:
    """Bound value with its per-term breakdown: keys are (a, b) for the BP
    bound and the Hamming weight for the ML bound."""

    value: float
    terms: dict
    clamped: bool

    def total(self) -> float:
        return min(1.0, math.fsum(self.terms.values())) if self.terms else self.value


@numba.njit(cache=True)
def _build_band(m, K, psi_supp, psi_vals, lgam, Wm, band):  # pragma: no cover
    width = band.shape[1]
    for idx in range(psi_supp.shape[0]):
        d = psi_supp[idx]
        if d > m:
            continue
        wd = psi_vals[idx] * math.exp(
            (lgam[m] - lgam[d] - lgam[m - d]) - (lgam[K] - lgam[d] - lgam[K - d])
        ) / Wm
        if wd == 0.0:
            continue
        for i in range(m + 1):
            kmin = i + d - m
            if kmin < 0:
                kmin = 0
            kmax = i if i < d else d
            for k in range(kmin, kmax + 1):
                w = d - k
                if w >= width:
                    continue
                lh = (
                    lgam[i] - lgam[k] - lgam[i - k]
                    + lgam[m - i] - lgam[d - k] - lgam[m - i - d + k]
                    - (lgam[m] - lgam[d] - lgam[m - d])
                )
                band[i, w] += wd * math.exp(lh)


@numba.njit(cache=True)
def _propagate(band, Lrow, smax, m, n, identity):  # pragma: no cover
    """u[s] = sum_j L[j] * (e0 T^s)[m-j] for s = 0..n, with T in banded
    upper-triangular storage T[i, i+w] = band[i, w]."""
    width = band.shape[1]
    v = np.zeros(m + 1)
    v[0] = 1.0
    u = np.zeros(n + 1)
    if identity:
        if m <= smax:
            u[:] = Lrow[m]
        else:
            u[:] = 0.0
        return u
    # renormalize rows so T stays stochastic under rounding
    for i in range(m + 1):
        s0 = 0.0
        for w in range(width):
            s0 += band[i, w]
        if s0 > 0.0:
            for w in range(width):
                band[i, w] /= s0
    for s in range(n + 1):
        acc = 0.0
        for j in range(smax + 1):
            acc += Lrow[j] * v[m - j]
        u[s] = acc
        if s < n:
            out = np.zeros(m + 1)
            for i in range(m + 1):
                vi = v[i]
                if vi == 0.0:
                    continue
                top = width if width <= m + 1 - i else m + 1 - i
                for w in range(top):
                    out[i + w] += vi * band[i, w]
            v = out
    return u


class BpBoundEngine:
    """Evaluator for the BP bound at fixed (K, M, q, h, l, r, nu_min).

    All degree-independent tables (hypergeometric grids, decodability
    probabilities, the L table) are built once; evaluating a candidate
    degree distribution costs one banded matrix-power sweep."""

    def __init__(self, K: int, M: int, q: int, h, l: int, r: int, nu_min: int,
                 L: LTable | None = None, cache_dir=None):
        self.K, self.M, self.q = K, M, q
        self.l, self.r, self.nu_min = l, r, nu_min
        self.h = np.asarray(getattr(h, "probs", h), dtype=float)
        if L is None:
            L = build_L_table(K, l, r, nu_min, cache_dir=cache_dir)
        if (L.K, L.l, L.r, L.nu_min) != (K, l, r, nu_min):
            raise ValueError("L table parameters do not match the engine")
        self.L = L
        self.lgam = gammaln(np.arange(max(K * max(l, 1), K) + 2) + 1.0)
        self.hb = np.array([float(combin.hbar_prime(k, self.h, q)) for k in range(M + 1)])
        self.ratio = self._binom_ratio_matrix()
        self.Xi = self._xi_matrix()

    def _ensure_lgam(self, n: int):
        need = n + 2
        if self.lgam.shape[0] < need:
            self.lgam = gammaln(np.arange(need) + 1.0)

    def _lb(self, n, k):
        # log C(n, k) with the zero convention, vectorized
        n = np.asarray(n)
        k = np.asarray(k)
        ok = (k >= 0) & (n >= 0) & (k <= n)
        nn = np.where(ok, n, 0)
        kk = np.where(ok, k, 0)
        out = self.lgam[nn] - self.lgam[kk] - self.lgam[nn - kk]
        return np.where(ok, out, -np.inf)

    def _binom_ratio_matrix(self) -> np.ndarray:
        # ratio[k, d] = C(k,d)/C(K,d)
        K = self.K
        k = np.arange(K + 1)[:, None]
        d = np.arange(K + 1)[None, :]
        return np.exp(self._lb(k, d) - self._lb(K, d))

    def _xi_matrix(self) -> np.ndarray:
        # Xi[a, d] = sum_{k=1}^{min(a,d)} xi_{d,k}(a)
        #          = 1 - hyge(0;K,a,d) - sum_{k<=M} hb[k] hyge(k;K,a,d)
        K, M = self.K, self.M
        a = np.arange(K + 1)[:, None]
        d = np.arange(K + 1)[None, :]
        out = 1.0 - np.exp(self._lb(K - a, d) - self._lb(K, d))
        for k in range(1, M + 1):
            lh = self._lb(a, k) + self._lb(K - a, d - k) - self._lb(K, d)
            out -= self.hb[k] * np.exp(lh)
        return np.clip(out, 0.0, 1.0)

    def _distribution_arrays(self, Psi: DegreeDistribution):
        if Psi.K != self.K:
            raise ValueError("degree distribution K mismatch")
        psi = Psi.psi
        supp = np.nonzero(psi)[0].astype(np.int64)
        return psi, supp, psi[supp]

    def eval(self, Psi: DegreeDistribution, n: int, early_abort: float = math.inf,
             want_terms: bool = False):
        """BP bound at n received batches.  Stops early once the running
        sum exceeds min(1, early_abort); the min{1,.} clamp makes further
        terms irrelevant."""
        res = self.eval_many(Psi, [n], early_abort=early_abort, want_terms=want_terms)
        return res[0]

    def eval_many(self, Psi: DegreeDistribution, ns, early_abort: float = math.inf,
                  want_terms: bool = False):
        """Evaluate the bound for several n in one matrix-power sweep."""
        K = self.K
        ns = list(ns)
        if any(n < 0 for n in ns):
            raise ValueError("n must be nonnegative")
        n_max = max(ns)
        self._ensure_lgam(n_max)
        psi, supp, vals = self._distribution_arrays(Psi)
        W = self.ratio @ psi
        S2 = self.Xi @ psi
        d_max = int(supp[-1])
        width = d_max + 1
        sums = {n: 0.0 for n in ns}
        terms = {n: {} for n in ns} if want_terms else None
        clamped = {n: False for n in ns}
        done = {n: False for n in ns}
        cut = min(1.0, early_abort)
        for a in range(1, K + 1):
            if all(done[n] for n in ns):
                break
            m = K - a
            Wm = float(W[m])
            identity = Wm <= 0.0
            smax_a = self.L.smax(a)
            Lrow = self.L.row(a)
            band = np.zeros((m + 1, width))
            if not identity:
                _build_band(m, K, supp, vals, self.lgam, Wm, band)
            u = _propagate(band, Lrow, smax_a, m, n_max, identity)
            lS1 = math.log(Wm) if Wm > 0 else -math.inf
            s2a = float(S2[a])
            lS2 = math.log(s2a) if s2a > 0 else -math.inf
            lKa = float(self._lb(K, a))
            for n in ns:
                if done[n]:
                    continue
                for b in range(n + 1):
                    lg = lKa + float(self._lb(n, b))
                    if n - b:
                        if lS1 == -math.inf:
                            continue
                        lg += (n - b) * lS1
                    if b:
                        if lS2 == -math.inf:
                            continue
                        lg += b * lS2
                    un = u[n - b]
                    if un <= 0.0 or lg < -745.0:
                        continue
                    term = math.exp(lg) * un
                    sums[n] += term
                    if want_terms:
                        terms[n][(a, b)] = term
                    if sums[n] >= cut:
                        clamped[n] = sums[n] >= 1.0
                        done[n] = True
                        break
        out = []
        for n in ns:
            val = min(1.0, sums[n])
            out.append(BoundReport(val, terms[n] if want_terms else {}, val >= 1.0 or clamped[n]))
        return out


def bp_upper_bound(spec: CodeSpec, n: int | None = None, nu_min: int | None = None,
                   L: LTable | None = None, cache_dir=None, want_terms: bool = True) -> BoundReport:
    """Upper bound on the BP decoding error probability of the random
    LDPC-BATS code; with l=0 this is exactly the no-precode special case
    (the inner stopping-set sum collapses to the single j=0 term)."""
    if n is None:
        n = spec.n
    if nu_min is None:
        nu_min = spec.nu_min
    eng = BpBoundEngine(spec.K, spec.M, spec.q, spec.h, spec.l, spec.r, nu_min,
                        L=L, cache_dir=cache_dir)
    return eng.eval(spec.Psi, n, want_terms=want_terms)


# -- ML bound ----------------------------------------------------------------

def pi_tilde(l_weight: int, K: int, M: int, Psi: DegreeDistribution, h, q: int) -> float:
    """Probability that one batch equation is satisfied by a fixed vector
    of Hamming weight l_weight."""
    if not 1 <= l_weight <= K:
        raise ValueError("weight outside [1, K]")
    probs = np.asarray(getattr(h, "probs", h), dtype=float)
    sigma = float(sum(probs[k] * q ** (-k) for k in range(len(probs))))
    out = 0.0
    for d in Psi.support:
        rho = binom(K - l_weight, d) / binom(K, d) if d <= K - l_weight else 0.0
        out += Psi.psi[d] * (rho + (1.0 - rho) * sigma)
    return out


def ml_upper_bound(spec: CodeSpec, n: int | None = None, want_terms: bool = True) -> BoundReport:
    """Upper bound on the ML decoding error probability; uses the expected
    weight enumerator of the unexpurgated regular ensemble (or the
    no-precode enumerator C(K,w)(q-1)^w when l=0)."""
    if n is None:
        n = spec.n
    K, q = spec.K, spec.q
    terms = {}
    total = 0.0
    lq1 = math.log(q - 1) if q > 2 else 0.0
    for lw in range(1, K + 1):
        A = expected_weight_enumerator(K, spec.l, spec.r, q, lw)
        if A == 0:
            continue
        logA = log_int(A.numerator) - log_int(A.denominator)
        pt = pi_tilde(lw, K, spec.M, spec.Psi, spec.h, q)
        P0 = float(sum(float(varphi(d, K - lw, K, spec.Psi)) for d in spec.Psi.support))
        # first piece: (A/(q-1)) (pi^n - P0^n)
        term = 0.0
        if pt > 0.0:
            x = n * math.log(pt)
            if P0 > 0.0:
                y = n * math.log(P0)
                diff = x + math.log1p(-math.exp(min(0.0, y - x))) if y < x else -math.inf
            else:
                diff = x if n else -math.inf
            if n == 0:
                diff = -math.inf  # pi^0 - P0^0 = 0
            lg1 = logA - lq1 + diff
            if lg1 > 709.0:
                term = math.inf
            elif lg1 > -745.0:
                term += math.exp(lg1)
        # second piece: min{A/(q-1), C(K,lw)} P0^n
        lmin = min(logA - lq1, float(gammaln(K + 1) - gammaln(lw + 1) - gammaln(K - lw + 1)))
        if P0 > 0.0 or n == 0:
            lg2 = lmin + (n * math.log(P0) if n else 0.0) if (P0 > 0.0 or n == 0) else -math.inf
            if lg2 > 709.0:
                term = math.inf
            elif lg2 > -745.0:
                term += math.exp(lg2)
        if term:
            terms[lw] = term
            total += term
        if total >= 1.0:
            break
    value = min(1.0, total)
    return BoundReport(value, terms if want_terms else {}, value >= 1.0)
