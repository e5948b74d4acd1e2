"""Code ensembles: degree/rank distributions, Tanner graph samplers, the
regular LDPC precode (random ensemble and PEG construction), exact
ensemble-average stopping-set / weight-enumerator formulas, and encoders.

VN, B-CN, and L-CN indices are 0-based throughout.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from batskit import combin
from batskit.gf import GF, get_field


class PrecodeRankError(Exception):
    """Parity-check matrix is rank deficient; systematic encoding impossible."""


class DegreeDistribution:
    """Probability vector over batch degrees 1..K."""

    def __init__(self, K: int, weights, normalize: bool = False):
        """weights: dense array of length K+1 (index 0 unused) or an
        iterable of (degree, probability) pairs."""
        psi = np.zeros(K + 1, dtype=float)
        weights = list(weights) if not isinstance(weights, np.ndarray) else weights
        if isinstance(weights, np.ndarray) or (weights and np.isscalar(weights[0])):
            arr = np.asarray(weights, dtype=float)
            if arr.shape[0] == K + 1:
                psi[:] = arr
            elif arr.shape[0] == K:
                psi[1:] = arr
            else:
                raise ValueError(f"dense weights must have length {K} or {K + 1}")
        else:
            for d, p in weights:
                if not 1 <= d <= K:
                    raise ValueError(f"degree {d} outside [1, {K}]")
                psi[int(d)] += float(p)
        if psi[0] != 0:
            raise ValueError("degree 0 must have zero probability")
        if (psi < -1e-15).any():
            raise ValueError("negative weight")
        psi = np.clip(psi, 0.0, None)
        total = psi.sum()
        if normalize:
            if total <= 0:
                raise ValueError("weights sum to zero")
            psi /= total
        elif abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total!r}, not 1")
        self.K = K
        self.psi = psi
        nz = np.nonzero(psi[1:])[0]
        if len(nz) == 0:
            raise ValueError("empty degree distribution")
        self.d_min = int(nz[0]) + 1
        self.d_max = int(nz[-1]) + 1

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.psi)[0]

    def mean(self) -> float:
        return float(np.arange(self.K + 1) @ self.psi)

    def sample(self, rng: np.random.Generator) -> int:
        return sample_degree(self, rng)

    def to_json(self) -> str:
        pairs = [[int(d), self.psi[d]] for d in self.support]
        return json.dumps({"K": self.K, "weights": pairs})

    @classmethod
    def from_json(cls, text: str, normalize: bool = True) -> "DegreeDistribution":
        obj = json.loads(text)
        return cls(int(obj["K"]), obj["weights"], normalize=normalize)

    def __eq__(self, other):
        return isinstance(other, DegreeDistribution) and self.K == other.K and np.array_equal(self.psi, other.psi)


class RankDistribution:
    """Probability vector over transfer-matrix ranks 0..M."""

    def __init__(self, probs, normalize: bool = False):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.shape[0] < 1:
            raise ValueError("probs must be a 1-D sequence h_0..h_M")
        if (p < -1e-15).any():
            raise ValueError("negative probability")
        p = np.clip(p, 0.0, None)
        if normalize:
            p = p / p.sum()
        elif abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        self.probs = p
        self.M = p.shape[0] - 1

    def mean(self) -> float:
        return combin.capacity(self.probs)

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.choice(self.M + 1, p=self.probs / self.probs.sum()))

    def to_json(self) -> str:
        return json.dumps(list(self.probs))

    @classmethod
    def from_json(cls, text: str, normalize: bool = True) -> "RankDistribution":
        return cls(json.loads(text), normalize=normalize)

    def __eq__(self, other):
        return isinstance(other, RankDistribution) and np.array_equal(self.probs, other.probs)


@dataclass
class CodeSpec:
    """Parameters naming an LDPC-BATS ensemble; l=0 means no precode."""

    q: int
    K: int
    n: int
    M: int
    Psi: DegreeDistribution
    h: RankDistribution
    l: int = 0
    r: int = 0
    nu_min: int = 1

    def __post_init__(self):
        get_field(self.q)  # validates the order
        if self.K < 1 or self.n < 0 or self.M < 1:
            raise ValueError("K, M must be positive and n nonnegative")
        if self.Psi.K != self.K:
            raise ValueError("degree distribution K does not match spec K")
        if self.h.M != self.M:
            raise ValueError("rank distribution M does not match spec M")
        if self.nu_min < 1:
            raise ValueError("nu_min must be >= 1")
        if self.l < 0 or (self.l > 0 and self.r <= 0):
            raise ValueError("need r > 0 when l > 0")
        if self.l > 0:
            if (self.K * self.l) % self.r != 0:
                raise ValueError("K*l must be divisible by r")
            if self.K_prime <= 0:
                raise ValueError("precode rate must be positive")

    @property
    def K_prime(self) -> int:
        if self.l == 0:
            return self.K
        kp = self.K * (self.r - self.l)
        if kp % self.r != 0:
            raise ValueError("K(1 - l/r) is not an integer")
        return kp // self.r

    @property
    def rate(self) -> float:
        return self.K_prime / self.n if self.n else math.inf

    @property
    def num_lcns(self) -> int:
        return self.K * self.l // self.r if self.l else 0


@dataclass(frozen=True)
class Batch:
    """One B-CN: neighbor indices, generator G (dg x M), transfer H (M x N)."""

    I: tuple
    G: np.ndarray
    H: np.ndarray

    @property
    def dg(self) -> int:
        return len(self.I)


@dataclass(frozen=True)
class Lcn:
    """One L-CN: neighbor indices and their nonzero GF(q) edge labels."""

    I: tuple
    labels: np.ndarray


@dataclass
class TannerGraph:
    """A sampled LDPC-BATS code instance (immutable after creation)."""

    K: int
    q: int
    batches: list = field(default_factory=list)
    lcns: list = field(default_factory=list)

    def validate(self):
        for b in self.batches:
            if b.dg < 1 or b.G.shape[0] != b.dg or b.G.shape[1] != b.H.shape[0]:
                raise ValueError("inconsistent batch dimensions")
            if any(not 0 <= i < self.K for i in b.I):
                raise ValueError("neighbor index out of range")
        for c in self.lcns:
            if len(c.I) != len(c.labels) or (np.asarray(c.labels) == 0).any():
                raise ValueError("L-CN labels must be nonzero and match neighbors")
        return self


class LdpcCode:
    """Regular LDPC precode held as sparse parity rows of (column, label)."""

    def __init__(self, K: int, num_checks: int, rows):
        self.K = K
        self.num_checks = num_checks
        self.rows = [sorted(row) for row in rows]
        if len(self.rows) != num_checks:
            raise ValueError("row count mismatch")
        self._rref_cache = None

    @property
    def K_prime(self) -> int:
        return self.K - self.num_checks

    def parity_matrix(self) -> np.ndarray:
        Q = np.zeros((self.num_checks, self.K), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for j, lab in row:
                Q[i, j] = lab
        return Q

    def to_lcns(self) -> list:
        out = []
        for row in self.rows:
            if row:
                idx = tuple(j for j, _ in row)
                labels = np.array([lab for _, lab in row], dtype=np.uint8)
                out.append(Lcn(idx, labels))
        return out

    def _systematic(self, gf: GF):
        if self._rref_cache is None:
            Q = self.parity_matrix()
            R, pivots = gf.rref(Q)
            if len(pivots) < self.num_checks:
                raise PrecodeRankError(
                    f"parity matrix rank {len(pivots)} < {self.num_checks}; resample the code"
                )
            free = [c for c in range(self.K) if c not in set(pivots)]
            self._rref_cache = (R[: len(pivots)], pivots, free)
        return self._rref_cache

    def systematic_positions(self, gf: GF) -> list:
        return self._systematic(gf)[2]

    def serialize(self) -> str:
        """Alist-style text: header `K num_checks`, then one line per check
        of `col:label` entries."""
        lines = [f"{self.K} {self.num_checks}"]
        for row in self.rows:
            lines.append(" ".join(f"{j}:{lab}" for j, lab in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "LdpcCode":
        lines = [ln for ln in text.strip().splitlines()]
        K, num_checks = map(int, lines[0].split())
        rows = []
        for ln in lines[1 : num_checks + 1]:
            row = []
            for tok in ln.split():
                j, lab = tok.split(":")
                row.append((int(j), int(lab)))
            rows.append(row)
        return cls(K, num_checks, rows)


# -- samplers -----------------------------------------------------------

def sample_degree(Psi: DegreeDistribution, rng: np.random.Generator) -> int:
    p = Psi.psi / Psi.psi.sum()
    return int(rng.choice(Psi.K + 1, p=p))


def sample_transfer_with_rank(M: int, k: int, N: int, q: int, rng: np.random.Generator) -> np.ndarray:
    """M x N matrix of rank exactly k, via a full-rank product construction."""
    if not 0 <= k <= min(M, N):
        raise ValueError(f"rank {k} infeasible for a {M}x{N} matrix")
    gf = get_field(q)
    if k == 0:
        return np.zeros((M, N), dtype=np.uint8)
    while True:
        A = gf.random_matrix(M, k, rng)
        if gf.mat_rank(A) == k:
            break
    while True:
        B = gf.random_matrix(k, N, rng)
        if gf.mat_rank(B) == k:
            break
    return gf.mat_mul(A, B)


def sample_batch(K: int, M: int, Psi: DegreeDistribution, h: RankDistribution, q: int,
                 rng: np.random.Generator) -> Batch:
    gf = get_field(q)
    dg = sample_degree(Psi, rng)
    I = tuple(sorted(int(i) for i in rng.choice(K, size=dg, replace=False)))
    G = gf.random_matrix(dg, M, rng)
    k = h.sample(rng)
    H = sample_transfer_with_rank(M, k, M, q, rng)
    return Batch(I, G, H)


def sample_bats_graph(spec: CodeSpec, rng: np.random.Generator) -> TannerGraph:
    """Graph from the standard BATS ensemble (no L-CNs); n=0 gives the
    trivial graph of K isolated VNs."""
    batches = [sample_batch(spec.K, spec.M, spec.Psi, spec.h, spec.q, rng) for _ in range(spec.n)]
    return TannerGraph(spec.K, spec.q, batches, [])


def build_graph(spec: CodeSpec, rng: np.random.Generator, precode: LdpcCode | None = None) -> TannerGraph:
    """LDPC-BATS instance: BATS batches plus the precode's parity checks as
    L-CNs.  With precode=None and l>0, a fresh ensemble code is drawn."""
    g = sample_bats_graph(spec, rng)
    if spec.l > 0:
        if precode is None:
            precode = sample_ldpc_ensemble(spec.K, spec.l, spec.r, spec.q, rng)
        g.lcns = precode.to_lcns()
    elif precode is not None:
        g.lcns = precode.to_lcns()
    return g


def sample_ldpc_sockets(K: int, l: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform socket permutation: returns a (K, l) array giving, for each
    VN socket, its check index (multiplicities preserved)."""
    if l > 0 and (K * l) % r != 0:
        raise ValueError("K*l must be divisible by r")
    perm = rng.permutation(K * l)
    return (perm // r).reshape(K, l) if l else np.zeros((K, 0), dtype=int)


def sample_ldpc_ensemble(K: int, l: int, r: int, q: int, rng: np.random.Generator) -> LdpcCode:
    """Draw from the q-ary (K,l,r) regular ensemble: uniform socket
    permutation with uniform nonzero labels; parallel edges collapse by
    GF(q) addition of labels, and a zero sum drops the edge."""
    num_checks = K * l // r if l else 0
    sockets = sample_ldpc_sockets(K, l, r, rng)
    acc: list[dict] = [dict() for _ in range(num_checks)]
    for v in range(K):
        for c in sockets[v]:
            lab = int(rng.integers(1, q)) if q > 2 else 1
            acc[c][v] = acc[c].get(v, 0) ^ lab
    rows = [[(v, lab) for v, lab in sorted(d.items()) if lab != 0] for d in acc]
    return LdpcCode(K, num_checks, rows)


def peg_construct(K: int, l: int, r: int, q: int, rng: np.random.Generator) -> LdpcCode:
    """Progressive-edge-growth (l,r)-regular precode.

    Greedy girth maximization: each new edge goes to an unsaturated check
    that is unreachable from the VN if one exists, otherwise to one at
    maximal BFS distance.  Ties break on minimal current check degree,
    then lowest index, so the topology is deterministic; the rng only
    draws the edge labels.  Edges are placed stage by stage (every VN's
    first edge, then every VN's second, ...) so check degrees stay
    balanced and the endgame is never forced into a short cycle.
    """
    if l <= 0:
        return LdpcCode(K, 0, [])
    if (K * l) % r != 0:
        raise ValueError("K*l must be divisible by r")
    m = K * l // r
    vn_adj: list[list[int]] = [[] for _ in range(K)]
    cn_adj: list[list[int]] = [[] for _ in range(m)]
    cn_deg = np.zeros(m, dtype=int)

    def bfs_dist(v: int) -> np.ndarray:
        dist = np.full(m, -1, dtype=int)
        seen_v = np.zeros(K, dtype=bool)
        seen_v[v] = True
        frontier = deque([(v, True, 0)])  # (node, is_vn, depth)
        while frontier:
            node, is_vn, depth = frontier.popleft()
            if is_vn:
                for c in vn_adj[node]:
                    if dist[c] < 0:
                        dist[c] = depth + 1
                        frontier.append((c, False, depth + 1))
            else:
                for u in cn_adj[node]:
                    if not seen_v[u]:
                        seen_v[u] = True
                        frontier.append((u, True, depth + 1))
        return dist

    def try_swap(v: int, c_open: int, dist: np.ndarray) -> bool:
        # every open check is near v; move one edge (u, c_far) of a far
        # saturated check over to c_open, then give v the freed socket
        far = [c for c in range(m) if dist[c] < 0 or dist[c] >= 5]
        far.sort(key=lambda c: (0 if dist[c] < 0 else -dist[c], c))
        for c_far in far:
            for u in sorted(cn_adj[c_far]):
                if u == v or c_open in vn_adj[u]:
                    continue
                du = bfs_dist(u)
                if 0 <= du[c_open] < 5:
                    continue
                cn_adj[c_far].remove(u)
                vn_adj[u].remove(c_far)
                vn_adj[u].append(c_open)
                cn_adj[c_open].append(u)
                vn_adj[v].append(c_far)
                cn_adj[c_far].append(v)
                cn_deg[c_open] += 1
                return True
        return False

    for _ in range(l):
        for v in range(K):
            open_cns = np.nonzero(cn_deg < r)[0]
            if len(open_cns) == 0:
                raise RuntimeError("socket accounting failure")
            if not vn_adj[v]:
                cand = open_cns
            else:
                dist = bfs_dist(v)
                unreached = open_cns[dist[open_cns] < 0]
                if len(unreached):
                    cand = unreached
                else:
                    dmax = dist[open_cns].max()
                    cand = open_cns[dist[open_cns] == dmax]
                    if dmax == 1:
                        # only already-adjacent checks remain; a parallel
                        # edge would collapse, so take any open check
                        cand = open_cns
                    if dmax < 5 and len(cand) <= 4:
                        best = min(cand, key=lambda c: (cn_deg[c], c))
                        if try_swap(v, int(best), dist):
                            continue
            best = min(cand, key=lambda c: (cn_deg[c], c))
            vn_adj[v].append(int(best))
            cn_adj[best].append(v)
            cn_deg[best] += 1

    rows = []
    for c in range(m):
        row = []
        for v in sorted(cn_adj[c]):
            lab = int(rng.integers(1, q)) if q > 2 else 1
            row.append((v, lab))
        rows.append(row)
    return LdpcCode(K, m, rows)


# -- ensemble-average formulas -------------------------------------------

def expected_stopping_sets(K: int, l: int, r: int, w: int) -> Fraction:
    """Mean number of size-w stopping sets over the (K,l,r) regular
    ensemble (socket model); independent of the field order."""
    if l > 0 and (K * l) % r != 0:
        raise ValueError("K*l must be divisible by r")
    if not 0 <= w <= K:
        raise ValueError("w outside [0, K]")
    if l == 0:
        return Fraction(combin.binom(K, w))
    # one check contributes 0 or >= 2 sockets: (1+x)^r - rx
    p = [combin.binom(r, i) for i in range(r + 1)]
    p[1] -= r
    num = combin.coef_power(p, K * l // r, w * l)
    return Fraction(combin.binom(K, w) * num, combin.binom(K * l, w * l))


def max_expurgation(K: int, l: int, r: int):
    """Largest nu such that the ensemble mean count of stopping sets of
    size < nu stays below one.  Returns math.inf for l=0: with no parity
    checks there are no stopping-set constraints to expurgate."""
    if l == 0:
        return math.inf
    total = Fraction(0)
    nu = 1
    while nu <= K:
        total += expected_stopping_sets(K, l, r, nu)
        if total >= 1:
            return nu
        nu += 1
    return K + 1


def weight_enum_poly(r: int, q: int) -> list[int]:
    """((1+(q-1)x)^r + (q-1)(1-x)^r) / q: per-check weight generating
    function for the q-ary regular ensemble (integer coefficients)."""
    out = []
    for j in range(r + 1):
        v = combin.binom(r, j) * ((q - 1) ** j + (q - 1) * (-1) ** j)
        assert v % q == 0
        out.append(v // q)
    return out


def expected_weight_enumerator(K: int, l: int, r: int, q: int, w: int) -> Fraction:
    """Mean number of weight-w codewords over the q-ary (K,l,r) ensemble."""
    if not 0 <= w <= K:
        raise ValueError("w outside [0, K]")
    if w == 0:
        return Fraction(1)
    if l == 0:
        return Fraction(combin.binom(K, w) * (q - 1) ** w)
    if (K * l) % r != 0:
        raise ValueError("K*l must be divisible by r")
    num = combin.coef_power(weight_enum_poly(r, q), K * l // r, w * l)
    den = combin.binom(K * l, w * l) * (q - 1) ** ((l - 1) * w)
    return Fraction(combin.binom(K, w) * num, den)


# -- encoders ------------------------------------------------------------

def precode_encode(code: LdpcCode, u: np.ndarray, q: int) -> np.ndarray:
    """Systematic encoding: K' input symbols to a K-symbol codeword with
    every parity check satisfied.  Raises PrecodeRankError when the parity
    matrix does not have full row rank."""
    gf = get_field(q)
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[0] != code.K_prime:
        raise ValueError(f"expected {code.K_prime} input symbols, got {u.shape[0]}")
    R, pivots, free = code._systematic(gf)
    v = np.zeros(code.K, dtype=np.uint8)
    v[free] = u
    if free:
        # each rref row i reads v[pivots[i]] + sum_f R[i,f] v[f] = 0
        contrib = gf.mat_mul(R[:, free], u.reshape(-1, 1)).ravel()
    else:
        contrib = np.zeros(len(pivots), dtype=np.uint8)
    for i, p in enumerate(pivots):
        v[p] = contrib[i]
    return v


def bats_encode(graph: TannerGraph, v: np.ndarray) -> list[np.ndarray]:
    """Outer encoding: X_i = B_i G_i for every batch."""
    gf = get_field(graph.q)
    v = np.asarray(v, dtype=np.uint8)
    if v.shape[0] != graph.K:
        raise ValueError(f"expected {graph.K} intermediate symbols")
    out = []
    for b in graph.batches:
        out.append(gf.vec_mat(v[list(b.I)], b.G))
    return out
