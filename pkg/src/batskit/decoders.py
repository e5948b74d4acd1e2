"""Joint decoders over the combined BATS + LDPC Tanner graph.

bp_decode peels the graph; inactivation_decode resumes stalled peeling by
treating chosen unknowns symbolically; ml_decode solves the single global
linear system.  is_stopping_graph is the exhaustive-search oracle for the
graph structures on which peeling provably stalls.

These are the reference implementations: clear, value-tracking, suitable
for instances up to a few hundred VNs.  Mass simulation uses the
structurally equivalent kernels in batskit.fastsim, which are
cross-checked against this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from batskit.code_model import LdpcCode, TannerGraph
from batskit.gf import GF, SolveStatus, get_field


class DecodeContradiction(Exception):
    """Received data is inconsistent with the graph (corrupted input)."""


@dataclass
class BpResult:
    success: bool
    v: np.ndarray | None = None
    residual: frozenset = frozenset()


@dataclass
class InactivationRecord:
    """Inactive symbol indices and the per-VN affine expansions over them:
    value(i) = expansions[i, 0] + sum_j expansions[i, 1+j] * b_j."""

    inactive: list
    expansions: np.ndarray


@dataclass
class InactivationResult:
    success: bool
    num_inactive: int
    v: np.ndarray | None = None
    record: InactivationRecord | None = None


@dataclass
class MlResult:
    success: bool
    v: np.ndarray | None = None
    u: np.ndarray | None = None


class _Check:
    """One live check (B-CN or L-CN viewed as a size-1 batch)."""

    __slots__ = ("idx", "A", "y", "rank_ub", "is_lcn")

    def __init__(self, idx, A, y, is_lcn):
        self.idx = list(idx)
        self.A = A  # current rows of G_i H_i, aligned with idx
        self.y = y  # adjusted right-hand side (affine rows x N)
        self.rank_ub = None
        self.is_lcn = is_lcn


class DecodeState:
    """Residual graph state shared by the BP and inactivation decoders.

    Values are affine rows over the basis (1, b_1, ..., b_I): plain BP
    keeps a single constant row; each inactivation appends a column.
    """

    def __init__(self, graph: TannerGraph, Y, rng: np.random.Generator):
        self.gf = get_field(graph.q)
        self.K = graph.K
        self.rng = rng
        gf = self.gf
        self.checks: list[_Check] = []
        for b, y in zip(graph.batches, Y):
            A = gf.mat_mul(b.G, b.H)
            rhs = np.asarray(y, dtype=np.uint8).reshape(1, -1).copy()
            if rhs.shape[1] != b.H.shape[1]:
                raise ValueError("received vector length does not match transfer matrix")
            self.checks.append(_Check(b.I, A, rhs, is_lcn=False))
        for c in graph.lcns:
            A = np.asarray(c.labels, dtype=np.uint8).reshape(-1, 1)
            self.checks.append(_Check(c.I, A, np.zeros((1, 1), dtype=np.uint8), is_lcn=True))
        self.vn_checks = [[] for _ in range(self.K)]
        for ci, c in enumerate(self.checks):
            for j in c.idx:
                self.vn_checks[j].append(ci)
        self.expans = np.zeros((self.K, 1), dtype=np.uint8)
        self.solved = np.zeros(self.K, dtype=bool)
        self.inactive: list[int] = []
        self.constraints: list[np.ndarray] = []  # rows (const, coeffs...) = 0
        self.decodable: set[int] = set()
        for ci in range(len(self.checks)):
            if self._recompute(ci):
                self.decodable.add(ci)

    # -- rank bookkeeping --------------------------------------------

    def _recompute(self, ci: int) -> bool:
        c = self.checks[ci]
        if not c.idx:
            return False
        c.rank_ub = self.gf.mat_rank(c.A)
        return c.rank_ub == len(c.idx)

    # -- peeling -------------------------------------------------------

    def decodable_vns(self):
        return sorted({j for ci in self.decodable for j in self.checks[ci].idx})

    def _solve_check(self, ci: int) -> np.ndarray:
        """Affine expansions of a decodable check's live VNs, one column per
        VN; harvests the consistency constraints from non-pivot columns."""
        c = self.checks[ci]
        gf = self.gf
        _, P = gf.rref(c.A)  # pivot columns: an invertible s x s submatrix
        AP = c.A[:, P]
        # X AP = y[:, P] for every affine row
        Xrows = []
        for row in c.y:
            status, x = gf.mat_solve(AP, row[P])
            assert status is SolveStatus.UNIQUE
            Xrows.append(x)
        X = np.array(Xrows, dtype=np.uint8)
        return X

    def _assign(self, j: int, expansion: np.ndarray):
        """Mark VN j solved with the given affine expansion and peel it."""
        gf = self.gf
        width = self.expans.shape[1]
        self.expans[j, : expansion.shape[0]] = expansion
        self.solved[j] = True
        for ci in self.vn_checks[j]:
            c = self.checks[ci]
            if j not in c.idx:
                continue
            t = c.idx.index(j)
            row = c.A[t]
            exp_full = np.zeros(width, dtype=np.uint8)
            exp_full[: expansion.shape[0]] = expansion
            if c.y.shape[0] < width:
                pad = np.zeros((width - c.y.shape[0], c.y.shape[1]), dtype=np.uint8)
                c.y = np.concatenate([c.y, pad], axis=0)
            c.y ^= gf.mul_arr(exp_full[:, None], row[None, :])
            c.idx.pop(t)
            c.A = np.delete(c.A, t, axis=0)
            if not c.idx:
                self._retire(ci)
                self.decodable.discard(ci)
            else:
                if c.rank_ub is not None:
                    c.rank_ub = min(c.rank_ub, len(c.idx))
                if c.rank_ub == len(c.idx) and self._recompute(ci):
                    self.decodable.add(ci)
                else:
                    self.decodable.discard(ci)

    def _retire(self, ci: int):
        """Check has no live VNs left: residual columns become constraints
        on the inactive symbols (all-zero residual for consistent plain BP)."""
        c = self.checks[ci]
        for col in range(c.y.shape[1]):
            column = c.y[:, col]
            if column.any():
                row = np.zeros(self.expans.shape[1], dtype=np.uint8)
                row[: column.shape[0]] = column
                self.constraints.append(row)

    def peel_step(self) -> bool:
        """One BP step: randomly pick a decodable VN and remove it."""
        vns = self.decodable_vns()
        if not vns:
            return False
        j = int(vns[self.rng.integers(len(vns))])
        ci = next(ci for ci in sorted(self.decodable) if j in self.checks[ci].idx)
        X = self._solve_check(ci)
        t = self.checks[ci].idx.index(j)
        self._assign(j, X[:, t])
        return True

    def inactivate(self, j: int):
        self.inactive.append(j)
        self.expans = np.concatenate(
            [self.expans, np.zeros((self.K, 1), dtype=np.uint8)], axis=1
        )
        width = self.expans.shape[1]
        e = np.zeros(width, dtype=np.uint8)
        e[width - 1] = 1
        self._assign(j, e)

    def active_vns(self):
        return [j for j in range(self.K) if not self.solved[j]]


def bp_decode(graph: TannerGraph, Y, rng: np.random.Generator) -> BpResult:
    """Peel to fixpoint; on failure returns the exact residual VN set."""
    state = DecodeState(graph, Y, rng)
    while state.peel_step():
        pass
    residual = frozenset(state.active_vns())
    if residual:
        return BpResult(False, None, residual)
    if any(row.any() for row in state.constraints):
        raise DecodeContradiction("residual batch equations are nonzero")
    return BpResult(True, state.expans[:, 0].copy(), frozenset())


def inactivation_decode(graph: TannerGraph, Y, rng: np.random.Generator) -> InactivationResult:
    """BP with random inactivation on stalls, then one small dense solve.

    Inactive symbols are drawn uniformly from the active (undecoded,
    un-inactivated) VNs.  Succeeds iff the accumulated linear system on
    the inactive symbols has a unique solution.
    """
    state = DecodeState(graph, Y, rng)
    while True:
        while state.peel_step():
            pass
        active = state.active_vns()
        if not active:
            break
        j = int(active[state.rng.integers(len(active))])
        state.inactivate(j)

    gf = state.gf
    n_ina = len(state.inactive)
    record = InactivationRecord(list(state.inactive), state.expans.copy())
    if n_ina == 0:
        if any(row.any() for row in state.constraints):
            raise DecodeContradiction("residual batch equations are nonzero")
        return InactivationResult(True, 0, state.expans[:, 0].copy(), record)

    width = state.expans.shape[1]
    rows = np.zeros((len(state.constraints), width), dtype=np.uint8)
    for i, row in enumerate(state.constraints):
        rows[i, : row.shape[0]] = row
    C = rows[:, 1:]
    d = rows[:, 0]
    status, b = gf.mat_solve(C.T, d)  # b C^T = d  <=>  C b^T = d^T
    if status is SolveStatus.INCONSISTENT:
        raise DecodeContradiction("inactive-symbol system is inconsistent")
    if status is not SolveStatus.UNIQUE:
        return InactivationResult(False, n_ina, None, record)
    basis = np.concatenate([[1], b]).astype(np.uint8)
    v = np.zeros(state.K, dtype=np.uint8)
    for j in range(state.K):
        v[j] = np.bitwise_xor.reduce(gf.mul_arr(state.expans[j], basis))
    return InactivationResult(True, n_ina, v, record)


def ml_decode(graph: TannerGraph, Y, precode: LdpcCode | None = None) -> MlResult:
    """Global Gaussian elimination on the joint linear system of all batch
    and parity equations; succeeds iff the intermediate symbols are
    uniquely determined.  With a full-rank precode this is the classic
    rank-K' test on the precoded system; u is read off the systematic
    positions when a precode is supplied."""
    gf = get_field(graph.q)
    cols = []
    rhs = []
    for b, y in zip(graph.batches, Y):
        A = gf.mat_mul(b.G, b.H)
        W = np.zeros((graph.K, A.shape[1]), dtype=np.uint8)
        W[list(b.I)] = A
        cols.append(W)
        rhs.append(np.asarray(y, dtype=np.uint8).ravel())
    for c in graph.lcns:
        W = np.zeros((graph.K, 1), dtype=np.uint8)
        W[list(c.I), 0] = c.labels
        cols.append(W)
        rhs.append(np.zeros(1, dtype=np.uint8))
    if cols:
        W = np.concatenate(cols, axis=1)
        z = np.concatenate(rhs)
    else:
        W = np.zeros((graph.K, 0), dtype=np.uint8)
        z = np.zeros(0, dtype=np.uint8)
    status, v = gf.mat_solve(W, z)
    if status is SolveStatus.INCONSISTENT:
        raise DecodeContradiction("joint linear system is inconsistent")
    if status is not SolveStatus.UNIQUE:
        return MlResult(False)
    u = v[precode.systematic_positions(gf)] if precode is not None else None
    return MlResult(True, v, u)


# -- stopping-structure predicates ----------------------------------------

def _ldpc_max_stopping_set(graph: TannerGraph, W: set) -> set:
    """Maximal stopping set of the precode contained in W: peel any VN
    some L-CN neighbor of which touches W exactly once."""
    W = set(W)
    changed = True
    while changed:
        changed = False
        for c in graph.lcns:
            live = [j for j in c.I if j in W]
            if len(live) == 1:
                W.discard(live[0])
                changed = True
    return W


def is_valid_pair(graph: TannerGraph, A: set, B: set, l: int = 0, r: int = 1) -> bool:
    """Check constraints C1/C2 plus C3 (no precode) or C4 (LDPC-BATS) for
    the VN set A and B-CN set B."""
    gf = get_field(graph.q)
    A = set(A)
    if not A:
        return False
    # C1: no VN of A may touch a B-CN outside B
    touching = {ci for ci, b in enumerate(graph.batches) if set(b.I) & A}
    if not touching <= set(B):
        return False
    # C2: every B-CN of B is undecodable on its A-part
    for ci in B:
        b = graph.batches[ci]
        rows = [t for t, j in enumerate(b.I) if j in A]
        if not rows:
            return False
        GH = gf.mat_mul(b.G[rows], b.H)
        if gf.mat_rank(GH) >= len(rows):
            return False
    if not graph.lcns and l == 0:
        # C3: every outside VN keeps a B-CN neighbor outside B
        for j in range(graph.K):
            if j in A:
                continue
            nbrs = [ci for ci, b in enumerate(graph.batches) if j in b.I]
            if nbrs and all(ci in B for ci in nbrs):
                return False
            if not nbrs:
                return False
        return True
    # C4
    X = set()
    for j in range(graph.K):
        if j in A:
            continue
        nbrs = [ci for ci, b in enumerate(graph.batches) if j in b.I]
        if all(ci in B for ci in nbrs):
            X.add(j)
    a = len(A)
    s_max = (graph.K - a) * l // r if r else 0
    if len(X) > s_max:
        return False
    if l > 0:
        if _ldpc_max_stopping_set(graph, set(A)) != A:
            return False
        if _ldpc_max_stopping_set(graph, A | X) != A:
            return False
    return True


def is_stopping_graph(graph: TannerGraph, l: int = 0, r: int = 1, max_vns: int = 16):
    """Exhaustive search for a valid (A, B) witness.

    Returns (True, (A, B)) or (False, None).  Exponential in K; guarded.
    For a fixed A the only viable B is the set of B-CNs touching A, so the
    search is over nonempty VN subsets."""
    if graph.K > max_vns:
        raise ValueError(f"exhaustive search limited to {max_vns} VNs")
    for size in range(1, graph.K + 1):
        for A in itertools.combinations(range(graph.K), size):
            A = set(A)
            B = {ci for ci, b in enumerate(graph.batches) if set(b.I) & A}
            if is_valid_pair(graph, A, B, l, r):
                return True, (frozenset(A), frozenset(B))
    return False, None
