"""Arithmetic over GF(2^p) and dense matrix operations used by the codecs.

Elements are integers in [0, q) whose binary digits are polynomial
coefficients over GF(2).  Addition is XOR; multiplication uses log/antilog
tables built once per field.  Matrices are numpy uint8 arrays (q <= 256).

Irreducible moduli, fixed for reproducibility:
    GF(4)  : x^2 + x + 1          -> 0b111       = 7
    GF(8)  : x^3 + x + 1          -> 0b1011      = 11
    GF(16) : x^4 + x + 1          -> 0b10011     = 19
    GF(256): x^8 + x^4 + x^3 + x^2 + 1 -> 0b100011101 = 285
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

_MODULI = {
    2: 0b11,
    4: 0b111,
    8: 0b1011,
    16: 0b10011,
    256: 0b100011101,
}

SUPPORTED_ORDERS = tuple(sorted(_MODULI))


@dataclass(frozen=True)
class FieldSpec:
    """A binary extension field, named by its order and modulus bit pattern."""

    q: int
    modulus: int

    def __post_init__(self):
        if self.q not in _MODULI:
            raise ValueError(f"unsupported field order {self.q}; must be one of {SUPPORTED_ORDERS}")
        if self.modulus != _MODULI[self.q]:
            raise ValueError(f"modulus {self.modulus:#b} is not the pinned modulus for GF({self.q})")


def _mul_raw(a: int, b: int, q: int, modulus: int) -> int:
    # Carry-less multiply mod the irreducible polynomial; only used to
    # bootstrap the log/antilog tables.
    p = 0
    while b:
        if b & 1:
            p ^= a
        b >>= 1
        a <<= 1
        if a & q:
            a ^= modulus
    return p


class GF:
    """GF(2^p) with table-driven multiply, division, and matrix routines.

    All methods are pure; instances are immutable after construction and
    safe to share across threads.
    """

    def __init__(self, q: int):
        if q not in _MODULI:
            raise ValueError(f"unsupported field order {q}; must be one of {SUPPORTED_ORDERS}")
        self.q = q
        self.modulus = _MODULI[q]
        self.spec = FieldSpec(q, self.modulus)

        # alpha = x is primitive for the pinned moduli; for GF(2) use 1.
        alpha = 2 if q > 2 else 1
        exp = np.zeros(2 * q, dtype=np.int32)
        log = np.zeros(q, dtype=np.int32)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = _mul_raw(v, alpha, q, self.modulus)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        self.exp = exp
        self.log = log
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = exp[(q - 1 - log[a]) % (q - 1)]
        self.inv_table = inv

    # -- scalar ops ---------------------------------------------------

    def add(self, a, b):
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError()
        if a == 0:
            return 0
        return int(self.exp[self.log[a] - self.log[b] + (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    # -- vectorized element ops ----------------------------------------

    def mul_arr(self, a: np.ndarray, b) -> np.ndarray:
        """Elementwise product of uint8 arrays (broadcasting allowed)."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        out = self.exp[self.log[a] + self.log[b]].astype(np.uint8)
        return np.where((a == 0) | (b == 0), 0, out)

    def scale_row(self, row: np.ndarray, c: int) -> np.ndarray:
        if c == 0:
            return np.zeros_like(row)
        out = self.exp[self.log[row] + self.log[c]].astype(np.uint8)
        out[row == 0] = 0
        return out

    # -- matrices -------------------------------------------------------

    def mat_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.uint8)
        B = np.asarray(B, dtype=np.uint8)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.uint8)
        for k in range(A.shape[1]):
            col = A[:, k]
            nz = col != 0
            if not nz.any():
                continue
            out[nz] ^= self.mul_arr(col[nz, None], B[k][None, :])
        return out

    def mat_vec(self, A: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self.mat_mul(A, np.asarray(x, dtype=np.uint8).reshape(-1, 1)).ravel()

    def vec_mat(self, x: np.ndarray, A: np.ndarray) -> np.ndarray:
        return self.mat_mul(np.asarray(x, dtype=np.uint8).reshape(1, -1), A).ravel()

    def rref(self, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form; returns (R, pivot column indices)."""
        R = np.array(A, dtype=np.uint8, copy=True)
        if R.ndim != 2:
            raise ValueError("matrix must be 2-D")
        rows, cols = R.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            sel = None
            for i in range(r, rows):
                if R[i, c] != 0:
                    sel = i
                    break
            if sel is None:
                continue
            if sel != r:
                R[[r, sel]] = R[[sel, r]]
            if R[r, c] != 1:
                R[r] = self.scale_row(R[r], self.inv(int(R[r, c])))
            mask = R[:, c] != 0
            mask[r] = False
            if mask.any():
                R[mask] ^= self.mul_arr(R[mask, c][:, None], R[r][None, :])
            pivots.append(c)
            r += 1
        return R, pivots

    def mat_rank(self, A: np.ndarray) -> int:
        A = np.asarray(A, dtype=np.uint8)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def mat_solve(self, A: np.ndarray, y: np.ndarray):
        """Solve x A = y for a row vector x.

        Returns (SolveStatus.UNIQUE, x) when rank(A) equals A.rows and the
        system is consistent; (SolveStatus.UNDERDETERMINED, None) when the
        solution exists but is not unique; (SolveStatus.INCONSISTENT, None)
        when no solution exists.
        """
        A = np.asarray(A, dtype=np.uint8)
        y = np.asarray(y, dtype=np.uint8).ravel()
        if A.ndim != 2 or y.shape[0] != A.shape[1]:
            raise ValueError(f"dimension mismatch: A is {A.shape}, y has length {y.shape[0]}")
        # x A = y  <=>  A^T x^T = y^T; eliminate on the augmented system.
        aug = np.concatenate([A.T, y[:, None]], axis=1)
        R, pivots = self.rref(aug)
        ncols = A.shape[0]
        if ncols in pivots:
            return SolveStatus.INCONSISTENT, None
        if len(pivots) < ncols:
            return SolveStatus.UNDERDETERMINED, None
        x = np.zeros(ncols, dtype=np.uint8)
        for i, c in enumerate(pivots):
            x[c] = R[i, ncols]
        return SolveStatus.UNIQUE, x

    def random_matrix(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        """Matrix with i.i.d. uniform entries over the field."""
        if rows < 0 or cols < 0:
            raise ValueError("dimensions must be nonnegative")
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.uint8)


class SolveStatus(Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


@lru_cache(maxsize=None)
def get_field(q: int) -> GF:
    """Shared per-order field instance (tables are immutable)."""
    return GF(q)


def field_mul(a: int, b: int, f: FieldSpec) -> int:
    return get_field(f.q).mul(a, b)


def mat_rank(A: np.ndarray, f: FieldSpec) -> int:
    return get_field(f.q).mat_rank(A)


def mat_solve(A: np.ndarray, y: np.ndarray, f: FieldSpec):
    return get_field(f.q).mat_solve(A, y)


def random_matrix(rows: int, cols: int, f: FieldSpec, rng: np.random.Generator) -> np.ndarray:
    return get_field(f.q).random_matrix(rows, cols, rng)
