"""Matrices over ``k[x]/(x^c)``, stored as arrays of shape ``(rows, cols, c)``."""

from __future__ import annotations

from functools import total_ordering

import numpy as np

from .errors import PrecisionError
from .field import Field
from .ring import Poly


@total_ordering
class _Infinity:
    """Valuation of zero. Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("artifact-infinity")

    def __repr__(self) -> str:
        return "INF"

    def to_json(self) -> str:
        return "inf"


INF = _Infinity()


def valuation(s: np.ndarray):
    nz = np.flatnonzero(s)
    return int(nz[0]) if nz.size else INF


def valuations(A: np.ndarray) -> list[list]:
    return [[valuation(A[i, j]) for j in range(A.shape[1])] for i in range(A.shape[0])]


def zeros(F: Field, r: int, s: int, c: int) -> np.ndarray:
    return F.zeros((r, s, c))


def identity(F: Field, r: int, c: int) -> np.ndarray:
    out = F.zeros((r, r, c))
    for i in range(r):
        out[i, i, 0] = F.one
    return out


def from_polys(F: Field, rows, c: int) -> np.ndarray:
    """Matrix of polynomials in ``x`` (z-free) truncated at ``x^c``."""
    mat = [[Poly.coerce(e) for e in row] for row in rows]
    r = len(mat)
    s = len(mat[0]) if r else 0
    out = F.zeros((r, s, c))
    for i in range(r):
        for j in range(s):
            for a, b, v in mat[i][j].terms:
                if b:
                    raise ValueError("series entries must not involve z")
                if a < c:
                    out[i, j, a] = F.reduce(out[i, j, a] + F.scalar(v))
    return out


def truncate(A: np.ndarray, c: int) -> np.ndarray:
    return A[..., :c].copy()


def toeplitz(F: Field, s: np.ndarray) -> np.ndarray:
    """Lower-triangular matrix of multiplication by the series ``s``."""
    c = s.shape[0]
    T = F.zeros((c, c))
    for k in range(c):
        T[k:, k] = s[:c - k]
    return T


def smul(F: Field, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Product of a series ``f`` with the series stored along the last axis of ``g``."""
    T = toeplitz(F, f)
    shape = g.shape
    flat = g.reshape(-1, shape[-1])
    return F.matmul(flat, T.T).reshape(shape)


def to_operator(F: Field, A: np.ndarray) -> np.ndarray:
    r, s, c = A.shape
    out = F.zeros((r * c, s * c))
    for i in range(r):
        for j in range(s):
            if np.count_nonzero(A[i, j]):
                out[i * c:(i + 1) * c, j * c:(j + 1) * c] = toeplitz(F, A[i, j])
    return out


def from_operator(M: np.ndarray, r: int, s: int, c: int) -> np.ndarray:
    out = np.empty((r, s, c), dtype=M.dtype)
    for i in range(r):
        for j in range(s):
            out[i, j] = M[i * c:(i + 1) * c, j * c]
    return out


def matmul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    r, k, c = A.shape
    k2, s, c2 = B.shape
    if k != k2 or c != c2:
        raise ValueError("series matrix shapes do not match")
    if r == 0 or s == 0:
        return F.zeros((r, s, c))
    if k == 0:
        return F.zeros((r, s, c))
    return from_operator(F.matmul(to_operator(F, A), to_operator(F, B)), r, s, c)


def unit_inverse(F: Field, u: np.ndarray) -> np.ndarray:
    """Inverse of a unit series (nonzero constant term)."""
    c = u.shape[0]
    if u[0] == 0:
        raise PrecisionError("series is not a unit at this precision")
    inv0 = F.inv(u[0])
    out = F.zeros((c,))
    out[0] = inv0
    for k in range(1, c):
        acc = F.zero
        for j in range(1, k + 1):
            acc = acc + u[j] * out[k - j]
        out[k] = F.reduce(-acc * inv0) if F.q is not None else -acc * inv0
    return out


def shift_down(F: Field, s: np.ndarray, v: int) -> np.ndarray:
    """``s / x^v`` for ``s`` of valuation at least ``v``; unknown top coefficients become 0."""
    c = s.shape[0]
    out = F.zeros((c,))
    out[:c - v] = s[v:]
    return out
