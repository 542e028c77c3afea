"""Dense exact linear algebra over a :class:`~artifact.field.Field`.

Vectors are columns. Subspaces are carried as reduced row-echelon bases
(:class:`Echelon`), which makes reduction modulo a subspace and coordinate
extraction a single matrix product.
"""

from __future__ import annotations

import numpy as np

from .field import Field


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``A`` and its pivot columns."""
    A = F.reduce(np.array(A, dtype=F.dtype, copy=True))
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = A[r, c]
        if piv != 1:
            A[r] = F.reduce(A[r] * F.inv(piv))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = F.reduce(A[hit] - np.outer(col[hit], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: Field, A: np.ndarray) -> int:
    """Rank by forward elimination on a shrinking block."""
    A = F.reduce(np.array(A, dtype=F.dtype, copy=True))
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T.copy()
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = F.inv(A[r, c])
        below = A[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            rows_hit = r + 1 + hit
            factors = F.reduce(below[hit] * inv)
            A[rows_hit, c:] = F.reduce(A[rows_hit, c:] - np.outer(factors, A[r, c:]))
        r += 1
    return r


class Echelon:
    """A subspace of ``F^d`` stored as an RREF basis ``R`` (rows) with pivots."""

    __slots__ = ("F", "d", "R", "pivots")

    def __init__(self, F: Field, d: int, R: np.ndarray, pivots: list[int]):
        self.F = F
        self.d = d
        self.R = R
        self.pivots = pivots

    @classmethod
    def span(cls, F: Field, d: int, cols: np.ndarray | None) -> "Echelon":
        if cols is None or cols.shape[1] == 0:
            return cls(F, d, F.zeros((0, d)), [])
        R, piv = rref(F, cols.T)
        return cls(F, d, R, piv)

    @classmethod
    def zero(cls, F: Field, d: int) -> "Echelon":
        return cls(F, d, F.zeros((0, d)), [])

    @classmethod
    def full(cls, F: Field, d: int) -> "Echelon":
        return cls(F, d, F.eye(d), list(range(d)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> np.ndarray:
        """Basis vectors as columns."""
        return self.R.T.copy()

    def reduce(self, V: np.ndarray) -> np.ndarray:
        """Reduce the columns of ``V`` modulo this subspace (zero at pivots)."""
        if not self.pivots:
            return self.F.reduce(np.array(V, dtype=self.F.dtype, copy=True))
        coeff = V[self.pivots, :]
        return self.F.sub(V, self.F.matmul(self.R.T, coeff))

    def contains(self, V: np.ndarray) -> bool:
        return self.F.is_zero(self.reduce(V))

    def coords(self, V: np.ndarray) -> np.ndarray:
        """Coordinates of columns of ``V`` (assumed inside) in the RREF basis."""
        return self.F.reduce(np.array(V[self.pivots, :], dtype=self.F.dtype, copy=True))

    def sum(self, other: "Echelon") -> "Echelon":
        return Echelon.span(self.F, self.d, np.concatenate([self.basis(), other.basis()], axis=1))

    def __repr__(self) -> str:
        return f"Echelon(dim={self.dim}, ambient={self.d})"


def nullspace(F: Field, A: np.ndarray) -> np.ndarray:
    """Basis (columns) of ``{v : A v = 0}``."""
    rows, cols = A.shape
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    N = F.zeros((cols, len(free)))
    for j, c in enumerate(free):
        N[c, j] = F.one
        for i, pc in enumerate(piv):
            N[pc, j] = F.reduce(-R[i, c])
    return N


def colspace(F: Field, A: np.ndarray) -> Echelon:
    return Echelon.span(F, A.shape[0], A)


def solve(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """One solution ``X`` of ``A X = B``, or ``None`` when inconsistent."""
    rows, cols = A.shape
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(F, aug)
    if any(p >= cols for p in piv):
        return None
    X = F.zeros((cols, B.shape[1]))
    for i, pc in enumerate(piv):
        X[pc, :] = R[i, cols:]
    return X


def inverse(F: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    X = solve(F, A, F.eye(n))
    if X is None or rank(F, A) != n:
        raise ZeroDivisionError("matrix is singular")
    return X


def matpow(F: Field, A: np.ndarray, k: int) -> np.ndarray:
    out = F.eye(A.shape[0])
    base = A
    while k:
        if k & 1:
            out = F.matmul(out, base)
        k >>= 1
        if k:
            base = F.matmul(base, base)
    return out


def block_diag(F: Field, *mats: np.ndarray) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = F.zeros((r, c))
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def jordan_partition(F: Field, X: np.ndarray) -> list[int]:
    """Block sizes of a nilpotent ``X`` (weakly decreasing)."""
    d = X.shape[0]
    if d == 0:
        return []
    ranks = [d]
    B = F.eye(d)
    while ranks[-1] > 0:
        B = F.matmul(X, B)
        E = Echelon.span(F, d, B)
        ranks.append(E.dim)
        B = E.basis()
        if len(ranks) > d + 1:
            raise ValueError("operator is not nilpotent")
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes: list[int] = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exact)
    return sizes
