"""Canonical filtrations, generalized rank and quasi-free types.

Graded pieces are modules over ``k[x]/(x^p)``. Their isomorphism type over
``k[[x]]`` is read off by comparing Jordan partitions at ``p`` and ``2p``:
blocks present at both precisions are torsion, blocks that grow by exactly
``p`` are free. Anything else means the precision was too small.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DefectError, PrecisionError
from .field import Field
from .linalg import Echelon
from .modules import LocalModule, reduction_map


@dataclass(frozen=True)
class CxInvariants:
    """A f.g. ``k[[x]]``-module: ``rank`` free copies plus torsion ``k[x]/(x^t)``."""

    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def torsion_length(self) -> int:
        return sum(self.torsion)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def __add__(self, other: "CxInvariants") -> "CxInvariants":
        return CxInvariants(self.rank + other.rank,
                            tuple(sorted(self.torsion + other.torsion, reverse=True)))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def combine_partitions(lam_p: list[int], lam_2p: list[int], p: int) -> CxInvariants:
    """Split Jordan data at precisions ``p`` and ``2p`` into rank and torsion."""
    a, b = Counter(lam_p), Counter(lam_2p)
    common = a & b
    torsion = sorted(common.elements(), reverse=True)
    free_p = sorted((a - common).elements())
    free_2p = sorted((b - common).elements())
    if len(free_p) != len(free_2p) or any(y - x != p for x, y in zip(free_p, free_2p)):
        raise PrecisionError(
            f"Jordan blocks {sorted(lam_p, reverse=True)} at p={p} and "
            f"{sorted(lam_2p, reverse=True)} at 2p do not follow the stabilization law")
    if any(t >= p for t in torsion):
        raise PrecisionError(f"torsion length reaches the working precision p={p}")
    return CxInvariants(len(free_p), tuple(torsion))


def cx_invariants(X: np.ndarray, X2: np.ndarray, p: int, F: Field) -> CxInvariants:
    """Invariants of an ``x``-module from its action at ``p`` (``X``) and ``2p`` (``X2``)."""
    return combine_partitions(linalg.jordan_partition(F, X), linalg.jordan_partition(F, X2), p)


def induced(F: Field, op: np.ndarray, U: Echelon, W: Echelon) -> np.ndarray:
    """Matrix of ``op`` on ``U/W`` (both ``op``-stable, ``W`` inside ``U``)."""
    Q = Echelon.span(F, U.d, W.reduce(U.basis()))
    if Q.dim == 0:
        return F.zeros((0, 0))
    return Q.coords(W.reduce(F.matmul(op, Q.basis())))


# filtrations at a single precision


def _first_chain(M: LocalModule) -> list[Echelon]:
    F = M.field
    out = [Echelon.full(F, M.dim)]
    for _ in range(M.n):
        prev = out[-1]
        out.append(Echelon.span(F, M.dim, F.matmul(M.Z, prev.basis())))
    return out


def _second_chain(M: LocalModule) -> list[Echelon]:
    F = M.field
    out = []
    for i in range(1, M.n + 2):
        Zk = linalg.matpow(F, M.Z, M.n + 1 - i)
        out.append(Echelon.span(F, M.dim, linalg.nullspace(F, Zk)))
    return out


def _second_chain_stable(M: LocalModule, lift: int) -> list[Echelon]:
    """``ker z^j`` at precision ``lift`` reduced to ``M.p``.

    On ``M/x^p M`` the raw kernel also holds ``m`` with ``z^j m`` in ``x^p M``;
    those die under reduction once ``lift - p`` exceeds the Artin-Rees
    constant, while the true kernel survives.
    """
    F = M.field
    if not M.rebuildable():
        raise PrecisionError("module cannot be rebuilt; structural input required")
    big = M.at(lift)
    red = reduction_map(big, M.p)
    return [Echelon.span(F, M.dim, F.matmul(red, K.basis())) for K in _second_chain(big)]


def _chain(M: LocalModule, which: str, base: int) -> list[Echelon]:
    """Chain at ``M.p``; ``base`` is the precision whose doubling is being checked."""
    if which == "first":
        return _first_chain(M)
    if which == "second":
        return _second_chain_stable(M, M.p + base)
    raise ValueError(f"unknown filtration {which!r}")


def _graded_ops(M: LocalModule, which: str, base: int) -> tuple[list[Echelon], list[np.ndarray]]:
    ch = _chain(M, which, base)
    return ch, [induced(M.field, M.X, ch[i], ch[i + 1]) for i in range(M.n)]


@dataclass(frozen=True)
class FiltrationReport:
    which: str
    chain: tuple[int, ...]
    graded: tuple[CxInvariants, ...]
    graded_dims: tuple[int, ...]

    def ranks(self) -> tuple[int, ...]:
        return tuple(g.rank for g in self.graded)

    def to_json(self) -> dict:
        return {"which": self.which, "chain": list(self.chain),
                "graded": [g.to_json() for g in self.graded],
                "graded_dims": list(self.graded_dims)}


def _double(M: LocalModule) -> LocalModule:
    if not M.rebuildable():
        raise PrecisionError("module cannot be rebuilt at 2p; structural input required")
    return M.at(2 * M.p)


@lru_cache(maxsize=512)
def _filtration(M: LocalModule, which: str) -> FiltrationReport:
    ch, ops = _graded_ops(M, which, M.p)
    _, ops2 = _graded_ops(_double(M), which, M.p)
    for a, b in zip(ch[1:], ch[:-1]):
        if not b.contains(a.basis()):
            raise DefectError(f"{which} filtration is not decreasing")
    graded = tuple(cx_invariants(a, b, M.p, M.field) for a, b in zip(ops, ops2))
    return FiltrationReport(which, tuple(e.dim for e in ch), graded,
                            tuple(a.shape[0] for a in ops))


def first_filtration(M: LocalModule) -> FiltrationReport:
    """``M_i = z^{i-1} M`` for ``i = 1..n+1`` and the invariants of ``M_i / M_{i+1}``."""
    return _filtration(M, "first")


def second_filtration(M: LocalModule) -> FiltrationReport:
    """``M^{(i)} = ker z^{n+1-i}`` for ``i = 1..n+1`` and the graded invariants.

    The kernels are stabilized: see :func:`_second_chain_stable`.
    """
    return _filtration(M, "second")


def filtration(M: LocalModule, which: str) -> FiltrationReport:
    return _filtration(M, which)


def check_inclusion(M: LocalModule) -> bool:
    """``M_i`` is contained in ``M^{(i)}`` for every level, as subspaces."""
    a, b = _first_chain(M), _chain(M, "second", M.p)
    return all(y.contains(x.basis()) for x, y in zip(a, b))


# rank


@lru_cache(maxsize=512)
def module_invariants(M: LocalModule) -> CxInvariants:
    """``M`` itself as a ``k[[x]]``-module (rank and x-torsion)."""
    M2 = _double(M)
    return cx_invariants(M.X, M2.X, M.p, M.field)


def slope_rank(M: LocalModule) -> int:
    M2 = _double(M)
    diff = M2.dim - M.dim
    if diff % M.p:
        raise PrecisionError(f"dimension growth {diff} is not a multiple of p={M.p}")
    return diff // M.p


def generalized_rank(M: LocalModule) -> int:
    """Slope of ``dim`` under precision doubling, cross-checked against graded ranks."""
    slope = slope_rank(M)
    graded = sum(first_filtration(M).ranks())
    if slope != graded:
        raise PrecisionError(
            f"precision-slope rank {slope} disagrees with graded rank {graded}")
    return slope


# characteristic functions


@dataclass(frozen=True)
class CharFunction:
    values: tuple[int, ...]

    def increments(self) -> tuple[int, ...]:
        v = self.values
        return tuple(v[k] - v[k - 1] for k in range(1, len(v)))

    def is_convex(self) -> bool:
        d = self.increments()
        return all(d[i] <= d[i + 1] for i in range(len(d) - 1))

    def is_concave(self) -> bool:
        d = self.increments()
        return all(d[i] >= d[i + 1] for i in range(len(d) - 1))

    def __le__(self, other: "CharFunction") -> bool:
        return len(self.values) == len(other.values) and all(
            a <= b for a, b in zip(self.values, other.values))

    def to_json(self) -> list[int]:
        return list(self.values)


def cumulate(ranks: tuple[int, ...]) -> CharFunction:
    """``F(k) = sum of ranks of levels n+1-k..n``."""
    n = len(ranks)
    vals = [0]
    for k in range(1, n + 1):
        vals.append(vals[-1] + ranks[n - k])
    return CharFunction(tuple(vals))


def char_function(M: LocalModule, which: str = "first") -> CharFunction:
    return cumulate(filtration(M, which).ranks())


def type_ranks(m: tuple[int, ...]) -> tuple[int, ...]:
    """Graded ranks ``m'_i = sum_{j>=i} m_j`` of a quasi-free module of type ``m``."""
    out, acc = [], 0
    for v in reversed(m):
        acc += v
        out.append(acc)
    return tuple(reversed(out))


def type_char_function(m: tuple[int, ...]) -> CharFunction:
    return cumulate(type_ranks(m))


def generic_type(R: int, n: int) -> tuple[int, ...]:
    """Type of ``q O_n + O_r`` with ``R = q n + r``."""
    q, r = divmod(R, n)
    m = [0] * n
    m[n - 1] += q
    if r:
        m[r - 1] += 1
    return tuple(m)


def generic_bound_holds(M: LocalModule) -> bool:
    F = char_function(M, "first")
    R = F.values[-1]
    return F <= type_char_function(generic_type(R, M.n))


# quasi-free types


@dataclass(frozen=True)
class QuasiFreeType:
    m: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def R(self) -> int:
        return sum((i + 1) * v for i, v in enumerate(self.m))

    def char_function(self) -> CharFunction:
        return type_char_function(self.m)

    def to_json(self) -> list[int]:
        return list(self.m)


def naive_min_generators(M: LocalModule) -> int:
    """``dim M/(x, z)M``."""
    if M.dim == 0:
        return 0
    F = M.field
    return M.dim - linalg.rank(F, np.concatenate([M.X, M.Z], axis=1))


def lemma_dims(M: LocalModule) -> tuple[int, ...]:
    """``d_i = dim z^i M / x z^i M`` for ``i = 0..n-1``."""
    F = M.field
    out = []
    B = F.eye(M.dim)
    for _ in range(M.n):
        S = Echelon.span(F, M.dim, B)
        xs = Echelon.span(F, M.dim, F.matmul(M.X, S.basis()))
        out.append(S.dim - xs.dim)
        B = F.matmul(M.Z, S.basis())
    return tuple(out)


def invert_lemma(d: tuple[int, ...]) -> tuple[int, ...]:
    """Solve ``d_i = sum_{j>i} (j-i) m_j`` for ``m_1..m_n``."""
    n = len(d)
    dd = list(d) + [0, 0]
    # second difference of d recovers m_{i+1}
    return tuple(dd[i] - 2 * dd[i + 1] + dd[i + 2] for i in range(n))


def _route_graded(M: LocalModule) -> tuple[int, ...] | None:
    rep = first_filtration(M)
    if any(g.torsion for g in rep.graded):
        return None
    r = rep.ranks()
    return tuple(r[i] - (r[i + 1] if i + 1 < len(r) else 0) for i in range(len(r)))


def _route_lemma(M: LocalModule) -> tuple[int, ...] | None:
    m = invert_lemma(lemma_dims(M))
    if any(v < 0 for v in m):
        return None
    if module_invariants(M).torsion:
        return None
    if naive_min_generators(M) != sum(m):
        return None
    return m


def quasi_free_type(M: LocalModule) -> QuasiFreeType | None:
    """The type ``(m_1..m_n)`` if ``M`` is quasi-free, else ``None``."""
    a = _route_graded(M)
    b = _route_lemma(M)
    if a != b:
        raise DefectError(f"quasi-free routes disagree: graded {a}, dimension formula {b}")
    return None if a is None else QuasiFreeType(a)
