"""Torsion-free modules over ``O_2``: Smith reduction over ``k[[x]]``,
classification into ``(+) I_{n_i} + m O_2 + q O_C``, duals and reflexivity.

Torsion-free modules are handled as lattices: a free ``k[x]/(x^c)``-module
with a nilpotent ``z`` given by a series matrix. The lattice of a
``LocalModule`` is ``M / x^c M`` where ``c`` is its smallest Jordan block,
which removes the truncation boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, series
from .errors import DefectError, PrecisionError, PreconditionError
from .field import Field
from .filtrations import CharFunction, char_function, cumulate, filtration, module_invariants
from .linalg import Echelon
from .modules import Cokernel, Free, Kernel, LocalModule, Morph, SubQuot, Sum, realize, standard_expr
from .ring import Poly
from .series import INF


# Smith reduction over the truncated DVR


@dataclass(frozen=True)
class ExtMatrix:
    """An ``r x s`` matrix over ``k[x]/(x^p)``; ``data[i, j, a]`` is the x^a coefficient."""

    field: Field
    data: np.ndarray

    @classmethod
    def from_polys(cls, rows, p: int, field: Field | None = None) -> "ExtMatrix":
        F = field or Field()
        return cls(F, series.from_polys(F, rows, p))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def precision(self) -> int:
        return self.data.shape[2]

    def valuation_table(self) -> list[list]:
        return series.valuations(self.data)


@dataclass(frozen=True)
class SmithResult:
    """``P A Q = D`` with ``D`` diagonal-with-padding, entries ``x^{v_i}``."""

    diagonal: tuple  # valuation per diagonal slot, INF for zero
    zero_rows: int
    zero_cols: int
    P: np.ndarray
    Q: np.ndarray
    Pinv: np.ndarray
    Qinv: np.ndarray
    D: np.ndarray

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.diagonal if v is not INF))

    @property
    def rank(self) -> int:
        return len(self.valuations)

    def to_json(self) -> dict:
        return {"valuations": list(self.valuations), "zero_rows": self.zero_rows,
                "zero_cols": self.zero_cols}


def dvr_smith(A: ExtMatrix | np.ndarray, field: Field | None = None) -> SmithResult:
    """Diagonalize over ``k[x]/(x^c)`` by minimal-valuation pivoting.

    Ties are broken row-major. All steps are exact modulo ``x^c``: clearing an
    entry of valuation ``>= v`` against a pivot ``x^v u`` only needs the
    quotient modulo ``x^{c-v}``, and its unknown tail is multiplied by ``x^v``.
    """
    if isinstance(A, ExtMatrix):
        F, D = A.field, A.data.copy()
    else:
        F, D = field or Field(), np.array(A, copy=True)
    r, s, c = D.shape
    P, Pinv = series.identity(F, r, c), series.identity(F, r, c)
    Q, Qinv = series.identity(F, s, c), series.identity(F, s, c)
    diag: list = []
    for t in range(min(r, s)):
        best, where = INF, None
        for i in range(t, r):
            for j in range(t, s):
                v = series.valuation(D[i, j])
                if v < best:
                    best, where = v, (i, j)
        if where is None:
            break
        i, j = where
        if i != t:
            D[[t, i]] = D[[i, t]]
            P[[t, i]] = P[[i, t]]
            Pinv[:, [t, i]] = Pinv[:, [i, t]]
        if j != t:
            D[:, [t, j]] = D[:, [j, t]]
            Q[:, [t, j]] = Q[:, [j, t]]
            Qinv[[t, j]] = Qinv[[j, t]]
        v = best
        u = series.shift_down(F, D[t, t], v)
        w = series.unit_inverse(F, u)
        D[t] = series.smul(F, w, D[t])
        P[t] = series.smul(F, w, P[t])
        Pinv[:, t] = series.smul(F, u, Pinv[:, t])
        for i in range(t + 1, r):
            if series.valuation(D[i, t]) is INF:
                continue
            f = series.shift_down(F, D[i, t], v)
            D[i] = F.sub(D[i], series.smul(F, f, D[t]))
            P[i] = F.sub(P[i], series.smul(F, f, P[t]))
            Pinv[:, t] = F.add(Pinv[:, t], series.smul(F, f, Pinv[:, i]))
        for j in range(t + 1, s):
            if series.valuation(D[t, j]) is INF:
                continue
            f = series.shift_down(F, D[t, j], v)
            D[:, j] = F.sub(D[:, j], series.smul(F, f, D[:, t]))
            Q[:, j] = F.sub(Q[:, j], series.smul(F, f, Q[:, t]))
            Qinv[t] = F.add(Qinv[t], series.smul(F, f, Qinv[j]))
        diag.append(v)
    k = len(diag)
    if k < min(r, s):
        diag.extend([INF] * (min(r, s) - k))
    return SmithResult(tuple(diag), r - k, s - k, P, Q, Pinv, Qinv, D)


# normal forms


@dataclass(frozen=True)
class TorsionFreeNF:
    ideals: tuple[int, ...] = ()
    m_free: int = 0
    q_line: int = 0

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.ideals) or self.m_free < 0 or self.q_line < 0:
            raise PreconditionError("normal form entries must be positive counts")
        object.__setattr__(self, "ideals", tuple(sorted(self.ideals, reverse=True)))

    @property
    def R(self) -> int:
        return 2 * len(self.ideals) + 2 * self.m_free + self.q_line

    @property
    def index(self) -> int:
        return sum(self.ideals)

    def to_json(self) -> dict:
        return {"ideals": list(self.ideals), "free": self.m_free, "line": self.q_line}

    @classmethod
    def from_json(cls, d: dict) -> "TorsionFreeNF":
        extra = set(d) - {"ideals", "free", "line"}
        if extra:
            raise PreconditionError(f"unknown normal form keys {sorted(extra)}")
        return cls(tuple(int(k) for k in d.get("ideals", ())), int(d.get("free", 0)),
                   int(d.get("line", 0)))


def classify_extension(r: int, s: int, A: ExtMatrix) -> TorsionFreeNF:
    """Middle term of ``0 -> r O_C -> N -> s O_C -> 0`` with class ``A``."""
    if A.shape != (r, s):
        raise PreconditionError(f"class matrix has shape {A.shape}, expected {(r, s)}")
    sm = dvr_smith(A)
    ideals = tuple(v for v in sm.valuations if v >= 1)
    units = sum(1 for v in sm.valuations if v == 0)
    return TorsionFreeNF(ideals, units, sm.zero_rows + sm.zero_cols)


@dataclass(frozen=True)
class NFInvariants:
    R: int
    index: int
    char_first: CharFunction
    char_second: CharFunction
    graded_torsion: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"R": self.R, "index": self.index, "char_first": self.char_first.to_json(),
                "char_second": self.char_second.to_json(),
                "graded_torsion": [list(t) for t in self.graded_torsion]}


def nf_invariants(nf: TorsionFreeNF) -> NFInvariants:
    """Closed-form invariants, summed over the summands."""
    t, m, q = len(nf.ideals), nf.m_free, nf.q_line
    first = cumulate((t + m + q, t + m))
    second = cumulate((t + m, t + m + q))
    return NFInvariants(nf.R, nf.index, first, second, (nf.ideals, ()))


def nf_expr(nf: TorsionFreeNF):
    parts = [standard_expr("ideal_point", {"k": k}, 2) for k in nf.ideals]
    parts += [Free(2, 1)] * nf.m_free
    parts += [standard_expr("structure", {"i": 1}, 2)] * nf.q_line
    if not parts:
        return SubQuot(2, 0, None, (), "zero", True)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def nf_realize(nf: TorsionFreeNF, p: int, field: Field | None = None) -> LocalModule:
    if nf.ideals and p <= max(nf.ideals):
        raise PrecisionError(f"precision {p} must exceed the largest ideal index")
    return realize(nf_expr(nf), p, field)


# lattices


@dataclass(frozen=True, eq=False)
class Lattice:
    """A free ``k[x]/(x^c)``-module of rank ``r`` with ``z`` acting by ``Z`` (r x r x c)."""

    field: Field
    n: int
    Z: np.ndarray

    @property
    def rank(self) -> int:
        return self.Z.shape[0]

    @property
    def precision(self) -> int:
        return self.Z.shape[2]

    def truncate(self, c: int) -> "Lattice":
        return Lattice(self.field, self.n, series.truncate(self.Z, c))


def structure_lattice(F: Field, n: int, c: int) -> Lattice:
    """``O_n`` itself: basis ``1, z, .., z^{n-1}``."""
    Z = F.zeros((n, n, c))
    for b in range(n - 1):
        Z[b + 1, b, 0] = F.one
    return Lattice(F, n, Z)


def lattice_of(M: LocalModule, precision: int | None = None) -> Lattice:
    """The lattice of an x-torsion-free module, read from ``M`` at ``precision``."""
    F = M.field
    if module_invariants(M).torsion:
        raise PreconditionError("module has x-torsion; it has no lattice")
    N = M.at(precision) if precision else M
    if N.dim == 0:
        return Lattice(F, M.n, F.zeros((0, 0, 1)))
    c = min(linalg.jordan_partition(F, N.X))
    XN = Echelon.span(F, N.dim, N.X)
    gens = [i for i in range(N.dim) if i not in set(XN.pivots)]
    r = len(gens)
    Wc = Echelon.span(F, N.dim, linalg.matpow(F, N.X, c))
    cols = []
    for i in gens:
        v = F.zeros((N.dim, 1))
        v[i, 0] = F.one
        for _ in range(c):
            cols.append(v)
            v = F.matmul(N.X, v)
    B = Wc.reduce(np.concatenate(cols, axis=1))
    if linalg.rank(F, B) != r * c:
        raise DefectError("module modulo x^c is not free")
    targets = Wc.reduce(F.matmul(N.Z, np.concatenate([cols[j * c] for j in range(r)], axis=1)))
    sol = linalg.solve(F, B, targets)
    if sol is None:
        raise DefectError("z action does not preserve the lattice")
    Z = F.zeros((r, r, c))
    for j in range(r):
        for i in range(r):
            Z[i, j] = sol[i * c:(i + 1) * c, j]
    return Lattice(F, M.n, Z)


@dataclass(frozen=True, eq=False)
class HomLattice:
    """``Hom(L1, L2)`` with basis ``basis[k]`` (r2 x r1 x c) and its ``z`` action."""

    lattice: Lattice
    basis: np.ndarray  # (k, r2, r1, c)
    loss: int
    qinv: np.ndarray  # coordinates of vec(phi) are rows ``keep`` of qinv @ vec(phi)
    keep: tuple[int, ...]


def hom_lattice(L1: Lattice, L2: Lattice) -> HomLattice:
    """Solve ``Z2 phi = phi Z1`` over ``k[x]/(x^c)``.

    Coordinates of a kernel vector are exact only modulo ``x^{c - v}`` where
    ``v`` is the largest finite Smith valuation of the defining map, so the
    result is returned at that reduced precision.
    """
    F = L1.field
    c = min(L1.precision, L2.precision)
    Z1, Z2 = series.truncate(L1.Z, c), series.truncate(L2.Z, c)
    r1, r2 = L1.rank, L2.rank
    N = r1 * r2
    L = F.zeros((N, N, c))
    for a in range(r2):
        for b in range(r1):
            row = a * r1 + b
            for a2 in range(r2):
                L[row, a2 * r1 + b] = F.add(L[row, a2 * r1 + b], Z2[a, a2])
            for b2 in range(r1):
                L[row, a * r1 + b2] = F.sub(L[row, a * r1 + b2], Z1[b2, b])
    sm = dvr_smith(L, F)
    loss = max(sm.valuations, default=0)
    c2 = c - loss
    if c2 <= 2 * loss or c2 < 2:
        raise PrecisionError(f"precision {c} is too small for Hom (valuations up to {loss})")
    t = sm.rank
    keep = list(range(t, N))
    basis = np.stack([sm.Q[:, j, :c2].reshape(r2, r1, c2) for j in keep]) if keep else \
        F.zeros((0, r2, r1, c2))
    # z acts by post-composition with Z2
    k = len(keep)
    Zh = F.zeros((k, k, c2))
    Qinv = sm.Qinv[:, :, :c2]
    Z2t = series.truncate(Z2, c2)
    for j in range(k):
        img = series.matmul(F, Z2t, basis[j]).reshape(N, 1, c2)
        coords = series.matmul(F, Qinv, img)
        for i in range(k):
            Zh[i, j] = coords[keep[i], 0]
    return HomLattice(Lattice(F, L1.n, Zh), basis, loss, Qinv, tuple(keep))


def dual_lattice(L: Lattice) -> HomLattice:
    return hom_lattice(L, structure_lattice(L.field, L.n, L.precision))


def double_dual_is_iso(L: Lattice) -> bool:
    """Whether evaluation ``L -> L**`` is an isomorphism."""
    F = L.field
    D1 = dual_lattice(L)
    D2 = dual_lattice(D1.lattice)
    c = D2.lattice.precision
    r, k1 = L.rank, D1.lattice.rank
    n = L.n
    # ev(e_i) is the n x k1 matrix whose column j is b_j e_i
    b1 = D1.basis[..., :c]
    E = F.zeros((D2.lattice.rank, r, c))
    for i in range(r):
        ev = F.zeros((n * k1, 1, c))
        for a in range(n):
            for j in range(k1):
                ev[a * k1 + j, 0] = b1[j, a, i]
        coords = series.matmul(F, D2.qinv, ev)
        for kk, idx in enumerate(D2.keep):
            E[kk, i] = coords[idx, 0]
    if E.shape[0] != E.shape[1]:
        return False
    res = dvr_smith(E, F)
    return res.rank == r and all(v == 0 for v in res.valuations)


def classify_lattice(L: Lattice) -> TorsionFreeNF:
    """Normal form of an ``O_2`` lattice via its extension class.

    ``ker z`` is a saturated sublattice (rank ``r``) and the quotient is free of
    rank ``s``; ``A`` records ``z f_j`` in a basis of ``ker z``.
    """
    if L.n != 2:
        raise PreconditionError("normal forms are only available for n = 2")
    F = L.field
    R, c = L.rank, L.precision
    if R == 0:
        return TorsionFreeNF()
    sm = dvr_smith(L.Z, F)
    t = sm.rank
    vmax = max(sm.valuations, default=0)
    if c - vmax <= vmax:
        raise PrecisionError("lattice precision too small to classify")
    ker = list(range(t, R))
    A = F.zeros((len(ker), t, c))
    for j in range(t):
        img = series.matmul(F, L.Z, sm.Q[:, j:j + 1, :])
        coords = series.matmul(F, sm.Qinv, img)
        for i, idx in enumerate(ker):
            A[i, j] = coords[idx, 0]
    return classify_extension(len(ker), t, ExtMatrix(F, A))


def _lattice_precision(M: LocalModule) -> int:
    return 2 * M.p


def classify_torsion_free(M: LocalModule) -> TorsionFreeNF:
    """Normal form of an x-torsion-free module over ``A_{2,p}``."""
    return classify_lattice(lattice_of(M, _lattice_precision(M)))


def nf_dual(nf: TorsionFreeNF, p: int | None = None, field: Field | None = None) -> TorsionFreeNF:
    p = p or (max(nf.ideals, default=0) + 3)
    M = nf_realize(nf, p, field)
    D = dual_lattice(lattice_of(M, 2 * p))
    return classify_lattice(D.lattice)


def reflexivity_check(M: LocalModule, torsion_free_certificate: bool | None = None) -> bool:
    """Whether ``M -> M**`` (duals into ``A``) is an isomorphism.

    A module with x-torsion is never reflexive: its torsion maps to zero in
    the dual of any torsion-free module.
    """
    if torsion_free_certificate is None:
        torsion_free_certificate = M.expr.torsion_free()
    if module_invariants(M).torsion:
        if torsion_free_certificate:
            raise DefectError("module certified torsion-free has x-torsion")
        return False
    return double_dual_is_iso(lattice_of(M, _lattice_precision(M)))


# kernels of maps onto torsion modules


def _n_expr(m: tuple[int, int]):
    parts = [standard_expr("structure", {"i": 1}, 2)] * m[0] + [Free(2, 1)] * m[1]
    if not parts:
        raise PreconditionError("the quasi-free module N is zero")
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def _t_expr(T: tuple[int, ...]):
    parts = [standard_expr("torsion", {"k": k}, 2) for k in T]
    if not parts:
        return SubQuot(2, 0, None, (), "zero", True)
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def generic_surjection(m: tuple[int, int], T: tuple[int, ...], rng: np.random.Generator,
                       field: Field) -> tuple[tuple[Poly, ...], ...]:
    """Random constant matrix ``N -> T`` (rows: torsion summands)."""
    g = m[0] + m[1]
    lo, hi = (1, 9) if field.q is None else (1, field.q - 1)
    return tuple(tuple(Poly.const(int(rng.integers(lo, hi + 1))) for _ in range(g))
                 for _ in T)


def reduction_surjection(m: tuple[int, int], T: tuple[int, ...]) -> tuple[tuple[Poly, ...], ...]:
    """Send generator ``j`` onto torsion summand ``j`` (needs ``len(T) <= g``)."""
    g = m[0] + m[1]
    if len(T) > g:
        raise PreconditionError("more torsion summands than generators")
    return tuple(tuple(Poly.const(1) if j == i else Poly() for j in range(g))
                 for i in range(len(T)))


@dataclass(frozen=True)
class KernelClassification:
    nf: TorsionFreeNF
    kernel: LocalModule
    validated: bool

    def to_json(self) -> dict:
        return {"nf": self.nf.to_json(), "kernel_dim": self.kernel.dim,
                "validated": self.validated}


def classify_kernel(N_type, T, pi=None, p: int | None = None, field: Field | None = None,
                    seed: int = 0) -> KernelClassification:
    """Normal form of ``ker(pi: N -> T)`` for quasi-free ``N`` and torsion ``T``.

    ``pi`` is a polynomial matrix, ``"reduction"`` or ``"generic"`` (default:
    reduction when possible, else generic from ``seed``).
    """
    F = field or Field()
    m = tuple(int(v) for v in (N_type.m if hasattr(N_type, "m") else N_type))
    if len(m) != 2:
        raise PreconditionError("classify_kernel needs a type (m_1, m_2) with n = 2")
    T = tuple(sorted((int(k) for k in T), reverse=True))
    if any(k < 1 for k in T):
        raise PreconditionError("torsion lengths must be positive")
    p = p or (max(T, default=0) + 3)
    if T and p <= max(T):
        raise PrecisionError("precision must exceed the torsion lengths")
    if pi is None:
        pi = "reduction" if len(T) <= sum(m) else "generic"
    if isinstance(pi, str):
        if pi == "reduction":
            pi = reduction_surjection(m, T)
        elif pi == "generic":
            pi = generic_surjection(m, T, np.random.default_rng(seed), F)
        else:
            raise PreconditionError(f"unknown map {pi!r}")
    src, tgt = _n_expr(m), _t_expr(T)
    f = Morph(src, tgt, tuple(tuple(Poly.coerce(e) for e in row) for row in pi))
    if realize(Cokernel(f), p, F).dim != 0:
        raise PreconditionError("map onto the torsion module is not surjective")
    K = realize(Kernel(f), p, F)
    nf = classify_torsion_free(K)
    _validate(K, nf)
    return KernelClassification(nf, K, True)


def _validate(K: LocalModule, nf: TorsionFreeNF) -> None:
    W = nf_realize(nf, K.p, K.field)
    ok = (K.dim == W.dim
          and char_function(K, "first") == char_function(W, "first")
          and char_function(K, "second") == char_function(W, "second")
          and filtration(K, "first").graded == filtration(W, "first").graded
          and filtration(K, "second").graded == filtration(W, "second").graded)
    if not ok:
        raise DefectError(f"kernel invariants do not match the normal form {nf.to_json()}")


def nf_presentation(nf: TorsionFreeNF) -> tuple[tuple[int, int], tuple[int, ...], tuple]:
    """``(N type, T, pi)`` with ``ker(pi) = nf``: one ``O_2 -> T_k`` per ideal."""
    t = len(nf.ideals)
    m = (nf.q_line, t + nf.m_free)
    g = m[0] + m[1]
    pi = tuple(tuple(Poly.const(1) if j == nf.q_line + i else Poly() for j in range(g))
               for i in range(t))
    return m, nf.ideals, pi
