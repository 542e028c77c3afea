"""Finite-dimensional modules over ``A_{n,p} = k[x,z]/(x^p, z^n)``.

Every structural module is a subquotient ``U/W`` of a free module ``A^g``
truncated at x-precision ``p``. The recipe that produced it is kept as an
immutable expression, so the same module can be rebuilt at ``2p`` and the
precision-doubling checks have something to compare against. Truncating
from ``2p`` to ``p`` drops x-exponents ``>= p`` in the ambient free module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DefectError, PrecisionError, PreconditionError
from .field import Field
from .linalg import Echelon
from .ring import Poly, mult_operator

PolyMatrix = tuple[tuple[Poly, ...], ...]


# ambient free modules


def amb_dim(n: int, p: int, g: int) -> int:
    return g * n * p


@lru_cache(maxsize=256)
def ambient_ops(n: int, p: int, g: int, F: Field) -> tuple[np.ndarray, np.ndarray]:
    """Multiplication by x and z on ``A^g`` (block-major, then (a, b))."""
    X1 = mult_operator(Poly.mono(1, 0), n, p, F)
    Z1 = mult_operator(Poly.mono(0, 1), n, p, F)
    if not (F.is_zero(linalg.matpow(F, X1, p)) and F.is_zero(linalg.matpow(F, Z1, n))):
        raise DefectError("ambient multiplication operators are not nilpotent")
    return linalg.block_diag(F, *[X1] * g), linalg.block_diag(F, *[Z1] * g)


def poly_column(col: tuple[Poly, ...], n: int, p: int, F: Field) -> np.ndarray:
    """Ambient vector of a column of polynomials."""
    g = len(col)
    v = F.zeros((g * n * p,))
    for j, f in enumerate(col):
        for a, b, c in f.terms:
            if a < p and b < n:
                i = j * n * p + a * n + b
                v[i] = F.reduce(v[i] + F.scalar(c))
    return v


def poly_operator(mat: PolyMatrix, n: int, p: int, F: Field,
                  cols: int | None = None) -> np.ndarray:
    """Field matrix of a polynomial matrix ``A^{cols} -> A^{rows}``."""
    rows = len(mat)
    if cols is None:
        cols = len(mat[0]) if rows else 0
    d = n * p
    out = F.zeros((rows * d, cols * d))
    for i in range(rows):
        for j in range(cols):
            if not mat[i][j].is_zero():
                out[i * d:(i + 1) * d, j * d:(j + 1) * d] = mult_operator(mat[i][j], n, p, F)
    return out


def monomial_multiples(V: np.ndarray, n: int, p: int, g: int, F: Field) -> np.ndarray:
    """All products ``x^a z^b v`` for columns ``v`` of ``V``."""
    k = V.shape[1]
    T = V.reshape(g, p, n, k)
    out = []
    for a in range(p):
        for b in range(n):
            S = F.zeros((g, p, n, k))
            S[:, a:, b:, :] = T[:, :p - a, :n - b, :]
            out.append(S.reshape(g * p * n, k))
    return np.concatenate(out, axis=1) if out else F.zeros((g * n * p, 0))


def a_span(V: np.ndarray, n: int, p: int, g: int, F: Field) -> Echelon:
    d = amb_dim(n, p, g)
    if V.shape[1] == 0:
        return Echelon.zero(F, d)
    return Echelon.span(F, d, monomial_multiples(V, n, p, g, F))


def truncation(n: int, p_from: int, p_to: int, g: int, F: Field) -> np.ndarray:
    """Ambient reduction ``A^g_{p_from} -> A^g_{p_to}`` for ``p_to <= p_from``."""
    src = amb_dim(n, p_from, g)
    dst = amb_dim(n, p_to, g)
    T = F.zeros((dst, src))
    for j in range(g):
        for a in range(p_to):
            for b in range(n):
                T[j * n * p_to + a * n + b, j * n * p_from + a * n + b] = F.one
    return T


class Subquotient:
    """``U/W`` inside ``A^g``, with a basis of ``U/W`` reduced modulo ``W``."""

    __slots__ = ("n", "p", "g", "F", "U", "W", "Q")

    def __init__(self, n: int, p: int, g: int, F: Field, U: Echelon, W: Echelon):
        self.n, self.p, self.g, self.F = n, p, g, F
        self.U, self.W = U, W
        self.Q = Echelon.span(F, U.d, W.reduce(U.basis()))

    @property
    def dim(self) -> int:
        return self.Q.dim

    def lifts(self) -> np.ndarray:
        return self.Q.basis()

    def coords(self, V: np.ndarray) -> np.ndarray:
        red = self.W.reduce(V)
        if not self.Q.contains(red):
            raise DefectError("vector leaves the submodule U")
        return self.Q.coords(red)

    def actions(self) -> tuple[np.ndarray, np.ndarray]:
        Xa, Za = ambient_ops(self.n, self.p, self.g, self.F)
        L = self.lifts()
        return self.coords(self.F.matmul(Xa, L)), self.coords(self.F.matmul(Za, L))


# expressions


class Expr:
    """A rebuildable recipe for a module; subclasses are frozen dataclasses."""

    n: int

    def build(self, p: int, F: Field) -> Subquotient:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def rebuildable(self) -> bool:
        return True

    def torsion_free(self) -> bool:
        """Structural certificate: built only from torsion-free pieces."""
        return False

    def min_precision(self) -> int:
        return 1


def _poly_rows(mat) -> PolyMatrix:
    return tuple(tuple(Poly.coerce(e) for e in row) for row in mat)


def _mat_json(mat: PolyMatrix) -> list:
    return [[str(e) for e in row] for row in mat]


@dataclass(frozen=True)
class Free(Expr):
    n: int
    g: int = 1

    def build(self, p: int, F: Field) -> Subquotient:
        d = amb_dim(self.n, p, self.g)
        return Subquotient(self.n, p, self.g, F, Echelon.full(F, d), Echelon.zero(F, d))

    def describe(self) -> dict:
        return {"kind": "free", "n": self.n, "rank": self.g}

    def torsion_free(self) -> bool:
        return True


@dataclass(frozen=True)
class SubQuot(Expr):
    """``A-span(ugens) / A-span(wgens)`` in ``A^g``; ``ugens=None`` means all of ``A^g``.

    Generators are columns: ``ugens[j]`` is a tuple of ``g`` polynomials.
    """

    n: int
    g: int
    ugens: PolyMatrix | None
    wgens: PolyMatrix
    label: str = ""
    certified: bool = False
    needs_p: int = 1

    def build(self, p: int, F: Field) -> Subquotient:
        n, g = self.n, self.g
        d = amb_dim(n, p, g)
        if self.ugens is None:
            U = Echelon.full(F, d)
        else:
            U = a_span(_cols(self.ugens, n, p, F, d), n, p, g, F)
        W = a_span(_cols(self.wgens, n, p, F, d), n, p, g, F)
        if not U.contains(W.basis()):
            raise PreconditionError("relations are not inside the generated submodule")
        return Subquotient(n, p, g, F, U, W)

    def describe(self) -> dict:
        out: dict = {"kind": self.label or "subquotient", "n": self.n, "rank": self.g}
        if self.ugens is not None:
            out["generators"] = [[str(e) for e in col] for col in self.ugens]
        out["relations"] = [[str(e) for e in col] for col in self.wgens]
        return out

    def torsion_free(self) -> bool:
        return self.certified or (not self.wgens)

    def min_precision(self) -> int:
        return self.needs_p


def _cols(gens: PolyMatrix, n: int, p: int, F: Field, d: int) -> np.ndarray:
    if not gens:
        return F.zeros((d, 0))
    return np.stack([poly_column(c, n, p, F) for c in gens], axis=1)


@dataclass(frozen=True)
class Sum(Expr):
    parts: tuple[Expr, ...]

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.parts[0].n

    def build(self, p: int, F: Field) -> Subquotient:
        subs = [e.build(p, F) for e in self.parts]
        g = sum(s.g for s in subs)
        d = amb_dim(self.n, p, g)
        U = Echelon.span(F, d, linalg.block_diag(F, *[s.U.basis() for s in subs]))
        W = Echelon.span(F, d, linalg.block_diag(F, *[s.W.basis() for s in subs]))
        return Subquotient(self.n, p, g, F, U, W)

    def describe(self) -> dict:
        return {"kind": "direct_sum", "parts": [e.describe() for e in self.parts]}

    def rebuildable(self) -> bool:
        return all(e.rebuildable() for e in self.parts)

    def torsion_free(self) -> bool:
        return all(e.torsion_free() for e in self.parts)

    def min_precision(self) -> int:
        return max(e.min_precision() for e in self.parts)


@dataclass(frozen=True)
class Morph:
    """An A-linear map between structural modules, given by a polynomial matrix.

    ``matrix`` has one row per ambient generator of the target and one column
    per ambient generator of the source.
    """

    src: Expr
    tgt: Expr
    matrix: PolyMatrix

    def describe(self) -> dict:
        return {"source": self.src.describe(), "target": self.tgt.describe(),
                "matrix": _mat_json(self.matrix)}

    def parts(self, p: int, F: Field) -> tuple[Subquotient, Subquotient, np.ndarray]:
        S = self.src.build(p, F)
        T = self.tgt.build(p, F)
        if len(self.matrix) != T.g or any(len(r) != S.g for r in self.matrix):
            raise PreconditionError(
                f"map matrix must be {T.g}x{S.g} for these modules")
        Phi = poly_operator(self.matrix, self.src.n, p, F, S.g)
        if not T.U.contains(F.matmul(Phi, S.U.basis())):
            raise PreconditionError("map does not land in the target module")
        if not T.W.contains(F.matmul(Phi, S.W.basis())):
            raise PreconditionError("map is not well defined on the source quotient")
        return S, T, Phi


@dataclass(frozen=True)
class Kernel(Expr):
    f: Morph

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.f.src.n

    def _raw(self, p: int, F: Field) -> tuple[Subquotient, np.ndarray]:
        S, T, Phi = self.f.parts(p, F)
        B = S.U.basis()
        img = T.W.reduce(F.matmul(Phi, B))
        return S, F.matmul(B, linalg.nullspace(F, img))

    def build(self, p: int, F: Field) -> Subquotient:
        # The kernel of the truncated map also holds elements whose image only
        # vanishes modulo x^p. Lift until the reduction to p stops shrinking.
        S, K = self._raw(p, F)
        U = Echelon.span(F, S.U.d, K)
        for lift in range(2 * p, 2 * p + 8 * p, p):
            _, K2 = self._raw(lift, F)
            red = truncation(S.n, lift, p, S.g, F)
            U2 = Echelon.span(F, S.U.d, F.matmul(red, K2))
            if U2.dim == U.dim:
                return Subquotient(S.n, p, S.g, F, U, S.W)
            U = U2
        raise PrecisionError(f"kernel at precision {p} did not stabilize under lifting")

    def describe(self) -> dict:
        return {"kind": "kernel", "map": self.f.describe()}

    def rebuildable(self) -> bool:
        return self.f.src.rebuildable() and self.f.tgt.rebuildable()

    def torsion_free(self) -> bool:
        return self.f.src.torsion_free()

    def min_precision(self) -> int:
        return max(self.f.src.min_precision(), self.f.tgt.min_precision())


@dataclass(frozen=True)
class Image(Expr):
    f: Morph

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.f.tgt.n

    def build(self, p: int, F: Field) -> Subquotient:
        S, T, Phi = self.f.parts(p, F)
        U = T.W.sum(Echelon.span(F, T.U.d, F.matmul(Phi, S.U.basis())))
        return Subquotient(T.n, p, T.g, F, U, T.W)

    def describe(self) -> dict:
        return {"kind": "image", "map": self.f.describe()}

    def rebuildable(self) -> bool:
        return self.f.src.rebuildable() and self.f.tgt.rebuildable()

    def torsion_free(self) -> bool:
        return self.f.tgt.torsion_free()

    def min_precision(self) -> int:
        return max(self.f.src.min_precision(), self.f.tgt.min_precision())


@dataclass(frozen=True)
class Cokernel(Expr):
    f: Morph

    @property
    def n(self) -> int:  # type: ignore[override]
        return self.f.tgt.n

    def build(self, p: int, F: Field) -> Subquotient:
        S, T, Phi = self.f.parts(p, F)
        W = T.W.sum(Echelon.span(F, T.U.d, F.matmul(Phi, S.U.basis())))
        return Subquotient(T.n, p, T.g, F, T.U, W)

    def describe(self) -> dict:
        return {"kind": "cokernel", "map": self.f.describe()}

    def rebuildable(self) -> bool:
        return self.f.src.rebuildable() and self.f.tgt.rebuildable()

    def min_precision(self) -> int:
        return max(self.f.src.min_precision(), self.f.tgt.min_precision())


@dataclass(frozen=True)
class Opaque(Expr):
    """A module defined by field-level data at a single precision."""

    n: int
    p: int
    token: int
    parent: dict = dc_field(compare=False, hash=False, default_factory=dict)

    def build(self, p: int, F: Field) -> Subquotient:
        raise PrecisionError(
            "module was built from a field-level map and cannot be rebuilt at precision "
            f"{p}; use structural maps for precision-doubling checks")

    def describe(self) -> dict:
        return {"kind": "field-level", "n": self.n, "p": self.p, **self.parent}

    def rebuildable(self) -> bool:
        return False


_opaque_counter = itertools.count()


@lru_cache(maxsize=512)
def _realize(expr: Expr, p: int, F: Field) -> "LocalModule":
    if p < expr.min_precision():
        raise PreconditionError(
            f"precision {p} is too small for this module (needs at least {expr.min_precision()})")
    sq = expr.build(p, F)
    X, Z = sq.actions()
    return LocalModule(expr.n, p, F, X, Z, expr, sq)


def realize(expr: Expr, p: int, F: Field | None = None) -> "LocalModule":
    if p < 1:
        raise PreconditionError("precision must be at least 1")
    return _realize(expr, p, F or Field())


# the module type


@dataclass(frozen=True, eq=False)
class LocalModule:
    """A module over ``A_{n,p}``: commuting nilpotent ``X`` and ``Z`` on ``k^dim``."""

    n: int
    p: int
    field: Field
    X: np.ndarray
    Z: np.ndarray
    expr: Expr
    sq: Subquotient | None = None

    def __post_init__(self) -> None:
        check_module(self)

    @property
    def dim(self) -> int:
        return self.X.shape[0]

    def at(self, p: int) -> "LocalModule":
        """The same module rebuilt at x-precision ``p``."""
        if p == self.p:
            return self
        return realize(self.expr, p, self.field)

    def rebuildable(self) -> bool:
        return self.expr.rebuildable()

    def describe(self) -> dict:
        return self.expr.describe()

    def __repr__(self) -> str:
        return f"LocalModule(n={self.n}, p={self.p}, dim={self.dim})"


def check_module(M: LocalModule, powers: bool | None = None) -> None:
    """Assert ``XZ = ZX``, ``Z^n = 0`` and ``X^p = 0``.

    Structural modules inherit the power relations from the ambient
    operators (asserted once per ambient in :func:`ambient_ops`), so by default
    only field-level modules pay for the matrix powers.
    """
    F = M.field
    if M.X.shape != (M.dim, M.dim) or M.Z.shape != (M.dim, M.dim):
        raise DefectError("action matrices have the wrong shape")
    if not F.is_zero(F.sub(F.matmul(M.X, M.Z), F.matmul(M.Z, M.X))):
        raise DefectError("x and z actions do not commute")
    if powers is None:
        powers = M.sq is None
    if not powers:
        return
    if M.dim and not F.is_zero(linalg.matpow(F, M.Z, M.n)):
        raise DefectError("z^n does not vanish")
    if M.dim and not F.is_zero(linalg.matpow(F, M.X, M.p)):
        raise DefectError("x^p does not vanish")


def _check_np(n: int, p: int) -> None:
    if n < 1 or p < 1:
        raise PreconditionError("n and p must both be at least 1")


# constructors


def build_algebra(n: int, p: int, field: Field | None = None) -> LocalModule:
    """The regular module ``A_{n,p}`` with basis ``x^a z^b`` in (a, b) order."""
    _check_np(n, p)
    return realize(Free(n, 1), p, field)


def free_module(n: int, p: int, g: int, field: Field | None = None) -> LocalModule:
    _check_np(n, p)
    return realize(Free(n, g), p, field)


def zero_module(n: int, p: int, field: Field | None = None) -> LocalModule:
    _check_np(n, p)
    return realize(SubQuot(n, 0, None, (), "zero", True), p, field)


@dataclass(frozen=True)
class PresentationMatrix:
    """Relations as columns of a ``rows x len(relations)`` polynomial matrix."""

    rows: int
    relations: PolyMatrix  # stored column-wise

    @classmethod
    def from_rows(cls, rows: int, entries) -> "PresentationMatrix":
        mat = _poly_rows(entries)
        if len(mat) != rows:
            raise PreconditionError(f"presentation has {len(mat)} rows, expected {rows}")
        width = {len(r) for r in mat}
        if len(width) > 1:
            raise PreconditionError("ragged presentation matrix")
        ncols = width.pop() if width else 0
        return cls(rows, tuple(tuple(mat[i][j] for i in range(rows)) for j in range(ncols)))

    @classmethod
    def from_columns(cls, rows: int, columns) -> "PresentationMatrix":
        cols = tuple(tuple(Poly.coerce(e) for e in c) for c in columns)
        if any(len(c) != rows for c in cols):
            raise PreconditionError("relation column has the wrong length")
        return cls(rows, cols)


def presentation_expr(n: int, pres: PresentationMatrix, label: str = "presentation") -> SubQuot:
    return SubQuot(n, pres.rows, None, pres.relations, label)


def module_from_presentation(n: int, p: int, pres: PresentationMatrix,
                             field: Field | None = None) -> LocalModule:
    """Cokernel of the relation matrix, truncated as ``coker / x^p coker``."""
    _check_np(n, p)
    return realize(presentation_expr(n, pres), p, field)


def ideal_expr(n: int, gens, label: str = "ideal", needs_p: int = 1) -> SubQuot:
    cols = tuple((Poly.coerce(f),) for f in gens)
    return SubQuot(n, 1, cols, (), label, True, needs_p)


def ideal_module(n: int, p: int, gens, field: Field | None = None) -> LocalModule:
    """The ideal generated by ``gens`` inside ``A_{n,p}``."""
    _check_np(n, p)
    return realize(ideal_expr(n, gens), p, field)


STANDARD_KINDS = ("structure", "ideal_point", "J", "torsion", "subscheme_A", "subscheme_B")


def standard_expr(kind: str, params: dict, n: int) -> Expr:
    """Expression for a catalog module; see :func:`standard_module`."""
    x, z = Poly.mono(1, 0), Poly.mono(0, 1)
    if kind == "structure":
        i = int(params.get("i", n))
        if not 1 <= i <= n:
            raise PreconditionError(f"structure module O_{i} needs 1 <= i <= n={n}")
        if i == n:
            return Free(n, 1)
        return SubQuot(n, 1, None, ((Poly.mono(0, i),),), f"O_{i}", True)
    if kind == "ideal_point":
        if n != 2:
            raise PreconditionError("ideal_point requires n = 2")
        k = int(params["k"])
        if k < 1:
            raise PreconditionError("ideal_point needs k >= 1")
        return ideal_expr(n, [Poly.mono(k, 0), z], f"I_{k}", k + 1)
    if kind == "J":
        if n < 2:
            raise PreconditionError("J needs n >= 2")
        return ideal_expr(n, [x, Poly.mono(0, n - 1)], f"J_{n}", 2)
    if kind == "torsion":
        k = int(params["k"])
        if k < 1:
            raise PreconditionError("torsion needs k >= 1")
        return SubQuot(n, 1, None, ((Poly.mono(k, 0),), (z,)), f"T_{k}", False, k + 1)
    if kind == "subscheme_A":
        pp, q = int(params["p"]), int(params["q"])
        if pp < 0 or q < 0:
            raise PreconditionError("subscheme parameters must be nonnegative")
        return ideal_expr(n, [Poly.mono(pp + q, 0), Poly.mono(q, 1)],
                          f"subscheme_A({pp},{q})", pp + q + 1)
    if kind == "subscheme_B":
        pp, q, m = int(params["p"]), int(params["q"]), int(params["m"])
        alpha = Poly.coerce(params.get("alpha", 1))
        if pp < 0 or q < 0 or m < 0:
            raise PreconditionError("subscheme parameters must be nonnegative")
        if not any(a == 0 and b == 0 for a, b, _ in alpha.terms):
            raise PreconditionError("alpha must be a unit (nonzero constant term)")
        g1 = Poly.mono(q + m + pp, 0) + Poly.mono(q, 1) * alpha
        return ideal_expr(n, [g1, Poly.mono(q + m, 1)],
                          f"subscheme_B({pp},{q},{m})", pp + q + m + alpha.x_degree() + 1)
    raise PreconditionError(f"unknown standard module kind {kind!r}")


def standard_module(kind: str, params: dict, n: int, p: int,
                    field: Field | None = None) -> LocalModule:
    """Catalog modules.

    ``structure`` (param ``i``): ``O_i = A/(z^i)``.
    ``ideal_point`` (``k``, n=2): ``I_k = (x^k, z)``.
    ``J``: ``(x, z^{n-1})``.
    ``torsion`` (``k``): ``T_k = A/(x^k, z)``.
    ``subscheme_A`` (``p``, ``q``): ``(x^{p+q}, z x^q)``.
    ``subscheme_B`` (``p``, ``q``, ``m``, ``alpha``): ``(x^{q+m+p} + z x^q alpha, z x^{q+m})``.
    """
    _check_np(n, p)
    return realize(standard_expr(kind, params, n), p, field)


def direct_sum(*mods: LocalModule) -> LocalModule:
    if not mods:
        raise PreconditionError("direct_sum needs at least one module")
    n, p, F = mods[0].n, mods[0].p, mods[0].field
    for M in mods[1:]:
        if (M.n, M.p, M.field) != (n, p, F):
            raise PreconditionError("direct_sum of modules over different (n, p, field)")
    if all(M.rebuildable() for M in mods):
        return realize(Sum(tuple(M.expr for M in mods)), p, F)
    X = linalg.block_diag(F, *[M.X for M in mods])
    Z = linalg.block_diag(F, *[M.Z for M in mods])
    return LocalModule(n, p, F, X, Z, Opaque(n, p, next(_opaque_counter), {"op": "direct_sum"}))


def sum_expr(*exprs: Expr) -> Expr:
    if len(exprs) == 1:
        return exprs[0]
    return Sum(tuple(exprs))


# structural maps


def morphism(src: LocalModule | Expr, tgt: LocalModule | Expr, matrix) -> Morph:
    s = src.expr if isinstance(src, LocalModule) else src
    t = tgt.expr if isinstance(tgt, LocalModule) else tgt
    if s.n != t.n:
        raise PreconditionError("map between modules with different n")
    return Morph(s, t, _poly_rows(matrix))


def kernel(f: Morph, p: int, field: Field | None = None) -> LocalModule:
    return realize(Kernel(f), p, field)


def image(f: Morph, p: int, field: Field | None = None) -> LocalModule:
    return realize(Image(f), p, field)


def cokernel(f: Morph, p: int, field: Field | None = None) -> LocalModule:
    return realize(Cokernel(f), p, field)


def morphism_matrix(f: Morph, p: int, F: Field | None = None) -> np.ndarray:
    """The field matrix (dim tgt x dim src) of ``f`` in the module bases."""
    F = F or Field()
    S, T, Phi = f.parts(p, F)
    return T.coords(F.matmul(Phi, S.lifts()))


# field-level maps


def _field_map(f, M: LocalModule, N: LocalModule) -> np.ndarray:
    """Column-acting matrix of ``f``, given as ``dim(M) x dim(N)`` (row i = image of e_i)."""
    F = M.field
    if (M.n, M.p, M.field) != (N.n, N.p, N.field):
        raise PreconditionError("modules live over different (n, p, field)")
    A = F.array(f).reshape(M.dim, N.dim) if M.dim * N.dim else F.zeros((M.dim, N.dim))
    T = A.T.copy()
    for op_m, op_n in ((M.X, N.X), (M.Z, N.Z)):
        if not F.is_zero(F.sub(F.matmul(T, op_m), F.matmul(op_n, T))):
            raise PreconditionError("map does not commute with the x and z actions")
    return T


def _restrict(M: LocalModule, B: np.ndarray, op: str) -> LocalModule:
    """Submodule spanned by the invariant subspace with basis columns ``B``."""
    F = M.field
    E = Echelon.span(F, M.dim, B)
    Bb = E.basis()
    X = E.coords(F.matmul(M.X, Bb))
    Z = E.coords(F.matmul(M.Z, Bb))
    return LocalModule(M.n, M.p, F, X, Z, Opaque(M.n, M.p, next(_opaque_counter), {"op": op}))


def _quotient(N: LocalModule, S: np.ndarray, op: str) -> LocalModule:
    F = N.field
    W = Echelon.span(F, N.dim, S)
    sq = Subquotient(N.n, N.p, 1, F, Echelon.full(F, N.dim), W)
    X = sq.coords(F.matmul(N.X, sq.lifts()))
    Z = sq.coords(F.matmul(N.Z, sq.lifts()))
    return LocalModule(N.n, N.p, F, X, Z, Opaque(N.n, N.p, next(_opaque_counter), {"op": op}))


def map_kernel(f, M: LocalModule, N: LocalModule) -> LocalModule:
    T = _field_map(f, M, N)
    return _restrict(M, linalg.nullspace(M.field, T), "kernel")


def map_image(f, M: LocalModule, N: LocalModule) -> LocalModule:
    T = _field_map(f, M, N)
    return _restrict(N, T, "image")


def map_cokernel(f, M: LocalModule, N: LocalModule) -> LocalModule:
    T = _field_map(f, M, N)
    return _quotient(N, T, "cokernel")


# precision change


def reduction_map(M: LocalModule, p: int) -> np.ndarray:
    """Matrix of ``M_{M.p} -> M_p`` (``p <= M.p``) induced by ambient truncation."""
    if p > M.p:
        raise PreconditionError("can only reduce to a smaller precision")
    if M.sq is None or not M.rebuildable():
        raise PrecisionError("module has no structural ambient to reduce")
    small = M.at(p)
    F = M.field
    T = truncation(M.n, M.p, p, M.sq.g, F)
    return small.sq.coords(F.matmul(T, M.sq.lifts()))


# equivariant homomorphisms


def hom_space(M: LocalModule, N: LocalModule) -> np.ndarray:
    """Basis of ``Hom_A(M, N)``; column j is ``vec(f_j)`` of a ``dim N x dim M`` matrix
    stacked column-major."""
    F = M.field
    m, d = M.dim, N.dim
    if m == 0 or d == 0:
        return F.zeros((m * d, 0))
    # vec(T A - B T) = (A^T kron I - I kron B) vec(T) for column-major vec
    blocks = []
    for A, B in ((M.X, N.X), (M.Z, N.Z)):
        blocks.append(F.sub(np.kron(A.T, F.eye(d)), np.kron(F.eye(m), B)))
    return linalg.nullspace(F, np.concatenate(blocks, axis=0))


def hom_dim(M: LocalModule, N: LocalModule) -> int:
    return hom_space(M, N).shape[1]


# extensions of O_C-modules over A_{2,p}


def extension_expr(A) -> SubQuot:
    """Coker presentation of ``0 -> r O_C -> E -> s O_C -> 0`` with class ``A`` (r x s).

    Generators ``e_1..e_r, f_1..f_s``; relations ``z e_i = 0`` and
    ``z f_j = sum_i A[i][j] e_i``.
    """
    mat = _poly_rows(A)
    r = len(mat)
    s = len(mat[0]) if r else 0
    z = Poly.mono(0, 1)
    zero = Poly()
    cols = []
    for i in range(r):
        cols.append(tuple(z if k == i else zero for k in range(r + s)))
    for j in range(s):
        col = [-mat[i][j] for i in range(r)] + [z if k == j else zero for k in range(s)]
        cols.append(tuple(col))
    return SubQuot(2, r + s, None, tuple(cols), "extension", True)
