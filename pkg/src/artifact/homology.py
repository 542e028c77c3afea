"""Periodic free resolutions over ``A_n`` and stabilized Ext computations.

A truncated coefficient module ``N_p = N / x^p N`` makes ``H^i Hom(F, N_p)``
pick up x^p-torsion of ``Ext^{i+1}`` as well. Taking the image of
``H^i Hom(F, N_{2p})`` in ``H^i Hom(F, N_p)`` removes that contribution
whenever the torsion exponents of Ext are below ``p``; this image is what
``ext_dims`` reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, series
from .errors import PrecisionError, PreconditionError
from .field import Field
from .filtrations import CxInvariants, cx_invariants, filtration, generalized_rank
from .linalg import Echelon
from .modules import (Free, LocalModule, Morph, PolyMatrix, SubQuot, hom_dim,
                      morphism_matrix, realize, reduction_map, standard_expr)
from .normal_forms import ExtMatrix
from .ring import Poly


# resolutions


@dataclass(frozen=True)
class Resolution:
    """``... -> F_2 -> F_1 -> F_0``; ``diffs[k-1]`` is ``d_k : F_k -> F_{k-1}``."""

    target: str
    params: tuple[tuple[str, int], ...]
    n: int
    ranks: tuple[int, ...]
    diffs: tuple[PolyMatrix, ...]

    @property
    def length(self) -> int:
        return len(self.diffs)

    def cokernel_expr(self) -> SubQuot:
        """``coker d_1``, the module this resolves."""
        d1 = self.diffs[0]
        cols = tuple(tuple(d1[i][j] for i in range(self.ranks[0]))
                     for j in range(self.ranks[1]))
        return SubQuot(self.n, self.ranks[0], None, cols, f"coker({self.target})",
                       self.target != "torsion")

    def target_expr(self):
        p = dict(self.params)
        if self.target == "structure":
            return standard_expr("structure", {"i": p["i"]}, self.n)
        if self.target == "torsion":
            return standard_expr("torsion", {"k": p["i"]}, self.n)
        x, z = Poly.mono(1, 0), Poly.mono(0, 1)
        from .modules import ideal_expr
        return ideal_expr(self.n, [x, z], "ideal (x,z)")

    def to_json(self) -> dict:
        return {"target": self.target, "params": dict(self.params), "n": self.n,
                "ranks": list(self.ranks),
                "differentials": [[[str(e) for e in row] for row in d] for d in self.diffs]}


def _pm(rows) -> PolyMatrix:
    return tuple(tuple(Poly.coerce(e) for e in row) for row in rows)


def resolution_of(target: str, length: int = 4, n: int = 2, i: int = 1) -> Resolution:
    """Resolutions of ``O_i`` over ``C_n``, ``O_C/(x^i)`` over ``C_2`` and ``(x, z)`` over ``C_n``.

    ``target`` is ``"structure"``, ``"torsion"`` or ``"ideal"``.
    """
    if length < 1:
        raise PreconditionError("resolution length must be at least 1")
    if target == "structure":
        if not 1 <= i <= n:
            raise PreconditionError("structure resolution needs 1 <= i <= n")
        a, b = _pm([[f"z^{i}"]]), _pm([[f"z^{n - i}"]])
        diffs = tuple(a if k % 2 == 0 else b for k in range(length))
        return Resolution(target, (("i", i),), n, (1,) * (length + 1), diffs)
    if target == "torsion":
        if n != 2:
            raise PreconditionError("torsion resolution is over C_2")
        if i < 1:
            raise PreconditionError("torsion exponent must be positive")
        h = _pm([["z", f"x^{i}"]])
        f = _pm([["z", f"-x^{i}"], ["0", "z"]])
        f2 = _pm([["z", f"x^{i}"], ["0", "z"]])
        diffs = [h] + [f if k % 2 == 1 else f2 for k in range(1, length)]
        return Resolution(target, (("i", i),), n, (1,) + (2,) * length, tuple(diffs))
    if target == "ideal":
        if n < 2:
            raise PreconditionError("ideal resolution needs n >= 2")
        e = f"z^{n - 1}"
        d1 = _pm([["x", e], ["z", "0"]])
        d2 = _pm([["0", e], ["z", "-x"]])
        diffs = tuple(d1 if k % 2 == 0 else d2 for k in range(length))
        return Resolution(target, (), n, (2,) * (length + 1), diffs)
    raise PreconditionError(f"unknown resolution target {target!r}")


def _compose(a: PolyMatrix, b: PolyMatrix, n: int) -> PolyMatrix:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = Poly()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc.truncate(n))
        out.append(tuple(row))
    return tuple(out)


def compositions_vanish(res: Resolution) -> bool:
    """``d_k d_{k+1} = 0`` in ``k[[x]][z]/(z^n)`` exactly (no x-truncation)."""
    return all(all(e.is_zero() for row in _compose(res.diffs[k], res.diffs[k + 1], res.n)
                   for e in row) for k in range(res.length - 1))


def _diff_operator(d: PolyMatrix, n: int, p: int, F: Field) -> np.ndarray:
    from .modules import poly_operator
    return poly_operator(d, n, p, F, len(d[0]) if d else 0)


def stage_homology(res: Resolution, p: int, field: Field | None = None) -> list[int]:
    """``dim ker d_k / im d_{k+1}`` on ``F tensor A/(x^p)`` for ``k = 1..length-1``."""
    F = field or Field()
    out = []
    for k in range(1, res.length):
        dk = _diff_operator(res.diffs[k - 1], res.n, p, F)
        dk1 = _diff_operator(res.diffs[k], res.n, p, F)
        ker = dk.shape[1] - linalg.rank(F, dk)
        out.append(ker - linalg.rank(F, dk1))
    return out


def expected_stage_homology(res: Resolution) -> list[int]:
    """``Tor_k(M, A/x^p)``: the x^p-torsion of ``M`` at ``k = 1``, zero above."""
    first = dict(res.params)["i"] if res.target == "torsion" else 0
    return [first] + [0] * (res.length - 2)


def is_exact(res: Resolution, p: int, field: Field | None = None) -> bool:
    return stage_homology(res, p, field) == expected_stage_homology(res)


def augmentation_matches(res: Resolution, p: int, field: Field | None = None) -> bool:
    """``coker d_1`` has the stabilized invariants of the intended target."""
    F = field or Field()
    C = realize(res.cokernel_expr(), p, F)
    T = realize(res.target_expr(), p, F)
    if generalized_rank(C) != generalized_rank(T):
        return False
    return all(filtration(C, w).graded == filtration(T, w).graded for w in ("first", "second"))


# Hom complexes


def eval_poly(N: LocalModule, f: Poly) -> np.ndarray:
    """``f(X, Z)`` acting on ``N``."""
    F = N.field
    out = F.zeros((N.dim, N.dim))
    for a, b, c in f.terms:
        if a < N.p and b < N.n:
            term = F.matmul(linalg.matpow(F, N.X, a), linalg.matpow(F, N.Z, b))
            out = F.add(out, F.scale(c, term))
    return out


def coboundary(res: Resolution, N: LocalModule, k: int) -> np.ndarray:
    """``delta^k : Hom(F_k, N) -> Hom(F_{k+1}, N)``, i.e. precomposition with ``d_{k+1}``."""
    F = N.field
    d = res.diffs[k]
    gk, gk1 = res.ranks[k], res.ranks[k + 1]
    D = N.dim
    out = F.zeros((gk1 * D, gk * D))
    for i in range(gk):
        for j in range(gk1):
            if not d[i][j].is_zero():
                out[j * D:(j + 1) * D, i * D:(i + 1) * D] = eval_poly(N, d[i][j])
    return out


def _cocycles_coboundaries(res: Resolution, N: LocalModule, k: int) -> tuple[Echelon, Echelon]:
    F = N.field
    dim_k = res.ranks[k] * N.dim
    Zk = linalg.nullspace(F, coboundary(res, N, k))
    B = (coboundary(res, N, k - 1) if k >= 1 else F.zeros((dim_k, 0)))
    return Echelon.span(F, dim_k, Zk), Echelon.span(F, dim_k, B)


def _check_degree(res: Resolution, degree: int) -> None:
    if degree < 0 or degree + 1 > res.length:
        raise PreconditionError(
            f"resolution of length {res.length} cannot compute Ext^{degree}")


def raw_ext_dim(res: Resolution, N: LocalModule, k: int) -> int:
    """``dim H^k Hom(F, N_p)`` without stabilization."""
    _check_degree(res, k)
    Zc, B = _cocycles_coboundaries(res, N, k)
    return Zc.dim - B.dim


def _stabilized(res: Resolution, N: LocalModule, k: int) -> tuple[Echelon, Echelon]:
    """Stabilized cocycles ``red(Z_{2p}) + B_p`` and ``B_p`` inside ``N_p^{g_k}``."""
    if not N.rebuildable():
        raise PrecisionError("coefficient module must be structural to stabilize Ext")
    F = N.field
    N2 = N.at(2 * N.p)
    Z2, _ = _cocycles_coboundaries(res, N2, k)
    Zp, Bp = _cocycles_coboundaries(res, N, k)
    red = linalg.block_diag(F, *[reduction_map(N2, N.p)] * res.ranks[k])
    S = Bp.sum(Echelon.span(F, Zp.d, F.matmul(red, Z2.basis())))
    if not Zp.contains(S.basis()):
        raise PrecisionError("reduced cocycles are not cocycles")
    return S, Bp


def _quotient_x(res: Resolution, N: LocalModule, k: int, S: Echelon, B: Echelon) -> np.ndarray:
    F = N.field
    Xk = linalg.block_diag(F, *[N.X] * res.ranks[k])
    Q = Echelon.span(F, S.d, B.reduce(S.basis()))
    if Q.dim == 0:
        return F.zeros((0, 0))
    return Q.coords(B.reduce(F.matmul(Xk, Q.basis())))


def ext_dims(res: Resolution, N: LocalModule, max_degree: int,
             stabilized: bool = True) -> list[int]:
    """``dim Ext^k(M, N)`` truncated at ``N``'s precision, ``k = 0..max_degree``."""
    _check_degree(res, max_degree)
    if not stabilized:
        return [raw_ext_dim(res, N, k) for k in range(max_degree + 1)]
    out = []
    for k in range(max_degree + 1):
        S, B = _stabilized(res, N, k)
        out.append(S.dim - B.dim)
    return out


def ext_profile(res: Resolution, N: LocalModule, max_degree: int) -> list[CxInvariants]:
    """``Ext^k`` as a ``k[[x]]``-module: (slope, torsion) from precisions ``p`` and ``2p``."""
    _check_degree(res, max_degree)
    N2 = N.at(2 * N.p)
    out = []
    for k in range(max_degree + 1):
        S, B = _stabilized(res, N, k)
        S2, B2 = _stabilized(res, N2, k)
        out.append(cx_invariants(_quotient_x(res, N, k, S, B),
                                 _quotient_x(res, N2, k, S2, B2), N.p, N.field))
    return out


def hom_check(res: Resolution, N: LocalModule) -> bool:
    """Raw degree-0 cohomology equals ``dim Hom_A(coker d_1, N)`` computed directly."""
    M = realize(res.cokernel_expr(), N.p, N.field)
    return raw_ext_dim(res, N, 0) == hom_dim(M, N)


def induced_rank(res: Resolution, psi: Morph, p: int, k: int,
                 field: Field | None = None) -> tuple[int, int, int]:
    """Rank of ``Ext^k(M, N1) -> Ext^k(M, N2)`` induced by ``psi : N1 -> N2``.

    Returns ``(rank, dim source, dim target)`` on stabilized groups.
    """
    F = field or Field()
    N1, N2 = realize(psi.src, p, F), realize(psi.tgt, p, F)
    S1, B1 = _stabilized(res, N1, k)
    S2, B2 = _stabilized(res, N2, k)
    m = morphism_matrix(psi, p, F)
    Mk = linalg.block_diag(F, *[m] * res.ranks[k])
    img = Echelon.span(F, S2.d, F.matmul(Mk, S1.basis()))
    if not S2.contains(img.basis()):
        raise PrecisionError("induced map leaves the stabilized cocycles")
    return B2.sum(img).dim - B2.dim, S1.dim - B1.dim, S2.dim - B2.dim


def connecting_map_vanishing(i: int, p: int | None = None,
                             field: Field | None = None) -> bool:
    """``Ext^1(T_i, O_2) -> Ext^1(T_i, O_C)`` induced by ``O_2 -> O_C`` is zero."""
    if i < 1:
        raise PreconditionError("torsion exponent must be positive")
    p = p or i + 2
    res = resolution_of("torsion", 3, 2, i)
    oc = standard_expr("structure", {"i": 1}, 2)
    psi = Morph(Free(2, 1), oc, ((Poly.const(1),),))
    rank, _, _ = induced_rank(res, psi, p, 1, field)
    return rank == 0


def inclusion_injective(i: int, p: int | None = None, field: Field | None = None) -> bool:
    """``Ext^1(T_i, O_C) -> Ext^1(T_i, O_2)`` induced by ``z : O_C -> O_2`` is injective."""
    p = p or i + 2
    res = resolution_of("torsion", 3, 2, i)
    oc = standard_expr("structure", {"i": 1}, 2)
    psi = Morph(oc, Free(2, 1), ((Poly.mono(0, 1),),))
    rank, src, _ = induced_rank(res, psi, p, 1, field)
    return rank == src and src > 0


def obstruction_square(sigma: ExtMatrix) -> bool:
    """Whether ``sigma . sigma = 0`` over ``k[x]/(x^p)``."""
    r, s = sigma.shape
    if r != s:
        raise PreconditionError("obstruction class must be a square matrix")
    sq = series.matmul(sigma.field, sigma.data, sigma.data)
    return sigma.field.is_zero(sq)
