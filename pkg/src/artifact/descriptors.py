"""Global numerical invariants of sheaves on a multiple curve ``C_n``.

The local engine only sees stalks, so degrees of the graded constituents are
inputs here. A :class:`SheafDescriptor` records ``(rank_i, degree_i)`` of the
pieces ``E_i / E_{i+1}`` of the first canonical filtration; everything else is
closed-form integer or rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError

Pair = tuple[int, int]


@dataclass(frozen=True)
class SheafDescriptor:
    n: int
    g: int
    degL: int
    gr: tuple[Pair, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.gr) != self.n:
            raise PreconditionError(f"need exactly n={self.n} graded pieces, got {len(self.gr)}")
        if any(r < 0 for r, _ in self.gr):
            raise PreconditionError("graded ranks must be nonnegative")
        object.__setattr__(self, "gr", tuple((int(r), int(d)) for r, d in self.gr))

    @property
    def R(self) -> int:
        return sum(r for r, _ in self.gr)

    @property
    def Deg(self) -> int:
        return sum(d for _, d in self.gr)

    def __add__(self, other: "SheafDescriptor") -> "SheafDescriptor":
        if (self.n, self.g, self.degL) != (other.n, other.g, other.degL):
            raise PreconditionError("descriptors live on different curves")
        gr = tuple((a + c, b + d) for (a, b), (c, d) in zip(self.gr, other.gr))
        return SheafDescriptor(self.n, self.g, self.degL, gr)

    def to_json(self) -> dict:
        return {"n": self.n, "g": self.g, "degL": self.degL,
                "gr": [list(p) for p in self.gr]}

    @classmethod
    def from_json(cls, d: dict) -> "SheafDescriptor":
        return cls(int(d["n"]), int(d["g"]), int(d["degL"]),
                   tuple((int(r), int(e)) for r, e in d["gr"]))


def slope(D: SheafDescriptor) -> Fraction:
    if D.R == 0:
        raise PreconditionError("slope of a sheaf of generalized rank 0")
    return Fraction(D.Deg, D.R)


def euler_characteristic(D: SheafDescriptor) -> int:
    return D.Deg + D.R * (1 - D.g)


@dataclass(frozen=True)
class RRReport:
    R: int
    Deg: int
    slope: Fraction | None
    chi: int
    hilbert: Pair | None

    def hilbert_value(self, m: int) -> int:
        if self.hilbert is None:
            raise PreconditionError("no polarization degree was given")
        c0, c1 = self.hilbert
        return c0 + c1 * m

    def to_json(self) -> dict:
        return {"R": self.R, "Deg": self.Deg,
                "slope": None if self.slope is None else str(self.slope),
                "chi": self.chi,
                "hilbert": None if self.hilbert is None else list(self.hilbert)}


def rr_invariants(D: SheafDescriptor, delta: int | None = None) -> RRReport:
    """Rank, degree, slope, ``chi`` and the Hilbert polynomial ``(const, linear)``.

    ``delta`` is the degree of the polarization restricted to ``C``. The slope
    is ``None`` when ``R = 0``; ask :func:`slope` directly to get the error.
    """
    if delta is not None and delta <= 0:
        raise PreconditionError("polarization degree must be positive")
    chi = euler_characteristic(D)
    mu = slope(D) if D.R > 0 else None
    hilb = None if delta is None else (chi, D.R * delta)
    return RRReport(D.R, D.Deg, mu, chi, hilb)


def locally_free_descriptor(n: int, r: int, d: int, g: int, degL: int) -> SheafDescriptor:
    """Vector bundle on ``C_n`` with restriction to ``C`` of rank ``r`` and degree ``d``."""
    if r < 1:
        raise PreconditionError("rank must be at least 1")
    return SheafDescriptor(n, g, degL, tuple((r, d + i * r * degL) for i in range(n)))


def ideal_points_descriptor(n: int, g: int, degL: int, p0: int) -> SheafDescriptor:
    """Ideal sheaf of ``p0`` reduced points of ``C`` inside ``C_n``.

    Level ``i < n`` is ``O_C(-Z) (x) L^{i-1}`` plus a skyscraper of length
    ``p0``; the last level has no torsion.
    """
    if p0 < 1:
        raise PreconditionError("need at least one point")
    gr = tuple((1, -p0 + i * degL + (p0 if i < n - 1 else 0)) for i in range(n))
    return SheafDescriptor(n, g, degL, gr)


def ideal_points_torsion(n: int, p0: int) -> tuple[int, ...]:
    """Torsion length on each graded level of the ideal of ``p0`` points."""
    return tuple(p0 if i < n - 1 else 0 for i in range(n))


def semistability(sub: SheafDescriptor, whole: SheafDescriptor, strict: bool = False) -> bool:
    """``mu(sub) <= mu(whole)``, or ``<`` when ``strict``."""
    a, b = slope(sub), slope(whole)
    return a < b if strict else a <= b


# quasi locally free sheaves on C_2


def _pair(v) -> Pair:
    r, d = v
    return int(r), int(d)


def _twist(v: Pair, k: int, degL: int) -> Pair:
    """``v (x) L^k``."""
    return v[0], v[1] + k * v[0] * degL


def _tensor(a: Pair, b: Pair) -> Pair:
    return a[0] * b[0], a[0] * b[1] + a[1] * b[0]


@dataclass(frozen=True)
class QLF2:
    E: Pair
    F: Pair
    G: Pair
    Gamma: Pair
    Deg: int

    @property
    def R(self) -> int:
        return self.E[0] + self.F[0]

    def to_json(self) -> dict:
        return {"E": list(self.E), "F": list(self.F), "G": list(self.G),
                "Gamma": list(self.Gamma), "Deg": self.Deg, "R": self.R}


def qlf2_relations(E, F, degL: int) -> QLF2:
    """Second-filtration data of a quasi locally free sheaf on ``C_2``.

    ``E`` is the kernel and ``F`` the quotient of the first filtration. ``Gamma``
    is the kernel of ``F -> E (x) L*``, and ``G`` is an extension of ``Gamma`` by
    ``E``.
    """
    E, F = _pair(E), _pair(F)
    if F[0] < E[0]:
        raise PreconditionError(f"rank F = {F[0]} below rank E = {E[0]}; no surjection F(x)L -> E")
    EL = _twist(E, -1, degL)
    gamma = (F[0] - E[0], F[1] - EL[1])
    G = (E[0] + gamma[0], E[1] + gamma[1])
    return QLF2(E, F, G, gamma, E[1] + F[1])


def qlf2_tensor(a: QLF2, b: QLF2, degL: int) -> QLF2:
    """Data of the tensor product of two quasi locally free sheaves on ``C_2``."""
    E = _twist(_tensor(a.E, b.E), -1, degL)
    F = _tensor(a.F, b.F)
    return qlf2_relations(E, F, degL)


@dataclass(frozen=True)
class Halving:
    value: int | None
    parity_ok: bool

    def to_json(self) -> dict:
        return {"value": self.value, "parity_ok": self.parity_ok}


def _half(num: int) -> Halving:
    if num % 2:
        return Halving(None, False)
    return Halving(num // 2, True)


def rank2_relations(d: int, degL: int, i: int) -> Halving:
    """``deg E`` of a rank 2 sheaf of generalized degree ``d`` and index ``i``."""
    if i < 0:
        raise PreconditionError("index must be nonnegative")
    return _half(d - degL - i)


def deformation_threshold(d: int, degL: int, p: int) -> Halving:
    """Degree of the line bundle ``V`` on ``C`` in the rank 2 deformation statement."""
    return _half(d + degL + p)


@dataclass(frozen=True)
class Rank3Datum:
    eps: int
    gamma: int
    l: int
    g: int

    def __post_init__(self) -> None:
        if self.l < 1:
            raise PreconditionError("l = -deg L must be at least 1")


@dataclass(frozen=True)
class Rank3Report:
    Deg: int
    degE: int
    degF: int
    degG: int
    degGamma: int
    window_semistable: bool
    window_stable: bool
    moduli_hypothesis: bool
    moduli_applicable: bool
    moduli_dim: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def rank3_analysis(datum: Rank3Datum, F_stable: bool = False, G_stable: bool = False) -> Rank3Report:
    """Necessary slope windows and moduli count for generalized rank 3 on ``C_2``.

    Stability of ``F`` and ``G`` cannot be decided from degrees; the caller
    asserts it and ``moduli_applicable`` combines those flags with the window.
    """
    e, c, l = datum.eps, datum.gamma, datum.l
    hyp = c - l < e < c
    return Rank3Report(
        Deg=2 * e + c + l, degE=e, degF=e + c + l, degG=e + c, degGamma=c,
        window_semistable=c - 2 * l <= e <= l + c,
        window_stable=c - 2 * l < e < l + c,
        moduli_hypothesis=hyp,
        moduli_applicable=hyp and F_stable and G_stable,
        moduli_dim=5 * datum.g + 2 * l - 4)


# Ext^1 of the ideal of points


def _half_exact(num: int, what: str) -> int:
    if num % 2:
        raise PreconditionError(f"{what} is not an integer")
    return num // 2


@dataclass(frozen=True)
class IdealExtReport:
    dim_ext_Cn: int
    dim_ext_S: int
    codim: int
    end_dim: int
    genus: int
    h0_dual: int

    @property
    def consistent(self) -> bool:
        return self.h0_dual >= 0

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["consistent"] = self.consistent
        return d


def ideal_ext_dims(n: int, Csq: int, KSC: int, p0: int, h0_a: int, h0_b: int,
                   h0_K: int) -> IdealExtReport:
    """Ext^1 of the ideal of ``p0`` points of ``C`` in ``C_n``, over ``C_n`` and over ``S``.

    ``h0_a = h0(O_C(Z) L^{n-1})``, ``h0_b = h0(O_C(Z) L^{n-1} K_S)`` and
    ``h0_K = h0(K_S|C_n)``. The codimension formula uses
    ``h0(O_C(-Z) L^{-n})``, which is the ``h1`` dual to ``h0_b``; it is
    recovered by Riemann-Roch on ``C`` with the adjunction genus.
    """
    if n < 1 or p0 < 0 or min(h0_a, h0_b, h0_K) < 0:
        raise PreconditionError("n >= 1 and nonnegative point count and h0 values required")
    g = _half_exact(Csq + KSC, "adjunction genus (C^2 + K_S C)/2") + 1
    mid = _half_exact(n * n * Csq + n * KSC, "n^2/2 C^2 + n/2 K_S C")
    dim_cn = 1 + mid + p0 + h0_a
    dim_s = 1 + n * n * Csq + h0_a + h0_b + h0_K
    deg_b = p0 - (n - 1) * Csq + KSC
    h0_dual = h0_b - deg_b - 1 + g
    codim = _half_exact((n - 1) ** 2 * Csq - (n - 1) * KSC,
                        "(n-1)^2/2 C^2 - (n-1)/2 K_S C") + h0_dual + h0_K
    return IdealExtReport(dim_cn, dim_s, codim, 1 + h0_a, g, h0_dual)
