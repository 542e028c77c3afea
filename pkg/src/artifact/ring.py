"""Polynomials in x, z and elements of the truncated ring k[x,z]/(x^p, z^n).

:class:`Poly` is the precision-free, hashable form used in module
expressions; :class:`RingElem` is its image in a fixed truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .field import Field


def _norm_coef(c) -> int | Fraction:
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


_TERM = re.compile(r"^(?P<coef>\d+(?:/\d+)?)?\*?(?P<mono>.*)$")
_FACTOR = re.compile(r"^(?P<var>[xz])(?:\^(?P<exp>\d+))?$")


@dataclass(frozen=True)
class Poly:
    """A polynomial ``sum c * x^a * z^b`` with integer or rational coefficients."""

    terms: tuple[tuple[int, int, int | Fraction], ...] = ()

    @classmethod
    def from_dict(cls, d: dict[tuple[int, int], object]) -> "Poly":
        items = []
        for (a, b), c in d.items():
            c = _norm_coef(c)
            if c != 0:
                if a < 0 or b < 0:
                    raise PreconditionError("negative exponent in polynomial")
                items.append((int(a), int(b), c))
        return cls(tuple(sorted(items)))

    @classmethod
    def const(cls, c=1) -> "Poly":
        return cls.from_dict({(0, 0): c})

    @classmethod
    def mono(cls, a: int, b: int, c=1) -> "Poly":
        return cls.from_dict({(a, b): c})

    @classmethod
    def coerce(cls, value) -> "Poly":
        """Accept a Poly, an integer, a string, or a list of ``[c, a, b]`` terms."""
        if isinstance(value, Poly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, (list, tuple)):
            d: dict[tuple[int, int], object] = {}
            for term in value:
                c, a, b = term
                d[(a, b)] = Fraction(d.get((a, b), 0)) + Fraction(c)
            return cls.from_dict(d)
        raise PreconditionError(f"cannot read polynomial from {value!r}")

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse strings such as ``"x^2*z - 3*x + 1"``."""
        s = text.replace(" ", "")
        if not s:
            raise PreconditionError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        d: dict[tuple[int, int], object] = {}
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            if not body:
                raise PreconditionError(f"malformed polynomial {text!r}")
            m = _TERM.match(body)
            coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
            mono = m.group("mono")
            a = b = 0
            if mono:
                for factor in mono.split("*"):
                    f = _FACTOR.match(factor)
                    if f is None:
                        raise PreconditionError(f"malformed polynomial {text!r}")
                    e = int(f.group("exp") or 1)
                    if f.group("var") == "x":
                        a += e
                    else:
                        b += e
            elif not m.group("coef"):
                raise PreconditionError(f"malformed polynomial {text!r}")
            if sign == "-":
                coef = -coef
            d[(a, b)] = Fraction(d.get((a, b), 0)) + coef
        return cls.from_dict(d)

    def as_dict(self) -> dict[tuple[int, int], int | Fraction]:
        return {(a, b): c for a, b, c in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        d = dict(self.as_dict())
        for a, b, c in other.terms:
            d[(a, b)] = Fraction(d.get((a, b), 0)) + Fraction(c)
        return Poly.from_dict(d)

    def __neg__(self) -> "Poly":
        return Poly(tuple((a, b, -c) for a, b, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        d: dict[tuple[int, int], object] = {}
        for a1, b1, c1 in self.terms:
            for a2, b2, c2 in other.terms:
                key = (a1 + a2, b1 + b2)
                d[key] = Fraction(d.get(key, 0)) + Fraction(c1) * Fraction(c2)
        return Poly.from_dict(d)

    def truncate(self, n: int, p: int | None = None) -> "Poly":
        return Poly(tuple(t for t in self.terms if t[1] < n and (p is None or t[0] < p)))

    def x_degree(self) -> int:
        return max((a for a, _, _ in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for a, b, c in self.terms:
            mono = "*".join(
                f for f in (
                    ("x" if a == 1 else f"x^{a}") if a else "",
                    ("z" if b == 1 else f"z^{b}") if b else "",
                ) if f
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            out.append(("-" if c < 0 else "+") + body)
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def to_json(self) -> str:
        return str(self)


@dataclass(frozen=True, eq=False)
class RingElem:
    """An element of ``A_{n,p}``; ``coeffs[b, a]`` is the coefficient of x^a z^b."""

    n: int
    p: int
    field: Field
    coeffs: np.ndarray

    @classmethod
    def from_poly(cls, poly: Poly | str, n: int, p: int, field: Field) -> "RingElem":
        poly = Poly.coerce(poly)
        c = field.zeros((n, p))
        for a, b, v in poly.terms:
            if a < p and b < n:
                c[b, a] = field.reduce(c[b, a] + field.scalar(v))
        return cls(n, p, field, c)

    @classmethod
    def zero(cls, n: int, p: int, field: Field) -> "RingElem":
        return cls(n, p, field, field.zeros((n, p)))

    def _check(self, other: "RingElem") -> None:
        if (self.n, self.p, self.field) != (other.n, other.p, other.field):
            raise PreconditionError("ring elements live in different truncations")

    def __add__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return RingElem(self.n, self.p, self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return RingElem(self.n, self.p, self.field, self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> "RingElem":
        return RingElem(self.n, self.p, self.field, self.field.neg(self.coeffs))

    def __mul__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        F, n, p = self.field, self.n, self.p
        out = F.zeros((n, p))
        for b1, a1 in zip(*np.nonzero(self.coeffs)):
            c1 = self.coeffs[b1, a1]
            if b1 >= n or a1 >= p:
                continue
            out[b1:, a1:] = F.add(out[b1:, a1:], F.reduce(c1 * other.coeffs[: n - b1, : p - a1]))
        return RingElem(n, p, F, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElem):
            return NotImplemented
        return (self.n, self.p, self.field) == (other.n, other.p, other.field) and bool(
            np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.n, self.p, self.field, tuple(self.coeffs.reshape(-1).tolist())))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.coeffs)

    def to_poly(self) -> Poly:
        d = {}
        for b, a in zip(*np.nonzero(self.coeffs)):
            v = self.coeffs[b, a]
            d[(int(a), int(b))] = v if self.field.q is None else int(v)
        return Poly.from_dict(d)


def mult_operator(poly: Poly, n: int, p: int, field: Field) -> np.ndarray:
    """Matrix of multiplication by ``poly`` on ``A_{n,p}`` in the (a, b) basis.

    Basis index of x^a z^b is ``a*n + b``.
    """
    dim = n * p
    M = field.zeros((dim, dim))
    for a, b, c in poly.terms:
        if b >= n or a >= p:
            continue
        cc = field.scalar(c)
        for a0 in range(p - a):
            for b0 in range(n - b):
                src = a0 * n + b0
                dst = (a0 + a) * n + (b0 + b)
                M[dst, src] = field.reduce(M[dst, src] + cc)
    return M
