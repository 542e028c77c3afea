"""Exact base fields: a prime field GF(q) or the rationals.

Matrices are numpy arrays. Over GF(q) they hold int64 residues in [0, q);
over the rationals they are object arrays of ``fractions.Fraction``. Every
routine in the package goes through a :class:`Field` so both backends share
one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError

DEFAULT_Q = 32003
_INT64_LIMIT = 2**63 - 1


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field (``q`` set) or the rationals (``q is None``)."""

    q: int | None = DEFAULT_Q

    def __post_init__(self) -> None:
        if self.q is not None:
            if not isinstance(self.q, int) or not is_prime(self.q):
                raise PreconditionError(f"field modulus {self.q!r} is not prime")
            if self.q >= 2**31:
                raise PreconditionError("field modulus must be below 2^31")

    @classmethod
    def prime(cls, q: int = DEFAULT_Q) -> "Field":
        return cls(q)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_prime_field(self) -> bool:
        return self.q is not None

    @property
    def dtype(self):
        return np.int64 if self.q is not None else object

    def describe(self) -> dict:
        if self.q is None:
            return {"kind": "rationals", "q": None}
        return {"kind": "prime-field", "q": self.q}

    # scalars

    def scalar(self, c) -> int | Fraction:
        if self.q is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            return int(c.numerator % self.q) * pow(int(c.denominator), -1, self.q) % self.q
        return int(c) % self.q

    def inv(self, a) -> int | Fraction:
        if self.q is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        a = int(a) % self.q
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.q)

    # arrays

    def zeros(self, shape) -> np.ndarray:
        if self.q is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    @property
    def one(self):
        return Fraction(1) if self.q is None else 1

    @property
    def zero(self):
        return Fraction(0) if self.q is None else 0

    def array(self, data) -> np.ndarray:
        """Coerce nested lists/arrays of integers or fractions into field form."""
        if self.q is None:
            a = np.array(data, dtype=object)
            flat = a.reshape(-1)
            for i in range(flat.size):
                flat[i] = Fraction(flat[i])
            return a
        a = np.array(data, dtype=object)
        if a.size and any(isinstance(v, Fraction) for v in a.reshape(-1)):
            flat = a.reshape(-1)
            out = np.array([self.scalar(v) for v in flat], dtype=np.int64)
            return out.reshape(a.shape)
        return np.array(data, dtype=np.int64) % self.q if a.size else np.zeros(a.shape, dtype=np.int64)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.q is None:
            return a
        return a % self.q

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.reduce(-a)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a + b)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a - b)

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        return self.reduce(self.scalar(c) * a)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.q is None:
            if a.shape[1] == 0:
                return self.zeros((a.shape[0], b.shape[1]))
            return a.dot(b)
        k = a.shape[1]
        bound = (self.q - 1) ** 2
        if k * bound <= _INT64_LIMIT:
            return (a @ b) % self.q
        step = max(1, _INT64_LIMIT // bound)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, k, step):
            out = (out + (a[:, s:s + step] @ b[s:s + step, :]) % self.q) % self.q
        return out

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.count_nonzero(a)

    def random(self, rng: np.random.Generator, shape, percent: int | None = None,
               low: int = -3, high: int = 3) -> np.ndarray:
        """Random matrix; uniform residues over GF(q), small integers over Q.

        ``percent`` keeps roughly that share of entries nonzero-eligible.
        """
        if self.q is None:
            vals = rng.integers(low, high + 1, size=shape)
        else:
            vals = rng.integers(0, self.q, size=shape)
        if percent is not None:
            mask = rng.integers(0, 100, size=shape) < percent
            vals = np.where(mask, vals, 0)
        return self.array(vals)

    def to_jsonable(self, a: np.ndarray) -> list:
        if self.q is None:
            return [[_frac_str(v) for v in row] for row in a.tolist()]
        return a.tolist()


def _frac_str(v: Fraction) -> str | int:
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
