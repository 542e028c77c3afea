"""Seeded generators of structural modules and exact sequences for the test suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from artifact.modules import (Free, Image, Kernel, Morph, SubQuot, ideal_expr, standard_expr,
                              sum_expr)
from artifact.ring import Poly

Q = 32003


def _poly(rng: np.random.Generator, max_x: int, max_z: int, terms: int = 3,
          unit: bool = False) -> Poly:
    d: dict[tuple[int, int], int] = {}
    for _ in range(terms):
        a, b = int(rng.integers(max_x + 1)), int(rng.integers(max_z + 1))
        d[(a, b)] = int(rng.integers(1, Q))
    if unit:
        d[(0, 0)] = int(rng.integers(1, Q))
    return Poly.from_dict(d)


def catalog_expr(rng: np.random.Generator, n: int):
    """One catalog module at multiplicity ``n``."""
    kinds = ["structure", "torsion", "J", "subscheme_A", "subscheme_B"] + (["ideal_point"] if n == 2 else [])
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "structure":
        return standard_expr(kind, {"i": int(rng.integers(1, n + 1))}, n)
    if kind == "torsion":
        return standard_expr(kind, {"k": int(rng.integers(1, 4))}, n)
    if kind == "J":
        return standard_expr(kind, {}, n) if n >= 2 else Free(n)
    if kind == "ideal_point":
        return standard_expr(kind, {"k": int(rng.integers(1, 4))}, n)
    if kind == "subscheme_A":
        return standard_expr(kind, {"p": int(rng.integers(0, 3)), "q": int(rng.integers(0, 3))}, n)
    return standard_expr(kind, {"p": int(rng.integers(0, 2)), "q": int(rng.integers(0, 2)),
                                "m": int(rng.integers(0, 2)), "alpha": 1 + int(rng.integers(1, 5))}, n)


def random_ideal_expr(rng: np.random.Generator, n: int):
    """Ideal of ``A`` containing a pure power of ``x`` plus random generators."""
    a = int(rng.integers(1, 4))
    gens = [Poly.mono(a, 0)] + [_poly(rng, 2, n - 1, 2) for _ in range(int(rng.integers(1, 3)))]
    return ideal_expr(n, gens, "random_ideal", a + 1)


def random_presentation_expr(rng: np.random.Generator, n: int):
    """Cokernel of a random low-degree relation matrix on one or two generators."""
    g = int(rng.integers(1, 3))
    k = int(rng.integers(1, g + 2))
    cols = tuple(tuple(_poly(rng, 2, n - 1, 2) for _ in range(g)) for _ in range(k))
    return SubQuot(n, g, None, cols, "random_presentation", False, 4)


def _torsion_free_source(rng: np.random.Generator, n: int):
    r = rng.integers(3)
    if r == 0:
        return Free(n, 1)
    if r == 1:
        return random_ideal_expr(rng, n)
    return standard_expr("J", {}, n) if n >= 2 else Free(n, 1)


def _full_target(rng: np.random.Generator, n: int):
    """A target whose generated submodule is everything, so any matrix lands in it."""
    r = rng.integers(3)
    if r == 0:
        return Free(n, 1)
    if r == 1:
        return standard_expr("structure", {"i": int(rng.integers(1, n + 1))}, n)
    return standard_expr("torsion", {"k": int(rng.integers(1, 4))}, n)


def random_morph(rng: np.random.Generator, n: int) -> Morph:
    src, tgt = _torsion_free_source(rng, n), _full_target(rng, n)
    row = tuple(_poly(rng, 2, n - 1, 2, unit=bool(rng.integers(2))) for _ in range(src.g))
    return Morph(src, tgt, (row,))


def random_structural_expr(rng: np.random.Generator, n: int, depth: int = 0):
    r = int(rng.integers(6 if depth == 0 else 4))
    if r == 0:
        return catalog_expr(rng, n)
    if r == 1:
        return random_ideal_expr(rng, n)
    if r == 2:
        return random_presentation_expr(rng, n)
    if r == 3:
        return Kernel(random_morph(rng, n))
    if r == 4:
        return Image(random_morph(rng, n))
    k = int(rng.integers(2, 4))
    return sum_expr(*[random_structural_expr(rng, n, depth + 1) for _ in range(k)])


@dataclass(frozen=True)
class ShortExact:
    """``0 -> sub -> mid -> quo -> 0`` as three structural expressions."""

    sub: object
    mid: object
    quo: object
    kind: str


def random_short_exact(rng: np.random.Generator, n: int) -> ShortExact:
    if rng.integers(2) == 0:
        a = random_structural_expr(rng, n, 1)
        b = random_structural_expr(rng, n, 1)
        return ShortExact(a, sum_expr(a, b), b, "sum")
    f = random_morph(rng, n)
    return ShortExact(Kernel(f), f.src, Image(f), "kernel")


def working_precision(expr) -> int:
    return max(expr.min_precision() + 3, 5)


def settle(expr, tries: int = 4):
    """Realize ``expr`` at the first precision where both filtrations stabilize.

    A precision error is the engine's request for more precision; callers
    answer it by raising ``p``, which is what this helper does.
    """
    from artifact.errors import PrecisionError
    from artifact.filtrations import first_filtration, second_filtration
    from artifact.modules import realize

    p = working_precision(expr)
    for _ in range(tries):
        M = realize(expr, p)
        try:
            first_filtration(M)
            second_filtration(M)
            return M
        except PrecisionError:
            p += 3
    raise PrecisionError(f"no stable precision found up to {p}")
