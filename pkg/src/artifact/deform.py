"""Deformation order on quasi-free types and the poset it generates.

For ``n = 2`` the order is proved: ``(m1, m2)`` deforms to ``(m1', m2')`` iff
the generalized ranks agree and ``m2' >= m2``. For ``n >= 3`` the same
comparison of characteristic functions is only conjectured, and every report
built from it carries the ``conjectural`` tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import PreconditionError
from .field import Field
from .filtrations import QuasiFreeType, generalized_rank, generic_type, quasi_free_type
from .modules import extension_expr, realize

CONJECTURAL = "conjectural"


class Order(str, Enum):
    BELOW = "below"
    EQUAL = "equal"
    ABOVE = "above"
    INCOMPARABLE = "incomparable"


def _qft(t) -> QuasiFreeType:
    return t if isinstance(t, QuasiFreeType) else QuasiFreeType(tuple(int(v) for v in t))


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with its standing: ``proved`` or ``conjectural``."""

    value: bool
    provenance: str = "proved"

    def __bool__(self) -> bool:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, bool):
            return self.value is other
        if isinstance(other, Verdict):
            return (self.value, self.provenance) == (other.value, other.provenance)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.provenance))

    def to_json(self) -> dict:
        return {"value": self.value, "provenance": self.provenance}


def deforms_to(src, dst, n: int | None = None) -> Verdict:
    """``src`` (special fiber) deforms to ``dst`` (nearby fiber).

    For ``n = 2``: equal generalized rank and ``m_2(dst) >= m_2(src)``. For
    larger ``n`` the answer comes from :func:`char_order` and is tagged
    conjectural.
    """
    a, b = _qft(src), _qft(dst)
    n = a.n if n is None else n
    if a.n != n or b.n != n:
        raise PreconditionError("types of different multiplicity")
    if n == 2:
        return Verdict(a.R == b.R and b.m[1] >= a.m[1])
    order = char_order(a, b)
    return Verdict(order in (Order.BELOW, Order.EQUAL), CONJECTURAL)


def char_order(a, b, n: int | None = None) -> Order:
    """Pointwise comparison of the characteristic functions at equal generalized rank."""
    a, b = _qft(a), _qft(b)
    if a.n != b.n or (n is not None and n != a.n):
        raise PreconditionError("types of different multiplicity")
    if a.R != b.R:
        return Order.INCOMPARABLE
    fa, fb = a.char_function(), b.char_function()
    if fa == fb:
        return Order.EQUAL
    if fa <= fb:
        return Order.BELOW
    if fb <= fa:
        return Order.ABOVE
    return Order.INCOMPARABLE


def is_conjectural(n: int) -> bool:
    return n >= 3


def enumerate_types(R: int, n: int) -> list[QuasiFreeType]:
    """All ``(m_1..m_n)`` with ``sum i m_i = R``, lexicographically descending."""
    if R < 0 or n < 1:
        raise PreconditionError("need R >= 0 and n >= 1")
    out: list[tuple[int, ...]] = []

    def rec(i: int, rest: int, acc: list[int]) -> None:
        if i == 0:
            if rest == 0:
                out.append(tuple(reversed(acc)))
            return
        for k in range(rest // i, -1, -1):
            rec(i - 1, rest - k * i, acc + [k])

    rec(n, R, [])
    return [QuasiFreeType(m) for m in sorted(out, reverse=True)]


def label(t: QuasiFreeType) -> str:
    return "(" + ",".join(str(v) for v in t.m) + ")"


@dataclass(frozen=True)
class TypePoset:
    R: int
    n: int
    nodes: tuple[QuasiFreeType, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def conjectural(self) -> bool:
        return is_conjectural(self.n)

    def maximal(self) -> list[QuasiFreeType]:
        has_up = {a for a, _ in self.edges}
        return [t for i, t in enumerate(self.nodes) if i not in has_up]

    def to_json(self) -> dict:
        adj: dict[str, list[str]] = {label(t): [] for t in self.nodes}
        for a, b in self.edges:
            adj[label(self.nodes[a])].append(label(self.nodes[b]))
        d = {"R": self.R, "n": self.n,
             "nodes": [{"type": list(t.m), "label": label(t),
                        "F": list(t.char_function().values)} for t in self.nodes],
             "edges": [[label(self.nodes[a]), label(self.nodes[b])] for a, b in self.edges],
             "adjacency": adj,
             "generic": label(QuasiFreeType(generic_type(self.R, self.n)))}
        if self.conjectural:
            d["provenance"] = CONJECTURAL
        return d

    def to_dot(self) -> str:
        lines = [f'digraph "types_R{self.R}_n{self.n}" {{']
        if self.conjectural:
            lines.append(f'  label="{CONJECTURAL}";')
        for i, t in enumerate(self.nodes):
            lines.append(f'  t{i} [label="{label(t)}"];')
        for a, b in self.edges:
            lines.append(f"  t{a} -> t{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def type_poset(R: int, n: int) -> TypePoset:
    """Hasse diagram of ``char_order`` on types of generalized rank ``R``.

    Edges point from the special type to the more generic one.
    """
    if R < 1 or n < 2:
        raise PreconditionError("need R >= 1 and n >= 2")
    nodes = enumerate_types(R, n)
    k = len(nodes)
    below = [[char_order(nodes[i], nodes[j]) is Order.BELOW for j in range(k)] for i in range(k)]
    edges = []
    for i in range(k):
        for j in range(k):
            if below[i][j] and not any(below[i][m] and below[m][j] for m in range(k)):
                edges.append((i, j))
    return TypePoset(R, n, tuple(nodes), tuple(edges))


# witness families for n = 2


@dataclass(frozen=True)
class WitnessFamily:
    src: QuasiFreeType
    dst: QuasiFreeType
    classes: tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]
    types: tuple[QuasiFreeType | None, QuasiFreeType | None]
    ranks: tuple[int, int]

    @property
    def valid(self) -> bool:
        return (self.types[0] == self.src and self.types[1] == self.dst
                and self.ranks[0] == self.ranks[1] == self.src.R)

    def to_json(self) -> dict:
        return {"from": list(self.src.m), "to": list(self.dst.m),
                "classes": [[list(r) for r in A] for A in self.classes],
                "types": [None if t is None else list(t.m) for t in self.types],
                "ranks": list(self.ranks), "valid": self.valid}


def _class_matrix(r: int, s: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j and i < k else 0 for j in range(s)) for i in range(r))


def witness_family(src, dst, p: int = 4, field: Field | None = None) -> WitnessFamily:
    """Extensions ``0 -> r O_C -> E_t -> s O_C -> 0`` whose class has rank ``m2`` at
    ``t = 0`` and ``m2 + 1`` at ``t = 1``; the fibers have types ``src`` and ``dst``.
    """
    a, b = _qft(src), _qft(dst)
    if a.n != 2 or b.n != 2 or a.R != b.R or b.m[1] != a.m[1] + 1:
        raise PreconditionError(f"{label(a)} -> {label(b)} is not a covering edge for n = 2")
    k = a.m[1]
    s = k + 1
    r = a.R - s
    A0, A1 = _class_matrix(r, s, k), _class_matrix(r, s, k + 1)
    types, ranks = [], []
    for A in (A0, A1):
        M = realize(extension_expr(A), p, field)
        types.append(quasi_free_type(M))
        ranks.append(generalized_rank(M))
    return WitnessFamily(a, b, (A0, A1), tuple(types), tuple(ranks))


def poset_witnesses(P: TypePoset, p: int = 4, field: Field | None = None) -> list[WitnessFamily]:
    if P.n != 2:
        raise PreconditionError("witness families are built for n = 2 only")
    return [witness_family(P.nodes[a], P.nodes[b], p, field) for a, b in P.edges]


def random_type(rng: np.random.Generator, R: int, n: int) -> QuasiFreeType:
    types = enumerate_types(R, n)
    return types[int(rng.integers(len(types)))]
