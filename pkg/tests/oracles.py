"""Independent reference computations in plain Python.

Nothing here imports the package's linear algebra or series code; the
oracles work on nested lists of ints modulo a prime.
"""

from __future__ import annotations

import itertools

INF = float("inf")  # oracle-side sentinel only; compared, never used in arithmetic


# polynomials in x (lists of coefficients, index = exponent)


def padd(f, g, q):
    n = max(len(f), len(g))
    return [((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % q for i in range(n)]


def pmul(f, g, q, trunc=None):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % q
    return out[:trunc] if trunc is not None else out


def pneg(f, q):
    return [(-a) % q for a in f]


def pval(f):
    for i, a in enumerate(f):
        if a:
            return i
    return INF


# bivariate truncated products


def bivariate_product(f: dict, g: dict, n: int, p: int, q: int) -> dict:
    """``f g`` in ``k[x,z]/(x^p, z^n)``; polynomials as ``{(a, b): c}``."""
    out: dict = {}
    for (a1, b1), c1 in f.items():
        for (a2, b2), c2 in g.items():
            a, b = a1 + a2, b1 + b2
            if a < p and b < n:
                out[(a, b)] = (out.get((a, b), 0) + c1 * c2) % q
    return {k: v for k, v in out.items() if v}


# exact linear algebra mod q


def rank_mod(rows, q: int) -> int:
    A = [[v % q for v in r] for r in rows]
    if not A:
        return 0
    m, ncols = len(A), len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, q)
        A[r] = [v * inv % q for v in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % q for a, b in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def matmul_mod(A, B, q: int):
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) % q for col in Bt] for row in A]


def nilpotent_partition(X, q: int) -> list[int]:
    """Jordan block sizes of a nilpotent matrix from the ranks of its powers."""
    d = len(X)
    if d == 0:
        return []
    ranks = [d]
    P = [[int(i == j) for j in range(d)] for i in range(d)]
    while ranks[-1]:
        P = matmul_mod(X, P, q)
        ranks.append(rank_mod(P, q))
        if len(ranks) > d + 2:
            raise AssertionError("not nilpotent")
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes = []
    for k in range(len(ge) - 1, 0, -1):
        sizes += [k] * (ge[k - 1] - ge[k])
    return sorted(sizes, reverse=True)


# Smith form over k[[x]]


def _det(M, q):
    """Determinant of a small polynomial matrix by permutation expansion."""
    k = len(M)
    total: list[int] = []
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = [1]
        for i in range(k):
            term = pmul(term, M[i][perm[i]], q)
        if inv % 2:
            term = pneg(term, q)
        total = padd(total, term, q)
    return total


def determinantal_valuations(A, c: int, q: int) -> tuple[tuple[int, ...], int, int]:
    """Smith data of ``A`` over ``k[x]/(x^c)`` from valuations of minors of its lift.

    ``A[i][j]`` is a coefficient list of length ``c``. Returns (finite
    valuations sorted, zero rows, zero columns).
    """
    r, s = len(A), len(A[0])
    d = [0]
    for k in range(1, min(r, s) + 1):
        best = INF
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(s), k):
                best = min(best, pval(_det([[A[i][j] for j in cols] for i in rows], q)))
        if best == INF:
            break
        d.append(best)
    w = [d[k] - d[k - 1] for k in range(1, len(d))]
    finite = tuple(sorted(v for v in w if v < c))
    return finite, r - len(finite), s - len(finite)


def _unit_inverse(u, c, q):
    inv0 = pow(u[0], -1, q)
    out = [inv0] + [0] * (c - 1)
    for k in range(1, c):
        acc = sum(u[j] * out[k - j] for j in range(1, min(k, len(u) - 1) + 1))
        out[k] = (-acc * inv0) % q
    return out


def elementary_smith(A, c: int, q: int) -> tuple[tuple[int, ...], int, int]:
    """Smith reduction by row and column operations over ``k[x]/(x^c)``.

    Pivot rule differs from the package: among minimal valuations take the
    last one in column-major order.
    """
    r, s = len(A), len(A[0])
    D = [[list(e) + [0] * (c - len(e)) for e in row] for row in A]
    vals = []
    for t in range(min(r, s)):
        best, where = INF, None
        for j in range(t, s):
            for i in range(t, r):
                v = pval(D[i][j])
                if v <= best and v != INF:
                    best, where = v, (i, j)
        if where is None:
            break
        i, j = where
        D[t], D[i] = D[i], D[t]
        for row in D:
            row[t], row[j] = row[j], row[t]
        v = best
        unit = D[t][t][v:] + [0] * v
        w = _unit_inverse(unit, c, q)
        for i in range(t + 1, r):
            if pval(D[i][t]) == INF:
                continue
            f = pmul(D[i][t][v:], w, q, c)
            for j in range(s):
                D[i][j] = padd(D[i][j], pneg(pmul(f, D[t][j], q, c), q), q)[:c]
        for j in range(t + 1, s):
            if pval(D[t][j]) == INF:
                continue
            f = pmul(D[t][j][v:], w, q, c)
            for i in range(r):
                D[i][j] = padd(D[i][j], pneg(pmul(f, D[i][t], q, c), q), q)[:c]
        vals.append(v)
    return tuple(sorted(vals)), r - len(vals), s - len(vals)


def square_is_zero(A, c: int, q: int) -> bool:
    """Brute-force ``A . A = 0`` for a square matrix over ``k[x]/(x^c)``."""
    k = len(A)
    for i in range(k):
        for j in range(k):
            acc: list[int] = []
            for m in range(k):
                acc = padd(acc, pmul(A[i][m], A[m][j], q, c), q)
            if any(acc[:c]):
                return False
    return True


# closed forms for quasi-free modules


def quasi_free_char(m: tuple[int, ...]) -> tuple[int, ...]:
    """``F(k) = sum_{i=n+1-k}^n rank(level i)`` with level ``i`` of rank ``#{O_j : j >= i}``."""
    n = len(m)
    level = [sum(m[j - 1] for j in range(i, n + 1)) for i in range(1, n + 1)]
    return tuple(sum(level[i - 1] for i in range(n + 1 - k, n + 1)) for k in range(n + 1))


def quasi_free_second_char(m: tuple[int, ...]) -> tuple[int, ...]:
    """Second filtration of ``O_j``: ``ker z^{n+1-i}`` has rank ``min(j, n+1-i)``."""
    n = len(m)

    def R(i):  # rank of M^{(i)}
        return sum(m[j - 1] * min(j, n + 1 - i) for j in range(1, n + 1))

    return tuple(R(n + 1 - k) for k in range(n + 1))


def monomial_colength(gens: list[tuple[int, int]], n: int) -> int:
    """``dim k[[x]][z]/(z^n) / (monomials)``; finite only when some pure x-power per level exists."""
    total = 0
    for b in range(n):
        bound = min((a for a, bb in gens if bb <= b), default=None)
        if bound is None:
            raise ValueError("infinite colength")
        total += bound
    return total
