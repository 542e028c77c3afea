import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
import samplers
from artifact.errors import PrecisionError
from artifact.filtrations import (CxInvariants, QuasiFreeType, char_function, check_inclusion,
                                  combine_partitions, first_filtration, generalized_rank,
                                  generic_bound_holds, generic_type, lemma_dims,
                                  naive_min_generators, quasi_free_type, second_filtration,
                                  slope_rank, type_char_function)
from artifact.modules import (Kernel, Morph, ideal_module, realize, standard_expr,
                              standard_module, sum_expr)
from artifact.ring import Poly


def O(i, n, p=5):
    return standard_module("structure", {"i": i}, n, p)


def quasi_free_expr(m):
    n = len(m)
    parts = [standard_expr("structure", {"i": i + 1}, n) for i, c in enumerate(m) for _ in range(c)]
    return parts[0] if len(parts) == 1 else sum_expr(*parts)


# first filtration


@pytest.mark.parametrize("n, m", [(2, 1), (2, 2), (3, 2), (4, 3)])
def test_first_filtration_of_structure(n, m):
    rep = first_filtration(O(m, n))
    assert rep.graded == tuple(CxInvariants(1) if i < m else CxInvariants(0) for i in range(n))
    assert rep.chain[-1] == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_first_filtration_of_ideal_point(k):
    rep = first_filtration(standard_module("ideal_point", {"k": k}, 2, k + 3))
    assert rep.graded == (CxInvariants(1, (k,)), CxInvariants(1))


@pytest.mark.parametrize("k", [1, 2])
def test_first_filtration_of_torsion(k):
    rep = first_filtration(standard_module("torsion", {"k": k}, 3, 4))
    assert rep.graded == (CxInvariants(0, (k,)), CxInvariants(0), CxInvariants(0))


def test_graded_dims_sum_to_dim():
    M = standard_module("ideal_point", {"k": 2}, 2, 5)
    for rep in (first_filtration(M), second_filtration(M)):
        assert sum(rep.graded_dims) == M.dim


# second filtration


@pytest.mark.parametrize("k", [1, 2, 3])
def test_second_filtration_of_ideal_point(k):
    rep = second_filtration(standard_module("ideal_point", {"k": k}, 2, k + 3))
    assert rep.graded == (CxInvariants(1), CxInvariants(1))


def test_second_filtration_of_O1():
    M = O(1, 2)
    rep = second_filtration(M)
    assert rep.chain[1] == M.dim
    assert char_function(M, "second").increments() == (1, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_second_filtration_of_On(n):
    assert second_filtration(O(n, n)).ranks() == (1,) * n


@pytest.mark.parametrize("n, m", [(3, 1), (3, 2), (4, 2)])
def test_second_filtration_of_Om(n, m):
    # nonzero exactly on the top m levels
    assert second_filtration(O(m, n)).ranks() == (0,) * (n - m) + (1,) * m


# generalized rank


@pytest.mark.parametrize("n, m", [(2, 1), (2, 2), (3, 3), (4, 2)])
def test_generalized_rank_of_structure(n, m):
    assert generalized_rank(O(m, n)) == m


def test_generalized_rank_examples():
    assert generalized_rank(standard_module("ideal_point", {"k": 3}, 2, 6)) == 2
    assert generalized_rank(standard_module("torsion", {"k": 3}, 2, 6)) == 0


def test_precision_error_when_torsion_reaches_p():
    with pytest.raises(PrecisionError):
        combine_partitions([3, 3], [6, 3], 3)
    with pytest.raises(PrecisionError):
        combine_partitions([2], [5], 2)


def test_field_level_module_cannot_be_doubled():
    from artifact.modules import map_kernel
    M = O(2, 2, 4)
    K = map_kernel(np.zeros((M.dim, M.dim), dtype=np.int64), M, M)
    with pytest.raises(PrecisionError):
        generalized_rank(K)


# characteristic functions


def test_char_function_examples():
    assert char_function(O(2, 2)).values == (0, 1, 2)
    assert char_function(O(1, 2), "first").values == (0, 0, 1)
    assert char_function(O(1, 2), "second").values == (0, 1, 1)
    for k in (1, 2, 3):
        assert char_function(standard_module("ideal_point", {"k": k}, 2, 6)).values == (0, 1, 2)


@pytest.mark.parametrize("m", [(1, 0), (0, 1), (2, 1), (1, 0, 1), (0, 2, 1), (1, 1, 0, 1)])
def test_char_functions_of_quasi_free_match_closed_form(m):
    M = realize(quasi_free_expr(m), 4)
    assert char_function(M, "first").values == oracles.quasi_free_char(m)
    assert char_function(M, "second").values == oracles.quasi_free_second_char(m)
    assert type_char_function(m).values == oracles.quasi_free_char(m)


# quasi-free types


def test_quasi_free_type_examples():
    M = realize(sum_expr(standard_expr("structure", {"i": 2}, 2),
                         standard_expr("structure", {"i": 1}, 2)), 4)
    assert quasi_free_type(M) == QuasiFreeType((1, 1))
    assert quasi_free_type(ideal_module(2, 4, ["x", "z"])) is None
    # 2 O_3 + O_1 in n = 3
    M = realize(quasi_free_expr((1, 0, 2)), 4)
    assert quasi_free_type(M) == QuasiFreeType((1, 0, 2))


def test_lemma_dims_formula():
    m = (1, 2, 1)
    M = realize(quasi_free_expr(m), 4)
    n = len(m)
    expect = tuple(sum((j - i) * m[j - 1] for j in range(i + 1, n + 1)) for i in range(n))
    assert lemma_dims(M) == expect


def test_torsion_is_not_quasi_free():
    assert quasi_free_type(standard_module("torsion", {"k": 1}, 2, 4)) is None
    assert quasi_free_type(standard_module("ideal_point", {"k": 1}, 2, 4)) is None


# naive minimal generators


def test_naive_min_generators_examples():
    for i in (1, 2, 3):
        assert naive_min_generators(O(i, 3)) == 1
    assert naive_min_generators(ideal_module(2, 4, ["x", "z"])) == 2


@pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (2, 1)])
def test_naive_rank_is_not_additive(p, q):
    # 0 -> z^q O_{p+q} (= O_p(-qC)) -> O_{p+q} -> O_q -> 0
    n = p + q
    big = standard_expr("structure", {"i": n}, n)
    small = standard_expr("structure", {"i": q}, n)
    sub = Kernel(Morph(big, small, ((Poly.const(1),),)))
    A, B, C = (realize(e, 4) for e in (sub, big, small))
    assert A.dim + C.dim == B.dim
    gens = [naive_min_generators(M) for M in (A, B, C)]
    assert gens == [1, 1, 1]
    assert gens[1] != gens[0] + gens[2]
    ranks = [generalized_rank(M) for M in (A, B, C)]
    assert ranks == [p, p + q, q]
    assert ranks[1] == ranks[0] + ranks[2]


# properties on random structural modules


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_filtration_laws_on_random_modules(seed, n):
    rng = np.random.default_rng(seed)
    M = samplers.settle(samplers.random_structural_expr(rng, n))
    first, second = first_filtration(M), second_filtration(M)
    assert all(a <= b for a, b in zip(first.chain, second.chain))
    assert check_inclusion(M)
    assert list(first.chain) == sorted(first.chain, reverse=True) and first.chain[-1] == 0
    f1, f2 = char_function(M, "first"), char_function(M, "second")
    assert f1.is_convex() and f2.is_concave()
    assert f1.values[-1] == f2.values[-1] == slope_rank(M)
    assert generic_bound_holds(M)
    quasi_free_type(M)  # the two routes must not disagree


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_direct_sum_additivity(seed, n):
    rng = np.random.default_rng(seed)
    a = samplers.random_structural_expr(rng, n, 1)
    b = samplers.random_structural_expr(rng, n, 1)
    S = samplers.settle(sum_expr(a, b))
    A, B = realize(a, S.p), realize(b, S.p)
    assert generalized_rank(S) == generalized_rank(A) + generalized_rank(B)
    tor = [sum(g.torsion_length for g in first_filtration(M).graded) for M in (A, B, S)]
    assert tor[2] == tor[0] + tor[1]


def test_graded_torsion_is_not_additive_on_kernel_sequences():
    # 0 -> I_k -> O_2 -> T_k -> 0: ranks add (2 = 2 + 0) but torsion totals are k, 0, k
    for k in (1, 2, 3):
        A, B, C = (standard_module("ideal_point", {"k": k}, 2, 6),
                   O(2, 2, 6), standard_module("torsion", {"k": k}, 2, 6))
        tor = [sum(g.torsion_length for g in first_filtration(M).graded) for M in (A, B, C)]
        assert tor == [k, 0, k]
        assert [generalized_rank(M) for M in (A, B, C)] == [2, 2, 0]


@given(st.integers(0, 2**32 - 1))
def test_kernel_of_quasi_free_surjection_preserves_torsion_sum(seed):
    # between quasi-free modules the kernel is quasi-free and all torsion totals vanish
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    big = samplers.Free(n, 1)
    small = standard_expr("structure", {"i": int(rng.integers(1, n + 1))}, n)
    unit = Poly.from_dict({(0, 0): int(rng.integers(1, 32003)), (1, 1): int(rng.integers(32003))})
    K = realize(Kernel(Morph(big, small, ((unit,),))), 4)
    assert quasi_free_type(K) is not None
    assert sum(g.torsion_length for g in first_filtration(K).graded) == 0


def test_kernel_of_surjection_onto_O1_can_be_a_point_ideal():
    # O_2 + O_1 -> O_1, (a, b) -> a + x b: the kernel is generated by (-x, 1) and (z, 0)
    # with z(-x, 1) = -x(z, 0), which is the ideal (x, z) and not quasi-free
    from artifact.normal_forms import TorsionFreeNF, classify_torsion_free
    O2, O1 = (standard_expr("structure", {"i": i}, 2) for i in (2, 1))
    f = Morph(sum_expr(O2, O1), O1, ((Poly.const(1), Poly.mono(1, 0)),))
    K = realize(Kernel(f), 5)
    assert quasi_free_type(K) is None
    assert classify_torsion_free(K) == TorsionFreeNF((1,))
    assert first_filtration(K).graded == first_filtration(
        standard_module("ideal_point", {"k": 1}, 2, 5)).graded
    # with a constant coefficient the kernel is O_2, as expected
    g = Morph(sum_expr(O2, O1), O1, ((Poly.const(1), Poly.const(3)),))
    assert quasi_free_type(realize(Kernel(g), 5)) == QuasiFreeType((0, 1))


def test_generic_type():
    assert generic_type(7, 3) == (1, 0, 2)
    assert generic_type(6, 3) == (0, 0, 2)
    assert generic_type(1, 2) == (1, 0)
