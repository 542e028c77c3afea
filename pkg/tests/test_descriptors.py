from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.descriptors import (Rank3Datum, SheafDescriptor, deformation_threshold,
                                  euler_characteristic, ideal_ext_dims, ideal_points_descriptor,
                                  ideal_points_torsion, locally_free_descriptor, qlf2_relations,
                                  qlf2_tensor, rank2_relations, rank3_analysis, rr_invariants,
                                  semistability, slope)
from artifact.errors import PreconditionError
from artifact.filtrations import first_filtration
from artifact.modules import standard_module

small = st.integers(-20, 20)
descriptors = st.integers(1, 4).flatmap(lambda n: st.builds(
    SheafDescriptor, st.just(n), st.integers(0, 6), st.integers(-5, 0),
    st.lists(st.tuples(st.integers(0, 4), small), min_size=n, max_size=n).map(tuple)))


def test_rr_of_OC():
    for g in range(5):
        D = SheafDescriptor(1, g, 0, ((1, 0),))
        assert rr_invariants(D).chi == 1 - g


@given(descriptors, st.integers(1, 9), st.integers(-10, 10))
def test_rr_laws(D, delta, m):
    rep = rr_invariants(D, delta)
    assert rep.chi == D.Deg + D.R * (1 - D.g) == euler_characteristic(D)
    assert rep.hilbert_value(m + 1) - rep.hilbert_value(m) == D.R * delta
    if D.R:
        assert rep.slope == Fraction(D.Deg, D.R)
    else:
        assert rep.slope is None


def test_slope_of_rank_zero():
    with pytest.raises(PreconditionError):
        slope(SheafDescriptor(1, 0, 0, ((0, 3),)))


@pytest.mark.parametrize("n, g, degL, p0", [(2, 1, -1, 1), (3, 2, -2, 2), (4, 0, -1, 3)])
def test_ideal_points_chi(n, g, degL, p0):
    D = ideal_points_descriptor(n, g, degL, p0)
    assert euler_characteristic(D) == -p0 + n * (n - 1) // 2 * degL + n * (1 - g)


def test_locally_free_examples():
    for degL in (-1, -3):
        D = locally_free_descriptor(2, 1, 0, 1, degL)
        assert D.gr == ((1, 0), (1, degL)) and D.Deg == degL
    assert locally_free_descriptor(3, 2, 5, 1, -1).Deg == 9
    assert locally_free_descriptor(1, 3, 7, 1, -1).Deg == 7


@given(st.integers(1, 5), st.integers(1, 4), small, st.integers(-4, 0))
def test_locally_free_total_degree(n, r, d, degL):
    D = locally_free_descriptor(n, r, d, 0, degL)
    assert D.Deg == n * d + n * (n - 1) // 2 * r * degL
    assert D.R == n * r


def test_ideal_points_examples():
    for degL in (-1, -2):
        assert ideal_points_descriptor(2, 1, degL, 1).Deg == -1 + degL
    assert ideal_points_descriptor(3, 1, -1, 2).Deg == -5
    assert ideal_points_descriptor(1, 1, -1, 3).gr == ((1, -3),)


@given(st.integers(1, 5), st.integers(-4, 0), st.integers(1, 5))
def test_ideal_points_degree(n, degL, p0):
    D = ideal_points_descriptor(n, 0, degL, p0)
    assert D.R == n
    assert D.Deg == -p0 + n * (n - 1) // 2 * degL


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ideal_descriptor_matches_local_torsion(k):
    # one point of length k on C_2: level ranks (1, 1), torsion k on level 1 only
    rep = first_filtration(standard_module("ideal_point", {"k": k}, 2, k + 3))
    assert rep.ranks() == tuple(r for r, _ in ideal_points_descriptor(2, 0, -1, k).gr)
    assert tuple(g.torsion_length for g in rep.graded) == ideal_points_torsion(2, k)


def test_semistability_examples():
    a = SheafDescriptor(1, 0, 0, ((2, 2),))
    b = SheafDescriptor(1, 0, 0, ((1, 1),))
    assert semistability(b, a) and not semistability(b, a, strict=True)
    sub = SheafDescriptor(1, 0, 0, ((1, -1),))
    whole = SheafDescriptor(2, 0, -1, ((1, 0), (1, 0)))
    assert semistability(sub, whole) and semistability(sub, whole, strict=True)
    with pytest.raises(PreconditionError):
        semistability(SheafDescriptor(1, 0, 0, ((0, 0),)), a)


@given(descriptors, st.data())
def test_descriptor_addition_is_additive(D, data):
    E = SheafDescriptor(D.n, D.g, D.degL, tuple(
        data.draw(st.tuples(st.integers(0, 4), small)) for _ in range(D.n)))
    S = D + E
    assert (S.R, S.Deg) == (D.R + E.R, D.Deg + E.Deg)
    assert euler_characteristic(S) == euler_characteristic(D) + euler_characteristic(E)


def test_qlf2_examples():
    degL, e = -2, 3
    q = qlf2_relations((1, e), (1, e - degL), degL)
    assert q.Deg == 2 * e - degL
    assert q.Deg == locally_free_descriptor(2, 1, e - degL, 0, degL).Deg
    eps, gamma, l = 1, 4, 3
    q = qlf2_relations((1, eps), (2, eps + gamma + l), -l)
    assert (q.Gamma, q.G, q.Deg) == ((1, gamma), (2, eps + gamma), 2 * eps + gamma + l)
    q = qlf2_relations((0, 0), (1, 5), -1)
    assert q.Gamma == q.G == (1, 5) and q.Deg == 5
    with pytest.raises(PreconditionError):
        qlf2_relations((2, 0), (1, 0), -1)


@given(st.integers(0, 3), small, st.integers(0, 3), small, st.integers(-4, -1))
def test_qlf2_bookkeeping(rE, dE, extra, dF, degL):
    q = qlf2_relations((rE, dE), (rE + extra, dF), degL)
    assert q.G[1] == q.E[1] + q.Gamma[1]
    assert q.G[0] == q.F[0]
    assert q.Deg == q.E[1] + q.F[1]


def test_qlf2_tensor_of_line_bundles():
    # line bundles on C_2 with restrictions of degree 3 and 1 tensor to one of degree 4
    degL = -1
    a = qlf2_relations((1, 3 + degL), (1, 3), degL)
    b = qlf2_relations((1, 1 + degL), (1, 1), degL)
    t = qlf2_tensor(a, b, degL)
    assert t.F == (1, 4) and t.E == (1, 4 + degL)
    assert t.Gamma == (0, 0)
    assert t.Deg == locally_free_descriptor(2, 1, 4, 0, degL).Deg


def test_rank2_examples():
    h = rank2_relations(0, -2, 0)
    assert (h.value, h.parity_ok) == (1, True)
    h = deformation_threshold(1, -2, 1)
    assert (h.value, h.parity_ok) == (0, True)
    assert not rank2_relations(1, -2, 0).parity_ok
    assert rank2_relations(1, -2, 0).value is None


def test_rank3_examples():
    gamma, l = 5, 2
    rep = rank3_analysis(Rank3Datum(gamma - 2 * l, gamma, l, 2))
    assert rep.window_semistable and not rep.window_stable
    rep = rank3_analysis(Rank3Datum(l + gamma, gamma, l, 2))
    assert rep.window_semistable and not rep.window_stable
    assert rank3_analysis(Rank3Datum(0, 0, 1, 2)).moduli_dim == 8
    assert not rank3_analysis(Rank3Datum(gamma, gamma, l, 2)).moduli_hypothesis
    assert not rank3_analysis(Rank3Datum(gamma - l, gamma, l, 2)).moduli_hypothesis
    assert rank3_analysis(Rank3Datum(gamma - 1, gamma, l, 2)).moduli_hypothesis
    with pytest.raises(PreconditionError):
        Rank3Datum(0, 0, 0, 1)


@given(small, small, st.integers(1, 6), st.integers(0, 5))
def test_rank3_consistency(eps, gamma, l, g):
    rep = rank3_analysis(Rank3Datum(eps, gamma, l, g), True, True)
    assert rep.Deg == 2 * eps + gamma + l
    assert rep.Deg == rep.degE + rep.degF
    assert rep.Deg == rep.degG + (eps + l)
    assert rep.moduli_applicable == rep.moduli_hypothesis
    assert rep.moduli_dim == 5 * g + 2 * l - 4
    assert rep.window_stable <= rep.window_semistable
    q = qlf2_relations((1, eps), (2, eps + gamma + l), -l)
    assert (q.G[1], q.Gamma[1]) == (rep.degG, rep.degGamma)


def test_rank3_stability_flags():
    d = Rank3Datum(3, 4, 2, 1)
    assert rank3_analysis(d).moduli_hypothesis
    assert not rank3_analysis(d).moduli_applicable
    assert not rank3_analysis(d, F_stable=True).moduli_applicable
    assert rank3_analysis(d, True, True).moduli_applicable


def test_ideal_ext_examples():
    rep = ideal_ext_dims(2, 1, 1, 1, 0, 0, 0)
    assert rep.dim_ext_Cn == 5
    assert rep.dim_ext_S == 5
    assert rep.dim_ext_S - rep.dim_ext_Cn == rep.codim
    assert rep.genus == 2
    assert rep.end_dim == 1


@given(st.integers(1, 5), st.integers(-6, 6), st.integers(-6, 6), st.integers(0, 6),
       st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_ideal_ext_identity(n, Csq, KSC, p0, h0_a, h0_b, h0_K):
    if (Csq + KSC) % 2 or (n * n * Csq + n * KSC) % 2:
        with pytest.raises(PreconditionError):
            ideal_ext_dims(n, Csq, KSC, p0, h0_a, h0_b, h0_K)
        return
    rep = ideal_ext_dims(n, Csq, KSC, p0, h0_a, h0_b, h0_K)
    assert rep.dim_ext_S - rep.dim_ext_Cn == rep.codim


def test_ideal_ext_parity_error():
    with pytest.raises(PreconditionError):
        ideal_ext_dims(2, 1, 0, 1, 0, 0, 0)


def test_descriptor_json_round_trip():
    D = ideal_points_descriptor(3, 2, -1, 2)
    assert SheafDescriptor.from_json(D.to_json()) == D
