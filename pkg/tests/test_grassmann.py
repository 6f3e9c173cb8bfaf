import random
from math import comb

import pytest

from grassdual.exterior import KVector, subspace_from_vectors
from grassdual.grassmann import (
    GrassmannError,
    PlanePoint,
    expected_secant_dim,
    is_transverse,
    osculating2_cone,
    osculating_intersection,
    plucker,
    standard_pair,
    tangent_cone,
    terracini_secant_dim,
)
from oracles import plucker_minors


def test_plucker_coordinate_planes():
    assert plucker(PlanePoint.coordinate(6, [1, 2, 3])) == KVector.monomial(6, 1, 2, 3)
    assert plucker(PlanePoint.coordinate(6, [4, 5, 6])) == KVector.monomial(6, 4, 5, 6)


def test_plucker_expanded_by_hand():
    P = PlanePoint(4, 3, ((1, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0)))
    # (e1+e4)^e2^e3 = e123 + e423 = e123 + e234
    assert plucker(P) == KVector.monomial(4, 1, 2, 3) + KVector.monomial(4, 2, 3, 4)


def test_plucker_matches_minors():
    rng = random.Random(5)
    for _ in range(20):
        P = PlanePoint.random(7, 3, rng)
        assert dict(plucker(P).coeffs) == plucker_minors(P.basis_vectors, 7)


def test_plucker_scales_with_basis_vector():
    P = PlanePoint(5, 2, ((1, 2, 0, 0, 1), (0, 1, 1, 0, 0)))
    Q = PlanePoint(5, 2, ((3, 6, 0, 0, 3), (0, 1, 1, 0, 0)))
    assert plucker(Q) == plucker(P).scale(3)


def test_dependent_basis_rejected():
    with pytest.raises(GrassmannError):
        PlanePoint(4, 2, ((1, 2, 3, 4), (2, 4, 6, 8)))


@pytest.mark.parametrize("k,n,dim", [(3, 6, 10), (3, 8, 16), (4, 8, 17)])
def test_tangent_cone_dims(k, n, dim):
    assert tangent_cone(PlanePoint.coordinate(n, range(1, k + 1))).dim == dim == k * (n - k) + 1


@pytest.mark.parametrize("k,n,dim", [(3, 6, 19), (3, 8, 46), (4, 8, 53)])
def test_osculating_cone_dims(k, n, dim):
    E = PlanePoint.coordinate(n, range(1, k + 1))
    count = sum(comb(k, j) * comb(n - k, k - j) for j in range(k - 1, k + 1)) + comb(k, k - 2) * comb(n - k, 2)
    assert osculating2_cone(E).dim == dim == count


def test_tangent_inside_osculating():
    rng = random.Random(1)
    for n, k in [(6, 3), (7, 3), (8, 4)]:
        P = PlanePoint.random(n, k, rng)
        assert tangent_cone(P) <= osculating2_cone(P)
        assert plucker(P).sparse() and tangent_cone(P).contains(plucker(P).coordinates())


def test_osculating_needs_k2():
    with pytest.raises(GrassmannError):
        osculating2_cone(PlanePoint.coordinate(5, [1]))


def test_intersection_k3_is_u_wedge_lambda2_u_prime():
    P, Q = standard_pair(9, 3)
    got = osculating_intersection(P, Q)
    basis = [KVector.monomial(9, i, s, t).coordinates()
             for i in (1, 2, 3) for s in (4, 5, 6) for t in (4, 5, 6) if s < t]
    assert got == subspace_from_vectors(basis, comb(9, 3))


@pytest.mark.parametrize("k,n", [(4, 9), (5, 10), (4, 8)])
def test_intersection_vanishes_for_k_ge_4(k, n):
    assert osculating_intersection(*standard_pair(n, k)).dim == 0


def test_generic_pair_agrees_with_standard_pair():
    rng = random.Random(7)
    for k, n in [(3, 7), (4, 9)]:
        P, Q = PlanePoint.random(n, k, rng), PlanePoint.random(n, k, rng)
        assert is_transverse(P, Q)
        assert osculating_intersection(P, Q).dim == (9 if k == 3 else 0)


def test_non_transverse_rejected():
    P = PlanePoint.coordinate(6, [1, 2, 3])
    Q = PlanePoint.coordinate(6, [3, 4, 5])
    with pytest.raises(GrassmannError):
        osculating_intersection(P, Q)
    with pytest.raises(GrassmannError):
        terracini_secant_dim(P, Q)


@pytest.mark.parametrize("n,dim", [(6, 19), (7, 25), (8, 31)])
def test_terracini(n, dim):
    assert terracini_secant_dim(*standard_pair(n, 3)) == dim == expected_secant_dim(3, n)


def test_terracini_sees_defective_g2n():
    # sigma_2(G(2,6)) has dimension 13, below the expected 17
    assert terracini_secant_dim(*standard_pair(6, 2)) == 13 < expected_secant_dim(2, 6)
