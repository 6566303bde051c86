import numpy as np
import pytest

from helpers import random_polyform, random_shape
from kpoly import EXACT, FLOAT, AxiomError, RejectionError
from kpoly.polypoisson import (
    STRUCTURAL,
    PolyPoissonPoint,
    change_coordinates,
    characteristic_distribution,
    check_axioms,
    dirac_type,
    foliated_construction,
    from_polysymplectic,
    leaf_form,
    pairing_matrix,
    permutation_matrix,
    polysymplectic_orthogonal,
)
from kpoly.polysymplectic import (
    PolyForm,
    canonical_covelocity,
    flat,
    product_of_symplectic,
    standard_symplectic,
)
from kpoly.subspaces import canonicalize, full_space, inverse, to_matrix


def r4_example():
    omega = PolyForm.from_matrices([standard_symplectic(2, EXACT)], EXACT)
    D = canonicalize(to_matrix([[1, 0, 0, 0], [0, 0, 1, 0]], EXACT), EXACT, 4)
    return omega, D


def test_symplectic_plane_sharp_oracle():
    pp = from_polysymplectic(canonical_covelocity(1, 1, EXACT))
    assert pp.S.dim == 2
    assert pp.sharp.tolist() == [[0, 1], [-1, 0]]
    assert pp.integrability_status == STRUCTURAL


def test_covelocity_structure_has_rank_m_plus_mk():
    pp = from_polysymplectic(canonical_covelocity(2, 2, EXACT))
    assert pp.S.dim == 6
    assert characteristic_distribution(pp).dim == 6
    assert check_axioms(pp)


def test_sharp_inverts_flat_on_random_forms(rng):
    for _ in range(25):
        m, k = random_shape(rng)
        omega = random_polyform(rng, m, k, FLOAT)
        pp = from_polysymplectic(omega)
        coords = np.array([pp.S.coordinates(c) for c in flat(omega).T]).T
        assert np.abs(pp.sharp @ coords - np.eye(m)).max() < 1e-9
        P = pairing_matrix(pp)
        assert np.abs(P + P.transpose(0, 2, 1)).max() < 1e-12


def test_axiom_i_violation_reports_witness():
    S = full_space(2, EXACT)
    with pytest.raises(AxiomError):
        PolyPoissonPoint(2, 1, S, EXACT.eye(2))
    pp = PolyPoissonPoint(2, 1, S, EXACT.eye(2), deferred=True)
    verdict = check_axioms(pp)
    assert not verdict.data["i"]
    assert verdict.data["i"].witness["basis_index"] == 0


def test_axiom_ii_violation_reports_witness():
    S = canonicalize(to_matrix([[1, 0]], EXACT), EXACT, 2)
    sharp = to_matrix([[0], [1]], EXACT)
    pp = PolyPoissonPoint(2, 1, S, sharp, deferred=True)
    verdict = check_axioms(pp)
    assert verdict.data["i"] and verdict.data["antisymmetry"]
    assert not verdict.data["ii"]
    assert verdict.data["ii"].witness["sharp"].tolist() == [0, 1]


def test_leaf_form_of_symplectic_structure_is_the_form():
    omega = canonical_covelocity(1, 1, EXACT)
    leaf = leaf_form(from_polysymplectic(omega))
    assert leaf.tangent.dim == 2
    assert leaf.form == omega


def test_dirac_r4_example():
    omega, D = r4_example()
    pp = dirac_type(omega, D)
    assert pp.S.dim == 4
    assert characteristic_distribution(pp) == D
    assert check_axioms(pp)


def test_dirac_rejects_isotropic_distribution():
    omega, _ = r4_example()
    lagrangian = canonicalize(to_matrix([[1, 0, 0, 0], [0, 1, 0, 0]], EXACT), EXACT, 4)
    with pytest.raises(RejectionError) as info:
        dirac_type(omega, lagrangian)
    assert lagrangian.contains(info.value.witness)


def test_polysymplectic_orthogonal_of_symplectic_plane():
    omega, _ = r4_example()
    line = canonicalize(to_matrix([[1, 0, 0, 0]], EXACT), EXACT, 4)
    perp = polysymplectic_orthogonal(omega, line)
    assert perp.basis.tolist() == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]


def test_foliated_construction_matches_product_form():
    w = standard_symplectic(1, EXACT)
    eye = EXACT.eye(4)
    poisson = inverse(w.T, EXACT)
    pp = foliated_construction([eye[:2], eye[2:]], [poisson, poisson], full_space(4, EXACT))
    target = from_polysymplectic(product_of_symplectic([w, w], EXACT))
    assert pp.same_as(target)


def test_foliated_construction_rejects_incompatible_distribution():
    w = standard_symplectic(1, EXACT)
    eye = EXACT.eye(4)
    poisson = inverse(w.T, EXACT)
    F = canonicalize(eye[:2], EXACT, 4)
    with pytest.raises(RejectionError) as info:
        foliated_construction([eye[:2], eye[2:]], [poisson, poisson], F)
    assert info.value.witness["factor"] == 1


def test_coordinate_permutation_round_trip():
    pp = from_polysymplectic(canonical_covelocity(1, 2, EXACT))
    J = permutation_matrix([2, 0, 1], EXACT)
    moved = change_coordinates(pp, J)
    back = change_coordinates(moved, inverse(J, EXACT))
    assert back.same_as(pp)
    assert not moved.same_as(pp)
