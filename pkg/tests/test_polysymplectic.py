import numpy as np
import pytest

from helpers import random_polyform, random_shape
from kpoly import EXACT, FLOAT, DegenerateError, NotSkewError, RejectionError
from kpoly.liealgebra import heisenberg3, nonjacobi3, so3
from kpoly.polysymplectic import (
    PolyForm,
    canonical_covelocity,
    coadjoint_orbit_form,
    direct_sum,
    flat,
    is_polysymplectic,
    k_coadjoint_polyform,
    product_of_symplectic,
    pullback_family,
    require_polysymplectic,
    standard_symplectic,
)
from kpoly.subspaces import kernel, rank, to_matrix


def test_canonical_covelocity_entries():
    omega = canonical_covelocity(1, 2, EXACT)
    assert omega.forms[0].tolist() == [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    assert omega.forms[1].tolist() == [[0, 0, 1], [0, 0, 0], [-1, 0, 0]]
    # flat(X)^A = omega^A(X, .): the first block is the transpose of omega^1
    assert flat(omega)[:3].tolist() == [[0, -1, 0], [1, 0, 0], [0, 0, 0]]


@pytest.mark.parametrize("m,k", [(1, 1), (1, 2), (2, 2), (3, 3)])
def test_canonical_covelocity_is_polysymplectic(m, k):
    assert is_polysymplectic(canonical_covelocity(m, k, EXACT))


def test_single_component_is_degenerate_for_k_two():
    omega = canonical_covelocity(1, 2, EXACT)
    first = PolyForm(omega.forms[:1], EXACT)
    verdict = is_polysymplectic(first)
    assert not verdict
    assert verdict.witness.tolist() == [0, 0, 1]
    with pytest.raises(DegenerateError) as info:
        require_polysymplectic(first)
    assert info.value.witness.tolist() == [0, 0, 1]


def test_non_skew_input_is_rejected():
    with pytest.raises(NotSkewError):
        PolyForm.from_matrices([[[0, 1], [1, 0]]], EXACT)


def test_product_of_symplectic_factors():
    w = standard_symplectic(1, EXACT)
    omega = product_of_symplectic([w, w], EXACT)
    assert omega.m == 4 and omega.k == 2
    assert is_polysymplectic(omega)
    assert omega.forms[1][2:, 2:].tolist() == w.tolist()
    assert not omega.forms[1][:2, :2].any()


def test_pullback_family_rejects_common_kernel():
    proj = to_matrix([[1, 0, 0], [0, 1, 0]], EXACT)
    with pytest.raises(RejectionError) as info:
        pullback_family([proj, proj], [standard_symplectic(1, EXACT)] * 2, EXACT)
    assert info.value.witness.tolist() == [0, 0, 1]


def test_direct_sum_keeps_nondegeneracy(rng):
    a = random_polyform(rng, 2, 2, EXACT)
    b = canonical_covelocity(1, 2, EXACT)
    total = direct_sum([a, b])
    assert total.m == 5
    assert is_polysymplectic(total)


def test_random_forms_flat_rank_float_and_exact_agree(rng):
    for _ in range(20):
        m, k = random_shape(rng, 6)
        exact = random_polyform(rng, m, k, EXACT)
        floats = PolyForm(exact.forms.astype(float), FLOAT)
        assert rank(flat(exact), EXACT) == rank(flat(floats), FLOAT) == m


def test_so3_orbit_generator_pair_value():
    g = so3()
    orbit = coadjoint_orbit_form(g, [0, 0, 1])
    assert orbit.tangent.dim == 2
    # omega(xi_nu, eta_nu) = -nu([xi, eta]); [e_0, e_1] = e_2 and nu = e_2^*
    assert orbit.on_generators(g.basis(0), g.basis(1)).tolist() == [-1]
    assert orbit.on_generators(g.basis(1), g.basis(2)).tolist() == [0]


def test_heisenberg_orbit_through_center_covector():
    orbit = coadjoint_orbit_form(heisenberg3(), [0, 0, 1])
    assert orbit.tangent.dim == 2
    assert is_polysymplectic(orbit.form)


def test_k_coadjoint_orbit_with_isotropy_degenerate_covectors():
    orbit = k_coadjoint_polyform(so3(), [[0, 0, 1], [0, 0, 1]])
    assert orbit.tangent.dim == 2
    assert orbit.form.k == 2
    assert np.array_equal(orbit.form.forms[0], orbit.form.forms[1])


def test_k_coadjoint_orbit_generic_pair_is_full():
    orbit = k_coadjoint_polyform(so3(), [[0, 0, 1], [1, 0, 0]])
    assert orbit.tangent.dim == 3
    assert kernel(flat(orbit.form), EXACT, 3).dim == 0


def test_orbit_form_refuses_non_jacobi_constants():
    with pytest.raises(RejectionError):
        coadjoint_orbit_form(nonjacobi3(), [1, 0, 0])
