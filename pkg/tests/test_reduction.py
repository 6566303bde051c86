import random

import pytest

from kpoly import EXACT, HypothesisError
from kpoly.liealgebra import FIXTURES, abelian, heisenberg3, sl2, so3
from kpoly.polypoisson import check_axioms
from kpoly.polysymplectic import PolyForm, canonical_covelocity
from kpoly.reduction import (
    ReductionProblem,
    check_hypotheses,
    compare_with_gstar,
    cotangent_group,
    covelocity_principal_local,
    principal_coordinates,
    random_rational_mus,
    reduce_point,
)
from kpoly.subspaces import canonicalize, to_matrix


def line(vec):
    return canonicalize(to_matrix([vec], EXACT), EXACT, len(vec))


def test_covelocity_reduction_by_position_direction():
    red = reduce_point(ReductionProblem(canonical_covelocity(1, 2, EXACT), line([1, 0, 0])))
    assert red.quotient.kept == (1, 2)
    assert red.hatS.basis.tolist() == [[1, 0, 0, 1]]
    assert not red.hatsharp.any()
    assert red.image_identity


def test_hyp_ii_failure_witness_leaves_w():
    verdict = check_hypotheses(ReductionProblem(canonical_covelocity(1, 2, EXACT), line([0, 1, 0])))
    assert verdict.data["hyp_i"]
    assert not verdict.data["hyp_ii"]
    assert verdict.data["hyp_ii"].witness.tolist() == [0, 0, 1]


def test_hyp_i_failure_names_the_sample():
    W = line([1, 0, 0])
    # dq ^ dp1 and dp1 ^ dp2 on (q, p1, p2): the horizontal part jumps from 1 to 2
    other = PolyForm.from_matrices([[[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
                                    [[0, 0, 0], [0, 0, 1], [0, -1, 0]]], EXACT)
    rp = ReductionProblem(canonical_covelocity(1, 2, EXACT), W, ((other, W),))
    verdict = check_hypotheses(rp)
    assert not verdict.data["hyp_i"]
    assert verdict.data["hyp_i"].witness == {"sample": 0, "dim": 2, "dim_at_p": 1}
    with pytest.raises(HypothesisError):
        reduce_point(rp)


def test_hyp_ii_always_holds_for_symplectic_forms():
    rng = random.Random(7)
    omega = canonical_covelocity(2, 1, EXACT)
    for _ in range(20):
        vecs = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(rng.randint(1, 3))]
        W = canonicalize(to_matrix(vecs, EXACT), EXACT, 4)
        assert check_hypotheses(ReductionProblem(omega, W)).data["hyp_ii"]


def test_so3_isotropy_degenerate_pair():
    g = so3()
    mus = [[0, 0, 1], [0, 0, 1]]
    result = cotangent_group(g, 2, mus, n_random=2)
    assert all(result.diagnostics.values())
    assert result.diagnostics["isotropy-covectors"].data["isotropy_dim"] == 1
    match = compare_with_gstar(result, g, 2, mus)
    assert match.data["signs"] == [1]


@pytest.mark.parametrize("make", [so3, heisenberg3, abelian, sl2])
def test_group_reduction_matches_gstar_with_plus_sign(make):
    g = make()
    rng = random.Random(11)
    for k in (1, 2):
        mus = random_rational_mus(rng, k, g.n)
        result = cotangent_group(g, k, mus)
        assert result.reduced.image_identity
        assert check_axioms(result.reduced.point)
        assert 1 in compare_with_gstar(result, g, k, mus).data["signs"]


def test_abelian_reduction_has_zero_sharp():
    result = cotangent_group(abelian(3), 2, [[1, 2, 3], [0, 1, 0]])
    assert not result.reduced.hatsharp.any()
    assert compare_with_gstar(result, abelian(3), 2, [[1, 2, 3], [0, 1, 0]]).data["signs"] == [-1, 1]


def test_principal_coordinate_order():
    # (q, p^1, p^2, tau_1, tau_2) to (q, (p^1, tau_1), (p^2, tau_2)) with m_base = 1, n = 2
    assert principal_coordinates(1, 2, 2) == [0, 1, 3, 4, 2, 5, 6]


@pytest.mark.parametrize("m_base,name,k", [(1, "so3", 2), (2, "heisenberg3", 2)])
def test_principal_local_model(m_base, name, k):
    verdict = covelocity_principal_local(FIXTURES[name](), m_base, k, seed=3)
    assert verdict.data["signs"] == [-1]
    assert verdict.data["image_identity"]


def test_principal_local_without_base_is_group_reduction():
    verdict = covelocity_principal_local(sl2(), 0, 2, seed=5)
    assert verdict
    assert verdict.data["group_signs"] == [1]


def test_principal_local_frame_requirement():
    g = so3()
    rejected = covelocity_principal_local(g, 0, 3, mus=[[1, 0, 0], [0, 1, 0], [1, 1, 0]],
                                          require_frame=True)
    assert not rejected
    accepted = covelocity_principal_local(g, 0, 3, mus=[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                          require_frame=True)
    assert accepted and accepted.data["frame"]
