"""Pointwise reduction of a polysymplectic form by a vertical subspace W,
with the worked group and principal-bundle models.

Whether S intersected with (W-annihilator)^k is a subbundle cannot be decided
from finitely many points; it is tested as constant dimension over the
supplied samples.  Invariance of the data under the group is assumed by
``reduce_point`` and holds by construction in the worked models.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from kpoly.errors import DimensionError, HypothesisError, Verdict
from kpoly.liealgebra import LieAlgebra
from kpoly.liepoisson import AlgebroidPointData, gstar_k, is_frame, whitney_point
from kpoly.polypoisson import (
    STRUCTURAL,
    PolyPoissonPoint,
    change_coordinates,
    permutation_matrix,
    polysymplectic_orthogonal,
)
from kpoly.polysymplectic import (
    PolyForm,
    canonical_covelocity,
    direct_sum,
    flat,
    is_polysymplectic,
)
from kpoly.subspaces import (
    Quotient,
    Subspace,
    annihilator,
    apply,
    block_diag,
    canonicalize,
    image,
    intersect,
    intersect_all,
    power,
    preimage,
    quotient,
    solve,
    to_matrix,
)

SUBBUNDLE_PROXY_NOTE = ("subbundle condition tested as constant dimension over the sample "
                        "points only")


@dataclass(frozen=True, eq=False)
class ReductionProblem:
    omega: PolyForm
    W: Subspace
    samples: tuple = ()

    def __post_init__(self):
        if not is_polysymplectic(self.omega):
            raise DimensionError("reduction needs a polysymplectic form")
        if self.W.ambient_dim != self.omega.m:
            raise DimensionError("W must be a subspace of the tangent space")
        for i, (om, w) in enumerate(self.samples):
            if (om.m, om.k, w.dim) != (self.omega.m, self.omega.k, self.W.dim):
                raise DimensionError(f"sample {i} does not share (m, k, dim W)")
            if not is_polysymplectic(om):
                raise DimensionError(f"sample {i} is not polysymplectic")


def _image_of_flat(omega: PolyForm) -> Subspace:
    return image(flat(omega), omega.scalar)


def _horizontal_part(omega: PolyForm, W: Subspace) -> Subspace:
    return intersect(_image_of_flat(omega), power(annihilator(W), omega.k))


def check_hypotheses(rp: ReductionProblem) -> Verdict:
    points = [(rp.omega, rp.W)] + list(rp.samples)
    dims = [_horizontal_part(om, w).dim for om, w in points]
    offender = next((i for i, d in enumerate(dims) if d != dims[0]), None)
    hyp_i = Verdict("hyp_i", offender is None,
                    witness=None if offender is None else {"sample": offender - 1,
                                                           "dim": dims[offender],
                                                           "dim_at_p": dims[0]},
                    detail=SUBBUNDLE_PROXY_NOTE, data={"dims": dims})

    om, W = rp.omega, rp.W
    k = om.k
    w_perp = polysymplectic_orthogonal(om, W)
    triple = intersect_all([power(annihilator(w_perp), k), power(annihilator(W), k),
                            _image_of_flat(om)])
    pulled = preimage(flat(om), triple)
    outside = next((v for v in pulled.basis if not W.contains(v)), None)
    hyp_ii = Verdict("hyp_ii", outside is None, witness=outside,
                     detail="" if outside is None else "flat preimage leaves W",
                     data={"w_perp": w_perp, "triple": triple})
    return Verdict("hypotheses", bool(hyp_i) and bool(hyp_ii),
                   witness=hyp_i.witness if not hyp_i else hyp_ii.witness,
                   detail=SUBBUNDLE_PROXY_NOTE, data={"hyp_i": hyp_i, "hyp_ii": hyp_ii})


@dataclass(frozen=True, eq=False)
class ReducedStructure:
    quotient: Quotient
    hatS: Subspace
    hatsharp: np.ndarray
    point: PolyPoissonPoint
    image_identity: Verdict
    hypotheses: Verdict


def reduce_point(rp: ReductionProblem) -> ReducedStructure:
    hyps = check_hypotheses(rp)
    if not hyps:
        raise HypothesisError("reduction hypotheses fail", hyps)
    om, W = rp.omega, rp.W
    sc, k, m = om.scalar, om.k, om.m
    q = quotient(m, W)
    pull = block_diag([q.projection.T] * k, sc)
    S = _image_of_flat(om)
    hatS = preimage(pull, S)
    fl = flat(om)
    if hatS.dim:
        xs = solve(fl, pull @ hatS.basis.T, sc)
        if xs is None:
            raise AssertionError("pulled-back covectors are not in the image of flat")
        hatsharp = q.projection @ xs
    else:
        hatsharp = sc.zeros((q.dim, 0))
    point = PolyPoissonPoint(q.dim, k, hatS, hatsharp, STRUCTURAL)

    w_perp = hyps.data["hyp_ii"].data["w_perp"]
    img = image(hatsharp, sc) if hatS.dim else canonicalize([], sc, q.dim)
    expected = apply(q.projection, w_perp)
    identity = Verdict("image-identity", img == expected,
                       detail=f"dim image = {img.dim}, dim projected W-perp = {expected.dim}")
    if not identity:
        raise AssertionError("image of the reduced sharp differs from the projected orthogonal")
    return ReducedStructure(q, hatS, hatsharp, point, identity, hyps)


def match_signs(a: PolyPoissonPoint, b: PolyPoissonPoint) -> set:
    """Signs s in {+1, -1} with a == (S, s * b.sharp); empty when S differs."""
    return {s for s in (1, -1) if a.same_as(b, s)}


def group_flat_blocks(g: LieAlgebra, mus, ad_sign: int = 1) -> list:
    """Flat map of the left-trivialized covelocity form on g x (g*)^k at mu.

    Block A sends (xi, tau_1..tau_k) to (ad*_xi mu_A - tau_A, xi in slot A).
    """
    sc = g.scalar
    n = g.n
    mus = to_matrix(mus, sc)
    k = mus.shape[0]
    dim = n + k * n
    blocks = []
    for a in range(k):
        F = sc.zeros((dim, dim))
        F[:n, :n] = g.coad_matrix(mus[a], ad_sign)
        F[:n, n + a * n:n + (a + 1) * n] = -sc.eye(n)
        F[n + a * n:n + (a + 1) * n, :n] = sc.eye(n)
        blocks.append(F)
    return blocks


def group_form(g: LieAlgebra, mus, ad_sign: int = 1) -> PolyForm:
    blocks = group_flat_blocks(g, mus, ad_sign)
    return PolyForm.from_matrices([F.T for F in blocks], g.scalar)


def random_rational_mus(rng: random.Random, k: int, n: int, bound: int = 5) -> list:
    return [[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n)]
            for _ in range(k)]


@dataclass
class GroupReduction:
    problem: ReductionProblem
    reduced: ReducedStructure
    diagnostics: dict = field(default_factory=dict)


def cotangent_group(g: LieAlgebra, k: int, mus, samples: Sequence = (), ad_sign: int = 1,
                    n_random: int = 0, seed: int = 0) -> GroupReduction:
    """Reduce the covelocity form of G (left-trivialized at mu) by the vertical g-block."""
    sc = g.scalar
    n = g.n
    mus = to_matrix(mus, sc)
    if mus.shape != (k, n):
        raise DimensionError(f"need {k} covectors of length {n}")
    dim = n + k * n
    W = canonicalize(list(sc.eye(dim)[:n]), sc, dim)
    rng = random.Random(seed)
    sample_mus = [to_matrix(s, sc) for s in samples]
    sample_mus += [to_matrix(random_rational_mus(rng, k, n), sc) for _ in range(n_random)]
    omega = group_form(g, mus, ad_sign)
    rp = ReductionProblem(omega, W, tuple((group_form(g, s, ad_sign), W) for s in sample_mus))
    reduced = reduce_point(rp)

    diag = {}
    horizontal = _horizontal_part(omega, W)
    diag_block = []
    for j in range(n):
        v = sc.zeros(k * dim)
        for a in range(k):
            v[a * dim + n + a * n + j] = sc.convert(1)
        diag_block.append(v)
    eq4 = canonicalize(diag_block, sc, k * dim)
    diag["horizontal-covectors"] = Verdict("horizontal-covectors", horizontal == eq4,
                                           data={"dim": horizontal.dim})

    iso = g.isotropy(list(mus), ad_sign)
    eq5_vecs = [np.sum([e * row for e, row in zip(eta, diag_block)], axis=0) for eta in iso.basis]
    eq5 = canonicalize(eq5_vecs, sc, k * dim)
    triple = reduced.hypotheses.data["hyp_ii"].data["triple"]
    diag["isotropy-covectors"] = Verdict("isotropy-covectors", triple == eq5,
                                         data={"dim": triple.dim, "isotropy_dim": iso.dim})

    w_perp = reduced.hypotheses.data["hyp_ii"].data["w_perp"]
    perp_vecs = []
    for j in range(n):
        xi = g.basis(j)
        perp_vecs.append(np.concatenate([xi] + [g.coad(xi, mus[a], ad_sign) for a in range(k)]))
    formula = canonicalize(perp_vecs, sc, dim)
    diag["orthogonal"] = Verdict("orthogonal", w_perp == formula)

    ann_vecs = []
    for a in range(k):
        for j in range(n):
            xi = g.basis(j)
            v = sc.zeros(dim)
            v[:n] = g.coad(xi, mus[a], ad_sign)
            v[n + a * n:n + (a + 1) * n] = xi
            ann_vecs.append(v)
    diag["orthogonal-annihilator"] = Verdict(
        "orthogonal-annihilator", annihilator(w_perp) == canonicalize(ann_vecs, sc, dim))
    return GroupReduction(rp, reduced, diag)


def compare_with_gstar(result: GroupReduction, g: LieAlgebra, k: int, mus,
                       ad_sign: int = 1) -> Verdict:
    target = gstar_k(g, k, mus, ad_sign)
    signs = match_signs(result.reduced.point, target)
    return Verdict("gstar-match", bool(signs), data={"signs": sorted(signs)},
                   detail="equal S; sharp agrees up to sign" if signs else "structures differ")


def principal_coordinates(m_base: int, n: int, k: int) -> list:
    """Position in the reduced coordinates (q, p^1..p^k, tau_1..tau_k) of each
    Whitney-sum coordinate (q, (p^1, tau_1), ..., (p^k, tau_k))."""
    order = list(range(m_base))
    for a in range(k):
        order += [m_base + a * m_base + b for b in range(m_base)]
        order += [m_base * (1 + k) + a * n + b for b in range(n)]
    return order


def covelocity_principal_local(g: LieAlgebra, m_base: int, k: int, base_p=None, mus=None,
                               seed: int = 0, require_frame: bool = False,
                               ad_sign: int = 1) -> Verdict:
    """Reduce the product of the base covelocity form and the group form by the
    g-directions, and compare with the Whitney sum over the Atiyah data."""
    sc = g.scalar
    n = g.n
    rng = random.Random(seed)
    if mus is None:
        mus = random_rational_mus(rng, k, n)
    if base_p is None:
        base_p = random_rational_mus(rng, k, m_base) if m_base else [[] for _ in range(k)]
    mus = to_matrix(mus, sc)
    base_p = to_matrix(base_p, sc) if m_base else sc.zeros((k, 0))
    if mus.shape != (k, n) or base_p.shape != (k, m_base):
        raise DimensionError("point does not match (m_base, n, k)")

    fiber = np.concatenate([base_p, mus], axis=1)
    frame = None
    if require_frame:
        frame = is_frame(fiber, k, sc)
        if not frame:
            return Verdict("principal-local", False, detail="point is not a frame",
                           data={"frame": False})

    gform = group_form(g, mus, ad_sign)
    omega = direct_sum([canonical_covelocity(m_base, k, sc), gform]) if m_base else gform
    dim = omega.m
    offset = m_base * (1 + k)
    W = canonicalize(list(sc.eye(dim)[offset:offset + n]), sc, dim)
    reduced = reduce_point(ReductionProblem(omega, W))

    order = principal_coordinates(m_base, n, k)
    moved = change_coordinates(reduced.point, permutation_matrix(order, sc))
    target = whitney_point(AlgebroidPointData.atiyah(m_base, g), fiber)
    signs = match_signs(moved, target)
    data = {"signs": sorted(signs), "reduced": reduced, "whitney": target,
            "image_identity": reduced.image_identity, "frame": frame}
    if m_base == 0:
        group = cotangent_group(g, k, mus, ad_sign=ad_sign)
        data["group_signs"] = sorted(match_signs(group.reduced.point, reduced.point))
    return Verdict("principal-local", bool(signs), data=data,
                   detail="reduced structure matches the Whitney sum over the Atiyah data"
                   if signs else "reduced structure differs from the Whitney sum")
