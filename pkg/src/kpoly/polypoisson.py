"""Pointwise poly-Poisson structures (S, sharp).

S is a subspace of (R^m)^k stored in R^{k m} (A-th block = A-th covector),
and ``sharp`` is an m x dim(S) matrix acting on the canonical coordinates of
S, i.e. ``sharp @ S.coordinates(alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from kpoly.errors import AxiomError, DimensionError, RejectionError, Verdict
from kpoly.polysymplectic import PolyForm, flat, flat_block, is_polysymplectic, require_polysymplectic
from kpoly.subspaces import (
    Scalar,
    Subspace,
    annihilator,
    apply,
    arrays_equal,
    block_diag,
    canonicalize,
    image,
    intersect,
    intersect_all,
    inverse,
    is_zero_array,
    kernel,
    map_from_pairs,
    preimage,
    solve,
    to_matrix,
)

VERIFIED_EXACT = "verified-exact"
STRUCTURAL = "structural"
UNVERIFIED = "unverified"
STATUSES = (VERIFIED_EXACT, STRUCTURAL, UNVERIFIED)


@dataclass(frozen=True, eq=False)
class PolyPoissonPoint:
    m: int
    k: int
    S: Subspace
    sharp: np.ndarray
    integrability_status: str = UNVERIFIED
    deferred: bool = field(default=False, repr=False)

    def __post_init__(self):
        if self.S.ambient_dim != self.k * self.m:
            raise DimensionError(f"S must live in R^{self.k * self.m}")
        if self.sharp.shape != (self.m, self.S.dim):
            raise DimensionError(f"sharp must have shape {(self.m, self.S.dim)}")
        if self.integrability_status not in STATUSES:
            raise ValueError(f"unknown integrability status {self.integrability_status!r}")
        if not self.deferred:
            verdict = check_axioms(self)
            if not verdict:
                raise AxiomError(verdict.detail, verdict)

    @property
    def scalar(self) -> Scalar:
        return self.S.scalar

    def apply(self, alpha) -> np.ndarray:
        """sharp(alpha) for a covector tuple alpha in S (flattened)."""
        return self.sharp @ self.S.coordinates(alpha)

    def component(self, alpha, a: int) -> np.ndarray:
        return np.asarray(alpha)[a * self.m:(a + 1) * self.m]

    def with_sharp(self, sharp: np.ndarray, deferred: bool = False) -> "PolyPoissonPoint":
        return PolyPoissonPoint(self.m, self.k, self.S, sharp, self.integrability_status, deferred)

    def same_as(self, other: "PolyPoissonPoint", sign: int = 1) -> bool:
        """Equal S (canonical basis) and sharp == sign * other.sharp."""
        return (self.m == other.m and self.k == other.k and self.S == other.S
                and arrays_equal(self.sharp, sign * other.sharp, self.scalar))


def pairing_matrix(pp: PolyPoissonPoint, basis=None) -> np.ndarray:
    """P[A, i, j] = alpha_i^A(sharp(alpha_j)) over ``basis`` (rows spanning S),
    by default the canonical basis of S."""
    m, k = pp.m, pp.k
    if basis is None:
        rows, images = pp.S.basis, pp.sharp
    else:
        rows = to_matrix(basis, pp.scalar).reshape(-1, k * m)
        images = pp.sharp @ np.array([pp.S.coordinates(v) for v in rows],
                                     dtype=pp.scalar.dtype).reshape(len(rows), -1).T
    r = len(rows)
    out = pp.scalar.zeros((k, r, r))
    for a in range(k):
        out[a] = rows[:, a * m:(a + 1) * m] @ images
    return out


def check_axioms(pp: PolyPoissonPoint) -> Verdict:
    sc = pp.scalar
    P = pairing_matrix(pp)
    k, r = pp.k, pp.S.dim

    diag_fail = None
    for a in range(k):
        for i in range(r):
            if not sc.is_zero(P[a, i, i]):
                diag_fail = {"component": a, "basis_index": i, "value": P[a, i, i]}
                break
        if diag_fail:
            break
    v_i = Verdict("i", diag_fail is None, witness=diag_fail,
                  detail="" if diag_fail is None else "alpha(sharp(alpha)) != 0")

    skew_fail = None
    for a in range(k):
        sym = P[a] + P[a].T
        for (i, j), x in np.ndenumerate(sym):
            if not sc.is_zero(x):
                skew_fail = {"component": a, "pair": [i, j], "value": x}
                break
        if skew_fail:
            break
    v_skew = Verdict("antisymmetry", skew_fail is None, witness=skew_fail,
                     detail="" if skew_fail is None else "pairing matrix is not skew")

    # alpha pairs to zero with sharp(S) iff its coordinates lie in the joint kernel of P^A.T
    if r:
        stacked = np.concatenate([P[a].T for a in range(k)], axis=0)
        ker = kernel(stacked, sc, r)
    else:
        ker = kernel(sc.zeros((0, 0)), sc, 0)
    ii_fail = None
    for c in ker.basis:
        if not is_zero_array(pp.sharp @ c, sc):
            ii_fail = {"coordinates": c, "alpha": c @ pp.S.basis, "sharp": pp.sharp @ c}
            break
    v_ii = Verdict("ii", ii_fail is None, witness=ii_fail,
                   detail="" if ii_fail is None else "alpha annihilates sharp(S) but sharp(alpha) != 0")

    parts = {"i": v_i, "antisymmetry": v_skew, "ii": v_ii}
    failed = [name for name, v in parts.items() if not v]
    return Verdict("axioms", not failed,
                   witness=None if not failed else parts[failed[0]].witness,
                   detail="all axioms hold" if not failed else f"failed: {', '.join(failed)}",
                   data=parts)


def from_polysymplectic(omega: PolyForm) -> PolyPoissonPoint:
    require_polysymplectic(omega)
    sc = omega.scalar
    fl = flat(omega)
    pivots = list(image(fl, sc).pivots)
    # flat is injective, so the canonical basis of S is (fl @ sharp).T with
    # sharp = inverse(fl[pivots]); in float mode this keeps the pairing a congruence
    sharp = inverse(fl[pivots, :], sc)
    basis = (fl @ sharp).T
    basis[:, pivots] = sc.eye(omega.m)
    S = Subspace(omega.k * omega.m, basis, sc, tuple(pivots))
    return PolyPoissonPoint(omega.m, omega.k, S, sharp, STRUCTURAL)


def characteristic_distribution(pp: PolyPoissonPoint) -> Subspace:
    return image(pp.sharp, pp.scalar) if pp.S.dim else canonicalize([], pp.scalar, pp.m)


@dataclass(frozen=True, eq=False)
class LeafForm:
    """Induced form on the characteristic space F, in F's canonical basis.

    ``preimages[:, b]`` are S-coordinates of a covector tuple mapped to the
    b-th basis vector of F.
    """

    tangent: Subspace
    form: PolyForm
    preimages: np.ndarray

    def value(self, u, v) -> np.ndarray:
        cu = self.tangent.coordinates(u)
        cv = self.tangent.coordinates(v)
        return np.array([cu @ self.form.forms[a] @ cv for a in range(self.form.k)],
                        dtype=self.form.scalar.dtype)


def leaf_form(pp: PolyPoissonPoint) -> LeafForm:
    """omega_L(sharp(alpha), sharp(beta)) = alpha(sharp(beta)) on F = sharp(S)."""
    sc = pp.scalar
    verdict = check_axioms(pp)
    if not verdict:
        raise AxiomError(verdict.detail, verdict)
    F = characteristic_distribution(pp)
    s = F.dim
    if s == 0:
        empty = np.empty((pp.k, 0, 0), dtype=sc.dtype)
        return LeafForm(F, PolyForm(empty, sc), sc.zeros((pp.S.dim, 0)))
    coords = solve(pp.sharp, F.basis.T, sc)
    alphas = coords.T @ pp.S.basis
    forms = np.empty((pp.k, s, s), dtype=sc.dtype)
    for a in range(pp.k):
        forms[a] = alphas[:, a * pp.m:(a + 1) * pp.m] @ F.basis.T
    # shifting a preimage by Ker sharp must not change any value
    ker = kernel(pp.sharp, sc, pp.S.dim)
    for z in ker.basis:
        shift = z @ pp.S.basis
        for a in range(pp.k):
            if not is_zero_array(shift[a * pp.m:(a + 1) * pp.m] @ F.basis.T, sc):
                raise AssertionError("leaf form depends on the choice of preimage")
    out = LeafForm(F, PolyForm(forms, sc), coords)
    if not is_polysymplectic(out.form):
        raise AxiomError("induced leaf form is degenerate")
    return out


def polysymplectic_orthogonal(omega: PolyForm, w: Subspace) -> Subspace:
    """W-perp = intersection over A of the preimages of W-annihilator under flat_A."""
    ann = annihilator(w)
    return intersect_all([preimage(flat_block(omega, a), ann) for a in range(omega.k)])


def dirac_type(omega: PolyForm, D: Subspace) -> PolyPoissonPoint:
    require_polysymplectic(omega)
    sc = omega.scalar
    m, k, r = omega.m, omega.k, D.dim
    if D.ambient_dim != m:
        raise DimensionError("D must be a subspace of the tangent space")
    d_perp = polysymplectic_orthogonal(omega, D)
    bad = intersect(D, d_perp)
    if bad.dim:
        raise RejectionError("D meets its polysymplectic orthogonal", witness=bad.basis[0])
    B = D.basis
    restrict = block_diag([B] * k, sc)
    fl = flat(omega)
    if r:
        on_d = restrict @ fl @ B.T
        S = preimage(restrict, image(on_d, sc))
        ys = solve(on_d, restrict @ S.basis.T, sc)
        if ys is None:
            raise AssertionError("restriction of S is not reached by D")
        sharp = B.T @ ys
    else:
        S = canonicalize(list(sc.eye(k * m)), sc, k * m)
        sharp = sc.zeros((m, S.dim))
    expected = r + (m - r) * k
    if S.dim != expected:
        raise AssertionError(f"dim S = {S.dim}, expected {expected}")
    return PolyPoissonPoint(m, k, S, sharp, STRUCTURAL)


def foliated_construction(projections: Sequence, poisson_sharps: Sequence, F: Subspace,
                          status: str = UNVERIFIED) -> PolyPoissonPoint:
    """Poly-Poisson point from fibrations onto Poisson spaces and a compatible F."""
    sc = F.scalar
    projs = [to_matrix(p, sc) for p in projections]
    lams = [to_matrix(x, sc) for x in poisson_sharps]
    k = len(projs)
    if k == 0 or len(lams) != k:
        raise DimensionError("need one Poisson tensor per projection")
    m = F.ambient_dim
    for a, (p, lam) in enumerate(zip(projs, lams)):
        if p.shape[1] != m or lam.shape != (p.shape[0], p.shape[0]):
            raise DimensionError(f"shape mismatch in factor {a}")
        if not is_zero_array(lam + lam.T, sc):
            raise DimensionError(f"Poisson tensor {a} is not skew")
    for a, (p, lam) in enumerate(zip(projs, lams)):
        pushed = apply(p, F)
        target = image(lam, sc) if lam.size else canonicalize([], sc, lam.shape[0])
        if pushed != target:
            extra = [v for v in pushed.basis if not target.contains(v)]
            missing = [v for v in target.basis if not pushed.contains(v)]
            raise RejectionError(
                f"projection {a} does not map F onto the characteristic space of factor {a}",
                witness={"factor": a, "vector": (extra or missing)[0]})
    common = intersect_all([kernel(p, sc, m) for p in projs])
    bad = intersect(common, F)
    if bad.dim:
        raise RejectionError("F meets the joint kernel of the projections", witness=bad.basis[0])

    # unknowns: F-coordinates y, then one covector per factor
    sizes = [p.shape[0] for p in projs]
    n_y = F.dim
    total = n_y + sum(sizes)
    rows = []
    offset = n_y
    for p, lam, size in zip(projs, lams, sizes):
        block = sc.zeros((size, total))
        block[:, :n_y] = p @ F.basis.T
        block[:, offset:offset + size] = -lam
        rows.append(block)
        offset += size
    sol = kernel(np.concatenate(rows, axis=0), sc, total)
    covectors, us, factor_covs = [], [], []
    for v in sol.basis:
        u = v[:n_y] @ F.basis if n_y else sc.zeros(m)
        parts, offset = [], n_y
        for p, size in zip(projs, sizes):
            parts.append(p.T @ v[offset:offset + size])
            offset += size
        covectors.append(np.concatenate(parts))
        us.append(u)
        factor_covs.append([v[n_y + sum(sizes[:a]):n_y + sum(sizes[:a + 1])] for a in range(k)])
    S = canonicalize(covectors, sc, k * m)
    sharp = map_from_pairs(S, covectors, us, m)
    pp = PolyPoissonPoint(m, k, S, sharp, status)

    leaf = leaf_form(pp)
    for i, ui in enumerate(us):
        for j, uj in enumerate(us):
            got = leaf.value(ui, uj)
            want = [factor_covs[i][a] @ lams[a] @ factor_covs[j][a] for a in range(k)]
            if not is_zero_array(got - np.array(want, dtype=sc.dtype), sc):
                raise AssertionError("leaf form disagrees with the factor Poisson tensors")
    return pp


def change_coordinates(pp: PolyPoissonPoint, J) -> PolyPoissonPoint:
    """Push (S, sharp) through the linear change of tangent coordinates x' = J x."""
    sc = pp.scalar
    J = to_matrix(J, sc)
    if J.shape != (pp.m, pp.m):
        raise DimensionError("coordinate change must be square of size m")
    cov = block_diag([inverse(J, sc).T] * pp.k, sc)
    S_new = apply(cov, pp.S)
    sources = [cov @ row for row in pp.S.basis]
    targets = [J @ pp.sharp[:, i] for i in range(pp.S.dim)]
    sharp = map_from_pairs(S_new, sources, targets, pp.m)
    return PolyPoissonPoint(pp.m, pp.k, S_new, sharp, pp.integrability_status)


def permutation_matrix(order: Sequence[int], scalar: Scalar) -> np.ndarray:
    """J with (J x)[i] = x[order[i]]."""
    n = len(order)
    J = scalar.zeros((n, n))
    for i, j in enumerate(order):
        J[i, j] = scalar.convert(1)
    return J
