"""R^k-valued 2-forms at a point and their flat maps.

A form is stored as k matrices with ``forms[A][i, j] = omega^A(e_i, e_j)``.
The flat map is the interior product ``flat(X)^A = omega^A(X, .)``, so its
A-th block is ``forms[A].T``.  A covector tuple on R^m is flattened to a
vector of R^{k m} whose A-th block of m entries is the A-th covector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from kpoly.errors import DegenerateError, DimensionError, NotSkewError, RejectionError, Verdict
from kpoly.liealgebra import LieAlgebra
from kpoly.subspaces import (
    FLOAT,
    Scalar,
    Subspace,
    block_diag,
    image,
    intersect_all,
    is_zero_array,
    kernel,
    rank,
    solve,
    to_matrix,
)

CONSTANT_AUTO = "constant-auto"
DEFERRED = "deferred"
FLAT_CONVENTION = "flat(X)^A = omega^A(X, .)"


@dataclass(frozen=True, eq=False)
class PolyForm:
    forms: np.ndarray
    scalar: Scalar = FLOAT
    closedness: str = CONSTANT_AUTO

    def __post_init__(self):
        if self.forms.ndim != 3 or self.forms.shape[1] != self.forms.shape[2]:
            raise DimensionError("forms must have shape (k, m, m)")
        if self.k < 1:
            raise DimensionError("a polyform needs at least one component")
        for a in range(self.k):
            if not is_zero_array(self.forms[a] + self.forms[a].T, self.scalar):
                raise NotSkewError(f"component {a} is not skew-symmetric")

    @classmethod
    def from_matrices(cls, matrices: Sequence, scalar: Scalar = FLOAT,
                      closedness: str = CONSTANT_AUTO) -> "PolyForm":
        mats = [to_matrix(m, scalar) for m in matrices]
        if not mats:
            raise DimensionError("a polyform needs at least one component")
        m = mats[0].shape[0]
        if any(x.shape != (m, m) for x in mats):
            raise DimensionError("all components must be square of the same size")
        arr = np.empty((len(mats), m, m), dtype=scalar.dtype)
        for a, x in enumerate(mats):
            arr[a] = x
        return cls(arr, scalar, closedness)

    @property
    def k(self) -> int:
        return self.forms.shape[0]

    @property
    def m(self) -> int:
        return self.forms.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.forms.shape == other.forms.shape
                and is_zero_array(self.forms - other.forms, self.scalar))

    def evaluate(self, x, y) -> np.ndarray:
        """(omega^1(x, y), ..., omega^k(x, y))."""
        return np.array([x @ self.forms[a] @ y for a in range(self.k)], dtype=self.scalar.dtype)


def flat(omega: PolyForm) -> np.ndarray:
    """Stacked flat map, a (k m) x m matrix."""
    return np.concatenate([omega.forms[a].T for a in range(omega.k)], axis=0)


def flat_block(omega: PolyForm, a: int) -> np.ndarray:
    return omega.forms[a].T


def is_polysymplectic(omega: PolyForm) -> Verdict:
    """Joint nondegeneracy: the flat map must be injective."""
    ker = kernel(flat(omega), omega.scalar, omega.m)
    if ker.dim == 0:
        return Verdict("polysymplectic", True, detail="common kernel is trivial")
    return Verdict("polysymplectic", False, witness=ker.basis[0],
                   detail=f"common kernel has dimension {ker.dim}")


def require_polysymplectic(omega: PolyForm):
    v = is_polysymplectic(omega)
    if not v:
        raise DegenerateError("form is degenerate", witness=v.witness)


def canonical_covelocity(m: int, k: int, scalar: Scalar = FLOAT) -> PolyForm:
    """omega^A = dq^i ^ dp^A_i on coordinates (q^1..q^m, p^1_1..p^1_m, ..., p^k_m)."""
    if m < 1 or k < 1:
        raise DimensionError("m and k must be positive")
    dim = m + k * m
    forms = np.empty((k, dim, dim), dtype=scalar.dtype)
    one = scalar.convert(1)
    for a in range(k):
        w = scalar.zeros((dim, dim))
        for i in range(m):
            p = m + a * m + i
            w[i, p] = one
            w[p, i] = -one
        forms[a] = w
    return PolyForm(forms, scalar)


def standard_symplectic(n: int, scalar: Scalar = FLOAT) -> np.ndarray:
    """dq^i ^ dp_i on coordinates (q^1..q^n, p_1..p_n)."""
    w = scalar.zeros((2 * n, 2 * n))
    for i in range(n):
        w[i, n + i] = scalar.convert(1)
        w[n + i, i] = scalar.convert(-1)
    return w


def _check_symplectic(mat: np.ndarray, scalar: Scalar, label: str):
    if not is_zero_array(mat + mat.T, scalar):
        raise NotSkewError(f"{label} is not skew-symmetric")
    if rank(mat, scalar) != mat.shape[0]:
        ker = kernel(mat, scalar, mat.shape[0])
        raise DegenerateError(f"{label} is degenerate", witness=ker.basis[0])


def product_of_symplectic(factors: Sequence, scalar: Scalar = FLOAT) -> PolyForm:
    """omega^A = pr_A^* Omega^A on the product of the factors."""
    mats = [to_matrix(f, scalar) for f in factors]
    for a, mat in enumerate(mats):
        _check_symplectic(mat, scalar, f"factor {a}")
    sizes = [mat.shape[0] for mat in mats]
    total = sum(sizes)
    projections = []
    offset = 0
    for size in sizes:
        p = scalar.zeros((size, total))
        for i in range(size):
            p[i, offset + i] = scalar.convert(1)
        projections.append(p)
        offset += size
    return pullback_family(projections, mats, scalar)


def pullback_family(projections: Sequence, forms: Sequence, scalar: Scalar = FLOAT) -> PolyForm:
    """omega^A = (T pi_A)^T Omega^A (T pi_A); rejected unless the kernels of the
    projections meet only in zero."""
    if len(projections) != len(forms) or not projections:
        raise DimensionError("need one symplectic form per projection")
    projs = [to_matrix(p, scalar) for p in projections]
    mats = [to_matrix(f, scalar) for f in forms]
    m = projs[0].shape[1]
    for a, (p, w) in enumerate(zip(projs, mats)):
        if p.shape[1] != m:
            raise DimensionError("projections must share their domain")
        if w.shape != (p.shape[0], p.shape[0]):
            raise DimensionError(f"form {a} does not match the codomain of projection {a}")
        if rank(p, scalar) != p.shape[0]:
            raise DimensionError(f"projection {a} is not surjective")
        _check_symplectic(w, scalar, f"form {a}")
    common = intersect_all([kernel(p, scalar, m) for p in projs])
    if common.dim:
        raise RejectionError("projection kernels intersect nontrivially",
                             witness=common.basis[0])
    out = np.empty((len(projs), m, m), dtype=scalar.dtype)
    for a, (p, w) in enumerate(zip(projs, mats)):
        out[a] = p.T @ w @ p
    return PolyForm(out, scalar)


@dataclass(frozen=True, eq=False)
class OrbitForm:
    """Tangent space of a (k-)coadjoint orbit with its form on the tangent basis.

    ``generator`` is the matrix of xi -> (ad*_xi mu_1, ..., ad*_xi mu_k);
    ``form.forms[A][a, b]`` is omega^A(t_a, t_b) for the canonical tangent basis t.
    """

    tangent: Subspace
    form: PolyForm
    generator: np.ndarray

    def on_generators(self, xi, eta) -> np.ndarray:
        """The R^k value omega(xi_mu, eta_mu) on the infinitesimal generators."""
        sc = self.form.scalar
        x = self.tangent.coordinates(self.generator @ to_matrix([xi], sc)[0])
        y = self.tangent.coordinates(self.generator @ to_matrix([eta], sc)[0])
        return self.form.evaluate(x, y)


def _orbit_form(g: LieAlgebra, mus: Sequence, ad_sign: int) -> OrbitForm:
    sc = g.scalar
    gen = np.concatenate([g.coad_matrix(mu, ad_sign) for mu in mus], axis=0)
    tangent = image(gen, sc)
    s = tangent.dim
    pre = solve(gen, tangent.basis.T, sc) if s else sc.zeros((g.n, 0))
    if pre is None:
        raise AssertionError("tangent basis is not in the generator image")
    forms = np.empty((len(mus), s, s), dtype=sc.dtype)
    for A, mu in enumerate(mus):
        mu = np.asarray(mu)
        for a in range(s):
            for b in range(s):
                forms[A, a, b] = -(mu @ g.bracket(pre[:, a], pre[:, b]))
        # well defined modulo isotropy: nu([zeta, eta]) = 0 for zeta in the isotropy
        iso = kernel(g.coad_matrix(mu, ad_sign), sc, g.n)
        for z in iso.basis:
            for j in range(g.n):
                if not sc.is_zero(mu @ g.bracket(z, g.basis(j))):
                    raise AssertionError("orbit form is not well defined on the isotropy")
    return OrbitForm(tangent, PolyForm(forms, sc), gen)


def coadjoint_orbit_form(g: LieAlgebra, nu, ad_sign: int = 1) -> OrbitForm:
    """Kirillov-Kostant-Souriau form: omega(xi_nu, eta_nu) = -nu([xi, eta])."""
    from kpoly.liealgebra import jacobi_check

    if not jacobi_check(g):
        raise RejectionError("structure constants fail the Jacobi identity")
    out = _orbit_form(g, [nu], ad_sign)
    if out.tangent.dim and not is_polysymplectic(out.form):
        raise AssertionError("orbit form is degenerate on the orbit tangent space")
    return out


def k_coadjoint_polyform(g: LieAlgebra, mus: Sequence, ad_sign: int = 1) -> OrbitForm:
    """omega^A pulled back from the orbit form at mu_A along the A-th projection."""
    from kpoly.liealgebra import jacobi_check

    if not jacobi_check(g):
        raise RejectionError("structure constants fail the Jacobi identity")
    out = _orbit_form(g, list(mus), ad_sign)
    if out.tangent.dim and not is_polysymplectic(out.form):
        raise AssertionError("k-coadjoint form is jointly degenerate")
    return out


def direct_sum(forms: Sequence[PolyForm]) -> PolyForm:
    """Product form omega_1 x omega_2 x ... (same k) on the direct sum."""
    k = forms[0].k
    sc = forms[0].scalar
    if any(f.k != k for f in forms):
        raise DimensionError("all factors must have the same k")
    total = sum(f.m for f in forms)
    out = np.empty((k, total, total), dtype=sc.dtype)
    for a in range(k):
        out[a] = block_diag([f.forms[a] for f in forms], sc)
    return PolyForm(out, sc)
