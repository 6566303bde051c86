"""Subspace calculus over float64 (tolerance-aware) or exact rationals (gmpy2 mpq).

Every subspace is stored through the reduced row-echelon form of a spanning
set, so two subspaces are equal exactly when their basis matrices are equal.
Vectors are rows; linear maps are matrices acting on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from kpoly.errors import DimensionError


@dataclass(frozen=True)
class Scalar:
    """Arithmetic mode. ``epsilon`` is the rank threshold in float mode."""

    mode: str = "float"
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("float", "exact"):
            raise ValueError(f"unknown scalar mode {self.mode!r}")
        if self.mode == "float" and not self.epsilon > 0:
            raise ValueError("epsilon must be positive in float mode")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def dtype(self):
        return object if self.exact else np.float64

    def convert(self, x):
        if self.exact:
            if isinstance(x, float):
                return mpq(Fraction(x).limit_denominator(10**12))
            if isinstance(x, str):
                return mpq(x.strip())
            return mpq(x)
        return float(x)

    def is_zero(self, x, scale: float = 1.0) -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self.epsilon * max(1.0, scale)

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(mpq(0))
            return out
        return np.zeros(shape)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.convert(1)
        return out


EXACT = Scalar("exact")
FLOAT = Scalar("float")


def to_matrix(data, scalar: Scalar, shape: tuple | None = None) -> np.ndarray:
    """Coerce nested sequences (or an array) to a 2-d array in ``scalar`` mode."""
    arr = np.asarray(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    out = np.empty(arr.shape, dtype=scalar.dtype)
    for idx, x in np.ndenumerate(arr):
        out[idx] = scalar.convert(x)
    return out


def to_vector(data, scalar: Scalar) -> np.ndarray:
    arr = np.asarray(data, dtype=object).reshape(-1)
    out = np.empty(arr.shape, dtype=scalar.dtype)
    for i, x in enumerate(arr):
        out[i] = scalar.convert(x)
    return out


def is_zero_array(a: np.ndarray, scalar: Scalar) -> bool:
    if a.size == 0:
        return True
    if scalar.exact:
        return all(x == 0 for x in a.flat)
    return bool(np.max(np.abs(a)) <= scalar.epsilon)


def arrays_equal(a: np.ndarray, b: np.ndarray, scalar: Scalar) -> bool:
    if a.shape != b.shape:
        return False
    return is_zero_array(a - b, scalar)


def rref(a: np.ndarray, scalar: Scalar, pivot_limit: int | None = None):
    """Reduced row-echelon form and pivot columns.

    Pivots are only searched among the first ``pivot_limit`` columns, which
    lets callers eliminate on an augmented matrix ``[A | B]``.
    """
    a = np.asarray(a)
    nrows, ncols = a.shape if a.ndim == 2 else (0, 0)
    limit = ncols if pivot_limit is None else pivot_limit
    if scalar.exact:
        return _rref_exact(a, nrows, ncols, limit)
    return _rref_float(a, nrows, ncols, limit, scalar.epsilon)


def _rref_exact(a, nrows, ncols, limit):
    rows = [[mpq(x) for x in a[i]] for i in range(nrows)]
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        prow = [x * inv for x in rows[r]]
        rows[r] = prow
        support = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f != 0:
                row = rows[i]
                for j in support:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    out = np.empty((nrows, ncols), dtype=object)
    for i in range(nrows):
        out[i, :] = rows[i]
    return out, pivots


def _rref_float(a, nrows, ncols, limit, eps):
    m = np.array(a, dtype=np.float64, copy=True).reshape(nrows, ncols)
    tol = eps * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        piv = r + int(np.argmax(np.abs(m[r:, c])))
        if abs(m[piv, c]) <= tol:
            m[r:, c] = 0.0
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] /= m[r, c]
        others = np.arange(nrows) != r
        m[others] -= np.outer(m[others, c], m[r])
        m[np.abs(m) <= tol] = 0.0
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, scalar: Scalar) -> int:
    return len(rref(a, scalar)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^d, held as an RREF basis (rows)."""

    ambient_dim: int
    basis: np.ndarray
    scalar: Scalar
    pivots: tuple = ()

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.dim == other.dim
                and arrays_equal(self.basis, other.basis, self.scalar))

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the canonical basis; ``v`` must lie in the span."""
        v = to_vector(v, self.scalar)
        if not self.contains(v):
            raise DimensionError("vector does not lie in the subspace")
        return v[list(self.pivots)]

    def contains(self, v) -> bool:
        v = to_vector(v, self.scalar)
        if v.shape != (self.ambient_dim,):
            raise DimensionError(f"expected a vector of length {self.ambient_dim}")
        if self.dim == 0:
            return is_zero_array(v, self.scalar)
        residual = v - v[list(self.pivots)] @ self.basis
        return is_zero_array(residual, self.scalar)

    def is_subspace_of(self, other: "Subspace") -> bool:
        _check_same_ambient(self, other)
        return all(other.contains(row) for row in self.basis)

    def vectors(self) -> list[np.ndarray]:
        return [row.copy() for row in self.basis]


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(
            f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def canonicalize(vectors: Iterable, scalar: Scalar = FLOAT,
                 ambient_dim: int | None = None) -> Subspace:
    """Span of ``vectors`` with its canonical (RREF) basis."""
    rows = [to_vector(v, scalar) for v in vectors]
    lengths = {len(r) for r in rows}
    if ambient_dim is not None:
        lengths.add(ambient_dim)
    if len(lengths) > 1:
        raise DimensionError(f"inconsistent ambient dimensions {sorted(lengths)}")
    if not lengths:
        raise DimensionError("ambient dimension of an empty span must be given")
    d = lengths.pop()
    if not rows:
        return Subspace(d, scalar.zeros((0, d)), scalar, ())
    mat = np.array(rows, dtype=scalar.dtype).reshape(len(rows), d)
    reduced, pivots = rref(mat, scalar)
    return Subspace(d, reduced[:len(pivots)].copy(), scalar, tuple(pivots))


def span(matrix_rows: np.ndarray, scalar: Scalar, ambient_dim: int) -> Subspace:
    return canonicalize(list(matrix_rows), scalar, ambient_dim)


def full_space(d: int, scalar: Scalar = FLOAT) -> Subspace:
    return Subspace(d, scalar.eye(d), scalar, tuple(range(d)))


def zero_space(d: int, scalar: Scalar = FLOAT) -> Subspace:
    return Subspace(d, scalar.zeros((0, d)), scalar, ())


def kernel(a: np.ndarray, scalar: Scalar, ncols: int | None = None) -> Subspace:
    """Null space {x : a x = 0}."""
    a = np.asarray(a)
    if ncols is None:
        ncols = a.shape[1]
    if a.size == 0:
        return full_space(ncols, scalar)
    reduced, pivots = rref(a, scalar)
    free = [c for c in range(ncols) if c not in pivots]
    vecs = []
    for f in free:
        v = scalar.zeros(ncols)
        v[f] = scalar.convert(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, f]
        vecs.append(v)
    return canonicalize(vecs, scalar, ncols)


def image(a: np.ndarray, scalar: Scalar) -> Subspace:
    """Column span of ``a``."""
    a = np.asarray(a)
    return canonicalize(list(a.T), scalar, a.shape[0])


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return canonicalize(a.vectors() + b.vectors(), a.scalar, a.ambient_dim)


def annihilator(w: Subspace) -> Subspace:
    """Covectors vanishing on ``w`` under the standard pairing."""
    if w.dim == 0:
        return full_space(w.ambient_dim, w.scalar)
    return kernel(w.basis, w.scalar, w.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    ann = annihilator(a).vectors() + annihilator(b).vectors()
    if not ann:
        return full_space(a.ambient_dim, a.scalar)
    return kernel(np.array(ann, dtype=a.scalar.dtype), a.scalar, a.ambient_dim)


def intersect_all(spaces: Sequence[Subspace]) -> Subspace:
    out = spaces[0]
    for s in spaces[1:]:
        out = intersect(out, s)
    return out


def preimage(lin: np.ndarray, t: Subspace) -> Subspace:
    """{v : lin v in t} for a matrix ``lin`` from R^n to the ambient of ``t``."""
    lin = np.asarray(lin)
    if lin.shape[0] != t.ambient_dim:
        raise DimensionError(
            f"map codomain {lin.shape[0]} does not match subspace ambient {t.ambient_dim}")
    ann = annihilator(t)
    if ann.dim == 0:
        return full_space(lin.shape[1], t.scalar)
    return kernel(ann.basis @ lin, t.scalar, lin.shape[1])


def apply(lin: np.ndarray, w: Subspace) -> Subspace:
    """Image of the subspace ``w`` under ``lin``."""
    lin = np.asarray(lin)
    if lin.shape[1] != w.ambient_dim:
        raise DimensionError("map domain does not match subspace ambient")
    return canonicalize([lin @ v for v in w.basis], w.scalar, lin.shape[0])


@dataclass(frozen=True, eq=False)
class Quotient:
    """V/W realised on the coordinates not used as pivots by W.

    ``projection`` (q x d) kills exactly W; ``lift`` (d x q) embeds the
    complement, and ``projection @ lift`` is the identity.
    """

    complement: Subspace
    projection: np.ndarray
    lift: np.ndarray
    kept: tuple

    @property
    def dim(self) -> int:
        return len(self.kept)


def quotient(v_dim: int, w: Subspace) -> Quotient:
    if w.ambient_dim != v_dim:
        raise DimensionError("W must live in the ambient space")
    sc = w.scalar
    kept = tuple(c for c in range(v_dim) if c not in w.pivots)
    proj = sc.zeros((len(kept), v_dim))
    lift = sc.zeros((v_dim, len(kept)))
    one = sc.convert(1)
    for r, c in enumerate(kept):
        proj[r, c] = one
        lift[c, r] = one
        # v = sum_i v[p_i] w_i + sum_c coef_c e_c
        for i, p in enumerate(w.pivots):
            proj[r, p] -= w.basis[i, c]
    comp = canonicalize(list(lift.T), sc, v_dim)
    return Quotient(comp, proj, lift, kept)


def block_diag(blocks: Sequence[np.ndarray], scalar: Scalar) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = scalar.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def power(w: Subspace, k: int) -> Subspace:
    """W x ... x W (k copies) inside (R^d)^k."""
    d = w.ambient_dim
    vecs = []
    for a in range(k):
        for row in w.basis:
            v = w.scalar.zeros(k * d)
            v[a * d:(a + 1) * d] = row
            vecs.append(v)
    return canonicalize(vecs, w.scalar, k * d)


def solve(a: np.ndarray, b: np.ndarray, scalar: Scalar) -> np.ndarray | None:
    """One solution X of a X = b (columns of b), free variables set to zero.

    Returns None when the system is inconsistent.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if b.ndim == 1:
        sol = solve(a, b.reshape(-1, 1), scalar)
        return None if sol is None else sol[:, 0]
    n = a.shape[1]
    aug = np.concatenate([a.reshape(a.shape[0], n), b], axis=1)
    reduced, pivots = rref(aug, scalar, pivot_limit=n)
    r = len(pivots)
    if not is_zero_array(reduced[r:, n:], scalar):
        return None
    out = scalar.zeros((n, b.shape[1]))
    if not scalar.exact and r:
        # same solution via least squares on the pivot columns, refined with
        # residuals accumulated in extended precision
        sub = a[:, pivots].astype(float)
        x = np.linalg.lstsq(sub, b.astype(float), rcond=None)[0]
        wide = np.longdouble
        for _ in range(2):
            resid = b.astype(wide) - sub.astype(wide) @ x.astype(wide)
            x = x + np.linalg.lstsq(sub, resid.astype(float), rcond=None)[0]
        out[pivots, :] = x
        return out
    for i, p in enumerate(pivots):
        out[p, :] = reduced[i, n:]
    return out


def inverse(a: np.ndarray, scalar: Scalar) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n) or rank(a, scalar) != n:
        raise DimensionError("matrix is not invertible")
    return solve(a, scalar.eye(n), scalar)


def map_from_pairs(domain: Subspace, sources: Sequence, targets: Sequence,
                   target_dim: int) -> np.ndarray:
    """Matrix (target_dim x dim domain) of the linear map sending each source to
    its target, in the canonical coordinates of ``domain``.

    The sources must span ``domain``; conflicting assignments raise
    DimensionError (the map would not be well defined).
    """
    sc = domain.scalar
    r = domain.dim
    if r == 0:
        if any(not is_zero_array(to_vector(t, sc), sc) for t in targets):
            raise DimensionError("nonzero image assigned on the zero subspace")
        return sc.zeros((target_dim, 0))
    rows = []
    for s, t in zip(sources, targets):
        rows.append(np.concatenate([domain.coordinates(s), to_vector(t, sc)]))
    aug = np.array(rows, dtype=sc.dtype).reshape(len(rows), r + target_dim)
    reduced, pivots = rref(aug, sc, pivot_limit=r)
    if len(pivots) != r:
        raise DimensionError("sources do not span the domain")
    if not is_zero_array(reduced[r:, r:], sc):
        raise DimensionError("linear map is not well defined on the given pairs")
    return reduced[:r, r:].T.copy()
