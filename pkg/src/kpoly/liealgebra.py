"""Finite-dimensional Lie algebras given by structure constants.

``C[a, b, c]`` is the coefficient of e_c in [e_a, e_b].  The coadjoint
convention used throughout the package is

    (ad*_xi nu)(eta) = nu([xi, eta]),

and ``ad_sign=-1`` selects the opposite convention where a caller asks for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from kpoly.errors import DimensionError, Verdict
from kpoly.subspaces import EXACT, Scalar, to_vector

AD_STAR_CONVENTION = "(ad*_xi nu)(eta) = nu([xi, eta])"


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    n: int
    C: np.ndarray
    scalar: Scalar = EXACT
    name: str = ""

    def __post_init__(self):
        if self.C.shape != (self.n, self.n, self.n):
            raise DimensionError(f"structure constants must have shape {(self.n,) * 3}")
        sym = self.C + self.C.transpose(1, 0, 2)
        if any(not self.scalar.is_zero(x) for x in sym.flat):
            raise DimensionError("structure constants are not antisymmetric in the lower indices")

    @classmethod
    def from_brackets(cls, n: int, brackets, scalar: Scalar = EXACT, name: str = ""):
        """Build from sparse triples (a, b, c, value) meaning [e_a, e_b] has
        e_c-coefficient ``value``; the (b, a) entry is completed by antisymmetry."""
        C = scalar.zeros((n, n, n))
        seen: dict = {}
        for a, b, c, value in brackets:
            if not all(0 <= i < n for i in (a, b, c)):
                raise DimensionError(f"bracket index out of range in {(a, b, c)}")
            value = scalar.convert(value)
            if a == b and value != 0:
                raise DimensionError(f"[e_{a}, e_{a}] must vanish")
            for key, v in (((a, b, c), value), ((b, a, c), -value)):
                if key in seen and seen[key] != v:
                    raise DimensionError(f"conflicting entries for bracket {key}")
                seen[key] = v
                C[key] = v
        return cls(n, C, scalar, name)

    def brackets(self) -> list:
        """Sparse triples with a < b, the inverse of ``from_brackets``."""
        out = []
        for a, b, c in itertools.product(range(self.n), repeat=3):
            if a < b and self.C[a, b, c] != 0:
                out.append((a, b, c, self.C[a, b, c]))
        return out

    def basis(self, i: int) -> np.ndarray:
        e = self.scalar.zeros(self.n)
        e[i] = self.scalar.convert(1)
        return e

    def bracket(self, x, y) -> np.ndarray:
        x = to_vector(x, self.scalar)
        y = to_vector(y, self.scalar)
        return np.einsum("a,b,abc->c", x, y, self.C)

    def coad(self, xi, nu, ad_sign: int = 1) -> np.ndarray:
        """ad*_xi nu as a vector of g*."""
        return self.coad_matrix(nu, ad_sign) @ to_vector(xi, self.scalar)

    def coad_matrix(self, nu, ad_sign: int = 1) -> np.ndarray:
        """Matrix of xi -> ad*_xi nu; entry [b, a] = nu([e_a, e_b])."""
        nu = to_vector(nu, self.scalar)
        m = np.einsum("abc,c->ba", self.C, nu)
        return m if ad_sign == 1 else -m

    def coad_action(self, xi, ad_sign: int = 1) -> np.ndarray:
        """Matrix of nu -> ad*_xi nu for fixed xi."""
        xi = to_vector(xi, self.scalar)
        m = np.einsum("a,abc->bc", xi, self.C)
        return m if ad_sign == 1 else -m

    def isotropy(self, nus, ad_sign: int = 1):
        """Joint kernel of xi -> ad*_xi nu over all given nu."""
        from kpoly.subspaces import kernel

        mats = [self.coad_matrix(nu, ad_sign) for nu in nus]
        return kernel(np.concatenate(mats, axis=0), self.scalar, self.n)


def jacobi_check(g: LieAlgebra) -> Verdict:
    """Cyclic sum of C^nu_{a mu} C^mu_{b c} over (a, b, c) must vanish."""
    C = g.C
    # J[a, b, c, nu] = sum_mu C[a, mu, nu] C[b, c, mu]
    J = np.einsum("amn,bcm->abcn", C, C)
    cyc = J + J.transpose(1, 2, 0, 3) + J.transpose(2, 0, 1, 3)
    for idx in itertools.product(range(g.n), repeat=4):
        if not g.scalar.is_zero(cyc[idx]):
            a, b, c, nu = idx
            return Verdict("jacobi", False, witness={"triple": [a, b, c], "component": nu,
                                                     "value": cyc[idx]},
                           detail=f"cyclic sum for (e{a}, e{b}, e{c}) has e{nu}-component {cyc[idx]}")
    return Verdict("jacobi", True)


def so3(scalar: Scalar = EXACT) -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)], scalar, "so3")


def heisenberg3(scalar: Scalar = EXACT) -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1)], scalar, "heisenberg3")


def abelian(n: int = 3, scalar: Scalar = EXACT) -> LieAlgebra:
    return LieAlgebra.from_brackets(n, [], scalar, f"abelian{n}")


def sl2(scalar: Scalar = EXACT) -> LieAlgebra:
    # basis (h, e, f): [h, e] = 2e, [h, f] = -2f, [e, f] = h
    return LieAlgebra.from_brackets(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)], scalar, "sl2")


def nonjacobi3(scalar: Scalar = EXACT) -> LieAlgebra:
    # [e0, e1] = e0, [e0, e2] = e1, [e1, e2] = 0 violates Jacobi
    return LieAlgebra.from_brackets(3, [(0, 1, 0, 1), (0, 2, 1, 1)], scalar, "nonjacobi3")


FIXTURES = {
    "so3": so3,
    "heisenberg3": heisenberg3,
    "abelian3": lambda scalar=EXACT: abelian(3, scalar),
    "sl2": sl2,
}
