"""Sign conventions and the recorded relative signs between constructions.

Each entry of ``SIGMA`` is the s in {+1, -1} with
``left.sharp == s * right.sharp`` (equal S) for the named comparison.  The
values are fixed by the oracle tests; reports print them so results can be
read without re-deriving the signs.
"""

from kpoly.liealgebra import AD_STAR_CONVENTION
from kpoly.polysymplectic import FLAT_CONVENTION

SIGMA = {
    # reduced group structure vs diagonal g*_k structure
    "cotangent_group_vs_gstar": 1,
    # Whitney sum over tangent data vs inverse of the canonical flat map
    "whitney_tangent_vs_flat_inverse": -1,
    # Whitney sum over an algebra (base point) vs g*_k
    "whitney_algebra_vs_gstar": -1,
    # reduced principal-bundle model vs Whitney sum over the Atiyah data
    "principal_local_vs_whitney": -1,
}


def ledger() -> dict:
    return {
        "flat": FLAT_CONVENTION,
        "ad_star": AD_STAR_CONVENTION,
        "sigma": dict(SIGMA),
    }
