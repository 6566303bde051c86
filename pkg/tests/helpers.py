import random

import numpy as np

from kpoly import FLOAT
from kpoly.polysymplectic import PolyForm, is_polysymplectic
from kpoly.subspaces import Scalar


def random_skew(rng: random.Random, m: int, scalar: Scalar, bound: int = 3) -> np.ndarray:
    mat = scalar.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            v = scalar.convert(rng.randint(-bound, bound))
            mat[i, j], mat[j, i] = v, -v
    return mat


def random_polyform(rng: random.Random, m: int, k: int, scalar: Scalar = FLOAT,
                    bound: int = 3) -> PolyForm:
    """Integer-entry skew forms, resampled until jointly nondegenerate.

    Needs m >= 2, and k >= 2 when m is odd.
    """
    while True:
        omega = PolyForm(np.array([random_skew(rng, m, scalar, bound) for _ in range(k)],
                                  dtype=scalar.dtype), scalar)
        if is_polysymplectic(omega):
            return omega


def random_shape(rng: random.Random, max_m: int = 8, max_k: int = 3) -> tuple[int, int]:
    m = rng.randint(2, max_m)
    k = rng.randint(1 if m % 2 == 0 else 2, max_k)
    return m, k


def random_rows(rng: random.Random, rows: int, cols: int, scalar: Scalar, bound: int = 3):
    return np.array([[scalar.convert(rng.randint(-bound, bound)) for _ in range(cols)]
                     for _ in range(rows)], dtype=scalar.dtype).reshape(rows, cols)
