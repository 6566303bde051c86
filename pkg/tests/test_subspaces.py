from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpoly import EXACT, FLOAT, DimensionError
from kpoly.subspaces import (
    Scalar,
    annihilator,
    canonicalize,
    image,
    intersect,
    kernel,
    preimage,
    quotient,
    rank,
    rref,
    solve,
    span_sum,
    to_matrix,
)


def test_exact_conversion_of_rational_strings():
    row = to_matrix([["3/4", 2, "-1/3"]], EXACT)[0]
    assert list(row) == [Fraction(3, 4), 2, Fraction(-1, 3)]


def test_rref_oracle():
    r, pivots = rref(to_matrix([[2, 4, 6], [1, 3, 5]], EXACT), EXACT)
    assert list(pivots) == [0, 1]
    assert r.tolist() == [[1, 0, -1], [0, 1, 2]]


def test_canonical_basis_is_independent_of_spanning_set():
    a = canonicalize(to_matrix([[1, 1, 0], [0, 1, 1]], EXACT), EXACT, 3)
    b = canonicalize(to_matrix([[1, 2, 1], [1, 0, -1], [2, 2, 0]], EXACT), EXACT, 3)
    assert a == b
    assert a.basis.tolist() == [[1, 0, -1], [0, 1, 1]]


def test_kernel_and_image_oracle():
    a = to_matrix([[1, 2, 3], [2, 4, 6]], EXACT)
    # span of (-2, 1, 0) and (-3, 0, 1) in reduced echelon form
    expected = [[1, 0, Fraction(-1, 3)], [0, 1, Fraction(-2, 3)]]
    assert kernel(a, EXACT).basis.tolist() == expected
    assert image(a, EXACT).basis.tolist() == [[1, 2]]


def test_annihilator_and_intersection_oracle():
    w = canonicalize(to_matrix([[1, 0, 0, 0], [0, 1, 0, 0]], EXACT), EXACT, 4)
    u = canonicalize(to_matrix([[0, 1, 0, 0], [0, 0, 1, 0]], EXACT), EXACT, 4)
    assert annihilator(w).basis.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1]]
    assert intersect(w, u).basis.tolist() == [[0, 1, 0, 0]]
    assert span_sum(w, u).dim == 3


def test_preimage_and_quotient():
    lin = to_matrix([[1, 1, 0], [0, 0, 1]], EXACT)
    t = canonicalize(to_matrix([[1, 0]], EXACT), EXACT, 2)
    assert preimage(lin, t).basis.tolist() == [[1, 0, 0], [0, 1, 0]]
    w = canonicalize(to_matrix([[1, 0, 0]], EXACT), EXACT, 3)
    q = quotient(3, w)
    assert q.dim == 2
    assert q.kept == (1, 2)


def test_solve_inconsistent_returns_none():
    a = to_matrix([[1, 0], [0, 0]], EXACT)
    assert solve(a, to_matrix([[0], [1]], EXACT), EXACT) is None
    assert solve(a, to_matrix([[3], [0]], EXACT), EXACT).tolist() == [[3], [0]]


def test_float_rank_uses_epsilon():
    a = np.array([[1.0, 0.0], [0.0, 1e-11]])
    assert rank(a, FLOAT) == 1
    assert rank(a, Scalar("float", 1e-13)) == 2


def test_wrong_length_vector_raises():
    w = canonicalize(to_matrix([[1, 0]], EXACT), EXACT, 2)
    with pytest.raises(DimensionError):
        w.contains([1, 0, 0])


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        Scalar("symbolic")


int_rows = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=0, max_size=6)
    .map(lambda rows: (n, rows)))


@settings(max_examples=80, deadline=None)
@given(int_rows, int_rows)
def test_dimension_formula(first, second):
    n = first[0]
    rows_b = [r[:n] + [0] * (n - len(r)) for r in second[1]]
    a = canonicalize(to_matrix(first[1], EXACT).reshape(-1, n), EXACT, n)
    b = canonicalize(to_matrix(rows_b, EXACT).reshape(-1, n), EXACT, n)
    assert span_sum(a, b).dim + intersect(a, b).dim == a.dim + b.dim
    assert annihilator(annihilator(a)) == a
