from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakind.intlinalg import Echelon, integer_kernel, log_vector, matvec_t, rank, solve_integer
from weakind.table_model import OutOfBounds, Shape


def rank_oracle(columns):
    """Plain Gaussian elimination over the rationals."""
    rows = [[Fraction(x) for x in c] for c in columns]
    r = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col] / rows[r][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        r += 1
    return r


matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=6)
)


def test_log_vector():
    v = log_vector((1, 2), Shape(2, 3))
    assert v == (0, 1, -1, 0, -1, 1)
    with pytest.raises(OutOfBounds):
        log_vector((2, 2), Shape(2, 3))


@given(matrices)
def test_rank_matches_rational_elimination(cols):
    assert rank(cols) == rank_oracle(cols)


def test_echelon_incremental():
    e = Echelon()
    assert e.add([1, 1, 0])
    assert e.add([0, 1, 1])
    assert not e.add([2, 3, 1])
    assert not e.add([0, 0, 0])
    assert e.rank == 2


@given(matrices)
def test_kernel_basis(cols):
    n = len(cols[0])
    ker = integer_kernel(cols, n)
    assert len(ker) == n - rank_oracle(cols)
    for v in ker:
        assert not any(matvec_t(cols, v))
    if ker:
        assert rank_oracle(ker) == len(ker)


@given(matrices, st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_kernel_is_saturated(cols, coeffs):
    # any integer kernel vector, even one built with rational coefficients and
    # then cleared of denominators and content, is an integer combination
    n = len(cols[0])
    ker = integer_kernel(cols, n)
    if not ker:
        return
    v = [sum(c * k[i] for c, k in zip(coeffs, ker)) for i in range(n)]
    from math import gcd
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return
    v = [x // g for x in v]
    assert solve_integer([list(k) for k in ker], v) is not None


def test_kernel_needs_unimodular_steps():
    # kernel of (2, 3) is spanned by (3, -2); a rational basis scaled naively may miss it
    ker = integer_kernel([[2, 3]], 2)
    assert len(ker) == 1 and set(map(abs, ker[0])) == {2, 3}


def test_solve_integer():
    cols = [[2, 0], [0, 3]]
    assert solve_integer(cols, [4, 9]) == [2, 3]
    assert solve_integer(cols, [1, 0]) is None
    assert solve_integer([[1, 1]], [2, 3]) is None
