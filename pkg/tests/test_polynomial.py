import numpy as np
import pytest
from hypothesis import given, strategies as st

from newton_mandelbrot.exceptions import DomainError
from newton_mandelbrot.polynomial import Polynomial

coeff = st.floats(-5, 5, allow_nan=False)


def test_rejects_zero_leading_and_constant():
    with pytest.raises(DomainError):
        Polynomial([0, 1, 2])
    with pytest.raises(DomainError):
        Polynomial([3])


def test_parse_and_str_round_trip():
    p = Polynomial.parse("1, -14, 0, 48")
    assert p.coeffs == (1.0, -14.0, 0.0, 48.0)
    assert Polynomial.parse(str(p)) == p
    q = Polynomial.parse("1,0,-1-1i")
    assert q.coeffs[-1] == -1 - 1j
    assert Polynomial.parse(str(q)) == q


def test_murase_polynomial():
    assert Polynomial.murase(3, 0.25).coeffs == (1.0, -1.0, 0.0, 0.0, 0.25)


@given(st.lists(coeff, min_size=2, max_size=7).filter(lambda c: c[0] != 0),
       st.floats(-10, 10, allow_nan=False), st.integers(0, 6))
def test_matches_numpy_oracle(cs, x, i):
    p = Polynomial(cs)
    if i > p.degree:
        return
    oracle = np.polyval(np.polyder(np.array(cs), i), x) if i else np.polyval(cs, x)
    scale = np.polyval(np.abs(np.polyder(np.array(cs), i)) if i else np.abs(cs), abs(x))
    assert abs(p.derivative(x, i) - oracle) <= 1e-12 * max(1.0, scale)


def test_complex_evaluation():
    p = Polynomial([1, 0, 1])
    assert p(1j) == 0
    assert p.derivative(1j) == 2j


def test_derivative_order_range():
    with pytest.raises(DomainError):
        Polynomial([1, 2]).derivative(0.0, 2)
