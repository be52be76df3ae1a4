import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from newton_mandelbrot.complex_power import (
    OVERFLOW_LIMIT, BranchSpec, branch_pow, int_pow, is_nonfinite, polar_pow, principal_arg,
)
from newton_mandelbrot.exceptions import DomainError

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
nonzero = st.complex_numbers(min_magnitude=1e-3, max_magnitude=10, allow_nan=False,
                             allow_infinity=False)


@pytest.mark.parametrize("z, expected", [(1, 0.0), (-1, math.pi), (1j, math.pi / 2),
                                         (complex(-1, -0.0), math.pi), (-1j, -math.pi / 2)])
def test_principal_arg_values(z, expected):
    assert principal_arg(z) == pytest.approx(expected, abs=1e-15)


def test_principal_arg_zero():
    with pytest.raises(DomainError):
        principal_arg(0)


def test_principal_arg_ring():
    theta = np.linspace(-4 * math.pi, 4 * math.pi, 10_000)
    for t in theta:
        a = principal_arg(cmath.exp(1j * t))
        assert -math.pi < a <= math.pi


def test_branch_spec_normalizes_integer_exponent():
    assert BranchSpec(2.0, 5).branch_index == 0
    assert BranchSpec(0.5, 3).branch_index == 3
    with pytest.raises(DomainError):
        BranchSpec(0.0)
    with pytest.raises(DomainError):
        BranchSpec(-1.5)


@pytest.mark.parametrize("z, s, n, expected", [
    (8, 1 / 3, 0, 2),
    (-1, 0.5, 0, 1j),
    (1, 0.5, 1, -1),
    (3 + 4j, 2, 0, -7 + 24j),
])
def test_branch_pow_examples(z, s, n, expected):
    assert abs(branch_pow(z, BranchSpec(s, n)) - expected) < 1e-12


def test_branch_pow_integer_is_exact_product():
    z = 0.3 - 1.7j
    assert branch_pow(z, BranchSpec(3)) == z * z * z


def test_zero_to_fractional_power():
    assert branch_pow(0, BranchSpec(0.5, 1)) == 0
    assert branch_pow(0, BranchSpec(math.sqrt(2))) == 0


def test_branch_pow_negative_real_uses_plus_pi():
    # Arg(-4) = +pi, so the principal square root is +2i
    assert abs(branch_pow(complex(-4, -0.0), BranchSpec(0.5)) - 2j) < 1e-15


def test_branch_pow_array_matches_scalar(rng):
    z = rng.normal(size=50) + 1j * rng.normal(size=50)
    arr = branch_pow(z, BranchSpec(0.7, 2))
    assert all(arr[k] == branch_pow(complex(z[k]), BranchSpec(0.7, 2)) for k in range(50))


def test_nonfinite_propagates():
    assert is_nonfinite(branch_pow(complex("nan"), BranchSpec(0.5)))
    assert is_nonfinite(complex(2 * OVERFLOW_LIMIT, 0))
    assert not is_nonfinite(1 + 1j)


@pytest.mark.parametrize("z, d, expected", [(1j, 4, 1), (1 + 1j, 2, 2j), (2, 6, 64)])
def test_int_pow_examples(z, d, expected):
    assert int_pow(complex(z), d) == expected


def test_int_pow_rejects_bad_degree():
    with pytest.raises(DomainError):
        int_pow(1j, 0)
    with pytest.raises(DomainError):
        int_pow(1j, 1.5)


@given(nonzero, st.integers(1, 12))
def test_int_pow_matches_polar(z, d):
    assert abs(int_pow(z, d) - polar_pow(z, d)) <= 1e-9 * abs(z) ** d


@given(nonzero, st.integers(1, 6))
def test_roots_are_roots(z, d):
    for k in range(d):
        w = branch_pow(z, BranchSpec(1 / d, k))
        assert abs(int_pow(w, d) - z) <= 1e-9 * abs(z)


@given(nonzero, st.floats(0.05, 5, allow_nan=False), st.integers(-5, 5))
def test_sheet_relation(z, s, n):
    lhs = branch_pow(z, BranchSpec(s, n))
    rhs = branch_pow(z, BranchSpec(s, 0)) * cmath.exp(2j * math.pi * n * s)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
       st.integers(1, 12), st.integers(1, 12))
def test_int_pow_composes(z, m, n):
    if m * n > 12:
        return
    a = int_pow(int_pow(z, m), n)
    b = int_pow(z, m * n)
    assert abs(a - b) <= 1e-9 * max(abs(b), 1e-300) + 1e-300
