import cmath
import math

import numpy as np
import pytest


def bisect(f, a, b, iters=200):
    """Plain bisection; independent of every solver in the package."""
    fa = f(a)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def rel_err(a, b):
    return abs(a - b) / max(1.0, abs(b))


def random_disk(rng, n, radius=2.0):
    r = radius * np.sqrt(rng.uniform(size=n))
    t = rng.uniform(0, 2 * math.pi, size=n)
    return [complex(x) for x in r * np.exp(1j * t)]


def mandelbrot_oracle(c, radius, max_iter):
    """Scalar z^2 + c loop with cmath; returns (escaped, k)."""
    z = 0j
    for k in range(1, max_iter):
        z = z * z + c
        if abs(z) > radius:
            return True, k
    return False, max_iter


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
