"""scikit-learn compatible wrappers.

``MembershipEstimator`` classifies parameter values ``c`` (rows of
``[re, im]`` or a 1-D complex array) as inside/outside a Newton-Mandelbrot
or Murase-Mandelbrot set.  ``ExtendedNewtonSolver`` is fitted on a
coefficient vector and maps starting points to roots.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .escape import BOUNDED, DEFAULT_RENDER_ITERS, MembershipMap, _check_run, _iterate, scan_grid
from .newton import MAX_ITER, RESIDUAL_TOL, STEP_TOL, MethodParams, solve
from .polynomial import Polynomial
from .recurrences import FAMILIES, GeneralP, MMFormula1, MMFormula2, MMFormula3, PlainPower


def check_points(X) -> np.ndarray:
    """Validate parameter values; returns a flat complex array.

    Accepts a 1-D complex array or a real array of shape ``(n_samples, 2)``.
    """
    arr = np.asarray(X)
    if np.iscomplexobj(arr):
        # check_array refuses complex dtypes
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"complex input must be a non-empty 1-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("parameter values must be finite")
        return arr.astype(complex)
    arr = check_array(X, dtype=float)
    if arr.shape[1] != 2:
        raise ValueError(f"expected columns [re, im], got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


class MembershipEstimator(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Escape-time membership for one recurrence family.

    Parameters
    ----------
    family : {"mm1", "mm2", "mm3", "power", "general"}
        ``mm1`` iterates the Newton-Mandelbrot recurrence (uses ``p``, ``m``),
        ``mm3`` the Murase-Mandelbrot recurrence (uses ``m``, ``n``),
        ``mm2`` uses ``p``, ``power`` uses ``d`` and ``general`` uses
        ``poly`` and ``m``.
    branch : int
        Sheet of the fractional outer power, fixed for every orbit.
    escape_radius : float or None
        ``None`` picks the family default.
    max_iter : int
        Iteration budget.

    ``fit`` only validates the parameters; ``predict`` returns 1 for
    bounded orbits, ``transform`` the escape iteration (``max_iter`` when
    bounded).
    """

    def __init__(self, family="mm3", p=1, m=2.0, n=1.0, d=2, poly=None, branch=0,
                 escape_radius=None, max_iter=DEFAULT_RENDER_ITERS):
        self.family = family
        self.p = p
        self.m = m
        self.n = n
        self.d = d
        self.poly = poly
        self.branch = branch
        self.escape_radius = escape_radius
        self.max_iter = max_iter

    def _make_recurrence(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {sorted(FAMILIES)}, got {self.family!r}")
        if self.family == "mm1":
            return MMFormula1(self.p, self.m, self.branch)
        if self.family == "mm2":
            return MMFormula2(self.p, self.branch)
        if self.family == "mm3":
            return MMFormula3(self.m, self.n, self.branch)
        if self.family == "power":
            return PlainPower(self.d)
        if self.poly is None:
            raise ValueError("family='general' needs poly")
        return GeneralP(self.poly, self.m, self.branch)

    def fit(self, X=None, y=None):
        _check_run(self.escape_radius, self.max_iter)
        self.recurrence_ = self._make_recurrence()
        self.classes_ = np.array([0, 1])
        return self

    def _run(self, X):
        check_is_fitted(self, "recurrence_")
        c = check_points(X)
        return _iterate(c, self.recurrence_, self.escape_radius, self.max_iter)

    def predict(self, X):
        status, _, _ = self._run(X)
        return (status == BOUNDED).astype(int)

    def predict_status(self, X):
        """Raw status codes (0 bounded, 1 escaped, 2 pole, 3 overflow)."""
        return self._run(X)[0]

    def transform(self, X):
        _, at_iter, _ = self._run(X)
        return at_iter.reshape(-1, 1)

    def scan(self, grid, workers=1) -> MembershipMap:
        check_is_fitted(self, "recurrence_")
        return scan_grid(grid, self.recurrence_, self.escape_radius, self.max_iter, workers)


class ExtendedNewtonSolver(BaseEstimator):
    """Root finder for one polynomial using one of the extended Newton methods.

    ``fit(coeffs)`` takes ``a_0..a_p`` (leading first).  ``predict(x0)``
    returns the root reached from each start (NaN where the run did not
    converge); ``transform(x0)`` returns the step counts.
    """

    def __init__(self, method="method4", q=1.0, lam=1.0, r=0.0, i=1, m=None,
                 max_iter=MAX_ITER, residual_tol=RESIDUAL_TOL, step_tol=STEP_TOL):
        self.method = method
        self.q = q
        self.lam = lam
        self.r = r
        self.i = i
        self.m = m
        self.max_iter = max_iter
        self.residual_tol = residual_tol
        self.step_tol = step_tol

    def fit(self, X, y=None):
        coeffs = np.asarray(X).ravel()
        if coeffs.size < 2:
            raise ValueError("need at least two coefficients")
        self.params_ = MethodParams(self.method, self.q, self.lam, self.r, self.i, self.m)
        self.poly_ = Polynomial(coeffs.tolist())
        return self

    def solve_all(self, X0) -> list:
        check_is_fitted(self, "poly_")
        starts = np.asarray(X0).ravel()
        return [solve(x.item(), self.poly_, self.params_, self.max_iter,
                      self.residual_tol, self.step_tol) for x in starts]

    def predict(self, X0):
        traces = self.solve_all(X0)
        dtype = complex if any(isinstance(t.root, complex) for t in traces) else float
        return np.array([t.root if t.converged else np.nan for t in traces], dtype=dtype)

    def transform(self, X0):
        return np.array([t.steps for t in self.solve_all(X0)]).reshape(-1, 1)
