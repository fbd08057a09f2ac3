"""scikit-learn style front end.

:class:`QFourierRegressor` fits a basic q-Fourier series to samples taken on
the q-linear grid and predicts its partial sum anywhere (including off the
grid). :class:`QTrigBasis` is the matching feature map: it turns points into
the columns [1/2, C_q(q^{1/2}ω_k x), S_q(qω_k x)] of that expansion.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

import mpmath as mp

from .analysis import _cumulative_sums
from .fourier import compute_series
from .qcore import QContext
from .qtrig import cq, sq
from .validation import check_points, check_positive_int, check_q, grid_from_samples, grid_nodes
from .zeros import find_zeros

__all__ = ["QFourierRegressor", "QTrigBasis"]


def _context(est):
    return QContext(
        check_q(est.q),
        series_tol=est.series_tol,
        grid_depth=check_positive_int("depth", est.depth),
    )


class QFourierRegressor(RegressorMixin, BaseEstimator):
    """Basic q-Fourier series fitted by q-quadrature on the grid.

    Parameters
    ----------
    q : float
        Base of the grid and of the trigonometric functions.
    n_modes : int
        Number of (cosine, sine) mode pairs.
    depth : int
        Grid nodes per side; ``fit`` expects a sample at every ±q^(n-1),
        n = 1..depth (see :meth:`grid_nodes`).
    series_tol : float
        Relative accuracy target for every series and q-integral.
    limits : tuple or None
        One-sided limits (f(0+), f(0-)), kept for Hölder diagnostics only.

    Attributes
    ----------
    series_ : FourierSeries
    zeros_ : ZeroTable
    grid_ : GridFunction
    a0_, a_, b_ : float, ndarray, ndarray
        Coefficients rounded to double precision (``series_`` keeps them exact).
    """

    def __init__(self, q=0.5, n_modes=8, depth=200, series_tol=1e-30, limits=None):
        self.q = q
        self.n_modes = n_modes
        self.depth = depth
        self.series_tol = series_tol
        self.limits = limits

    def grid_nodes(self):
        """Abscissas at which ``fit`` needs samples."""
        return grid_nodes(self.q, check_positive_int("depth", self.depth)).reshape(-1, 1)

    def fit(self, X, y):
        ctx = _context(self)
        K = check_positive_int("n_modes", self.n_modes)
        self.grid_ = grid_from_samples(X, y, ctx.q, ctx.grid_depth, self.limits)
        self.zeros_ = find_zeros(ctx, K)
        self.series_ = compute_series(self.grid_, K, ctx, self.zeros_)
        self.a0_ = float(self.series_.a0)
        self.a_ = np.array([float(v) for v in self.series_.a])
        self.b_ = np.array([float(v) for v in self.series_.b])
        self.n_features_in_ = 1
        self._ctx = ctx
        return self

    def predict(self, X, n_modes=None):
        """Partial sum with the first ``n_modes`` modes (default: all)."""
        check_is_fitted(self, "series_")
        x = check_points(X)
        K = self.series_.K if n_modes is None else check_positive_int("n_modes", n_modes, 0)
        if K > self.series_.K:
            raise ValueError(f"n_modes={K} exceeds the fitted {self.series_.K}")
        return np.array([float(_cumulative_sums(self.series_, xi, self._ctx, [K])[K]) for xi in x])


class QTrigBasis(TransformerMixin, BaseEstimator):
    """Feature map x -> [1/2, C_q(q^{1/2}ω_1 x), ..., C_q(q^{1/2}ω_K x), S_q(qω_1 x), ..., S_q(qω_K x)]."""

    def __init__(self, q=0.5, n_modes=8, series_tol=1e-30):
        self.q = q
        self.n_modes = n_modes
        self.series_tol = series_tol

    def fit(self, X=None, y=None):
        self._ctx = QContext(check_q(self.q), series_tol=self.series_tol)
        K = check_positive_int("n_modes", self.n_modes)
        self.zeros_ = find_zeros(self._ctx, K)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "zeros_")
        x = check_points(X)
        K = self.zeros_.K
        out = np.empty((x.shape[0], 2 * K + 1))
        ctx = self._ctx
        for i, xi in enumerate(x):
            with ctx.precision(K, max(1.0, abs(xi))):
                q = ctx.mpq()
                r = mp.sqrt(q)
                z = mp.mpf(xi)
                out[i, 0] = 0.5
                for k in range(1, K + 1):
                    w = self.zeros_.omega(k)
                    out[i, k] = float(cq(r * w * z, ctx).value)
                    out[i, K + k] = float(sq(q * w * z, ctx).value)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "zeros_")
        K = self.zeros_.K
        return np.array(["half"] + [f"C{k}" for k in range(1, K + 1)] + [f"S{k}" for k in range(1, K + 1)], dtype=object)
