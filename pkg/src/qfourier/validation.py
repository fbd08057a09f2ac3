"""Input validation shared by the estimators and the CLI."""

import math
import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import ConfigError, QDomainError
from .qcore import GridFunction

__all__ = ["check_q", "check_positive_int", "check_points", "grid_nodes", "grid_from_samples"]


def check_q(q):
    if isinstance(q, bool) or not isinstance(q, numbers.Real):
        raise QDomainError(f"q must be a real number, got {q!r}")
    q = float(q)
    if not 0.0 < q < 1.0:
        raise QDomainError(f"q must lie in (0, 1), got {q!r}")
    return q


def check_positive_int(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_points(X):
    """1-D float array from a (n,), (n, 1) or list input."""
    X = np.asarray(X, dtype=float) if not hasattr(X, "shape") else X
    if getattr(X, "ndim", 1) == 1:
        X = np.asarray(X, dtype=float).reshape(-1, 1)
    X = check_array(X, dtype=float, ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"expected a single feature column, got {X.shape[1]}")
    return X[:, 0]


def grid_nodes(q, depth):
    """The 2*depth grid abscissas ±q^(n-1), positives first."""
    q = check_q(q)
    pos = q ** np.arange(depth, dtype=float)
    if not np.all(pos > 0):
        raise QDomainError(f"q^{depth - 1} underflows double precision; lower the depth")
    return np.concatenate([pos, -pos])


def _node_index(x, q):
    # exact grid abscissas satisfy |x| = q^n; allow a few ulps
    n = round(math.log(abs(x)) / math.log(q))
    if n < 0 or not math.isclose(abs(x), q**n, rel_tol=1e-12):
        return None
    return n


def grid_from_samples(X, y, q, depth, limits=None):
    """GridFunction from samples that cover every node ±q^(n-1), n = 1..depth.

    Order does not matter; extra points off the grid or beyond ``depth`` are
    rejected, as are duplicates and missing nodes.
    """
    q = check_q(q)
    depth = check_positive_int("depth", depth)
    x = check_points(X)
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"X has {x.shape[0]} rows but y has {y.shape[0]}")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains non-finite values")
    pos = [None] * depth
    neg = [None] * depth
    for xi, yi in zip(x, y):
        n = None if xi == 0 else _node_index(xi, q)
        if n is None or n >= depth:
            raise ValueError(f"{xi!r} is not a node ±q^(n-1) with n <= {depth}")
        side = pos if xi > 0 else neg
        if side[n] is not None:
            raise ValueError(f"duplicate sample at {xi!r}")
        side[n] = float(yi)
    missing = [i for i, v in enumerate(pos) if v is None] + [-i for i, v in enumerate(neg) if v is None]
    if missing:
        raise ValueError(f"{len(missing)} grid nodes have no sample")
    lp, lm = limits if limits is not None else (None, None)
    return GridFunction(q, depth, tuple(pos), tuple(neg), lp, lm)
