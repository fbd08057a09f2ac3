"""Stock target functions with their grid samplings and one-sided limits at 0."""

from fractions import Fraction

import mpmath as mp

from .exceptions import QDomainError
from .qcore import GridFunction


def absolute_value(x):
    return abs(x)


def sign_function(x):
    """-1 for x <= 0, +1 for x > 0."""
    return mp.mpf(1) if x > 0 else mp.mpf(-1)


def step_function(a):
    """H^(a): -1 for x <= a, +1 for x > a (a > 0)."""
    a = mp.mpmathify(a)

    def h(x):
        return mp.mpf(1) if x > a else mp.mpf(-1)

    return h


def monomial(m):
    m = int(m)

    def f(x):
        return mp.mpmathify(x) ** m

    return f


def step_index(q, a):
    """Least positive integer j with q^j < a, by exact rational comparison."""
    if not 0 < a < 1:
        raise QDomainError(f"step location a must lie in (0, 1), got {a!r}")
    qf, af = Fraction(q), Fraction(a)
    j, p = 1, qf
    while p >= af:
        p *= qf
        j += 1
    return j


def grid(kind, q, depth, prec=None, **params):
    """GridFunction for a stock target: 'abs', 'sign', 'step' (a=), 'monomial' (m=).

    Samples are taken at ``prec`` bits (default: ambient) so that high modes
    are not swamped by rounding in the data.
    """
    prec = prec or mp.mp.prec
    with mp.workprec(prec):
        if kind == "abs":
            return GridFunction.from_callable(absolute_value, q, depth, (0, 0))
        if kind == "sign":
            return GridFunction.from_callable(sign_function, q, depth, (1, -1))
        if kind == "step":
            a = params["a"]
            step_index(q, a)
            return GridFunction.from_callable(step_function(a), q, depth, (-1, -1))
        if kind == "monomial":
            m = int(params["m"])
            if m < 0:
                raise QDomainError("monomial degree must be >= 0")
            lim = 1 if m == 0 else 0
            return GridFunction.from_callable(monomial(m), q, depth, (lim, lim))
    raise ValueError(f"unknown target {kind!r}")


def callable_for(kind, **params):
    if kind == "abs":
        return absolute_value
    if kind == "sign":
        return sign_function
    if kind == "step":
        return step_function(params["a"])
    if kind == "monomial":
        return monomial(params["m"])
    raise ValueError(f"unknown target {kind!r}")
