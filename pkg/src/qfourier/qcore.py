"""q-calculus primitives on the q-linear grid.

Numbers flow through mpmath. Functions accept python floats, ints or mpmath
values and return mpmath values; callers that need floats convert at the edge.
"""

import contextlib
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath as mp

from ._series import CompensatedSum, log_growth
from .exceptions import NonConvergenceError, PreconditionError, QDomainError

#: Upper end of the q-range where the derivative asymptotics at the zeros and
#: the pointwise/uniform/off-grid convergence results are proven.
Q_WINDOW_DERIVATIVE = (1 / 51) ** (1 / 50)
#: Upper end of the q-range where the cosine asymptotics at the zeros and the
#: Hölder-condition convergence result are proven.
Q_WINDOW_COSINE = (1 / 50) ** (1 / 49)


@dataclass(frozen=True)
class QContext:
    """Numeric policy shared by every computation.

    Parameters
    ----------
    q : float
        Base, strictly between 0 and 1.
    series_tol : float
        Relative accuracy target for sums, products and q-integrals. It also
        fixes the minimum working precision, ``-log2(series_tol)`` bits.
    max_terms : int
        Cap on the number of terms of any single series or product.
    grid_depth : int
        Number of positive (and of negative) nodes ``±q^n, n < grid_depth``
        used by q-integrals.
    root_tol : float
        Relative width of the certified sign-change bracket around each zero.
    guard_bits : int
        Extra bits carried on top of every planned precision.
    """

    q: float
    series_tol: float = 1e-30
    max_terms: int = 20000
    grid_depth: int = 200
    root_tol: float = 1e-15
    guard_bits: int = 32
    derivative_window: bool = field(init=False)
    cosine_window: bool = field(init=False)

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise QDomainError(f"q must lie in (0, 1), got {self.q!r}")
        if not self.series_tol > 0 or not self.root_tol > 0:
            raise QDomainError("series_tol and root_tol must be positive")
        if int(self.max_terms) < 1 or int(self.grid_depth) < 1:
            raise QDomainError("max_terms and grid_depth must be >= 1")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "max_terms", int(self.max_terms))
        object.__setattr__(self, "grid_depth", int(self.grid_depth))
        object.__setattr__(self, "derivative_window", q <= Q_WINDOW_DERIVATIVE)
        object.__setattr__(self, "cosine_window", q <= Q_WINDOW_COSINE)

    @property
    def target_bits(self):
        return max(53, int(math.ceil(-math.log2(self.series_tol))))

    @property
    def guarantees(self):
        """Which proven q-windows apply; outside them results are "not asserted"."""
        return {
            "derivative_window": "asserted" if self.derivative_window else "not asserted",
            "cosine_window": "asserted" if self.cosine_window else "not asserted",
        }

    def mpq(self):
        return mp.mpf(self.q)

    def prec_for(self, kmax, radius=1.0):
        """Working precision (bits) for quantities built from the first kmax zeros.

        Values such as C_q(q^{1/2} ω_k) are the reciprocal of the peak term of
        their own series, and their sensitivity to ω_k is of the same order,
        so the budget is the target plus twice the peak growth at
        ``radius * q^{-kmax + 1/4}``.
        """
        bits = self.target_bits + self.guard_bits
        if kmax <= 0:
            return bits
        z = radius * self.q ** (-kmax + 0.25)
        growth = trig_growth_bits(self.q, z, self.max_terms)
        return bits + 2 * int(math.ceil(growth)) + int(math.ceil(math.log2(kmax + 1)))

    @contextlib.contextmanager
    def precision(self, kmax=0, radius=1.0):
        """Raise (never lower) the ambient mpmath precision for kmax modes."""
        bits = max(mp.mp.prec, self.prec_for(kmax, radius))
        with mp.workprec(bits):
            yield bits


def trig_growth_bits(q, absz, max_terms=20000):
    """log2 of the largest term of the C_q/S_q power series at |z| = absz."""
    if absz == 0:
        return 0.0
    lz = 2 * math.log2(absz)
    lq = math.log2(q)

    def ratio(n):
        return (
            lz
            + (2 * n + 0.5) * lq
            - math.log2(-math.expm1((2 * n + 1) * math.log(q)))
            - math.log2(-math.expm1((2 * n + 2) * math.log(q)))
        )

    growth, _ = log_growth(ratio, max_terms)
    return growth - math.log2(1 - q)


@dataclass(frozen=True)
class GridFunction:
    """A function known on the q-linear grid ``{±q^(n-1): n = 1..depth}``.

    ``pos_values[n-1]`` is f(q^(n-1)) and ``neg_values[n-1]`` is f(-q^(n-1)).
    One-sided limits at 0 are stored explicitly and may be ``None`` when
    unknown; operations that need them refuse to guess.
    """

    q: float
    depth: int
    pos_values: tuple
    neg_values: tuple
    limit_0_plus: Optional[object] = None
    limit_0_minus: Optional[object] = None

    def __post_init__(self):
        if not 0.0 < float(self.q) < 1.0:
            raise QDomainError(f"q must lie in (0, 1), got {self.q!r}")
        if int(self.depth) < 1:
            raise QDomainError("depth must be >= 1")
        pos = tuple(mp.mpmathify(v) for v in self.pos_values)
        neg = tuple(mp.mpmathify(v) for v in self.neg_values)
        if len(pos) != self.depth or len(neg) != self.depth:
            raise ValueError(
                f"expected {self.depth} values per branch, got {len(pos)} and {len(neg)}"
            )
        for v in pos + neg:
            if not mp.isfinite(v):
                raise ValueError("grid values must be finite")
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "pos_values", pos)
        object.__setattr__(self, "neg_values", neg)
        for name in ("limit_0_plus", "limit_0_minus"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, mp.mpmathify(v))

    @classmethod
    def from_callable(cls, f, q, depth, limits=None):
        """Sample ``f`` at ``±q^(n-1)`` (at the ambient precision)."""
        qm = mp.mpf(q)
        pos, neg = [], []
        x = mp.mpf(1)
        for _ in range(depth):
            pos.append(f(x))
            neg.append(f(-x))
            x *= qm
        lp, lm = limits if limits is not None else (None, None)
        return cls(q, depth, tuple(pos), tuple(neg), lp, lm)

    @property
    def has_limits(self):
        return self.limit_0_plus is not None and self.limit_0_minus is not None

    def nodes(self):
        """Positive abscissas q^(n-1), n = 1..depth, at the ambient precision."""
        qm = mp.mpf(self.q)
        return [qm**n for n in range(self.depth)]

    def to_dict(self):
        def enc(v):
            return None if v is None else float(v)

        return {
            "q": self.q,
            "depth": self.depth,
            "pos_values": [float(v) for v in self.pos_values],
            "neg_values": [float(v) for v in self.neg_values],
            "limit_0_plus": enc(self.limit_0_plus),
            "limit_0_minus": enc(self.limit_0_minus),
        }

    @classmethod
    def from_dict(cls, data):
        known = {"q", "depth", "pos_values", "neg_values", "limit_0_plus", "limit_0_minus"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown grid-function keys: {sorted(extra)}")
        return cls(
            data["q"],
            int(data["depth"]),
            tuple(data["pos_values"]),
            tuple(data["neg_values"]),
            data.get("limit_0_plus"),
            data.get("limit_0_minus"),
        )


def q_pochhammer(a, q, n, ctx: Optional[QContext] = None):
    """(a; q)_n = prod_{j<n} (1 - a q^j); ``n`` may be ``math.inf``.

    ``a`` may be a sequence, giving the multi-symbol product (a_1, ..., a_r; q)_n.
    The infinite product stops once ``|a q^j|`` is below the relative tolerance
    (and j >= 10).
    """
    if isinstance(a, (list, tuple)):
        out = mp.mpf(1)
        for ai in a:
            out *= q_pochhammer(ai, q, n, ctx)
        return out
    if not 0 < float(q) < 1:
        raise QDomainError(f"q must lie in (0, 1), got {q!r}")
    a = mp.mpmathify(a)
    qm = mp.mpmathify(q)
    acc = mp.mpf(1)
    if n != math.inf:
        n = int(n)
        if n < 0:
            raise QDomainError("n must be a nonnegative integer or infinity")
        t = a
        for _ in range(n):
            acc *= 1 - t
            t *= qm
        return acc
    tol = mp.mpf(ctx.series_tol) if ctx is not None else mp.ldexp(1, -mp.mp.prec)
    tol = min(tol, mp.ldexp(1, -mp.mp.prec))
    max_terms = ctx.max_terms if ctx is not None else 20000
    t = a
    for j in range(max_terms):
        if j >= 10 and abs(t) < tol:
            return acc
        acc *= 1 - t
        t *= qm
    raise NonConvergenceError("infinite q-product did not converge", partial=acc, terms=max_terms)


def delta_op(f: Callable, x, q):
    """Symmetric q-difference f(q^{1/2} x) - f(q^{-1/2} x)."""
    r = mp.sqrt(mp.mpmathify(q))
    x = mp.mpmathify(x)
    return f(r * x) - f(x / r)


def delta_quotient(f: Callable, x, q):
    """q-derivative (f(q^{1/2}x) - f(q^{-1/2}x)) / (x (q^{1/2} - q^{-1/2})).

    Undefined at x = 0; use series forms there.
    """
    x = mp.mpmathify(x)
    if x == 0:
        raise QDomainError("the q-difference quotient is undefined at x = 0")
    r = mp.sqrt(mp.mpmathify(q))
    return (f(r * x) - f(x / r)) / (x * (r - 1 / r))


def _grid_sum(term, ctx, full_output):
    # stop after three consecutive terms are negligible against the partial sum
    acc = CompensatedSum()
    tol = mp.mpf(ctx.series_tol)
    quiet = 0
    used = 0
    for n in range(ctx.grid_depth):
        t = term(n)
        acc.add(t)
        used = n + 1
        s = acc.value
        if s and abs(t) <= tol * abs(s):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return acc.value, used


def q_integral_0a(f: Callable, a, ctx: QContext, f_bound=None, full_output=False):
    """Jackson integral a(1-q) sum_n f(a q^n) q^n over n < grid_depth.

    With ``full_output`` the return is ``(value, info)`` where ``info`` holds
    the number of nodes used and, when ``f_bound`` (a bound on |f| on [0, a])
    is supplied, a bound on the omitted tail.
    """
    q = ctx.mpq()
    a = mp.mpmathify(a)
    state = {"x": a, "w": mp.mpf(1)}

    def term(n):
        t = f(state["x"]) * state["w"]
        state["x"] *= q
        state["w"] *= q
        return t

    s, used = _grid_sum(term, ctx, full_output)
    value = a * (1 - q) * s
    if not full_output:
        return value
    info = {"nodes_used": used}
    if f_bound is not None:
        info["tail_bound"] = abs(a) * mp.mpf(f_bound) * q**used
    return value, info


def q_integral_sym(f, ctx: QContext, full_output=False):
    """q-integral over [-1, 1]: (1-q) sum_n q^n [f(q^n) + f(-q^n)].

    ``f`` is a callable or a :class:`GridFunction` (whose own depth also caps
    the number of nodes).
    """
    q = ctx.mpq()
    if isinstance(f, GridFunction):
        if abs(f.q - ctx.q) > 0:
            raise ValueError("grid function and context use different q")
        depth = min(f.depth, ctx.grid_depth)
        pos, neg = f.pos_values, f.neg_values
        w = [q**n for n in range(depth)]

        def term(n):
            return (pos[n] + neg[n]) * w[n]

        sub = ctx if depth == ctx.grid_depth else _with_depth(ctx, depth)
        s, used = _grid_sum(term, sub, full_output)
    else:
        state = {"x": mp.mpf(1)}

        def term(n):
            x = state["x"]
            state["x"] = x * q
            return (f(x) + f(-x)) * x

        s, used = _grid_sum(term, ctx, full_output)
    value = (1 - q) * s
    if full_output:
        return value, {"nodes_used": used}
    return value


def _with_depth(ctx, depth):
    return QContext(
        ctx.q, ctx.series_tol, ctx.max_terms, depth, ctx.root_tol, ctx.guard_bits
    )


def verify_ibp(
    f: Callable,
    g: Callable,
    ctx: QContext,
    sign: int = 1,
    limits_f: Optional[Sequence] = None,
    limits_g: Optional[Sequence] = None,
    full_output: bool = False,
):
    """Residual |LHS - RHS| of the q-integration-by-parts formula on [-1, 1].

    ``sign=+1`` pairs g(q^{1/2}x) on the left with f(q^{-1/2}x) on the right;
    ``sign=-1`` swaps the shifts. ``limits_f``/``limits_g`` are the one-sided
    limits (value at 0+, value at 0-) and are required. ``full_output`` also
    returns a scale, the sum of the magnitudes of the three pieces.
    """
    if limits_f is None or limits_g is None:
        raise PreconditionError("one-sided limits at 0 of both f and g are required")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q = ctx.mpq()
    r = mp.sqrt(q)
    s_left = r if sign == 1 else 1 / r
    s_right = 1 / r if sign == 1 else r

    lhs = q_integral_sym(lambda x: g(s_left * x) * delta_quotient(f, x, q), ctx)
    rhs_int = q_integral_sym(lambda x: f(s_right * x) * delta_quotient(g, x, q), ctx)
    fp, fm = (mp.mpmathify(v) for v in limits_f)
    gp, gm = (mp.mpmathify(v) for v in limits_g)
    edge = 1 / r
    boundary = r * ((f(edge) * g(edge) - f(-edge) * g(-edge)) - (fp * gp - fm * gm))
    residual = abs(lhs - (-rhs_int + boundary))
    if full_output:
        return residual, abs(lhs) + abs(rhs_int) + abs(boundary)
    return residual
