"""Basic Fourier series in C_q(q^{1/2} ω_k x) and S_q(q ω_k x).

Coefficients come either from q-quadrature on the grid or from the closed
forms known for |x|, the sign function, the step H^(a) and monomials. Each
mode k is computed at the precision that mode needs (``ctx.prec_for(k)``),
which grows like k^2 because C_q(q^{1/2} ω_k) is exponentially small while its
series terms are exponentially large.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath as mp

from ._series import CompensatedSum
from .qcore import GridFunction, QContext, q_integral_sym, q_pochhammer
from .qtrig import cq, sq, sq_prime
from .targets import step_index
from .zeros import ZeroTable, find_zeros

__all__ = [
    "FourierSeries",
    "mu_k",
    "mode_integrals",
    "coeff_a0",
    "coeff_ak",
    "coeff_bk",
    "compute_series",
    "eval_partial_sum",
    "closed_abs_coeffs",
    "closed_sign_coeffs",
    "closed_step_coeffs",
    "closed_monomial_coeffs",
    "cos_integral_by_parts",
    "sin_integral_by_parts",
    "compare_series",
]


@dataclass(frozen=True)
class FourierSeries:
    q: float
    K: int
    a0: object
    a: tuple
    b: tuple
    mu: tuple
    zeros: ZeroTable
    provenance: tuple

    def __post_init__(self):
        if not len(self.a) == len(self.b) == len(self.mu) == self.K:
            raise ValueError("a, b and mu must each have K entries")
        if self.K > self.zeros.K:
            raise ValueError("series has more modes than its zero table")
        if any(m == 0 for m in self.mu):
            raise ValueError("normalization constants must be nonzero")

    def to_dict(self):
        entries = [
            {
                "k": k,
                "omega": float(self.zeros.omega(k)),
                "mu": float(self.mu[k - 1]),
                "a": float(self.a[k - 1]),
                "b": float(self.b[k - 1]),
                "provenance": self.provenance[k],
            }
            for k in range(1, self.K + 1)
        ]
        return {"q": self.q, "K": self.K, "a0": float(self.a0), "provenance_a0": self.provenance[0], "entries": entries}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "a_k", "b_k", "mu_k"])
        for k in range(1, self.K + 1):
            w.writerow([k, repr(float(self.a[k - 1])), repr(float(self.b[k - 1])), repr(float(self.mu[k - 1]))])
        return buf.getvalue()


def _mode_prec(ctx, k):
    return max(mp.mp.prec, ctx.prec_for(k))


def _check_table(zt, k):
    if not 1 <= k <= zt.K:
        raise IndexError(f"mode {k} outside the zero table (K={zt.K})")


def mu_k(zt: ZeroTable, k, ctx: QContext):
    """Normalization (1-q) C_q(q^{1/2} ω_k) S_q'(ω_k)."""
    _check_table(zt, k)
    with mp.workprec(_mode_prec(ctx, k)):
        q = ctx.mpq()
        w = +zt.omega(k)
        return (1 - q) * cq(mp.sqrt(q) * w, ctx).value * sq_prime(w, ctx).value


def mode_integrals(f, k, zt: ZeroTable, ctx: QContext, full_output=False):
    """(∫ f C_q(q^{1/2} ω_k t) d_qt, ∫ f S_q(q ω_k t) d_qt) over [-1, 1].

    ``f`` is a GridFunction or a callable. Both integrals share node
    evaluations; summation stops early only once both integrands have been
    negligible for three consecutive nodes. ``full_output`` appends a dict
    with the largest summand of each integral (``peak_c``, ``peak_s``), the
    scale against which rounding in the result should be judged.
    """
    _check_table(zt, k)
    with mp.workprec(_mode_prec(ctx, k)):
        q = ctx.mpq()
        w = +zt.omega(k)
        arg_c = mp.sqrt(q) * w
        arg_s = q * w
        if isinstance(f, GridFunction):
            depth = min(f.depth, ctx.grid_depth)
            pos, neg = f.pos_values, f.neg_values
        else:
            depth = ctx.grid_depth
            pos = neg = None
        acc_c, acc_s = CompensatedSum(), CompensatedSum()
        tol = mp.mpf(ctx.series_tol)
        quiet = 0
        peak_c = peak_s = mp.mpf(0)
        x = mp.mpf(1)
        for n in range(depth):
            if pos is None:
                fp, fm = f(x), f(-x)
            else:
                fp, fm = pos[n], neg[n]
            even, odd = fp + fm, fp - fm
            tc = even * cq(arg_c * x, ctx).value * x if even else mp.mpf(0)
            ts = odd * sq(arg_s * x, ctx).value * x if odd else mp.mpf(0)
            acc_c.add(tc)
            acc_s.add(ts)
            peak_c = max(peak_c, abs(tc))
            peak_s = max(peak_s, abs(ts))
            sc, ss = acc_c.value, acc_s.value
            small_c = abs(tc) <= tol * abs(sc) if sc else not tc
            small_s = abs(ts) <= tol * abs(ss) if ss else not ts
            if small_c and small_s and (sc or ss):
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
            x *= q
        out = (1 - q) * acc_c.value, (1 - q) * acc_s.value
        if full_output:
            return out + ({"peak_c": (1 - q) * peak_c, "peak_s": (1 - q) * peak_s},)
        return out


def coeff_a0(f, ctx: QContext):
    """a_0 = ∫_{-1}^{1} f d_qt."""
    return q_integral_sym(f, ctx)


def coeff_ak(f, k, zt: ZeroTable, ctx: QContext):
    ic, _ = mode_integrals(f, k, zt, ctx)
    with mp.workprec(_mode_prec(ctx, k)):
        return ic / mu_k(zt, k, ctx)


def coeff_bk(f, k, zt: ZeroTable, ctx: QContext):
    _, is_ = mode_integrals(f, k, zt, ctx)
    with mp.workprec(_mode_prec(ctx, k)):
        return mp.sqrt(ctx.mpq()) * is_ / mu_k(zt, k, ctx)


def compute_series(f, K, ctx: QContext, zt: Optional[ZeroTable] = None) -> FourierSeries:
    """All coefficients up to mode K by q-quadrature."""
    if zt is None:
        zt = find_zeros(ctx, K)
    if zt.K < K:
        raise ValueError(f"zero table has {zt.K} modes, need {K}")
    a, b, mu = [], [], []
    with mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits)):
        a0 = coeff_a0(f, ctx)
    for k in range(1, K + 1):
        ic, is_ = mode_integrals(f, k, zt, ctx)
        with mp.workprec(_mode_prec(ctx, k)):
            m = mu_k(zt, k, ctx)
            a.append(ic / m)
            b.append(mp.sqrt(ctx.mpq()) * is_ / m)
            mu.append(m)
    return FourierSeries(ctx.q, K, a0, tuple(a), tuple(b), tuple(mu), zt, ("quadrature",) * (K + 1))


def eval_partial_sum(fs: FourierSeries, z, ctx: QContext, K_used: Optional[int] = None):
    """a_0/2 + sum_{k <= K_used} [a_k C_q(q^{1/2} ω_k z) + b_k S_q(q ω_k z)]."""
    K_used = fs.K if K_used is None else int(K_used)
    if not 0 <= K_used <= fs.K:
        raise ValueError(f"K_used must lie in 0..{fs.K}")
    radius = max(1.0, float(abs(mp.mpmathify(z))))
    with ctx.precision(K_used, radius):
        q = ctx.mpq()
        r = mp.sqrt(q)
        z = mp.mpmathify(z)
        acc = CompensatedSum()
        acc.add(fs.a0 / 2)
        for k in range(1, K_used + 1):
            w = fs.zeros.omega(k)
            ak, bk = fs.a[k - 1], fs.b[k - 1]
            try:
                if ak:
                    acc.add(ak * cq(r * w * z, ctx).value)
                if bk:
                    acc.add(bk * sq(q * w * z, ctx).value)
            except OverflowError as exc:
                raise OverflowError(f"mode k={k} overflows at z={z}") from exc
        return acc.value


def _mode_values(zt, k, ctx):
    """(ω_k, C_q(q^{1/2} ω_k), S_q'(ω_k)) at the mode's precision."""
    q = ctx.mpq()
    w = +zt.omega(k)
    return w, cq(mp.sqrt(q) * w, ctx).value, sq_prime(w, ctx).value


def _closed(zt, K, ctx, tag, a0, coeffs):
    if zt.K < K:
        raise ValueError(f"zero table has {zt.K} modes, need {K}")
    with mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits)):
        a0 = a0(ctx.mpq())
    a, b, mu = [], [], []
    for k in range(1, K + 1):
        with mp.workprec(_mode_prec(ctx, k)):
            w, c, d = _mode_values(zt, k, ctx)
            ak, bk = coeffs(k, w, c, d)
            a.append(ak)
            b.append(bk)
            mu.append((1 - ctx.mpq()) * c * d)
    prov = (f"closed_form:{tag}",) * (K + 1)
    return FourierSeries(ctx.q, K, a0, tuple(a), tuple(b), tuple(mu), zt, prov)


def closed_abs_coeffs(q, K, zt: ZeroTable, ctx: Optional[QContext] = None) -> FourierSeries:
    """Series of |x|: a_0 = 2/(1+q), b_k = 0."""
    ctx = ctx or QContext(q)
    qm = ctx.mpq()

    def coeffs(k, w, c, d):
        return -2 / mp.sqrt(qm) * (1 - qm) * (1 - c) / (w * w * c * d), mp.mpf(0)

    return _closed(zt, K, ctx, "abs", lambda q: 2 / (1 + q), coeffs)


def closed_sign_coeffs(q, K, zt: ZeroTable, ctx: Optional[QContext] = None) -> FourierSeries:
    """Series of the sign function (h(0) = -1): only b_k survive."""
    ctx = ctx or QContext(q)

    def coeffs(k, w, c, d):
        return mp.mpf(0), 2 * (1 - c) / (w * c * d)

    return _closed(zt, K, ctx, "sign", lambda q: mp.mpf(0), coeffs)


def closed_step_coeffs(q, a, K, zt: ZeroTable, ctx: Optional[QContext] = None) -> FourierSeries:
    """Series of H^(a) (-1 for x <= a, +1 beyond), 0 < a < 1."""
    ctx = ctx or QContext(q)
    n_a = step_index(ctx.q, a)
    qm = ctx.mpq()

    def coeffs(k, w, c, d):
        s_na = sq(qm**n_a * w, ctx).value
        c_na = cq(qm ** (n_a + mp.mpf(1) / 2) * w, ctx).value
        return -(2 / w) * s_na / (c * d), (2 / w) * (c_na - c) / (c * d)

    return _closed(zt, K, ctx, f"step(a={a})", lambda q: -2 * q**n_a, coeffs)


def closed_monomial_coeffs(q, m, K, zt: ZeroTable, ctx: Optional[QContext] = None) -> FourierSeries:
    """Series of x^m from the double-sum formula; empty inner sums are zero."""
    ctx = ctx or QContext(q)
    m = int(m)
    if m < 0:
        raise ValueError("m must be >= 0")
    qm = ctx.mpq()
    even = 1 + (-1) ** m
    odd = -1 + (-1) ** m
    half = mp.mpf(1) / 2

    def coeffs(k, w, c, d):
        qq = q_pochhammer(qm, qm, m)
        ak = mp.mpf(0)
        if even:
            for i in range((m - 2) // 2 + 1):
                ak += (-1) ** i * qm ** ((i + 1) * (i - m + half)) / (
                    w ** (2 * i + 2) * q_pochhammer(qm, qm, m - 1 - 2 * i)
                )
            ak *= qq * even / d
        bk = mp.mpf(0)
        if odd:
            for i in range((m - 1) // 2 + 1):
                bk += (-1) ** i * qm ** ((i + 1) * (i - m - half)) / (
                    w ** (2 * i + 1) * q_pochhammer(qm, qm, m - 2 * i)
                )
            bk *= qq * mp.sqrt(qm) * odd / d
        return ak, bk

    return _closed(zt, K, ctx, f"monomial(m={m})", lambda q: even * (1 - q) / (1 - q ** (m + 1)), coeffs)


def cos_integral_by_parts(f: Callable, k, zt: ZeroTable, ctx: QContext):
    """-(1-q)/(q^{1/2} ω_k) ∫ S_q(q ω_k t) δf(q^{1/2}t)/δt d_qt.

    Equals ∫ f C_q(q^{1/2} ω_k t) d_qt = μ_k a_k for f regular at 0.
    """
    _check_table(zt, k)
    with mp.workprec(_mode_prec(ctx, k)):
        q = ctx.mpq()
        r = mp.sqrt(q)
        w = +zt.omega(k)

        def integrand(t):
            dq = (f(q * t) - f(t)) / (t * (r - 1 / r))
            return sq(q * w * t, ctx).value * dq

        return -(1 - q) / (r * w) * q_integral_sym(integrand, ctx)


def sin_integral_by_parts(f: Callable, k, zt: ZeroTable, ctx: QContext):
    """(q-1)/(q ω_k) {q^{1/2}[f(q^{-1}) - f(-q^{-1})] C_q(q^{1/2}ω_k) - ∫ C_q(q^{1/2}ω_k t) δf(q^{-1/2}t)/δt d_qt}.

    Equals ∫ f S_q(q ω_k t) d_qt = q^{-1/2} μ_k b_k for f continuous at 0.
    """
    _check_table(zt, k)
    with mp.workprec(_mode_prec(ctx, k)):
        q = ctx.mpq()
        r = mp.sqrt(q)
        w = +zt.omega(k)

        def integrand(t):
            dq = (f(t) - f(t / q)) / (t * (r - 1 / r))
            return cq(r * w * t, ctx).value * dq

        edge = r * (f(1 / q) - f(-1 / q)) * cq(r * w, ctx).value
        return (q - 1) / (q * w) * (edge - q_integral_sym(integrand, ctx))


def compare_series(reference: FourierSeries, other: FourierSeries, atol=1e-25):
    """Coefficient agreement between two expansions of the same function.

    Entries that are exactly zero in ``reference`` (parity, or a constant
    target) have no relative error; for them ``other`` must stay below
    ``atol`` in absolute value. Everything else is compared relatively.
    Returns ``{"max_rel": ..., "max_abs_on_zeros": ..., "worst": (name, k)}``.
    """
    if reference.K != other.K:
        raise ValueError("series have different numbers of modes")
    pairs = [("a0", 0, reference.a0, other.a0)]
    pairs += [("a", k, reference.a[k - 1], other.a[k - 1]) for k in range(1, reference.K + 1)]
    pairs += [("b", k, reference.b[k - 1], other.b[k - 1]) for k in range(1, reference.K + 1)]
    max_rel, max_zero, worst = mp.mpf(0), mp.mpf(0), None
    for name, k, x, y in pairs:
        if x == 0:
            max_zero = max(max_zero, abs(y))
            continue
        rel = abs(x - y) / abs(x)
        if rel >= max_rel:
            max_rel, worst = rel, (name, k)
    return {"max_rel": max_rel, "max_abs_on_zeros": max_zero, "atol": atol, "worst": worst}
