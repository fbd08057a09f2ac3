"""q-exponential, q-cosine, q-sine and the Hahn-Exton q-Bessel function.

All series are summed by :func:`qfourier._series.sum_series`: terms come from
their ratio recurrences (no q^{n^2} powers are formed), the accumulation is
compensated, and the working precision is raised by the number of bits the
alternating terms are expected to cancel. Results are accurate relative to the
larger of the ambient mpmath precision and ``ctx.target_bits``, for the input
exactly as given.
"""

import math

import mpmath as mp

from ._series import SeriesValue, log2_abs, sum_series
from .exceptions import QDomainError
from .qcore import QContext, q_pochhammer

__all__ = [
    "SeriesValue",
    "exp_q",
    "cq",
    "sq",
    "sq_prime",
    "jackson_bessel3",
    "theorem_d_sq",
    "theorem_d_cq",
]


def _base_bits(ctx):
    return max(mp.mp.prec, ctx.target_bits)


def _log1m_qpow(lq, k):
    # log2(1 - q^k) for q = 2^lq
    return math.log2(-math.expm1(k * lq * math.log(2)))


def _zero_value():
    return SeriesValue(mp.mpf(0), 1, mp.mpf(0), mp.inf)


def _trig_series(z, ctx, shift, first, weight=False, single_pass=False):
    """Shared driver for the C_q (shift=0) and S_q (shift=1) recurrences.

    term_{n+1}/term_n = -z^2 q^{2n+1/2+shift} / ((1-q^{2n+1+shift})(1-q^{2n+2+shift})),
    times (2n+3)/(2n+1) when ``weight`` (termwise derivative of S_q / z).
    """
    q = ctx.q
    lz = 2 * log2_abs(z)
    lq = math.log2(q)

    def log2_ratio(n):
        out = lz + (2 * n + 0.5 + shift) * lq
        out -= _log1m_qpow(lq, 2 * n + 1 + shift) + _log1m_qpow(lq, 2 * n + 2 + shift)
        if weight:
            out += math.log2((2 * n + 3) / (2 * n + 1))
        return out

    def make_terms():
        zz = mp.mpmathify(z)
        qm = mp.mpf(q)
        z2 = zz * zz

        def ratios():
            qq = qm * qm
            p = mp.sqrt(qm) * qm**shift
            a = qm ** (1 + shift)
            n = 0
            while True:
                r = -z2 * p / ((1 - a) * (1 - a * qm))
                if weight:
                    r = r * (2 * n + 3) / (2 * n + 1)
                yield r
                p *= qq
                a *= qq
                n += 1

        return first(zz, qm), ratios()

    return sum_series(
        make_terms,
        log2_ratio,
        base_bits=_base_bits(ctx),
        max_terms=ctx.max_terms,
        guard_bits=ctx.guard_bits,
        single_pass=single_pass,
    )


def cq(z, ctx: QContext) -> SeriesValue:
    """q-cosine C_q(z) = sum (-1)^n q^{n(n-1/2)} z^{2n} / (q, q^2; q^2)_n."""
    if z == 0:
        return SeriesValue(mp.mpf(1), 1, mp.mpf(1), mp.mpf(1))
    return _trig_series(z, ctx, 0, lambda zz, qm: mp.mpf(1))


def sq(z, ctx: QContext, *, peak_relative=False) -> SeriesValue:
    """q-sine S_q(z) = z/(1-q) sum (-1)^n q^{n(n+1/2)} z^{2n} / (q^2, q^3; q^2)_n.

    ``peak_relative`` skips the cancellation-driven second pass: the error is
    then bounded relative to the largest term rather than to the value.
    """
    if z == 0:
        return _zero_value()
    return _trig_series(z, ctx, 1, lambda zz, qm: zz / (1 - qm), single_pass=peak_relative)


def sq_prime(z, ctx: QContext, *, peak_relative=False) -> SeriesValue:
    """Ordinary derivative of S_q, by termwise differentiation."""
    if z == 0:
        v = 1 / (1 - mp.mpf(ctx.q))
        return SeriesValue(v, 1, v, mp.mpf(1))
    return _trig_series(z, ctx, 1, lambda zz, qm: 1 / (1 - qm), weight=True, single_pass=peak_relative)


def exp_q(w, ctx: QContext) -> SeriesValue:
    """q-exponential sum w^n q^{(n^2-n)/4} / (q;q)_n.

    With w = i z this splits as C_q(z) + i S_q(z).
    """
    if w == 0:
        return SeriesValue(mp.mpf(1), 1, mp.mpf(1), mp.mpf(1))
    q = ctx.q
    lw = log2_abs(w)
    lq = math.log2(q)

    def log2_ratio(n):
        return lw + 0.5 * n * lq - _log1m_qpow(lq, n + 1)

    def make_terms():
        ww = mp.mpmathify(w)
        qm = mp.mpf(q)

        def ratios():
            h = mp.sqrt(qm)
            p = mp.mpf(1)
            a = qm
            while True:
                yield ww * p / (1 - a)
                p *= h
                a *= qm

        return mp.mpf(1), ratios()

    return sum_series(
        make_terms,
        log2_ratio,
        base_bits=_base_bits(ctx),
        max_terms=ctx.max_terms,
        guard_bits=ctx.guard_bits,
    )


def jackson_bessel3(nu, z, q, ctx: QContext) -> SeriesValue:
    """Hahn-Exton (third Jackson) q-Bessel function J_nu^(3)(z; q).

    z^nu (q^{nu+1};q)_inf/(q;q)_inf * 1phi1(0; q^{nu+1}; q, q z^2), with
    1phi1(0; b; q, x) = sum (-1)^n q^{n(n-1)/2} x^n / ((b;q)_n (q;q)_n).
    ``q`` is the base of the function and may differ from ``ctx.q``.
    Noninteger orders need z > 0 (principal branch of z^nu).
    """
    nu = mp.mpmathify(nu)
    z = mp.mpmathify(z)
    qf = float(q)
    if not 0 < qf < 1:
        raise QDomainError(f"q must lie in (0, 1), got {q!r}")
    integer_order = mp.isint(nu)
    if not integer_order and (isinstance(z, mp.mpc) or z <= 0):
        raise QDomainError("noninteger order requires real z > 0")
    lq = math.log2(qf)
    nuf = float(nu)
    lx = lq + 2 * log2_abs(z) if z else -math.inf

    def log2_ratio(n):
        b = abs(1 - qf ** (nuf + 1 + n))
        return n * lq + lx - math.log2(max(b, 1e-300)) - _log1m_qpow(lq, n + 1)

    def make_terms():
        qm = mp.mpmathify(q)
        b = qm ** (nu + 1)
        x = qm * z * z

        def ratios():
            p = mp.mpf(1)
            bn = b
            a = qm
            while True:
                den = (1 - bn) * (1 - a)
                if den == 0:
                    raise QDomainError("(q^{nu+1}; q)_n vanishes for this order")
                yield -p * x / den
                p *= qm
                bn *= qm
                a *= qm

        return mp.mpf(1), ratios()

    if z == 0:
        return SeriesValue(mp.mpf(1) if nu == 0 else mp.mpf(0), 1, mp.mpf(1), mp.mpf(1))
    series = sum_series(
        make_terms,
        log2_ratio,
        base_bits=_base_bits(ctx),
        max_terms=ctx.max_terms,
        guard_bits=ctx.guard_bits,
    )
    with mp.workprec(_base_bits(ctx) + ctx.guard_bits):
        qm = mp.mpmathify(q)
        pref = mp.power(z, nu) * q_pochhammer(qm ** (nu + 1), qm, math.inf, ctx)
        pref /= q_pochhammer(qm, qm, math.inf, ctx)
        value = pref * series.value
        peak = abs(pref) * series.peak_term_magnitude
    return SeriesValue(value, series.terms_used, peak, series.cancellation_ratio)


def _omega(zt, k):
    if not 1 <= k <= zt.K:
        raise IndexError(f"zero index {k} outside 1..{zt.K}")
    return zt.omegas[k - 1]


def theorem_d_sq(k, n, zt, ctx: QContext):
    """S_q(q^{1+n} ω_k) from S_q(q ω_k) through the finite polynomial in ω_k^2.

    S_q(q^{1+n}ω) = S_q(qω) sum_{j<=n} (-1)^j q^{j(j+1/2)}
                    (q^{1+n-j};q)_{2j+1}/(q;q)_{2j+1} ω^{2j}.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    w = _omega(zt, k)
    qm = ctx.mpq()
    w2 = w * w
    total = mp.mpf(0)
    for j in range(n + 1):
        num = q_pochhammer(qm ** (1 + n - j), qm, 2 * j + 1)
        den = q_pochhammer(qm, qm, 2 * j + 1)
        total += (-1) ** j * qm ** (j * (j + mp.mpf(1) / 2)) * num / den * w2**j
    return sq(qm * w, ctx).value * total


def theorem_d_cq(k, n, zt, ctx: QContext):
    """C_q(q^{1/2+n} ω_k) from C_q(q^{1/2} ω_k) through the finite polynomial in ω_k^2."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    w = _omega(zt, k)
    qm = ctx.mpq()
    w2 = w * w
    total = mp.mpf(0)
    for j in range(n + 1):
        num = q_pochhammer(qm ** (1 + n - j), qm, 2 * j)
        den = q_pochhammer(qm, qm, 2 * j)
        total += (-1) ** j * qm ** (j * (j - mp.mpf(1) / 2)) * num / den * w2**j
    return cq(mp.sqrt(qm) * w, ctx).value * total
