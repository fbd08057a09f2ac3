"""Term-recurrence series summation with compensated accumulation.

Every power series in this package is summed here. A series is described by
its first term and an iterator of successive term ratios, both produced at the
current mpmath precision. Before summing, the growth of the term magnitudes is
estimated in float log space; the working precision is raised by that amount so
that cancellation between large alternating terms does not eat the result.
"""

import math
import warnings
from dataclasses import dataclass

import mpmath as mp

from .exceptions import NonConvergenceError, PrecisionWarning

# float log-space scans stop this many bits below the running peak
_SCAN_DROP_BITS = 80


class CompensatedSum:
    """Neumaier running sum for mpf values; complex values split into parts."""

    __slots__ = ("_re", "_re_c", "_im", "_im_c", "_complex")

    def __init__(self):
        self._re = mp.mpf(0)
        self._re_c = mp.mpf(0)
        self._im = mp.mpf(0)
        self._im_c = mp.mpf(0)
        self._complex = False

    @staticmethod
    def _step(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    def add(self, x):
        if isinstance(x, mp.mpc):
            self._complex = True
            self._re, self._re_c = self._step(self._re, self._re_c, x.real)
            self._im, self._im_c = self._step(self._im, self._im_c, x.imag)
        else:
            self._re, self._re_c = self._step(self._re, self._re_c, x)

    @property
    def value(self):
        if self._complex:
            return mp.mpc(self._re + self._re_c, self._im + self._im_c)
        return self._re + self._re_c


def compensated_sum(values):
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value


@dataclass(frozen=True)
class SeriesValue:
    """Value of a summed series plus accuracy telemetry.

    ``cancellation_ratio`` is the largest term magnitude over the magnitude of
    the result; its base-2 log is roughly the number of bits lost to
    cancellation.
    """

    value: object
    terms_used: int
    peak_term_magnitude: object
    cancellation_ratio: object

    def __float__(self):
        v = self.value
        if isinstance(v, mp.mpc):
            raise TypeError("complex series value; use complex()")
        return _to_float(v)

    def __complex__(self):
        v = mp.mpc(self.value)
        return complex(_to_float(v.real), _to_float(v.imag))


def _to_float(x):
    if x and abs(x) > mp.mpf(1.7976931348623157e308):
        raise OverflowError(f"value ~ 2^{int(mp.log(abs(x), 2))} exceeds the float range")
    return float(x)


def log2_abs(x):
    """log2|x| for any mpmath/python number; -inf at zero."""
    if not x:
        return -math.inf
    return float(mp.log(abs(mp.mpmathify(x)), 2))


_MAX_PASSES = 6


def log_growth(log2_ratio, limit_terms, drop_bits=_SCAN_DROP_BITS):
    """Scan log2|t_n/t_0| in floats; return (peak growth in bits, peak index)."""
    level = 0.0
    peak = 0.0
    n_peak = 0
    for n in range(limit_terms):
        level += log2_ratio(n)
        if level > peak:
            peak = level
            n_peak = n + 1
        elif n + 1 > 2 * n_peak + 4 and level < peak - drop_bits:
            break
    return peak, n_peak


def sum_series(make_terms, log2_ratio, *, base_bits, max_terms, guard_bits=32, single_pass=False):
    """Sum a series given by ``make_terms() -> (first, ratio_iterator)``.

    ``log2_ratio(n)`` is a float estimate of log2|t_{n+1}/t_n| used to size the
    working precision before summing. A second pass at higher precision runs
    when the observed cancellation exceeds the estimate. With ``single_pass``
    the result is only accurate to ~2^-base_bits of the peak term, which is
    what a Newton step near a zero needs.
    """
    growth, _ = log_growth(log2_ratio, max_terms)
    prec = base_bits + int(math.ceil(growth)) + guard_bits
    result = _sum_at(make_terms, prec, base_bits, max_terms)
    if single_pass or not result.value:
        return result
    # A noisy first value underestimates the cancellation, so repeat until
    # the working precision covers what the last pass observed.
    for _ in range(_MAX_PASSES):
        lost = log2_abs(result.cancellation_ratio)
        if lost + guard_bits // 2 <= prec - base_bits:
            return result
        prec = base_bits + int(math.ceil(lost)) + guard_bits
        result = _sum_at(make_terms, prec, base_bits, max_terms)
        if not result.value:
            return result
    lost = log2_abs(result.cancellation_ratio)
    if lost + guard_bits // 2 > prec - base_bits:
        warnings.warn(
            f"cancellation of ~{lost:.0f} bits exceeds working precision {prec}",
            PrecisionWarning,
            stacklevel=3,
        )
    return result


def _sum_at(make_terms, prec, base_bits, max_terms):
    with mp.workprec(prec):
        first, ratios = make_terms()
        acc = CompensatedSum()
        acc.add(first)
        term = first
        peak = abs(first)
        n_peak = 0
        rel = mp.ldexp(1, -base_bits - 8)
        floor = mp.ldexp(1, -prec)
        n = 0
        for r in ratios:
            if n >= max_terms:
                raise NonConvergenceError(
                    f"series not converged after {max_terms} terms", partial=acc.value, terms=n
                )
            term = term * r
            n += 1
            acc.add(term)
            mag = abs(term)
            if mag > peak:
                peak = mag
                n_peak = n
            elif n >= 2 * n_peak:
                total = abs(acc.value)
                if mag <= rel * total or mag <= floor * peak or not mag:
                    break
        value = acc.value
        ratio = peak / abs(value) if value else mp.inf
    return SeriesValue(value, n + 1, peak, ratio)
