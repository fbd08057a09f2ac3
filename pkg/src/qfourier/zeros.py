"""Positive zeros of S_q with certified sign-change brackets.

For q below the root of (1-q^2)^2 - q^3 every zero sits in a known interval
(q^{-k+alpha_k+1/4}, q^{-k+1/4}); the search bisects inside it. Otherwise the
search scans upward from the previous zero on a geometric grid. Each zero is
bisected at modest precision (the adaptive series evaluation keeps every sign
exact for the point as given) and then polished by Newton steps at the full
working precision of the table, staying inside the certified bracket.
"""

import json
import math
from dataclasses import dataclass, field

import mpmath as mp

from .exceptions import QDomainError, ScanFailure
from .qcore import QContext
from .qtrig import cq, sq, sq_prime

__all__ = [
    "ZeroTable",
    "alpha_k",
    "beta0",
    "theorem_a_bracket",
    "find_zeros",
    "safe_scan_start",
    "extract_Sk",
    "extract_Rk",
]

_BISECT_BITS = 96


def _alpha_mp(q, k):
    q = mp.mpf(q)
    x = q ** (2 * k + 1) / (1 - q ** (2 * k))
    if x >= 1:
        raise QDomainError(f"alpha_k undefined for q={float(q)}, k={k}: log argument <= 0")
    return mp.log1p(-x) / (2 * mp.log(q))


def alpha_k(q, k):
    """Exponent correction log(1 - q^{2k+1}/(1-q^{2k})) / (2 log q) of the zero bracket."""
    if not 0 < q < 1:
        raise QDomainError(f"q must lie in (0, 1), got {q!r}")
    if k < 1:
        raise ValueError("k must be a positive integer")
    with mp.workprec(113):
        return float(_alpha_mp(q, k))


def beta0(tol=1e-12):
    """Root in (0, 1) of (1-q^2)^2 - q^3, by bisection."""

    def p(x):
        return (1 - x * x) ** 2 - x**3

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if p(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_BETA0 = beta0(1e-15)


def theorem_a_bracket(q, k):
    """Bracket (lo, hi, valid) with lo = q^{-k+alpha_k+1/4}, hi = q^{-k+1/4}.

    ``valid`` is True only when q < beta0, where the bracket is guaranteed to
    contain the k-th zero; otherwise it is advisory.
    """
    qm = mp.mpf(q)
    a = _alpha_mp(q, k)
    lo = qm ** (-k + a + mp.mpf(1) / 4)
    hi = qm ** (-k + mp.mpf(1) / 4)
    return lo, hi, float(q) < _BETA0


def safe_scan_start(q):
    """A point below the first positive zero of S_q.

    Below sqrt((1-q^2)(1-q^3)/q^{3/2}) the S_q series has terms decreasing in
    magnitude from the first, so S_q stays positive there.
    """
    q = mp.mpf(q)
    return mp.sqrt((1 - q * q) * (1 - q**3) / q ** (mp.mpf(3) / 2))


@dataclass(frozen=True)
class ZeroTable:
    """First K positive zeros of S_q with their certified brackets."""

    q: float
    omegas: tuple
    brackets: tuple
    alpha_k: tuple
    eps_k: tuple
    bracket_source: tuple
    valid: tuple
    prec: int
    warnings: tuple = field(default_factory=tuple)

    @property
    def K(self):
        return len(self.omegas)

    def omega(self, k):
        return self.omegas[k - 1]

    def sign_change_ok(self, k, ctx):
        lo, hi = self.brackets[k - 1]
        with mp.workprec(_BISECT_BITS):
            return _sign(sq(lo, ctx).value) * _sign(sq(hi, ctx).value) < 0

    def to_dict(self):
        entries = []
        for k in range(1, self.K + 1):
            lo, hi = self.brackets[k - 1]
            a = self.alpha_k[k - 1]
            entries.append(
                {
                    "k": k,
                    "omega": float(self.omegas[k - 1]),
                    "omega_digits": mp.nstr(self.omegas[k - 1], 40, min_fixed=-mp.inf, max_fixed=mp.inf),
                    "lo": float(lo),
                    "hi": float(hi),
                    "alpha_k": None if a is None else float(a),
                    "eps_k": float(self.eps_k[k - 1]),
                    "source": self.bracket_source[k - 1],
                    "valid": self.valid[k - 1],
                }
            )
        return {"q": self.q, "prec_bits": self.prec, "entries": entries}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _sign(x):
    return (x > 0) - (x < 0)


def _bisect(lo, hi, s_lo, ctx):
    """Shrink [lo, hi] (sign s_lo at lo) to relative width root_tol."""
    tol = mp.mpf(ctx.root_tol)
    while hi - lo > tol * lo:
        mid = (lo + hi) / 2
        s_mid = _sign(sq(mid, ctx).value)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _polish(lo, hi, ctx, bits):
    """Newton from the bracket midpoint at doubling precision, clamped to [lo, hi].

    Near the zero S_q is evaluated relative to its peak term only, which is
    all a Newton step needs and avoids doubling the precision to resolve a
    value that is itself ~2^-prec.
    """
    with mp.workprec(bits):
        w = (mp.mpf(lo) + mp.mpf(hi)) / 2
    prec = _BISECT_BITS
    while True:
        prec = min(2 * prec, bits)
        with mp.workprec(prec):
            tol = abs(w) * mp.ldexp(1, -prec + 8)
            for _ in range(8):
                v = sq(w, ctx, peak_relative=True).value
                d = sq_prime(w, ctx, peak_relative=True).value
                w_new = min(max(w - v / d, lo), hi)
                step = abs(w_new - w)
                w = w_new
                if step <= tol:
                    break
        if prec == bits:
            return w


def _scan(start, k, ctx):
    """Geometric scan (ratio q^{-1/8}) from ``start`` to the first sign change."""
    r = mp.mpf(ctx.q) ** (-mp.mpf(1) / 8)
    x = start
    s_x = _sign(sq(x, ctx).value)
    for _ in range(ctx.max_terms):
        y = x * r
        s_y = _sign(sq(y, ctx).value)
        if s_y == 0:
            y = y * (1 + mp.ldexp(1, -40))
            s_y = _sign(sq(y, ctx).value)
        if s_x != 0 and s_y != s_x:
            return x, y, s_x
        x, s_x = y, s_y
    raise ScanFailure(k, ctx.max_terms)


def find_zeros(ctx: QContext, K: int) -> ZeroTable:
    """First K positive zeros of S_q.

    Below beta0 each zero is bisected inside its guaranteed bracket. At or
    above beta0 the search scans unconditionally from just above the previous
    zero (from a point where S_q is provably positive for k = 1), since the
    bracket need not hold for small k. Every stored zero keeps a sign-change
    bracket of relative width <= root_tol; omegas are then refined by Newton
    to ``ctx.prec_for(K)`` bits.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    q = ctx.q
    bits = ctx.prec_for(K)
    below_beta0 = q < _BETA0
    omegas, brackets, alphas, epss, sources, valids, warns = [], [], [], [], [], [], []
    prev_hi = None
    with mp.workprec(_BISECT_BITS):
        scan_from = safe_scan_start(q)
    for k in range(1, K + 1):
        with mp.workprec(_BISECT_BITS):
            try:
                a = _alpha_mp(q, k)
            except QDomainError:
                a = None
            bracket = None
            if below_beta0 and a is not None:
                lo, hi, _ = theorem_a_bracket(q, k)
                s_lo = _sign(sq(lo, ctx).value)
                s_hi = _sign(sq(hi, ctx).value)
                if s_lo * s_hi < 0 and (prev_hi is None or lo > prev_hi):
                    bracket = (lo, hi, s_lo)
                    source = "theorem_A"
            if bracket is None:
                start = scan_from if prev_hi is None else prev_hi
                bracket = _scan(start, k, ctx)
                source = "scan"
            lo, hi, s_lo = bracket
            lo, hi = _bisect(lo, hi, s_lo, ctx)
        w = _polish(lo, hi, ctx, bits)
        with mp.workprec(bits):
            eps = mp.log(w) / mp.log(mp.mpf(q)) + k - mp.mpf(1) / 4
            ratio = sq_prime(w, ctx).cancellation_ratio
        if mp.log(ratio, 2) > bits - ctx.target_bits:
            warns.append(f"k={k}: cancellation ratio 2^{float(mp.log(ratio, 2)):.0f} near precision limit")
        omegas.append(w)
        brackets.append((lo, hi))
        alphas.append(None if a is None else float(a))
        epss.append(eps)
        sources.append(source)
        valids.append(below_beta0 and a is not None)
        prev_hi = hi
    return ZeroTable(
        q,
        tuple(omegas),
        tuple(brackets),
        tuple(alphas),
        tuple(epss),
        tuple(sources),
        tuple(valids),
        bits,
        tuple(warns),
    )


def extract_Sk(zt: ZeroTable, k, ctx: QContext):
    """S_k = ((1-q)/2) q^{(k-1/2-eps_k)^2} S_q'(omega_k), in mpmath (no overflow)."""
    w = zt.omega(k)
    with mp.workprec(zt.prec):
        q = ctx.mpq()
        e = zt.eps_k[k - 1]
        return (1 - q) / 2 * q ** ((k - mp.mpf(1) / 2 - e) ** 2) * sq_prime(w, ctx).value


def extract_Rk(zt: ZeroTable, k, ctx: QContext):
    """R_k = q^{(k-eps_k)^2} C_q(omega_k)."""
    w = zt.omega(k)
    with mp.workprec(zt.prec):
        q = ctx.mpq()
        e = zt.eps_k[k - 1]
        return q ** ((k - e) ** 2) * cq(w, ctx).value
