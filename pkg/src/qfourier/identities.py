"""Numerical checks of the structural identities of the q-trigonometric functions.

Each check returns a :class:`CheckResult` holding the worst scaled residual,
the tolerance it was judged against and per-point details. The CLI's
``verify`` command is a thin loop over these.
"""

import json
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .analysis import _jsonable, asymptotic_factors, verify_orthogonality
from .qcore import QContext, delta_quotient, q_pochhammer, verify_ibp
from .qtrig import cq, exp_q, jackson_bessel3, sq, theorem_d_cq, theorem_d_sq
from .zeros import ZeroTable

__all__ = [
    "CheckResult",
    "sample_points",
    "check_difference_relations",
    "check_eigen_relation",
    "check_zero_reciprocity",
    "check_bessel_connection",
    "check_theorem_d",
    "check_ibp",
    "check_orthogonality",
    "check_asymptotics",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    details: list = field(default_factory=list)

    def to_dict(self):
        return _jsonable(
            {
                "name": self.name,
                "max_residual": self.max_residual,
                "tolerance": self.tolerance,
                "passed": self.passed,
                "details": self.details,
            }
        )

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _result(name, residuals, tol, details):
    worst = max(residuals) if residuals else 0.0
    return CheckResult(name, float(worst), float(tol), bool(worst <= tol), details)


def sample_points(n=20, lo=-1.5, hi=1.5, seed=0, exclude_zero=True):
    """Reproducible uniform sample; exact zeros are redrawn when excluded."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        x = float(rng.uniform(lo, hi))
        if exclude_zero and x == 0.0:
            continue
        pts.append(x)
    return pts


def _work(ctx):
    return mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits))


def check_difference_relations(ctx: QContext, points=None, omegas=(1.0, 2.5), tol=1e-10):
    """δC_q(ωz)/δz = -ω/(1-q) S_q(ωz) and δS_q(ωz)/δz = ω/(1-q) C_q(ωz).

    Residuals are divided by the magnitude of the quotient's numerator terms
    over the denominator plus that of the right side.
    """
    points = sample_points() if points is None else points
    res, details = [], []
    with _work(ctx):
        q = ctx.mpq()
        r = mp.sqrt(q)
        for om in omegas:
            om = mp.mpf(om)
            for z in points:
                z = mp.mpf(z)
                den = abs(z * (r - 1 / r))
                for name, f, g, sgn in (("C", cq, sq, -1), ("S", sq, cq, 1)):
                    lhs = delta_quotient(lambda x: f(om * x, ctx).value, z, q)
                    rhs = sgn * om / (1 - q) * g(om * z, ctx).value
                    scale = (abs(f(r * om * z, ctx).value) + abs(f(om * z / r, ctx).value)) / den + abs(rhs)
                    rel = abs(lhs - rhs) / scale
                    res.append(rel)
                    details.append({"relation": name, "omega": om, "z": z, "scaled_residual": rel})
    return _result("difference_relations", res, tol, details)


def check_eigen_relation(ctx: QContext, points=None, lams=(0.7, -1.3), tol=1e-10):
    """δ exp_q(λ(1-q)x)/δx = λ exp_q(λ(1-q)x) for x != 0."""
    points = sample_points() if points is None else points
    res, details = [], []
    with _work(ctx):
        q = ctx.mpq()
        for lam in lams:
            lam = mp.mpf(lam)

            def f(x):
                return exp_q(lam * (1 - q) * x, ctx).value

            for x in points:
                x = mp.mpf(x)
                lhs = delta_quotient(f, x, q)
                rhs = lam * f(x)
                rel = abs(lhs - rhs) / max(abs(rhs), mp.mpf(ctx.series_tol))
                res.append(rel)
                details.append({"lambda": lam, "x": x, "scaled_residual": rel})
    return _result("eigen_relation", res, tol, details)


def check_zero_reciprocity(zt: ZeroTable, ctx: QContext, kmax=None, tol=1e-8):
    """C_q(q^{±1/2} ω_k) C_q(ω_k) = 1 at the zeros of S_q."""
    kmax = zt.K if kmax is None else int(kmax)
    res, details = [], []
    for k in range(1, kmax + 1):
        with ctx.precision(k):
            q = ctx.mpq()
            r = mp.sqrt(q)
            w = zt.omega(k)
            c = cq(w, ctx).value
            for tag, arg in (("q^{1/2}", r * w), ("q^{-1/2}", w / r)):
                err = abs(cq(arg, ctx).value * c - 1)
                res.append(err)
                details.append({"k": k, "shift": tag, "residual": err})
    return _result("zero_reciprocity", res, tol, details)


def check_bessel_connection(ctx: QContext, points=None, tol=1e-10):
    """C_q and S_q against their expressions through J^(3)_{∓1/2}(·; q^2)."""
    if points is None:
        points = [1.5 * (i + 1) / 10 for i in range(10)]
    res, details = [], []
    with _work(ctx):
        q = ctx.mpq()
        q2 = q * q
        pref = q_pochhammer(q2, q2, math.inf, ctx) / q_pochhammer(q, q2, math.inf, ctx)
        for z in points:
            z = mp.mpf(z)
            if z <= 0:
                raise ValueError("Bessel connection is checked for z > 0")
            jc = jackson_bessel3(-0.5, q ** (-0.75) * z, q2, ctx).value
            js = jackson_bessel3(0.5, q ** (-0.25) * z, q2, ctx).value
            c_b = q ** (-0.375) * pref * mp.sqrt(z) * jc
            s_b = q ** (0.125) * pref * mp.sqrt(z) * js
            c, s = cq(z, ctx).value, sq(z, ctx).value
            for name, a, b in (("C", c, c_b), ("S", s, s_b)):
                rel = abs(a - b) / abs(a)
                res.append(rel)
                details.append({"function": name, "z": z, "relative_error": rel})
    return _result("bessel_connection", res, tol, details)


def check_theorem_d(zt: ZeroTable, ctx: QContext, kmax=6, nmax=10, tol=1e-8):
    """Finite-sum values of S_q(q^{1+n}ω_k), C_q(q^{1/2+n}ω_k) against direct series."""
    res, details = [], []
    for k in range(1, min(kmax, zt.K) + 1):
        with ctx.precision(k):
            q = ctx.mpq()
            w = zt.omega(k)
            for n in range(nmax + 1):
                s_dir = sq(q ** (1 + n) * w, ctx).value
                c_dir = cq(q ** (mp.mpf(1) / 2 + n) * w, ctx).value
                s_rec = theorem_d_sq(k, n, zt, ctx)
                c_rec = theorem_d_cq(k, n, zt, ctx)
                for name, d, rec in (("S", s_dir, s_rec), ("C", c_dir, c_rec)):
                    rel = abs(rec - d) / abs(d)
                    res.append(rel)
                    details.append({"k": k, "n": n, "function": name, "relative_error": rel})
    return _result("theorem_d", res, tol, details)


def _monomial(m):
    return lambda x: mp.mpmathify(x) ** m


def check_ibp(q=0.5, depth=60, pairs=((1, 2), (2, 3)), tol=1e-9, ctx=None):
    """q-integration by parts for monomial pairs, both shift variants."""
    base = ctx or QContext(q)
    ctx = QContext(q, base.series_tol, base.max_terms, depth, base.root_tol, base.guard_bits)
    res, details = [], []
    with _work(ctx):
        for mf, mg in pairs:
            lim_f = (1 if mf == 0 else 0,) * 2
            lim_g = (1 if mg == 0 else 0,) * 2
            for sign in (1, -1):
                r, scale = verify_ibp(
                    _monomial(mf), _monomial(mg), ctx, sign, lim_f, lim_g, full_output=True
                )
                rel = r / scale
                res.append(rel)
                details.append({"f": f"x^{mf}", "g": f"x^{mg}", "sign": sign, "scaled_residual": rel})
    return _result("ibp", res, tol, details)


def check_orthogonality(zt: ZeroTable, ctx: QContext, kmax=8, tol=1e-8, tol_zero=1e-10):
    """Orthogonality relations judged against the acceptance tolerances.

    The worst of: off-diagonal over max|μ_k|, diagonal relative errors, the
    (0,0) entry error scaled by tol/tol_zero, and the cross terms.
    """
    rep = verify_orthogonality(zt, kmax, ctx)
    off = rep.max_offdiag / rep.max_mu
    zero = rep.zero_zero_error * (tol / tol_zero)
    cross = rep.max_cross / rep.max_mu
    parts = [off, rep.max_diag_rel_C, rep.max_diag_rel_S, zero, cross]
    details = [
        {"offdiag_over_max_mu": off},
        {"diag_rel_C": rep.max_diag_rel_C},
        {"diag_rel_S": rep.max_diag_rel_S},
        {"zero_zero_error": rep.zero_zero_error},
        {"cross_over_max_mu": cross},
    ]
    return _result("orthogonality", parts, tol, details)


def check_asymptotics(zt: ZeroTable, ctx: QContext, kmax=None):
    """|S_k| <= B, |R_k| < 2/((1-q)(q;q)_inf), both bounded away from 0."""
    rep = asymptotic_factors(zt, ctx, kmax)
    passed = rep.S_ok and rep.R_ok and rep.positive
    worst = max(rep.max_abs_S / rep.B, rep.max_abs_R / rep.R_bound)
    return CheckResult("asymptotics", worst, 1.0, bool(passed), [rep.to_dict()])
