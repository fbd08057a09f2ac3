"""Hölder conditions, decay diagnostics and convergence experiments.

Everything here consumes the immutable objects built elsewhere (grid
functions, zero tables, Fourier series) and returns small report objects that
serialize to JSON. Convergence claims are always finite-K error measurements;
nothing here tries to decide a limit.
"""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import mpmath as mp
import numpy as np

from ._series import CompensatedSum
from .exceptions import PreconditionError
from .fourier import FourierSeries, mode_integrals, mu_k
from .qcore import GridFunction, QContext, q_pochhammer
from .qtrig import cq, sq
from .zeros import ZeroTable, extract_Rk, extract_Sk

__all__ = [
    "HolderReport",
    "DecayReport",
    "OrthogonalityReport",
    "EnergyReport",
    "AsymptoticsReport",
    "holder_differences",
    "check_holder",
    "estimate_holder",
    "decay_diagnostics",
    "sup_error_on_grid",
    "error_curve_on_grid",
    "pointwise_error_curve",
    "offgrid_error",
    "offgrid_error_curve",
    "verify_orthogonality",
    "lemma_bound_B",
    "energy_check",
    "asymptotic_factors",
    "curve_to_csv",
]


def _num(x):
    """JSON-safe float (inf/nan become strings so the output stays strict JSON)."""
    if x is None:
        return None
    v = float(x)
    if math.isfinite(v):
        return v
    return str(v)


class _Report:
    def to_dict(self):
        return _jsonable(asdict(self))

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str, int)) or obj is None:
        return obj
    if isinstance(obj, (mp.mpc, complex)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    return _num(obj)


# --------------------------------------------------------------------------
# Hölder conditions on the grid


@dataclass(frozen=True)
class HolderReport(_Report):
    """Outcome of a q-linear Hölder check or fit.

    ``satisfied`` refers to the supplied (``M``, ``lam``) pair; it is None when
    only an estimate was requested. ``lambda_est`` is ``inf`` when every
    difference from ``n0`` on is exactly zero.
    """

    lambda_est: Optional[float]
    M_est: Optional[float]
    n0: int
    satisfied: Optional[bool]
    M: Optional[float] = None
    lam: Optional[float] = None
    zero_gap_indices: tuple = ()
    jump_indices: tuple = ()
    limits_match: Optional[bool] = None
    exceeds_half: Optional[bool] = None
    fit_residual: Optional[float] = None
    n_fit_points: int = 0


def holder_differences(f: GridFunction, n0=0):
    """[(branch, n, |f(±q^{n-1}) - f(±q^n)|)] for max(n0, 1) <= n <= depth-1.

    n = 0 would need f(±q^{-1}), which is not a grid value.
    """
    out = []
    for branch, vals in (("+", f.pos_values), ("-", f.neg_values)):
        for n in range(max(int(n0), 1), f.depth):
            out.append((branch, n, abs(mp.mpmathify(vals[n - 1]) - mp.mpmathify(vals[n]))))
    return out


def _limits_match(f, tol):
    if not f.has_limits:
        return None
    return bool(abs(mp.mpf(f.limit_0_plus) - mp.mpf(f.limit_0_minus)) <= tol)


def _holds(diffs, q, M, lam):
    qm = mp.mpf(q)
    M = mp.mpmathify(M)
    lam = mp.mpmathify(lam)
    # a few ulps of slack so exact equality cases survive rounding of the samples
    slack = 1 + mp.ldexp(1, -mp.mp.prec + 8)
    return all(d <= M * qm ** (lam * n) * slack for _, n, d in diffs)


def _holder_fit(diffs, q):
    """LS fit of log Δ_n = log M + λ n log q, with jump rejection."""
    pts = [(b, n, d) for b, n, d in diffs if d != 0]
    if len(pts) < 3:
        return None
    lq = math.log(q)
    x = np.array([n * lq for _, n, _ in pts])
    y = np.array([float(mp.log(d)) for _, _, d in pts])
    keep = np.ones(len(pts), dtype=bool)
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    med = np.median(resid)
    mad = 1.4826 * np.median(np.abs(resid - med))
    # an isolated jump sits far above the power-law line
    jumps = np.abs(resid - med) > max(8 * mad, math.log(4.0))
    if jumps.any() and (~jumps).sum() >= 3:
        keep = ~jumps
        slope, icpt = np.polyfit(x[keep], y[keep], 1)
        resid = y - (slope * x + icpt)
    lam = float(slope)
    m_env = max(float(mp.log(d)) - lam * n * lq for (_, n, d), k in zip(pts, keep) if k)
    rms = float(np.sqrt(np.mean(resid[keep] ** 2)))
    jump_idx = tuple((b, n) for (b, n, _), j in zip(pts, keep) if not j)
    return lam, math.exp(m_env), rms, jump_idx, int(keep.sum())


def check_holder(f: GridFunction, M, lam, n0=0, limit_tol=1e-12) -> HolderReport:
    """Does |f(±q^{n-1}) - f(±q^n)| <= M q^{λn} hold for n0 <= n <= depth-1?

    n0 = 0 is the global condition, n0 > 0 its "almost" variant. The fitted
    order is attached when at least three differences are nonzero.
    """
    if f.depth < n0 + 2:
        raise PreconditionError(f"grid depth {f.depth} too small for n0={n0}")
    diffs = holder_differences(f, n0)
    fit = _holder_fit(diffs, f.q)
    zeros = tuple((b, n) for b, n, d in diffs if d == 0)
    lam_est = M_est = rms = None
    jumps, used = (), 0
    if fit is not None:
        lam_est, M_est, rms, jumps, used = fit
    elif not any(d for _, _, d in diffs):
        lam_est, M_est = math.inf, 0.0
    return HolderReport(
        lambda_est=lam_est,
        M_est=M_est,
        n0=int(n0),
        satisfied=_holds(diffs, f.q, M, lam),
        M=float(M),
        lam=float(lam),
        zero_gap_indices=zeros,
        jump_indices=jumps,
        limits_match=_limits_match(f, limit_tol),
        exceeds_half=None if lam_est is None else lam_est > 0.5,
        fit_residual=rms,
        n_fit_points=used,
    )


def estimate_holder(f: GridFunction, n0=0, limit_tol=1e-12) -> HolderReport:
    """Fit the Hölder order and constant from the grid differences.

    Zero differences are left out of the fit (they only help the bound).
    With every difference zero the order is reported as ``inf``; with one
    or two nonzero differences there is nothing to fit.
    """
    diffs = holder_differences(f, n0)
    zeros = tuple((b, n) for b, n, d in diffs if d == 0)
    if not any(d for _, _, d in diffs):
        return HolderReport(
            lambda_est=math.inf,
            M_est=0.0,
            n0=max(int(n0), 1),
            satisfied=True,
            zero_gap_indices=zeros,
            limits_match=_limits_match(f, limit_tol),
            exceeds_half=True,
        )
    fit = _holder_fit(diffs, f.q)
    if fit is None:
        raise PreconditionError("at least 3 nonzero grid differences are needed to fit an order")
    lam, M_est, rms, jumps, used = fit
    return HolderReport(
        lambda_est=lam,
        M_est=M_est,
        n0=int(n0),
        satisfied=_holds(diffs, f.q, M_est, lam),
        M=M_est,
        lam=lam,
        zero_gap_indices=zeros,
        jump_indices=jumps,
        limits_match=_limits_match(f, limit_tol),
        exceeds_half=lam > 0.5,
        fit_residual=rms,
        n_fit_points=used,
    )


# --------------------------------------------------------------------------
# Decay of the coefficient integrals


@dataclass(frozen=True)
class DecayReport(_Report):
    """Raw mode integrals and the linear/quadratic exponent fits.

    ``c_lin`` models |I_k| ~ A q^{ck}; ``c_quad`` models |I_k^C| ~ A q^{(k+c)^2}
    and |I_k^S| ~ A q^{(k+c-1/2)^2}. Each is the smaller of the cosine and
    sine family fits, over modes ``k >= k_fit_from``.
    """

    q: float
    ks: tuple
    I_C: tuple
    I_S: tuple
    c_lin: Optional[float]
    c_quad: Optional[float]
    c_lin_by_family: dict
    c_quad_by_family: dict
    residual_lin: dict
    residual_quad: dict
    excluded: tuple
    k_fit_from: int
    c_margin: float
    c_lin_gt_1: bool
    c_quad_gt_0: bool
    fit_available: bool


def _wls(x, y, w):
    sw = np.sqrt(w)
    A = np.vstack([x, np.ones_like(x)]).T * sw[:, None]
    coef, *_ = np.linalg.lstsq(A, y * sw, rcond=None)
    resid = y - (coef[0] * x + coef[1])
    return float(coef[0]), float(np.sqrt(np.sum(w * resid**2) / np.sum(w)))


def decay_diagnostics(
    f, zt: ZeroTable, ctx: QContext, K=None, k_fit_from=None, c_margin=0.05
) -> DecayReport:
    """Fit the decay of ∫ f C_q(q^{1/2}ω_k t) d_qt and ∫ f S_q(qω_k t) d_qt in k.

    Integrals that vanish identically (parity) or fall below the rounding
    floor of their own quadrature are excluded and listed. Points within 32
    bits of that floor are down-weighted linearly. The fits use the upper
    half of the modes by default, since the statements are asymptotic;
    ``c_margin`` is how far above 1 (resp. 0) a fitted exponent must sit
    before the corresponding hypothesis counts as met.
    """
    K = zt.K if K is None else int(K)
    if K < 4 or K > zt.K:
        raise PreconditionError("decay diagnostics need 4 <= K <= zero-table size")
    k_fit_from = max(1, K // 2) if k_fit_from is None else int(k_fit_from)
    lq = math.log(ctx.q)
    ks, ics, iss, excluded = [], [], [], []
    fam = {"C": [], "S": []}
    for k in range(1, K + 1):
        ic, is_, info = mode_integrals(f, k, zt, ctx, full_output=True)
        ks.append(k)
        ics.append(ic)
        iss.append(is_)
        for name, val, peak in (("C", ic, info["peak_c"]), ("S", is_, info["peak_s"])):
            if val == 0:
                excluded.append({"k": k, "family": name, "reason": "zero"})
                continue
            floor = peak * mp.ldexp(1, -ctx.target_bits)
            above = float(mp.log(abs(val) / floor, 2)) if floor else math.inf
            if above <= 0:
                excluded.append({"k": k, "family": name, "reason": "below_noise_floor"})
                continue
            fam[name].append((k, float(mp.log(abs(val))) / lq, min(1.0, above / 32)))

    c_lin, c_quad, r_lin, r_quad = {}, {}, {}, {}
    for name, rows in fam.items():
        tail = [r for r in rows if r[0] >= k_fit_from]
        use = tail if len(tail) >= 3 else rows
        if len(use) < 3:
            continue
        x = np.array([r[0] for r in use], dtype=float)
        y = np.array([r[1] for r in use])
        w = np.array([r[2] for r in use])
        c_lin[name], r_lin[name] = _wls(x, y, w)
        slope, r_quad[name] = _wls(x, y - x**2, w)
        c_quad[name] = slope / 2 + (0.5 if name == "S" else 0.0)
    lin = min(c_lin.values()) if c_lin else None
    quad = min(c_quad.values()) if c_quad else None
    return DecayReport(
        q=ctx.q,
        ks=tuple(ks),
        I_C=tuple(ics),
        I_S=tuple(iss),
        c_lin=lin,
        c_quad=quad,
        c_lin_by_family=c_lin,
        c_quad_by_family=c_quad,
        residual_lin=r_lin,
        residual_quad=r_quad,
        excluded=tuple(excluded),
        k_fit_from=k_fit_from,
        c_margin=c_margin,
        c_lin_gt_1=lin is not None and lin > 1 + c_margin,
        c_quad_gt_0=quad is not None and quad > c_margin,
        fit_available=bool(c_lin),
    )


# --------------------------------------------------------------------------
# Reconstruction errors


def _grid_points(q, n_points, prec):
    with mp.workprec(prec):
        qm = mp.mpf(q)
        return [qm**n for n in range(n_points)]


def _cumulative_sums(fs: FourierSeries, z, ctx: QContext, Ks):
    """Partial sums at z for each K in Ks (ascending), in one pass over modes."""
    Kmax = max(Ks)
    if Kmax > fs.K:
        raise ValueError(f"K_used must lie in 0..{fs.K}")
    radius = max(1.0, float(abs(mp.mpmathify(z))))
    wanted = set(Ks)
    out = {}
    with ctx.precision(Kmax, radius):
        q = ctx.mpq()
        r = mp.sqrt(q)
        z = mp.mpmathify(z)
        acc = CompensatedSum()
        acc.add(fs.a0 / 2)
        if 0 in wanted:
            out[0] = acc.value
        for k in range(1, Kmax + 1):
            w = fs.zeros.omega(k)
            ak, bk = fs.a[k - 1], fs.b[k - 1]
            if ak:
                acc.add(ak * cq(r * w * z, ctx).value)
            if bk:
                acc.add(bk * sq(q * w * z, ctx).value)
            if k in wanted:
                out[k] = acc.value
    return out


def error_curve_on_grid(fs: FourierSeries, f: GridFunction, Ks: Sequence[int], N_points, ctx: QContext):
    """[(K, sup error over ±q^{n-1}, n <= N_points)] for each K in Ks."""
    if N_points > f.depth:
        raise PreconditionError("N_points exceeds the grid depth")
    Ks = sorted(set(int(k) for k in Ks))
    sup = {K: mp.mpf(0) for K in Ks}
    xs = _grid_points(f.q, N_points, ctx.prec_for(max(Ks)))
    for n, x in enumerate(xs):
        for sign, vals in ((1, f.pos_values), (-1, f.neg_values)):
            sums = _cumulative_sums(fs, sign * x, ctx, Ks)
            for K in Ks:
                sup[K] = max(sup[K], abs(sums[K] - vals[n]))
    return [(K, sup[K]) for K in Ks]


def sup_error_on_grid(fs: FourierSeries, f: GridFunction, K_used, N_points, ctx: QContext):
    """max over x in {±q^{n-1}: n <= N_points} of |partial sum(x) - f(x)|."""
    return error_curve_on_grid(fs, f, [K_used], N_points, ctx)[0][1]


def pointwise_error_curve(fs: FourierSeries, target: Callable, points, Ks, ctx: QContext):
    """{point: [(K, |partial sum - target|)]} for real or complex points."""
    Ks = sorted(set(int(k) for k in Ks))
    out = {}
    for z in points:
        sums = _cumulative_sums(fs, z, ctx, Ks)
        with ctx.precision(max(Ks), max(1.0, float(abs(mp.mpmathify(z))))):
            t = target(mp.mpmathify(z))
            out[z] = [(K, abs(sums[K] - t)) for K in Ks]
    return out


def offgrid_error(fs: FourierSeries, target: Callable, points, K_used, ctx: QContext, sigma=None):
    """Per-point |partial sum - target| away from the grid.

    ``sigma`` (optional) only annotates whether |z| < q^{-σ}; it never
    filters. A mode that overflows is reported per point instead of raising.
    """
    rows = []
    bound = None if sigma is None else ctx.q ** (-float(sigma))
    for z in points:
        row = {"z": z, "K_used": int(K_used)}
        if bound is not None:
            row["inside_disc"] = bool(abs(complex(z)) < bound)
        try:
            s = _cumulative_sums(fs, z, ctx, [K_used])[K_used]
            with ctx.precision(K_used, max(1.0, float(abs(mp.mpmathify(z))))):
                t = target(mp.mpmathify(z))
                row.update(value=s, target=t, error=abs(s - t), overflow=False)
        except OverflowError as exc:
            row.update(value=None, target=None, error=None, overflow=True, message=str(exc))
        rows.append(row)
    return rows


def offgrid_error_curve(fs: FourierSeries, target: Callable, points, Ks, ctx: QContext):
    return pointwise_error_curve(fs, target, points, Ks, ctx)


def curve_to_csv(curve, header=("K", "error")):
    """Two-column CSV of an error-vs-K curve."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for K, err in curve:
        w.writerow([K, mp.nstr(err, 17) if err is not None else ""])
    return buf.getvalue()


# --------------------------------------------------------------------------
# Orthogonality, the bound B, energy


@dataclass(frozen=True)
class OrthogonalityReport(_Report):
    """Residual matrices: computed integral minus its expected value.

    ``CC`` and ``CS`` are indexed by k, m = 0..kmax (mode 0 is the constant
    function); ``SS`` by k, m = 1..kmax.
    """

    q: float
    kmax: int
    mu: tuple
    CC: tuple
    SS: tuple
    CS: tuple
    max_mu: float
    max_offdiag: float
    max_diag_rel_C: float
    max_diag_rel_S: float
    zero_zero_error: float
    max_cross: float


def verify_orthogonality(zt: ZeroTable, kmax, ctx: QContext) -> OrthogonalityReport:
    """Integrate every pair of basis functions over [-1, 1] on ctx.grid_depth nodes."""
    if kmax > zt.K:
        raise PreconditionError(f"kmax={kmax} exceeds zero table size {zt.K}")
    with ctx.precision(kmax):
        q = ctx.mpq()
        r = mp.sqrt(q)
        nodes = [q**n for n in range(ctx.grid_depth)]
        # values at +x and at -x, each evaluated directly (no parity shortcut)
        cos_vals = [([mp.mpf(1)] * len(nodes), [mp.mpf(1)] * len(nodes))]
        sin_vals = [None]
        for k in range(1, kmax + 1):
            w = zt.omega(k)
            cos_vals.append(tuple([cq(s * r * w * x, ctx).value for x in nodes] for s in (1, -1)))
            sin_vals.append(tuple([sq(s * q * w * x, ctx).value for x in nodes] for s in (1, -1)))
        mus = [None] + [mu_k(zt, k, ctx) for k in range(1, kmax + 1)]

        def integral(u, v):
            acc = CompensatedSum()
            for n, x in enumerate(nodes):
                acc.add(u[0][n] * v[0][n] * x)
                acc.add(u[1][n] * v[1][n] * x)
            return (1 - q) * acc.value

        size = kmax + 1
        CC = [[None] * size for _ in range(size)]
        SS = [[None] * size for _ in range(size)]
        CS = [[None] * size for _ in range(size)]
        for k in range(size):
            for m in range(size):
                val = integral(cos_vals[k], cos_vals[m])
                want = 2 if k == m == 0 else (mus[k] if k == m else 0)
                CC[k][m] = val - want
                if k >= 1 and m >= 1:
                    val = integral(sin_vals[k], sin_vals[m])
                    SS[k][m] = val - (mus[k] / r if k == m else 0)
                if m >= 1:
                    CS[k][m] = integral(cos_vals[k], sin_vals[m])
        max_mu = max(abs(m) for m in mus[1:]) if kmax else mp.mpf(0)
        offd = [abs(CC[k][m]) for k in range(size) for m in range(size) if k != m]
        offd += [abs(SS[k][m]) for k in range(1, size) for m in range(1, size) if k != m]
        diag_c = [abs(CC[k][k] / mus[k]) for k in range(1, size)]
        diag_s = [abs(SS[k][k] * r / mus[k]) for k in range(1, size)]
        cross = [abs(CS[k][m]) for k in range(size) for m in range(1, size)]
        return OrthogonalityReport(
            q=ctx.q,
            kmax=kmax,
            mu=tuple(mus[1:]),
            CC=tuple(tuple(row) for row in CC),
            SS=tuple(tuple(row[1:]) for row in SS[1:]),
            CS=tuple(tuple(row[1:]) for row in CS),
            max_mu=max_mu,
            max_offdiag=max(offd) if offd else mp.mpf(0),
            max_diag_rel_C=max(diag_c) if diag_c else mp.mpf(0),
            max_diag_rel_S=max(diag_s) if diag_s else mp.mpf(0),
            zero_zero_error=abs(CC[0][0]),
            max_cross=max(cross) if cross else mp.mpf(0),
        )


def lemma_bound_B(q, ctx: Optional[QContext] = None):
    """B = (2/(q^2;q)_inf) sum_{m>=1} m q^{(m-1)^2}, a k-independent bound on |S_k|."""
    ctx = ctx or QContext(q)
    with mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits)):
        qm = mp.mpf(q)
        tol = mp.mpf(ctx.series_tol)
        acc = CompensatedSum()
        for m in range(1, ctx.max_terms + 1):
            t = m * qm ** ((m - 1) ** 2)
            acc.add(t)
            if m > 1 and t <= tol * acc.value:
                break
        return 2 / q_pochhammer(qm * qm, qm, math.inf, ctx) * acc.value


@dataclass(frozen=True)
class EnergyReport(_Report):
    """``bound`` is 2(1-q)M^2/(1-q^{2λ-1}); ``bound_exact`` is what the
    definitions give once the factor 1/(q^{1/2}-q^{-1/2})^2 = q/(1-q)^2 of the
    squared quotient is kept (and, for "plus", the index shift of the
    differences)."""

    variant: str
    lhs: float
    bound: float
    bound_exact: float
    M: float
    lam: float
    ok: bool
    ok_exact: bool


def energy_check(f, M, lam, ctx: QContext, variant="plus") -> EnergyReport:
    """Compare ∫ (δf(q^{±1/2}t)/δt)^2 d_qt with 2(1-q)M^2/(1-q^{2λ-1}).

    The left side is computed from the definitions on the grid. ``variant``
    "plus" uses f(q^{1/2}t) and only needs grid values; "minus" uses
    f(q^{-1/2}t) and needs f at ±1/q, so ``f`` must then be callable.
    """
    if not lam > 0.5:
        raise PreconditionError("the energy bound needs λ > 1/2")
    if variant not in ("plus", "minus"):
        raise ValueError("variant must be 'plus' or 'minus'")
    with mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits)):
        q = ctx.mpq()
        r = mp.sqrt(q)
        c = r - 1 / r
        if isinstance(f, GridFunction):
            if variant == "minus":
                raise PreconditionError("the 'minus' variant needs f(±1/q); pass a callable")
            depth = min(f.depth, ctx.grid_depth)

            def val(sign, n):  # f(sign * q^n)
                return (f.pos_values if sign > 0 else f.neg_values)[n]

            n_range = range(depth - 1)
        else:
            depth = ctx.grid_depth

            def val(sign, n):
                return f(sign * q**n)

            n_range = range(depth - 1) if variant == "plus" else range(depth)
        acc = CompensatedSum()
        for n in n_range:
            t = q**n
            for s in (1, -1):
                if variant == "plus":
                    d = (val(s, n + 1) - val(s, n)) / (s * t * c)
                else:
                    d = (val(s, n) - val(s, n - 1)) / (s * t * c)
                acc.add(d * d * t)
        lhs = (1 - q) * acc.value
        M2, lam = mp.mpf(M) ** 2, mp.mpf(lam)
        geo = 1 - q ** (2 * lam - 1)
        bound = 2 * (1 - q) * M2 / geo
        exact = 2 * q * M2 / ((1 - q) * geo)
        if variant == "plus":
            exact *= q ** (2 * lam)
        slack = 1 + mp.mpf("1e-20")  # power laws meet the exact bound with equality
        ok, ok_exact = lhs <= bound * slack, lhs <= exact * slack
    return EnergyReport(variant, float(lhs), float(bound), float(exact), float(M), float(lam), bool(ok), bool(ok_exact))


# --------------------------------------------------------------------------
# Asymptotic factors at the zeros


@dataclass(frozen=True)
class AsymptoticsReport(_Report):
    q: float
    S_k: tuple
    R_k: tuple
    B: float
    R_bound: float
    max_abs_S: float
    max_abs_R: float
    min_abs_S: float
    min_abs_R: float
    S_ok: bool
    R_ok: bool
    positive: bool
    guarantees: dict = field(default_factory=dict)


def asymptotic_factors(zt: ZeroTable, ctx: QContext, kmax=None) -> AsymptoticsReport:
    """S_k and R_k over the table against B and 2/((1-q)(q;q)_inf)."""
    kmax = zt.K if kmax is None else int(kmax)
    S = [extract_Sk(zt, k, ctx) for k in range(1, kmax + 1)]
    R = [extract_Rk(zt, k, ctx) for k in range(1, kmax + 1)]
    B = lemma_bound_B(ctx.q, ctx)
    with mp.workprec(max(mp.mp.prec, ctx.target_bits + ctx.guard_bits)):
        qm = ctx.mpq()
        R_bound = 2 / ((1 - qm) * q_pochhammer(qm, qm, math.inf, ctx))
    aS = [abs(s) for s in S]
    aR = [abs(x) for x in R]
    return AsymptoticsReport(
        q=ctx.q,
        S_k=tuple(S),
        R_k=tuple(R),
        B=float(B),
        R_bound=float(R_bound),
        max_abs_S=float(max(aS)),
        max_abs_R=float(max(aR)),
        min_abs_S=float(min(aS)),
        min_abs_R=float(min(aR)),
        S_ok=bool(max(aS) <= B),
        R_ok=bool(max(aR) < R_bound),
        positive=bool(min(aS) > 0 and min(aR) > 0),
        guarantees=ctx.guarantees,
    )
