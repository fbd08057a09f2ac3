"""Command-line driver: ``qfourier {zeros,expand,verify,converge}``.

Exit codes: 0 when every gated check passes, 2 when a numerical check fails,
1 for usage or configuration errors. Output goes to ``--output`` (or stdout)
as sorted, indented JSON or as CSV, so identical runs give identical files.

Defaults for the series tolerance can be changed through the environment
variable ``QFOURIER_SERIES_TOL``; a ``--config`` JSON file supplies any option
by its long name (dashes or underscores), and flags given on the command line
win over both.
"""

import argparse
import csv
import dataclasses
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

import mpmath as mp

from . import targets
from .analysis import _jsonable, curve_to_csv, error_curve_on_grid, pointwise_error_curve
from .exceptions import ConfigError, NonConvergenceError, QDomainError, ScanFailure
from .fourier import (
    closed_abs_coeffs,
    closed_monomial_coeffs,
    closed_sign_coeffs,
    closed_step_coeffs,
    compare_series,
    compute_series,
)
from .identities import (
    check_asymptotics,
    check_bessel_connection,
    check_difference_relations,
    check_eigen_relation,
    check_ibp,
    check_orthogonality,
    check_theorem_d,
    check_zero_reciprocity,
)
from .qcore import GridFunction, QContext
from .zeros import find_zeros

log = logging.getLogger("qfourier")

ENV_SERIES_TOL = "QFOURIER_SERIES_TOL"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
DEFAULT_Q = 0.5

TARGETS = ("abs", "sign", "step", "monomial", "grid-file")
SUITES = ("orthogonality", "identities", "theorem-d", "asymptotics", "ibp", "all")


@dataclass
class RunConfig:
    """Every option any subcommand understands; unknown keys are rejected."""

    command: str = ""
    q: Optional[float] = None
    k: Optional[int] = None
    depth: int = 200
    series_tol: Optional[float] = None
    root_tol: float = 1e-15
    guard_bits: int = 32
    target: Optional[str] = None
    m: Optional[int] = None
    a: Optional[float] = None
    grid: Optional[str] = None
    method: str = "auto"
    suite: Optional[str] = None
    mode: Optional[str] = None
    kmax: Optional[int] = None
    ks: Optional[list] = None
    n_points: int = 20
    points: Optional[list] = None
    tol: Optional[float] = None
    no_gate: bool = False
    format: str = "json"
    output: Optional[str] = None
    config: Optional[str] = None
    verbose: bool = False

    @classmethod
    def from_mapping(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        norm = {str(k).replace("-", "_"): v for k, v in data.items()}
        unknown = sorted(set(norm) - names)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {unknown}")
        return cls(**norm)

    def context(self, q=None, depth=None) -> QContext:
        q = q if q is not None else (self.q if self.q is not None else DEFAULT_Q)
        try:
            return QContext(
                q,
                series_tol=self.series_tol,
                grid_depth=self.depth if depth is None else depth,
                root_tol=self.root_tol,
                guard_bits=self.guard_bits,
            )
        except QDomainError as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self):
        if self.q is not None and not 0 < float(self.q) < 1:
            raise ConfigError(f"q must lie in (0, 1), got {self.q}")
        for name in ("k", "kmax", "depth", "n_points"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.series_tol is not None and not self.series_tol > 0:
            raise ConfigError("series_tol must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.method not in ("auto", "closed", "quadrature", "both"):
            raise ConfigError("method must be auto, closed, quadrature or both")


class _Parser(argparse.ArgumentParser):
    # usage errors exit with 1 (argparse's default of 2 is reserved for numerics)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _common(p):
    S = argparse.SUPPRESS
    p.add_argument("--q", type=float, default=S, help="base q in (0, 1)")
    p.add_argument("--depth", type=int, default=S, help="grid depth (nodes per side)")
    p.add_argument("--series-tol", type=float, default=S, help="relative series tolerance")
    p.add_argument("--root-tol", type=float, default=S, help="relative zero bracket width")
    p.add_argument("--guard-bits", type=int, default=S)
    p.add_argument("--format", choices=("json", "csv"), default=S)
    p.add_argument("--output", "-o", default=S, help="output file (default: stdout)")
    p.add_argument("--config", default=S, help="JSON file with option values")
    p.add_argument("--verbose", "-v", action="store_true", default=S)


def _target_args(p):
    S = argparse.SUPPRESS
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--m", type=int, default=S, help="monomial degree")
    p.add_argument("--a", type=float, default=S, help="step location in (0, 1)")
    p.add_argument("--grid", default=S, help="grid-function JSON file (target grid-file)")
    p.add_argument(
        "--method", choices=("auto", "closed", "quadrature", "both"), default=S,
        help="coefficients from closed forms, quadrature, or both (auto: closed when known)",
    )


def build_parser():
    S = argparse.SUPPRESS
    parser = _Parser(prog="qfourier", description="Basic q-Fourier series toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeros", help="positive zeros of S_q with certified brackets")
    _common(p)
    p.add_argument("--k", type=int, default=S, help="number of zeros")

    p = sub.add_parser("expand", help="coefficients of a q-Fourier expansion")
    _common(p)
    _target_args(p)
    p.add_argument("--k", type=int, default=S, help="number of modes")
    p.add_argument("--tol", type=float, default=S, help="closed-form/quadrature agreement tolerance")

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p)
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--k", type=int, default=S, help="modes / zeros to check")

    p = sub.add_parser("converge", help="error-versus-K curves")
    _common(p)
    p.add_argument("mode", choices=("on-grid", "off-grid"))
    _target_args(p)
    p.add_argument("--kmax", type=int, default=S)
    p.add_argument("--ks", type=_ints, default=S, help="explicit K values (comma-separated)")
    p.add_argument("--n-points", type=int, default=S, help="grid points per side for on-grid sup error")
    p.add_argument("--points", type=_floats, default=S, help="evaluation points (comma-separated)")
    p.add_argument("--tol", type=float, default=S, help="gate: best error must reach this")
    p.add_argument("--no-gate", action="store_true", default=S)
    return parser


def resolve_config(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    data = {}
    if "config" in ns:
        try:
            with open(ns["config"], encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns['config']!r}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = RunConfig.from_mapping({**data, **ns})
    if cfg.series_tol is None:
        env = os.environ.get(ENV_SERIES_TOL)
        try:
            cfg.series_tol = float(env) if env else 1e-30
        except ValueError as exc:
            raise ConfigError(f"{ENV_SERIES_TOL}={env!r} is not a number") from exc
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# helpers


def _emit(cfg, payload=None, text=None):
    if text is None:
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _target_grid(cfg, ctx, prec):
    kind = cfg.target
    if kind == "grid-file":
        if not cfg.grid:
            raise ConfigError("target grid-file needs --grid PATH")
        try:
            with open(cfg.grid, encoding="utf-8") as fh:
                gf = GridFunction.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot load grid file {cfg.grid!r}: {exc}") from exc
        if abs(gf.q - ctx.q) > 0:
            raise ConfigError(f"grid file has q={gf.q}, run uses q={ctx.q}")
        return gf
    params = _target_params(cfg)
    return targets.grid(kind, ctx.q, ctx.grid_depth, prec=prec, **params)


def _target_params(cfg):
    if cfg.target == "step":
        if cfg.a is None:
            raise ConfigError("target step needs --a")
        return {"a": cfg.a}
    if cfg.target == "monomial":
        if cfg.m is None:
            raise ConfigError("target monomial needs --m")
        return {"m": cfg.m}
    return {}


def _closed(cfg, ctx, K, zt):
    kind = cfg.target
    _target_params(cfg)
    if kind == "abs":
        return closed_abs_coeffs(ctx.q, K, zt, ctx)
    if kind == "sign":
        return closed_sign_coeffs(ctx.q, K, zt, ctx)
    if kind == "step":
        return closed_step_coeffs(ctx.q, cfg.a, K, zt, ctx)
    if kind == "monomial":
        return closed_monomial_coeffs(ctx.q, cfg.m, K, zt, ctx)
    return None


def _series(cfg, ctx, K, zt, method):
    """(series used downstream, comparison dict or None)."""
    if method == "auto":
        method = "quadrature" if cfg.target == "grid-file" else "closed"
    if cfg.target == "grid-file" and method in ("closed", "both"):
        raise ConfigError("grid-file targets have no closed form; use --method quadrature")
    closed = _closed(cfg, ctx, K, zt) if method in ("closed", "both") else None
    quad = None
    if method in ("quadrature", "both"):
        quad = compute_series(_target_grid(cfg, ctx, ctx.prec_for(K)), K, ctx, zt)
    if closed is not None and quad is not None:
        return closed, compare_series(closed, quad)
    return (closed or quad), None


# --------------------------------------------------------------------------
# subcommands


def cmd_zeros(cfg: RunConfig) -> int:
    ctx = cfg.context()
    K = cfg.k or 10
    try:
        zt = find_zeros(ctx, K)
    except ScanFailure as exc:
        print(f"qfourier: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for w in zt.warnings:
        log.warning(w)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["k", "omega", "lo", "hi", "alpha_k", "eps_k", "source", "valid"]
        w.writerow(cols)
        for e in zt.to_dict()["entries"]:
            w.writerow([e[c] if e[c] is not None else "" for c in cols])
        _emit(cfg, text=buf.getvalue())
    else:
        payload = zt.to_dict()
        payload["guarantees"] = ctx.guarantees
        payload["warnings"] = list(zt.warnings)
        _emit(cfg, payload)
    return EXIT_OK


def cmd_expand(cfg: RunConfig) -> int:
    ctx = cfg.context()
    K = cfg.k or 8
    method = cfg.method
    if method == "auto" and cfg.target != "grid-file":
        method = "both"  # report closed-form/quadrature agreement by default
    zt = find_zeros(ctx, K)
    fs, cmp = _series(cfg, ctx, K, zt, method)
    if cfg.format == "csv":
        _emit(cfg, text=fs.to_csv())
        ok = True
    else:
        payload = fs.to_dict()
        ok = True
        if cmp is not None:
            tol = cfg.tol if cfg.tol is not None else 1e-8
            ok = bool(cmp["max_rel"] <= tol and cmp["max_abs_on_zeros"] <= cmp["atol"])
            payload["agreement"] = {**cmp, "tol": tol, "ok": ok}
        _emit(cfg, payload)
    return EXIT_OK if ok else EXIT_NUMERIC


def _suite_results(cfg, suite):
    K = cfg.k
    if suite == "orthogonality":
        ctx = cfg.context(q=cfg.q or 0.5)
        k = K or 8
        return [check_orthogonality(find_zeros(ctx, k), ctx, kmax=k)]
    if suite == "identities":
        out = []
        for q in [cfg.q] if cfg.q else [0.3, 0.5]:
            ctx = cfg.context(q=q)
            out += [check_difference_relations(ctx), check_eigen_relation(ctx)]
        ctx = cfg.context(q=cfg.q or 0.5)
        out.append(check_zero_reciprocity(find_zeros(ctx, K or 10), ctx))
        out.append(check_bessel_connection(ctx))
        return out
    if suite == "theorem-d":
        ctx = cfg.context(q=cfg.q or 0.5)
        k = K or 6
        return [check_theorem_d(find_zeros(ctx, k), ctx, kmax=k)]
    if suite == "asymptotics":
        ctx = cfg.context(q=cfg.q or 0.9)
        return [check_asymptotics(find_zeros(ctx, K or 12), ctx)]
    if suite == "ibp":
        ctx = cfg.context(q=cfg.q or 0.5)
        return [check_ibp(q=ctx.q, depth=60, ctx=ctx)]
    raise ConfigError(f"unknown suite {suite!r}")


def cmd_verify(cfg: RunConfig) -> int:
    suites = SUITES[:-1] if cfg.suite == "all" else (cfg.suite,)
    results = []
    for s in suites:
        results += _suite_results(cfg, s)
    passed = all(r.passed for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: max residual {r.max_residual:.3e} (tol {r.tolerance:g})", file=sys.stderr)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "max_residual", "tolerance", "passed"])
        for r in results:
            w.writerow([r.name, repr(r.max_residual), repr(r.tolerance), r.passed])
        _emit(cfg, text=buf.getvalue())
    else:
        _emit(cfg, {"passed": passed, "checks": [r.to_dict() for r in results]})
    return EXIT_OK if passed else EXIT_NUMERIC


def _ks(cfg):
    if cfg.ks:
        return sorted(set(cfg.ks))
    kmax = cfg.kmax or 40
    ks = sorted({k for k in (1, 2, 3, 5, 10, 15, 20, 30, 40, 50, 60, kmax) if k <= kmax})
    return ks


def cmd_converge(cfg: RunConfig) -> int:
    ctx = cfg.context()
    Ks = _ks(cfg)
    K = max(Ks)
    zt = find_zeros(ctx, K)
    fs, _ = _series(cfg, ctx, K, zt, cfg.method)
    gate = not cfg.no_gate and cfg.target != "sign"
    tol = cfg.tol if cfg.tol is not None else 1e-6
    if cfg.mode == "on-grid":
        if cfg.target == "sign" or cfg.points:
            # pointwise on the grid: uniform convergence is not expected for sign
            pts = cfg.points or [1.0, ctx.q, ctx.q**2]
            curves = pointwise_error_curve(fs, targets.sign_function if cfg.target == "sign" else _callable(cfg), pts, Ks, ctx)
            rows = _pointwise_rows(curves, pts, Ks)
            best = min(max(r[1:]) for r in rows)
            header = ["K"] + [f"err@{p!r}" for p in pts]
        else:
            gf = _target_grid(cfg, ctx, ctx.prec_for(K))
            n = min(cfg.n_points, gf.depth)
            curve = error_curve_on_grid(fs, gf, Ks, n, ctx)
            rows = [(k, e) for k, e in curve]
            best = min(e for _, e in curve)
            header = ["K", "sup_error"]
    else:
        if cfg.target == "grid-file":
            raise ConfigError("off-grid evaluation needs a target with known values off the grid")
        pts = cfg.points or [1 / 3, 1.2]
        curves = pointwise_error_curve(fs, _callable(cfg), pts, Ks, ctx)
        rows = _pointwise_rows(curves, pts, Ks)
        best = min(max(r[1:]) for r in rows)
        header = ["K"] + [f"err@{p!r}" for p in pts]
    passed = (best <= tol) if gate else True
    if cfg.format == "csv":
        if len(header) == 2:
            _emit(cfg, text=curve_to_csv(rows, header=tuple(header)))
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([r[0]] + [mp.nstr(e, 17) for e in r[1:]])
            _emit(cfg, text=buf.getvalue())
    else:
        _emit(
            cfg,
            {
                "q": ctx.q,
                "mode": cfg.mode,
                "target": cfg.target,
                "columns": header,
                "rows": [list(r) for r in rows],
                "best_error": best,
                "gated": gate,
                "tol": tol if gate else None,
                "passed": passed,
            },
        )
    return EXIT_OK if passed else EXIT_NUMERIC


def _callable(cfg):
    return targets.callable_for(cfg.target, **_target_params(cfg))


def _pointwise_rows(curves, pts, Ks):
    rows = []
    for i, K in enumerate(Ks):
        rows.append((K,) + tuple(curves[p][i][1] for p in pts))
    return rows


COMMANDS = {"zeros": cmd_zeros, "expand": cmd_expand, "verify": cmd_verify, "converge": cmd_converge}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except ConfigError as exc:
        print(f"qfourier: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, QDomainError) as exc:
        print(f"qfourier: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, ScanFailure) as exc:
        print(f"qfourier: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
