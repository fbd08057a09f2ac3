import json
import math

import mpmath as mp
import pytest
from conftest import zero_table

from qfourier import (
    GridFunction,
    PreconditionError,
    QContext,
    check_holder,
    closed_abs_coeffs,
    closed_monomial_coeffs,
    decay_diagnostics,
    energy_check,
    estimate_holder,
    lemma_bound_B,
    offgrid_error,
    sup_error_on_grid,
    targets,
    verify_orthogonality,
)
from qfourier.analysis import (
    asymptotic_factors,
    curve_to_csv,
    error_curve_on_grid,
    holder_differences,
    offgrid_error_curve,
    pointwise_error_curve,
)

CTX = QContext(0.5)


# Hölder -----------------------------------------------------------------


def test_holder_differences_skip_n0():
    g = targets.grid("abs", 0.5, 6)
    d = holder_differences(g)
    assert [n for b, n, _ in d if b == "+"] == [1, 2, 3, 4, 5]
    assert d[0][2] == mp.mpf(0.5)


@pytest.mark.parametrize("kind,m,lam", [("abs", None, 1.0), ("monomial", 2, 2.0), ("monomial", 3, 3.0)])
def test_holder_order_of_powers(kind, m, lam):
    rep = estimate_holder(targets.grid(kind, 0.5, 100, m=m))
    assert abs(rep.lambda_est - lam) < 1e-6
    assert rep.satisfied and rep.exceeds_half and rep.limits_match


def test_holder_constants_for_abs():
    # |q^{n-1} - q^n| = (1-q)/q * q^n, so M = (1-q)/q with λ = 1 is sharp
    g = targets.grid("abs", 0.5, 100)
    assert check_holder(g, M=1.0, lam=1).satisfied
    assert not check_holder(g, M=0.99, lam=1).satisfied
    assert not check_holder(g, M=1.0, lam=1.1).satisfied


def test_sign_function_has_mismatched_limits():
    rep = estimate_holder(targets.grid("sign", 0.5, 50))
    assert rep.limits_match is False
    assert rep.lambda_est == math.inf


def test_step_function_almost_condition():
    n_a = targets.step_index(0.5, 0.3)
    g = targets.grid("step", 0.5, 100, a=0.3)
    assert not check_holder(g, M=1.0, lam=5, n0=0).satisfied
    rep = check_holder(g, M=1.0, lam=5, n0=n_a + 1)
    assert rep.satisfied and rep.limits_match


def test_jump_rejected_from_fit():
    with mp.workprec(100):
        g = GridFunction.from_callable(lambda x: abs(x) + (1 if x == mp.mpf(0.5) ** 10 else 0), 0.5, 60, (0, 0))
    rep = estimate_holder(g)
    assert abs(rep.lambda_est - 1) < 1e-6
    assert ("+", 10) in rep.jump_indices and ("+", 11) in rep.jump_indices


def test_holder_needs_enough_data():
    with pytest.raises(PreconditionError):
        check_holder(targets.grid("abs", 0.5, 3), 1, 1, n0=2)
    g = GridFunction(0.5, 3, (1, 0, 0), (1, 1, 1), 0, 1)
    with pytest.raises(PreconditionError):
        estimate_holder(g)


def test_holder_report_serializes():
    # strict JSON: infinities are written as strings
    text = estimate_holder(targets.grid("sign", 0.5, 10)).to_json()
    assert "Infinity" not in text
    assert json.loads(text)["lambda_est"] == "inf"


# decay ------------------------------------------------------------------


def test_decay_fit_separates_smooth_and_discontinuous(zt05):
    ctx = CTX
    smooth = decay_diagnostics(targets.grid("monomial", 0.5, 200, prec=ctx.prec_for(20), m=2), zt05, ctx, K=20)
    jump = decay_diagnostics(targets.grid("sign", 0.5, 200, prec=ctx.prec_for(20)), zt05, ctx, K=20)
    assert smooth.fit_available and smooth.c_lin_gt_1 and smooth.c_quad_gt_0
    assert jump.fit_available and not jump.c_lin_gt_1
    assert abs(jump.c_lin - 1) < 1e-6


# errors -----------------------------------------------------------------


def test_on_grid_error_curve_decreases(zt05):
    fs = closed_abs_coeffs(0.5, 20, zt05, CTX)
    g = targets.grid("abs", 0.5, 200, prec=CTX.prec_for(20))
    curve = error_curve_on_grid(fs, g, [2, 5, 10, 20], 10, CTX)
    errs = [e for _, e in curve]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert sup_error_on_grid(fs, g, 20, 10, CTX) == errs[-1]


def test_off_grid_error_and_csv(zt05):
    fs = closed_monomial_coeffs(0.5, 2, 20, zt05, CTX)
    rows = offgrid_error(fs, targets.monomial(2), [mp.mpf(1) / 3, 1.2], 20, CTX, sigma=1)
    assert all(r["error"] < 1e-6 and not r["overflow"] for r in rows)
    assert [r["inside_disc"] for r in rows] == [True, True]
    curve = offgrid_error_curve(fs, targets.monomial(2), [1.2], [5, 20], CTX)[1.2]
    assert curve[1][1] < curve[0][1]
    text = curve_to_csv(curve)
    lines = text.splitlines()
    assert lines[0] == "K,error" and lines[2].startswith("20,")
    assert float(lines[2].split(",")[1]) == pytest.approx(float(curve[1][1]))


def test_pointwise_curve_keys(zt05):
    fs = closed_abs_coeffs(0.5, 5, zt05, CTX)
    out = pointwise_error_curve(fs, targets.absolute_value, [1, 0.5], [1, 5], CTX)
    assert set(out) == {1, 0.5} and [K for K, _ in out[1]] == [1, 5]


# orthogonality, bounds, energy ------------------------------------------


def test_orthogonality_small(zt05):
    rep = verify_orthogonality(zt05, 3, QContext(0.5, grid_depth=200))
    assert rep.max_offdiag / rep.max_mu < 1e-30
    assert rep.max_diag_rel_C < 1e-30 and rep.max_diag_rel_S < 1e-30
    assert rep.zero_zero_error < 1e-30


def test_bound_B_increases_with_q():
    vals = [lemma_bound_B(q) for q in (0.3, 0.6, 0.9)]
    assert vals[0] < vals[1] < vals[2]
    assert abs(vals[0] - 3.71) < 0.01


def test_asymptotic_factors_q09():
    rep = asymptotic_factors(zero_table(0.9, 12), QContext(0.9))
    assert rep.S_ok and rep.R_ok and rep.positive
    assert rep.guarantees["cosine_window"] == "asserted"


def test_energy_bounds_for_power_law():
    # x^2 satisfies the grid Hölder condition with M = (1-q^2)/q^2, λ = 2; give M a margin
    M = 3.0 * 1.01
    g = targets.grid("monomial", 0.5, 200, m=2)
    plus = energy_check(g, M, 2, CTX)
    minus = energy_check(targets.monomial(2), M, 2, CTX, variant="minus")
    assert plus.ok and plus.ok_exact
    assert minus.ok_exact
    # the bound without the q/(1-q)^2 factor is too small for the shifted variant
    assert not minus.ok and minus.lhs > minus.bound


def test_energy_preconditions():
    g = targets.grid("abs", 0.5, 20)
    with pytest.raises(PreconditionError):
        energy_check(g, 1, 0.5, CTX)
    with pytest.raises(PreconditionError):
        energy_check(g, 1, 1, CTX, variant="minus")
    with pytest.raises(ValueError):
        energy_check(g, 1, 1, CTX, variant="other")
