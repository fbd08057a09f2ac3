import math

import mpmath as mp
import pytest

from qfourier import (
    GridFunction,
    PreconditionError,
    QContext,
    QDomainError,
    delta_op,
    delta_quotient,
    q_integral_0a,
    q_integral_sym,
    q_pochhammer,
    verify_ibp,
)
from qfourier.qcore import trig_growth_bits


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_context_rejects_q_outside_unit_interval(q):
    with pytest.raises(QDomainError):
        QContext(q)


def test_context_rejects_bad_tolerances():
    with pytest.raises(QDomainError):
        QContext(0.5, series_tol=0)
    with pytest.raises(QDomainError):
        QContext(0.5, grid_depth=0)


def test_context_windows():
    assert QContext(0.9).cosine_window and QContext(0.9).derivative_window
    assert not QContext(0.95).derivative_window
    assert QContext(0.95).guarantees["derivative_window"] == "not asserted"


def test_target_bits_follow_tolerance():
    assert QContext(0.5, series_tol=1e-30).target_bits == math.ceil(30 * math.log2(10))
    assert QContext(0.5, series_tol=1e-3).target_bits == 53


def test_precision_grows_with_modes_and_never_lowers():
    ctx = QContext(0.5)
    assert ctx.prec_for(40) > ctx.prec_for(10) > ctx.prec_for(0)
    with mp.workprec(100000):
        with ctx.precision(1) as bits:
            assert bits == 100000


def test_growth_bits_zero_and_monotone():
    assert trig_growth_bits(0.5, 0) == 0 or trig_growth_bits(0.5, 0) < 1
    assert trig_growth_bits(0.5, 1e6) > trig_growth_bits(0.5, 1e3)


def test_pochhammer_finite_and_infinite():
    ctx = QContext(0.5)
    with mp.workprec(200):
        assert q_pochhammer(0.3, 0.5, 0) == 1
        a = mp.mpf(0.3)
        assert mp.almosteq(q_pochhammer(a, 0.5, 3), (1 - a) * (1 - a / 2) * (1 - a / 4))
        assert mp.almosteq(q_pochhammer(0.5, 0.5, math.inf, ctx), mp.qp(0.5), 1e-28)
        # multi-symbol product
        assert mp.almosteq(q_pochhammer((0.2, 0.3), 0.5, 4), q_pochhammer(0.2, 0.5, 4) * q_pochhammer(0.3, 0.5, 4))


def test_delta_operator_on_monomials():
    q = 0.5
    with mp.workprec(200):
        r = mp.sqrt(q)
        assert mp.almosteq(delta_op(lambda x: x**2, 2, q), 4 * (q - 1 / q))
        # δx^2/δx = (q^{1/2} + q^{-1/2}) x
        assert mp.almosteq(delta_quotient(lambda x: x**2, 0.7, q), mp.mpf(0.7) * (r + 1 / r))


def test_delta_quotient_undefined_at_zero():
    with pytest.raises(QDomainError):
        delta_quotient(lambda x: x, 0, 0.5)


def test_jackson_integrals_of_monomials():
    ctx = QContext(0.5)
    with mp.workprec(200):
        # ∫_0^a x^m d_q x = a^{m+1}(1-q)/(1-q^{m+1})
        for m in range(4):
            val = q_integral_0a(lambda x: x**m, 0.8, ctx)
            assert mp.almosteq(val, mp.mpf(0.8) ** (m + 1) * 0.5 / (1 - 0.5 ** (m + 1)), 1e-28)
        assert mp.almosteq(q_integral_sym(abs, ctx), 2 / mp.mpf(1.5), 1e-28)
        assert abs(q_integral_sym(lambda x: x**3, ctx)) < 1e-40


def test_jackson_integral_tail_bound():
    ctx = QContext(0.5, grid_depth=20)
    val, info = q_integral_0a(lambda x: 1, 1, ctx, f_bound=1, full_output=True)
    assert info["nodes_used"] == 20
    assert abs(val - 1) <= info["tail_bound"] * (1 + 1e-12)


def test_grid_function_from_callable_and_roundtrip():
    with mp.workprec(100):
        g = GridFunction.from_callable(lambda x: x**2, 0.5, 10, (0, 0))
    assert g.pos_values[1] == mp.mpf(0.25) and g.neg_values[2] == mp.mpf(0.0625)
    assert g.has_limits
    g2 = GridFunction.from_dict(g.to_dict())
    assert g2.to_dict() == g.to_dict()


def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(0.5, 3, (1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        GridFunction(0.5, 1, (mp.inf,), (0,))
    with pytest.raises(ValueError):
        GridFunction.from_dict({"q": 0.5, "depth": 1, "pos_values": [1], "neg_values": [1], "extra": 0})
    with pytest.raises(QDomainError):
        GridFunction(1.2, 1, (1,), (1,))


@pytest.mark.parametrize("sign", [1, -1])
def test_integration_by_parts_residual_small(sign):
    ctx = QContext(0.5, grid_depth=60)
    with mp.workprec(200):
        res, scale = verify_ibp(lambda x: x, lambda x: x**2, ctx, sign, (0, 0), (0, 0), full_output=True)
    assert res / scale < 1e-30


def test_integration_by_parts_needs_limits():
    with pytest.raises(PreconditionError):
        verify_ibp(lambda x: x, lambda x: x, QContext(0.5))
