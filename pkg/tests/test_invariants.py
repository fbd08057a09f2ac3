import mpmath as mp

from qfourier import QContext, compute_series, decay_diagnostics, energy_check, jackson_bessel3, sq_prime, targets
from qfourier.fourier import mu_k, sin_integral_by_parts

CTX = QContext(0.5)


def test_fast_decay_implies_grid_convergence(zt05):
    for kind, kw in (("abs", {}), ("step", {"a": 0.3}), ("monomial", {"m": 2})):
        g = targets.grid(kind, 0.5, 200, prec=CTX.prec_for(20), **kw)
        d = decay_diagnostics(g, zt05, CTX, K=20)
        assert d.c_lin_gt_1, kind


def test_energy_bound_for_abs():
    rep = energy_check(targets.grid("abs", 0.5, 200), 1, 1, CTX)
    assert rep.ok and rep.lhs <= rep.bound


def test_sq_prime_alternates_at_zeros(zt05):
    with CTX.precision(8):
        signs = [mp.sign(sq_prime(zt05.omega(k), CTX).value) for k in range(1, 9)]
    assert signs == [(-1) ** k for k in range(1, 9)]


def test_eps_inside_alpha(zt05):
    assert all(0 < zt05.eps_k[k] < zt05.alpha_k[k] for k in range(12))


def test_bessel_small_argument():
    assert abs(jackson_bessel3(0.5, 1e-8, 0.5, CTX).value) <= 1e-3


def test_sine_coefficients_by_parts(zt05):
    g = targets.grid("monomial", 0.5, 200, prec=CTX.prec_for(5), m=3)
    fs = compute_series(g, 3, CTX, zt05)
    for k in (1, 2):
        with CTX.precision(k):
            s = sin_integral_by_parts(targets.monomial(3), k, zt05, CTX)
            ratio = s / (mp.sqrt(2) * mu_k(zt05, k, CTX) * fs.b[k - 1])
        assert abs(ratio - 1) < 1e-20
