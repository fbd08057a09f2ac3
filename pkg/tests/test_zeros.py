import json

import mpmath as mp
import pytest
from conftest import zero_table

from qfourier import QContext, QDomainError, ScanFailure, alpha_k, beta0, find_zeros, sq, theorem_a_bracket
from qfourier.identities import check_theorem_d, check_zero_reciprocity
from qfourier.zeros import extract_Rk, extract_Sk, safe_scan_start


def test_beta0_is_root_of_defining_polynomial():
    b = beta0(1e-14)
    assert 0.67 < b < 0.672
    assert abs((1 - b * b) ** 2 - b**3) < 1e-12


def test_alpha_k_small_and_positive_below_beta0():
    for q in (0.3, 0.5, 0.6):
        a = [alpha_k(q, k) for k in range(1, 8)]
        assert all(x > 0 for x in a)
        assert all(b < a_ for a_, b in zip(a, a[1:]))


def test_bracket_validity_flag():
    lo, hi, valid = theorem_a_bracket(0.5, 3)
    assert valid and lo < hi
    lo, hi, valid = theorem_a_bracket(0.9, 10)
    assert not valid and lo < hi


def test_bracket_undefined_for_small_k_at_large_q():
    # q^{2k+1}/(1-q^{2k}) >= 1 leaves no bracket
    with pytest.raises(QDomainError):
        theorem_a_bracket(0.9, 3)


def test_alpha_domain_error():
    with pytest.raises(ValueError):
        alpha_k(0.5, 0)


def test_first_zero_against_dense_scan():
    # independent oracle: step 1e-4 over [1.5354, 1.6818], then bisection on plain mpmath sums
    def s(z):
        q = mp.mpf(0.5)
        return mp.nsum(lambda n: (-1) ** int(n) * q ** (n * (n + 0.5)) * z ** (2 * n) / mp.qp(q**2, q**2, int(n)) / mp.qp(q**3, q**2, int(n)), [0, 60], method="direct")

    with mp.workprec(120):
        x = mp.mpf("1.5354")
        prev = s(x)
        while True:
            nx = x + mp.mpf("1e-4")
            cur = s(nx)
            if prev * cur < 0:
                break
            x, prev = nx, cur
        w = mp.findroot(s, (x, nx), solver="bisect", tol=1e-30)
        zt = zero_table(0.5, 60)
        assert 1.5354 < zt.omega(1) < 1.6818
        assert abs(zt.omega(1) - w) < 1e-25


def test_table_entries_lie_in_their_brackets(zt05):
    ctx = QContext(0.5)
    assert zt05.K == 60
    for k in range(1, 11):
        lo, hi = zt05.brackets[k - 1]
        assert lo <= zt05.omega(k) <= hi
        assert (hi - lo) / lo <= ctx.root_tol
        assert zt05.bracket_source[k - 1] == "theorem_A"
        assert zt05.sign_change_ok(k, ctx)
    assert all(a < b for a, b in zip(zt05.omegas, zt05.omegas[1:]))


def test_eps_k_decreases_towards_zero(zt05):
    eps = [abs(e) for e in zt05.eps_k[:12]]
    assert all(b < a for a, b in zip(eps, eps[1:]))


@pytest.mark.filterwarnings("ignore::qfourier.PrecisionWarning")
def test_zero_is_a_zero_to_working_precision(zt05):
    ctx = QContext(0.5)
    for k in (1, 5, 20):
        with ctx.precision(k):
            v = sq(zt05.omega(k), ctx)
            assert abs(v.value) <= v.peak_term_magnitude * mp.mpf(2) ** (-ctx.target_bits)


def test_scan_above_beta0():
    zt = find_zeros(QContext(0.95), 3)
    assert zt.bracket_source == ("scan",) * 3
    assert zt.valid == (False,) * 3
    with mp.workprec(200):
        assert safe_scan_start(0.95) < zt.omega(1)


def test_scan_failure_names_index():
    # 30 terms converge each series near the first zero but are too few scan steps to reach it
    with pytest.raises(ScanFailure, match="k=1"):
        find_zeros(QContext(0.95, max_terms=30), 1)


def test_serialization_is_deterministic():
    a = zero_table(0.5, 60)
    b = find_zeros(QContext(0.5), 4)
    assert [float(w) for w in b.omegas] == [float(w) for w in a.omegas[:4]]
    assert b.to_json(sort_keys=True) == find_zeros(QContext(0.5), 4).to_json(sort_keys=True)
    d = json.loads(b.to_json())
    assert len(d["entries"]) == 4 and d["entries"][0]["source"] == "theorem_A"


def test_reciprocity_and_finite_sum_values(zt05):
    ctx = QContext(0.5)
    assert check_zero_reciprocity(zt05, ctx, kmax=6).passed
    assert check_theorem_d(zt05, ctx, kmax=3, nmax=4).passed


def test_asymptotic_factors_bounded(zt05):
    ctx = QContext(0.5)
    S = [extract_Sk(zt05, k, ctx) for k in range(1, 8)]
    R = [extract_Rk(zt05, k, ctx) for k in range(1, 8)]
    assert all(abs(s) > 0 for s in S) and all(abs(r) > 0 for r in R)
