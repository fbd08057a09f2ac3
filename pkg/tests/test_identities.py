import json

from qfourier import QContext
from qfourier.identities import (
    CheckResult,
    check_asymptotics,
    check_difference_relations,
    check_ibp,
    check_orthogonality,
    check_theorem_d,
    sample_points,
)


def test_sample_points_reproducible():
    a = sample_points(20, seed=3)
    assert a == sample_points(20, seed=3) and a != sample_points(20, seed=4)
    assert len(a) == 20 and all(-1.5 <= x <= 1.5 and x != 0 for x in a)


def test_result_serialization():
    r = check_ibp(pairs=((1, 2),))
    d = json.loads(r.to_json())
    assert d["name"] == "ibp" and d["passed"] and len(d["details"]) == 2
    assert isinstance(r, CheckResult)


def test_impossible_tolerance_fails():
    r = check_difference_relations(QContext(0.5), points=[0.7], tol=0.0)
    assert not r.passed and r.max_residual > 0


def test_orthogonality_and_finite_sums(zt05):
    ctx = QContext(0.5)
    assert check_orthogonality(zt05, ctx, kmax=3).passed
    assert check_theorem_d(zt05, ctx, kmax=2, nmax=3).passed


def test_asymptotics_reports_bounds(zt05):
    r = check_asymptotics(zt05, QContext(0.5), kmax=8)
    rep = r.details[0]
    assert r.passed and rep["max_abs_S"] <= rep["B"] and rep["max_abs_R"] < rep["R_bound"]
