import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.linear_model import LinearRegression

from qfourier import ConfigError, QDomainError, QFourierRegressor, QTrigBasis
from qfourier.validation import check_points, check_positive_int, check_q, grid_from_samples, grid_nodes


# validation --------------------------------------------------------------


def test_check_q():
    assert check_q(0.5) == 0.5
    for bad in (0, 1, -0.1, True, "0.5", None):
        with pytest.raises(QDomainError):
            check_q(bad)


def test_check_positive_int():
    assert check_positive_int("K", np.int64(4)) == 4
    assert check_positive_int("K", 0, minimum=0) == 0
    for bad in (0, 2.5, True, "3"):
        with pytest.raises(ConfigError):
            check_positive_int("K", bad)


def test_check_points_shapes():
    assert check_points([1, 2]).shape == (2,)
    assert check_points(np.ones((3, 1))).shape == (3,)
    with pytest.raises(ValueError):
        check_points(np.ones((3, 2)))
    with pytest.raises(ValueError):
        check_points([np.nan])


def test_grid_nodes_layout():
    x = grid_nodes(0.5, 4)
    assert list(x) == [1, 0.5, 0.25, 0.125, -1, -0.5, -0.25, -0.125]
    with pytest.raises(QDomainError):
        grid_nodes(0.5, 2000)


def test_grid_from_samples_any_order():
    x = grid_nodes(0.5, 5)
    perm = np.random.default_rng(1).permutation(len(x))
    g = grid_from_samples(x[perm], (x**2)[perm], 0.5, 5, limits=(0, 0))
    assert [float(v) for v in g.pos_values] == list(x[:5] ** 2)
    assert g.has_limits


@pytest.mark.parametrize(
    "X,msg",
    [
        (np.r_[grid_nodes(0.5, 3), 0.3], "not a node"),
        (np.r_[grid_nodes(0.5, 3), 0.0], "not a node"),
        (np.r_[grid_nodes(0.5, 3), 0.125], "not a node"),
        (np.r_[grid_nodes(0.5, 3), 0.5], "duplicate"),
        (grid_nodes(0.5, 3)[:-1], "no sample"),
    ],
)
def test_grid_from_samples_rejects(X, msg):
    with pytest.raises(ValueError, match=msg):
        grid_from_samples(X, np.zeros(len(X)), 0.5, 3)


def test_grid_from_samples_length_mismatch():
    with pytest.raises(ValueError, match="rows"):
        grid_from_samples(grid_nodes(0.5, 3), [0, 1], 0.5, 3)


# regressor ---------------------------------------------------------------


@pytest.fixture(scope="module")
def fitted():
    est = QFourierRegressor(q=0.5, n_modes=12, depth=200)
    X = est.grid_nodes()
    return est.fit(X, X[:, 0] ** 2)


def test_params_roundtrip_and_clone():
    est = QFourierRegressor(q=0.3, n_modes=4)
    assert est.get_params()["q"] == 0.3
    est.set_params(n_modes=5)
    c = clone(est)
    assert c.get_params() == est.get_params() and c is not est


def test_fit_sets_attributes(fitted):
    assert fitted.n_features_in_ == 1
    assert fitted.a_.shape == (12,) and fitted.b_.shape == (12,)
    assert fitted.a0_ == pytest.approx(2 * (1 - 0.5) / (1 - 0.125))
    assert np.all(np.abs(fitted.b_) < 1e-30)


def test_predict_on_and_off_grid(fitted):
    pts = np.array([[1.0], [0.25], [-0.5], [1.2], [1 / 3]])
    pred = fitted.predict(pts)
    assert np.allclose(pred, pts[:, 0] ** 2, atol=1e-5)
    assert fitted.score(fitted.grid_nodes()[:20], fitted.grid_nodes()[:20, 0] ** 2) > 0.999999


def test_predict_with_fewer_modes(fitted):
    coarse = fitted.predict([1.2], n_modes=2)
    fine = fitted.predict([1.2])
    assert abs(fine[0] - 1.44) < abs(coarse[0] - 1.44)
    assert fitted.predict([0.5], n_modes=0)[0] == pytest.approx(fitted.a0_ / 2)
    with pytest.raises(ValueError):
        fitted.predict([0.5], n_modes=13)


def test_unfitted_predict_raises():
    with pytest.raises(NotFittedError):
        QFourierRegressor().predict([0.5])


def test_bad_params_fail_at_fit():
    X = grid_nodes(0.5, 10).reshape(-1, 1)
    with pytest.raises(QDomainError):
        QFourierRegressor(q=1.5, depth=10).fit(X, X[:, 0])
    with pytest.raises(ConfigError):
        QFourierRegressor(n_modes=0, depth=10).fit(X, X[:, 0])


# feature map -------------------------------------------------------------


def test_basis_columns_reproduce_regressor(fitted):
    basis = QTrigBasis(q=0.5, n_modes=12).fit()
    pts = np.array([[1.2], [-0.7]])
    F = basis.transform(pts)
    assert F.shape == (2, 25)
    coef = np.r_[fitted.a0_, fitted.a_, fitted.b_]
    assert np.allclose(F @ coef, fitted.predict(pts), rtol=1e-12)
    names = basis.get_feature_names_out()
    assert names[0] == "half" and names[1] == "C1" and names[-1] == "S12"


def test_basis_in_pipeline():
    x = grid_nodes(0.5, 30).reshape(-1, 1)
    y = np.abs(x[:, 0])
    model = make_pipeline(QTrigBasis(q=0.5, n_modes=6), LinearRegression()).fit(x, y)
    assert model.score(x, y) > 0.99
