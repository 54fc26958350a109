import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakpareto.regress import PolyFit, lasso_cd, lasso_objective, lasso_poly_fit, lowest_active_degree

X = np.linspace(0.01, 0.45, 45)


def test_noiseless_quadratic_recovery():
    fit = lasso_poly_fit(X, 0.3 * X**2)
    assert lowest_active_degree(fit) == 2
    assert fit.coefficients[1] == pytest.approx(0.3, rel=0.05)
    np.testing.assert_allclose(fit.predict(X), 0.3 * X**2, atol=1e-5)


def test_zero_penalty_is_least_squares():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((30, 4))
    y = rng.standard_normal(30)
    np.testing.assert_allclose(lasso_cd(A, y, 0.0), np.linalg.lstsq(A, y, rcond=None)[0])


def test_lasso_cd_beats_zero_vector():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((40, 5))
    y = A @ np.array([1.0, 0, 0, -2.0, 0]) + 0.01 * rng.standard_normal(40)
    beta = lasso_cd(A, y, 0.05)
    assert lasso_objective(A, y, beta, 0.05) < lasso_objective(A, y, np.zeros(5), 0.05)
    assert beta[1] == 0 and beta[2] == 0


@settings(max_examples=10, deadline=None)
@given(st.floats(1e-4, 1e-2), st.floats(2.0, 10.0))
def test_larger_penalty_is_no_denser(lam, factor):
    y = 0.2 * X + 0.5 * X**3
    dense = np.count_nonzero(lasso_poly_fit(X, y, lam=lam).coefficients)
    sparse = np.count_nonzero(lasso_poly_fit(X, y, lam=lam * factor).coefficients)
    assert sparse <= dense


def test_degenerate_and_invalid_inputs():
    fit = lasso_poly_fit(X, np.zeros_like(X))
    assert not np.any(fit.coefficients) and lowest_active_degree(fit) == 0
    with pytest.raises(ValueError):
        lasso_poly_fit(X[:5], X[:5])
    with pytest.raises(ValueError):
        lasso_poly_fit(X - 1, X)


def test_lowest_active_degree_examples():
    assert lowest_active_degree(np.array([0.0, 0.3, 0.4])) == 2
    assert lowest_active_degree(PolyFit(np.zeros(3), 0.1, 3)) == 0
    assert lowest_active_degree(np.array([5e-5, 0.3])) == 2
