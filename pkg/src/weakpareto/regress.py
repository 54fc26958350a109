"""Sparse polynomial fits of volume-distance curves.

Curves pass through the origin, so the model is ``v = sum_k b_k * x**k`` for
``k = 1..D`` with no intercept. Sparsity comes from an L1 penalty solved by
cyclic coordinate descent on norm-standardized monomial columns, with the
penalty chosen by cross-validation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import Lasso, LassoCV
from sklearn.model_selection import KFold


@dataclass(frozen=True)
class PolyFit:
    """Coefficients for degrees ``1..degree_cap`` and the penalty used."""

    coefficients: np.ndarray
    lam: float
    degree_cap: int

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return _features(x, self.degree_cap) @ self.coefficients

    def rows(self, tag: str = "") -> list[tuple]:
        return [(k + 1, float(c), self.lam, tag) for k, c in enumerate(self.coefficients)]


def _features(x: np.ndarray, degree: int) -> np.ndarray:
    return np.stack([x**k for k in range(1, degree + 1)], axis=-1)


def lasso_objective(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    """``(1/2n) ||y - X beta||^2 + lam * ||beta||_1``."""
    resid = y - X @ beta
    return float(resid @ resid / (2 * len(y)) + lam * np.abs(beta).sum())


def lasso_cd(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = 1e-10,
    max_sweeps: int = 100_000,
) -> np.ndarray:
    """Minimize the Lasso objective by cyclic coordinate descent.

    Delegates to scikit-learn's compiled solver; ``max_sweeps`` caps the
    number of full passes over the coefficients.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        if lam <= 0:
            return np.linalg.lstsq(X, y, rcond=None)[0]
        model = Lasso(alpha=lam, fit_intercept=False, tol=tol, max_iter=max_sweeps, selection="cyclic")
        model.fit(X, y)
    return model.coef_.copy()


def _standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(X, axis=0)
    norms = np.where(norms > 0, norms, 1.0)
    return X / norms, norms


def lambda_grid(X: np.ndarray, y: np.ndarray, n: int = 50, ratio: float = 1e-5) -> np.ndarray:
    """Descending log grid from the smallest penalty that zeroes every coefficient.

    The floor ``ratio * lam_max`` keeps the problem well enough conditioned
    for coordinate descent to converge on nearly collinear monomials.
    """
    lam_max = float(np.max(np.abs(X.T @ y)) / len(y))
    if lam_max <= 0:
        return np.zeros(1)
    return np.geomspace(lam_max, lam_max * ratio, n)


def cross_validate_lambda(Xs: np.ndarray, y: np.ndarray, grid: np.ndarray, folds: int = 5) -> float:
    """Penalty on ``grid`` minimizing squared error over contiguous, unshuffled folds."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        model = LassoCV(alphas=grid, cv=KFold(folds), fit_intercept=False, tol=1e-10, max_iter=100_000)
        model.fit(Xs, y)
    return float(model.alpha_)


def lasso_poly_fit(x, y, degree_cap: int = 6, lam: float | None = None, folds: int = 5) -> PolyFit:
    """Fit ``y ~ sum_{k=1..degree_cap} b_k x^k`` with an L1 penalty.

    Args:
        x: Distances (positive).
        y: Volumes.
        degree_cap: Highest monomial degree.
        lam: Penalty on the standardized problem; chosen by ``folds``-fold
            cross-validation over a log grid when None.
        folds: Number of cross-validation folds.

    Returns:
        Coefficients on the original (unstandardized) monomials.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < degree_cap + 2:
        raise ValueError(f"need at least {degree_cap + 2} points for degree {degree_cap}")
    if np.any(x <= 0):
        raise ValueError("distances must be positive")
    if not np.any(y != 0):
        return PolyFit(np.zeros(degree_cap), 0.0 if lam is None else float(lam), degree_cap)
    Xs, norms = _standardize(_features(x, degree_cap))
    if lam is None:
        lam = cross_validate_lambda(Xs, y, lambda_grid(Xs, y), folds)
    beta = lasso_cd(Xs, y, lam)
    return PolyFit(beta / norms, float(lam), degree_cap)


def lowest_active_degree(fit: PolyFit | np.ndarray, tol: float = 1e-4) -> int:
    """Smallest degree with ``|coefficient| > tol``; 0 when none is active."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    coef = fit.coefficients if isinstance(fit, PolyFit) else np.asarray(fit, dtype=float)
    active = np.flatnonzero(np.abs(coef) > tol)
    return int(active[0]) + 1 if len(active) else 0
