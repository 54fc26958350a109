"""Enclosed volume between a weak Pareto front and a reference point.

The enclosed region of a reference ``r`` is the set of objective vectors that
dominate ``r`` and are weakly dominated by the WPF. Its volume is a proxy for
how hard ``r`` is to dominate. Four estimators are provided (exact polytope
for linear fronts, Monte Carlo rejection, closed-form limits, and a polar
integral over scalarizing directions), together with the sweeps used to
study how the volume grows with the distance to a WPB.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial, gamma, pi
from typing import Literal

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import FrontBounds, IndexSet
from .problems import CaseStudyFront, FrontSpec

Method = Literal["exact", "mc", "scalarized"]
EXACT_METHODS = ("exact", "pinf", "pzero")


@dataclass(frozen=True)
class EnclosedRegionSpec:
    """A front together with a reference point in objective units."""

    front: FrontSpec
    reference: np.ndarray

    def __post_init__(self) -> None:
        ref = np.asarray(self.reference, dtype=float)
        if ref.shape != (self.front.m,):
            raise ValueError(f"reference must have {self.front.m} entries")
        object.__setattr__(self, "reference", ref)

    @property
    def rbar(self) -> np.ndarray:
        return self.front.bounds.normalize(self.reference)

    @property
    def scale(self) -> float:
        """Volume of one normalized unit cube in objective units."""
        return float(np.prod(self.front.bounds.span))


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    std_error: float
    method: str
    samples: int = 0

    def __post_init__(self) -> None:
        if self.value < 0 or self.std_error < 0:
            raise ValueError("volume and standard error must be nonnegative")


# ---------------------------------------------------------------------------
# exact polytope


def _halfspaces(weights: np.ndarray, rbar: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``A z <= b`` describing the enclosed region of a linear front."""
    m = len(weights)
    rows, rhs = [], []
    for j in range(m):
        e = np.zeros(m)
        e[j] = -1.0
        rows.append(e)
        rhs.append(0.0)
        rows.append(-e)
        rhs.append(rbar[j])
    for size in range(1, m + 1):
        for S in combinations(range(m), size):
            a = np.zeros(m)
            a[list(S)] = weights[list(S)]
            # singletons only matter when they are stricter than z >= 0
            if size == 1 and 1.0 - 1.0 / a[S[0]] <= 0.0:
                continue
            rows.append(-a)
            rhs.append(1.0 - a.sum())
    return np.array(rows), np.array(rhs)


@lru_cache(maxsize=8)
def _subsets(n: int, m: int) -> np.ndarray:
    return np.array(list(combinations(range(n), m)), dtype=np.intp)


def polytope_vertices(A: np.ndarray, b: np.ndarray, tol: float = 1e-9, merge: float = 1e-8) -> np.ndarray:
    """Vertices of ``{z : A z <= b}`` by solving every m-subset of constraints."""
    m = A.shape[1]
    subsets = _subsets(len(b), m)
    found = []
    for start in range(0, len(subsets), 50_000):
        idx = subsets[start : start + 50_000]
        M = A[idx]
        rhs = b[idx]
        ok = np.abs(np.linalg.det(M)) > 1e-12
        if not np.any(ok):
            continue
        v = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
        feasible = np.all(v @ A.T <= b + tol, axis=1)
        found.append(v[feasible])
    if not found:
        return np.empty((0, m))
    verts = np.concatenate(found, axis=0)
    if len(verts) == 0:
        return verts
    keys = np.round(verts / merge).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    return verts[np.sort(first)]


def fan_volume(vertices: np.ndarray) -> float:
    """Volume of the convex hull of ``vertices`` by fanning facets from the centroid."""
    m = vertices.shape[1]
    if len(vertices) < m + 1:
        return 0.0
    try:
        hull = ConvexHull(vertices)
    except QhullError:
        return 0.0
    center = vertices[hull.vertices].mean(axis=0)
    simplices = vertices[hull.simplices] - center
    return float(np.abs(np.linalg.det(simplices)).sum() / factorial(m))


def volume_exact_linear(spec: EnclosedRegionSpec) -> VolumeEstimate:
    """Exact enclosed volume for linear fronts via vertex enumeration.

    Raises:
        ValueError: If the front is not linear.
    """
    weights = spec.front.linear_weights()
    if weights is None:
        raise ValueError("exact volume requires a linear front (p = 1)")
    rbar = spec.rbar
    if np.any(rbar <= 0):
        return VolumeEstimate(0.0, 0.0, "exact")
    A, b = _halfspaces(np.asarray(weights, dtype=float), rbar)
    vol = fan_volume(polytope_vertices(A, b))
    return VolumeEstimate(vol * spec.scale, 0.0, "exact")


# ---------------------------------------------------------------------------
# Monte Carlo


def _tight_box(front: FrontSpec, rbar: np.ndarray) -> np.ndarray | None:
    """Lower corner of a box containing the normalized enclosed region, or None if empty."""
    phi_r = front.deficit(rbar)
    budget = 1.0 - (phi_r.sum() - phi_r)
    if np.any(budget < 0):
        return None
    lo = np.array([float(front.deficit_inverse(j, np.array(budget[j]))) for j in range(front.m)])
    lo = np.where(budget >= front.deficit_at_zero(), 0.0, lo)
    if np.any(lo >= rbar):
        return None
    return lo


def volume_monte_carlo(
    spec: EnclosedRegionSpec,
    n_samples: int = 1_000_000,
    seed: int | np.random.Generator | None = 0,
    box: Literal["tight", "ideal"] = "tight",
    chunk: int = 1 << 17,
) -> VolumeEstimate:
    """Rejection estimate of the enclosed volume.

    Points are drawn uniformly from a box below ``r`` and accepted when the
    WPF weakly dominates them. With ``box="ideal"`` the box is ``[ideal, r]``;
    the default ``"tight"`` box is the smallest one implied by the separable
    deficits, which keeps the relative error small when the region is thin.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    front, rbar = spec.front, spec.rbar
    if np.any(rbar <= 0):
        return VolumeEstimate(0.0, 0.0, "mc", n_samples)
    if box == "tight":
        lo = _tight_box(front, rbar)
        if lo is None:
            return VolumeEstimate(0.0, 0.0, "mc", n_samples)
    elif box == "ideal":
        lo = np.zeros(front.m)
    else:
        raise ValueError(f"unknown box {box!r}")
    width = rbar - lo
    hits = 0
    remaining = n_samples
    while remaining > 0:
        n = min(chunk, remaining)
        z = lo + width * rng.random((n, front.m))
        hits += int(np.count_nonzero(front.contains_normalized(z)))
        remaining -= n
    q = hits / n_samples
    box_vol = float(np.prod(width)) * spec.scale
    return VolumeEstimate(box_vol * q, box_vol * np.sqrt(q * (1.0 - q) / n_samples), "mc", n_samples)


# ---------------------------------------------------------------------------
# closed-form limits


def volume_limit_pinf(reference: np.ndarray, bounds: FrontBounds) -> float:
    """Enclosed volume of the box front (single Pareto point at the ideal)."""
    r = np.asarray(reference, dtype=float)
    return float(np.prod(np.maximum(r - bounds.ideal, 0.0)))


def volume_limit_pzero(reference: np.ndarray, bounds: FrontBounds) -> float:
    """Enclosed volume when the front collapses onto the nadir flanges.

    The region is the set of points below ``r`` with at most one objective
    better than the nadir.
    """
    r = np.asarray(reference, dtype=float)
    low = np.clip(np.minimum(bounds.nadir, r) - bounds.ideal, 0.0, None)
    high = np.maximum(r - bounds.nadir, 0.0)
    total = float(np.prod(high))
    for k in range(len(r)):
        total += float(low[k] * np.prod(np.delete(high, k)))
    return total


# ---------------------------------------------------------------------------
# scalarization integral


def orthant_sphere_area(m: int) -> float:
    """Surface measure of the unit sphere's positive orthant in R^m."""
    return 2.0 * pi ** (m / 2) / gamma(m / 2) / 2**m


def chebyshev_radius(spec: EnclosedRegionSpec, directions: np.ndarray, iterations: int = 80) -> np.ndarray:
    """Largest ``t`` with ``r - t * lam`` still weakly dominated by the WPF, per direction."""
    front = spec.front
    r = spec.reference
    lam = np.asarray(directions, dtype=float)
    ide = front.bounds.ideal
    with np.errstate(divide="ignore"):
        t_max = np.min(np.where(lam > 0, (r - ide) / lam, np.inf), axis=1)
    t_max = np.maximum(t_max, 0.0)
    if not front.contains(r[None, :])[0]:
        return np.zeros(len(lam))
    lo = np.zeros(len(lam))
    hi = t_max.copy()
    at_max = front.contains(r - hi[:, None] * lam)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        inside = front.contains(r - mid[:, None] * lam)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return np.where(at_max, t_max, lo)


def volume_scalarized(
    spec: EnclosedRegionSpec,
    n_directions: int = 100_000,
    seed: int | np.random.Generator | None = 0,
) -> VolumeEstimate:
    """Polar-integral estimate ``(1/m) * area(S+) * E[rho^m]`` over random directions."""
    if n_directions < 2:
        raise ValueError("n_directions must be at least 2")
    rng = np.random.default_rng(seed)
    m = spec.front.m
    lam = np.abs(rng.standard_normal((n_directions, m)))
    lam /= np.linalg.norm(lam, axis=1, keepdims=True)
    rho_m = chebyshev_radius(spec, lam) ** m
    factor = orthant_sphere_area(m) / m
    return VolumeEstimate(
        float(factor * rho_m.mean()),
        float(factor * rho_m.std(ddof=1) / np.sqrt(n_directions)),
        "scalarized",
        n_directions,
    )


def estimate_volume(spec: EnclosedRegionSpec, method: str = "mc", **kwargs) -> VolumeEstimate:
    """Dispatch to one of ``exact``, ``mc`` or ``scalarized``."""
    if method == "exact":
        return volume_exact_linear(spec)
    if method == "mc":
        return volume_monte_carlo(spec, **kwargs)
    if method == "scalarized":
        return volume_scalarized(spec, **kwargs)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepCurve:
    """Volume along a one-parameter family of reference points."""

    x: np.ndarray
    values: np.ndarray
    std_errors: np.ndarray
    method: str
    m: int
    nu: int
    p: float
    r_free: float

    def rows(self) -> list[tuple]:
        return [
            (float(x), float(v), float(e), self.method, self.m, self.nu, self.p, self.r_free)
            for x, v, e in zip(self.x, self.values, self.std_errors)
        ]


def _front_p(front: FrontSpec) -> float:
    if isinstance(front, CaseStudyFront):
        return float(front.p)
    p = np.asarray(getattr(getattr(front, "params", None), "p", np.nan), dtype=float)
    return float(p.ravel()[0])


def _normal(front: FrontSpec, coords: list[int], base: np.ndarray) -> np.ndarray:
    slopes = np.array([-float(front.deficit_slope(j, np.array(b))) for j, b in zip(coords, base)])
    if np.any(np.isinf(slopes)):
        n = np.isinf(slopes).astype(float)
    else:
        n = np.maximum(slopes, 0.0)
    norm = np.linalg.norm(n)
    if norm == 0:
        return np.full(len(coords), 1.0 / np.sqrt(len(coords)))
    return n / norm


def wpb_base_point(front: FrontSpec, coords: list[int], shares: np.ndarray) -> np.ndarray:
    """Normalized coordinates on ``sum_{j in coords} phi_j = 1`` with the given deficit shares."""
    return np.array([float(front.deficit_inverse(j, np.array(s))) for j, s in zip(coords, shares)])


def sweep_reference(
    front: FrontSpec,
    index_set: IndexSet,
    delta: float,
    r_free: float,
    shares: np.ndarray | None = None,
) -> np.ndarray:
    """Reference point at normal distance ``delta`` from a WPB (objective units).

    The base point splits the unit deficit among the constrained objectives
    according to ``shares`` (equal by default); free objectives sit at
    ``r_free`` in normalized units.
    """
    coords = list(index_set.members)
    nu = len(coords)
    shares = np.full(nu, 1.0 / nu) if shares is None else np.asarray(shares, dtype=float)
    base = wpb_base_point(front, coords, shares)
    rbar = np.full(front.m, float(r_free))
    rbar[coords] = base + delta * _normal(front, coords, base)
    return front.bounds.denormalize(rbar)


def _estimate(front: FrontSpec, ref: np.ndarray, method: str, n_samples: int, seed) -> VolumeEstimate:
    spec = EnclosedRegionSpec(front, ref)
    if method == "exact":
        return volume_exact_linear(spec)
    if method == "mc":
        return volume_monte_carlo(spec, n_samples=n_samples, seed=seed)
    if method == "scalarized":
        return volume_scalarized(spec, n_directions=n_samples, seed=seed)
    raise ValueError(f"unknown method {method!r}")


def delta_sweep(
    front: FrontSpec,
    nu: int,
    index_set: IndexSet | None = None,
    r_free: float = 1.3,
    deltas=(),
    method: str = "mc",
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> SweepCurve:
    """Volume as the reference moves away from the middle of a WPB.

    The same seed is used at every distance (common random numbers), which
    keeps stochastic curves smooth and comparable across sweeps.
    """
    if index_set is None:
        index_set = IndexSet(tuple(range(nu)))
    if len(index_set) != nu:
        raise ValueError("index_set size must equal nu")
    deltas = np.asarray(deltas, dtype=float)
    if np.any(deltas < 0) or np.any(np.diff(deltas) <= 0):
        raise ValueError("deltas must be nonnegative and strictly ascending")
    vals, errs = [], []
    for delta in deltas:
        est = _estimate(front, sweep_reference(front, index_set, delta, r_free), method, n_samples, seed)
        vals.append(est.value)
        errs.append(est.std_error)
    return SweepCurve(deltas, np.array(vals), np.array(errs), method, front.m, nu, _front_p(front), float(r_free))


def midline_sweep(
    front: FrontSpec,
    index_set: IndexSet,
    delta: float,
    positions,
    r_free: float = 1.3,
    method: str = "mc",
    n_samples: int = 1_000_000,
    seed: int = 0,
) -> SweepCurve:
    """Volume at fixed normal distance while moving from the middle of a WPB to its edge.

    Position 0 is the equal-share middle; position 1 puts the whole deficit
    on the first constrained objective, the edge where the other constrained
    objectives reach the nadir.
    """
    coords = list(index_set.members)
    nu = len(coords)
    positions = np.asarray(positions, dtype=float)
    if np.any(positions < 0) or np.any(positions > 1):
        raise ValueError("positions must lie in [0, 1]")
    first = np.zeros(nu)
    first[0] = 1.0
    vals, errs = [], []
    for t in positions:
        shares = (1.0 - t) / nu + t * first
        ref = sweep_reference(front, index_set, delta, r_free, shares)
        est = _estimate(front, ref, method, n_samples, seed)
        vals.append(est.value)
        errs.append(est.std_error)
    return SweepCurve(positions, np.array(vals), np.array(errs), method, front.m, nu, _front_p(front), float(r_free))


def growth_order(curve: SweepCurve | tuple, max_delta: float = 0.1, n_points: int = 5) -> float:
    """Log-log slope of volume against distance over the smallest distances.

    Args:
        curve: A :class:`SweepCurve` or an ``(x, values)`` pair.
        max_delta: Only distances up to this value are used.
        n_points: Number of smallest usable distances in the fit.

    Raises:
        ValueError: If fewer than 3 points have positive distance and volume.
    """
    if isinstance(curve, SweepCurve):
        x, v = curve.x, curve.values
    else:
        x, v = (np.asarray(a, dtype=float) for a in curve)
    ok = (x > 0) & (x <= max_delta) & (v > 0)
    x, v = x[ok], v[ok]
    order = np.argsort(x)[:n_points]
    if len(order) < 3:
        raise ValueError("need at least 3 points with positive distance and volume")
    slope, _ = np.polyfit(np.log(x[order]), np.log(v[order]), 1)
    return float(slope)


def crossing_point(x, y1, y2) -> float:
    """First ``x`` where ``y1 - y2`` changes sign, by linear interpolation; NaN if none."""
    x = np.asarray(x, dtype=float)
    diff = np.asarray(y1, dtype=float) - np.asarray(y2, dtype=float)
    nz = np.flatnonzero(diff != 0)
    for a, b in zip(nz[:-1], nz[1:]):
        if np.sign(diff[a]) != np.sign(diff[b]):
            return float(x[a] + (x[b] - x[a]) * diff[a] / (diff[a] - diff[b]))
    return float("nan")
