"""Population quality indicators: exact hypervolume and IGD."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.spatial import cKDTree

from .core import FrontBounds, nondominated_filter


def _hv_recursive(points: np.ndarray, ref: np.ndarray) -> float:
    """Hypervolume of points that all strictly dominate ``ref``."""
    n, m = points.shape
    if n == 0:
        return 0.0
    if m == 1:
        return float(ref[0] - points[:, 0].min())
    if m == 2:
        pts = points[np.lexsort((points[:, 1], points[:, 0]))]
        total, best_y = 0.0, ref[1]
        for x, y in pts:
            if y < best_y:
                total += (ref[0] - x) * (best_y - y)
                best_y = y
        return total
    # slice along the last objective: between consecutive levels the covered
    # set is the (m-1)-dimensional union of all points at or below the level
    order = np.argsort(points[:, -1], kind="stable")
    pts = points[order]
    levels = np.append(pts[:, -1], ref[-1])
    total = 0.0
    for i in range(n):
        height = levels[i + 1] - levels[i]
        if height <= 0:
            continue
        front = nondominated_filter(pts[: i + 1, :-1])
        total += height * _hv_recursive(np.unique(front, axis=0), ref[:-1])
    return total


def hypervolume(points, reference) -> float:
    """Exact hypervolume of the region dominated by ``points`` and bounded by ``reference``.

    Points that do not strictly dominate the reference in every objective
    contribute nothing. Supports up to five objectives.

    Raises:
        ValueError: On dimension mismatch or more than five objectives.
    """
    ref = np.asarray(reference, dtype=float)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        return 0.0
    if pts.shape[1] != ref.shape[0]:
        raise ValueError(f"points have {pts.shape[1]} objectives, reference has {ref.shape[0]}")
    if ref.shape[0] > 5:
        raise ValueError("exact hypervolume is limited to m <= 5")
    pts = pts[np.all(pts < ref, axis=1)]
    if len(pts) == 0:
        return 0.0
    pts = np.unique(nondominated_filter(pts), axis=0)
    return _hv_recursive(pts, ref)


@dataclass(frozen=True)
class BaselineSet:
    """Reference points for IGD, tagged by how they were obtained."""

    points: np.ndarray
    origin: Literal["pf_sample", "ideal_union"] = "pf_sample"

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] == 0:
            raise ValueError("baseline set is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("baseline points must be finite")
        object.__setattr__(self, "points", pts)


def igd(approx, baseline: BaselineSet | np.ndarray, bounds: FrontBounds) -> float:
    """Mean distance from each baseline point to its nearest approximation point.

    Both sets are normalized with ``bounds`` first.
    """
    a = np.atleast_2d(np.asarray(approx, dtype=float))
    if a.shape[0] == 0 or a.size == 0:
        raise ValueError("approximation set is empty")
    base = baseline.points if isinstance(baseline, BaselineSet) else np.atleast_2d(np.asarray(baseline, dtype=float))
    dist, _ = cKDTree(bounds.normalize(a)).query(bounds.normalize(base))
    return float(np.mean(dist))


def build_ideal_baseline(instance, algorithm_config, runs: int = 30, seed: int = 0) -> BaselineSet:
    """Union of final populations from ``runs`` runs on the position-only instance.

    On the position-only instance every solution is Pareto-optimal, so the
    union shows what the algorithm can reach in the absence of WPBs.
    """
    from .evolve import run

    if runs < 1:
        raise ValueError("runs must be at least 1")
    position_only = instance.position_only()
    seeds = np.random.SeedSequence(seed).generate_state(runs, dtype=np.uint64)
    finals = []
    for s in seeds:
        cfg = algorithm_config.with_seed(int(s))
        finals.append(run(position_only, cfg).final_objectives)
    return BaselineSet(np.concatenate(finals, axis=0), "ideal_union")
