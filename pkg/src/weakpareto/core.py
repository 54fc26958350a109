"""Objective-space primitives: dominance relations, bounds and index sets.

Objective vectors and solutions are plain 1-D numpy arrays (populations are
2-D, one row per member). All comparisons are exact; no tolerance is applied
to dominance checks.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

ArrayLike = Sequence[float] | np.ndarray


def _pair(u: ArrayLike, v: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return u, v


def dominates(u: ArrayLike, v: ArrayLike) -> bool:
    """Return True if ``u`` Pareto-dominates ``v`` (minimization)."""
    u, v = _pair(u, v)
    return bool(np.all(u <= v) and np.any(u < v))


def cone_transform(z: np.ndarray, delta: ArrayLike) -> np.ndarray:
    """Map objective vectors to the space where cone dominance is Pareto dominance.

    Each component becomes ``z_i + delta_i * sum_{k != i} z_k``. Works on a
    single vector or on rows of a 2-D array.
    """
    z = np.asarray(z, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if delta.shape[-1] != z.shape[-1]:
        raise ValueError(f"delta has {delta.shape[-1]} entries, objectives have {z.shape[-1]}")
    if np.any(delta < 0) or np.any(delta >= 1):
        raise ValueError("delta entries must lie in [0, 1)")
    others = z.sum(axis=-1, keepdims=True) - z
    return z + delta * others


def cone_dominates(u: ArrayLike, v: ArrayLike, delta: ArrayLike) -> bool:
    """Dominance after the linear cone transform with parameters ``delta``."""
    u, v = _pair(u, v)
    return dominates(cone_transform(u, delta), cone_transform(v, delta))


def dominance_matrix(points: np.ndarray) -> np.ndarray:
    """Boolean matrix ``D`` with ``D[i, j]`` true iff row i dominates row j."""
    points = np.asarray(points, dtype=float)
    le = np.all(points[:, None, :] <= points[None, :, :], axis=2)
    lt = np.any(points[:, None, :] < points[None, :, :], axis=2)
    return le & lt


Relation = str | Callable[[np.ndarray, np.ndarray], bool]


def nondominated_filter(
    points: Sequence[ArrayLike] | np.ndarray,
    relation: Relation = "pareto",
    delta: ArrayLike | None = None,
) -> np.ndarray:
    """Return the members of ``points`` not dominated by any other member.

    Args:
        points: Objective vectors, one per row.
        relation: ``"pareto"``, ``"cone"`` (requires ``delta``) or a callable
            ``relation(u, v) -> bool`` meaning "u dominates v".
        delta: Cone parameters for ``relation="cone"``.

    Returns:
        The surviving rows in their original order. Mutually equal vectors
        never dominate each other, so duplicates are all kept.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("point set is empty")
    if callable(relation):
        n = pts.shape[0]
        keep = [not any(relation(pts[j], pts[i]) for j in range(n) if j != i) for i in range(n)]
        return pts[np.array(keep, dtype=bool)]
    if relation == "cone":
        if delta is None:
            raise ValueError("cone relation requires delta")
        dom = dominance_matrix(cone_transform(pts, delta))
    elif relation == "pareto":
        dom = dominance_matrix(pts)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return pts[~dom.any(axis=0)]


@dataclass(frozen=True)
class FrontBounds:
    """Ideal and nadir objective vectors of a Pareto front."""

    ideal: np.ndarray
    nadir: np.ndarray

    def __post_init__(self) -> None:
        ideal = np.asarray(self.ideal, dtype=float)
        nadir = np.asarray(self.nadir, dtype=float)
        if ideal.shape != nadir.shape or ideal.ndim != 1:
            raise ValueError("ideal and nadir must be 1-D vectors of equal length")
        if not np.all(np.isfinite(ideal)) or not np.all(np.isfinite(nadir)):
            raise ValueError("bounds must be finite")
        if not np.all(ideal < nadir):
            raise ValueError("ideal must lie strictly below nadir in every objective")
        ideal.setflags(write=False)
        nadir.setflags(write=False)
        object.__setattr__(self, "ideal", ideal)
        object.__setattr__(self, "nadir", nadir)

    @classmethod
    def unit(cls, m: int) -> FrontBounds:
        return cls(np.zeros(m), np.ones(m))

    @property
    def m(self) -> int:
        return self.ideal.shape[0]

    @property
    def span(self) -> np.ndarray:
        return self.nadir - self.ideal

    def normalize(self, z: ArrayLike) -> np.ndarray:
        return (np.asarray(z, dtype=float) - self.ideal) / self.span

    def denormalize(self, zbar: ArrayLike) -> np.ndarray:
        return np.asarray(zbar, dtype=float) * self.span + self.ideal


@dataclass(frozen=True, order=True)
class IndexSet:
    """A sorted set of 0-based objective indices (printed 1-based)."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(i) for i in self.members)))
        if not members:
            raise ValueError("index set must be nonempty")
        if members[0] < 0:
            raise ValueError("indices are 0-based and nonnegative")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def complement(self, m: int) -> tuple[int, ...]:
        return tuple(j for j in range(m) if j not in self.members)

    def label(self) -> str:
        """1-based label such as ``"1,2"``."""
        return ",".join(str(i + 1) for i in self.members)

    @classmethod
    def parse(cls, text: str) -> IndexSet:
        """Parse a 1-based, comma-separated label."""
        return cls(tuple(int(tok) - 1 for tok in text.split(",") if tok.strip()))


def index_sets(m: int, nu: int) -> list[IndexSet]:
    """All ``C(m, nu)`` index sets of size ``nu`` in lexicographic order."""
    return [IndexSet(c) for c in combinations(range(m), nu)]


def simplex_lattice(m: int, divisions: int) -> np.ndarray:
    """Das-Dennis lattice: all points of the unit simplex with coordinates k/divisions.

    Returns ``C(divisions + m - 1, m - 1)`` rows of length ``m``.
    """
    if m < 1 or divisions < 0:
        raise ValueError("need m >= 1 and divisions >= 0")
    if m == 1:
        return np.ones((1, 1))
    rows = []
    # stars and bars: choose the m-1 bar positions among divisions+m-1 slots
    for bars in combinations(range(divisions + m - 1), m - 1):
        prev = -1
        counts = []
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(divisions + m - 1 - prev - 1)
        rows.append(counts)
    return np.asarray(rows, dtype=float) / max(divisions, 1)
