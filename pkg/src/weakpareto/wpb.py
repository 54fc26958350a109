"""Weak Pareto boundary categories, distances to them, and DRS counting.

A WPB category is labelled by the index set ``I`` of objectives that cannot
improve without degrading others. In normalized coordinates its points have

* ``zbar_I`` on the surface ``sum_{j in I} phi_j = c`` inside ``[0, 1]^I``, and
* every other coordinate on a plateau of its deficit function (a flange
  beyond the nadir, or a Generator 2 gap), where ``c`` is one minus the
  plateau values.

When the constrained coordinates cannot absorb ``c`` (some generator
settings with ``d > 1/(m-1)``), they sit at the ideal instead and the free
coordinates fill the region ``sum phi <= c``.

Distances are measured in normalized objective space. The constrained part
is matched against a dense surface sample with a k-d tree; the free part is
an exact interval distance. Since each piece is a product set, this equals
nearest-neighbour distance to the fully gridded piece without materializing
the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.spatial import cKDTree

from .core import IndexSet, index_sets
from .problems import FrontSpec, ProblemInstance

MAX_SURFACE_POINTS = 200_000


def _front_of(obj) -> FrontSpec:
    return obj.front if isinstance(obj, ProblemInstance) else obj


def sample_surface(
    front: FrontSpec,
    coords: tuple[int, ...],
    target: float,
    resolution: int,
    max_points: int = MAX_SURFACE_POINTS,
) -> np.ndarray:
    """Points of ``{sum_{j in coords} phi_j(z_j) = target} ∩ [0, 1]^coords``.

    Each coordinate takes a turn as the solved one: the others are gridded
    uniformly over ``[0, 1]`` (endpoints included) and the solved coordinate
    follows from the deficit inverse. The union covers steep and flat parts
    of the surface alike.

    Returns:
        Array of shape ``(N, len(coords))``; empty if the surface misses the box.
    """
    k = len(coords)
    phi0 = front.deficit_at_zero()
    if target < -1e-12 or target > sum(phi0[j] for j in coords) + 1e-12:
        return np.empty((0, k))
    if k == 1:
        return np.array([[float(front.deficit_inverse(coords[0], np.array(target)))]])
    res = resolution
    while res > 2 and k * res ** (k - 1) > max_points:
        res -= 1
    axis = np.linspace(0.0, 1.0, res)
    grid = np.stack(np.meshgrid(*([axis] * (k - 1)), indexing="ij"), axis=-1).reshape(-1, k - 1)
    blocks = []
    for pos, solved in enumerate(coords):
        others = [c for c in coords if c != solved]
        full = np.zeros((grid.shape[0], front.m))
        full[:, others] = grid
        rest = target - front.deficit(full)[:, others].sum(axis=1)
        ok = (rest >= -1e-12) & (rest <= phi0[solved] + 1e-12)
        block = np.empty((int(ok.sum()), k))
        block[:, [i for i in range(k) if i != pos]] = grid[ok]
        block[:, pos] = front.deficit_inverse(solved, np.clip(rest[ok], 0.0, None))
        blocks.append(block)
    return np.concatenate(blocks, axis=0)


@dataclass(frozen=True)
class WpbDescriptor:
    """One WPB category: the index set ``I`` of its constrained objectives.

    Attributes:
        front: Owning front description.
        index_set: Constrained objectives ``I``.
    """

    front: FrontSpec
    index_set: IndexSet

    @property
    def nu(self) -> int:
        return len(self.index_set)

    @property
    def free(self) -> tuple[int, ...]:
        return self.index_set.complement(self.front.m)

    @property
    def extent(self) -> np.ndarray:
        """Objective-unit range ``[nadir_j, nadir_j + span_j * extent_j]`` per free coordinate."""
        b = self.front.bounds
        f = list(self.free)
        return np.stack([b.nadir[f], b.nadir[f] + b.span[f] * self.front.extent[f]], axis=1)

    def label(self) -> str:
        return f"nu{self.nu}_{self.index_set.label().replace(',', '-')}"


def enumerate_wpbs(instance) -> list[WpbDescriptor]:
    """All nonempty WPB categories, ordered by ``nu`` then lexicographically.

    Categories whose free objectives include one with zero flange length are
    omitted, so a position-only instance has none.
    """
    front = _front_of(instance)
    out = []
    for nu in range(1, front.m):
        for iset in index_sets(front.m, nu):
            free = iset.complement(front.m)
            if all(front.extent[j] > 0 for j in free):
                out.append(WpbDescriptor(front, iset))
    return out


@dataclass
class _Piece:
    """Constrained surface sample times a box of free-coordinate intervals."""

    surface: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    tree: cKDTree = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.tree = cKDTree(self.surface)


@dataclass
class _Floor:
    """Constrained coordinates at the ideal; free ones in ``{sum phi <= c}``."""

    target: float
    surface: np.ndarray
    upper: np.ndarray
    tree: cKDTree | None = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.tree = cKDTree(self.surface) if len(self.surface) else None


class WpbSample:
    """Dense sample of one WPB category supporting distance queries.

    Args:
        desc: Category to sample.
        resolution: Grid points per dimension (at least 2).
    """

    def __init__(self, desc: WpbDescriptor, resolution: int = 200):
        if resolution < 2:
            raise ValueError("resolution must be at least 2")
        self.desc = desc
        self.resolution = int(resolution)
        front = desc.front
        I, free = desc.index_set.members, desc.free
        self.pieces: list[_Piece] = []
        choices = [front.plateaus(j) for j in free]
        phi0_I = float(sum(front.deficit_at_zero()[j] for j in I))
        for combo in product(*choices):
            target = 1.0 - sum(v for _, _, v in combo)
            if target <= 1e-12 or target > phi0_I + 1e-12:
                continue
            surface = sample_surface(front, I, target, resolution)
            if len(surface) == 0:
                continue
            lo = np.array([a for a, _, _ in combo])
            hi = np.array([b for _, b, _ in combo])
            self.pieces.append(_Piece(surface, lo, hi))
        self.floor: _Floor | None = None
        rest = 1.0 - phi0_I
        if rest > 1e-12 and free:
            surface = sample_surface(front, free, rest, resolution)
            self.floor = _Floor(rest, surface, 1.0 + front.extent[list(free)])

    @property
    def front(self) -> FrontSpec:
        return self.desc.front

    def normalized_points(self, max_points: int = 1_000_000) -> np.ndarray:
        """Materialize the gridded sample in normalized coordinates.

        Free coordinates are gridded over their intervals; the per-interval
        resolution is lowered if needed to stay under ``max_points``.
        """
        m = self.front.m
        I, free = list(self.desc.index_set.members), list(self.desc.free)
        blocks = []
        for piece in self.pieces:
            res = self.resolution
            while res > 2 and len(piece.surface) * res ** len(free) > max_points:
                res -= 1
            axes = [np.linspace(a, b, res) for a, b in zip(piece.lo, piece.hi)]
            fgrid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(free)) if free else np.empty((1, 0))
            pts = np.zeros((len(piece.surface) * len(fgrid), m))
            pts[:, I] = np.repeat(piece.surface, len(fgrid), axis=0)
            pts[:, free] = np.tile(fgrid, (len(piece.surface), 1))
            blocks.append(pts)
        if self.floor is not None and len(self.floor.surface):
            pts = np.zeros((len(self.floor.surface), m))
            pts[:, free] = self.floor.surface
            blocks.append(pts)
        return np.concatenate(blocks, axis=0) if blocks else np.empty((0, m))

    @property
    def points(self) -> np.ndarray:
        """Sample points in objective units."""
        return self.front.bounds.denormalize(self.normalized_points())

    def interior_mask(self, zbar: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """True for points away from the relative boundary of their piece.

        Boundary means a constrained coordinate at 0 or 1, or a free
        coordinate at an end of its plateau.
        """
        zbar = np.atleast_2d(zbar)
        I, free = list(self.desc.index_set.members), list(self.desc.free)
        zi = zbar[:, I]
        ok = np.all((zi > tol) & (zi < 1 - tol), axis=1)
        for j, col in zip(free, zbar[:, free].T):
            on_edge = np.zeros(len(zbar), dtype=bool)
            for lo, hi, _ in self.front.plateaus(j):
                on_edge |= (np.abs(col - lo) < tol) | (np.abs(col - hi) < tol)
            ok &= ~on_edge
        return ok

    def distance_normalized(self, zbar: np.ndarray) -> np.ndarray:
        """Distance from normalized points (rows) to the sampled category."""
        zbar = np.atleast_2d(np.asarray(zbar, dtype=float))
        I, free = list(self.desc.index_set.members), list(self.desc.free)
        best = np.full(len(zbar), np.inf)
        zI, zF = zbar[:, I], zbar[:, free]
        for piece in self.pieces:
            d_surf, _ = piece.tree.query(zI)
            gap = np.maximum(piece.lo - zF, 0.0) + np.maximum(zF - piece.hi, 0.0)
            best = np.minimum(best, np.sqrt(d_surf**2 + (gap**2).sum(axis=1)))
        if self.floor is not None:
            fl = self.floor
            clipped = np.clip(zF, 0.0, fl.upper)
            d_box2 = ((zF - clipped) ** 2).sum(axis=1) + (zI**2).sum(axis=1)
            full = np.zeros((len(zbar), self.front.m))
            full[:, free] = clipped
            inside = self.front.deficit(full)[:, free].sum(axis=1) <= fl.target
            d_reg = np.zeros(len(zbar))
            if fl.tree is not None and np.any(~inside):
                d_reg[~inside], _ = fl.tree.query(np.minimum(clipped[~inside], 1.0))
            best = np.minimum(best, np.sqrt(d_box2 + d_reg**2))
        return best


def sample_wpb(desc: WpbDescriptor, resolution: int = 200) -> WpbSample:
    """Build a :class:`WpbSample` for ``desc``."""
    return WpbSample(desc, resolution)


def distance_to_wpb(z: np.ndarray, sample: WpbSample) -> np.ndarray | float:
    """Normalized Euclidean distance from objective vector(s) ``z`` to a WPB.

    Returns a float for a single vector and an array for rows of a 2-D input.
    """
    z = np.asarray(z, dtype=float)
    dist = sample.distance_normalized(sample.front.bounds.normalize(np.atleast_2d(z)))
    return float(dist[0]) if z.ndim == 1 else dist


def count_drs(
    history: list[np.ndarray],
    samples: list[WpbSample],
    threshold: float = 0.05,
) -> dict[int, int]:
    """Count recorded objective vectors close to each WPB category.

    A vector counts once for every ``nu`` such that it lies within
    ``threshold`` of at least one ``WPB_{nu,i}``.

    Returns:
        Mapping from ``nu`` to the count, with a key for every ``nu`` present
        in ``samples``.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    counts = {s.desc.nu: 0 for s in samples}
    pops = [np.atleast_2d(np.asarray(p, dtype=float)) for p in history if len(p)]
    if not pops or not samples:
        return counts
    allz = np.concatenate(pops, axis=0)
    for nu in sorted(counts):
        close = np.zeros(len(allz), dtype=bool)
        for s in samples:
            if s.desc.nu == nu:
                close |= distance_to_wpb(allz, s) < threshold
        counts[nu] = int(close.sum())
    return counts


def boundary_share(front: FrontSpec, z: np.ndarray, first: int = 0, second: int = 1) -> np.ndarray:
    """Position of points along a two-objective WPB, as a deficit share.

    Returns ``phi_first / (phi_first + phi_second)``: 0 at the end where the
    first objective reaches the nadir, 0.5 in the middle for symmetric fronts
    and 1 at the other end.
    """
    phi = front.deficit(front.bounds.normalize(np.atleast_2d(z)))
    total = phi[:, first] + phi[:, second]
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, phi[:, first] / safe, 0.5)


def drs_positions(history: list[np.ndarray], sample: WpbSample, threshold: float = 0.05) -> np.ndarray:
    """Positions of dominance-resistant vectors along a two-objective WPB.

    A recorded vector qualifies when it lies within ``threshold`` of the
    category and every free objective is more than ``threshold`` beyond the
    nadir, so Pareto-optimal points near the front's edge are left out.

    Returns:
        Deficit shares (see :func:`boundary_share`) of the qualifying vectors.
    """
    if sample.desc.nu != 2:
        raise ValueError("positions are defined for categories with nu = 2")
    pops = [np.atleast_2d(np.asarray(p, dtype=float)) for p in history if len(p)]
    if not pops:
        return np.empty(0)
    Z = np.concatenate(pops, axis=0)
    zbar = sample.front.bounds.normalize(Z)
    close = sample.distance_normalized(zbar) < threshold
    off_front = np.all(zbar[:, list(sample.desc.free)] > 1.0 + threshold, axis=1)
    first, second = sample.desc.index_set.members
    return boundary_share(sample.front, Z[close & off_front], first, second)
