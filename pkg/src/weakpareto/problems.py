"""Test problems with controllable weak Pareto boundaries.

Two generator families and a closed-form case-study front are provided. All
of them are described to the rest of the package through :class:`FrontSpec`,
which represents the weak Pareto front (WPF) in normalized coordinates
``zbar = (z - ideal) / (nadir - ideal)`` by separable, nonincreasing
*deficit* functions ``phi_j``. A normalized point is weakly dominated by the
WPF exactly when ``zbar >= 0`` and ``sum_j phi_j(zbar_j) <= 1``; the PF is the
part of that boundary where every coordinate lies in ``[0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core import FrontBounds, simplex_lattice

GeneratorTag = Literal["G1", "G2", "CaseStudy"]


def _vec(value, m: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(m, float(arr))
    if arr.shape != (m,):
        raise ValueError(f"{name} must be a scalar or have {m} entries, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# position and distance functions


def simplex_projection(xI: np.ndarray) -> np.ndarray:
    """Project position variables onto the unit simplex.

    Rows summing to zero map to the uniform vector. Works on the last axis.
    """
    x = np.asarray(xI, dtype=float)
    total = x.sum(axis=-1, keepdims=True)
    m = x.shape[-1]
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, x / safe, 1.0 / m)


def clip_to_d(yhat: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Cap each coordinate at ``d`` and hand the excess to the others.

    The excess above ``d`` is redistributed in proportion to each coordinate's
    remaining room ``max(0, d_j - yhat_j)``, so the result sums to one and
    never exceeds ``d``.
    """
    yhat = np.asarray(yhat, dtype=float)
    d = np.broadcast_to(np.asarray(d, dtype=float), yhat.shape)
    excess = np.maximum(0.0, yhat - d).sum(axis=-1, keepdims=True)
    room = np.maximum(0.0, d - yhat)
    room_total = room.sum(axis=-1, keepdims=True)
    safe = np.where(room_total > 0, room_total, 1.0)
    y = np.minimum(yhat, d) + excess * room / safe
    return np.where(room_total > 0, y, d)


def g1_position(xI: np.ndarray, params: GeneratorParams) -> np.ndarray:
    """Generator 1 position function ``h = (y / d) ** p``."""
    y = clip_to_d(simplex_projection(xI), params.d)
    return np.clip(y / params.d, 0.0, 1.0) ** params.p


def g2_position(xI: np.ndarray, params: GeneratorParams) -> np.ndarray:
    """Generator 2 position function: coordinates above ``d`` jump by ``gap``."""
    if params.gap is None:
        raise ValueError("Generator 2 requires a gap vector")
    yhat = simplex_projection(xI)
    y = np.where(yhat > params.d, yhat + params.gap, yhat)
    return np.clip(y / (1.0 + params.gap), 0.0, 1.0) ** params.p


def distance_function(xII: np.ndarray, ell) -> np.ndarray:
    """Nonnegative distance function ``ell * |2 x - 1|``; zero at ``x = 0.5``."""
    x = np.asarray(xII, dtype=float)
    return np.asarray(ell, dtype=float) * np.abs(2.0 * x - 1.0)


# ---------------------------------------------------------------------------
# parameter containers


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters of a generated instance; scalars broadcast to length ``m``.

    Attributes:
        m: Number of objectives (at least 2).
        s: Objective ranges, so the nadir is ``s + ideal``.
        p: Shape exponents of the front.
        ell: Overall WPB sizes, the maximum relative growth of each objective
            off the front.
        d: Relative WPB sizes in ``[1/(m-1), 1]``.
        gap: Jump sizes for Generator 2, ``None`` for Generator 1.
        ideal: Ideal objective vector.
    """

    m: int
    s: np.ndarray = 1.0
    p: np.ndarray = 1.0
    ell: np.ndarray = 0.0
    d: np.ndarray | None = None
    gap: np.ndarray | None = None
    ideal: np.ndarray = 0.0

    def __post_init__(self) -> None:
        m = int(self.m)
        if m < 2:
            raise ValueError("m must be at least 2")
        object.__setattr__(self, "m", m)
        d = 1.0 / (m - 1) if self.d is None else self.d
        for name, value in (("s", self.s), ("p", self.p), ("ell", self.ell), ("d", d), ("ideal", self.ideal)):
            object.__setattr__(self, name, _vec(value, m, name))
        if self.gap is not None:
            object.__setattr__(self, "gap", _vec(self.gap, m, "gap"))
            if np.any(self.gap < 0):
                raise ValueError("gap entries must be nonnegative")
        if np.any(self.s <= 0):
            raise ValueError("s entries must be positive")
        if np.any(self.p <= 0):
            raise ValueError("p entries must be positive")
        if np.any(self.ell < 0):
            raise ValueError("ell entries must be nonnegative")
        if np.any(self.d < 1.0 / (m - 1) - 1e-12) or np.any(self.d > 1.0):
            raise ValueError(f"d entries must lie in [1/(m-1), 1] = [{1.0 / (m - 1):.4g}, 1]")
        if not np.all(np.isfinite(self.ideal)):
            raise ValueError("ideal must be finite")

    @property
    def generator(self) -> GeneratorTag:
        return "G1" if self.gap is None else "G2"

    @property
    def bounds(self) -> FrontBounds:
        return FrontBounds(self.ideal, self.ideal + self.s)

    def position_only(self) -> GeneratorParams:
        """Same instance with ``ell = 0``: every solution is Pareto-optimal."""
        return GeneratorParams(self.m, self.s, self.p, 0.0, self.d, self.gap, self.ideal)


@dataclass(frozen=True)
class ProblemInstance:
    """A generated multi-objective problem with ``n = 2m`` variables in ``[0, 1]``."""

    params: GeneratorParams
    name: str | None = None

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return 2 * self.params.m

    @property
    def generator(self) -> GeneratorTag:
        return self.params.generator

    @property
    def bounds(self) -> FrontBounds:
        return self.params.bounds

    @property
    def front(self) -> GeneratorFront:
        return GeneratorFront(self.params)

    def position(self, xI: np.ndarray) -> np.ndarray:
        if self.generator == "G1":
            return g1_position(xI, self.params)
        return g2_position(xI, self.params)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Objective vectors for one solution or for the rows of a population."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} variables, got {x.shape[-1]}")
        m = self.m
        h = self.position(x[..., :m])
        g = distance_function(x[..., m:], self.params.ell)
        return self.params.s * h * (1.0 + g) + self.params.ideal

    def position_only(self) -> ProblemInstance:
        label = None if self.name is None else f"{self.name}-position"
        return ProblemInstance(self.params.position_only(), label)

    def sample_pf(self, divisions: int) -> np.ndarray:
        """Objective vectors of the PF from a simplex lattice of ``yhat`` values."""
        yhat = simplex_lattice(self.m, divisions)
        prm = self.params
        if self.generator == "G1":
            yhat = yhat[np.all(yhat <= prm.d + 1e-12, axis=1)]
            h = np.clip(yhat / prm.d, 0.0, 1.0) ** prm.p
        else:
            y = np.where(yhat > prm.d, yhat + prm.gap, yhat)
            h = np.clip(y / (1.0 + prm.gap), 0.0, 1.0) ** prm.p
        return prm.s * h + prm.ideal


# ---------------------------------------------------------------------------
# front descriptions


class FrontSpec:
    """Weak Pareto front described by per-coordinate deficit functions.

    Subclasses implement :meth:`deficit` and :meth:`deficit_inverse` on
    normalized coordinates and provide ``m``, ``bounds`` and ``extent``
    (the flange length of each coordinate beyond the nadir, normalized).
    """

    m: int
    bounds: FrontBounds
    extent: np.ndarray

    def deficit(self, zbar: np.ndarray) -> np.ndarray:
        """Per-coordinate deficits ``phi_j(zbar_j)``, same shape as ``zbar``."""
        raise NotImplementedError

    def deficit_inverse(self, j: int, t: np.ndarray) -> np.ndarray:
        """Smallest ``z`` in ``[0, 1]`` with ``phi_j(z) <= t``."""
        raise NotImplementedError

    def deficit_at_zero(self) -> np.ndarray:
        return self.deficit(np.zeros(self.m))

    def plateaus(self, j: int) -> list[tuple[float, float, float]]:
        """Intervals ``(lo, hi, value)`` on which ``phi_j`` is constant.

        Coordinates on a plateau can move without changing the constraint,
        which is what makes a boundary point weakly but not properly optimal.
        Only plateaus of positive length are returned.
        """
        ext = float(self.extent[j])
        return [(1.0, 1.0 + ext, 0.0)] if ext > 0 else []

    def linear_weights(self) -> np.ndarray | None:
        """``a`` such that ``phi_j(z) = a_j * max(0, 1 - z)``, or None."""
        return None

    def total_deficit(self, zbar: np.ndarray) -> np.ndarray:
        return self.deficit(np.asarray(zbar, dtype=float)).sum(axis=-1)

    def contains_normalized(self, zbar: np.ndarray) -> np.ndarray:
        """True where the normalized point is weakly dominated by the WPF."""
        zbar = np.asarray(zbar, dtype=float)
        return np.all(zbar >= 0, axis=-1) & (self.total_deficit(zbar) <= 1.0)

    def contains(self, z: np.ndarray) -> np.ndarray:
        return self.contains_normalized(self.bounds.normalize(z))

    def deficit_slope(self, j: int, z: np.ndarray, h: float = 1e-7) -> np.ndarray:
        """Left-sided finite-difference derivative of ``phi_j``."""
        z = np.asarray(z, dtype=float)
        zz = np.zeros((z.size, self.m))
        zz[:, j] = z.ravel()
        hi = self.deficit(zz)[:, j]
        zz[:, j] -= h
        lo = self.deficit(zz)[:, j]
        return ((hi - lo) / h).reshape(z.shape)


@dataclass(frozen=True)
class CaseStudyFront(FrontSpec):
    """Front family ``sum_j (1 - zbar_j) ** p = 1`` with flat flanges.

    ``p = inf`` gives the box front (a single Pareto point at the ideal).

    Attributes:
        m: Number of objectives.
        p: Shape exponent (``p > 0``).
        bounds: Ideal and nadir; defaults to the unit box.
        flange: Length of the WPB flanges beyond the nadir, normalized.
    """

    m: int
    p: float
    bounds: FrontBounds | None = None
    flange: float = 1.0
    extent: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ValueError("p must be positive")
        if self.bounds is None:
            object.__setattr__(self, "bounds", FrontBounds.unit(self.m))
        if self.bounds.m != self.m:
            raise ValueError("bounds dimension does not match m")
        object.__setattr__(self, "extent", np.full(self.m, float(self.flange)))

    def deficit(self, zbar: np.ndarray) -> np.ndarray:
        zbar = np.asarray(zbar, dtype=float)
        return np.maximum(0.0, 1.0 - zbar) ** self.p

    def deficit_inverse(self, j: int, t: np.ndarray) -> np.ndarray:
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        if np.isinf(self.p):
            return np.where(t >= 1.0, 0.0, 1.0)
        return 1.0 - t ** (1.0 / self.p)

    def deficit_slope(self, j: int, z: np.ndarray, h: float = 1e-7) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        base = np.maximum(0.0, 1.0 - z)
        with np.errstate(divide="ignore"):
            return np.where(base > 0, -self.p * base ** (self.p - 1.0), -np.inf if self.p < 1 else 0.0)

    def linear_weights(self) -> np.ndarray | None:
        return np.ones(self.m) if self.p == 1 else None


def case_study_membership(front: CaseStudyFront, z: np.ndarray) -> np.ndarray:
    """True iff ``z`` is weakly dominated by the case-study WPF.

    Tests ``sum_j max(0, 1 - zbar_j) ** p <= 1``, which covers the PF and every
    flange at once.
    """
    zbar = front.bounds.normalize(z)
    return front.total_deficit(zbar) <= 1.0


@dataclass(frozen=True)
class GeneratorFront(FrontSpec):
    """WPF of a generated instance, in objective units normalized by ``s``."""

    params: GeneratorParams

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def bounds(self) -> FrontBounds:
        return self.params.bounds

    @property
    def extent(self) -> np.ndarray:
        return self.params.ell

    def deficit(self, zbar: np.ndarray) -> np.ndarray:
        prm = self.params
        u = np.clip(np.asarray(zbar, dtype=float), 0.0, 1.0) ** (1.0 / prm.p)
        if prm.gap is None:
            return prm.d * (1.0 - u) / (prm.d.sum() - 1.0)
        w = (1.0 + prm.gap) * u
        big = w - prm.gap
        level = np.where(big > prm.d, big, np.minimum(prm.d, w))
        return (1.0 - level) / (prm.m - 1)

    def deficit_inverse(self, j: int, t: np.ndarray) -> np.ndarray:
        prm = self.params
        t = np.asarray(t, dtype=float)
        p, d = prm.p[j], prm.d[j]
        if prm.gap is None:
            base = 1.0 - t * (prm.d.sum() - 1.0) / d
        else:
            gap = prm.gap[j]
            level = 1.0 - t * (prm.m - 1)
            # below d the level is reached on the lower branch, above it after the jump
            base = np.where(level > d, (level + gap) / (1.0 + gap), level / (1.0 + gap))
        return np.clip(base, 0.0, 1.0) ** p

    def plateaus(self, j: int) -> list[tuple[float, float, float]]:
        prm = self.params
        ell = float(prm.ell[j])
        out = []
        if prm.gap is not None and prm.gap[j] > 0 and prm.d[j] < 1.0 and ell > 0:
            p, d, gap = prm.p[j], prm.d[j], prm.gap[j]
            lo = (d / (1.0 + gap)) ** p
            hi = min(((d + gap) / (1.0 + gap)) ** p, (1.0 + ell) * lo)
            if hi > lo:
                out.append((lo, hi, (1.0 - d) / (prm.m - 1)))
        if ell > 0:
            out.append((1.0, 1.0 + ell, 0.0))
        return out

    def linear_weights(self) -> np.ndarray | None:
        prm = self.params
        if not np.all(prm.p == 1):
            return None
        if prm.gap is None:
            return prm.d / (prm.d.sum() - 1.0)
        if np.all(prm.gap == 0):
            return np.full(prm.m, 1.0 / (prm.m - 1))
        return None


# ---------------------------------------------------------------------------
# catalog

_EMOP_TABLE: dict[int, dict] = {
    1: dict(p=2, ell=4, d=None),
    2: dict(p=1, ell=4, d=None),
    3: dict(p=0.5, ell=4, d=None),
    4: dict(p=1, ell=4, d=0.7),
    5: dict(p=1, ell=40, d=0.7),
    6: dict(p=1, ell=400, d=0.7),
    7: dict(p=1, ell=4000, d=0.7),
    8: dict(p=1, ell=40000, d=0.7),
    9: dict(p=1, ell=400, d=0.9),
    10: dict(p=1, ell=400, d=0.8),
    11: dict(p=1, ell=400, d=0.7),
    12: dict(p=1, ell=400, d=0.6),
    13: dict(p=1, ell=400, d=0.5),
    14: dict(p=2, ell=4, d=0.5, gap=1),
    15: dict(p=1, ell=4, d=0.5, gap=1),
    16: dict(p=0.5, ell=4, d=0.5, gap=1),
}

_MOPW_TABLE: dict[int, dict] = {
    1: dict(p=2, ell=4, d=0.5),
    2: dict(p=(0.5, 0.5, 2), ell=4, d=0.5),
    3: dict(p=0.5, ell=4, d=0.5),
    4: dict(p=0.5, ell=400, d=0.9),
    5: dict(p=2, ell=4, d=0.5, gap=0.2),
    6: dict(p=0.5, ell=4, d=0.9, gap=2),
    7: dict(p=2, ell=400, d=(0.5, 0.7, 0.7)),
    8: dict(p=(0.5, 0.5, 2), ell=400, d=(0.7, 0.5, 0.5)),
    9: dict(p=0.5, ell=40000, d=(1, 1, 0.5)),
    10: dict(p=0.5, ell=(4, 400, 40000), d=0.7),
    11: dict(p=(0.5, 0.5, 2), ell=4, d=0.5, gap=(2, 0, 0)),
    12: dict(p=0.5, ell=4, d=(1, 0.5, 0.5), gap=1),
    13: dict(p=2, ell=40000, d=0.5),
    14: dict(p=(0.5, 0.5, 2), ell=40000, d=0.5),
    15: dict(p=0.5, ell=40000, d=0.5),
    16: dict(p=0.5, ell=4, d=0.5, gap=2),
}

CATALOG_NAMES: tuple[str, ...] = tuple(f"EMOP{i}" for i in _EMOP_TABLE) + tuple(f"MOPW{i}" for i in _MOPW_TABLE)


def catalog(name: str, m: int = 3) -> ProblemInstance:
    """Named instance. EMOP instances take ``m``; MOPW instances are fixed at m=3.

    Raises:
        KeyError: If ``name`` is not a catalog entry.
    """
    key = name.strip().upper()
    if key.startswith("EMOP") and key[4:].isdigit() and int(key[4:]) in _EMOP_TABLE:
        row = _EMOP_TABLE[int(key[4:])]
        return ProblemInstance(GeneratorParams(m=m, s=1.0, ideal=0.0, **row), key)
    if key.startswith("MOPW") and key[4:].isdigit() and int(key[4:]) in _MOPW_TABLE:
        row = _MOPW_TABLE[int(key[4:])]
        return ProblemInstance(GeneratorParams(m=3, s=(100, 10, 1), ideal=(1, 2, 3), **row), key)
    raise KeyError(f"unknown instance {name!r}; valid names: {', '.join(CATALOG_NAMES)}")


# ---------------------------------------------------------------------------
# config text


def format_config(instance: ProblemInstance) -> str:
    """Serialize an instance as ``key = value`` lines."""
    prm = instance.params

    def vec(a: np.ndarray) -> str:
        return ",".join(f"{v:.17g}" for v in a)

    lines = []
    if instance.name:
        lines.append(f"name = {instance.name}")
    lines += [
        f"m = {prm.m}",
        f"generator = {prm.generator}",
        f"s = {vec(prm.s)}",
        f"p = {vec(prm.p)}",
        f"ell = {vec(prm.ell)}",
        f"d = {vec(prm.d)}",
    ]
    if prm.gap is not None:
        lines.append(f"gap = {vec(prm.gap)}")
    lines.append(f"ideal = {vec(prm.ideal)}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> ProblemInstance:
    """Inverse of :func:`format_config`; ``#`` starts a comment.

    Raises:
        ValueError: On malformed lines, unknown keys or inconsistent generator tags.
    """
    known = {"name", "m", "generator", "s", "p", "ell", "d", "gap", "ideal"}
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    if "m" not in values:
        raise ValueError("config must define m")

    def nums(key: str):
        if key not in values:
            return None
        parts = [float(tok) for tok in values[key].split(",") if tok.strip()]
        return parts[0] if len(parts) == 1 else tuple(parts)

    generator = values.get("generator", "G2" if "gap" in values else "G1").upper()
    if generator not in ("G1", "G2"):
        raise ValueError(f"generator must be G1 or G2, got {generator!r}")
    if (generator == "G2") != ("gap" in values):
        raise ValueError("gap must be given exactly when generator is G2")
    kwargs = {k: nums(k) for k in ("s", "p", "ell", "d", "gap", "ideal") if k in values}
    params = GeneratorParams(m=int(values["m"]), **kwargs)
    return ProblemInstance(params, values.get("name"))
