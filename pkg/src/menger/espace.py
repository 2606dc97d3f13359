"""E-spaces over a finite probability space.

A point is a measurable map from the outcomes to a base metric space, stored
as a numpy array with one row per outcome.  The distance distribution between
two points is F_pq(u) = P{w : d(p(w), q(w)) < u}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .ddf import DDF, EPS0, _from_cells, ky_fan
from .pmspace import FinitePMSpace, build_space

PROB_TOL = 1e-12


@lru_cache(maxsize=256)
def _mass_table(probs: tuple[float, ...]) -> np.ndarray:
    """Mass of every outcome subset, indexed by bitmask.

    fsum makes the mass a function of the set alone, so equal sets give equal
    floats no matter how they were reached.
    """
    n = len(probs)
    table = np.empty(1 << n)
    for mask in range(1 << n):
        table[mask] = math.fsum(p for i, p in enumerate(probs) if mask >> i & 1)
    table[-1] = 1.0
    return table


@dataclass(frozen=True)
class FiniteProbSpace:
    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise ValueError("probability space needs at least one outcome")
        if any(not p > 0 for p in probs):
            raise ValueError(f"outcome probabilities must be positive: {probs}")
        if abs(math.fsum(probs) - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    @property
    def n(self) -> int:
        return len(self.probs)

    def mass(self, mask: np.ndarray | Sequence[bool]) -> float:
        """P of the outcome set selected by a boolean mask."""
        bits = np.asarray(mask, dtype=bool)
        if self.n <= 16:
            return float(_mass_table(self.probs)[int(bits @ (1 << np.arange(self.n)))])
        if bits.all():
            return 1.0
        return math.fsum(p for p, b in zip(self.probs, bits) if b)

    def masses(self, masks: np.ndarray) -> np.ndarray:
        """Vectorised ``mass`` over the last axis of a boolean array (n <= 16)."""
        if self.n > 16:
            return np.apply_along_axis(self.mass, -1, masks)
        idx = masks.astype(np.int64) @ (1 << np.arange(self.n, dtype=np.int64))
        return _mass_table(self.probs)[idx]


def distance_ddf(prob: FiniteProbSpace, dists: np.ndarray) -> DDF:
    """Step d.d.f. of a random distance given per-outcome values."""
    dists = np.asarray(dists, dtype=float)
    if dists.shape != (prob.n,):
        raise ValueError(f"expected {prob.n} per-outcome distances, got shape {dists.shape}")
    levels = np.unique(dists)
    vals = [prob.mass(dists <= d) for d in levels]
    return _from_cells(levels.tolist(), vals)


@dataclass(frozen=True)
class Euclidean:
    dim: int

    def coerce(self, raw, n: int) -> np.ndarray:
        arr = np.asarray(raw, dtype=float)
        if self.dim == 1 and arr.shape == (n,):
            arr = arr.reshape(n, 1)
        if arr.shape != (n, self.dim):
            raise ValueError(f"point shape {arr.shape} does not match ({n}, {self.dim})")
        return arr

    def distances(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        diff = p - q
        return np.sqrt(np.sum(diff * diff, axis=-1))

    def to_json(self) -> dict:
        return {"kind": "euclidean", "dim": self.dim}


@dataclass(frozen=True)
class TableMetric:
    """A finite base metric given by its distance matrix."""

    dist: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance table must be square")
        if np.any(np.diag(d) != 0) or np.any(d < 0) or np.any(d != d.T):
            raise ValueError("distance table must be symmetric, nonnegative, zero on the diagonal")
        off = d + np.eye(len(d))
        if np.any(off <= 0):
            raise ValueError("distance table must separate points")
        if np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + 1e-12):
            raise ValueError("distance table violates the triangle inequality")
        object.__setattr__(self, "dist", tuple(tuple(float(x) for x in row) for row in d))

    @property
    def size(self) -> int:
        return len(self.dist)

    def coerce(self, raw, n: int) -> np.ndarray:
        arr = np.asarray(raw)
        if arr.shape != (n,) or not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"table-metric point must be {n} integer labels")
        if np.any(arr < 0) or np.any(arr >= self.size):
            raise ValueError("table-metric label out of range")
        return arr.astype(np.int64)

    def distances(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return np.asarray(self.dist)[p, q]

    def to_json(self) -> dict:
        return {"kind": "table", "dist": [list(r) for r in self.dist]}


def base_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "euclidean":
        return Euclidean(int(obj["dim"]))
    if kind == "table":
        return TableMetric(tuple(tuple(r) for r in obj["dist"]))
    raise ValueError(f"unknown base metric kind {kind!r}")


@dataclass
class ESpaceInstance:
    prob: FiniteProbSpace
    base: Euclidean | TableMetric
    points: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.points = [self.coerce(p) for p in self.points]

    def coerce(self, raw) -> np.ndarray:
        return self.base.coerce(raw, self.prob.n)

    def ddf(self, p: np.ndarray, q: np.ndarray) -> DDF:
        return espace_ddf(self, p, q)

    def labelled(self):
        return list(enumerate(self.points))

    def pairwise_distances(self, pts: Sequence[np.ndarray]) -> np.ndarray:
        """Array D[i, j, w] of base distances between pts[i](w) and pts[j](w)."""
        arr = np.stack(pts)
        if isinstance(self.base, Euclidean):
            diff = arr[:, None] - arr[None, :]
            return np.sqrt(np.sum(diff * diff, axis=-1))
        table = np.asarray(self.base.dist)
        return table[arr[:, None, :], arr[None, :, :]]

    def representatives(self) -> list[int]:
        """For each point, the index of the first point a.e. equal to it."""
        reps = []
        for i, p in enumerate(self.points):
            for j in range(i):
                if reps[j] == j and espace_ddf(self, p, self.points[j]) == EPS0:
                    reps.append(j)
                    break
            else:
                reps.append(i)
        return reps

    def to_json(self) -> dict:
        return {
            "probs": list(self.prob.probs),
            "base": self.base.to_json(),
            "points": [p.tolist() for p in self.points],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ESpaceInstance":
        return cls(FiniteProbSpace(tuple(obj["probs"])), base_from_json(obj["base"]), list(obj["points"]))


def espace_ddf(inst: ESpaceInstance, p, q) -> DDF:
    p = inst.coerce(p)
    q = inst.coerce(q)
    return distance_ddf(inst.prob, inst.base.distances(p, q))


def espace_to_pm(inst: ESpaceInstance) -> FinitePMSpace:
    """Finite PM space on the a.e.-classes of the working points, labelled by first index."""
    reps = inst.representatives()
    ids = [i for i, r in enumerate(reps) if i == r]
    table = {}
    for a_pos, a in enumerate(ids):
        for b in ids[a_pos + 1:]:
            table[(a, b)] = espace_ddf(inst, inst.points[a], inst.points[b])
    return build_space(ids, table)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> A x + c applied outcome by outcome; A is a scalar or a d x d matrix."""

    matrix: np.ndarray
    offset: np.ndarray | float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.matrix.ndim == 0:
            return self.matrix * x + self.offset
        return x @ self.matrix.T + self.offset

    @property
    def is_linear(self) -> bool:
        return not np.any(self.offset)

    def to_json(self) -> dict:
        return {"kind": "affine", "scale": self.matrix.tolist(), "offset": self.offset.tolist()}


@dataclass
class BridgePair:
    p: int
    q: int
    ky_fan: float
    hypothesis_steps: list[int]
    witness: int | None
    falsified: bool


@dataclass
class BridgeReport:
    m: int
    k: float
    pairs: list[BridgePair]

    @property
    def ok(self) -> bool:
        return not any(pr.falsified for pr in self.pairs)


def bridge_check(
    inst: ESpaceInstance,
    f: Callable[[np.ndarray], np.ndarray],
    m: int,
    k: float,
    pairs: Sequence[tuple[int, int]],
    max_points: int = 100_000,
) -> BridgeReport:
    """Base-metric contraction in the Ky Fan metric implies the (m,k)-C condition.

    For each pair, the steps i <= m with ky(F_{f^i p, f^i q}) <= k^i ky(F_pq)
    are collected; the C condition must hold at each of them.  A step where the
    hypothesis holds but the C condition does not is a falsification.
    """
    from .contraction import c_condition

    _check_mk(m, k)
    out = []
    materialized = 0
    for a, b in pairs:
        p, q = inst.points[a], inst.points[b]
        F = espace_ddf(inst, p, q)
        d0 = ky_fan(F)
        hyp, witness, falsified = [], None, False
        for i in range(1, m + 1):
            p, q = f(p), f(q)
            materialized += 2
            if materialized > max_points:
                raise RuntimeError("orbit exploration exceeded the point budget")
            G = espace_ddf(inst, p, q)
            if ky_fan(G) <= k**i * d0:
                hyp.append(i)
                if c_condition(F, G, k**i, k**i):
                    if witness is None:
                        witness = i
                else:
                    falsified = True
        out.append(BridgePair(a, b, d0, hyp, witness, falsified))
    return BridgeReport(m, k, out)


def _check_mk(m: int, k: float) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"m must be an integer >= 1, got {m}")
    if not 0.0 < k < 1.0:
        raise ValueError(f"k must lie in (0, 1), got {k}")
