"""Seeded random instances.

All coordinates, breakpoints and probabilities are dyadic rationals with few
significant bits, so sums, differences and power-of-two scalings stay exact
in binary floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import check_mk_b, check_mk_c
from .ddf import DDF, EPS0, make_ddf
from .espace import AffineMap, ESpaceInstance, Euclidean, FiniteProbSpace
from .pmspace import FinitePMSpace
from .pnspace import FinitePNSpace

PROB_GRID = 2.0**-32
COORD_GRID = 1.0 / 8


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_ddf(rng, max_breaks: int = 5, hi: float = 5.0, grid: float = 1 / 64,
               value_grid: float = 1 / 16, d_plus: bool | None = None) -> DDF:
    n = int(rng.integers(1, max_breaks + 1))
    ticks = rng.choice(int(hi / grid) + 1, size=n, replace=False)
    bps = np.sort(ticks) * grid
    levels = np.sort(rng.integers(1, int(1 / value_grid) + 1, size=n)) * value_grid
    if d_plus is None:
        d_plus = bool(rng.random() < 0.7)
    if d_plus:
        levels[-1] = 1.0
    return make_ddf(bps.tolist(), levels.tolist())


def random_probs(rng, n: int) -> FiniteProbSpace:
    """Dirichlet(1,...,1) rounded to multiples of 2^-32, last entry absorbing the remainder."""
    while True:
        raw = rng.dirichlet(np.ones(n))
        q = np.round(raw[:-1] / PROB_GRID) * PROB_GRID
        last = 1.0 - float(np.sum(q))
        probs = np.append(q, last)
        if np.all(probs > 0):
            return FiniteProbSpace(tuple(float(p) for p in probs))


def random_coords(rng, shape, lo: float = -4.0, hi: float = 4.0) -> np.ndarray:
    ticks = rng.integers(int(lo / COORD_GRID), int(hi / COORD_GRID) + 1, size=shape)
    return ticks * COORD_GRID


def random_espace(rng, n_points: int, n_outcomes: int, dim: int = 2) -> ESpaceInstance:
    prob = random_probs(rng, n_outcomes)
    pts = [random_coords(rng, (n_outcomes, dim)) for _ in range(n_points)]
    return ESpaceInstance(prob, Euclidean(dim), pts)


def random_pnspace(rng, n_outcomes: int, dim: int = 2, tau: str = "W", tau_star: str = "M") -> FinitePNSpace:
    return FinitePNSpace(random_probs(rng, n_outcomes), dim, tau, tau_star)


def cyclic_contraction_matrix(rng, m: int, k: float) -> np.ndarray:
    """A with A^m = k^m Q for a signed identity Q, and A not a k-contraction by itself when m > 1.

    A = k * S P D, P a cyclic shift of m coordinates, D positive weights with
    product 1 (powers of two), S random signs.  For m = 1 this is a signed
    coordinate swap in the plane, an isometry scaled by k.
    """
    if m == 1:
        P = np.array([[0.0, 1.0], [1.0, 0.0]])
        S = np.diag(rng.choice([-1.0, 1.0], size=2))
        return k * S @ P
    weights = np.ones(m)
    weights[0], weights[1] = 2.0, 0.5
    weights = rng.permutation(weights)
    P = np.roll(np.eye(m), 1, axis=0)
    S = np.diag(rng.choice([-1.0, 1.0], size=m))
    return k * S @ P @ np.diag(weights)


@dataclass
class ContractionFixture:
    inst: ESpaceInstance
    f: AffineMap
    m: int
    k: float

    def to_json(self) -> dict:
        return {"instance": self.inst.to_json(), "map": self.f.to_json(), "m": self.m, "k": self.k}


def contraction_fixture(rng, m: int, k: float = 0.5, n_points: int = 4, n_outcomes: int = 3,
                        affine: bool = False, certify: str = "b", max_tries: int = 1000) -> ContractionFixture:
    """E-space with a map contracting every outcome's base distance by k^m after m steps.

    Such a map is always an (m,k)-B-contraction.  It is usually not an
    (m,k)-C-contraction on a generic E-space: the C condition asks that the
    image's Ky Fan value shrink by k^i, which base scaling does not give when
    small and large distances mix.  With ``certify="c"`` the points are a
    shared random outcome offset plus a small per-point shift and sparse
    per-outcome jitter, and draws are rejected until check_mk_c passes.
    """
    if certify not in ("b", "c", "none"):
        raise ValueError("certify must be 'b', 'c' or 'none'")
    if n_points < 1 or n_outcomes < 1:
        raise ValueError("need at least one point and one outcome")
    dim = 2 if m == 1 else m
    A = cyclic_contraction_matrix(rng, m, k)
    offset = random_coords(rng, (n_outcomes, dim)) if affine else 0.0
    f = AffineMap(A, offset)
    if certify != "c":
        inst = random_espace(rng, n_points, n_outcomes, dim)
        fx = ContractionFixture(inst, f, m, k)
        if certify == "b" and not check_mk_b(inst, f, m, k).ok:
            raise AssertionError("generated fixture failed its B certification")
        return fx
    prob = random_probs(rng, n_outcomes)
    for _ in range(max_tries):
        shared = random_coords(rng, (n_outcomes, dim))
        pts = [
            shared + rng.integers(-4, 5, size=dim) / 16 + rng.integers(-2, 3, size=(n_outcomes, dim)) / 64
            for _ in range(n_points)
        ]
        inst = ESpaceInstance(prob, Euclidean(dim), pts)
        if check_mk_c(inst, f, m, k).ok and check_mk_b(inst, f, m, k).ok:
            return ContractionFixture(inst, f, m, k)
    raise RuntimeError(f"no C-certified fixture within {max_tries} draws")


def halving_instance() -> tuple[ESpaceInstance, AffineMap]:
    """Two equally likely outcomes on the real line, the point (1, 3) and x -> x/2."""
    inst = ESpaceInstance(FiniteProbSpace((0.5, 0.5)), Euclidean(1), [[1.0, 3.0], [0.0, 0.0]])
    return inst, AffineMap(0.5)


def table_space_from_espace(inst: ESpaceInstance) -> FinitePMSpace:
    from .espace import espace_to_pm

    return espace_to_pm(inst)


def random_table_space(rng, n_points: int, d_plus: bool = True) -> FinitePMSpace:
    """Random symmetric table of dyadic step d.d.f.s; no Menger inequality is imposed."""
    from .pmspace import build_space

    pts = [str(i) for i in range(n_points)]
    table = {}
    for a in range(n_points):
        for b in range(a + 1, n_points):
            F = random_ddf(rng, d_plus=d_plus)
            while F == EPS0:
                F = random_ddf(rng, d_plus=d_plus)
            table[(pts[a], pts[b])] = F
    return build_space(pts, table)


def random_self_map(rng, points, image_size: int | None = None) -> dict:
    """Random map into a random subset of at most ``image_size`` points."""
    pts = list(points)
    size = image_size or int(rng.integers(1, len(pts) + 1))
    image = [pts[i] for i in rng.choice(len(pts), size=size, replace=False)]
    return {p: image[int(rng.integers(len(image)))] for p in pts}


def periodic_points(f: dict) -> dict:
    """Each periodic point mapped to the length of its cycle."""
    out = {}
    for p in f:
        x, n = f[p], 1
        while x != p and n <= len(f):
            x, n = f[x], n + 1
        if x == p:
            out[p] = n
    return out


def alternating_instance(k: float = 0.5) -> tuple[ESpaceInstance, AffineMap]:
    """Points on the first axis of the plane; base distances scale by 2k, then k/2, alternately.

    For k = 1/2 the factors are 1 then k^2, so the map contracts only every
    second step and is a (2, k)-B-contraction but not a (1, k)-one.
    """
    A = k * np.array([[0.0, 1.0], [1.0, 0.0]]) @ np.diag([2.0, 0.5])
    prob = FiniteProbSpace((0.5, 0.25, 0.25))
    pts = [
        [[1.0, 0.0], [3.0, 0.0], [-2.0, 0.0]],
        [[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]],
        [[-1.0, 0.0], [2.0, 0.0], [0.25, 0.0]],
    ]
    return ESpaceInstance(prob, Euclidean(2), pts), AffineMap(A)
