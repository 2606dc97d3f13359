"""Picard iteration with Sibley-distance convergence and cycle detection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .combinatorics import IndexSet
from .contraction import ContractionPrecondition, as_map, check_mk_b, orbit
from .ddf import EPS0, sibley_to_eps0

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6


def _key(x):
    if isinstance(x, np.ndarray):
        return (x.shape, x.tobytes())
    return x


@dataclass
class OrbitTrace:
    points: list
    step_dists: list[float]
    outcome: str  # "converged" | "cycle" | "budget_exhausted"
    r: object = None
    cycle_offset: int | None = None
    cycle_length: int | None = None

    @property
    def iters(self) -> int:
        return len(self.step_dists)

    def summary(self, label=None) -> dict:
        out = {"outcome": self.outcome, "iters": self.iters}
        if self.outcome == "converged":
            out["r"] = label(self.r) if label else _jsonable(self.r)
        if self.outcome == "cycle":
            out["offset"] = self.cycle_offset
            out["length"] = self.cycle_length
        return out


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    return x


def picard_solve(space, f, p0, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> OrbitTrace:
    """Iterate x_{n+1} = f(x_n) until the step d.d.f. is within ``tol`` of eps0.

    The candidate r = x_{n+1} is accepted only if d_S(F_{r, f r}, eps0) <= tol
    as well; otherwise iteration continues.  Exact revisits end the run as a
    cycle (a revisit of length 1 is a fixed point and counts as converged).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = 10 * len(space.points) if not hasattr(space, "prob") else 10_000
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    f = as_map(f)
    xs = [p0]
    dists: list[float] = []
    seen = {_key(p0): 0}
    x = p0
    for n in range(max_iter):
        y = f(x)
        d = sibley_to_eps0(space.ddf(x, y))
        dists.append(d)
        xs.append(y)
        prev = seen.get(_key(y))
        if prev is not None:
            length = len(xs) - 1 - prev
            if length == 1:
                return OrbitTrace(xs, dists, "converged", r=y)
            return OrbitTrace(xs, dists, "cycle", cycle_offset=prev, cycle_length=length)
        seen[_key(y)] = len(xs) - 1
        if d <= tol:
            recheck = sibley_to_eps0(space.ddf(y, f(y)))
            if recheck <= tol:
                log.debug("converged after %d steps, recheck %.3g", n + 1, recheck)
                return OrbitTrace(xs, dists, "converged", r=y)
        x = y
    return OrbitTrace(xs, dists, "budget_exhausted")


class LemmaViolation(AssertionError):
    """A finite instance contradicts a statement that should hold for it."""


def cycle_collapse_check(space, f, m: int, k: float, p, n: int) -> bool:
    """If f is an (m,k)-B-contraction on the orbit of p and f^n p = p, then f p = p."""
    f = as_map(f)
    xs = orbit(f, p, n)
    if _key(xs[-1]) != _key(p) and space.ddf(xs[-1], p) != EPS0:
        raise ContractionPrecondition(f"f^{n} p != p")
    cyc = _subspace(space, xs[:n])
    if not check_mk_b(cyc, f, m, k).ok:
        raise ContractionPrecondition("map is not an (m,k)-B-contraction on the orbit of p")
    fixed = space.ddf(xs[1], p) == EPS0
    if not fixed:
        log.error("cycle through %r of length %d survives the (%d, %g)-B check", p, n, m, k)
    return fixed


@dataclass
class _Subspace:
    parent: object
    points: list

    def ddf(self, p, q):
        return self.parent.ddf(p, q)

    def labelled(self):
        return list(enumerate(self.points))


def _subspace(space, pts) -> _Subspace:
    uniq = []
    keys = set()
    for x in pts:
        if _key(x) not in keys:
            keys.add(_key(x))
            uniq.append(x)
    return _Subspace(space, uniq)


@dataclass
class CauchyReport:
    tail: int
    tol: float
    max_dist: float
    profile: dict[int, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.max_dist <= self.tol

    @property
    def nonincreasing(self) -> bool:
        vals = [self.profile[t] for t in sorted(self.profile)]
        return all(a >= b for a, b in zip(vals, vals[1:]))


def cauchy_subsequence_check(
    space, f, p, I: IndexSet, tail: int, tol: float, cutoffs=None
) -> CauchyReport:
    """Largest d_S(F_{f^i p, f^j p}, eps0) over i, j in I past ``tail``, plus a profile."""
    members = [i for i in I.members if i >= tail]
    if len(members) < 2:
        raise ValueError(f"fewer than two members of I at or past tail {tail}")
    if cutoffs is None:
        cutoffs = [tail, tail + (I.n - tail) // 4, tail + (I.n - tail) // 2]
    cutoffs = sorted(set(c for c in cutoffs if c >= tail))
    xs = orbit(as_map(f), p, members[-1])
    # max over pairs with min(i, j) >= c, accumulated from the far end
    best_from = {}
    running = 0.0
    for a_pos in range(len(members) - 1, -1, -1):
        a = members[a_pos]
        for b in members[a_pos + 1:]:
            running = max(running, sibley_to_eps0(space.ddf(xs[a], xs[b])))
        best_from[a] = running
    profile = {}
    for c in cutoffs:
        past = [i for i in members if i >= c]
        if len(past) >= 2:
            profile[c] = best_from[past[0]]
    return CauchyReport(tail, tol, best_from[members[0]], profile)


def all_pairs_max(space, pts) -> float:
    return max((sibley_to_eps0(space.ddf(a, b)) for a, b in combinations(pts, 2)), default=0.0)
