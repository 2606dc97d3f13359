"""Checkers for B-, C-, (m,k)-B- and (m,k)-C-contractions on finite data.

Spaces are duck-typed: anything with ``points``, ``labelled()`` and
``ddf(p, q)`` works, which covers both ``FinitePMSpace`` (points are ids and
maps are tables) and ``ESpaceInstance`` (points are arrays and maps act on
them).
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Mapping

from .combinatorics import IndexSet
from .ddf import (
    DDF,
    dominance_witness,
    dominates,
    eval_ddf,
    pmin,
    scale_arg,
    threshold_set,
    upset_contained,
)
from .espace import AffineMap, _check_mk

DEFAULT_WINDOW = 60


class ContractionPrecondition(ValueError):
    """The map failed the contraction check a construction relies on."""


def as_map(f) -> Callable:
    if isinstance(f, Mapping):
        return f.__getitem__
    return f


def orbit(f, p, n: int) -> list:
    """[p, f p, ..., f^n p]."""
    f = as_map(f)
    out = [p]
    for _ in range(n):
        out.append(f(out[-1]))
    return out


def b_condition(F: DDF, G: DDF, c: float) -> bool:
    """G(c t) >= F(t) for every t > 0."""
    return dominates(scale_arg(G, 1.0 / c), F)


def c_condition(F: DDF, G: DDF, c: float, slope: float) -> bool:
    """For every t > 0: F(t) > 1 - t implies G(c t) > 1 - slope * t.

    Both sides are up-sets in t, so the implication is containment of the
    antecedent set in the consequent set.
    """
    ante = threshold_set(F, 1.0)
    cons = threshold_set(scale_arg(G, 1.0 / c), slope)
    return upset_contained(ante, cons)


def c_condition_candidates(F: DDF, G: DDF, c: float, slope: float) -> list[float]:
    """Points where either side of the C implication can change truth value."""
    pts = {0.0, 1.0, 1.0 / slope}
    pts.update(F.breakpoints)
    pts.update(b / c for b in G.breakpoints)
    pts.update(1.0 - v for v in F.values)
    pts.update((1.0 - v) / slope for v in G.values)
    base = sorted(p for p in pts if p >= 0)
    out = set(base)
    for a, b in zip(base, base[1:]):
        out.add(0.5 * (a + b))
    for p in base:
        out.add(math.nextafter(p, math.inf))
        if p > 0:
            out.add(math.nextafter(p, 0.0))
    out.add(base[-1] + 1.0)
    return sorted(t for t in out if t > 0)


def c_condition_dense(F: DDF, G: DDF, c: float, slope: float) -> bool:
    """Brute-force evaluation of the C implication on candidate points.

    Comparisons are done in exact rationals so that candidates one ulp away
    from a boundary are judged correctly.
    """
    cq, sq = Fraction(c), Fraction(slope)
    for t in c_condition_candidates(F, G, c, slope):
        tq = Fraction(t)
        if Fraction(eval_ddf(F, t)) > 1 - tq and not Fraction(eval_ddf(G, cq * tq)) > 1 - sq * tq:
            return False
    return True


@dataclass
class PairResult:
    p: object
    q: object
    witness: int | None

    @property
    def ok(self) -> bool:
        return self.witness is not None


@dataclass
class ContractionReport:
    kind: str
    m: int
    k: float
    pairs: list[PairResult]

    @property
    def ok(self) -> bool:
        return all(pr.ok for pr in self.pairs)

    @property
    def failures(self) -> list[PairResult]:
        return [pr for pr in self.pairs if not pr.ok]


def _first_step(space, f, m: int, p, q, test) -> int | None:
    F = space.ddf(p, q)
    fp, fq = p, q
    for i in range(1, m + 1):
        fp, fq = f(fp), f(fq)
        if test(F, space.ddf(fp, fq), i):
            return i
    return None


def _check(space, f, m, k, kind, test) -> ContractionReport:
    _check_mk(m, k)
    f = as_map(f)
    pairs = []
    for (a, p), (b, q) in combinations(space.labelled(), 2):
        pairs.append(PairResult(a, b, _first_step(space, f, m, p, q, test)))
    return ContractionReport(kind, m, k, pairs)


def check_mk_b(space, f, m: int, k: float) -> ContractionReport:
    """Every pair has some i <= m with F_{f^i p, f^i q}(k^i t) >= F_pq(t) for all t."""
    return _check(space, f, m, k, "B", lambda F, G, i: b_condition(F, G, k**i))


def check_mk_c(space, f, m: int, k: float) -> ContractionReport:
    """Every pair has some i <= m with F_pq(t) > 1-t  =>  F_{f^i p, f^i q}(k^i t) > 1 - k^i t."""
    return _check(space, f, m, k, "C", lambda F, G, i: c_condition(F, G, k**i, k**i))


def check_b_contraction(space, f, h: float) -> bool:
    """Direct pointwise test of F_{fp,fq}(h t) >= F_pq(t), used to cross-check m = 1.

    Both sides are constant on the open cells between consecutive points of
    {F breakpoints} and {G breakpoints / h}, so evaluating at those points,
    at the cell midpoints and past the last one covers every t > 0.
    """
    f = as_map(f)
    for (_, p), (_, q) in combinations(space.labelled(), 2):
        F = space.ddf(p, q)
        G = space.ddf(f(p), f(q))
        cuts = sorted({0.0} | set(F.breakpoints) | {b / h for b in G.breakpoints})
        ts = cuts[1:] + [0.5 * (a + b) for a, b in zip(cuts, cuts[1:])] + [cuts[-1] + 1.0]
        for t in ts:
            if eval_ddf(G, h * t) < eval_ddf(F, t):
                return False
    return True


def _verify_pairs(space, f, m, k, pairs) -> None:
    f = as_map(f)
    for p, q in pairs:
        if _first_step(space, f, m, p, q, lambda F, G, i: b_condition(F, G, k**i)) is None:
            raise ContractionPrecondition("map is not an (m,k)-B-contraction on the orbit pairs")


def contraction_index_set(space, f, m: int, k: float, p, q, N: int = DEFAULT_WINDOW, verify: bool = True) -> IndexSet:
    """{i < N : F_{f^i p, f^i q}(t) >= F_pq(t / k^i) for all t}."""
    _check_mk(m, k)
    xs = orbit(f, p, N + m)
    ys = orbit(f, q, N + m)
    if verify:
        _verify_pairs(space, f, m, k, zip(xs[:N], ys[:N]))
    F = space.ddf(p, q)
    members = [i for i in range(N) if dominates(space.ddf(xs[i], ys[i]), scale_arg(F, k**i))]
    return IndexSet.from_members(N, members)


def displacement_ddf(space, f, m: int, k: float, p) -> DDF:
    """F with F(t / (1-k)) = min over 1 <= i <= m of F_{f^i p, p}(t)."""
    xs = orbit(f, p, m)
    G = pmin(*(space.ddf(xs[i], p) for i in range(1, m + 1)))
    return scale_arg(G, 1.0 / (1.0 - k))


def displacement_profile(space, f, m: int, k: float, p, N: int = DEFAULT_WINDOW, verify: bool = True):
    """(F, I) with I = {i < N : F_{f^i p, p} >= F}."""
    _check_mk(m, k)
    xs = orbit(f, p, N)
    if verify:
        _verify_pairs(space, f, m, k, ((x, p) for x in xs[:N]))
    F = displacement_ddf(space, f, m, k, p)
    members = [i for i in range(N) if dominates(space.ddf(xs[i], p), F)]
    return F, IndexSet.from_members(N, members)


def b_counter_witness(F: DDF, G: DDF, c: float) -> float | None:
    """A t with G(c t) < F(t), if any."""
    return dominance_witness(scale_arg(G, 1.0 / c), F)


def map_from_json(obj: dict):
    """Table maps become dicts keyed like the space points; affine maps become AffineMap."""
    kind = obj.get("kind")
    if kind == "table":
        return dict(obj["map"])
    if kind == "affine":
        return AffineMap(obj["scale"], obj.get("offset", 0.0))
    raise ValueError(f"unknown map kind {kind!r}")
