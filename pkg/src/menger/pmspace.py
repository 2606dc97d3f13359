"""Finite probabilistic (semi-)metric spaces and the Menger triangle check."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Hashable, Iterable, Mapping

from .ddf import DDF, EPS0, dominance_witness, eval_ddf
from .tnorm import TNorm, tau_conv

Point = Hashable


class SpaceError(ValueError):
    pass


class MissingPair(SpaceError):
    pass


class PM1Violation(SpaceError):
    """An off-diagonal entry equals eps0."""


def pair_key(p: Point, q: Point) -> frozenset:
    return frozenset((p, q))


@dataclass(frozen=True)
class FinitePMSpace:
    points: tuple
    table: Mapping[frozenset, DDF] = field(repr=False)

    def ddf(self, p: Point, q: Point) -> DDF:
        if p == q:
            return EPS0
        return self.table[pair_key(p, q)]

    def labelled(self):
        return [(p, p) for p in self.points]

    def pairs(self) -> Iterable[tuple[Point, Point]]:
        return combinations(self.points, 2)

    def to_json(self) -> dict:
        ddfs = {}
        for p, q in self.pairs():
            ddfs[f"{p}|{q}"] = self.ddf(p, q).to_json()
        return {"points": list(self.points), "ddfs": ddfs}

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePMSpace":
        table = {}
        for key, d in obj["ddfs"].items():
            p, sep, q = str(key).partition("|")
            if not sep:
                raise SpaceError(f"pair key {key!r} must look like 'p|q'")
            table[(_match_id(obj["points"], p), _match_id(obj["points"], q))] = DDF.from_json(d)
        return build_space(obj["points"], table)


def _match_id(points: list, raw: str):
    for p in points:
        if str(p) == raw:
            return p
    raise SpaceError(f"pair key mentions unknown point {raw!r}")


def build_space(points: Iterable[Point], ddf_table: Mapping) -> FinitePMSpace:
    """Validate a table keyed by (p, q) tuples or frozensets; order is irrelevant."""
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise SpaceError("duplicate point identifiers")
    table: dict[frozenset, DDF] = {}
    for key, F in ddf_table.items():
        p, q = tuple(key) if len(key) == 2 else (None, None)
        if p is None or p == q:
            raise SpaceError(f"table key {key!r} is not a pair of distinct points")
        k = pair_key(p, q)
        if k in table and table[k] != F:
            raise SpaceError(f"conflicting entries for pair {p!r}, {q!r}")
        table[k] = F
    for p, q in combinations(pts, 2):
        k = pair_key(p, q)
        if k not in table:
            raise MissingPair(f"no d.d.f. for pair {p!r}, {q!r}")
        if table[k] == EPS0:
            raise PM1Violation(f"F({p!r},{q!r}) = eps0 for distinct points")
    return FinitePMSpace(pts, {k: v for k, v in table.items() if all(x in pts for x in k)})


@dataclass
class MengerViolation:
    p: Point
    q: Point
    r: Point
    x: float
    lhs: float
    rhs: float


@dataclass
class MengerReport:
    tnorm: TNorm
    triples_checked: int
    violations: list[MengerViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_menger(space, T: TNorm | str = TNorm.M) -> MengerReport:
    """PM3 over ordered triples of distinct points: F_pr >= tau_T(F_pq, F_qr)."""
    T = TNorm.parse(T)
    violations = []
    n = 0
    for p, q, r in permutations(space.points, 3):
        n += 1
        Fpr = space.ddf(p, r)
        conv = tau_conv(T, space.ddf(p, q), space.ddf(q, r))
        x = dominance_witness(Fpr, conv)
        if x is not None:
            violations.append(MengerViolation(p, q, r, x, eval_ddf(Fpr, x), eval_ddf(conv, x)))
    return MengerReport(T, n, violations)


def strong_neighborhood(space, p: Point, t: float) -> list:
    """N_p(t) = {q : F_pq(t) > 1 - t}."""
    if not 0.0 < t <= 1.0:
        raise ValueError(f"neighborhood radius must lie in (0, 1], got {t}")
    return [q for q in space.points if eval_ddf(space.ddf(p, q), t) > 1.0 - t]
