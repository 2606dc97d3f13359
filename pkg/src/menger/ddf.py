"""Distance distribution functions as exact left-continuous step functions.

A ``DDF`` with breakpoints ``b1 < ... < bn`` and values ``v1 <= ... <= vn``
evaluates to 0 on ``[0, b1]``, to ``vi`` on ``(bi, b(i+1)]`` and to ``vn``
past ``bn``.  The value at ``+inf`` is 1 by convention, independently of the
tail value; a DDF whose tail value is 1 belongs to D+.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

SIBLEY_TOL = 1e-9


class DDFError(ValueError):
    """Base class for invalid step-function input."""


class LengthMismatch(DDFError):
    pass


class UnsortedBreakpoints(DDFError):
    pass


class ValueRangeError(DDFError):
    pass


class DecreasingValues(DDFError):
    pass


@dataclass(frozen=True)
class DDF:
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __call__(self, x: float) -> float:
        return eval_ddf(self, x)

    @property
    def tail(self) -> float:
        return self.values[-1]

    @property
    def in_d_plus(self) -> bool:
        return self.values[-1] == 1.0

    def right_value(self, x: float) -> float:
        """Right limit F(x+)."""
        i = bisect_right(self.breakpoints, x)
        return self.values[i - 1] if i else 0.0

    def to_json(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    @classmethod
    def from_json(cls, obj: dict) -> "DDF":
        return make_ddf(obj["breakpoints"], obj["values"])

    def __repr__(self) -> str:
        pairs = ", ".join(f"{b:g}:{v:g}" for b, v in zip(self.breakpoints, self.values))
        return f"DDF({pairs})"


def make_ddf(breakpoints: Sequence[float], values: Sequence[float]) -> DDF:
    b = [float(x) for x in breakpoints]
    v = [float(x) for x in values]
    if len(b) != len(v) or not b:
        raise LengthMismatch(f"need equal nonzero lengths, got {len(b)} and {len(v)}")
    if any(not math.isfinite(x) or x < 0 for x in b):
        raise UnsortedBreakpoints("breakpoints must be finite and >= 0")
    if any(x >= y for x, y in zip(b, b[1:])):
        raise UnsortedBreakpoints(f"breakpoints not strictly ascending: {b}")
    if any(not 0.0 <= x <= 1.0 for x in v):
        raise ValueRangeError(f"values must lie in [0, 1]: {v}")
    if any(x > y for x, y in zip(v, v[1:])):
        raise DecreasingValues(f"values must be nondecreasing: {v}")
    return _canonical(b, v)


def _canonical(b: Sequence[float], v: Sequence[float]) -> DDF:
    # Assumes validated input. Leading zero steps and repeated values carry no
    # information; the all-zero function keeps a single entry.
    out_b: list[float] = []
    out_v: list[float] = []
    for x, y in zip(b, v):
        if y == 0.0:
            continue
        if out_v and out_v[-1] == y:
            continue
        out_b.append(x)
        out_v.append(y)
    if not out_b:
        return DDF((0.0,), (0.0,))
    return DDF(tuple(out_b), tuple(out_v))


def _from_cells(points: Iterable[float], vals: Iterable[float]) -> DDF:
    """Build from (start, value) cells without re-validating ascending order."""
    return _canonical(list(points), list(vals))


EPS0 = make_ddf([0.0], [1.0])
ZERO = make_ddf([0.0], [0.0])


def step(at: float, height: float = 1.0) -> DDF:
    """Single jump to ``height`` just after ``at``."""
    return make_ddf([at], [height])


def eval_ddf(F: DDF, x: float) -> float:
    if x < 0 or math.isnan(x):
        raise ValueError(f"DDF argument must be >= 0, got {x}")
    if x == math.inf:
        return 1.0
    i = bisect_left(F.breakpoints, x)
    return F.values[i - 1] if i else 0.0


class Order(Enum):
    EQUAL = "equal"
    LE = "F<=G"
    GE = "G<=F"
    INCOMPARABLE = "incomparable"


def merged_cells(F: DDF, G: DDF) -> tuple[list[float], list[float], list[float]]:
    """Cell starts of the merged partition with both functions' values on each cell."""
    pts = sorted(set(F.breakpoints) | set(G.breakpoints))
    return pts, [F.right_value(c) for c in pts], [G.right_value(c) for c in pts]


def compare_ddf(F: DDF, G: DDF) -> Order:
    if F == G:
        return Order.EQUAL
    _, fv, gv = merged_cells(F, G)
    le = all(a <= b for a, b in zip(fv, gv))
    ge = all(a >= b for a, b in zip(fv, gv))
    if le and ge:
        return Order.EQUAL
    if le:
        return Order.LE
    if ge:
        return Order.GE
    return Order.INCOMPARABLE


def dominates(F: DDF, G: DDF) -> bool:
    """True when F(x) >= G(x) for every x."""
    return compare_ddf(F, G) in (Order.EQUAL, Order.GE)


def dominance_witness(F: DDF, G: DDF) -> float | None:
    """A point x with F(x) < G(x), or None if F dominates G."""
    pts, fv, gv = merged_cells(F, G)
    for i, (a, b) in enumerate(zip(fv, gv)):
        if a < b:
            hi = pts[i + 1] if i + 1 < len(pts) else pts[i] + 1.0
            return hi
    return None


def scale_arg(F: DDF, c: float) -> DDF:
    """G(x) = F(x / c)."""
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c}")
    return DDF(tuple(b * c for b in F.breakpoints), F.values)


def pointwise_extrema(F: DDF, G: DDF, mode: str = "min") -> DDF:
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    pick = min if mode == "min" else max
    pts, fv, gv = merged_cells(F, G)
    return _from_cells(pts, (pick(a, b) for a, b in zip(fv, gv)))


def pmin(*fs: DDF) -> DDF:
    out = fs[0]
    for F in fs[1:]:
        out = pointwise_extrema(out, F, "min")
    return out


def pmax(*fs: DDF) -> DDF:
    out = fs[0]
    for F in fs[1:]:
        out = pointwise_extrema(out, F, "max")
    return out


def sibley_holds(F: DDF, G: DDF, h: float) -> bool:
    """[F, G; h]: F(x + h) >= G(x) - h for every x in (0, 1/h).

    G is constant on each of its cells, so the worst x in a cell is its left
    end, where F(x + h) is smallest; the check reduces to right limits.
    """
    upper = 1.0 / h
    for c, w in zip(G.breakpoints, G.values):
        if c >= upper:
            break
        if w - h <= 0:
            continue
        if F.right_value(c + h) < w - h:
            return False
    return True


def sibley_distance(F: DDF, G: DDF, tol: float = SIBLEY_TOL) -> float:
    """Sibley distance by bisection on h; the predicate is monotone in h."""
    if F == G:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol / 4:
        mid = 0.5 * (lo + hi)
        if sibley_holds(F, G, mid) and sibley_holds(G, F, mid):
            hi = mid
        else:
            lo = mid
    return hi


def ky_fan(F: DDF) -> float:
    """sup{u >= 0 : F(u) < 1 - u}.

    The set is an interval starting at 0. Walk the cells in order and stop in
    the first one where the line 1 - u drops to the step value.
    """
    starts = (0.0,) + F.breakpoints
    vals = (0.0,) + F.values
    ends = F.breakpoints + (math.inf,)
    for a, v, b in zip(starts, vals, ends):
        cross = 1.0 - v
        if cross <= a:
            return a
        if cross <= b:
            return cross
    return 1.0  # unreachable: last cell has b = inf


def sibley_to_eps0(F: DDF) -> float:
    """Closed form of d_S(F, eps0); equals the Ky Fan value of F."""
    return min(ky_fan(F), 1.0)


def threshold_set(H: DDF, slope: float = 1.0) -> tuple[float, bool]:
    """Boundary of {t >= 0 : H(t) > 1 - slope * t}.

    The set is an up-set; returns ``(s, closed)`` meaning ``[s, inf)`` when
    ``closed`` and ``(s, inf)`` otherwise.
    """
    if not slope > 0:
        raise ValueError("slope must be positive")
    starts = (0.0,) + H.breakpoints
    vals = (0.0,) + H.values
    ends = H.breakpoints + (math.inf,)
    for a, v, b in zip(starts, vals, ends):
        # cell is [0, b1] for the first one, (a, b] afterwards
        cross = (1.0 - v) / slope
        if cross < b:
            s = max(a, cross)
            return s, _threshold_member(H, slope, s)
    raise AssertionError("threshold set is never empty")


def _threshold_member(H: DDF, slope: float, t: float) -> bool:
    return eval_ddf(H, t) > 1.0 - slope * t


def upset_contained(a: tuple[float, bool], b: tuple[float, bool]) -> bool:
    """Whether the up-set described by ``a`` lies inside the one described by ``b``."""
    sa, ca = a
    sb, cb = b
    if sa != sb:
        return sa > sb
    return cb or not ca
