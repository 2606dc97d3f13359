"""t-norms and the sup-convolution triangle functions they induce."""

from __future__ import annotations

from enum import Enum

from .ddf import DDF, _from_cells


class TNorm(Enum):
    W = "W"
    PROD = "Prod"
    M = "M"

    def __call__(self, a: float, b: float) -> float:
        return tnorm_eval(self, a, b)

    @classmethod
    def parse(cls, name: "str | TNorm") -> "TNorm":
        if isinstance(name, TNorm):
            return name
        for t in cls:
            if t.value == name:
                return t
        raise ValueError(f"unknown t-norm {name!r}; expected one of W, Prod, M")


def _raw(T: TNorm, a: float, b: float) -> float:
    if T is TNorm.M:
        return a if a < b else b
    if T is TNorm.PROD:
        return a * b
    return max(a + b - 1.0, 0.0)


def tnorm_eval(T: TNorm, a: float, b: float) -> float:
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError(f"t-norm arguments must lie in [0, 1], got ({a}, {b})")
    return _raw(T, a, b)


def tau_conv(T: TNorm | str, F: DDF, G: DDF) -> DDF:
    """tau_T(F, G)(x) = sup_{u+v=x} T(F(u), G(v)), exact for step functions.

    T is continuous and both inputs are constant on half-open cells, so the sup
    at x is the largest T(v_i, w_j) over pairs with b_i + c_j < x.
    """
    T = TNorm.parse(T)
    best: dict[float, float] = {}
    for b, v in zip(F.breakpoints, F.values):
        for c, w in zip(G.breakpoints, G.values):
            s = b + c
            val = _raw(T, v, w)
            if val > best.get(s, -1.0):
                best[s] = val
    pts = sorted(best)
    vals = []
    running = 0.0
    for s in pts:
        running = max(running, best[s])
        vals.append(running)
    return _from_cells(pts, vals)
