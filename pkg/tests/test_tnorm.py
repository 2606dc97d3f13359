import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ddfs
from menger.ddf import EPS0, Order, compare_ddf, make_ddf, pmax, step
from menger.tnorm import TNorm, tau_conv, tnorm_eval

TNORMS = list(TNorm)


def vec_eval(F, x):
    bps = np.asarray(F.breakpoints)
    vals = np.concatenate(([0.0], F.values))
    return vals[np.searchsorted(bps, x, side="left")]


def brute_conv(T, F, G, xs, res=1e-3):
    """sup over u + v = x of T(F(u), G(v)), u on the midpoints of a grid over (0, x).

    With x off the dyadic sum set every constancy cell of (u, x - u) is wider
    than the grid step, so the grid sup is the true sup.
    """
    ops = {TNorm.W: lambda a, b: np.maximum(a + b - 1, 0), TNorm.PROD: np.multiply, TNorm.M: np.minimum}
    out = []
    for x in xs:
        n = max(int(np.ceil(x / res)), 1)
        us = (np.arange(n) + 0.5) * (x / n)
        out.append(float(np.max(ops[T](vec_eval(F, us), vec_eval(G, x - us)))))
    return out


def test_tnorm_values():
    assert tnorm_eval(TNorm.W, 0.5, 0.7) == pytest.approx(0.2)
    assert tnorm_eval(TNorm.M, 0.3, 0.8) == 0.3
    for x in np.linspace(0, 1, 11):
        assert tnorm_eval(TNorm.PROD, 1.0, x) == x
    with pytest.raises(ValueError):
        tnorm_eval(TNorm.M, 1.2, 0.3)
    assert TNorm.parse("Prod") is TNorm.PROD
    with pytest.raises(ValueError):
        TNorm.parse("Luk")


@pytest.mark.parametrize("T", TNORMS)
def test_tnorm_axioms_on_grid(T):
    grid = np.arange(0, 17) / 16
    for a, b in itertools.product(grid, grid):
        assert T(a, b) == T(b, a)
        assert T(a, 1.0) == a
        for c in grid[::4]:
            assert T(T(a, b), c) == pytest.approx(T(a, T(b, c)), abs=1e-15)
        if b < 1:
            assert T(a, b) <= T(a, b + 1 / 16)


def test_tnorm_ordering():
    grid = np.arange(0, 17) / 16
    for a, b in itertools.product(grid, grid):
        assert TNorm.W(a, b) <= TNorm.PROD(a, b) <= TNorm.M(a, b)


def test_conv_examples():
    G = make_ddf([1, 3], [0.5, 1])
    assert tau_conv(TNorm.M, EPS0, G) == G
    assert tau_conv(TNorm.W, step(0.4), step(0.6)) == step(1.0)
    F = make_ddf([1, 2], [0.5, 1])
    assert tau_conv(TNorm.PROD, F, F) == make_ddf([2, 3, 4], [0.25, 0.5, 1])


def test_conv_examples_against_grid():
    F = make_ddf([1, 2], [0.5, 1])
    xs = np.arange(1 / 2048, 5, 1 / 64)
    got = [tau_conv(TNorm.PROD, F, F)(x) for x in xs]
    assert got == brute_conv(TNorm.PROD, F, F, xs)


@given(st.sampled_from(TNORMS), ddfs(max_breaks=3, hi=2), ddfs(max_breaks=3, hi=2))
def test_conv_matches_grid(T, F, G):
    xs = np.arange(1 / 2048, 4.5, 1 / 32)  # off the dyadic sum grid
    H = tau_conv(T, F, G)
    assert [H(x) for x in xs] == pytest.approx(brute_conv(T, F, G, xs, res=1 / 1024), abs=1e-12)


@given(st.sampled_from(TNORMS), ddfs(), ddfs(), ddfs())
def test_conv_algebra(T, F, G, H):
    assert tau_conv(T, F, G) == tau_conv(T, G, F)
    assert tau_conv(T, tau_conv(T, F, G), H) == tau_conv(T, F, tau_conv(T, G, H))
    assert tau_conv(T, F, EPS0) == F
    assert tau_conv(T, EPS0, F) == F


@given(st.sampled_from(TNORMS), ddfs(), ddfs(), ddfs())
def test_conv_monotone(T, F, F2, G):
    hi = pmax(F, F2)
    assert compare_ddf(tau_conv(T, F, G), tau_conv(T, hi, G)) in (Order.LE, Order.EQUAL)


@given(ddfs(), ddfs())
def test_conv_ordered_by_tnorm(F, G):
    w, p, m = (tau_conv(T, F, G) for T in (TNorm.W, TNorm.PROD, TNorm.M))
    assert compare_ddf(w, p) in (Order.LE, Order.EQUAL)
    assert compare_ddf(p, m) in (Order.LE, Order.EQUAL)


def test_conv_accepts_names():
    assert tau_conv("W", step(0.4), step(0.6)) == step(1.0)
