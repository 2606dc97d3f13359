import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from menger import fixtures as fx
from menger.contraction import ContractionPrecondition
from menger.ddf import EPS0, make_ddf
from menger.espace import FiniteProbSpace
from menger.pmspace import build_space, check_menger
from menger.pnspace import (
    FinitePNSpace,
    LinearMap,
    c_contraction_holds,
    continuity_at_theta_probe,
    continuity_delta,
    in_theta_neighborhood,
    iterate_to_null,
    n0_of_epsilon,
    operator_norm,
    pn_axiom_check,
    pn_c_contraction_check,
    pn_norm,
    scaled_to_norm,
    uniform_continuity_probe,
    uniqueness_and_theta_check,
)
from menger.tnorm import TNorm

HALF1 = FinitePNSpace(FiniteProbSpace((0.5, 0.5)), 1)
HALVE = LinearMap([[0.5]])
P13 = [1.0, 3.0]


def random_vectors(rng, space, n, scale=1.0):
    return [fx.random_coords(rng, (space.prob.n, space.dim)) * scale for _ in range(n)]


def test_norm_examples():
    assert pn_norm(HALF1, P13) == make_ddf([1, 3], [0.5, 1])
    assert pn_norm(HALF1, HALF1.theta) == EPS0
    assert pn_norm(HALF1, [-1.0, -3.0]) == pn_norm(HALF1, P13)
    with pytest.raises(ValueError):
        pn_norm(HALF1, [1.0, 2.0, 3.0])
    sp = FinitePNSpace.from_json({"probs": [0.5, 0.5], "dim": 1})
    assert sp.tau is TNorm.W and sp.tau_star is TNorm.M
    assert FinitePNSpace.from_json(sp.to_json()) == sp


@given(st.integers(0, 10_000))
def test_norms_lie_in_d_plus_and_are_symmetric(seed):
    rng = fx.rng_for(seed)
    sp = fx.random_pnspace(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    for v in random_vectors(rng, sp, 3):
        nv = pn_norm(sp, v)
        assert nv.in_d_plus and pn_norm(sp, -v) == nv


def test_axioms_on_random_vectors():
    for seed in range(10):
        rng = fx.rng_for(seed)
        sp = fx.random_pnspace(rng, int(rng.integers(1, 5)), 2)
        vecs = random_vectors(rng, sp, 8) + [sp.theta]
        rep = pn_axiom_check(sp, vecs)
        assert rep.ok, rep.violations[:3]
        assert rep.checked["N3"] == 36 and rep.checked["N4"] == 45


def test_n3_violation_reported_under_min():
    # p and q are long on complementary outcomes, p + q is long on both
    sp = FinitePNSpace(FiniteProbSpace((0.5, 0.5)), 1, tau="M")
    rep = pn_axiom_check(sp, [[1.0, 0.0], [0.0, 1.0]], lambda_grid=(0.0, 1.0))
    bad = [v for v in rep.violations if v.axiom == "N3"]
    assert len(bad) == 1 and bad[0].detail == "samples (0, 1)"
    x = bad[0].x
    assert pn_norm(sp, [1.0, 1.0])(x) < 0.5 <= make_ddf([0, 1], [0.5, 1])(x)


def test_axiom_check_arguments():
    with pytest.raises(ValueError):
        pn_axiom_check(HALF1, [])
    with pytest.raises(ValueError):
        pn_axiom_check(HALF1, [P13], lambda_grid=(1.5,))
    rep = pn_axiom_check(HALF1, [P13], lambda_grid=(0.0, 1.0), rtol=0.0)
    assert rep.ok


# contractions

@given(st.sampled_from([0.125, 0.25, 0.5]), st.integers(0, 10_000))
def test_scalar_contraction_passes_paper_mode(kp, seed):
    rng = fx.rng_for(seed)
    sp = fx.random_pnspace(rng, 3, 2)
    f = LinearMap(kp * np.eye(2))
    rep = pn_c_contraction_check(sp, f, 0.5, random_vectors(rng, sp, 5))
    assert rep.ok("paper") and rep.reductions_agree


def test_contraction_examples():
    rep = pn_c_contraction_check(HALF1, HALVE, 0.5, [P13])
    assert rep.ok("paper") and rep.ok("strict")
    ident = pn_c_contraction_check(HALF1, LinearMap([[1.0]]), 0.5, [P13]).samples[0]
    assert ident.paper and not ident.strict
    nu = pn_norm(HALF1, P13)
    t = 1.0 + 1 / 64
    assert nu(t) > 1 - t and not nu(0.5 * t) > 1 - 0.5 * t
    zero = pn_c_contraction_check(HALF1, LinearMap([[0.0]]), 0.5, [P13, [5.0, -2.0]])
    assert zero.ok("strict")
    with pytest.raises(ValueError):
        pn_c_contraction_check(HALF1, HALVE, 1.0, [P13])
    with pytest.raises(ValueError):
        c_contraction_holds(nu, nu, 0.5, "loose")


# n0 and iteration to the null vector

def n0_integer(a: int, b: int, q: int = 64) -> int:
    """Smallest n with (b/q)^n (1 + a/q) <= a/q, in integers."""
    n = 1
    while b**n * (q + a) > a * q**n:
        n += 1
    return n


def test_n0_examples():
    assert n0_of_epsilon(0.5, 0.5) == 2
    assert n0_of_epsilon(0.9, 0.1) == 1
    assert n0_of_epsilon(0.1, 0.5) == 4
    with pytest.raises(ValueError):
        n0_of_epsilon(1.0, 0.5)


@given(st.integers(1, 63), st.integers(1, 63))
def test_n0_matches_integer_search(a, b):
    assert n0_of_epsilon(a / 64, b / 64) == n0_integer(a, b)
    n = n0_of_epsilon(a / 64, b / 64)
    if n > 1:
        assert Fraction(b, 64) ** (n - 1) * (1 + Fraction(a, 64)) > Fraction(a, 64)


def test_iterate_to_null_examples():
    rep = iterate_to_null(HALF1, HALVE, P13, 0.5, 10, 0.5)
    assert rep.ok and rep.n0 == 2 and rep.first_n == 3
    rep = iterate_to_null(HALF1, HALVE, P13, 0.1, 10, 0.5)
    assert rep.ok and rep.n0 == 4 and rep.checked == list(range(5, 15))
    theta = iterate_to_null(HALF1, HALVE, HALF1.theta, 0.25, 10, 0.5)
    assert theta.ok and theta.first_n == 0


def test_iterate_to_null_precondition():
    with pytest.raises(ContractionPrecondition):
        iterate_to_null(HALF1, LinearMap([[1.0]]), P13, 0.5, 5, 0.5)
    with pytest.raises(ContractionPrecondition):
        iterate_to_null(HALF1, HALVE, P13, 0.5, 5, 0.5, verify="orbit")
    with pytest.raises(ValueError):
        iterate_to_null(HALF1, HALVE, P13, 0.5, 5, 0.5, verify="sometimes")


@given(st.integers(0, 10_000), st.sampled_from([0.25, 0.5, 0.75]), st.sampled_from([0.1, 0.25, 0.5]))
def test_iterates_reach_null_neighbourhood(seed, k, eps):
    rng = fx.rng_for(seed)
    sp = fx.random_pnspace(rng, 3, 2)
    f = LinearMap(scaled_to_norm(rng.standard_normal((2, 2)), k))
    for v in random_vectors(rng, sp, 4, scale=1 / 16):
        try:
            rep = iterate_to_null(sp, f, v, eps, 10, k, verify="orbit")
        except ContractionPrecondition:
            continue
        assert rep.ok


# fixed points and continuity

@given(st.integers(0, 10_000))
def test_only_theta_is_fixed(seed):
    rng = fx.rng_for(seed)
    sp = fx.random_pnspace(rng, 3, 2)
    f = LinearMap(scaled_to_norm(rng.standard_normal((2, 2)), 0.5))
    rep = uniqueness_and_theta_check(sp, f, random_vectors(rng, sp, 5) + [sp.theta])
    assert rep.ok and rep.fixed == [5]
    assert operator_norm(f.matrix) == pytest.approx(0.5)


def test_continuity_examples():
    assert continuity_delta(0.5, 0.5) == 0.5
    assert continuity_delta(0.5, 0.1) == 1.0
    assert continuity_delta(0.5, 0.75) == pytest.approx(0.5 / 1.75)
    samples = [[0.0, 0.0], [0.1, 0.2], [0.2, 0.1], P13, [1.2, 3.1]]
    rep = uniform_continuity_probe(HALF1, HALVE, 0.5, [0.5], samples)
    assert rep.ok and rep.deltas == {0.5: 0.5}
    # every p - p is theta, which lies in each neighbourhood
    assert rep.pairs_checked >= len(samples)
    assert in_theta_neighborhood(HALF1, HALF1.theta, 1e-9)
    with pytest.raises(TypeError):
        uniform_continuity_probe(HALF1, lambda p: p * p, 0.5, [0.5], samples)
    with pytest.raises(ValueError):
        uniform_continuity_probe(HALF1, LinearMap([[1.0]]), 1.0, [0.5], samples)


@given(st.integers(0, 10_000), st.sampled_from([0.1, 0.5, 0.9]))
def test_continuity_probes_on_random_contractions(seed, k):
    rng = fx.rng_for(seed)
    sp = fx.random_pnspace(rng, 3, 2)
    f = LinearMap(scaled_to_norm(rng.standard_normal((2, 2)), k))
    vecs = random_vectors(rng, sp, 6, scale=1 / 16)
    grid = [0.1, 0.25, 0.5]
    assert uniform_continuity_probe(sp, f, k, grid, vecs).ok
    assert continuity_at_theta_probe(sp, f, k, grid, vecs).ok


def test_induced_pm_space_is_menger_under_w():
    for seed in range(10):
        rng = fx.rng_for(seed)
        sp = fx.random_pnspace(rng, 3, 2)
        vecs = random_vectors(rng, sp, 5)
        table = {(a, b): sp.ddf(vecs[a], vecs[b]) for a, b in itertools.combinations(range(5), 2)}
        assert check_menger(build_space(range(5), table), TNorm.W).ok
