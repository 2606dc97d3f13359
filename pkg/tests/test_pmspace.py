import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ddfs
from menger import fixtures as fx
from menger.ddf import EPS0, make_ddf, step
from menger.espace import espace_to_pm
from menger.pmspace import (
    FinitePMSpace,
    MissingPair,
    PM1Violation,
    build_space,
    check_menger,
    strong_neighborhood,
)
from menger.tnorm import TNorm, tau_conv


def test_build_examples():
    one = build_space(["a"], {})
    assert one.points == ("a",) and one.ddf("a", "a") == EPS0
    two = build_space(["a", "b"], {("a", "b"): step(1)})
    assert two.ddf("b", "a") == step(1)
    with pytest.raises(PM1Violation):
        build_space(["a", "b"], {("a", "b"): EPS0})
    with pytest.raises(MissingPair):
        build_space(["a", "b", "c"], {("a", "b"): step(1), ("b", "c"): step(1)})


def test_keys_are_order_insensitive():
    s1 = build_space([1, 2], {(2, 1): step(0.5)})
    s2 = build_space([1, 2], {frozenset((1, 2)): step(0.5)})
    assert s1.ddf(1, 2) == s2.ddf(2, 1) == step(0.5)


def test_json_roundtrip():
    sp = build_space(["p", "q", "r"], {
        ("p", "q"): step(1), ("q", "r"): make_ddf([1, 3], [0.5, 1]), ("p", "r"): step(2),
    })
    back = FinitePMSpace.from_json(json.loads(json.dumps(sp.to_json())))
    for a in sp.points:
        for b in sp.points:
            assert back.ddf(a, b) == sp.ddf(a, b)


def test_small_spaces_pass_vacuously():
    assert check_menger(build_space(["a"], {}), TNorm.M).triples_checked == 0
    rep = check_menger(build_space(["a", "b"], {("a", "b"): step(1)}), TNorm.M)
    assert rep.ok and rep.triples_checked == 0


def test_doctored_triple_is_reported():
    Fpq, Fqr = make_ddf([1, 2], [0.5, 1]), make_ddf([1], [1])
    conv = tau_conv(TNorm.M, Fpq, Fqr)
    assert conv == make_ddf([2, 3], [0.5, 1])
    lowered = make_ddf([2, 3], [0.25, 1])
    sp = build_space(["p", "q", "r"], {("p", "q"): Fpq, ("q", "r"): Fqr, ("p", "r"): lowered})
    rep = check_menger(sp, TNorm.M)
    bad = {(v.p, v.q, v.r) for v in rep.violations}
    assert ("p", "q", "r") in bad
    v = next(v for v in rep.violations if (v.p, v.q, v.r) == ("p", "q", "r"))
    assert lowered(v.x) < conv(v.x)


@given(st.integers(0, 10_000))
def test_menger_under_min_implies_weaker_tnorms(seed):
    rng = fx.rng_for(seed)
    sp = espace_to_pm(fx.random_espace(rng, 4, int(rng.integers(1, 4)), 1))
    if check_menger(sp, TNorm.M).ok:
        assert check_menger(sp, TNorm.PROD).ok
        assert check_menger(sp, TNorm.W).ok


def test_neighborhood_examples():
    sp = build_space(["p1", "p2"], {("p1", "p2"): step(0.5)})
    assert strong_neighborhood(sp, "p1", 0.6) == ["p1", "p2"]
    assert strong_neighborhood(sp, "p1", 0.3) == ["p1"]
    far = build_space(["a", "b", "c"], {("a", "b"): step(0.5), ("a", "c"): step(2), ("b", "c"): step(2)})
    assert strong_neighborhood(far, "a", 1.0) == ["a", "b"]
    with pytest.raises(ValueError):
        strong_neighborhood(sp, "p1", 0.0)


@given(ddfs(), ddfs(), st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_neighborhood_monotone(F, G, t1, t2):
    if F == EPS0 or G == EPS0 or F == G:
        return
    sp = build_space(["a", "b", "c"], {("a", "b"): F, ("a", "c"): G, ("b", "c"): F})
    lo, hi = sorted((t1, t2))
    assert set(strong_neighborhood(sp, "a", lo)) <= set(strong_neighborhood(sp, "a", hi))
