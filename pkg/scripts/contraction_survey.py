"""Base-metric contractions versus the B and C conditions on random E-spaces.

Every map here scales each outcome's base distance by k^m after m steps, so
the B condition always holds.  The survey counts how often the C condition
holds as well, and how often the bridge hypothesis finds a witness.

    python3 scripts/contraction_survey.py --seeds 200
"""

import argparse
import itertools
from dataclasses import dataclass

from menger import fixtures as fx
from menger.contraction import check_mk_b, check_mk_c
from menger.espace import AffineMap, ESpaceInstance, bridge_check


@dataclass
class SurveyConfig:
    seeds: int = 200
    k: float = 0.5
    points: int = 4
    outcomes: int = 3
    scale: float = 1.0


def survey(cfg: SurveyConfig, m: int) -> dict:
    counts = {"b": 0, "c": 0, "pairs": 0, "hypothesis": 0, "witness": 0, "falsified": 0}
    for seed in range(cfg.seeds):
        rng = fx.rng_for(10_000 * m + seed)
        dim = 2 if m == 1 else m
        inst = fx.random_espace(rng, cfg.points, cfg.outcomes, dim)
        inst = ESpaceInstance(inst.prob, inst.base, [p * cfg.scale for p in inst.points])
        f = AffineMap(fx.cyclic_contraction_matrix(rng, m, cfg.k))
        counts["b"] += check_mk_b(inst, f, m, cfg.k).ok
        counts["c"] += check_mk_c(inst, f, m, cfg.k).ok
        rep = bridge_check(inst, f, m, cfg.k, list(itertools.combinations(range(cfg.points), 2)))
        for pr in rep.pairs:
            counts["pairs"] += 1
            counts["hypothesis"] += bool(pr.hypothesis_steps)
            counts["witness"] += pr.witness is not None
            counts["falsified"] += pr.falsified
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--k", type=float, default=0.5)
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--outcomes", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply all coordinates")
    cfg = SurveyConfig(**vars(ap.parse_args()))
    print(f"{'m':>2} {'B':>8} {'C':>8} {'pairs':>6} {'hyp':>6} {'witness':>8} {'falsified':>9}")
    for m in (1, 2, 3):
        c = survey(cfg, m)
        n = cfg.seeds
        print(f"{m:>2} {c['b']:>4}/{n} {c['c']:>4}/{n} {c['pairs']:>6} {c['hypothesis']:>6} "
              f"{c['witness']:>8} {c['falsified']:>9}")


if __name__ == "__main__":
    main()
