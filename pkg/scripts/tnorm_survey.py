"""How often do random E-spaces satisfy the triangle inequality under each t-norm?

    python3 scripts/tnorm_survey.py --seeds 200 --max-points 8 --max-outcomes 6
"""

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from menger import fixtures as fx
from menger.espace import espace_to_pm
from menger.pmspace import check_menger
from menger.tnorm import TNorm


@dataclass
class SurveyConfig:
    seeds: int = 200
    first_seed: int = 0
    max_points: int = 8
    max_outcomes: int = 6
    dim: int = 2


def run(cfg: SurveyConfig) -> dict:
    fails = Counter()
    by_outcomes = Counter()
    totals = Counter()
    example = None
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
        rng = fx.rng_for(seed)
        n_out = int(rng.integers(1, cfg.max_outcomes + 1))
        inst = fx.random_espace(rng, int(rng.integers(2, cfg.max_points + 1)), n_out, cfg.dim)
        sp = espace_to_pm(inst)
        totals[n_out] += 1
        for T in TNorm:
            rep = check_menger(sp, T)
            if not rep.ok:
                fails[T.value] += 1
                if T is TNorm.M:
                    by_outcomes[n_out] += 1
                    if example is None:
                        v = rep.violations[0]
                        example = {"seed": seed, "triple": [str(v.p), str(v.q), str(v.r)], "x": v.x}
    return {
        "config": asdict(cfg),
        "violating": {T.value: fails[T.value] for T in TNorm},
        "min_violations_by_outcomes": {str(k): [by_outcomes[k], totals[k]] for k in sorted(totals)},
        "first_min_violation": example,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SurveyConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    ap.add_argument("--json", action="store_true", help="print the raw result")
    args = vars(ap.parse_args())
    as_json = args.pop("json")
    res = run(SurveyConfig(**args))
    if as_json:
        print(json.dumps(res, indent=2))
        return
    n = res["config"]["seeds"]
    print(f"{'t-norm':<6} {'violating':>10}")
    for name, count in res["violating"].items():
        print(f"{name:<6} {count:>6}/{n}")
    print("\nM violations by number of outcomes:")
    for k, (bad, tot) in res["min_violations_by_outcomes"].items():
        print(f"  {k} outcomes: {bad}/{tot}")
    if res["first_min_violation"]:
        print("\nfirst M violation:", res["first_min_violation"])


if __name__ == "__main__":
    main()
