"""Command-line front end.

Exit codes: 0 when every check passes or the solver converges, 1 on a property
violation or non-convergence, 2 on usage, parse or constraint errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fixtures
from .combinatorics import (
    IndexSet,
    Lemma34Error,
    build_relation_R,
    lemma34_search,
    upper_banach_density,
    verify_lemma34,
)
from .contraction import (
    ContractionPrecondition,
    check_mk_b,
    check_mk_c,
    displacement_profile,
    map_from_json,
)
from .ddf import DDF, DDFError, sibley_distance
from .espace import ESpaceInstance, espace_to_pm
from .pmspace import FinitePMSpace, SpaceError, check_menger
from .pnspace import (
    FinitePNSpace,
    LinearMap,
    continuity_at_theta_probe,
    iterate_to_null,
    pn_axiom_check,
    pn_c_contraction_check,
    uniform_continuity_probe,
    uniqueness_and_theta_check,
)
from .solver import cauchy_subsequence_check, picard_solve
from .tnorm import TNorm, tau_conv

log = logging.getLogger("menger")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags, unreadable input or a violated config constraint."""


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    map: str | None = None
    output: str | None = None
    format: str = "json"
    tnorm: str = "M"
    m: int = 1
    k: float = 0.5
    tol: float = 1e-6
    max_iter: int | None = None
    window: int = 60
    seed: int | None = None
    mode: str = "strict"
    eps: list[float] = field(default_factory=lambda: [0.1, 0.25, 0.5])
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not 0.0 < self.k < 1.0:
            raise UsageError("--k: must lie in (0, 1)")
        if self.m < 1:
            raise UsageError("--m: must be >= 1")
        if not self.tol > 0:
            raise UsageError("--tol: must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise UsageError("--max-iter: must be >= 1")
        if self.window < 2:
            raise UsageError("--window: must be >= 2")
        if any(not 0.0 < e < 1.0 for e in self.eps):
            raise UsageError("--eps: every value must lie in (0, 1)")
        if self.command == "gen" and self.seed is None:
            raise UsageError("--seed: required for gen")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise UsageError("--seed: must be a 64-bit unsigned integer")


# ---------------------------------------------------------------- io helpers


def read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json(text, path)


def parse_json(text: str, where: str = "<argument>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{where}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def json_or_path(raw: str) -> dict:
    """Accept an inline JSON literal or a file path."""
    if raw.lstrip().startswith(("{", "[")):
        return parse_json(raw)
    return read_json(raw)


def dump(obj, cfg: RunConfig) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def need(obj: dict, key: str, where: str):
    if key not in obj:
        raise UsageError(f"{where}: missing field {key!r}")
    return obj[key]


def load_space(obj: dict):
    """A PM space file, an E-space instance file, or a fixture wrapping one."""
    if "instance" in obj:
        obj = obj["instance"]
    try:
        if "ddfs" in obj:
            return FinitePMSpace.from_json(obj)
        if "probs" in obj and "points" in obj:
            return ESpaceInstance.from_json(obj)
    except KeyError as exc:
        raise UsageError(f"input: missing field {exc.args[0]!r}") from None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"input: {exc}") from None
    raise UsageError("input: expected fields 'ddfs' (PM space) or 'probs' and 'points' (E-space)")


def load_map(obj: dict, space):
    if "map" in obj and isinstance(obj["map"], dict) and "kind" in obj["map"]:
        obj = obj["map"]
    try:
        f = map_from_json(obj)
    except KeyError as exc:
        raise UsageError(f"map: missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise UsageError(f"map: {exc}") from None
    if isinstance(f, dict):
        ids = {str(p): p for p in space.points} if isinstance(space, FinitePMSpace) else None
        if ids is None:
            raise UsageError("map: table maps need a PM space input")
        try:
            return {ids[str(a)]: ids[str(b)] for a, b in f.items()}
        except KeyError as exc:
            raise UsageError(f"map: unknown point {exc.args[0]!r}") from None
    return f


def space_and_map(cfg: RunConfig):
    if cfg.input is None:
        inst, f = fixtures.halving_instance()
        return inst, f, None
    obj = read_json(cfg.input)
    space = load_space(obj)
    if cfg.map:
        f = load_map(read_json(cfg.map), space)
    elif "map" in obj:
        f = load_map(obj["map"], space)
    else:
        raise UsageError("--map: required unless the input is a fixture with a 'map' field")
    if "m" in obj and "k" in obj:
        log.info("fixture advertises m=%s k=%s", obj["m"], obj["k"])
    return space, f, obj


# ---------------------------------------------------------------- commands


def cmd_check_space(cfg: RunConfig) -> int:
    space = load_space(read_json(need_input(cfg)))
    if isinstance(space, ESpaceInstance):
        space = espace_to_pm(space)
    rep = check_menger(space, cfg.tnorm)
    dump({
        "tnorm": rep.tnorm.value,
        "triples_checked": rep.triples_checked,
        "violations": [
            {"p": v.p, "q": v.q, "r": v.r, "x": v.x, "lhs": v.lhs, "rhs": v.rhs} for v in rep.violations
        ],
    }, cfg)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def need_input(cfg: RunConfig) -> str:
    if not cfg.input:
        raise UsageError("--input: required")
    return cfg.input


def cmd_check_contraction(cfg: RunConfig) -> int:
    need_input(cfg)
    space, f, _ = space_and_map(cfg)
    kind = cfg.extra.get("kind", "b")
    check = check_mk_b if kind == "b" else check_mk_c
    rep = check(space, f, cfg.m, cfg.k)
    dump({
        "kind": rep.kind,
        "m": rep.m,
        "k": rep.k,
        "ok": rep.ok,
        "pairs": [{"p": _plain(pr.p), "q": _plain(pr.q), "witness": pr.witness} for pr in rep.pairs],
    }, cfg)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


def cmd_solve(cfg: RunConfig) -> int:
    space, f, _ = space_and_map(cfg)
    start = cfg.extra.get("start", 0)
    if isinstance(space, FinitePMSpace):
        ids = {str(p): p for p in space.points}
        if str(start) not in ids:
            raise UsageError(f"--start: unknown point {start!r}")
        p0 = ids[str(start)]
        label = {p: str(p) for p in space.points}.get
    else:
        if not 0 <= int(start) < len(space.points):
            raise UsageError(f"--start: index {start} out of range")
        p0 = space.points[int(start)]
        label = None
    tr = picard_solve(space, f, p0, cfg.tol, cfg.max_iter)
    summary = tr.summary(label)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "point_id", "step_dist"])
        for n, d in enumerate(tr.step_dists):
            pid = label(tr.points[n + 1]) if label else n + 1
            w.writerow([n + 1, pid, repr(d)])
        if cfg.output:
            Path(cfg.output).write_text(buf.getvalue())
            sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
        else:
            sys.stdout.write(buf.getvalue())
            sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    else:
        dump(summary, cfg)
    return EXIT_OK if tr.outcome == "converged" else EXIT_VIOLATION


def cmd_density(cfg: RunConfig) -> int:
    raw = cfg.extra.get("set") or need_input(cfg)
    obj = json_or_path(raw)
    try:
        I = IndexSet.from_json(obj, default_n=cfg.window)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"index set: {exc}") from None
    d = upper_banach_density(I)
    if cfg.format == "csv":
        sys.stdout.write(f"{d}\n")
    else:
        dump({"density": str(d), "exact": d.exact, "lower": str(d.lower), "upper": str(d.upper), "n": I.n}, cfg)
    return EXIT_OK


def _two_ddfs(cfg: RunConfig) -> tuple[DDF, DDF]:
    obj = json_or_path(need_input(cfg))
    try:
        return DDF.from_json(need(obj, "F", "input")), DDF.from_json(need(obj, "G", "input"))
    except DDFError as exc:
        raise UsageError(f"input: {exc}") from None


def cmd_sibley(cfg: RunConfig) -> int:
    F, G = _two_ddfs(cfg)
    dump({"distance": sibley_distance(F, G)}, cfg)
    return EXIT_OK


def cmd_tau(cfg: RunConfig) -> int:
    F, G = _two_ddfs(cfg)
    dump({"tnorm": TNorm.parse(cfg.tnorm).value, "result": tau_conv(cfg.tnorm, F, G).to_json()}, cfg)
    return EXIT_OK


def cmd_pn_check(cfg: RunConfig) -> int:
    obj = read_json(need_input(cfg))
    try:
        space = FinitePNSpace.from_json(obj)
        vecs = [space.coerce(v) for v in need(obj, "vectors", "input")]
        f = LinearMap(obj["map"]) if "map" in obj else None
    except KeyError as exc:
        raise UsageError(f"input: missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise UsageError(f"input: {exc}") from None
    if not vecs:
        raise UsageError("vectors: need at least one sample")
    out: dict = {}
    ok = True
    ax = pn_axiom_check(space, vecs)
    out["axioms"] = {"checked": ax.checked, "violations": [v.__dict__ for v in ax.violations]}
    ok &= ax.ok
    if f is not None:
        cc = pn_c_contraction_check(space, f, cfg.k, vecs)
        out["contraction"] = {
            "mode": cfg.mode,
            "ok": cc.ok(cfg.mode),
            "per_sample": [{"paper": s.paper, "strict": s.strict} for s in cc.samples],
            "reductions_agree": cc.reductions_agree,
        }
        ok &= cc.ok(cfg.mode) and cc.reductions_agree
        null = []
        for idx, v in enumerate(vecs):
            for eps in cfg.eps:
                try:
                    r = iterate_to_null(space, f, v, eps, 20, cfg.k)
                except ContractionPrecondition as exc:
                    null.append({"sample": idx, "eps": eps, "skipped": str(exc)})
                    continue
                null.append({"sample": idx, "eps": eps, "n0": r.n0, "first_n": r.first_n, "failures": r.failures})
                ok &= r.ok
        out["null"] = null
        fp = uniqueness_and_theta_check(space, f, vecs)
        out["fixed_points"] = {"fixed": fp.fixed, "violations": fp.violations}
        ok &= fp.ok
        uc = uniform_continuity_probe(space, f, cfg.k, cfg.eps, vecs)
        ct = continuity_at_theta_probe(space, f, cfg.k, cfg.eps, vecs)
        out["continuity"] = {"uniform": len(uc.violations), "at_theta": len(ct.violations)}
        ok &= uc.ok and ct.ok
    out["ok"] = bool(ok)
    dump(out, cfg)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gen(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    rng = fixtures.rng_for(cfg.seed)
    points, outcomes, dim = cfg.extra["points"], cfg.extra["outcomes"], cfg.extra["dim"]
    if points < 1 or outcomes < 1 or dim < 1:
        raise UsageError("--points/--outcomes/--dim: must be >= 1")
    if kind == "espace":
        obj = fixtures.random_espace(rng, points, outcomes, dim).to_json()
    elif kind == "pnspace":
        space = fixtures.random_pnspace(rng, outcomes, dim, cfg.extra.get("tau", "W"), "M")
        obj = space.to_json()
        obj["vectors"] = [fixtures.random_coords(rng, (outcomes, dim)).tolist() for _ in range(points)]
    else:
        certify = cfg.extra.get("certify", "c")
        fx = fixtures.contraction_fixture(rng, cfg.m, cfg.k, points, outcomes, certify=certify)
        obj = fx.to_json()
        obj["certified"] = ["b", "c"] if certify == "c" else ["b"]
    obj["seed"] = cfg.seed
    dump(obj, cfg)
    return EXIT_OK


def cmd_demo(cfg: RunConfig) -> int:
    """Displacement profile, relation, witness search and Cauchy check on the halving instance."""
    inst, f = fixtures.halving_instance()
    p = inst.points[0]
    F, J = displacement_profile(inst, f, 1, 0.5, p, N=cfg.window)
    R = build_relation_R(inst, f, p, F, 0.5, cfg.window)
    try:
        res = lemma34_search(R, 1)
    except Lemma34Error as exc:
        log.error("%s", exc)
        return EXIT_VIOLATION
    problems = verify_lemma34(R, 1, res)
    tail = min(10, cfg.window // 2)
    rep = cauchy_subsequence_check(inst, f, p, res.I, tail, 1e-2)
    ok = not problems and rep.ok and rep.nonincreasing
    dump({
        "displacement": F.to_json(),
        "profile_size": len(J),
        "relation_pairs": int(R.matrix.sum()),
        "I_size": len(res.I),
        "I_density": str(res.density),
        "bound": str(res.bound),
        "search": res.source,
        "verifier_problems": problems,
        "cauchy": {"tail": rep.tail, "max": rep.max_dist, "profile": {str(k): v for k, v in rep.profile.items()}},
        "ok": ok,
    }, cfg)
    return EXIT_OK if ok else EXIT_VIOLATION


COMMANDS = {
    "check-space": cmd_check_space,
    "check-contraction": cmd_check_contraction,
    "solve": cmd_solve,
    "density": cmd_density,
    "sibley": cmd_sibley,
    "tau": cmd_tau,
    "pn-check": cmd_pn_check,
    "gen": cmd_gen,
    "demo": cmd_demo,
}


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--tnorm", choices=["W", "Prod", "M"], default="M")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--window", type=int, default=60)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=["paper", "strict"], default="strict")
    p.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.25, 0.5])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="menger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name in ("check-contraction", "solve"):
            p.add_argument("--map")
        if name == "check-contraction":
            p.add_argument("--kind", choices=["b", "c"], default="b")
        if name == "solve":
            p.add_argument("--start", default="0")
        if name == "density":
            p.add_argument("--set", help="inline IndexSet JSON")
        if name == "gen":
            p.add_argument("kind", choices=["espace", "pnspace", "contraction-fixture"])
            p.add_argument("--points", type=int, default=4)
            p.add_argument("--outcomes", type=int, default=3)
            p.add_argument("--dim", type=int, default=2)
            p.add_argument("--certify", choices=["b", "c"], default="c")
    return parser


def config_from_args(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    fields = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in ns.items() if k in fields and v is not None})
    cfg.max_iter = ns.get("max_iter")
    cfg.extra = {k: v for k, v in ns.items() if k not in fields}
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    level = os.environ.get("MENGER_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"menger: error: {exc}\n")
        return EXIT_USAGE
    except (SpaceError, DDFError) as exc:
        sys.stderr.write(f"menger: error: {exc}\n")
        return EXIT_USAGE
    except ContractionPrecondition as exc:
        sys.stderr.write(f"menger: precondition failed: {exc}\n")
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
