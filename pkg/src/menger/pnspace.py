"""Probabilistic normed spaces of random vectors over a finite probability space.

A vector is an array of shape (outcomes, dim) and its probabilistic norm is
nu_p(t) = P{w : |p(w)| < t}.  The null vector is the zero array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .ddf import DDF, EPS0, dominance_witness, eval_ddf, scale_arg
from .espace import FiniteProbSpace, distance_ddf
from .contraction import ContractionPrecondition, c_condition, c_condition_dense
from .tnorm import TNorm, tau_conv

MODES = ("paper", "strict")
# Euclidean norms go through sqrt, so lambda p and (1 - lambda) p need not have
# norms summing exactly to |p|; N3/N4 breakpoints may slip by this much.
AXIOM_RTOL = 1e-12


@dataclass(frozen=True)
class FinitePNSpace:
    prob: FiniteProbSpace
    dim: int
    tau: TNorm = TNorm.W
    tau_star: TNorm = TNorm.M

    def __post_init__(self):
        object.__setattr__(self, "tau", TNorm.parse(self.tau))
        object.__setattr__(self, "tau_star", TNorm.parse(self.tau_star))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    @property
    def theta(self) -> np.ndarray:
        return np.zeros((self.prob.n, self.dim))

    def coerce(self, p) -> np.ndarray:
        arr = np.asarray(p, dtype=float)
        if self.dim == 1 and arr.shape == (self.prob.n,):
            arr = arr.reshape(-1, 1)
        if arr.shape != (self.prob.n, self.dim):
            raise ValueError(f"vector shape {arr.shape} does not match ({self.prob.n}, {self.dim})")
        return arr

    def norm(self, p) -> DDF:
        return pn_norm(self, p)

    def ddf(self, p, q) -> DDF:
        """The induced probabilistic metric F_pq = nu_{p-q}."""
        return pn_norm(self, self.coerce(p) - self.coerce(q))

    def to_json(self) -> dict:
        return {"probs": list(self.prob.probs), "dim": self.dim, "tau": self.tau.value, "tau_star": self.tau_star.value}

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePNSpace":
        return cls(FiniteProbSpace(tuple(obj["probs"])), int(obj["dim"]), obj.get("tau", "W"), obj.get("tau_star", "M"))


def pn_norm(space: FinitePNSpace, p) -> DDF:
    p = space.coerce(p)
    return distance_ddf(space.prob, np.sqrt(np.sum(p * p, axis=-1)))


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Applies the same d x d matrix at every outcome."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.atleast_2d(np.asarray(self.matrix, dtype=float)))

    def __call__(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(p) @ self.matrix.T

    def power(self, n: int) -> "LinearMap":
        return LinearMap(np.linalg.matrix_power(self.matrix, n))


@dataclass
class Violation:
    axiom: str
    detail: str
    x: float | None = None


@dataclass
class AxiomReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def pn_axiom_check(space: FinitePNSpace, sample_vectors, lambda_grid=(0.0, 0.25, 0.5, 0.75, 1.0),
                   rtol: float = AXIOM_RTOL) -> AxiomReport:
    """N1 and N2 per sample (exact), N3 per sample pair, N4 per sample and lambda.

    For N3 and N4 the larger side is compared after shrinking its argument by
    a factor 1 + rtol, which absorbs norm rounding; rtol = 0 is exact.
    """
    slack = 1.0 / (1.0 + rtol)
    vecs = [space.coerce(v) for v in sample_vectors]
    if not vecs:
        raise ValueError("need at least one sample vector")
    if any(not 0.0 <= lam <= 1.0 for lam in lambda_grid):
        raise ValueError("lambda grid must lie in [0, 1]")
    rep = AxiomReport({"N1": 0, "N2": 0, "N3": 0, "N4": 0})
    norms = [pn_norm(space, v) for v in vecs]
    for idx, (v, nv) in enumerate(zip(vecs, norms)):
        rep.checked["N1"] += 1
        if (nv == EPS0) != (not np.any(v)):
            rep.violations.append(Violation("N1", f"sample {idx}: nu = eps0 iff theta fails"))
        rep.checked["N2"] += 1
        if pn_norm(space, -v) != nv:
            rep.violations.append(Violation("N2", f"sample {idx}: nu(-p) != nu(p)"))
    for (a, va), (b, vb) in combinations(list(enumerate(vecs)), 2):
        rep.checked["N3"] += 1
        conv = tau_conv(space.tau, norms[a], norms[b])
        x = dominance_witness(scale_arg(pn_norm(space, va + vb), slack), conv)
        if x is not None:
            rep.violations.append(Violation("N3", f"samples ({a}, {b})", x))
    for idx, v in enumerate(vecs):
        for lam in lambda_grid:
            rep.checked["N4"] += 1
            conv = tau_conv(space.tau_star, pn_norm(space, lam * v), pn_norm(space, (1.0 - lam) * v))
            x = dominance_witness(scale_arg(conv, slack), norms[idx])
            if x is not None:
                rep.violations.append(Violation("N4", f"sample {idx}, lambda {lam}", x))
    return rep


def c_contraction_holds(nu_p: DDF, nu_fp: DDF, k: float, mode: str) -> bool:
    """nu_p(t) > 1 - t  implies  nu_fp(k t) > 1 - t (paper) or > 1 - k t (strict)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    return c_condition(nu_p, nu_fp, k, 1.0 if mode == "paper" else k)


@dataclass
class SampleResult:
    index: int
    paper: bool
    strict: bool
    dense_agrees: bool


@dataclass
class PNContractionReport:
    k: float
    samples: list[SampleResult]

    def ok(self, mode: str = "strict") -> bool:
        return all(getattr(s, mode) for s in self.samples)

    @property
    def reductions_agree(self) -> bool:
        return all(s.dense_agrees for s in self.samples)


def pn_c_contraction_check(space: FinitePNSpace, f, k: float, samples) -> PNContractionReport:
    if not 0.0 < k < 1.0:
        raise ValueError("k must lie in (0, 1)")
    vecs = [space.coerce(v) for v in samples]
    if not vecs:
        raise ValueError("need at least one sample vector")
    out = []
    for idx, v in enumerate(vecs):
        F, G = pn_norm(space, v), pn_norm(space, f(v))
        paper = c_contraction_holds(F, G, k, "paper")
        strict = c_contraction_holds(F, G, k, "strict")
        agree = paper == c_condition_dense(F, G, k, 1.0) and strict == c_condition_dense(F, G, k, k)
        out.append(SampleResult(idx, paper, strict, agree))
    return PNContractionReport(k, out)


def n0_of_epsilon(eps: float, k: float) -> int:
    """Smallest n >= 1 with k^n (1 + eps) <= eps, decided in exact rationals."""
    if not (0.0 < eps < 1.0 and 0.0 < k < 1.0):
        raise ValueError("eps and k must lie in (0, 1)")
    e, kk = Fraction(eps), Fraction(k)
    lhs = kk * (1 + e)
    n = 1
    while lhs > e:
        lhs *= kk
        n += 1
    return n


@dataclass
class NullReport:
    n0: int
    checked: list[int]
    failures: list[int]
    first_n: int | None

    @property
    def ok(self) -> bool:
        return not self.failures


def iterate_to_null(space: FinitePNSpace, f, p, eps: float, horizon: int, k: float, verify: str = "start") -> NullReport:
    """nu_{f^n p}(eps) > 1 - eps for every n in (n0, n0 + horizon].

    ``verify`` picks where the strict-mode contraction is checked first:
    "start" only at p, "orbit" at every iterate used (what the iteration
    argument actually consumes), "none" skips the check.
    """
    if verify not in ("start", "orbit", "none"):
        raise ValueError("verify must be 'start', 'orbit' or 'none'")
    p = space.coerce(p)
    n0 = n0_of_epsilon(eps, k)
    xs = [p]
    for _ in range(n0 + horizon):
        xs.append(space.coerce(f(xs[-1])))
    if verify != "none":
        rep = pn_c_contraction_check(space, f, k, xs[:-1] if verify == "orbit" else xs[:1])
        if not rep.ok("strict"):
            bad = next(s.index for s in rep.samples if not s.strict)
            raise ContractionPrecondition(f"strict-mode C condition fails at iterate {bad}")
    hit = [eval_ddf(pn_norm(space, x), eps) > 1.0 - eps for x in xs]
    checked = list(range(n0 + 1, n0 + horizon + 1))
    failures = [n for n in checked if not hit[n]]
    first = next((n for n, h in enumerate(hit) if h), None)
    return NullReport(n0, checked, failures, first)


@dataclass
class FixedPointReport:
    fixed: list[int]
    violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations


def uniqueness_and_theta_check(space: FinitePNSpace, f, samples) -> FixedPointReport:
    """Every exact fixed point among the samples must have nu_p = eps0, i.e. be theta."""
    fixed, bad = [], []
    for idx, v in enumerate(space.coerce(s) for s in samples):
        if np.array_equal(f(v), v):
            fixed.append(idx)
            if pn_norm(space, v) != EPS0 or np.any(v):
                bad.append(idx)
    return FixedPointReport(fixed, bad)


def continuity_delta(eps: float, k: float) -> float:
    """A delta with k * delta < eps (eps / 2k capped at 1 up to k = 1/2)."""
    if k <= 0.5:
        return min(eps / (2 * k), 1.0)
    return eps / (k + 1)


def in_theta_neighborhood(space: FinitePNSpace, p, t: float) -> bool:
    return eval_ddf(pn_norm(space, p), t) > 1.0 - t


@dataclass
class ContinuityReport:
    deltas: dict[float, float]
    pairs_checked: int
    violations: list[tuple[float, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def uniform_continuity_probe(space: FinitePNSpace, f, k: float, eps_grid, samples) -> ContinuityReport:
    """p - q in N_theta(delta) must give f p - f q in N_theta(eps)."""
    if not isinstance(f, LinearMap):
        raise TypeError("uniform continuity probe needs a LinearMap")
    if not 0.0 < k < 1.0:
        raise ValueError("k must lie in (0, 1)")
    vecs = [space.coerce(s) for s in samples]
    images = [f(v) for v in vecs]
    deltas = {eps: continuity_delta(eps, k) for eps in eps_grid}
    bad, n = [], 0
    for eps, delta in deltas.items():
        for a in range(len(vecs)):
            for b in range(len(vecs)):
                if not in_theta_neighborhood(space, vecs[a] - vecs[b], delta):
                    continue
                n += 1
                if not in_theta_neighborhood(space, images[a] - images[b], eps):
                    bad.append((eps, a, b))
    return ContinuityReport(deltas, n, bad)


def continuity_at_theta_probe(space: FinitePNSpace, f, k: float, eps_grid, samples) -> ContinuityReport:
    """f(N_theta(delta)) inside N_theta(eps); f need not be linear."""
    vecs = [space.coerce(s) for s in samples]
    deltas = {eps: continuity_delta(eps, k) for eps in eps_grid}
    bad, n = [], 0
    for eps, delta in deltas.items():
        for a, v in enumerate(vecs):
            if in_theta_neighborhood(space, v, delta):
                n += 1
                if not in_theta_neighborhood(space, f(v), eps):
                    bad.append((eps, a, a))
    return ContinuityReport(deltas, n, bad)


def operator_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(np.atleast_2d(A), 2))


def scaled_to_norm(A: np.ndarray, target: float) -> np.ndarray:
    nrm = operator_norm(A)
    return A * (target / nrm) if nrm > 0 else A

