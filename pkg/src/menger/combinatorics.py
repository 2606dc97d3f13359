"""Syndetic sets, upper Banach density and the witness search on finite windows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .ddf import DDF, dominates, scale_arg


@dataclass(frozen=True)
class Periodic:
    """Members i >= start are those with i mod p in residues; below start, ``pre``."""

    p: int
    residues: tuple[int, ...]
    pre: tuple[int, ...] = ()
    start: int | None = None

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError("period must be positive")
        res = tuple(sorted(set(int(r) for r in self.residues)))
        if any(not 0 <= r < self.p for r in res):
            raise ValueError(f"residues must lie in [0, {self.p})")
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "pre", tuple(sorted(set(int(x) for x in self.pre))))
        if self.start is None:
            object.__setattr__(self, "start", max(self.pre) + 1 if self.pre else 0)
        if any(x >= self.start for x in self.pre):
            raise ValueError("preperiod members must lie below the periodic start")

    def contains(self, i: int) -> bool:
        if i < self.start:
            return i in self.pre
        return i % self.p in self.residues

    def to_json(self) -> dict:
        return {"pre": list(self.pre), "p": self.p, "residues": list(self.residues), "start": self.start}


@dataclass(frozen=True)
class IndexSet:
    n: int
    members: tuple[int, ...]
    periodic: Periodic | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("window length must be >= 0")
        ms = tuple(self.members)
        if any(a >= b for a, b in zip(ms, ms[1:])):
            raise ValueError("members must be strictly increasing")
        if ms and (ms[0] < 0 or ms[-1] >= self.n):
            raise ValueError(f"members must lie in [0, {self.n})")
        if self.periodic is not None:
            expect = tuple(i for i in range(self.n) if self.periodic.contains(i))
            if expect != ms:
                raise ValueError("members disagree with the periodic descriptor")
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "IndexSet":
        return cls(n, tuple(sorted(set(members))))

    @classmethod
    def from_periodic(cls, n: int, periodic: Periodic) -> "IndexSet":
        return cls(n, tuple(i for i in range(n) if periodic.contains(i)), periodic)

    def __contains__(self, i: int) -> bool:
        return i in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[list(self.members)] = True
        return out

    def union(self, other: "IndexSet") -> "IndexSet":
        if other.n != self.n:
            raise ValueError("window lengths differ")
        return IndexSet.from_members(self.n, set(self.members) | set(other.members))

    def to_json(self) -> dict:
        out = {"n": self.n, "members": list(self.members)}
        if self.periodic is not None:
            out["periodic"] = self.periodic.to_json()
        return out

    @classmethod
    def from_json(cls, obj: dict, default_n: int = 60) -> "IndexSet":
        per = obj.get("periodic")
        n = int(obj.get("n", default_n))
        if per is not None:
            periodic = Periodic(int(per["p"]), tuple(per["residues"]), tuple(per.get("pre", ())), per.get("start"))
            idx = cls.from_periodic(n, periodic)
            if "members" in obj and tuple(obj["members"]) != idx.members:
                raise ValueError("members disagree with the periodic descriptor")
            return idx
        return cls.from_members(n, obj["members"])


def is_m_syndetic(I: IndexSet, m: int) -> bool:
    """Every window [k, k+m) inside [0, n) meets I."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > I.n:
        raise ValueError(f"m = {m} exceeds the window length {I.n}")
    return _gaps_ok(I.members, 0, I.n, m)


def _gaps_ok(members, lo: int, hi: int, m: int) -> bool:
    prev = lo - 1
    for i in members:
        if i - prev > m:
            return False
        prev = i
    return hi - prev <= m


@dataclass(frozen=True)
class Density:
    """Upper Banach density: exact when lower == upper.

    On a bare window the two fields are estimates, not an enclosure: ``upper``
    is the inf-sup formula over fully contained windows and includes the
    whole window as one candidate, so it never exceeds ``lower`` (the whole
    window's density).
    """

    lower: Fraction
    upper: Fraction

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        if self.exact:
            return str(self.upper)
        lo, hi = sorted((self.lower, self.upper))
        return f"[{lo}, {hi}]"


def window_density_upper(I: IndexSet) -> Fraction:
    """min over lengths L of the largest |I ∩ [k, k+L)| / L over windows in [0, n)."""
    ind = I.indicator().astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(ind)))
    best = Fraction(1)
    for L in range(1, I.n + 1):
        top = int(np.max(csum[L:] - csum[:-L]))
        cand = Fraction(top, L)
        if cand < best:
            best = cand
    return best


def window_density_lower(I: IndexSet) -> Fraction:
    return Fraction(len(I), I.n)


def upper_banach_density(I: IndexSet) -> Density:
    """Exact for periodic descriptors (preperiod ignored), bounds on a bare window."""
    if I.periodic is not None:
        d = Fraction(len(I.periodic.residues), I.periodic.p)
        return Density(d, d)
    if I.n == 0:
        raise ValueError("density of an empty window is undefined")
    return Density(window_density_lower(I), window_density_upper(I))


@dataclass
class FiniteRelation:
    """R on [0, n) x [0, n) stored as a boolean matrix; R[i, j] means (i, j) in R."""

    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=bool)
        if self.matrix.shape != (self.n, self.n):
            raise ValueError(f"relation matrix must be {self.n} x {self.n}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "FiniteRelation":
        mat = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair {(i, j)} outside [0, {n})")
            mat[i, j] = True
        return cls(n, mat)

    def __contains__(self, pair) -> bool:
        i, j = pair
        return 0 <= i < self.n and 0 <= j < self.n and bool(self.matrix[i, j])

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(map(int, ij)) for ij in np.argwhere(self.matrix)]

    def column_zero(self) -> IndexSet:
        return IndexSet.from_members(self.n, np.flatnonzero(self.matrix[:, 0]).tolist())

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteRelation":
        return cls.from_pairs(int(obj["n"]), [tuple(p) for p in obj["pairs"]])


def build_relation_R(space, f, p, F: DDF, k: float, N: int) -> FiniteRelation:
    """{(i, j) : F_{f^i p, f^j p}(t) >= F(t / k^j) for all t} on [0, N)^2."""
    from .contraction import as_map, orbit

    xs = orbit(as_map(f), p, N - 1)
    if hasattr(space, "pairwise_distances") and hasattr(space, "prob"):
        return _relation_espace(space, xs, F, k, N)
    mat = np.zeros((N, N), dtype=bool)
    scaled = [scale_arg(F, k**j) for j in range(N)]
    for i in range(N):
        for j in range(N):
            mat[i, j] = dominates(space.ddf(xs[i], xs[j]), scaled[j])
    return FiniteRelation(N, mat)


def _relation_espace(inst, xs, F: DDF, k: float, N: int) -> FiniteRelation:
    # F_ij >= F(. / k^j) iff at each cell start s of the scaled F,
    # P(D_ij <= s) reaches the cell value.
    D = inst.pairwise_distances(xs)
    kj = np.array([k**j for j in range(N)])
    mat = np.ones((N, N), dtype=bool)
    for b, v in zip(F.breakpoints, F.values):
        if v == 0.0:
            continue
        thr = b * kj
        mass = inst.prob.masses(D <= thr[None, :, None])
        mat &= mass >= v
    return FiniteRelation(N, mat)


class Lemma34Error(RuntimeError):
    pass


@dataclass
class Lemma34Result:
    I: IndexSet
    witnesses: dict[tuple[int, int], int]
    density: Fraction
    bound: Fraction
    source: str


def check_lemma34_hypotheses(R: FiniteRelation, m: int) -> list[str]:
    """Problems with hypotheses (i) and (ii) on the window; empty when both hold."""
    problems = []
    if m > R.n:
        return [f"m = {m} exceeds window {R.n}"]
    if not is_m_syndetic(R.column_zero(), m):
        problems.append("(i) {i : (i, 0) in R} is not m-syndetic")
    mat = R.matrix
    n = R.n
    for delta in range(-(n - 1), n):
        diag = np.diagonal(mat, offset=delta)
        members = np.flatnonzero(diag)
        if members.size == 0:
            continue
        L = diag.size
        # (i, j) on this diagonal at position s needs the members from s onwards
        # to have gaps <= m up to the diagonal's end.
        gaps = np.diff(np.append(members, L))
        bad = np.flatnonzero(gaps > m)
        if bad.size:
            s = members[bad[-1]]
            i, j = (s, s + delta) if delta >= 0 else (s - delta, s)
            problems.append(f"(ii) slice of ({i}, {j}) is not m-syndetic")
    return problems


def _bitsets(R: FiniteRelation) -> list[int]:
    """Column i as a bitset over rows k with (k, i) in R."""
    cols = []
    weights = [1 << r for r in range(R.n)]
    for i in range(R.n):
        rows = np.flatnonzero(R.matrix[:, i])
        cols.append(sum(weights[r] for r in rows))
    return cols


def lemma34_search(R: FiniteRelation, m: int, exhaustive_limit: int = 24) -> Lemma34Result:
    """Find I with a common witness row for every pair and window density >= 1/(2 m^2).

    Follows the proof's skeleton with "L_ij nonempty on the window" standing in
    for ultrafilter membership: I_j = {i : (l + j, i) in R for some l}.  Each
    I_j is refined greedily, keeping a running intersection of the L-sets so
    that kept members share a witness, both in index order and with the
    best-connected columns first.  A pairwise-compatible greedy pass, the
    support of the fullest row and, on small windows, an exact maximum clique
    are tried as well.
    """
    problems = check_lemma34_hypotheses(R, m)
    if problems:
        raise Lemma34Error("hypotheses fail: " + "; ".join(problems[:5]))
    n = R.n
    bound = Fraction(1, 2 * m * m)
    cols = _bitsets(R)
    candidates: list[tuple[list[int], str]] = []
    for j in range(min(2 * m, n)):
        rows_from_j = ((1 << n) - 1) >> j << j
        Ij = [i for i in range(n) if cols[i] & rows_from_j]
        kept, common = [], rows_from_j
        for i in Ij:
            inter = common & cols[i]
            if inter:
                kept.append(i)
                common = inter
        candidates.append((kept, f"I_{j} shared-witness greedy"))
        kept = []
        for i in Ij:
            if all(cols[i] & cols[x] for x in kept):
                kept.append(i)
        candidates.append((kept, f"I_{j} pairwise greedy"))
        # same refinement, best-connected columns first
        kept, common = [], rows_from_j
        for i in sorted(Ij, key=lambda c: -cols[c].bit_count()):
            inter = common & cols[i]
            if inter:
                kept.append(i)
                common = inter
        candidates.append((sorted(kept), f"I_{j} shared-witness greedy by column size"))
    # a single row is a common witness for every pair in its support
    row = int(np.argmax(R.matrix.sum(axis=1)))
    candidates.append((np.flatnonzero(R.matrix[row]).tolist(), f"support of row {row}"))
    best, source = max(candidates, key=lambda c: len(c[0]))
    if Fraction(len(best), n) < bound and n <= exhaustive_limit:
        best, source = _max_clique(cols, n), "exhaustive clique"
    I = IndexSet.from_members(n, best)
    density = window_density_lower(I)
    if density < bound:
        raise Lemma34Error(f"best set has density {density} < {bound} ({source}, |I| = {len(best)})")
    return Lemma34Result(I, _witnesses(cols, I.members), density, bound, source)


def _max_clique(cols: list[int], n: int) -> list[int]:
    import networkx as nx

    g = nx.Graph()
    usable = [i for i in range(n) if cols[i]]
    g.add_nodes_from(usable)
    g.add_edges_from((a, b) for a, b in combinations(usable, 2) if cols[a] & cols[b])
    if not usable:
        return []
    clique, _ = nx.max_weight_clique(g, weight=None)
    return sorted(clique)


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _witnesses(cols: list[int], members) -> dict[tuple[int, int], int | None]:
    out = {}
    for a_pos, a in enumerate(members):
        for b in members[a_pos:]:
            inter = cols[a] & cols[b]
            out[(a, b)] = _lowest_bit(inter) if inter else None
    return out


def verify_lemma34(R: FiniteRelation, m: int, result: Lemma34Result) -> list[str]:
    """Independent check of a search result; returns the list of problems found."""
    problems = []
    members = result.I.members
    for a_pos, a in enumerate(members):
        for b in members[a_pos:]:
            w = result.witnesses.get((a, b))
            if w is None or not 0 <= w < R.n or not (R.matrix[w, a] and R.matrix[w, b]):
                problems.append(f"no valid witness for ({a}, {b})")
    if Fraction(len(members), R.n) < Fraction(1, 2 * m * m):
        problems.append(f"density {len(members)}/{R.n} below 1/(2 m^2)")
    return problems
