"""Batch verification of the identities over generated instances.

Every suite returns a :class:`SuiteResult`; :func:`run_suites` bundles them
into a JSON-ready summary.  All randomness flows from ``VerifyConfig.seed``.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .exchange import DoubleFlow, check_decomposition, couple_records, decompose, exchange
from .minors import (MinorIndex, check_lindstrom, check_manin, enumerate_flows, enumerate_path_systems,
                     eta_involution, minor_indices, path_matrix, system_weight)
from .pathkit import (all_paths, enumerate_paths, essential_weight, is_lower, is_standard, path_weight,
                      telescoped_weight, varphi, weakly_intersecting)
from .qtorus import QElement, q_ratio, scalar_q_pow
from .segraph import SEGraph, full_grid, generate_grid_subgraph
from .snakes import (DegenerateError, build_cycle, cycle_from_steps, gamma_cycle, gamma_Z, snakes_and_links,
                     string_products)

SUITES = ("lindstrom", "manin", "weights", "lemmas", "theorem2", "structural", "gamma", "eta")
MUTATIONS = ("qminor-sign",)

# gamma_Z implied by the closing construction and the cycle orientation
GAMMA_Z_EXPECTED = {"C": 1, "C1": -1, "C2": 1, "C3": -1, "C4": 0, "C5": 0}


@dataclass
class VerifyConfig:
    seed: int = 0
    n_seeds: int = 10
    m: int = 4
    n: int = 4
    density: float = 0.6
    max_k: int = 3
    double_flows: int = 200
    lemma_pairs: int = 500
    weight_paths: int = 10_000
    gamma_extra_cols: int = 4
    gamma_min: int = 20
    only: tuple[str, ...] = ()
    mutation: str | None = None

    def __post_init__(self):
        bad = set(self.only) - set(SUITES)
        if bad:
            raise ValueError(f"unknown suite(s): {sorted(bad)}")
        if self.mutation is not None and self.mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation!r}")
        if self.max_k > min(self.m, self.n):
            raise ValueError("max_k exceeds min(m, n)")

    def seeds(self):
        return range(self.seed, self.seed + self.n_seeds)

    def graphs(self):
        for s in self.seeds():
            yield s, generate_grid_subgraph(self.m, self.n, s, self.density)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)

    def fail(self, **info):
        if len(self.failures) < 20:
            self.failures.append({"suite": self.name, **info})
        else:
            self.stats["failures_not_listed"] += 1

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"checked": self.checked, "failures": len(self.failures) + self.stats.get("failures_not_listed", 0),
                "stats": {str(k): v for k, v in sorted(self.stats.items(), key=lambda kv: str(kv[0]))}}


# ------------------------------------------------------------- samplers

def sample_double_flows(g: SEGraph, rng: random.Random, count: int, max_k: int = 3):
    """Random double flows; one in three shares its rows, one in three its columns."""
    cache: dict = {}

    def flows(I, J):
        key = (tuple(I), tuple(J))
        if key not in cache:
            cache[key] = enumerate_flows(g, MinorIndex(I, J))
        return cache[key]

    kmax = min(max_k, g.m, g.n)
    out = []
    for t in range(count * 4):
        if len(out) >= count:
            break
        mode = t % 3
        k = rng.randint(1, kmax)
        I = sorted(rng.sample(range(1, g.m + 1), k))
        J = sorted(rng.sample(range(1, g.n + 1), k))
        k2 = k if mode else rng.randint(0, kmax)
        I2 = I if mode == 1 else sorted(rng.sample(range(1, g.m + 1), k2))
        J2 = J if mode == 2 else sorted(rng.sample(range(1, g.n + 1), k2))
        F, F2 = flows(I, J), flows(I2, J2)
        if F and F2:
            out.append(DoubleFlow(rng.choice(F), rng.choice(F2)))
    return out


def _double_flow_stream(cfg: VerifyConfig, per_graph: int = 6, extra_cols: int = 0, m=None, n=None):
    rng = random.Random(f"qpath-df:{cfg.seed}:{extra_cols}")
    s = cfg.seed
    while True:
        g = generate_grid_subgraph(m or cfg.m, n or cfg.n, s, cfg.density, extra_cols)
        for df in sample_double_flows(g, rng, per_graph, cfg.max_k):
            yield g, df
        s += 1


def lemma_buckets(g: SEGraph, rng: random.Random, per_bucket: int):
    """Weakly intersecting standard pairs (P, Q) grouped by the lemma whose hypotheses they meet.

    For the lemmas phrased with "P lower than Q" the pair is ordered accordingly.
    """
    paths = [p for p in all_paths(g) if is_standard(p, g)]
    a = g.alpha
    by_s, by_t = {}, {}
    for p in paths:
        by_s.setdefault(a(p.s), []).append(p)
        by_t.setdefault(a(p.t), []).append(p)
    out = {k: [] for k in ("disjoint_columns", "common_source", "common_target", "end_above_start", "end_below_start", "same_ends")}

    def pick(group_a, group_b, tries):
        for _ in range(tries):
            p, q = rng.choice(group_a), rng.choice(group_b)
            if p != q and weakly_intersecting(p, q):
                yield p, q

    tries = per_bucket * 20
    for p, q in pick(paths, paths, tries):
        ends = lambda x: {a(x.s), a(x.t)} - {0}  # noqa: E731
        if not ends(p) & ends(q) and len(out["disjoint_columns"]) < per_bucket:
            out["disjoint_columns"].append((p, q))
    keys_s = [k for k in by_s if k > 0 and len(by_s[k]) > 1]
    for _ in range(tries):
        if not keys_s:
            break
        grp = by_s[rng.choice(keys_s)]
        for p, q in pick(grp, grp, 1):
            if is_lower(q, p, g):
                p, q = q, p
            if not is_lower(p, q, g):
                continue
            bucket = "common_source" if a(p.t) != a(q.t) else "same_ends"
            if len(out[bucket]) < per_bucket:
                out[bucket].append((p, q))
    keys_t = [k for k in by_t if len(by_t[k]) > 1]
    for _ in range(tries):
        if not keys_t:
            break
        grp = by_t[rng.choice(keys_t)]
        for p, q in pick(grp, grp, 1):
            if a(p.s) == a(q.s) and a(p.s) != 0:
                continue
            if is_lower(q, p, g):
                p, q = q, p
            if is_lower(p, q, g) and len(out["common_target"]) < per_bucket:
                out["common_target"].append((p, q))
    keys_ts = [k for k in by_t if k in by_s]
    for _ in range(tries * 2):
        if not keys_ts:
            break
        k = rng.choice(keys_ts)
        for p, q in pick(by_t[k], by_s[k], 1):
            bucket = "end_above_start" if g.beta(p.t) >= g.beta(q.s) else "end_below_start"
            if len(out[bucket]) < per_bucket:
                out[bucket].append((p, q))
    return out


LEMMA_VALUES = {"disjoint_columns": 0, "common_source": 1, "common_target": 1, "end_above_start": 1, "end_below_start": -1, "same_ends": 2}


# --------------------------------------------------------------- suites

def suite_lindstrom(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("lindstrom")
    qexp = -1 if cfg.mutation == "qminor-sign" else 1
    for s, g in cfg.graphs():
        M = path_matrix(g)
        for idx in minor_indices(g.m, g.n, cfg.max_k):
            r = check_lindstrom(g, idx, M, qexp=qexp)
            res.checked += 1
            res.stats[f"k={idx.k}"] += 1
            if r.n_flows == 0 and r.minor.is_zero():
                res.stats["no_flows"] += 1
            if not r.equal:
                res.fail(seed=s, **r.to_dict())
    return res


def suite_manin(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("manin")
    for s, g in cfg.graphs():
        rep = check_manin(path_matrix(g))
        res.checked += rep.checked
        res.stats["matrices"] += 1
        if not rep.ok:
            res.fail(seed=s, **rep.counterexample)
    return res


def suite_weights(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("weights")
    s = cfg.seed
    while res.checked < cfg.weight_paths:
        g = generate_grid_subgraph(cfg.m, cfg.n, s, cfg.density) if s % 4 else full_grid(cfg.m, cfg.n)
        for i in range(1, g.m + 1):
            for j in range(1, g.n + 1):
                for p in enumerate_paths(g, i, j):
                    res.checked += 1
                    w = path_weight(p, g)
                    if w != telescoped_weight(p, g) or w != essential_weight(p, g):
                        res.fail(seed=s, path=list(p.vertices))
        s += 1
    res.stats["graphs"] = s - cfg.seed
    return res


def suite_lemmas(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("lemmas")
    rng = random.Random(f"qpath-lemmas:{cfg.seed}")
    counts = Counter()
    s = cfg.seed
    for _ in range(200):
        required = [k for k in LEMMA_VALUES if k != "same_ends"]
        if all(counts[k] >= cfg.lemma_pairs for k in required):
            break
        g = generate_grid_subgraph(cfg.m, cfg.n, s, cfg.density)
        for lemma, pairs in lemma_buckets(g, rng, cfg.lemma_pairs // 5 + 1).items():
            for p, q in pairs:
                k = varphi(p, q, g)
                counts[lemma] += 1
                if lemma == "same_ends":
                    res.stats["same_ends_agree" if k == 2 else "same_ends_disagree"] += 1
                    continue
                res.checked += 1
                if k != LEMMA_VALUES[lemma]:
                    res.fail(seed=s, lemma=lemma, P=list(p.vertices), Q=list(q.vertices), varphi=k)
        s += 1
    for k, v in counts.items():
        res.stats[f"pairs_{k}"] = v
    for k in LEMMA_VALUES:
        if k != "same_ends" and counts[k] < cfg.lemma_pairs:
            res.fail(lemma=k, reason=f"only {counts[k]} pairs sampled")
    return res


def suite_exchange_ratios(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("theorem2")
    n_df = 0
    for g, df in _double_flow_stream(cfg):
        if n_df >= cfg.double_flows:
            break
        n_df += 1
        dec = decompose(df, g)
        for r in couple_records(df, g, dec):
            res.checked += 1
            res.stats[r.case] += 1
            sl = snakes_and_links(df, r.couple, g, dec)
            if sl.twins:
                res.stats["with_twins"] += 1
            if sl.defect_pairs():
                res.stats["with_shared_columns"] += 1
            if any(not p.trivial and not is_standard(p.path, g) for p in sl.pieces.values()):
                res.stats["with_vertical_piece"] += 1
            if not r.ok:
                res.fail(double_flow=df.to_dict(), **r.to_dict())
    res.stats["double_flows"] = n_df
    return res


def suite_structural(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("structural")
    n_df = 0
    for g, df in _double_flow_stream(cfg):
        if n_df >= cfg.double_flows:
            break
        n_df += 1
        dec = decompose(df, g)
        res.checked += 1
        for problem in check_decomposition(df, dec, g):
            res.fail(double_flow=df.to_dict(), problem=problem)
        for p in dec.exchange_paths:
            res.checked += 1
            try:
                new = exchange(df, p.couple, g, dec, check=True)
            except AssertionError as e:
                res.fail(double_flow=df.to_dict(), couple=str(p.couple), problem=str(e))
                continue
            if exchange(new, p.couple, g) != df:
                res.fail(double_flow=df.to_dict(), couple=str(p.couple), problem="exchange is not an involution")
        res.stats["cycles"] += len(dec.cycles)
    res.stats["double_flows"] = n_df
    return res


def suite_gamma(cfg: VerifyConfig) -> SuiteResult:
    """Bend sums, closing cycles, harvested cycles and string products.

    Bend sums are checked on instances without defect pairs (twins allowed);
    string products only on fully non-degenerate ones.
    """
    res = SuiteResult("gamma")
    nondeg = Counter()
    n_df = 0
    stream = _double_flow_stream(cfg, per_graph=8, extra_cols=cfg.gamma_extra_cols, m=max(cfg.m, 5), n=cfg.n)
    for g, df in stream:
        enough = all(nondeg[c] >= cfg.gamma_min for c in ("C", "C2", "C4"))
        if n_df >= 20 * cfg.double_flows or (enough and n_df >= cfg.double_flows):
            break
        n_df += 1
        dec = decompose(df, g)
        for cyc in dec.cycles:
            try:
                r = gamma_cycle(cycle_from_steps(cyc, g))
            except ValueError:
                res.stats["harvested_cycle_not_simple"] += 1
                continue
            res.checked += 1
            res.stats["harvested_cycles"] += 1
            if r.gamma != (2 if r.orientation == "cw" else -2):
                res.fail(double_flow=df.to_dict(), problem="harvested cycle", gamma=r.gamma, orientation=r.orientation)
        for p in dec.exchange_paths:
            sl = snakes_and_links(df, p.couple, g, dec)
            if sl.defect_pairs():
                continue
            try:
                gz = gamma_Z(sl)
            except DegenerateError:
                res.stats["undecidable_lower"] += 1
                continue
            nondeg[sl.case] += 1
            res.checked += 1
            if gz != GAMMA_Z_EXPECTED[sl.case]:
                res.fail(double_flow=df.to_dict(), case=sl.case, gamma_Z=gz)
            try:
                r = gamma_cycle(build_cycle(sl))
            except ValueError:
                res.stats["closing_cycle_not_simple"] += 1
            else:
                res.checked += 1
                res.stats["closing_cycles"] += 1
                if r.gamma != (2 if r.orientation == "cw" else -2):
                    res.fail(double_flow=df.to_dict(), case=sl.case, problem="closing cycle", gamma_D=r.gamma)
            if sl.nondegenerate:
                sp = string_products(sl)
                res.checked += 1
                res.stats[f"strings_{sl.case}"] += 1
                ratio = q_ratio(df.weight(g), exchange(df, p.couple, g, dec, check=False).weight(g))
                if (sp.phiI, sp.phiII, sp.phiIII) != (0, gz, 0) or sp.total != ratio:
                    res.fail(double_flow=df.to_dict(), case=sl.case, strings=sp.to_dict(), ratio=ratio)
    for c, v in nondeg.items():
        res.stats[f"nondegenerate_{c}"] = v
    res.stats["double_flows"] = n_df
    for c in ("C", "C2", "C4"):
        if nondeg[c] < cfg.gamma_min:
            res.fail(case=c, reason=f"only {nondeg[c]} non-degenerate instances")
    return res


def suite_eta(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("eta")
    graphs = [full_grid(3, 3)] + [generate_grid_subgraph(3, 3, s, 0.8) for s in cfg.seeds()]
    for gi, g in enumerate(graphs):
        for idx in minor_indices(g.m, g.n, 3, min_k=2):
            signed = QElement.zero(g.table)
            for ps in enumerate_path_systems(g, idx):
                if ps.is_flow():
                    continue
                res.checked += 1
                term = scalar_q_pow(system_weight(ps, g), ps.length)
                signed = signed + (-term if ps.length % 2 else term)
                e = eta_involution(ps, g)
                k = q_ratio(system_weight(ps, g), system_weight(e, g))
                dl = e.length - ps.length
                if eta_involution(e, g) != ps or e.is_flow():
                    res.fail(graph=gi, problem="not an involution on intersecting systems")
                elif abs(dl) != 1 or k != dl:
                    res.fail(graph=gi, problem="length or weight relation", dl=dl, k=k)
            res.stats["signed_sums"] += 1
            if not signed.is_zero():
                res.fail(graph=gi, I=list(idx.I), J=list(idx.J), problem="intersecting systems do not cancel")
    return res


SUITE_FUNCS = {
    "lindstrom": suite_lindstrom,
    "manin": suite_manin,
    "weights": suite_weights,
    "lemmas": suite_lemmas,
    "theorem2": suite_exchange_ratios,
    "structural": suite_structural,
    "gamma": suite_gamma,
    "eta": suite_eta,
}


def run_suites(cfg: VerifyConfig) -> dict:
    names = cfg.only or SUITES
    results = [SUITE_FUNCS[n](cfg) for n in names]
    return {
        "checked": sum(r.checked for r in results),
        "failures": [f for r in results for f in r.failures],
        "suites": {r.name: r.to_dict() for r in results},
    }
