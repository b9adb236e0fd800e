"""Acceptance criteria, each run at full scale with zero tolerance.

Every test records a one-line verdict in ``RESULTS``; conftest prints them
after the run.
"""
from __future__ import annotations

from qpath.exchange import check_decomposition, decompose, refine
from qpath.verify import (GAMMA_Z_EXPECTED, SuiteResult, VerifyConfig, suite_exchange_ratios, suite_eta,
                          suite_gamma, suite_lemmas, suite_lindstrom, suite_manin, suite_structural, suite_weights)

from conftest import load_running_example

RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[n])


def _merge(name, results):
    out = SuiteResult(name)
    for r in results:
        out.checked += r.checked
        out.failures += r.failures
        out.stats.update(r.stats)
    return out


SIZES = [(m, n) for m in range(1, 5) for n in range(1, 5)]


def test_1_lindstrom_identity():
    runs = [suite_lindstrom(VerifyConfig(n_seeds=50, m=m, n=n, max_k=min(3, m, n))) for m, n in SIZES]
    res = _merge("lindstrom", runs)
    graphs = 50 * len(SIZES)
    ok = res.ok and res.checked > 0
    record(1, "Lindstrom identity", ok, f"{res.checked} minors on {graphs} graphs up to 4x4, k<=3, "
           f"{len(res.failures)} failures, {res.stats['no_flows']} with no flow")
    assert ok, res.failures[:3]


def test_2_exchange_ratios():
    res = suite_exchange_ratios(VerifyConfig(double_flows=400))
    cases = {c: res.stats[c] for c in GAMMA_Z_EXPECTED}
    degenerate = {k: res.stats[k] for k in ("with_twins", "with_shared_columns", "with_vertical_piece")}
    ok = (res.ok and res.stats["double_flows"] >= 200 and all(cases.values()) and all(degenerate.values()))
    record(2, "exchange ratios", ok, f"{res.stats['double_flows']} double flows, {res.checked} couples, "
           f"cases {cases}, degenerate {degenerate}, {len(res.failures)} failures")
    assert ok, res.failures[:3]


def test_3_manin_relations():
    res = _merge("manin", [suite_manin(VerifyConfig(n_seeds=50, m=m, n=n, max_k=min(3, m, n))) for m, n in SIZES])
    ok = res.ok and res.stats["matrices"] == 50 * len(SIZES)
    record(3, "Manin relations", ok, f"{res.stats['matrices']} path matrices, {res.checked} relation checks, "
           f"{len(res.failures)} failures")
    assert ok, res.failures[:3]


def test_4_path_pair_lemmas():
    res = suite_lemmas(VerifyConfig(lemma_pairs=500))
    counts = {k[len("pairs_"):]: v for k, v in res.stats.items() if k.startswith("pairs_")}
    required = ("disjoint_columns", "common_source", "common_target", "end_above_start", "end_below_start")
    ok = res.ok and all(counts.get(k, 0) >= 500 for k in required)
    record(4, "path pair lemmas", ok, f"pairs per hypothesis {counts}, {len(res.failures)} failures")
    assert ok, res.failures[:3]


def test_5_gamma_laws():
    cfg = VerifyConfig(double_flows=200, gamma_min=20)
    res = suite_gamma(cfg)
    nondeg = {c: res.stats[f"nondegenerate_{c}"] for c in ("C", "C2", "C4")}
    ok = res.ok and all(v >= 20 for v in nondeg.values()) and res.stats["harvested_cycles"] > 0
    record(5, "gamma laws", ok, f"non-degenerate instances {nondeg}, harvested cycles "
           f"{res.stats['harvested_cycles']} ({res.stats['harvested_cycle_not_simple']} not simple, skipped), "
           f"closing cycles {res.stats['closing_cycles']}, {len(res.failures)} failures")
    assert ok, res.failures[:3]


def test_6_weight_forms():
    res = suite_weights(VerifyConfig(weight_paths=10_000))
    ok = res.ok and res.checked >= 10_000
    record(6, "weight forms agree", ok, f"{res.checked} source-to-sink paths on {res.stats['graphs']} graphs, "
           f"{len(res.failures)} failures")
    assert ok, res.failures[:3]


def test_7_structural_laws():
    st = suite_structural(VerifyConfig(double_flows=300))
    eta = suite_eta(VerifyConfig(n_seeds=20))
    ok = st.ok and eta.ok and st.checked > 0 and eta.checked > 0
    record(7, "structural laws", ok, f"{st.stats['double_flows']} double flows / {st.checked} checks "
           f"(path count, endpoints, alternation, feasibility, exchange involution and set equalities); "
           f"{eta.checked} intersecting path systems, {eta.stats['signed_sums']} signed sums; "
           f"{len(st.failures) + len(eta.failures)} failures")
    assert ok, (st.failures + eta.failures)[:3]


def test_8_running_example():
    g, df = load_running_example()
    rc = df.cortege
    dec = decompose(df, g)
    expected_rc = refine((1, 2, 3), (1, 3, 4), (2, 4), (2, 3))
    k = (len(rc.Iw) + len(rc.Ib) + len(rc.Jw) + len(rc.Jb)) // 2
    ok = (rc == expected_rc and len(dec.exchange_paths) == 3 == k and len(dec.cycles) == 1
          and not check_decomposition(df, dec, g))
    record(8, "running example", ok, f"{len(dec.exchange_paths)} exchange paths, {len(dec.cycles)} cycle, k={k}, "
           f"couples {dec.matching.to_list()}")
    assert ok
