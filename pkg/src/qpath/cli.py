"""Command-line front end: ``qpath <command> [options]``.

Exit codes: 0 ok, 1 verification failure or invalid input graph, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import segraph
from .exchange import DoubleFlow, couple_records, decompose
from .minors import MinorIndex, check_lindstrom, enumerate_flows, path_matrix, q_minor
from .segraph import GraphValidationError
from .verify import MUTATIONS, SUITES, VerifyConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    seed: int = 0
    m: int = 4
    n: int = 4
    density: float = 0.6
    max_k: int = 3
    out: str | None = None
    format: str = "text"
    extra: dict = field(default_factory=dict)


def _default_seed() -> int:
    raw = os.environ.get("QPATH_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QPATH_SEED must be an integer, got {raw!r}") from None


def _index_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load(cfg: RunConfig) -> segraph.SEGraph:
    if not cfg.input:
        raise UsageError("--input is required")
    if not Path(cfg.input).is_file():
        raise UsageError(f"no such file: {cfg.input}")
    return segraph.load(cfg.input)


def _emit(cfg: RunConfig, text: str, data) -> None:
    body = json.dumps(data, indent=1, sort_keys=True) + "\n" if cfg.format == "json" else text.rstrip("\n") + "\n"
    if cfg.out:
        Path(cfg.out).write_text(body)
    else:
        sys.stdout.write(body)


def _index(cfg: RunConfig, I_key="I", J_key="J") -> MinorIndex:
    try:
        return MinorIndex(cfg.extra[I_key], cfg.extra[J_key])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------ commands

def cmd_validate(cfg: RunConfig) -> int:
    if not cfg.input or not Path(cfg.input).is_file():
        raise UsageError(f"no such file: {cfg.input}")
    try:
        data = json.loads(Path(cfg.input).read_text())
        g = segraph.from_json(data, check=False)
    except (json.JSONDecodeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    rep = segraph.validate(g, cfg.extra.get("mode", "strict"))
    lines = [str(rep)] if rep.ok else [f"invalid: condition ({v.condition}): {v.message}" for v in rep.violations]
    _emit(cfg, "\n".join(lines), rep.to_dict())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_gen(cfg: RunConfig) -> int:
    g = segraph.generate_grid_subgraph(cfg.m, cfg.n, cfg.seed, cfg.density, cfg.extra.get("extra_cols", 0))
    data = segraph.to_json(g)
    _emit(cfg, json.dumps(data, indent=1), data)
    return EXIT_OK


def cmd_cauchon(cfg: RunConfig) -> int:
    rows = cfg.extra.get("diagram")
    if rows is None:
        if not cfg.input or not Path(cfg.input).is_file():
            raise UsageError("give --diagram or an --input file holding a 0/1 matrix")
        rows = json.loads(Path(cfg.input).read_text())
    else:
        rows = [[c == "1" for c in r] for r in rows.split(";")]
    try:
        g = segraph.cauchon_graph(rows)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = segraph.to_json(g)
    _emit(cfg, json.dumps(data, indent=1), data)
    return EXIT_OK


def cmd_path_matrix(cfg: RunConfig) -> int:
    M = path_matrix(_load(cfg))
    lines = [f"a[{i},{j}] = {M[i, j]}" for i in range(1, M.m + 1) for j in range(1, M.n + 1)]
    _emit(cfg, "\n".join(lines), M.to_dict())
    return EXIT_OK


def cmd_minor(cfg: RunConfig) -> int:
    g = _load(cfg)
    idx = _index(cfg)
    try:
        idx.check_bounds(g.m, g.n)
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if not cfg.extra.get("check"):
        minor = q_minor(path_matrix(g), idx)
        _emit(cfg, f"{idx} = {minor}", {"index": str(idx), "minor": str(minor)})
        return EXIT_OK
    rep = check_lindstrom(g, idx)
    text = (f"{idx} = {rep.minor}\nflow sum ({rep.n_flows} flows) = {rep.flow_sum}\n"
            f"{rep.minor} = {rep.flow_sum}\nequal: {'true' if rep.equal else 'false'}")
    _emit(cfg, text, rep.to_dict())
    return EXIT_OK if rep.equal else EXIT_FAIL


def cmd_flows(cfg: RunConfig) -> int:
    g = _load(cfg)
    idx = _index(cfg)
    try:
        flows = enumerate_flows(g, idx)
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    lines = [f"{len(flows)} flows for {idx}"]
    lines += ["  " + " | ".join(str(p) for p in f.paths) for f in flows]
    _emit(cfg, "\n".join(lines), {"index": str(idx), "flows": [f.to_dict() for f in flows]})
    return EXIT_OK


def cmd_exchange(cfg: RunConfig) -> int:
    g = _load(cfg)
    idx, idx2 = _index(cfg), _index(cfg, "I2", "J2")
    try:
        F, F2 = enumerate_flows(g, idx), enumerate_flows(g, idx2)
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    a, b = cfg.extra.get("flow", 0), cfg.extra.get("flow2", 0)
    if not (0 <= a < len(F) and 0 <= b < len(F2)):
        print(f"error: {idx} has {len(F)} flows and {idx2} has {len(F2)}", file=sys.stderr)
        return EXIT_FAIL
    df = DoubleFlow(F[a], F2[b])
    dec = decompose(df, g)
    recs = couple_records(df, g, dec)
    lines = [f"double flow {idx} x {idx2}: {len(dec.exchange_paths)} exchange paths, {len(dec.cycles)} cycles"]
    for p, r in zip(dec.exchange_paths, recs):
        lines.append(f"  {p.couple} [{r.case}] predicted {r.predicted} measured {r.measured}"
                     f" {'ok' if r.ok else 'MISMATCH'}: {'-'.join(p.vertices)}")
    data = {"double_flow": df.to_dict(), "decomposition": dec.to_dict(), "couples": [r.to_dict() for r in recs]}
    _emit(cfg, "\n".join(lines), data)
    return EXIT_OK if all(r.ok for r in recs) else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    try:
        vc = VerifyConfig(seed=cfg.seed, n_seeds=cfg.extra.get("n_seeds", 10), m=cfg.m, n=cfg.n,
                          density=cfg.density, max_k=cfg.max_k, only=tuple(cfg.extra.get("only") or ()),
                          mutation=cfg.extra.get("mutation"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = run_suites(vc)
    lines = [f"{name}: checked {s['checked']}, failures {s['failures']}" for name, s in summary["suites"].items()]
    n_fail = sum(s["failures"] for s in summary["suites"].values())
    lines.append(f"total: checked {summary['checked']}, failures {n_fail}")
    if summary["failures"]:
        lines.append("first failure: " + json.dumps(summary["failures"][0], sort_keys=True))
    _emit(cfg, "\n".join(lines), summary)
    return EXIT_FAIL if summary["failures"] else EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "gen": cmd_gen,
    "cauchon": cmd_cauchon,
    "path-matrix": cmd_path_matrix,
    "minor": cmd_minor,
    "flows": cmd_flows,
    "exchange": cmd_exchange,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph JSON file")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $QPATH_SEED or 0)")
    common.add_argument("--m", type=int, default=4, help="number of sources")
    common.add_argument("--n", type=int, default=4, help="number of sinks")
    common.add_argument("--density", type=float, default=0.6)
    common.add_argument("--max-k", type=int, default=3)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="qpath", description="SE-graphs, quantum minors and flow exchanges.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("validate", parents=[common], help="check the planarity and orientation conditions")
    sp.add_argument("--mode", choices=("strict", "weak"), default="strict")
    sp = sub.add_parser("gen", parents=[common], help="random subgraph of a grid")
    sp.add_argument("--extra-cols", type=int, default=0)
    sp = sub.add_parser("cauchon", parents=[common], help="graph of a Cauchon diagram")
    sp.add_argument("--diagram", help="rows of 0/1 separated by ';', bottom row first")
    sub.add_parser("path-matrix", parents=[common], help="print the path matrix")
    helps = {"minor": "quantum minor [I|J] of the path matrix", "flows": "list the (I|J)-flows",
             "exchange": "decompose a double flow and exchange along each couple"}
    for name in ("minor", "flows", "exchange"):
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        sp.add_argument("--I", type=_index_list, required=True, help="rows, e.g. 1,2")
        sp.add_argument("--J", type=_index_list, required=True, help="columns, e.g. 1,3")
        if name == "minor":
            sp.add_argument("--check", action="store_true", help="compare with the flow sum")
        if name == "exchange":
            sp.add_argument("--I2", type=_index_list, required=True)
            sp.add_argument("--J2", type=_index_list, required=True)
            sp.add_argument("--flow", type=int, default=0, help="which (I|J)-flow to use")
            sp.add_argument("--flow2", type=int, default=0, help="which (I2|J2)-flow to use")
    sp = sub.add_parser("verify", parents=[common], help="run the verification suites")
    sp.add_argument("--only", action="append", choices=SUITES, help="restrict to a suite (repeatable)")
    sp.add_argument("--n-seeds", type=int, default=10)
    sp.add_argument("--mutation", choices=MUTATIONS, help="inject a known bug (should fail)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    base = {"command", "input", "seed", "m", "n", "density", "max_k", "out", "format"}
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        if args.max_k > min(args.m, args.n):
            raise UsageError("--max-k exceeds min(m, n)")
        cfg = RunConfig(args.command, args.input, seed, args.m, args.n, args.density, args.max_k, args.out,
                        args.format, {k: v for k, v in vars(args).items() if k not in base})
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphValidationError as exc:
        print(f"error: invalid graph: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
