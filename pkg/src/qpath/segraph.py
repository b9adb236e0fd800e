"""SE-graphs: planar digraphs with east/south edges, sources and sinks.

Coordinates are exact ``Fraction`` values. Sources sit on the line
``alpha = 0`` (``r_1`` lowest), sinks on ``beta = 0`` (``c_1`` leftmost).
Edge orientation (H or V) is derived from coordinates, never stored.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .qtorus import CommutationTable

__all__ = [
    "Edge",
    "GraphValidationError",
    "SEGraph",
    "ValidationReport",
    "Vertex",
    "Violation",
    "cauchon_graph",
    "commutation_table",
    "full_grid",
    "generate_grid_subgraph",
    "load",
    "relayout",
    "save",
    "segments_intersect",
    "validate",
]

KINDS = ("source", "sink", "inner")


class GraphValidationError(ValueError):
    """Raised when a graph fails validation where a valid one is required."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


@dataclass(frozen=True)
class Vertex:
    id: str
    alpha: Fraction
    beta: Fraction
    kind: str

    @property
    def point(self) -> tuple[Fraction, Fraction]:
        return (self.alpha, self.beta)


@dataclass(frozen=True, order=True)
class Edge:
    tail: str
    head: str


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("float coordinates are not accepted; use int or 'p/q' strings")
    return Fraction(x)


class SEGraph:
    """Immutable vertex/edge container with cached adjacency.

    Construction does not validate; call :func:`validate` (``load`` does).
    """

    def __init__(self, vertices, edges):
        vs = {}
        for v in vertices:
            if v.kind not in KINDS:
                raise ValueError(f"vertex {v.id}: unknown kind {v.kind!r}")
            if v.id in vs:
                raise ValueError(f"duplicate vertex id {v.id!r}")
            vs[v.id] = Vertex(v.id, _frac(v.alpha), _frac(v.beta), v.kind)
        es = []
        seen = set()
        for e in edges:
            if e.tail not in vs or e.head not in vs:
                raise ValueError(f"edge {e.tail}->{e.head} references an unknown vertex")
            if e in seen:
                raise ValueError(f"duplicate edge {e.tail}->{e.head}")
            seen.add(e)
            es.append(e)
        self.vertices: dict[str, Vertex] = vs
        self.edges: tuple[Edge, ...] = tuple(sorted(es, key=self._edge_key))
        self.edge_set = frozenset(self.edges)
        self.sources: tuple[str, ...] = tuple(
            v.id for v in sorted((v for v in vs.values() if v.kind == "source"), key=lambda v: (v.beta, v.id))
        )
        self.sinks: tuple[str, ...] = tuple(
            v.id for v in sorted((v for v in vs.values() if v.kind == "sink"), key=lambda v: (v.alpha, v.id))
        )
        out: dict[str, list[Edge]] = {v: [] for v in vs}
        inc: dict[str, list[Edge]] = {v: [] for v in vs}
        for e in self.edges:
            out[e.tail].append(e)
            inc[e.head].append(e)
        # children ordered by head coordinates: (alpha asc, beta desc)
        for lst in out.values():
            lst.sort(key=lambda e: (vs[e.head].alpha, -vs[e.head].beta, e.head))
        self.out_edges = {k: tuple(v) for k, v in out.items()}
        self.in_edges = {k: tuple(v) for k, v in inc.items()}

    def _edge_key(self, e: Edge):
        t, h = self.vertices[e.tail], self.vertices[e.head]
        return (t.alpha, -t.beta, h.alpha, -h.beta, e.tail, e.head)

    @property
    def m(self) -> int:
        return len(self.sources)

    @property
    def n(self) -> int:
        return len(self.sinks)

    def source(self, i: int) -> str:
        """1-based source ``r_i``."""
        return self.sources[i - 1]

    def sink(self, j: int) -> str:
        """1-based sink ``c_j``."""
        return self.sinks[j - 1]

    @cached_property
    def source_index(self) -> dict[str, int]:
        return {v: i + 1 for i, v in enumerate(self.sources)}

    @cached_property
    def sink_index(self) -> dict[str, int]:
        return {v: j + 1 for j, v in enumerate(self.sinks)}

    @cached_property
    def inner(self) -> tuple[str, ...]:
        """Inner vertices in canonical generator order (alpha asc, beta desc)."""
        ws = [v for v in self.vertices.values() if v.kind == "inner"]
        ws.sort(key=lambda v: (v.alpha, -v.beta, v.id))
        return tuple(v.id for v in ws)

    def orient(self, e: Edge) -> str | None:
        """'H', 'V', or None when the edge is neither east- nor south-pointing."""
        t, h = self.vertices[e.tail], self.vertices[e.head]
        if t.beta == h.beta and t.alpha < h.alpha:
            return "H"
        if t.alpha == h.alpha and t.beta > h.beta:
            return "V"
        return None

    def point(self, v: str) -> tuple[Fraction, Fraction]:
        return self.vertices[v].point

    def alpha(self, v: str) -> Fraction:
        return self.vertices[v].alpha

    def beta(self, v: str) -> Fraction:
        return self.vertices[v].beta

    @cached_property
    def table(self) -> CommutationTable:
        return commutation_table(self)

    @cached_property
    def topo_rank(self) -> dict[str, tuple]:
        """A linear extension of the edge order: ``alpha - beta`` grows along every edge."""
        return {v.id: (v.alpha - v.beta, v.alpha, v.id) for v in self.vertices.values()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SEGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices.values()), self.edge_set))

    def __repr__(self) -> str:
        return f"SEGraph(m={self.m}, n={self.n}, |W|={len(self.inner)}, |E|={len(self.edges)})"


# ---------------------------------------------------------------- geometry

def _orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share at least one point (exact)."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def _meet_only_at(a, b, c, d, shared) -> bool:
    """Segments with common endpoint ``shared`` have no other common point."""
    if _orient(a, b, c) or _orient(a, b, d):
        return True
    p = b if a == shared else a
    r = d if c == shared else c
    # collinear: they overlap iff both run away from `shared` the same way
    return (p[0] - shared[0]) * (r[0] - shared[0]) + (p[1] - shared[1]) * (r[1] - shared[1]) < 0


# -------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    condition: str
    message: str
    witness: tuple = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    mode: str = "strict"

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "mode": self.mode,
            "violations": [
                {"condition": v.condition, "message": v.message, "witness": list(v.witness)} for v in self.violations
            ],
        }

    def __str__(self) -> str:
        if self.ok:
            return f"valid ({self.mode})"
        return "; ".join(f"[{v.condition}] {v.message}" for v in self.violations)


def _chain_components(g: SEGraph, orient: str) -> dict[str, int]:
    """Connected components under H-edges (or V-edges), as vertex -> label."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if g.orient(e) == orient:
            parent[find(e.tail)] = find(e.head)
    labels: dict[str, int] = {}
    out = {}
    for v in sorted(g.vertices):
        out[v] = labels.setdefault(find(v), len(labels))
    return out


def validate(g: SEGraph, mode: str = "strict") -> ValidationReport:
    """Check SE-graph conditions (i)-(iv) plus the coordinate convention.

    ``mode="weak"`` accepts any edge pointing into the closed south-east
    sector and skips the coordinate convention.
    """
    if mode not in ("strict", "weak"):
        raise ValueError(f"unknown mode {mode!r}")
    rep = ValidationReport(mode=mode)
    add = rep.violations.append
    V = g.vertices

    # (iii) placement of sources / sinks / inner vertices
    for v in V.values():
        if v.kind == "source" and not (v.alpha == 0 and v.beta > 0):
            add(Violation("iii", f"source {v.id} must have alpha=0, beta>0", (v.id,)))
        elif v.kind == "sink" and not (v.beta == 0 and v.alpha > 0):
            add(Violation("iii", f"sink {v.id} must have beta=0, alpha>0", (v.id,)))
        elif v.kind == "inner" and not (v.alpha > 0 and v.beta > 0):
            add(Violation("iii", f"inner vertex {v.id} must have alpha>0, beta>0", (v.id,)))
    pts = {}
    for v in V.values():
        if v.point in pts:
            add(Violation("i", f"vertices {pts[v.point]} and {v.id} coincide", (pts[v.point], v.id)))
        pts.setdefault(v.point, v.id)
    for e in g.edges:
        if V[e.head].kind == "source":
            add(Violation("iii", f"edge {e.tail}->{e.head} enters a source", (e.tail, e.head)))
        if V[e.tail].kind == "sink":
            add(Violation("iii", f"edge {e.tail}->{e.head} leaves a sink", (e.tail, e.head)))

    # (ii) edge directions
    for e in g.edges:
        t, h = V[e.tail], V[e.head]
        if mode == "strict":
            ok = g.orient(e) is not None
        else:
            ok = t.alpha <= h.alpha and t.beta >= h.beta and t.point != h.point
        if not ok:
            add(Violation("ii", f"edge {e.tail}->{e.head} points neither south nor east", (e.tail, e.head)))

    # (i) planarity: edges meet only at shared endpoints; no vertex inside an edge
    segs = [(e, V[e.tail].point, V[e.head].point) for e in g.edges]
    for x in range(len(segs)):
        e1, a, b = segs[x]
        for y in range(x + 1, len(segs)):
            e2, c, d = segs[y]
            if not segments_intersect(a, b, c, d):
                continue
            shared = {e1.tail, e1.head} & {e2.tail, e2.head}
            if len(shared) == 1 and _meet_only_at(a, b, c, d, V[next(iter(shared))].point):
                continue
            add(Violation("i", f"edges {e1.tail}->{e1.head} and {e2.tail}->{e2.head} cross", (e1.tail, e1.head, e2.tail, e2.head)))
    for e, a, b in segs:
        for v in V.values():
            if v.id in (e.tail, e.head):
                continue
            if _orient(a, b, v.point) == 0 and _on_segment(a, b, v.point):
                add(Violation("i", f"vertex {v.id} lies on edge {e.tail}->{e.head}", (v.id, e.tail, e.head)))

    # (iv) every vertex and edge on an R->C path
    fwd = _reach(g, g.sources, forward=True)
    bwd = _reach(g, g.sinks, forward=False)
    for v in sorted(V):
        if v not in fwd or v not in bwd:
            add(Violation("iv", f"vertex {v} lies on no source-to-sink path", (v,)))
    if not g.sources or not g.sinks:
        add(Violation("iv", "graph needs at least one source and one sink"))

    # coordinate convention: equal alpha iff V-dependent, equal beta iff H-dependent
    if mode == "strict" and not rep.conditions() & {"ii"}:
        hc, vc = _chain_components(g, "H"), _chain_components(g, "V")
        ids = sorted(V)
        for x in range(len(ids)):
            u = V[ids[x]]
            for y in range(x + 1, len(ids)):
                w = V[ids[y]]
                both_src = u.kind == w.kind == "source"
                both_snk = u.kind == w.kind == "sink"
                if not both_src and (u.alpha == w.alpha) != (vc[u.id] == vc[w.id]):
                    add(Violation("coords", f"{u.id},{w.id}: equal alpha must mean a common vertical path", (u.id, w.id)))
                if not both_snk and (u.beta == w.beta) != (hc[u.id] == hc[w.id]):
                    add(Violation("coords", f"{u.id},{w.id}: equal beta must mean a common horizontal path", (u.id, w.id)))
    return rep


def _reach(g: SEGraph, start, forward: bool) -> set[str]:
    seen = set(start)
    dq = deque(start)
    while dq:
        v = dq.popleft()
        nxt = [e.head for e in g.out_edges[v]] if forward else [e.tail for e in g.in_edges[v]]
        for w in nxt:
            if w not in seen:
                seen.add(w)
                dq.append(w)
    return seen


def require_valid(g: SEGraph, mode: str = "strict") -> SEGraph:
    rep = validate(g, mode)
    if not rep.ok:
        raise GraphValidationError(rep)
    return g


# ------------------------------------------------------- commutation table

def commutation_table(g: SEGraph) -> CommutationTable:
    """Quasi-commutation table of the inner vertices, from H-/V-reachability."""
    pairs = []
    inner = set(g.inner)
    for orient, sign in (("H", 1), ("V", -1)):
        nxt = {}
        for e in g.edges:
            if g.orient(e) == orient:
                nxt.setdefault(e.tail, []).append(e.head)
        for u in g.inner:
            stack, seen = list(nxt.get(u, ())), set()
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(nxt.get(v, ()))
            for v in seen:
                if v in inner and v != u:
                    pairs.append((u, v, sign))
    return CommutationTable(g.inner, pairs)


# ------------------------------------------------------------- generators

def _grid_ids(m: int, n: int, sink_cols=None):
    sink_cols = sink_cols or range(1, n + 1)
    src = {i: f"r{i}" for i in range(1, m + 1)}
    snk = {j: f"c{k}" for k, j in enumerate(sorted(sink_cols), 1)}
    inn = {(i, j): f"v{i}_{j}" for i in range(1, m + 1) for j in range(1, n + 1)}
    return src, snk, inn


def _grid_edges(m: int, n: int, sink_cols=None) -> list[tuple[tuple, tuple]]:
    """Edges of the full grid as pairs of grid cells; column 0 = sources, row 0 = sinks."""
    sink_cols = set(sink_cols or range(1, n + 1))
    out = []
    for i in range(1, m + 1):
        for j in range(0, n):
            out.append(((i, j), (i, j + 1)))
        for j in range(1, n + 1):
            if i > 1 or j in sink_cols:
                out.append(((i, j), (i - 1, j)))
    return out


def _build_from_cells(m: int, n: int, cell_edges, sink_cols=None) -> SEGraph:
    src, snk, inn = _grid_ids(m, n, sink_cols)

    def vid(cell):
        i, j = cell
        if j == 0:
            return src[i]
        if i == 0:
            return snk[j]
        return inn[i, j]

    used = set()
    edges = []
    for a, b in cell_edges:
        edges.append(Edge(vid(a), vid(b)))
        used.update((a, b))
    verts = []
    for cell in sorted(used):
        i, j = cell
        kind = "source" if j == 0 else "sink" if i == 0 else "inner"
        verts.append(Vertex(vid(cell), Fraction(j), Fraction(i), kind))
    return SEGraph(verts, edges)


def full_grid(m: int, n: int) -> SEGraph:
    """The complete m x n grid: inner vertex ``v{i}_{j}`` at (j, i)."""
    if m < 1 or n < 1:
        raise ValueError("m, n must be positive")
    return _build_from_cells(m, n, _grid_edges(m, n))


def _random_monotone_path(rng: random.Random, m: int, n: int, i: int, j: int):
    """Random grid path r_i -> c_j as a list of cell edges."""
    cells = [(i, 0), (i, 1)]
    r, c = i, 1
    while (r, c) != (1, j):
        if r == 1:
            c += 1
        elif c == j:
            r -= 1
        else:
            if rng.random() < 0.5:
                c += 1
            else:
                r -= 1
        cells.append((r, c))
    cells.append((0, j))
    return list(zip(cells, cells[1:]))


def generate_grid_subgraph(m: int, n: int, seed: int, density: float = 0.7, extra_cols: int = 0) -> SEGraph:
    """Random valid SE-graph inside the m x n grid, deterministic per seed.

    Each grid edge is kept with probability ``density``; dead parts are
    pruned, then random source-to-sink staircase paths are added so every
    source and sink survives. Coordinates are repaired with :func:`relayout`.

    With ``extra_cols > 0`` the grid gets ``n + extra_cols`` columns and the
    n sinks hang below a random subset of them (always including the last).
    Bends in sink-free columns then avoid the alpha of every sink.
    """
    if m < 1 or n < 1 or extra_cols < 0:
        raise ValueError("m, n must be positive and extra_cols non-negative")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    tag = f"qpath-grid:{m}:{n}:{seed}:{density}" + (f":{extra_cols}" if extra_cols else "")
    rng = random.Random(tag)
    if density >= 1 and not extra_cols:
        return full_grid(m, n)
    width = n + extra_cols
    cols = sorted(rng.sample(range(1, width), n - 1)) + [width] if extra_cols else list(range(1, n + 1))
    kept = {e for e in _grid_edges(m, width, cols) if rng.random() < density}
    for i in range(1, m + 1):
        kept.update(_random_monotone_path(rng, m, width, i, rng.choice(cols)))
    for j in cols:
        kept.update(_random_monotone_path(rng, m, width, rng.randint(1, m), j))
    # prune edges not on any source-to-sink path
    while True:
        heads = {b for _, b in kept}
        tails = {a for a, _ in kept}
        alive = {
            (a, b)
            for a, b in kept
            if (a[1] == 0 or a in heads) and (b[0] == 0 or b in tails)
        }
        if alive == kept:
            break
        kept = alive
    g = relayout(_build_from_cells(m, width, sorted(kept), cols))
    rep = validate(g)
    if not rep.ok:  # pragma: no cover - the construction above is always valid
        return full_grid(m, n)
    return g


def relayout(g: SEGraph) -> SEGraph:
    """Reassign coordinates so equal alpha (beta) means a common V (H) chain.

    Each chain is shifted by a distinct offset smaller than half the minimal
    coordinate gap, which keeps directions and planarity intact.
    """
    hc, vc = _chain_components(g, "H"), _chain_components(g, "V")
    V = g.vertices

    def gap(values):
        vals = sorted(set(values))
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        return min(diffs) if diffs else Fraction(1)

    da = gap(v.alpha for v in V.values())
    db = gap(v.beta for v in V.values())

    def offsets(chains, coord, fixed_kind):
        groups: dict = {}
        for v in V.values():
            if v.kind == fixed_kind:
                continue
            groups.setdefault(coord(v), set()).add(chains[v.id])
        off = {}
        for base, labels in groups.items():
            labels = sorted(labels, key=lambda lab: min(
                (V[x].beta, V[x].alpha) for x in V if chains[x] == lab))
            for k, lab in enumerate(labels):
                off[lab] = Fraction(k, 2 * len(labels))
        return off

    a_off = offsets(vc, lambda v: v.alpha, "source")
    b_off = offsets(hc, lambda v: v.beta, "sink")
    verts = []
    for v in V.values():
        a = v.alpha if v.kind == "source" else v.alpha + a_off[vc[v.id]] * da
        b = v.beta if v.kind == "sink" else v.beta + b_off[hc[v.id]] * db
        verts.append(Vertex(v.id, a, b, v.kind))
    return SEGraph(verts, g.edges)


def cauchon_graph(diagram) -> SEGraph:
    """SE-graph of an m x n black/white diagram.

    ``diagram[i-1][j-1]`` is True for a black cell in row i (rows counted
    upwards, as the sources) and column j. Each black cell must have every
    cell to its right black or every cell above it black; this is exactly
    what keeps the skipping H- and V-edges from crossing.
    """
    rows = [list(map(bool, r)) for r in diagram]
    m = len(rows)
    if m == 0 or not rows[0]:
        raise ValueError("empty diagram")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("diagram rows have different lengths")
    for i in range(m):
        for j in range(n):
            if rows[i][j]:
                right = all(rows[i][jj] for jj in range(j + 1, n))
                above = all(rows[ii][j] for ii in range(i + 1, m))
                if not (right or above):
                    raise ValueError(f"cell (row {i + 1}, col {j + 1}) is black but has white cells to its right and above")
    cell_edges = []
    for i in range(1, m + 1):
        prev = (i, 0)
        for j in range(1, n + 1):
            if not rows[i - 1][j - 1]:
                cell_edges.append((prev, (i, j)))
                prev = (i, j)
    for j in range(1, n + 1):
        prev = None
        for i in range(m, 0, -1):
            if not rows[i - 1][j - 1]:
                if prev is not None:
                    cell_edges.append((prev, (i, j)))
                prev = (i, j)
        if prev is not None:
            cell_edges.append((prev, (0, j)))
    src, snk, _ = _grid_ids(m, n)
    g = _build_from_cells(m, n, cell_edges)
    # sources / sinks of empty rows / columns still belong to the graph
    missing = [Vertex(src[i], Fraction(0), Fraction(i), "source") for i in range(1, m + 1) if src[i] not in g.vertices]
    missing += [Vertex(snk[j], Fraction(j), Fraction(0), "sink") for j in range(1, n + 1) if snk[j] not in g.vertices]
    if missing:
        g = SEGraph(list(g.vertices.values()) + missing, g.edges)
    return require_valid(g)


# ---------------------------------------------------------------------- I/O

def _coord_out(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_json(g: SEGraph) -> dict:
    verts = sorted(g.vertices.values(), key=lambda v: (KINDS.index(v.kind), v.alpha, -v.beta, v.id))
    return {
        "vertices": [{"id": v.id, "x": _coord_out(v.alpha), "y": _coord_out(v.beta), "kind": v.kind} for v in verts],
        "edges": [{"tail": e.tail, "head": e.head} for e in g.edges],
    }


def from_json(data: dict, mode: str = "strict", check: bool = True) -> SEGraph:
    try:
        verts = [Vertex(str(v["id"]), _frac(v["x"]), _frac(v["y"]), v["kind"]) for v in data["vertices"]]
        edges = [Edge(str(e["tail"]), str(e["head"])) for e in data["edges"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    g = SEGraph(verts, edges)
    return require_valid(g, mode) if check else g


def save(g: SEGraph, path) -> None:
    Path(path).write_text(json.dumps(to_json(g), indent=1) + "\n")


def load(path, mode: str = "strict") -> SEGraph:
    """Read and validate a graph file; raises ``GraphValidationError`` if invalid."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    return from_json(data, mode)
