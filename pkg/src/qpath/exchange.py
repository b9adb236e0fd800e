"""Double flows, their symmetric-difference decomposition, and flow exchange.

Elements of the row and column index sets are tagged as ``('r', i)`` and
``('c', j)``.  Colors are ``'w'`` (belongs to the first flow) and ``'b'``
(belongs to the second flow).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .minors import Flow, flow_weight
from .pathkit import DPath
from .qtorus import QElement, q_ratio
from .segraph import Edge, SEGraph

__all__ = [
    "Couple",
    "Decomposition",
    "DoubleFlow",
    "ExchangeError",
    "ExchangePath",
    "Matching",
    "RefinedCortege",
    "Step",
    "case_label",
    "check_decomposition",
    "couple_records",
    "decompose",
    "exchange",
    "exchange_ratio",
    "flow_from_edges",
    "predicted_exponent",
    "refine",
]

Elem = tuple  # ('r', i) or ('c', j)


class ExchangeError(ValueError):
    pass


# ---------------------------------------------------------------- corteges

@dataclass(frozen=True)
class RefinedCortege:
    Iw: frozenset
    Ib: frozenset
    Jw: frozenset
    Jb: frozenset

    @property
    def Yr(self) -> tuple[int, ...]:
        return tuple(sorted(self.Iw | self.Ib))

    @property
    def Yc(self) -> tuple[int, ...]:
        return tuple(sorted(self.Jw | self.Jb))

    @property
    def k(self) -> int:
        return (len(self.Iw) + len(self.Ib) + len(self.Jw) + len(self.Jb)) // 2

    def elements(self) -> list[Elem]:
        return [("r", i) for i in self.Yr] + [("c", j) for j in self.Yc]

    def color(self, e: Elem) -> str:
        side, x = e
        white, black = (self.Iw, self.Ib) if side == "r" else (self.Jw, self.Jb)
        if x in white:
            return "w"
        if x in black:
            return "b"
        raise KeyError(e)

    def circular_order(self) -> list[Elem]:
        """Positions around the circle: rows left to right on top, columns right to left below."""
        return [("r", i) for i in self.Yr] + [("c", j) for j in reversed(self.Yc)]

    def to_dict(self) -> dict:
        return {k: sorted(getattr(self, k)) for k in ("Iw", "Ib", "Jw", "Jb")}


def refine(I, J, I2, J2) -> RefinedCortege:
    I, J, I2, J2 = map(frozenset, (I, J, I2, J2))
    if len(I) != len(J) or len(I2) != len(J2):
        raise ValueError("each index pair needs |I| = |J|")
    rc = RefinedCortege(I - I2, I2 - I, J - J2, J2 - J)
    assert len(rc.Iw) - len(rc.Ib) == len(rc.Jw) - len(rc.Jb)
    return rc


@dataclass(frozen=True)
class Couple:
    """Two tagged elements; rows come before columns, smaller index first."""

    a: Elem
    b: Elem

    def __post_init__(self):
        a, b = sorted([tuple(self.a), tuple(self.b)], key=lambda e: (e[0] != "r", e[1]))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def kind(self) -> str:
        sides = self.a[0] + self.b[0]
        return {"rr": "R", "cc": "C", "rc": "RC"}[sides]

    @property
    def f(self) -> int:
        return self.a[1]

    @property
    def g(self) -> int:
        return self.b[1]

    def __contains__(self, e) -> bool:
        return tuple(e) in (self.a, self.b)

    def __str__(self) -> str:
        name = {"r": "r", "c": "c"}
        return f"{self.kind}{{{name[self.a[0]]}{self.a[1]},{name[self.b[0]]}{self.b[1]}}}"


def case_label(c: Couple, rc: RefinedCortege) -> str:
    """Which of C, C1, ..., C5 the couple falls in."""
    white = rc.color(c.a) == "w"
    return {"C": ("C", "C1"), "R": ("C2", "C3"), "RC": ("C4", "C5")}[c.kind][0 if white else 1]


def predicted_exponent(c: Couple, rc: RefinedCortege) -> int:
    if c.kind == "RC":
        return 0
    return 1 if rc.color(c.a) == "w" else -1


@dataclass(frozen=True)
class Matching:
    couples: frozenset

    def couple_of(self, e: Elem) -> Couple:
        for c in self.couples:
            if e in c:
                return c
        raise KeyError(e)

    def problems(self, rc: RefinedCortege) -> list[str]:
        out = []
        elems = [e for c in self.couples for e in (c.a, c.b)]
        if sorted(elems) != sorted(rc.elements()):
            out.append("couples do not partition the refined cortege")
            return out
        for c in sorted(self.couples, key=lambda c: (c.a, c.b)):
            same = rc.color(c.a) == rc.color(c.b)
            if same != (c.kind == "RC"):
                out.append(f"color rule fails for {c}")
        pos = {e: i for i, e in enumerate(rc.circular_order())}
        chords = sorted(tuple(sorted((pos[c.a], pos[c.b]))) for c in self.couples)
        for x in range(len(chords)):
            a, b = chords[x]
            for y in range(x + 1, len(chords)):
                c, d = chords[y]
                if (a < c < b) != (a < d < b):
                    out.append(f"chords {chords[x]} and {chords[y]} cross")
        return out

    def is_feasible(self, rc: RefinedCortege) -> bool:
        return not self.problems(rc)

    def to_list(self) -> list:
        return [[list(c.a), list(c.b), c.kind] for c in sorted(self.couples, key=lambda c: (c.a, c.b))]


# ------------------------------------------------------------ double flows

@dataclass(frozen=True)
class DoubleFlow:
    phi: Flow
    phi2: Flow

    @property
    def cortege(self) -> RefinedCortege:
        return refine(self.phi.I, self.phi.J, self.phi2.I, self.phi2.J)

    def weight(self, g: SEGraph) -> QElement:
        return flow_weight(self.phi, g) * flow_weight(self.phi2, g)

    @property
    def edge_union(self) -> frozenset:
        return self.phi.edges | self.phi2.edges

    @property
    def edge_diff(self) -> frozenset:
        return self.phi.edges ^ self.phi2.edges

    def to_dict(self) -> dict:
        return {"phi": self.phi.to_dict(), "phi2": self.phi2.to_dict()}


@dataclass(frozen=True)
class Step:
    edge: Edge
    forward: bool
    color: str

    def start(self) -> str:
        return self.edge.tail if self.forward else self.edge.head

    def end(self) -> str:
        return self.edge.head if self.forward else self.edge.tail

    def reversed(self) -> Step:
        return Step(self.edge, not self.forward, self.color)


def _reverse(steps):
    return tuple(s.reversed() for s in reversed(steps))


def _segments(steps) -> list[tuple[str, DPath, bool]]:
    """Maximal single-color runs as (color, directed path, traversed_forward)."""
    out = []
    run: list[Step] = []
    for s in steps:
        if run and s.color != run[-1].color:
            out.append(run)
            run = []
        run.append(s)
    if run:
        out.append(run)
    segs = []
    for run in out:
        verts = [run[0].start()] + [s.end() for s in run]
        fwd = run[0].forward
        segs.append((run[0].color, DPath(tuple(verts) if fwd else tuple(reversed(verts))), fwd))
    return segs


@dataclass(frozen=True)
class ExchangePath:
    """An alternating path of the symmetric difference, walked from ``couple.a``."""

    couple: Couple
    steps: tuple[Step, ...]

    @property
    def start(self) -> str:
        return self.steps[0].start()

    @property
    def end(self) -> str:
        return self.steps[-1].end()

    @property
    def vertices(self) -> tuple[str, ...]:
        return (self.start,) + tuple(s.end() for s in self.steps)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(s.edge for s in self.steps)

    def segments(self) -> list[tuple[str, DPath]]:
        return [(c, p) for c, p, _ in _segments(self.steps)]

    def bends(self) -> list[tuple[str, str]]:
        """Junctions of consecutive segments as (vertex, 'peak' | 'pit')."""
        segs = _segments(self.steps)
        out = []
        for (_, p, fwd), (_, q, _) in zip(segs, segs[1:]):
            v = p.t if fwd else p.s
            out.append((v, "pit" if fwd else "peak"))
        return out

    def to_dict(self) -> dict:
        return {"couple": [list(self.couple.a), list(self.couple.b)], "kind": self.couple.kind,
                "vertices": list(self.vertices),
                "segments": [{"color": c, "path": list(p.vertices)} for c, p in self.segments()]}


@dataclass(frozen=True)
class Decomposition:
    U: frozenset
    exchange_paths: tuple[ExchangePath, ...]
    cycles: tuple[tuple[Step, ...], ...]
    matching: Matching

    def path_for(self, c: Couple) -> ExchangePath:
        for p in self.exchange_paths:
            if p.couple == c:
                return p
        raise ExchangeError(f"{c} is not a couple of the matching")

    def to_dict(self) -> dict:
        return {"exchange_paths": [p.to_dict() for p in self.exchange_paths],
                "cycles": [[s.start() for s in cyc] for cyc in self.cycles],
                "matching": self.matching.to_list()}


def _elem(g: SEGraph, v: str) -> Elem:
    if v in g.source_index:
        return ("r", g.source_index[v])
    if v in g.sink_index:
        return ("c", g.sink_index[v])
    raise ExchangeError(f"exchange path ends at inner vertex {v}")


def decompose(df: DoubleFlow, g: SEGraph) -> Decomposition:
    """Split degree-4 vertices of the symmetric difference and read off paths and cycles."""
    Ephi = df.phi.edges
    U = df.edge_diff
    deg: dict[str, int] = {}
    for e in U:
        deg[e.tail] = deg.get(e.tail, 0) + 1
        deg[e.head] = deg.get(e.head, 0) + 1

    def n_out(v):
        return (v, "+") if deg[v] == 4 else (v, "")

    def n_in(v):
        return (v, "-") if deg[v] == 4 else (v, "")

    adj: dict[tuple, list[Edge]] = {}
    for e in sorted(U):
        adj.setdefault(n_out(e.tail), []).append(e)
        adj.setdefault(n_in(e.head), []).append(e)
    for node, es in adj.items():
        if len(es) > 2:  # pragma: no cover - impossible for a double flow
            raise ExchangeError(f"vertex {node[0]} has {len(es)} incident edges after splitting")

    def step_from(node, e) -> tuple[Step, tuple]:
        fwd = node == n_out(e.tail)
        return Step(e, fwd, "w" if e in Ephi else "b"), (n_in(e.head) if fwd else n_out(e.tail))

    def walk(node, first: Edge):
        steps, e = [], first
        while True:
            s, node = step_from(node, e)
            steps.append(s)
            nxt = [x for x in adj[node] if x != e]
            if not nxt or nxt[0] == first:
                return steps
            e = nxt[0]

    seen: set[Edge] = set()
    paths = []
    for node in sorted(n for n, es in adj.items() if len(es) == 1):
        if adj[node][0] in seen:
            continue
        steps = walk(node, adj[node][0])
        seen.update(s.edge for s in steps)
        couple = Couple(_elem(g, steps[0].start()), _elem(g, steps[-1].end()))
        if _elem(g, steps[0].start()) != couple.a:
            steps = _reverse(steps)
        paths.append(ExchangePath(couple, tuple(steps)))
    cycles = []
    for e in sorted(U):
        if e in seen:
            continue
        steps = walk(n_out(e.tail), e)
        seen.update(s.edge for s in steps)
        if any(s.color == "b" and not s.forward for s in steps):
            steps = _reverse(steps)
        cycles.append(tuple(steps))
    paths.sort(key=lambda p: (p.couple.a, p.couple.b))
    return Decomposition(U, tuple(paths), tuple(cycles), Matching(frozenset(p.couple for p in paths)))


def check_decomposition(df: DoubleFlow, dec: Decomposition, g: SEGraph) -> list[str]:
    """Problems with the path count, endpoint sets, alternation, or matching feasibility."""
    rc = df.cortege
    out = []
    if len(dec.exchange_paths) != rc.k:
        out.append(f"{len(dec.exchange_paths)} exchange paths, expected {rc.k}")
    ends = sorted(e for p in dec.exchange_paths for e in (p.couple.a, p.couple.b))
    if ends != sorted(rc.elements()):
        out.append("endpoints differ from the refined cortege")
    for p in dec.exchange_paths:
        w = {s.forward for s in p.steps if s.color == "w"}
        b = {s.forward for s in p.steps if s.color == "b"}
        if len(w) > 1 or len(b) > 1 or w == b:
            out.append(f"path {p.couple} does not alternate directions by color")
    out.extend(dec.matching.problems(rc))
    return out


# ---------------------------------------------------------------- exchange

def flow_from_edges(edges, I, J, g: SEGraph) -> Flow:
    """Rebuild a flow from its edge set, tracing from each source of I."""
    succ: dict[str, str] = {}
    for e in edges:
        if e.tail in succ:
            raise ExchangeError(f"vertex {e.tail} has two outgoing flow edges")
        succ[e.tail] = e.head
    paths, used = [], set()
    for i in sorted(I):
        v = g.source(i)
        trail = [v]
        while v in succ:
            used.add(Edge(v, succ[v]))
            v = succ[v]
            trail.append(v)
        if v not in g.sink_index:
            raise ExchangeError(f"path from r{i} stops at non-sink {v}")
        paths.append(DPath(tuple(trail)))
    if used != set(edges):
        raise ExchangeError("edge set is not a union of source-to-sink paths")
    sinks = tuple(g.sink_index[p.t] for p in paths)
    if sinks != tuple(sorted(J)):
        raise ExchangeError(f"paths end at sinks {sinks}, expected {tuple(sorted(J))}")
    seen: set[str] = set()
    for p in paths:
        if seen & p.vertex_set:
            raise ExchangeError("paths of the rebuilt flow intersect")
        seen |= p.vertex_set
    return Flow(tuple(sorted(I)), tuple(sorted(J)), tuple(paths))


def exchange(df: DoubleFlow, couple: Couple, g: SEGraph, dec: Decomposition | None = None,
             check: bool = True) -> DoubleFlow:
    dec = dec or decompose(df, g)
    P = dec.path_for(couple)
    rows = {x for s, x in (couple.a, couple.b) if s == "r"}
    cols = {x for s, x in (couple.a, couple.b) if s == "c"}
    I, J = set(df.phi.I) ^ rows, set(df.phi.J) ^ cols
    I2, J2 = set(df.phi2.I) ^ rows, set(df.phi2.J) ^ cols
    psi = flow_from_edges(df.phi.edges ^ P.edges, I, J, g)
    psi2 = flow_from_edges(df.phi2.edges ^ P.edges, I2, J2, g)
    out = DoubleFlow(psi, psi2)
    if check:
        if out.edge_union != df.edge_union:
            raise AssertionError("edge union changed under exchange")
        if out.edge_diff != df.edge_diff:
            raise AssertionError("symmetric difference changed under exchange")
        if decompose(out, g).matching != dec.matching:
            raise AssertionError("matching changed under exchange")
    return out


def exchange_ratio(df: DoubleFlow, couple: Couple, g: SEGraph, dec: Decomposition | None = None) -> int:
    """k with w(phi) w(phi') = q^k w(psi) w(psi')."""
    new = exchange(df, couple, g, dec, check=False)
    k = q_ratio(df.weight(g), new.weight(g))
    if k is None:
        raise ExchangeError("double flow weights are not related by a power of q")
    return k


@dataclass
class CoupleRecord:
    couple: Couple
    case: str
    predicted: int
    measured: int

    @property
    def ok(self) -> bool:
        return self.predicted == self.measured

    def to_dict(self) -> dict:
        return {"kind": self.couple.kind, "f": self.couple.f, "g": self.couple.g, "case": self.case,
                "predicted_exponent": self.predicted, "measured_exponent": self.measured, "ok": self.ok}


def couple_records(df: DoubleFlow, g: SEGraph, dec: Decomposition | None = None) -> list[CoupleRecord]:
    dec = dec or decompose(df, g)
    rc = df.cortege
    return [CoupleRecord(p.couple, case_label(p.couple, rc), predicted_exponent(p.couple, rc),
                         exchange_ratio(df, p.couple, g, dec)) for p in dec.exchange_paths]
