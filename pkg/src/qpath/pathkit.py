"""Directed paths in SE-graphs, their weights, and the exponent varphi(P, Q).

Three independent ways to compute a path weight are provided:

* :func:`path_weight` multiplies edge weights left to right in the algebra;
* :func:`telescoped_weight` uses only the turning vertices of a source-to-sink path;
* :func:`essential_weight` uses the essential vertices and their signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .qtorus import QElement, normalize_word, q_ratio
from .segraph import Edge, SEGraph

__all__ = [
    "DPath",
    "EssentialForm",
    "NotAPathError",
    "NotStandardError",
    "all_paths",
    "beta_range",
    "edge_weight",
    "enumerate_paths",
    "essential_form",
    "essential_weight",
    "is_lower",
    "is_standard",
    "path_weight",
    "polyline_lower",
    "telescoped_weight",
    "varphi",
    "weakly_intersecting",
]


class NotAPathError(ValueError):
    pass


class NotStandardError(ValueError):
    pass


@dataclass(frozen=True)
class DPath:
    """A directed path given by its vertex sequence (a single vertex is allowed)."""

    vertices: tuple[str, ...]

    def __post_init__(self):
        if not self.vertices:
            raise NotAPathError("a path needs at least one vertex")
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def s(self) -> str:
        return self.vertices[0]

    @property
    def t(self) -> str:
        return self.vertices[-1]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(Edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices) - 1

    def __add__(self, other: DPath) -> DPath:
        """Concatenation; the last vertex of ``self`` must start ``other``."""
        if self.t != other.s:
            raise NotAPathError(f"cannot concatenate: {self.t} != {other.s}")
        return DPath(self.vertices + other.vertices[1:])

    def split_at(self, v: str) -> tuple[DPath, DPath]:
        k = self.vertices.index(v)
        return DPath(self.vertices[: k + 1]), DPath(self.vertices[k:])

    def __str__(self) -> str:
        return "-".join(self.vertices)


def check_path(p: DPath, g: SEGraph) -> None:
    for e in p.edges:
        if e not in g.edge_set:
            raise NotAPathError(f"{e.tail}->{e.head} is not an edge of the graph")
    if len(p.vertex_set) != len(p.vertices):
        raise NotAPathError("path repeats a vertex")


def is_standard(p: DPath, g: SEGraph) -> bool:
    return g.alpha(p.s) != g.alpha(p.t)


# ------------------------------------------------------------------ weights

def edge_weight(e: Edge, g: SEGraph) -> QElement:
    """``v`` for an H-edge out of a source, ``u^-1 v`` for an inner H-edge, 1 for a V-edge."""
    if e not in g.edge_set:
        raise NotAPathError(f"{e.tail}->{e.head} is not an edge of the graph")
    t = g.table
    kind = g.orient(e)
    if kind == "V":
        return QElement.one(t)
    if kind != "H":
        raise NotAPathError(f"{e.tail}->{e.head} is neither horizontal nor vertical")
    if g.vertices[e.tail].kind == "source":
        return QElement.gen(t, e.head)
    return QElement.word(t, [(e.tail, -1), (e.head, 1)])


def path_weight(p: DPath, g: SEGraph) -> QElement:
    check_path(p, g)
    w = QElement.one(g.table)
    for e in p.edges:
        w = w * edge_weight(e, g)
    return w


def _turns(p: DPath, g: SEGraph) -> list[tuple[str, str]]:
    """Turning vertices with their kind: 'HV' (horizontal then vertical) or 'VH'."""
    kinds = [g.orient(e) for e in p.edges]
    out = []
    for k in range(1, len(kinds)):
        if kinds[k - 1] != kinds[k]:
            out.append((p.vertices[k], kinds[k - 1] + kinds[k]))
    return out


def telescoped_weight(p: DPath, g: SEGraph) -> QElement:
    """Weight of a source-to-sink path as ``u1 v1^-1 u2 ... ud`` over its turns."""
    if p.s not in g.source_index or p.t not in g.sink_index:
        raise NotAPathError("telescoped form needs a source-to-sink path")
    check_path(p, g)
    word = [(v, 1 if kind == "HV" else -1) for v, kind in _turns(p, g)]
    return normalize_word(word, g.table).to_element()


@dataclass(frozen=True)
class EssentialForm:
    vertices: tuple[str, ...]
    signs: tuple[int, ...]

    def word(self) -> list[tuple[str, int]]:
        return list(zip(self.vertices, self.signs))


def essential_form(p: DPath, g: SEGraph) -> EssentialForm:
    """Essential vertices of a standard path with their exponents (+1 / -1)."""
    check_path(p, g)
    if not is_standard(p, g):
        raise NotStandardError(f"path {p} is vertical (not standard)")
    kinds = [g.orient(e) for e in p.edges]
    verts, signs = [], []
    if kinds[0] == "H" and p.s not in g.source_index:
        verts.append(p.s)
        signs.append(-1)
    for v, kind in _turns(p, g):
        verts.append(v)
        signs.append(1 if kind == "HV" else -1)
    if kinds[-1] == "H":
        verts.append(p.t)
        signs.append(1)
    return EssentialForm(tuple(verts), tuple(signs))


def essential_weight(p: DPath, g: SEGraph) -> QElement:
    if not is_standard(p, g):
        return QElement.one(g.table)
    return normalize_word(essential_form(p, g).word(), g.table).to_element()


# -------------------------------------------------------------- enumeration

def _can_reach(g: SEGraph, target: str) -> set[str]:
    seen = {target}
    stack = [target]
    while stack:
        v = stack.pop()
        for e in g.in_edges[v]:
            if e.tail not in seen:
                seen.add(e.tail)
                stack.append(e.tail)
    return seen


def paths_between(g: SEGraph, s: str, t: str, avoid: frozenset | set = frozenset()) -> list[DPath]:
    """All directed s->t paths avoiding ``avoid``, in child order of the graph."""
    ok = _can_reach(g, t) - set(avoid)
    if s not in ok:
        return []
    out = []
    stack = [(s, (s,))]
    while stack:
        v, trail = stack.pop()
        if v == t:
            out.append(DPath(trail))
            continue
        for e in reversed(g.out_edges[v]):
            if e.head in ok:
                stack.append((e.head, trail + (e.head,)))
    return out


def enumerate_paths(g: SEGraph, i: int, j: int) -> list[DPath]:
    """All directed paths from source ``r_i`` to sink ``c_j`` (1-based)."""
    return paths_between(g, g.source(i), g.sink(j))


def all_paths(g: SEGraph, min_edges: int = 1) -> list[DPath]:
    """Every directed path of the graph with at least ``min_edges`` edges."""
    out = []
    for s in sorted(g.vertices):
        stack = [(s,)]
        while stack:
            trail = stack.pop()
            if len(trail) - 1 >= min_edges:
                out.append(DPath(trail))
            for e in g.out_edges[trail[-1]]:
                stack.append(trail + (e.head,))
    return out


# ---------------------------------------------------------------- geometry

def _polyline(p: DPath, g) -> list[tuple[Fraction, Fraction]]:
    if isinstance(g, SEGraph):
        return [g.point(v) for v in p.vertices]
    return [g[v] for v in p.vertices]


def beta_range(points, a) -> tuple[Fraction, Fraction] | None:
    """Min and max beta of the polyline's points with alpha == a (None if none)."""
    lo = hi = None
    if len(points) == 1:
        segs = [(points[0], points[0])]
    else:
        segs = zip(points, points[1:])
    for (x0, y0), (x1, y1) in segs:
        if not (min(x0, x1) <= a <= max(x0, x1)):
            continue
        if x0 == x1:
            ys = (y0, y1)
        else:
            y = y0 + (y1 - y0) * (a - x0) / (x1 - x0)
            ys = (y, y)
        lo = min(ys) if lo is None else min(lo, *ys)
        hi = max(ys) if hi is None else max(hi, *ys)
    return None if lo is None else (lo, hi)


def is_lower(p: DPath, q: DPath, g) -> bool:
    """Some point x of P and y of Q have equal alpha and beta(x) < beta(y).

    ``g`` is an SEGraph or a mapping from vertex id to ``(alpha, beta)``.
    Evaluated exactly on the drawn polylines, edge interiors included.
    """
    return polyline_lower(_polyline(p, g), _polyline(q, g))


def polyline_lower(pp, qq) -> bool:
    """:func:`is_lower` on two point sequences."""
    lo = max(min(x for x, _ in pp), min(x for x, _ in qq))
    hi = min(max(x for x, _ in pp), max(x for x, _ in qq))
    if lo > hi:
        return False
    xs = sorted({x for x, _ in pp + qq if lo <= x <= hi} | {lo, hi})
    probes = list(xs) + [(a + b) / 2 for a, b in zip(xs, xs[1:])]
    for a in probes:
        rp, rq = beta_range(pp, a), beta_range(qq, a)
        if rp and rq and rp[0] < rq[1]:
            return True
    return False


def weakly_intersecting(p: DPath, q: DPath) -> bool:
    """P and Q meet only in common endpoints (paths drawn in a planar graph)."""
    ends = {p.s, p.t} & {q.s, q.t}
    common = p.vertex_set & q.vertex_set
    if not common <= ends:
        return False
    return not (set(p.edges) & set(q.edges))


def varphi(p: DPath, q: DPath, g: SEGraph) -> int:
    """The exponent k with ``w(P) w(Q) = q^k w(Q) w(P)``."""
    wp, wq = path_weight(p, g), path_weight(q, g)
    k = q_ratio(wp * wq, wq * wp)
    if k is None:  # pragma: no cover - monomial weights always q-commute
        raise ArithmeticError("path weights are not q-power related")
    return k
