"""Snakes, links, bend signs and colored cycles for one exchange path.

The snakes are the single-color segments of the exchange path Z; cutting the
two flows at the bends of Z leaves the links.  ``gamma`` of a bend is +1 when
the white snake there is lower than the black one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exchange import (Couple, Decomposition, DoubleFlow, ExchangePath, _segments, case_label, decompose,
                       exchange)
from .minors import Flow
from .pathkit import DPath, path_weight, polyline_lower
from .qtorus import QElement, q_ratio
from .segraph import SEGraph, segments_intersect

__all__ = [
    "Bend",
    "ColoredCycle",
    "CycleGamma",
    "DegenerateError",
    "Piece",
    "SnakeLinkDecomposition",
    "StringProducts",
    "build_cycle",
    "colored_cycle",
    "cycle_from_steps",
    "gamma_Z",
    "gamma_cycle",
    "gamma_of_bend",
    "snakes_and_links",
    "string_products",
]

Point = tuple[Fraction, Fraction]


class DegenerateError(ValueError):
    """Geometry is degenerate; use :func:`qpath.exchange.exchange_ratio` instead."""


@dataclass(frozen=True)
class Piece:
    name: str
    kind: str  # 'snake' | 'link'
    color: str  # 'w' | 'b'
    path: DPath

    @property
    def trivial(self) -> bool:
        return len(self.path.vertices) == 1


@dataclass(frozen=True)
class Bend:
    vertex: str
    kind: str  # 'peak' | 'pit'
    white: str
    black: str


@dataclass
class SnakeLinkDecomposition:
    couple: Couple
    case: str
    pieces: dict
    snakes: tuple[str, ...]
    links: tuple[str, ...]
    bends: tuple[Bend, ...]
    N: tuple[str, ...]
    N_star: tuple[str, ...]
    graph: SEGraph
    exchange_path: ExchangePath

    @property
    def twins(self) -> list[str]:
        seen, out = set(), []
        for b in self.bends:
            if b.vertex in seen:
                out.append(b.vertex)
            seen.add(b.vertex)
        return out

    def defect_pairs(self) -> list[tuple[str, str]]:
        """Distinct bends or sinks sharing an alpha coordinate (twins excluded)."""
        g = self.graph
        pts = sorted({b.vertex for b in self.bends} | set(g.sinks))
        return [(u, v) for i, u in enumerate(pts) for v in pts[i + 1:] if g.alpha(u) == g.alpha(v)]

    @property
    def nondegenerate(self) -> bool:
        return not self.defect_pairs() and not self.twins

    def link_type(self, name: str) -> str:
        p = self.pieces[name].path
        bend_vs = {b.vertex for b in self.bends}
        inner = sum(v in bend_vs for v in (p.s, p.t))
        return ("unbounded", "semi-bounded", "bounded")[inner] if not self.pieces[name].trivial else "trivial"

    def to_dict(self) -> dict:
        return {"couple": str(self.couple), "case": self.case, "N": list(self.N), "N_star": list(self.N_star),
                "bends": [[b.vertex, b.kind, b.white, b.black] for b in self.bends],
                "pieces": {k: list(p.path.vertices) for k, p in self.pieces.items()}}


def _cut_flow(flow: Flow, snakes: dict[tuple, str], color: str):
    """Split each path of ``flow`` into snake and link intervals (link names left blank)."""
    out = []
    for p in flow.paths:
        pos = {v: i for i, v in enumerate(p.vertices)}
        spans = []
        for verts, name in snakes.items():
            if verts[0] in pos and pos[verts[0]] + len(verts) - 1 < len(p.vertices) \
                    and p.vertices[pos[verts[0]]:pos[verts[0]] + len(verts)] == verts:
                spans.append((pos[verts[0]], pos[verts[0]] + len(verts) - 1, name))
        spans.sort()
        seq, cur = [], 0
        for a, b, name in spans:
            if a > cur or (a == cur and seq and seq[-1][0] == "snake"):
                seq.append(("link", color, p.vertices[cur:a + 1]))
            seq.append(("snake", name, p.vertices[a:b + 1]))
            cur = b
        if cur < len(p.vertices) - 1:
            seq.append(("link", color, p.vertices[cur:]))
        out.append(seq)
    return out


def snakes_and_links(df: DoubleFlow, couple: Couple, g: SEGraph,
                     dec: Decomposition | None = None) -> SnakeLinkDecomposition:
    dec = dec or decompose(df, g)
    Z = dec.path_for(couple)
    pieces: dict[str, Piece] = {}
    by_verts: dict[str, dict[tuple, str]] = {"w": {}, "b": {}}
    segs = Z.segments()
    for i, (color, p) in enumerate(segs, 1):
        pieces[f"Z{i}"] = Piece(f"Z{i}", "snake", color, p)
        by_verts[color][p.vertices] = f"Z{i}"
    bends = []
    for i, (v, kind) in enumerate(Z.bends()):
        a, b = f"Z{i + 1}", f"Z{i + 2}"
        w, bl = (a, b) if pieces[a].color == "w" else (b, a)
        bends.append(Bend(v, kind, w, bl))

    N: list[str] = []
    counters = {"w": 0, "b": 0}
    for color, flow in (("w", df.phi), ("b", df.phi2)):
        for seq in _cut_flow(flow, by_verts[color], color):
            for kind, tag, verts in seq:
                if kind == "snake":
                    N.append(tag)
                    continue
                counters[color] += 1
                name = ("L" if color == "w" else "M") + str(counters[color])
                pieces[name] = Piece(name, "link", color, DPath(verts))
                N.append(name)

    new = exchange(df, couple, g, dec, check=False)
    keys = {}
    for which, flow in ((0, new.phi), (1, new.phi2)):
        for idx, p in enumerate(flow.paths):
            pos = {v: i for i, v in enumerate(p.vertices)}
            for name, pc in pieces.items():
                in_psi = (pc.kind == "link") == (pc.color == "w")
                if in_psi != (which == 0) or pc.path.s not in pos:
                    continue
                k = pos[pc.path.s]
                if pc.trivial:
                    keys[name] = (which, idx, k, 0)
                elif p.vertices[k:k + len(pc.path.vertices)] == pc.path.vertices:
                    keys[name] = (which, idx, k, 1)
    missing = set(pieces) - set(keys)
    if missing:  # pragma: no cover - exchanged flows are unions of the same pieces
        raise AssertionError(f"pieces not found after exchange: {sorted(missing)}")
    N_star = sorted(pieces, key=lambda n: keys[n])
    snakes = tuple(n for n in N if pieces[n].kind == "snake")
    links = tuple(n for n in N if pieces[n].kind == "link")
    return SnakeLinkDecomposition(couple, case_label(couple, df.cortege), pieces, snakes, links,
                                  tuple(bends), tuple(N), tuple(N_star), g, Z)


# ------------------------------------------------------------------- gamma

def _points(p: DPath, g: SEGraph) -> list[Point]:
    return [g.point(v) for v in p.vertices]


def _gamma_pair(white: list[Point], black: list[Point]) -> int:
    wl, bl = polyline_lower(white, black), polyline_lower(black, white)
    if wl == bl:
        raise DegenerateError("cannot decide which snake is lower")
    return 1 if wl else -1


def gamma_of_bend(z: Bend, dec: SnakeLinkDecomposition) -> int:
    g = dec.graph
    return _gamma_pair(_points(dec.pieces[z.white].path, g), _points(dec.pieces[z.black].path, g))


def gamma_Z(dec: SnakeLinkDecomposition, allow_degenerate: bool = False) -> int:
    """Sum of bend signs; twins are allowed, other defect pairs are refused."""
    if not allow_degenerate and dec.defect_pairs():
        raise DegenerateError(f"defect pairs {dec.defect_pairs()[:3]}")
    return sum(gamma_of_bend(z, dec) for z in dec.bends)


@dataclass(frozen=True)
class ColoredCycle:
    """Snakes in cyclic order, black ones traversed forward and white ones backward."""

    snakes: tuple[tuple[str, tuple[Point, ...]], ...]

    def polygon(self) -> list[Point]:
        pts: list[Point] = []
        for color, s in self.snakes:
            trav = list(s) if color == "b" else list(reversed(s))
            pts.extend(trav[:-1])
        return pts


def _chains(snakes) -> bool:
    for (c1, s1), (c2, s2) in zip(snakes, snakes[1:] + snakes[:1]):
        end = s1[-1] if c1 == "b" else s1[0]
        start = s2[0] if c2 == "b" else s2[-1]
        if end != start:
            return False
    return True


def colored_cycle(snakes) -> ColoredCycle:
    """Orient a cyclic list of (color, directed points) so black snakes run forward."""
    snakes = [(c, tuple(s)) for c, s in snakes]
    if len(snakes) < 2 or len(snakes) % 2:
        raise ValueError("a colored cycle needs an even number of snakes")
    if any(a[0] == b[0] for a, b in zip(snakes, snakes[1:] + snakes[:1])):
        raise ValueError("snake colors do not alternate")
    if not _chains(snakes):
        snakes = snakes[::-1]
        if not _chains(snakes):
            raise ValueError("consecutive snakes do not share the expected endpoints")
    return ColoredCycle(tuple(snakes))


@dataclass(frozen=True)
class CycleGamma:
    orientation: str
    gamma: int
    area2: Fraction


def gamma_cycle(D: ColoredCycle) -> CycleGamma:
    pts = D.polygon()
    if len(set(pts)) != len(pts):
        raise ValueError("cycle is not simple (repeated point)")
    segs = list(zip(pts, pts[1:] + pts[:1]))
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            if i == 0 and j == len(segs) - 1:
                continue
            if segments_intersect(*segs[i], *segs[j]):
                raise ValueError("cycle is not simple (crossing segments)")
    area2 = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in segs)
    if area2 == 0:
        raise ValueError("cycle encloses no area")
    gamma = 0
    sn = list(D.snakes)
    for a, b in zip(sn, sn[1:] + sn[:1]):
        white, black = (a, b) if a[0] == "w" else (b, a)
        gamma += _gamma_pair(list(white[1]), list(black[1]))
    return CycleGamma("ccw" if area2 > 0 else "cw", gamma, area2)


def build_cycle(dec: SnakeLinkDecomposition) -> ColoredCycle:
    """Close Z into a colored cycle along the sink line, the source line, or both."""
    g = dec.graph
    c = dec.couple
    snakes = [[dec.pieces[n].color, _points(dec.pieces[n].path, g)] for n in sorted(dec.snakes, key=lambda s: int(s[1:]))]
    if c.kind == "C":
        snakes[0][1] = snakes[0][1] + [g.point(g.sink(c.g))]
    elif c.kind == "R":
        snakes[0][1] = [g.point(g.source(c.g))] + snakes[0][1]
    else:
        origin = (Fraction(0), Fraction(0))
        color = "b" if snakes[0][0] == "w" else "w"
        snakes.append([color, [g.point(g.source(c.f)), origin, g.point(g.sink(c.g))]])
    return colored_cycle(snakes)


def cycle_from_steps(steps, g: SEGraph) -> ColoredCycle:
    """Colored cycle from a closed walk of the symmetric difference."""
    steps = list(steps)
    k = 0
    while steps[k - 1].color == steps[k].color:
        k += 1
    steps = steps[k:] + steps[:k]
    return colored_cycle([(color, _points(p, g)) for color, p, _ in _segments(steps)])


# ------------------------------------------------------------------ strings

@dataclass(frozen=True)
class StringProducts:
    phiI: int
    phiII: int
    phiIII: int

    @property
    def total(self) -> int:
        return self.phiI + self.phiII + self.phiIII

    def to_dict(self) -> dict:
        return {"phiI": self.phiI, "phiII": self.phiII, "phiIII": self.phiIII, "total": self.total}


def string_products(dec: SnakeLinkDecomposition, allow_degenerate: bool = False) -> StringProducts:
    """Exponents of the products of phi_{A,B} over permuting link, snake and mixed pairs."""
    if not allow_degenerate and not dec.nondegenerate:
        raise DegenerateError("string products need non-degenerate bends and sinks")
    g = dec.graph
    w = {n: (QElement.one(g.table) if p.trivial else path_weight(p.path, g)) for n, p in dec.pieces.items()}
    star = {n: i for i, n in enumerate(dec.N_star)}
    sums = {0: 0, 1: 0, 2: 0}
    for i, a in enumerate(dec.N):
        for b in dec.N[i + 1:]:
            if star[a] < star[b]:
                continue
            k = q_ratio(w[a] * w[b], w[b] * w[a])
            if k is None:  # pragma: no cover - monomials always q-commute
                raise ArithmeticError("piece weights do not q-commute")
            snakes = (dec.pieces[a].kind == "snake") + (dec.pieces[b].kind == "snake")
            sums[{0: 0, 2: 1, 1: 2}[snakes]] += k
    return StringProducts(sums[0], sums[1], sums[2])
