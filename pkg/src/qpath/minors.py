"""Path matrices, quantum minors, flows, path systems and the Manin relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

from .pathkit import DPath, path_weight, paths_between
from .qtorus import CommutationTable, QElement, scalar_q_pow
from .segraph import SEGraph

__all__ = [
    "Flow",
    "LindstromReport",
    "ManinReport",
    "MinorIndex",
    "PathMatrix",
    "PathSystem",
    "check_lindstrom",
    "check_manin",
    "enumerate_flows",
    "enumerate_path_systems",
    "eta_involution",
    "flow_weight",
    "inversions",
    "minor_indices",
    "path_matrix",
    "q_minor",
    "system_weight",
]


def inversions(perm) -> int:
    """Number of pairs d < e with perm[d] > perm[e]."""
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


@dataclass(frozen=True)
class MinorIndex:
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        I, J = tuple(sorted(set(self.I))), tuple(sorted(set(self.J)))
        if len(I) != len(self.I) or len(J) != len(self.J):
            raise ValueError("row and column sets must not repeat indices")
        if len(I) != len(J):
            raise ValueError(f"|I|={len(I)} differs from |J|={len(J)}")
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)

    @property
    def k(self) -> int:
        return len(self.I)

    def check_bounds(self, m: int, n: int) -> None:
        if any(not 1 <= i <= m for i in self.I) or any(not 1 <= j <= n for j in self.J):
            raise IndexError(f"index ({self.I}|{self.J}) outside a {m}x{n} matrix")

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.I)) + "|" + ",".join(map(str, self.J)) + "]"


def minor_indices(m: int, n: int, max_k: int, min_k: int = 1):
    from itertools import combinations

    for k in range(min_k, min(max_k, m, n) + 1):
        for I in combinations(range(1, m + 1), k):
            for J in combinations(range(1, n + 1), k):
                yield MinorIndex(I, J)


@dataclass
class PathMatrix:
    m: int
    n: int
    table: CommutationTable
    entries: dict[tuple[int, int], QElement] = field(default_factory=dict)

    def __getitem__(self, ij: tuple[int, int]) -> QElement:
        i, j = ij
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise IndexError(ij)
        return self.entries.get(ij) or QElement.zero(self.table)

    def to_dict(self) -> dict:
        return {f"{i},{j}": str(self[i, j]) for i in range(1, self.m + 1) for j in range(1, self.n + 1)}


def path_matrix(g: SEGraph) -> PathMatrix:
    t = g.table
    M = PathMatrix(g.m, g.n, t)
    for i in range(1, g.m + 1):
        for j in range(1, g.n + 1):
            w = QElement.zero(t)
            for p in paths_between(g, g.source(i), g.sink(j)):
                w = w + path_weight(p, g)
            M.entries[i, j] = w
    return M


def q_minor(M: PathMatrix, idx: MinorIndex, table: CommutationTable | None = None, *, qexp: int = 1) -> QElement:
    """Sum over permutations of ``(-1)^l q^(qexp*l)`` times the row-ordered entry product.

    Partial products are shared between permutations with the same prefix set of
    columns: the inversions added by a new column depend only on which columns
    were used before, not on their order.  ``qexp`` exists for mutation tests.
    """
    t = table or M.table
    idx.check_bounds(M.m, M.n)
    k = idx.k
    layer = {0: QElement.one(t)}
    for d in range(k):
        row = idx.I[d]
        nxt: dict[int, QElement] = {}
        for used, val in layer.items():
            for c in range(k):
                if used >> c & 1:
                    continue
                entry = M[row, idx.J[c]]
                if entry.is_zero():
                    continue
                inv = bin(used >> (c + 1)).count("1")
                term = scalar_q_pow(val * entry, qexp * inv)
                if inv % 2:
                    term = -term
                key = used | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        layer = nxt
    return layer.get((1 << k) - 1, QElement.zero(t))


# ------------------------------------------------------------------- flows

@dataclass(frozen=True)
class Flow:
    """Vertex-disjoint paths; the d-th path runs from r_{I[d]} to c_{J[d]}."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    paths: tuple[DPath, ...]

    @property
    def edges(self) -> frozenset:
        return frozenset(e for p in self.paths for e in p.edges)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(v for p in self.paths for v in p.vertices)

    def to_dict(self) -> dict:
        return {"I": list(self.I), "J": list(self.J), "paths": [list(p.vertices) for p in self.paths]}


def enumerate_flows(g: SEGraph, idx: MinorIndex) -> list[Flow]:
    """All (I|J)-flows, found by backtracking over any unused sink for each source."""
    idx.check_bounds(g.m, g.n)
    sinks = {g.sink(j): j for j in idx.J}
    out: list[Flow] = []

    def rec(d, used_sinks, occupied, chosen):
        if d == idx.k:
            flow_sinks = tuple(sinks[p.t] for p in chosen)
            assert flow_sinks == idx.J, f"flow endpoint law violated: {flow_sinks} != {idx.J}"
            out.append(Flow(idx.I, idx.J, tuple(chosen)))
            return
        s = g.source(idx.I[d])
        for c in sinks:
            if c in used_sinks:
                continue
            for p in paths_between(g, s, c, avoid=occupied):
                rec(d + 1, used_sinks | {c}, occupied | p.vertex_set, chosen + [p])

    rec(0, frozenset(), frozenset(), [])
    return out


def flow_weight(f: Flow, g: SEGraph) -> QElement:
    w = QElement.one(g.table)
    for p in f.paths:
        w = w * path_weight(p, g)
    return w


@dataclass(frozen=True)
class LindstromReport:
    idx: MinorIndex
    minor: QElement
    flow_sum: QElement
    n_flows: int

    @property
    def equal(self) -> bool:
        return self.minor == self.flow_sum

    def to_dict(self) -> dict:
        return {"I": list(self.idx.I), "J": list(self.idx.J), "minor": str(self.minor),
                "flow_sum": str(self.flow_sum), "flows": self.n_flows, "equal": self.equal}


def check_lindstrom(g: SEGraph, idx: MinorIndex, M: PathMatrix | None = None, *, qexp: int = 1) -> LindstromReport:
    M = M or path_matrix(g)
    minor = q_minor(M, idx, qexp=qexp)
    flows = enumerate_flows(g, idx)
    total = QElement.zero(g.table)
    for f in flows:
        total = total + flow_weight(f, g)
    return LindstromReport(idx, minor, total, len(flows))


# ------------------------------------------------------------ path systems

class FlowHasNoPartnerError(ValueError):
    pass


@dataclass(frozen=True)
class PathSystem:
    """Paths P_1..P_k with P_d from r_{I[d]} to c_{J[perm[d]]} (perm is 0-based)."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    perm: tuple[int, ...]
    paths: tuple[DPath, ...]

    @property
    def length(self) -> int:
        return inversions(self.perm)

    def meets(self, d: int) -> bool:
        return bool(self.paths[d].vertex_set & self.paths[d + 1].vertex_set)

    def is_flow(self) -> bool:
        seen: set[str] = set()
        for p in self.paths:
            if seen & p.vertex_set:
                return False
            seen |= p.vertex_set
        return True


def enumerate_path_systems(g: SEGraph, idx: MinorIndex):
    """Yield every path system for (I|J): all permutations and all path choices."""
    idx.check_bounds(g.m, g.n)
    table = {(i, j): paths_between(g, g.source(i), g.sink(j)) for i in idx.I for j in idx.J}
    for perm in permutations(range(idx.k)):
        choices = [table[idx.I[d], idx.J[perm[d]]] for d in range(idx.k)]
        for paths in product(*choices):
            yield PathSystem(idx.I, idx.J, perm, tuple(paths))


def system_weight(ps: PathSystem, g: SEGraph) -> QElement:
    w = QElement.one(g.table)
    for p in ps.paths:
        w = w * path_weight(p, g)
    return w


def _common_in_order(p: DPath, q: DPath) -> list[str]:
    common = q.vertex_set
    return [v for v in p.vertices if v in common]


def eta_involution(ps: PathSystem, g: SEGraph, rule: str = "first_meet") -> PathSystem:
    """Swap the tails of a consecutive intersecting pair after their last common vertex.

    ``rule="first_meet"`` picks the pair whose first common vertex is earliest in
    the topological order (ties by index); this choice is stable under the swap.
    ``rule="min_index"`` picks the smallest index and is kept to exhibit that it
    does not give an involution in general.
    """
    cands = []
    for d in range(len(ps.paths) - 1):
        common = _common_in_order(ps.paths[d], ps.paths[d + 1])
        if common:
            cands.append((d, common))
    if not cands:
        raise FlowHasNoPartnerError("fixed-point-free involution undefined on flows")
    if rule == "first_meet":
        rank = g.topo_rank
        d, common = min(cands, key=lambda c: (rank[c[1][0]], c[0]))
    elif rule == "min_index":
        d, common = cands[0]
    else:
        raise ValueError(f"unknown rule {rule!r}")
    v = common[-1]
    head_a, tail_a = ps.paths[d].split_at(v)
    head_b, tail_b = ps.paths[d + 1].split_at(v)
    paths = list(ps.paths)
    paths[d], paths[d + 1] = head_a + tail_b, head_b + tail_a
    perm = list(ps.perm)
    perm[d], perm[d + 1] = perm[d + 1], perm[d]
    return PathSystem(ps.I, ps.J, tuple(perm), tuple(paths))


# ------------------------------------------------------------------- Manin

@dataclass
class ManinReport:
    checked: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_dict(self) -> dict:
        return {"checked": self.checked, "ok": self.ok, "counterexample": self.counterexample}


def check_manin(M: PathMatrix, table: CommutationTable | None = None) -> ManinReport:
    """Check the four quantum-matrix relations for all i<l, j<k.

    Row i is source r_i, so rows are numbered from the bottom of the picture.
    Returns the first failing relation, if any.
    """
    t = table or M.table
    q = lambda k: QElement.q_power(t, k)  # noqa: E731
    rep = ManinReport()

    def fail(name, *cells):
        rep.counterexample = {"relation": name, "cells": [list(c) for c in cells]}

    rows = list(range(1, M.m + 1))
    for a in range(len(rows)):
        i = rows[a]
        for j in range(1, M.n + 1):
            for k in range(j + 1, M.n + 1):
                rep.checked += 1
                if M[i, j] * M[i, k] != q(1) * M[i, k] * M[i, j]:
                    fail("row", (i, j), (i, k))
                    return rep
        for b in range(a + 1, len(rows)):
            l = rows[b]  # noqa: E741
            for j in range(1, M.n + 1):
                rep.checked += 1
                if M[i, j] * M[l, j] != q(1) * M[l, j] * M[i, j]:
                    fail("column", (i, j), (l, j))
                    return rep
                for k in range(j + 1, M.n + 1):
                    rep.checked += 2
                    if M[i, k] * M[l, j] != M[l, j] * M[i, k]:
                        fail("anti-diagonal", (i, k), (l, j))
                        return rep
                    lhs = M[i, j] * M[l, k] - M[l, k] * M[i, j]
                    rhs = (q(1) - q(-1)) * M[i, k] * M[l, j]
                    if lhs != rhs:
                        fail("diagonal", (i, j), (l, k))
                        return rep
    return rep
