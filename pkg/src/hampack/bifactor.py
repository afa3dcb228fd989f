"""Bipartite graph algorithms: Gale-Ryser r-factor certification, flow-based
constructive factor finding, decomposition of regular subgraphs into perfect
matchings, and exact perfect-matching counting.

Both parts have size m and are indexed 0..m-1; edges are (s, t) pairs.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import (InvalidInputError, InvariantViolation, ParseError,
                     SizeLimitError)

GALE_RYSER_MAX_M = 14
PERMANENT_MAX_M = 24


class BipartiteGraph:
    """Bipartite graph with parts S and T of equal size m, no parallel edges."""

    __slots__ = ("m", "edges", "_adj_s", "_adj_t")

    def __init__(self, m: int, edges: Iterable[tuple[int, int]]):
        if m < 0:
            raise InvalidInputError(f"m must be >= 0, got {m}")
        es = set()
        for s, t in edges:
            if not (0 <= s < m and 0 <= t < m):
                raise InvalidInputError(f"edge ({s},{t}) out of range for m={m}")
            es.add((s, t))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", frozenset(es))
        adj_s = [set() for _ in range(m)]
        adj_t = [set() for _ in range(m)]
        for s, t in es:
            adj_s[s].add(t)
            adj_t[t].add(s)
        object.__setattr__(self, "_adj_s", tuple(frozenset(x) for x in adj_s))
        object.__setattr__(self, "_adj_t", tuple(frozenset(x) for x in adj_t))

    def __setattr__(self, name, value):
        raise AttributeError("BipartiteGraph is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, BipartiteGraph)
                and self.m == other.m and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.m, self.edges))

    def __repr__(self) -> str:
        return f"BipartiteGraph(m={self.m}, |E|={len(self.edges)})"

    def neighbors_s(self, s: int) -> frozenset[int]:
        return self._adj_s[s]

    def neighbors_t(self, t: int) -> frozenset[int]:
        return self._adj_t[t]

    def min_degree(self) -> int:
        if self.m == 0:
            return 0
        return min(min(len(a) for a in self._adj_s),
                   min(len(a) for a in self._adj_t))

    def max_degree(self) -> int:
        if self.m == 0:
            return 0
        return max(max(len(a) for a in self._adj_s),
                   max(len(a) for a in self._adj_t))


def complete_bipartite(m: int) -> BipartiteGraph:
    return BipartiteGraph(m, ((s, t) for s in range(m) for t in range(m)))


@dataclass(frozen=True)
class Factor:
    """An r-regular spanning subgraph of a host bipartite graph."""
    r: int
    edges: frozenset[tuple[int, int]]

    def check_against(self, host: BipartiteGraph) -> None:
        if not self.edges <= host.edges:
            raise InvariantViolation("factor uses edges not present in the host graph")
        deg_s = [0] * host.m
        deg_t = [0] * host.m
        for s, t in self.edges:
            deg_s[s] += 1
            deg_t[t] += 1
        if any(d != self.r for d in deg_s) or any(d != self.r for d in deg_t):
            raise InvariantViolation(f"not every vertex has degree exactly {self.r}")


@dataclass(frozen=True)
class GaleRyserWitness:
    """Outcome of the subset-pair inequality test for r-factor existence.

    When violated, (subset_s, subset_t) is a concrete pair with
    r·|X| > e(X,Y) + r·(m - |Y|).
    """
    holds: bool
    r: int
    m: int
    subset_s: Optional[tuple[int, ...]] = None
    subset_t: Optional[tuple[int, ...]] = None
    lhs: Optional[int] = None
    rhs: Optional[int] = None


def gale_ryser_check(g: BipartiteGraph, r: int) -> GaleRyserWitness:
    """Decide r-factor existence by the subset-pair degree inequality.

    Scans every X ⊆ S; for fixed X the right side e(X,Y) + r(m-|Y|) is a sum
    of independent per-vertex terms, so its minimum over all Y ⊆ T is attained
    at Y* = {t : deg_X(t) < r} with value Σ_t min(deg_X(t), r).  Checking X
    against Y* is therefore equivalent to checking all 2^m × 2^m pairs, and a
    violation yields the concrete pair (X, Y*).
    """
    if g.m > GALE_RYSER_MAX_M:
        raise SizeLimitError(
            f"m={g.m} > {GALE_RYSER_MAX_M}: subset scan infeasible; use find_factor")
    if r < 0:
        raise InvalidInputError(f"r must be >= 0, got {r}")
    m = g.m
    deg_x = [0] * m
    members: list[int] = []

    # Gray-code walk over subsets X so deg_x updates are O(m) per step.
    prev = 0
    for code in range(1 << m):
        gray = code ^ (code >> 1)
        diff = gray ^ prev
        if diff:
            bit = diff.bit_length() - 1
            if gray & diff:
                members.append(bit)
                for t in g.neighbors_s(bit):
                    deg_x[t] += 1
            else:
                members.remove(bit)
                for t in g.neighbors_s(bit):
                    deg_x[t] -= 1
            prev = gray
        lhs = r * len(members)
        rhs = sum(d if d < r else r for d in deg_x)
        if lhs > rhs:
            y_star = tuple(t for t in range(m) if deg_x[t] < r)
            return GaleRyserWitness(holds=False, r=r, m=m,
                                    subset_s=tuple(sorted(members)),
                                    subset_t=y_star, lhs=lhs,
                                    rhs=sum(deg_x[t] for t in y_star) + r * (m - len(y_star)))
    return GaleRyserWitness(holds=True, r=r, m=m)


def find_factor(g: BipartiteGraph, r: int) -> Optional[Factor]:
    """Constructive r-factor search via max flow.

    Network: source -> each s with capacity r, unit arcs across the edges,
    each t -> sink with capacity r; an r-factor exists iff max flow = r·m.
    Output degrees are re-verified before returning.
    """
    if not (0 <= r <= g.m):
        raise InvalidInputError(f"r must be in 0..m={g.m}, got {r}")
    if r == 0:
        return Factor(r=0, edges=frozenset())
    if g.min_degree() < r:
        return None
    m = g.m
    n_nodes = 2 * m + 2
    source, sink = 0, n_nodes - 1
    rows, cols, data = [], [], []
    for i in range(m):
        rows.append(source)
        cols.append(1 + i)
        data.append(r)
        rows.append(1 + m + i)
        cols.append(sink)
        data.append(r)
    edge_list = sorted(g.edges)
    for s, t in edge_list:
        rows.append(1 + s)
        cols.append(1 + m + t)
        data.append(1)
    graph = csr_matrix((data, (rows, cols)), shape=(n_nodes, n_nodes), dtype=np.int32)
    result = maximum_flow(graph, source, sink)
    if result.flow_value < r * m:
        return None
    coo = result.flow.tocoo()
    chosen = [(int(row) - 1, int(col) - 1 - m)
              for row, col, val in zip(coo.row, coo.col, coo.data)
              if val > 0 and 1 <= row <= m and m + 1 <= col <= 2 * m]
    factor = Factor(r=r, edges=frozenset(chosen))
    factor.check_against(g)
    return factor


def max_factor(g: BipartiteGraph) -> tuple[int, Factor]:
    """Largest r with an r-factor, plus a witness.

    Feasibility is monotone in r (the subset inequality r(|X|+|Y|-m) <= e(X,Y)
    only tightens as r grows), so binary search over r is valid.
    """
    lo, hi = 0, g.min_degree()
    best = Factor(r=0, edges=frozenset())
    while lo < hi:
        mid = (lo + hi + 1) // 2
        found = find_factor(g, mid)
        if found is not None:
            lo = mid
            best = found
        else:
            hi = mid - 1
    if best.r != lo:
        best = find_factor(g, lo)
    return lo, best


def csaba_rho(delta: float) -> float:
    """Factor-density guarantee (delta + sqrt(2*delta - 1)) / 2 for delta in [1/2, 1]."""
    if delta < 0.5:
        raise InvalidInputError(f"delta must be >= 1/2, got {delta}")
    if delta > 1.0:
        raise InvalidInputError(f"delta must be <= 1, got {delta}")
    return (delta + math.sqrt(2.0 * delta - 1.0)) / 2.0


def almost_regular_bound(alpha: float, epsilon: float) -> float:
    """Factor-density target alpha - 10*sqrt(epsilon) for near-regular graphs, clamped at 0."""
    if alpha <= 0.5:
        raise InvalidInputError(f"alpha must be > 1/2, got {alpha}")
    if epsilon < 0:
        raise InvalidInputError(f"epsilon must be >= 0, got {epsilon}")
    return max(0.0, alpha - 10.0 * math.sqrt(epsilon))


def _perfect_matching(m: int, adj: list[set[int]]) -> Optional[list[int]]:
    """Perfect matching on adjacency lists via augmenting paths; None if absent."""
    match_s = [-1] * m
    match_t = [-1] * m

    def try_kuhn(s: int, seen: list[bool]) -> bool:
        for t in adj[s]:
            if not seen[t]:
                seen[t] = True
                if match_t[t] == -1 or try_kuhn(match_t[t], seen):
                    match_t[t] = s
                    match_s[s] = t
                    return True
        return False

    order = sorted(range(m), key=lambda s: len(adj[s]))
    for s in order:
        if not try_kuhn(s, [False] * m):
            return None
    return match_s


def peel_matchings(factor: Factor, host: BipartiteGraph) -> list[frozenset[tuple[int, int]]]:
    """Decompose an r-factor into exactly r edge-disjoint perfect matchings.

    Repeatedly extracts one perfect matching of the remaining regular graph
    (always possible while it is regular) and removes it.
    """
    factor.check_against(host)
    m = host.m
    adj = [set() for _ in range(m)]
    for s, t in factor.edges:
        adj[s].add(t)
    matchings: list[frozenset[tuple[int, int]]] = []
    for _ in range(factor.r):
        match_s = _perfect_matching(m, adj)
        if match_s is None:
            raise InvariantViolation(
                "no perfect matching in a supposedly regular remainder; corrupt factor")
        pairs = frozenset((s, match_s[s]) for s in range(m))
        matchings.append(pairs)
        for s, t in pairs:
            adj[s].discard(t)
    if any(adj[s] for s in range(m)):
        raise InvariantViolation("matchings did not exhaust the factor")
    return matchings


def count_perfect_matchings(g: BipartiteGraph) -> int:
    """Exact number of perfect matchings (the permanent of the biadjacency
    matrix) by inclusion-exclusion over column subsets with a Gray-code walk.

    Exact integer arithmetic throughout; cost O(2^m · m).
    """
    m = g.m
    if m > PERMANENT_MAX_M:
        raise SizeLimitError(f"m={m} > {PERMANENT_MAX_M}: permanent computation infeasible")
    if m == 0:
        return 1
    if g.min_degree() == 0:
        return 0
    cols = [g.neighbors_t(t) for t in range(m)]
    row_sums = [0] * m
    total = 0
    prev = 0
    for code in range(1, 1 << m):
        gray = code ^ (code >> 1)
        diff = gray ^ prev
        bit = diff.bit_length() - 1
        if gray & diff:
            for s in cols[bit]:
                row_sums[s] += 1
        else:
            for s in cols[bit]:
                row_sums[s] -= 1
        prev = gray
        prod = 1
        for v in row_sums:
            if v == 0:
                prod = 0
                break
            prod *= v
        if prod:
            bits = gray.bit_count()
            total += prod if (m - bits) % 2 == 0 else -prod
    return total


def to_json_dict(g: BipartiteGraph) -> dict:
    return {"m": g.m, "edges": [list(e) for e in sorted(g.edges)]}


def from_json_dict(obj) -> BipartiteGraph:
    if not isinstance(obj, dict) or set(obj.keys()) != {"m", "edges"}:
        raise ParseError('expected an object with exactly the keys "m", "edges"')
    m, edges = obj["m"], obj["edges"]
    if not isinstance(m, int) or not isinstance(edges, list):
        raise ParseError('"m" must be an integer and "edges" a list')
    pairs = []
    for idx, e in enumerate(edges):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(v, int) for v in e)):
            raise ParseError(f"edge {idx}: must be a pair of integers")
        pairs.append((e[0], e[1]))
    try:
        return BipartiteGraph(m, pairs)
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from exc


def read_bipartite(path: str) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    return from_json_dict(obj)


def write_bipartite(g: BipartiteGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(g), fh, sort_keys=True, separators=(",", ": "), indent=1)
        fh.write("\n")
