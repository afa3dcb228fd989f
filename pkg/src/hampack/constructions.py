"""Generators for test-subject hypergraphs: complete, random, and the
parity-based extremal construction that admits no odd-degree factor."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import InvalidInputError, InvalidQueryError
from .hypercore import Hypergraph


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    """All C(n, k) edges."""
    if not (1 <= k <= n):
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}, n={n}")
    return Hypergraph(n, k, combinations(range(n), k))


def random_hypergraph(n: int, k: int, p: float, seed: int) -> Hypergraph:
    """Include each k-subset independently with probability p; deterministic per seed."""
    if not (0.0 <= p <= 1.0):
        raise InvalidInputError(f"p must be in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [e for e in combinations(range(n), k) if rng.random() < p]
    return Hypergraph(n, k, edges)


@dataclass(frozen=True)
class ParityConstruction:
    """Hypergraph of all k-sets meeting a fixed odd-size part in an even count."""
    hypergraph: Hypergraph
    part_a: tuple[int, ...]


@dataclass(frozen=True)
class ParityCertificate:
    """Record of the parity obstruction to an r-factor for odd r.

    Any candidate r-factor would have an even sum of |part_a ∩ f| over its
    edges (every term is even), yet that sum equals the degree sum r·|part_a|,
    which is odd — the two parities cannot match.
    """
    r: int
    part_a_size: int
    part_a_size_odd: bool
    all_intersections_even: bool
    degree_sum_parity: int      # r * |part_a| mod 2
    edge_sum_parity: int        # parity forced on sum of |A ∩ f| over any factor
    no_factor: bool
    exhaustive_pm_count: Optional[int]  # r=1, n <= 12 cross-check; None otherwise


def parity_hypergraph(n: int, k: int) -> ParityConstruction:
    """Take part A = {0..a-1} with a the smallest odd integer >= n/2 - 1; the
    edge set is every k-subset with an even intersection with A."""
    if not (1 <= k <= n):
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}, n={n}")
    a = -((-(n - 2)) // 2)  # ceil(n/2 - 1)
    if a < 1:
        a = 1
    if a % 2 == 0:
        a += 1
    part_a = tuple(range(a))
    edges = [e for e in combinations(range(n), k)
             if sum(1 for v in e if v < a) % 2 == 0]
    return ParityConstruction(hypergraph=Hypergraph(n, k, edges), part_a=part_a)


def _count_matchings_exact_cover(h: Hypergraph, limit: Optional[int] = None) -> int:
    """Count perfect matchings of a hypergraph by exact-cover backtracking.

    Branches on the lowest uncovered vertex; optional early stop at `limit`.
    """
    by_vertex: dict[int, list[frozenset[int]]] = {v: [] for v in range(h.n)}
    for e in h.edges:
        fe = frozenset(e)
        for v in e:
            by_vertex[v].append(fe)

    count = 0
    covered: set[int] = set()

    def recurse() -> bool:
        nonlocal count
        if len(covered) == h.n:
            count += 1
            return limit is not None and count >= limit
        v = min(x for x in range(h.n) if x not in covered)
        for fe in by_vertex[v]:
            if covered.isdisjoint(fe):
                covered.update(fe)
                stop = recurse()
                covered.difference_update(fe)
                if stop:
                    return True
        return False

    recurse()
    return count


def verify_no_odd_factor(construction: ParityConstruction, r: int) -> ParityCertificate:
    """Certify that the parity construction has no r-factor for odd r.

    For r = 1 and n <= 12 the certificate is cross-checked by an exhaustive
    perfect-matching search, which must find none.
    """
    if r % 2 == 0:
        raise InvalidQueryError(f"r must be odd, got {r}")
    h = construction.hypergraph
    if h.n % h.k != 0:
        raise InvalidQueryError(
            f"k={h.k} does not divide n={h.n}; factors are impossible for trivial reasons")
    a = set(construction.part_a)
    all_even = all(len(a.intersection(e)) % 2 == 0 for e in h.edges)
    size_odd = len(a) % 2 == 1
    pm_count = None
    if r == 1 and h.n <= 12:
        pm_count = _count_matchings_exact_cover(h)
    return ParityCertificate(
        r=r,
        part_a_size=len(a),
        part_a_size_odd=size_odd,
        all_intersections_even=all_even,
        degree_sum_parity=(r * len(a)) % 2,
        edge_sum_parity=0 if all_even else 1,
        no_factor=size_odd and all_even,
        exhaustive_pm_count=pm_count,
    )
