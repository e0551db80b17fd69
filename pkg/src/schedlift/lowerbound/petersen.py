"""The Petersen graph and its perfect matchings."""

from __future__ import annotations

import itertools

VERTICES = tuple(range(10))


def petersen_edges() -> list:
    """Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((5 + i, 5 + (i + 2) % 5))
    return sorted(tuple(sorted(e)) for e in edges)


def perfect_matchings(edges, vertices=VERTICES) -> list:
    """All perfect matchings by always matching the smallest uncovered vertex."""
    adj = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append((u, v))
        adj[v].append((u, v))
    out = []

    def extend(covered, chosen):
        free = [v for v in vertices if v not in covered]
        if not free:
            out.append(frozenset(chosen))
            return
        v = free[0]
        for e in adj[v]:
            w = e[0] if e[1] == v else e[1]
            if w not in covered:
                extend(covered | {v, w}, chosen + [e])

    extend(frozenset(), [])
    return sorted(out, key=lambda M: sorted(M))


def petersen_perfect_matchings() -> list:
    return perfect_matchings(petersen_edges())


def edge_cover_counts(matchings) -> dict:
    counts: dict = {}
    for M in matchings:
        for e in M:
            counts[e] = counts.get(e, 0) + 1
    return counts


def has_disjoint_triple(matchings) -> bool:
    """True if three pairwise edge-disjoint matchings exist (a 3-edge-colouring)."""
    return any(
        not (a & b) and not (a & c) and not (b & c) for a, b, c in itertools.combinations(matchings, 3)
    )
