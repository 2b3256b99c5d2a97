"""Shared helpers for the test suite: seeded random graphs and motifs.

All randomness goes through numpy's Philox generator so every test is
reproducible bit for bit; tests loop over explicit seed ranges instead
of drawing from ambient entropy.
"""

from __future__ import annotations

import numpy as np

from motifshap import Graph, Motif, erdos_renyi


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def random_graph(n: int, density: float, rng: np.random.Generator) -> Graph:
    return erdos_renyi(n, density, rng)


def random_weighted_graph(n: int, density: float, rng: np.random.Generator) -> Graph:
    g = erdos_renyi(n, density, rng)
    weights = {e: float(w) for e, w in zip(g.sorted_edges(), rng.random(len(g.edges)))}
    return Graph(n, g.edges, weights)


def random_connected_motif(motif_id: int, n: int, n_edges: int,
                           rng: np.random.Generator,
                           class_sign: int | None = None) -> Motif:
    """Grow a connected motif by random expansion anywhere in the node
    universe (motifs may overlap each other and the graph)."""
    start = int(rng.integers(n))
    members = [start]
    member_set = {start}
    edges = set()
    while len(edges) < n_edges:
        u = members[int(rng.integers(len(members)))]
        v = int(rng.integers(n))
        if v == u:
            continue
        e = (u, v) if u < v else (v, u)
        if e in edges:
            continue
        edges.add(e)
        if v not in member_set:
            member_set.add(v)
            members.append(v)
    return Motif(motif_id, frozenset(edges), class_sign)


def random_motif_set(n: int, count: int, n_edges: int,
                     rng: np.random.Generator) -> list[Motif]:
    signs = [-1, 1]
    return [random_connected_motif(i, n, n_edges, rng, signs[i % 2])
            for i in range(count)]
