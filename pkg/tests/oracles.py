"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import gzip
import itertools
from pathlib import Path

import networkx as nx
import numpy as np

DATA = Path(__file__).parent / "data"


def small_bipartite_corpus() -> list[str]:
    """graph6 strings of every connected bipartite graph on at most 12 vertices."""
    with gzip.open(DATA / "connected_bipartite_le12.g6.gz", "rt") as fh:
        return fh.read().split()


def decode_graph6(text: str) -> np.ndarray:
    """Adjacency matrix straight from the graph6 bit layout (n <= 62)."""
    data = [ord(c) - 63 for c in text.strip()]
    n, bits = data[0], data[1:]
    flat = []
    for b in bits:
        flat.extend((b >> (5 - i)) & 1 for i in range(6))
    a = np.zeros((n, n), dtype=bool)
    k = 0
    for j in range(1, n):
        for i in range(j):
            if flat[k]:
                a[i, j] = a[j, i] = True
            k += 1
    return a


def held_karp_batch(adj: np.ndarray) -> np.ndarray:
    """Hamiltonicity of a batch of ``(B, n, n)`` adjacency matrices by subset DP.

    ``reach[:, S]`` is a bitmask of the vertices ``v`` such that some path starts
    at vertex 0, visits exactly ``{0} + S`` and ends at ``v``; vertices 1..n-1
    are bits 0..n-2.
    """
    B, n, _ = adj.shape
    if n < 3:
        return np.zeros(B, dtype=bool)
    m = n - 1
    weights = (1 << np.arange(m)).astype(np.int64)
    # nbr[:, v] = neighbors of vertex v+1 among vertices 1..n-1, as a bitmask
    nbr = (adj[:, 1:, 1:].astype(np.int64) * weights).sum(axis=2)
    reach = np.zeros((B, 1 << m), dtype=np.int64)
    for v in range(m):
        reach[:, 1 << v] = np.where(adj[:, 0, v + 1], 1 << v, 0)
    for S in range(1, 1 << m):
        if S & (S - 1) == 0:
            continue
        acc = np.zeros(B, dtype=np.int64)
        rest = S
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            prev = reach[:, S ^ low]
            acc |= np.where((prev & nbr[:, v]) != 0, low, 0)
            rest ^= low
        reach[:, S] = acc
    back = (adj[:, 0, 1:].astype(np.int64) * weights).sum(axis=1)
    return (reach[:, (1 << m) - 1] & back) != 0


def hamiltonian_by_permutations(g: nx.Graph) -> bool:
    """Try every ordering of the vertices; only for very small graphs."""
    nodes = sorted(g.nodes)
    n = len(nodes)
    if n < 3:
        return False
    first, rest = nodes[0], nodes[1:]
    for order in itertools.permutations(rest):
        cyc = (first,) + order
        if all(g.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            return True
    return False


def automorphisms_by_permutations(g: nx.Graph) -> list[tuple[int, ...]]:
    nodes = sorted(g.nodes)
    edges = {frozenset(e) for e in g.edges}
    out = []
    for perm in itertools.permutations(nodes):
        if all(frozenset((perm[a], perm[b])) in edges for a, b in g.edges):
            out.append(perm)
    return out


def nx_automorphism_count(g: nx.Graph) -> int:
    gm = nx.algorithms.isomorphism.GraphMatcher(g, g)
    return sum(1 for _ in gm.isomorphisms_iter())


def is_cycle_of(g: nx.Graph, cycle) -> bool:
    n = g.number_of_nodes()
    return (len(cycle) == n and len(set(cycle)) == n
            and all(g.has_edge(cycle[i], cycle[(i + 1) % n]) for i in range(n)))


def psl2_order(p: int) -> int:
    return p * (p * p - 1) // 2
