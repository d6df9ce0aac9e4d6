import json
import random

import networkx as nx
import pytest

from hamsym.errors import FormatError
from hamsym.graph import (
    BipartiteGraph,
    Graph,
    OrbitPartition,
    block_graph,
    from_graph6,
    graph_digest,
    is_complete_bipartite,
    read_graph,
    split_bipartite,
    to_graph6,
    two_coloring,
    write_graph,
)

from oracles import decode_graph6


def random_graph(n, p, seed):
    g = nx.gnp_random_graph(n, p, seed=seed)
    return Graph.from_edges(n, list(g.edges()))


@pytest.mark.parametrize("seed", range(5))
def test_graph6_agrees_with_bit_level_decoder(seed):
    g = random_graph(17, 0.3, seed)
    text = to_graph6(g)
    a = decode_graph6(text)
    assert {(i, j) for i in range(17) for j in range(i + 1, 17) if a[i, j]} == set(g.edges())
    assert from_graph6(text).edge_set == g.edge_set


@pytest.mark.parametrize("text,n,m", [("C~", 4, 6), ("IheA@GUAo", 10, 15), ("Ch", 4, 3)])
def test_known_graph6_strings(text, n, m):
    g = from_graph6(text)
    assert (g.n, len(g.edges())) == (n, m)
    assert to_graph6(g) == text


def test_graph6_large_n_round_trip():
    g = random_graph(100, 0.05, 9)
    assert from_graph6(to_graph6(g)).edge_set == g.edge_set


def test_bad_graph6_is_a_format_error():
    with pytest.raises(FormatError):
        from_graph6("B~~~~")


def test_digest_ignores_edge_order_but_not_labels():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    a = Graph.from_edges(4, edges)
    b = Graph.from_edges(4, list(reversed(edges)))
    assert graph_digest(a) == graph_digest(b)
    c = Graph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    assert graph_digest(a) != graph_digest(c)


def test_bipartite_container_and_split():
    X = BipartiteGraph.from_edges(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
    assert X.n == 5 and X.u_degrees() == [2, 2] and X.w_degrees() == [1, 2, 1]
    g = X.graph
    assert g.has_edge(0, 2) and g.has_edge(1, 4)
    Y = split_bipartite(g)
    assert sorted(Y.u_degrees() + Y.w_degrees()) == [1, 1, 2, 2, 2]


def test_two_coloring():
    assert two_coloring(nx.to_dict_of_lists(nx.cycle_graph(6))) is not None
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert two_coloring(tri.adj) is None


@pytest.mark.parametrize("suffix", [".g6", ".json"])
def test_write_read_keeps_the_bipartition(tmp_path, suffix):
    X = BipartiteGraph.from_edges(3, 3, [(i, j) for i in range(3) for j in range(3) if i != j])
    path = write_graph(X, tmp_path / f"x{suffix}")
    Y = read_graph(path)
    assert isinstance(Y, BipartiteGraph)
    assert Y.u_size == 3 and Y.graph.edge_set == X.graph.edge_set
    assert graph_digest(Y) == graph_digest(X)


def test_read_graph_reports_bad_json(tmp_path):
    p = tmp_path / "g.json"
    p.write_text("{\"n\": 3,\n \"edges\": [[0, 1]")
    with pytest.raises(FormatError, match="line 2"):
        read_graph(p)


def test_orbit_partition_and_block_graph():
    # C_8 as a bipartite graph, rotation by two gives 2 orbits per part
    X = BipartiteGraph.from_edges(4, 4, [(i, i) for i in range(4)] + [(i, (i + 1) % 4) for i in range(4)])
    rot = [(i + 1) % 4 for i in range(4)] + [4 + (i + 1) % 4 for i in range(4)]
    rot2 = [rot[rot[v]] for v in range(8)]
    part = OrbitPartition.from_perms([rot2], 8)
    assert sorted(part.sizes()) == [2, 2, 2, 2]
    B = block_graph(X, part)
    assert B.u_size == 2 and B.w_size == 2
    assert is_complete_bipartite(B)


def test_json_edges_shape(tmp_path):
    g = random_graph(8, 0.5, 1)
    path = write_graph(g, tmp_path / "g.json")
    doc = json.loads(path.read_text())
    assert doc["n"] == 8
    assert read_graph(path).edge_set == g.edge_set


def test_relabel_preserves_structure():
    g = random_graph(12, 0.3, 4)
    perm = list(range(12))
    random.Random(2).shuffle(perm)
    h = g.relabel(perm)
    assert nx.is_isomorphic(g.to_networkx(), h.to_networkx())
    assert all(h.has_edge(perm[a], perm[b]) for a, b in g.edges())
