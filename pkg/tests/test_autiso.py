import random

import networkx as nx
import pytest

from hamsym.autiso import (
    ColoredGraph,
    are_isomorphic,
    automorphism_group,
    canonical_form,
    is_edge_transitive,
    is_equitable,
    is_semisymmetric,
    is_vertex_transitive,
    refine,
)
from hamsym.errors import MalformedInputError, ResourceLimitError
from hamsym.graph import BipartiteGraph, Graph, from_graph6
from hamsym.zoo import LJUBLJANA_LCF, TUTTE_12_CAGE_LCF, grid_line_graph, lcf_graph

from oracles import automorphisms_by_permutations, nx_automorphism_count, small_bipartite_corpus


def G(nxg) -> Graph:
    nxg = nx.convert_node_labels_to_integers(nxg)
    return Graph.from_edges(nxg.number_of_nodes(), list(nxg.edges()))


def shuffled(g: Graph, seed: int) -> Graph:
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    return g.relabel(perm)


SMALL = {
    "cube": nx.hypercube_graph(3),
    "c8": nx.cycle_graph(8),
    "k33": nx.complete_bipartite_graph(3, 3),
    "k4": nx.complete_graph(4),
    "path5": nx.path_graph(5),
    "star": nx.star_graph(5),
    "gnp": nx.gnp_random_graph(8, 0.4, seed=3),
    "gnp2": nx.gnp_random_graph(7, 0.5, seed=8),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_group_order_matches_brute_force(name):
    g = SMALL[name]
    res = automorphism_group(G(g))
    assert res.group_order == len(automorphisms_by_permutations(nx.convert_node_labels_to_integers(g)))


@pytest.mark.parametrize("nxg", [nx.petersen_graph(), nx.heawood_graph(), nx.desargues_graph(),
                                 nx.moebius_kantor_graph()])
def test_group_order_matches_networkx_matcher(nxg):
    assert automorphism_group(G(nxg)).group_order == nx_automorphism_count(nxg)


@pytest.mark.parametrize("g,order", [
    (grid_line_graph(), 1296),
    (lcf_graph(126, *TUTTE_12_CAGE_LCF), 12096),
    (lcf_graph(112, *LJUBLJANA_LCF), 168),
])
def test_known_cubic_group_orders(g, order):
    assert automorphism_group(g).group_order == order


def test_generators_are_automorphisms():
    g = grid_line_graph()
    res = automorphism_group(g)
    for a in res.generators:
        assert {tuple(sorted((a[x], a[y]))) for x, y in g.edges()} == g.edge_set


def test_canonical_form_separates_the_whole_corpus_up_to_11_vertices():
    lines = [s for s in small_bipartite_corpus() if ord(s[0]) - 63 <= 11]
    forms = set()
    for s in lines:
        forms.add(canonical_form(from_graph6(s))[0])
    # the corpus holds one graph per isomorphism class
    assert len(forms) == len(lines)


@pytest.mark.parametrize("seed", range(4))
def test_canonical_form_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    lines = small_bipartite_corpus()
    picks = [lines[rng.randrange(len(lines))] for _ in range(40)]
    for s in picks:
        g = from_graph6(s)
        h = shuffled(g, rng.randrange(1 << 30))
        assert canonical_form(g)[0] == canonical_form(h)[0]


def test_canonical_form_invariant_on_symmetric_graphs():
    for g in (grid_line_graph(), lcf_graph(112, *LJUBLJANA_LCF)):
        assert canonical_form(g)[0] == canonical_form(shuffled(g, 5))[0]


def test_are_isomorphic_returns_a_valid_mapping():
    g = G(nx.heawood_graph())
    h = shuffled(g, 1)
    ok, phi = are_isomorphic(g, h)
    assert ok
    assert {tuple(sorted((phi[a], phi[b]))) for a, b in g.edges()} == h.edge_set
    ok, _ = are_isomorphic(g, G(nx.moebius_kantor_graph()))
    assert not ok


def test_refinement_is_equitable():
    cg = ColoredGraph.plain(G(nx.gnp_random_graph(20, 0.2, seed=1)))
    assert is_equitable(refine(cg))


def test_transitivity_predicates():
    pet = G(nx.petersen_graph())
    assert is_vertex_transitive(pet) and is_edge_transitive(pet)
    path = G(nx.path_graph(4))
    assert not is_vertex_transitive(path)
    assert not is_edge_transitive(path)


def test_semisymmetry_verdicts():
    assert is_semisymmetric(grid_line_graph()).answer
    assert is_semisymmetric(lcf_graph(112, *LJUBLJANA_LCF)).answer
    assert is_semisymmetric(lcf_graph(126, *TUTTE_12_CAGE_LCF)).answer
    r = is_semisymmetric(G(nx.heawood_graph()))
    assert not r and r.reason == "vertex-transitive"
    assert is_semisymmetric(G(nx.path_graph(4))).reason == "irregular"
    # regular but with two edge orbits
    prism = G(nx.circular_ladder_graph(5))
    assert is_semisymmetric(prism).reason == "not edge-transitive"


def test_semisymmetry_witness_swaps_parts_of_c6():
    X = BipartiteGraph.from_edges(3, 3, [(i, i) for i in range(3)] + [(i, (i + 1) % 3) for i in range(3)])
    r = is_semisymmetric(X)
    assert not r and r.reason == "vertex-transitive"
    assert r.witness[0] >= 3


def test_disconnected_input_rejected():
    with pytest.raises(MalformedInputError):
        is_semisymmetric(G(nx.disjoint_union(nx.cycle_graph(4), nx.cycle_graph(4))))


def test_size_limit():
    with pytest.raises(ResourceLimitError):
        automorphism_group(G(nx.cycle_graph(30)), limit=20)


def test_part_colors_restrict_to_part_preserving_maps():
    X = BipartiteGraph.from_edges(3, 3, [(u, w) for u in range(3) for w in range(3)])
    assert automorphism_group(X).group_order == 72
    assert automorphism_group(X, part_colors=True).group_order == 36
