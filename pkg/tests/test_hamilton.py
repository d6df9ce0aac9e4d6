import json

import networkx as nx
import numpy as np
import pytest

from hamsym.bicoset import build, derived_graph
from hamsym.errors import (
    ConstructionFailed,
    DigestMismatchError,
    FormatError,
    NotApplicable,
    PreconditionError,
)
from hamsym.graph import BipartiteGraph, Graph, block_graph, graph_digest, is_complete_bipartite
from hamsym.hamilton import (
    HamiltonCertificate,
    MetacyclicAction,
    SemiregularAuto,
    bicayley_case1,
    bicayley_case2,
    bicayley_connection_set,
    lift_via_blocks,
    make_certificate,
    orchestrate,
    semiregular_from_spec,
    solve,
    verify,
)
from hamsym.zoo import regular_metacyclic_in, table_instance

from oracles import held_karp_batch, is_cycle_of


def G(nxg) -> Graph:
    nxg = nx.convert_node_labels_to_integers(nxg)
    return Graph.from_edges(nxg.number_of_nodes(), list(nxg.edges()))


def test_verify_accepts_and_rejects():
    c = G(nx.cycle_graph(6))
    cert = HamiltonCertificate([0, 1, 2, 3, 4, 5], graph_digest(c))
    assert verify(cert, c)
    assert not verify(HamiltonCertificate([0, 2, 1, 3, 4, 5], graph_digest(c)), c)
    assert not verify(HamiltonCertificate([0, 1, 2, 3, 4, 4], graph_digest(c)), c)
    assert not verify(HamiltonCertificate([0, 1, 2, 3, 4], graph_digest(c)), c)
    with pytest.raises(DigestMismatchError):
        verify(cert, G(nx.cycle_graph(7)))


def test_certificate_json_round_trip(tmp_path):
    c = G(nx.cycle_graph(5))
    cert = make_certificate(c, [0, 1, 2, 3, 4], "test")
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cert.to_json()))
    back = HamiltonCertificate.from_json(path)
    assert back.vertex_sequence == cert.vertex_sequence and verify(back, c)
    with pytest.raises(FormatError):
        HamiltonCertificate.from_json('{"cycle": [0, 1]}')


def test_make_certificate_refuses_a_non_cycle():
    with pytest.raises(ConstructionFailed):
        make_certificate(G(nx.path_graph(4)), [0, 1, 2, 3], "test")


@pytest.mark.parametrize("n,p", [(8, 0.35), (9, 0.3), (10, 0.3), (11, 0.25)])
def test_solver_agrees_with_subset_dp_on_random_graphs(n, p):
    graphs = [nx.gnp_random_graph(n, p, seed=s) for s in range(150)]
    ref = held_karp_batch(np.array([nx.to_numpy_array(g, dtype=bool) for g in graphs]))
    for g, want in zip(graphs, ref):
        res = solve(G(g))
        assert (res.status == "certificate") == bool(want)
        assert res.status in ("certificate", "exhausted")
        if res.certificate:
            assert is_cycle_of(g, res.certificate.vertex_sequence)


def test_solver_controls():
    assert solve(G(nx.petersen_graph())).status == "exhausted"
    assert solve(G(nx.complete_bipartite_graph(3, 4))).status == "exhausted"
    assert solve(G(nx.dodecahedral_graph())).status == "certificate"
    res = solve(G(nx.petersen_graph()), node_limit=3)
    assert res.status == "timeout" and res.certificate is None


def test_solver_is_deterministic_for_a_seed():
    g = G(nx.random_regular_graph(3, 40, seed=1))
    a, b = solve(g, seed=9), solve(g, seed=9)
    assert a.certificate.vertex_sequence == b.certificate.vertex_sequence


def test_semiregular_auto_rejects_non_semiregular():
    with pytest.raises(PreconditionError):
        SemiregularAuto.from_perm([1, 0, 2], 2)
    auto = SemiregularAuto.from_perm([1, 0, 3, 2], 2)
    assert auto.orbits.sizes() == [2, 2]


@pytest.fixture(scope="module")
def s5_spec():
    return table_instance(2, 2, 4, p=5)


def test_block_lift_on_derived_graph(s5_spec):
    X = build(s5_spec)
    Y = derived_graph(X)
    auto = semiregular_from_spec(s5_spec, 5, seed=1)
    assert sorted(auto.orbits.sizes()) == [5] * 4
    B = block_graph(Y, auto.orbits)
    assert B.u_size == B.w_size == 2 and is_complete_bipartite(B)
    cert = lift_via_blocks(Y, auto)
    assert verify(cert, Y) and cert.method == "block-lift"
    assert is_cycle_of(Y.graph.to_networkx(), cert.vertex_sequence)


def test_semiregular_from_spec_preconditions(s5_spec):
    with pytest.raises(PreconditionError):
        semiregular_from_spec(s5_spec, 7)
    # 3 divides the order of the pair stabilizer S2 x S3
    with pytest.raises(PreconditionError):
        semiregular_from_spec(s5_spec, 3)


def frame_for(spec, relabel=None):
    X = build(spec)
    M = regular_metacyclic_in(spec.group, X.u_size, spec.left, spec.right, seed=4)
    t, b = M.generators
    action = MetacyclicAction.from_spec(spec, t, b)
    return X, bicayley_connection_set(X, action, 0, X.u_size, relabel)


def test_connection_set_is_normalized():
    spec = table_instance(1, 7, 12)
    X, frame = frame_for(spec)
    assert (0, 0) in frame.S and (1, 0) in frame.S
    assert len(frame.S) == 12
    # coordinates cover each part exactly once
    assert sorted(x for r in frame.U for x in r) == list(range(X.u_size))
    assert sorted(x for r in frame.W for x in r) == list(range(X.u_size, X.n))


def first_firing(spec, fn):
    X = build(spec)
    for relabel in sorted(X.graph.adj[0]):
        _, frame = frame_for(spec, relabel)
        try:
            return X, fn(X, frame)
        except NotApplicable:
            continue
    return X, None


def test_bicayley_case1_certificate():
    X, cert = first_firing(table_instance(1, 7, 24), bicayley_case1)
    assert cert is not None and verify(cert, X)


def test_bicayley_case2_certificate():
    X, cert = first_firing(table_instance(1, 7, 3), bicayley_case2)
    assert cert is not None and verify(cert, X)
    assert is_cycle_of(X.graph.to_networkx(), cert.vertex_sequence)


def test_case_split_is_exclusive():
    spec = table_instance(1, 7, 3)
    X = build(spec)
    for relabel in sorted(X.graph.adj[0]):
        _, frame = frame_for(spec, relabel)
        has_a = any(i == 0 and j != 0 for i, j in frame.S)
        if has_a:
            with pytest.raises(NotApplicable):
                bicayley_case2(X, frame)
        else:
            with pytest.raises(NotApplicable):
                bicayley_case1(X, frame)


@pytest.mark.parametrize("args,method", [
    ((2, 2, 4, {"p": 5}), "block-lift"),
    ((1, 7, 3, {}), "bicayley-2"),
    ((1, 12, 3, {}), "solver"),
])
def test_orchestrate_picks_route(args, method):
    table, row, val, params = args
    rep = orchestrate(table_instance(table, row, val, **params))
    assert rep.status == "certificate" and rep.method == method
    assert verify(rep.certificate, rep.graph)


def test_orchestrate_without_solver_reports_unknown():
    rep = orchestrate(table_instance(1, 12, 3), use_solver=False)
    assert rep.status == "unknown" and rep.certificate is None
    assert any("cover case" in line for line in rep.log)


def test_orchestrate_on_a_plain_graph():
    rep = orchestrate(G(nx.petersen_graph()))
    assert rep.status == "exhausted"


def test_block_lift_needs_a_complete_block_graph():
    # C_24 with 12 vertices per part; a rotation of order 4 leaves 3 orbits per part
    # and the block graph is a 6-cycle rather than K_{3,3}
    X = BipartiteGraph.from_edges(12, 12, [(i, i) for i in range(12)]
                                  + [(i, (i - 1) % 12) for i in range(12)])
    rot = [(i + 3) % 12 for i in range(12)] + [12 + (j + 3) % 12 for j in range(12)]
    auto = SemiregularAuto.from_perm(rot, 4)
    assert len(auto.orbits) == 6
    assert not is_complete_bipartite(block_graph(X, auto.orbits))
    with pytest.raises(ConstructionFailed):
        lift_via_blocks(X, auto)
