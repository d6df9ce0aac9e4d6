import json
import shutil

import networkx as nx
import pytest

from hamsym.errors import ContainmentError, FormatError, GatedError, NotFoundError, RecipeError, SpecError
from hamsym.graph import Graph, write_graph
from hamsym.perm import Perm, PermGroup
from hamsym.zoo import (
    GROUP_DIRS,
    TABLE1,
    GroupRecipe,
    SubgroupDescriptor,
    are_conjugate_in,
    census_dir,
    data_path,
    derive_seed,
    find_subgroup,
    load_census_dir,
    load_census_graph,
    load_group_file,
    outer_involution,
    pgl2,
    psl2,
    realize,
    regular_metacyclic_in,
    row_candidates,
    row_census,
    row_groups,
    table2_row,
    table_instance,
    write_census,
)


def test_derive_seed_is_stable_and_separates_labels():
    assert derive_seed(1, "a", 2) == derive_seed(1, "a", 2)
    assert derive_seed(1, "a", 2) != derive_seed(1, "a", 3)
    assert 0 <= derive_seed(7) < 1 << 64


@pytest.mark.parametrize("family,params", [
    ("psl2", (9,)),
    ("pgl2", (2,)),
    ("metacyclic", (13, 2, 2, 3)),
    ("nope", ()),
])
def test_bad_recipes(family, params):
    with pytest.raises(RecipeError):
        GroupRecipe(family, params)


def test_metacyclic_recipe_order():
    G = realize(GroupRecipe("metacyclic", (13, 2, 2, 5)))
    assert G.order == 13 * 4


@pytest.mark.parametrize("group,desc,order", [
    (pgl2(11), SubgroupDescriptor("S4"), 24),
    (pgl2(11), SubgroupDescriptor("dihedral", n=12), 24),
    (psl2(11), SubgroupDescriptor("A5"), 60),
    (psl2(13), SubgroupDescriptor("A4"), 12),
    (psl2(13), SubgroupDescriptor("borel", n=6), 78),
    (psl2(23), SubgroupDescriptor("dihedral", n=12), 24),
])
def test_find_subgroup_orders(group, desc, order):
    G = realize(group)
    H = find_subgroup(G, desc, seed=3)
    assert H.order == order
    assert all(h in G for h in H.generators)


def test_outer_class_is_not_conjugate_in_psl():
    G = realize(psl2(23))
    H = find_subgroup(G, SubgroupDescriptor("S4"), seed=1)
    K = find_subgroup(G, SubgroupDescriptor("S4", class_selector="sigma"), seed=1)
    assert H.order == K.order == 24
    assert not are_conjugate_in(G, H, K)
    # conjugating by the outer involution swaps the classes
    assert are_conjugate_in(G, H.conjugate(outer_involution(23)), K)
    M = H.conjugate(next(iter(G.random_elements(seed=2))))
    assert are_conjugate_in(G, H, M)


@pytest.mark.parametrize("row", sorted(r for r in TABLE1 if not TABLE1[r].heavy))
def test_table1_valencies_are_realized(row):
    tr = TABLE1[row]
    vals = {c.valency for c in row_candidates(tr) if c.connected}
    assert set(tr.valencies) <= vals
    p, q = tr.pq
    G, L, R = row_groups(tr)
    assert G.order // L.order == G.order // R.order == p * q


@pytest.mark.parametrize("row", [3, 6, 7, 8, 9, 12])
def test_table1_class_counts(row):
    tr = TABLE1[row]
    census = row_census(tr)
    assert tuple(census) == tr.valencies
    assert tuple(len(v) for v in census.values()) == tr.numbers


def test_row7_double_coset_valencies():
    vals = sorted(c.valency for c in row_candidates(TABLE1[7]))
    # trivial double coset aside, the nontrivial ones are 3, 4, 12, 12, 24
    assert [v for v in vals if v > 1] == [3, 4, 12, 12, 24]


@pytest.mark.parametrize("row,params", [(1, {}), (2, {"p": 5}), (2, {"p": 7}), (2, {"p": 11}),
                                        (4, {}), (5, {}), (6, {})])
def test_table2_valencies_are_realized(row, params):
    tr = table2_row(row, **params)
    vals = {c.valency for c in row_candidates(tr) if c.connected}
    assert set(tr.valencies) <= vals


def test_table2_parameter_checks():
    with pytest.raises(SpecError):
        table2_row(2, p=13)
    with pytest.raises(SpecError):
        table2_row(6, 13, 2, 5)
    with pytest.raises(SpecError):
        table2_row(9)


def test_heavy_rows_are_gated():
    with pytest.raises(GatedError):
        row_groups(TABLE1[13])
    with pytest.raises(GatedError):
        table_instance(1, 10, 6)


def test_missing_valency_lists_achievable():
    with pytest.raises(NotFoundError, match="achievable"):
        table_instance(1, 7, 5)


def test_regular_metacyclic_subgroup():
    tr = TABLE1[7]
    G, L, R = row_groups(tr)
    M = regular_metacyclic_in(G, 55, L, R, seed=1)
    assert M.order == 55
    with pytest.raises(NotFoundError):
        regular_metacyclic_in(G, 15, seed=1)


def test_bundled_group_files():
    M23 = load_group_file("m23.json")
    assert M23.order == 10200960 and M23.degree == 23
    H = load_group_file("m23_pair_stabilizer.json", parent=M23)
    assert H.order == 40320
    P = load_group_file("psl52.json")
    assert P.order == 9999360


def test_group_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"degree": 3,\n "generators": [[1, 0, 2]')
    with pytest.raises(FormatError, match="line 2"):
        load_group_file(bad)
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"degree": 3, "generators": [[1, 2, 0]], "order": 6}))
    with pytest.raises(FormatError, match="declared order"):
        load_group_file(wrong)
    child = tmp_path / "child.json"
    child.write_text(json.dumps({"degree": 3, "generators": [[1, 0, 2]], "parent_check": True}))
    with pytest.raises(FormatError):
        load_group_file(child)
    c3 = PermGroup([Perm([1, 2, 0])], 3)
    with pytest.raises(ContainmentError):
        load_group_file(child, parent=c3)
    with pytest.raises(FormatError, match="no such"):
        load_group_file(tmp_path / "missing.json")


def test_group_dirs_are_searched(tmp_path):
    (tmp_path / "tiny.json").write_text(json.dumps({"degree": 3, "generators": [[1, 2, 0]]}))
    GROUP_DIRS[:] = [tmp_path]
    try:
        assert load_group_file("tiny.json").order == 3
    finally:
        GROUP_DIRS.clear()


def test_bundled_census():
    graphs, manifest = load_census_dir(census_dir())
    assert manifest["complete"] is False
    assert [g.order for g in graphs] == [54, 110, 112, 126, 182, 506]
    assert all(g.valency == 3 and g.bipartite is not None for g in graphs)


def test_census_writer_round_trip(tmp_path):
    write_census(tmp_path)
    graphs, manifest = load_census_dir(tmp_path)
    ref, _ = load_census_dir(census_dir())
    assert [g.graph.edge_set for g in graphs] == [g.graph.edge_set for g in ref]


def test_census_manifest_mismatch(tmp_path):
    shutil.copy(data_path("census") / "ss-54-1.g6", tmp_path / "ss-54-1.g6")
    (tmp_path / "manifest.json").write_text(json.dumps(
        {"complete": False, "graphs": [{"file": "ss-54-1.g6", "order": 56, "valency": 3}]}))
    with pytest.raises(FormatError):
        load_census_dir(tmp_path)


def test_non_bipartite_census_file_warns(tmp_path):
    pet = nx.petersen_graph()
    path = write_graph(Graph.from_edges(10, list(pet.edges())), tmp_path / "ss-10-1.g6")
    with pytest.warns(UserWarning, match="not bipartite"):
        cg = load_census_graph(path)
    assert cg.bipartite is None and cg.valency == 3
