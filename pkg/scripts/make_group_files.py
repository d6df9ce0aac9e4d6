"""Write the generator files for M23 and PSL(5,2) and their maximal subgroups.

Run once from the repository root; the outputs live in src/hamsym/data/.
"""

import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hamsym.perm import Perm, PermGroup  # noqa: E402
from hamsym.perm import pointwise_stabilizer_gens  # noqa: E402
from hamsym.zoo import pair_stabilizer  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "hamsym" / "data"


def dump(name, group, order, parent_check):
    doc = {"name": name, "degree": group.degree, "order": order,
           "generators": [list(g) for g in group.generators]}
    if parent_check:
        doc["parent_check"] = True
    (OUT / f"{name}.json").write_text(json.dumps(doc) + "\n")


def setwise_stabilizer(G, points, order, seed=1):
    """Random search for elements fixing ``points`` setwise until ``order`` is reached."""
    target = frozenset(points)
    rng_src = G.random_elements(seed)
    gens = []
    while True:
        g = next(rng_src)
        if frozenset(g[x] for x in target) == target:
            gens.append(g)
            if len(gens) >= 4 and PermGroup(gens, G.degree).order == order:
                return PermGroup(gens, G.degree, order=order)


def m23():
    cyc = [(3, 17, 10, 7, 9), (4, 13, 14, 19, 5), (8, 18, 11, 12, 23), (15, 20, 22, 21, 16)]
    a = Perm.from_cycles(23, [tuple(range(23))])
    b = Perm.from_cycles(23, [tuple(x - 1 for x in c) for c in cyc])
    G = PermGroup([a, b], name="M23")
    assert G.order == 10200960
    dump("m23", G, G.order, False)
    L = pair_stabilizer(G, 0, 1)
    assert L.order == G.order // 253
    dump("m23_pair_stabilizer", L, L.order, True)
    # a heptad is four points plus the size-3 orbit of their pointwise stabilizer
    stab, _ = pointwise_stabilizer_gens(G.generators, 23, [0, 1, 2, 3], G.order)
    K = PermGroup([Perm(g) for g in stab], 23)
    orbit3 = next(o for o in K.orbits() if len(o) == 3 and not set(o) & {0, 1, 2, 3})
    heptad = [0, 1, 2, 3] + orbit3
    R = setwise_stabilizer(G, heptad, G.order // 253)
    dump("m23_heptad_stabilizer", R, R.order, True)


def psl52():
    n = 5
    vecs = [v for v in itertools.product((0, 1), repeat=n) if any(v)]
    idx = {v: i for i, v in enumerate(vecs)}

    def perm_of(M):
        return Perm([idx[tuple(sum(v[i] * M[i][j] for i in range(n)) % 2 for j in range(n))]
                     for v in vecs])

    T = [[int(i == j) for j in range(n)] for i in range(n)]
    T[0][1] = 1
    C = [[int(j == (i + 1) % n) for j in range(n)] for i in range(n)]
    G = PermGroup([perm_of(T), perm_of(C)], name="PSL(5,2)")
    assert G.order == 9999360
    dump("psl52", G, G.order, False)
    e1 = idx[(1, 0, 0, 0, 0)]
    L = G.stabilizer(e1)
    dump("psl52_point_stabilizer", L, L.order, True)
    line = [e1, idx[(0, 1, 0, 0, 0)], idx[(1, 1, 0, 0, 0)]]
    R = setwise_stabilizer(G, line, G.order // 155)
    dump("psl52_line_stabilizer", R, R.order, True)


if __name__ == "__main__":
    m23()
    psl52()
