"""Automorphism groups, canonical forms and isomorphism by individualization-refinement."""

from __future__ import annotations

import heapq
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import MalformedInputError, ResourceLimitError
from .graph import BipartiteGraph, Graph, OrbitPartition
from .perm import Perm, build_chain, orbits_of

DEFAULT_LIMIT = 1000

AnyGraph = Graph | BipartiteGraph


@dataclass
class ColoredGraph:
    """A graph with a vertex coloring; colors are small integers, order matters."""

    graph: Graph
    colors: list[int]

    def __post_init__(self):
        if len(self.colors) != self.graph.n:
            raise MalformedInputError("one color per vertex required")

    @classmethod
    def plain(cls, g: AnyGraph, part_colors: bool = False) -> "ColoredGraph":
        gg, parts = _unpack(g)
        if part_colors and parts is not None:
            return cls(gg, list(parts))
        return cls(gg, [0] * gg.n)

    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return [out[c] for c in sorted(out)]


def _unpack(g: AnyGraph) -> tuple[Graph, tuple | None]:
    if isinstance(g, BipartiteGraph):
        nu = g.u_size
        return g.graph, tuple(0 if v < nu else 1 for v in range(g.n))
    return g, g.part


# ---------------------------------------------------------------------------
# ordered partitions
# ---------------------------------------------------------------------------

class _Partition:
    """Cells are contiguous runs of ``lab``; a cell is named by its start position."""

    __slots__ = ("lab", "cell_of", "cell_end")

    def __init__(self, lab, cell_of, cell_end):
        self.lab = lab
        self.cell_of = cell_of
        self.cell_end = cell_end

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "_Partition":
        n = len(colors)
        lab = sorted(range(n), key=lambda v: (colors[v], v))
        cell_of = [0] * n
        cell_end = [0] * n
        start = 0
        for i in range(1, n + 1):
            if i == n or colors[lab[i]] != colors[lab[start]]:
                for j in range(start, i):
                    cell_of[lab[j]] = start
                cell_end[start] = i
                start = i
        return cls(lab, cell_of, cell_end)

    def copy(self) -> "_Partition":
        return _Partition(self.lab[:], self.cell_of[:], self.cell_end[:])

    def starts(self) -> list[int]:
        out, i, n = [], 0, len(self.lab)
        while i < n:
            out.append(i)
            i = self.cell_end[i]
        return out

    def is_discrete(self) -> bool:
        return all(self.cell_end[s] == s + 1 for s in self.starts())

    def target(self) -> int | None:
        """Start of the first smallest non-singleton cell."""
        best, best_size = None, None
        for s in self.starts():
            size = self.cell_end[s] - s
            if size > 1 and (best_size is None or size < best_size):
                best, best_size = s, size
        return best

    def individualize(self, v: int) -> int:
        s = self.cell_of[v]
        e = self.cell_end[s]
        lab = self.lab
        i = lab.index(v, s, e)
        lab[s], lab[i] = lab[i], lab[s]
        self.cell_end[s] = s + 1
        self.cell_end[s + 1] = e
        for j in range(s + 1, e):
            self.cell_of[lab[j]] = s + 1
        return s

    def colors(self) -> list[int]:
        out = [0] * len(self.lab)
        for k, s in enumerate(self.starts()):
            for j in range(s, self.cell_end[s]):
                out[self.lab[j]] = k
        return out


def _refine(P: _Partition, adj: Sequence[Sequence[int]], splitters: Sequence[int],
            trace: list) -> None:
    """Split cells by neighbour counts until the partition is equitable.

    Every decision depends only on cell positions and counts, so isomorphic
    inputs produce identical traces.
    """
    n = len(P.lab)
    lab, cell_of, cell_end = P.lab, P.cell_of, P.cell_end
    inq = [False] * n
    heap: list[int] = []
    for s in splitters:
        if not inq[s]:
            inq[s] = True
            heap.append(s)
    heapq.heapify(heap)
    cnt = [0] * n
    while heap:
        s = heapq.heappop(heap)
        if not inq[s]:
            continue
        inq[s] = False
        touched: list[int] = []
        for i in range(s, cell_end[s]):
            for v in adj[lab[i]]:
                if cnt[v] == 0:
                    touched.append(v)
                cnt[v] += 1
        by_cell: dict[int, list[int]] = {}
        for v in touched:
            by_cell.setdefault(cell_of[v], []).append(v)
        for X in sorted(by_cell):
            Xe = cell_end[X]
            size = Xe - X
            if size == 1:
                continue
            vs = by_cell[X]
            if len(vs) == size:
                c0 = cnt[vs[0]]
                if all(cnt[v] == c0 for v in vs):
                    continue
            groups: dict[int, list[int]] = {}
            for i in range(X, Xe):
                v = lab[i]
                groups.setdefault(cnt[v], []).append(v)
            keys = sorted(groups)
            pos = X
            frags = []
            for k in keys:
                fs = pos
                for v in groups[k]:
                    lab[pos] = v
                    cell_of[v] = fs
                    pos += 1
                cell_end[fs] = pos
                frags.append((fs, pos - fs))
            trace.append((s, X, tuple((k, len(groups[k])) for k in keys)))
            if inq[X]:
                new = [fs for fs, _ in frags[1:]]
            else:
                big = max(range(len(frags)), key=lambda j: (frags[j][1], -j))
                new = [fs for j, (fs, _) in enumerate(frags) if j != big]
            for fs in new:
                inq[fs] = True
                heapq.heappush(heap, fs)
        for v in touched:
            cnt[v] = 0


def refine(cg: ColoredGraph) -> ColoredGraph:
    """Coarsest equitable refinement of the coloring."""
    P = _Partition.from_colors(cg.colors)
    _refine(P, cg.graph.adj, P.starts(), [])
    return ColoredGraph(cg.graph, P.colors())


def is_equitable(cg: ColoredGraph) -> bool:
    classes = cg.classes()
    for cell in classes:
        for other in classes:
            oset = set(other)
            sigs = {sum(1 for x in cg.graph.adj[v] if x in oset) for v in cell}
            if len(sigs) > 1:
                return False
    return True


# ---------------------------------------------------------------------------
# search tree
# ---------------------------------------------------------------------------

class _Search:
    def __init__(self, adj: Sequence[Sequence[int]], colors: Sequence[int]):
        self.adj = adj
        self.n = len(adj)
        self.colors = list(colors)
        self.gens: list[tuple] = []
        self.first = None   # (lab, traces, cert, path)
        self.best = None
        self._orbit_cache: dict = {}

    def cert(self, lab: list[int]) -> tuple:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        adj = self.adj
        return tuple(tuple(sorted(pos[u] for u in adj[v])) for v in lab)

    def run(self) -> None:
        P = _Partition.from_colors(self.colors)
        trace: list = []
        _refine(P, self.adj, P.starts(), trace)
        self.node(P, [], [tuple(trace)])

    def _stab_orbits(self, path: list[int]) -> list[int]:
        key = (tuple(path), len(self.gens))
        hit = self._orbit_cache.get(key)
        if hit is not None:
            return hit
        gens = [g for g in self.gens if all(g[x] == x for x in path)]
        root = list(range(self.n))
        for orb in orbits_of(gens, self.n):
            for x in orb:
                root[x] = orb[0]
        self._orbit_cache = {key: root}
        return root

    def node(self, P: _Partition, path: list[int], traces: list[tuple]) -> int | None:
        d = len(path)
        if self.best is not None:
            k = len(traces)
            if traces != self.first[1][:k] and traces > self.best[1][:k]:
                return None
        s = P.target()
        if s is None:
            return self.leaf(P, path, traces)
        members = sorted(P.lab[s:P.cell_end[s]])
        done: list[int] = []
        for v in members:
            if done:
                root = self._stab_orbits(path)
                if any(root[w] == root[v] for w in done):
                    continue
            done.append(v)
            C = P.copy()
            C.individualize(v)
            tr: list = []
            _refine(C, self.adj, [s], tr)
            r = self.node(C, path + [v], traces + [tuple(tr)])
            if r is not None and r < d:
                return r
        return None

    def leaf(self, P: _Partition, path: list[int], traces: list[tuple]) -> int | None:
        lab = P.lab[:]
        cert = self.cert(lab)
        if self.first is None:
            self.first = self.best = (lab, traces, cert, path)
            return None
        for ref in (self.first, self.best):
            if traces == ref[1] and cert == ref[2]:
                g = [0] * self.n
                for a, b in zip(ref[0], lab):
                    g[a] = b
                self.gens.append(tuple(g))
                return _common_prefix(path, ref[3])
        if (traces, cert) < (self.best[1], self.best[2]):
            self.best = (lab, traces, cert, path)
        return None


def _common_prefix(a: list[int], b: list[int]) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

@dataclass
class AutResult:
    generators: list[Perm]
    group_order: int
    orbit_partition: OrbitPartition
    edge_orbits: int
    part_swap: bool
    canonical_labeling: list[int] = field(repr=False)
    canonical_form: tuple = field(repr=False)

    @property
    def vertex_orbits(self) -> int:
        return len(self.orbit_partition)

    def to_json(self) -> dict:
        return {"order": self.group_order, "generators": [list(g) for g in self.generators],
                "vertex_orbits": self.vertex_orbits, "edge_orbits": self.edge_orbits,
                "part_swap": self.part_swap}


def _check_size(n: int, limit: int) -> None:
    if n > limit:
        raise ResourceLimitError(f"graph has {n} vertices; the size limit is {limit}")


def _search(g: AnyGraph, part_colors: bool, limit: int) -> tuple[_Search, Graph, tuple | None]:
    gg, parts = _unpack(g)
    _check_size(gg.n, limit)
    colors = list(parts) if (part_colors and parts is not None) else [0] * gg.n
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * gg.n + 1000))
    try:
        s = _Search(gg.adj, colors)
        s.run()
    finally:
        sys.setrecursionlimit(old)
    return s, gg, parts


def _edge_orbit_count(gg: Graph, gens: Sequence[Sequence[int]]) -> int:
    edges = gg.edges()
    if not edges:
        return 0
    index = {e: i for i, e in enumerate(edges)}
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, (a, b) in enumerate(edges):
            x, y = g[a], g[b]
            j = index[(x, y) if x < y else (y, x)]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    return sum(1 for i in range(len(edges)) if find(i) == i)


def automorphism_group(g: AnyGraph, part_colors: bool = False,
                       limit: int = DEFAULT_LIMIT) -> AutResult:
    """Generators and order of Aut(g), or of the part-preserving subgroup."""
    s, gg, parts = _search(g, part_colors, limit)
    edge_set = gg.edge_set
    gens = []
    for t in s.gens:
        for a, b in gg.edges():
            x, y = t[a], t[b]
            assert ((x, y) if x < y else (y, x)) in edge_set, "search produced a non-automorphism"
        gens.append(Perm._raw(t))
    order = build_chain([tuple(x) for x in gens], gg.n).order if gg.n else 1
    swap = parts is not None and any(parts[x[v]] != parts[v] for x in gens for v in range(gg.n))
    lab = s.best[0] if s.best else []
    return AutResult(gens, order, OrbitPartition.from_perms(gens, gg.n),
                     _edge_orbit_count(gg, gens), swap, list(lab),
                     (tuple(s.colors[v] for v in lab),) + (s.best[2] if s.best else ()))


def canonical_form(g: AnyGraph, part_colors: bool = False, limit: int = DEFAULT_LIMIT
                   ) -> tuple[tuple, list[int]]:
    """``(form, labeling)``: ``labeling[i]`` is the vertex placed at canonical position ``i``."""
    s, gg, _ = _search(g, part_colors, limit)
    if gg.n == 0:
        return ((), ()), []
    lab, _, cert, _ = s.best
    return (tuple(s.colors[v] for v in lab), cert), list(lab)


def is_vertex_transitive(g: AnyGraph, limit: int = DEFAULT_LIMIT) -> bool:
    gg, _ = _unpack(g)
    if gg.n == 0:
        return True
    if len(set(gg.degrees())) > 1:
        return False
    return len(automorphism_group(g, False, limit).orbit_partition) == 1


def is_edge_transitive(g: AnyGraph, limit: int = DEFAULT_LIMIT) -> bool:
    return automorphism_group(g, False, limit).edge_orbits <= 1


@dataclass
class SemisymmetryResult:
    """``answer`` is the decision; on ``False`` the witness explains why."""

    answer: bool
    reason: str
    witness: object = None

    def __bool__(self) -> bool:
        return self.answer


def is_semisymmetric(g: AnyGraph, limit: int = DEFAULT_LIMIT) -> SemisymmetryResult:
    gg, parts = _unpack(g)
    if not gg.is_connected():
        raise MalformedInputError("semisymmetry is decided for connected graphs only")
    degs = gg.degrees()
    if len(set(degs)) > 1:
        v = next(i for i, x in enumerate(degs) if x != degs[0])
        return SemisymmetryResult(False, "irregular", (0, degs[0], v, degs[v]))
    res = automorphism_group(g, False, limit)
    if res.edge_orbits != 1:
        first = gg.edges()[0]
        other = _edge_outside_orbit(gg, res.generators, first)
        return SemisymmetryResult(False, "not edge-transitive", (first, other))
    if len(res.orbit_partition) == 1:
        gamma = None
        if parts is not None:
            gamma = next((x for x in res.generators if parts[x[0]] != parts[0]), None)
        if gamma is None:
            gamma = next(x for x in res.generators if x[0] != 0)
        return SemisymmetryResult(False, "vertex-transitive", gamma)
    return SemisymmetryResult(True, "semisymmetric", res)


def _edge_outside_orbit(gg: Graph, gens, e) -> tuple[int, int]:
    orbit = {e}
    queue = [e]
    for a, b in queue:
        for x in gens:
            f = tuple(sorted((x[a], x[b])))
            if f not in orbit:
                orbit.add(f)
                queue.append(f)
    return next(f for f in gg.edges() if f not in orbit)


def are_isomorphic(g1: AnyGraph, g2: AnyGraph, part_colors: bool = False,
                   limit: int = DEFAULT_LIMIT) -> tuple[bool, list[int] | None]:
    """Canonical-form comparison; the mapping sends each vertex of g1 to its image in g2."""
    a, _ = _unpack(g1)
    b, _ = _unpack(g2)
    if a.n != b.n or len(a.edges()) != len(b.edges()):
        return False, None
    if sorted(a.degrees()) != sorted(b.degrees()):
        return False, None
    f1, lab1 = canonical_form(g1, part_colors, limit)
    f2, lab2 = canonical_form(g2, part_colors, limit)
    if f1 != f2:
        return False, None
    mapping = [0] * a.n
    for x, y in zip(lab1, lab2):
        mapping[x] = y
    return True, mapping
