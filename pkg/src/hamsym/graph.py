"""Graph containers and their file formats (graph6, JSON edge lists)."""

from __future__ import annotations

import hashlib
import json
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import networkx as nx

from .errors import FormatError, MalformedInputError, PartitionError

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph on ``0 .. n-1``.

    ``part`` holds a 0/1 side for every vertex when a bipartition is known.
    """

    adj: tuple[tuple[int, ...], ...]
    part: tuple[int, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], part=None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise MalformedInputError(f"loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise MalformedInputError(f"edge ({a}, {b}) outside 0..{n - 1}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return cls(tuple(tuple(sorted(s)) for s in nbrs), None if part is None else tuple(part))

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, nb in enumerate(self.adj) for b in nb if a < b]

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self.edge_set if a < b else (b, a) in self.edge_set

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.adj]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(component(self.adj, 0)) == self.n

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """The image graph with vertex ``v`` renamed ``perm[v]``."""
        n = self.n
        adj: list[tuple[int, ...]] = [()] * n
        for v, nb in enumerate(self.adj):
            adj[perm[v]] = tuple(sorted(perm[x] for x in nb))
        part = None
        if self.part is not None:
            p = [0] * n
            for v, s in enumerate(self.part):
                p[perm[v]] = s
            part = tuple(p)
        return Graph(tuple(adj), part)


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Two labeled parts ``U`` and ``W`` with edges only between them.

    Globally, U-vertex ``i`` is vertex ``i`` and W-vertex ``j`` is vertex
    ``len(u_labels) + j``.
    """

    u_labels: tuple[Hashable, ...]
    w_labels: tuple[Hashable, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != len(self.u_labels):
            raise MalformedInputError("adjacency needs one row per U-vertex")
        m = len(self.w_labels)
        for row in self.adjacency:
            if any(not 0 <= j < m for j in row):
                raise MalformedInputError("W index out of range")
            if any(row[k] >= row[k + 1] for k in range(len(row) - 1)):
                raise MalformedInputError("neighbor lists must be sorted and duplicate-free")

    @classmethod
    def from_edges(cls, u: int, w: int, edges: Iterable[Sequence[int]],
                   u_labels=None, w_labels=None) -> "BipartiteGraph":
        rows: list[set[int]] = [set() for _ in range(u)]
        for a, b in edges:
            rows[a].add(b)
        return cls(tuple(u_labels) if u_labels is not None else tuple(range(u)),
                   tuple(w_labels) if w_labels is not None else tuple(range(w)),
                   tuple(tuple(sorted(r)) for r in rows))

    @property
    def u_size(self) -> int:
        return len(self.u_labels)

    @property
    def w_size(self) -> int:
        return len(self.w_labels)

    @property
    def n(self) -> int:
        return self.u_size + self.w_size

    def __len__(self) -> int:
        return self.n

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u_index, w_index)`` pairs."""
        return [(i, j) for i, row in enumerate(self.adjacency) for j in row]

    def w_adjacency(self) -> list[list[int]]:
        cols: list[list[int]] = [[] for _ in range(self.w_size)]
        for i, row in enumerate(self.adjacency):
            for j in row:
                cols[j].append(i)
        return cols

    @cached_property
    def graph(self) -> Graph:
        nu = self.u_size
        adj = [tuple(nu + j for j in row) for row in self.adjacency]
        adj.extend(tuple(col) for col in self.w_adjacency())
        return Graph(tuple(adj), (0,) * nu + (1,) * self.w_size)

    def u_degrees(self) -> list[int]:
        return [len(r) for r in self.adjacency]

    def w_degrees(self) -> list[int]:
        return [len(c) for c in self.w_adjacency()]

    def is_connected(self) -> bool:
        return self.graph.is_connected()

    def adjacency_bytes(self) -> bytes:
        return json.dumps([list(r) for r in self.adjacency], separators=(",", ":")).encode()


AnyGraph = Graph | BipartiteGraph


def as_graph(g: AnyGraph) -> Graph:
    return g.graph if isinstance(g, BipartiteGraph) else g


def component(adj: Sequence[Sequence[int]], start: int, allowed=None) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen and (allowed is None or y in allowed):
                seen.add(y)
                queue.append(y)
    return seen


def two_coloring(adj: Sequence[Sequence[int]]) -> list[int] | None:
    """A proper 2-coloring, or None when the graph has an odd cycle."""
    color = [-1] * len(adj)
    for s in range(len(adj)):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
    return color


# ---------------------------------------------------------------------------
# orbit partitions and block graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitPartition:
    cells: tuple[tuple[int, ...], ...]
    cell_of: tuple[int, ...]

    @classmethod
    def from_cells(cls, cells: Iterable[Iterable[int]], n: int) -> "OrbitPartition":
        cells = tuple(tuple(sorted(c)) for c in cells)
        cell_of = [-1] * n
        for k, c in enumerate(cells):
            for v in c:
                if cell_of[v] >= 0:
                    raise PartitionError(f"vertex {v} lies in two cells")
                cell_of[v] = k
        if -1 in cell_of:
            raise PartitionError(f"vertex {cell_of.index(-1)} is in no cell")
        return cls(cells, tuple(cell_of))

    @classmethod
    def from_perms(cls, perms: Iterable[Sequence[int]], n: int) -> "OrbitPartition":
        from .perm import orbits_of
        return cls.from_cells(orbits_of(list(perms), n), n)

    @classmethod
    def singletons(cls, n: int) -> "OrbitPartition":
        return cls(tuple((v,) for v in range(n)), tuple(range(n)))

    def __len__(self) -> int:
        return len(self.cells)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]


def block_graph(graph: BipartiteGraph, partition: OrbitPartition) -> BipartiteGraph:
    """Quotient on the cells; two cells are adjacent when any edge joins them."""
    nu = graph.u_size
    u_cells, w_cells = [], []
    for k, cell in enumerate(partition.cells):
        sides = {v >= nu for v in cell}
        if len(sides) != 1:
            raise PartitionError(f"cell {k} straddles both parts")
        (w_cells if cell[0] >= nu else u_cells).append(k)
    u_pos = {k: i for i, k in enumerate(u_cells)}
    w_pos = {k: j for j, k in enumerate(w_cells)}
    rows: list[set[int]] = [set() for _ in u_cells]
    for i, row in enumerate(graph.adjacency):
        bi = u_pos[partition.cell_of[i]]
        for j in row:
            rows[bi].add(w_pos[partition.cell_of[nu + j]])
    return BipartiteGraph(tuple(partition.cells[k] for k in u_cells),
                          tuple(partition.cells[k] for k in w_cells),
                          tuple(tuple(sorted(r)) for r in rows))


def is_complete_bipartite(g: BipartiteGraph) -> bool:
    return all(len(r) == g.w_size for r in g.adjacency)


# ---------------------------------------------------------------------------
# formats
# ---------------------------------------------------------------------------

def canonical_edge_json(g: AnyGraph) -> bytes:
    """Sorted global edge list ``{"edges": [[i, j], ...], "n": N}`` with ``i < j``."""
    gg = as_graph(g)
    doc = {"n": gg.n, "edges": [list(e) for e in sorted(gg.edges())]}
    return json.dumps(doc, separators=(",", ":"), sort_keys=True).encode()


def graph_digest(g: AnyGraph) -> str:
    return hashlib.sha256(canonical_edge_json(g)).hexdigest()


def to_graph6(g: AnyGraph) -> str:
    return nx.to_graph6_bytes(as_graph(g).to_networkx(), header=False).decode().strip()


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    try:
        nxg = nx.from_graph6_bytes(text.encode())
    except (ValueError, nx.NetworkXError) as exc:
        raise FormatError(f"bad graph6 string: {exc}") from None
    return Graph.from_edges(nxg.number_of_nodes(), nxg.edges())


def bipartite_to_json(g: BipartiteGraph) -> dict:
    return {"u": g.u_size, "w": g.w_size, "edges": [list(e) for e in g.edges()]}


def bipartite_from_json(doc: dict) -> BipartiteGraph:
    try:
        return BipartiteGraph.from_edges(int(doc["u"]), int(doc["w"]), doc["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad bipartite edge list: {exc}") from None


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def split_bipartite(g: Graph) -> BipartiteGraph:
    """View a graph with known ``part`` as a BipartiteGraph (parts in vertex order)."""
    if g.part is None:
        colors = two_coloring(g.adj)
        if colors is None:
            raise PartitionError("graph is not bipartite")
    else:
        colors = list(g.part)
    us = [v for v in range(g.n) if colors[v] == 0]
    ws = [v for v in range(g.n) if colors[v] == 1]
    wpos = {v: j for j, v in enumerate(ws)}
    rows = []
    for v in us:
        if any(colors[x] == 0 for x in g.adj[v]):
            raise PartitionError("edge inside a part")
        rows.append(tuple(sorted(wpos[x] for x in g.adj[v])))
    return BipartiteGraph(tuple(us), tuple(ws), tuple(rows))


def write_graph(g: AnyGraph, path: str | Path) -> Path:
    """Write graph6 (plus a ``.json`` side channel with ``u_size``) or a JSON edge list."""
    path = Path(path)
    if path.suffix == ".json":
        doc = bipartite_to_json(g) if isinstance(g, BipartiteGraph) else graph_to_json(g)
        path.write_text(json.dumps(doc))
    else:
        path.write_text(to_graph6(g) + "\n")
        if isinstance(g, BipartiteGraph):
            path.with_suffix(path.suffix + ".json").write_text(json.dumps({"u_size": g.u_size}))
    return path


def read_graph(path: str | Path) -> AnyGraph:
    """Read a graph file; bipartite files come back as BipartiteGraph."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if "u" in doc and "w" in doc:
            return bipartite_from_json(doc)
        try:
            return Graph.from_edges(int(doc["n"]), doc["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: bad edge list: {exc}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise FormatError(f"{path}: expected one graph6 line, found {len(lines)}")
    g = from_graph6(lines[0])
    side = path.with_suffix(path.suffix + ".json")
    if side.exists():
        u_size = int(json.loads(side.read_text())["u_size"])
        part = tuple(0 if v < u_size else 1 for v in range(g.n))
        gg = Graph(g.adj, part)
        bg = split_bipartite(gg)
        if list(bg.u_labels) != list(range(u_size)):
            raise FormatError(f"{path}: side channel does not match the graph")
        return BipartiteGraph(tuple(range(u_size)), tuple(range(g.n - u_size)), bg.adjacency)
    return g
