"""Bi-coset graphs ``B(G, L, R; D)``, derived graphs and their structural tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import ContainmentError, MalformedInputError, PartitionError, ShapeError, SpecError
from .graph import BipartiteGraph, OrbitPartition
from .numtheory import is_prime
from .perm import (
    CosetSpace,
    Perm,
    PermGroup,
    _inv,
    _mul,
    build_chain,
    orbits_of,
    pointwise_stabilizer_gens,
)


@dataclass(frozen=True, eq=False)
class BiCosetSpec:
    """The data ``(G, L, R, D)`` with ``D`` given by double-coset representatives."""

    group: PermGroup
    left: PermGroup
    right: PermGroup
    d_reps: tuple[Perm, ...]
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "d_reps", tuple(Perm(d) for d in self.d_reps))
        if not self.d_reps:
            raise SpecError("D must contain at least one double coset")
        G = self.group
        for d in self.d_reps:
            if d not in G:
                raise SpecError(f"double-coset representative {d!r} is not in G")
        for H, label in ((self.left, "L"), (self.right, "R")):
            if H.degree != G.degree or any(h not in G for h in H.generators):
                raise SpecError(f"{label} is not a subgroup of G")
        starts = [self.right_space.locate(d) for d in self.d_reps]
        orbit_of = self._l_orbit_ids
        ids = [orbit_of[s] for s in starts]
        if len(set(ids)) != len(ids):
            raise SpecError("double-coset representatives overlap")

    @cached_property
    def left_space(self) -> CosetSpace:
        return CosetSpace(self.group, self.left)

    @cached_property
    def right_space(self) -> CosetSpace:
        return CosetSpace(self.group, self.right)

    @cached_property
    def _l_action_on_right(self) -> list[Perm]:
        return self.right_space.action_of_group(self.left)

    @cached_property
    def _l_orbit_ids(self) -> list[int]:
        ids = [0] * self.right_space.index
        for k, orb in enumerate(orbits_of(self._l_action_on_right, self.right_space.index)):
            for x in orb:
                ids[x] = k
        return ids

    @property
    def order(self) -> int:
        """Vertex count of the bi-coset graph."""
        return self.group.order // self.left.order + self.group.order // self.right.order

    def d_size(self) -> int:
        """``|D|`` as a count of group elements."""
        return len(self.base_neighbors()) * self.right.order

    def base_neighbors(self) -> list[int]:
        """Indices in ``[G:R]`` of the cosets ``R d l`` adjacent to the coset ``L``."""
        acts = self._l_action_on_right
        out: set[int] = set()
        for d in self.d_reps:
            start = self.right_space.locate(d)
            if start in out:
                continue
            out.add(start)
            queue = [start]
            for x in queue:
                for a in acts:
                    y = a[x]
                    if y not in out:
                        out.add(y)
                        queue.append(y)
        return sorted(out)


def build(spec: BiCosetSpec) -> BipartiteGraph:
    """``Lg ~ Rdg`` for all ``g`` in ``G`` and ``d`` in ``D``."""
    ul, wr = spec.left_space, spec.right_space
    rows: list[tuple[int, ...] | None] = [None] * ul.index
    # neighborhoods travel along the coset spanning tree: N(Lgs) = N(Lg)s
    for c in ul.bfs_order:
        parent, k = ul.tree[c]
        if parent < 0:
            rows[c] = tuple(spec.base_neighbors())
        else:
            act = wr.action[k]
            rows[c] = tuple(sorted(act[x] for x in rows[parent]))
    return BipartiteGraph(tuple(ul.reps), tuple(wr.reps), tuple(rows))


def vertex_action(spec: BiCosetSpec) -> list[Perm]:
    """Right multiplication by each generator of G, on the global vertex set."""
    ul, wr = spec.left_space, spec.right_space
    nu = ul.index
    return [Perm._raw(tuple(a) + tuple(nu + x for x in b)) for a, b in zip(ul.action, wr.action)]


def vertex_action_of(spec: BiCosetSpec, g: Sequence[int]) -> Perm:
    ul, wr = spec.left_space, spec.right_space
    nu = ul.index
    return Perm._raw(tuple(ul.action_of(g)) + tuple(nu + x for x in wr.action_of(g)))


def is_edge_transitive(spec: BiCosetSpec) -> bool:
    return len(spec.d_reps) == 1


def dd_generators(spec: BiCosetSpec) -> list[tuple]:
    """Generators of the subgroup spanned by ``D^-1 D``."""
    ds = [tuple(d) for d in spec.d_reps]
    gens = [tuple(x) for x in spec.left.generators]
    for d in ds:
        di = _inv(d)
        for s in spec.right.generators:
            gens.append(_mul(_mul(di, tuple(s)), d))
    d0i = _inv(ds[0])
    for d in ds[1:]:
        gens.append(_mul(d0i, d))
    return gens


def is_connected_spec(spec: BiCosetSpec) -> bool:
    gens = dd_generators(spec)
    return build_chain(gens, spec.group.degree).order == spec.group.order


def conjugate_spec(spec: BiCosetSpec, a: Sequence[int], b: Sequence[int]) -> BiCosetSpec:
    """``B(G, L^a, R^b; U R^b (b^-1 d a) L^a)``."""
    a, b = Perm(a), Perm(b)
    if a not in spec.group or b not in spec.group:
        raise ContainmentError("conjugating elements must lie in G")
    new_d = [b.inverse() * d * a for d in spec.d_reps]
    return BiCosetSpec(spec.group, spec.left.conjugate(a), spec.right.conjugate(b), tuple(new_d),
                       name=spec.name, meta=dict(spec.meta))


def from_action(graph: BipartiteGraph, group: PermGroup, action: Sequence[Sequence[int]],
                u: int, w: int) -> BiCosetSpec:
    """Recover ``(G, G_u, G_w; D)`` from a part-preserving action on ``graph``.

    ``action[k]`` is the vertex permutation induced by ``group.generators[k]``;
    ``u`` and ``w`` are global vertex indices in U and W.
    """
    nu, n = graph.u_size, graph.n
    if len(action) != len(group.generators):
        raise MalformedInputError("need one vertex permutation per generator")
    if not (0 <= u < nu <= w < n):
        raise MalformedInputError("u must lie in U and w in W")
    adj = graph.graph.adj
    for a in action:
        if len(a) != n:
            raise MalformedInputError("vertex permutation has the wrong degree")
        if any((v < nu) != (a[v] < nu) for v in range(n)):
            raise PartitionError("the action does not preserve the parts")
        for v in range(nu):
            if tuple(sorted(a[x] for x in adj[v])) != adj[a[v]]:
                raise MalformedInputError("the action does not preserve adjacency")
    orbs = orbits_of(action, n)
    if len(orbs) != 2:
        part = "U" if len([o for o in orbs if o[0] < nu]) > 1 else "W"
        raise PartitionError(f"the action is not transitive on part {part}")
    m = group.degree
    combined = [tuple(g) + tuple(m + x for x in a) for g, a in zip(group.generators, action)]
    stab_u, _ = pointwise_stabilizer_gens(combined, m + n, [m + u], known_order=group.order,
                                          seed=group.seed)
    stab_w, chain_w = pointwise_stabilizer_gens(combined, m + n, [m + w],
                                                known_order=group.order, seed=group.seed)
    L = PermGroup([Perm._raw(g[:m]) for g in stab_u], m, name="G_u",
                  order=group.order // nu, seed=group.seed)
    R = PermGroup([Perm._raw(g[:m]) for g in stab_w], m, name="G_w",
                  order=group.order // (n - nu), seed=group.seed)
    # D is the union of R d L over L-orbits on N(u); w^d ranges over N(u)
    l_on_vertices = [g[m:] for g in stab_u]
    nbrs = adj[u]
    nbr_set = set(nbrs)
    seen: set[int] = set()
    d_reps = []
    trans = chain_w.levels[0].trans
    for x in nbrs:
        if x in seen:
            continue
        orb = {x}
        queue = [x]
        for y in queue:
            for g in l_on_vertices:
                z = g[y] - m
                if z not in orb:
                    orb.add(z)
                    queue.append(z)
        if not orb <= nbr_set:
            raise MalformedInputError("G_u does not preserve N(u)")
        seen |= orb
        d_reps.append(Perm._raw(trans[m + x][:m]))
    return BiCosetSpec(group, L, R, tuple(d_reps), name="from_action")


def derived_graph(X: BipartiteGraph) -> BipartiteGraph:
    """Replace every U-vertex by ``q`` copies ``(u, i)`` sharing its neighborhood."""
    p = X.u_size
    if not is_prime(p):
        raise ShapeError(f"|U| = {p} is not prime")
    if X.w_size % p:
        raise ShapeError(f"|W| = {X.w_size} is not a multiple of |U| = {p}")
    q = X.w_size // p
    if not is_prime(q) or q == p:
        raise ShapeError(f"|W|/|U| = {q} must be a prime different from {p}")
    u_labels = tuple((lab, i) for lab in X.u_labels for i in range(q))
    rows = tuple(row for row in X.adjacency for _ in range(q))
    out = BipartiteGraph(u_labels, X.w_labels, rows)
    du, dw = set(X.u_degrees()), set(X.w_degrees())
    if len(du) == 1 and len(dw) == 1 and du.pop() == q * dw.pop():
        assert len(set(out.u_degrees()) | set(out.w_degrees())) == 1
    return out


def derived_vertex_perm(X: BipartiteGraph, perm_x: Sequence[int]) -> Perm:
    """Extend a part-preserving permutation of X to the derived graph, fixing copy indices."""
    p, nu = X.u_size, X.u_size
    q = X.w_size // p
    out = []
    for u in range(p):
        for i in range(q):
            out.append(perm_x[u] * q + i)
    base = p * q
    out.extend(base + (perm_x[nu + j] - nu) for j in range(X.w_size))
    return Perm(out)


def orbit_partition(perms: Sequence[Sequence[int]], n: int) -> OrbitPartition:
    return OrbitPartition.from_perms(perms, n)
