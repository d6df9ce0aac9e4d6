"""Hamilton cycles: certificates, constructive lifts, a pruned solver and an orchestrator."""

from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .bicoset import BiCosetSpec, build, derived_graph, derived_vertex_perm, vertex_action_of
from .errors import (
    ConstructionFailed,
    DigestMismatchError,
    FormatError,
    MalformedInputError,
    NotApplicable,
    NotFoundError,
    PreconditionError,
    RegularityError,
)
from .graph import BipartiteGraph, Graph, OrbitPartition, block_graph, graph_digest, two_coloring
from .graph import is_complete_bipartite
from .numtheory import prime_factors
from .perm import DEFAULT_SEED, Perm, _mul, element_of_order

log = logging.getLogger(__name__)

AnyGraph = Graph | BipartiteGraph

DEFAULT_TIMEOUT = 60.0
DEFAULT_NODE_LIMIT = 10 ** 8
CHECK_EVERY = 32


def _graph(g: AnyGraph) -> Graph:
    return g.graph if isinstance(g, BipartiteGraph) else g


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class HamiltonCertificate:
    vertex_sequence: list[int]
    graph_digest: str
    method: str = ""
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {"graph_digest": self.graph_digest, "cycle": list(self.vertex_sequence),
                "method": self.method, "elapsed_ms": int(self.elapsed_ms)}

    @classmethod
    def from_json(cls, doc: dict | str | Path) -> "HamiltonCertificate":
        if isinstance(doc, Path):
            doc = doc.read_text()
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise FormatError(f"certificate: line {exc.lineno}: {exc.msg}") from None
        try:
            return cls([int(v) for v in doc["cycle"]], str(doc["graph_digest"]),
                       str(doc.get("method", "")), int(doc.get("elapsed_ms", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"certificate: {exc}") from None


def make_certificate(graph: AnyGraph, cycle: Sequence[int], method: str,
                     elapsed_ms: int = 0) -> HamiltonCertificate:
    """Wrap a cycle and refuse to return it unless it verifies."""
    cert = HamiltonCertificate(list(cycle), graph_digest(graph), method, elapsed_ms)
    if not verify(cert, graph):
        raise ConstructionFailed(f"{method}: produced sequence is not a Hamilton cycle")
    return cert


def verify(cert: HamiltonCertificate, graph: AnyGraph) -> bool:
    """True iff the sequence is a Hamilton cycle of ``graph``."""
    if cert.graph_digest != graph_digest(graph):
        raise DigestMismatchError("certificate digest does not match the graph")
    g = _graph(graph)
    seq = cert.vertex_sequence
    n = g.n
    if n < 3 or len(seq) != n:
        return False
    seen = bytearray(n)
    for v in seq:
        if not (0 <= v < n) or seen[v]:
            return False
        seen[v] = 1
    edges = g.edge_set
    prev = seq[-1]
    for v in seq:
        if ((prev, v) if prev < v else (v, prev)) not in edges:
            return False
        prev = v
    return True


# ---------------------------------------------------------------------------
# semiregular automorphisms and the block lift
# ---------------------------------------------------------------------------

@dataclass
class SemiregularAuto:
    perm: Perm
    order: int
    orbits: OrbitPartition

    @classmethod
    def from_perm(cls, perm: Sequence[int], p: int) -> "SemiregularAuto":
        perm = Perm(perm)
        if not (perm ** p).is_identity():
            raise PreconditionError(f"permutation does not have order dividing {p}")
        orbits = OrbitPartition.from_perms([perm], len(perm))
        if any(len(c) != p for c in orbits.cells):
            raise PreconditionError("permutation is not semiregular")
        return cls(perm, p, orbits)


def semiregular_from_spec(spec: BiCosetSpec, p: int, seed: int | None = None) -> SemiregularAuto:
    """Right multiplication by an order-``p`` element, on the derived graph of ``build(spec)``."""
    G, L, R = spec.group, spec.left, spec.right
    if G.order % p:
        raise PreconditionError(f"{p} does not divide |G| = {G.order}")
    if L.order % p == 0 or R.order % p == 0:
        raise PreconditionError(f"{p} divides |L| or |R|")
    t = element_of_order(G, p, seed=seed)
    X = build(spec)
    on_x = vertex_action_of(spec, t)
    auto = SemiregularAuto.from_perm(derived_vertex_perm(X, on_x), p)
    q = X.w_size // X.u_size
    nu = X.u_size * q
    u_orbits = sum(1 for c in auto.orbits.cells if c[0] < nu)
    if u_orbits != q or len(auto.orbits) != 2 * q:
        raise PreconditionError(f"expected {q} orbits per part, found {u_orbits} and "
                                f"{len(auto.orbits) - u_orbits}")
    return auto


def lift_via_blocks(graph: BipartiteGraph, auto: SemiregularAuto) -> HamiltonCertificate:
    """Thread one vertex per orbit, then concatenate the ``p`` translates of that path."""
    t0 = time.perf_counter()
    p = auto.order
    part = auto.orbits
    try:
        B = block_graph(graph, part)
    except Exception as exc:
        raise ConstructionFailed(f"block graph unavailable: {exc}") from None
    q = B.u_size
    if B.w_size != q or not is_complete_bipartite(B):
        raise ConstructionFailed("block graph is not complete bipartite on 2q vertices")
    g = graph.graph
    nu = graph.u_size
    u_blocks = [c for c in part.cells if c[0] < nu]
    w_blocks = [c for c in part.cells if c[0] >= nu]
    u_blocks.sort(key=min)
    w_blocks.sort(key=min)
    block_of = part.cell_of
    adj = g.adj
    perm = tuple(auto.perm)
    powers = [tuple(range(g.n))]
    for _ in range(p - 1):
        powers.append(_mul(powers[-1], perm))
    u0 = min(u_blocks[0])

    def closing_power(w_last: int) -> int | None:
        nb = set(adj[w_last])
        for m in range(1, p):
            if powers[m][u0] in nb:
                return m
        return None

    # depth-first threading: u0 w0 u1 w1 ... with every orbit used once
    used = {block_of[u0]}
    path = [u0]
    result: list[int] | None = None
    m_found = None
    stack = [iter(sorted(x for x in adj[u0] if block_of[x] not in used))]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            used.discard(block_of[path.pop()])
            continue
        if block_of[nxt] in used:
            continue
        path.append(nxt)
        used.add(block_of[nxt])
        if len(path) == 2 * q:
            m = closing_power(path[-1])
            if m is not None:
                result, m_found = list(path), m
                break
            used.discard(block_of[path.pop()])
            continue
        stack.append(iter(sorted(x for x in adj[nxt] if block_of[x] not in used)))
    if result is None:
        raise ConstructionFailed("no threading path closes under a power of the automorphism")
    d = powers[m_found]
    cycle: list[int] = []
    cur = result
    for _ in range(p):
        cycle.extend(cur)
        cur = [d[x] for x in cur]
    for cell in part.cells:
        assert sorted(v for v in cycle if block_of[v] == block_of[cell[0]]) == sorted(cell)
    return make_certificate(graph, cycle, "block-lift", int((time.perf_counter() - t0) * 1000))


# ---------------------------------------------------------------------------
# bi-Cayley constructions
# ---------------------------------------------------------------------------

@dataclass
class MetacyclicAction:
    """``R = <a> : <b>`` acting on the vertices; ``a`` has order ``p`` and ``b`` order ``q``."""

    a: Perm
    b: Perm
    p: int
    q: int

    @classmethod
    def from_spec(cls, spec: BiCosetSpec, t: Sequence[int], b: Sequence[int]) -> "MetacyclicAction":
        a_v, b_v = vertex_action_of(spec, t), vertex_action_of(spec, b)
        return cls(a_v, b_v, Perm(t).order(), Perm(b).order())


@dataclass
class BiCayleyFrame:
    """Normalized coordinates: vertex ``x^(b^i a^j)`` is ``U[i][j]`` or ``W[i][j]``."""

    u: int
    w: int
    action: MetacyclicAction
    S: list[tuple[int, int]]
    U: list[list[int]]
    W: list[list[int]]

    @property
    def p(self) -> int:
        return self.action.p

    @property
    def q(self) -> int:
        return self.action.q


def _coordinates(x: int, a: tuple, b: tuple, p: int, q: int) -> list[list[int]]:
    rows = []
    y = x
    for _ in range(q):
        row = []
        z = y
        for _ in range(p):
            row.append(z)
            z = a[z]
        rows.append(row)
        y = b[y]
    return rows


def _s_coords(graph: BipartiteGraph, u: int, W: list[list[int]]) -> list[tuple[int, int]]:
    where = {v: (i, j) for i, row in enumerate(W) for j, v in enumerate(row)}
    return sorted(where[x] for x in graph.graph.adj[u])


def bicayley_connection_set(graph: BipartiteGraph, action: MetacyclicAction, u: int, w: int,
                            relabel: int | None = None) -> BiCayleyFrame:
    """S with ``1 in S`` and ``b in S``; ``relabel`` picks which neighbour of ``u`` becomes ``w``.

    By default the neighbour of least label is used.  The new ``b`` is an element of
    S outside ``<a>``, preferring one whose ``<a>``-coset holds a second element of S.
    """
    p, q = action.p, action.q
    a, b = tuple(action.a), tuple(action.b)
    nu = graph.u_size
    n = graph.n
    if p * q != nu or graph.w_size != nu:
        raise RegularityError(f"|R| = {p * q} does not match the part sizes")
    if not (0 <= u < nu <= w < n):
        raise MalformedInputError("u must lie in U and w in W")
    U = _coordinates(u, a, b, p, q)
    W = _coordinates(w, a, b, p, q)
    if len({x for r in U for x in r}) != nu or len({x for r in W for x in r}) != nu:
        raise RegularityError("R is not regular on both parts")
    if any(x >= nu for r in U for x in r) or any(x < nu for r in W for x in r):
        raise RegularityError("R does not preserve the parts")
    nbrs = sorted(graph.graph.adj[u])
    w_new = nbrs[0] if relabel is None else relabel
    if w_new not in nbrs:
        raise MalformedInputError("relabel target is not a neighbour of u")
    W = _coordinates(w_new, a, b, p, q)
    S = _s_coords(graph, u, W)
    outside = [s for s in S if s[0] != 0]
    if not outside:
        raise RegularityError("S lies inside <a>: the graph is disconnected")
    by_coset: dict[int, int] = {}
    for i, _ in S:
        by_coset[i] = by_coset.get(i, 0) + 1
    paired = [s for s in outside if by_coset[s[0]] > 1]
    i0, j0 = min(paired or outside, key=lambda s: W[s[0]][s[1]])
    new_b = tuple(range(n))
    for _ in range(i0):
        new_b = _mul(new_b, b)
    for _ in range(j0):
        new_b = _mul(new_b, a)
    act = MetacyclicAction(action.a, Perm._raw(new_b), p, q)
    U = _coordinates(u, a, new_b, p, q)
    W = _coordinates(w_new, a, new_b, p, q)
    S = _s_coords(graph, u, W)
    assert (0, 0) in S and (1, 0) in S
    return BiCayleyFrame(u, w_new, act, S, U, W)


def bicayley_case1(graph: BipartiteGraph, frame: BiCayleyFrame) -> HamiltonCertificate:
    """Base path ``u, w^b, u^b, ..., u^(b^(q-1)), w`` translated by powers of ``a^-k``."""
    t0 = time.perf_counter()
    p, q, U, W = frame.p, frame.q, frame.U, frame.W
    ks = [j for i, j in frame.S if i == 0 and j != 0]
    if not ks or (1, 0) not in frame.S:
        raise NotApplicable("S meets <a> only in the identity")
    k = ks[0]
    cycle = []
    for h in range(p):
        shift = (-k * h) % p
        for i in range(q):
            cycle.append(U[i][shift])
            cycle.append(W[(i + 1) % q][shift])
    assert len(cycle) == 2 * p * q
    return make_certificate(graph, cycle, "bicayley-1", int((time.perf_counter() - t0) * 1000))


def bicayley_case2(graph: BipartiteGraph, frame: BiCayleyFrame) -> HamiltonCertificate:
    """Base path ``w^x, u^x, w^(bx), ...`` with ``x = b a^i``, translated by powers of ``a^i``."""
    t0 = time.perf_counter()
    p, q, U, W = frame.p, frame.q, frame.U, frame.W
    S = frame.S
    if any(i == 0 and j != 0 for i, j in S):
        raise NotApplicable("S meets <a> nontrivially; Case 1 applies")
    if (1, 0) not in S:
        raise NotApplicable("b is not in S")
    xs = [j for i, j in S if i == 1 and j != 0]
    if not xs:
        raise NotApplicable("no second element of S in the coset of b")
    ia = xs[0]
    cycle = []
    for h in range(p):
        for jb in range(q):
            # b^jb x a^(ia h) = b^(jb+1) a^(ia (h+1))
            e = (ia * (h + 1)) % p
            cycle.append(W[(jb + 1) % q][e])
            cycle.append(U[(jb + 1) % q][e])
    assert len(cycle) == 2 * p * q
    return make_certificate(graph, cycle, "bicayley-2", int((time.perf_counter() - t0) * 1000))


# ---------------------------------------------------------------------------
# generic solver
# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    status: str                     # "certificate" | "exhausted" | "timeout"
    certificate: HamiltonCertificate | None = None
    nodes: int = 0
    elapsed: float = 0.0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.certificate is not None


class _Limit(Exception):
    pass


class _Timeout(Exception):
    pass


class _EdgeSearch:
    """Edge-decision backtracking: every edge is forced, excluded or open.

    Propagation: a vertex with two usable edges forces both, a vertex with two
    forced edges excludes the rest, and an open edge joining the two ends of a
    forced path is excluded unless it would close the full cycle.
    """

    def __init__(self, adj: Sequence[Sequence[int]], rank: Sequence[int], check_every: int):
        self.n = n = len(adj)
        self.adj = adj
        self.rank = rank
        self.check_every = check_every
        edges = [(a, b) for a in range(n) for b in adj[a] if a < b]
        self.edges = edges
        self.eid = {e: i for i, e in enumerate(edges)}
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(edges):
            inc[a].append(i)
            inc[b].append(i)
        self.inc = inc
        self.state = [0] * len(edges)
        self.avail = [len(x) for x in inc]
        self.fdeg = [0] * n
        self.end = list(range(n))
        self.nforced = 0
        self.trail: list[tuple] = []

    def _edge(self, a: int, b: int) -> int | None:
        return self.eid.get((a, b) if a < b else (b, a))

    def exclude(self, e: int, queue: list[int]) -> bool:
        st = self.state[e]
        if st == -1:
            return True
        if st == 1:
            return False
        a, b = self.edges[e]
        self.state[e] = -1
        self.avail[a] -= 1
        self.avail[b] -= 1
        self.trail.append((0, e))
        queue.append(a)
        queue.append(b)
        return True

    def force(self, e: int, queue: list[int]) -> bool:
        st = self.state[e]
        if st == 1:
            return True
        if st == -1:
            return False
        a, b = self.edges[e]
        fdeg, end = self.fdeg, self.end
        if fdeg[a] == 2 or fdeg[b] == 2:
            return False
        ea, eb = end[a], end[b]
        closing = ea == b
        if closing and self.nforced + 1 != self.n:
            return False
        self.state[e] = 1
        fdeg[a] += 1
        fdeg[b] += 1
        self.nforced += 1
        self.trail.append((1, e, ea, end[ea], eb, end[eb]))
        if not closing:
            end[ea] = eb
            end[eb] = ea
            queue.append(ea)
            queue.append(eb)
        queue.append(a)
        queue.append(b)
        return True

    def undo(self, mark: int) -> None:
        trail = self.trail
        state, avail, fdeg, end, edges = self.state, self.avail, self.fdeg, self.end, self.edges
        while len(trail) > mark:
            rec = trail.pop()
            e = rec[1]
            a, b = edges[e]
            if rec[0] == 0:
                state[e] = 0
                avail[a] += 1
                avail[b] += 1
            else:
                state[e] = 0
                fdeg[a] -= 1
                fdeg[b] -= 1
                self.nforced -= 1
                _, _, ea, old_a, eb, old_b = rec
                end[eb] = old_b
                end[ea] = old_a

    def propagate(self, queue: list[int]) -> bool:
        state, avail, fdeg, inc, end = self.state, self.avail, self.fdeg, self.inc, self.end
        n = self.n
        while queue:
            v = queue.pop()
            if avail[v] < 2:
                return False
            if fdeg[v] == 2:
                if avail[v] > 2:
                    for e in inc[v]:
                        if state[e] == 0 and not self.exclude(e, queue):
                            return False
            elif avail[v] == 2:
                for e in inc[v]:
                    if state[e] == 0 and not self.force(e, queue):
                        return False
            if fdeg[v] == 1 and self.nforced < n - 1:
                w = end[v]
                if w != v:
                    e = self._edge(v, w)
                    if e is not None and state[e] == 0 and not self.exclude(e, queue):
                        return False
        return True

    def connected(self) -> bool:
        inc, state, edges = self.inc, self.state, self.edges
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for e in inc[v]:
                if state[e] != -1:
                    a, b = edges[e]
                    w = b if a == v else a
                    if not seen[w]:
                        seen[w] = 1
                        count += 1
                        stack.append(w)
        return count == self.n

    def choose(self) -> int | None:
        """An open edge at the undecided vertex with the fewest usable edges."""
        avail, fdeg, rank, state = self.avail, self.fdeg, self.rank, self.state
        best, key = None, None
        for v in range(self.n):
            if fdeg[v] == 2:
                continue
            k = (avail[v] - fdeg[v], -fdeg[v], rank[v])
            if key is None or k < key:
                best, key = v, k
        if best is None:
            return None
        opts = [e for e in self.inc[best] if state[e] == 0]
        if not opts:
            return None

        def other(e):
            a, b = self.edges[e]
            w = b if a == best else a
            return (avail[w] - fdeg[w], rank[w])

        return min(opts, key=other)

    def cycle(self) -> list[int]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for e, st in enumerate(self.state):
            if st == 1:
                a, b = self.edges[e]
                nbrs[a].append(b)
                nbrs[b].append(a)
        out = [0]
        prev, cur = -1, 0
        for _ in range(self.n - 1):
            x, y = nbrs[cur]
            nxt = x if x != prev else y
            out.append(nxt)
            prev, cur = cur, nxt
        return out

    def run(self, node_cap: int, deadline: float) -> tuple[list[int] | None, int]:
        """Complete search; raises _Limit/_Timeout when a budget runs out."""
        nodes = 0
        if not self.propagate(list(range(self.n))) or not self.connected():
            return None, nodes
        stack: list[list] = []      # [trail mark, edge, excluded-branch-tried]
        while True:
            if self.nforced == self.n:
                return self.cycle(), nodes
            e = self.choose()
            ok = False
            if e is not None:
                stack.append([len(self.trail), e, False])
                nodes += 1
                q: list[int] = []
                ok = self.force(e, q) and self.propagate(q)
            while True:
                if ok:
                    if nodes % self.check_every == 0:
                        ok = self.connected()
                    if ok:
                        break
                if nodes > node_cap:
                    raise _Limit(nodes)
                if nodes & 255 == 0 and time.monotonic() > deadline:
                    raise _Timeout(nodes)
                while stack and stack[-1][2]:
                    self.undo(stack.pop()[0])
                if not stack:
                    return None, nodes
                top = stack[-1]
                self.undo(top[0])
                top[2] = True
                nodes += 1
                q = []
                ok = self.exclude(top[1], q) and self.propagate(q)


def solve(graph: AnyGraph, time_limit: float = DEFAULT_TIMEOUT,
          node_limit: int = DEFAULT_NODE_LIMIT, seed: int = DEFAULT_SEED,
          check_every: int = CHECK_EVERY) -> SolveResult:
    """Backtracking Hamilton-cycle search with restarts under growing node caps.

    Later restarts break ties by a seeded random ranking instead of the label.

    A restart that finishes below its cap has searched the whole tree, so an
    empty result then proves the graph non-Hamiltonian.
    """
    t0 = time.perf_counter()
    deadline = time.monotonic() + time_limit
    g = _graph(graph)
    n = g.n
    adj = g.adj

    def done(status, cycle=None, nodes=0, reason=""):
        el = time.perf_counter() - t0
        cert = make_certificate(graph, cycle, "solver", int(el * 1000)) if cycle else None
        return SolveResult(status, cert, nodes, el, reason)

    if n < 3:
        return done("exhausted", reason="fewer than three vertices")
    if min(len(a) for a in adj) < 2:
        return done("exhausted", reason="a vertex of degree < 2")
    if not g.is_connected():
        return done("exhausted", reason="disconnected")
    colors = two_coloring(adj)
    if colors is not None and 2 * sum(colors) != n:
        return done("exhausted", reason="bipartite with unequal parts")
    rng = random.Random(seed)
    total = 0
    cap = max(10_000, 20 * n)
    rank = list(range(n))
    while True:
        budget = min(cap, node_limit - total)
        try:
            cycle, used = _EdgeSearch(adj, rank, check_every).run(budget, deadline)
        except _Limit as exc:
            total += exc.args[0]
            if total >= node_limit:
                return done("timeout", nodes=total, reason="node limit")
            cap *= 2
            rng.shuffle(rank)
            continue
        except _Timeout as exc:
            return done("timeout", nodes=total + exc.args[0], reason="time limit")
        total += used
        if cycle is None:
            return done("exhausted", nodes=total, reason="search tree exhausted")
        return done("certificate", cycle, total)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

@dataclass
class Report:
    status: str                     # "certificate" | "exhausted" | "unknown"
    method: str
    certificate: HamiltonCertificate | None
    graph: AnyGraph
    timings: dict = field(default_factory=dict)
    log: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "method": self.method,
                "timings_ms": {k: int(v * 1000) for k, v in self.timings.items()},
                "log": self.log, "n": _graph(self.graph).n,
                "certificate": self.certificate.to_json() if self.certificate else None}


def _bicayley_routes(spec: BiCosetSpec, X: BipartiteGraph, report: Report, seed: int) -> None:
    from .zoo import regular_metacyclic_in
    G = spec.group
    part = X.u_size
    if part != X.w_size:
        report.log.append("bi-Cayley: parts differ in size")
        return
    fs = prime_factors(part)
    if len(fs) != 2 or fs[0] * fs[1] != part:
        report.log.append("bi-Cayley: part size is not a product of two primes")
        return
    try:
        M = regular_metacyclic_in(G, part, spec.left, spec.right, seed=seed)
    except NotFoundError as exc:
        report.log.append(f"bi-Cayley: no regular metacyclic subgroup ({exc})")
        return
    t, b = M.generators
    action = MetacyclicAction.from_spec(spec, t, b)
    u, w = 0, X.u_size
    first = bicayley_connection_set(X, action, u, w)
    if len({i for i, _ in first.S}) == len(first.S):
        report.log.append("bi-Cayley: cover case (at most one neighbour per <a>-orbit)")
        return
    for relabel in sorted(X.graph.adj[u]):
        frame = bicayley_connection_set(X, action, u, w, relabel)
        for fn in (bicayley_case1, bicayley_case2):
            try:
                cert = fn(X, frame)
            except NotApplicable as exc:
                report.log.append(f"{fn.__name__} (w := {relabel}): not applicable: {exc}")
                continue
            report.certificate, report.method, report.status = cert, cert.method, "certificate"
            report.log.append(f"{fn.__name__} fired with w := {relabel}, |S| = {len(frame.S)}")
            return


def orchestrate(instance: BiCosetSpec | AnyGraph, use_solver: bool = True,
                time_limit: float = DEFAULT_TIMEOUT, node_limit: int = DEFAULT_NODE_LIMIT,
                seed: int = DEFAULT_SEED) -> Report:
    """Try the block lift, then the bi-Cayley cases, then the generic solver."""
    timings: dict[str, float] = {}
    t = time.perf_counter()
    if isinstance(instance, BiCosetSpec):
        spec = instance
        X = build(spec)
        timings["build"] = time.perf_counter() - t
        derive = bool(spec.meta.get("derive"))
        graph: AnyGraph = derived_graph(X) if derive else X
    else:
        spec, X, derive, graph = None, None, False, instance
    report = Report("unknown", "unknown", None, graph, timings)

    if derive:
        t = time.perf_counter()
        p = spec.meta.get("p") or X.u_size
        try:
            auto = semiregular_from_spec(spec, p, seed=seed)
            cert = lift_via_blocks(graph, auto)
            report.certificate, report.method, report.status = cert, "block-lift", "certificate"
            report.log.append(f"block-lift with p = {p}")
        except (PreconditionError, ConstructionFailed, NotFoundError) as exc:
            report.log.append(f"block-lift failed: {exc}")
        timings["block-lift"] = time.perf_counter() - t
    elif spec is not None:
        t = time.perf_counter()
        _bicayley_routes(spec, X, report, seed)
        timings["bicayley"] = time.perf_counter() - t

    if report.certificate is None:
        if not use_solver:
            report.log.append("solver disabled")
        else:
            t = time.perf_counter()
            res = solve(graph, time_limit, node_limit, seed)
            timings["solver"] = time.perf_counter() - t
            report.log.append(f"solver: {res.status} after {res.nodes} nodes ({res.reason})")
            if res.certificate is not None:
                report.certificate, report.method, report.status = res.certificate, "solver", \
                    "certificate"
            elif res.status == "exhausted":
                report.status = "exhausted"
                report.method = "solver"
    return report

