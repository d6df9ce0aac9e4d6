"""Concrete groups, subgroups and graph families used by the tables and the census."""

from __future__ import annotations

import hashlib
import json
import logging
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from .bicoset import BiCosetSpec, is_connected_spec
from .errors import (
    ContainmentError,
    FormatError,
    GatedError,
    MalformedInputError,
    NotFoundError,
    RecipeError,
    SpecError,
)
from .graph import BipartiteGraph, Graph, read_graph, split_bipartite, two_coloring
from .numtheory import is_prime, is_square_mod, mult_order, primitive_root, prime_factors
from .perm import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    CosetSpace,
    Perm,
    PermGroup,
    _inv,
    _mul,
    _order,
    build_chain,
    double_cosets,
    element_of_order,
    normalizer_search,
    pointwise_stabilizer_gens,
)

log = logging.getLogger(__name__)

FAMILIES = ("psl2", "pgl2", "sym", "metacyclic", "from_file")
KINDS = ("A4", "S4", "A5", "dihedral", "point_stabilizer", "pair_stabilizer", "borel",
         "custom_generators")


def derive_seed(seed: int, *labels) -> int:
    """An independent 64-bit stream seed for one instance."""
    text = repr((seed,) + labels).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")


def data_path(name: str) -> Path:
    return Path(str(resources.files("hamsym") / "data" / name))


# searched before the bundled data directory when a group file is not found as given
GROUP_DIRS: list[Path] = []


# ---------------------------------------------------------------------------
# group recipes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupRecipe:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise RecipeError(f"unknown group family {self.family!r}")
        object.__setattr__(self, "params", tuple(self.params))
        f, ps = self.family, self.params
        if f in ("psl2", "pgl2"):
            if len(ps) != 1 or not isinstance(ps[0], int) or ps[0] < 3 or not is_prime(ps[0]):
                raise RecipeError(f"{f} needs one odd prime, got {ps}")
        elif f == "sym":
            if len(ps) != 1 or not isinstance(ps[0], int) or ps[0] < 1:
                raise RecipeError(f"sym needs a positive degree, got {ps}")
        elif f == "metacyclic":
            if len(ps) != 4:
                raise RecipeError("metacyclic needs (p, q, k, r)")
            p, q, k, r = ps
            if not is_prime(p):
                raise RecipeError(f"p = {p} is not prime")
            if k < 2 or (p - 1) % (q * k):
                raise RecipeError(f"need k >= 2 and qk | p-1, got q={q} k={k} p={p}")
            if r % p == 0 or mult_order(r, p) != q * k:
                raise RecipeError(f"r = {r} does not have order qk = {q * k} mod {p}")
        elif f == "from_file":
            if len(ps) != 1:
                raise RecipeError("from_file needs a path")

    @property
    def label(self) -> str:
        f, ps = self.family, self.params
        if f == "psl2":
            return f"PSL(2,{ps[0]})"
        if f == "pgl2":
            return f"PGL(2,{ps[0]})"
        if f == "sym":
            return f"S{ps[0]}"
        if f == "metacyclic":
            p, q, k, _ = ps
            return f"Z{p}:Z{q * k}"
        return Path(ps[0]).stem


def psl2(p: int) -> GroupRecipe:
    return GroupRecipe("psl2", (p,))


def pgl2(p: int) -> GroupRecipe:
    return GroupRecipe("pgl2", (p,))


def mobius(a: int, b: int, c: int, d: int, p: int) -> Perm:
    """``x -> (ax + b)/(cx + d)`` on the projective line; point 0 is infinity, x+1 is x."""
    if (a * d - b * c) % p == 0:
        raise RecipeError("singular fractional-linear map")
    img = [0] * (p + 1)
    img[0] = 1 + a * pow(c, -1, p) % p if c % p else 0
    for x in range(p):
        den = (c * x + d) % p
        img[x + 1] = 0 if den == 0 else 1 + (a * x + b) * pow(den, -1, p) % p
    return Perm(img)


def outer_involution(p: int) -> Perm:
    """``x -> nu/x`` with ``-nu`` a non-square: an involution of PGL(2,p) outside PSL(2,p)."""
    nu = next(v for v in range(1, p) if not is_square_mod(-v % p, p))
    return mobius(0, nu, 1, 0, p)


def realize(recipe: GroupRecipe, seed: int = DEFAULT_SEED) -> PermGroup:
    f, ps = recipe.family, recipe.params
    if f in ("psl2", "pgl2"):
        p = ps[0]
        gens = [mobius(1, 1, 0, 1, p), mobius(0, p - 1, 1, 0, p)]
        order = p * (p * p - 1) // 2
        if f == "pgl2":
            gens.append(mobius(primitive_root(p), 0, 0, 1, p))
            order *= 2
        G = PermGroup(gens, p + 1, name=recipe.label, seed=seed)
        if G.order != order:
            raise RecipeError(f"{recipe.label} realized with order {G.order}, expected {order}")
        return G
    if f == "sym":
        n = ps[0]
        if n == 1:
            return PermGroup([], 1, name="S1", seed=seed)
        gens = [Perm.from_cycles(n, [tuple(range(n))]), Perm.from_cycles(n, [(0, 1)])]
        return PermGroup(gens, n, name=recipe.label, seed=seed)
    if f == "metacyclic":
        p, q, k, r = ps
        gens = [Perm([(x + 1) % p for x in range(p)]), Perm([(r * x) % p for x in range(p)])]
        G = PermGroup(gens, p, name=recipe.label, seed=seed)
        if G.order != p * q * k:
            raise RecipeError(f"metacyclic group has order {G.order}, expected {p * q * k}")
        return G
    return load_group_file(ps[0], seed=seed)


def load_group_file(path: str | Path, parent: PermGroup | None = None,
                    seed: int = DEFAULT_SEED) -> PermGroup:
    """Read the group JSON format; ``parent_check`` forces membership in ``parent``."""
    path = Path(path)
    if not path.exists():
        candidates = [d / path.name for d in GROUP_DIRS] + [data_path(path.name)]
        found = next((c for c in candidates if c.exists()), None)
        if found is None:
            raise FormatError(f"{path}: no such group file")
        path = found
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        G = PermGroup.from_json(doc, source=str(path))
    except MalformedInputError as exc:
        raise FormatError(str(exc)) from None
    G = PermGroup(G.generators, G.degree, name=G.name or path.stem, order=doc.get("order"),
                  seed=seed)
    if doc.get("parent_check"):
        if parent is None:
            raise FormatError(f"{path}: parent_check set but no parent group supplied")
        for g in G.generators:
            if g not in parent:
                raise ContainmentError(f"{path}: generator {g!r} is not in {parent.name}")
    if "order" in doc:
        try:
            ok = G.chain.order == doc["order"]
        except MalformedInputError:
            ok = False
        if not ok:
            raise FormatError(f"{path}: declared order {doc['order']} is wrong")
    return G


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupDescriptor:
    """What to look for: an isomorphism type, a stabilizer, or explicit generators.

    ``n`` is the dihedral order ``2n``'s half (or the complement order for
    ``borel``); ``points`` feeds the stabilizer kinds; ``generators`` holds
    images lists or a path for ``custom_generators``.  ``class_selector="sigma"``
    conjugates the located subgroup by an outer involution.
    """

    kind: str
    n: int | None = None
    points: tuple = ()
    generators: tuple | str = ()
    class_selector: str | None = None
    order: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInputError(f"unknown subgroup kind {self.kind!r}")
        if self.kind in ("dihedral", "borel") and not self.n:
            raise MalformedInputError(f"{self.kind} needs n")

    @property
    def label(self) -> str:
        base = {"dihedral": f"D{2 * (self.n or 0)}"}.get(self.kind, self.kind)
        return base + ("^s" if self.class_selector == "sigma" else "")


_FINGERPRINT = {"A4": ({1, 2, 3}, 12), "S4": ({1, 2, 3, 4}, 24), "A5": ({1, 2, 3, 5}, 60)}
_PRODUCT_ORDER = {"A4": 3, "S4": 4, "A5": 5}


def _divisors(n: int) -> set[int]:
    return {d for d in range(1, n + 1) if n % d == 0}


def fingerprint_ok(H: PermGroup, kind: str, n: int | None = None) -> bool:
    """Compare the set of element orders with the advertised type."""
    if kind in _FINGERPRINT:
        orders, size = _FINGERPRINT[kind]
    elif kind == "dihedral":
        orders, size = {2} | _divisors(n), 2 * n
    else:
        return True
    return H.order == size and set(H.element_order_census()) == orders


def _power_to(g: tuple, k: int) -> tuple | None:
    m = _order(g)
    if m % k:
        return None
    e = g
    r = m // k
    out = tuple(range(len(g)))
    while r:
        if r & 1:
            out = _mul(out, e)
        e = _mul(e, e)
        r >>= 1
    return out


def _polyhedral(G: PermGroup, kind: str, budget: int, seed: int) -> PermGroup:
    """``<x, y>`` with ``|x| = 2``, ``|y| = 3``, ``|xy| = 3, 4, 5`` for A4, S4, A5."""
    want = _PRODUCT_ORDER[kind]
    size = _FINGERPRINT[kind][1]
    src = G.random_elements(seed)
    for _ in range(budget):
        x = _power_to(tuple(next(src)), 2)
        if x is None:
            continue
        y = _power_to(tuple(next(src)), 3)
        if y is None or _order(_mul(x, y)) != want:
            continue
        H = G.subgroup([Perm._raw(x), Perm._raw(y)], name=kind, check=False)
        if build_chain(H.generators, H.degree).order == size:
            return PermGroup(H.generators, H.degree, name=kind, order=size, seed=G.seed)
    raise NotFoundError(f"no {kind} found in {budget} draws")


def _dihedral(G: PermGroup, n: int, budget: int, seed: int) -> PermGroup:
    c = tuple(element_of_order(G, n, budget, seed))
    ci = _inv(c)
    src = G.random_elements(derive_seed(seed, "inv"))
    for _ in range(budget):
        s = _power_to(tuple(next(src)), 2)
        if s is None or s == c or _mul(_mul(s, c), s) != ci:
            continue
        H = PermGroup([Perm._raw(c), Perm._raw(s)], G.degree, name=f"D{2 * n}", seed=G.seed)
        if H.order == 2 * n:
            return H
    raise NotFoundError(f"no involution inverting an element of order {n} in {budget} draws")


def _borel(G: PermGroup, n: int, budget: int, seed: int) -> PermGroup:
    p = max(prime_factors(G.order))
    t = element_of_order(G, p, budget, seed)
    b = normalizer_search(G, t, n, budget, derive_seed(seed, "borel"))
    return PermGroup([t, b], G.degree, name=f"{p}:{n}", seed=G.seed)


def pair_stabilizer(G: PermGroup, a: int, b: int) -> PermGroup:
    """Setwise stabilizer of ``{a, b}``."""
    stab, chain = pointwise_stabilizer_gens(G.generators, G.degree, [a, b], G.order, G.seed)
    fix_order = G.order // (len(chain.levels[0].trans) * len(chain.levels[1].trans))
    gens = [Perm._raw(g) for g in stab]
    u1 = chain.levels[0].trans.get(b)
    order = fix_order
    if u1 is not None:
        # g = v * u1 with v in G_a sending b to u1^-1(a) swaps a and b
        y = _inv(u1)[a]
        v = chain.levels[1].trans.get(y)
        if v is not None:
            gens.append(Perm._raw(_mul(v, u1)))
            order *= 2
    return PermGroup(gens, G.degree, name=f"G_{{{a},{b}}}", order=order, seed=G.seed)


def are_conjugate_in(G: PermGroup, H: PermGroup, K: PermGroup,
                     space: CosetSpace | None = None) -> bool:
    """``K = H^g`` for some ``g`` in ``G`` iff ``K`` fixes a coset of ``H``."""
    if H.order != K.order:
        return False
    space = space or CosetSpace(G, H)
    acts = space.action_of_group(K)
    return any(all(a[x] == x for a in acts) for x in range(space.index))


def find_subgroup(G: PermGroup, desc: SubgroupDescriptor, budget: int = DEFAULT_BUDGET,
                  seed: int | None = None, outer: Sequence[int] | None = None,
                  parent: PermGroup | None = None) -> PermGroup:
    """Locate a subgroup of ``G`` matching ``desc``.

    ``outer`` is the twisting involution for ``class_selector="sigma"``; for
    projective groups it defaults to :func:`outer_involution`.
    """
    seed = G.seed if seed is None else seed
    k = desc.kind
    if k in _PRODUCT_ORDER:
        H = _polyhedral(G, k, budget, seed)
    elif k == "dihedral":
        H = _dihedral(G, desc.n, budget, seed)
    elif k == "borel":
        H = _borel(G, desc.n, budget, seed)
    elif k == "point_stabilizer":
        H = G.stabilizer(desc.points[0])
    elif k == "pair_stabilizer":
        H = pair_stabilizer(G, *desc.points[:2])
    else:
        gens = desc.generators
        if isinstance(gens, (str, Path)):
            H = load_group_file(gens, parent=G, seed=G.seed)
        else:
            H = G.subgroup([Perm(g) for g in gens], order=desc.order)
    if desc.order is not None and H.order != desc.order:
        raise NotFoundError(f"{desc.label}: located order {H.order}, expected {desc.order}")
    if not fingerprint_ok(H, k, desc.n):
        raise NotFoundError(f"{desc.label}: element-order fingerprint does not match")
    H.name = desc.label
    if desc.class_selector == "sigma":
        if outer is None:
            outer = outer_involution(G.degree - 1)
        outer = Perm(outer)
        Hs = H.conjugate(outer, name=desc.label)
        if any(g not in G for g in Hs.generators):
            raise ContainmentError("twisted subgroup escapes G")
        if are_conjugate_in(G, H, Hs):
            raise NotFoundError(f"{desc.label}: the twisted subgroup is conjugate in G")
        return Hs
    return H


def regular_metacyclic_in(G: PermGroup, part_size: int, left: PermGroup | None = None,
                          right: PermGroup | None = None, budget: int = DEFAULT_BUDGET,
                          seed: int | None = None) -> PermGroup:
    """``<t, b>`` of order ``pq`` acting regularly on ``[G:L]`` and ``[G:R]`` when given."""
    seed = G.seed if seed is None else seed
    fs = prime_factors(part_size)
    if len(fs) != 2 or fs[0] * fs[1] != part_size:
        raise MalformedInputError(f"part size {part_size} is not a product of two distinct primes")
    q, p = fs
    if (p - 1) % q:
        raise NotFoundError(f"{q} does not divide {p - 1}: no nonabelian group of order {part_size}")
    t = element_of_order(G, p, budget, seed)
    b = normalizer_search(G, t, q, budget, derive_seed(seed, "meta"))
    M = PermGroup([t, b], G.degree, name=f"{p}:{q}", seed=G.seed)
    if M.order != part_size:
        raise NotFoundError(f"<t, b> has order {M.order}, not {part_size}")
    for H in (left, right):
        if H is None:
            continue
        if G.order // H.order != part_size:
            raise MalformedInputError("part size does not match the coset space")
        # |M| equals the index, so transitivity already forces regularity
        space = CosetSpace(G, H)
        orbit = {0}
        queue = [0]
        acts = space.action_of_group(M)
        for x in queue:
            for a in acts:
                if a[x] not in orbit:
                    orbit.add(a[x])
                    queue.append(a[x])
        if len(orbit) != space.index:
            raise NotFoundError(f"{M.name} is not transitive on [G:{H.name}]")
    return M


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def _s(kind, **kw) -> SubgroupDescriptor:
    return SubgroupDescriptor(kind, **kw)


@dataclass(frozen=True)
class TableRow:
    table: int
    row: int
    group: GroupRecipe
    left: SubgroupDescriptor
    right: SubgroupDescriptor
    pq: tuple[int, int]
    valencies: tuple[int, ...]
    numbers: tuple[int, ...]
    heavy: bool = False


def _t1(row, recipe, left, right, pq, vals, nums, heavy=False) -> TableRow:
    return TableRow(1, row, recipe, left, right, pq, vals, nums, heavy)


_A5, _S4, _A4 = _s("A5"), _s("S4"), _s("A4")
_A5s, _S4s = _s("A5", class_selector="sigma"), _s("S4", class_selector="sigma")

TABLE1: dict[int, TableRow] = {r.row: r for r in [
    _t1(1, psl2(59), _A5, _A5, (59, 29), (60,), (4,), True),
    _t1(2, psl2(61), _A5, _A5, (61, 31), (60,), (4,), True),
    _t1(3, psl2(23), _S4, _S4, (23, 11), (12, 24), (1, 1)),
    _t1(4, psl2(59), _A5, _A5s, (59, 29), (60,), (4,), True),
    _t1(5, psl2(61), _A5, _A5s, (61, 31), (60,), (5,), True),
    _t1(6, psl2(23), _S4, _S4s, (23, 11), (12, 24), (1, 1)),
    _t1(7, pgl2(11), _S4, _s("dihedral", n=12), (11, 5), (3, 4, 12, 24), (1, 1, 2, 1)),
    _t1(8, psl2(13), _A4, _s("dihedral", n=6), (13, 7), (6, 12), (1, 2)),
    _t1(9, pgl2(13), _S4, _s("dihedral", n=12), (13, 7), (3, 4, 12, 24), (1, 1, 3, 2)),
    _t1(10, psl2(59), _A5, _s("dihedral", n=30), (59, 29), (6, 10, 15, 30, 60),
        (1, 1, 1, 12, 22), True),
    _t1(11, psl2(61), _A5, _s("dihedral", n=30), (61, 31), (6, 10, 15, 30, 60),
        (1, 1, 1, 12, 25), True),
    _t1(12, psl2(23), _S4, _s("dihedral", n=12), (23, 11), (3, 4, 6, 12, 24),
        (1, 1, 1, 6, 7)),
    _t1(13, GroupRecipe("from_file", ("m23.json",)),
        _s("custom_generators", generators="m23_pair_stabilizer.json"),
        _s("custom_generators", generators="m23_heptad_stabilizer.json"),
        (23, 11), (21, 112, 120), (1, 1, 1), True),
]}

# rows whose regular subgroup is metacyclic (bi-Cayley), and those which are not
BI_CAYLEY_ROWS = (1, 3, 4, 6, 7, 10, 12, 13)
NOT_BI_CAYLEY_ROWS = (2, 5, 8, 9, 11)


def table2_row(row: int, p: int | None = None, q: int | None = None,
               k: int | None = None) -> TableRow:
    """Table 2 rows; row 2 is parametrized by ``p`` and row 6 by ``(p, q, k)``."""
    if row == 1:
        return TableRow(2, 1, GroupRecipe("sym", (7,)), _s("point_stabilizer", points=(0,)),
                        _s("custom_generators", generators=_s3xs4(), order=144),
                        (7, 5), (15, 20), (1, 1))
    if row == 2:
        p = 5 if p is None else p
        if p < 5 or not is_prime(p) or not is_prime((p - 1) // 2):
            raise SpecError(f"row 2 needs primes p >= 5 and (p-1)/2, got p = {p}")
        return TableRow(2, 2, GroupRecipe("sym", (p,)), _s("point_stabilizer", points=(0,)),
                        _s("pair_stabilizer", points=(0, 1)), (p, (p - 1) // 2),
                        (p - 1, (p * p - 3 * p + 2) // 2), (1, 1))
    if row == 3:
        return TableRow(2, 3, GroupRecipe("from_file", ("psl52.json",)),
                        _s("custom_generators", generators="psl52_point_stabilizer.json"),
                        _s("custom_generators", generators="psl52_line_stabilizer.json"),
                        (31, 5), (15, 140), (1, 1), True)
    if row == 4:
        return TableRow(2, 4, psl2(11), _A5, _s("dihedral", n=6), (11, 5), (10, 15, 30),
                        (1, 1, 1))
    if row == 5:
        return TableRow(2, 5, psl2(11), _A5, _A4, (11, 5), (20, 30), (1, 1))
    if row == 6:
        p, q, k = (13, 2, 2) if p is None else (p, q, k)
        if not (is_prime(p) and is_prime(q) and k >= 2 and (p - 1) % (q * k) == 0
                and q < (p - 1) / 2):
            raise SpecError(f"row 6 needs qk | p-1, k >= 2, q < (p-1)/2; got {(p, q, k)}")
        r = next(x for x in range(2, p) if mult_order(x, p) == q * k)
        rq = pow(r, q, p)
        return TableRow(2, 6, GroupRecipe("metacyclic", (p, q, k, r)),
                        _s("custom_generators", generators=(tuple((r * x) % p for x in range(p)),),
                           order=q * k),
                        _s("custom_generators", generators=(tuple((rq * x) % p for x in range(p)),),
                           order=k),
                        (p, q), (q * k,), (1,))
    raise SpecError(f"Table 2 has no row {row}")


def _s3xs4() -> tuple:
    n = 7
    cyc = [[(0, 1)], [(0, 1, 2)], [(3, 4)], [(3, 4, 5, 6)]]
    return tuple(tuple(Perm.from_cycles(n, c)) for c in cyc)


def table_row(table: int, row: int, **params) -> TableRow:
    if table == 1:
        if row not in TABLE1:
            raise SpecError(f"Table 1 has no row {row}")
        return TABLE1[row]
    if table == 2:
        return table2_row(row, **params)
    raise SpecError(f"no table {table}")


@lru_cache(maxsize=64)
def _realize_row(row: TableRow, seed: int) -> tuple[PermGroup, PermGroup, PermGroup]:
    G = realize(row.group, seed=derive_seed(seed, row.table, row.row, "G"))
    L = find_subgroup(G, row.left, seed=derive_seed(seed, row.table, row.row, "L"))
    R = find_subgroup(G, row.right, seed=derive_seed(seed, row.table, row.row, "R"))
    if row.table == 1 and L.order != R.order:
        raise SpecError(f"Table 1 row {row.row}: |L| != |R|")
    return G, L, R


def row_groups(row: TableRow, seed: int = DEFAULT_SEED, allow_heavy: bool = False
               ) -> tuple[PermGroup, PermGroup, PermGroup]:
    if row.heavy and not allow_heavy:
        raise GatedError(f"Table {row.table} row {row.row} is heavy; enable allow_heavy")
    return _realize_row(row, seed)


@dataclass
class Candidate:
    """One double coset ``R d L`` of a table row, with its valency."""

    valency: int
    spec: BiCosetSpec
    connected: bool


def row_candidates(row: TableRow, seed: int = DEFAULT_SEED, allow_heavy: bool = False
                   ) -> list[Candidate]:
    """Every double coset of the row as a one-orbit spec, in canonical order."""
    G, L, R = row_groups(row, seed, allow_heavy)
    meta = {"table": row.table, "row": row.row, "p": row.pq[0], "q": row.pq[1]}
    if row.table == 2:
        meta["derive"] = True
    out = []
    for dc in double_cosets(G, R, L):
        spec = BiCosetSpec(G, L, R, (dc.rep,), name=f"T{row.table}R{row.row}v{dc.right_cosets}",
                           meta=dict(meta, valency=dc.right_cosets))
        out.append(Candidate(dc.right_cosets, spec, is_connected_spec(spec)))
    return out


def table_instance(table: int, row: int, valency: int | None = None, index: int = 0, *,
                   allow_heavy: bool = False, seed: int = DEFAULT_SEED, **params) -> BiCosetSpec:
    """The ``index``-th connected double coset of the row with the requested valency.

    For Table 2 the valency is the degree of a U-vertex and ``spec.meta["derive"]``
    is set: the graph of interest is the derived graph of ``build(spec)``.
    """
    r = table_row(table, row, **params)
    cands = [c for c in row_candidates(r, seed, allow_heavy) if c.connected]
    if valency is None:
        valency = r.valencies[0]
    hits = [c for c in cands if c.valency == valency]
    if not hits:
        have = sorted({c.valency for c in cands})
        raise NotFoundError(f"Table {table} row {row}: no connected double coset of valency "
                            f"{valency}; achievable: {have}")
    if index >= len(hits):
        raise NotFoundError(f"only {len(hits)} double cosets of valency {valency}")
    return hits[index].spec


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

@dataclass
class CensusGraph:
    graph: Graph
    order: int
    valency: int | None
    bipartite: BipartiteGraph | None
    name: str = ""
    meta: dict = field(default_factory=dict)


def load_census_graph(path: str | Path) -> CensusGraph:
    """Read a graph6 or JSON census file and recover its bipartition."""
    path = Path(path)
    g = read_graph(path)
    if isinstance(g, BipartiteGraph):
        bip = g
        g = g.graph
    else:
        colors = two_coloring(g.adj)
        if colors is None:
            warnings.warn(f"{path.name}: graph is not bipartite; treating it as a general graph",
                          stacklevel=2)
            bip = None
        else:
            g = Graph(g.adj, tuple(colors))
            bip = split_bipartite(g)
    degs = set(g.degrees())
    valency = degs.pop() if len(degs) == 1 else None
    return CensusGraph(g, g.n, valency, bip, name=path.stem)


def load_census_dir(directory: str | Path) -> tuple[list[CensusGraph], dict]:
    """All ``ss-<order>-<index>.g6`` files plus the manifest (if any)."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    manifest = json.loads(manifest_path.read_text()) if manifest_path.exists() else {}
    graphs = []
    for f in sorted(directory.glob("ss-*.g6"), key=lambda f: _census_key(f.name)):
        entry = load_census_graph(f)
        info = next((e for e in manifest.get("graphs", []) if e.get("file") == f.name), {})
        entry.meta = info
        if info and (info.get("order") != entry.order or info.get("valency") != entry.valency):
            raise FormatError(f"{f.name}: manifest order/valency disagree with the file")
        graphs.append(entry)
    return graphs, manifest


def _census_key(name: str) -> tuple:
    parts = name.split(".")[0].split("-")
    try:
        return (int(parts[1]), int(parts[2]))
    except (IndexError, ValueError):
        return (1 << 30, 0)


def grid_line_graph() -> Graph:
    """Points of the 3x3x3 grid versus its axis-parallel lines (cubic, 54 vertices)."""
    pts = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    idx = {p: i for i, p in enumerate(pts)}
    edges = []
    line = 27
    for axis in range(3):
        for s in range(3):
            for t in range(3):
                for x in range(3):
                    coord = [s, t]
                    coord.insert(axis, x)
                    edges.append((idx[tuple(coord)], line))
                line += 1
    return Graph.from_edges(54, edges)


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    edges = {(i, (i + 1) % n) for i in range(n)}
    seq = list(shifts) * repeats
    for i, s in enumerate(seq):
        edges.add((i, (i + s) % n))
    return Graph.from_edges(n, [tuple(sorted(e)) for e in edges])


TUTTE_12_CAGE_LCF = ([17, 27, -13, -59, -35, 35, -11, 13, -53, 53, -27, 21, 57, 11, -21, -57,
                      59, -17], 7)
LJUBLJANA_LCF = ([47, -23, -31, 39, 25, -21, -31, -41, 25, 15, 29, -41, -19, 15, -49, 33, 39,
                  -35, -21, 17, -33, 49, 41, 31, -15, -29, 41, 31, -15, -25, 21, 31, -51, -25,
                  23, 9, -17, 51, 35, -29, 21, -51, -39, 33, -9, -51, 51, -47, -33, 19, 51, -21,
                  29, 21, -31, -39], 2)


def census_dir() -> Path:
    return data_path("census")


@dataclass
class RowClass:
    """One isomorphism class of semisymmetric graphs realized by a table row."""

    valency: int
    spec: BiCosetSpec
    aut_order: int


def row_graph(spec: BiCosetSpec) -> BipartiteGraph:
    from .bicoset import build, derived_graph

    X = build(spec)
    return derived_graph(X) if spec.meta.get("derive") else X


def row_census(row: TableRow, seed: int = DEFAULT_SEED, allow_heavy: bool = False,
               limit: int = 1000) -> dict[int, list[RowClass]]:
    """Connected semisymmetric graphs of the row whose full group has order ``|G|``.

    Graphs with a larger automorphism group belong to an overgroup's row and are
    left out; what remains is grouped into isomorphism classes by canonical form.
    """
    from .autiso import automorphism_group, is_semisymmetric

    G, _, _ = row_groups(row, seed, allow_heavy)
    out: dict[int, list[RowClass]] = {}
    forms: dict[int, set] = {}
    for cand in row_candidates(row, seed, allow_heavy):
        if not cand.connected:
            continue
        g = row_graph(cand.spec)
        if not is_semisymmetric(g, limit=limit):
            continue
        aut = automorphism_group(g, limit=limit)
        if aut.group_order != G.order:
            continue
        seen = forms.setdefault(cand.valency, set())
        if aut.canonical_form in seen:
            continue
        seen.add(aut.canonical_form)
        out.setdefault(cand.valency, []).append(RowClass(cand.valency, cand.spec,
                                                         aut.group_order))
    return dict(sorted(out.items()))


CENSUS_SOURCES = {
    54: "3x3x3 grid points versus lines",
    110: "Table 1 row 7, valency 3",
    112: "LCF notation",
    126: "LCF notation",
    182: "Table 1 row 9, valency 3",
    506: "Table 1 row 12, valency 3",
}


def census_fixture_graphs(seed: int = DEFAULT_SEED) -> dict[int, Graph]:
    """The cubic semisymmetric graphs this package can produce on its own."""
    out = {54: grid_line_graph(),
           112: lcf_graph(112, *LJUBLJANA_LCF),
           126: lcf_graph(126, *TUTTE_12_CAGE_LCF)}
    for order, row in ((110, 7), (182, 9), (506, 12)):
        out[order] = row_graph(table_instance(1, row, 3, seed=seed)).graph
    return dict(sorted(out.items()))


def write_census(directory: str | Path, seed: int = DEFAULT_SEED) -> dict:
    """Write ``ss-<order>-1.g6`` files plus a manifest marked incomplete."""
    from .graph import write_graph

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for order, g in census_fixture_graphs(seed).items():
        name = f"ss-{order}-1.g6"
        write_graph(g, directory / name)
        entries.append({"file": name, "order": order, "valency": 3,
                        "source": CENSUS_SOURCES[order]})
    manifest = {"complete": False, "max_order": 768, "graphs": entries}
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    return manifest
