"""Permutation groups: elements, stabilizer chains, cosets and double cosets.

Points are ``0 .. degree-1``.  Groups act on the right, so ``p * q`` means
"apply ``p``, then ``q``" and the image of point ``i`` under ``p`` is ``p[i]``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ContainmentError, MalformedInputError, NotFoundError

MAX_DEGREE = 1 << 24
DEFAULT_SEED = 0x5EED_C0DE_2024_0001
DEFAULT_BUDGET = 10_000


# ---------------------------------------------------------------------------
# raw tuple arithmetic (hot paths avoid the Perm wrapper)
# ---------------------------------------------------------------------------

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(b.__getitem__, a))


def _inv(a: tuple) -> tuple:
    r = [0] * len(a)
    for i, x in enumerate(a):
        r[x] = i
    return tuple(r)


def _is_identity(a: tuple) -> bool:
    return all(i == x for i, x in enumerate(a))


def _order(a: Sequence[int]) -> int:
    seen = bytearray(len(a))
    result = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = a[j]
            length += 1
        result = math.lcm(result, length)
    return result


def _power(a: tuple, k: int) -> tuple:
    n = len(a)
    if k < 0:
        a, k = _inv(a), -k
    result = tuple(range(n))
    base = a
    while k:
        if k & 1:
            result = _mul(result, base)
        base = _mul(base, base)
        k >>= 1
    return result


class Perm(tuple):
    """An immutable permutation stored as its image sequence."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()):
        data = tuple(images)
        n = len(data)
        if n > MAX_DEGREE:
            raise MalformedInputError(f"degree {n} exceeds the limit {MAX_DEGREE}")
        seen = bytearray(n)
        for x in data:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise MalformedInputError(f"not a permutation of 0..{n - 1}: {list(data)[:20]}")
            seen[x] = 1
        return tuple.__new__(cls, data)

    @classmethod
    def _raw(cls, data: tuple) -> "Perm":
        return tuple.__new__(cls, data)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        img = list(range(degree))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        if len(other) != len(self):
            raise MalformedInputError("cannot multiply permutations of different degrees")
        return Perm._raw(_mul(self, other))

    def __rmul__(self, other):
        return NotImplemented

    def __pow__(self, k: int) -> "Perm":
        return Perm._raw(_power(self, k))

    def __invert__(self) -> "Perm":
        return Perm._raw(_inv(self))

    def inverse(self) -> "Perm":
        return Perm._raw(_inv(self))

    def conj(self, g: Sequence[int]) -> "Perm":
        """Return ``g^-1 * self * g``."""
        return Perm._raw(_mul(_mul(_inv(tuple(g)), self), tuple(g)))

    def is_identity(self) -> bool:
        return _is_identity(self)

    def order(self) -> int:
        return _order(self)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self) if i != x]

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Perm<{len(self)}>{body}"


# ---------------------------------------------------------------------------
# stabilizer chains
# ---------------------------------------------------------------------------

class _Level:
    __slots__ = ("base", "gens", "trans", "_inv")

    def __init__(self, base: int, identity: tuple):
        self.base = base
        self.gens: list[tuple] = []
        self.trans: dict[int, tuple] = {base: identity}
        self._inv: dict[int, tuple] = {}

    def inv(self, x: int) -> tuple:
        u = self._inv.get(x)
        if u is None:
            u = _inv(self.trans[x])
            self._inv[x] = u
        return u

    def add_gen(self, g: tuple) -> None:
        self.gens.append(g)
        trans = self.trans
        queue = list(trans)
        # new generator on old points, then all generators on new points
        fresh = []
        for x in queue:
            y = g[x]
            if y not in trans:
                trans[y] = _mul(trans[x], g)
                fresh.append(y)
        gens = self.gens
        while fresh:
            x = fresh.pop()
            ux = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = _mul(ux, s)
                    fresh.append(y)


class StabChain:
    """A base and strong generating set with explicit transversals."""

    def __init__(self, degree: int, base_prefix: Iterable[int] = ()):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.levels: list[_Level] = [_Level(b, self.identity) for b in base_prefix]

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    @property
    def order(self) -> int:
        return math.prod(len(lvl.trans) for lvl in self.levels)

    def orbit_lengths(self) -> list[int]:
        return [len(lvl.trans) for lvl in self.levels]

    def strong_generators(self) -> list[tuple]:
        seen = set()
        out = []
        for lvl in self.levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        levels = self.levels
        for i in range(start, len(levels)):
            lvl = levels[i]
            b = lvl.base
            x = g[b]
            if x == b:
                continue
            if x not in lvl.trans:
                return g, i
            g = _mul(g, lvl.inv(x))
        return g, len(levels)

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            return False
        res, _ = self.sift(tuple(g))
        return _is_identity(res)

    def _new_base_point(self, h: tuple) -> int:
        # the moved point shifted by the most generators keeps chains shallow
        moved = [i for i, x in enumerate(h) if i != x]
        gens = self.levels[-1].gens if self.levels else []
        if not gens:
            return moved[0]
        return max(moved, key=lambda p: (sum(1 for s in gens if s[p] != p), -p))

    def _add_residue(self, h: tuple, lo: int, hi: int) -> None:
        if hi == len(self.levels):
            self.levels.append(_Level(self._new_base_point(h), self.identity))
        for lvl in self.levels[lo:hi + 1]:
            lvl.add_gen(h)

    def element_count_check(self, limit: int = 10_000) -> int:
        """Enumerate every element through the transversals (tests only)."""
        if self.order > limit:
            raise MalformedInputError("group too large to enumerate")
        return sum(1 for _ in self.elements())

    def elements(self) -> Iterator[tuple]:
        """Every group element exactly once, as ``u_k * ... * u_0``."""
        def rec(i: int, acc: tuple) -> Iterator[tuple]:
            if i < 0:
                yield acc
                return
            for u in self.levels[i].trans.values():
                yield from rec(i - 1, _mul(acc, u))
        yield from rec(len(self.levels) - 1, self.identity)


def _product_replacement(gens: list[tuple], degree: int, rng: random.Random) -> Iterator[tuple]:
    ident = tuple(range(degree))
    if not gens:
        while True:
            yield ident
    state = list(gens)
    while len(state) < 10:
        state.extend(gens)
    state = state[:max(10, len(gens))]
    acc = ident

    def step():
        nonlocal acc
        i, j = rng.sample(range(len(state)), 2)
        if rng.random() < 0.5:
            state[i] = _mul(state[i], state[j]) if rng.random() < 0.5 else _mul(state[j], state[i])
        else:
            inv = _inv(state[j])
            state[i] = _mul(state[i], inv) if rng.random() < 0.5 else _mul(inv, state[i])
        acc = _mul(acc, state[i])
        return acc

    for _ in range(50):
        step()
    while True:
        yield step()


def build_chain(gens: Sequence[tuple], degree: int, base_prefix: Iterable[int] = (),
                known_order: int | None = None, seed: int = DEFAULT_SEED) -> StabChain:
    """Schreier-Sims.

    Deterministic when ``known_order`` is None; otherwise random elements are
    sifted until the chain certifies exactly ``known_order`` elements.
    """
    chain = StabChain(degree, base_prefix)
    gens = [tuple(g) for g in gens if not _is_identity(g)]
    for g in gens:
        if all(g[b] == b for b in chain.base):
            chain.levels.append(_Level(chain._new_base_point(g), chain.identity))
    for i, lvl in enumerate(chain.levels):
        fix = chain.base[:i]
        for g in gens:
            if all(g[b] == b for b in fix):
                lvl.add_gen(g)
    if known_order is not None:
        _random_schreier_sims(chain, gens, known_order, seed)
    else:
        _deterministic_schreier_sims(chain)
    return chain


def _deterministic_schreier_sims(chain: StabChain) -> None:
    levels = chain.levels
    # (level, orbit point, generator index) triples already verified
    done: list[set] = [set() for _ in levels]
    i = len(levels) - 1
    while i >= 0:
        lvl = levels[i]
        restarted = False
        for x in list(lvl.trans):
            ux = lvl.trans[x]
            for k, s in enumerate(lvl.gens):
                key = (x, k)
                if key in done[i]:
                    continue
                y = s[x]
                h = _mul(_mul(ux, s), lvl.inv(y))
                if not _is_identity(h):
                    res, j = chain.sift(h, i + 1)
                    if j < len(levels) or not _is_identity(res):
                        if j == len(levels):
                            done.append(set())
                        chain._add_residue(res, i + 1, j)
                        i = j
                        restarted = True
                        break
                done[i].add(key)
            if restarted:
                break
        if not restarted:
            i -= 1


def _random_schreier_sims(chain: StabChain, gens: list[tuple], known_order: int, seed: int) -> None:
    rng = random.Random(seed)
    source = _product_replacement(gens, chain.degree, rng)
    stalls = 0
    while chain.order < known_order:
        g = next(source)
        res, j = chain.sift(g)
        if j < len(chain.levels) or not _is_identity(res):
            chain._add_residue(res, 0, j)
            stalls = 0
        else:
            stalls += 1
            if stalls > 2000:
                raise MalformedInputError(
                    f"chain stuck at order {chain.order}; claimed order {known_order} is wrong")
    if chain.order != known_order:
        raise MalformedInputError(f"group order exceeds claimed {known_order}")


def pointwise_stabilizer_gens(gens: Sequence[tuple], degree: int, points: Sequence[int],
                              known_order: int, seed: int = DEFAULT_SEED) -> tuple[list[tuple], StabChain]:
    """Strong generators of the pointwise stabilizer of ``points``."""
    chain = build_chain(gens, degree, base_prefix=points, known_order=known_order, seed=seed)
    k = len(points)
    stab = []
    seen = set()
    for lvl in chain.levels[k:]:
        for g in lvl.gens:
            if g not in seen:
                seen.add(g)
                stab.append(g)
    return stab, chain


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

class PermGroup:
    """A permutation group given by generators, with a stabilizer chain."""

    def __init__(self, generators: Iterable[Sequence[int]], degree: int | None = None, *,
                 name: str = "", order: int | None = None, seed: int = DEFAULT_SEED):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
        if degree is None:
            if not gens:
                raise MalformedInputError("degree required for a group without generators")
            degree = len(gens[0])
        if degree > MAX_DEGREE:
            raise MalformedInputError(f"degree {degree} exceeds the limit {MAX_DEGREE}")
        for g in gens:
            if len(g) != degree:
                raise MalformedInputError(
                    f"generator of degree {len(g)} in a group of degree {degree}")
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.name = name
        self.seed = seed
        self._known_order = order

    @cached_property
    def chain(self) -> StabChain:
        return build_chain(self.generators, self.degree, known_order=self._known_order,
                           seed=self.seed)

    @cached_property
    def lex_chain(self) -> StabChain:
        """Chain on the base ``0, 1, 2, ...`` with trivial levels removed."""
        chain = build_chain(self.generators, self.degree, base_prefix=range(self.degree),
                            known_order=self.order, seed=self.seed)
        chain.levels = [lvl for lvl in chain.levels if len(lvl.trans) > 1]
        return chain

    @property
    def order(self) -> int:
        return self.chain.order

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g) -> bool:
        return self.chain.contains(g)

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} ngens={len(self.generators)}>"

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def elements(self) -> Iterator[Perm]:
        for e in self.chain.elements():
            yield Perm._raw(e)

    def random_elements(self, seed: int | None = None) -> Iterator[Perm]:
        rng = random.Random(self.seed if seed is None else seed)
        for g in _product_replacement([tuple(g) for g in self.generators], self.degree, rng):
            yield Perm._raw(g)

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        queue = [point]
        for x in queue:
            for g in self.generators:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        return orbits_of(self.generators, self.degree)

    def subgroup(self, gens: Iterable[Sequence[int]], name: str = "", order: int | None = None,
                 check: bool = True) -> "PermGroup":
        sub = PermGroup(gens, self.degree, name=name, order=order, seed=self.seed)
        if check:
            for g in sub.generators:
                if g not in self:
                    raise ContainmentError(f"generator {g!r} is not in {self!r}")
        return sub

    def conjugate(self, a: Sequence[int], name: str = "") -> "PermGroup":
        """The subgroup ``a^-1 G a``."""
        a = tuple(a)
        ai = _inv(a)
        return PermGroup([Perm._raw(_mul(_mul(ai, g), a)) for g in self.generators], self.degree,
                         name=name or (self.name + "^a" if self.name else ""),
                         order=self.order, seed=self.seed)

    def element_order_census(self) -> dict[int, int]:
        census: dict[int, int] = {}
        for e in self.chain.elements():
            k = _order(e)
            census[k] = census.get(k, 0) + 1
        return census

    def stabilizer(self, point: int) -> "PermGroup":
        stab, _ = pointwise_stabilizer_gens(self.generators, self.degree, [point], self.order,
                                            seed=self.seed)
        ln = len(self.orbit(point))
        return PermGroup([Perm._raw(g) for g in stab], self.degree, order=self.order // ln,
                         seed=self.seed)

    # -- file format -------------------------------------------------------

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": [list(g) for g in self.generators],
                "name": self.name}

    @classmethod
    def from_json(cls, data: dict | str | Path, source: str = "<json>") -> "PermGroup":
        if isinstance(data, Path):
            source = str(data)
            data = data.read_text()
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise MalformedInputError(
                    f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        try:
            degree = int(data["degree"])
            gens = data["generators"]
        except (KeyError, TypeError, ValueError):
            raise MalformedInputError(f"{source}: expected keys 'degree' and 'generators'") from None
        for k, g in enumerate(gens):
            if not isinstance(g, list) or len(g) != degree:
                raise MalformedInputError(
                    f"{source}: generator {k} is not an image list of length {degree}")
        return cls([Perm(g) for g in gens], degree, name=str(data.get("name", "")))


def orbits_of(gens: Iterable[Sequence[int]], degree: int) -> list[list[int]]:
    """Orbits of the group generated by ``gens``, sorted by least point."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i in range(degree):
            a, b = find(i), find(g[i])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    cells: dict[int, list[int]] = {}
    for i in range(degree):
        cells.setdefault(find(i), []).append(i)
    return [cells[k] for k in sorted(cells)]


def schreier_sims(generators: Sequence[Sequence[int]], degree: int | None = None) -> PermGroup:
    """Build a group and force its stabilizer chain."""
    G = PermGroup(generators, degree)
    G.chain
    return G


def element_order(g: Sequence[int]) -> int:
    return _order(g)


def element_of_order(G: PermGroup, n: int, attempts: int = DEFAULT_BUDGET,
                     seed: int | None = None) -> Perm:
    """A random element of order exactly ``n``, found by powering."""
    if n < 1:
        raise MalformedInputError("order must be positive")
    if n == 1:
        return G.identity
    src = G.random_elements(seed)
    for _ in range(attempts):
        g = next(src)
        m = _order(g)
        if m % n == 0:
            return g ** (m // n)
    raise NotFoundError(f"no element of order {n} in {attempts} random draws")


def normalizer_search(G: PermGroup, t: Perm, q: int, budget: int = DEFAULT_BUDGET,
                      seed: int | None = None) -> Perm:
    """An element ``b`` of order ``q`` with ``t^b = t^r`` for some ``r != 1``."""
    t = tuple(t)
    p = _order(t)
    powers = {}
    x = tuple(range(len(t)))
    for k in range(p):
        powers[x] = k
        x = _mul(x, t)
    src = G.random_elements(seed)
    for _ in range(budget):
        g = next(src)
        c = _mul(_mul(_inv(g), t), g)
        if c not in powers:
            continue
        m = _order(g)
        if m % q:
            continue
        b = _power(g, m // q)
        c = _mul(_mul(_inv(b), t), b)
        if c != t and c in powers:
            return Perm._raw(b)
    raise NotFoundError(f"no order-{q} element normalizing <t> in {budget} draws")


# ---------------------------------------------------------------------------
# cosets
# ---------------------------------------------------------------------------

def _check_subgroup(G: PermGroup, H: PermGroup) -> None:
    if H.degree != G.degree:
        raise ContainmentError("subgroup degree differs from group degree")
    for h in H.generators:
        if h not in G:
            raise ContainmentError(f"{H!r} is not contained in {G!r}")


class CosetSpace:
    """The right cosets ``H g`` of ``H`` in ``G``.

    Each coset is represented by its lexicographically least element; cosets
    are indexed in increasing order of that representative.
    """

    def __init__(self, group: PermGroup, subgroup: PermGroup):
        _check_subgroup(group, subgroup)
        self.group = group
        self.subgroup = subgroup
        self._levels = subgroup.lex_chain.levels
        found: dict[tuple, int] = {}
        reps: list[tuple] = []
        parent: list[tuple[int, int]] = []
        start = self.canonical(group.identity)
        found[start] = 0
        reps.append(start)
        parent.append((-1, -1))
        gens = [tuple(g) for g in group.generators]
        images: list[list[int]] = [[] for _ in gens]
        i = 0
        while i < len(reps):
            r = reps[i]
            i += 1
            for k, s in enumerate(gens):
                c = self.canonical(_mul(r, s))
                j = found.get(c)
                if j is None:
                    j = len(reps)
                    found[c] = j
                    reps.append(c)
                    parent.append((i - 1, k))
                images[k].append(j)
        if len(reps) * subgroup.order != group.order:
            raise ContainmentError("coset enumeration does not match |G|/|H|")
        order = sorted(range(len(reps)), key=reps.__getitem__)
        pos = [0] * len(reps)
        for new, old in enumerate(order):
            pos[old] = new
        self.reps: list[Perm] = [Perm._raw(reps[old]) for old in order]
        self._index = {r: i for i, r in enumerate(self.reps)}
        self.action: list[Perm] = []
        for img in images:
            a = [0] * len(reps)
            for old, j in enumerate(img):
                a[pos[old]] = pos[j]
            self.action.append(Perm._raw(tuple(a)))
        # spanning tree (parent coset, generator) in the sorted numbering
        self.tree: list[tuple[int, int]] = [(-1, -1)] * len(reps)
        bfs: list[int] = []
        for old in range(len(reps)):
            pi, k = parent[old]
            self.tree[pos[old]] = (pos[pi] if pi >= 0 else -1, k)
            bfs.append(pos[old])
        self.bfs_order = bfs

    @property
    def index(self) -> int:
        return len(self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    def canonical(self, g: Sequence[int]) -> tuple:
        """Lexicographically least element of ``H g``."""
        cur = tuple(g)
        for lvl in self._levels:
            b = lvl.base
            best = cur[b]
            arg = b
            for x in lvl.trans:
                v = cur[x]
                if v < best:
                    best, arg = v, x
            if arg != b:
                cur = _mul(lvl.trans[arg], cur)
        return cur

    def locate(self, g: Sequence[int]) -> int:
        return self._index[self.canonical(g)]

    def action_of(self, g: Sequence[int]) -> Perm:
        """Permutation of the cosets induced by right multiplication by ``g``."""
        g = tuple(g)
        return Perm._raw(tuple(self.locate(_mul(r, g)) for r in self.reps))

    def action_of_group(self, K: PermGroup) -> list[Perm]:
        return [self.action_of(k) for k in K.generators]


def coset_space(G: PermGroup, H: PermGroup) -> CosetSpace:
    return CosetSpace(G, H)


def coset_action(G: PermGroup, H: PermGroup, space: CosetSpace | None = None
                 ) -> tuple[list[Perm], PermGroup]:
    """Images of ``G``'s generators on ``[G:H]`` and the kernel ``Core_G(H)``."""
    space = space or CosetSpace(G, H)
    n, m = G.degree, space.index
    # kernel lies inside H: pointwise stabilizer of every coset in H's joint action
    combined = []
    for h in H.generators:
        img = space.action_of(h)
        combined.append(tuple(h) + tuple(n + x for x in img))
    stab, _ = pointwise_stabilizer_gens(combined, n + m, [n + i for i in range(m)],
                                        known_order=H.order, seed=G.seed)
    kernel = PermGroup([Perm._raw(g[:n]) for g in stab], n, name="core", seed=G.seed)
    return list(space.action), kernel


@dataclass(frozen=True)
class DoubleCoset:
    """``R d L`` with ``rep = d``; ``right_cosets`` counts the cosets ``R x`` inside."""

    rep: Perm
    size: int
    right_cosets: int


def double_cosets(G: PermGroup, R: PermGroup, L: PermGroup,
                  space: CosetSpace | None = None) -> list[DoubleCoset]:
    """Partition ``G`` into double cosets ``R d L``.

    Each double coset is the union of one ``L``-orbit on ``[G:R]``; they are
    listed by least coset index, so ``R L`` itself comes first.
    """
    _check_subgroup(G, L)
    space = space or CosetSpace(G, R)
    if space.subgroup is not R and space.subgroup.order != R.order:
        raise ContainmentError("coset space is not over R")
    acts = space.action_of_group(L)
    out = []
    for orb in orbits_of(acts, space.index):
        rep = space.reps[orb[0]]
        out.append(DoubleCoset(rep, len(orb) * R.order, len(orb)))
    return out


def generated_order(gens: Sequence[Sequence[int]], degree: int) -> int:
    return build_chain([tuple(g) for g in gens], degree).order
