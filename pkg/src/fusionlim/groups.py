"""Concrete finite groups.

Two ground representations are supported: permutation groups, whose
elements are tuples of images (``a[i]`` is the image of ``i``), and
semidirect products ``M x| Gamma`` of an F_p-module by a permutation group,
whose elements are pairs ``(vector_code, gamma)``.  Subgroups are closures
inside a parent and compare by element set.

Everything is computed by exact scans and closures; the groups in scope
have at most a few times 10^4 elements.  Permutations compose right to
left, ``(a*b)(i) = a(b(i))``, so that ``c_g(x) = g x g^-1`` is left
conjugation.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable, Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    """Raised on malformed constructions or failed certifications."""


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured size budget."""


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_power_of(n: int, p: int) -> bool:
    return p_part(n, p) == n


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def closure(gens: Iterable, mul: Callable, identity, limit: int | None = None) -> frozenset:
    """All products of ``gens`` (a finite group, so inverses come for free)."""
    gens = [g for g in gens if g != identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                if limit is not None and len(seen) > limit:
                    raise BudgetExceeded(f"closure exceeded {limit} elements")
                queue.append(y)
    return frozenset(seen)


class Group:
    """Base class: a finite group given by generators inside a ground set.

    Subclasses provide ``mul``, ``inv`` and ``identity``.  The element set is
    computed lazily by closure and cached.
    """

    name: str = "G"

    def __init__(self, gens: Sequence, name: str | None = None):
        self.gens = tuple(g for g in gens if g != self.identity)
        if name is not None:
            self.name = name
        self._elements: frozenset | None = None
        self._sorted: list | None = None

    # -- arithmetic supplied by subclasses
    identity = None

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    # -- derived arithmetic
    def conj(self, g, x):
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, x, k: int):
        r = self.identity
        for _ in range(k):
            r = self.mul(r, x)
        return r

    def element_order(self, x) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    @property
    def element_set(self) -> frozenset:
        if self._elements is None:
            self._elements = closure(self.gens, self.mul, self.identity)
        return self._elements

    @property
    def elements(self) -> list:
        """Elements in a fixed total order (identity first)."""
        if self._sorted is None:
            rest = sorted(x for x in self.element_set if x != self.identity)
            self._sorted = [self.identity] + rest
        return self._sorted

    @property
    def order(self) -> int:
        return len(self.element_set)

    def __contains__(self, x) -> bool:
        return x in self.element_set

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def sylow_witness(self, p: int):
        """Generators of a known Sylow p-subgroup, or None."""
        return None

    @property
    def root(self) -> "Group":
        return self

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class PermGroup(Group):
    """Permutations of ``range(degree)``."""

    def __init__(self, degree: int, gens: Sequence[Sequence[int]], name: str | None = None,
                 sylow: Callable[[int], list] | None = None):
        self.degree = degree
        self.identity = tuple(range(degree))
        clean = []
        for g in gens:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation of degree {degree}: {g}")
            clean.append(g)
        self._sylow = sylow
        super().__init__(clean, name)

    def mul(self, a, b):
        return tuple(map(a.__getitem__, b))

    def inv(self, a):
        r = [0] * len(a)
        for i, ai in enumerate(a):
            r[ai] = i
        return tuple(r)

    def sylow_witness(self, p):
        return None if self._sylow is None else self._sylow(p)


class Subgroup(Group):
    """A subgroup of ``parent`` generated by ``gens``; equality is by element set."""

    def __init__(self, parent: Group, gens: Sequence, elements: Iterable | None = None,
                 name: str | None = None):
        self.parent = parent
        root = parent.root
        self._root = root
        self.identity = root.identity
        self.mul = root.mul
        self.inv = root.inv
        super().__init__(gens, name or f"sub({parent.name})")
        if elements is not None:
            self._elements = frozenset(elements)

    @property
    def root(self) -> Group:
        return self._root

    @property
    def key(self) -> frozenset:
        return self.element_set

    def __eq__(self, other):
        if isinstance(other, Subgroup):
            return self.element_set == other.element_set
        return NotImplemented

    def __hash__(self):
        return hash(self.element_set)

    def __le__(self, other: Group) -> bool:
        return self.element_set <= other.element_set

    def __lt__(self, other: Group) -> bool:
        return self.element_set < other.element_set

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self._root.name}>"


def as_subgroup(G: Group) -> Subgroup:
    """View ``G`` itself as a Subgroup (so it compares by element set)."""
    if isinstance(G, Subgroup):
        return G
    return Subgroup(G, G.gens, G.element_set, name=G.name)


def subgroup_from_elements(parent: Group, elements: Iterable, gens: Sequence | None = None) -> Subgroup:
    elements = frozenset(elements)
    if gens is None:
        gens = small_generating_set(parent, elements)
    return Subgroup(parent, gens, elements)


def small_generating_set(G: Group, elements: Iterable) -> list:
    """Greedy generating set: add the first element not yet generated."""
    target = frozenset(elements)
    gens: list = []
    current = frozenset([G.identity])
    for x in sorted(target):
        if x not in current:
            gens.append(x)
            current = _extend_closure(current, gens, G.root.mul)
            if len(current) == len(target):
                break
    return gens


def _extend_closure(current: frozenset, gens: Sequence, mul) -> frozenset:
    seen = set(current)
    queue = deque(current)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# constructions

def _cycle(n: int, cyc: Sequence[int]) -> tuple:
    a = list(range(n))
    for i, x in enumerate(cyc):
        a[x] = cyc[(i + 1) % len(cyc)]
    return tuple(a)


def _sym_sylow_gens(n: int, p: int) -> list:
    """Generators of a Sylow p-subgroup of Sym(n): iterated wreath products of
    C_p on consecutive blocks of sizes given by the base-p digits of n."""
    gens = []
    offset = 0
    digits = []
    m, k = n, 0
    while m:
        digits.append((k, m % p))
        m //= p
        k += 1
    for k, count in reversed(digits):
        size = p ** k
        for _ in range(count):
            for j in range(k):
                span = p ** (j + 1)
                a = list(range(n))
                for x in range(span):
                    digit = (x // p ** j) % p
                    y = x - digit * p ** j + ((digit + 1) % p) * p ** j
                    a[offset + x] = offset + y
                gens.append(tuple(a))
            offset += size
    return gens


def symmetric_group(n: int) -> PermGroup:
    if n < 1:
        raise GroupError("Sym(n) needs n >= 1")
    gens = []
    if n >= 2:
        gens.append(_cycle(n, [0, 1]))
    if n >= 3:
        gens.append(_cycle(n, list(range(n))))
    return PermGroup(n, gens, name=f"Sym({n})", sylow=lambda p: _sym_sylow_gens(n, p))


def cyclic_group(n: int) -> PermGroup:
    if n < 1:
        raise GroupError("C(n) needs n >= 1")
    c = _cycle(n, list(range(n))) if n > 1 else (0,)

    def sylow(p):
        q = p_part(n, p)
        return [_perm_power(c, n // q)] if q > 1 else []

    return PermGroup(n, [c], name=f"C({n})", sylow=sylow)


def _perm_power(a, k):
    r = tuple(range(len(a)))
    for _ in range(k):
        r = tuple(map(a.__getitem__, r))
    return r


def _shift(g: Sequence[int], offset: int, degree: int) -> tuple:
    a = list(range(degree))
    for i, gi in enumerate(g):
        a[offset + i] = offset + gi
    return tuple(a)


def direct_product(*factors: PermGroup) -> PermGroup:
    """Product acting on the disjoint union of the factors' point sets."""
    for f in factors:
        if not isinstance(f, PermGroup):
            raise GroupError("direct products are built from permutation groups")
    degree = sum(f.degree for f in factors)
    offsets = list(np.cumsum([0] + [f.degree for f in factors])[:-1])
    gens = []
    for f, o in zip(factors, offsets):
        gens.extend(_shift(g, int(o), degree) for g in f.gens)

    def sylow(p):
        out = []
        for f, o in zip(factors, offsets):
            w = f.sylow_witness(p)
            if w is None:
                return None
            out.extend(_shift(g, int(o), degree) for g in w)
        return out

    name = "prod(" + ",".join(f.name for f in factors) + ")"
    group = PermGroup(degree, gens, name=name, sylow=sylow)
    group.factors = tuple(factors)
    group.offsets = tuple(int(o) for o in offsets)
    return group


def wreath_product(G: PermGroup, p: int) -> PermGroup:
    """``G wr C_p`` on p blocks of G's points.

    The base is G^p, coordinate i acting on block i.  The rotation ``x`` moves
    block j onto block j-1, so that ``x (g_1,...,g_p) x^-1 = (g_2,...,g_p,g_1)``.
    Generators: G's generators on block 0, then ``x``.
    """
    if not isinstance(G, PermGroup):
        raise GroupError("wreath products are built from permutation groups")
    if p < 1:
        raise GroupError("wreath(G, p) needs p >= 1")
    n = G.degree
    degree = n * p
    x = tuple(((i // n - 1) % p) * n + i % n for i in range(degree))
    gens = [_shift(g, 0, degree) for g in G.gens]
    if p > 1:
        gens.append(x)

    def sylow(r):
        w = G.sylow_witness(r)
        if w is None:
            return None
        out = [_shift(g, b * n, degree) for b in range(p) for g in w]
        if p > 1 and p_part(p, r) == p:
            out.append(x)
        elif p > 1 and p % r == 0:
            return None
        return out

    group = PermGroup(degree, gens, name=f"wreath({G.name},{p})", sylow=sylow)
    group.base = G
    group.copies = p
    group.rotation = x
    return group


class SemidirectGroup(Group):
    """``M x| Gamma`` for an F_p Gamma-module M.

    Elements are ``(v, g)`` with ``v`` an integer code of a vector of M and
    ``g`` in Gamma; ``(v, g)(v', g') = (v + g.v', g g')``.
    """

    def __init__(self, module, name: str | None = None):
        from .modules import VectorCodec

        self.module = module
        self.complement = module.group
        self.p = module.p
        self.codec = VectorCodec(module.p, module.dim)
        Gam = self.complement
        self.identity = (0, Gam.identity)
        self._act_cache: dict = {}
        self._gmul = Gam.mul
        self._ginv = Gam.inv
        self._add = self.codec.add
        self._neg = self.codec.neg
        self._perm_complement = isinstance(Gam, PermGroup)
        gens = [(self.codec.encode(e), Gam.identity) for e in np.eye(module.dim, dtype=np.int64)]
        gens += [(0, g) for g in Gam.gens]
        super().__init__(gens, name or f"semidirect({module.name},{Gam.name})")

    def act_code(self, g, v: int) -> int:
        table = self._act_cache.get(g)
        if table is None:
            table = self.codec.action_table(self.module.matrix(g))
            self._act_cache[g] = table
        return table[v]

    def mul(self, a, b):
        g = a[1]
        table = self._act_cache.get(g)
        if table is None:
            table = self.codec.action_table(self.module.matrix(g))
            self._act_cache[g] = table
        if self._perm_complement:
            gh = tuple(map(g.__getitem__, b[1]))
        else:
            gh = self._gmul(g, b[1])
        if self.p == 2:
            return (a[0] ^ table[b[0]], gh)
        return (self._add(a[0], table[b[0]]), gh)

    def inv(self, a):
        gi = self._ginv(a[1])
        return (self._neg(self.act_code(gi, a[0])), gi)

    @property
    def normal_module(self) -> "Subgroup":
        """The normal subgroup M = {(v, 1)}."""
        e = self.complement.identity
        elems = [(v, e) for v in range(self.codec.size)]
        gens = [(self.codec.encode(b), e) for b in np.eye(self.module.dim, dtype=np.int64)]
        return Subgroup(self, gens, elems, name="M")

    def complement_subgroup(self, H: Group) -> "Subgroup":
        return Subgroup(self, [(0, h) for h in H.gens], [(0, h) for h in H.element_set])

    def sylow_witness(self, r):
        w = self.complement.sylow_witness(r)
        if w is None:
            return None
        out = [(0, g) for g in w]
        if r == self.p:
            e = self.complement.identity
            out = [(self.codec.encode(b), e) for b in np.eye(self.module.dim, dtype=np.int64)] + out
        return out


def semidirect_product(module) -> SemidirectGroup:
    return SemidirectGroup(module)


# ---------------------------------------------------------------------------
# subgroup-level queries

def generated_subgroup(G: Group, gens: Sequence) -> Subgroup:
    for g in gens:
        if g not in G.element_set:
            raise GroupError(f"{g!r} is not an element of {G.name}")
    return Subgroup(G, list(gens))


def trivial_subgroup(G: Group) -> Subgroup:
    return Subgroup(G, [], [G.identity])


def conjugate_elements(G: Group, g, H: Group) -> frozenset:
    mul, gi = G.root.mul, G.root.inv(g)
    return frozenset(mul(mul(g, x), gi) for x in H.element_set)


def conjugate_subgroup(G: Group, g, H: Group) -> Subgroup:
    conj = G.root.conj
    return Subgroup(G.root, [conj(g, x) for x in H.gens], conjugate_elements(G, g, H))


def _conjugates_into(G: Group, g, gens, target: frozenset) -> bool:
    mul = G.root.mul
    gi = G.root.inv(g)
    for x in gens:
        if mul(mul(g, x), gi) not in target:
            return False
    return True


def normalizer(G: Group, P: Group) -> Subgroup:
    """N_G(P) by scanning G; P need not lie in G."""
    target = P.element_set
    gens = P.gens
    elems = [g for g in G.elements if _conjugates_into(G, g, gens, target)]
    return subgroup_from_elements(G, elems)


def centralizer(G: Group, P: Group) -> Subgroup:
    mul = G.root.mul
    gens = P.gens
    elems = [g for g in G.elements if all(mul(g, x) == mul(x, g) for x in gens)]
    return subgroup_from_elements(G, elems)


def transporter(G: Group, P: Group, Q: Group) -> list:
    """``{g in G : g P g^-1 <= Q}``, tested on the generators of P."""
    target = Q.element_set
    gens = P.gens
    return [g for g in G.elements if _conjugates_into(G, g, gens, target)]


def is_p_group(H: Group, p: int) -> bool:
    return is_power_of(H.order, p)


def p_elements(G: Group, p: int) -> list:
    return [x for x in G.elements if is_power_of(G.root.element_order(x), p)]


def sylow(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup: the construction's witness if known, else greedy.

    The greedy search grows a p-subgroup P by a p-element of N_G(P) outside
    P until none exists; the result is certified to have order |G|_p.
    """
    target = p_part(G.order, p)
    w = G.sylow_witness(p)
    if w is not None:
        S = Subgroup(G, list(w))
        if not S.element_set <= G.element_set:
            raise GroupError("Sylow witness is not contained in the group")
    else:
        S = trivial_subgroup(G)
        while S.order < target:
            N = normalizer(G, S)
            ext = None
            for g in N.elements:
                if g not in S.element_set and is_power_of(G.root.element_order(g), p):
                    ext = g
                    break
            if ext is None:
                break
            S = Subgroup(G, list(S.gens) + [ext])
    if S.order != target:
        raise GroupError(f"Sylow certification failed: |S| = {S.order}, expected {target}")
    return S


def p_core(G: Group, p: int) -> Subgroup:
    """O_p(G): the intersection of all Sylow p-subgroups."""
    S = sylow(G, p)
    core = set(S.element_set)
    seen = {S.element_set}
    for g in G.elements:
        if len(core) == 1:
            break
        K = conjugate_elements(G, g, S)
        if K in seen:
            continue
        seen.add(K)
        core &= K
    return subgroup_from_elements(G, core)


def o_p_prime(G: Group, p: int) -> Subgroup:
    """O_{p'}(G): the largest normal subgroup of order prime to p."""
    cand = [x for x in G.elements if G.root.element_order(x) % p != 0]
    current = frozenset([G.identity])
    for x in cand:
        if x in current:
            continue
        K = _normal_closure(G, list(small_generating_set(G, current)) + [x])
        if K.order % p != 0:
            current = K.element_set
    return subgroup_from_elements(G, current)


def _normal_closure(G: Group, gens) -> Subgroup:
    gens = list(gens)
    H = Subgroup(G, gens)
    while True:
        new = [G.root.conj(g, x) for g in G.gens for x in H.gens]
        new = [y for y in new if y not in H.element_set]
        if not new:
            return H
        H = Subgroup(G, list(H.gens) + new)


def all_subgroups(P: Group, limit: int = 200_000) -> list[Subgroup]:
    """Every subgroup of P, deduplicated by element set, sorted by (order, elements).

    For p-groups the subgroups are built in layers: each subgroup of order
    p^(k+1) is <H, g> for some H of order p^k and g in N_P(H) \\ H with
    g^p in H.  Other groups fall back to naive closure of H and one element.
    """
    n = P.order
    primes = [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]
    if len(primes) <= 1:
        subs = _p_group_subgroups(P, limit)
    else:
        subs = naive_all_subgroups(P, limit)
    return sorted(subs, key=lambda H: (H.order, sorted(H.element_set)))


def overgroups(P: Group, H: Subgroup, limit: int = 200_000) -> list[Subgroup]:
    """Every subgroup of the p-group P containing H, sorted by (order, elements)."""
    if not H.element_set <= P.element_set:
        raise GroupError("H is not contained in P")
    subs = _p_group_subgroups(P, limit, start=H)
    return sorted(subs, key=lambda K: (K.order, sorted(K.element_set)))


def _p_group_subgroups(P: Group, limit: int, start: Subgroup | None = None) -> list[Subgroup]:
    mul = P.root.mul
    p = min((q for q in range(2, P.order + 1) if P.order % q == 0), default=1)
    triv = start if start is not None else trivial_subgroup(P)
    found = {triv.key: triv}
    layer = [triv]
    elems = P.elements
    while layer:
        nxt: dict = {}
        for H in layer:
            hset = H.element_set
            covered = set(hset)
            for g in elems:
                if g in covered:
                    continue
                if not _conjugates_into(P, g, H.gens, hset):
                    continue
                coset = frozenset(mul(g, h) for h in hset)
                covered |= coset
                if P.root.power(g, p) not in hset:
                    continue
                kset = set(hset)
                gi = P.identity
                for _ in range(p - 1):
                    gi = mul(gi, g)
                    kset.update(mul(gi, h) for h in hset)
                key = frozenset(kset)
                if key in found or key in nxt:
                    continue
                nxt[key] = Subgroup(P, list(H.gens) + [g], key)
                if len(found) + len(nxt) > limit:
                    raise BudgetExceeded(f"more than {limit} subgroups")
        found.update(nxt)
        layer = list(nxt.values())
    return list(found.values())


def naive_all_subgroups(P: Group, limit: int = 200_000) -> list[Subgroup]:
    """Independent brute force: close every known subgroup under one more element."""
    triv = trivial_subgroup(P)
    found = {triv.key: triv}
    queue = deque([triv])
    while queue:
        H = queue.popleft()
        for g in P.elements:
            if g in H.element_set:
                continue
            gens = list(H.gens) + [g]
            key = closure(gens, P.root.mul, P.identity)
            if key not in found:
                K = Subgroup(P, gens, key)
                found[key] = K
                queue.append(K)
                if len(found) > limit:
                    raise BudgetExceeded(f"more than {limit} subgroups")
    return list(found.values())


def conjugacy_classes_of_subgroups(G: Group, subs: Sequence[Subgroup], within: frozenset | None = None):
    """Partition ``subs`` (subgroups of some ``within`` set) into G-classes.

    Returns ``(classes, lookup)`` where ``classes`` is a list of
    ``(representative, normalizer)`` and ``lookup[key] = (class index, t)``
    with ``t H t^-1 = representative``.
    """
    index = {H.key: H for H in subs}
    classes = []
    lookup: dict = {}
    mul, inv = G.root.mul, G.root.inv
    for H in subs:
        if H.key in lookup:
            continue
        ci = len(classes)
        norm = []
        lookup[H.key] = (ci, G.identity)
        hset = H.element_set
        for g in G.elements:
            if within is not None and not _conjugates_into(G, g, H.gens, within):
                continue
            gi = inv(g)
            K = frozenset(mul(mul(g, x), gi) for x in hset)
            if K == hset:
                norm.append(g)
            elif K in index and K not in lookup:
                lookup[K] = (ci, gi)
        classes.append((H, subgroup_from_elements(G, norm)))
    return classes, lookup


def p_subgroup_orbits(Gam: Group, p: int) -> list[tuple[Subgroup, Subgroup]]:
    """G-conjugacy classes of nontrivial p-subgroups, as (representative, normalizer)."""
    return PSubgroupChains(Gam, p).classes


class ChainOrbit:
    """A Gamma-orbit of strict chains Q_0 < ... < Q_k of nontrivial p-subgroups.

    ``faces[i] = (j, g)`` says that dropping Q_i gives a chain that ``g``
    carries onto representative ``j`` of the next lower level.
    """

    __slots__ = ("chain", "stabilizer", "orbit_size", "faces", "children", "child_lookup",
                 "index")

    def __init__(self, chain, stabilizer, orbit_size):
        self.chain = tuple(chain)
        self.stabilizer = stabilizer
        self.orbit_size = orbit_size
        self.faces: list = []
        self.children: list | None = None
        self.child_lookup: dict | None = None
        self.index = 0

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def __repr__(self):
        orders = "<".join(str(Q.order) for Q in self.chain)
        return f"<ChainOrbit {orders} |stab|={self.stabilizer.order} size={self.orbit_size}>"


class PSubgroupChains:
    """Orbit representatives of chains of nontrivial p-subgroups of Gamma.

    Level n holds chains with n members (level 0 is the empty chain).  The
    representative chains all lie in a fixed Sylow subgroup T.  Orbits at
    level n+1 are built by prepending to each level-n representative sigma
    the Stab(sigma)-classes of nontrivial proper subgroups of its bottom
    member, which is a bijection on orbits.
    """

    def __init__(self, Gam: Group, p: int, max_orbits: int = 100_000):
        self.group = Gam
        self.p = p
        self.max_orbits = max_orbits
        self.sylow = sylow(Gam, p)
        self._subs_cache: dict = {}
        top = ChainOrbit((), as_subgroup(Gam), 1)
        self.levels: list[list[ChainOrbit]] = [[top]]
        subs = [H for H in self.subgroups_of(self.sylow) if H.order > 1]
        classes, lookup = conjugacy_classes_of_subgroups(Gam, subs, within=self.sylow.element_set)
        self.classes = classes
        top.children = []
        top.child_lookup = lookup
        for rep, norm in classes:
            orb = ChainOrbit((rep,), norm, Gam.order // norm.order)
            orb.faces = [(0, Gam.identity)]
            orb.index = len(top.children)
            top.children.append(orb)
        self.levels.append(top.children)
        self._count = len(top.children)

    def subgroups_of(self, Q: Subgroup) -> list[Subgroup]:
        got = self._subs_cache.get(Q.key)
        if got is None:
            got = all_subgroups(Q)
            self._subs_cache[Q.key] = got
        return got

    def level(self, n: int) -> list[ChainOrbit]:
        while len(self.levels) <= n:
            self._grow()
        return self.levels[n]

    def _grow(self):
        G = self.group
        prev = self.levels[-1]
        new: list[ChainOrbit] = []
        for sigma in prev:
            bottom = sigma.chain[0]
            subs = [R for R in self.subgroups_of(bottom) if 1 < R.order < bottom.order]
            classes, lookup = conjugacy_classes_of_subgroups(sigma.stabilizer, subs)
            sigma.children = []
            sigma.child_lookup = lookup
            for rep, stab in classes:
                orb = ChainOrbit((rep,) + sigma.chain, stab, G.order // stab.order)
                orb.index = len(new)
                sigma.children.append(orb)
                new.append(orb)
            self._count += len(classes)
            if self._count > self.max_orbits:
                raise BudgetExceeded(f"more than {self.max_orbits} chain orbits")
        for orb in new:
            orb.faces = []
            for i in range(len(orb.chain)):
                face = orb.chain[:i] + orb.chain[i + 1:]
                j, g = self.lookup(face)
                orb.faces.append((j, g))
        self.levels.append(new)

    def lookup(self, chain: Sequence[Subgroup]):
        """Return ``(j, g)``: ``g`` carries ``chain`` onto representative j of its level.

        The chain's members must lie in the Sylow subgroup (as all faces of
        representatives do).
        """
        G = self.group
        if not chain:
            return 0, G.identity
        orbit, g = self._lookup_orbit(tuple(chain))
        return orbit.index, g

    def _lookup_orbit(self, chain):
        G = self.group
        if len(chain) == 0:
            return self.levels[0][0], G.identity
        parent, g1 = self._lookup_orbit(chain[1:])
        if parent.child_lookup is None:
            self.level(len(chain))
        Q0 = chain[0].element_set
        if g1 != G.identity:
            Q0 = conjugate_elements(G, g1, chain[0])
        entry = parent.child_lookup.get(Q0)
        if entry is None:
            raise GroupError("bottom member not found among subgroups of the representative")
        ci, h = entry
        return parent.children[ci], G.root.mul(h, g1)


def chain_orbits(Gam: Group, p: int, k: int, complex_: PSubgroupChains | None = None) -> list[ChainOrbit]:
    """Gamma-orbits of strict chains Q_0 < ... < Q_k of nontrivial p-subgroups."""
    if k < 0:
        raise ValueError("k must be >= 0")
    cx = complex_ or PSubgroupChains(Gam, p)
    return cx.level(k + 1)
