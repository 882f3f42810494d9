"""The fusion system F_S(G) of a concrete group and the data around it.

For ``G = M x| Gamma`` with M a faithful F_p Gamma-module, the object sets
are X (subgroups of S containing M) and Y = X without M.  Out_F(M) is
isomorphic to Gamma, and the classification of X- and Y-linking systems
is read off from Lambda^3(Gamma; M).

Scans over G are cached per context: every normalizer, centralizer and
transporter is computed at most once.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .categories import ContravariantFunctor, FiniteCategory, lim_finite_category
from .groups import (Group, PermGroup, SemidirectGroup, Subgroup, overgroups,
                     small_generating_set, subgroup_from_elements, sylow)
from .lam import LambdaResult, lambda_poset
from .modules import GModule, is_faithful


class FusionError(ValueError):
    pass


class FusionContext:
    """G, a prime p and S in Syl_p(G), with cached scans over G."""

    def __init__(self, G: Group, p: int, group_spec: str | None = None,
                 module_spec: str | None = None):
        self.G = G
        self.p = p
        self.S = sylow(G, p)
        self.group_spec = group_spec or G.name
        self.module_spec = module_spec
        self.gamma = None
        self.module = None
        self.M = None
        if isinstance(G, SemidirectGroup):
            self.gamma = G.complement
            self.module = G.module
            self.M = G.normal_module
            if self.module.p != p:
                raise FusionError("the module prime differs from p")
        self._mul = G.root.mul
        self._inv_table: dict | None = None
        self._norm: dict = {}
        self._cent: dict = {}
        self._cent_s: dict = {}
        self._images: dict = {}
        self._trans: dict = {}
        self._conj_class: dict = {}
        self._short: dict = {}

    # -- element-level helpers ---------------------------------------------

    def inv(self, g):
        if self._inv_table is None:
            inv = self.G.root.inv
            self._inv_table = {x: inv(x) for x in self.G.elements}
        return self._inv_table[g]

    def conj(self, g, x):
        mul = self._mul
        return mul(mul(g, x), self.inv(g))

    def hom_key(self, g, P: Group) -> tuple:
        """Images of P's generators under c_g; identifies c_g restricted to P."""
        return tuple(self.conj(g, x) for x in P.gens)

    def short_gens(self, P: Group) -> list:
        """A greedy small generating set of P (cached)."""
        got = self._short.get(P.key)
        if got is None:
            got = small_generating_set(self.G, P.element_set)
            self._short[P.key] = got
        return got

    # -- cached scans -------------------------------------------------------

    def normalizer(self, P: Subgroup) -> Subgroup:
        got = self._norm.get(P.key)
        if got is None:
            got = subgroup_from_elements(self.G, self.transporter(P, P))
            self._norm[P.key] = got
        return got

    def centralizer(self, P: Group) -> Subgroup:
        got = self._cent.get(P.key)
        if got is None:
            gens = P.gens
            elems = [g for g in self.normalizer(P).elements
                     if self.hom_key(g, P) == tuple(gens)]
            got = subgroup_from_elements(self.G, elems)
            self._cent[P.key] = got
        return got

    def centralizer_in_s(self, P: Group) -> Subgroup:
        """C_S(P)."""
        got = self._cent_s.get(P.key)
        if got is None:
            mul = self._mul
            elems = [s for s in self.S.elements
                     if all(mul(s, x) == mul(x, s) for x in P.gens)]
            got = subgroup_from_elements(self.G, elems)
            self._cent_s[P.key] = got
        return got

    def _images_into_s(self, P: Subgroup) -> list:
        """(g, hom_key) for every g with g P g^-1 <= S."""
        got = self._images.get(P.key)
        if got is None:
            sset = self.S.element_set
            mul, inv = self._mul, self.inv
            got = []
            # later generators tend to be the ones outside a normal core, so
            # testing them first rejects most elements early
            order = list(reversed(range(len(P.gens))))
            gens = [P.gens[k] for k in order]
            for g in self.G.elements:
                gi = inv(g)
                imgs = []
                for x in gens:
                    y = mul(mul(g, x), gi)
                    if y not in sset:
                        break
                    imgs.append(y)
                else:
                    imgs.reverse()
                    got.append((g, tuple(imgs)))
            self._images[P.key] = got
        return got

    def transporter(self, P: Subgroup, Q: Subgroup) -> list:
        """T_G(P, Q) for P, Q <= S, in the sorted order of G's elements."""
        key = (P.key, Q.key)
        got = self._trans.get(key)
        if got is None:
            if not (P.element_set <= self.S.element_set and Q.element_set <= self.S.element_set):
                raise FusionError("transporters are only taken between subgroups of S")
            qset = Q.element_set
            got = [g for g, imgs in self._images_into_s(P) if all(y in qset for y in imgs)]
            self._trans[key] = got
        return got

    def transporter_in_s(self, P: Subgroup, Q: Subgroup) -> list:
        sset = self.S.element_set
        return [g for g in self.transporter(P, Q) if g in sset]

    def homs(self, P: Subgroup, Q: Subgroup) -> dict:
        """Hom_F(P, Q) as a dict hom_key -> one conjugating element."""
        out: dict = {}
        for g in self.transporter(P, Q):
            out.setdefault(self.hom_key(g, P), g)
        return out

    def conjugates_in_s(self, P: Subgroup) -> list[Subgroup]:
        """The distinct G-conjugates of P that lie in S."""
        got = self._conj_class.get(P.key)
        if got is None:
            mul = self._mul
            N = self.normalizer(P).elements
            covered: set = set()
            found = []
            for g, _ in self._images_into_s(P):
                if g in covered:
                    continue
                covered.update(mul(g, n) for n in N)
                gi = self.inv(g)
                K = frozenset(mul(mul(g, x), gi) for x in P.element_set)
                found.append(Subgroup(self.G, [self.conj(g, x) for x in P.gens], K))
            got = sorted(found, key=lambda H: sorted(H.element_set))
            self._conj_class[P.key] = got
        return got

    def __repr__(self):
        return f"<FusionContext {self.group_spec} p={self.p} |G|={self.G.order} |S|={self.S.order}>"


def fusion_context(group_spec: str, p: int | None = None, module_spec: str | None = None) -> FusionContext:
    """Build a context from a group expression; p defaults to the module prime."""
    from .expr import build_group

    G = build_group(group_spec)
    if p is None:
        if not isinstance(G, SemidirectGroup):
            raise FusionError("a prime is required unless the group is a semidirect product")
        p = G.p
    return FusionContext(G, p, group_spec=group_spec, module_spec=module_spec)


# ---------------------------------------------------------------------------
# centricity and the object sets

def f_centric(fc: FusionContext, P: Subgroup) -> bool:
    """C_S(Q) <= Q for every G-conjugate Q of P inside S."""
    for Q in fc.conjugates_in_s(P):
        if not fc.centralizer_in_s(Q).element_set <= Q.element_set:
            return False
    return True


def p_centric(fc: FusionContext, P: Subgroup) -> bool:
    """Z(P) is a Sylow p-subgroup of C_G(P); equivalent to F-centricity for P <= S."""
    C = fc.centralizer(P)
    Z = [x for x in P.element_set if x in C.element_set]
    q = 1
    n = C.order
    while n % fc.p == 0:
        n //= fc.p
        q *= fc.p
    return len(Z) == q


@dataclass
class TheoremSets:
    X: list
    Y: list
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def theorem_sets(fc: FusionContext, verify: bool = True) -> TheoremSets:
    """X = subgroups of S containing M, and Y = X without M, with closure checks."""
    if fc.M is None:
        raise FusionError("theorem_sets needs a context built from a semidirect product")
    X = overgroups(fc.S, fc.M)
    Y = [P for P in X if P != fc.M]
    checks: dict = {}
    if verify:
        keys = {P.key for P in X}
        checks["module_in_X"] = fc.M.key in keys
        checks["faithful"] = is_faithful(fc.module)
        checks["centric"] = all(f_centric(fc, P) for P in X)
        checks["closed_under_conjugacy"] = all(
            Q.key in keys for P in X for Q in fc.conjugates_in_s(P))
        checks["closed_under_overgroups"] = all(
            _one_step_overgroups_in(fc, P, keys) for P in X)
        checks["Y_closed_under_conjugacy"] = all(
            Q != fc.M for P in Y for Q in fc.conjugates_in_s(P))
        checks["Y_closed_under_overgroups"] = True  # overgroups of P > M are never M
    out = TheoremSets(X, Y, checks)
    if verify and not out.ok:
        failed = [k for k, v in checks.items() if not v]
        raise FusionError(f"object-set checks failed: {failed}")
    return out


def _one_step_overgroups_in(fc: FusionContext, P: Subgroup, keys: set) -> bool:
    """<P, s> lies in the set for each s in S; any overgroup is reached this way."""
    mul = fc._mul
    covered = set(P.element_set)
    for s in fc.S.elements:
        if s in covered:
            continue
        covered.update(mul(s, x) for x in P.element_set)
        H = Subgroup(fc.G, list(P.gens) + [s])
        if H.key not in keys:
            return False
    return True


def fusion_classes(fc: FusionContext, objects: Sequence[Subgroup]) -> list[list[Subgroup]]:
    """Partition ``objects`` into F-conjugacy classes, in first-appearance order."""
    done: set = set()
    out = []
    for P in objects:
        if P.key in done:
            continue
        cls = [Q for Q in fc.conjugates_in_s(P)]
        done.update(Q.key for Q in cls)
        out.append(cls)
    return out


# ---------------------------------------------------------------------------
# the orbit category O(F^X)

class RepHoms:
    """Rep(P, Q) = Q \\ T_G(P, Q) / C_G(P): one representative per double
    coset, i.e. per class of F-homomorphisms P -> Q modulo Inn(Q).

    The double cosets are swept out by closing each new element under left
    multiplication by Q's generators and right multiplication by C_G(P)'s,
    so every element of the transporter is visited once.
    """

    def __init__(self, fc: FusionContext, P: Subgroup, Q: Subgroup):
        self.P, self.Q = P, Q
        self.reps: list = []
        self.lookup: dict = {}
        if P.order > Q.order:
            return
        mul = fc._mul
        left = fc.short_gens(Q)
        right = fc.short_gens(fc.centralizer(P))
        lookup = self.lookup
        for g in fc.transporter(P, Q):
            if g in lookup:
                continue
            c = len(self.reps)
            self.reps.append(g)
            lookup[g] = c
            stack = [g]
            while stack:
                x = stack.pop()
                for q in left:
                    y = mul(q, x)
                    if y not in lookup:
                        lookup[y] = c
                        stack.append(y)
                for z in right:
                    y = mul(x, z)
                    if y not in lookup:
                        lookup[y] = c
                        stack.append(y)

    def __len__(self):
        return len(self.reps)

    def class_of(self, fc: FusionContext, g) -> int:
        return self.lookup[g]


def rep_homs(fc: FusionContext, P: Subgroup, Q: Subgroup) -> RepHoms:
    return RepHoms(fc, P, Q)


class FusionOrbitCategory(FiniteCategory):
    """O(F^objects) with morphisms stored as (source, target, class index)."""

    def __init__(self, fc: FusionContext, objects: Sequence[Subgroup]):
        self.fc = fc
        objs = list(objects)
        self.rep = {}
        src, dst, reps, index = [], [], [], {}
        identities = []
        for i, P in enumerate(objs):
            for j, Q in enumerate(objs):
                R = RepHoms(fc, P, Q)
                self.rep[(i, j)] = R
                for c, g in enumerate(R.reps):
                    index[(i, j, c)] = len(src)
                    src.append(i)
                    dst.append(j)
                    reps.append(g)
            identities.append(index[(i, i, self.rep[(i, i)].class_of(fc, fc.G.identity))])
        self.reps = reps
        self._index = index

        def compose(g, f):
            i, k = src[f], dst[g]
            R = self.rep[(i, k)]
            return index[(i, k, R.class_of(fc, fc._mul(reps[g], reps[f])))]

        super().__init__(objs, src, dst, identities, compose)


# ---------------------------------------------------------------------------
# class-local data

class ElementaryAbelian:
    """Coordinates for an elementary abelian p-subgroup of G."""

    def __init__(self, fc: FusionContext, Z: Subgroup):
        p, mul = fc.p, fc._mul
        ident = fc.G.identity
        for z in Z.elements:
            if fc.G.root.power(z, p) != ident:
                raise FusionError("Z(P) is not elementary abelian")
        basis: list = []
        span = {ident: ()}
        for z in Z.elements:
            if z in span:
                continue
            basis.append(z)
            new = {}
            zk = ident
            for k in range(p):
                for x, c in span.items():
                    new[mul(zk, x)] = c + (k,)
                zk = mul(zk, z)
            # pad older coordinates with a trailing zero for the new generator
            span = {x: c + (0,) * (len(basis) - len(c)) for x, c in new.items()}
        self.p = p
        self.basis = basis
        self.coords = {x: np.array(c, dtype=np.int64) for x, c in span.items()}
        if len(self.coords) != Z.order:
            raise FusionError("Z(P) is not abelian")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix_of(self, fn) -> np.ndarray:
        """Matrix of an additive map given on elements, columns = images of the basis."""
        cols = [self.coords[fn(b)] for b in self.basis]
        if not cols:
            return np.zeros((0, 0), dtype=np.int64)
        return np.stack(cols, axis=1) % self.p


@dataclass
class ClassLocalData:
    rep: Subgroup
    Z: Subgroup
    zcoords: ElementaryAbelian
    normalizer: Subgroup
    kernel: Subgroup
    out: PermGroup
    lifts: list
    module: GModule

    @property
    def out_order(self) -> int:
        return self.out.order


def _coset_action(N: Subgroup, K: Subgroup, mul) -> tuple[PermGroup, list]:
    """N/K acting on the left cosets of K; generators come with lifts in N."""
    coset_of: dict = {}
    reps = []
    for n in N.elements:
        if n in coset_of:
            continue
        c = len(reps)
        reps.append(n)
        for k in K.element_set:
            coset_of[mul(n, k)] = c
    lifts = small_generating_set(N, N.element_set)
    gens = [tuple(coset_of[mul(g, r)] for r in reps) for g in lifts]
    ident = tuple(range(len(reps)))
    pairs = [(g, h) for g, h in zip(gens, lifts) if g != ident]
    gens = [g for g, _ in pairs]
    lifts = [h for _, h in pairs]
    out = PermGroup(len(reps), gens, name="Out")
    return out, lifts


def out_f(fc: FusionContext, P: Subgroup) -> ClassLocalData:
    """Out_F(P) = N_G(P)/(P C_G(P)) on cosets, with its action on Z(P) = C_S(P)."""
    N = fc.normalizer(P)
    C = fc.centralizer(P)
    mul = fc._mul
    K_elems = {mul(x, c) for x in P.element_set for c in C.element_set}
    K = subgroup_from_elements(fc.G, K_elems)
    if N.order % K.order:
        raise FusionError("P C_G(P) is not a subgroup of N_G(P)")
    out, lifts = _coset_action(N, K, mul)
    Z = fc.centralizer_in_s(P)
    zc = ElementaryAbelian(fc, Z)
    mats = [zc.matrix_of(lambda z, n=n: fc.conj(n, z)) for n in lifts]
    # the inner and centralizing part must act trivially on Z(P)
    ident = np.eye(zc.dim, dtype=np.int64)
    for k in small_generating_set(K, K.element_set):
        if not np.array_equal(zc.matrix_of(lambda z: fc.conj(k, z)), ident):
            raise FusionError("P C_G(P) does not act trivially on Z(P)")
    module = GModule(out, fc.p, mats, name="Z(P)", dim=zc.dim)
    module.matrix(out.identity)  # force the consistency check now
    return ClassLocalData(P, Z, zc, N, K, out, lifts, module)


def class_local_lambda(fc: FusionContext, P: Subgroup, i_max: int,
                       data: ClassLocalData | None = None, max_orbits: int = 100_000) -> LambdaResult:
    """Lambda^i(Out_F(P); Z(P)) for i <= i_max."""
    data = data or out_f(fc, P)
    return lambda_poset(data.out, data.module, i_max, max_orbits=max_orbits)


# ---------------------------------------------------------------------------
# the classification report

def _describe(P: Subgroup, X: Sequence[Subgroup]) -> str:
    for k, Q in enumerate(X):
        if Q == P:
            return f"X[{k}]"
    return P.name or "?"


def classify_linking_systems(fc: FusionContext, i_max: int = 4, lambda_top: int = 3,
                             max_orbits: int = 100_000, sets: TheoremSets | None = None) -> dict:
    """Counts of X- and Y-linking systems up to isomorphism, with supporting data.

    There is one X-class, and the Y-classes are in bijection with
    Lambda^3(Gamma; M), so there are p^dim of them; only one extends to X.
    """
    t0 = time.perf_counter()
    if fc.M is None:
        raise FusionError("classification needs a context built from a semidirect product")
    sets = sets or theorem_sets(fc)
    lam = lambda_poset(fc.gamma, fc.module, max(i_max, lambda_top), max_orbits=max_orbits)
    top = lam.dims[lambda_top]
    table = []
    for cls in fusion_classes(fc, sets.X):
        P = cls[0]
        data = out_f(fc, P)
        loc = class_local_lambda(fc, P, i_max, data=data, max_orbits=max_orbits)
        table.append({
            "rep": _describe(P, sets.X),
            "order": P.order,
            "class_size": len(cls),
            "outF_order": data.out_order,
            "zP_dim": data.zcoords.dim,
            "lambda_dims": loc.dims,
        })
    return {
        "prime": fc.p,
        "group_spec": fc.group_spec,
        "module_spec": fc.module_spec or fc.module.name,
        "lambda_dims": lam.dims[: max(i_max, lambda_top) + 1],
        "x_classes": 1,
        "y_classes": fc.p ** top,
        "extendable_y_classes": 1,
        "x_objects": len(sets.X),
        "y_objects": len(sets.Y),
        "checks": sets.checks,
        "per_class_table": table,
        "seconds": round(time.perf_counter() - t0, 3),
    }


# ---------------------------------------------------------------------------
# lim^i of the center functor on O(F^objects)

def center_functor(O: FusionOrbitCategory) -> tuple[ContravariantFunctor, list]:
    """P -> Z(P); a class [c_g]: P -> Q acts Z(Q) -> Z(P) by z -> g^-1 z g."""
    fc = O.fc
    coords = [ElementaryAbelian(fc, fc.centralizer_in_s(P)) for P in O.objects]
    dims = [c.dim for c in coords]

    def matrix(m):
        a, b = O.src[m], O.dst[m]
        g = O.reps[m]
        gi = fc.inv(g)
        if not dims[a] or not dims[b]:
            return np.zeros((dims[a], dims[b]), dtype=np.int64)
        src_c, dst_c = coords[b], coords[a]
        cols = [dst_c.coords[fc.conj(gi, z)] for z in src_c.basis]
        return np.stack(cols, axis=1) % fc.p

    return ContravariantFunctor(fc.p, dims, matrix), coords


def lim_z_direct(fc: FusionContext, objects: Sequence[Subgroup], i_max: int,
                 budget: int = 5_000_000, method: str = "resolution") -> list[int]:
    """dim lim^i of P -> Z(P) over O(F^objects).

    The default resolution method stays small where the normalized bar
    complex (``method="bar"``) grows past memory beyond degree 1.
    """
    O = FusionOrbitCategory(fc, objects)
    F, _ = center_functor(O)
    return lim_finite_category(O, F, i_max, budget=budget, method=method)
