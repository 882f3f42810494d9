"""Higher limits from a projective resolution of the constant functor.

For a finite category C and a contravariant functor F to GF(p)-vector
spaces, ``lim^i F = Ext^i(k, F)`` in the category of such functors.  The
representable functors ``P_c = k[Mor(-, c)]`` are projective with
``Hom(P_c, F) = F(c)``, so a resolution

    ... -> P^1 -> P^0 -> k -> 0,      P^n = sum over generators g of P_{c_g}

turns ``lim^*`` into the cohomology of ``sum_g F(c_g)``.  The resolution is
built greedily: each kernel is covered by generators chosen object by
object, terminal-most objects first, closing under endomorphisms.  The
result need not be minimal but is always a resolution, and it is usually
far smaller than the normalized bar complex when the category has many
morphisms.
"""

from __future__ import annotations

from array import array
from typing import Sequence

import numpy as np

from .categories import ContravariantFunctor, FiniteCategory
from .groups import BudgetExceeded
from .linalg import CochainComplex, SparseMatrix, cohomology_dims


# ---------------------------------------------------------------------------
# vectors: packed ints at p = 2, {index: coefficient} dicts otherwise

def _iter_bits(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


class _Vec:
    def __init__(self, p: int):
        self.p = p
        self.binary = p == 2

    def zero(self):
        return 0 if self.binary else {}

    def unit(self, i: int):
        return 1 << i if self.binary else {i: 1}

    def items(self, v):
        if self.binary:
            return ((i, 1) for i in _iter_bits(v))
        return v.items()

    def add_scaled(self, acc, v, s: int = 1):
        """acc + s*v (acc is consumed for dict vectors)."""
        if self.binary:
            return acc ^ v if s % 2 else acc
        p = self.p
        for i, c in v.items():
            x = (acc.get(i, 0) + s * c) % p
            if x:
                acc[i] = x
            else:
                acc.pop(i, None)
        return acc

    def is_zero(self, v) -> bool:
        return not v


class _Echelon:
    """An incrementally built echelon basis; ``reduce`` returns the residue."""

    def __init__(self, vec: _Vec):
        self.vec = vec
        self.pivots: dict = {}
        self.inv = [0] + [pow(a, -1, vec.p) for a in range(1, vec.p)] if vec.p > 2 else None

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v):
        vec = self.vec
        if vec.binary:
            piv = self.pivots
            while v:
                top = v.bit_length() - 1
                b = piv.get(top)
                if b is None:
                    return v
                v ^= b
            return v
        v = dict(v)
        while v:
            top = max(v)
            b = self.pivots.get(top)
            if b is None:
                return v
            vec.add_scaled(v, b, -v[top])
        return v

    def add(self, v) -> bool:
        """Insert v; return whether it was independent."""
        r = self.reduce(v)
        if not r:
            return False
        if self.vec.binary:
            self.pivots[r.bit_length() - 1] = r
        else:
            top = max(r)
            s = self.inv[r[top]]
            self.pivots[top] = {i: c * s % self.vec.p for i, c in r.items()}
        return True


def _kernel(vec: _Vec, columns: list, n_target: int) -> list:
    """Kernel of the linear map sending basis vector b to ``columns[b]``.

    Column b is stored as (target part shifted above the tags) + tag b.
    Pivots are taken on the highest coordinate, so the target part is
    eliminated first; a residue with no target part is a kernel vector.
    Each such vector contains its own tag and only smaller ones, so they
    are independent.
    """
    ech = _Echelon(vec)
    nb = len(columns)
    out = []
    for b, col in enumerate(columns):
        if vec.binary:
            r = ech.reduce((col << nb) | (1 << b))
            if not r >> nb:
                out.append(r)
                continue
        else:
            tagged = {i + nb: c for i, c in col.items()}
            tagged[b] = 1
            r = ech.reduce(tagged)
            if all(i < nb for i in r):
                out.append(r)
                continue
        ech.add(r)
    return out


# ---------------------------------------------------------------------------
# functors presented by their action on coordinate vectors

class _Constant:
    """The constant functor k."""

    def __init__(self, C: FiniteCategory, vec: _Vec):
        self.C = C
        self.vec = vec

    def dim(self, x: int) -> int:
        return 1

    def act(self, a: int, v):
        return v


class _Projective:
    """P = sum_g k[Mor(-, c_g)]; P(x) has basis (g, m) with m: x -> c_g."""

    def __init__(self, C: FiniteCategory, vec: _Vec, gens: Sequence[int]):
        self.C = C
        self.vec = vec
        self.gens = list(gens)
        n = len(C.objects)
        self.basis: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.index: list[dict] = [dict() for _ in range(n)]
        for x in range(n):
            for g, c in enumerate(self.gens):
                for m in C.morphisms(x, c):
                    self.index[x][(g, m)] = len(self.basis[x])
                    self.basis[x].append((g, m))
        self._perm: dict = {}

    def dim(self, x: int) -> int:
        return len(self.basis[x])

    def basis_map(self, a: int) -> list[int]:
        """P(a) on basis indices, for a: x' -> x: (g, m) -> (g, m o a)."""
        got = self._perm.get(a)
        if got is None:
            C = self.C
            xs = C.src[a]
            idx = self.index[xs]
            got = [idx[(g, C.compose(m, a))] for g, m in self.basis[C.dst[a]]]
            self._perm[a] = got
        return got

    def act(self, a: int, v):
        pm = self.basis_map(a)
        vec = self.vec
        if vec.binary:
            out = 0
            for i in _iter_bits(v):
                out ^= 1 << pm[i]
            return out
        out: dict = {}
        for i, c in v.items():
            vec.add_scaled(out, {pm[i]: c})
        return out


def _object_order(C: FiniteCategory) -> list[int]:
    """Objects sorted so that targets of non-invertible maps tend to come first."""
    n = len(C.objects)
    reach = [set() for _ in range(n)]
    for (a, b), ms in C.hom.items():
        if a != b and ms:
            reach[a].add(b)
    # transitive closure; n is small
    changed = True
    while changed:
        changed = False
        for a in range(n):
            extra = set().union(*(reach[b] for b in reach[a])) - reach[a] if reach[a] else set()
            if extra:
                reach[a] |= extra
                changed = True
    return sorted(range(n), key=lambda a: (len(reach[a]), a))


def _cover(C: FiniteCategory, G, spaces: list[list], order: list[int], budget: int):
    """Generators (object, vector) of the subfunctor of G with values ``spaces``."""
    vec = G.vec
    gens: list[tuple[int, object]] = []
    for x in order:
        if not spaces[x]:
            continue
        span = _Echelon(vec)
        for c, v in gens:
            for a in C.morphisms(x, c):
                span.add(G.act(a, v))
        endos = C.morphisms(x, x)
        for w in spaces[x]:
            if len(span) >= len(spaces[x]):
                break
            if not span.reduce(w):
                continue
            gens.append((x, w))
            if len(gens) > budget:
                raise BudgetExceeded(f"resolution needs more than {budget} generators")
            for a in endos:
                span.add(G.act(a, w))
    return gens


def _differential_columns(G, P: _Projective, images: list, x: int) -> list:
    """Columns of the map P(x) -> G(x) sending generator g to images[g]."""
    return [G.act(m, images[g]) for g, m in P.basis[x]]


def projective_resolution(C: FiniteCategory, p: int, length: int, budget: int = 200_000):
    """Projectives P^0..P^length resolving k, as (generator objects, images).

    ``images[n][g]`` is the image of generator g of P^n, a vector in
    P^{n-1}(c_g) (in k(c_g) for n = 0).
    """
    vec = _Vec(p)
    order = _object_order(C)
    n_obj = len(C.objects)
    target = _Constant(C, vec)
    spaces = [[vec.unit(0)] for _ in range(n_obj)]
    levels = []
    for n in range(length + 1):
        gens = _cover(C, target, spaces, order, budget)
        objs = [c for c, _ in gens]
        images = [v for _, v in gens]
        levels.append((objs, images))
        if n == length:
            break
        P = _Projective(C, vec, objs)
        spaces = []
        for x in range(n_obj):
            cols = _differential_columns(target, P, images, x)
            spaces.append(_kernel(vec, cols, target.dim(x)))
        target = P
    return levels


def lim_complex_from_resolution(C: FiniteCategory, F: ContravariantFunctor, levels) -> CochainComplex:
    """The complex Hom(P^n, F) = sum_g F(c_g) and its differentials."""
    p = F.p
    vec = _Vec(p)
    dims, offsets = [], []
    for objs, _ in levels:
        off, total = [], 0
        for c in objs:
            off.append(total)
            total += F.dims[c]
        offsets.append(off)
        dims.append(total)
    diffs = []
    for n in range(1, len(levels)):
        objs_lo, _ = levels[n - 1]
        objs_hi, images = levels[n]
        # basis of P^{n-1}(x) is (generator, morphism) in generator order
        P = _Projective(C, vec, objs_lo)
        R, K, V = array("q"), array("q"), array("q")
        for g, (c, v) in enumerate(zip(objs_hi, images)):
            r0 = offsets[n][g]
            if not F.dims[c]:
                continue
            for i, coef in vec.items(v):
                j, m = P.basis[c][i]
                dj = F.dims[objs_lo[j]]
                if not dj:
                    continue
                block = (F.matrix(m) * coef) % p
                nz_r, nz_c = np.nonzero(block)
                R.extend((nz_r + r0).tolist())
                K.extend((nz_c + offsets[n - 1][j]).tolist())
                V.extend(block[nz_r, nz_c].tolist())
        diffs.append(SparseMatrix.from_arrays(p, dims[n], dims[n - 1], R, K, V))
    return CochainComplex(p, dims, diffs)


def lim_by_resolution(C: FiniteCategory, F: ContravariantFunctor, i_max: int,
                      budget: int = 200_000, check: bool = True) -> list[int]:
    """dim lim^i F for i = 0..i_max via a projective resolution of k."""
    if check:
        F.check(C)
    levels = projective_resolution(C, F.p, i_max + 1, budget)
    K = lim_complex_from_resolution(C, F, levels)
    return cohomology_dims(K)[: i_max + 1]
