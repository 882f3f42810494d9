"""Finite categories and higher limits of contravariant functors on them.

``lim^i`` is computed from the normalized nerve: n-cochains assign to every
chain ``c_0 -f_1-> c_1 -> ... -f_n-> c_n`` of non-identity morphisms a
value in ``F(c_0)``, with

    (d phi)(f_1..f_{n+1}) = F(f_1) phi(f_2..f_{n+1})
                            + sum_{i=1..n} (-1)^i phi(.., f_{i+1} f_i, ..)
                            + (-1)^{n+1} phi(f_1..f_n)

and terms whose merged chain contains an identity dropped.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np

from .groups import BudgetExceeded, Group, Subgroup, all_subgroups, sylow
from .linalg import CochainComplex, SparseMatrix, cohomology_dims


class CategoryError(ValueError):
    pass


class FiniteCategory:
    """Objects, morphisms ``0..n-1`` with source/target, and composition.

    ``compose_fn(g, f)`` returns the id of ``g o f`` (f first).  Results are
    memoised, so a lazily computed composition behaves like a table.
    """

    def __init__(self, objects: Sequence, src: Sequence[int], dst: Sequence[int],
                 identities: Sequence[int], compose_fn: Callable[[int, int], int],
                 labels: Sequence[Hashable] | None = None):
        self.objects = list(objects)
        self.src = list(src)
        self.dst = list(dst)
        self.identities = list(identities)
        self._compose_fn = compose_fn
        self._table: dict = {}
        self.labels = list(labels) if labels is not None else None
        self.is_identity = [False] * len(self.src)
        for i in self.identities:
            self.is_identity[i] = True
        self.out: list[list[int]] = [[] for _ in self.objects]
        self.hom: dict[tuple[int, int], list[int]] = {}
        for m, (a, b) in enumerate(zip(self.src, self.dst)):
            self.hom.setdefault((a, b), []).append(m)
            if not self.is_identity[m]:
                self.out[a].append(m)

    @classmethod
    def from_table(cls, objects, src, dst, identities, table: dict) -> "FiniteCategory":
        def fn(g, f):
            return table[(g, f)]
        return cls(objects, src, dst, identities, fn)

    @property
    def n_morphisms(self) -> int:
        return len(self.src)

    def morphisms(self, a: int, b: int) -> list[int]:
        return self.hom.get((a, b), [])

    def compose(self, g: int, f: int) -> int:
        """``g o f``; requires dst(f) == src(g)."""
        key = (g, f)
        r = self._table.get(key)
        if r is None:
            if self.dst[f] != self.src[g]:
                raise CategoryError(f"morphisms {g} and {f} are not composable")
            r = self._compose_fn(g, f)
            if self.src[r] != self.src[f] or self.dst[r] != self.dst[g]:
                raise CategoryError("composite has the wrong source or target")
            self._table[key] = r
        return r

    def check_laws(self) -> None:
        """Identity and associativity laws, exhaustively."""
        n = self.n_morphisms
        for f in range(n):
            if self.compose(self.identities[self.dst[f]], f) != f:
                raise CategoryError(f"left identity fails at {f}")
            if self.compose(f, self.identities[self.src[f]]) != f:
                raise CategoryError(f"right identity fails at {f}")
        for f in range(n):
            for g in self.out[self.dst[f]] + [self.identities[self.dst[f]]]:
                gf = self.compose(g, f)
                for h in self.out[self.dst[g]]:
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise CategoryError(f"associativity fails at ({h},{g},{f})")

    def is_ei(self) -> bool:
        for a in range(len(self.objects)):
            for m in self.morphisms(a, a):
                if not any(self.compose(k, m) == self.identities[a]
                           for k in self.morphisms(a, a)):
                    return False
        return True


@dataclass
class ContravariantFunctor:
    """A functor C^op -> GF(p)-vector spaces.

    ``matrix(m)`` for ``m: a -> b`` is the ``dims[a] x dims[b]`` matrix of
    F(m): F(b) -> F(a).
    """

    p: int
    dims: list[int]
    matrix: Callable[[int], np.ndarray]

    def check(self, C: FiniteCategory) -> None:
        """F(id) = 1 and F(g o f) = F(f) F(g) on every composable pair with F(src) != 0."""
        p = self.p
        for a, i in enumerate(C.identities):
            if self.dims[a] and not np.array_equal(self.matrix(i) % p,
                                                   np.eye(self.dims[a], dtype=np.int64)):
                raise CategoryError(f"F(identity of object {a}) is not the identity")
        for f in range(C.n_morphisms):
            if not self.dims[C.src[f]]:
                continue
            Ff = self.matrix(f)
            for g in C.out[C.dst[f]]:
                lhs = self.matrix(C.compose(g, f)) % p
                rhs = (Ff @ self.matrix(g)) % p
                if not np.array_equal(lhs, rhs):
                    raise CategoryError(f"functoriality fails on ({g},{f})")


def normalized_chains(C: FiniteCategory, starts: Sequence[int], length: int,
                      budget: int) -> list[list[tuple]]:
    """Chains of non-identity morphisms by length; length-0 chains are ``(obj,)``."""
    levels: list[list[tuple]] = [[(a,) for a in starts]]
    ends = list(starts)
    for n in range(1, length + 1):
        nxt, nends = [], []
        for ch, end in zip(levels[-1], ends):
            base = ch if n > 1 else ()
            for m in C.out[end]:
                nxt.append(base + (m,))
                nends.append(C.dst[m])
        if len(nxt) > budget:
            raise BudgetExceeded(f"{len(nxt)} normalized chains of length {n} exceed {budget}")
        levels.append(nxt)
        ends = nends
    return levels


def lim_complex(C: FiniteCategory, F: ContravariantFunctor, top: int,
                budget: int = 5_000_000) -> CochainComplex:
    """Normalized cochain complex C^0..C^top for ``lim F``."""
    p = F.p
    starts = [a for a in range(len(C.objects)) if F.dims[a]]
    levels = normalized_chains(C, starts, top, budget)

    offsets = []
    dims = []
    for n, chains in enumerate(levels):
        off = {}
        total = 0
        for ch in chains:
            c0 = ch[0] if n == 0 else C.src[ch[0]]
            off[ch] = total
            total += F.dims[c0]
        offsets.append(off)
        dims.append(total)

    diffs = []
    for n in range(top):
        rows_off, cols_off = offsets[n + 1], offsets[n]
        # compact coordinate buffers; tuples of ints cost ~100 bytes per entry
        R, K, V = array("q"), array("q"), array("q")
        for ch, r0 in rows_off.items():
            c0 = C.src[ch[0]]
            d0 = F.dims[c0]
            c1 = C.dst[ch[0]]
            # face 0: F(f_1) applied to the tail
            if F.dims[c1]:
                tail = ch[1:] if n > 0 else (c1,)
                col = cols_off.get(tail)
                if col is None:
                    raise CategoryError("missing tail chain")
                block = F.matrix(ch[0]) % p
                nz_r, nz_c = np.nonzero(block)
                R.extend((nz_r + r0).tolist())
                K.extend((nz_c + col).tolist())
                V.extend(block[nz_r, nz_c].tolist())
            # inner faces: merge f_i and f_{i+1}
            for i in range(1, n + 1):
                h = C.compose(ch[i], ch[i - 1])
                if C.is_identity[h]:
                    continue
                face = ch[:i - 1] + (h,) + ch[i + 1:]
                col = cols_off[face]
                s = (-1) ** i % p
                R.extend(range(r0, r0 + d0))
                K.extend(range(col, col + d0))
                V.extend([s] * d0)
            # last face: drop f_{n+1}
            face = ch[:n] if n > 0 else (c0,)
            col = cols_off[face]
            s = (-1) ** (n + 1) % p
            R.extend(range(r0, r0 + d0))
            K.extend(range(col, col + d0))
            V.extend([s] * d0)
        diffs.append(SparseMatrix.from_arrays(p, dims[n + 1], dims[n], R, K, V))
        del R, K, V
    return CochainComplex(p, dims, diffs)


def lim_finite_category(C: FiniteCategory, F: ContravariantFunctor, i_max: int,
                        budget: int = 5_000_000, check: bool = True,
                        method: str = "bar") -> list[int]:
    """dim lim^i F for i = 0..i_max.

    ``method="bar"`` uses the normalized cochain complex (``budget`` bounds
    the chain count); ``method="resolution"`` uses a projective resolution
    of the constant functor (``budget`` bounds the generator count).
    """
    if check:
        F.check(C)
    if method == "resolution":
        from .resolution import lim_by_resolution

        return lim_by_resolution(C, F, i_max, budget=min(budget, 200_000), check=False)
    if method != "bar":
        raise ValueError(f"unknown method {method!r}")
    K = lim_complex(C, F, i_max + 1, budget)
    return cohomology_dims(K)[: i_max + 1]


# ---------------------------------------------------------------------------
# the orbit category O_T(Gamma)

class GroupOrbitCategory(FiniteCategory):
    """O_T(Gamma): objects the subgroups of T, Mor(P, Q) the Gamma-maps
    Gamma/P -> Gamma/Q, i.e. cosets ``aQ`` with ``a^-1 P a <= Q``.

    A morphism is stored as (source, target, canonical coset representative)
    and ``(bR) o (aQ) = abR``.
    """

    def __init__(self, Gam: Group, T: Subgroup | None = None, p: int | None = None,
                 objects: Sequence[Subgroup] | None = None):
        if T is None:
            if p is None:
                raise ValueError("need a Sylow subgroup or a prime")
            T = sylow(Gam, p)
        self.group = Gam
        self.T = T
        objs = list(objects) if objects is not None else all_subgroups(T)
        mul, inv = Gam.root.mul, Gam.root.inv
        reps, src, dst = [], [], []
        index: dict = {}
        identities = []
        for i, P in enumerate(objs):
            for j, Q in enumerate(objs):
                qset = Q.element_set
                seen = set()
                for a in Gam.elements:
                    ai = inv(a)
                    if not all(mul(mul(ai, x), a) in qset for x in P.gens):
                        continue
                    rep = min(mul(a, q) for q in qset)
                    if rep in seen:
                        continue
                    seen.add(rep)
                    index[(i, j, rep)] = len(reps)
                    reps.append(rep)
                    src.append(i)
                    dst.append(j)
            identities.append(index[(i, i, min(objs[i].element_set))])
        self.reps = reps
        self._index = index

        def compose(g, f):
            a, b = reps[f], reps[g]
            k = dst[g]
            ab = mul(a, b)
            rep = min(mul(ab, r) for r in objs[k].element_set)
            return index[(src[f], k, rep)]

        super().__init__(objs, src, dst, identities, compose)


def atomic_functor_at_trivial(O: GroupOrbitCategory, M) -> ContravariantFunctor:
    """F_M: M at the trivial subgroup (with Aut(1) = Gamma acting as on M), 0 elsewhere."""
    dims = [M.dim if P.order == 1 else 0 for P in O.objects]
    zero_cache: dict = {}

    def matrix(m):
        a, b = O.src[m], O.dst[m]
        if dims[a] and dims[b]:
            return M.matrix(O.reps[m])
        key = (dims[a], dims[b])
        z = zero_cache.get(key)
        if z is None:
            z = zero_cache[key] = np.zeros(key, dtype=np.int64)
        return z

    return ContravariantFunctor(M.p, dims, matrix)
