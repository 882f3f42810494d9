"""F_p Gamma-modules given by one matrix per group generator.

Matrices act on column vectors.  The matrix of an arbitrary group element
is obtained by walking the Cayley graph from the identity; every edge is
checked, so a module whose generator matrices do not respect the group's
relations is rejected at first use.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from .groups import (Group, PermGroup, Subgroup, direct_product,
                     symmetric_group, wreath_product)
from .linalg import kernel_basis, rref


class ModuleError(ValueError):
    pass


class VectorCodec:
    """Integer codes for vectors of GF(p)^d: ``code = sum v_i p^i``."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.size = p ** dim
        self.powers = np.array([p ** i for i in range(dim)], dtype=np.int64)

    def encode(self, v) -> int:
        v = np.asarray(v, dtype=np.int64) % self.p
        return int(v @ self.powers) if self.dim else 0

    def decode(self, code: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.dim):
            code, out[i] = divmod(code, self.p)
        return out

    def all_vectors(self) -> np.ndarray:
        codes = np.arange(self.size, dtype=np.int64)
        return (codes[:, None] // self.powers[None, :]) % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.encode(self.decode(a) + self.decode(b))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.encode(-self.decode(a))

    def action_table(self, mat) -> tuple:
        if self.size > 1 << 20:
            raise ModuleError("module too large for an action table")
        vecs = self.all_vectors()
        images = (vecs @ np.asarray(mat, dtype=np.int64).T) % self.p
        return tuple((images @ self.powers).tolist())


class GModule:
    """A finite-dimensional F_p-representation of a concrete group."""

    def __init__(self, group: Group, p: int, matrices: Sequence, name: str = "M",
                 dim: int | None = None):
        self.group = group
        self.p = p
        self.name = name
        mats = [np.asarray(m, dtype=np.int64) % p for m in matrices]
        if len(mats) != len(group.gens):
            raise ModuleError(
                f"{len(mats)} matrices for {len(group.gens)} generators of {group.name}")
        dims = {m.shape for m in mats}
        if len(dims) > 1 or any(s[0] != s[1] for s in dims):
            raise ModuleError("generator matrices must be square of one size")
        if mats:
            self.dim = mats[0].shape[0]
        elif dim is None:
            raise ModuleError("dimension required when the group has no generators")
        else:
            self.dim = dim
        self.gen_matrices = mats
        self._mats: dict | None = None

    @classmethod
    def trivial(cls, group: Group, p: int, dim: int = 1, name: str | None = None) -> "GModule":
        return cls(group, p, [np.eye(dim, dtype=np.int64) for _ in group.gens],
                   name or f"trivial({p},{dim})", dim=dim)

    def _build(self):
        G = self.group
        ident = np.eye(self.dim, dtype=np.int64)
        for m in self.gen_matrices:
            if rank_mod(m, self.p) < self.dim:
                raise ModuleError("generator matrix is not invertible")
        mats = {G.identity: ident}
        queue = deque([G.identity])
        gens = list(zip(G.gens, self.gen_matrices))
        while queue:
            x = queue.popleft()
            X = mats[x]
            for s, S in gens:
                y = G.mul(x, s)
                Y = (X @ S) % self.p
                old = mats.get(y)
                if old is None:
                    mats[y] = Y
                    queue.append(y)
                elif not np.array_equal(old, Y):
                    raise ModuleError(
                        f"matrices do not define a representation of {G.name}")
        self._mats = mats

    def matrix(self, g) -> np.ndarray:
        if self._mats is None:
            self._build()
        try:
            return self._mats[g]
        except KeyError:
            raise ModuleError(f"{g!r} is not in {self.group.name}") from None

    def act(self, g, v) -> np.ndarray:
        return (self.matrix(g) @ np.asarray(v, dtype=np.int64)) % self.p

    def restrict(self, H: Group) -> "GModule":
        return GModule(H, self.p, [self.matrix(h) for h in H.gens], name=f"{self.name}|",
                       dim=self.dim)

    def __repr__(self):
        return f"<GModule {self.name} dim {self.dim} over {self.group.name} at p={self.p}>"


def rank_mod(m, p: int) -> int:
    return len(rref(m, p)[1])


def natural_module(p: int, degree: int | None = None, group: PermGroup | None = None) -> GModule:
    """The permutation module of Sym(n) over F_p modulo the constant vector.

    ``n`` defaults to p+1.  Basis: the images of e_0..e_{n-2}; e_{n-1} is
    congruent to -(e_0 + ... + e_{n-2}) in the quotient.
    """
    n = p + 1 if degree is None else degree
    G = group or symmetric_group(n)
    d = n - 1

    def mat(sigma):
        a = np.zeros((d, d), dtype=np.int64)
        for j in range(d):
            i = sigma[j]
            if i < d:
                a[i, j] = 1
            else:
                a[:, j] = p - 1
        return a

    return GModule(G, p, [mat(s) for s in G.gens], name=f"natural({p})")


def tensor(*mods: GModule) -> GModule:
    """M_1 (x) ... (x) M_k over the direct product of the owner groups."""
    if not mods:
        raise ModuleError("empty tensor product")
    p = mods[0].p
    if any(m.p != p for m in mods):
        raise ModuleError("prime mismatch in tensor product")
    G = direct_product(*[m.group for m in mods])
    dims = [m.dim for m in mods]
    mats = []
    for k, m in enumerate(mods):
        for A in m.gen_matrices:
            out = np.eye(1, dtype=np.int64)
            for j, d in enumerate(dims):
                out = np.kron(out, A if j == k else np.eye(d, dtype=np.int64))
            mats.append(out % p)
    name = "tensor(" + ",".join(m.name for m in mods) + ")"
    return GModule(G, p, mats, name=name)


def power_module(M: GModule, copies: int) -> GModule:
    """M^copies over wreath(Gamma, copies); block i belongs to coordinate i and
    the rotation sends block j to block j-1."""
    G = wreath_product(M.group, copies)
    d, q = M.dim, copies
    mats = []
    for A in M.gen_matrices:
        B = np.eye(d * q, dtype=np.int64)
        B[:d, :d] = A
        mats.append(B)
    if q > 1:
        R = np.zeros((d * q, d * q), dtype=np.int64)
        for j in range(q):
            i = (j - 1) % q
            R[i * d:(i + 1) * d, j * d:(j + 1) * d] = np.eye(d, dtype=np.int64)
        mats.append(R)
    return GModule(G, M.p, mats, name=f"power({M.name},{copies})")


def bind(M: GModule, group: Group) -> GModule:
    """Re-attach M's generator matrices to another group with matching generators."""
    if len(group.gens) != len(M.gen_matrices):
        raise ModuleError(
            f"{M.name} has {len(M.gen_matrices)} generator matrices but "
            f"{group.name} has {len(group.gens)} generators")
    if isinstance(M.group, PermGroup) and isinstance(group, PermGroup):
        if M.group.gens != group.gens:
            raise ModuleError(f"generators of {group.name} do not match {M.group.name}")
    return GModule(group, M.p, M.gen_matrices, name=M.name, dim=M.dim)


def fixed_space(M: GModule, H: Group) -> tuple[np.ndarray, list[int]]:
    """Basis of C_M(H) as columns of a d x k matrix, plus coordinate rows.

    The basis is in the canonical form from row reduction, so the
    coordinates of any vector of C_M(H) are its entries at ``free``.
    """
    d, p = M.dim, M.p
    blocks = [M.matrix(h) - np.eye(d, dtype=np.int64) for h in H.gens]
    if not blocks:
        return np.eye(d, dtype=np.int64), list(range(d))
    A = np.concatenate(blocks, axis=0) % p
    basis = kernel_basis(A, p)
    if not basis:
        return np.zeros((d, 0), dtype=np.int64), []
    B = np.stack(basis, axis=1)
    _, pivots = rref(A, p)
    free = [c for c in range(d) if c not in set(pivots)]
    return B, free


def fixed_points(M: GModule, H: Group) -> list[np.ndarray]:
    """Basis of C_M(H), the vectors fixed by every element of H."""
    B, _ = fixed_space(M, H)
    return [B[:, j].copy() for j in range(B.shape[1])]


def action_kernel(M: GModule) -> Subgroup:
    """C_Gamma(M): the elements acting as the identity."""
    from .groups import subgroup_from_elements

    ident = np.eye(M.dim, dtype=np.int64)
    ker = [g for g in M.group.elements if np.array_equal(M.matrix(g), ident)]
    return subgroup_from_elements(M.group, ker)


def is_faithful(M: GModule) -> bool:
    return action_kernel(M).order == 1
