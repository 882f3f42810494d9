"""Lambda^i(Gamma; M): higher limits over O_T(Gamma) of the functor that is M
at the trivial subgroup and 0 elsewhere.

Two independent backends:

* ``lambda_bar_oracle`` builds the orbit category O_T(Gamma) literally and
  takes the normalized nerve complex.  Exact but only feasible for small
  Gamma.
* ``lambda_poset`` uses Gamma-equivariant M-valued cochains on chains of
  nontrivial p-subgroups, augmented by C_M(Gamma) in degree 0.  In degree
  n the cochains are the direct sum over chain orbits sigma (n members) of
  C_M(Stab(sigma)), and the coboundary is the alternating face sum with
  each face transported to its orbit representative.

The closed form for |T| = p, the Kunneth convolution and the vanishing
preflight complete the module.
"""

from __future__ import annotations

from array import array

import time
from dataclasses import dataclass, field

import numpy as np

from .categories import GroupOrbitCategory, atomic_functor_at_trivial, lim_finite_category
from .groups import (Group, GroupError, PSubgroupChains, normalizer, p_core, p_part,
                     sylow)
from .linalg import CochainComplex, SparseMatrix, cohomology_dims
from .modules import GModule, action_kernel, fixed_space


@dataclass
class LambdaResult:
    p: int
    dims: list[int]
    backend: str
    seconds: float = 0.0
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")

    def __getitem__(self, i: int) -> int:
        return self.dims[i]

    @property
    def i_max(self) -> int:
        return len(self.dims) - 1

    def as_dict(self) -> dict:
        return {"prime": self.p, "dims": list(self.dims), "backend": self.backend,
                "seconds": round(self.seconds, 3)}


def _check_module(Gam: Group, M: GModule):
    if M.group is not Gam and M.group.element_set != Gam.element_set:
        raise GroupError("module is not defined over the given group")


def lambda_bar_oracle(Gam: Group, M: GModule, i_max: int,
                      max_chains: int = 5_000_000) -> LambdaResult:
    """Lambda^i for i <= i_max straight from the orbit category O_T(Gamma)."""
    t0 = time.perf_counter()
    _check_module(Gam, M)
    O = GroupOrbitCategory(Gam, p=M.p)
    F = atomic_functor_at_trivial(O, M)
    dims = lim_finite_category(O, F, i_max, budget=max_chains)
    return LambdaResult(M.p, dims, "bar", time.perf_counter() - t0,
                        {"morphisms": O.n_morphisms})


class PosetComplex:
    """The equivariant chain-orbit cochain complex for Lambda^*(Gamma; M)."""

    def __init__(self, Gam: Group, M: GModule, max_orbits: int = 100_000,
                 chains: PSubgroupChains | None = None):
        _check_module(Gam, M)
        self.group = Gam
        self.module = M
        self.p = M.p
        self.chains = chains or PSubgroupChains(Gam, M.p, max_orbits=max_orbits)
        self._spaces: dict[int, list] = {}

    def spaces(self, n: int):
        """Per-orbit (basis, coordinate rows) of C_M(Stab) at level n."""
        got = self._spaces.get(n)
        if got is None:
            got = [fixed_space(self.module, orb.stabilizer) for orb in self.chains.level(n)]
            self._spaces[n] = got
        return got

    def offsets(self, n: int) -> tuple[list[int], int]:
        offs, total = [], 0
        for B, _ in self.spaces(n):
            offs.append(total)
            total += B.shape[1]
        return offs, total

    def differential(self, n: int) -> SparseMatrix:
        """d^n: D^n -> D^{n+1}."""
        p, M, G = self.p, self.module, self.group
        col_off, ncols = self.offsets(n)
        row_off, nrows = self.offsets(n + 1)
        low = self.spaces(n)
        R, K, V = array("q"), array("q"), array("q")
        for orb, (Bs, free), r0 in zip(self.chains.level(n + 1), self.spaces(n + 1), row_off):
            if not free:
                continue
            for i, (j, g) in enumerate(orb.faces):
                Bt = low[j][0]
                if Bt.shape[1] == 0:
                    continue
                block = (M.matrix(G.root.inv(g)) @ Bt)[free, :] % p
                if i % 2:
                    block = (-block) % p
                nz_r, nz_c = np.nonzero(block)
                c0 = col_off[j]
                R.extend((nz_r + r0).tolist())
                K.extend((nz_c + c0).tolist())
                V.extend(block[nz_r, nz_c].tolist())
        return SparseMatrix.from_arrays(p, nrows, ncols, R, K, V)

    def complex(self, top: int) -> CochainComplex:
        dims = [self.offsets(n)[1] for n in range(top + 1)]
        diffs = [self.differential(n) for n in range(top)]
        return CochainComplex(self.p, dims, diffs)


def lambda_resolution(Gam: Group, M: GModule, i_max: int,
                      max_generators: int = 200_000) -> LambdaResult:
    """Lambda^i from O_T(Gamma) through a projective resolution of the constant functor."""
    from .resolution import lim_by_resolution

    t0 = time.perf_counter()
    _check_module(Gam, M)
    O = GroupOrbitCategory(Gam, p=M.p)
    F = atomic_functor_at_trivial(O, M)
    dims = lim_by_resolution(O, F, i_max, budget=max_generators)
    return LambdaResult(M.p, dims, "resolution", time.perf_counter() - t0,
                        {"morphisms": O.n_morphisms})


def lambda_poset(Gam: Group, M: GModule, i_max: int, max_orbits: int = 100_000,
                 chains: PSubgroupChains | None = None) -> LambdaResult:
    """Lambda^i for i <= i_max from chain orbits of nontrivial p-subgroups."""
    t0 = time.perf_counter()
    pc = PosetComplex(Gam, M, max_orbits=max_orbits, chains=chains)
    K = pc.complex(i_max + 1)
    dims = cohomology_dims(K)[: i_max + 1]
    notes = {"orbits": [len(pc.chains.level(n)) for n in range(1, i_max + 2)]}
    return LambdaResult(M.p, dims, "poset", time.perf_counter() - t0, notes)


def lambda_closed_form_sylow_p(Gam: Group, M: GModule, i_max: int = 3) -> LambdaResult:
    """For |T| = p: Lambda^1 = C_M(N(T)) / C_M(Gamma), all other degrees 0."""
    t0 = time.perf_counter()
    _check_module(Gam, M)
    p = M.p
    T = sylow(Gam, p)
    if T.order != p:
        raise GroupError(f"Sylow {p}-subgroup has order {T.order}, not {p}")
    N = normalizer(Gam, T)
    top = fixed_space(M, N)[0].shape[1] - fixed_space(M, Gam)[0].shape[1]
    dims = [0] * (max(i_max, 1) + 1)
    dims[1] = top
    return LambdaResult(p, dims[: i_max + 1], "closed-form", time.perf_counter() - t0)


def kunneth_combine(dims1, dims2, k_max: int) -> list[int]:
    """Dimension convolution: sum_j dims1[j] * dims2[k - j] for k <= k_max."""
    if len(dims1) <= k_max or len(dims2) <= k_max:
        raise ValueError("dimension sequences must cover degrees 0..k_max")
    return [sum(dims1[j] * dims2[k - j] for j in range(k + 1)) for k in range(k_max + 1)]


def vanishing_preflight(Gam: Group, M: GModule) -> str | None:
    """A reason Lambda^*(Gamma; M) vanishes identically, if a cheap one applies."""
    p = M.p
    ker = action_kernel(M)
    if ker.order % p == 0:
        return f"p divides |C_Gamma(M)| = {ker.order}"
    core = p_core(Gam, p)
    if core.order > 1:
        return f"O_p(Gamma) != 1 (order {core.order})"
    return None


def lambda_zero_law(Gam: Group, M: GModule) -> int:
    """dim Lambda^0: 0 when p divides |Gamma|, otherwise dim C_M(Gamma)."""
    if Gam.order % M.p == 0:
        return 0
    return fixed_space(M, Gam)[0].shape[1]


def wreath_shift(Gam: Group, p: int, dims: list[int]) -> list[int]:
    """Predicted dims of Lambda^*(Gamma wr C_p; M^p) from those of Lambda^*(Gamma; M).

    Lambda^i shifts up by one degree; Lambda^0 of the wreath product is 0.
    Requires p to divide |Gamma|.
    """
    if p_part(Gam.order, p) == 1:
        raise GroupError("the wreath shift needs p to divide |Gamma|")
    return [0] + list(dims)


def lambda_dims(Gam: Group, M: GModule, i_max: int, backend: str = "poset", **budgets) -> LambdaResult:
    if backend == "poset":
        return lambda_poset(Gam, M, i_max, max_orbits=budgets.get("max_orbits", 100_000))
    if backend == "bar":
        return lambda_bar_oracle(Gam, M, i_max, max_chains=budgets.get("max_chains", 5_000_000))
    if backend == "resolution":
        return lambda_resolution(Gam, M, i_max,
                                 max_generators=budgets.get("max_generators", 200_000))
    if backend == "closed-form":
        return lambda_closed_form_sylow_p(Gam, M, i_max)
    raise ValueError(f"unknown backend {backend!r}")
