import itertools

import numpy as np
import pytest

from fusionlim.groups import generated_subgroup, symmetric_group, trivial_subgroup
from fusionlim.modules import (
    GModule, ModuleError, VectorCodec, action_kernel, fixed_points, is_faithful, natural_module,
    power_module, tensor,
)


def brute_fixed_dim(M, H):
    """log_p of the number of vectors fixed by every element of H."""
    count = 0
    for v in itertools.product(range(M.p), repeat=M.dim):
        v = np.array(v)
        if all(np.array_equal(M.act(h, v), v % M.p) for h in H.elements):
            count += 1
    return round(np.log(count) / np.log(M.p))


def test_natural_module_dims():
    V = natural_module(2)
    assert V.dim == 2 and V.group.order == 6
    assert natural_module(3).dim == 3
    assert natural_module(2, degree=4).dim == 3


def test_natural_module_fixed_points():
    V = natural_module(2)
    S3 = V.group
    t = generated_subgroup(S3, [(1, 0, 2)])
    assert len(fixed_points(V, S3)) == brute_fixed_dim(V, S3) == 0
    assert len(fixed_points(V, t)) == brute_fixed_dim(V, t) == 1
    assert len(fixed_points(V, trivial_subgroup(S3))) == 2


def test_natural_module_is_quotient_of_permutation_module():
    # e_i maps to e_{sigma(i)}, and e_{n-1} is minus the sum of the others
    p, n = 3, 4
    V = natural_module(p, degree=n)
    for sigma in V.group.elements:
        A = V.matrix(sigma)
        for j in range(n - 1):
            i = sigma[j]
            want = np.zeros(n - 1, dtype=np.int64)
            if i < n - 1:
                want[i] = 1
            else:
                want[:] = p - 1
            assert np.array_equal(A[:, j], want)


def test_tensor_module():
    V = natural_module(2)
    T = tensor(V, V, V)
    assert T.dim == 8
    assert T.group.order == 216
    ident = T.group.identity
    assert np.array_equal(T.matrix(ident), np.eye(8, dtype=np.int64))
    assert is_faithful(T)


def test_tensor_acts_as_kronecker_product():
    V = natural_module(2)
    T = tensor(V, V)
    G = T.group
    # a generator of the first factor acts as A (x) I
    A = V.gen_matrices[0]
    assert np.array_equal(T.gen_matrices[0], np.kron(A, np.eye(2, dtype=np.int64)) % 2)
    assert G.order == 36


def test_power_module():
    V = natural_module(2)
    P = power_module(V, 2)
    assert P.dim == 4 and P.group.order == 72
    PP = power_module(P, 2)
    assert PP.dim == 8 and PP.group.order == 72 * 72 * 2


def test_power_module_base_acts_blockwise():
    V = natural_module(2)
    P = power_module(V, 2)
    W = P.group
    for g in V.group.elements:
        # g on the first three points is a base element on block 0
        x = tuple(g) + (3, 4, 5)
        assert x in W
        A = P.matrix(x)
        assert np.array_equal(A[:2, :2], V.matrix(g))
        assert np.array_equal(A[2:, 2:], np.eye(2, dtype=np.int64))
        assert not A[:2, 2:].any() and not A[2:, :2].any()


def test_faithfulness():
    V = natural_module(2)
    assert is_faithful(V)
    assert not is_faithful(GModule.trivial(V.group, 2))
    assert action_kernel(GModule.trivial(V.group, 2)).order == 6


def test_bad_matrices_are_rejected():
    S3 = symmetric_group(3)
    with pytest.raises(ModuleError):
        GModule(S3, 2, [np.eye(2)])
    # identity for the transposition and a non-involution elsewhere breaks relations
    bad = GModule(S3, 2, [np.eye(2, dtype=np.int64), np.array([[1, 1], [0, 1]])])
    with pytest.raises(ModuleError):
        bad.matrix(S3.identity)


def test_codec_roundtrip():
    c = VectorCodec(3, 4)
    for code in range(3 ** 4):
        assert c.encode(c.decode(code)) == code
    a, b = c.encode([1, 2, 0, 1]), c.encode([2, 2, 1, 0])
    assert np.array_equal(c.decode(c.add(a, b)), [0, 1, 1, 1])
    assert c.add(a, c.neg(a)) == 0
