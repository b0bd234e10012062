import random

import numpy as np
import pytest

from skeinrep.cfalgebra import CFAlgebra
from skeinrep.errors import (NotDiagonalizable, NotMonomial, NotOneVertex,
                             NotSeparating)
from skeinrep.kernels import (Subspace, eigen_analysis, kernel_equality_check,
                              matrix_kernel, offdiag_kernel,
                              sample_generic_weights, tensor_split,
                              total_kernel)
from skeinrep.representation import WeightSystem, build_rep
from skeinrep.triangulation import standard_library

from conftest import random_balanced_monomial


@pytest.fixture(scope="module")
def torus_rep():
    T = standard_library("torus1")
    alg = CFAlgebra(T, 3)
    one = alg.scalars.one()
    W = WeightSystem(T, 3, u=[one, one, alg.scalars.omega(1)])
    return build_rep(T, 3, W, algebra=alg)


@pytest.fixture(scope="module")
def sphere_rep():
    T = standard_library("sphere2")
    alg = CFAlgebra(T, 3)
    w = alg.scalars.omega(1)
    return build_rep(T, 3, WeightSystem(T, 3, u=[w, w, w]), algebra=alg)


@pytest.fixture(scope="module")
def genus2_rep():
    T = standard_library("genus2_sep")
    W = sample_generic_weights(T, 3, random.Random(11))
    return build_rep(T, 3, W)


# ---- off-diagonal kernels ----

def test_torus_kernel_full(torus_rep):
    # mu(Q_v) = 0, so the kernel is everything
    M = torus_rep.apply(torus_rep.algebra.offdiag_Q(0))
    assert all(v.is_zero() for row in M for v in row)
    F = total_kernel(torus_rep)
    assert F.dim == 3 == torus_rep.N


def test_sphere_kernel_full(sphere_rep):
    for v in range(3):
        M = sphere_rep.apply(sphere_rep.algebra.offdiag_Q(v))
        assert all(x.is_zero() for row in M for x in row)
    assert total_kernel(sphere_rep).dim == 1


def test_genus2_kernel_dims(genus2_rep):
    F = total_kernel(genus2_rep)
    assert F.dim == 27  # N^(3(g-1)) at N=3, g=2
    Fv = offdiag_kernel(genus2_rep, 0)
    assert Fv.dim == 27
    assert F.equals(Fv)


def test_kernel_start_independent(genus2_rep):
    base = offdiag_kernel(genus2_rep, 0, start=0)
    for start in (3, 7, 11, 17):
        assert offdiag_kernel(genus2_rep, 0, start=start).equals(base)


def test_kernel_not_invariant_under_whole_algebra(genus2_rep):
    # irreducibility: some Z_j^2 image moves F_v off itself
    rep = genus2_rep
    F = offdiag_kernel(rep, 0)
    moved = [j for j in range(rep.algebra.n)
             if not F.is_invariant_under(rep.apply(rep.algebra.gen(j, 2)))]
    assert moved


# ---- eigen analysis ----

def test_eigen_scalar_matrix(torus_rep):
    rep = torus_rep
    M = np.eye(5, dtype=complex) * (2 - 1j)
    out = eigen_analysis(M, "float")
    assert out == [((2 - 1j), 5)]


def test_eigen_rejects_nilpotent():
    M = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotDiagonalizable):
        eigen_analysis(M, "float")


def test_eigen_exact_candidates(torus_rep):
    rep = torus_rep
    alg = rep.algebra
    M = rep.apply(alg.gen(0, 2))
    # mu(Z_0^2)^N = x_0 = 1, so eigenvalues are cube roots of unity
    cands = [alg.scalars.omega(4 * k) for k in range(3)]
    out = eigen_analysis(M, "exact", candidates=cands)
    assert sorted(m for _, m in out) == [1, 1, 1]


# ---- tensor split ----

def test_tensor_split_H(genus2_rep):
    alg = genus2_rep.algebra
    e = alg.T.designated_edge
    H = alg.central_H(0)
    f1, f2, m = tensor_split(alg, e, H)
    assert m == 1
    assert f1 == alg.one() and f2 == alg.one()


def test_tensor_split_roundtrip(genus2_rep):
    alg = genus2_rep.algebra
    e = alg.T.designated_edge
    rng = random.Random(3)
    count = 0
    while count < 100:
        a = random_balanced_monomial(alg, rng, bound=2)
        k, _ = a.monomial_data()
        if k[e] % 2 != 0:
            continue
        count += 1
        f1, f2, m = tensor_split(alg, e, a)
        s1, s2 = alg.T.side_edges(e)
        assert f1.support() <= s1 or f1.support() <= s2
        assert f2.support() <= s2 or f2.support() <= s1
        assert f1.support().isdisjoint(f2.support())
        assert f1 * f2 * alg.central_H(0) ** m == a


def test_tensor_split_errors(genus2_rep, torus_rep):
    alg = genus2_rep.algebra
    e = alg.T.designated_edge
    with pytest.raises(NotMonomial):
        tensor_split(alg, e, alg.one() + alg.central_H(0))
    with pytest.raises(NotSeparating):
        tensor_split(alg, 0, alg.one())
    with pytest.raises(NotSeparating):
        tensor_split(torus_rep.algebra, 0, torus_rep.algebra.one())


def test_balanced_monomial_sep_exponent_even(genus2_rep):
    # parity: any balanced exponent vector is even on the separating edge
    alg = genus2_rep.algebra
    e = alg.T.designated_edge
    rng = random.Random(19)
    for _ in range(100):
        k, _ = random_balanced_monomial(alg, rng, bound=2).monomial_data()
        assert k[e] % 2 == 0


# ---- sweep kernel equality ----

def test_kernel_equality_check(genus2_rep):
    assert kernel_equality_check(genus2_rep)


def test_kernel_equality_requires_separating(torus_rep):
    with pytest.raises(NotSeparating):
        kernel_equality_check(torus_rep)


# ---- sampler ----

def test_sampler_deterministic():
    T = standard_library("genus2_sep")
    W1 = sample_generic_weights(T, 3, random.Random(5))
    W2 = sample_generic_weights(T, 3, random.Random(5))
    assert W1.u == W2.u
    assert W1.validate()["valid"]


def test_sampler_needs_one_vertex():
    with pytest.raises(NotOneVertex):
        sample_generic_weights(standard_library("sphere2"), 3, random.Random(0))


# ---- subspace utilities ----

def test_subspace_equality_float():
    rng = np.random.default_rng(0)
    B = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    S1 = Subspace(6, B, "float")
    S2 = Subspace(6, B @ (rng.normal(size=(3, 3)) + np.eye(3) * 5), "float")
    assert S1.equals(S2)
    S3 = Subspace(6, rng.normal(size=(6, 3)), "float")
    assert not S1.equals(S3)


def test_matrix_kernel_exact(torus_rep):
    field = torus_rep.ctx.field
    one, zero = field.one(), field.zero()
    M = [[one, one, zero], [zero, zero, zero], [one, one, zero]]
    K = matrix_kernel(M, "exact")
    assert K.dim == 2
