import random

import numpy as np
import pytest

from skeinrep.cfalgebra import CFAlgebra
from skeinrep.errors import BadState, NotOneVertex, NotSeparating, ParseError
from skeinrep.kernels import offdiag_kernel, sample_generic_weights
from skeinrep.qtrace import (ChebyshevPoly, LoopSpec, chebyshev,
                             classical_trace, corner_arc_factor,
                             edge_parallel_trace, fan_segment, segment_weyl,
                             sweep_check, threading_check)
from skeinrep.representation import WeightSystem, build_rep
from skeinrep.triangulation import octahedron, standard_library


@pytest.fixture(scope="module")
def g2_alg():
    return CFAlgebra(standard_library("genus2_sep"), 3)


@pytest.fixture(scope="module")
def g2_rep(g2_alg):
    T = g2_alg.T
    W = sample_generic_weights(T, 3, random.Random(31))
    return build_rep(T, 3, W, algebra=g2_alg)


# ---- Chebyshev ----

def test_chebyshev_small():
    assert chebyshev(1).coeffs == [0, 1]
    assert chebyshev(3).coeffs == [0, -3, 0, 1]
    assert chebyshev(5).coeffs == [0, 5, 0, -5, 0, 1]
    assert chebyshev(0).coeffs == [2]


def test_chebyshev_laurent_identity():
    for N in (3, 5):
        assert chebyshev(N).eval_laurent() == {N: 1, -N: 1}


def test_chebyshev_odd_degrees():
    for N in (1, 3, 5, 7, 9):
        assert chebyshev(N).odd_degrees_only()
    assert not chebyshev(4).odd_degrees_only()


def test_chebyshev_trig():
    import math
    for N in (3, 5):
        for theta in (0.3, 1.1, 2.4):
            val = chebyshev(N).eval_scalar(2 * math.cos(theta))
            assert abs(val - 2 * math.cos(N * theta)) < 1e-12


# ---- edge-parallel traces ----

def test_trace_term_count(g2_alg):
    T = g2_alg.T
    e = T.designated_edge
    for side in (1, 2):
        seg = fan_segment(T, e, side)
        assert len(seg) == 8  # 2 * (4 interior edges per piece)
        tr = edge_parallel_trace(g2_alg, LoopSpec.edge_parallel(e, side))
        assert len(tr.terms) == len(seg) + 1
        assert tr.is_balanced()


def test_trace_sides_differ(g2_alg):
    e = g2_alg.T.designated_edge
    t1 = edge_parallel_trace(g2_alg, LoopSpec.edge_parallel(e, 1))
    t2 = edge_parallel_trace(g2_alg, LoopSpec.edge_parallel(e, 2))
    assert t1 != t2


def test_trace_rearranged_identity(g2_alg):
    # [Z_(i_1)...Z_(i_t)] . trace = 1 + sum_k omega^(-4k) Z^2-prefixes
    alg = g2_alg
    e = alg.T.designated_edge
    for side in (1, 2):
        seg = fan_segment(alg.T, e, side)
        tr = edge_parallel_trace(alg, LoopSpec.edge_parallel(e, side))
        lhs = segment_weyl(alg, seg) * tr
        rhs = alg.one()
        pre = alg.one()
        for k in range(1, len(seg) + 1):
            pre = pre * alg.gen(seg[k - 1], 2)
            rhs = rhs + pre.scale(alg.omega(-4 * k))
        assert lhs == rhs


def test_trace_needs_one_vertex():
    alg = CFAlgebra(standard_library("sphere2"), 3)
    with pytest.raises(NotOneVertex):
        edge_parallel_trace(alg, LoopSpec.edge_parallel(0, 1))


def test_loop_spec_json():
    loop = LoopSpec.edge_parallel(4, 2)
    assert LoopSpec.from_json(loop.to_json()) == loop
    with pytest.raises(ParseError):
        LoopSpec.from_json('{"kind": "vertex_circle"}')


# ---- sweep ----

def test_sweep_check(g2_rep):
    report = sweep_check(g2_rep, g2_rep.T.designated_edge)
    assert report["passed"]
    assert report["kernel_dim"] == report["total_kernel_dim"] == 27


def test_sweep_identity_element_level(g2_rep):
    # mu([Z^seg]) (rho[K1] - rho[K2]) equals mu(Q_v) started at the segment
    alg, T = g2_rep.algebra, g2_rep.T
    e = T.designated_edge
    fan = T.fans[0].edges
    pos = [i for i, x in enumerate(fan) if x == e]
    tr1 = edge_parallel_trace(alg, LoopSpec.edge_parallel(e, 1))
    tr2 = edge_parallel_trace(alg, LoopSpec.edge_parallel(e, 2))
    M1, M2 = g2_rep.apply(tr1), g2_rep.apply(tr2)
    seg = fan_segment(T, e, 1)
    G = g2_rep.apply(segment_weyl(alg, seg))
    start = (pos[0] + 1) % len(fan)
    Q = g2_rep.apply(alg.offdiag_Q(0, start=start))
    assert np.abs(G @ (M1 - M2) - Q).max() < 1e-8


def test_sweep_nonkernel_witness(g2_rep):
    # on a generic vector outside F the two push-offs differ
    rng = np.random.default_rng(0)
    alg = g2_rep.algebra
    e = g2_rep.T.designated_edge
    tr1 = edge_parallel_trace(alg, LoopSpec.edge_parallel(e, 1))
    tr2 = edge_parallel_trace(alg, LoopSpec.edge_parallel(e, 2))
    diff = g2_rep.apply(tr1) - g2_rep.apply(tr2)
    v = rng.normal(size=81) + 1j * rng.normal(size=81)
    assert np.linalg.norm(diff @ v) > 1e-6


def test_sweep_requires_separating():
    T = standard_library("torus1")
    alg = CFAlgebra(T, 3)
    one = alg.scalars.one()
    rep = build_rep(T, 3, WeightSystem(T, 3, u=[one, one, alg.scalars.omega(1)]),
                    algebra=alg)
    with pytest.raises(NotSeparating):
        sweep_check(rep, 0)


# ---- threading ----

def test_threading_genus2_float(g2_rep):
    for side in (1, 2):
        loop = LoopSpec.edge_parallel(g2_rep.T.designated_edge, side)
        report = threading_check(g2_rep, loop)
        assert report["passed"], report
    # both sides carry the same classical trace
    r1 = threading_check(g2_rep, LoopSpec.edge_parallel(g2_rep.T.designated_edge, 1))
    r2 = threading_check(g2_rep, LoopSpec.edge_parallel(g2_rep.T.designated_edge, 2))
    assert abs(r1["classical_trace"] - r2["classical_trace"]) < 1e-8


def test_threading_many_random_weights():
    T = standard_library("genus2_sep")
    rng = random.Random(42)
    for _ in range(5):
        W = sample_generic_weights(T, 3, rng)
        rep = build_rep(T, 3, W)
        loop = LoopSpec.edge_parallel(T.designated_edge, 1)
        assert threading_check(rep, loop)["passed"]


def test_threading_central_torus():
    # T_N of the image of a central element is scalar: exact check
    T = standard_library("torus1")
    alg = CFAlgebra(T, 3)
    one = alg.scalars.one()
    rep = build_rep(T, 3, WeightSystem(T, 3, u=[one, one, alg.scalars.omega(1)]),
                    algebra=alg)
    H = rep.apply(alg.central_H(0))
    TN = chebyshev(3).eval_matrix(H, mode="exact")
    # T_3(-omega^4) on the diagonal
    expected = chebyshev(3).eval_scalar(-alg.scalars.omega(4))
    for i in range(3):
        for j in range(3):
            want = expected if i == j else alg.scalars.zero()
            assert (TN[i][j] - want).is_zero()


# ---- corner arcs ----

def test_corner_arc_shapes():
    alg = CFAlgebra(octahedron(), 3)
    a = corner_arc_factor(alg, 0, 0, "++")
    k, _ = a.monomial_data()
    assert sum(k) == 6 and set(k) <= {0, 2}
    assert corner_arc_factor(alg, 0, 0, "--") == alg.one()
    mixed = corner_arc_factor(alg, 0, 0, "+-")
    assert len(mixed.terms) == 2
    with pytest.raises(BadState):
        corner_arc_factor(alg, 0, 0, "-+")


def test_corner_arc_invariance_exact_octahedron():
    # mu(A') F_v <= F_v for every vertex, corner and state; exact kernels
    T = octahedron()
    alg = CFAlgebra(T, 3)
    w = alg.scalars.omega(1)
    W = WeightSystem(T, 3, u=[w] * T.num_edges)  # x = -1 everywhere
    assert W.validate()["valid"]
    rep = build_rep(T, 3, W, algebra=alg)
    assert rep.dim == 27
    for v in range(T.num_vertices):
        F = offdiag_kernel(rep, v)
        assert 0 < F.dim < rep.dim
        for corner in range(len(T.fans[v])):
            for state in ("++", "--", "+-"):
                A = rep.apply(corner_arc_factor(alg, v, corner, state))
                assert F.is_invariant_under(A), (v, corner, state)
