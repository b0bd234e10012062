"""Closed-form quantum traces of edge-parallel loops and Chebyshev threading.

Only loops with a complete closed form are supported: loops parallel to an
edge of a one-vertex triangulation (drawn on one side of it), and the
corner-arc factors appearing in the star-neighborhood expansion.  The general
state sum for links with crossings is out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cfalgebra import CFAlgebra, QTElement
from .errors import BadState, NotOneVertex, NotScalar, NotSeparating
from .kernels import (DEFAULT_RANK_TOL, Subspace, matrix_kernel, offdiag_kernel,
                      total_kernel)
from .representation import CFRep, WeightSystem


@dataclass(frozen=True)
class LoopSpec:
    """A supported framed loop: kind 'edge_parallel' with an edge and a side,
    or 'corner_arc_word' naming star corner arcs; framing is vertical."""

    kind: str
    edge: int = -1
    side: int = 1
    word: tuple = ()

    @staticmethod
    def edge_parallel(edge: int, side: int) -> "LoopSpec":
        if side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        return LoopSpec(kind="edge_parallel", edge=edge, side=side)

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "edge": self.edge, "side": self.side})

    @staticmethod
    def from_json(text: str) -> "LoopSpec":
        from .errors import ParseError
        try:
            d = json.loads(text)
            if d["kind"] != "edge_parallel":
                raise ParseError(f"unsupported loop kind {d['kind']!r}")
            return LoopSpec.edge_parallel(d["edge"], d.get("side", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad loop file: {exc}") from exc


# ---- Chebyshev polynomials ----

class ChebyshevPoly:
    """Normalized first-kind Chebyshev polynomial: T_N(2 cos t) = 2 cos Nt."""

    def __init__(self, N: int):
        if N < 0:
            raise ValueError("N must be nonnegative")
        self.N = N
        a, b = [2], [0, 1]  # T_0, T_1
        if N == 0:
            self.coeffs = a
            return
        for _ in range(N - 1):
            c = [0] + b  # x * T_n
            for i, v in enumerate(a):
                c[i] -= v
            a, b = b, c
        self.coeffs = b

    def odd_degrees_only(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if i % 2 == 0)

    def eval_scalar(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def eval_laurent(self) -> dict:
        """T_N applied to (t + t^-1), as a Laurent polynomial dict."""
        lin = {1: 1, -1: 1}
        out: dict[int, int] = {}

        def lmul(p, q):
            r: dict[int, int] = {}
            for i, a in p.items():
                for j, b in q.items():
                    r[i + j] = r.get(i + j, 0) + a * b
            return {k: v for k, v in r.items() if v}
        for c in reversed(self.coeffs):
            out = lmul(out, lin)
            if c:
                out[0] = out.get(0, 0) + c
        return {k: v for k, v in out.items() if v}

    def eval_matrix(self, M, rep: CFRep | None = None, mode: str = "float"):
        """T_N(M) via the recurrence, for float arrays or exact matrices."""
        if mode == "float":
            M = np.asarray(M)
            n = M.shape[0]
            prev = 2 * np.eye(n, dtype=complex)
            cur = M
            if self.N == 0:
                return prev
            for _ in range(self.N - 1):
                prev, cur = cur, M @ cur - prev
            return cur
        field = M[0][0].field
        n = len(M)
        zero, one, two = field.zero(), field.one(), field.from_rational(2)
        prev = [[two if i == j else zero for j in range(n)] for i in range(n)]
        cur = [list(r) for r in M]
        if self.N == 0:
            return prev
        for _ in range(self.N - 1):
            nxt = [[sum((M[i][k] * cur[k][j] for k in range(n)), zero) - prev[i][j]
                    for j in range(n)] for i in range(n)]
            prev, cur = cur, nxt
        return cur


def chebyshev(N: int) -> ChebyshevPoly:
    return ChebyshevPoly(N)


# ---- edge-parallel loop traces ----

def edge_parallel_trace(algebra: CFAlgebra, loop: LoopSpec) -> QTElement:
    """Quantum trace of the loop parallel to an edge of a one-vertex
    triangulation, pushed to the chosen side:

        omega^(-t) sum_k Z_e Z_(i_1)...Z_(i_k) Z_(i_k+1)^-1...Z_(i_t)^-1 Z_e^-1

    where (i_1 ... i_t) is the fan segment strictly between the two fan
    occurrences of the edge on that side.
    """
    T = algebra.T
    if T.num_vertices != 1:
        raise NotOneVertex("edge-parallel traces need a one-vertex triangulation")
    if loop.kind != "edge_parallel":
        raise ValueError(f"unsupported loop kind {loop.kind!r}")
    seg = fan_segment(T, loop.edge, loop.side)
    t = len(seg)
    out = algebra.zero()
    for k in range(t + 1):
        el = algebra.gen(loop.edge)
        for j, e in enumerate(seg):
            el = el * algebra.gen(e, 1 if j < k else -1)
        el = el * algebra.gen(loop.edge, -1)
        out = out + el.scale(algebra.omega(-t))
    return out


def fan_segment(T, edge: int, side: int) -> list[int]:
    """Fan entries strictly between the two ends of the edge, on one side."""
    fan = T.fans[0].edges
    u = len(fan)
    pos = [i for i, e in enumerate(fan) if e == edge]
    if len(pos) != 2:
        raise NotOneVertex(f"edge {edge} does not appear twice in the fan")
    p0, p1 = (pos[0], pos[1]) if side == 1 else (pos[1], pos[0])
    return [fan[(p0 + 1 + i) % u] for i in range((p1 - p0 - 1) % u)]


def segment_weyl(algebra: CFAlgebra, seg) -> QTElement:
    """[Z_(i_1) ... Z_(i_t)] for a fan segment."""
    m = [0] * algebra.n
    for e in seg:
        m[e] += 1
    return algebra.weyl(m)


def classical_trace(algebra: CFAlgebra, a: QTElement, weights: WeightSystem):
    """Classical holonomy trace of the loop with quantum trace a.

    This is minus the commutative specialization omega -> 1, Z_i -> z_i with
    z_i = u_i^N: the classical limit of a skein loop carries the Kauffman
    sign (a trivial loop has skein value -2 = -Tr Id).
    """
    if not weights.has_roots():
        raise ValueError("classical trace needs root weights")
    z = [ui ** algebra.N for ui in weights.u]
    val = algebra.specialize_classical(a, z)
    return -val


# ---- corner-arc factors ----

CORNER_ARC_STATES = ("++", "--", "+-")


def corner_arc_factor(algebra: CFAlgebra, v: int, corner: int, state: str) -> QTElement:
    """Factor contributed by an arc turning around star corner `corner` of
    vertex v, for the given boundary state:

        '++' -> Z_k^2 Z_i^2 Z_k'^2
        '+-' -> omega^4 Z_i^2 Z_k'^2 + Z_k'^2
        '--' -> 1

    where e_i is the fan edge at the corner and e_k, e_k' the star boundary
    edges before and after it.
    """
    if state not in CORNER_ARC_STATES:
        raise BadState(f"state must be one of {CORNER_ARC_STATES}")
    fan = algebra.T.fans[v]
    u = len(fan)
    if not 0 <= corner < u:
        from .errors import IndexOutOfRange
        raise IndexOutOfRange(f"corner must lie in [0, {u})")
    i_edge = fan.edges[corner]
    k_prev = fan.star_boundary[(corner - 1) % u]
    k_next = fan.star_boundary[corner]
    if state == "--":
        return algebra.one()
    if state == "++":
        return algebra.gen(k_prev, 2) * algebra.gen(i_edge, 2) * algebra.gen(k_next, 2)
    return (algebra.gen(i_edge, 2) * algebra.gen(k_next, 2)).scale(algebra.omega(4)) \
        + algebra.gen(k_next, 2)


# ---- verification reports ----

def sweep_check(rep: CFRep, edge: int, tol: float = DEFAULT_RANK_TOL) -> dict:
    """Verify that the two push-offs of a separating edge loop agree on the
    total off-diagonal kernel and that the kernel of their difference is
    exactly the total kernel."""
    T = rep.T
    if T.num_vertices != 1:
        raise NotOneVertex("sweep check needs a one-vertex triangulation")
    if not T.is_separating(edge):
        raise NotSeparating(f"edge {edge} does not separate")
    alg = rep.algebra
    tr1 = edge_parallel_trace(alg, LoopSpec.edge_parallel(edge, 1))
    tr2 = edge_parallel_trace(alg, LoopSpec.edge_parallel(edge, 2))
    M1, M2 = rep.apply(tr1), rep.apply(tr2)
    F = total_kernel(rep, tol)
    if rep.weights.mode == "float":
        diff = M1 - M2
        restr = np.abs(diff @ F.basis).max() if F.dim else 0.0
        kd = matrix_kernel(diff, "float", tol)
        report = {
            "restriction_norm": float(restr),
            "restriction_zero": bool(restr < 1e-7 * max(np.abs(diff).max(), 1)),
            "kernel_dim": kd.dim,
            "total_kernel_dim": F.dim,
            "kernel_equals_total": kd.equals(F, tol),
        }
    else:
        diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(M1, M2)]
        zero = alg.scalars.zero()
        restr_zero = all(
            sum((diff[i][j] * col[j] for j in range(rep.dim)), zero).is_zero()
            for col in F.basis for i in range(rep.dim))
        kd = matrix_kernel(diff, "exact")
        report = {
            "restriction_norm": 0.0 if restr_zero else 1.0,
            "restriction_zero": restr_zero,
            "kernel_dim": kd.dim,
            "total_kernel_dim": F.dim,
            "kernel_equals_total": kd.equals(F),
        }
    report["passed"] = report["restriction_zero"] and report["kernel_equals_total"]
    return report


def element_chebyshev(a: QTElement, N: int) -> QTElement:
    """T_N(a) inside the algebra (integer coefficients, so this commutes
    with any representation)."""
    alg = a.algebra
    poly = chebyshev(N).coeffs
    out = alg.zero()
    power = alg.one()
    for c in poly:
        if c:
            out = out + power.scale(c)
        power = power * a
    return out


def threading_check(rep: CFRep, loop: LoopSpec, tol: float = 1e-6) -> dict:
    """T_N(rho([K])) must be scalar, equal to minus the classical trace."""
    alg = rep.algebra
    a = edge_parallel_trace(alg, loop)
    TN = rep.apply(element_chebyshev(a, alg.N))
    tau = classical_trace(alg, a, rep.weights)
    if rep.weights.mode == "float":
        scalar = complex(np.trace(TN) / rep.dim)
        off = float(np.abs(TN - scalar * np.eye(rep.dim)).max())
        if off > max(tol, 1e-9 * max(abs(scalar), 1)):
            raise NotScalar(f"T_N image has off-scalar norm {off}")
        residual = abs(scalar + tau)
        return {"scalar": scalar, "classical_trace": complex(tau),
                "residual": residual, "passed": residual < tol}
    scalar = TN[0][0]
    for i in range(rep.dim):
        for j in range(rep.dim):
            expected = scalar if i == j else alg.scalars.zero()
            if not (TN[i][j] - expected).is_zero():
                raise NotScalar("T_N image is not an exact scalar matrix")
    diffv = scalar + tau
    passed = diffv.is_zero()
    return {"scalar": scalar, "classical_trace": tau,
            "residual": 0.0 if passed else 1.0, "passed": passed}
