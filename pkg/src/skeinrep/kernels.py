"""Off-diagonal kernels, eigen-analysis and the separating-edge splitting.

Exact mode computes kernels by Gaussian elimination over the cyclotomic
field (division is exact, so no tolerance enters); float mode uses singular
value thresholding at a relative tolerance.
"""

from __future__ import annotations

import cmath

import numpy as np

from .cfalgebra import CFAlgebra, QTElement
from .errors import (NotDiagonalizable, NotMonomial, NotScalar, NotSeparating)
from .representation import CFRep, WeightSystem
from .triangulation import Triangulation

DEFAULT_RANK_TOL = 1e-9


class Subspace:
    """Column span of a basis matrix, exact or float."""

    def __init__(self, ambient: int, basis, mode: str):
        self.ambient = ambient
        self.basis = basis          # float: (ambient x d) ndarray; exact: list of columns
        self.mode = mode

    @property
    def dim(self) -> int:
        if self.mode == "float":
            return self.basis.shape[1]
        return len(self.basis)

    def contains(self, other: "Subspace", tol: float = DEFAULT_RANK_TOL) -> bool:
        """True iff other is contained in self (rank test on the join)."""
        if self.mode == "float":
            joint = np.hstack([self.basis, other.basis])
            return _float_rank(joint, tol) == _float_rank(self.basis, tol)
        cols = [list(c) for c in self.basis] + [list(c) for c in other.basis]
        return _exact_rank_cols(cols) == len(self.basis)

    def equals(self, other: "Subspace", tol: float = DEFAULT_RANK_TOL) -> bool:
        return (self.dim == other.dim and self.contains(other, tol)
                and other.contains(self, tol))

    def is_invariant_under(self, M, tol: float = DEFAULT_RANK_TOL) -> bool:
        """True iff M maps this subspace into itself."""
        if self.dim == 0:
            return True
        if self.mode == "float":
            image = np.asarray(M) @ self.basis
            return self.contains(Subspace(self.ambient, image, "float"), tol)
        zero = M[0][0].field.zero()
        image = []
        for col in self.basis:
            image.append([sum((M[i][j] * col[j] for j in range(self.ambient)), zero)
                          for i in range(self.ambient)])
        return self.contains(Subspace(self.ambient, image, "exact"), tol)


def _float_rank(M, tol=DEFAULT_RANK_TOL):
    """Numerical rank; the threshold floor treats O(1)-entry operators whose
    norm is already below tolerance as zero."""
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(s[0], 1.0)))


def _exact_rank_cols(cols) -> int:
    """Rank of a list of exact column vectors."""
    if not cols:
        return 0
    rows = [list(r) for r in zip(*cols)]
    return _exact_row_rank(rows)


def _exact_row_rank(rows) -> int:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if not rows[r][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(m):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def matrix_kernel(M, mode: str, tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Kernel of a square matrix as a Subspace."""
    if mode == "float":
        M = np.asarray(M)
        n = M.shape[1]
        u, s, vh = np.linalg.svd(M)
        r = int(np.sum(s > tol * max(s[0], 1.0))) if s.size else 0
        return Subspace(n, vh.conj().T[:, r:], "float")
    n = len(M[0])
    field = M[0][0].field
    zero, one = field.zero(), field.one()
    rows = [list(r) for r in M]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    pivot_set = set(pivots)
    basis = []
    for fcol in (c for c in range(n) if c not in pivot_set):
        vec = [zero] * n
        vec[fcol] = one
        for r, pcol in enumerate(pivots):
            vec[pcol] = -rows[r][fcol]
        basis.append(vec)
    return Subspace(n, basis, "exact")


def _field_one_of(M):
    return M[0][0].field.one()


# ---- kernel operations ----

def offdiag_kernel(rep: CFRep, v: int, start: int = 0,
                   tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """ker mu(Q_v); independent of the start position."""
    Q = rep.algebra.offdiag_Q(v, start=start)
    return matrix_kernel(rep.apply(Q), rep.weights.mode, tol)


def total_kernel(rep: CFRep, tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Intersection of the off-diagonal kernels over all vertices."""
    T = rep.T
    mats = [rep.apply(rep.algebra.offdiag_Q(v)) for v in range(T.num_vertices)]
    if rep.weights.mode == "float":
        stacked = np.vstack([np.asarray(M) for M in mats])
        return matrix_kernel(stacked, "float", tol)
    stacked = [row for M in mats for row in M]
    return matrix_kernel(stacked, "exact", tol)


def eigen_analysis(M, mode: str, tol: float = 1e-6, candidates=None):
    """Eigenvalues with multiplicities; verifies diagonalizability.

    Float mode clusters the eigenvalue cloud at the given tolerance and
    checks that geometric multiplicities fill the space.  Exact mode needs
    an explicit candidate list and computes exact eigenspace dimensions.
    """
    if mode == "float":
        M = np.asarray(M)
        n = M.shape[0]
        vals = np.linalg.eigvals(M)
        order = np.lexsort((vals.imag.round(8), vals.real.round(8)))
        groups: list[list] = []
        for z in vals[order]:
            if groups and abs(z - groups[-1][0]) < tol:
                groups[-1][1] += 1
            else:
                groups.append([z, 1])
        out = []
        total_geo = 0
        for z, alg_mult in groups:
            geo = n - _float_rank(M - z * np.eye(n), tol=max(tol * 1e-3, 1e-12))
            if geo != alg_mult:
                raise NotDiagonalizable(
                    f"eigenvalue {z}: geometric {geo} != algebraic {alg_mult}")
            total_geo += geo
            out.append((complex(z), int(alg_mult)))
        if total_geo != n:
            raise NotDiagonalizable("eigenspaces do not fill the space")
        return out
    if candidates is None:
        raise ValueError("exact eigen-analysis needs a candidate list")
    n = len(M)
    one = _field_one_of(M)
    out = []
    total = 0
    for lam in candidates:
        shifted = [[M[i][j] - (lam if i == j else lam - lam)
                    for j in range(n)] for i in range(n)]
        d = matrix_kernel(shifted, "exact").dim
        if d:
            out.append((lam, d))
            total += d
    if total != n:
        raise NotDiagonalizable(
            f"candidate eigenspaces span {total} of {n} dimensions")
    return out


def tensor_split(algebra: CFAlgebra, e_sep: int, a: QTElement):
    """Split a balanced monomial across a separating edge.

    Returns (factor1, factor2, h_power) with factor1 supported on one side's
    interior edges, factor2 on the other side's, and
    a = factor1 * factor2 * H_v^h_power  (the scalar is carried by factor1).
    """
    T = algebra.T
    if T.num_vertices != 1:
        from .errors import NotOneVertex
        raise NotOneVertex("splitting needs a one-vertex triangulation")
    if not T.is_separating(e_sep):
        raise NotSeparating(f"edge {e_sep} does not separate")
    k, c = a.monomial_data()
    if not algebra.is_balanced(k):
        from .errors import NotBalanced
        raise NotBalanced("monomial is not balanced")
    if k[e_sep] % 2 != 0:
        raise NotMonomial("separating-edge exponent must be even")
    m = k[e_sep] // 2
    side1, side2 = T.side_edges(e_sep)
    h = T.end_counts(0)
    k1 = tuple(k[i] - m * h[i] if i in side1 else 0 for i in range(algebra.n))
    k2 = tuple(k[i] - m * h[i] if i in side2 else 0 for i in range(algebra.n))
    f1 = algebra.monomial(k1)
    f2 = algebra.monomial(k2)
    recomb = f1 * f2 * algebra.central_H(0) ** m
    rk, rc = recomb.monomial_data()
    assert rk == k
    return f1.scale(c * rc.inv()), f2, m


def kernel_equality_check(rep: CFRep, tol: float = DEFAULT_RANK_TOL) -> bool:
    """ker(rho[K1] - rho[K2]) = total off-diagonal kernel, as subspaces."""
    from .qtrace import LoopSpec, edge_parallel_trace
    T = rep.T
    e = T.designated_edge
    if e is None or not T.is_separating(e):
        raise NotSeparating("triangulation has no designated separating edge")
    tr1 = edge_parallel_trace(rep.algebra, LoopSpec.edge_parallel(e, 1))
    tr2 = edge_parallel_trace(rep.algebra, LoopSpec.edge_parallel(e, 2))
    if rep.weights.mode == "float":
        diff = rep.apply(tr1) - rep.apply(tr2)
    else:
        M1, M2 = rep.apply(tr1), rep.apply(tr2)
        diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(M1, M2)]
    kd = matrix_kernel(diff, rep.weights.mode, tol)
    return kd.equals(total_kernel(rep, tol), tol)


# ---- generic weight sampling ----

def sample_generic_weights(T: Triangulation, N: int, rng,
                           trace_margin: float = 0.2) -> WeightSystem:
    """Random vertex-valid float weights on a one-vertex triangulation.

    All but two edge weights are random unit-modulus values; the remaining
    two are solved from the fan product relation (on the branch compatible
    with mu(H_v) = -omega^4) and the prefix-sum relation.  Draws whose
    separating-edge loop trace is within trace_margin of +-2 are rejected.
    """
    if T.num_vertices != 1:
        from .errors import NotOneVertex
        raise NotOneVertex("generic sampler needs a one-vertex triangulation")
    fan = T.fans[0].edges
    n = T.num_edges
    solve_a, solve_b = _solver_edges(T)
    while True:
        x = [cmath.exp(2j * cmath.pi * rng.random()) for _ in range(n)]
        others = 1
        for i in range(n):
            if i not in (solve_a, solve_b):
                others *= x[i]
        # product over the fan is (prod_e x_e)^2 = 1; the branch prod = -1
        # is forced by mu(H_v)^N = mu(Z^{2N 1}) = prod x_e = (-omega^4)^N = -1
        amp = -1 / others
        coef: dict[int, complex] = {}
        pre_c, pre_t = 1 + 0j, 0
        for j in range(len(fan)):
            coef[pre_t] = coef.get(pre_t, 0) + pre_c
            e = fan[j]
            if e == solve_a:
                pre_t += 1
            elif e == solve_b:
                pre_c *= amp
                pre_t -= 1
            else:
                pre_c *= x[e]
        lo, hi = min(coef), max(coef)
        poly = [coef.get(k, 0) for k in range(hi, lo - 1, -1)]
        roots = [r for r in np.roots(poly) if abs(r) > 1e-10]
        if not roots:
            continue
        t = roots[rng.randrange(len(roots))]
        x[solve_a] = t
        x[solve_b] = amp / t
        u = [cmath.exp(cmath.log(xi) / (2 * N)) for xi in x]
        W = WeightSystem(T, N, u=u, mode="float")
        if not W.validate()["valid"]:
            continue
        if T.designated_edge is not None:
            from .qtrace import LoopSpec, classical_trace, edge_parallel_trace
            alg = CFAlgebra(T, N)
            tr = edge_parallel_trace(alg, LoopSpec.edge_parallel(T.designated_edge, 1))
            tau = classical_trace(alg, tr, W)
            if min(abs(tau - 2), abs(tau + 2)) < trace_margin:
                continue
        return W


def _solver_edges(T: Triangulation):
    """Two edges whose weights the sampler solves for: the last two distinct
    edges appearing in the fan (so the prefix polynomial is low degree)."""
    fan = T.fans[0].edges
    seen = []
    for e in fan:
        if e not in seen:
            seen.append(e)
    return seen[-1], seen[-2]
