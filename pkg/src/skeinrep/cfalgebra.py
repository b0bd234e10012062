"""The quantum torus of a triangulation and its balanced subalgebra.

Generators Z_i, one per edge, satisfy Z_i Z_j = omega^(2 sigma_ij) Z_j Z_i.
Elements are kept in normal form: a finite sum of monomials Z^k with the
generators ordered by edge index, so the product rule is

    Z^k . Z^l = omega^(2 sum_{i>j} k_i l_j sigma_ij) Z^(k+l).

The Weyl ordering [Z^k] = omega^(-sum_{i<j} k_i k_j sigma_ij) Z^k is invariant
under permutation of the factors and satisfies [Z^k][Z^l] = omega^(k.sigma.l)
[Z^(k+l)] on the balanced lattice.
"""

from __future__ import annotations

from fractions import Fraction

from . import intlinalg as il
from .errors import (IndexOutOfRange, Inadmissible, MixedAlgebra, NotBalanced,
                     OmegaIntegralityError)
from .scalars import ExactScalars
from .triangulation import Triangulation


class CFAlgebra:
    """Context object tying a triangulation to an exact coefficient field."""

    def __init__(self, T: Triangulation, N: int, field_order: int | None = None):
        self.T = T
        self.N = N
        self.scalars = ExactScalars(N, order=field_order)
        self.sigma = T.sigma_matrix()
        self.n = T.num_edges

    # -- scalars --

    def omega(self, k: int):
        return self.scalars.omega(k)

    # -- element constructors --

    def zero(self) -> "QTElement":
        return QTElement(self, {})

    def one(self) -> "QTElement":
        return self.monomial((0,) * self.n)

    def monomial(self, k, coeff=None) -> "QTElement":
        k = tuple(int(x) for x in k)
        if len(k) != self.n:
            raise ValueError("exponent vector has wrong length")
        c = self.scalars.one() if coeff is None else coeff
        return QTElement(self, {k: c})

    def gen(self, i: int, power: int = 1) -> "QTElement":
        k = [0] * self.n
        k[i] = power
        return self.monomial(k)

    # -- normal form bookkeeping --

    def product_twist(self, k, l) -> int:
        """omega-exponent in Z^k . Z^l = omega^t Z^(k+l)."""
        sig = self.sigma
        t = 0
        for i in range(self.n):
            ki = k[i]
            if ki:
                row = sig[i]
                for j in range(i):
                    if l[j]:
                        t += ki * l[j] * row[j]
        return 2 * t

    def weyl_weight(self, k) -> int:
        """w(k) with [Z^k] = omega^(-w(k)) Z^k."""
        sig = self.sigma
        w = 0
        for i in range(self.n):
            if k[i]:
                for j in range(i + 1, self.n):
                    if k[j]:
                        w += k[i] * k[j] * sig[i][j]
        return w

    def pairing(self, k, l) -> int:
        """k^T sigma l."""
        return sum(k[i] * self.sigma[i][j] * l[j]
                   for i in range(self.n) for j in range(self.n)
                   if k[i] and self.sigma[i][j] and l[j])

    def weyl(self, k) -> "QTElement":
        """Weyl-ordered monomial [Z^k]."""
        k = tuple(int(x) for x in k)
        return self.monomial(k, self.omega(-self.weyl_weight(k)))

    def ordered_product(self, indices) -> "QTElement":
        """Product of single generators Z_{i_1} Z_{i_2} ... in the given order."""
        out = self.one()
        for i in indices:
            out = out * self.gen(i)
        return out

    # -- balancedness --

    def is_balanced(self, k) -> bool:
        for f in range(self.T.num_faces):
            if sum(k[e] for e in self.T.face_edges(f)) % 2 != 0:
                return False
        return True

    def require_balanced(self, a: "QTElement"):
        for k in a.terms:
            if not self.is_balanced(k):
                raise NotBalanced(f"exponent vector {k} violates face parity")

    # -- distinguished elements --

    def central_H(self, v: int) -> "QTElement":
        """Weyl-ordered product of the fan generators at vertex v."""
        return self.weyl(self.T.end_counts(v))

    def weyl_prefix(self, v: int, k0: int) -> int:
        """Exponent e with [Z_{i_1}...Z_{i_k0}] = omega^e Z_{i_1}...Z_{i_k0}
        for the counterclockwise fan indexing at v; requires 1 < k0 < u."""
        fan = self.T.fans[v].edges
        u = len(fan)
        if not 1 < k0 < u:
            raise IndexOutOfRange(f"k0 must lie strictly between 1 and {u}")
        e = 0
        for a in range(k0):
            for b in range(a + 1, k0):
                e -= self.sigma[fan[a]][fan[b]]
        return e

    def offdiag_Q(self, v: int, start: int = 0) -> "QTElement":
        """Off-diagonal element sum_j omega^(-4j) Z_{i_1}^2 ... Z_{i_j}^2 for
        the fan at v rotated to begin at position start."""
        fan = self.T.fans[v].edges
        u = len(fan)
        if not 0 <= start < u:
            raise IndexOutOfRange(f"start must lie in [0, {u})")
        out = self.one()
        prefix = self.one()
        for j in range(1, u):
            prefix = prefix * self.gen(fan[(start + j - 1) % u], 2)
            out = out + self.monomial((0,) * self.n, self.omega(-4 * j)) * prefix
        return out

    def specialize_classical(self, a: "QTElement", values):
        """Commutative specialization omega -> 1, Z_i -> values[i].

        Each coefficient must be a positive rational times a power of omega
        (true of trace and off-diagonal elements, whose terms never collide);
        on such elements the positive-rational part is the omega -> 1 limit.
        values may be exact scalars or complex numbers.
        """
        total = None
        for k, c in a.terms.items():
            q, _ = self._split_root(c)
            term = q if not isinstance(values[0], complex) else complex(q)
            for i, ki in enumerate(k):
                if ki:
                    term = term * values[i] ** ki
            total = term if total is None else total + term
        if total is None:
            return 0
        return total

    def _split_root(self, c):
        """Write c = q * omega^j with q a positive rational (unique since
        -1 = omega^(2N)); raise if impossible."""
        for j in range(4 * self.N):
            r = c * self.omega(-j)
            if r.is_rational() and r.rational_value() > 0:
                return r.rational_value(), j
        raise ValueError("coefficient is not rational times a power of omega")


class QTElement:
    """Finite linear combination of normal-form monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: CFAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def _check(self, other: "QTElement"):
        if self.algebra is not other.algebra:
            if (self.algebra.T is not other.algebra.T
                    or self.algebra.N != other.algebra.N):
                raise MixedAlgebra("operands from different algebras")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return QTElement(self.algebra, terms)

    def __neg__(self):
        return QTElement(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QTElement):
            return self.scale(other)
        self._check(other)
        alg = self.algebra
        terms: dict = {}
        for k, ck in self.terms.items():
            for l, cl in other.terms.items():
                m = tuple(a + b for a, b in zip(k, l))
                c = ck * cl * alg.omega(alg.product_twist(k, l))
                terms[m] = terms[m] + c if m in terms else c
        return QTElement(alg, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = self.algebra.scalars.from_rational(c)
        return QTElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, QTElement):
            return NotImplemented
        return self.algebra.T is other.algebra.T and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_data(self):
        if not self.is_monomial():
            from .errors import NotMonomial
            raise NotMonomial("element has several terms")
        return next(iter(self.terms.items()))

    def inverse(self) -> "QTElement":
        """Inverse of a monomial."""
        k, c = self.monomial_data()
        alg = self.algebra
        mk = tuple(-x for x in k)
        tw = alg.product_twist(mk, k)
        return alg.monomial(mk, (c * alg.omega(tw)).inv())

    def is_balanced(self) -> bool:
        return all(self.algebra.is_balanced(k) for k in self.terms)

    def support(self):
        """Edges with a nonzero exponent in some term."""
        n = self.algebra.n
        return {i for k in self.terms for i in range(n) if k[i]}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"Z{i}^{e}" for i, e in enumerate(k) if e) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def commutator_is_zero(a: QTElement, b: QTElement) -> bool:
    return (a * b - b * a).is_zero()


class SignReversalClass:
    """Z2 vector over edges acting on monomials by (-1)^(sum c_i k_i)."""

    def __init__(self, T: Triangulation, c):
        self.T = T
        self.c = tuple(int(x) % 2 for x in c)
        if len(self.c) != T.num_edges:
            raise ValueError("class vector has wrong length")

    def value(self, k) -> int:
        return sum(ci * ki for ci, ki in zip(self.c, k)) % 2

    def is_admissible(self) -> bool:
        """Vanishes on the exponent vector of every central vertex element."""
        return all(self.value(self.T.end_counts(v)) == 0
                   for v in range(self.T.num_vertices))

    def require_admissible(self):
        if not self.is_admissible():
            raise Inadmissible("class does not vanish on every H_v exponent")

    def apply(self, a: QTElement) -> QTElement:
        a.algebra.require_balanced(a)
        terms = {k: (-c if self.value(k) else c) for k, c in a.terms.items()}
        return QTElement(a.algebra, terms)


class BalancedLattice:
    """Basis of the face-even exponent lattice, its pairing and normal form."""

    def __init__(self, algebra: CFAlgebra):
        self.algebra = algebra
        T = algebra.T
        n = T.num_edges
        rows = []
        for f in range(T.num_faces):
            row = [0] * n
            for e in T.face_edges(f):
                row[e] ^= 1
            rows.append(row)
        basis, rank2 = _lift_parity_kernel(rows, n)
        self.basis = basis                       # list of E integer vectors
        self.index_in_ZE = 2 ** rank2
        self.pairing_matrix = [
            [algebra.pairing(a, b) for b in basis] for a in basis
        ]
        for row in self.pairing_matrix:
            for v in row:
                if v % 2 != 0:
                    raise OmegaIntegralityError(
                        "half-pairing is not integral on the balanced lattice")
        C, pairs, radical = il.alternating_normal_form(self.pairing_matrix)
        cols = il.transpose(C)
        self.nf_basis = [
            [sum(basis[t][i] * cols[j][t] for t in range(n)) for i in range(n)]
            for j in range(n)
        ]
        self.pairs = pairs                       # (index_a, index_b, d) in nf_basis
        self.radical = radical
        mat = il.transpose(self.nf_basis)        # columns are nf basis vectors
        self._inv = il.fraction_inverse(mat)

    def contains(self, k) -> bool:
        return self.algebra.is_balanced(k)

    def coords(self, k):
        """Integer coordinates of k in the normal-form basis."""
        vals = il.mat_vec(self._inv, list(k))
        out = []
        for v in vals:
            if v.denominator != 1:
                raise NotBalanced(f"{tuple(k)} is not in the balanced lattice")
            out.append(int(v))
        return tuple(out)

    @property
    def rank(self) -> int:
        return len(self.basis)


def _lift_parity_kernel(rows, n):
    """GF(2) kernel of the face-parity map, lifted to a Z-basis of its
    preimage lattice: kernel vectors as 0/1 vectors plus doubled pivots."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][col]:
                m[i] = [a ^ b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for col in range(n):
        if col in pivot_set:
            v = [0] * n
            v[col] = 2
            basis.append(v)
        else:
            v = [0] * n
            v[col] = 1
            for rr, pc in enumerate(pivots):
                v[pc] = m[rr][col]
            basis.append(v)
    return basis, len(pivots)
