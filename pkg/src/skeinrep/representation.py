"""Irreducible representations of the balanced algebra from edge weights.

Construction: the pairing k^T sigma l on the balanced lattice is put into
skew normal form; each hyperbolic pair with commutation scalar omega^(2d) of
order m contributes an m-dimensional clock/shift factor, the radical maps to
scalars, and a character of the lattice is solved exactly so that

    mu(Z_i^(2N)) = x_i Id      and      mu(H_v) = -omega^4 Id.

The character is written as tau(k) = u^k omega^(rho . coords(k)) with an
integer vector rho, so the whole representation is pinned by discrete data;
weights enter only through the values u_i and the discrete logarithms of the
fan products u^(h_v).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from . import intlinalg as il
from .cfalgebra import BalancedLattice, CFAlgebra, QTElement, SignReversalClass
from .errors import (DimensionMismatch, InconsistentCenter, NotScalar,
                     ZeroWeight)
from .scalars import ExactScalars, FloatScalars
from .triangulation import Triangulation


class WeightSystem:
    """Per-edge weights u_i with x_i = u_i^(2N) derived.

    Move-transport operations work at the level of the x_i alone; such
    systems carry x values but no u and cannot back a representation.
    """

    def __init__(self, T: Triangulation, N: int, u=None, x=None, mode: str = "exact"):
        if u is None and x is None:
            raise ValueError("need u or x values")
        self.T = T
        self.N = N
        self.mode = mode
        self.u = list(u) if u is not None else None
        if self.u is not None:
            for ui in self.u:
                if _is_zero_value(ui, mode):
                    raise ZeroWeight("weight u_i = 0")
            self.x = [ui ** (2 * N) for ui in self.u]
        else:
            self.x = list(x)
        for xi in self.x:
            if _is_zero_value(xi, mode):
                raise ZeroWeight("weight x_i = 0")

    def has_roots(self) -> bool:
        return self.u is not None

    def x_product_over_fan(self, v: int):
        out = None
        for e, _ in self.T.fans[v].entries:
            out = self.x[e] if out is None else out * self.x[e]
        return out

    def validate(self) -> dict:
        """Residuals of the two fan relations at every vertex."""
        report = {"vertices": [], "valid": True}
        for v in range(self.T.num_vertices):
            edges = self.T.fans[v].edges
            prefix = 1
            total = None
            for j in range(len(edges)):
                term = prefix if j == 0 else prefix
                total = term if total is None else total + term
                prefix = prefix * self.x[edges[j]]
            sum_res = total
            prod_res = prefix - 1 if self.mode == "float" else prefix - 1
            entry = {
                "vertex": v,
                "sum_residual": _residual_value(sum_res),
                "product_residual": _residual_value(prod_res),
            }
            ok = _is_zero_value(sum_res, self.mode, tol=1e-9) and \
                _is_zero_value(prod_res, self.mode, tol=1e-9)
            entry["valid"] = ok
            report["valid"] = report["valid"] and ok
            report["vertices"].append(entry)
        return report

    # -- serialization --

    def to_json(self) -> str:
        if self.mode == "float":
            u = [[z.real, z.imag] for z in (self.u or [])]
        else:
            u = [ui.serialize() for ui in (self.u or [])]
        data = {"mode": self.mode, "N": self.N, "u": u}
        if self.u is None:
            if self.mode == "float":
                data["x"] = [[z.real, z.imag] for z in self.x]
            else:
                data["x"] = [xi.serialize() for xi in self.x]
        if self.mode == "exact":
            data["field_order"] = self.x[0].field.order
        return json.dumps(data)

    @staticmethod
    def from_json(T: Triangulation, text: str) -> "WeightSystem":
        from .cyclotomic import CycloField, CycloScalar
        from .errors import ParseError
        try:
            data = json.loads(text)
            N = data["N"]
            mode = data["mode"]
            if mode == "float":
                u = [complex(re, im) for re, im in data["u"]] or None
                x = ([complex(re, im) for re, im in data["x"]]
                     if u is None else None)
            else:
                field = CycloField(data.get("field_order", 4 * N))
                u = [CycloScalar.deserialize(field, d) for d in data["u"]] or None
                x = ([CycloScalar.deserialize(field, d) for d in data["x"]]
                     if u is None else None)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ParseError(f"bad weights file: {exc}") from exc
        return WeightSystem(T, N, u=u, x=x, mode=mode)


def _is_zero_value(v, mode, tol=0.0):
    if mode == "float":
        return abs(v) <= max(tol, 0.0)
    return (v - v.field.from_rational(0)).is_zero() if hasattr(v, "field") else v == 0


def _residual_value(v):
    return abs(v) if isinstance(v, complex) else repr(v)


class MonomialMatrix:
    """Generalized permutation matrix: M e_i = scale[i] e[perm[i]]."""

    __slots__ = ("dim", "perm", "scale")

    def __init__(self, dim, perm, scale):
        self.dim = dim
        self.perm = perm
        self.scale = scale

    @staticmethod
    def identity(dim, one):
        return MonomialMatrix(dim, list(range(dim)), [one] * dim)

    def __mul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        perm = [self.perm[other.perm[i]] for i in range(self.dim)]
        scale = [other.scale[i] * self.scale[other.perm[i]] for i in range(self.dim)]
        return MonomialMatrix(self.dim, perm, scale)

    def scaled(self, c) -> "MonomialMatrix":
        return MonomialMatrix(self.dim, self.perm, [s * c for s in self.scale])

    def is_scalar(self):
        if any(self.perm[i] != i for i in range(self.dim)):
            return None
        s0 = self.scale[0]
        for s in self.scale[1:]:
            if isinstance(s, complex):
                if abs(s - s0) > 1e-9:
                    return None
            elif s != s0:
                return None
        return s0

    def to_dense(self, zero):
        if isinstance(zero, complex):
            M = np.zeros((self.dim, self.dim), dtype=complex)
            for i in range(self.dim):
                M[self.perm[i], i] = self.scale[i]
            return M
        M = [[zero for _ in range(self.dim)] for _ in range(self.dim)]
        for i in range(self.dim):
            M[self.perm[i]][i] = self.scale[i]
        return M


class CFRep:
    """Concrete irreducible representation of the balanced algebra."""

    def __init__(self, algebra: CFAlgebra, weights: WeightSystem,
                 sign_choices: SignReversalClass | None = None):
        if not weights.has_roots():
            raise ValueError("representation needs root weights u_i")
        if weights.N != algebra.N:
            raise ValueError("weight system and algebra disagree on N")
        self.algebra = algebra
        self.T = algebra.T
        self.N = algebra.N
        self.weights = weights
        self.sign = sign_choices
        self.ctx = (FloatScalars(self.N) if weights.mode == "float"
                    else algebra.scalars)
        self.lattice = BalancedLattice(algebra)
        self._setup_factors()
        self._solve_character()

    # -- structure --

    def _setup_factors(self):
        N, T = self.N, self.T
        self.pairs = self.lattice.pairs
        self.orders = []
        for _, _, d in self.pairs:
            m = (4 * N) // math.gcd(4 * N, 2 * d)
            self.orders.append(m)
        self.active = [t for t, m in enumerate(self.orders) if m > 1]
        dim = 1
        for t in self.active:
            dim *= self.orders[t]
        self.dim = dim
        expected = N ** (3 * T.genus + T.num_vertices - 3)
        if dim != expected:
            raise DimensionMismatch(
                f"clock/shift dimension {dim} != N^(3g+p-3) = {expected}")
        # mixed-radix strides for the tensor index
        self.strides = []
        s = 1
        for t in reversed(self.active):
            self.strides.insert(0, s)
            s *= self.orders[t]

    def _w_data(self, gamma):
        """Scalar omega-exponent and (alpha, beta) per active pair.

        W(k) = omega^(sum_t d_t alpha_t beta_t) prod_t V_t^(beta_t) U_t^(alpha_t)
        with U V = omega^(2d) V U satisfies W(k) W(l) = omega^(k.sigma.l) W(k+l).
        """
        s = 0
        ab = []
        for t, (a, b, d) in enumerate(self.pairs):
            al, be = gamma[a], gamma[b]
            s += d * al * be
            if t in self.active:
                ab.append((al, be, d, self.orders[t]))
        return s % (4 * self.N), ab

    def _w_matrix(self, gamma, extra_exp=0, coeff=None) -> MonomialMatrix:
        """omega^extra * coeff * W(k) for k with the given coordinates."""
        base, ab = self._w_data(gamma)
        base = (base + extra_exp) % (4 * self.N)
        dim = self.dim
        perm = [0] * dim
        scale = [None] * dim
        one = self.ctx.one()
        c = one if coeff is None else coeff
        for i in range(dim):
            idx = i
            expo = base
            target = 0
            for (al, be, d, m), stride in zip(ab, self.strides):
                pos = (idx // stride) % m
                expo += 2 * d * al * pos
                target += ((pos + be) % m) * stride
            perm[i] = target
            scale[i] = c * self.ctx.omega(expo % (4 * self.N))
        return MonomialMatrix(dim, perm, scale)

    # -- character --

    def _solve_character(self):
        N, T = self.N, self.T
        n = self.algebra.n
        mod = 4 * N
        rows, rhs = [], []
        self.x = list(self.weights.x)
        for i in range(n):
            k = [0] * n
            k[i] = 2 * N
            gamma = self.lattice.coords(k)
            s, ab = self._w_data(gamma)
            for al, be, d, m in ab:
                if be % m != 0 or (2 * d * al) % mod != 0:
                    raise NotScalar("W(Z_i^2N) is not scalar; construction bug")
            rows.append(list(gamma))
            rhs.append(-s % mod)
        self._hv_logs = []
        for v in range(T.num_vertices):
            h = T.end_counts(v)
            gamma = self.lattice.coords(h)
            s, ab = self._w_data(gamma)
            if ab and any(al or be for al, be, _, _ in ab):
                raise NotScalar("W(H_v) is not the identity; construction bug")
            uh = self._u_power(h)
            try:
                duh = self.ctx.omega_log(uh)
            except ValueError as exc:
                raise InconsistentCenter(
                    f"fan product u^(h_v) at vertex {v} is not a root of "
                    f"unity; weights are not vertex-valid") from exc
            self._hv_logs.append(duh)
            rows.append(list(gamma))
            rhs.append((2 * N + 4 - duh - s) % mod)
        rho = il.solve_mod(rows, rhs, mod)
        if rho is None:
            raise InconsistentCenter(
                "no character realizes mu(Z_i^2N) = x_i and mu(H_v) = -omega^4")
        self.rho = rho

    def _u_power(self, k):
        out = self.ctx.one()
        for i, ki in enumerate(k):
            if ki:
                ui = self.weights.u[i]
                if ki > 0:
                    out = out * ui ** ki
                else:
                    inv = (1.0 / ui) if self.weights.mode == "float" else ui.inv()
                    out = out * inv ** (-ki)
        return out

    # -- evaluation --

    def cocycle(self, k):
        """tau(k) with mu([Z^k]) = tau(k) W(k)."""
        gamma = self.lattice.coords(k)
        e = sum(r * g for r, g in zip(self.rho, gamma)) % (4 * self.N)
        if self.sign is not None and self.sign.value(k):
            e = (e + 2 * self.N) % (4 * self.N)
        return self._u_power(k) * self.ctx.omega(e)

    def cocycle_exponent(self, k) -> int:
        """Weight-independent omega-exponent part of tau(k)."""
        gamma = self.lattice.coords(k)
        e = sum(r * g for r, g in zip(self.rho, gamma)) % (4 * self.N)
        if self.sign is not None and self.sign.value(k):
            e = (e + 2 * self.N) % (4 * self.N)
        return e

    def weyl_image(self, k) -> MonomialMatrix:
        """mu([Z^k])."""
        gamma = self.lattice.coords(k)
        return self._w_matrix(gamma, coeff=self.cocycle(k))

    def intertwiner_part(self, k):
        """A_k with mu([Z^k]) = u^k A_k, as weight-independent discrete data:
        (perm tuple, omega-exponent tuple)."""
        gamma = self.lattice.coords(k)
        base, ab = self._w_data(gamma)
        base = (base + self.cocycle_exponent(k)) % (4 * self.N)
        perm, expo = [], []
        for i in range(self.dim):
            e = base
            target = 0
            for (al, be, d, m), stride in zip(ab, self.strides):
                pos = (i // stride) % m
                e += 2 * d * al * pos
                target += ((pos + be) % m) * stride
            perm.append(target)
            expo.append(e % (4 * self.N))
        return tuple(perm), tuple(expo)

    def monomial_image(self, k) -> MonomialMatrix:
        """mu(Z^k) = omega^(w(k)) mu([Z^k])."""
        gamma = self.lattice.coords(k)
        w = self.algebra.weyl_weight(k)
        return self._w_matrix(gamma, extra_exp=0,
                              coeff=self.cocycle(k) * self.ctx.omega(w))

    def apply(self, a: QTElement):
        """Dense matrix of mu(a); float mode returns a numpy array."""
        self.algebra.require_balanced(a)
        zero = self.ctx.zero()
        if self.weights.mode == "float":
            M = np.zeros((self.dim, self.dim), dtype=complex)
            for k, c in a.terms.items():
                mm = self.monomial_image(k)
                cc = c.to_complex()
                for i in range(self.dim):
                    M[mm.perm[i], i] += cc * mm.scale[i]
            return M
        M = [[zero for _ in range(self.dim)] for _ in range(self.dim)]
        for k, c in a.terms.items():
            mm = self.monomial_image(k)
            for i in range(self.dim):
                M[mm.perm[i]][i] = M[mm.perm[i]][i] + c * mm.scale[i]
        return M

    def identity_matrix(self):
        if self.weights.mode == "float":
            return np.eye(self.dim, dtype=complex)
        one, zero = self.ctx.one(), self.ctx.zero()
        return [[one if i == j else zero for j in range(self.dim)]
                for i in range(self.dim)]

    def basis_images(self) -> list[MonomialMatrix]:
        return [self.weyl_image(b) for b in self.lattice.basis]

    def hv_scalar(self):
        """The common scalar of mu(H_v)."""
        return -self.ctx.omega(4)

    # -- derived checks --

    def commutant_dim(self, tol: float = 1e-8) -> int:
        """Dimension of the commutant of the image, via orbit-phase
        propagation over the monomial generator matrices."""
        gens = self.basis_images()
        D = self.dim
        total = D * D
        seen = [False] * total
        dim = 0
        for root in range(total):
            if seen[root]:
                continue
            phases = {root: self.ctx.one()}
            stack = [root]
            seen[root] = True
            consistent = True
            while stack:
                pos = stack.pop()
                i, j = divmod(pos, D)
                ph = phases[pos]
                for g in gens:
                    # X[p(i), p(j)] = s_i / s_j X[i, j]
                    ni, nj = g.perm[i], g.perm[j]
                    npos = ni * D + nj
                    sj = g.scale[j]
                    mult = g.scale[i] * ((1.0 / sj) if isinstance(sj, complex)
                                         else sj.inv())
                    val = ph * mult
                    if npos in phases:
                        diff = phases[npos] - val
                        bad = (abs(diff) > tol if isinstance(diff, complex)
                               else not diff.is_zero())
                        if bad:
                            consistent = False
                    else:
                        phases[npos] = val
                        seen[npos] = True
                        stack.append(npos)
            if consistent:
                dim += 1
        return dim

    def precompose_sign_reversal(self, eps: SignReversalClass) -> "CFRep":
        eps.require_admissible()
        if self.sign is None:
            combined = eps
        else:
            combined = SignReversalClass(
                self.T, [a ^ b for a, b in zip(self.sign.c, eps.c)])
        rep = object.__new__(CFRep)
        rep.__dict__.update(self.__dict__)
        rep.sign = combined if any(combined.c) else None
        return rep

    # -- serialization --

    def dump_matrices(self) -> str:
        basis = [list(b) for b in self.lattice.basis]
        mats = []
        for mm in self.basis_images():
            dense = mm.to_dense(self.ctx.zero())
            if self.weights.mode == "float":
                mats.append([[z.real, z.imag] for row in dense for z in row])
            else:
                mats.append([z.serialize() for row in dense for z in row])
        return json.dumps({"dim": self.dim, "basis": basis, "matrices": mats})


def build_rep(T: Triangulation, N: int, weights: WeightSystem,
              sign_choices: SignReversalClass | None = None,
              algebra: CFAlgebra | None = None) -> CFRep:
    """Construct the representation with mu(Z_i^2N) = x_i, mu(H_v) = -omega^4."""
    alg = algebra if algebra is not None else CFAlgebra(T, N)
    return CFRep(alg, weights, sign_choices=sign_choices)
