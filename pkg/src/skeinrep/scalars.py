"""Scalar backends shared by representations and kernel computations.

Exact mode works in Q(zeta_L) with 4N | L and omega = zeta_L^(L/4N), a
primitive 4N-th root of unity; then omega^(2N) = -1 and A = omega^(-2) is a
primitive N-th root of -1.  Float mode uses complex doubles with the same
conventions.  Symbolic algebra (module cfalgebra) is always exact; these
backends only decide how representation matrices and kernels are evaluated.
"""

from __future__ import annotations

import cmath

from .cyclotomic import CycloField, CycloScalar


class ExactScalars:
    mode = "exact"

    def __init__(self, N: int, order: int | None = None):
        if N < 3 or N % 2 == 0:
            raise ValueError("N must be odd and >= 3")
        L = order if order is not None else 4 * N
        if L % (4 * N) != 0:
            raise ValueError("field order must be a multiple of 4N")
        self.N = N
        self.field = CycloField(L)
        self._omega_step = L // (4 * N)

    def omega(self, k: int = 1) -> CycloScalar:
        return self.field.root_pow(k * self._omega_step)

    def one(self) -> CycloScalar:
        return self.field.one()

    def zero(self) -> CycloScalar:
        return self.field.zero()

    def from_rational(self, q) -> CycloScalar:
        return self.field.from_rational(q)

    def is_zero(self, a, tol: float = 0.0) -> bool:
        return a.is_zero()

    def to_complex(self, a) -> complex:
        return a.to_complex()

    def omega_log(self, a) -> int:
        """k with a == omega^k, or raise ValueError."""
        for k in range(4 * self.N):
            if a == self.omega(k):
                return k
        raise ValueError("not a power of omega")


class FloatScalars:
    mode = "float"

    def __init__(self, N: int, tol: float = 1e-9):
        if N < 3 or N % 2 == 0:
            raise ValueError("N must be odd and >= 3")
        self.N = N
        self.tol = tol

    def omega(self, k: int = 1) -> complex:
        return cmath.exp(2j * cmath.pi * k / (4 * self.N))

    def one(self) -> complex:
        return 1.0 + 0j

    def zero(self) -> complex:
        return 0j

    def from_rational(self, q) -> complex:
        return complex(q)

    def is_zero(self, a, tol: float | None = None) -> bool:
        return abs(a) <= (self.tol if tol is None else tol)

    def to_complex(self, a) -> complex:
        return complex(a)

    def omega_log(self, a) -> int:
        """Nearest k with a ~ omega^k; raise if not close to a 4N-th root of 1."""
        n = 4 * self.N
        if abs(abs(a) - 1.0) > 1e-6:
            raise ValueError("not close to a root of unity")
        k = round(cmath.phase(a) * n / (2 * cmath.pi)) % n
        if abs(a - self.omega(k)) > 1e-6:
            raise ValueError("not close to a power of omega")
        return k
