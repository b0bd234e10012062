import random

import pytest

from skeinrep.cfalgebra import CFAlgebra
from skeinrep.triangulation import octahedron, standard_library


@pytest.fixture(scope="session")
def torus():
    return standard_library("torus1")


@pytest.fixture(scope="session")
def sphere():
    return standard_library("sphere2")


@pytest.fixture(scope="session")
def genus2():
    return standard_library("genus2_sep")


@pytest.fixture(scope="session")
def octa():
    return octahedron()


def random_balanced_exponent(alg: CFAlgebra, rng: random.Random, bound: int = 2):
    """Random vector in the balanced lattice with small entries."""
    from skeinrep.cfalgebra import BalancedLattice
    lat = lattice_of(alg)
    while True:
        k = [0] * alg.n
        for b in lat.basis:
            c = rng.randint(-bound, bound)
            if c:
                k = [a + c * x for a, x in zip(k, b)]
        if any(k):
            return tuple(k)


_lattices = {}


def lattice_of(alg: CFAlgebra):
    from skeinrep.cfalgebra import BalancedLattice
    key = id(alg)
    if key not in _lattices:
        _lattices[key] = BalancedLattice(alg)
    return _lattices[key]


def random_balanced_monomial(alg: CFAlgebra, rng: random.Random, bound: int = 2):
    k = random_balanced_exponent(alg, rng, bound)
    return alg.monomial(k, alg.omega(rng.randrange(4 * alg.N)))
