import os

os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("ENABLE_TRACING", "false")

from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402

from core.lattice import Lattice, PathSpec, ThetaSpec, dual_lattice, primal_lattice  # noqa: E402

GOLDEN = "cf:[1;(1)]"
SQRT2 = "cf:[1;(2)]"
FINE = Fraction(1, 10 ** 30)


def integer_lattice(d: int) -> Lattice:
    return Lattice.from_basis([[int(i == j) for j in range(d)] for i in range(d)])


@pytest.fixture
def z2() -> Lattice:
    return integer_lattice(2)


@pytest.fixture
def z3() -> Lattice:
    return integer_lattice(3)


@pytest.fixture
def third() -> Lattice:
    """Λ_θ for θ = 1/3, m = n = 1."""
    return primal_lattice(ThetaSpec.from_strings(["rat:1/3"]), FINE)


@pytest.fixture
def golden_theta() -> ThetaSpec:
    return ThetaSpec.from_strings([GOLDEN])


@pytest.fixture
def golden(golden_theta) -> Lattice:
    return primal_lattice(golden_theta, FINE)


@pytest.fixture
def sqrt2_dual() -> Lattice:
    return dual_lattice(ThetaSpec.from_strings([SQRT2]), FINE)


@pytest.fixture
def zero_primal():
    """Θ = 0 for n = 1 and n = 2, with their primal paths."""
    def build(n: int):
        theta = ThetaSpec.from_strings(["rat:0"] * n)
        return primal_lattice(theta, FINE), PathSpec.primal(1, n)
    return build
