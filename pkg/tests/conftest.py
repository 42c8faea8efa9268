"""Shared fixtures.

The expensive Klein pipeline is cached inside the package, so the
session-scoped fixtures here are thin handles, not recomputations.
"""
import cmath
import math

import pytest

from periodlab import api, klein
from periodlab.curve import PlaneCurve
from periodlab.cycles import annotate_cycle
from periodlab.homology import HomologyBasis
from periodlab.periods import Differential


def polygon_circle(center, radius, n=24, turns=1):
    return [center + radius * cmath.exp(2j * math.pi * turns * k / n)
            for k in range(n * turns)]


@pytest.fixture(scope="session")
def circle():
    return polygon_circle


@pytest.fixture(scope="session")
def xy_model():
    return klein.build_model("xy")


@pytest.fixture(scope="session")
def ts_model():
    return klein.build_model("ts")


@pytest.fixture(scope="session")
def zw_model():
    return klein.build_model("zw")


@pytest.fixture(scope="session")
def adapted_basis():
    return klein.build_adapted_basis()


@pytest.fixture(scope="session")
def period_data():
    return klein.compute_period_data()


# the verify reports are not cached inside the package, so share one run
@pytest.fixture(scope="session")
def monodromy_report():
    return klein.verify_monodromy()


@pytest.fixture(scope="session")
def theorem_report():
    return klein.verify_theorem1(tol=1e-8)


@pytest.fixture(scope="session")
def section7_report():
    return klein.verify_section7(tol=1e-8)


@pytest.fixture(scope="session")
def symmetry_report():
    return klein.verify_symmetries(tol=1e-8)


@pytest.fixture(scope="session")
def rl_report():
    return klein.verify_rl_basis(tol=1e-8)


@pytest.fixture(scope="session")
def elliptic():
    """Legendre-type curve with lambda = 1/2, so tau = i in the basis below."""
    curve = PlaneCurve("y^2 - x*(x-1)*(x-2)")
    a = annotate_cycle(curve, polygon_circle(0.5, 0.8), 0, name="a")
    b = annotate_cycle(curve, polygon_circle(1.5, 0.8), 0, name="b")
    return curve, HomologyBasis(curve, (a, b), name="ab")


@pytest.fixture(scope="session")
def elliptic_diff():
    return Differential("1", "2*y", varnames=("x", "y"))


@pytest.fixture(scope="session")
def adapted_blob(zw_model, adapted_basis):
    return api.cycle_file("klein-zw", adapted_basis.cycles,
                          zw_model.curve.base_point)


@pytest.fixture(scope="session")
def elliptic_blob(elliptic):
    curve, basis = elliptic
    return api.cycle_file("y^2 - x*(x-1)*(x-2)", basis.cycles,
                          curve.base_point)
