"""Klein quartic models, symmetries, published matrices, constants."""
import cmath
import math

import numpy as np
import pytest

from periodlab import klein
from periodlab.constants import (ALPHA, BETA, E_PERIOD, GAMMA, MU, NU, R3,
                                 SQRT7, Z_VALUE, ZETA7)
from periodlab.homology import symplectic_j
from periodlab.periods import modular_transform

J6 = symplectic_j(3)


def circulant(a, b, c):
    return np.array([[a, b, c], [b, c, a], [c, a, b]])


# ---------------------------------------------------------------- constants

def test_tau_theorem_closed_form():
    e = (-1 + 1j * SQRT7) / 2
    target = 0.5 * np.array([[e, 1, 1], [1, e, 1], [1, 1, e]])
    assert np.abs(np.array(klein.TAU_THEOREM) - target).max() < 1e-15


def test_e_period_is_a_gauss_sum():
    assert abs(E_PERIOD - (ZETA7 + ZETA7 ** 2 + ZETA7 ** 4)) < 1e-15


def test_mu_nu_minimal_polynomials():
    assert abs(MU ** 3 + MU ** 2 - 2 * MU - 1) < 1e-12
    assert abs(NU ** 3 - 2 * NU ** 2 - NU + 1) < 1e-12
    assert abs(MU - 2 * math.cos(2 * math.pi / 7)) < 1e-15
    assert abs(NU - (1 + MU)) < 1e-15


def test_involution_coefficient_relations():
    assert abs(ALPHA * GAMMA - BETA * (BETA + 1)) < 1e-14
    assert abs(BETA ** 2 - (ALPHA + 1) * (GAMMA + 1)) < 1e-14


def test_z_modulus_equals_r3():
    assert abs(abs(Z_VALUE) - R3) < 1e-14


# ------------------------------------------------------------------- models

@pytest.mark.parametrize("model_id", ["xy", "ts", "zw"])
def test_models_share_genus_and_offer_three_differentials(model_id):
    model = klein.build_model(model_id)
    assert model.curve.genus() == 3
    assert len(model.differentials) == 3


def test_unknown_model_rejected():
    with pytest.raises(Exception):
        klein.build_model("uv")


@pytest.mark.parametrize("src, dst", [("xy", "ts"), ("xy", "zw")])
def test_coordinate_maps_round_trip(src, dst):
    model = klein.build_model(src)
    forward, back = model.maps_to[dst]
    curve = model.curve
    x = curve.base_point + 0.13 - 0.21j
    for y in curve.fiber(x):
        u, v = forward(x, y)
        x2, y2 = back(u, v)
        assert abs(x2 - x) < 1e-9 and abs(y2 - y) < 1e-9


@pytest.mark.parametrize("src, dst", [("xy", "ts"), ("xy", "zw")])
def test_coordinate_maps_land_on_the_target_curve(src, dst):
    model = klein.build_model(src)
    target = klein.build_model(dst)
    forward, _ = model.maps_to[dst]
    x = model.curve.base_point + 0.29 + 0.11j
    for y in model.curve.fiber(x):
        u, v = forward(x, y)
        coeffs = target.curve.y_coefficients(u)
        assert abs(np.polyval(coeffs, v)) < 1e-8


# --------------------------------------------------------------- symmetries

@pytest.mark.parametrize("name, order", [
    ("order3", 3), ("order7", 7), ("involution", 2),
])
def test_symmetry_pointmaps_have_the_right_order(name, order):
    sym = klein.SYMMETRIES[name]
    for model_id in sym.maps:
        pointmap = sym.map_in(model_id)
        curve = klein.build_model(model_id).curve
        x = curve.base_point + 0.17 - 0.09j
        y = curve.fiber(x)[1]
        px, py = x, y
        for _ in range(order):
            px, py = pointmap(px, py)
        assert abs(px - x) < 1e-9 and abs(py - y) < 1e-9, model_id


def test_symmetry_reports_all_pass(symmetry_report):
    report = symmetry_report
    assert report["pass"]
    for entry in report["symmetries"].values():
        assert entry["pass"]


def test_antiholo_acts_by_conjugation_on_tau(period_data, symmetry_report):
    """The antiholomorphic symmetry sends tau to its own inverse, which is
    also its conjugate; this replaces the holomorphic Riccati residual."""
    entry = symmetry_report["symmetries"]["antiholo"]
    assert entry["tau_conjugate_deviation"] <= 1e-8
    assert entry["tau_inverse_deviation"] <= 1e-8
    tau = period_data.tau
    assert np.abs(np.conj(tau) - np.linalg.inv(tau)).max() < 1e-8


# -------------------------------------------------- period matrix structure

def test_involution_period_equation(period_data):
    x, y, z = period_data.A_periods[0]
    lhs = -np.array([[z, x, y], [y, z, x], [x, y, z]])
    rhs = circulant(x, y, z) @ circulant(ALPHA, BETA, GAMMA)
    assert np.abs(lhs - rhs).max() < 1e-8


def test_involution_equations_are_dependent(period_data):
    # the second equation is the first multiplied by (beta+1)/alpha,
    # using the coefficient relations; only one complex equation is new
    x, y, z = period_data.A_periods[0]
    first = ALPHA * x + BETA * y + GAMMA * z + z
    second = (BETA + 1) * x + GAMMA * y + ALPHA * z
    assert abs(first) < 1e-8
    assert abs(second) < 1e-8
    assert abs(second - (BETA + 1) / ALPHA * first) < 1e-8


def test_a_row_ratios_are_mu_and_nu(period_data):
    x, y, z = period_data.A_periods[0]
    assert abs(abs(x) / abs(z) - MU) < 1e-8
    assert abs(abs(y) / abs(z) - NU) < 1e-8


def test_monodromy_report_passes(monodromy_report):
    report = monodromy_report
    assert report["pass"]
    assert report["infinity_is_identity"]
    assert report["composition_is_identity"]
    shifts = {k: v["shift"] for k, v in report["shifts"].items()}
    assert shifts == {"1": 1, "rho": 2, "rho2": 4}


def test_theorem_report_passes(theorem_report):
    assert theorem_report["pass"]


def test_adapted_basis_report_passes():
    report = klein.verify_adapted_basis()
    assert report["pass"]
    assert np.array_equal(np.array(report["intersection_matrix"]), J6)


def test_rl_report_passes(rl_report):
    assert rl_report["pass"]


def test_section7_report_is_honest_about_the_rga_pair(section7_report):
    report = section7_report
    for name, entry in report["targets"].items():
        assert entry["symplectic"]
        if name != "RGA":
            assert entry["pass"]
    # the stored RGA pair disagrees with its own transform by a factor of 4,
    # and the report must say so rather than hide it
    rga = report["targets"]["RGA"]
    assert not rga["pass"]
    assert not report["pass"]
    assert abs(rga["target_over_image"] - 4) < 1e-8


@pytest.mark.parametrize("src", ["RL", "yoshida", "tadokoro"])
@pytest.mark.parametrize("dst", ["tretkoff", "schindler"])
def test_published_pairs_are_mutually_consistent(src, dst, period_data):
    """Any two correct pairs are linked by the transform M_dst M_src^-1."""
    targets = klein.ReferenceMatrices.targets()
    tau_src, m_src = targets[src]
    tau_dst, m_dst = targets[dst]
    m_src = np.array(m_src.matrix)
    m_dst = np.array(m_dst.matrix)
    link = m_dst @ np.round(np.linalg.inv(m_src)).astype(int)
    assert np.array_equal(link @ J6 @ link.T, J6)
    image = modular_transform(np.array(tau_src), link)
    assert np.abs(image - np.array(tau_dst)).max() < 1e-8


def test_transported_adapted_basis_stays_canonical():
    basis = klein.build_shifted_adapted_basis()
    moved = klein.transport_basis(basis, "zw", "ts")
    assert moved.is_canonical()
