"""Intersection pairing, basis expansion, symplectic transforms."""
import cmath
import math

import numpy as np
import pytest

from periodlab import klein
from periodlab.curve import PlaneCurve
from periodlab.cycles import annotate_cycle
from periodlab.errors import HomologyError, TransformError
from periodlab.homology import (HomologyBasis, expand_in_basis,
                                find_homology_transform, intersection_matrix,
                                intersection_number, pushforward_cycle,
                                symplectic_j, symmetry_matrix)


def test_intersection_matrix_antisymmetric(elliptic):
    curve, basis = elliptic
    P = intersection_matrix(curve, basis)
    assert np.array_equal(P, -P.T)
    assert np.array_equal(P, symplectic_j(1))


def test_intersection_antisymmetry_pairwise(elliptic):
    curve, basis = elliptic
    a, b = basis.cycles
    assert intersection_number(curve, a, b) == 1
    assert intersection_number(curve, b, a) == -1


def test_disjoint_cycles_have_zero_intersection(circle):
    curve = PlaneCurve("y^2 - x*(x-1)*(x-2)*(x-3)*(x-4)")
    left = annotate_cycle(curve, circle(0.5, 0.7), 0, name="left")
    right = annotate_cycle(curve, circle(3.5, 0.7), 0, name="right")
    overlapping = annotate_cycle(curve, circle(1.5, 0.7), 0, name="mid")
    assert intersection_number(curve, left, right) == 0
    assert intersection_number(curve, left, overlapping) in (1, -1)


def test_self_intersection_zero(elliptic):
    curve, basis = elliptic
    for cyc in basis.cycles:
        assert intersection_number(curve, cyc, cyc) == 0


def test_expansion_of_basis_cycles_is_unit_vectors(zw_model, adapted_basis):
    for k, cyc in enumerate(adapted_basis.cycles):
        coeffs = expand_in_basis(zw_model.curve, cyc, adapted_basis)
        want = np.zeros(6, dtype=int)
        want[k] = 1
        assert np.array_equal(coeffs, want)


def test_order7_pushforward_rows(zw_model, adapted_basis):
    """Rows of the order-7 matrix against directly pushed-forward cycles."""
    curve = zw_model.curve
    sym = klein.SYMMETRIES["order7"]
    M = np.array(klein.M_ORDER7.matrix)
    names = adapted_basis.names()
    for row_name in ("a1", "a2"):
        row = names.index(row_name)
        pushed = pushforward_cycle(curve, sym.maps["zw"],
                                   adapted_basis.cycles[row])
        coeffs = expand_in_basis(curve, pushed, adapted_basis)
        assert np.array_equal(coeffs, M[row])


def test_order7_matrix_powers_match_iterated_pushforward(zw_model,
                                                         adapted_basis):
    curve = zw_model.curve
    sym = klein.SYMMETRIES["order7"]
    M = np.array(klein.M_ORDER7.matrix)
    names = adapted_basis.names()
    cyc = adapted_basis.cycles[names.index("a1")]
    pushed = pushforward_cycle(curve, sym.maps["zw"], cyc)
    pushed = pushforward_cycle(curve, sym.maps["zw"], pushed)
    coeffs = expand_in_basis(curve, pushed, adapted_basis)
    assert np.array_equal(coeffs, np.linalg.matrix_power(M, 2)[names.index("a1")])


def test_symmetry_matrix_reproduces_order3(zw_model, adapted_basis):
    sym = klein.SYMMETRIES["order3"]
    M = symmetry_matrix(zw_model.curve, sym.maps["zw"], adapted_basis,
                        name="order3")
    assert np.array_equal(np.array(M.matrix),
                          np.array(klein.M_ORDER3.matrix))


def test_find_homology_transform_identity(zw_model, adapted_basis):
    M = find_homology_transform(zw_model.curve, adapted_basis, adapted_basis)
    assert np.array_equal(np.array(M.matrix), np.eye(6, dtype=int))


def test_transform_to_negated_pair_is_symplectic(elliptic):
    curve, basis = elliptic
    a, b = basis.cycles
    flipped = HomologyBasis(curve, (a.reversed(), b.reversed()), name="neg")
    assert flipped.is_canonical()
    M = np.array(find_homology_transform(curve, basis, flipped).matrix)
    assert np.array_equal(M, -np.eye(2, dtype=int))


def test_transform_rejects_orientation_flip(elliptic):
    curve, basis = elliptic
    a, b = basis.cycles
    wrong = HomologyBasis(curve, (a, b.reversed()), name="flip")
    assert not wrong.is_canonical()
    with pytest.raises(TransformError, match="antisymplectic|orientation"):
        find_homology_transform(curve, basis, wrong)


def test_sheared_basis_transform_matches_expansions(elliptic):
    curve, basis = elliptic
    ra = annotate_cycle(curve, [1.3 - 0.5j, 1.3 + 0.5j, -0.3 + 0.5j,
                                -0.3 - 0.5j], 0, name="ra")
    rb = annotate_cycle(curve, [1.3 - 0.5j, 2.3 - 0.5j, 2.3 + 0.5j,
                                0.7 + 0.5j, 0.7 - 0.5j], 0, name="rb")
    combo = ra.concatenated(rb.reversed())
    sheared = HomologyBasis(curve, (ra, combo), name="sheared")
    assert sheared.is_canonical()
    M = np.array(find_homology_transform(curve, basis, sheared).matrix)
    E = np.array([expand_in_basis(curve, c, basis) for c in sheared.cycles])
    assert np.array_equal(M, E)


def test_degenerate_configuration_is_rejected(circle):
    """A vertex parked near a branch point caps the perturbation size, so a
    vertex-on-edge contact cannot be resolved and must raise."""
    curve = PlaneCurve("y^2 - x*(x-1)")
    frame = [(-0.6 - 0.5j), (0.6 - 0.5j), (0.6 + 0.5j), (-0.6 + 0.5j)]
    c1 = annotate_cycle(curve, frame + frame, 0, name="frame")
    quad = [(-0.4 - 0.35j), (0.6 + 0.1j), (1 + 1e-5j), (-0.4 + 0.35j)]
    c2 = annotate_cycle(curve, quad + quad, 0, name="parked")
    with pytest.raises(HomologyError,
                       match="perturbation needed|disagree|degenera"):
        intersection_number(curve, c1, c2)


def test_intersection_matrix_checks_consistency(circle):
    curve = PlaneCurve("y^2 - x*(x-1)*(x-2)")
    a = annotate_cycle(curve, circle(0.5, 0.8), 0, name="a")
    b = annotate_cycle(curve, circle(1.5, 0.8), 0, name="b")
    P = intersection_matrix(curve, (a, b))
    assert P.tolist() == [[0, 1], [-1, 0]]
