"""Period integrals of differentials over cycles and the matrices built
from them.

Conventions, fixed once for the whole package:
  - A differential is ω = (num/den)·dx along the curve's first variable.
  - A_periods[i][j] = integral of differential j over a-cycle i, likewise
    B_periods over the b-cycles; tau = B·A⁻¹.
  - A transform matrix M acts on a stacked period matrix (A; B) from the
    left; its blocks are M = [[A, B], [C, D]] and the induced action on
    tau is tau' = (C + D·tau)(A + B·tau)⁻¹.  Successive transforms
    compose as matrix products with the later transform on the left.
"""
from __future__ import annotations

import functools

import numpy as np

from .curve import continue_fiber
from .cycles import lift_cycle
from .errors import LinearAlgebraError, QuadratureError
from .homology import SymplecticMatrix
from .polynomial import parse_polynomial

CONDITION_LIMIT = 1e8
DEFAULT_TOL = 1e-10
MAX_BISECTIONS = 14


class Differential:
    """A rational differential (num/den)·dx on a plane curve."""

    def __init__(self, numerator, denominator, varnames=None):
        if isinstance(numerator, str):
            numerator = parse_polynomial(numerator, varnames=varnames)
        if isinstance(denominator, str):
            denominator = parse_polynomial(denominator,
                                           varnames=numerator.varnames)
        if denominator.is_zero():
            raise ZeroDivisionError("differential denominator is zero")
        self.numerator = numerator
        self.denominator = denominator

    def evaluate(self, x, y):
        den = self.denominator.evaluate(x, y)
        num = self.numerator.evaluate(x, y)
        scale = _poly_scale(self.denominator, x, y)
        if abs(den) < 1e-12 * scale:
            raise QuadratureError(
                f"differential denominator vanishes near (x={x}, y={y})")
        return num / den

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator}) d{self.numerator.varnames[0]}"


def _poly_scale(poly, x, y):
    ax, ay = abs(x), abs(y)
    return sum(abs(c) * ax ** i * ay ** j for (i, j), c in poly.terms.items()) or 1.0


class PeriodData:
    """a- and b-period matrices with tau and its diagnostics."""

    def __init__(self, a_periods, b_periods, tau, condition, diagnostics):
        self.A_periods = np.asarray(a_periods)
        self.B_periods = np.asarray(b_periods)
        self.tau = np.asarray(tau)
        self.condition = condition
        self.diagnostics = diagnostics

    @property
    def genus(self):
        return self.tau.shape[0]


class DifferentialAction:
    """Pullback action L on differentials induced by a homology transform,
    with the residual of the full block constraint M(A;B) = (A;B)L."""

    def __init__(self, L, residual):
        self.L = np.asarray(L)
        self.residual = float(residual)


@functools.lru_cache(maxsize=32)
def _gauss_nodes(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # shifted to the parameter interval (0, 1)
    return 0.5 * (nodes + 1), 0.5 * weights


def continue_fiber_collect(curve, a, b, fiber_start, params):
    final, collected = continue_fiber(curve, a, b, fiber_start,
                                      collect_at=list(params))
    return final, collected


def _integrate_lift(curve, lift, diffs, tol):
    """Integrals of several differentials over one lifted cycle.

    The whole fiber is carried along; the tracked strand supplies y.  Each
    edge gets an equal share of the absolute tolerance.
    """
    edges = len(lift.vertices) - 1
    if edges == 0:
        return np.zeros(len(diffs), dtype=complex)
    budget = tol / edges
    total = np.zeros(len(diffs), dtype=complex)
    for k in range(edges):
        a, b = lift.vertices[k], lift.vertices[k + 1]
        if a == b:
            continue
        strand_fiber = lift.fibers[k]
        est = _edge_quadrature_strand(curve, strand_fiber, lift.start_index,
                                      a, b, diffs, budget)
        total += est
    return total


def _edge_quadrature_strand(curve, fiber_start, strand, a, b, diffs, budget,
                            depth=0):
    t12, w12 = _gauss_nodes(12)
    t24, w24 = _gauss_nodes(24)
    params = sorted(set(t12.tolist()) | set(t24.tolist()))
    index = {t: k for k, t in enumerate(params)}
    _, fibers = continue_fiber_collect(curve, a, b, fiber_start, params)
    dx = b - a
    values = np.empty((len(params), len(diffs)), dtype=complex)
    for k, t in enumerate(params):
        x = a + t * dx
        y = fibers[k][strand]
        for d, diff in enumerate(diffs):
            values[k, d] = diff.evaluate(x, y) * dx
    est12 = sum(w * values[index[t]] for t, w in zip(t12, w12))
    est24 = sum(w * values[index[t]] for t, w in zip(t24, w24))
    err = np.max(np.abs(est24 - est12))
    if err <= budget or err <= 1e-15 * max(1.0, float(np.max(np.abs(est24)))):
        return est24
    if depth >= MAX_BISECTIONS:
        raise QuadratureError(
            f"quadrature did not converge on edge {a} -> {b} "
            f"(error {err:.2e} vs budget {budget:.2e})")
    _, mid_fibers = continue_fiber_collect(curve, a, b, fiber_start, [0.5])
    m = a + 0.5 * dx
    left = _edge_quadrature_strand(curve, fiber_start, strand, a, m, diffs,
                                   budget / 2, depth + 1)
    right = _edge_quadrature_strand(curve, mid_fibers[0], strand, m, b, diffs,
                                    budget / 2, depth + 1)
    return left + right


def integrate_differential(curve, differential, cycle, tol=DEFAULT_TOL):
    """Integral of one differential over one cycle, to absolute accuracy tol."""
    lift = cycle if hasattr(cycle, "fibers") else lift_cycle(curve, cycle)
    return complex(_integrate_lift(curve, lift, [differential], tol)[0])


def period_matrices(curve, differentials, basis, tol=DEFAULT_TOL):
    """PeriodData for g differentials over a canonical basis of 2g cycles."""
    g = basis.genus
    if len(differentials) != g:
        raise LinearAlgebraError(
            f"need {g} differentials for genus {g}, got {len(differentials)}")
    lifts = basis.lifts
    rows = [
        _integrate_lift(curve, lift, differentials, tol) for lift in lifts
    ]
    a_mat = np.array(rows[:g])
    b_mat = np.array(rows[g:])
    condition = float(np.linalg.cond(a_mat))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise LinearAlgebraError(
            "a-period matrix is numerically singular", condition=condition)
    # tau = B A^{-1}, computed as a solve against A^T
    tau = np.linalg.solve(a_mat.T, b_mat.T).T
    diagnostics = check_riemann_conditions_tau(tau, tol=1e-6)
    diagnostics["condition"] = condition
    return PeriodData(a_mat, b_mat, tau, condition, diagnostics)


def check_riemann_conditions_tau(tau, tol=1e-8):
    tau = np.asarray(tau)
    asym = float(np.max(np.abs(tau - tau.T))) if tau.size else 0.0
    eigs = np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))
    min_eig = float(eigs.min()) if eigs.size else 0.0
    return {
        "max_asymmetry": asym,
        "min_imag_eigenvalue": min_eig,
        "symmetric": asym <= tol,
        "positive_definite": min_eig > 0,
        "pass": asym <= tol and min_eig > 0,
    }


def check_riemann_conditions(pd, tol=1e-8):
    """Symmetry and positivity report for a PeriodData or a bare tau."""
    tau = pd.tau if hasattr(pd, "tau") else pd
    return check_riemann_conditions_tau(tau, tol)


def _blocks(M):
    if isinstance(M, SymplecticMatrix):
        return M.blocks()
    M = np.asarray(M)
    g = M.shape[0] // 2
    return M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:]


def modular_transform(tau, M):
    """tau' = (C + D·tau)(A + B·tau)⁻¹ for M = [[A, B], [C, D]]."""
    tau = np.asarray(tau, dtype=complex)
    A, B, C, D = _blocks(M)
    lhs = A + B @ tau
    condition = float(np.linalg.cond(lhs))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise LinearAlgebraError("A + B·tau is numerically singular",
                                 condition=condition)
    return np.linalg.solve(lhs.T, (C + D @ tau).T).T


def differential_action(pd, M):
    """L with M(A;B) = (A;B)L, plus the residual of the unused block row.

    L = A_periods⁻¹(A·A_periods + B·B_periods); the residual reported is
    the max entry of C·A_periods + D·B_periods − B_periods·L, scaled by
    the period magnitudes.
    """
    A, B, C, D = _blocks(M)
    a_mat, b_mat = pd.A_periods, pd.B_periods
    condition = float(np.linalg.cond(a_mat))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise LinearAlgebraError("a-period matrix is numerically singular",
                                 condition=condition)
    top = A @ a_mat + B @ b_mat
    L = np.linalg.solve(a_mat, top)
    bottom = C @ a_mat + D @ b_mat - b_mat @ L
    scale = max(float(np.max(np.abs(a_mat))), float(np.max(np.abs(b_mat))), 1e-300)
    return DifferentialAction(L, float(np.max(np.abs(bottom))) / scale)


def riccati_residual(tau, M):
    """Max-entry norm of tau·B·tau + tau·A − D·tau − C."""
    tau = np.asarray(tau, dtype=complex)
    A, B, C, D = _blocks(M)
    res = tau @ B @ tau + tau @ A - D @ tau - C
    return float(np.max(np.abs(res)))


def character_check(L, tau, M, n_max=7, tol=1e-8):
    """Trace identity Tr Lⁿ = Tr (A + B·tau)ⁿ for n = 1..n_max."""
    L = np.asarray(L, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    A, B, _, _ = _blocks(M)
    base = A + B @ tau
    diffs = {}
    Lp = np.eye(L.shape[0], dtype=complex)
    Bp = np.eye(base.shape[0], dtype=complex)
    for n in range(1, n_max + 1):
        Lp = Lp @ L
        Bp = Bp @ base
        diffs[n] = abs(np.trace(Lp) - np.trace(Bp))
    return {
        "trace_differences": diffs,
        "max_difference": max(diffs.values()),
        "pass": max(diffs.values()) <= tol,
    }
