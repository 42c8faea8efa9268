"""The built-in worked example: the genus-3 Klein quartic.

Three plane models of the same curve, the birational maps between them,
their holomorphic differentials, four symmetries with their known actions
on differentials and on homology, an adapted canonical homology basis, a
second basis reconstructed from edge words in the (t, s) model, and the
catalogue of published period matrices this package reproduces.
"""
from __future__ import annotations

import cmath
import functools
import math

import numpy as np

from .constants import (ALPHA, BETA, E_PERIOD, GAMMA, MU, NU, R3, RHO, RHO2,
                        SQRT7, Z_VALUE, ZETA7)
from .curve import (PlaneCurve, _circle_polyline, angular_order,
                    compose_permutations)
from .cycles import SurfaceCycle, annotate_cycle, lift_cycle, validate_cycle
from .errors import HomologyError, TransformError
from .homology import (HomologyBasis, SymplecticMatrix, find_homology_transform,
                       intersection_matrix, pushforward_cycle, symmetry_matrix,
                       symplectic_j)
from .periods import (Differential, character_check, differential_action,
                      modular_transform, period_matrices, riccati_residual)

# --------------------------------------------------------------------------
# reference data

TAU_THEOREM = 0.5 * np.array([
    [E_PERIOD, 1, 1],
    [1, E_PERIOD, 1],
    [1, 1, E_PERIOD],
], dtype=complex)

_I7 = 1j * SQRT7

TAU_RL = np.array([
    [(-1 + 3 * _I7) / 8, (-1 - _I7) / 4, (-3 + _I7) / 8],
    [(-1 - _I7) / 4, (1 + _I7) / 2, (-1 - _I7) / 4],
    [(-3 + _I7) / 8, (-1 - _I7) / 4, (7 + 3 * _I7) / 8],
])
M_RL = SymplecticMatrix([
    [1, -1, 0, 1, -1, 0],
    [0, -1, 1, 0, -1, 1],
    [-1, -1, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 1],
    [-1, 0, 0, -1, 0, 0],
])

TAU_YOSHIDA = np.array([
    [6 * _I7, 7 + 3 * _I7, 2 * _I7],
    [7 + 3 * _I7, 7 + 5 * _I7, 7 + _I7],
    [2 * _I7, 7 + _I7, 7 + 3 * _I7],
]) / 14
M_YOSHIDA = SymplecticMatrix([
    [0, 0, 0, -1, 0, 0],
    [0, 1, 0, 0, 0, -1],
    [0, 0, 1, 0, -1, 1],
    [1, 1, 0, 0, 0, -1],
    [0, 1, 1, -1, 0, 0],
    [0, 1, 0, 0, 0, 0],
])

TAU_TADOKORO = np.array([
    [-1 + 3 * _I7, -3 + _I7, 2 + 2 * _I7],
    [-3 + _I7, -1 + 3 * _I7, 2 + 2 * _I7],
    [2 + 2 * _I7, 2 + 2 * _I7, 4 + 4 * _I7],
]) / 8
M_TADOKORO = SymplecticMatrix([
    [0, 0, 0, 1, 0, 0],
    [0, -1, 1, 0, -1, 1],
    [0, 1, 0, -1, 0, -1],
    [-1, 1, 0, -1, 1, 0],
    [0, 1, 0, -1, 0, 0],
    [0, 1, 1, -1, 0, 0],
])

TAU_TRETKOFF = np.array([
    [7 + 3 * _I7, -3 + _I7, -5 - _I7],
    [-3 + _I7, -1 + 3 * _I7, -3 + _I7],
    [-5 - _I7, -3 + _I7, -1 + 3 * _I7],
]) / 8
M_TRETKOFF = SymplecticMatrix([
    [0, 0, -1, 1, 0, 0],
    [0, 1, 1, -1, 0, 0],
    [0, 0, -1, 0, 0, 0],
    [-1, 0, -1, 1, 1, 0],
    [0, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, -1],
])

TAU_SCHINDLER = np.array([
    [6 * _I7 - 14, 21 - 5 * _I7, -7 + 3 * _I7],
    [21 - 5 * _I7, -42 + 10 * _I7, 14 - 6 * _I7],
    [-7 + 3 * _I7, 14 - 6 * _I7, -7 + 5 * _I7],
]) / 14
M_SCHINDLER = SymplecticMatrix([
    [1, 0, 0, 0, -1, 0],
    [0, -1, -1, 1, 0, 1],
    [0, -2, -1, 2, 0, 1],
    [-1, 0, -1, 1, 1, 1],
    [2, 1, 1, -1, -1, -3],
    [-1, 0, 0, 0, 0, 1],
])

TAU_RGA = ((5 + _I7) / 2) * np.array([
    [3, -1, -1],
    [-1, 3, -1],
    [-1, -1, 3],
], dtype=complex)
M_RGA = SymplecticMatrix([
    [0, 0, 1, -1, 0, 0],
    [0, 1, 1, -1, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [1, -1, 1, -1, -1, 0],
    [0, 2, 0, -1, 1, 0],
    [-1, -1, 1, 1, 0, 1],
])

M_ORDER3 = SymplecticMatrix([
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0],
])
M_ANTIHOLO = SymplecticMatrix([
    [0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, -1],
    [-1, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0],
])
M_ORDER7 = SymplecticMatrix([
    [1, 0, -1, 1, 0, -1],
    [0, 0, 0, 0, 1, 0],
    [-1, 0, -1, 0, 1, 0],
    [-1, 0, 0, 0, 1, 0],
    [0, -1, -1, 1, 0, 0],
    [1, 0, 0, 0, 0, -1],
])
M_ORDER2 = SymplecticMatrix([
    [0, 0, -1, 0, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, -1, 0],
    [0, 0, 0, -1, 0, 0],
])

L_ORDER3 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
L_ORDER7 = np.diag([ZETA7 ** 2, ZETA7, ZETA7 ** 4])
L_ORDER2 = np.array([
    [ALPHA, BETA, GAMMA],
    [BETA, GAMMA, ALPHA],
    [GAMMA, ALPHA, BETA],
], dtype=complex)


class ReferenceMatrices:
    """Published period matrices and the integer transforms reaching them."""
    tau_theorem = TAU_THEOREM
    tau_RL, M_RL = TAU_RL, M_RL
    tau_yoshida, M_yoshida = TAU_YOSHIDA, M_YOSHIDA
    tau_tadokoro, M_tadokoro = TAU_TADOKORO, M_TADOKORO
    tau_tretkoff, M_tretkoff = TAU_TRETKOFF, M_TRETKOFF
    tau_schindler, M_schindler = TAU_SCHINDLER, M_SCHINDLER
    tau_RGA, M_RGA = TAU_RGA, M_RGA

    @classmethod
    def targets(cls):
        return {
            "RL": (cls.tau_RL, cls.M_RL),
            "yoshida": (cls.tau_yoshida, cls.M_yoshida),
            "tadokoro": (cls.tau_tadokoro, cls.M_tadokoro),
            "tretkoff": (cls.tau_tretkoff, cls.M_tretkoff),
            "schindler": (cls.tau_schindler, cls.M_schindler),
            "RGA": (cls.tau_RGA, cls.M_RGA),
        }


class KleinConstants:
    rho = RHO
    zeta = ZETA7
    e = E_PERIOD
    mu = MU
    nu = NU
    r3 = R3
    Z_value = Z_VALUE
    alpha = ALPHA
    beta = BETA
    gamma = GAMMA


# --------------------------------------------------------------------------
# point maps between the models (all rational; no root extraction)

def xy_to_ts(x, y):
    return 1 + x ** 3 / y ** 2, -x / y


def ts_to_xy(t, s):
    return (t - 1) / s ** 2, (1 - t) / s ** 3


def ts_to_zw(t, s):
    d = RHO * t + RHO2
    return (t + RHO2) / d, s * (RHO2 - 1) / d


def zw_to_ts(z, w):
    d = 1 - RHO * z
    return RHO2 * (z - 1) / d, w / d


def xy_to_zw(x, y):
    return ts_to_zw(*xy_to_ts(x, y))


def zw_to_xy(z, w):
    return ts_to_xy(*zw_to_ts(z, w))


_POINT_MAPS = {
    ("xy", "ts"): xy_to_ts, ("ts", "xy"): ts_to_xy,
    ("ts", "zw"): ts_to_zw, ("zw", "ts"): zw_to_ts,
    ("xy", "zw"): xy_to_zw, ("zw", "xy"): zw_to_xy,
}


# symmetry point maps

def order3_zw(z, w):
    return RHO2 * z, RHO2 * (z - 1) * (z - RHO) * (z - RHO2) ** 2 / w ** 3


def order3_xy(x, y):
    return y / x, 1 / x


def order7_zw(z, w):
    return z, ZETA7 * w


def order7_ts(t, s):
    return t, ZETA7 * s


def order7_xy(x, y):
    return ZETA7 ** 5 * x, ZETA7 ** 4 * y


def antiholo_zw(z, w):
    zc, wc = z.conjugate(), w.conjugate()
    return 1 / zc, -RHO * wc / zc


def involution_xy(x, y):
    d = GAMMA * x + ALPHA * y + BETA
    return ((ALPHA * x + BETA * y + GAMMA) / d,
            (BETA * x + GAMMA * y + ALPHA) / d)


def involution_zw(z, w):
    return xy_to_zw(*involution_xy(*zw_to_xy(z, w)))


class KleinSymmetry:
    """One symmetry of the curve with its expected actions."""

    def __init__(self, id, maps, expected_L, expected_M, holomorphic, order):
        self.id = id
        self.maps = maps                  # model id -> point map
        self.expected_L = expected_L      # None for the antiholomorphic one
        self.expected_M = expected_M
        self.holomorphic = holomorphic
        self.order = order

    def map_in(self, model_id):
        if model_id not in self.maps:
            raise KeyError(f"symmetry {self.id} has no map in model {model_id}")
        return self.maps[model_id]


SYMMETRIES = {
    "order3": KleinSymmetry(
        "order3", {"zw": order3_zw, "xy": order3_xy},
        L_ORDER3, M_ORDER3, True, 3),
    "order7": KleinSymmetry(
        "order7", {"zw": order7_zw, "ts": order7_ts, "xy": order7_xy},
        L_ORDER7, M_ORDER7, True, 7),
    "involution": KleinSymmetry(
        "involution", {"xy": involution_xy, "zw": involution_zw},
        L_ORDER2, M_ORDER2, True, 2),
    "antiholo": KleinSymmetry(
        "antiholo", {"zw": antiholo_zw},
        None, M_ANTIHOLO, False, 2),
}


# --------------------------------------------------------------------------
# models

class KleinModel:
    def __init__(self, id, curve, differentials, maps_to):
        self.id = id
        self.curve = curve
        self.differentials = differentials
        self.maps_to = maps_to   # other id -> (forward, inverse) point maps


@functools.lru_cache(maxsize=None)
def build_model(id):
    """One of the three plane models: 'xy', 'ts' or 'zw'."""
    if id == "xy":
        curve = PlaneCurve("x^3*y + y^3 + x", name="klein-xy")
        diffs = [
            Differential("x", "x^3 + 3*y^2", varnames=("x", "y")),
            Differential("y", "x^3 + 3*y^2", varnames=("x", "y")),
            Differential("1", "x^3 + 3*y^2", varnames=("x", "y")),
        ]
    elif id == "ts":
        base = 0.5 + 0j
        labels = [ZETA7 ** k * (1 / 8) ** (1 / 7) for k in range(7)]
        curve = PlaneCurve("s^7 - t*(t-1)^2", base_point=base,
                           sheet_labels=labels, name="klein-ts")
        diffs = [
            Differential("t - 1", "7*s^5", varnames=("t", "s")),
            Differential("-(t - 1)", "7*s^6", varnames=("t", "s")),
            Differential("1", "7*s^3", varnames=("t", "s")),
        ]
    elif id == "zw":
        base = 0j
        labels = [cmath.exp(1j * math.pi * (6 * k - 1) / 21) for k in range(7)]
        curve = PlaneCurve("w^7 - (z-1)*(z-rho)^2*(z-rho2)^4",
                           base_point=base, sheet_labels=labels,
                           name="klein-zw")
        diffs = [
            Differential("rho*(rho-1)*(z-rho)*(z-rho2)^2", "7*w^5",
                         varnames=("z", "w")),
            Differential("(2+rho)*(z-rho)*(z-rho2)^3", "7*w^6",
                         varnames=("z", "w")),
            Differential("(rho-1)*(z-rho2)", "7*w^3", varnames=("z", "w")),
        ]
    else:
        raise ValueError(f"unknown model id {id!r}; use 'xy', 'ts' or 'zw'")
    maps_to = {other: (_POINT_MAPS[(id, other)], _POINT_MAPS[(other, id)])
               for other in ("xy", "ts", "zw") if other != id}
    return KleinModel(id, curve, diffs, maps_to)


MODEL_IDS = ("xy", "ts", "zw")


# --------------------------------------------------------------------------
# the adapted homology basis (zw model)

# sheet action of the order-3 symmetry on the zw fiber labels at z = 0
ORDER3_SHEET = [3, 0, 4, 1, 5, 2, 6]          # k -> (3 - 3k) mod 7
ORDER7_SHEET = [1, 2, 3, 4, 5, 6, 0]          # k -> k + 1

TURN_RADIUS = 0.35
ENTRY_DISTANCE = 0.65


def _adapted_projection(turn_sign):
    """Base-plane polyline: out to the triple loop around z=1, across to a
    single loop around z=rho^2, back to the origin (implicit closure)."""
    p1 = ENTRY_DISTANCE + 0j
    q1 = ENTRY_DISTANCE * RHO2
    loop1 = _circle_polyline(1, TURN_RADIUS, math.pi, 3 * turn_sign)
    angle2 = cmath.phase(q1 - RHO2)
    loop2 = _circle_polyline(RHO2, TURN_RADIUS, angle2, 1 * turn_sign)
    return [0j, p1] + loop1[1:] + [q1] + loop2[1:]


@functools.lru_cache(maxsize=None)
def build_adapted_basis(turn_sign=-1):
    """The canonical basis on the zw model.

    turn_sign -1 means the loops are traversed clockwise (the convention
    that makes the intersection matrix come out as +J; the basis builder
    verifies this and records what it had to do).  a2, a3 are the order-3
    rotations of a1; each b_i shares its projection with a_i and starts
    two sheets up (b1 on sheet 2).
    """
    model = build_model("zw")
    curve = model.curve
    notes = {"turn_sign": turn_sign, "role_swap": False, "reversed_all": False}

    pts = _adapted_projection(turn_sign)
    start = {"a1": 0, "b1": 2}
    cycles = {}
    cycles["a1"] = annotate_cycle(curve, pts, start["a1"], name="a1")
    cycles["b1"] = annotate_cycle(curve, pts, start["b1"], name="b1")
    for k, (src, dst) in enumerate((("a1", "a2"), ("a2", "a3"),
                                    ("b1", "b2"), ("b2", "b3"))):
        src_cycle = cycles[src]
        rotated = [RHO2 * p for p in src_cycle.points]
        cycles[dst] = annotate_cycle(
            curve, rotated, ORDER3_SHEET[src_cycle.start_sheet], name=dst)

    ordered = [cycles[n] for n in ("a1", "a2", "a3", "b1", "b2", "b3")]
    basis = HomologyBasis(curve, ordered, name="adapted")
    j = symplectic_j(3)
    mat = basis.matrix()
    if np.array_equal(mat, -j):
        # pairing came out reversed: exchange the roles of the two halves
        ordered = ordered[3:] + ordered[:3]
        basis = HomologyBasis(curve, ordered, name="adapted")
        notes["role_swap"] = True
        mat = basis.matrix()
    if not np.array_equal(mat, j):
        raise HomologyError(
            f"adapted basis is not canonical: {mat.tolist()}")

    # orient the whole basis so the a-periods carry the documented phases
    # (reversing every cycle preserves the intersection matrix)
    probe = next(c for c in basis.cycles if c.name == "a1")
    z_period = _quick_period(model, probe)
    if (z_period * cmath.exp(9j * math.pi / 14)).real < 0:
        ordered = [c.reversed() for c in basis.cycles]
        basis = HomologyBasis(curve, ordered, name="adapted")
        notes["reversed_all"] = True
        if not np.array_equal(basis.matrix(), j):
            raise HomologyError("orientation flip broke canonicality")
    basis.notes = notes
    return basis


def _quick_period(model, cycle):
    from .periods import integrate_differential
    return integrate_differential(model.curve, model.differentials[2],
                                  cycle, tol=1e-6)


@functools.lru_cache(maxsize=4)
def build_shifted_adapted_basis(offset=0.06 * cmath.exp(0.5j)):
    """Translate of the adapted basis, cycle by cycle.

    z = 0 is a regular point of the cover, so a small translation is a
    homotopy and the classes are unchanged; the copy exists because the
    antiholomorphic symmetry has a pole at the original base vertex.
    """
    from .curve import continue_fiber
    from .cycles import canonical_fiber_order
    model = build_model("zw")
    curve = model.curve
    basis = build_adapted_basis()
    shifted = []
    for cycle, lift in zip(basis.cycles, basis.lifts):
        pts = [p + offset for p in cycle.points]
        moved = continue_fiber(curve, cycle.points[0], pts[0], lift.fibers[0])
        value = moved[lift.start_index]
        order_at = canonical_fiber_order(curve, pts[0])
        idx = int(np.argmin(np.abs(np.asarray(order_at) - value)))
        shifted.append(annotate_cycle(curve, pts, idx,
                                      name=cycle.name + "-shifted"))
    out = HomologyBasis(curve, shifted, name="adapted-shifted")
    if not out.is_canonical():
        raise HomologyError("shifted basis lost canonicality")
    return out


# --------------------------------------------------------------------------
# the edge-word basis in the (t, s) model

# phase exponent of s on each numbered edge; odd edges are identified with
# the even edge printed on the same row of the table
EDGE_PHASE = {2: 0, 11: 0, 4: 4, 13: 4, 6: 1, 1: 1, 8: 5, 3: 5,
              10: 2, 5: 2, 12: 6, 7: 6, 14: 3, 9: 3}

# edge words for the reconstructed basis; positive odd edge numbers run
# from t=1 to t=0, positive even edge numbers run from t=0 to t=1
RL_WORDS = {
    "a1": (1, -7, -4, -9),
    "a2": (-4, -9),
    "a3": (-4, -5),
    "b1": (3, 2, 5, 4),
    "b2": (7, -3),
    "b3": (3, -5),
}

RUN_LO, RUN_HI = 0.15, 0.85
JUNCTION_RADIUS = 0.15


def _edge_run(edge):
    """(start_t, end_t, sheet) of a signed edge traversal."""
    number = abs(edge)
    sheet = EDGE_PHASE[number]
    downward = (number % 2 == 1)          # positive odd: t goes 1 -> 0
    if edge < 0:
        downward = not downward
    return (1, 0, sheet) if downward else (0, 1, sheet)


def _junction_arc(at, m):
    """Full-turn polyline (m may be negative) around t=0 or t=1 connecting
    two runs; the winding count realizes the required sheet shift."""
    if at == 0:
        return _circle_polyline(0, JUNCTION_RADIUS, 0.0, m)
    return _circle_polyline(1, JUNCTION_RADIUS, math.pi, m)


def _wrap_mod7(value):
    """Representative of value mod 7 in {-3..3}."""
    v = value % 7
    return v - 7 if v > 3 else v


def _rl_polyline(word):
    """Closed polyline for one edge word.

    Runs span [0.15, 0.85] through the base point t=1/2; junction arcs at
    t=0 wind m = sheet difference (the local cycle shifts by +1 per
    anticlockwise turn) and at t=1 wind m = 4 * difference (shift +2 per
    turn, and 4 inverts 2 mod 7).
    """
    runs = [_edge_run(e) for e in word]
    for (a_start, a_end, _), (b_start, b_end, _) in zip(runs, runs[1:] + runs[:1]):
        if a_end != b_start:
            raise HomologyError(f"edge word {word} does not chain: "
                                f"run ends at t={a_end}, next starts at t={b_start}")
    points = []
    for k, (t_from, t_to, _) in enumerate(runs):
        lo_to_hi = [RUN_LO, 0.5, RUN_HI]
        run_pts = lo_to_hi if t_from == 0 else lo_to_hi[::-1]
        points.extend(complex(p) for p in run_pts)
        nxt = runs[(k + 1) % len(runs)]
        d_sheet = nxt[2] - runs[k][2]
        junction = t_to
        m = _wrap_mod7(d_sheet) if junction == 0 else _wrap_mod7(4 * d_sheet)
        arc = _junction_arc(junction, m)
        points.extend(arc[1:-1])  # endpoints coincide with run endpoints
    # rotate so the cycle starts at the first run's midpoint (the base point)
    return points[1:] + points[:1], runs[0][2]


@functools.lru_cache(maxsize=None)
def build_rl_basis():
    """The edge-word basis on the ts model, verified canonical."""
    model = build_model("ts")
    curve = model.curve
    cycles = []
    for name in ("a1", "a2", "a3", "b1", "b2", "b3"):
        pts, sheet = _rl_polyline(RL_WORDS[name])
        cycle = annotate_cycle(curve, pts, sheet, name="rl-" + name)
        lift = lift_cycle(curve, cycle)
        if not lift.closes():
            raise HomologyError(
                f"edge word for {name} lifts to a non-closed path "
                "(phase table transcription error)")
        cycles.append(cycle)
    basis = HomologyBasis(curve, cycles, name="rl")
    if not basis.is_canonical():
        raise HomologyError(
            f"edge-word basis is not canonical: {basis.matrix().tolist()}")
    return basis


# --------------------------------------------------------------------------
# transport between models

def transport_cycle(cycle, src_id, dst_id, name=None):
    """Image of a cycle under the birational map between two models."""
    if src_id == dst_id:
        return cycle
    src = build_model(src_id)
    dst = build_model(dst_id)
    pointmap = _POINT_MAPS[(src_id, dst_id)]
    return pushforward_cycle(src.curve, pointmap, cycle,
                             target_curve=dst.curve,
                             name=name or f"{cycle.name}-{dst_id}")


def transport_basis(basis, src_id, dst_id):
    dst = build_model(dst_id)
    cycles = [transport_cycle(c, src_id, dst_id, name=f"{c.name}-{dst_id}")
              for c in basis.cycles]
    return HomologyBasis(dst.curve, cycles, name=f"{basis.name}-{dst_id}")


# --------------------------------------------------------------------------
# verification suites

def _max_dev(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@functools.lru_cache(maxsize=8)
def compute_period_data(tol=1e-10):
    model = build_model("zw")
    basis = build_adapted_basis()
    return period_matrices(model.curve, model.differentials, basis, tol=tol)


def verify_theorem1(tol=1e-8):
    """Period matrix of the zw model over the adapted basis against the
    closed-form reference, plus the structure of the raw period matrices."""
    pd = compute_period_data(tol=min(1e-10, tol))
    a_mat, b_mat, tau = pd.A_periods, pd.B_periods, pd.tau
    report = {"tolerance": tol}
    report["tau_deviation"] = _max_dev(tau, TAU_THEOREM)
    row = a_mat[0]
    circulant = max(_max_dev(a_mat[1], np.roll(row, -1)),
                    _max_dev(a_mat[2], np.roll(row, -2)))
    report["circulant_deviation"] = circulant
    report["b_is_minus_conj_a"] = _max_dev(b_mat, -np.conj(a_mat))
    x, y, z = row
    scale = abs(z)
    phases = {
        "X": x * cmath.exp(1j * math.pi / 14),
        "Y": y * cmath.exp(11j * math.pi / 14),
        "Z": z * cmath.exp(9j * math.pi / 14),
    }
    report["phase_imag"] = {k: abs(v.imag) / scale for k, v in phases.items()}
    report["radii_positive"] = all(v.real > 0 for v in phases.values())
    report["mu_deviation"] = abs(abs(x) / abs(z) - MU)
    report["nu_deviation"] = abs(abs(y) / abs(z) - NU)
    report["Z_deviation"] = abs(z - Z_VALUE)
    report["r3_deviation"] = abs(abs(z) - R3)
    # equivalent form of the phase constraints
    report["phase_relations"] = {
        "Y": abs(-np.conj(y) - ZETA7 ** 2 * y),
        "Z": abs(-np.conj(z) - ZETA7 * z),
        "X": abs(-np.conj(x) - ZETA7 ** 4 * x),
    }
    report["riemann"] = pd.diagnostics
    report["pass"] = (
        report["tau_deviation"] <= tol
        and circulant <= tol
        and report["b_is_minus_conj_a"] <= tol
        and all(v <= tol for v in report["phase_imag"].values())
        and report["radii_positive"]
        and report["mu_deviation"] <= tol
        and report["nu_deviation"] <= tol
        and report["Z_deviation"] <= tol
        and max(report["phase_relations"].values()) <= tol * scale
    )
    return report


def verify_section7(tol=1e-8):
    """Each published period matrix against the modular transform of the
    computed one by its stored integer matrix."""
    pd = compute_period_data()
    tau = pd.tau
    report = {"tolerance": tol, "targets": {}}
    for name, (target, m) in ReferenceMatrices.targets().items():
        entry = {"symplectic": m.is_symplectic}
        image = modular_transform(tau, m)
        entry["max_deviation"] = _max_dev(image, target)
        entry["pass"] = entry["symplectic"] and entry["max_deviation"] <= tol
        if name == "RGA" and not entry["pass"]:
            # the stored target is 4x the transform image, uniformly; the
            # stored M cannot reproduce the stored target under any block
            # convention, so this failure is reported rather than hidden
            ratio = np.asarray(target) / image
            entry["target_over_image"] = complex(ratio.flat[0]) \
                if np.allclose(ratio, ratio.flat[0]) else None
        report["targets"][name] = entry
    report["pass"] = all(v["pass"] for v in report["targets"].values())
    return report


def verify_monodromy(tol=1e-3):
    """Sheet shifts of the zw model against the exponent pattern (1, 2, 4).

    The measured permutation at each branch point identifies which point
    carries which shift; nothing is assumed.  The displayed curve branches
    at z = 1 (not 0), and the measurement confirms that the k -> k+1 shift
    sits there.  tol bounds the located-point deviation only; it is loose
    because the discriminant vanishes to high order at z = rho2, which
    limits that root's attainable accuracy to about 1e-4 in doubles (the
    deviations are reported), while the three candidate points are
    separated by sqrt(3) so identification is unambiguous.  Permutation
    equality is exact, never toleranced.
    """
    model = build_model("zw")
    curve = model.curve
    mons = curve.monodromy()
    inf = curve.monodromy_at_infinity()
    report = {"tolerance": tol, "shifts": {}}
    ok = len(mons) == 3
    for key, point, want in (("1", 1 + 0j, 1), ("rho", RHO, 2),
                             ("rho2", RHO2, 4)):
        m = min(mons, key=lambda mon: abs(mon.branch_point - point))
        shift = m.perm[0]
        uniform = all(m.perm[k] == (k + shift) % 7 for k in range(7))
        entry = {
            "point_deviation": abs(m.branch_point - point),
            "shift": shift,
            "uniform_shift": uniform,
            "matches": (uniform and shift == want
                        and abs(m.branch_point - point) <= tol),
        }
        report["shifts"][key] = entry
        ok = ok and entry["matches"]
    report["infinity_is_identity"] = inf.is_identity()
    ordered = angular_order(curve, mons, start_angle=inf.exit_angle)
    total = compose_permutations([m.perm for m in ordered] + [inf.perm])
    report["composition_is_identity"] = all(
        p == k for k, p in enumerate(total))
    report["genus"] = {mid: build_model(mid).curve.genus()
                       for mid in MODEL_IDS}
    report["pass"] = (ok and report["infinity_is_identity"]
                      and report["composition_is_identity"]
                      and all(g == 3 for g in report["genus"].values()))
    return report


def verify_adapted_basis():
    """Intersection matrix of the adapted basis, which must equal J."""
    basis = build_adapted_basis()
    mat = basis.matrix()
    return {
        "intersection_matrix": [[int(v) for v in row] for row in mat],
        "cycle_names": [c.name for c in basis.cycles],
        "orientation": dict(basis.notes),
        "pass": bool(np.array_equal(mat, symplectic_j(3))),
    }


def verify_rl_basis(tol=1e-8):
    """The edge-word basis is canonical, its own period matrix gives the
    historical tau_RL, and the transform found against the transported
    adapted basis maps the computed tau to tau_RL as well.

    Whether that transform also equals the printed integer matrix entrywise
    is recorded (it does here) but not required: the two bases involve
    independent basepoint and homotopy choices.
    """
    ts = build_model("ts")
    rl = build_rl_basis()
    report = {"tolerance": tol, "canonical": rl.is_canonical()}
    pd = period_matrices(ts.curve, ts.differentials, rl, tol=min(1e-10, tol))
    report["tau_direct_deviation"] = _max_dev(pd.tau, TAU_RL)
    zw = build_model("zw")
    transported = transport_basis(rl, "ts", "zw")
    m = find_homology_transform(zw.curve, build_adapted_basis(), transported)
    report["transform"] = m.matrix.tolist()
    report["transform_symplectic"] = m.is_symplectic
    report["transform_equals_printed"] = bool(m == M_RL)
    tau = compute_period_data().tau
    report["modular_image_deviation"] = _max_dev(
        modular_transform(tau, m), TAU_RL)
    report["pass"] = (report["canonical"]
                      and report["tau_direct_deviation"] <= tol
                      and report["transform_symplectic"]
                      and report["modular_image_deviation"] <= tol)
    return report


def verify_all(tol=1e-8):
    """Every verification suite in one report, one section per suite."""
    report = {
        "tolerance": tol,
        "monodromy": verify_monodromy(),
        "adapted_basis": verify_adapted_basis(),
        "theorem1": verify_theorem1(tol),
        "section7": verify_section7(tol),
        "symmetries": verify_symmetries(tol),
        "rl_basis": verify_rl_basis(tol),
    }
    report["pass"] = all(
        report[k]["pass"] for k in ("monodromy", "adapted_basis", "theorem1",
                                    "section7", "symmetries", "rl_basis"))
    return report


def _sample_points(curve, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x = complex(*rng.uniform(-1.4, 1.4, 2))
        try:
            fib = curve.fiber(x)
        except Exception:
            continue
        out.append((x, complex(fib[rng.integers(len(fib))])))
    return out


def _curve_preservation(model_id, pointmap, samples):
    curve = build_model(model_id).curve
    worst = 0.0
    for x, y in samples:
        X, Y = pointmap(x, y)
        val = abs(curve.f.evaluate(X, Y))
        scale = sum(abs(c) * abs(X) ** i * abs(Y) ** j
                    for (i, j), c in curve.f.terms.items()) or 1.0
        worst = max(worst, val / scale)
    return worst


def verify_symmetries(tol=1e-8):
    """Point maps preserve the curve; homology actions match the stored
    matrices; differential actions match the stored pullback matrices; the
    trace identities hold.  The antiholomorphic symmetry is checked via its
    conjugate-linear analogues."""
    model = build_model("zw")
    curve = model.curve
    basis = build_adapted_basis()
    pd = compute_period_data()
    tau = pd.tau
    report = {"tolerance": tol, "symmetries": {}}
    samples = _sample_points(curve, 8, seed=20260817)

    for name, sym in SYMMETRIES.items():
        entry = {}
        pointmap = sym.map_in("zw")
        entry["curve_preservation"] = _curve_preservation("zw", pointmap, samples)
        # the antiholomorphic map has a pole at the basis base vertex; a
        # translated copy of the basis carries the same classes
        basis_for_map = basis if sym.holomorphic else build_shifted_adapted_basis()
        m_found = symmetry_matrix(curve, pointmap, basis_for_map)
        entry["M_matches"] = bool(m_found == sym.expected_M)
        entry["M_signature"] = m_found.signature
        entry["order_relation"] = bool(
            (sym.expected_M ** sym.order) == np.eye(6, dtype=int))
        if sym.holomorphic:
            action = differential_action(pd, sym.expected_M)
            entry["L_deviation"] = _max_dev(action.L, sym.expected_L)
            entry["constraint_residual"] = action.residual
            entry["riccati_residual"] = riccati_residual(tau, sym.expected_M)
            char = character_check(sym.expected_L, tau, sym.expected_M,
                                   n_max=sym.order, tol=tol)
            entry["character_pass"] = char["pass"]
            entry["pass"] = (
                entry["curve_preservation"] <= 1e-9
                and entry["M_matches"]
                and entry["order_relation"]
                and entry["L_deviation"] <= tol
                and entry["constraint_residual"] <= tol
                and entry["riccati_residual"] <= tol
                and entry["character_pass"]
            )
        else:
            # conjugate-linear symmetry: M(A;B) = (conj A; conj B), so tau
            # maps to conj(tau) = tau^{-1}; the plain constraint equation
            # and Riccati form do not apply
            stacked = np.vstack([pd.A_periods, pd.B_periods])
            entry["conjugate_action_deviation"] = _max_dev(
                sym.expected_M.matrix @ stacked, np.conj(stacked))
            entry["tau_conjugate_deviation"] = _max_dev(
                modular_transform(tau, sym.expected_M), np.conj(tau))
            entry["tau_inverse_deviation"] = _max_dev(
                np.conj(tau), np.linalg.inv(tau))
            entry["pass"] = (
                entry["curve_preservation"] <= 1e-9
                and entry["M_matches"]
                and entry["order_relation"]
                and entry["conjugate_action_deviation"] <= 1e-6
                and entry["tau_conjugate_deviation"] <= 1e-6
                and entry["tau_inverse_deviation"] <= 1e-6
            )
        report["symmetries"][name] = entry
    report["pass"] = all(v["pass"] for v in report["symmetries"].values())
    return report
