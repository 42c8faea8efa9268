"""Plane algebraic curves as sheeted covers of the complex line.

A PlaneCurve wraps a bivariate polynomial f and exposes the fiber solve
f(x, .) = 0, analytic continuation of fibers along paths, branch-point
location, monodromy permutations and the genus via the cycle-type count.

Orientation convention: the positive traversal direction is anticlockwise
in the base plane.  Loops around infinity are positive when clockwise in
the finite plane (equivalently anticlockwise in the 1/x chart).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContinuationError, CurveError
from .polynomial import BivariatePolynomial, parse_polynomial

FIBER_RESIDUAL_TOL = 1e-8
FIBER_SEPARATION_TOL = 1e-8
LEADING_COEFF_TOL = 1e-12
CLUSTER_REL_TOL = 1e-9
STANDOFF_FRACTION = 0.25
MIN_STEP = 1e-12
INITIAL_STEP = 0.125        # fraction of a segment; halving both step
MAX_STEP = 0.25             # bounds must never change a permutation


def _as_polynomial(f, varnames=None):
    if isinstance(f, str):
        return parse_polynomial(f, varnames=varnames)
    return f


class PlaneCurve:
    """A curve f(x, y) = 0 viewed as an N-sheeted cover of the x-plane.

    base_point and sheet_labels fix the labelling of sheets used by
    monodromy and by every lifted cycle; if omitted they are chosen
    automatically (base point clear of all branch points, labels sorted
    by (real, imaginary) part of the fiber).
    """

    def __init__(self, f, base_point=None, sheet_labels=None, name=None):
        f = _as_polynomial(f)
        if f.degree(1) < 1:
            raise CurveError("curve must have positive degree in the second variable")
        self.f = f
        self.name = name
        self.sheet_count = f.degree(1)
        self.fx = f.partial(0)
        self.fy = f.partial(1)
        # coefficient arrays in descending powers of x, one per power of y
        self._ycoeffs = _coeff_arrays(f)
        self._x_degree = f.degree(0)
        self._base_point = None if base_point is None else complex(base_point)
        self._labels = None if sheet_labels is None else [complex(v) for v in sheet_labels]
        self._branch_set = None
        self._monodromy = None
        self._monodromy_inf = None

    # ----- fibers -----

    def y_coefficients(self, x):
        """Coefficients of f(x, .) as a univariate polynomial, highest power first."""
        return np.array([np.polyval(c, x) for c in reversed(self._ycoeffs)])

    def fiber(self, x, check_separation=True):
        """All N roots of f(x, .).  Raises CurveError on a degenerate fiber."""
        x = complex(x)
        coeffs = self.y_coefficients(x)
        scale = np.max(np.abs(coeffs))
        if scale == 0:
            raise CurveError(f"f(x, .) vanishes identically at x={x}")
        if abs(coeffs[0]) < LEADING_COEFF_TOL * scale:
            raise CurveError(f"leading coefficient in y degenerates at x={x}")
        roots = np.roots(coeffs)
        resid_scale = np.polyval(np.abs(coeffs), np.abs(roots)) + scale
        resid = np.abs(np.polyval(coeffs, roots))
        if np.any(resid > FIBER_RESIDUAL_TOL * resid_scale):
            raise CurveError(f"fiber residual too large at x={x}")
        if check_separation and self.sheet_count > 1:
            sep = _min_pairwise_distance(roots)
            if sep < FIBER_SEPARATION_TOL * (1 + np.max(np.abs(roots))):
                raise CurveError(
                    f"fiber at x={x} has nearly coincident sheets "
                    "(too near a branch point)")
        return roots

    # ----- base point and labels -----

    @property
    def base_point(self):
        if self._base_point is None:
            self._base_point = _choose_base_point(self)
        return self._base_point

    @property
    def sheet_labels(self):
        if self._labels is None:
            fib = self.fiber(self.base_point)
            order = np.lexsort((fib.imag.round(10), fib.real.round(10)))
            self._labels = [complex(fib[k]) for k in order]
        return self._labels

    def sheet_index(self, x, y_value, fiber_values=None):
        """Index of y_value within the fiber ordering given by sheet matching.

        Matches against sheet_labels when x is the base point, otherwise
        against fiber_values (which the caller must supply for determinism).
        """
        ref = self.sheet_labels if fiber_values is None else fiber_values
        ref = np.asarray(ref)
        dist = np.abs(ref - y_value)
        k = int(np.argmin(dist))
        others = np.delete(dist, k)
        if others.size and others.min() < 4 * dist[k]:
            raise CurveError(f"ambiguous sheet identification at x={x}")
        return k

    # ----- cached analyses -----

    def branch_points(self, tol=CLUSTER_REL_TOL):
        if self._branch_set is None:
            self._branch_set = branch_points(self, tol)
        return self._branch_set

    def monodromy(self):
        if self._monodromy is None:
            self._monodromy = monodromy(self)
        return self._monodromy

    def monodromy_at_infinity(self):
        if self._monodromy_inf is None:
            self._monodromy_inf = monodromy_at_infinity(self)
        return self._monodromy_inf

    def genus(self):
        return genus(self)

    def __repr__(self):
        label = self.name or str(self.f)
        return f"PlaneCurve({label})"


@dataclass(frozen=True)
class BranchPointSet:
    finite_points: tuple
    cycle_types: tuple          # tuple of sorted cycle-length tuples, aligned
    includes_infinity: bool
    infinity_cycle_type: tuple
    discarded: tuple = ()       # discriminant zeros with trivial local monodromy

    def __iter__(self):
        return iter(self.finite_points)

    def standoff_radius(self, index):
        return _standoff_radius(self.finite_points, index)


@dataclass(frozen=True)
class MonodromyPermutation:
    branch_point: object        # complex, or None for infinity
    perm: tuple                 # perm[k] = sheet reached from sheet k
    exit_angle: float = None    # for infinity: direction of the outward ray

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise CurveError("monodromy permutation is not a bijection")

    def is_identity(self):
        return all(p == k for k, p in enumerate(self.perm))

    def cycle_type(self):
        return _cycle_type(self.perm)


# --------------------------------------------------------------------------
# analytic continuation

def _coeff_arrays(f):
    arrays = []
    dx = max(f.degree(0), 0)
    for cmap in f.coefficients_in_second():
        arr = np.zeros(dx + 1, dtype=complex)
        for i, c in cmap.items():
            arr[dx - i] = c
        arrays.append(arr)
    return arrays


def _min_pairwise_distance(values):
    values = np.asarray(values)
    if values.size < 2:
        return math.inf
    d = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def _match_fiber(values, roots):
    """Nearest-root matching with a separation safeguard.

    Returns the permutation idx with roots[idx[k]] continuing values[k],
    or None when the matching is ambiguous (collision, or another root
    within twice the matched displacement).
    """
    dist = np.abs(values[:, None] - roots[None, :])
    idx = np.argmin(dist, axis=1)
    if len(np.unique(idx)) != len(roots):
        return None
    rows = np.arange(len(roots))
    matched = dist[rows, idx]
    dist[rows, idx] = np.inf
    nearest_other = dist.min(axis=1)
    if np.any(nearest_other < 2 * matched):
        return None
    return idx


def continue_fiber(curve, start, end, fiber_start, collect_at=None):
    """Continue the whole fiber along the straight segment start -> end.

    fiber_start must be the fiber at start (any order); the returned array
    keeps strand order.  collect_at is an optional increasing list of
    parameters in (0, 1]; when given, returns (fiber_end, collected) with
    collected[i] the fiber at start + collect_at[i]*(end-start).
    """
    start = complex(start)
    end = complex(end)
    values = np.array(fiber_start, dtype=complex)
    if start == end:
        collected = [values.copy() for _ in (collect_at or [])]
        return (values, collected) if collect_at is not None else values

    targets = sorted(collect_at) if collect_at else []
    collected = []
    next_target = 0
    pos = 0.0
    h = INITIAL_STEP
    delta = end - start
    while pos < 1.0:
        t_next = min(pos + h, 1.0)
        if next_target < len(targets) and targets[next_target] <= t_next + 1e-15:
            t_next = targets[next_target]
        x_next = start + t_next * delta
        try:
            coeffs = curve.y_coefficients(x_next)
            scale = np.max(np.abs(coeffs))
            if scale == 0 or abs(coeffs[0]) < LEADING_COEFF_TOL * scale:
                raise ContinuationError(
                    f"leading coefficient degenerates near x={x_next}")
            roots = np.roots(coeffs)
        except np.linalg.LinAlgError as exc:
            raise ContinuationError(f"root solve failed near x={x_next}") from exc
        idx = _match_fiber(values, roots)
        if idx is None:
            h *= 0.5
            if h < MIN_STEP:
                raise ContinuationError(
                    f"sheets could not be separated near x={x_next} "
                    "(path too close to a branch point)")
            continue
        values = roots[idx]
        pos = t_next
        if next_target < len(targets) and abs(pos - targets[next_target]) <= 1e-15:
            collected.append(values.copy())
            next_target += 1
        h = min(h * 1.6, MAX_STEP)
    if collect_at is not None:
        return values, collected
    return values


def continue_fiber_along_path(curve, points, fiber_start):
    """Continue the fiber along a polyline; returns the fiber at every vertex."""
    fibers = [np.array(fiber_start, dtype=complex)]
    for a, b in zip(points[:-1], points[1:]):
        fibers.append(continue_fiber(curve, a, b, fibers[-1]))
    return fibers


def continue_sheet(curve, segment, y_start):
    """Continue a single root along segment = (start, end).

    The whole fiber is tracked internally; tracking one strand alone would
    lose the collision safeguard.
    """
    start, end = segment
    fiber = curve.fiber(start, check_separation=False)
    dist = np.abs(fiber - complex(y_start))
    k = int(np.argmin(dist))
    scale = 1 + np.max(np.abs(fiber))
    if dist[k] > 1e-6 * scale:
        raise CurveError(f"y_start={y_start} is not a fiber value at x={start}")
    final = continue_fiber(curve, start, end, fiber)
    return complex(final[k])


# --------------------------------------------------------------------------
# branch points

def _sylvester_det(p, q):
    """det of the Sylvester matrix of two univariate coefficient arrays
    (highest power first)."""
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    mat = np.zeros((size, size), dtype=complex)
    for row in range(m):
        mat[row, row:row + n + 1] = p
    for row in range(n):
        mat[m + row, row:row + m + 1] = q
    return complex(np.linalg.det(mat))


def _resultant_coefficients(curve):
    """Coefficients (ascending) of Res_y(f, f_y) as a polynomial in x.

    Sampled at roots of unity and recovered by FFT; exact interpolation up
    to roundoff because the sample count exceeds the degree bound.
    """
    n = curve.sheet_count
    bound = max(curve._x_degree, 1) * (2 * n - 1)
    size = 1 << max(5, (bound + 1).bit_length())
    fy_arrays = _coeff_arrays(curve.fy)
    omega = np.exp(2j * math.pi * np.arange(size) / size)
    samples = np.empty(size, dtype=complex)
    for k, w in enumerate(omega):
        p = curve.y_coefficients(w)
        q = np.array([np.polyval(c, w) for c in reversed(fy_arrays)])
        samples[k] = _sylvester_det(p, q)
    # coefficient m is (1/N) sum_k samples[k] e^{-2 pi i k m / N}, which is
    # numpy's forward transform (ifft would index the coefficients reversed)
    return np.fft.fft(samples) / size


def _log_derivative(curve, x, h):
    """d/dx log Res_y(f, f_y) via the stable product form.

    Res = lc^(n-1) * prod_k f_y(x, y_k(x)); the derivative is evaluated as a
    per-factor principal-branch log difference so no catastrophic
    cancellation occurs even very near a multiple discriminant root.
    """
    n = curve.sheet_count
    f0 = curve.fiber(x, check_separation=False)
    f1 = continue_fiber(curve, x, x + h, f0)
    lc_arr = curve._ycoeffs[-1]
    a0 = np.polyval(lc_arr, x)
    a1 = np.polyval(lc_arr, x + h)
    total = (n - 1) * cmath.log(a1 / a0)
    for k in range(n):
        g0 = curve.fy.evaluate(x, f0[k])
        g1 = curve.fy.evaluate(x + h, f1[k])
        if g0 == 0 or g1 == 0:
            raise ContinuationError("f_y vanished exactly during refinement")
        total += cmath.log(g1 / g0)
    return total / h


def _refine_root(curve, b0, spread):
    """Refine a discriminant-root estimate via a two-point secant on the
    logarithmic derivative, which behaves like m/(x - b) near a root of
    multiplicity m.  Returns (refined_b, multiplicity_estimate, uncertainty).

    Near a high-multiplicity root the resultant value drops below the
    absolute evaluation noise while still far from the root, so the
    achievable accuracy is limited; the iteration stops once the step
    size stops contracting and reports the last step as the remaining
    uncertainty.  A seed that never produces a trustworthy step comes
    back unchanged with infinite uncertainty."""
    b = complex(b0)
    delta = max(spread, 1e-6 * (1 + abs(b0)))
    u1 = cmath.exp(0.7j)
    u2 = cmath.exp(1.9j)
    floor = 1e-13 * (1 + abs(b0))
    best_b, best_move, best_delta = None, math.inf, delta
    m_out = None
    for iteration in range(60):
        h = 1e-4 * delta
        try:
            phi1 = _log_derivative(curve, b + delta * u1, h)
            phi2 = _log_derivative(curve, b + delta * u2, h)
        except (CurveError, ContinuationError):
            break
        if phi1 == 0 or phi2 == 0:
            break
        denom = 1 / phi1 - 1 / phi2
        if denom == 0:
            break
        m_est = delta * (u1 - u2) / denom
        # a genuine multiplicity is a positive near-integer; far-off values
        # mean the evaluations have hit their noise floor
        if not 0.2 < m_est.real < 1e3 or abs(m_est.imag) > 0.5 + 0.5 * m_est.real:
            break
        # the forward difference measures phi at the interval midpoint
        b_new = (b + delta * u1 + 0.5 * h) - m_est / phi1
        move = abs(b_new - b)
        if move > 4 * delta:
            break
        b = b_new
        m_out = m_est.real
        if move < best_move:
            best_b, best_move, best_delta = b, move, delta
        if move < floor:
            break
        # a step several times larger than the best one seen is noise, not
        # the slow early phase where neighbouring roots still contaminate
        if iteration >= 3 and move > 4 * best_move:
            break
        delta = min(delta * 0.5, max(4 * move, 1e-9 * (1 + abs(b))))
    if best_b is None or m_out is None:
        return complex(b0), None, math.inf
    uncertainty = max(best_move, floor)
    if best_move > floor:
        # still short of full convergence: the stopping scale bounds the error
        uncertainty = max(uncertainty, 0.25 * best_delta)
    return best_b, m_out, uncertainty


def _cluster_points(points, tol, radii=None, weights=None):
    """Single-linkage clustering; two points link when they agree within
    the relative tolerance or within their combined refinement
    uncertainties.  Returns cluster centres (weighted means) in a
    deterministic order."""
    n = len(points)
    if radii is None:
        radii = [0.0] * n
    if weights is None:
        weights = [1.0] * n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            gap = tol * (1 + min(abs(points[i]), abs(points[j])))
            if abs(points[i] - points[j]) <= gap + radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    centres = []
    for members in groups.values():
        total = sum(weights[i] for i in members)
        if total > 0:
            centres.append(sum(weights[i] * points[i] for i in members) / total)
        else:
            centres.append(sum(points[i] for i in members) / len(members))
    return sorted(centres, key=lambda p: (round(p.real, 12), round(p.imag, 12)))


def _standoff_radius(points, index):
    b = points[index]
    others = [abs(b - p) for i, p in enumerate(points) if i != index]
    if not others:
        return 0.25 * (1 + abs(b))
    return STANDOFF_FRACTION * min(others)


def _circle_polyline(center, radius, start_angle, turns, segments_per_turn=16):
    """Closed-or-partial polygonal circle path.  turns may be negative
    (clockwise) or fractional; vertices include both endpoints."""
    count = max(1, int(round(abs(turns) * segments_per_turn)))
    angles = start_angle + 2 * math.pi * turns * np.arange(count + 1) / count
    return [center + radius * cmath.exp(1j * a) for a in angles]


def _local_permutation(curve, center, radius):
    """Cycle structure of one positive loop around center at the given radius.

    The permutation is relative to the local fiber at the loop start, which
    is enough for a cycle type (conjugation invariant)."""
    start = center + radius
    fib = curve.fiber(start, check_separation=False)
    path = _circle_polyline(center, radius, 0.0, 1)
    final = fib
    for a, b in zip(path[:-1], path[1:]):
        final = continue_fiber(curve, a, b, final)
    idx = _match_fiber(final, fib)
    if idx is None:
        raise ContinuationError(f"could not close local loop at {center}")
    return tuple(int(i) for i in idx)


def _cycle_type(perm):
    seen = [False] * len(perm)
    lengths = []
    for k in range(len(perm)):
        if seen[k]:
            continue
        length = 0
        j = k
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def branch_points(curve, tol=CLUSTER_REL_TOL):
    """Locate the branch points of the cover.

    Zeros of Res_y(f, f_y) (plus zeros of the leading y-coefficient) are
    found from FFT-recovered coefficients, refined by a log-derivative
    secant that is stable for high-multiplicity roots, clustered, and then
    validated: only points whose local monodromy is non-identity are kept.
    """
    coeffs_asc = _resultant_coefficients(curve)
    mags = np.abs(coeffs_asc)
    top = mags.max()
    if top == 0:
        raise CurveError("resultant is identically zero (f not squarefree in y)")
    significant = np.nonzero(mags > 1e-13 * top)[0]
    degree = int(significant.max())
    raw = [] if degree == 0 else list(np.roots(coeffs_asc[:degree + 1][::-1]))

    # roots of the leading y-coefficient are candidates too: a sheet escapes
    # to infinity there while the finite sheets may still permute
    lc_arr = curve._ycoeffs[-1]
    lc_nonzero = np.nonzero(np.abs(lc_arr) > 1e-13 * np.max(np.abs(lc_arr)))[0]
    if lc_nonzero.size and lc_nonzero.min() < len(lc_arr) - 1:
        raw.extend(np.roots(lc_arr))

    finite, types, discarded = [], [], []
    if raw:
        spread = 0.05 * (1 + max(abs(r) for r in raw))
        refined = []
        for r in raw:
            b, mult, u = _refine_root(curve, complex(r), spread)
            if mult is not None and u > 1e-11 * (1 + abs(b)):
                # a second pass seeded nearby escapes the contaminated
                # large-offset phase; keep it only if it actually improved
                # and stayed on the same root
                b2, m2, u2 = _refine_root(curve, b, 2 * u)
                if m2 is not None and u2 < u and abs(b2 - b) <= 8 * u:
                    b, mult, u = b2, m2, u2
            refined.append((b, mult, u))
        # a seed the secant never improved carries no uncertainty bubble;
        # it stays isolated unless another estimate lands right on it
        link_radii = [0.0 if not math.isfinite(u) else 3 * u
                      for _, _, u in refined]
        weights = [0.0 if not math.isfinite(u) else 1 / (u * u)
                   for _, _, u in refined]
        candidates = _cluster_points([b for b, _, _ in refined],
                                     max(tol, 1e-9), link_radii, weights)
        for i, b in enumerate(candidates):
            radius = _standoff_radius(candidates, i)
            try:
                perm = _local_permutation(curve, b, radius)
            except (CurveError, ContinuationError):
                # retry once at half the radius before giving up on the point
                perm = _local_permutation(curve, b, radius / 2)
            if all(p == k for k, p in enumerate(perm)):
                discarded.append(b)
            else:
                finite.append(b)
                types.append(_cycle_type(perm))

    order = sorted(range(len(finite)),
                   key=lambda k: (round(finite[k].real, 9), round(finite[k].imag, 9)))
    finite = tuple(finite[k] for k in order)
    types = tuple(types[k] for k in order)

    # publish the finite part before touching infinity: the loop around
    # infinity needs the finite points (for a clear exit ray) and possibly
    # an automatic base point, both of which read curve.branch_points()
    curve._branch_set = BranchPointSet(finite, types, False, (), tuple(discarded))
    inf_perm = monodromy_at_infinity(curve)
    result = BranchPointSet(finite, types, not inf_perm.is_identity(),
                            inf_perm.cycle_type(), tuple(discarded))
    curve._branch_set = result
    curve._monodromy_inf = inf_perm
    return result


# --------------------------------------------------------------------------
# base point selection and monodromy

def _segment_distance(a, b, p):
    """Distance from point p to segment [a, b]."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def _spokes_margin(base, points):
    """Smallest ratio of (spoke distance to a foreign branch point) over
    that point's standoff radius; above 1 means every spoke is clear."""
    worst = math.inf
    for i, b in enumerate(points):
        radius = _standoff_radius(points, i)
        entry = b + radius * (base - b) / abs(base - b)
        for j, other in enumerate(points):
            if j == i:
                continue
            d = _segment_distance(base, entry, other)
            worst = min(worst, d / _standoff_radius(points, j))
    return worst


def _choose_base_point(curve):
    """Deterministic search over rings around the branch-point centroid for
    the position whose loop spokes clear the other standoff discs best.

    A single outer ring is not enough: for a central branch point inside a
    ring of others, the only clear positions are in the gaps between them.
    """
    bset = curve.branch_points()
    points = list(bset.finite_points)
    if not points:
        candidate = 0j
        try:
            curve.fiber(candidate)
            return candidate
        except CurveError:
            return 1 + 0j
    center = sum(points) / len(points)
    spread = max(max(abs(p - center) for p in points), 0.25 * (1 + abs(center)))
    best, best_margin = None, 0.5
    for factor in (1.7, 1.2, 0.85, 0.6, 0.42, 0.3, 2.4, 3.4):
        radius = factor * spread + 0.35 * (1 + 0.1 * abs(center))
        for k in range(96):
            angle = 2 * math.pi * (k + 0.37) / 96
            candidate = center + radius * cmath.exp(1j * angle)
            clearance = min(abs(candidate - p) for p in points)
            if clearance < 0.2 * spread:
                continue
            margin = _spokes_margin(candidate, points)
            if margin <= best_margin:
                continue
            try:
                curve.fiber(candidate)
            except CurveError:
                continue
            best, best_margin = candidate, margin
        if best is not None and best_margin > 1.6:
            break
    if best is None:
        raise CurveError("could not find a clear base point automatically")
    return best


def _loop_path(base, b, radius, turns=1):
    """Polyline: straight spoke to the standoff circle, the loop, spoke back."""
    direction = (base - b) / abs(base - b)
    entry = b + radius * direction
    circle = _circle_polyline(b, radius, cmath.phase(direction), turns)
    return [base] + circle + [base]


def _permutation_from_path(curve, path):
    labels = np.array(curve.sheet_labels, dtype=complex)
    final = labels
    for a, b in zip(path[:-1], path[1:]):
        final = continue_fiber(curve, a, b, final)
    perm = _match_fiber(final, labels)
    if perm is None:
        raise ContinuationError("loop continuation did not return cleanly to the fiber")
    return tuple(int(i) for i in perm)


def monodromy(curve):
    """Monodromy permutation around each finite branch point.

    Each loop runs straight from the base point to a standoff circle of a
    quarter of the distance to the nearest other branch point, once around
    anticlockwise, and straight back; sheet k ends on sheet perm[k] of the
    curve's labelling.
    """
    bset = curve.branch_points()
    base = curve.base_point
    points = list(bset.finite_points)
    if points and _spokes_margin(base, points) < 0.25:
        raise CurveError(
            "a loop spoke from this base point passes too close to another "
            "branch point for reliable sheet tracking")
    result = []
    for i, b in enumerate(points):
        radius = _standoff_radius(points, i)
        path = _loop_path(base, b, radius, turns=1)
        perm = _permutation_from_path(curve, path)
        result.append(MonodromyPermutation(b, perm))
    return result


def monodromy_at_infinity(curve):
    """Permutation of one positive loop around infinity (clockwise big circle),
    conjugated to the base point along a clear outward ray."""
    points = curve.branch_points().finite_points
    far = max((abs(b) for b in points), default=1.0)
    base = curve.base_point
    big = max(2.5 * far, 2 * abs(base) + 1, 2.0)
    exit_angle = _clear_ray_angle(points, base, big)
    exit_point = base + _ray_reach(base, exit_angle, big)
    # clockwise big circle = positive loop around the point at infinity
    circle = _circle_polyline(0, big, cmath.phase(exit_point), -1)
    path = [base, exit_point] + circle + [exit_point, base]
    perm = _permutation_from_path(curve, path)
    return MonodromyPermutation(None, perm, exit_angle)


def _ray_reach(base, angle, big):
    # distance along the ray from base until |point| = big
    direction = cmath.exp(1j * angle)
    # solve |base + t d| = big for t > 0
    b_dot = (base * direction.conjugate()).real
    t = -b_dot + math.sqrt(max(b_dot ** 2 + big ** 2 - abs(base) ** 2, 0.0))
    return t * direction


def _clear_ray_angle(points, base, big):
    best, best_clear = 0.0, -1.0
    for k in range(32):
        angle = 2 * math.pi * k / 32
        end = base + _ray_reach(base, angle, big)
        clear = min((_segment_distance(base, end, p) for p in points), default=1.0)
        if clear > best_clear:
            best, best_clear = angle, clear
    return best


def u_chart(curve):
    """The same curve in the chart u = 1/x: g(u, y) = u^deg_x(f) * f(1/u, y)."""
    dx = curve._x_degree
    terms = {(dx - i, j): c for (i, j), c in curve.f.terms.items()}
    return PlaneCurve(BivariatePolynomial(terms, ("u", curve.f.varnames[1])))


def monodromy_at_infinity_via_chart(curve):
    """Second, independent route to the infinity permutation.

    The big circle is traversed in the u = 1/x chart (anticlockwise there,
    matching the clockwise x-circle pointwise), on the transformed
    polynomial; only the spokes reuse the x-chart.  Must agree with
    monodromy_at_infinity.
    """
    points = curve.branch_points().finite_points
    far = max((abs(b) for b in points), default=1.0)
    base = curve.base_point
    big = max(2.5 * far, 2 * abs(base) + 1, 2.0)
    exit_angle = _clear_ray_angle(points, base, big)
    exit_point = base + _ray_reach(base, exit_angle, big)
    labels = np.array(curve.sheet_labels, dtype=complex)
    at_exit = continue_fiber(curve, base, exit_point, labels)
    chart = u_chart(curve)
    u0 = 1 / exit_point
    loop = _circle_polyline(0, abs(u0), cmath.phase(u0), 1)
    values = at_exit
    for a, b in zip(loop[:-1], loop[1:]):
        values = continue_fiber(chart, a, b, values)
    back = continue_fiber(curve, exit_point, base, values)
    perm = _match_fiber(back, labels)
    if perm is None:
        raise ContinuationError("u-chart infinity loop did not return cleanly")
    return MonodromyPermutation(None, tuple(int(i) for i in perm), exit_angle)


def compose_permutations(perms):
    """Composite permutation of traversing the listed loops in order."""
    n = len(perms[0])
    result = list(range(n))
    for perm in perms:
        result = [perm[r] for r in result]
    return tuple(result)


def angular_order(curve, monodromies, start_angle=None):
    """Monodromies sorted anticlockwise by the angle of their branch point
    seen from the base, optionally starting just after start_angle.

    Composing the finite loops in the order that starts at the infinity
    loop's exit ray, then the infinity loop itself, gives the identity.
    """
    base = curve.base_point
    if start_angle is None:
        return sorted(monodromies,
                      key=lambda m: cmath.phase(m.branch_point - base))
    tau = 2 * math.pi
    return sorted(monodromies,
                  key=lambda m: (cmath.phase(m.branch_point - base)
                                 - start_angle) % tau)


def genus(curve):
    """Genus from the cycle types at all branch points, infinity included."""
    bset = curve.branch_points()
    total = sum(length - 1 for ctype in bset.cycle_types for length in ctype)
    total += sum(length - 1 for length in bset.infinity_cycle_type)
    if total % 2:
        raise CurveError("odd total ramification; monodromy data inconsistent")
    return 1 - curve.sheet_count + total // 2
