"""Intersection pairing on lifted cycles and integer homology arithmetic.

All coefficients are exact integers.  The base plane carries the
anticlockwise-positive orientation; a crossing of directed segments d1, d2
counts +1 when (d1, d2) is a right-handed frame.

Non-transverse configurations are never resolved case by case: every
intersection number is computed twice, with the second cycle translated by
two tiny displacements in fixed generic directions, and the two results
must agree exactly.  Disagreement raises HomologyError.
"""
from __future__ import annotations

import cmath

import numpy as np

from .curve import continue_fiber
from .cycles import annotate_cycle, canonical_fiber_order, lift_cycle
from .errors import CycleValidationError, HomologyError, TransformError

# directions with arguments that are irrational multiples of pi, so a
# translated copy cannot stay degenerate against straight input segments
PERTURBATION_DIRECTIONS = (cmath.exp(1j), cmath.exp(2j))
DEGENERACY_MARGIN = 1e-6


def symplectic_j(g):
    """The standard symplectic form on a basis (a_1..a_g, b_1..b_g)."""
    j = np.zeros((2 * g, 2 * g), dtype=int)
    j[:g, g:] = np.eye(g, dtype=int)
    j[g:, :g] = -np.eye(g, dtype=int)
    return j


SYMPLECTIC_J = symplectic_j(3)


class SymplecticMatrix:
    """Integer matrix with its behaviour under the symplectic form.

    signature is +1 when M J M^T = J, -1 when M J M^T = -J (orientation
    reversing), else construction fails.
    """

    def __init__(self, matrix):
        m = np.asarray(matrix)
        rounded = np.rint(m).astype(int)
        if not np.all(np.abs(m - rounded) < 1e-9):
            raise TransformError("homology transform has non-integer entries")
        if rounded.shape[0] != rounded.shape[1] or rounded.shape[0] % 2:
            raise TransformError(f"bad transform shape {rounded.shape}")
        self.matrix = rounded
        g = rounded.shape[0] // 2
        j = symplectic_j(g)
        product = rounded @ j @ rounded.T
        if np.array_equal(product, j):
            self.signature = 1
        elif np.array_equal(product, -j):
            self.signature = -1
        else:
            raise TransformError(
                "matrix is neither symplectic nor antisymplectic")
        self.genus = g

    @property
    def is_symplectic(self):
        return self.signature == 1

    @property
    def is_antisymplectic(self):
        return self.signature == -1

    def blocks(self):
        g = self.genus
        m = self.matrix
        return m[:g, :g], m[:g, g:], m[g:, :g], m[g:, g:]

    def inverse(self):
        g = self.genus
        j = symplectic_j(g)
        # M J M^T = sJ  =>  M^{-1} = s J^{-1} M^T J = -s J M^T J
        return SymplecticMatrix(-self.signature * j @ self.matrix.T @ j)

    def __matmul__(self, other):
        other_m = other.matrix if isinstance(other, SymplecticMatrix) else other
        return SymplecticMatrix(self.matrix @ other_m)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = np.eye(2 * self.genus, dtype=int)
        for _ in range(k):
            out = out @ self.matrix
        return SymplecticMatrix(out)

    def __eq__(self, other):
        other_m = other.matrix if isinstance(other, SymplecticMatrix) else other
        return np.array_equal(self.matrix, other_m)

    def __repr__(self):
        return f"SymplecticMatrix({self.matrix.tolist()})"


class HomologyBasis:
    """An ordered family of cycles (a_1..a_g, b_1..b_g) on one curve."""

    def __init__(self, curve, cycles, name="basis"):
        if len(cycles) % 2:
            raise HomologyError("basis needs an even number of cycles")
        self.curve = curve
        self.cycles = tuple(cycles)
        self.name = name
        self.genus = len(cycles) // 2
        self._lifts = None
        self._matrix = None

    @property
    def lifts(self):
        if self._lifts is None:
            self._lifts = [lift_cycle(self.curve, c) for c in self.cycles]
            for lift, c in zip(self._lifts, self.cycles):
                if not lift.closes():
                    raise CycleValidationError(
                        f"basis cycle {c.name} does not close on the cover", 0)
        return self._lifts

    def matrix(self):
        if self._matrix is None:
            self._matrix = intersection_matrix(self.curve, self)
        return self._matrix

    def is_canonical(self):
        return np.array_equal(self.matrix(), symplectic_j(self.genus))

    def names(self):
        return [c.name for c in self.cycles]


# --------------------------------------------------------------------------
# geometric crossings

def _segment_arrays(vertices):
    v = np.asarray(vertices, dtype=complex)
    return v[:-1], v[1:] - v[:-1]


def _cross(z1, z2):
    return z1.real * z2.imag - z1.imag * z2.real


def _crossings(verts1, verts2):
    """All transversal crossings of two closed polylines.

    Returns a list of (seg_i, t, seg_j, u, sign); raises HomologyError on a
    near-degenerate configuration (endpoint hit or near-parallel crossing),
    which the caller's perturbation policy is responsible for avoiding.
    """
    a, da = _segment_arrays(verts1)
    b, db = _segment_arrays(verts2)
    denom = _cross(da[:, None], db[None, :])
    diff = b[None, :] - a[:, None]
    scale = np.abs(da)[:, None] * np.abs(db)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(denom != 0, _cross(diff, db[None, :]) / denom, np.inf)
        u = np.where(denom != 0, _cross(diff, da[:, None]) / denom, np.inf)
    hit = (t > -DEGENERACY_MARGIN) & (t < 1 + DEGENERACY_MARGIN) & \
          (u > -DEGENERACY_MARGIN) & (u < 1 + DEGENERACY_MARGIN) & \
          (np.abs(denom) > 1e-12 * np.maximum(scale, 1e-300))
    out = []
    for i, j in zip(*np.nonzero(hit)):
        ti, uj = float(t[i, j]), float(u[i, j])
        if min(ti, 1 - ti, uj, 1 - uj) < DEGENERACY_MARGIN:
            raise HomologyError(
                "crossing too close to a vertex; perturbation needed")
        margin = abs(denom[i, j]) / max(scale[i, j], 1e-300)
        if margin < DEGENERACY_MARGIN:
            raise HomologyError(
                "nearly parallel crossing; perturbation needed")
        out.append((int(i), ti, int(j), uj, 1 if denom[i, j] > 0 else -1))
    return out


def _strand_at(lift, seg, params):
    """Tracked-strand value and local fiber at given parameters of one segment."""
    fibers = lift.segment_fiber(seg, params)
    return [(fib[lift.start_index], fib) for fib in fibers]


def _signed_sum(lift1, lift2):
    """Signed sheet-matched crossing count of two lifted cycles."""
    crossings = _crossings(lift1.vertices, lift2.vertices)
    if not crossings:
        return 0
    # group by segment so each segment is continued once
    by_seg1, by_seg2 = {}, {}
    for idx, (i, t, j, u, s) in enumerate(crossings):
        by_seg1.setdefault(i, []).append((t, idx))
        by_seg2.setdefault(j, []).append((u, idx))
    y1 = [None] * len(crossings)
    f1 = [None] * len(crossings)
    y2 = [None] * len(crossings)
    for i, pairs in by_seg1.items():
        pairs.sort()
        vals = _strand_at(lift1, i, [p[0] for p in pairs])
        for (t, idx), (y, fib) in zip(pairs, vals):
            y1[idx], f1[idx] = y, fib
    for j, pairs in by_seg2.items():
        pairs.sort()
        vals = _strand_at(lift2, j, [p[0] for p in pairs])
        for (u, idx), (y, fib) in zip(pairs, vals):
            y2[idx] = y
    total = 0
    for idx, (i, t, j, u, s) in enumerate(crossings):
        fib = f1[idx]
        sep = _min_separation(fib)
        d = abs(y1[idx] - y2[idx])
        if d < 0.3 * sep:
            total += s
        elif d < 0.7 * sep:
            raise HomologyError(
                "ambiguous sheet match at a crossing (fiber too degenerate)")
    return total


def _min_separation(fib):
    d = np.abs(fib[:, None] - fib[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def _span(points):
    arr = np.asarray(points, dtype=complex)
    return max(float(arr.real.max() - arr.real.min()),
               float(arr.imag.max() - arr.imag.min()), 1e-6)


def intersection_number(curve, c1, c2):
    """Signed intersection number of two cycles on the curve.

    The second cycle is translated by two tiny generic displacements and
    the crossing sums must agree; this one rule resolves all non-transverse
    inputs (shared vertices, overlapping edges, identical projections).
    """
    lift1 = c1 if hasattr(c1, "fibers") else lift_cycle(curve, c1)
    lift2 = c2 if hasattr(c2, "fibers") else lift_cycle(curve, c2)
    results = []
    for lift2_shifted in _translated_lifts(curve, lift2):
        results.append(_signed_sum(lift1, lift2_shifted))
    if results[0] != results[1]:
        raise HomologyError(
            f"perturbed intersection counts disagree ({results}); "
            "unresolvable degeneracy")
    return results[0]


def _translated_lifts(curve, lift2):
    cycle = lift2.cycle
    eps = _perturbation_size(curve, cycle)
    out = []
    for direction in PERTURBATION_DIRECTIONS:
        shifted = cycle.translated(eps * direction)
        start_value = lift2.fibers[0][lift2.start_index]
        out.append(lift_cycle(curve, shifted, start_value=start_value))
    return out


def _perturbation_size(curve, cycle):
    span = _span(cycle.points)
    eps = 1e-5 * span
    bset = curve.branch_points()
    if bset.finite_points:
        clearance = min(abs(p - b) for p in cycle.points
                        for b in bset.finite_points)
        if clearance > 0:
            eps = min(eps, 0.05 * clearance)
    return eps


def intersection_matrix(curve, basis):
    """Pairwise intersection numbers in basis order; antisymmetric."""
    lifts = basis.lifts if isinstance(basis, HomologyBasis) else \
        [lift_cycle(curve, c) for c in basis]
    n = len(lifts)
    out = np.zeros((n, n), dtype=int)
    for j in range(n):
        shifted = _translated_lifts(curve, lifts[j])
        for i in range(n):
            if i == j:
                continue
            vals = [_signed_sum(lifts[i], s) for s in shifted]
            if vals[0] != vals[1]:
                raise HomologyError(
                    f"perturbed intersection counts disagree for "
                    f"({i},{j}): {vals}")
            out[i, j] = vals[0]
    if not np.array_equal(out, -out.T):
        raise HomologyError("intersection matrix failed antisymmetry check")
    return out


def expand_in_basis(curve, c, basis):
    """Integer coefficients of a cycle in a canonical basis.

    n_j = sum_k <c, gamma_k> (J^{-1})_{kj}; exact integers by construction.
    """
    if not basis.is_canonical():
        raise HomologyError("expansion requires a canonical basis")
    lift = c if hasattr(c, "fibers") else lift_cycle(curve, c)
    pairing = np.array([intersection_number(curve, lift, other)
                        for other in basis.lifts], dtype=int)
    j = symplectic_j(basis.genus)
    # J^{-1} = -J = J.T for the standard form
    return pairing @ (-j)


def find_homology_transform(curve, src, dst):
    """Integer matrix expressing dst cycles in the src basis.

    Row i of M satisfies dst_i = sum_j M_ij src_j in homology.  Both bases
    must be canonical; the result must be symplectic, anything else signals
    an orientation inconsistency between the bases.
    """
    m = _transform_rows(curve, src, dst.lifts)
    sym = SymplecticMatrix(m)
    if not sym.is_symplectic:
        raise TransformError(
            "transform between positively oriented bases is antisymplectic; "
            "orientation conventions disagree")
    return sym


def _transform_rows(curve, src, lifts):
    if not src.is_canonical():
        raise HomologyError("expansion requires a canonical basis")
    return np.array([expand_in_basis(curve, lift, src) for lift in lifts])


def pushforward_cycle(curve, pointmap, cycle, target_curve=None, name=None):
    """Image of a cycle under a point map of the curve.

    pointmap(x, y) -> (X, Y) must map points of the source curve to points
    of target_curve (the same curve for an automorphism).  The source lift
    is sampled densely enough that consecutive image points stay within
    continuation bounds, then the image is re-annotated by lifting.
    """
    target = target_curve if target_curve is not None else curve
    lift = cycle if hasattr(cycle, "fibers") else lift_cycle(curve, cycle)
    out_name = name or f"image-of-{lift.cycle.name}"
    points = _densified_image(curve, target, pointmap, lift)
    # start sheet comes from the mapped start strand
    X0, Y0 = pointmap(lift.vertices[0], lift.fibers[0][lift.start_index])
    ref = canonical_fiber_order(target, X0)
    dist = np.abs(ref - Y0)
    k = int(np.argmin(dist))
    others = np.delete(dist, k)
    if others.size and others.min() < 4 * dist[k]:
        raise HomologyError("ambiguous sheet identification of the mapped start")
    return annotate_cycle(target, points, k, name=out_name)


def _densified_image(curve, target, pointmap, lift):
    """Source params per segment, refined until image steps are small
    against the target's branch-point clearance."""
    bset = target.branch_points()
    bpoints = bset.finite_points

    def clearance(z):
        if not bpoints:
            return 1.0
        return min(abs(z - b) for b in bpoints)

    image_points = []
    nseg = len(lift.vertices) - 1
    for k in range(nseg):
        a, b = lift.vertices[k], lift.vertices[k + 1]
        fib_a = lift.fibers[k]
        samples = {0.0: complex(fib_a[lift.start_index]),
                   1.0: complex(lift.fibers[k + 1][lift.start_index])}

        def image_at(t):
            if t not in samples:
                _, col = continue_fiber(curve, a, b, fib_a, collect_at=[t])
                samples[t] = complex(col[0][lift.start_index])
            x = a + t * (b - a)
            return pointmap(x, samples[t])

        params = [0.0, 1.0]
        for _ in range(14):
            pairs = [(t, image_at(t)[0]) for t in params]
            refined = [params[0]]
            split = False
            for (t0, z0), (t1, z1) in zip(pairs[:-1], pairs[1:]):
                cap = 0.5 * min(clearance(z0), clearance(z1))
                if abs(z1 - z0) > max(cap, 1e-12):
                    refined.append(0.5 * (t0 + t1))
                    split = True
                refined.append(t1)
            params = refined
            if not split:
                break
        else:
            raise HomologyError(
                "could not sample the mapped cycle finely enough "
                "(image may pass through a branch point)")
        # omit each segment's final point; the next segment supplies it
        image_points.extend(image_at(t)[0] for t in params[:-1])
    return image_points


def symmetry_matrix(curve, pointmap, basis, name=None):
    """Action of an automorphism on homology, as rows of basis expansions.

    Row i is the expansion of the pushforward of basis cycle i.  The result
    is symplectic for holomorphic automorphisms and antisymplectic for
    orientation-reversing ones; both are returned, with the signature
    recorded on the SymplecticMatrix.
    """
    images = [pushforward_cycle(curve, pointmap, c) for c in basis.cycles]
    image_lifts = [lift_cycle(curve, c) for c in images]
    for lift, c in zip(image_lifts, images):
        if not lift.closes():
            raise HomologyError(f"pushforward of {c.name} does not close")
    m = _transform_rows(curve, basis, image_lifts)
    return SymplecticMatrix(m)
