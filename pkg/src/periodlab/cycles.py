"""Closed polyline cycles on the base plane and their lifts to the cover.

A SurfaceCycle is a closed polyline (closure is implicit: the last vertex
connects back to the first) together with a sheet index per vertex.  The
sheet index at a vertex refers to the canonical fiber order there: the
curve's sheet labels at the base point, the fiber sorted by (real, imag)
anywhere else.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curve import _match_fiber, continue_fiber
from .errors import ContinuationError, CurveError, CycleValidationError


def canonical_fiber_order(curve, x):
    """Fiber values at x in the order that sheet indices refer to."""
    x = complex(x)
    base = curve._base_point
    if base is not None and abs(x - base) <= 1e-12 * (1 + abs(base)):
        return np.array(curve.sheet_labels, dtype=complex)
    fib = curve.fiber(x)
    order = np.lexsort((fib.imag.round(10), fib.real.round(10)))
    return fib[order]


@dataclass(frozen=True)
class SurfaceCycle:
    """A named closed polyline with declared sheet indices.

    sheets may be None when only the starting sheet is known (a freshly
    drawn path); annotate_cycle fills the rest in by continuation.
    """
    name: str
    points: tuple
    sheets: tuple = None
    start_sheet: int = 0

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise CycleValidationError("cycle needs at least one vertex", 0)
        # drop an explicit trailing repeat of the first vertex; closure is
        # implicit and content hashes must not depend on the spelling
        if len(pts) > 1 and pts[-1] == pts[0]:
            pts = pts[:-1]
        object.__setattr__(self, "points", pts)
        if self.sheets is not None:
            sh = tuple(int(s) for s in self.sheets)
            if len(sh) > len(pts) and len(sh) == len(pts) + 1 and sh[-1] == sh[0]:
                sh = sh[:-1]
            if len(sh) != len(pts):
                raise CycleValidationError(
                    f"{len(pts)} vertices but {len(sh)} sheet entries", 0)
            object.__setattr__(self, "sheets", sh)
            object.__setattr__(self, "start_sheet", sh[0])
        else:
            object.__setattr__(self, "start_sheet", int(self.start_sheet))

    def closed_points(self):
        return self.points + (self.points[0],)

    def segment_count(self):
        return len(self.points) if len(self.points) > 1 else 0

    def reversed(self):
        pts = (self.points[0],) + tuple(reversed(self.points[1:]))
        sheets = None
        if self.sheets is not None:
            sheets = (self.sheets[0],) + tuple(reversed(self.sheets[1:]))
        return SurfaceCycle(self.name + "-reversed", pts, sheets,
                            start_sheet=self.start_sheet)

    def translated(self, offset, name=None):
        """Rigid translation; sheet declarations are dropped (they refer to
        fibers at the old vertices)."""
        offset = complex(offset)
        return SurfaceCycle(name or self.name + "-shifted",
                            tuple(p + offset for p in self.points),
                            None, start_sheet=self.start_sheet)

    def concatenated(self, other, name=None):
        """Join two cycles sharing the same first vertex and start sheet."""
        if other.points[0] != self.points[0]:
            raise CycleValidationError(
                "concatenation requires a common first vertex", 0)
        if other.start_sheet != self.start_sheet:
            raise CycleValidationError(
                "concatenation requires a common start sheet", 0)
        pts = self.points + (self.points[0],) + other.points
        return SurfaceCycle(name or f"{self.name}+{other.name}", pts,
                            None, start_sheet=self.start_sheet)


class LiftedCycle:
    """A cycle together with the full fiber continued along it.

    fibers[k] is the fiber at vertex k of the closed polyline (so there is
    one more entry than cycle vertices, the last being the return to the
    start); strand order is preserved by continuation, so the value of the
    tracked strand at vertex k is fibers[k][start_index].
    """

    def __init__(self, curve, cycle, vertices, fibers, start_index):
        self.curve = curve
        self.cycle = cycle
        self.vertices = vertices
        self.fibers = fibers
        self.start_index = start_index
        perm = _match_fiber(fibers[-1], fibers[0])
        if perm is None:
            raise CycleValidationError(
                "lift did not return to a recognizable fiber",
                len(vertices) - 2)
        self.permutation = tuple(int(i) for i in perm)
        self.end_sheet = self.permutation[start_index]

    @property
    def start_sheet(self):
        return self.start_index

    def closes(self):
        return self.end_sheet == self.start_index

    def strand_values(self):
        return [fib[self.start_index] for fib in self.fibers]

    def vertex_sheets(self):
        """Sheet index of the tracked strand at every vertex (canonical
        order at that vertex); the closing return entry included."""
        out = []
        for x, fib in zip(self.vertices, self.fibers):
            ref = canonical_fiber_order(self.curve, x)
            idx = _match_fiber(fib, ref)
            if idx is None:
                raise CycleValidationError(
                    f"ambiguous sheet identification at vertex x={x}", 0)
            out.append(int(idx[self.start_index]))
        return out

    def segment_fiber(self, k, params):
        """Fibers at intermediate points of segment k, at the given
        parameters in (0, 1]."""
        a, b = self.vertices[k], self.vertices[k + 1]
        _, collected = continue_fiber(self.curve, a, b, self.fibers[k],
                                      collect_at=list(params))
        return collected


def lift_cycle(curve, cycle, start_value=None):
    """Lift a cycle to the cover by continuing the whole fiber around it.

    start_value, when given, overrides the declared start sheet with the
    fiber value nearest to it (used for perturbed copies of a lift).
    """
    verts = cycle.closed_points()
    try:
        fib0 = canonical_fiber_order(curve, verts[0])
    except CurveError as exc:
        raise CycleValidationError(f"fiber at first vertex: {exc}", 0) from exc
    if start_value is None:
        s = cycle.start_sheet
        if not 0 <= s < len(fib0):
            raise CycleValidationError(
                f"start sheet {s} out of range 0..{len(fib0) - 1}", 0)
    else:
        s = int(np.argmin(np.abs(fib0 - complex(start_value))))
    fibers = [fib0]
    for k in range(len(verts) - 1):
        try:
            fibers.append(continue_fiber(curve, verts[k], verts[k + 1], fibers[k]))
        except (ContinuationError, CurveError) as exc:
            raise CycleValidationError(str(exc), k) from exc
    return LiftedCycle(curve, cycle, verts, fibers, s)


def annotate_cycle(curve, points, start_sheet, name="cycle"):
    """Build a SurfaceCycle with sheet declarations filled in by lifting."""
    bare = SurfaceCycle(name, tuple(points), None, start_sheet=start_sheet)
    lift = lift_cycle(curve, bare)
    sheets = lift.vertex_sheets()[:len(bare.points)]
    return SurfaceCycle(name, bare.points, tuple(sheets))


def validate_cycle(curve, cycle):
    """Per-edge lift consistency report.

    Each edge's declared start sheet is continued to the edge's far vertex
    and compared against the sheet declared there (the closing edge checks
    vertex 0 again); failures carry the edge index.  Also reports the lift's
    closedness from the start sheet and the minimum branch-point clearance
    over all vertices.
    """
    report = {
        "name": cycle.name,
        "vertex_count": len(cycle.points),
        "ok": True,
        "closes": None,
        "edge_failures": [],
        "min_branch_clearance": None,
    }
    bset = curve.branch_points()
    if bset.finite_points:
        report["min_branch_clearance"] = min(
            abs(p - b) for p in cycle.points for b in bset.finite_points)

    try:
        lift = lift_cycle(curve, cycle)
    except CycleValidationError as exc:
        report["ok"] = False
        report["edge_failures"].append(
            {"edge": exc.segment_index, "reason": exc.message})
        return report
    report["closes"] = lift.closes()
    report["end_sheet"] = lift.end_sheet
    report["monodromy"] = list(lift.permutation)
    if not lift.closes():
        report["ok"] = False

    if cycle.sheets is not None and len(cycle.points) > 1:
        declared = list(cycle.sheets) + [cycle.sheets[0]]
        n = curve.sheet_count
        for k in range(len(cycle.points)):
            if not (0 <= declared[k] < n and 0 <= declared[k + 1] < n):
                report["ok"] = False
                report["edge_failures"].append(
                    {"edge": k, "reason": "declared sheet out of range"})
                continue
            ref_a = canonical_fiber_order(curve, lift.vertices[k])
            y_a = ref_a[declared[k]]
            try:
                y_b = _continue_one(curve, lift, k, y_a)
                ref_b = canonical_fiber_order(curve, lift.vertices[k + 1])
                found = int(np.argmin(np.abs(ref_b - y_b)))
            except (CurveError, ContinuationError) as exc:
                report["ok"] = False
                report["edge_failures"].append({"edge": k, "reason": str(exc)})
                continue
            if found != declared[k + 1]:
                report["ok"] = False
                report["edge_failures"].append(
                    {"edge": k, "expected": declared[k + 1], "found": found})
    return report


def _continue_one(curve, lift, k, y_start):
    fib = lift.fibers[k]
    idx = int(np.argmin(np.abs(fib - y_start)))
    return complex(lift.fibers[k + 1][idx])
