"""Workspace state and JSON payload builders shared by the CLI and server.

Both front ends feed identical requests through the same builders and the
same dumps(), so they emit byte-identical JSON.  Complex numbers serialize
as {"re": float, "im": float} everywhere; homology data stays integer.
"""
from __future__ import annotations

import hashlib
import json
import threading

import numpy as np

from . import klein
from .curve import (PlaneCurve, angular_order, compose_permutations,
                    continue_sheet)
from .cycles import SurfaceCycle, canonical_fiber_order, validate_cycle
from .errors import (ContinuationError, CurveError, CycleValidationError,
                     PeriodLabError)
from .homology import (HomologyBasis, find_homology_transform,
                       intersection_number, symplectic_j)
from .periods import (DEFAULT_TOL, Differential, check_riemann_conditions,
                      period_matrices)

MODEL_ALIASES = {
    "klein-xy": "xy", "klein-ts": "ts", "klein-zw": "zw",
    "xy": "xy", "ts": "ts", "zw": "zw",
}


class RequestError(PeriodLabError):
    """Malformed input: bad shapes, unknown ids, unparsable text.

    Maps to HTTP 400 and CLI exit code 2.
    """


# --------------------------------------------------------------------------
# serialization

def dumps(payload):
    """The one JSON encoder: canonical key order, compact separators."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      separators=(",", ":"), sort_keys=True)


def cnum(z):
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def cmatrix(m):
    return [[cnum(v) for v in row] for row in np.asarray(m)]


def imatrix(m):
    return [[int(v) for v in row] for row in np.asarray(m)]


def _expect(cond, message):
    if not cond:
        raise RequestError(message)


def parse_cnum(obj, what):
    """{"re": f, "im": f} -> complex; bare numbers are accepted as real."""
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    _expect(isinstance(obj, dict) and "re" in obj and "im" in obj,
            f"{what} must be a number or an object with 're' and 'im'")
    re, im = obj["re"], obj["im"]
    _expect(all(isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in (re, im)),
            f"{what}: 're' and 'im' must be numbers")
    return complex(re, im)


# --------------------------------------------------------------------------
# workspace

def _float_key(value):
    return repr(float(value))


def curve_content_id(curve):
    """Content hash over the canonical term map, base point and labels."""
    f = curve.f
    blob = dumps({
        "terms": sorted([i, j, _float_key(c.real), _float_key(c.imag)]
                        for (i, j), c in f.terms.items()),
        "vars": list(f.varnames),
        "base": [_float_key(curve.base_point.real),
                 _float_key(curve.base_point.imag)],
        "labels": [[_float_key(v.real), _float_key(v.imag)]
                   for v in curve.sheet_labels],
    })
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Workspace:
    """Curves and cycle sets by content-hash id, with per-curve caches.

    All cached analyses are pure functions of the curve definition, and the
    id is a content hash, so concurrent fills are idempotent; the lock only
    guards the dictionaries themselves.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._curves = {}
        self._cycle_sets = {}

    # ----- curves -----

    def add_curve(self, text, basepoint=None, labels=None):
        """Register a curve from polynomial text or a model id."""
        _expect(isinstance(text, str) and text.strip(),
                "curve must be a non-empty string (polynomial or model id)")
        text = text.strip()
        with self._lock:
            if text in self._curves:
                return text
        if text in MODEL_ALIASES:
            model = klein.build_model(MODEL_ALIASES[text])
            curve = model.curve
            record = {"curve": curve, "text": str(curve.f),
                      "model": MODEL_ALIASES[text]}
            if basepoint is not None:
                _expect(abs(complex(basepoint) - curve.base_point)
                        <= 1e-9 * (1 + abs(curve.base_point)),
                        "basepoint does not match the model's base point")
        else:
            try:
                curve = PlaneCurve(text, base_point=basepoint,
                                   sheet_labels=labels)
            except PeriodLabError as exc:
                raise RequestError(f"cannot parse curve: {exc}") from exc
            record = {"curve": curve, "text": str(curve.f), "model": None}
        cid = curve_content_id(curve)
        record["id"] = cid
        with self._lock:
            record = self._curves.setdefault(cid, record)
        return cid

    def resolve_curve(self, ref, basepoint=None):
        """A registered id, a model id, or polynomial text -> curve id."""
        _expect(isinstance(ref, str) and ref.strip(), "missing curve reference")
        ref = ref.strip()
        with self._lock:
            if ref in self._curves:
                return ref
        return self.add_curve(ref, basepoint=basepoint)

    def curve_record(self, cid):
        with self._lock:
            record = self._curves.get(cid)
        _expect(record is not None, f"unknown curve id {cid!r}")
        return record

    def curve(self, cid):
        return self.curve_record(cid)["curve"]

    # ----- cycle sets -----

    def add_cycle_set(self, payload):
        """Register a cycle file (parsed JSON dict); returns the set id."""
        _expect(isinstance(payload, dict), "cycle set must be a JSON object")
        _expect("curve" in payload, "cycle set is missing 'curve'")
        _expect(isinstance(payload.get("cycles"), list) and payload["cycles"],
                "cycle set needs a non-empty 'cycles' array")
        basepoint = None
        if payload.get("basepoint") is not None:
            basepoint = parse_cnum(payload["basepoint"], "basepoint")
        cid = self.resolve_curve(payload["curve"], basepoint=basepoint)
        curve = self.curve(cid)
        if _basepoint_mismatch(curve, basepoint):
            raise RequestError(
                "cycle set basepoint does not match the curve's base point")
        cycles = {}
        for k, spec in enumerate(payload["cycles"]):
            _expect(isinstance(spec, dict), f"cycles[{k}] must be an object")
            name = spec.get("name") or f"cycle{k}"
            _expect(isinstance(name, str), f"cycles[{k}].name must be a string")
            _expect(name not in cycles, f"duplicate cycle name {name!r}")
            pts = spec.get("points")
            _expect(isinstance(pts, list) and pts,
                    f"cycle {name!r} needs a non-empty 'points' array")
            vertices, sheets = [], []
            for i, p in enumerate(pts):
                _expect(isinstance(p, dict),
                        f"cycle {name!r} point {i} must be an object")
                vertices.append(parse_cnum(p, f"cycle {name!r} point {i}"))
                sheet = p.get("sheet")
                _expect(isinstance(sheet, int) and not isinstance(sheet, bool)
                        and 0 <= sheet < curve.sheet_count,
                        f"cycle {name!r} point {i} needs an integer 'sheet' "
                        f"in [0, {curve.sheet_count})")
                sheets.append(sheet)
            try:
                cycles[name] = SurfaceCycle(name, tuple(vertices),
                                            tuple(sheets))
            except CycleValidationError as exc:
                raise RequestError(f"cycle {name!r}: {exc}") from exc
        blob = dumps({"curve": cid, "cycles": [
            {"name": n, "points": [[_float_key(p.real), _float_key(p.imag), s]
                                   for p, s in zip(c.points, c.sheets)]}
            for n, c in cycles.items()]})
        sid = hashlib.sha256(blob.encode()).hexdigest()[:16]
        with self._lock:
            self._cycle_sets.setdefault(
                sid, {"id": sid, "curve_id": cid, "cycles": cycles})
        return sid

    def cycle_set(self, sid):
        with self._lock:
            record = self._cycle_sets.get(sid)
        _expect(record is not None, f"unknown cycle set id {sid!r}")
        return record

    def resolve_cycle_set(self, ref):
        """A registered set id or an inline cycle-file dict -> set id."""
        if isinstance(ref, str):
            return self.cycle_set(ref.strip())["id"]
        if isinstance(ref, dict):
            return self.add_cycle_set(ref)
        raise RequestError("expected a cycle set id or an inline cycle set")

    def named_cycle(self, sid, name):
        record = self.cycle_set(sid)
        cycle = record["cycles"].get(name)
        _expect(cycle is not None,
                f"cycle set {sid!r} has no cycle named {name!r}; "
                f"names: {sorted(record['cycles'])}")
        return record["curve_id"], cycle

    def resolve_cycle_id(self, ref):
        """'setid:name' -> (curve_id, cycle)."""
        _expect(isinstance(ref, str) and ref.count(":") == 1,
                "cycle id must look like '<set id>:<cycle name>'")
        sid, name = ref.split(":")
        return self.named_cycle(sid.strip(), name.strip())


def _basepoint_mismatch(curve, basepoint):
    return (basepoint is not None
            and abs(basepoint - curve.base_point)
            > 1e-9 * (1 + abs(curve.base_point)))


# --------------------------------------------------------------------------
# payload builders

def curve_payload(ws, cid):
    record = ws.curve_record(cid)
    curve = record["curve"]
    bset = curve.branch_points()
    return {
        "id": cid,
        "curve": record["text"],
        "model": record["model"],
        "variables": list(curve.f.varnames),
        "sheet_count": curve.sheet_count,
        "base_point": cnum(curve.base_point),
        "sheet_labels": [cnum(v) for v in curve.sheet_labels],
        "branch_points": [
            {"point": cnum(b), "cycle_type": list(bset.cycle_types[k]),
             "standoff": float(bset.standoff_radius(k))}
            for k, b in enumerate(bset.finite_points)],
        "includes_infinity": bset.includes_infinity,
        "infinity_cycle_type": list(bset.infinity_cycle_type),
    }


def monodromy_payload(ws, cid):
    curve = ws.curve(cid)
    mons = curve.monodromy()
    inf = curve.monodromy_at_infinity()
    ordered = angular_order(curve, mons, start_angle=inf.exit_angle)
    total = compose_permutations([m.perm for m in ordered] + [inf.perm])
    return {
        "id": cid,
        "base_point": cnum(curve.base_point),
        "sheet_labels": [cnum(v) for v in curve.sheet_labels],
        "positive_direction": "anticlockwise",
        "branch_points": [
            {"point": cnum(m.branch_point),
             "permutation": list(m.perm),
             "cycle_type": list(m.cycle_type())}
            for m in ordered],
        "infinity": {
            "permutation": list(inf.perm),
            "cycle_type": list(inf.cycle_type()),
            "exit_angle": float(inf.exit_angle),
        },
        "composition_is_identity": all(p == k for k, p in enumerate(total)),
        "genus": curve.genus(),
    }


def lift_payload(ws, cid, points, start_sheet):
    """Continue a fiber along an open polyline, one edge at a time.

    Failures carry the first offending segment index so a UI can highlight
    it.  The closing edge back to vertex 0 is reported separately, since a
    path being drawn is not closed yet.
    """
    curve = ws.curve(cid)
    _expect(isinstance(points, list) and points, "need a non-empty 'points'")
    verts = [parse_cnum(p, f"points[{i}]") for i, p in enumerate(points)]
    _expect(isinstance(start_sheet, int) and not isinstance(start_sheet, bool)
            and 0 <= start_sheet < curve.sheet_count,
            f"start_sheet must be an integer in [0, {curve.sheet_count})")

    def fiber_at(x, seg):
        try:
            return canonical_fiber_order(curve, x)
        except (CurveError, ContinuationError) as exc:
            raise CycleValidationError(str(exc), seg) from exc

    ref = fiber_at(verts[0], 0)
    y = ref[start_sheet]
    sheets = [start_sheet]
    for k in range(1, len(verts)):
        y = _continue_edge(curve, verts[k - 1], verts[k], y, k - 1)
        ref = fiber_at(verts[k], k - 1)
        sheets.append(_nearest_sheet(ref, y, verts[k], k - 1))
        y = ref[sheets[-1]]
    payload = {
        "id": cid,
        "start_sheet": start_sheet,
        "sheets": sheets,
    }
    if len(verts) > 1:
        y = _continue_edge(curve, verts[-1], verts[0], y, len(verts) - 1)
        ref = fiber_at(verts[0], len(verts) - 1)
        closure = _nearest_sheet(ref, y, verts[0], len(verts) - 1)
        payload["closure_sheet"] = closure
        payload["closes"] = closure == start_sheet
    else:
        payload["closure_sheet"] = start_sheet
        payload["closes"] = True
    return payload


def _continue_edge(curve, a, b, y, seg):
    try:
        return continue_sheet(curve, (a, b), y)
    except (CurveError, ContinuationError) as exc:
        raise CycleValidationError(
            f"continuation failed on segment {seg}: {exc}", seg) from exc


def _nearest_sheet(ref, y, x, seg):
    dist = np.abs(np.asarray(ref) - y)
    k = int(np.argmin(dist))
    others = np.delete(dist, k)
    if others.size and others.min() < 4 * dist[k]:
        raise CycleValidationError(
            f"ambiguous sheet identification at x={x}", seg)
    return k


def _validated_cycles(ws, sid):
    record = ws.cycle_set(sid)
    curve = ws.curve(record["curve_id"])
    reports = []
    for name, cycle in record["cycles"].items():
        report = validate_cycle(curve, cycle)
        if not report["ok"]:
            failures = report["edge_failures"]
            seg = failures[0].get("edge") if failures else None
            reason = (failures[0].get("reason",
                                      f"expected sheet "
                                      f"{failures[0].get('expected')}, "
                                      f"found {failures[0].get('found')}")
                      if failures else "lift does not close")
            raise CycleValidationError(
                f"cycle {name!r} fails validation: {reason}", seg)
        reports.append({"name": name, "closes": bool(report["closes"]),
                        "vertex_count": report["vertex_count"]})
    return record, curve, reports


def intersect_payload(ws, ref1, ref2):
    cid1, c1 = ws.resolve_cycle_id(ref1)
    cid2, c2 = ws.resolve_cycle_id(ref2)
    _expect(cid1 == cid2, "cycles live on different curves")
    curve = ws.curve(cid1)
    return {
        "curve": cid1,
        "cycle1": ref1,
        "cycle2": ref2,
        "intersection": int(intersection_number(curve, c1, c2)),
    }


def basis_check_payload(ws, sid):
    record, curve, reports = _validated_cycles(ws, sid)
    cycles = list(record["cycles"].values())
    names = list(record["cycles"])
    n = len(cycles)
    mat = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = intersection_number(curve, cycles[i], cycles[j])
            mat[j, i] = -mat[i, j]
    canonical = n >= 2 and n % 2 == 0 and np.array_equal(
        mat, symplectic_j(n // 2))
    for rep in reports:
        rep["id"] = f"{sid}:{rep['name']}"
    return {
        "id": sid,
        "curve": record["curve_id"],
        "cycles": reports,
        "names": names,
        "matrix": imatrix(mat),
        "canonical": bool(canonical),
    }


def _basis_from_set(ws, sid):
    record, curve, _ = _validated_cycles(ws, sid)
    cycles = tuple(record["cycles"].values())
    _expect(len(cycles) >= 2 and len(cycles) % 2 == 0,
            f"a basis needs an even number of cycles, got {len(cycles)}")
    return record, curve, HomologyBasis(curve, cycles, name=sid)


def transform_payload(ws, src_sid, dst_sid):
    """Integer symplectic matrix relating two homology bases.

    Bases on two different Klein models are compared by transporting the
    source cycles through the birational point map onto the destination
    model first; unrelated curves are rejected.
    """
    src_record, curve, src = _basis_from_set(ws, src_sid)
    dst_record, dst_curve, dst = _basis_from_set(ws, dst_sid)
    if src_record["curve_id"] != dst_record["curve_id"]:
        src_model = ws.curve_record(src_record["curve_id"])["model"]
        dst_model = ws.curve_record(dst_record["curve_id"])["model"]
        _expect(src_model is not None and dst_model is not None,
                "bases live on different curves")
        src = klein.transport_basis(src, src_model, dst_model)
        curve = dst_curve
    m = find_homology_transform(curve, src, dst)
    return {
        "curve": dst_record["curve_id"],
        "src": src_sid,
        "dst": dst_sid,
        "matrix": imatrix(m.matrix),
        "symplectic": bool(m.is_symplectic),
    }


def _parse_differentials(curve, specs):
    _expect(isinstance(specs, list) and specs,
            "differentials must be a non-empty array of "
            "{'numerator','denominator'}")
    out = []
    for k, spec in enumerate(specs):
        _expect(isinstance(spec, dict) and "numerator" in spec
                and "denominator" in spec,
                f"differentials[{k}] needs 'numerator' and 'denominator'")
        try:
            out.append(Differential(str(spec["numerator"]),
                                    str(spec["denominator"]),
                                    varnames=curve.f.varnames))
        except PeriodLabError as exc:
            raise RequestError(f"differentials[{k}]: {exc}") from exc
    return out


def periods_payload(ws, sid, differentials=None, tol=DEFAULT_TOL):
    record, curve, basis = _basis_from_set(ws, sid)
    model_id = ws.curve_record(record["curve_id"])["model"]
    if differentials is None:
        _expect(model_id is not None,
                "differentials are required for curves other than the "
                "built-in models")
        diffs = klein.build_model(model_id).differentials
        diff_text = [{"numerator": str(d.numerator),
                      "denominator": str(d.denominator)}
                     for d in diffs]
    else:
        diffs = _parse_differentials(curve, differentials)
        diff_text = [{"numerator": str(d.numerator),
                      "denominator": str(d.denominator)}
                     for d in diffs]
    tol = float(tol)
    _expect(0 < tol <= 1e-2, "tol must be in (0, 1e-2]")
    pd = period_matrices(curve, diffs, basis, tol=tol)
    riemann = check_riemann_conditions(pd)
    return {
        "curve": record["curve_id"],
        "basis": sid,
        "differentials": diff_text,
        "tol": tol,
        "A_periods": cmatrix(pd.A_periods),
        "B_periods": cmatrix(pd.B_periods),
        "tau": cmatrix(pd.tau),
        "condition": float(pd.condition),
        "riemann": {
            "max_asymmetry": riemann["max_asymmetry"],
            "min_imag_eigenvalue": riemann["min_imag_eigenvalue"],
            "pass": riemann["pass"],
        },
    }


def cycle_file(curve_ref, cycles, basepoint):
    """Serialize cycles into the shared cycle-file format.

    curve_ref is a model id or polynomial text; every cycle must carry its
    full per-vertex sheet list (as produced by annotate_cycle).
    """
    out = {"curve": curve_ref, "basepoint": cnum(basepoint), "cycles": []}
    for c in cycles:
        if c.sheets is None:
            raise RequestError(f"cycle {c.name!r} has no sheet annotations")
        out["cycles"].append({
            "name": c.name,
            "points": [{"re": float(p.real), "im": float(p.imag),
                        "sheet": int(s)}
                       for p, s in zip(c.points, c.sheets)],
        })
    return out


def klein_reference_payload():
    """Every published period matrix with its integer transform."""
    targets = {}
    for name, (tau, m) in klein.ReferenceMatrices.targets().items():
        targets[name.lower()] = {"tau": cmatrix(tau),
                                 "M": imatrix(m.matrix)}
    return {
        "tau_theorem": cmatrix(klein.TAU_THEOREM),
        "targets": targets,
        "symmetries": {
            name: {"M": imatrix(sym.expected_M.matrix),
                   "holomorphic": sym.holomorphic,
                   "order": sym.order}
            for name, sym in klein.SYMMETRIES.items()},
    }


def serializable(value):
    """Recursive cleanup of verify reports: numpy scalars -> python."""
    if isinstance(value, dict):
        return {str(k): serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serializable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return cnum(value)
    return value


def klein_verify_payload(tol=1e-8):
    return serializable(klein.verify_all(tol))
