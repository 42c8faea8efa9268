"""Command-line driver.

Every subcommand builds its payload through the api module, so `--json`
output is byte-identical with the HTTP service's response for the same
request.  Exit codes: 0 success, 1 computation or verification failure,
2 usage or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import api
from .errors import PeriodLabError

MODEL_CHOICES = sorted(api.MODEL_ALIASES)


def _fmt_complex(z, digits=6):
    return f"{z['re']:+.{digits}f}{z['im']:+.{digits}f}i"


def _print_cmatrix(rows, indent="  "):
    for row in rows:
        print(indent + "  ".join(_fmt_complex(v) for v in row))


def _print_imatrix(rows, indent="  "):
    width = max(len(str(v)) for row in rows for v in row)
    for row in rows:
        print(indent + " ".join(f"{v:>{width}}" for v in row))


def _load_json_file(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise api.RequestError(f"cannot read {what} file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise api.RequestError(f"{what} file is not valid JSON: {exc}") from exc


def _resolve_curve_arg(ws, args):
    if args.model is not None:
        return ws.add_curve(args.model)
    if args.curve is not None:
        return ws.add_curve(args.curve)
    raise api.RequestError("give either --curve or --model")


def _emit(args, payload):
    if args.json:
        print(api.dumps(payload))
        return True
    return False


# --------------------------------------------------------------------------
# subcommands

def cmd_branch_points(ws, args):
    payload = api.curve_payload(ws, _resolve_curve_arg(ws, args))
    if _emit(args, payload):
        return 0
    print(f"curve {payload['id']}: {payload['curve']}")
    print(f"  sheets: {payload['sheet_count']}   "
          f"base point: {_fmt_complex(payload['base_point'])}")
    for bp in payload["branch_points"]:
        print(f"  {_fmt_complex(bp['point'])}   cycle type "
              f"{tuple(bp['cycle_type'])}   standoff {bp['standoff']:.4g}")
    if payload["includes_infinity"]:
        print(f"  infinity   cycle type {tuple(payload['infinity_cycle_type'])}")
    return 0


def cmd_monodromy(ws, args):
    payload = api.monodromy_payload(ws, _resolve_curve_arg(ws, args))
    if _emit(args, payload):
        return 0
    print(f"curve {payload['id']}   base point "
          f"{_fmt_complex(payload['base_point'])}   positive direction: "
          f"{payload['positive_direction']}")
    for bp in payload["branch_points"]:
        perm = " ".join(str(v) for v in bp["permutation"])
        print(f"  {_fmt_complex(bp['point'])}   perm [{perm}]")
    inf = payload["infinity"]
    print(f"  infinity            perm "
          f"[{' '.join(str(v) for v in inf['permutation'])}]")
    print(f"  composition is identity: {payload['composition_is_identity']}")
    print(f"  genus: {payload['genus']}")
    return 0


def cmd_intersect(ws, args):
    sid = ws.add_cycle_set(_load_json_file(args.cycles, "cycles"))
    names = args.pair.split(",")
    if len(names) != 2:
        raise api.RequestError("--pair needs two comma-separated cycle names")
    payload = api.intersect_payload(
        ws, f"{sid}:{names[0].strip()}", f"{sid}:{names[1].strip()}")
    if _emit(args, payload):
        return 0
    print(f"<{names[0].strip()}, {names[1].strip()}> = "
          f"{payload['intersection']}")
    return 0


def cmd_basis_check(ws, args):
    sid = ws.add_cycle_set(_load_json_file(args.cycles, "cycles"))
    payload = api.basis_check_payload(ws, sid)
    if not _emit(args, payload):
        print(f"cycle set {payload['id']} on curve {payload['curve']}")
        print(f"  cycles: {', '.join(payload['names'])}")
        print("  intersection matrix:")
        _print_imatrix(payload["matrix"], indent="    ")
        print(f"  canonical: {payload['canonical']}")
    return 0 if payload["canonical"] else 1


def cmd_transform(ws, args):
    src = ws.add_cycle_set(_load_json_file(args.src, "src"))
    dst = ws.add_cycle_set(_load_json_file(args.dst, "dst"))
    payload = api.transform_payload(ws, src, dst)
    if _emit(args, payload):
        return 0
    print(f"transform {payload['src']} -> {payload['dst']}")
    _print_imatrix(payload["matrix"])
    print(f"  symplectic: {payload['symplectic']}")
    return 0


def cmd_periods(ws, args):
    sid = ws.add_cycle_set(_load_json_file(args.cycles, "cycles"))
    diffs = None
    if args.differentials is not None:
        text = args.differentials
        if text.startswith("@"):
            diffs = _load_json_file(text[1:], "differentials")
        else:
            try:
                diffs = json.loads(text)
            except json.JSONDecodeError as exc:
                raise api.RequestError(
                    f"--differentials is not valid JSON: {exc}") from exc
    payload = api.periods_payload(ws, sid, differentials=diffs, tol=args.tol)
    if _emit(args, payload):
        return 0
    print(f"periods over basis {payload['basis']} "
          f"(tol {payload['tol']:g}, condition {payload['condition']:.3g})")
    print("  tau:")
    _print_cmatrix(payload["tau"], indent="    ")
    r = payload["riemann"]
    print(f"  riemann conditions: max asymmetry {r['max_asymmetry']:.3g}, "
          f"min Im eigenvalue {r['min_imag_eigenvalue']:.6g}, "
          f"pass {r['pass']}")
    return 0


def _verify_line(name, section):
    status = "PASS" if section.get("pass") else "FAIL"
    print(f"  [{status}] {name}")


def cmd_klein_verify(ws, args):
    payload = api.klein_verify_payload(tol=args.tol)
    if _emit(args, payload):
        return 0 if payload["pass"] else 1
    print(f"worked-example verification at tolerance {payload['tolerance']:g}")
    _verify_line("monodromy: shifts (1,2,4) at z=1,rho,rho2; "
                 "genus 3 in all models", payload["monodromy"])
    _verify_line("adapted basis: intersection matrix equals J",
                 payload["adapted_basis"])
    t1 = payload["theorem1"]
    _verify_line(f"period matrix: deviation {t1['tau_deviation']:.3g}; "
                 "circulant structure and phases", t1)
    s7 = payload["section7"]
    for name, entry in s7["targets"].items():
        status = "PASS" if entry["pass"] else "FAIL"
        extra = f", deviation {entry['max_deviation']:.3g}"
        if not entry["pass"] and entry.get("target_over_image") is not None:
            ratio = entry["target_over_image"]
            extra += (f"; stored target = ({ratio['re']:g}{ratio['im']:+g}i)"
                      " x transform image")
        print(f"  [{status}] published matrix {name}{extra}")
    sym = payload["symmetries"]
    for name, entry in sym["symmetries"].items():
        status = "PASS" if entry["pass"] else "FAIL"
        print(f"  [{status}] symmetry {name}: homology action matches, "
              f"order relation holds")
    _verify_line("edge-word basis: canonical, reproduces tau_RL "
                 f"(direct {payload['rl_basis']['tau_direct_deviation']:.3g},"
                 f" via transform "
                 f"{payload['rl_basis']['modular_image_deviation']:.3g})",
                 payload["rl_basis"])
    print(f"overall: {'PASS' if payload['pass'] else 'FAIL'}")
    print("computed period matrix tau:")
    from . import klein
    _print_cmatrix(api.cmatrix(klein.compute_period_data().tau), indent="  ")
    return 0 if payload["pass"] else 1


def cmd_klein_export(ws, args):
    from . import klein

    if args.basis == "adapted":
        basis, model_ref = klein.build_adapted_basis(), "klein-zw"
    else:
        basis, model_ref = klein.build_rl_basis(), "klein-ts"
    model = klein.build_model(api.MODEL_ALIASES[model_ref])
    payload = api.cycle_file(model_ref, basis.cycles, model.curve.base_point)
    text = api.dumps(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_serve(ws, args):
    from . import server

    server.serve(port=args.port, host=args.host)
    return 0


# --------------------------------------------------------------------------
# parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="periodlab",
        description="Monodromy, homology intersections, and period matrices "
                    "of plane algebraic curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_curve_args(p):
        p.add_argument("--curve", help="polynomial text, e.g. 'y^2 - x'")
        p.add_argument("--model", choices=MODEL_CHOICES,
                       help="built-in curve model")
        p.add_argument("--json", action="store_true",
                       help="emit the JSON payload instead of a table")

    p = sub.add_parser("branch-points",
                       help="branch points and local cycle types")
    add_curve_args(p)
    p.set_defaults(func=cmd_branch_points)

    p = sub.add_parser("monodromy",
                       help="monodromy permutations about every branch point")
    add_curve_args(p)
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("intersect",
                       help="intersection number of two named cycles")
    p.add_argument("--cycles", required=True, help="cycle file (JSON)")
    p.add_argument("--pair", required=True, help="two names, e.g. a1,b1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("basis-check",
                       help="pairwise intersection matrix and canonicity")
    p.add_argument("--cycles", required=True, help="cycle file (JSON)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_basis_check)

    p = sub.add_parser("transform",
                       help="integer symplectic transform between two bases")
    p.add_argument("--src", required=True, help="source basis cycle file")
    p.add_argument("--dst", required=True, help="target basis cycle file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("periods",
                       help="period matrices over a canonical basis")
    p.add_argument("--cycles", required=True, help="basis cycle file (JSON)")
    p.add_argument("--differentials",
                   help="JSON array of {numerator, denominator}, or @file; "
                        "defaults to the model's differentials")
    p.add_argument("--tol", type=float, default=api.DEFAULT_TOL,
                   help="absolute quadrature tolerance per period")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("klein", help="worked-example commands")
    ksub = p.add_subparsers(dest="klein_command", required=True)
    kv = ksub.add_parser("verify",
                         help="run every built-in verification suite")
    kv.add_argument("--tol", type=float, default=1e-8)
    kv.add_argument("--json", action="store_true")
    kv.set_defaults(func=cmd_klein_verify)
    ke = ksub.add_parser("export-basis",
                         help="write a built-in basis as a cycle file")
    ke.add_argument("--basis", choices=("adapted", "rl"), default="adapted")
    ke.add_argument("--out", help="output path (default: stdout)")
    ke.set_defaults(func=cmd_klein_export)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--port", type=int, default=None,
                   help="port (default: PERIODLAB_PORT or 8642)")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    ws = api.Workspace()
    try:
        return args.func(ws, args)
    except api.RequestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PeriodLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
