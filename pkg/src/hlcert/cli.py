"""Command-line front end.

Exit codes: 0 proven / success, 1 a certified fact failed, 2 unsupported input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .certify import UnsupportedCase, prove_case
from .explore import rows_to_csv, shape, tabulate, write_svg
from .kernels import KernelSpec, h_xx_bound, improved_g1_bound, kernel_bounds
from .report import dumps
from .trigpoly import CaseId

EXIT_OK, EXIT_FAILED, EXIT_UNSUPPORTED = 0, 1, 2

# published constants the certified values are compared against: (name, value, relation)
PUBLISHED = {
    1: [
        ("min G+", 0.3691, "approx"), ("min G-", 0.1249, "approx"),
        ("C1+ (G'^2 <= C1 G)", 1300, "<="), ("C1- (G'^2 <= C1 G)", 1100, "<="),
        ("C2+ (|G''| <= C2 G)", 2200, "<="), ("C2- (|G''| <= C2 G)", 4000, "<="),
    ],
    2: [
        ("min G+", 0.2705, "approx"), ("min G-", 0.063, "approx"),
        ("C1+ (G'^2 <= C1 G)", 2300, "<="), ("C1- (G'^2 <= C1 G)", 2600, "<="),
        ("G''G+ max", 2820, "<="), ("G''G+ min", -18500, ">="),
        ("G''G- max", 2710, "<="), ("G''G- min", -14800, ">="),
        ("||G'||/pi", 29.12, "<="),
    ],
}
H_TABLES = {
    1: (1.5, range(3, 11), [195745, 560366, 1577686, 4228176, 11254403, 29470592, 76110084, 194242755]),
    2: (2.5, range(4, 12), [16e6, 40e6, 104e6, 267e6, 680e6, 1705e6, 4255e6, 10600e6]),
}


def _certified_constants(k: int) -> dict[str, float]:
    kp, km = kernel_bounds(CaseId(k, 1)), kernel_bounds(CaseId(k, -1))
    out = {
        "min G+": kp.min_G, "min G-": km.min_G,
        "C1+ (G'^2 <= C1 G)": kp.C1, "C1- (G'^2 <= C1 G)": km.C1,
        "C2+ (|G''| <= C2 G)": kp.C2, "C2- (|G''| <= C2 G)": km.C2,
        "G''G+ max": kp.G2G_max, "G''G+ min": kp.G2G_min,
        "G''G- max": km.G2G_max, "G''G- min": km.G2G_min,
    }
    if k == 2:
        out["||G'||/pi"] = improved_g1_bound()["bound_over_pi"]
    return out


def bounds_inventory(k: int) -> dict:
    if k not in (1, 2):
        raise UnsupportedCase("bounds are tabulated for k = 1 and k = 2 only")
    cert = _certified_constants(k)
    rows = []
    for name, value, rel in PUBLISHED[k]:
        c = cert[name]
        ok = {"<=": c <= value, ">=": c >= value, "approx": abs(c - value) <= 0.01 * abs(value)}[rel]
        rows.append({"name": name, "certified": c, "published": value, "relation": rel, "agrees": ok})
    t, js, table = H_TABLES[k]
    hrows = []
    for j, pub in zip(js, table):
        b = max(h_xx_bound(KernelSpec(CaseId(k, s), t, j)).value for s in (1, -1))
        hrows.append({"j": j, "t": t, "certified": b, "published": pub, "agrees": b <= pub})
    return {"k": k, "constants": rows, "h_xx": hrows}


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_prove(args) -> int:
    try:
        report = prove_case(args.k, timings=args.timings)
    except UnsupportedCase as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    _write(dumps(report), args.out)
    for f in report.facts:
        if not f.holds:
            print(f"failed: {f.name}", file=sys.stderr)
    print(f"k={report.k}: {report.verdict}", file=sys.stderr)
    return EXIT_OK if report.verdict == "proven" else EXIT_FAILED


def cmd_tabulate(args) -> int:
    t_min = args.k if args.t_min is None else args.t_min
    t_max = args.k + 1 if args.t_max is None else args.t_max
    if t_min < 1:
        print("error: t must be at least 1", file=sys.stderr)
        return EXIT_UNSUPPORTED
    rows = tabulate(args.k, t_min, t_max, args.step, args.density, args.exploratory)
    if args.format == "csv":
        _write(rows_to_csv(rows), args.out)
    elif args.format == "json":
        data = [{"t": r.t, "d": r.d, "error_bound": r.error_bound if math.isfinite(r.error_bound) else None,
                 "bound_kind": r.bound_kind, "unreliable": r.unreliable} for r in rows]
        _write(json.dumps(data, indent=2) + "\n", args.out)
    else:
        _write(write_svg({f"k={args.k}": ([r.t for r in rows], [r.d for r in rows])},
                         title=f"d(t), k={args.k}"), args.out)
    return EXIT_OK


def cmd_shape(args) -> int:
    ks = args.k_list or [args.k]
    if any(k < 1 for k in ks):
        print("error: shape needs k >= 1", file=sys.stderr)
        return EXIT_UNSUPPORTED
    curves = shape(ks, args.step, args.density)
    if args.format == "svg":
        _write(write_svg({f"k={c.k}": (c.s, c.f) for c in curves}, title="normalized d(k+s)"), args.out)
    elif args.format == "json":
        data = [{"k": c.k, "argmax_s": c.argmax_s, "max_d": c.max_d, "s": c.s, "f": c.f} for c in curves]
        _write(json.dumps(data, indent=2) + "\n", args.out)
    else:
        lines = ["k,s,f"] + [f"{c.k},{s!r},{f!r}" for c in curves for s, f in zip(c.s, c.f)]
        _write("\n".join(lines) + "\n", args.out)
    for c in curves:
        print(f"k={c.k}: argmax s = {c.argmax_s:g}", file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        inv = bounds_inventory(args.k)
    except UnsupportedCase as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if args.format == "json":
        _write(json.dumps(inv, indent=2) + "\n", args.out)
    else:
        lines = ["quantity,certified,published,relation,agrees"]
        lines += [f"{r['name']},{r['certified']!r},{r['published']},{r['relation']},{int(r['agrees'])}"
                  for r in inv["constants"]]
        lines += [f"H''(t={r['t']};j={r['j']}),{r['certified']!r},{r['published']},<=,{int(r['agrees'])}"
                  for r in inv["h_xx"]]
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hlcert", description="Certified sign checks for power integrals of G_+ and G_-.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices, default_fmt, k_required=True):
        sp.add_argument("--k", type=int, required=k_required, help="gap index k >= 0")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=fmt_choices, default=default_fmt)

    sp = sub.add_parser("prove", help="run the certified proof for k in {0, 1, 2}")
    common(sp, ["json"], "json")
    sp.add_argument("--timings", action="store_true", help="record wall-clock time (breaks byte identity)")
    sp.set_defaults(func=cmd_prove)

    grid_help = ("quadrature node spacing on [0, 1/2]; 0.001 means N = 500 midpoint nodes")
    sp = sub.add_parser("tabulate", help="tabulate d(t) with error bounds and reliability flags")
    common(sp, ["csv", "json", "svg"], "csv")
    sp.add_argument("--t-min", type=float, help="default k")
    sp.add_argument("--t-max", type=float, help="default k + 1")
    sp.add_argument("--step", type=float, default=0.001, help=grid_help)
    sp.add_argument("--density", type=float, default=0.01, help="spacing of the t grid")
    sp.add_argument("--exploratory", action="store_true",
                    help="allow non-certified grid estimates of H'' where no certified bound exists")
    sp.set_defaults(func=cmd_tabulate)

    sp = sub.add_parser("shape", help="normalized curves d(k+s)/max d")
    common(sp, ["csv", "json", "svg"], "csv", k_required=False)
    sp.add_argument("--k-list", type=int, nargs="+", help="several k at once (overrides --k)")
    sp.add_argument("--step", type=float, default=0.001, help=grid_help)
    sp.add_argument("--density", type=float, default=0.01, help="spacing of the s grid")
    sp.set_defaults(func=cmd_shape)

    sp = sub.add_parser("bounds", help="certified constants next to the published ones")
    common(sp, ["csv", "json"], "csv")
    sp.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("step", "density"):
        if getattr(args, name, 1.0) <= 0:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return EXIT_UNSUPPORTED
    if args.k is None and not getattr(args, "k_list", None):
        print("error: give --k or --k-list", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if args.k is not None and args.k < 0:
        print("error: k must be non-negative", file=sys.stderr)
        return EXIT_UNSUPPORTED
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
