"""eisenzero command line: eval, coeffs, zeros, verify.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 uncertified truncation under --strict, 4 zero certification failure.

Environment overrides (flags win): EISENZERO_U_MAX sets a fixed lattice row
cutoff, EISENZERO_TOL the bisection tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import warnings
from dataclasses import dataclass

from .series import (
    TruncationPolicy,
    TruncationWarning,
    evaluate,
    fourier_b,
)
from .verify import SUITES, run_suite
from .zerofinder import (
    DEFAULT_TOL,
    SignAnomaly,
    ValenceExceeded,
    ZeroReport,
    compile_report,
    map_to_Finf,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_UNCERTIFIED = 3
EXIT_CERT = 4


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k: int
    fmt: str = "json"
    output: str | None = None
    u_max: int | None = None
    v_max: int | None = None
    tol: float = DEFAULT_TOL
    strict: bool = False

    def __post_init__(self):
        if self.k < 5 or self.k % 2 == 0:
            raise InputError(f"k must be odd and >= 5, got {self.k}")
        if self.fmt not in ("json", "csv", "text"):
            raise InputError(f"unknown format {self.fmt!r}")
        if not self.tol > 0:
            raise InputError("tolerance must be positive")

    @property
    def policy(self) -> TruncationPolicy | None:
        """None lets every evaluation size its own cutoffs."""
        if self.u_max is None and self.v_max is None:
            return None
        base = TruncationPolicy()
        return TruncationPolicy(
            lattice_u_max=self.u_max or base.lattice_u_max,
            lattice_v_max=self.v_max or base.lattice_v_max,
        )


_Z_RE = re.compile(r"^\s*([+-]?[0-9.eE]+(?=[+-]))?([+-]?[0-9.eE]*)i\s*$")


def parse_z(text: str) -> complex:
    """Accept 'x+yi', '-0.5+1.0i', '10i', 'i', or anything complex() takes."""
    t = text.strip().replace(" ", "")
    m = _Z_RE.match(t)
    try:
        if m:
            re_part = float(m.group(1)) if m.group(1) else 0.0
            im_txt = m.group(2)
            im_part = float(im_txt + "1") if im_txt in ("", "+", "-") else float(im_txt)
            z = complex(re_part, im_part)
        else:
            z = complex(t.replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot parse {text!r} as a complex number") from None
    if not z.imag > 0:
        raise InputError(f"z must lie in the upper half-plane, got {text!r}")
    return z


def cplx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def yval(y: float | None):
    return None if y is None else float(f"{y:.15g}")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name}={raw!r} is not an integer") from None


def _env_float(name: str) -> float | None:
    raw = os.environ.get(name)
    if raw in (None, ""):
        return None
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"{name}={raw!r} is not a number") from None


def make_config(args, k: int) -> RunConfig:
    fmt = getattr(args, "format", None) or ("json" if getattr(args, "json", False) else "text")
    u_max = args.u_max if args.u_max is not None else _env_int("EISENZERO_U_MAX")
    tol = getattr(args, "tol", None)
    if tol is None:
        tol = _env_float("EISENZERO_TOL") or DEFAULT_TOL
    return RunConfig(args.command, k, fmt, args.output, u_max, args.v_max, tol, args.strict)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    cfg = make_config(args, args.k)
    z = parse_z(args.z)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        res = evaluate(args.series, z, cfg.k, cfg.policy, args.expansion)
    rec = {
        "series": args.series,
        "expansion": args.expansion,
        "k": cfg.k,
        "z": cplx(z),
        "value": cplx(res.value),
        "abs_value": abs(res.value),
        "tail_estimate": res.tail_estimate,
        "terms_used": res.terms_used,
        "certified": res.certified,
    }
    if cfg.fmt == "json":
        emit(dump_json(rec), cfg.output)
    else:
        lines = [
            f"{args.series}({z}) k={cfg.k} [{args.expansion}]",
            f"value         {res.value.real:.16g} {res.value.imag:+.16g}i",
            f"|value|       {abs(res.value):.16g}",
            f"tail_estimate {res.tail_estimate:.3e}",
            f"terms_used    {res.terms_used}",
            f"certified     {res.certified}",
        ]
        emit("\n".join(lines) + "\n", cfg.output)
    if cfg.strict and not res.certified:
        print("uncertified truncation", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def cmd_coeffs(args) -> int:
    cfg = make_config(args, args.k)
    if args.l_max < 1:
        raise InputError("--l-max must be >= 1")
    rows = []
    for l in range(1, args.l_max + 1):
        b = fourier_b(l, cfg.k)
        rows.append((l, b))
    if cfg.fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["l", "re", "im", "rotated", "squarefree_part", "tail"])
        for l, b in rows:
            wr.writerow([l, repr(b.value.real), repr(b.value.imag), repr(b.rotated.real), b.squarefree_part, repr(b.tail)])
        emit(buf.getvalue(), cfg.output)
    elif cfg.fmt == "json":
        recs = [
            {
                "l": l,
                "value": cplx(b.value),
                "rotated": b.rotated.real,
                "squarefree_part": b.squarefree_part,
                "ladder": [{"p": s.p, "v": s.v, "branch": s.branch, "chi": s.chi, "ratio": s.ratio} for s in b.ladder],
                "tail": b.tail,
            }
            for l, b in rows
        ]
        emit(dump_json({"k": cfg.k, "coefficients": recs}), cfg.output)
    else:
        emit("".join(f"b_{l:<4d} e(k/8) b = {b.rotated.real:.16e}\n" for l, b in rows), cfg.output)
    return EXIT_OK


def report_dict(rep: ZeroReport) -> dict:
    certs = []
    for c in rep.certificates:
        certs.append(
            {
                "series_id": c.series_id,
                "method": c.method,
                "n": c.n,
                "bracket": [yval(c.bracket[0]), yval(c.bracket[1])],
                "endpoint_signs": list(c.endpoint_signs),
                "endpoint_margins": list(c.endpoint_margins),
                "refined_y": yval(c.refined_y),
                "residual": c.residual,
                "finf": cplx(map_to_Finf(c)),
            }
        )
    return {
        "k": rep.k.k,
        "count_found": rep.count_found,
        "valence_budget": rep.valence_budget,
        "theorem_floor": rep.theorem_floor,
        "per_series": rep.per_series,
        "p_axis_found": rep.p_axis_found,
        "circle_max_deviation": rep.circle_max_deviation,
        "certificates": certs,
        "mapped_points": [cplx(z) for z in rep.mapped_points],
        "voided": [{"series_id": v.series_id, "n": v.n, "y": yval(v.y), "reason": v.reason} for v in rep.voided],
    }


def plot_csv(rep: ZeroReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["series", "y", "finf_x", "finf_y", "residual"])
    for c in rep.certificates:
        z = map_to_Finf(c)
        wr.writerow([c.series_id, f"{c.refined_y:.15g}", repr(z.real), repr(z.imag), repr(c.residual)])
    return buf.getvalue()


def cmd_zeros(args) -> int:
    cfg = make_config(args, args.k)
    try:
        rep = compile_report(
            cfg.k,
            cfg.policy,
            cfg.tol,
            p_scan=not args.no_p_scan,
            p_range=tuple(args.p_range),
            p_step=args.p_step,
        )
    except (SignAnomaly, ValenceExceeded) as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    if args.plot_data:
        with open(args.plot_data, "w", newline="") as fh:
            fh.write(plot_csv(rep))
    if cfg.fmt == "json":
        emit(dump_json(report_dict(rep)), cfg.output)
    elif cfg.fmt == "csv":
        emit(plot_csv(rep), cfg.output)
    else:
        lines = [
            f"k={cfg.k}: {rep.count_found} zeros (valence budget {rep.valence_budget}, floor {rep.theorem_floor})",
            f"per series: {rep.per_series}",
            f"max circle deviation: {rep.circle_max_deviation:.3e}",
        ]
        for c in rep.certificates:
            z = map_to_Finf(c)
            lines.append(f"  {c.series_id:<10} {c.method:<6} y={c.refined_y:.12f} -> {z.real:.12f}{z.imag:+.12f}i")
        for v in rep.voided:
            lines.append(f"  voided {v.series_id} n={v.n} y={v.y:.6f}: {v.reason}")
        emit("\n".join(lines) + "\n", cfg.output)
    if cfg.strict and not rep.p_axis_found:
        print("no P-axis zero found on the scan range", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    checks = []
    for k in args.k:
        cfg = make_config(args, k)
        for s in suites:
            checks.extend(run_suite(s, cfg.k))
    if args.json or args.format == "json":
        recs = [
            {"suite": c.suite, "name": c.name, "measured": c.measured, "threshold": c.threshold, "passed": c.passed}
            for c in checks
        ]
        emit(dump_json({"checks": recs, "passed": all(c.passed for c in checks)}), args.output)
    else:
        emit("".join(c.line() + "\n" for c in checks), args.output)
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"first failing check: {failed[0].suite}/{failed[0].name}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, fmt_choices=("json", "text")) -> None:
    p.add_argument("--json", action="store_true", help="shorthand for --format json")
    p.add_argument("--format", choices=fmt_choices, default=None)
    p.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    p.add_argument("--u-max", type=int, default=None, help="fixed lattice row cutoff (default: adaptive)")
    p.add_argument("--v-max", type=int, default=None, help="fixed lattice window half-width")
    p.add_argument("--strict", action="store_true", help="nonzero exit on uncertified results")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eisenzero", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one series at one point")
    p.add_argument("--series", required=True, choices=["einf", "e0", "ehalf"])
    p.add_argument("--z", required=True, help="point, e.g. -0.5+1.2i or 10i")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--expansion", choices=["lattice", "fourier"], default="lattice")
    _common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("coeffs", help="Fourier coefficients b_l of E_0")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l-max", type=int, default=30)
    _common(p, ("json", "csv", "text"))
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("zeros", help="certified zero search and report")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=None, help=f"bisection tolerance (default {DEFAULT_TOL:g})")
    p.add_argument("--plot-data", default=None, help="also write series,y,finf_x,finf_y,residual CSV here")
    p.add_argument("--no-p-scan", action="store_true", help="skip the imaginary-axis scan")
    p.add_argument("--p-range", type=float, nargs=2, default=(1.0, 12.0), metavar=("LO", "HI"))
    p.add_argument("--p-step", type=float, default=0.05)
    _common(p, ("json", "csv", "text"))
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify", help="run numerical check suites")
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
