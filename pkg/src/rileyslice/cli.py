"""Command-line interface.

Subcommands: word, poly, cusp, ray, member, spectrum, render, selftest.
Output is JSON on stdout unless --format says otherwise.  Exit codes:
0 success, 2 domain/usage errors, 3 membership Unknown (budget exhausted).
An optional key=value config file supplies defaults; explicit flags win.
The only environment variable honoured is RILEY_THREADS (render workers).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .membership import Budget, InvalidInput, Verdict, classify
from .polynomials import factor_shape, trace_polys
from .rays import BoundaryIndeterminate, ContinuationFailed, ContinuationStalled, trace_ray
from .render import RenderJob, render
from .roots import cusp_point, ray_extension_spectrum
from .words import Slope, farey_word, word_report

SCHEMA_VERSION = "1"


def _emit(payload: dict, as_json: bool = True):
    payload = {"schema": SCHEMA_VERSION, **payload}
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _parse_point(text: str) -> complex:
    try:
        re, im = (float(t) for t in text.split(","))
        return complex(re, im)
    except ValueError as exc:
        raise ValueError(f"cannot parse point {text!r}; expected re,im") from exc


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _cfg(args, config: dict, name: str, cast, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return default


def cmd_word(args, config):
    word = farey_word(Slope.parse(args.slope))
    if args.format == "json":
        rep = word_report(word)
        _emit({"slope": str(word.slope), "word": str(word),
               "length": rep.length, "alternating": rep.alternating,
               "x_exponent_sum": rep.x_exponent_sum,
               "y_exponent_sum": rep.y_exponent_sum})
    else:
        print(str(word))
    return 0


def cmd_poly(args, config):
    pair = trace_polys(Slope.parse(args.slope))
    if args.format == "csv":
        for k, c in enumerate(pair.Q.coeffs):
            print(f"{k},{c}")
        return 0
    payload = {"slope": str(pair.slope),
               "P": pair.P.to_json(), "Q": pair.Q.to_json()}
    if args.shape:
        rep = factor_shape(pair.slope)
        payload["shape"] = {
            "matches": rep.matches, "parity": rep.q_parity,
            "z_power": rep.z_power, "expected_z_power": rep.expected_z_power,
            "sign": rep.sign, "core": rep.core.to_json(), "note": rep.note,
        }
    _emit(payload)
    return 0


def cmd_cusp(args, config):
    c = cusp_point(Slope.parse(args.slope))
    _emit({"slope": str(c.slope), "mu": [c.mu.real, c.mu.imag],
           "residual": c.residual})
    return 0


def cmd_ray(args, config):
    t_start = _cfg(args, config, "t_start", float, -50.0)
    steps = _cfg(args, config, "steps", int, 200)
    ray = trace_ray(Slope.parse(args.slope), t_start, steps)
    if args.format == "csv":
        print("t,re,im")
        for t, re, im in ray.to_csv_rows():
            print(f"{t!r},{re!r},{im!r}")
        return 0
    _emit({"slope": str(ray.slope), "branch": ray.branch,
           "samples": [[t, z.real, z.imag] for t, z in ray.samples],
           "cusp": ray.cusp.to_json()})
    return 0


def cmd_member(args, config):
    mu = _parse_point(args.point)
    budget = Budget(max_q=_cfg(args, config, "max_q", int, 12),
                    depth=_cfg(args, config, "depth", int, 3),
                    max_iter=_cfg(args, config, "max_iter", int, 500))
    cert = classify(mu, budget)
    _emit({"mu": [mu.real, mu.imag], **cert.to_json()})
    return 3 if cert.verdict == Verdict.UNKNOWN else 0


def cmd_spectrum(args, config):
    entries = ray_extension_spectrum(Slope.parse(args.slope), args.r_max,
                                     include_case1=args.case1)
    payload = {"slope": args.slope, "levels": []}
    for e in entries:
        item = {"r": e["r"], "trace": e["trace"], "mus": e["mus"].to_json()}
        if "case1_trace" in e:
            item["case1_trace"] = e["case1_trace"]
        payload["levels"].append(item)
    _emit(payload)
    return 0


def cmd_render(args, config):
    window = tuple(float(t) for t in args.window.split(","))
    w, h = (int(t) for t in args.res.split("x"))
    params = {}
    if args.params:
        for piece in args.params.split(","):
            if "=" in piece:
                key, value = piece.split("=", 1)
                params[key.strip()] = value.strip()
    # complex params arrive as re:im to survive the comma split
    for key, value in params.items():
        if isinstance(value, str) and ":" in value:
            params[key] = value.replace(":", ",")
    job = RenderJob(kind=args.kind, window=window, resolution=(w, h), params=params)
    raster, rows, report = render(job)
    out = args.out or f"render_{args.kind}.ppm"
    with open(out, "wb") as fh:
        fh.write(raster.to_ppm())
    sidecar = out + ".csv"
    with open(sidecar, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(",".join(repr(x) if isinstance(x, float) else str(x)
                              for x in row) + "\n")
    _emit({"out": out, "sidecar": sidecar, **report})
    return 0


def cmd_selftest(args, config):
    failures = 0

    def check(name, fn):
        nonlocal failures
        try:
            fn()
            print(f"ok   {name}")
        except Exception as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")

    table = {
        (1, 2): "xyXY", (4, 7): "xyXYxyXyxYXyxY", (3, 5): "xyXYxYXyxY",
        (5, 8): "xyXYxYXyXYxyXyxY", (2, 3): "xyXyxY", (5, 7): "xyXyxYxYXyXYxY",
        (3, 4): "xyXyXYxY", (4, 5): "xyXyXyxYxY", (1, 1): "xY",
    }

    def golden_words():
        for (p, q), expected in table.items():
            got = str(farey_word(Slope(p, q)))
            assert got == expected, f"{p}/{q}: {got} != {expected}"

    def fricke():
        from .polynomials import fricke_check
        from .words import enumerate_slopes
        for s in enumerate_slopes(20):
            assert fricke_check(s), s

    def figure_eight():
        mu0 = complex(0.5, math.sqrt(3.0) / 2.0)
        v = trace_polys(Slope(3, 5)).P.eval(mu0)
        assert abs(v - 2.0) <= 1e-12, abs(v - 2.0)

    def superattractor():
        from .polynomials import superattractor_check
        from .words import enumerate_slopes
        for s in enumerate_slopes(20):
            assert superattractor_check(s), s

    def holonomy_bounds():
        from .mobius import holonomy
        for t in (0.01, 0.1, 0.5, 0.99):
            hd = holonomy(t)
            assert 1.0 <= hd.tau / math.sqrt(2 * t) <= 1.03642
            assert -1.0 <= hd.theta / math.sqrt(2 * t) <= -0.954
        assert abs(holonomy(1e6).theta + math.pi) < 1e-2

    def cusp_half():
        c = cusp_point(Slope(1, 2))
        assert abs(c.mu - 2j) < 1e-10 and c.residual < 1e-10

    def member_examples():
        assert classify(complex(5, 0)).verdict == Verdict.INTERIOR_BY_HULL
        assert classify(complex(0.5, 0)).verdict == Verdict.NOT_IN_CLOSURE
        assert classify(complex(0, 1)).verdict == Verdict.NOT_IN_SLICE

    check("table-words", golden_words)
    check("fricke-identity-q20", fricke)
    check("figure-eight-value", figure_eight)
    check("superattractor-q20", superattractor)
    check("holonomy-bounds", holonomy_bounds)
    check("cusp-1/2", cusp_half)
    check("membership-examples", member_examples)
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rileyslice",
        description="Farey words, trace polynomials, pleating rays and "
                    "membership certificates for the Riley slice")
    parser.add_argument("--config", help="key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("word", help="Farey word of a slope")
    p.add_argument("slope")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(fn=cmd_word)

    p = sub.add_parser("poly", help="trace polynomials P and Q")
    p.add_argument("slope")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--shape", action="store_true",
                   help="include the squared-factor shape report")
    p.set_defaults(fn=cmd_poly)

    p = sub.add_parser("cusp", help="cusp point of the upper pleating ray")
    p.add_argument("slope")
    p.set_defaults(fn=cmd_cusp)

    p = sub.add_parser("ray", help="trace the upper pleating ray")
    p.add_argument("slope")
    p.add_argument("--t-start", dest="t_start", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(fn=cmd_ray)

    p = sub.add_parser("member", help="membership certificate for a point")
    p.add_argument("point", help="re,im")
    p.add_argument("--max-q", dest="max_q", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    # let "-1.5,0.2" parse as the positional point, not as an option
    p._negative_number_matcher = re.compile(r"^-\d+[.,]?\d*")
    p.set_defaults(fn=cmd_member)

    p = sub.add_parser("spectrum", help="discrete trace levels on the ray extension")
    p.add_argument("slope")
    p.add_argument("--r-max", dest="r_max", type=int, default=8)
    p.add_argument("--case1", action="store_true",
                   help="include the positive-trace case levels")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("render", help="render a figure to PPM + sidecar CSV")
    p.add_argument("--kind", required=True,
                   choices=["rootset", "cusps", "rays", "neighbourhoods",
                            "julia", "limitset", "isocircles"])
    p.add_argument("--window", default="-5,5,-4,4", help="x0,x1,y0,y1")
    p.add_argument("--res", default="800x640", help="WxH")
    p.add_argument("--out", default=None)
    p.add_argument("--params", default="",
                   help="k=v,... (complex values as re:im)")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("selftest", help="fast end-to-end checks")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.fn(args, config)
    except (ValueError, InvalidInput, ContinuationStalled, ContinuationFailed,
            BoundaryIndeterminate, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
