"""Command-line front end.

Subcommands: hilbert, points, construct, verify, sweep, bound.
Exit codes: 0 ok, 1 verification failure, 2 input error, 3 budget exceeded.
JSON output is the machine contract (stable, sorted keys); text output is for
humans and carries no stability promise.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bounds import DetBoundInput, choose_nu, determinant_bound, determinant_bound_exact
from .engine import (
    affine_pipeline,
    choose_delta,
    cover_and_construct,
    _variety_data,
)
from .errors import (
    BudgetExceededError,
    DegenerateIdealError,
    InputError,
    TheoreticalFalsificationError,
)
from .ideals import (
    Ideal,
    a_estimates,
    all_sigmas,
    groebner,
    hilbert_function,
    homogenize_ideal,
    normal_form,
    staircase,
)
from .points import (
    DEFAULT_BUDGET,
    HeightBox,
    enumerate_affine,
    enumerate_projective,
)
from .polynomials import Ordering, Polynomial, format_polynomial, parse_polynomial

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def load_ideal(path):
    """Ideal file: header `vars: k`, then one generator per line; `#` starts
    a comment."""
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read ideal file {path}: {exc}") from exc
    lines = []
    for line in raw.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            lines.append(body)
    if not lines or not lines[0].lower().startswith("vars:"):
        raise InputError(f"{path}: first line must be 'vars: <count>'")
    try:
        num_vars = int(lines[0].split(":", 1)[1])
    except ValueError:
        raise InputError(f"{path}: malformed vars header {lines[0]!r}")
    gens = [parse_polynomial(text, num_vars) for text in lines[1:]]
    if not gens:
        raise InputError(f"{path}: no generators")
    return Ideal(gens, num_vars)


def _ordering(name):
    return Ordering(name)


def _parse_heights(args, num_vars, mode):
    if mode == "affine":
        if args.height is None:
            raise InputError("affine mode needs --height B")
        return Fraction(args.height)
    if args.heights is None:
        if args.height is not None:
            return HeightBox.uniform(Fraction(args.height), num_vars)
        raise InputError("projective mode needs --heights B0,...,Bn")
    parts = [Fraction(p) for p in args.heights.split(",")]
    if len(parts) != num_vars:
        raise InputError(
            f"--heights needs {num_vars} entries, got {len(parts)}"
        )
    return HeightBox(tuple(parts))


def report_json(report, include_timings=False):
    return json.dumps(
        report.to_dict(include_timings=include_timings),
        sort_keys=True,
        indent=2,
    )


# -- subcommands -----------------------------------------------------------


def cmd_hilbert(args):
    ideal = load_ideal(args.ideal)
    ordering = _ordering(args.ordering)
    if args.mode == "affine" or not ideal.homogeneous:
        ideal = homogenize_ideal(ideal)
    gb = groebner(ideal, ordering, degree_cap=args.s_max)
    rows = []
    for s in range(args.s_min, args.s_max + 1):
        hf = hilbert_function(gb, s)
        sig = all_sigmas(gb, s)
        if s >= 1 and hf > 0:
            a = [str(x) for x in a_estimates(gb, s)]
        else:
            a = [None] * ideal.num_vars
        rows.append({"s": s, "hf": hf, "sigma": list(sig), "a": a})
    if args.output == "json":
        print(json.dumps(rows, sort_keys=True, indent=2))
    elif args.output == "csv":
        n = ideal.num_vars
        header = ["s", "hf"] + [f"sigma{i}" for i in range(n)] + [
            f"a{i}" for i in range(n)
        ]
        print(",".join(header))
        for r in rows:
            print(
                ",".join(
                    str(v)
                    for v in [r["s"], r["hf"], *r["sigma"], *(r["a"] or [])]
                )
            )
    else:
        for r in rows:
            a = " ".join(x or "-" for x in r["a"])
            print(f"s={r['s']:3d}  HF={r['hf']:6d}  sigma={r['sigma']}  a=({a})")
    return EXIT_OK


def cmd_points(args):
    ideal = load_ideal(args.ideal)
    if args.mode == "affine":
        b = _parse_heights(args, ideal.num_vars, "affine")
        ps = enumerate_affine(ideal, b, budget=args.budget)
    else:
        box = _parse_heights(args, ideal.num_vars, "projective")
        ps = enumerate_projective(ideal, box, budget=args.budget)
    if args.output == "json":
        print(json.dumps([list(p) for p in ps.points]))
    else:
        for p in ps.points:
            print(" ".join(str(x) for x in p))
    return EXIT_OK


def cmd_construct(args):
    ideal = load_ideal(args.ideal)
    ordering = _ordering(args.ordering)
    if args.delta is None and args.epsilon is None:
        raise InputError("exactly one of --delta / --epsilon is required")
    if args.delta is not None and args.epsilon is not None:
        raise InputError("set only one of --delta / --epsilon")

    if args.mode == "affine":
        b = _parse_heights(args, ideal.num_vars, "affine")
        report = affine_pipeline(
            ideal,
            b,
            delta=args.delta,
            epsilon=args.epsilon,
            ordering=ordering,
            strategy=args.strategy,
            norm_bound=args.norm_bound,
            budget=args.budget,
        )
    else:
        if not ideal.homogeneous:
            raise InputError("projective mode needs a homogeneous ideal")
        box = _parse_heights(args, ideal.num_vars, "projective")
        delta = args.delta
        if delta is None:
            _, dd = _variety_data(ideal, ordering, None)
            delta, _rep = choose_delta(
                ideal, args.epsilon, dd.degree, dd.dimension, ordering
            )
        report = cover_and_construct(
            ideal,
            box,
            delta,
            ordering=ordering,
            strategy=args.strategy,
            norm_bound=args.norm_bound,
            budget=args.budget,
            epsilon=args.epsilon,
        )
    text = report_json(report, include_timings=args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def verify_report_dict(data, ideal):
    """Re-verify a stored report against the ideal file, trusting nothing."""
    failures = []
    params = data["params"]
    ordering = Ordering(params["ordering"])
    delta = params["delta"]
    mode = params["mode"]
    heights = [Fraction(str(h)) for h in params["heights"]]

    if mode == "affine":
        ih = homogenize_ideal(ideal)
        expected = tuple(
            (1,) + p
            for p in enumerate_affine(ideal, heights[1]).points
        )
    else:
        ih = ideal
        expected = enumerate_projective(ideal, HeightBox(tuple(heights))).points

    gb = groebner(ih, ordering, degree_cap=max(delta, 9))
    sc = staircase(gb, delta)
    allowed = set(sc.exponents)

    covered = set()
    for k, cert in enumerate(data["certificates"]):
        poly = parse_polynomial(cert["poly"], ih.num_vars)
        if poly.is_zero():
            failures.append(f"certificate {k}: zero polynomial")
            continue
        if not poly.integer_coefficients():
            failures.append(f"certificate {k}: non-integer coefficients")
        for e in poly.support():
            if e not in allowed:
                failures.append(
                    f"certificate {k}: support monomial {e} lies in LT(I)"
                )
                break
        for p in cert["points"]:
            p = tuple(p)
            if p not in set(expected):
                failures.append(f"certificate {k}: point {p} not in S(X,B)")
                continue
            if poly.evaluate(p) != 0:
                failures.append(f"certificate {k}: does not vanish at {p}")
            covered.add(p)
        if normal_form(poly, gb).is_zero():
            failures.append(f"certificate {k}: lies in the ideal")

    missing = set(expected) - covered
    if missing:
        failures.append(f"coverage failure: {len(missing)} uncovered points")
    return failures


def cmd_verify(args):
    ideal = load_ideal(args.ideal)
    try:
        with open(args.report) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report {args.report}: {exc}") from exc
    failures = verify_report_dict(data, ideal)
    if failures:
        for f in failures:
            print(f"FAIL: {f}")
        return EXIT_VERIFY
    print(f"PASS: {len(data['certificates'])} certificates verified")
    return EXIT_OK


def cmd_sweep(args):
    ideal = load_ideal(args.ideal)
    ordering = _ordering(args.ordering)
    heights = [Fraction(h) for h in args.height_list.split(",")]
    print("B,N,certificates,k_actual,k_bound")
    for b in heights:
        report = affine_pipeline(
            ideal,
            b,
            delta=args.delta,
            epsilon=args.epsilon if args.delta is None else None,
            ordering=ordering,
            strategy=args.strategy,
            budget=args.budget,
        )
        n_pts = len(report.affine_points)
        print(
            f"{b},{n_pts},{len(report.certificates)},"
            f"{report.k_actual},{report.k_bound_value:.6g}"
        )
    return EXIT_OK


def cmd_bound(args):
    norms = tuple(Fraction(x) for x in args.norms.split(","))
    inp = DetBoundInput(mu=args.mu, m=args.m, norms=norms, r=Fraction(args.r))
    budget = choose_nu(args.mu, args.m)
    log_bound = determinant_bound(inp)
    out = {
        "mu": args.mu,
        "m": args.m,
        "nu": budget.nu,
        "e": budget.e,
        "log_bound": log_bound,
        "bound": None if log_bound == float("-inf") else float(
            determinant_bound_exact(inp)
        ),
    }
    if args.output == "json":
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print(
            f"mu={out['mu']} m={out['m']} nu={out['nu']} e={out['e']} "
            f"bound={out['bound']} (log {out['log_bound']:.6g})"
        )
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def _add_common(p):
    p.add_argument("--ideal", required=True, help="ideal file")
    p.add_argument("--mode", choices=["affine", "projective"], default="affine")
    p.add_argument("--height", help="uniform height bound B")
    p.add_argument("--heights", help="comma-separated B0,...,Bn")
    p.add_argument(
        "--ordering",
        choices=[o.value for o in Ordering],
        default=Ordering.GRLEX_LEFT.value,
    )
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1, help="worker cap (advisory)")
    p.add_argument("--seed", type=int, default=0, help="seed for property suites")
    p.add_argument("--output", choices=["json", "csv", "text"], default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="detmethod",
        description="Auxiliary polynomials for integral/rational points of "
        "bounded height, with verifiable certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", help="Hilbert function / sigma / a_i table")
    _add_common(p)
    p.add_argument("--s-min", type=int, default=1)
    p.add_argument("--s-max", type=int, default=8)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("points", help="enumerate points of bounded height")
    _add_common(p)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("construct", help="build certified auxiliary polynomials")
    _add_common(p)
    p.add_argument("--delta", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument(
        "--strategy", choices=["adaptive", "theoretical"], default="adaptive"
    )
    p.add_argument("--norm-bound", type=float)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument(
        "--timings",
        action="store_true",
        help="include timings (breaks byte-for-byte reproducibility)",
    )
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-verify a stored report")
    p.add_argument("--report", required=True)
    p.add_argument("--ideal", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="height sweep, CSV summary")
    _add_common(p)
    p.add_argument("--height-list", required=True, help="comma-separated Bs")
    p.add_argument("--delta", type=int)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument(
        "--strategy", choices=["adaptive", "theoretical"], default="adaptive"
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="determinant bound calculator")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--norms", required=True, help="comma-separated norms")
    p.add_argument("--r", required=True, help="box diameter in (0,1)")
    p.add_argument("--output", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, DegenerateIdealError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, TheoreticalFalsificationError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
