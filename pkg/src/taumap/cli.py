"""Command-line front end.

Subcommands:

``coeffs``
    dump the coefficient table for all keys up to a weight bound;
``potential``
    build the potential at a policy and emit it as JSON;
``map``
    reconstruct the exterior map from a moment-vector JSON;
``moments``
    compute harmonic moments of a boundary-curve JSON;
``verify``
    run the exact verification suite (nonzero exit on gated failure);
``ellipse``
    compare the built potential against the closed form of the
    two-moment family.

All outputs are deterministic for a fixed config and seed: JSON is emitted
with sorted keys and floats use ``repr`` round-trip formatting.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from math import factorial

from .coefficients import (
    DEFAULT_WEIGHT_RULE,
    MemoCache,
    NKey,
    bounded_compositions_count,
    bounded_partitions,
    n2_coefficient,
)
from .confmap import MomentVector, map_from_potential
from .moments import (
    BoundaryCurve,
    curve_from_json,
    moments_from_curve,
    moments_to_csv,
    v_moments_from_curve,
)
from .potential import (
    build_potential,
    cauchy_data_check,
    default_policy,
    ellipse_oracle_check,
)
from .series import series_to_json_terms
from .verify import (
    convergence_gate,
    factorial_pattern_check,
    roundtrip,
    toda_residual_a,
    toda_residual_b,
    toda_residual_c,
)

__all__ = ["main", "build_parser"]


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _policy_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nmax", type=int, default=4, help="max moment index")
    parser.add_argument("--degmax", type=int, default=4, help="max factor degree")
    parser.add_argument(
        "--t0max",
        type=int,
        default=None,
        help="max t0 exponent (default: large enough to never truncate)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taumap",
        description="Exterior conformal maps from harmonic moments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="dump the coefficient table")
    p.add_argument("--imax", type=int, default=4, help="max weight")
    p.add_argument("--degmax", type=int, default=6, help="max factor degree")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("potential", help="build and emit the potential")
    _policy_args(p)
    p.add_argument("--out", default=None)
    p.add_argument(
        "--format",
        choices=["json", "csv"],
        default="json",
        help="csv emits per-term plot data (degree vs coefficient magnitude)",
    )

    p = sub.add_parser("map", help="exterior map from a moment vector")
    _policy_args(p)
    p.add_argument("--in", dest="in_path", required=True, help="moment JSON")
    p.add_argument("--order-J", dest="order_j", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("moments", help="harmonic moments of a boundary curve")
    p.add_argument("--in", dest="in_path", required=True, help="curve JSON")
    p.add_argument("--n", type=int, default=4, help="number of moments")
    p.add_argument("--samples", type=int, default=None, help="override curve samples")
    p.add_argument("--dual", action="store_true", help="also emit dual moments v_k")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("verify", help="run the verification suite")
    _policy_args(p)
    p.add_argument("--order", type=int, default=None, help="residual order")
    p.add_argument("--in", dest="in_path", default=None, help="optional curve JSON")
    p.add_argument("--order-J", dest="order_j", type=int, default=None)
    p.add_argument("--roundtrip-tol", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled bound checks")
    p.add_argument("--out", default=None)

    p = sub.add_parser("ellipse", help="compare against the two-moment closed form")
    _policy_args(p)
    p.add_argument("--out", default=None)

    return parser


# -- subcommand bodies --------------------------------------------------------


def _cmd_coeffs(args) -> int:
    rows = []
    cache = MemoCache()
    for weight in range(1, args.imax + 1):
        sides = list(bounded_partitions(weight, weight, args.degmax - 1))
        for unbarred in sides:
            for barred in sides:
                deg = sum(m for _, m in unbarred) + sum(m for _, m in barred)
                if deg > args.degmax:
                    continue
                value = n2_coefficient(
                    NKey(unbarred, barred, weight), DEFAULT_WEIGHT_RULE, cache
                )
                rows.append((weight, unbarred, barred, value))

    def pairs(side) -> str:
        return " ".join(f"{idx}:{mult}" for idx, mult in side)

    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["i", "unbarred", "barred", "num", "den"])
        for weight, unb, bar, value in rows:
            writer.writerow(
                [weight, pairs(unb), pairs(bar), value.numerator, value.denominator]
            )
        _write_text(args.out, buf.getvalue())
    else:
        payload = [
            {
                "i": weight,
                "unbarred": [list(p) for p in unb],
                "barred": [list(p) for p in bar],
                "num": value.numerator,
                "den": value.denominator,
            }
            for weight, unb, bar, value in rows
        ]
        _write_text(args.out, _dump_json(payload))
    return 0


def _cmd_potential(args) -> int:
    policy = default_policy(args.nmax, args.degmax, args.t0max)
    potential, report = build_potential(policy)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["degree", "t0_power", "monomial", "num", "den", "abs"])
        for mono, coeff in potential.regular.sorted_items():
            writer.writerow(
                [
                    mono.degree,
                    mono.t0_power,
                    str(mono),
                    coeff.numerator,
                    coeff.denominator,
                    repr(abs(float(coeff))),
                ]
            )
        _write_text(args.out, buf.getvalue())
        return 0
    payload = {
        "policy": {
            "n_max": policy.n_max,
            "deg_max": policy.deg_max,
            "t0_max": policy.t0_max,
        },
        "singular": {
            "log_t0_coeff": [
                potential.singular_log_coeff.numerator,
                potential.singular_log_coeff.denominator,
            ],
            "quad_coeff": [
                potential.singular_quad_coeff.numerator,
                potential.singular_quad_coeff.denominator,
            ],
        },
        "terms": series_to_json_terms(potential.regular),
        "report": {
            "keys_evaluated": report.keys_evaluated,
            "nonzero_terms": report.nonzero_terms,
        },
    }
    _write_text(args.out, _dump_json(payload))
    return 0


def _cmd_map(args) -> int:
    moments = MomentVector.from_json(_read_json(args.in_path))
    policy = default_policy(args.nmax, args.degmax, args.t0max)
    potential, _ = build_potential(policy)
    order = args.order_j if args.order_j is not None else policy.n_max + policy.deg_max
    w = map_from_potential(potential, moments, order)
    _write_text(args.out, _dump_json(w.to_json()))
    return 0


def _cmd_moments(args) -> int:
    curve = curve_from_json(_read_json(args.in_path))
    if args.samples is not None:
        curve = BoundaryCurve(curve.r, curve.a, args.samples)
    moments = moments_from_curve(curve, args.n)
    if args.format == "csv":
        _write_text(args.out, moments_to_csv(moments))
        return 0
    payload = moments.to_json()
    if args.dual:
        payload["v"] = [[v.real, v.imag] for v in v_moments_from_curve(curve, args.n)]
    _write_text(args.out, _dump_json(payload))
    return 0


def _cmd_verify(args) -> int:
    policy = default_policy(args.nmax, args.degmax, args.t0max)
    order = args.order if args.order is not None else min(policy.n_max, policy.deg_max)
    cache = MemoCache()
    potential, build = build_potential(policy, cache=cache)

    checks: dict[str, dict] = {}

    cauchy = cauchy_data_check(potential, policy.n_max)
    checks["cauchy_data"] = {
        "pass": cauchy.ok,
        "checked": cauchy.checked,
        "violations": cauchy.violations,
    }

    if policy.n_max >= 2:
        ell = ellipse_oracle_check(potential)
        checks["ellipse_closed_form"] = {
            "pass": ell.ok,
            "checked": ell.checked,
            "violations": ell.mismatches,
        }

    pattern = factorial_pattern_check(min(6, policy.n_max + 2), cache=cache)
    checks["factorial_pattern"] = {
        "pass": pattern.ok,
        "checked": pattern.checked,
        "violations": pattern.violations,
    }

    res_a = toda_residual_a(potential, order)
    res_c = toda_residual_c(potential, order)
    res_b = toda_residual_b(potential)
    checks["residual_a"] = {
        "pass": res_a.ok,
        "violations": res_a.cone_violations,
        "max_abs_out_of_cone": res_a.max_abs_out_of_cone,
    }
    checks["residual_c"] = {
        "pass": res_c.ok,
        "violations": res_c.cone_violations,
        "max_abs_out_of_cone": res_c.max_abs_out_of_cone,
    }
    checks["residual_b_symmetry"] = {"pass": res_b.ok, "violations": res_b.mismatches}

    # sampled bound check of the composition count: P <= C(i-1, m-1)
    rng = random.Random(args.seed)
    bad = []
    for _ in range(200):
        m = rng.randint(1, 5)
        s = tuple(rng.randint(1, 8) for _ in range(m))
        i = rng.randint(1, max(1, sum(s) - 1))
        j = sum(s) - i
        if j < 1:
            continue
        count = bounded_compositions_count(i, s, j, cache)
        limit = min(_comb(i - 1, m - 1), _comb(j - 1, m - 1))
        if count > limit:
            bad.append(f"P({i},{s}) = {count} > {limit}")
    checks["composition_count_bound"] = {"pass": not bad, "violations": bad}

    if args.in_path:
        curve = curve_from_json(_read_json(args.in_path))
        order_j = (
            args.order_j if args.order_j is not None else policy.n_max + policy.deg_max
        )
        rt = roundtrip(curve, policy, order_j, 1.25, cache=cache)
        checks["roundtrip"] = {
            "pass": rt.sup_error <= args.roundtrip_tol,
            "sup_error": rt.sup_error,
            "tolerance": args.roundtrip_tol,
            "gate_admissible": rt.gate.admissible,
            "warnings": rt.warnings,
        }
        gate = convergence_gate(rt.moments, policy.n_max)
        checks["convergence_gate"] = {
            "pass": True,
            "admissible": gate.admissible,
            "bound": gate.bound,
            "offending": gate.offending,
        }

    ok = all(entry["pass"] for entry in checks.values())
    report = {
        "policy": {
            "n_max": policy.n_max,
            "deg_max": policy.deg_max,
            "t0_max": policy.t0_max,
        },
        "order": order,
        "build": {
            "keys_evaluated": build.keys_evaluated,
            "nonzero_terms": build.nonzero_terms,
        },
        "checks": checks,
        "pass": ok,
    }
    _write_text(args.out, _dump_json(report))
    for name in sorted(checks):
        status = "PASS" if checks[name]["pass"] else "FAIL"
        print(f"{status} {name}", file=sys.stderr)
    return 0 if ok else 1


def _comb(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def _cmd_ellipse(args) -> int:
    if args.nmax < 2:
        print("ellipse comparison needs --nmax >= 2", file=sys.stderr)
        return 2
    policy = default_policy(args.nmax, args.degmax, args.t0max)
    potential, _ = build_potential(policy)
    report = ellipse_oracle_check(potential)
    payload = {
        "pass": report.ok,
        "checked": report.checked,
        "mismatches": report.mismatches,
    }
    _write_text(args.out, _dump_json(payload))
    return 0 if report.ok else 1


_HANDLERS = {
    "coeffs": _cmd_coeffs,
    "potential": _cmd_potential,
    "map": _cmd_map,
    "moments": _cmd_moments,
    "verify": _cmd_verify,
    "ellipse": _cmd_ellipse,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, ArithmeticError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
