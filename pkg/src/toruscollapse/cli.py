"""Command-line interface.

Subcommands: collapse, simulate, stationary, sample-invariant, rate-eval,
minimizer, ldp-decay, certify-nonconvex, suite.  Rationals are accepted and
emitted as "p/q" strings; every stochastic command takes an explicit seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .collapse import collapse_discrete_flux, collapse_k, flux_profile, point_flux
from .dynamics import (
    ProcessSpec,
    exact_stationary,
    had_simulate,
    pushforward_distribution,
    sample_invariant,
    tasep_simulate,
)
from .lattice import class_label_encode
from .measures import frac
from .rate import (
    EntropyKernel,
    ldp_decay_exact,
    minimizer_rho1,
    minimizer_rho2,
    nonconvexity_certificate,
    s1,
    s2,
)
from .serialize import (
    dump_json,
    flux_to_json,
    measure_from_json,
    measure_to_json,
    part_from_json,
    part_to_json,
    rows_to_csv,
)
from .suites import SUITES, SuiteConfig, run_all, run_suite


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(args, obj, rows=None):
    """Write JSON (default) or CSV rows to --out or stdout."""
    if args.format == "csv" and rows is not None:
        text = rows_to_csv(rows)
    else:
        text = dump_json(obj)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"{args.command}.{args.format}")
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(path)
    else:
        print(text)


def _parse_classes(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text.split(",") if c != "")


def cmd_collapse(args) -> int:
    payload = _read_json(args.input)
    parts = [part_from_json(p) for p in payload["parts"]]
    out = list(collapse_k(parts))
    result = {"parts": [part_to_json(p) for p in out]}
    if len(parts) == 2:
        if args.regime == "measure":
            prof = flux_profile(parts[0], parts[1])
        elif args.regime == "points":
            prof = point_flux(parts[0], parts[1])
        else:
            prof = collapse_discrete_flux(parts[0], parts[1])[1]
        result["flux"] = flux_to_json(prof)
    _emit(args, result)
    return 0


def cmd_simulate(args) -> int:
    rng = random.Random(args.seed)
    counts = _parse_classes(args.classes)
    if args.model == "tasep":
        spec = ProcessSpec("tasep", counts, n=args.n)
        start = sample_invariant(spec, rng)
        labels = class_label_encode(list(start))
        final, events = tasep_simulate(labels, spec.k, args.horizon, rng, record=True)
        rows = [
            {"time": f"{t:.6f}", "event": x, "labels": "".join(map(str, lab))}
            for t, x, lab in events
        ]
        obj = {
            "model": "tasep",
            "final_labels": list(final),
            "events": rows if args.record else len(events),
        }
    else:
        spec = ProcessSpec("had", counts)
        start = sample_invariant(spec, rng)
        final, events = had_simulate(list(start), args.horizon, rng, record=True)
        rows = [{"time": f"{t:.6f}", "event": str(u), "labels": ""} for t, u in events]
        obj = {
            "model": "had",
            "final_layers": [[str(p) for p in layer.points] for layer in final],
            "events": rows if args.record else len(events),
        }
    _emit(args, obj, rows if args.record else None)
    return 0


def cmd_stationary(args) -> int:
    spec = ProcessSpec("tasep", _parse_classes(args.classes), n=args.n)
    table = exact_stationary(spec)
    obj = table.to_json_dict()
    if args.compare_pushforward:
        push = pushforward_distribution(spec)
        obj["pushforward_tv_distance"] = str(table.tv_distance(push))
    rows = [
        {"state": "".join(map(str, s)), "probability": str(p)}
        for s, p in table.items()
    ]
    _emit(args, obj, rows)
    return 0


def cmd_sample_invariant(args) -> int:
    rng = random.Random(args.seed)
    counts = _parse_classes(args.classes)
    spec = (
        ProcessSpec("tasep", counts, n=args.n)
        if args.model == "tasep"
        else ProcessSpec("had", counts)
    )
    samples = []
    for _ in range(args.samples):
        drawn = sample_invariant(spec, rng)
        if args.model == "tasep":
            samples.append("".join(map(str, class_label_encode(list(drawn)))))
        else:
            samples.append([[str(p) for p in layer.points] for layer in drawn])
    _emit(args, {"model": args.model, "samples": samples})
    return 0


def cmd_rate_eval(args) -> int:
    if args.rho2 is None:
        rho = measure_from_json(_read_json(args.rho1))
        kernel = EntropyKernel(args.family, frac(args.m1))
        _emit(args, {"s1": s1(rho, kernel)})
        return 0
    rho1 = measure_from_json(_read_json(args.rho1))
    rho2 = measure_from_json(_read_json(args.rho2))
    res = s2(rho1, rho2, frac(args.m1), frac(args.m2), args.family, eq_tol=frac(args.eq_tol))
    obj = {
        "value": res.value,
        "finite": res.finite,
        "exact_zero": res.exact_zero,
        "diagonal": res.diagonal,
        "complement_integral": res.complement_integral,
        "plateau_integrals": list(res.plateau_integrals),
        "second_layer_integral": res.second_layer_integral,
        "plateaus": [
            {"lo": str(a.lo), "hi": str(a.hi)} for a in res.plateau.intervals
        ]
        if res.plateau
        else None,
        "envelope_densities": [measure_to_json(e) for e in res.envelope_densities],
    }
    rows = None
    if args.format == "csv" and res.plateau and not res.diagonal:
        from .measures import concave_envelope, cumulative

        rows = []
        for arc in res.plateau.intervals:
            F = cumulative(rho1, arc)
            env = concave_envelope(F)
            for t, v in F.knots:
                rows.append({"interval_start": str(arc.lo), "kind": "cumulative", "offset": str(t), "value": str(v)})
            for t, v in env.knots:
                rows.append({"interval_start": str(arc.lo), "kind": "envelope", "offset": str(t), "value": str(v)})
    _emit(args, obj, rows)
    return 0


def cmd_minimizer(args) -> int:
    rho = measure_from_json(_read_json(args.profile))
    if args.which == "first":
        out = minimizer_rho1(rho, frac(args.mass), args.family)
    else:
        out = minimizer_rho2(rho, frac(args.mass))
    _emit(args, measure_to_json(out))
    return 0


def cmd_ldp_decay(args) -> int:
    dens = [frac(x) for x in args.bins.split(",")]
    sizes = [int(x) for x in args.sizes.split(",")]
    rows = ldp_decay_exact(dens, frac(args.m), sizes)
    _emit(args, {"rows": rows}, rows)
    return 0


def cmd_certify_nonconvex(args) -> int:
    cert = nonconvexity_certificate()
    obj = {
        "margins": {str(c): v for c, v in cert["margins"].items()},
        "most_negative": cert["most_negative"],
        "limit_defect": cert["limit_defect"],
        "nonconvex": cert["most_negative"] < 0,
    }
    _emit(args, obj)
    return 0


def cmd_suite(args) -> int:
    overrides = json.loads(args.overrides) if args.overrides else {}
    out_dir = args.out or os.environ.get("TORUSCOLLAPSE_OUT")
    if args.name == "all":
        reports = run_all(seed=args.seed, threads=args.threads, out_dir=out_dir, overrides=overrides)
    else:
        reports = [
            run_suite(
                SuiteConfig(
                    suite=args.name,
                    seed=args.seed,
                    threads=args.threads,
                    out_dir=out_dir,
                    overrides=overrides,
                )
            )
        ]
    failed = 0
    for rep in reports:
        for c in rep.checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"[{mark}] {c.check_id}: {c.statistic} (target {c.threshold})")
            failed += not c.passed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="toruscollapse",
        description="Collapsing constructions and rate functionals on the torus",
    )
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("collapse", parents=[common], help="collapse a JSON tuple")
    c.add_argument("input", help="JSON file with {'parts': [...]} or - for stdin")
    c.add_argument("--regime", choices=("discrete", "points", "measure"), default="measure")
    c.set_defaults(fn=cmd_collapse)

    c = sub.add_parser("simulate", parents=[common], help="run the dynamics")
    c.add_argument("--model", choices=("tasep", "had"), required=True)
    c.add_argument("--n", type=int, default=None, help="ring size (tasep)")
    c.add_argument("--classes", required=True, help="comma list of class counts")
    c.add_argument("--horizon", type=float, default=10.0)
    c.add_argument("--record", action="store_true")
    c.set_defaults(fn=cmd_simulate)

    c = sub.add_parser("stationary", parents=[common], help="exact stationary table")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--classes", required=True)
    c.add_argument("--compare-pushforward", action="store_true")
    c.set_defaults(fn=cmd_stationary)

    c = sub.add_parser("sample-invariant", parents=[common], help="draw invariant states")
    c.add_argument("--model", choices=("tasep", "had"), required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--classes", required=True)
    c.add_argument("--samples", type=int, default=1)
    c.set_defaults(fn=cmd_sample_invariant)

    c = sub.add_parser("rate-eval", parents=[common], help="evaluate rate functionals")
    c.add_argument("--family", choices=("tasep", "had"), default="tasep")
    c.add_argument("--rho1", required=True, help="measure JSON file")
    c.add_argument("--rho2", default=None, help="optional second measure JSON file")
    c.add_argument("--m1", required=True)
    c.add_argument("--m2", default=None)
    c.add_argument("--eq-tol", default="0", help="relative tolerance for plateau detection")
    c.set_defaults(fn=cmd_rate_eval)

    c = sub.add_parser("minimizer", parents=[common], help="explicit rate minimizers")
    c.add_argument("--which", choices=("first", "total"), required=True)
    c.add_argument("--profile", required=True, help="measure JSON file")
    c.add_argument("--mass", required=True)
    c.add_argument("--family", choices=("tasep", "had"), default="tasep")
    c.set_defaults(fn=cmd_minimizer)

    c = sub.add_parser("ldp-decay", parents=[common], help="exact decay vs rate")
    c.add_argument("--bins", required=True, help="comma list of bin densities")
    c.add_argument("--m", required=True)
    c.add_argument("--sizes", default="100,1000,10000")
    c.set_defaults(fn=cmd_ldp_decay)

    c = sub.add_parser("certify-nonconvex", parents=[common], help="convexity margins")
    c.set_defaults(fn=cmd_certify_nonconvex)

    c = sub.add_parser("suite", parents=[common], help="run a verification suite")
    c.add_argument("name", choices=sorted(SUITES) + ["all"])
    c.add_argument("--overrides", default=None, help="JSON dict of size overrides")
    c.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
