"""Command-line front end.

Exit codes: 0 fit found / verified, 1 no fit / refuted, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .convexfit import SearchLog, exact_fit_convex
from .corpus import random_corpus
from .nets import Activation, is_exact_fit, residuals
from .oracle import brute_force_fit_lt, brute_force_fit_relu
from .reductions import (DEMO_FORMULA, DEMO_TRUE, hsep_reduction, hsep_solution_network,
                         poits_reduction, poits_reduction_lt, poits_solution_lt,
                         poits_solution_network)

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _digest(inst) -> dict:
    return {"n": inst.n, "d": inst.dim, "k": inst.k, "gamma": io.rat(inst.gamma),
            "activation": inst.activation.value}


def _residual_table(net, inst, nonzero_only=True) -> list:
    return [{"point": i, "x": [io.rat(v) for v in p.x], "y": io.rat(p.y), "residual": io.rat(r)}
            for i, (p, r) in enumerate(zip(inst.points, residuals(net, inst)))
            if r or not nonzero_only]


def _emit(report: dict):
    print(json.dumps(report, indent=1))


def cmd_gen_poits(args) -> int:
    formula = io.formula_from_dict(io.read_json(args.formula))
    if args.activation == "lt":
        inst = poits_reduction_lt(formula)
    else:
        inst = poits_reduction(formula)
    io.write_json(args.out, io.instance_to_dict(inst))
    print(f"wrote {args.out}: {inst.n} points, k={inst.k}, activation={inst.activation.value}")
    return EXIT_OK


def cmd_gen_hsep(args) -> int:
    data = io.hsep_from_dict(io.read_json(args.points))
    inst = hsep_reduction(data)
    io.write_json(args.out, io.instance_to_dict(inst))
    print(f"wrote {args.out}: {inst.n} points, d={inst.dim}, k={inst.k}")
    return EXIT_OK


def cmd_witness(args) -> int:
    source = io.read_json(args.input)
    if "clauses" in source:
        if args.witness is None:
            raise CliError("a formula needs an assignment file {\"T\": [...]}")
        formula = io.formula_from_dict(source)
        true_vars = io.assignment_from_dict(io.read_json(args.witness))
        if args.activation == "lt":
            net = poits_solution_lt(formula, true_vars, check=not args.unchecked)
        else:
            net = poits_solution_network(formula, true_vars, check=not args.unchecked)
    elif "Q" in source:
        data = io.hsep_from_dict(source)
        if args.witness is not None:
            data = type(data)(data.Q, data.P, io.witness_from_dict(io.read_json(args.witness)))
        if data.witness is None:
            raise CliError("no hyperplane witness given")
        net = hsep_solution_network(data)
    else:
        raise CliError(f"{args.input} is neither a formula nor a separability input")
    io.write_json(args.out, io.network_to_dict(net))
    print(f"wrote {args.out}: {net.k} units")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = io.instance_from_dict(io.read_json(args.instance))
    log = None
    start = time.perf_counter()
    if args.method == "convex":
        if inst.activation is not Activation.RELU:
            raise CliError("method 'convex' needs a ReLU instance")
        log = SearchLog()
        net = exact_fit_convex(inst, log)
    elif inst.activation is Activation.RELU:
        net = brute_force_fit_relu(inst, convex_only=args.convex_only)
    else:
        net = brute_force_fit_lt(inst)
    elapsed = time.perf_counter() - start
    report = {
        "command": args.echo,
        "instance": _digest(inst),
        "method": args.method,
        "verdict": "fit-found" if net is not None else "no-fit",
        "witness": None,
        "residuals": [],
        "wall_time": round(elapsed, 6),
    }
    if log is not None:
        report["search"] = log.stats()
        if args.log:
            io.write_json(args.log, {"stats": log.stats(), "events": log.events})
    if net is not None:
        report["residuals"] = _residual_table(net, inst, nonzero_only=False)
        if args.out:
            io.write_json(args.out, io.network_to_dict(net))
            report["witness"] = str(args.out)
    _emit(report)
    return EXIT_OK if net is not None else EXIT_NO


def cmd_verify(args) -> int:
    inst = io.instance_from_dict(io.read_json(args.instance))
    net = io.network_from_dict(io.read_json(args.network))
    if net.activation is not inst.activation:
        raise CliError(f"{net.activation.value} network cannot be checked "
                       f"against a {inst.activation.value} instance")
    if net.dim != inst.dim:
        raise CliError(f"network dimension {net.dim} != instance dimension {inst.dim}")
    start = time.perf_counter()
    ok = is_exact_fit(net, inst)
    report = {
        "command": args.echo,
        "instance": _digest(inst),
        "verdict": "verified" if ok else "refuted",
        "witness": str(args.network),
        "residuals": _residual_table(net, inst),
        "wall_time": round(time.perf_counter() - start, 6),
    }
    _emit(report)
    return EXIT_OK if ok else EXIT_NO


def cmd_demo(args) -> int:
    if args.target == "fig4":
        return _demo_fig4(args)
    return _demo_crosscheck(args)


def _demo_fig4(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "fig4_formula.json", io.formula_to_dict(DEMO_FORMULA))
    io.write_json(out / "fig4_assignment.json", {"T": list(DEMO_TRUE)})
    ok = True
    for act, gen, sol in (("relu", poits_reduction, poits_solution_network),
                          ("lt", poits_reduction_lt, poits_solution_lt)):
        inst = gen(DEMO_FORMULA)
        net = sol(DEMO_FORMULA, DEMO_TRUE)
        io.write_json(out / f"fig4_{act}_instance.json", io.instance_to_dict(inst))
        io.write_json(out / f"fig4_{act}_network.json", io.network_to_dict(net))
        fits = is_exact_fit(net, inst)
        ok &= fits
        print(f"{act}: {inst.n} points, k={inst.k}, witness T={list(DEMO_TRUE)} "
              f"{'fits exactly' if fits else 'DOES NOT FIT'}")
    return EXIT_OK if ok else EXIT_NO


def _demo_crosscheck(args) -> int:
    agree = 0
    for idx, inst in enumerate(random_corpus(args.seed, args.count)):
        fast = exact_fit_convex(inst)
        slow = brute_force_fit_relu(inst, convex_only=True)
        same = (fast is None) == (slow is None)
        agree += same
        if not same:
            print(f"instance {idx}: ExactFit={fast is not None} oracle={slow is not None}")
    print(f"seed {args.seed}: {agree}/{args.count} verdicts agree")
    return EXIT_OK if agree == args.count else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactrelu",
                                     description="Exact training of two-layer ReLU / threshold networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-poits", help="instance from a one-in-three 3-SAT formula")
    p.add_argument("formula")
    p.add_argument("--activation", choices=["relu", "lt"], default="relu")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_poits)

    p = sub.add_parser("gen-hsep", help="4-ReLU instance from a separability input")
    p.add_argument("points")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_hsep)

    p = sub.add_parser("witness", help="witness network for a formula or separability input")
    p.add_argument("input")
    p.add_argument("witness", nargs="?", help="assignment {\"T\": [...]} or hyperplanes")
    p.add_argument("--activation", choices=["relu", "lt"], default="relu")
    p.add_argument("--unchecked", action="store_true",
                   help="build the formula network even if the assignment is no solution")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("solve", help="decide exact fit and emit a witness")
    p.add_argument("instance")
    p.add_argument("--method", choices=["convex", "brute"], default="convex")
    p.add_argument("--convex-only", action="store_true",
                   help="brute force over a = (+1, ..., +1) only")
    p.add_argument("--out", help="network JSON path for a found fit")
    p.add_argument("--log", help="search-log JSON path (convex method)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a network against an instance")
    p.add_argument("instance")
    p.add_argument("network")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="fig4 reproduction or a random cross-check")
    p.add_argument("target", choices=["fig4", "crosscheck"])
    p.add_argument("--out-dir", default="fig4_out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    args.echo = " ".join(["exactrelu", *(sys.argv[1:] if argv is None else argv)])
    try:
        return args.func(args)
    except (CliError, ValueError, ZeroDivisionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
