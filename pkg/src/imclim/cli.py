"""Command-line front end: analyze, orbit, graph and decompose subcommands.

Exit codes of ``analyze``: 0 when the operator is convergent, 2 when it is
not, 3 when the check is inconclusive, 1 on any error.  Set ``IMC_LOG`` to a
logging level name (e.g. ``debug``) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .errors import ImclimError
from .modelio import load_model, parse_rational, write_orbit_trace
from .graphs import build_graph, communication_classes, to_dot
from .orbits import OrbitParams, iterate_orbit
from .report import analyze

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGENT = 2
EXIT_INCONCLUSIVE = 3

log = logging.getLogger("imclim")


def _orbit_params(args, keep_trace: bool = False) -> OrbitParams:
    return OrbitParams(
        tolerance=args.tolerance,
        burn_in=args.burn_in,
        max_iters=args.max_iters,
        max_period=args.max_period,
        keep_trace=keep_trace,
    )


def _add_orbit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=1e-9,
                        help="max-norm tolerance for cycle detection (default 1e-9)")
    parser.add_argument("--max-iters", type=int, default=5000,
                        help="iteration budget (default 5000)")
    parser.add_argument("--max-period", type=int, default=64,
                        help="largest cycle length scanned for (default 64)")
    parser.add_argument("--burn-in", type=int, default=200,
                        help="iterations before detection may fire (default 200)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for random suite functions (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imclim",
        description="Decide whether all orbits of an upper transition operator converge.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="full pipeline with verdicts")
    p_analyze.add_argument("model", help="model file path or builtin:NAME")
    p_analyze.add_argument("--json", action="store_true", help="emit the JSON report")
    p_analyze.add_argument("--suite", type=int, default=None, metavar="N",
                           help="also run the orbit suite with N extra random functions")
    _add_orbit_flags(p_analyze)

    p_orbit = sub.add_parser("orbit", help="iterate one function numerically")
    p_orbit.add_argument("model", help="model file path or builtin:NAME")
    p_orbit.add_argument("--function", "-f", required=True,
                         help='start function: "0,1,0", a state label (indicator), or "random:SEED"')
    p_orbit.add_argument("--json", action="store_true", help="emit the result as JSON")
    p_orbit.add_argument("--trace", metavar="CSV",
                         help="write the full orbit trace to this CSV file")
    _add_orbit_flags(p_orbit)

    p_graph = sub.add_parser("graph", help="accessibility graph")
    p_graph.add_argument("model", help="model file path or builtin:NAME")
    p_graph.add_argument("--dot", action="store_true", help="emit DOT text")

    p_dec = sub.add_parser("decompose", help="level-by-level decomposition")
    p_dec.add_argument("model", help="model file path or builtin:NAME")
    p_dec.add_argument("--json", action="store_true", help="emit JSON")

    return parser


def _parse_function(spec: str, op) -> np.ndarray:
    spec = spec.strip()
    if spec.startswith("random:"):
        seed = int(spec.split(":", 1)[1])
        return np.random.default_rng(seed).random(op.n)
    if "," in spec:
        parts = [s.strip() for s in spec.split(",")]
        values = []
        for part in parts:
            try:
                values.append(float(part))
            except ValueError:
                values.append(float(parse_rational(part, where="function entry")))
        if len(values) != op.n:
            raise ImclimError(
                f"function has {len(values)} entries, the model has {op.n} states"
            )
        return np.array(values)
    index = op.space.index(spec)
    vec = np.zeros(op.n)
    vec[index] = 1.0
    return vec


def _set_to_str(labels) -> str:
    return "{" + ", ".join(labels) + "}"


def _cmd_analyze(args) -> int:
    op = load_model(args.model)
    report = analyze(
        op,
        model_name=args.model,
        orbit_params=_orbit_params(args),
        suite_random=args.suite,
        seed=args.seed,
    )
    if args.json:
        print(report.to_json())
    else:
        data = report.to_dict()
        print(f"model: {args.model} ({len(op.space.labels)} states)")
        for cls in data["classes"]:
            flags = []
            if cls["maximal"]:
                flags.append("maximal")
            if cls["closed"]:
                flags.append("closed")
            cyc = cls["cyclicity"]
            flags.append(f"cyclicity {cyc}" if cyc is not None else "acyclic")
            print(f"  class {_set_to_str(cls['members'])}: {', '.join(flags)}")
        part = data["partition"]
        print(f"  maximal states: {_set_to_str(part['maximal_states'])}")
        print(f"  absorbed transients: {_set_to_str(part['absorbed_transients'])}")
        print(f"  unabsorbed transients: {_set_to_str(part['unabsorbed_transients'])}")
        for level in data["decomposition"]["levels"]:
            names = ", ".join(
                _set_to_str(c["members"]) + f" (cyclicity {c['cyclicity']})"
                for c in level["maximal_classes"]
            )
            print(f"  level {level['level']}: maximal {names}")
        v = data["verdicts"]
        print(f"verdict: convergent={v['convergent']} ({v['basis']['convergent']}), "
              f"ergodic={v['ergodic']}, convergent on maximal states={v['convergent_on_maximal_states']}")
        if v["witness"]:
            w = v["witness"]
            print(f"  witness: level {w['level']} class {_set_to_str(w['members'])} "
                  f"cyclicity {w['cyclicity']}")
        for note in v["notes"]:
            print(f"  note: {note}")
        if data["orbit_evidence"]:
            ev = data["orbit_evidence"]
            status = "agrees" if ev["agrees"] else "DISAGREES"
            print(f"orbit suite: {status} ({len(ev['checks'])} functions)")
            for item in ev["discrepancies"]:
                print(f"  discrepancy: {item}")
    verdict = report.verdict.convergent
    if verdict == "yes":
        return EXIT_OK
    if verdict == "no":
        return EXIT_NOT_CONVERGENT
    return EXIT_INCONCLUSIVE


def _cmd_orbit(args) -> int:
    op = load_model(args.model)
    f = _parse_function(args.function, op)
    params = _orbit_params(args, keep_trace=bool(args.trace))
    result = iterate_orbit(op, f, params)
    if args.trace:
        write_orbit_trace(args.trace, op.space.labels, result.trace)
        log.info("trace written to %s", args.trace)
    period = result.detected_period
    payload = {
        "period": period if period is not None else "none within budget",
        "converged": result.converged,
        "iterations": result.iterations,
        "residual": result.residual,
        "limit_cycle": (
            [[float(v) for v in vec] for vec in result.limit_cycle]
            if result.limit_cycle
            else None
        ),
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"period: {payload['period']}")
        print(f"iterations: {result.iterations}, residual: {result.residual:.3e}")
        if result.limit_cycle:
            for k, vec in enumerate(result.limit_cycle):
                rendered = ", ".join(f"{v:.9g}" for v in vec)
                print(f"  cycle[{k}]: ({rendered})")
    return EXIT_OK


def _cmd_graph(args) -> int:
    op = load_model(args.model)
    graph = build_graph(op)
    classes = communication_classes(graph)
    if args.dot:
        sys.stdout.write(to_dot(graph, classes))
    else:
        for x, y in sorted(
            (graph.labels[a], graph.labels[b]) for a, b in graph.edges()
        ):
            print(f"{x} -> {y}")
    return EXIT_OK


def _cmd_decompose(args) -> int:
    op = load_model(args.model)
    report = analyze(op, model_name=args.model)
    data = report.to_dict()["decomposition"]
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(f"depth: {data['depth']}")
        for level in data["levels"]:
            print(f"level {level['level']}: states {_set_to_str(level['states'])}")
            for cls in level["maximal_classes"]:
                print(f"  maximal {_set_to_str(cls['members'])}, cyclicity {cls['cyclicity']}")
            print(f"  absorbed {_set_to_str(level['absorbed'])}, "
                  f"remaining {_set_to_str(level['remaining'])}")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "orbit": _cmd_orbit,
    "graph": _cmd_graph,
    "decompose": _cmd_decompose,
}


def main(argv=None) -> int:
    level_name = os.environ.get("IMC_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING))
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ImclimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
