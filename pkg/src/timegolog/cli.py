"""Command-line front end.

Subcommands: `verify` checks a program against a specification of undesired
behavior, `synth` decides and extracts a controller, `transform` realizes a
plan on a platform model, `mtl-check` evaluates a formula on a timed word,
and `ata-dump` prints the automaton compiled from a formula.  Exit codes:
0 for positive verdicts (safe / controller exists / trace found / word
satisfies), 1 for negative verdicts, 2 for usage or input errors.

Rational constants are accepted everywhere; the instance is scaled to
natural constants internally and all reported times are scaled back.
"""

from __future__ import annotations

import argparse
import json
import sys
from fnmatch import fnmatchcase
from fractions import Fraction

from . import __version__, ata, golog, mtl, plantrans, synthesis
from .golog import InputError
from .parsing import (
    ground_atom_checker,
    load_bat,
    load_program,
    load_ta,
    parse_mtl,
    parse_static,
    ta_constants,
)
from .sexpr import ParseError
from .temporal import format_fraction, scale_lcm
from .timed_automata import ta_to_dot, ta_to_json


def parse_formula_text(text: str, bat=None):
    """Trace formula from an s-expression, atoms sort-checked against the
    theory when one is loaded."""
    checker = ground_atom_checker(bat) if bat is not None else None
    return parse_mtl(text, checker)


def _read_json(path: str):
    with open(path) as handle:
        return json.load(handle)


def _formula_arg(text_or_path: str, bat=None):
    if text_or_path.lstrip().startswith("("):
        return parse_formula_text(text_or_path, bat)
    with open(text_or_path) as handle:
        body = handle.read().strip()
    if body.startswith("("):
        return parse_formula_text(body, bat)
    return mtl.formula_from_json(json.loads(body))


def _bat_scale(bat) -> int:
    return scale_lcm(list(synthesis._bat_clock_constants(bat)) or [Fraction(1)])


def _scale_bat(bat, factor: int):
    if factor == 1:
        return bat

    def scale_formula(f):
        if isinstance(f, golog.SClock):
            return golog.SClock(f.clock, f.rel, f.const * factor)
        if isinstance(f, golog.SAnd):
            return golog.SAnd(tuple(scale_formula(a) for a in f.args))
        if isinstance(f, golog.SOr):
            return golog.SOr(tuple(scale_formula(a) for a in f.args))
        if isinstance(f, golog.SNot):
            return golog.SNot(scale_formula(f.arg))
        if isinstance(f, golog.SQuant):
            return golog.SQuant(f.kind, f.var, f.sort, scale_formula(f.body))
        return f

    actions = {
        name: golog.ActionDecl(scale_formula(d.poss), scale_formula(d.guard), d.resets)
        for name, d in bat.actions.items()
    }
    return golog.Bat(
        sorts=bat.sorts, clocks=bat.clocks, rel_fluents=bat.rel_fluents,
        fun_fluents=bat.fun_fluents, actions=actions, ssa_rel=bat.ssa_rel,
        ssa_fun=bat.ssa_fun, initial=bat.initial,
    )


def _trace_json(trace, scale: int):
    return [
        {"action": action, "t": format_fraction(Fraction(t) / scale)}
        for action, t in trace
    ]


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _controllable_predicate(spec: str):
    patterns = [p.strip() for p in spec.split(",") if p.strip()]

    def controllable(action: str) -> bool:
        return any(fnmatchcase(action, p) for p in patterns)

    return controllable


def cmd_verify(args) -> int:
    bat = load_bat(_read_json(args.bat))
    program = load_program(_read_json(args.program), bat)
    spec = _formula_arg(args.spec, bat)
    scale = _bat_scale(bat)
    verdict = synthesis.verify(
        _scale_bat(bat, scale), program, mtl.scale_intervals(spec, scale),
        budget=args.budget,
    )
    if verdict.safe:
        _emit(args, {"verdict": "safe", "nodes": verdict.nodes},
              f"safe ({verdict.nodes} nodes explored)")
        return 0
    payload = {
        "verdict": "unsafe",
        "nodes": verdict.nodes,
        "counterexample": _trace_json(verdict.counterexample, scale),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 1


def cmd_synth(args) -> int:
    bat = load_bat(_read_json(args.bat))
    program = load_program(_read_json(args.program), bat)
    spec = _formula_arg(args.spec, bat)
    controllable = _controllable_predicate(args.controllable)
    scale = _bat_scale(bat)
    scaled_bat = _scale_bat(bat, scale)
    scaled_spec = mtl.scale_intervals(spec, scale)
    extract = bool(args.out or args.dot or args.simulate)
    result, graph, problem = synthesis.check_for_controller(
        scaled_bat, program, scaled_spec, controllable,
        budget=args.budget, prune=args.prune and not extract,
    )
    info = {"controller": bool(result), "nodes": len(graph.nodes),
            "explored": graph.explored}
    if args.debug_graph:
        with open(args.debug_graph, "w") as handle:
            json.dump(synthesis.graph_debug_json(problem, graph), handle,
                      indent=2, sort_keys=True)
    if not result:
        _emit(args, {**info, "verdict": "no-controller"},
              f"no controller exists ({len(graph.nodes)} nodes)")
        return 1
    if extract:
        controller = synthesis.extract_controller(problem, graph, controllable)
        controller_ta = controller.to_ta()
        if args.out:
            with open(args.out, "w") as handle:
                json.dump(ta_to_json(controller_ta), handle, indent=2, sort_keys=True)
        if args.dot:
            with open(args.dot, "w") as handle:
                handle.write(ta_to_dot(controller_ta))
        info["locations"] = len(controller.locations)
        info["edges"] = len(controller.edges)
        info["increment_ties"] = len(controller.tie_warnings)
        if args.simulate:
            report = synthesis.simulate_controller(
                controller, trials=args.simulate, seed=args.seed,
            )
            info["simulation"] = {
                "trials": report.trials,
                "completed": report.completed,
                "violations": len(report.violations),
                "condition_failures": len(report.condition_failures),
            }
            if not report.ok:
                _emit(args, {**info, "verdict": "controller-unsound"},
                      "controller failed simulation")
                return 1
    _emit(args, {**info, "verdict": "controller"},
          f"controller exists ({len(graph.nodes)} nodes)")
    return 0


def cmd_transform(args) -> int:
    plan_obj = _read_json(args.plan)
    plan = plantrans.Plan(tuple(plan_obj["actions"]))
    platform_obj = _read_json(args.platform)
    constraints = plantrans.constraints_from_json(_read_json(args.constraints))
    scale = scale_lcm(list(ta_constants(platform_obj)) or [Fraction(1)])
    platform = load_ta(platform_obj, scale)
    constraints = plantrans.scale_constraints(constraints, scale)
    if args.dot:
        enc = plantrans.build_encoding(plan, platform, constraints)
        with open(args.dot, "w") as handle:
            handle.write(ta_to_dot(enc))
    trace = plantrans.transform_plan(plan, platform, constraints)
    if trace is None:
        _emit(args, {"verdict": "unrealizable"}, "plan not realizable under the constraints")
        return 1
    if not plantrans.validate_transformed(trace, plan, platform, constraints):
        _emit(args, {"verdict": "internal-error"},
              "internal error: transformed trace failed validation")
        return 2
    payload = {"verdict": "trace", "trace": _trace_json(trace, scale)}
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_mtl_check(args) -> int:
    spec = _formula_arg(args.spec)
    word = mtl.TimedWord.from_json(_read_json(args.word))
    result = mtl.satisfies(word, 0, spec)
    _emit(args, {"satisfies": result}, "satisfies" if result else "does not satisfy")
    return 0 if result else 1


def cmd_ata_dump(args) -> int:
    spec = mtl.to_pnf(_formula_arg(args.spec))
    automaton = ata.ata_from_mtl(spec)
    table = ata.eta_table(automaton)
    if args.dot:
        with open(args.dot, "w") as handle:
            handle.write(ata.to_dot(automaton))
    print(json.dumps(table, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timegolog",
        description="verify and synthesize controllers for timed agent "
                    "programs; transform plans onto platform models",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check a program against undesired behavior")
    p_verify.add_argument("--bat", required=True, help="theory JSON")
    p_verify.add_argument("--program", required=True, help="program JSON")
    p_verify.add_argument("--spec", required=True, help="formula (s-expression or file)")
    p_verify.add_argument("--budget", type=int, default=None, help="node budget")
    p_verify.add_argument("--json", action="store_true", help="machine-readable verdict")
    p_verify.set_defaults(func=cmd_verify)

    p_synth = sub.add_parser("synth", help="decide and extract a controller")
    p_synth.add_argument("--bat", required=True)
    p_synth.add_argument("--program", required=True)
    p_synth.add_argument("--spec", required=True)
    p_synth.add_argument("--controllable", required=True,
                         help="comma-separated action patterns, e.g. 'start(*'")
    p_synth.add_argument("--out", help="controller JSON output path")
    p_synth.add_argument("--dot", help="controller DOT output path")
    p_synth.add_argument("--budget", type=int, default=None)
    p_synth.add_argument("--prune", action="store_true",
                         help="label on the fly (decision only; extraction "
                              "always builds the full graph)")
    p_synth.add_argument("--simulate", type=int, default=0, metavar="TRIALS",
                         help="randomized controller simulation trials")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--debug-graph", metavar="PATH",
                         help="dump the labeled search graph with canonical words")
    p_synth.add_argument("--json", action="store_true")
    p_synth.set_defaults(func=cmd_synth)

    p_trans = sub.add_parser("transform", help="realize a plan on a platform model")
    p_trans.add_argument("--plan", required=True, help='plan JSON: {"actions": [...]}')
    p_trans.add_argument("--platform", required=True, help="platform TA JSON")
    p_trans.add_argument("--constraints", required=True, help="constraints JSON")
    p_trans.add_argument("--out", help="trace JSON output path")
    p_trans.add_argument("--dot", help="encoded product DOT output path")
    p_trans.add_argument("--json", action="store_true")
    p_trans.set_defaults(func=cmd_transform)

    p_mtl = sub.add_parser("mtl-check", help="evaluate a formula on a timed word")
    p_mtl.add_argument("--spec", required=True)
    p_mtl.add_argument("--word", required=True, help="timed word JSON")
    p_mtl.add_argument("--json", action="store_true")
    p_mtl.set_defaults(func=cmd_mtl_check)

    p_dump = sub.add_parser("ata-dump", help="print the automaton of a formula")
    p_dump.add_argument("--spec", required=True)
    p_dump.add_argument("--dot", help="DOT output path")
    p_dump.set_defaults(func=cmd_ata_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except synthesis.ResourceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
