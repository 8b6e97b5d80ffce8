"""Batch command-line surface.

Subcommands: validate, inspect, check, solve, stationary.  Output is
deterministic (byte-identical for identical inputs and flags).  Exit codes:
0 property holds / success, 1 property fails (witness printed), 2 input
error, 3 resource cap exceeded, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import sys as _sys
from fractions import Fraction

from . import convergence, fileio, game as game_mod, stationary as stat_mod
from .core import ALL_AXIOMS, check_axioms
from .numbers import render_scalar
from .partition import piece_partition, subroots

_PALETTE = ("lightblue", "lightyellow", "lightpink", "lightgreen", "lavender",
            "mistyrose", "honeydew", "aliceblue")

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INCONCLUSIVE = 4


def _render(value) -> str:
    if isinstance(value, (Fraction, float)):
        return render_scalar(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_render(v)}" for k, v in sorted(value.items())) + "}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_render(v) for v in value) + ")"
    return str(value)


def _print_witness(witness: dict) -> None:
    for key in sorted(witness):
        print(f"  {key}: {_render(witness[key])}")


def _print_profile_table(title: str, table) -> None:
    print(title)
    for key in sorted(table):
        print(f"  {key}: {_render(dict(table[key]))}")


def _verdict_exit(verdict) -> int:
    if verdict.holds:
        print("verdict: holds")
        return EXIT_HOLDS
    print("verdict: fails")
    if verdict.witness:
        _print_witness(verdict.witness)
    return EXIT_FAILS


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    quintuples = fileio.load_quintuples(args.path)
    print(f"validate {args.path}")
    print(f"quintuples: {len(set(quintuples))}")
    violations = {v.axiom: v for v in check_axioms(quintuples)}
    for axiom in ALL_AXIOMS:
        if axiom in violations:
            print(f"[{axiom}] FAIL  {violations[axiom].witness}")
        else:
            print(f"[{axiom}] pass")
    if violations:
        return EXIT_FAILS
    from .core import validate as _validate

    print(f"root: {_validate(quintuples).root!r}")
    return EXIT_HOLDS


def cmd_inspect(args) -> int:
    form = fileio.load_pentaform(args.path)
    print(f"inspect {args.path}")
    print(f"root: {form.root!r}  nodes: {len(form.nodes)}  quintuples: {len(form)}")
    ts = sorted(subroots(form))
    if args.subroots or not args.pieces:
        print(f"subroots ({len(ts)}): " + ", ".join(repr(t) for t in ts))
    parts = piece_partition(form)
    if args.pieces:
        print("pieces:")
        for t in ts:
            print(f"  {t!r}: {len(parts[t])} quintuples")
    covered = sum(len(piece) for _, piece in parts.items())
    print(f"piece partition covers {covered}/{len(form)} quintuples in {len(parts)} pieces")
    if args.dot:
        text = _dot(form)
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote DOT diagram to {args.dot}")
    return EXIT_HOLDS


def _dot(form) -> str:
    ts = subroots(form)
    parts = piece_partition(form)
    color_of = {}
    for idx, (t, piece) in enumerate(parts.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        for x in piece.decision_nodes | piece.successors:
            color_of.setdefault(x, color)
    lines = ["digraph pentaform {", "  rankdir=TB;", '  node [style=filled, shape=ellipse];']
    for x in sorted(form.nodes):
        attrs = [f'fillcolor="{color_of.get(x, "white")}"']
        if x in ts:
            attrs.append("peripheries=2")
        if x in form.endnodes:
            attrs.append("shape=box")
        lines.append(f'  "{x}" [{", ".join(attrs)}];')
    for q in form.quintuples:
        lines.append(f'  "{q.decision_node}" -> "{q.successor}" '
                     f'[label="{q.action} ({q.player})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_VALUE_PROPERTIES = {"admissible", "persistent", "authentic", "piecewise-nash"}


def cmd_check(args) -> int:
    g = fileio.load_game(args.game)
    s = fileio.load_strategy(args.strategy)
    prop = args.property
    print(f"check {args.game} {args.strategy} --property {prop}")
    values = None
    if prop in _VALUE_PROPERTIES:
        if args.values:
            values = fileio.load_values(args.values)
        elif args.authentic_value:
            values = game_mod.authentic_value(g, s)
            print("values: derived as the authentic value function of the strategy")
        else:
            raise fileio.FileFormatError(
                f"property {prop!r} needs --values FILE or --authentic-value")
    if prop == "nash":
        verdict = game_mod.nash_check(g, s)
    elif prop == "spe":
        verdict = game_mod.spe_check_direct(g, s)
    elif prop == "admissible":
        verdict = game_mod.admissible(g, values)
    elif prop == "persistent":
        verdict = game_mod.persistent(g, s, values)
    elif prop == "authentic":
        verdict = game_mod.authentic(g, s, values)
    elif prop == "piecewise-nash":
        verdict = game_mod.piecewise_nash(g, s, values)
    else:  # one-piece
        verdict = game_mod.one_piece_unimprovable(g, s)
    return _verdict_exit(verdict)


def cmd_solve(args) -> int:
    g = fileio.load_game(args.game)
    print(f"solve {args.game}")
    result = game_mod.solve_backward(g)
    if isinstance(result, game_mod.NoPureEquilibrium):
        print(f"no pure equilibrium: the piece game at {result.subroot!r} has no pure Nash point")
        return EXIT_FAILS
    print("strategy:")
    for j in sorted(result.strategy):
        print(f"  {j}: {result.strategy[j]}")
    _print_profile_table("values:", result.values)
    return EXIT_HOLDS


def cmd_stationary(args) -> int:
    sys_ = fileio.load_system(args.system)
    if args.action == "instantiate":
        form = stat_mod.instantiate(sys_, args.depth)
        print(f"stationary {args.system} instantiate {args.depth}")
        print(f"quintuples: {len(form)}")
        ts = sorted(subroots(form))
        print(f"subroots ({len(ts)}): " + ", ".join(repr(t) for t in ts))
        if args.out:
            fileio.save_pentaform(args.out, form)
            print(f"wrote pentaform to {args.out}")
        return EXIT_HOLDS
    if args.action == "convergence":
        print(f"stationary {args.system} convergence")
        code = EXIT_HOLDS
        for name, verdict in (("upper", convergence.upper_convergent(sys_)),
                              ("lower", convergence.lower_convergent(sys_))):
            print(f"{name}: {verdict.status.upper()}")
            if verdict.certificate:
                print(f"  certificate: {verdict.certificate}")
            if verdict.witness:
                _print_witness(verdict.witness)
            if verdict.status == convergence.FAILS:
                code = EXIT_FAILS
            elif verdict.status == convergence.UNKNOWN and code == EXIT_HOLDS:
                code = EXIT_INCONCLUSIVE
        return code
    if args.action == "solve":
        print(f"stationary {args.system} solve")
        result = stat_mod.solve_stationary(sys_)
        if isinstance(result, stat_mod.StationarySolveFailure):
            if result.kind == "no-pure-equilibrium":
                print(f"failure: quotient piece game of class {result.class_id!r} has no pure Nash point")
                return EXIT_FAILS
            print("failure: value iteration did not stabilize")
            return EXIT_INCONCLUSIVE
        print("strategy:")
        for c in sorted(result.strategy):
            for j in sorted(result.strategy[c]):
                print(f"  {c}:{j}: {result.strategy[c][j]}")
        _print_profile_table("continuation values:", result.values)
        return EXIT_HOLDS
    # certify
    sigma = fileio.load_stationary_strategy(args.strategy)
    print(f"stationary {args.system} certify {args.strategy}")
    cert = stat_mod.certify_spe(sys_, sigma)
    print(f"certificate: {cert.kind}")
    for name, verdict in (("upper", cert.upper), ("lower", cert.lower)):
        print(f"{name}-convergence: {verdict.status.upper()}")
    if cert.continuation_values is not None:
        _print_profile_table("continuation values:", cert.continuation_values)
    if cert.route:
        print(f"route: {cert.route}")
    if cert.reason:
        print(f"reason: {cert.reason}")
    if cert.witness:
        _print_witness(cert.witness)
    if cert.kind == stat_mod.SPE_CERTIFIED:
        return EXIT_HOLDS
    if cert.kind == stat_mod.REFUTED:
        return EXIT_FAILS
    return EXIT_INCONCLUSIVE


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pentaform",
        description="Analyze extensive-form games stored as quintuple relations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the eight pentaform axioms of a file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("inspect", help="subroots, piece partition, optional DOT export")
    p.add_argument("path")
    p.add_argument("--subroots", action="store_true")
    p.add_argument("--pieces", action="store_true")
    p.add_argument("--dot", metavar="OUT")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("check", help="check an equilibrium/value property")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--property", required=True,
                   choices=["nash", "spe", "admissible", "persistent", "authentic",
                            "piecewise-nash", "one-piece"])
    p.add_argument("--values", metavar="FILE")
    p.add_argument("--authentic-value", action="store_true",
                   help="derive the value function from the strategy")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="generalized backward induction")
    p.add_argument("game")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("stationary", help="analyze a generated infinite-horizon system")
    p.add_argument("system")
    stat_sub = p.add_subparsers(dest="action", required=True)
    c = stat_sub.add_parser("certify")
    c.add_argument("strategy")
    stat_sub.add_parser("solve")
    stat_sub.add_parser("convergence")
    c = stat_sub.add_parser("instantiate")
    c.add_argument("depth", type=int)
    c.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_stationary)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except game_mod.ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=_sys.stderr)
        return EXIT_RESOURCE
    except (fileio.FileFormatError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
