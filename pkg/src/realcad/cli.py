"""Command-line front end.

Subcommands: validate, reach, mc, simulate, fo, cad.  Results go to
stdout as JSON; diagnostics go to stderr.  Exit status: 0 for true (or
plain success), 1 for false, 2 for usage and input errors, 3 when an
internal consistency check fails.
"""

import argparse
import json
import sys

from .cad import build_cad, cell_json, family_from_json
from .foreals import decide
from .model import parse_model, run_timed_word
from .polycore import DomainError, InternalInvariantError, ParseError
from .regmc import (
    build_region_graph,
    model_check,
    reach,
    region_dot,
    verdict_json,
)


def _emit(data):
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_model(path):
    with open(path) as fh:
        return parse_model(fh.read())


def _cmd_validate(args):
    auto = _load_model(args.model)
    _emit(
        {
            "ok": True,
            "clocks": auto.clocks,
            "states": len(auto.states),
            "transitions": len(auto.transitions),
            "initial": auto.initial,
            "final": auto.final_states(),
        }
    )
    return 0


def _cmd_reach(args):
    auto = _load_model(args.model)
    targets = set(args.target or [])
    if args.accepting:
        targets |= set(auto.final_states())
    if not targets:
        raise DomainError("no targets: give --target or --accepting")
    res = reach(auto, targets)
    print("explored %d regions" % res.explored, file=sys.stderr)
    out = verdict_json(
        "reach %s" % " ".join(sorted(targets)),
        res.found,
        res.witness if (args.witness and res.found) else None,
    )
    out["explored"] = res.explored
    _emit(out)
    if args.dot:
        graph = build_region_graph(auto, space=res.space)
        with open(args.dot, "w") as fh:
            fh.write(region_dot(graph))
        print("wrote %s (%d regions)" % (args.dot, len(graph.nodes)), file=sys.stderr)
    return 0 if res.found else 1


def _cmd_mc(args):
    auto = _load_model(args.model)
    result = model_check(auto, args.formula)
    _emit(verdict_json(args.formula, result))
    return 0 if result else 1


def _cmd_simulate(args):
    auto = _load_model(args.model)
    res = run_timed_word(auto, args.word)
    _emit({"word": args.word, "accepted": res.accepted, "trace": res.trace})
    return 0 if res.accepted else 1


def _cmd_fo(args):
    result = decide(args.sentence)
    _emit({"formula": args.sentence, "result": result})
    return 0 if result else 1


def _cmd_cad(args):
    with open(args.family) as fh:
        families = family_from_json(json.load(fh))
    tree = build_cad(families)
    counts = [tree.count_cells(k) for k in range(1, tree.n + 1)]
    _emit({"levels": tree.n, "cells": counts})
    if args.json:
        dump = [cell_json(tree, node) for node in tree.walk() if node.level >= 1]
        with open(args.json, "w") as fh:
            json.dump({"levels": tree.n, "cells": dump}, fh, indent=2)
        print("wrote %s (%d cells)" % (args.json, len(dump)), file=sys.stderr)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="realcad",
        description="Exact decision procedures over the reals and region-based "
        "verification of interrupt timed automata.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="parse and check a model file")
    sp.add_argument("model")
    sp.set_defaults(run=_cmd_validate)

    sp = sub.add_parser("reach", help="decide state reachability")
    sp.add_argument("model")
    sp.add_argument("--target", action="append", help="target state (repeatable)")
    sp.add_argument("--accepting", action="store_true", help="target the final states")
    sp.add_argument("--witness", action="store_true", help="include a witness path")
    sp.add_argument("--dot", metavar="FILE", help="write the full region graph as Graphviz")
    sp.set_defaults(run=_cmd_reach)

    sp = sub.add_parser("mc", help="check a branching-time formula")
    sp.add_argument("model")
    sp.add_argument("--formula", required=True)
    sp.set_defaults(run=_cmd_mc)

    sp = sub.add_parser("simulate", help="run a timed word on a model")
    sp.add_argument("model")
    sp.add_argument("--word", required=True, help="timed word, e.g. (a,6/5)(b,23/10)")
    sp.set_defaults(run=_cmd_simulate)

    sp = sub.add_parser("fo", help="decide a first-order sentence over the reals")
    sp.add_argument("--sentence", required=True)
    sp.set_defaults(run=_cmd_fo)

    sp = sub.add_parser("cad", help="decompose space for polynomial families")
    sp.add_argument("--family", required=True, help="JSON file: list of per-level poly lists")
    sp.add_argument("--json", metavar="FILE", help="write every cell to FILE")
    sp.set_defaults(run=_cmd_cad)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except FileNotFoundError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (ParseError, DomainError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except InternalInvariantError as e:
        print("internal error: %s" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
