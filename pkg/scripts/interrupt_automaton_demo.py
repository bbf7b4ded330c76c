"""The two-clock interrupt automaton, end to end.

A level-1 state q0 feeds two level-2 states q1 (via the letter a, while
x1^2 - x1 - 1 <= 0) and q2 (via b, while 2*x1*x2^2 - x2^2 - 1 > 0); c
returns from q2 while x2 + x1^2 - 5 <= 0.  The demo simulates a concrete
timed word, then decides reachability and two branching-time formulas on
the finite region abstraction, and reports how much of the abstraction
the on-the-fly search actually touched.

Usage: python scripts/interrupt_automaton_demo.py [--dot FILE]
"""

import argparse

from realcad.model import model_json, parse_model, run_timed_word
from realcad.regmc import (
    build_region_graph,
    model_check,
    reach,
    region_dot,
    region_text,
)

MODEL = {
    "clocks": 2,
    "states": [
        {"name": "q0", "level": 1, "initial": True},
        {"name": "q1", "level": 2},
        {"name": "q2", "level": 2, "final": True},
    ],
    "transitions": [
        {"from": "q0", "to": "q1", "action": "a",
         "guard": [{"poly": "x1^2 - x1 - 1", "rel": "<="}]},
        {"from": "q0", "to": "q0", "action": "a'",
         "guard": [{"poly": "x1^2 - x1 - 1", "rel": ">"}],
         "update": {"x1": "0"}},
        {"from": "q1", "to": "q2", "action": "b",
         "guard": [{"poly": "2*x1*x2^2 - x2^2 - 1", "rel": ">"}]},
        {"from": "q2", "to": "q1", "action": "c",
         "guard": [{"poly": "x2 + x1^2 - 5", "rel": "<="}]},
    ],
}

WORD = "(a,6/5)(b,23/10)(c,13/5)(b,33/10)(c,39/10)(b,51/10)"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dot", metavar="FILE", help="write the full region graph as Graphviz")
    args = ap.parse_args()

    auto = parse_model(MODEL)
    info = model_json(auto)
    print("automaton: %d clocks, %d states, %d transitions, final %s"
          % (auto.clocks, len(info["states"]), len(info["transitions"]),
             auto.final_states()))

    print("\nsimulating %s" % WORD)
    res = run_timed_word(auto, WORD)
    print("accepted:", res.accepted)
    for step in res.trace:
        label = step["action"] if step["action"] is not None else "~"
        print("  t=%-6s %-3s -> %s" % (step["time"], label, step["to"]))

    print("\nreachability of q2 on the region abstraction:")
    r = reach(auto, "q2")
    print("reachable:", r.found, "after expanding", r.explored, "regions")
    for kind, label, region in r.witness:
        arrow = {"init": "start", "time": "tau", "act": label}[kind]
        print("  %-5s %s" % (arrow, region_text(region)))

    graph = build_region_graph(auto, space=r.space)
    print("\nfull region graph holds %d regions (the search expanded %d)"
          % (len(graph.nodes), r.explored))
    for formula in ["EF q2", "EF (q2 and x1^2 - x1 - 1 > 0)"]:
        print("  %-36s %s" % (formula, model_check(auto, formula, graph=graph)))

    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(region_dot(graph))
        print("\nwrote %s" % args.dot)


if __name__ == "__main__":
    main()
