"""Decompose R^3 for the unit sphere and walk the resulting cell tree.

The single input polynomial x1^2 + x2^2 + x3^2 - 1 eliminates down to the
unit circle in the (x1, x2) plane and the interval [-1, 1] on the x1
axis.  The decomposition then has 5 cells on the line, 13 in the plane,
and 25 in space: every cell an exact sign-invariant piece with an
algebraic sample point.

Usage: python scripts/sphere_decomposition.py [--json FILE]
"""

import argparse
import json
from fractions import Fraction

from realcad.cad import CadTree, cell_json, eliminate_all, locate_cell
from realcad.polycore import parse_poly, poly_text

SPHERE = "x1^2 + x2^2 + x3^2 - 1"


def describe(tree, node):
    cell = node.cell
    fam = tree.families[node.level - 1]
    signs = ", ".join(
        "%s %s 0" % (poly_text(fam[i]), {1: ">", 0: "=", -1: "<"}[s])
        for i, s in sorted(cell.signs.items())
    )
    path = ".".join(str(c) for c in node.path)
    return "%s%-8s %-10s %s" % ("  " * node.level, path, cell.kind, signs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", metavar="FILE", help="also dump every cell as JSON")
    args = ap.parse_args()

    fams = eliminate_all([[], [], [parse_poly(SPHERE)]])
    print("families after elimination:")
    for lev, fam in enumerate(fams, start=1):
        print("  level %d: %s" % (lev, ", ".join(poly_text(p) for p in fam) or "(none)"))

    tree = CadTree(fams)
    counts = [tree.count_cells(k) for k in range(1, 4)]
    print("cells per level: %s (total %d)" % (counts, sum(counts)))
    print()

    for node in tree.walk():
        if node.level >= 1:
            print(describe(tree, node))
    print()

    for point in [(0, 0, 0), (2, 0, 0), (0, 1, 0), (Fraction(1, 2), 0, 0)]:
        node = locate_cell(tree, tuple(Fraction(c) for c in point))
        where = ".".join(str(c) for c in node.path)
        shown = "(%s)" % ", ".join(str(c) for c in point)
        print("point %-12s lies in cell %s (%s)" % (shown, where, node.cell.kind))

    if args.json:
        dump = [cell_json(tree, nd) for nd in tree.walk() if nd.level >= 1]
        with open(args.json, "w") as fh:
            json.dump({"levels": 3, "cells": dump}, fh, indent=2)
        print("wrote %s (%d cells)" % (args.json, len(dump)))


if __name__ == "__main__":
    main()
