"""Cylindrical algebraic decomposition, one line at a time.

Given per-level polynomial families closed under elimination, the space
R^n is cut into finitely many *cells* arranged in a tree: the single cell
of R^0 at the root, and above every level-l cell a partition of the line
{sample} x R into the real roots of the level-(l+1) family (sections) and
the open intervals between them, each carrying a sample point described
exactly by a triangular system.  Every family polynomial has a constant
sign on every cell, recorded in the cell's sign table; deciding a formula
or locating a point never needs more than those tables.

The pieces:

* :func:`elim` -- one elimination step: truncations, leading coefficients
  and subresultant coefficients against the distinguished variable, enough
  to make lower-level signs control the root structure above.
* :func:`eliminate_all` -- runs elimination from the top level down.
* :func:`line_partition` -- the ordered root points of a family on the
  line above a sample, each point carrying, for every family polynomial
  with roots, the signs of that polynomial's derivative tower (so points
  from different polynomials can be compared and merged exactly).
* :func:`complete_partition` -- inserts a sample point into every open
  interval: shifted polynomials for the two unbounded intervals, a root of
  the derivative of a product for the bounded ones.
* :class:`CadTree` / :func:`build_cad` -- the cell tree, expanded lazily
  and memoized per sample path.
* :func:`locate_cell` -- exact descent of a rational point through the
  tree.
"""

from fractions import Fraction
from functools import cmp_to_key

from .polycore import (
    NEG_INF,
    DomainError,
    InternalInvariantError,
    coeff_of,
    coeffs_in,
    degree,
    derivative,
    eval_at,
    is_zero,
    level_of,
    lcof,
    make_poly,
    p_mul,
    parse_poly,
    poly_text,
    primitive_part,
    shift_var,
    subresultants,
    truncations,
    var,
    _as_ring,
)
from .realalg import (
    normalize_at,
    root_coding,
    sign_at,
    thom_compare,
    triangular_to_json,
)


def elim(k, polys):
    """One elimination step: level-below-``k`` polynomials whose signs
    control the root pattern of ``polys`` along ``x_k``.

    Emits, for every truncation R of a family polynomial: the leading
    coefficient of R, the subresultant coefficients of (R, dR/dx_k), and
    the subresultant coefficients of R against the truncations of the
    other family polynomials (higher degree first; on ties the earlier
    family member first).  Constants are dropped, positive rational
    content is divided out, duplicates are removed; order is
    deterministic.
    """
    fam = []
    for p in polys:
        p = _as_ring(p)
        if not is_zero(p) and p not in fam:
            fam.append(p)
    out = []
    seen = set()

    def emit(x):
        if x is None or isinstance(x, Fraction):
            return
        x = primitive_part(x)
        if x not in seen:
            seen.add(x)
            out.append(x)

    def sres_all(a, b):
        for s in subresultants(a, b, k):
            emit(s)

    truncs = [truncations(p, k) for p in fam]
    for tr in truncs:
        for R in tr:
            if isinstance(R, Fraction):
                continue
            emit(lcof(R, k))
            if degree(R, k) >= 2:
                sres_all(R, derivative(R, k))
    for a in range(len(fam)):
        for b in range(a, len(fam)):
            for ri, R in enumerate(truncs[a]):
                ts = truncs[b][ri + 1 :] if a == b else truncs[b]
                for Tt in ts:
                    dR, dT = degree(R, k), degree(Tt, k)
                    if max(dR, dT) < 1:
                        continue
                    if dT <= dR:
                        sres_all(R, Tt)
                    else:
                        sres_all(Tt, R)
    return out


def eliminate_all(families):
    """Close per-level families under elimination, top level down.

    ``families[i]`` holds the input polynomials of level ``i+1``.  Returns
    the completed families; inputs come first, verbatim, then elimination
    outputs (primitive, deduplicated).
    """
    out = []
    for i, f in enumerate(families):
        fam = []
        for p in f:
            p = _as_ring(p)
            if is_zero(p) or isinstance(p, Fraction):
                continue
            if level_of(p) > i + 1:
                raise DomainError(
                    "level-%d polynomial in the level-%d family" % (level_of(p), i + 1)
                )
            if p not in fam:
                fam.append(p)
        out.append(fam)
    for i in range(len(out) - 1, 0, -1):
        for p in elim(i + 1, out[i]):
            if p not in out[i - 1]:
                out[i - 1].append(p)
    return out


class LineEntry:
    """A root point on the line: which family members vanish there (with
    their root numbers) and, per family member with roots, the signs of
    its derivative tower at the point."""

    __slots__ = ("owners", "codes")

    def __init__(self, owners, codes):
        self.owners = owners
        self.codes = codes

    def pick(self):
        """(family index, root number) of the earliest owner."""
        idx = min(self.owners)
        return idx, self.owners[idx]

    def __repr__(self):
        return "LineEntry(%r)" % (self.owners,)


class LinePartition:
    __slots__ = ("level", "family", "entries", "const_signs", "normalized", "rooted")

    def __init__(self, level, family, entries, const_signs, normalized, rooted):
        self.level = level
        self.family = family
        self.entries = entries
        self.const_signs = const_signs  # family index -> sign, no roots on the line
        self.normalized = normalized  # family index -> (R, degree) of rooted members
        self.rooted = rooted  # family index -> Thom encodings of the roots


def line_partition(T, family):
    """Ordered root points of ``family`` on the line above the sample ``T``.

    Points of different polynomials are compared through shared derivative
    sign vectors and merged when they coincide.  Polynomials without roots
    on the line (constant there, or root-free) get a constant sign
    instead of entries.
    """
    T = tuple(T)
    k = len(T) + 1
    fam = tuple(_as_ring(p) for p in family)
    const_signs = {}
    normalized = {}
    rooted = {}
    for idx, P in enumerate(fam):
        if level_of(P) > k:
            raise DomainError("family polynomial above the line level")
        R, r = normalize_at(T, P, k)
        if r == NEG_INF:
            const_signs[idx] = 0
        elif r == 0:
            const_signs[idx] = sign_at(T, coeff_of(R, k, 0))
        else:
            codes = root_coding(T, R, R)
            if codes:
                normalized[idx] = (R, r)
                rooted[idx] = codes
            else:
                const_signs[idx] = sign_at(T + ((1, var(k), 1),), R)

    per_poly = {}
    for idx, codes in rooted.items():
        per_poly[idx] = [
            LineEntry({idx: i + 1}, {idx: c}) for i, c in enumerate(codes)
        ]
    for idx in rooted:
        R_idx = normalized[idx][0]
        for other in rooted:
            if other == idx:
                continue
            cs = root_coding(T, R_idx, normalized[other][0])
            for i, e in enumerate(per_poly[idx]):
                e.codes[other] = cs[i]

    order = sorted(rooted)

    def compare(e1, e2):
        for s in order:
            c1, c2 = e1.codes[s], e2.codes[s]
            if c1 != c2:
                try:
                    return thom_compare(c1, c2)
                except DomainError:
                    raise InternalInvariantError(
                        "unorderable sign vectors for two line points"
                    )
        return 0

    flat = [e for idx in order for e in per_poly[idx]]
    flat.sort(key=cmp_to_key(compare))
    merged = []
    for e in flat:
        if merged and compare(merged[-1], e) == 0:
            tgt = merged[-1]
            for s, c in e.codes.items():
                if s in tgt.codes and tgt.codes[s] != c:
                    raise InternalInvariantError("merge with conflicting codes")
                tgt.codes[s] = c
            tgt.owners.update(e.owners)
        else:
            merged.append(e)
    return LinePartition(k, fam, merged, const_signs, normalized, rooted)


class LineCell:
    """One cell of a partitioned line: a section (root point), an open
    interval with its sample, or the full line.  ``triple`` extends the
    triangular system one level down to this cell's sample point;
    ``signs`` maps every family index to the sign on the cell."""

    __slots__ = ("kind", "triple", "signs", "owners")

    def __init__(self, kind, triple, signs, owners):
        self.kind = kind
        self.triple = triple
        self.signs = signs
        self.owners = owners

    def __repr__(self):
        return "LineCell(%s, %r)" % (self.kind, self.triple)


class CompletedLine:
    __slots__ = ("partition", "cells")

    def __init__(self, partition, cells):
        self.partition = partition
        self.cells = cells


def complete_partition(T, lp):
    """Insert a sample point into every open interval of a line partition.

    The unbounded intervals sample the adjacent section's polynomial
    shifted by one; a bounded interval samples the root, between the two
    sections, of the derivative of the product of their polynomials (it
    exists by Rolle).  Returns the alternating interval/section cell list
    (a single full-line cell when there are no roots).
    """
    T = tuple(T)
    k = lp.level

    def total_signs(codes):
        signs = dict(lp.const_signs)
        for idx in lp.rooted:
            signs[idx] = codes[idx][0]
        return signs

    if not lp.entries:
        return CompletedLine(
            lp, [LineCell("full", (1, var(k), 1), dict(lp.const_signs), {})]
        )

    def coded_roots(Rb):
        Rn, rn = normalize_at(T, Rb, k)
        if rn < 1:
            raise InternalInvariantError("degenerate interval boundary polynomial")
        own = root_coding(T, Rn, Rn)
        ents = [
            {"triple": (i + 1, Rn, rn), "codes": {}} for i in range(len(own))
        ]
        for idx in lp.rooted:
            cs = root_coding(T, Rn, lp.normalized[idx][0])
            for i, e in enumerate(ents):
                e["codes"][idx] = cs[i]
        return ents

    def section_cell(entry):
        idx, nroot = entry.pick()
        R, r = lp.normalized[idx]
        return LineCell(
            "section", (nroot, R, r), total_signs(entry.codes), dict(entry.owners)
        )

    def interval_cell(ent):
        return LineCell("interval", ent["triple"], total_signs(ent["codes"]), {})

    cells = []
    first = lp.entries[0]
    fidx, _ = first.pick()
    below = coded_roots(shift_var(lp.normalized[fidx][0], k, 1))
    cells.append(interval_cell(below[0]))
    prev = None
    for entry in lp.entries:
        if prev is not None:
            pidx, _ = prev.pick()
            cidx, _ = entry.pick()
            a, b = sorted((pidx, cidx))
            bound = derivative(p_mul(lp.normalized[a][0], lp.normalized[b][0]), k)
            found = None
            for ent in coded_roots(bound):
                if (
                    thom_compare(ent["codes"][cidx], entry.codes[cidx]) < 0
                    and thom_compare(ent["codes"][pidx], prev.codes[pidx]) > 0
                ):
                    found = ent
                    break
            if found is None:
                raise InternalInvariantError("no sample between two sections")
            cells.append(interval_cell(found))
        cells.append(section_cell(entry))
        prev = entry
    last = lp.entries[-1]
    lidx, _ = last.pick()
    above = coded_roots(shift_var(lp.normalized[lidx][0], k, -1))
    cells.append(interval_cell(above[-1]))
    return CompletedLine(lp, cells)


class CadNode:
    __slots__ = ("level", "path", "T", "cell", "children")

    def __init__(self, level, path, T, cell):
        self.level = level
        self.path = path
        self.T = T
        self.cell = cell
        self.children = None

    def __repr__(self):
        return "CadNode(level=%d, path=%r)" % (self.level, self.path)


class CadTree:
    """The cell tree over per-level families, expanded on demand.

    Completed line partitions are memoized per sample system, so distinct
    tree walks (or an abstraction built on top) share the work.
    """

    def __init__(self, families):
        self.families = [tuple(_as_ring(p) for p in f) for f in families]
        self.n = len(self.families)
        self.root = CadNode(0, (), (), None)
        self._completed = {}

    def completed_line(self, T, level):
        key = (level, tuple(T))
        hit = self._completed.get(key)
        if hit is None:
            lp = line_partition(T, self.families[level])
            hit = complete_partition(T, lp)
            self._completed[key] = hit
        return hit

    def children(self, node):
        if node.children is None:
            if node.level >= self.n:
                node.children = []
            else:
                comp = self.completed_line(node.T, node.level)
                node.children = [
                    CadNode(
                        node.level + 1,
                        node.path + (ci,),
                        node.T + (cell.triple,),
                        cell,
                    )
                    for ci, cell in enumerate(comp.cells)
                ]
        return node.children

    def node_at(self, path):
        node = self.root
        for ci in path:
            kids = self.children(node)
            if ci >= len(kids):
                raise DomainError("no such cell path %r" % (path,))
            node = kids[ci]
        return node

    def walk(self, max_level=None):
        if max_level is None:
            max_level = self.n
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if node.level < max_level:
                stack.extend(reversed(self.children(node)))

    def count_cells(self, level):
        return sum(1 for nd in self.walk(level) if nd.level == level)


def build_cad(families):
    """Fully expanded cell tree for per-level input families (elimination
    is applied here; pass families as given by the problem)."""
    tree = CadTree(eliminate_all(families))
    for _ in tree.walk():
        pass
    return tree


def locate_cell(tree, point):
    """Descend a rational point (one coordinate per level, possibly fewer
    than the tree's depth) to the cell containing it."""
    point = [Fraction(c) for c in point]
    if len(point) > tree.n:
        raise DomainError("point has more coordinates than the tree has levels")
    node = tree.root
    for lev, c in enumerate(point):
        kids = tree.children(node)
        chosen = None
        if len(kids) == 1:
            chosen = kids[0]
        else:
            for i in range(1, len(kids), 2):
                s = _root_vs_rational(point[:lev], kids[i].cell.triple, c, lev + 1)
                if s == 0:
                    chosen = kids[i]
                    break
                if s > 0:
                    chosen = kids[i - 1]
                    break
            if chosen is None:
                chosen = kids[-1]
        node = chosen
    return node


def _root_vs_rational(prefix, triple, c, k):
    """Sign of (root described by ``triple`` above the rational prefix)
    minus the rational ``c``."""
    n_idx, R, r = triple
    sub = eval_at(R, {i + 1: prefix[i] for i in range(len(prefix))})
    cs = [Fraction(x) for x in coeffs_in(sub, k)]
    if len(cs) - 1 != r:
        raise InternalInvariantError("degree drop across a cell")
    uni = make_poly(1, cs)
    T1 = ((n_idx, uni, r),)
    return sign_at(T1, make_poly(1, (-c, Fraction(1))))


def cell_json(tree, node):
    """JSON-ready description of one cell."""
    signs = {}
    if node.cell is not None:
        fam = tree.families[node.level - 1]
        signs = {poly_text(fam[i]): s for i, s in sorted(node.cell.signs.items())}
    return {
        "level": node.level,
        "path": list(node.path),
        "kind": node.cell.kind if node.cell else "root",
        "sample": triangular_to_json(node.T),
        "signs": signs,
    }


def family_json(families):
    return [[poly_text(p) for p in fam] for fam in families]


def family_from_json(data):
    return [[parse_poly(t) for t in fam] for fam in data]
