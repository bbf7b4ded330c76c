"""Finite region abstraction and branching-time model checking.

A configuration of an interrupt timed automaton at a level-k state is a
point of R^k (the clocks above k are zero).  Collect the polynomials that
the automaton can ever test or assign -- the clocks themselves, every
guard polynomial, and x_i - P for every update x_i := P -- plus the
polynomials of the formula under scrutiny, arrange them by level, and
close under elimination.  The resulting cell tree is sign-invariant for
all of them: two configurations in the same cell satisfy the same guards
and enable the same transitions, and time flow moves through the cells of
a line in their left-to-right order.  Regions (state, cell) are therefore
a finite, faithful quotient of the uncountable configuration space.

Time steps become one edge each: a section steps to the interval on its
right, an interval to the next section, and the last (unbounded) interval
idles.  A discrete transition relabels the region and rewrites the cell
path: dropping to level k' truncates the path, an update x_k := P moves
to the unique cell of the same line where x_k - P vanishes, and raising
the level appends the unique cells where the fresh clocks are zero.

Reachability runs on the fly: regions are expanded as discovered, so the
cell tree is only built where the search actually walks, and completed
lines are shared through the tree's memo table.  The branching-time
checker labels the full region graph bottom-up; until-formulas take a
path position reflexively (a state satisfying the goal satisfies the
until with no steps taken).
"""

import re
from collections import deque
from fractions import Fraction

from .cad import CadTree, eliminate_all, locate_cell
from .model import _rel_holds
from .polycore import (
    DomainError,
    InternalInvariantError,
    ParseError,
    eval_at,
    is_zero,
    level_of,
    p_sub,
    parse_poly,
    poly_text,
    var,
)


def _zero_instantiations(p):
    """``p`` with the clocks above each level replaced by zero; highest
    level first, constants dropped."""
    out = []
    lev = level_of(p)
    for k in range(lev - 1, 0, -1):
        q = eval_at(p, {i: Fraction(0) for i in range(k + 1, lev + 1)})
        if not isinstance(q, Fraction):
            out.append(q)
    return out


def poly_closure(auto, extra=()):
    """Per-level input families for the region construction: clocks,
    guard polynomials, update differences x_i - P, and the extra
    (formula) polynomials with their zero-instantiations."""
    fams = [[] for _ in range(auto.clocks)]

    def add(p):
        if isinstance(p, Fraction):
            return
        lst = fams[level_of(p) - 1]
        if p not in lst:
            lst.append(p)

    for i in range(1, auto.clocks + 1):
        add(var(i))
    for t in auto.transitions:
        for poly, _rel in t.guard:
            add(poly)
        for idx, poly in t.update:
            add(p_sub(var(idx), poly))
    for p in extra:
        if isinstance(p, Fraction):
            continue
        add(p)
        for q in _zero_instantiations(p):
            add(q)
    return fams


class RegionSpace:
    """Shared context for a region construction: the automaton, the
    elimination-closed families, the lazily expanded cell tree, and the
    positions of the input polynomials in the families."""

    __slots__ = ("auto", "tree", "index_of")

    def __init__(self, auto, extra=()):
        self.auto = auto
        fams = eliminate_all(poly_closure(auto, extra))
        self.tree = CadTree(fams)
        self.index_of = {}
        for lev, fam in enumerate(fams):
            for i, p in enumerate(fam):
                self.index_of.setdefault(p, (lev + 1, i))

    def initial_region(self):
        q0 = self.auto.initial
        k = self.auto.level(q0)
        node = locate_cell(self.tree, (Fraction(0),) * k)
        return (q0, node.path)

    def sign_of(self, path, p):
        """Sign of a closure polynomial on the region's cell."""
        if isinstance(p, Fraction):
            return 1 if p > 0 else -1 if p < 0 else 0
        if p not in self.index_of:
            raise InternalInvariantError("%s is not in the closure" % poly_text(p))
        lev, i = self.index_of[p]
        if lev > len(path):
            raise InternalInvariantError(
                "%s lives at level %d, region has level %d" % (poly_text(p), lev, len(path))
            )
        return self.tree.node_at(path[:lev]).cell.signs[i]

    def atom_sign(self, path, p):
        """Sign of an arbitrary-level formula polynomial: clocks above
        the region's level read as zero."""
        k = len(path)
        if not isinstance(p, Fraction) and level_of(p) > k:
            p = eval_at(p, {i: Fraction(0) for i in range(k + 1, level_of(p) + 1)})
        return self.sign_of(path, p)

    def guard_holds(self, path, guard):
        return all(_rel_holds(self.sign_of(path, p), rel) for p, rel in guard)

    def time_successor(self, region):
        """The region one time step later (total: the last interval and a
        root-free line idle in place)."""
        q, path = region
        kids = self.tree.children(self.tree.node_at(path[:-1]))
        ci = path[-1]
        cell = kids[ci].cell
        if cell.kind == "full":
            return region
        if cell.kind == "interval" and ci == len(kids) - 1:
            return region
        return (q, path[:-1] + (ci + 1,))

    def _unique_zero(self, parent_path, fam_index, what):
        kids = self.tree.children(self.tree.node_at(parent_path))
        hits = [ci for ci, kid in enumerate(kids) if kid.cell.signs[fam_index] == 0]
        if len(hits) != 1:
            raise InternalInvariantError(
                "%s vanishes on %d cells of the line at %r" % (what, len(hits), parent_path)
            )
        return hits[0]

    def _target_path(self, path, t):
        k = len(path)
        kp = self.auto.level(t.target)
        if k > kp:
            return path[:kp]
        npath = path
        for idx, poly in t.update:
            u = p_sub(var(idx), poly)
            if is_zero(u):
                continue  # identity update
            lev, i = self.index_of[u]
            npath = npath[: lev - 1] + (self._unique_zero(npath[: lev - 1], i, poly_text(u)),)
        for lev in range(k + 1, kp + 1):
            _, i = self.index_of[var(lev)]
            npath = npath + (self._unique_zero(npath, i, "x%d" % lev),)
        return npath

    def discrete_successors(self, region):
        """Transitions enabled on the region, with their target regions."""
        q, path = region
        out = []
        for t in self.auto.transitions_from(q):
            if self.guard_holds(path, t.guard):
                out.append((t, (t.target, self._target_path(path, t))))
        return out

    def successors(self, region):
        """All outgoing edges as (kind, label, region) triples; kind is
        "time" or "act"."""
        out = [("time", None, self.time_successor(region))]
        for t, dst in self.discrete_successors(region):
            out.append(("act", t.action, dst))
        return out


class RegionGraph:
    __slots__ = ("space", "nodes", "edges", "initial")

    def __init__(self, space, nodes, edges, initial):
        self.space = space
        self.nodes = nodes
        self.edges = edges
        self.initial = initial


def build_region_graph(auto, extra=(), space=None):
    """The full region graph: every cell at every state's level, whether
    reachable or not."""
    if space is None:
        space = RegionSpace(auto, extra)
    levels = sorted({st.level for st in auto.states.values()})
    paths_at = {k: [] for k in levels}
    top = levels[-1]
    for node in space.tree.walk(top):
        if node.level in paths_at:
            paths_at[node.level].append(node.path)
    nodes = []
    for name in sorted(auto.states):
        for path in paths_at[auto.level(name)]:
            nodes.append((name, path))
    edges = {r: space.successors(r) for r in nodes}
    return RegionGraph(space, nodes, edges, space.initial_region())


class ReachResult:
    __slots__ = ("found", "witness", "explored", "space", "target")

    def __init__(self, found, witness, explored, space, target=None):
        self.found = found
        self.witness = witness
        self.explored = explored
        self.space = space
        self.target = target

    def __bool__(self):
        return self.found


def reach(auto, targets, extra=(), space=None):
    """Is some state in ``targets`` reachable?  Breadth-first search over
    regions, expanding the cell tree only along the frontier; the witness
    -- when found -- lists the moves from the initial region."""
    if isinstance(targets, str):
        targets = {targets}
    targets = set(targets)
    unknown = targets - set(auto.states)
    if unknown:
        raise DomainError("unknown target states: %s" % sorted(unknown))
    if space is None:
        space = RegionSpace(auto, extra)
    start = space.initial_region()
    parents = {start: None}
    queue = deque([start])
    explored = 0
    while queue:
        region = queue.popleft()
        if region[0] in targets:
            chain = []
            key = region
            while parents[key] is not None:
                prev, (kind, label) = parents[key]
                chain.append((kind, label, key))
                key = prev
            chain.reverse()
            witness = [("init", None, start)] + chain
            return ReachResult(True, witness, explored, space, region)
        explored += 1
        for kind, label, nxt in space.successors(region):
            if nxt not in parents:
                parents[nxt] = (region, (kind, label))
                queue.append(nxt)
    return ReachResult(False, None, explored, space)


# ---------------------------------------------------------------------------
# Branching-time formulas


_TRUE = ("true",)
_FALSE = ("false",)


class _CtlParser:
    _KEYWORDS = {"E", "A", "U", "EF", "AF", "EG", "AG", "and", "or", "not", "true", "false"}

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek_word(self):
        self._ws()
        m = re.match(r"[A-Za-z_][A-Za-z_0-9']*", self.text[self.pos :])
        return m.group(0) if m else None

    def _take_word(self):
        w = self._peek_word()
        if w is None:
            raise ParseError("expected a word at %r" % self.text[self.pos : self.pos + 12])
        self.pos += len(w)
        return w

    def _take(self, lit):
        self._ws()
        if not self.text.startswith(lit, self.pos):
            raise ParseError("expected %r at %r" % (lit, self.text[self.pos : self.pos + 12]))
        self.pos += len(lit)

    def parse(self):
        f = self.or_expr()
        self._ws()
        if self.pos != len(self.text):
            raise ParseError("trailing input at %r" % self.text[self.pos : self.pos + 12])
        return f

    def or_expr(self):
        f = self.and_expr()
        while self._peek_word() == "or":
            self._take_word()
            f = ("or", f, self.and_expr())
        return f

    def and_expr(self):
        f = self.unary()
        while self._peek_word() == "and":
            self._take_word()
            f = ("and", f, self.unary())
        return f

    def unary(self):
        w = self._peek_word()
        if w == "not":
            self._take_word()
            return ("not", self.unary())
        if w in ("EF", "AF"):
            self._take_word()
            return ("eu" if w == "EF" else "au", _TRUE, self.unary())
        if w == "EG":
            self._take_word()
            return ("not", ("au", _TRUE, ("not", self.unary())))
        if w == "AG":
            self._take_word()
            return ("not", ("eu", _TRUE, ("not", self.unary())))
        if w in ("E", "A"):
            self._take_word()
            left = self.unary()
            if self._peek_word() != "U":
                raise ParseError("expected U after %s" % w)
            self._take_word()
            right = self.unary()
            return ("eu" if w == "E" else "au", left, right)
        return self.primary()

    def primary(self):
        self._ws()
        if self.text.startswith("(", self.pos):
            self.pos += 1
            f = self.or_expr()
            self._take(")")
            return f
        w = self._peek_word()
        if w == "true":
            self._take_word()
            return _TRUE
        if w == "false":
            self._take_word()
            return _FALSE
        save = self.pos
        try:
            return self.comparison()
        except ParseError:
            self.pos = save
        w = self._take_word()
        if w in self._KEYWORDS:
            raise ParseError("misplaced keyword %r" % w)
        return ("state", w)

    def comparison(self):
        left = self.poly_operand()
        self._ws()
        for rel in ("<=", ">=", "!=", "<", ">", "="):
            if self.text.startswith(rel, self.pos):
                self.pos += len(rel)
                right = self.poly_operand()
                d = p_sub(left, right)
                if rel == "!=":
                    return ("not", ("cmp", d, "="))
                return ("cmp", d, rel)
        raise ParseError("expected a comparison at %r" % self.text[self.pos : self.pos + 12])

    def poly_operand(self):
        self._ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            rest = self.text[self.pos :]
            ch = rest[0]
            if depth == 0 and ch in "<>=!":
                break
            if depth == 0 and ch == ")":
                break
            if depth == 0 and re.match(r"(and|or|U)\b", rest):
                break
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            self.pos += 1
        frag = self.text[start : self.pos].strip()
        if not frag:
            raise ParseError("expected a polynomial at %r" % self.text[start : start + 12])
        return parse_poly(frag)


def parse_ctl(text):
    """Parse a branching-time formula over state names and polynomial
    sign constraints: ``EF/AF/EG/AG f``, ``E f U g``, ``A f U g``,
    ``and/or/not``, ``true/false``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty formula")
    return _CtlParser(text).parse()


def ctl_text(f):
    tag = f[0]
    if tag in ("true", "false"):
        return tag
    if tag == "state":
        return f[1]
    if tag == "cmp":
        return "%s %s 0" % (poly_text(f[1]), f[2])
    if tag == "not":
        return "not (%s)" % ctl_text(f[1])
    if tag in ("and", "or"):
        return "(%s %s %s)" % (ctl_text(f[1]), tag, ctl_text(f[2]))
    if tag == "eu":
        return "E (%s) U (%s)" % (ctl_text(f[1]), ctl_text(f[2]))
    if tag == "au":
        return "A (%s) U (%s)" % (ctl_text(f[1]), ctl_text(f[2]))
    raise DomainError("not a formula: %r" % (f,))


def ctl_polys(f):
    """The comparison polynomials occurring in a formula."""
    out = []

    def walk(g):
        if g[0] == "cmp":
            if not isinstance(g[1], Fraction) and g[1] not in out:
                out.append(g[1])
        elif g[0] == "not":
            walk(g[1])
        elif g[0] in ("and", "or", "eu", "au"):
            walk(g[1])
            walk(g[2])

    walk(f)
    return out


def _label(graph, f, memo):
    if f in memo:
        return memo[f]
    tag = f[0]
    nodes = graph.nodes
    if tag == "true":
        out = set(nodes)
    elif tag == "false":
        out = set()
    elif tag == "state":
        if f[1] not in graph.space.auto.states:
            raise DomainError("unknown state atom %r" % f[1])
        out = {r for r in nodes if r[0] == f[1]}
    elif tag == "cmp":
        _, poly, rel = f
        out = {r for r in nodes if _rel_holds(graph.space.atom_sign(r[1], poly), rel)}
    elif tag == "not":
        out = set(nodes) - _label(graph, f[1], memo)
    elif tag == "and":
        out = _label(graph, f[1], memo) & _label(graph, f[2], memo)
    elif tag == "or":
        out = _label(graph, f[1], memo) | _label(graph, f[2], memo)
    elif tag == "eu":
        hold = _label(graph, f[1], memo)
        goal = _label(graph, f[2], memo)
        out = set(goal)
        preds = {}
        for r in nodes:
            for _, _, dst in graph.edges[r]:
                preds.setdefault(dst, []).append(r)
        frontier = deque(out)
        while frontier:
            s = frontier.popleft()
            for p in preds.get(s, ()):
                if p not in out and (p in hold or p in goal):
                    out.add(p)
                    frontier.append(p)
    elif tag == "au":
        hold = _label(graph, f[1], memo)
        goal = _label(graph, f[2], memo)
        out = set(goal)
        changed = True
        while changed:
            changed = False
            for r in nodes:
                if r in out or (r not in hold and r not in goal):
                    continue
                if all(dst in out for _, _, dst in graph.edges[r]):
                    out.add(r)
                    changed = True
    else:
        raise DomainError("not a formula: %r" % (f,))
    memo[f] = out
    return out


def model_check(auto, formula, graph=None):
    """Does the initial configuration satisfy the formula?  Labels the
    full region graph bottom-up."""
    f = parse_ctl(formula) if isinstance(formula, str) else formula
    if graph is None:
        graph = build_region_graph(auto, extra=ctl_polys(f))
    sat = _label(graph, f, {})
    return graph.initial in sat


# ---------------------------------------------------------------------------
# Presentation


def region_text(region):
    q, path = region
    return "%s @ %s" % (q, ".".join(str(c) for c in path))


def witness_json(witness):
    out = []
    for kind, label, (q, path) in witness:
        step = {"kind": kind, "state": q, "cell": list(path)}
        if kind == "act":
            step["action"] = label
        out.append(step)
    return out


def verdict_json(formula, result, witness=None):
    out = {"formula": formula, "result": bool(result)}
    if witness is not None:
        out["witness"] = witness_json(witness)
    return out


def region_dot(graph):
    """Graphviz text for a region graph: boxes named "state @ cells",
    solid edges for transitions (internal moves labeled ~), dashed edges
    for time steps."""
    auto = graph.space.auto
    lines = ["digraph regions {", "  rankdir=LR;", '  node [shape=box fontname="monospace"];']
    for r in graph.nodes:
        attrs = []
        st = auto.states[r[0]]
        if st.final:
            attrs.append("peripheries=2")
        if r == graph.initial:
            attrs.append("style=bold")
        lines.append('  "%s"%s;' % (region_text(r), " [%s]" % " ".join(attrs) if attrs else ""))
    for r in graph.nodes:
        for kind, label, dst in graph.edges[r]:
            if kind == "time":
                lines.append('  "%s" -> "%s" [style=dashed];' % (region_text(r), region_text(dst)))
            else:
                lines.append(
                    '  "%s" -> "%s" [label="%s"];'
                    % (region_text(r), region_text(dst), label if label is not None else "~")
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
