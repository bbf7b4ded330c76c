"""Deciding sentences of the first-order theory of the reals.

Formulas are built from polynomial comparisons over x1, x2, ..., the
connectives ``and / or / not`` and the quantifiers ``forall xk . f`` /
``exists xk . f``.  Comparisons normalize to the primitives ``e < 0`` and
``e = 0``; the other relations are spelled with negation and disjunction
(``a >= b`` is ``b - a < 0 or a - b = 0`` and so on).

``decide`` brings the sentence to prenex form, renames the quantified
variables so the i-th quantifier binds x_i, runs elimination on the atom
polynomials and walks the cell tree: at a leaf every atom has a known
sign, at an existential level one true child suffices, at a universal
level all children must hold.  Short-circuiting keeps the walk lazy --
subtrees never needed are never built.
"""

import re
from fractions import Fraction

from .cad import CadTree, eliminate_all
from .polycore import (
    DomainError,
    ParseError,
    _as_ring,
    eval_at,
    level_of,
    p_sub,
    parse_poly,
    poly_text,
    var,
)


class Atom:
    """``poly < 0`` (rel "lt") or ``poly = 0`` (rel "eq")."""

    __slots__ = ("rel", "poly")

    def __init__(self, rel, poly):
        if rel not in ("lt", "eq"):
            raise DomainError("unknown atom relation %r" % rel)
        self.rel = rel
        self.poly = _as_ring(poly)

    def __repr__(self):
        return "Atom(%s %s 0)" % (poly_text(self.poly), "<" if self.rel == "lt" else "=")


class Not:
    __slots__ = ("sub",)

    def __init__(self, sub):
        self.sub = sub


class And:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class Or:
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class Quant:
    __slots__ = ("kind", "var", "sub")

    def __init__(self, kind, v, sub):
        if kind not in ("forall", "exists"):
            raise DomainError("unknown quantifier %r" % kind)
        self.kind = kind
        self.var = v
        self.sub = sub


def atom_compare(left, rel, right):
    """Comparison ``left REL right`` as a formula over the primitives."""
    d = p_sub(_as_ring(left), _as_ring(right))
    if rel == "<":
        return Atom("lt", d)
    if rel == ">":
        return Atom("lt", p_sub(0, d))
    if rel == "=":
        return Atom("eq", d)
    if rel == "!=":
        return Not(Atom("eq", d))
    if rel == "<=":
        return Or(Atom("lt", d), Atom("eq", d))
    if rel == ">=":
        return Or(Atom("lt", p_sub(0, d)), Atom("eq", d))
    raise ParseError("unknown relation %r" % rel)


class _FoParser:
    """Recursive-descent parser for the formula grammar."""

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek_word(self):
        self._ws()
        m = re.match(r"[A-Za-z_][A-Za-z_0-9]*", self.text[self.pos :])
        return m.group(0) if m else None

    def _take_word(self, expect=None):
        self._ws()
        m = re.match(r"[A-Za-z_][A-Za-z_0-9]*", self.text[self.pos :])
        if not m or (expect and m.group(0) != expect):
            raise ParseError("expected %s at %r" % (expect, self.text[self.pos : self.pos + 12]))
        self.pos += m.end()
        return m.group(0)

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
            self._take_word("or")
            f = Or(f, self.and_expr())
        return f

    def and_expr(self):
        f = self.unary()
        while self._peek_word() == "and":
            self._take_word("and")
            f = And(f, self.unary())
        return f

    def unary(self):
        w = self._peek_word()
        if w == "not":
            self._take_word("not")
            return Not(self.unary())
        if w in ("forall", "exists"):
            self._take_word(w)
            v = self._take_word()
            m = re.match(r"^x(\d*)$", v)
            if not m:
                raise ParseError("quantifier needs a variable x<k>, got %r" % v)
            self._take(".")
            return Quant(w, int(m.group(1) or 1), self.or_expr())
        return self.primary()

    def primary(self):
        self._ws()
        # '(' may open a subformula or parenthesize a polynomial operand;
        # try the formula reading first and fall back on failure
        if self.text.startswith("(", self.pos):
            save = self.pos
            self.pos += 1
            try:
                f = self.or_expr()
                self._take(")")
                return f
            except ParseError:
                self.pos = save
        return self.comparison()

    def comparison(self):
        left = self.poly_operand()
        self._ws()
        for rel in ("<=", ">=", "!=", "<", ">", "="):
            if self.text.startswith(rel, self.pos):
                self.pos += len(rel)
                right = self.poly_operand()
                return atom_compare(left, rel, right)
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
            if depth == 0 and re.match(r"(and|or)\b", rest):
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


def parse_formula(text):
    """Parse the formula grammar (see module docstring)."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty formula")
    return _FoParser(text).parse()


def formula_text(f):
    if isinstance(f, Atom):
        return "%s %s 0" % (poly_text(f.poly), "<" if f.rel == "lt" else "=")
    if isinstance(f, Not):
        return "not (%s)" % formula_text(f.sub)
    if isinstance(f, And):
        return "(%s and %s)" % (formula_text(f.left), formula_text(f.right))
    if isinstance(f, Or):
        return "(%s or %s)" % (formula_text(f.left), formula_text(f.right))
    if isinstance(f, Quant):
        return "%s x%d . (%s)" % (f.kind, f.var, formula_text(f.sub))
    raise DomainError("not a formula: %r" % (f,))


def _max_var(f):
    if isinstance(f, Atom):
        return level_of(f.poly)
    if isinstance(f, Not):
        return _max_var(f.sub)
    if isinstance(f, (And, Or)):
        return max(_max_var(f.left), _max_var(f.right))
    if isinstance(f, Quant):
        return max(f.var, _max_var(f.sub))
    raise DomainError("not a formula: %r" % (f,))


def _rename_binders_apart(f, env, counter):
    if isinstance(f, Atom):
        keep = {v: var(w) for v, w in env.items() if v != w}
        return Atom(f.rel, eval_at(f.poly, keep) if keep else f.poly)
    if isinstance(f, Not):
        return Not(_rename_binders_apart(f.sub, env, counter))
    if isinstance(f, And):
        return And(
            _rename_binders_apart(f.left, env, counter),
            _rename_binders_apart(f.right, env, counter),
        )
    if isinstance(f, Or):
        return Or(
            _rename_binders_apart(f.left, env, counter),
            _rename_binders_apart(f.right, env, counter),
        )
    if isinstance(f, Quant):
        counter[0] += 1
        fresh = counter[0]
        env2 = dict(env)
        env2[f.var] = fresh
        return Quant(f.kind, fresh, _rename_binders_apart(f.sub, env2, counter))
    raise DomainError("not a formula: %r" % (f,))


def _to_nnf(f, neg):
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _to_nnf(f.sub, not neg)
    if isinstance(f, And):
        l, r = _to_nnf(f.left, neg), _to_nnf(f.right, neg)
        return Or(l, r) if neg else And(l, r)
    if isinstance(f, Or):
        l, r = _to_nnf(f.left, neg), _to_nnf(f.right, neg)
        return And(l, r) if neg else Or(l, r)
    if isinstance(f, Quant):
        kind = f.kind
        if neg:
            kind = "exists" if kind == "forall" else "forall"
        return Quant(kind, f.var, _to_nnf(f.sub, neg))
    raise DomainError("not a formula: %r" % (f,))


def _pull_quantifiers(f):
    if isinstance(f, (Atom, Not)):
        return [], f
    if isinstance(f, Quant):
        prefix, matrix = _pull_quantifiers(f.sub)
        return [(f.kind, f.var)] + prefix, matrix
    if isinstance(f, (And, Or)):
        pl, ml = _pull_quantifiers(f.left)
        pr, mr = _pull_quantifiers(f.right)
        node = And if isinstance(f, And) else Or
        return pl + pr, node(ml, mr)
    raise DomainError("not a formula: %r" % (f,))


def _substitute(f, env):
    if not env:
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, eval_at(f.poly, env))
    if isinstance(f, Not):
        return Not(_substitute(f.sub, env))
    if isinstance(f, And):
        return And(_substitute(f.left, env), _substitute(f.right, env))
    if isinstance(f, Or):
        return Or(_substitute(f.left, env), _substitute(f.right, env))
    raise DomainError("not a quantifier-free formula: %r" % (f,))


def to_prenex(f):
    """Equivalent prenex formula: negations pushed to the atoms, all
    quantifiers pulled to the front and renamed to x1..xm in prefix
    order (so an already-prenex sentence comes back unchanged)."""
    counter = [_max_var(f)]
    g = _rename_binders_apart(f, {}, counter)
    g = _to_nnf(g, False)
    prefix, matrix = _pull_quantifiers(g)
    bound = set(v for _, v in prefix)
    if free_vars(matrix) <= bound:
        env = {v: var(i + 1) for i, (_, v) in enumerate(prefix) if v != i + 1}
        matrix = _substitute(matrix, env)
        prefix = [(kind, i + 1) for i, (kind, _) in enumerate(prefix)]
    for kind, v in reversed(prefix):
        matrix = Quant(kind, v, matrix)
    return matrix


def free_vars(f, bound=frozenset()):
    """Indices of the variables occurring free in ``f``."""
    if isinstance(f, Atom):
        out = set()
        stack = [f.poly]
        while stack:
            p = stack.pop()
            if level_of(p) == 0:
                continue
            if p.level not in bound:
                out.add(p.level)
            stack.extend(p.coeffs)
        return out
    if isinstance(f, Not):
        return free_vars(f.sub, bound)
    if isinstance(f, (And, Or)):
        return free_vars(f.left, bound) | free_vars(f.right, bound)
    if isinstance(f, Quant):
        return free_vars(f.sub, bound | {f.var})
    raise DomainError("not a formula: %r" % (f,))


def _eval_matrix(f, atom_sign):
    if isinstance(f, Atom):
        s = atom_sign(f.poly)
        return s < 0 if f.rel == "lt" else s == 0
    if isinstance(f, Not):
        return not _eval_matrix(f.sub, atom_sign)
    if isinstance(f, And):
        return _eval_matrix(f.left, atom_sign) and _eval_matrix(f.right, atom_sign)
    if isinstance(f, Or):
        return _eval_matrix(f.left, atom_sign) or _eval_matrix(f.right, atom_sign)
    raise DomainError("quantifier inside a matrix")


def _sgn_const(c):
    return 1 if c > 0 else -1 if c < 0 else 0


def decide(f):
    """Truth value of a first-order sentence over the reals."""
    if isinstance(f, str):
        f = parse_formula(f)
    if free_vars(f):
        raise DomainError("free variables %s: not a sentence" % sorted(free_vars(f)))
    g = to_prenex(f)
    prefix = []
    while isinstance(g, Quant):
        prefix.append((g.kind, g.var))
        g = g.sub
    rename = {v: var(i + 1) for i, (_, v) in enumerate(prefix) if v != i + 1}

    def ren(h):
        if isinstance(h, Atom):
            return Atom(h.rel, eval_at(h.poly, rename) if rename else h.poly)
        if isinstance(h, Not):
            return Not(ren(h.sub))
        if isinstance(h, And):
            return And(ren(h.left), ren(h.right))
        if isinstance(h, Or):
            return Or(ren(h.left), ren(h.right))
        raise DomainError("quantifier inside a matrix")

    matrix = ren(g)
    m = len(prefix)
    if m == 0:
        return _eval_matrix(matrix, _sgn_const)

    atoms = []

    def collect(h):
        if isinstance(h, Atom):
            if not isinstance(h.poly, Fraction) and h.poly not in atoms:
                atoms.append(h.poly)
        elif isinstance(h, Not):
            collect(h.sub)
        elif isinstance(h, (And, Or)):
            collect(h.left)
            collect(h.right)

    collect(matrix)
    families = [[] for _ in range(m)]
    for p in atoms:
        families[level_of(p) - 1].append(p)
    fams = eliminate_all(families)
    index_of = {}
    for lev, fam in enumerate(fams):
        for i, p in enumerate(fam):
            index_of.setdefault(p, (lev + 1, i))

    tree = CadTree(fams)

    def check(node, cells):
        if node.level == m:

            def atom_sign(p):
                if isinstance(p, Fraction):
                    return _sgn_const(p)
                lev, i = index_of[p]
                return cells[lev - 1].signs[i]

            return _eval_matrix(matrix, atom_sign)
        kind = prefix[node.level][0]
        kids = tree.children(node)
        if kind == "exists":
            return any(check(c, cells + [c.cell]) for c in kids)
        return all(check(c, cells + [c.cell]) for c in kids)

    return check(tree.root, [])
