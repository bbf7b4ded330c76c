"""Exact multivariate polynomial arithmetic over the rationals.

Polynomials live in Q[x1, ..., xn] with a fixed variable order.  The
representation is dense-recursive: a polynomial whose highest variable is
x_k ("level k") stores the tuple of its coefficients with respect to x_k,
each coefficient being a polynomial of strictly lower level; rational
constants are plain ``fractions.Fraction`` values (level 0).  The
representation is canonical -- no trailing zero coefficient, and a
polynomial of degree 0 in its top variable collapses to its constant
coefficient -- so structural equality coincides with mathematical equality
and every value is hashable.

Besides ring arithmetic the module provides the machinery this package's
real-algebraic layer is built from:

* signed subresultant coefficients ``sRes_j(P, Q)`` computed by the exact
  division-free recurrence on subresultant polynomials, with a
  Sylvester-Habicht determinant fallback for the equal-degree case and a
  determinant oracle usable as an independent cross-check.  The output
  convention is ``sRes_p = lcof(P)``, ``sRes_q = eps(p-q) * lcof(Q)^(p-q)``
  and ``sRes_j = 0`` for ``q < j < p - 1`` (for ``deg Q = q < p = deg P``).
* the in-ring Euclidean remainder ``int_rem(Q, P)`` returning a positive
  multiple of ``Rem(Q, P)`` without ever leaving the coefficient ring,
* generalized permanences minus variations ``pmv`` of a sign sequence,
  which ties subresultants to Cauchy indices,
* truncations, exact integral division, a fraction-free (Bareiss)
  determinant, and a small parser/printer for the text form used
  throughout the package (variables ``x1 .. xn``, integers, rationals
  ``p/q``, ``+ - * ^`` and parentheses).

Everything here is exact; floating point never appears.  Polynomial
factorization and gcd computation are deliberately out of scope (only the
*degree* of a gcd is ever needed, and it is read off the subresultant
coefficients).
"""

from fractions import Fraction
import math
import re

#: Degree of the zero polynomial.
NEG_INF = float("-inf")

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ParseError(ValueError):
    """Raised when a polynomial / formula / number text cannot be parsed."""


class DomainError(ValueError):
    """Raised when an operation is applied outside its stated domain."""


class InternalInvariantError(RuntimeError):
    """An internal exactness invariant failed (e.g. an integral division
    that is guaranteed by theory came out inexact)."""


class Poly:
    """A polynomial of level >= 1 in canonical dense-recursive form.

    ``coeffs[i]`` is the coefficient of ``x_level ** i`` and has level
    strictly below ``level``; the last entry is nonzero and ``len(coeffs)
    >= 2``.  Do not call the constructor directly -- use :func:`make_poly`,
    which canonicalizes.
    """

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level, coeffs):
        self.level = level
        self.coeffs = coeffs
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Poly):
            return False
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.level, self.coeffs))
            self._hash = h
        return h

    def __add__(self, other):
        return p_add(self, _as_ring(other))

    __radd__ = __add__

    def __sub__(self, other):
        return p_sub(self, _as_ring(other))

    def __rsub__(self, other):
        return p_sub(_as_ring(other), self)

    def __mul__(self, other):
        return p_mul(self, _as_ring(other))

    __rmul__ = __mul__

    def __neg__(self):
        return p_neg(self)

    def __pow__(self, n):
        return p_pow(self, n)

    def __repr__(self):
        return "Poly(%s)" % poly_text(self)


def _as_ring(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("not a ring element: %r" % (x,))


def const(x):
    """The constant polynomial ``x`` (an exact rational)."""
    return Fraction(x)


def var(k):
    """The polynomial ``x_k``."""
    if k < 1:
        raise DomainError("variable index must be >= 1")
    return Poly(k, (_ZERO, _ONE))


def level_of(p):
    """Level (index of the highest variable) of ``p``; 0 for constants."""
    return p.level if isinstance(p, Poly) else 0


def is_zero(p):
    """True iff ``p`` is the zero polynomial."""
    return isinstance(p, Fraction) and p == 0


def make_poly(level, coeffs):
    """Canonical polynomial of ``level`` with the given coefficients.

    Strips trailing zeros and collapses a degree-0 result to its constant
    coefficient, so the outcome may be a lower-level value or a Fraction.
    """
    cs = [_as_ring(c) for c in coeffs]
    while cs and is_zero(cs[-1]):
        cs.pop()
    if not cs:
        return _ZERO
    if len(cs) == 1:
        return cs[0]
    return Poly(level, tuple(cs))


def coeffs_in(p, k):
    """Coefficients of ``p`` viewed as a polynomial in ``x_k``.

    ``p`` must have level <= k.  The zero polynomial yields ``()``.
    """
    lv = level_of(p)
    if lv > k:
        raise DomainError("polynomial has level %d > %d" % (lv, k))
    if lv == k and isinstance(p, Poly):
        return p.coeffs
    if is_zero(p):
        return ()
    return (p,)


def p_add(a, b):
    a, b = _as_ring(a), _as_ring(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    k = max(level_of(a), level_of(b))
    ca, cb = coeffs_in(a, k), coeffs_in(b, k)
    out = []
    for i in range(max(len(ca), len(cb))):
        x = ca[i] if i < len(ca) else _ZERO
        y = cb[i] if i < len(cb) else _ZERO
        out.append(p_add(x, y))
    return make_poly(k, out)


def p_neg(a):
    a = _as_ring(a)
    if isinstance(a, Fraction):
        return -a
    return Poly(a.level, tuple(p_neg(c) for c in a.coeffs))


def p_sub(a, b):
    return p_add(a, p_neg(b))


def p_mul(a, b):
    a, b = _as_ring(a), _as_ring(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if is_zero(a) or is_zero(b):
        return _ZERO
    k = max(level_of(a), level_of(b))
    ca, cb = coeffs_in(a, k), coeffs_in(b, k)
    out = [_ZERO] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if is_zero(x):
            continue
        for j, y in enumerate(cb):
            if is_zero(y):
                continue
            out[i + j] = p_add(out[i + j], p_mul(x, y))
    return make_poly(k, out)


def p_pow(a, n):
    if n < 0:
        raise DomainError("negative exponent")
    acc = _ONE
    for _ in range(n):
        acc = p_mul(acc, a)
    return acc


def eval_at(p, values):
    """Substitute variables of ``p``.

    ``values`` maps variable indices to ring elements (Fractions or
    polynomials).  Unmentioned variables are kept.  Substituting every
    variable yields a Fraction.
    """
    if isinstance(p, Fraction):
        return p
    cs = [eval_at(c, values) for c in p.coeffs]
    if p.level in values:
        v = _as_ring(values[p.level])
        acc = _ZERO
        for c in reversed(cs):
            acc = p_add(p_mul(acc, v), c)
        return acc
    return make_poly(p.level, cs)


def evaluate(p, point):
    """Value of ``p`` at a rational point (sequence indexed by x1, x2, ...)."""
    vals = {i + 1: Fraction(v) for i, v in enumerate(point)}
    out = eval_at(p, vals)
    if not isinstance(out, Fraction):
        raise DomainError("point does not cover all variables of %r" % p)
    return out


def shift_var(p, k, delta):
    """``p`` with ``x_k`` replaced by ``x_k + delta``."""
    return eval_at(p, {k: make_poly(k, (Fraction(delta), _ONE))})


def derivative(p, k=None):
    """Partial derivative of ``p`` with respect to ``x_k`` (default: its
    top variable)."""
    if k is None:
        k = level_of(p)
    if k == 0 or level_of(p) < k:
        return _ZERO
    cs = coeffs_in(p, k)
    return make_poly(k, [p_mul(Fraction(i), cs[i]) for i in range(1, len(cs))])


def degree(p, k=None):
    """Degree of ``p`` in ``x_k``; ``NEG_INF`` for the zero polynomial.

    With ``k`` above the level of a nonzero ``p`` the degree is 0.  The
    default ``k`` is the polynomial's own top variable.
    """
    if is_zero(p):
        return NEG_INF
    if k is None:
        k = level_of(p)
    lv = level_of(p)
    if lv < k or k == 0:
        return 0
    if lv == k:
        return len(p.coeffs) - 1
    return max(degree(c, k) for c in p.coeffs if not is_zero(c))


def coeff_of(p, k, d):
    """Coefficient of ``x_k ** d`` in ``p`` (a polynomial in the other
    variables, which may include variables above ``x_k``)."""
    lv = level_of(p)
    if lv < k:
        return p if d == 0 else _ZERO
    if lv == k:
        cs = p.coeffs
        return cs[d] if 0 <= d < len(cs) else _ZERO
    return make_poly(lv, [coeff_of(c, k, d) for c in p.coeffs])


def lcof(p, k=None):
    """Leading coefficient of ``p`` in ``x_k`` (default: top variable).

    ``lcof`` of a nonzero constant is the constant itself; the zero
    polynomial has no leading coefficient.
    """
    if is_zero(p):
        raise DomainError("the zero polynomial has no leading coefficient")
    if k is None:
        k = level_of(p)
    if level_of(p) < k or k == 0:
        return p
    if level_of(p) == k:
        return p.coeffs[-1]
    return coeff_of(p, k, degree(p, k))


def truncations(p, k=None):
    """The set of truncations of ``p`` in ``x_k``, highest degree first.

    A truncation keeps the coefficients of degrees ``<= r`` where the
    leading kept coefficient is nonzero and every dropped coefficient is
    not a nonzero constant.  ``p`` itself is always included (for nonzero
    ``p``); the zero polynomial has no truncations.
    """
    if is_zero(p):
        return []
    if k is None:
        k = max(level_of(p), 1)
    cs = list(coeffs_in(p, k))
    out = []
    for r in range(len(cs) - 1, -1, -1):
        c = cs[r]
        if not is_zero(c):
            out.append(make_poly(k, cs[: r + 1]))
        if isinstance(c, Fraction) and c != 0:
            break  # a nonzero constant can never be dropped
    return out


def integral_div(a, b):
    """Exact quotient ``a / b`` in the polynomial ring, or ``None``.

    Returns ``c`` with ``a == b * c`` when ``b`` divides ``a`` exactly;
    ``None`` otherwise (including ``b == 0``).
    """
    a, b = _as_ring(a), _as_ring(b)
    if is_zero(b):
        return None
    if is_zero(a):
        return _ZERO
    if isinstance(b, Fraction):
        if isinstance(a, Fraction):
            return a / b
        inv = 1 / b
        return Poly(a.level, tuple(p_mul(inv, c) for c in a.coeffs))
    ka, kb = level_of(a), level_of(b)
    if ka < kb:
        return None
    if kb < ka:
        cs = []
        for c in coeffs_in(a, ka):
            q = integral_div(c, b)
            if q is None:
                return None
            cs.append(q)
        return make_poly(ka, cs)
    # same top variable: long division, exact or bust
    k = ka
    ca = list(coeffs_in(a, k))
    cb = coeffs_in(b, k)
    db = len(cb) - 1
    if len(ca) - 1 < db:
        return None
    out = [_ZERO] * (len(ca) - db)
    for i in range(len(ca) - 1, db - 1, -1):
        lead = ca[i]
        if is_zero(lead):
            continue
        q = integral_div(lead, cb[-1])
        if q is None:
            return None
        out[i - db] = q
        for j in range(db + 1):
            ca[i - db + j] = p_sub(ca[i - db + j], p_mul(q, cb[j]))
    if any(not is_zero(c) for c in ca[:db]):
        return None
    return make_poly(k, out)


def pseudo_rem(a, b, k=None, exponent=None):
    """``lcof(b)^e * Rem(a, b)`` computed entirely in the ring.

    ``e`` defaults to the number of reduction steps actually needed; pass
    ``exponent`` to force a specific (larger or equal) power, which keeps
    the result's relation to ``Rem(a, b)`` explicit.
    """
    a, b = _as_ring(a), _as_ring(b)
    if is_zero(b):
        raise DomainError("pseudo-remainder by zero")
    if k is None:
        k = max(level_of(a), level_of(b), 1)
    cb = coeffs_in(b, k)
    db = len(cb) - 1
    lb = cb[-1]
    ra = list(coeffs_in(a, k))
    used = 0
    while True:
        while ra and is_zero(ra[-1]):
            ra.pop()
        da = len(ra) - 1
        if da < db:
            break
        lead = ra[-1]
        ra = [p_mul(lb, c) for c in ra]
        for j in range(db + 1):
            ra[da - db + j] = p_sub(ra[da - db + j], p_mul(lead, cb[j]))
        used += 1
    rem = make_poly(k, ra)
    if exponent is not None:
        if exponent < used:
            raise DomainError("pseudo-remainder exponent too small")
        rem = p_mul(p_pow(lb, exponent - used), rem)
    return rem


def int_rem(q_poly, p_poly, k=None, stated_deg=None):
    """In-ring Euclidean remainder: ``(R, deg R)`` with ``R = c * Rem(Q, P)``.

    The factor ``c`` is an even power of ``lcof(P)``, hence positive
    wherever that leading coefficient does not vanish; in particular the
    sign of ``R`` agrees with the sign of ``Rem(Q, P)`` there.  ``q_poly``
    is the dividend.  ``stated_deg`` may overstate the dividend's formal
    degree (it only affects the positive factor).  The returned degree is
    the formal degree of ``R`` (``NEG_INF`` for zero).
    """
    q_poly, p_poly = _as_ring(q_poly), _as_ring(p_poly)
    if is_zero(p_poly):
        raise DomainError("remainder by the zero polynomial")
    if k is None:
        k = max(level_of(q_poly), level_of(p_poly), 1)
    P = coeffs_in(p_poly, k)
    p = len(P) - 1
    Q = list(coeffs_in(q_poly, k))
    q = len(Q) - 1
    if stated_deg is not None:
        if stated_deg < q:
            raise DomainError("stated degree below the actual degree")
        Q += [_ZERO] * (stated_deg - q)
        q = stated_deg
    if q < p:
        return q_poly, (NEG_INF if is_zero(q_poly) else q)
    for i in range(q - p, -1, -1):
        top = Q[i + p]
        for j in range(p):
            Q[i + j] = p_sub(p_mul(P[p], Q[i + j]), p_mul(P[j], top))
        for j in range(i):
            Q[j] = p_mul(P[p], Q[j])
    for i in range(p, q + 1):
        Q[i] = _ZERO
    if (q - p) % 2 == 0:
        for j in range(p):
            Q[j] = p_mul(P[p], Q[j])
    r = make_poly(k, Q)
    return r, degree(r, k) if not is_zero(r) else NEG_INF


def epsilon(i):
    """Sign of the permutation reversing ``i`` items: (-1)^(i(i-1)/2)."""
    return -1 if (i * (i - 1) // 2) % 2 else 1


def pmv(signs):
    """Generalized permanences minus variations of a sign sequence.

    ``signs`` lists the signs (ints, possibly 0) from the highest index
    down; the head must be nonzero.  Zero runs of even length are dropped,
    a zero run of odd length ``g`` between nonzero ``a .. b`` contributes
    ``epsilon(g) * sign(a*b)``; consecutive nonzero entries contribute
    +1 when equal and -1 when opposite.
    """
    s = list(signs)
    if not s or s[0] == 0:
        raise DomainError("pmv needs a sign sequence with a nonzero head")
    total = 0
    idx = 0
    while True:
        nxt = None
        for m in range(idx + 1, len(s)):
            if s[m] != 0:
                nxt = m
                break
        if nxt is None:
            return total
        gap = nxt - idx
        if gap % 2 == 1:
            total += epsilon(gap) * (1 if s[idx] * s[nxt] > 0 else -1)
        idx = nxt


def exact_determinant(rows):
    """Determinant of a square matrix of ring elements, by fraction-free
    (Bareiss) elimination; every division performed is exact."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise DomainError("determinant of a non-square matrix")
    if n == 0:
        return _ONE
    sign = 1
    prev = _ONE
    for k in range(n - 1):
        piv = None
        for r in range(k, n):
            if not is_zero(m[r][k]):
                piv = r
                break
        if piv is None:
            return _ZERO
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = p_sub(p_mul(m[i][j], m[k][k]), p_mul(m[i][k], m[k][j]))
                d = integral_div(num, prev)
                if d is None:
                    raise InternalInvariantError("Bareiss division failed")
                m[i][j] = d
            m[i][k] = _ZERO
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return p_neg(det) if sign < 0 else det


def _syha_rows(P, Q, j, k):
    """Rows of the order-``j`` Sylvester-Habicht matrix of (P, Q) in x_k."""
    cp = coeffs_in(P, k)
    cq = coeffs_in(Q, k)
    p, q = len(cp) - 1, len(cq) - 1
    width = p + q - j
    rows = []

    def row_of(coeffs, shift):
        # X^shift * poly as a vector over the basis X^(p+q-j-1) .. X^0
        r = []
        for col in range(width):
            d = width - 1 - col
            i = d - shift
            r.append(coeffs[i] if 0 <= i <= len(coeffs) - 1 else _ZERO)
        return r

    for m in range(q - j - 1, -1, -1):
        rows.append(row_of(cp, m))
    for m in range(p - j):
        rows.append(row_of(cq, m))
    return rows


def syha_determinant_oracle(P, Q, j, k=None):
    """``sRes_j(P, Q)`` straight from its defining determinant.

    Builds the order-``j`` Sylvester-Habicht matrix, keeps its first
    ``p + q - 2j`` columns and evaluates the determinant fraction-free.
    Indices above ``min(p-1, q)`` follow the usual conventions
    (``sRes_p = lcof(P)``, zero strictly between ``q`` and ``p``).
    Intended as an independent reference implementation; the equal-degree
    case of :func:`subresultants` also routes through it.
    """
    P, Q = _as_ring(P), _as_ring(Q)
    if is_zero(P) or is_zero(Q):
        raise DomainError("subresultants need nonzero polynomials")
    if k is None:
        k = max(level_of(P), level_of(Q), 1)
    p = len(coeffs_in(P, k)) - 1
    q = len(coeffs_in(Q, k)) - 1
    if q > p or p < 1:
        raise DomainError("need deg P >= max(deg Q, 1)")
    if j > p or j < 0:
        raise DomainError("subresultant index out of range")
    if j == p:
        return lcof(P, k)
    if j > min(p - 1, q):
        return _ZERO
    rows = _syha_rows(P, Q, j, k)
    size = p + q - 2 * j
    return exact_determinant([r[:size] for r in rows])


def subresultants(P, Q, k=None):
    """Signed subresultant coefficients ``[sRes_0, ..., sRes_p]`` of (P, Q).

    Requires ``deg P >= deg Q`` (formal degrees in ``x_k``, default the top
    variable) and ``deg P >= 1``.  For ``deg Q < deg P`` the values come
    from the exact recurrence on subresultant polynomials; the
    equal-degree case falls back to the defining determinants.  The
    entries live in the coefficient ring, and the degree of
    ``gcd(P, Q)`` (over the fraction field) is the least ``j`` with
    ``sRes_j != 0``.
    """
    P, Q = _as_ring(P), _as_ring(Q)
    if is_zero(P) or is_zero(Q):
        raise DomainError("subresultants need nonzero polynomials")
    if k is None:
        k = max(level_of(P), level_of(Q), 1)
    cp = coeffs_in(P, k)
    p = len(cp) - 1
    q = len(coeffs_in(Q, k)) - 1
    if q > p:
        raise DomainError("need deg Q <= deg P")
    if p < 1:
        raise DomainError("need deg P >= 1")
    if p == q:
        out = [syha_determinant_oracle(P, Q, j, k) for j in range(p)]
        out.append(cp[-1])
        return out

    a_p = cp[-1]
    sresp = {p: P, p - 1: Q}
    s = {p: _ONE}
    t = {p: _ONE}
    i, j = p + 1, p
    while j >= 1 and not is_zero(sresp.get(j - 1, _ZERO)):
        B = sresp[j - 1]
        kk = degree(B, k)
        t[j - 1] = lcof(B, k)
        if kk == j - 1:
            s[j - 1] = t[j - 1]
        else:
            for l in range(kk + 1, j):
                s[l] = _ZERO
            num = p_pow(t[j - 1], j - kk)
            den = p_pow(s[j], j - kk - 1)
            val = integral_div(num, den)
            if val is None:
                raise InternalInvariantError("defective-jump division failed")
            tk = p_mul(Fraction(epsilon(j - kk)), val)
            t[kk] = tk
            s[kk] = tk
            nxt = integral_div(p_mul(tk, B), t[j - 1])
            if nxt is None:
                raise InternalInvariantError("defective-jump scaling failed")
            sresp[kk] = nxt
        if kk >= 1:
            A = p_mul(p_mul(t[j - 1], s[kk]), sresp[i - 1])
            delta = j - kk
            rr = pseudo_rem(A, B, k, exponent=delta + 1)
            divisor = p_mul(p_mul(p_pow(t[j - 1], delta + 1), s[j]), t[i - 1])
            nxt = integral_div(p_neg(rr), divisor)
            if nxt is None:
                raise InternalInvariantError("subresultant remainder step failed")
            sresp[kk - 1] = nxt
        i, j = j, kk

    out = [_ZERO] * (p + 1)
    out[p] = a_p
    for jj in range(p):
        v = s.get(jj, _ZERO)
        out[jj] = v
    return out


def rational_content(p):
    """The positive rational content of a nonzero polynomial."""
    num = 0
    den = 1
    stack = [p]
    while stack:
        c = stack.pop()
        if isinstance(c, Fraction):
            if c != 0:
                num = math.gcd(num, abs(c.numerator))
                den = den * c.denominator // math.gcd(den, c.denominator)
        else:
            stack.extend(c.coeffs)
    if num == 0:
        raise DomainError("the zero polynomial has no content")
    return Fraction(num, den)


def primitive_part(p):
    """``p`` divided by its positive rational content (sign preserved)."""
    if is_zero(p):
        return _ZERO
    c = rational_content(p)
    if c == 1:
        return p
    out = integral_div(p, c)
    assert out is not None
    return out


# ---------------------------------------------------------------------------
# text form


_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d*)|(\^)|(\+)|(-)|(\*)|(/)|(\()|(\)))")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError("bad token at %r" % rest[:10])
        pos = m.end()
        if m.group(1):
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("var", int(m.group(2)[1:] or "1")))  # bare x means x1
        else:
            out.append((m.group(0).strip(), None))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        if self.peek() in ("+", "-"):
            sign_tok = self.take()[0]
            acc = self.term()
            if sign_tok == "-":
                acc = p_neg(acc)
        else:
            acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = p_add(acc, rhs) if op == "+" else p_sub(acc, rhs)
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = p_mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        while self.peek() == "^":
            self.take()
            kind, val = self.take() if self.pos < len(self.tokens) else (None, None)
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer")
            base = p_pow(base, val)
        return base

    def atom(self):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input")
        kind, val = self.take()
        if kind == "int":
            if self.peek() == "/":
                self.take()
                k2, v2 = self.take() if self.pos < len(self.tokens) else (None, None)
                if k2 != "int" or v2 == 0:
                    raise ParseError("malformed rational literal")
                return Fraction(val, v2)
            return Fraction(val)
        if kind == "var":
            if val < 1:
                raise ParseError("variable indices start at x1")
            return var(val)
        if kind == "(":
            inner = self.expr()
            if self.peek() != ")":
                raise ParseError("missing closing parenthesis")
            self.take()
            return inner
        if kind == "-":
            return p_neg(self.factor())
        raise ParseError("unexpected token %r" % kind)


def parse_poly(text):
    """Parse the text form of a polynomial (see module docstring)."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty polynomial text")
    parser = _Parser(_tokenize(text))
    out = parser.expr()
    if parser.pos != len(parser.tokens):
        raise ParseError("trailing input after polynomial")
    return out


def to_monomials(p):
    """``{exponent tuple: coefficient}`` with tuples padded to the level."""
    lv = level_of(p)
    out = {}

    def walk(q, exps):
        if isinstance(q, Fraction):
            if q != 0:
                key = tuple(exps.get(i + 1, 0) for i in range(lv))
                out[key] = out.get(key, _ZERO) + q
            return
        for i, c in enumerate(q.coeffs):
            if is_zero(c):
                continue
            exps[q.level] = i
            walk(c, exps)
        exps.pop(q.level, None)

    walk(p, {})
    return out


def poly_text(p):
    """Deterministic text form; ``parse_poly`` round-trips it exactly."""
    if is_zero(p):
        return "0"
    monos = to_monomials(p)
    keys = sorted(monos, key=lambda e: tuple(reversed(e)), reverse=True)
    pieces = []
    for e in keys:
        coef = monos[e]
        vars_part = "*".join(
            "x%d" % (i + 1) if n == 1 else "x%d^%d" % (i + 1, n)
            for i, n in enumerate(e)
            if n
        )
        mag = abs(coef)
        if not vars_part:
            body = str(mag)
        elif mag == 1:
            body = vars_part
        else:
            body = "%s*%s" % (mag, vars_part)
        if not pieces:
            pieces.append(body if coef > 0 else "-" + body)
        else:
            pieces.append(("+ " if coef > 0 else "- ") + body)
    return " ".join(pieces)
