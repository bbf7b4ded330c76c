"""Sign determination at real algebraic points, without numbers.

A point is described by a *triangular system*: a tuple of entries
``(n_i, P_i, p_i)``, one per level, meaning "x_i is the n_i-th real root
(in increasing order) of P_i(x_1, ..., x_i)", where ``p_i`` is the degree
of ``P_i`` in ``x_i`` -- exact both formally and once the earlier
coordinates are plugged in, so the leading coefficient does not vanish at
the point.  The empty tuple describes the unique point of R^0, and a
rational coordinate ``c`` is the entry ``(1, x_i - c, 1)``.

Everything reduces to Tarski queries: ``TaQ(Q, P)``, the sum of the signs
of Q over the distinct real roots of P, equals the Cauchy index of
``P' Q / P``, which in turn is the generalized permanences-minus-variations
count of the signed subresultant coefficients of ``P`` and ``Rem(P' Q, P)``.
Those coefficients live one level down, so their signs are found by the
same machinery at the shorter system -- the recursion grounds out in
rational arithmetic.  Sign conditions realized by a whole family of
polynomials at the roots of P come from batches of Tarski queries tied
together by exact linear algebra over small {-1,0,1}-structured matrices,
and each root is told apart from its neighbours by the signs of the
derivatives of a polynomial at it (its Thom encoding), which also orders
the roots.
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
    int_rem,
    is_zero,
    level_of,
    make_poly,
    p_mul,
    pmv,
    subresultants,
    _as_ring,
)

# rows e = 0, 1, 2; columns sigma = -1, 0, +1; entry sigma^e with 0^0 = 1
M1 = ((1, 1, 1), (-1, 0, 1), (1, 0, 1))

_SIGN_CACHE = {}
_PMV_CACHE = {}
_CODING_CACHE = {}


def clear_caches():
    _SIGN_CACHE.clear()
    _PMV_CACHE.clear()
    _CODING_CACHE.clear()


def _sgn(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def rational_point(*coords):
    """Triangular system pinning x_1..x_m to the given rationals."""
    out = []
    for i, c in enumerate(coords):
        out.append((1, make_poly(i + 1, (-Fraction(c), Fraction(1))), 1))
    return tuple(out)


def sign_at(T, P):
    """Sign (-1, 0, +1) of polynomial ``P`` at the point described by ``T``.

    ``P`` may involve x_1 .. x_len(T) only.
    """
    P = _as_ring(P)
    if isinstance(P, Fraction):
        return _sgn(P)
    if P.level > len(T):
        raise DomainError(
            "polynomial in x%d at a %d-level point" % (P.level, len(T))
        )
    T_eff = tuple(T[: P.level])
    key = (T_eff, P)
    hit = _SIGN_CACHE.get(key)
    if hit is None:
        hit = _sign_rec(T_eff, P)
        _SIGN_CACHE[key] = hit
    return hit


def _sign_rec(T, P):
    lev = len(T)  # == level_of(P)
    n_l, P_l, p_l = T[-1]
    if degree(P, lev) >= p_l:
        # replace P by a positive multiple of Rem(P, P_l): the dropped
        # factor is an even power of lcof(P_l), nonzero at the point
        P, _ = int_rem(P, P_l, lev)
        if is_zero(P):
            return 0
        if level_of(P) < lev:
            return sign_at(T[:-1], P)
    prefix = tuple(T[:-1])
    R, r = normalize_at(prefix, P, lev)
    if r == NEG_INF:
        return 0
    if r == 0:
        return sign_at(prefix, coeff_of(R, lev, 0))
    codes = root_coding(prefix, P_l, R)
    if n_l > len(codes):
        raise InternalInvariantError("root index beyond the actual root count")
    return codes[n_l - 1][0]


def degree_at(T, P, k=None):
    """Degree of ``P`` in ``x_k`` once x_1..x_len(T) take the values of
    ``T`` -- leading coefficients may die.  ``NEG_INF`` if all of them do
    (or P is zero)."""
    if k is None:
        k = len(T) + 1
    if is_zero(P):
        return NEG_INF
    cs = coeffs_in(P, k)
    for d in range(len(cs) - 1, -1, -1):
        if sign_at(T, cs[d]) != 0:
            return d
    return NEG_INF


def normalize_at(T, P, k=None):
    """Truncate ``P`` in ``x_k`` to its degree at ``T``.

    Returns ``(R, r)`` where ``r = degree_at(T, P, k)`` and ``R`` keeps the
    coefficients of degree <= r; the dropped ones vanish at the point, so
    R and P agree there as functions of x_k.  The zero case is ``(0,
    NEG_INF)``.
    """
    if k is None:
        k = len(T) + 1
    r = degree_at(T, P, k)
    if r == NEG_INF:
        return Fraction(0), NEG_INF
    cs = coeffs_in(P, k)
    if r == len(cs) - 1:
        return P, r
    return make_poly(k, cs[: r + 1]), r


def is_triangular(T):
    """Whether ``T`` is a well-formed triangular system: each level's
    polynomial has the stated degree (formally and at the point below) and
    its root index is within the actual number of real roots."""
    for i, entry in enumerate(T):
        if len(entry) != 3:
            return False
        n_i, P_i, p_i = entry
        if not isinstance(n_i, int) or n_i < 1:
            return False
        P_i = _as_ring(P_i)
        if level_of(P_i) > i + 1:
            return False
        if not isinstance(p_i, int) or p_i < 1 or degree(P_i, i + 1) != p_i:
            return False
        prefix = tuple(T[:i])
        if degree_at(prefix, P_i, i + 1) != p_i:
            return False
        if n_i > count_roots(prefix, P_i):
            return False
    return True


def pmv_pol(T, P, Q):
    """Cauchy index of ``Q / P`` on the line x_{len(T)+1} over the point
    ``T``, via subresultant coefficient signs.

    Both polynomials are first truncated to their degrees at the point;
    a ``Q`` of degree >= deg P is replaced by a positive multiple of its
    remainder.  The index of anything over a root-free or constant P is 0.
    """
    P, Q = _as_ring(P), _as_ring(Q)
    key = (tuple(T), P, Q)
    hit = _PMV_CACHE.get(key)
    if hit is None:
        hit = _pmv_pol(tuple(T), P, Q)
        _PMV_CACHE[key] = hit
    return hit


def _pmv_pol(T, P, Q):
    k = len(T) + 1
    P, p = normalize_at(T, P, k)
    if p == NEG_INF:
        raise DomainError("Cauchy index over an identically zero polynomial")
    if p < 1:
        return 0
    Q, q = normalize_at(T, Q, k)
    if q == NEG_INF:
        return 0
    if q >= p:
        Q, _ = int_rem(Q, P, k)  # positive multiple of Rem at the point
        Q, q = normalize_at(T, Q, k)
        if q == NEG_INF:
            return 0
    sres = subresultants(P, Q, k)
    signs = [sign_at(T, sres[j]) for j in range(p, -1, -1)]
    return pmv(signs)


def tarski_query(T, Q, P):
    """Sum of the signs of ``Q`` over the distinct real roots of ``P`` on
    the line x_{len(T)+1} above the point ``T``."""
    P, Q = _as_ring(P), _as_ring(Q)
    k = len(T) + 1
    Pn, p = normalize_at(T, P, k)
    if p == NEG_INF:
        raise DomainError("Tarski query over an identically zero polynomial")
    if p < 1:
        return 0
    return pmv_pol(T, Pn, p_mul(derivative(Pn, k), Q))


def count_roots(T, P):
    """Number of distinct real roots of ``P`` on the line above ``T``."""
    return tarski_query(T, Fraction(1), P)


def adapted_set(sigmas):
    """Exponent tuples adapted to a set of sign vectors.

    Given distinct sign vectors over m polynomials, returns an equal-sized
    list of exponent tuples in {0,1,2}^m whose evaluation matrix against
    the vectors is invertible.  Built by recursion on the first
    coordinate: tails realized with k distinct first signs contribute
    their own adapted tuples prefixed with 0 .. k-1.
    """
    sig = []
    for s in sigmas:
        s = tuple(s)
        if s not in sig:
            sig.append(s)
    if not sig:
        return []
    m = len(sig[0])
    if any(len(s) != m for s in sig):
        raise DomainError("sign vectors of mixed lengths")
    if m == 0:
        return [()]
    tails = []
    mult = {}
    for s in sig:
        t = s[1:]
        if t not in mult:
            mult[t] = set()
            tails.append(t)
        mult[t].add(s[0])
    out = []
    for e in range(3):
        level_tails = [t for t in tails if len(mult[t]) >= e + 1]
        for a in adapted_set(level_tails):
            out.append((e,) + a)
    return out


def _matrix_entry(exps, sigma):
    v = 1
    for e, s in zip(exps, sigma):
        if e == 1:
            v *= s
        elif e == 2:
            v *= s * s
    return v


def _solve_exact(rows, rhs):
    """Solve a square exact linear system over the rationals."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise InternalInvariantError("singular sign-determination system")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _first_independent_rows(matrix_rows, row_labels, want):
    """Greedy prefix of ``want`` linearly independent rows (exact)."""
    basis = []
    picked = []
    for label, row in zip(row_labels, matrix_rows):
        vec = [Fraction(x) for x in row]
        for bvec in basis:
            lead = next((i for i, x in enumerate(bvec) if x != 0), None)
            if lead is not None and vec[lead] != 0:
                f = vec[lead] / bvec[lead]
                vec = [a - f * b for a, b in zip(vec, bvec)]
        if any(x != 0 for x in vec):
            basis.append(vec)
            picked.append(label)
            if len(picked) == want:
                return picked
    if want and len(picked) < want:
        raise InternalInvariantError("rank too small for an adapted subset")
    return picked


def sign_realization(T, P, Qs):
    """Sign conditions of the family ``Qs`` realized at the roots of ``P``.

    Returns ``{sign vector: number of roots realizing it}`` where each
    vector lists signs in the order of ``Qs``.  ``P`` lives on the line
    x_{len(T)+1} above ``T``.  Computed from Tarski queries of products of
    small powers, solving exact linear systems over subsets kept adapted
    (invertible) at every round.
    """
    T = tuple(T)
    P = _as_ring(P)
    k = len(T) + 1
    P, p = normalize_at(T, P, k)
    if p == NEG_INF:
        raise DomainError("sign realization over an identically zero polynomial")
    if p < 1:
        return {}
    Qs = [_as_ring(Q) for Q in Qs]
    m = len(Qs)
    dP = derivative(P, k)

    taq_cache = {}

    def taq_of_exponents(exps):
        # exps pairs (family index, exponent>0); TaQ(prod Q_i^e_i, P)
        key = tuple(sorted(exps))
        hit = taq_cache.get(key)
        if hit is None:
            R = dP
            for idx, e in exps:
                for _ in range(e):
                    R = p_mul(R, Qs[idx])
            if degree(R, k) >= p:
                R, _ = int_rem(R, P, k)
            hit = pmv_pol(T, P, R)
            taq_cache[key] = hit
        return hit

    if m == 0:
        n = count_roots(T, P)
        return {(): n} if n else {}

    # round one: last family element alone
    taq = [taq_of_exponents([(m - 1, e)] if e else []) for e in range(3)]
    counts = _solve_exact(M1, taq)
    sig, nb = _check_counts([(-1,), (0,), (1,)], counts)
    if not sig:
        return {}
    A = adapted_set(sig)
    M = [[_matrix_entry(a, s) for s in sig] for a in A]

    for i in range(m - 2, -1, -1):
        ext_sig = [(s,) + t for s in (-1, 0, 1) for t in sig]
        ext_A = [(e,) + a for e in range(3) for a in A]
        ext_M = [
            [M1[e][s + 1] * M[ai][si] for s in (-1, 0, 1) for si in range(len(sig))]
            for e in range(3)
            for ai in range(len(A))
        ]
        taq = []
        for exps in ext_A:
            pairs = [(i, exps[0])] if exps[0] else []
            pairs += [(i + 1 + j, e) for j, e in enumerate(exps[1:]) if e]
            taq.append(taq_of_exponents(pairs))
        counts = _solve_exact(ext_M, taq)
        new_sig, new_nb = _check_counts(ext_sig, counts)

        per_tail = {}
        for s in new_sig:
            per_tail[s[1:]] = per_tail.get(s[1:], 0) + 1
        sig2 = [t for t in sig if per_tail.get(t, 0) >= 2]
        sig3 = [t for t in sig if per_tail.get(t, 0) >= 3]
        A1 = A
        A2 = _first_independent_rows(
            [[M[ai][sig.index(t)] for t in sig2] for ai in range(len(A))],
            A,
            len(sig2),
        )
        A3 = _first_independent_rows(
            [[_matrix_entry(a, t) for t in sig3] for a in A2],
            A2,
            len(sig3),
        )
        sig = new_sig
        nb = new_nb
        A = [(0,) + a for a in A1] + [(1,) + a for a in A2] + [(2,) + a for a in A3]
        if len(A) != len(sig):
            raise InternalInvariantError("adapted set size drifted")
        M = [[_matrix_entry(a, s) for s in sig] for a in A]

    return dict(zip(sig, nb))


def _check_counts(candidates, counts):
    sig, nb = [], []
    for cand, c in zip(candidates, counts):
        if c.denominator != 1 or c < 0:
            raise InternalInvariantError("non-integral root count %s" % c)
        if c:
            sig.append(cand)
            nb.append(int(c))
    return sig, nb


def thom_compare(a, b):
    """Order two sign vectors over the derivatives of one polynomial
    (ascending derivative order, value included).

    Returns -1, 0 or 1 as the point realizing ``a`` lies left of, at, or
    right of the one realizing ``b``.  Vectors of different lengths, or
    vectors that no pair of points of one polynomial can realize, are
    rejected.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise DomainError("Thom encodings of different lengths")
    if a == b:
        return 0
    k = max(i for i in range(len(a)) if a[i] != b[i])
    if k + 1 >= len(a) or a[k + 1] != b[k + 1] or a[k + 1] == 0:
        raise DomainError("sign vectors not realizable at two points")
    if a[k + 1] == 1:
        return -1 if a[k] < b[k] else 1
    return -1 if a[k] > b[k] else 1


def root_coding(T, P, Q):
    """Sign vectors of ``(Q, Q', ..., Q^(q))`` at the real roots of ``P``,
    listed in increasing root order (one entry per root, repeats allowed).

    ``q`` is the degree of Q at the point; with ``Q = P`` this yields the
    Thom encodings of the roots, which are pairwise distinct.
    """
    T = tuple(T)
    P, Q = _as_ring(P), _as_ring(Q)
    key = (T, P, Q)
    hit = _CODING_CACHE.get(key)
    if hit is None:
        hit = _root_coding(T, P, Q)
        _CODING_CACHE[key] = hit
    return hit


def _root_coding(T, P, Q):
    k = len(T) + 1
    Qn, q = normalize_at(T, Q, k)
    if q == NEG_INF:
        raise DomainError("root coding by an identically zero polynomial")
    fam = [Qn]
    for _ in range(q):
        fam.append(derivative(fam[-1], k))
    realized = sign_realization(T, P, fam)
    ordered = sorted(realized, key=cmp_to_key(thom_compare))
    out = []
    for s in ordered:
        out.extend([s] * realized[s])
    return out


def thom_text(sigma):
    """Compact text for a sign vector: one of ``- 0 +`` per entry."""
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in sigma)


def thom_parse(text):
    out = []
    for ch in text:
        if ch == "+":
            out.append(1)
        elif ch == "-":
            out.append(-1)
        elif ch == "0":
            out.append(0)
        else:
            raise DomainError("bad sign character %r" % ch)
    return tuple(out)


def triangular_to_json(T):
    from .polycore import poly_text

    return [[n, poly_text(P), p] for (n, P, p) in T]


def triangular_from_json(data):
    from .polycore import parse_poly

    out = []
    for item in data:
        n, text, p = item
        out.append((int(n), parse_poly(text), int(p)))
    return tuple(out)
