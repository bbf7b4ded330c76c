"""First-order sentence decision.

The single-variable reference procedure works the way a person would at a
blackboard: isolate the roots of the product of every atom polynomial,
pick one sample in each maximal sign-invariant region (the root points
via Sturm refinement, rationals in between), and evaluate the matrix at
each sample.
"""

import random
from fractions import Fraction

import pytest

import oracles as O
from realcad.foreals import (
    decide,
    formula_text,
    free_vars,
    parse_formula,
    to_prenex,
)
from realcad.polycore import DomainError, ParseError


# -- reference decision for one quantified variable ---------------------------


def _region_samples(polys):
    """One sample per sign-invariant region of the line: rational points
    for the open regions, (product, interval) handles for the roots."""
    prod = (Fraction(1),)
    for cs in polys:
        p = O.u_trim(cs)
        if O.u_deg(p) >= 1:
            prod = O.u_mul(prod, p)
    if O.u_deg(prod) < 1:
        return [Fraction(0)], []
    ivs = O.isolate_real_roots(prod)
    if not ivs:
        return [Fraction(0)], []
    rats = [ivs[0][0] - 1, ivs[-1][1] + 1]
    for (_, b), (a, _) in zip(ivs, ivs[1:]):
        rats.append(Fraction(a + b, 2))
    return rats, [(prod, iv) for iv in ivs]


def _sign_of(poly, sample):
    if isinstance(sample, Fraction):
        return O.sgn(O.u_eval(poly, sample))
    prod, iv = sample
    return O.sign_at_root(prod, iv, poly)


REL_HOLDS = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    "=": lambda s: s == 0,
    "!=": lambda s: s != 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
}


def eval_matrix(node, sample):
    kind = node[0]
    if kind == "atom":
        return REL_HOLDS[node[2]](_sign_of(node[1], sample))
    if kind == "not":
        return not eval_matrix(node[1], sample)
    if kind == "and":
        return eval_matrix(node[1], sample) and eval_matrix(node[2], sample)
    return eval_matrix(node[1], sample) or eval_matrix(node[2], sample)


def matrix_polys(node):
    if node[0] == "atom":
        return [node[1]]
    if node[0] == "not":
        return matrix_polys(node[1])
    return matrix_polys(node[1]) + matrix_polys(node[2])


def oracle_decide(quant, matrix):
    rats, roots = _region_samples(matrix_polys(matrix))
    values = [eval_matrix(matrix, s) for s in rats + roots]
    return any(values) if quant == "exists" else all(values)


def matrix_text(node):
    if node[0] == "atom":
        cs = node[1]
        terms = []
        for i, c in enumerate(cs):
            if c == 0:
                continue
            mono = "x1^%d" % i if i > 1 else ("x1" if i == 1 else "")
            coef = "%d/%d" % (c.numerator, c.denominator) if c.denominator != 1 else str(c.numerator)
            terms.append(coef + ("*" + mono if mono else ""))
        body = " + ".join(terms) if terms else "0"
        return "(%s %s 0)" % (body, node[2])
    if node[0] == "not":
        return "not %s" % matrix_text(node[1])
    op = node[0]
    return "(%s %s %s)" % (matrix_text(node[1]), op, matrix_text(node[2]))


def random_matrix(rng, atoms):
    if atoms == 1:
        deg = rng.randint(1, 4)
        cs = O.u_trim([Fraction(rng.randint(-5, 5)) for _ in range(deg + 1)])
        if O.u_deg(cs) < 0:
            cs = (Fraction(rng.randint(1, 5)),)
        node = ("atom", cs, rng.choice(list(REL_HOLDS)))
        return ("not", node) if rng.random() < 0.25 else node
    split = rng.randint(1, atoms - 1)
    return (
        rng.choice(["and", "or"]),
        random_matrix(rng, split),
        random_matrix(rng, atoms - split),
    )


# -- goldens ------------------------------------------------------------------


def test_sqrt_two_exists():
    assert decide("exists x1 . x1*x1 - 2 = 0") is True


def test_positive_definite_quadratic():
    s = "forall x1 . (not (x1*x1 + 1 < 0) and not (x1*x1 + 1 = 0))"
    assert decide(s) is True


def test_sphere_bounds_first_coordinate():
    s = (
        "exists x1 . exists x2 . exists x3 . "
        "(x1^2 + x2^2 + x3^2 - 1 = 0 and not (x1 < 2))"
    )
    assert decide(s) is False


def test_bare_x_spelling():
    assert decide("exists x . x*x - 2 = 0") is True


def test_two_variable_interplay():
    assert decide("forall x1 . exists x2 . x2 - x1 > 0") is True
    assert decide("exists x2 . forall x1 . x2 - x1 > 0") is False


# -- agreement with the reference procedure ------------------------------------


def test_fifty_single_variable_sentences_match_oracle():
    rng = random.Random(41)
    for _ in range(50):
        quant = rng.choice(["exists", "forall"])
        matrix = random_matrix(rng, rng.randint(1, 3))
        text = "%s x1 . %s" % (quant, matrix_text(matrix))
        assert decide(text) is oracle_decide(quant, matrix), text


def test_excluded_middle_and_contradiction():
    rng = random.Random(42)
    for _ in range(10):
        matrix = random_matrix(rng, rng.randint(1, 2))
        body = matrix_text(matrix)
        assert decide("exists x1 . (%s or not %s)" % (body, body)) is True
        assert decide("exists x1 . (%s and not %s)" % (body, body)) is False


def test_negation_duality():
    rng = random.Random(43)
    for _ in range(12):
        quant = rng.choice(["exists", "forall"])
        matrix = random_matrix(rng, rng.randint(1, 2))
        text = "%s x1 . %s" % (quant, matrix_text(matrix))
        assert decide(text) is (not decide("not (%s)" % text))


# -- prenex conversion ----------------------------------------------------------


def test_prenex_pushes_negation_through_quantifier():
    f = to_prenex(parse_formula("not exists x1 . x1 < 0"))
    assert formula_text(f).startswith("forall x1")
    assert decide(f) is False


def test_prenex_keeps_prenex_input():
    f = parse_formula("forall x1 . exists x2 . x2 - x1 > 0")
    assert formula_text(to_prenex(f)) == formula_text(f)


def test_prenex_extends_scope():
    f = parse_formula("(exists x1 . x1 < 0) and 1 < 2")
    g = to_prenex(f)
    assert formula_text(g).startswith("exists x1")
    assert decide(g) is True


def test_prenex_renames_apart():
    # both quantifiers bind x1 in the source; prenex must separate them
    f = parse_formula("(exists x1 . x1 < 0) and (forall x1 . x1^2 >= 0)")
    g = to_prenex(f)
    binders = [v for v in free_vars_of_prefix(g)]
    assert len(binders) == len(set(binders)) == 2
    assert decide(g) is True


def free_vars_of_prefix(f):
    from realcad.foreals import Quant

    out = []
    while isinstance(f, Quant):
        out.append(f.var)
        f = f.sub
    return out


def test_prenex_preserves_verdict():
    rng = random.Random(44)
    for _ in range(10):
        m1 = matrix_text(random_matrix(rng, 1))
        m2 = matrix_text(random_matrix(rng, 1))
        text = "(exists x1 . %s) %s (forall x1 . %s)" % (
            m1,
            rng.choice(["and", "or"]),
            m2,
        )
        assert decide(text) is decide(to_prenex(parse_formula(text)))


# -- input validation -----------------------------------------------------------


def test_free_variables_are_rejected():
    with pytest.raises(DomainError, match="free variables"):
        decide("x1 < 0")
    with pytest.raises(DomainError, match="free variables"):
        decide("exists x1 . x1 - x2 < 0")


def test_parse_errors():
    for bad in [
        "exists . x1 < 0",
        "exists x1 x1 < 0",
        "forall x1 . (x1 < 0",
        "exists x1 . x1 ? 0",
        "",
    ]:
        with pytest.raises(ParseError):
            parse_formula(bad)


def test_formula_text_round_trip():
    texts = [
        "exists x1 . (x1*x1 - 2 = 0)",
        "forall x1 . (x1 < 0 or not (x1 = 0) and x1^2 - 1 < 0)",
    ]
    for t in texts:
        f = parse_formula(t)
        assert formula_text(parse_formula(formula_text(f))) == formula_text(f)


def test_constant_sentence():
    assert decide("forall x1 . 0 = 0") is True
    assert decide("exists x1 . 1 < 0") is False
