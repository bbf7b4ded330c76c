"""Interrupt timed automata: parsing, validation, exact steps, timed words.

The two-clock fixture is the running example: q0 sits at level 1 and
leaves on the letter a once x1^2 - x1 - 1 <= 0, q1 and q2 sit at level 2
and trade b (needs 2*x1*x2^2 - x2^2 - 1 > 0) against c (x2 + x1^2 - 5
<= 0).  All arithmetic is exact, so refusal messages can quote the
violated guard's value verbatim.
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import load_fixture
from realcad.model import (
    Automaton,
    State,
    Transition,
    apply_update,
    check_config,
    discrete_step,
    guard_report,
    initial_config,
    model_json,
    parse_model,
    parse_timed_word,
    run_timed_word,
    time_step,
    timed_word_text,
    validate,
)
from realcad.polycore import DomainError, ParseError, parse_poly

GOLDEN_WORD = "(a,6/5)(b,23/10)(c,13/5)(b,33/10)(c,39/10)(b,51/10)"

# One silent move before the first letter: the guard on a only holds
# after the automaton has hopped from s0 to mid.
HOP_IN = {
    "clocks": 1,
    "states": [
        {"name": "s0", "level": 1, "initial": True},
        {"name": "mid", "level": 1},
        {"name": "s1", "level": 1, "final": True},
    ],
    "transitions": [
        {"from": "s0", "to": "mid", "action": None, "guard": [], "update": {}},
        {"from": "mid", "to": "s1", "action": "a",
         "guard": [{"poly": "x1 - 1", "rel": ">="}], "update": {}},
    ],
}

# One silent move after the last letter, enabled only at its timestamp.
HOP_OUT = {
    "clocks": 1,
    "states": [
        {"name": "s0", "level": 1, "initial": True},
        {"name": "s1", "level": 1},
        {"name": "s2", "level": 1, "final": True},
    ],
    "transitions": [
        {"from": "s0", "to": "s1", "action": "a", "guard": [], "update": {}},
        {"from": "s1", "to": "s2", "action": None,
         "guard": [{"poly": "x1 - 2", "rel": "="}], "update": {}},
    ],
}


def minimal(clocks=2, **tr):
    """A two-state model with a single overridable transition."""
    t = {"from": "s0", "to": "s1", "action": "a", "guard": [], "update": {}}
    t.update(tr)
    return {
        "clocks": clocks,
        "states": [
            {"name": "s0", "level": 1, "initial": True},
            {"name": "s1", "level": clocks},
        ],
        "transitions": [t],
    }


def frac(x):
    return Fraction(x)


# ---------------------------------------------------------------- parsing


def test_parse_two_level(a0):
    assert a0.clocks == 2
    assert a0.initial == "q0"
    assert a0.final_states() == ["q2"]
    assert {q: a0.level(q) for q in a0.states} == {"q0": 1, "q1": 2, "q2": 2}
    assert sorted(t.action for t in a0.transitions) == ["a", "a'", "b", "c"]


def test_parse_accepts_text_and_dict():
    data = load_fixture("two_level.json")
    from_text = parse_model(json.dumps(data))
    from_dict = parse_model(data)
    assert model_json(from_text) == model_json(from_dict)


def test_model_json_round_trip(a0):
    dumped = model_json(a0)
    again = parse_model(dumped)
    assert model_json(again) == dumped
    # and the dump is honest JSON
    assert model_json(parse_model(json.loads(json.dumps(dumped)))) == dumped


def test_transition_describe(a0):
    prime = next(t for t in a0.transitions if t.action == "a'")
    assert prime.describe() == "q0 -a'-> q0"
    silent = Transition("s", "t", None, (), ())
    assert silent.describe() == "s -~-> t"


def test_parse_rejects_bad_json_text():
    with pytest.raises(ParseError, match="bad model JSON"):
        parse_model("{nope")


def test_parse_rejects_non_object():
    with pytest.raises(ParseError, match="JSON object"):
        parse_model("[]")


def test_parse_rejects_missing_keys():
    with pytest.raises(ParseError, match="clocks/states/transitions"):
        parse_model({"clocks": 1})


def test_parse_rejects_duplicate_state():
    bad = minimal()
    bad["states"].append({"name": "s0", "level": 1})
    with pytest.raises(ParseError, match="duplicate state"):
        parse_model(bad)


def test_parse_rejects_two_initial_states():
    bad = minimal()
    bad["states"][1]["initial"] = True
    with pytest.raises(ParseError, match="two initial states"):
        parse_model(bad)


def test_parse_rejects_missing_initial_state():
    bad = minimal()
    del bad["states"][0]["initial"]
    with pytest.raises(ParseError, match="no initial state"):
        parse_model(bad)


def test_parse_rejects_unknown_relation():
    bad = minimal(guard=[{"poly": "x1", "rel": "!="}])
    with pytest.raises(ParseError, match="guard relation"):
        parse_model(bad)


def test_parse_rejects_empty_action():
    bad = minimal(action="")
    with pytest.raises(ParseError, match="nonempty string or null"):
        parse_model(bad)


# ------------------------------------------------------------- validation


def test_validate_rejects_zero_clocks():
    with pytest.raises(DomainError, match="at least one clock"):
        parse_model({"clocks": 0, "states": [{"name": "s", "level": 1,
                                              "initial": True}],
                     "transitions": []})


def test_validate_rejects_level_out_of_range():
    bad = minimal(clocks=1)
    bad["states"][1]["level"] = 2
    with pytest.raises(DomainError, match="outside 1..1"):
        parse_model(bad)


def test_validate_rejects_unknown_endpoints():
    bad = minimal()
    bad["transitions"][0]["to"] = "nowhere"
    with pytest.raises(DomainError, match="unknown states"):
        parse_model(bad)


def test_validate_rejects_guard_above_source_level():
    bad = minimal(guard=[{"poly": "x2 - 1", "rel": "<"}])
    with pytest.raises(DomainError, match="scope error.*x2 above level 1"):
        parse_model(bad)


def test_validate_rejects_update_on_level_drop():
    bad = {
        "clocks": 2,
        "states": [
            {"name": "hi", "level": 2, "initial": True},
            {"name": "lo", "level": 1},
        ],
        "transitions": [
            {"from": "hi", "to": "lo", "action": "d", "guard": [],
             "update": {"x1": "0"}},
        ],
    }
    with pytest.raises(DomainError, match="update must be empty"):
        parse_model(bad)


def test_validate_rejects_update_of_frozen_clock():
    bad = minimal(update={"x2": "0"})
    with pytest.raises(DomainError, match="only the active clock x1"):
        parse_model(bad)


def test_validate_rejects_update_reading_active_clock():
    bad = {
        "clocks": 2,
        "states": [{"name": "s", "level": 2, "initial": True}],
        "transitions": [
            {"from": "s", "to": "s", "action": "a", "guard": [],
             "update": {"x2": "x2 + 1"}},
        ],
    }
    with pytest.raises(DomainError, match="at or above level 2"):
        parse_model(bad)


def test_validate_allows_identity_and_lower_clock_updates():
    good = {
        "clocks": 2,
        "states": [{"name": "s", "level": 2, "initial": True}],
        "transitions": [
            {"from": "s", "to": "s", "action": "a", "guard": [],
             "update": {"x2": "x2"}},
            {"from": "s", "to": "s", "action": "b", "guard": [],
             "update": {"x2": "x1^2 - 1"}},
        ],
    }
    auto = parse_model(good)
    assert len(auto.transitions) == 2


def test_validate_rejects_duplicate_update_target():
    t = Transition("s", "s", "a", (),
                   ((1, parse_poly("0")), (1, parse_poly("1"))))
    auto = Automaton(clocks=1, states={"s": State("s", 1, initial=True)},
                     transitions=[t], initial="s")
    with pytest.raises(DomainError, match="duplicate update target"):
        validate(auto)


def test_parse_rejects_bad_clock_name():
    bad = minimal(update={"y1": "0"})
    with pytest.raises(DomainError, match="not a clock name"):
        parse_model(bad)


# ---------------------------------------------------- configurations, time


def test_initial_config(a0):
    q, v = initial_config(a0)
    assert q == "q0"
    assert v == (Fraction(0), Fraction(0))


def test_check_config_coerces_to_fractions(a0):
    q, v = check_config(a0, ("q0", (1, 0)))
    assert v == (Fraction(1), Fraction(0))
    assert all(isinstance(c, Fraction) for c in v)


def test_check_config_rejects(a0):
    with pytest.raises(DomainError, match="unknown state"):
        check_config(a0, ("q9", (0, 0)))
    with pytest.raises(DomainError, match="expected 2"):
        check_config(a0, ("q0", (0,)))
    with pytest.raises(DomainError, match="x2 must be zero above level 1"):
        check_config(a0, ("q0", (0, 1)))


def test_time_moves_only_the_active_clock(a0):
    assert time_step(a0, ("q0", (0, 0)), frac("5/2")) == \
        ("q0", (frac("5/2"), frac(0)))
    # at level 2 the lower clock stays frozen
    assert time_step(a0, ("q1", (1, 0)), 3) == ("q1", (frac(1), frac(3)))


def test_negative_delay_rejected(a0):
    with pytest.raises(DomainError, match="negative delay"):
        time_step(a0, ("q0", (0, 0)), frac("-1/2"))


@given(
    q=st.sampled_from(["q0", "q1", "q2"]),
    rs=st.lists(st.fractions(min_value=0, max_value=9, max_denominator=12),
                min_size=2, max_size=2),
    d1=st.fractions(min_value=0, max_value=9, max_denominator=12),
    d2=st.fractions(min_value=0, max_value=9, max_denominator=12),
)
def test_time_is_additive(a0, q, rs, d1, d2):
    k = a0.level(q)
    v = tuple(rs[:k]) + (Fraction(0),) * (a0.clocks - k)
    one = time_step(a0, time_step(a0, (q, v), d1), d2)
    assert one == time_step(a0, (q, v), d1 + d2)


# -------------------------------------------------------- discrete steps


def test_letter_fires_when_guard_holds(a0):
    res = discrete_step(a0, ("q0", (1, 0)), "a")
    assert bool(res)
    ((cfg, t),) = res.successors
    assert cfg == ("q1", (frac(1), frac(0)))
    assert t.action == "a"
    assert res.refusals == []


def test_refusal_quotes_exact_guard_value(a0):
    res = discrete_step(a0, ("q0", (3, 0)), "a")
    assert not res
    ((t, why),) = res.refusals
    assert why == "x1^2 - x1 - 1 = 5, want <= 0"


def test_reset_update(a0):
    res = discrete_step(a0, ("q0", (3, 0)), "a'")
    ((cfg, _),) = res.successors
    assert cfg == ("q0", (frac(0), frac(0)))


def test_b_fires_only_strictly_above(a0):
    hit = discrete_step(a0, ("q1", (2, 1)), "b")
    assert hit.successors[0][0] == ("q2", (frac(2), frac(1)))
    miss = discrete_step(a0, ("q1", (1, 1)), "b")
    assert not miss
    assert miss.refusals[0][1] == "2*x1*x2^2 - x2^2 - 1 = 0, want > 0"


def test_c_keeps_level_two_values(a0):
    res = discrete_step(a0, ("q2", (1, 2)), "c")
    assert res.successors[0][0] == ("q1", (frac(1), frac(2)))


def test_level_drop_zeroes_upper_clocks():
    auto = parse_model(load_fixture("three_level.json"))
    res = discrete_step(auto, ("p2", (1, 2, 1)), "c")
    assert res.successors[0][0] == ("p0", (frac(1), frac(0), frac(0)))


def test_guard_report_none_when_satisfied(a0):
    t = next(t for t in a0.transitions if t.action == "a")
    assert guard_report(t, (Fraction(0), Fraction(0))) is None
    assert guard_report(t, (Fraction(2), Fraction(0))) is not None


def test_apply_update_variants(a0):
    t_a = next(t for t in a0.transitions if t.action == "a")
    t_reset = next(t for t in a0.transitions if t.action == "a'")
    assert apply_update(a0, t_a, (frac("5/2"), frac(0))) == \
        (frac("5/2"), frac(0))
    assert apply_update(a0, t_reset, (frac(3), frac(0))) == \
        (frac(0), frac(0))


@given(
    q=st.sampled_from(["q0", "q1", "q2"]),
    rs=st.lists(st.fractions(min_value=0, max_value=9, max_denominator=12),
                min_size=2, max_size=2),
    action=st.sampled_from(["a", "a'", "b", "c"]),
)
def test_successors_are_valid_configurations(a0, q, rs, action):
    """Stepping never leaves the zero-above-level invariant."""
    k = a0.level(q)
    v = tuple(rs[:k]) + (Fraction(0),) * (a0.clocks - k)
    for cfg, _ in discrete_step(a0, (q, v), action).successors:
        assert check_config(a0, cfg) == cfg


# ------------------------------------------------------------ timed words


def test_parse_timed_word_golden():
    word = parse_timed_word("(a,6/5) (b,23/10)")
    assert word == [("a", frac("6/5")), ("b", frac("23/10"))]


def test_parse_timed_word_rejects():
    with pytest.raises(ParseError, match="must be text"):
        parse_timed_word(123)
    with pytest.raises(ParseError, match="bad timed word"):
        parse_timed_word("(a;1)")


@given(st.lists(
    st.tuples(st.sampled_from(["a", "b", "c'"]),
              st.fractions(min_value=0, max_value=50, max_denominator=20)),
    max_size=8))
def test_timed_word_text_round_trip(word):
    assert parse_timed_word(timed_word_text(word)) == word


def test_golden_word_accepted(a0):
    res = run_timed_word(a0, GOLDEN_WORD)
    assert res.accepted
    assert [(e["kind"], e["action"], e["time"], e["to"]) for e in res.trace] == [
        ("letter", "a", "6/5", "q1"),
        ("letter", "b", "23/10", "q2"),
        ("letter", "c", "13/5", "q1"),
        ("letter", "b", "33/10", "q2"),
        ("letter", "c", "39/10", "q1"),
        ("letter", "b", "51/10", "q2"),
    ]


def test_word_rejected_when_guard_fails(a0):
    res = run_timed_word(a0, "(a,2)")
    assert not res.accepted
    assert res.trace is None


def test_empty_word_needs_final_initial(a0):
    assert not run_timed_word(a0, "")
    trivial = parse_model({
        "clocks": 1,
        "states": [{"name": "s", "level": 1, "initial": True, "final": True}],
        "transitions": [],
    })
    res = run_timed_word(trivial, "")
    assert res.accepted and res.trace == []


def test_three_level_word():
    auto = parse_model(load_fixture("three_level.json"))
    assert run_timed_word(auto, "(a,1)(b,3)").accepted
    assert not run_timed_word(auto, "(a,1)(b,1)").accepted


def test_single_clock_reset_word():
    auto = parse_model(load_fixture("single_clock.json"))
    res = run_timed_word(auto, "(a,1/2)(b,3/2)(a,2)")
    assert res.accepted
    assert [e["to"] for e in res.trace] == ["s1", "s0", "s1"]
    # after the reset at 1/2 the clock restarts, so b needs a full unit
    assert not run_timed_word(auto, "(a,1/2)(b,1)").accepted


def test_word_accepts_parsed_list_input():
    auto = parse_model(load_fixture("single_clock.json"))
    assert run_timed_word(auto, [("a", frac("1/2"))]).accepted


def test_internal_hop_before_first_letter():
    auto = parse_model(HOP_IN)
    res = run_timed_word(auto, "(a,1)")
    assert res.accepted
    assert [(e["kind"], e["action"], e["time"], e["to"]) for e in res.trace] == [
        ("internal", None, "0", "mid"),
        ("letter", "a", "1", "s1"),
    ]


def test_internal_hop_after_last_letter():
    auto = parse_model(HOP_OUT)
    res = run_timed_word(auto, "(a,2)")
    assert res.accepted
    assert res.trace[-1] == \
        {"kind": "internal", "action": None, "time": "2", "to": "s2"}
    assert not run_timed_word(auto, "(a,1)").accepted


def test_decreasing_timestamps_rejected(a0):
    with pytest.raises(DomainError, match="must not decrease"):
        run_timed_word(a0, "(a,2)(b,1)")


def test_unsatisfiable_guard_never_fires():
    auto = parse_model(load_fixture("unsat_guard.json"))
    assert not run_timed_word(auto, "(a,0)").accepted
    assert not run_timed_word(auto, "(a,5)").accepted
