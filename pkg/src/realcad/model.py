"""Interrupt timed automata with polynomial guards and updates.

An automaton has clocks x1..xn and every state sits at a level k: while
the automaton is in that state only x_k advances, the clocks below are
frozen and the clocks above are zero.  Transitions carry a conjunction of
polynomial sign constraints over the clocks up to the source level, an
action (or none, for an internal move), and an update.  Moving down to
level k' keeps the first k' clocks and zeroes the rest; staying at or
moving above the source level k may set x_k to a polynomial in the lower
clocks, and zeroes everything above k.

Configurations are exact: valuations are tuples of Fractions, guards are
evaluated exactly, so a run either provably satisfies every guard or a
refusal names the first violated conjunct.

Timed words pair actions with absolute timestamps.  Internal moves are
searched at the event timestamps only (a bounded breadth-first search
over configurations), which is enough for models whose internal moves
are not time-sensitive between events.
"""

import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .polycore import (
    DomainError,
    ParseError,
    evaluate,
    is_zero,
    level_of,
    parse_poly,
    poly_text,
    var,
)

GUARD_RELS = ("<", "<=", "=", ">=", ">")

SEARCH_BOUND = 10_000


@dataclass(frozen=True)
class State:
    name: str
    level: int
    initial: bool = False
    final: bool = False


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    action: object  # str, or None for an internal move
    guard: tuple  # of (poly, rel) meaning ``poly rel 0``
    update: tuple  # of (clock index, poly); applied simultaneously

    def describe(self):
        act = self.action if self.action is not None else "~"
        return "%s -%s-> %s" % (self.source, act, self.target)


@dataclass
class Automaton:
    clocks: int
    states: dict
    transitions: list
    initial: str
    _by_source: dict = field(default_factory=dict, repr=False)

    def level(self, q):
        return self.states[q].level

    def final_states(self):
        return sorted(s.name for s in self.states.values() if s.final)

    def transitions_from(self, q):
        if not self._by_source:
            for t in self.transitions:
                self._by_source.setdefault(t.source, []).append(t)
        return self._by_source.get(q, [])


def _clock_index(name):
    m = re.match(r"^x(\d+)$", name)
    if not m or int(m.group(1)) < 1:
        raise DomainError("not a clock name: %r" % name)
    return int(m.group(1))


def parse_model(source):
    """Build an automaton from its JSON description (text or dict)."""
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError("bad model JSON: %s" % e) from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ParseError("model must be a JSON object")
    try:
        n = int(data["clocks"])
        raw_states = data["states"]
        raw_transitions = data["transitions"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("model needs clocks/states/transitions: %s" % e) from None

    states = {}
    initial = None
    for rs in raw_states:
        name = rs["name"]
        if name in states:
            raise ParseError("duplicate state %r" % name)
        st = State(
            name=name,
            level=int(rs["level"]),
            initial=bool(rs.get("initial", False)),
            final=bool(rs.get("final", False)),
        )
        states[name] = st
        if st.initial:
            if initial is not None:
                raise ParseError("two initial states: %r and %r" % (initial, name))
            initial = name
    if initial is None:
        raise ParseError("no initial state")

    transitions = []
    for rt in raw_transitions:
        guard = []
        for g in rt.get("guard", []):
            rel = g["rel"]
            if rel not in GUARD_RELS:
                raise ParseError("unknown guard relation %r" % rel)
            guard.append((parse_poly(g["poly"]), rel))
        update = []
        for cname, ptext in sorted(rt.get("update", {}).items()):
            update.append((_clock_index(cname), parse_poly(ptext)))
        action = rt.get("action")
        if action is not None and (not isinstance(action, str) or not action):
            raise ParseError("transition action must be a nonempty string or null")
        transitions.append(
            Transition(
                source=rt["from"],
                target=rt["to"],
                action=action,
                guard=tuple(guard),
                update=tuple(update),
            )
        )

    auto = Automaton(clocks=n, states=states, transitions=transitions, initial=initial)
    validate(auto)
    return auto


def validate(auto):
    """Check level scoping and update shape; raises DomainError."""
    n = auto.clocks
    if n < 1:
        raise DomainError("need at least one clock")
    for st in auto.states.values():
        if not 1 <= st.level <= n:
            raise DomainError("state %r has level %d outside 1..%d" % (st.name, st.level, n))
    for t in auto.transitions:
        if t.source not in auto.states or t.target not in auto.states:
            raise DomainError("transition %s references unknown states" % t.describe())
        k = auto.level(t.source)
        kp = auto.level(t.target)
        for poly, rel in t.guard:
            if level_of(poly) > k:
                raise DomainError(
                    "scope error on %s: guard %s uses x%d above level %d"
                    % (t.describe(), poly_text(poly), level_of(poly), k)
                )
        if k > kp:
            if t.update:
                raise DomainError(
                    "shape error on %s: level drops %d -> %d, update must be empty"
                    % (t.describe(), k, kp)
                )
            continue
        for idx, poly in t.update:
            if idx != k:
                raise DomainError(
                    "shape error on %s: only the active clock x%d may be updated, got x%d"
                    % (t.describe(), k, idx)
                )
            identity = level_of(poly) == k and poly == var(k)
            if not identity and level_of(poly) >= k:
                raise DomainError(
                    "shape error on %s: x%d := %s uses clocks at or above level %d"
                    % (t.describe(), idx, poly_text(poly), k)
                )
        if len(set(i for i, _ in t.update)) != len(t.update):
            raise DomainError("shape error on %s: duplicate update target" % t.describe())
    return auto


def model_json(auto):
    """The automaton back as a JSON-ready dict."""
    states = []
    for st in sorted(auto.states.values(), key=lambda s: s.name):
        d = {"name": st.name, "level": st.level}
        if st.initial:
            d["initial"] = True
        if st.final:
            d["final"] = True
        states.append(d)
    transitions = []
    for t in auto.transitions:
        transitions.append(
            {
                "from": t.source,
                "to": t.target,
                "action": t.action,
                "guard": [{"poly": poly_text(p), "rel": rel} for p, rel in t.guard],
                "update": {"x%d" % i: poly_text(p) for i, p in t.update},
            }
        )
    return {"clocks": auto.clocks, "states": states, "transitions": transitions}


def initial_config(auto):
    return (auto.initial, (Fraction(0),) * auto.clocks)


def check_config(auto, cfg):
    q, v = cfg
    if q not in auto.states:
        raise DomainError("unknown state %r" % q)
    if len(v) != auto.clocks:
        raise DomainError("valuation has %d clocks, expected %d" % (len(v), auto.clocks))
    k = auto.level(q)
    for i in range(k, auto.clocks):
        if v[i] != 0:
            raise DomainError("clock x%d must be zero above level %d" % (i + 1, k))
    return q, tuple(Fraction(c) for c in v)


def time_step(auto, cfg, d):
    """Let ``d`` time units pass: only the active clock advances."""
    q, v = check_config(auto, cfg)
    d = Fraction(d)
    if d < 0:
        raise DomainError("negative delay %s" % d)
    k = auto.level(q)
    v2 = list(v)
    v2[k - 1] += d
    return (q, tuple(v2))


def _rel_holds(value, rel):
    if rel == "<":
        return value < 0
    if rel == "<=":
        return value <= 0
    if rel == "=":
        return value == 0
    if rel == ">=":
        return value >= 0
    return value > 0


def guard_report(t, v):
    """None if the guard holds at ``v``, else text naming the first
    violated conjunct and its exact value."""
    for poly, rel in t.guard:
        value = evaluate(poly, v) if not isinstance(poly, Fraction) else poly
        if not _rel_holds(value, rel):
            return "%s = %s, want %s 0" % (poly_text(poly), value, rel)
    return None


def apply_update(auto, t, v):
    k = auto.level(t.source)
    kp = auto.level(t.target)
    n = auto.clocks
    if k > kp:
        return tuple(v[:kp]) + (Fraction(0),) * (n - kp)
    v2 = list(v[:k]) + [Fraction(0)] * (n - k)
    for idx, poly in t.update:
        if isinstance(poly, Fraction):
            v2[idx - 1] = poly
        elif poly == var(k):
            v2[idx - 1] = v[idx - 1]
        else:
            v2[idx - 1] = evaluate(poly, v[: level_of(poly)])
    return tuple(v2)


class StepResult:
    """Successors of a configuration under one action, with refusal
    reasons for the transitions that did not fire."""

    __slots__ = ("successors", "refusals")

    def __init__(self, successors, refusals):
        self.successors = successors
        self.refusals = refusals

    def __bool__(self):
        return bool(self.successors)


def discrete_step(auto, cfg, action):
    q, v = check_config(auto, cfg)
    succ = []
    refused = []
    for t in auto.transitions_from(q):
        if t.action != action:
            continue
        why = guard_report(t, v)
        if why is None:
            succ.append(((t.target, apply_update(auto, t, v)), t))
        else:
            refused.append((t, why))
    return StepResult(succ, refused)


_WORD_EVENT = re.compile(r"\(\s*([^,()\s]+)\s*,\s*(-?\d+(?:/\d+)?)\s*\)")


def parse_timed_word(text):
    """Parse ``(a,6/5)(b,23/10)...`` into (action, time) pairs."""
    if not isinstance(text, str):
        raise ParseError("timed word must be text")
    events = []
    pos = 0
    stripped = text.strip()
    while pos < len(stripped):
        m = _WORD_EVENT.match(stripped, pos)
        if not m:
            raise ParseError("bad timed word at %r" % stripped[pos : pos + 16])
        events.append((m.group(1), Fraction(m.group(2))))
        pos = m.end()
        while pos < len(stripped) and stripped[pos].isspace():
            pos += 1
    return events


def timed_word_text(word):
    return "".join("(%s,%s)" % (a, t) for a, t in word)


class RunResult:
    __slots__ = ("accepted", "trace", "reason")

    def __init__(self, accepted, trace, reason=None):
        self.accepted = accepted
        self.trace = trace
        self.reason = reason

    def __bool__(self):
        return self.accepted


def run_timed_word(auto, word):
    """Does the automaton accept the timed word?

    Runs a breadth-first search over (state, valuation, events consumed),
    taking internal moves at event timestamps and the next letter after
    the exact delay.  The trace of an accepting run lists each move with
    its absolute time.
    """
    if isinstance(word, str):
        word = parse_timed_word(word)
    times = [t for _, t in word]
    prev = Fraction(0)
    for t in times:
        if Fraction(t) < prev:
            raise DomainError("timestamps must not decrease: %s after %s" % (t, prev))
        prev = Fraction(t)

    start = initial_config(auto)
    start_key = (start[0], start[1], 0)
    parents = {start_key: None}
    queue = deque([start_key])
    expanded = 0
    goal = None
    while queue:
        key = queue.popleft()
        q, v, j = key
        now = times[j - 1] if j > 0 else Fraction(0)
        if j == len(word) and auto.states[q].final:
            goal = key
            break
        expanded += 1
        if expanded > SEARCH_BOUND:
            raise DomainError(
                "internal-move search exceeded %d configurations" % SEARCH_BOUND
            )
        for t in auto.transitions_from(q):
            if t.action is not None:
                continue
            if guard_report(t, v) is None:
                nxt = (t.target, apply_update(auto, t, v), j)
                if nxt not in parents:
                    parents[nxt] = (key, ("internal", t, now))
                    queue.append(nxt)
        if j < len(word):
            action, at = word[j]
            _, vd = time_step(auto, (q, v), Fraction(at) - now)
            for (q2, v2), t in discrete_step(auto, (q, vd), action).successors:
                nxt = (q2, v2, j + 1)
                if nxt not in parents:
                    parents[nxt] = (key, ("letter", t, Fraction(at)))
                    queue.append(nxt)
    if goal is None:
        return RunResult(False, None)
    steps = []
    key = goal
    while parents[key] is not None:
        key, (kind, t, at) = parents[key]
        steps.append(
            {
                "kind": kind,
                "action": t.action,
                "time": str(at),
                "to": t.target,
            }
        )
    steps.reverse()
    return RunResult(True, steps)
