from __future__ import annotations

import random

from safework.item_rigor import (
    check_signals,
    score_item_rigor,
    validate_state_machine,
)
from safework.model import (
    InterfaceSignal,
    ItemDefinition,
    Severity,
    StateMachine,
)


def machine(states, initial, transitions, events=None):
    if events is None:
        events = tuple(sorted({e for _, e, _ in transitions}))
    return StateMachine(name="m", states=tuple(states), initial=initial,
                        events=tuple(events), transitions=tuple(transitions))


def item(req=6 * (True,), bound=6 * (True,), art=4 * (True,), signals=()):
    return ItemDefinition(name="it", description="", requirement_checklist=req,
                          boundary_checklist=bound, artifacts_present=art,
                          interfaces=tuple(signals))


FULL_SIGNAL = InterfaceSignal(name="v_set", direction="in", semantic_type="speed",
                              unit="km/h", range_min=0.0, range_max=150.0)
BARE_SIGNAL = InterfaceSignal(name="raw", direction="in", semantic_type="misc")


# --------------------------------------------------------------------------
# state machines
# --------------------------------------------------------------------------


def test_two_state_cycle_is_clean():
    sm = machine(["Off", "Active"], "Off",
                 [("Off", "engage", "Active"), ("Active", "disengage", "Off")])
    assert validate_state_machine(sm) == []


def test_duplicate_transition_key_is_nondeterministic():
    sm = machine(["Off", "Active"], "Off",
                 [("Off", "engage", "Active"), ("Active", "disengage", "Off"),
                  ("Off", "engage", "Off")])
    findings = validate_state_machine(sm)
    assert [(f.rule_id, f.subject) for f in findings] == [("SM-NONDET", "m:Off")]
    assert "engage" in findings[0].message


def test_unreachable_state_flagged():
    sm = machine(["Off", "Active", "Fault"], "Off",
                 [("Off", "engage", "Active"), ("Active", "disengage", "Off"),
                  ("Fault", "reset", "Off")])
    # brute-force check: Fault never appears as a destination
    assert all(dst != "Fault" for _, _, dst in sm.transitions)
    findings = validate_state_machine(sm)
    assert ("SM-UNREACH", "m:Fault") in [(f.rule_id, f.subject) for f in findings]


def test_dead_state_warns_and_unused_event_informs():
    sm = machine(["Off", "End"], "Off", [("Off", "stop", "End")],
                 events=("stop", "ghost"))
    findings = validate_state_machine(sm)
    by_rule = {f.rule_id: f for f in findings}
    assert by_rule["SM-DEAD"].severity is Severity.WARNING
    assert by_rule["SM-DEAD"].subject == "m:End"
    assert by_rule["SM-UNUSED-EVT"].severity is Severity.INFO
    assert by_rule["SM-UNUSED-EVT"].subject == "m:ghost"


def _oracle_reachable(sm: StateMachine) -> set[str]:
    # independent oracle: fixed-point over the one-step successor relation
    step = {s: set() for s in sm.states}
    for src, _, dst in sm.transitions:
        step[src].add(dst)
    reached = {sm.initial}
    while True:
        frontier = set()
        for s in reached:
            frontier |= step[s]
        if frontier <= reached:
            return reached
        reached |= frontier


def random_machine(rng: random.Random) -> StateMachine:
    n_states = rng.randint(1, 6)
    states = [f"s{i}" for i in range(n_states)]
    events = [f"e{i}" for i in range(rng.randint(1, 4))]
    transitions = []
    for _ in range(rng.randint(0, 10)):
        transitions.append((rng.choice(states), rng.choice(events),
                            rng.choice(states)))
    return machine(states, states[0], transitions, events=events)


def test_reachability_matches_oracle_on_random_machines():
    rng = random.Random(4242)
    for _ in range(300):
        sm = random_machine(rng)
        unreachable_reported = {
            f.subject.split(":", 1)[1]
            for f in validate_state_machine(sm) if f.rule_id == "SM-UNREACH"}
        assert unreachable_reported == set(sm.states) - _oracle_reachable(sm)


# --------------------------------------------------------------------------
# signals
# --------------------------------------------------------------------------


def test_complete_signal_is_clean():
    assert check_signals(item(signals=[FULL_SIGNAL])) == []


def test_bare_signal_gets_unit_and_range_warnings():
    findings = check_signals(item(signals=[BARE_SIGNAL]))
    assert sorted(f.rule_id for f in findings) == ["SIG-NO-RANGE", "SIG-NO-UNIT"]


def test_missing_unit_count_matches_enumeration():
    signals = [FULL_SIGNAL] * 7 + [
        InterfaceSignal(name=f"n{i}", direction="in", semantic_type="x",
                        range_min=0.0, range_max=1.0)
        for i in range(3)]
    findings = check_signals(item(signals=signals))
    assert sum(1 for f in findings if f.rule_id == "SIG-NO-UNIT") == 3


def test_inverted_range_is_error():
    bad = InterfaceSignal(name="b", direction="in", semantic_type="x",
                          unit="m", range_min=5.0, range_max=1.0)
    findings = check_signals(item(signals=[bad]))
    assert [(f.rule_id, f.severity) for f in findings] == [
        ("SIG-BAD-RANGE", Severity.ERROR)]


# --------------------------------------------------------------------------
# rigor score
# --------------------------------------------------------------------------

VALID_MACHINE = machine(["Off", "Active"], "Off",
                        [("Off", "engage", "Active"),
                         ("Active", "disengage", "Off")])


def test_everything_satisfied_scores_one():
    score, missing = score_item_rigor(item(signals=[FULL_SIGNAL]), (VALID_MACHINE,))
    assert score == 1.0
    assert missing == []


def test_nothing_satisfied_scores_zero():
    score, missing = score_item_rigor(
        item(req=6 * (False,), bound=6 * (False,), art=4 * (False,),
             signals=[BARE_SIGNAL]))
    assert score == 0.0
    assert len(missing) == 17


def test_one_incomplete_signal_costs_one_criterion():
    incomplete = InterfaceSignal(name="x", direction="in", semantic_type="x",
                                 range_min=0.0, range_max=1.0)  # no unit
    score, missing = score_item_rigor(item(signals=[FULL_SIGNAL, incomplete]),
                                      (VALID_MACHINE,))
    assert missing == ["signals.complete"]
    assert score == 16 / 17


def test_std_artifact_needs_a_valid_machine():
    broken = machine(["Off", "Lost"], "Off", [])  # Lost unreachable
    score, missing = score_item_rigor(item(signals=[FULL_SIGNAL]), (broken,))
    assert "artifact.state_transition_diagrams" in missing
    assert score == 16 / 17


def test_score_monotone_in_each_criterion():
    rng = random.Random(99)
    for _ in range(250):
        req = tuple(rng.random() < 0.5 for _ in range(6))
        bound = tuple(rng.random() < 0.5 for _ in range(6))
        art = tuple(rng.random() < 0.5 for _ in range(4))
        base_item = item(req=req, bound=bound, art=art, signals=[FULL_SIGNAL])
        base_score, _ = score_item_rigor(base_item, (VALID_MACHINE,))
        # flip any one unsatisfied checklist flag to satisfied
        for group, size in (("req", 6), ("bound", 6), ("art", 4)):
            flags = {"req": req, "bound": bound, "art": art}[group]
            for i in range(size):
                if flags[i]:
                    continue
                bumped = dict(req=req, bound=bound, art=art)
                bumped[group] = flags[:i] + (True,) + flags[i + 1:]
                improved = item(req=bumped["req"], bound=bumped["bound"],
                                art=bumped["art"], signals=[FULL_SIGNAL])
                new_score, _ = score_item_rigor(improved, (VALID_MACHINE,))
                assert new_score >= base_score


def test_score_is_one_iff_missing_empty():
    rng = random.Random(7)
    for _ in range(250):
        it = item(req=tuple(rng.random() < 0.7 for _ in range(6)),
                  bound=tuple(rng.random() < 0.7 for _ in range(6)),
                  art=tuple(rng.random() < 0.7 for _ in range(4)),
                  signals=[FULL_SIGNAL])
        score, missing = score_item_rigor(it, (VALID_MACHINE,))
        assert 0.0 <= score <= 1.0
        assert (score == 1.0) == (missing == [])
