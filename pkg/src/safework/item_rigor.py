"""Item-definition rigor scoring and state-machine/signal validation.

The rigor score is the satisfied fraction of 17 equally weighted criteria:
the six requirement-checklist flags, the six boundary-checklist flags, the
four behavioural-artifact kinds, and one signal-completeness criterion.
The state-transition-diagram artifact only counts when at least one
supplied state machine validates without error-severity findings.
"""

from __future__ import annotations

from collections import Counter, deque

from .model import (
    ARTIFACT_KINDS,
    BOUNDARY_CRITERIA,
    REQUIREMENT_CRITERIA,
    Finding,
    InterfaceSignal,
    ItemDefinition,
    Severity,
    StateMachine,
    sort_findings,
)


def validate_state_machine(sm: StateMachine) -> list[Finding]:
    """Determinism, reachability and hygiene checks for one state machine.

    SM-NONDET (error): two transitions share (from_state, event).
    SM-UNREACH (error): state unreachable from the initial state.
    SM-DEAD (warning): non-initial state with no outgoing transitions.
    SM-UNUSED-EVT (info): declared event used by no transition.
    """
    findings: list[Finding] = []

    keys = Counter((src, event) for src, event, _ in sm.transitions)
    for (src, event), count in keys.items():
        if count > 1:
            findings.append(Finding(
                "SM-NONDET", Severity.ERROR, f"{sm.name}:{src}",
                f"{count} transitions from state {src!r} on event {event!r}"))

    for state in sorted(set(sm.states) - reachable_states(sm)):
        findings.append(Finding(
            "SM-UNREACH", Severity.ERROR, f"{sm.name}:{state}",
            f"state {state!r} is not reachable from initial state {sm.initial!r}"))

    outgoing = {src for src, _, _ in sm.transitions}
    for state in sm.states:
        if state != sm.initial and state not in outgoing:
            findings.append(Finding(
                "SM-DEAD", Severity.WARNING, f"{sm.name}:{state}",
                f"state {state!r} has no outgoing transitions"))

    used_events = {event for _, event, _ in sm.transitions}
    for event in sm.events:
        if event not in used_events:
            findings.append(Finding(
                "SM-UNUSED-EVT", Severity.INFO, f"{sm.name}:{event}",
                f"event {event!r} is declared but never used"))

    return sort_findings(findings)


def reachable_states(sm: StateMachine) -> set[str]:
    """States reachable from the initial state via transitions (BFS)."""
    adjacency: dict[str, list[str]] = {}
    for src, _, dst in sm.transitions:
        adjacency.setdefault(src, []).append(dst)
    seen = {sm.initial}
    queue = deque([sm.initial])
    while queue:
        for dst in adjacency.get(queue.popleft(), ()):
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return seen


def check_signals(item: ItemDefinition) -> list[Finding]:
    """Unit and value-range completeness of the item's interface signals."""
    findings: list[Finding] = []
    for signal in item.interfaces:
        if signal.unit is None:
            findings.append(Finding("SIG-NO-UNIT", Severity.WARNING, signal.name,
                                    f"signal {signal.name!r} has no unit"))
        if signal.range_min is None and signal.range_max is None:
            findings.append(Finding("SIG-NO-RANGE", Severity.WARNING, signal.name,
                                    f"signal {signal.name!r} declares no value range"))
        if (signal.range_min is not None and signal.range_max is not None
                and signal.range_min > signal.range_max):
            findings.append(Finding("SIG-BAD-RANGE", Severity.ERROR, signal.name,
                                    f"range_min {signal.range_min} exceeds "
                                    f"range_max {signal.range_max}"))
    return sort_findings(findings)


def _signal_complete(signal: InterfaceSignal) -> bool:
    return (signal.unit is not None
            and signal.range_min is not None
            and signal.range_max is not None
            and signal.range_min <= signal.range_max)


def score_item_rigor(item: ItemDefinition,
                     machines: tuple[StateMachine, ...] = ()) -> tuple[float, list[str]]:
    """Fraction of the 17 rigor criteria satisfied, plus the unmet criteria.

    Returns (score in [0, 1], names of unsatisfied criteria). The score is
    1.0 exactly when the missing list is empty.
    """
    satisfied: list[tuple[str, bool]] = []

    for name, flag in zip(REQUIREMENT_CRITERIA, item.requirement_checklist):
        satisfied.append((f"requirement.{name}", flag))
    for name, flag in zip(BOUNDARY_CRITERIA, item.boundary_checklist):
        satisfied.append((f"boundary.{name}", flag))

    has_valid_machine = any(
        not any(f.severity is Severity.ERROR for f in validate_state_machine(sm))
        for sm in machines)
    for name, flag in zip(ARTIFACT_KINDS, item.artifacts_present):
        if name == "state_transition_diagrams":
            flag = flag and has_valid_machine
        satisfied.append((f"artifact.{name}", flag))

    satisfied.append(("signals.complete",
                      all(_signal_complete(s) for s in item.interfaces)))

    missing = [name for name, ok in satisfied if not ok]
    score = (len(satisfied) - len(missing)) / len(satisfied)
    return score, missing
