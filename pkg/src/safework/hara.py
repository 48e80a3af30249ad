"""Hazard analysis and risk assessment checks over hazards and safety goals."""

from __future__ import annotations

from collections.abc import Iterable

from .model import (
    Asil,
    EmptyInputError,
    Finding,
    SafetyModel,
    Severity,
    sort_findings,
)


def max_asil(levels: Iterable[Asil]) -> Asil:
    """Maximum under the total order QM < A < B < C < D."""
    levels = list(levels)
    if not levels:
        raise EmptyInputError("max_asil needs at least one level")
    return max(levels)


def check_hara(model: SafetyModel) -> list[Finding]:
    """Coverage and consistency of the hazard/safety-goal pairing.

    HARA-UNCOVERED (error): hazard rated A or above with no covering goal.
    HARA-WEAK-GOAL (error): goal rated below the strictest hazard it covers.
    HARA-QM-COVERED (info): goal covering only QM-rated hazards.
    HARA-NO-HAZARD (warning): an item with no hazards at all.
    QM hazards need no coverage: QM means quality-managed, no safety goal
    is required.
    """
    findings: list[Finding] = []

    if not model.hazards:
        findings.append(Finding(
            "HARA-NO-HAZARD", Severity.WARNING, model.item.name,
            f"item {model.item.name!r} declares no hazards"))

    covered: set[str] = set()
    for goal in model.safety_goals:
        covered.update(goal.covers)

    hazards_by_id = {h.id: h for h in model.hazards}
    for hazard in model.hazards:
        if hazard.asil is not None and hazard.asil >= Asil.A and hazard.id not in covered:
            findings.append(Finding(
                "HARA-UNCOVERED", Severity.ERROR, hazard.id,
                f"hazard {hazard.id!r} (ASIL {hazard.asil}) is covered by no safety goal"))

    for goal in model.safety_goals:
        rated = [hazards_by_id[h].asil for h in goal.covers
                 if hazards_by_id[h].asil is not None]
        if not rated:
            continue
        strictest = max_asil(rated)
        if goal.asil < strictest:
            findings.append(Finding(
                "HARA-WEAK-GOAL", Severity.ERROR, goal.id,
                f"goal {goal.id!r} is ASIL {goal.asil} but covers an "
                f"ASIL {strictest} hazard"))
        if strictest == Asil.QM:
            findings.append(Finding(
                "HARA-QM-COVERED", Severity.INFO, goal.id,
                f"goal {goal.id!r} covers only QM hazards"))

    return sort_findings(findings)
