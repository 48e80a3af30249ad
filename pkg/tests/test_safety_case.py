from __future__ import annotations

import random

import pytest

from safework.model import (
    Argument,
    Claim,
    CyclicCaseError,
    Evidence,
    MissingRootError,
    SafetyCase,
    Severity,
)
from safework.safety_case import assess_cca, find_case_gaps


def one_leg_case(acr=1.0, suit=1.0, conf=1.0, cov=1.0):
    return SafetyCase(
        root="C1",
        claims=(Claim("C1", "system is safe", ("A1",)),),
        arguments=(Argument("A1", "metrics argument", acr, suit, (), ("E1",)),),
        evidence=(Evidence("E1", "test campaign", conf, cov),))


def test_perfect_leg_scores_one():
    _, root = assess_cca(one_leg_case())
    assert root == 1.0


def test_unsupported_root_scores_zero_with_finding():
    case = SafetyCase(root="C1", claims=(Claim("C1", "safe", ()),),
                      arguments=(), evidence=())
    creds, root = assess_cca(case)
    assert root == 0.0
    findings = find_case_gaps(case, threshold=0.5)
    assert [(f.rule_id, f.severity, f.subject) for f in findings] == [
        ("CCA-UNSUPPORTED", Severity.ERROR, "C1")]


def test_argument_is_weakest_link():
    creds, root = assess_cca(one_leg_case(acr=0.9, suit=0.8, conf=0.95, cov=0.7))
    assert creds["A1"].value == 0.7
    assert root == 0.7
    assert "coverage" in creds["A1"].limiting_factor


def test_weak_finding_names_minimizing_factor():
    case = one_leg_case(acr=0.9, suit=0.8, conf=0.95, cov=0.7)
    findings = find_case_gaps(case, threshold=0.8)
    weak = [f for f in findings if f.rule_id == "CCA-WEAK"]
    assert weak, findings
    assert all("coverage 0.7" in f.message for f in weak)


def test_alternative_legs_take_the_best():
    case = SafetyCase(
        root="C1",
        claims=(Claim("C1", "safe", ("A1", "A2")),),
        arguments=(
            Argument("A1", "weak leg", 0.4, 1.0, (), ("E1",)),
            Argument("A2", "strong leg", 0.9, 0.95, (), ("E2",)),
        ),
        evidence=(Evidence("E1", "partial", 1.0, 1.0),
                  Evidence("E2", "thorough", 0.9, 0.95)))
    creds, root = assess_cca(case)
    assert root == 0.9
    findings = find_case_gaps(case, threshold=0.8)
    assert not any(f.subject == "C1" for f in findings)  # best leg carries the claim
    assert any(f.subject == "A1" and f.rule_id == "CCA-WEAK" for f in findings)


def test_nested_premises_roll_up():
    case = SafetyCase(
        root="C1",
        claims=(Claim("C1", "safe", ("A1",)), Claim("C2", "subsystem safe", ("A2",))),
        arguments=(
            Argument("A1", "decomposition", 1.0, 1.0, ("C2",), ()),
            Argument("A2", "evidence-backed", 1.0, 0.85, (), ("E1",)),
        ),
        evidence=(Evidence("E1", "review", 0.9, 1.0),))
    creds, root = assess_cca(case)
    assert creds["C2"].value == 0.85
    assert root == 0.85


def test_missing_root_raises():
    case = SafetyCase(root="nope", claims=(Claim("C1", "x", ()),),
                      arguments=(), evidence=())
    with pytest.raises(MissingRootError):
        assess_cca(case)


def test_cycle_raises():
    case = SafetyCase(
        root="C1",
        claims=(Claim("C1", "a", ("A1",)),),
        arguments=(Argument("A1", "b", 1.0, 1.0, ("C1",), ()),),
        evidence=())
    with pytest.raises(CyclicCaseError):
        assess_cca(case)


def random_case(rng: random.Random) -> SafetyCase:
    evidence = tuple(Evidence(f"E{i}", "e", rng.random(), rng.random())
                     for i in range(rng.randint(1, 3)))
    arguments = tuple(
        Argument(f"A{i}", "a", rng.random(), rng.random(), (),
                 tuple(rng.sample([e.id for e in evidence],
                                  rng.randint(1, len(evidence)))))
        for i in range(rng.randint(1, 3)))
    claims = (Claim("C1", "root", tuple(
        rng.sample([a.id for a in arguments], rng.randint(1, len(arguments))))),)
    return SafetyCase(root="C1", claims=claims, arguments=arguments,
                      evidence=evidence)


def test_rollup_monotone_in_any_single_score():
    rng = random.Random(55)
    for _ in range(250):
        case = random_case(rng)
        _, root = assess_cca(case)
        # bump one evidence confidence upward
        target = rng.choice(case.evidence)
        bumped_evidence = tuple(
            Evidence(e.id, e.text, min(1.0, e.confidence + rng.random()), e.coverage)
            if e.id == target.id else e
            for e in case.evidence)
        _, bumped_root = assess_cca(SafetyCase(case.root, case.claims,
                                               case.arguments, bumped_evidence))
        assert bumped_root >= root


def test_root_is_one_iff_a_perfect_leg_exists():
    rng = random.Random(56)
    for _ in range(200):
        case = random_case(rng)
        creds, root = assess_cca(case)
        perfect_leg = any(
            arg.acceptance_criteria_reasonableness == 1.0 and arg.suitability == 1.0
            and all(creds[e].value == 1.0 for e in arg.evidence)
            for arg in case.arguments if arg.id in case.claims[0].supported_by)
        assert (root == 1.0) == perfect_leg
