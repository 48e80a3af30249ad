"""Safety-case credibility rollup and gap findings.

Evidence credibility is min(confidence, coverage); argument credibility is
the minimum of acceptance-criteria reasonableness, suitability, supporting
claim credibilities and evidence credibilities; claim credibility is the
maximum over its alternative argument legs (weakest link within a leg,
best leg across legs).  An unsupported claim scores 0.  Each credibility
carries the factor that minimised it, so gap findings can name the score
that dragged a weak node down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    CyclicCaseError,
    Finding,
    MissingRootError,
    SafetyCase,
    Severity,
    sort_findings,
)


@dataclass(frozen=True)
class Credibility:
    value: float
    limiting_factor: str  # human description of the argmin score


def assess_cca(case: SafetyCase) -> tuple[dict[str, Credibility], float]:
    """Per-node credibilities plus the root claim's credibility.

    Raises :class:`MissingRootError` if the root claim does not exist and
    :class:`CyclicCaseError` if the claim-argument graph is cyclic.
    Ties are broken by first occurrence in declaration order, making the
    reported limiting factor deterministic.
    """
    claims = {c.id: c for c in case.claims}
    arguments = {a.id: a for a in case.arguments}
    evidence = {e.id: e for e in case.evidence}
    if case.root not in claims:
        raise MissingRootError(f"root claim {case.root!r} is not declared")

    credibilities: dict[str, Credibility] = {}

    for ev in case.evidence:
        if ev.confidence <= ev.coverage:
            cred = Credibility(ev.confidence, f"evidence {ev.id} confidence {ev.confidence!r}")
        else:
            cred = Credibility(ev.coverage, f"evidence {ev.id} coverage {ev.coverage!r}")
        credibilities[ev.id] = cred

    in_progress: set[str] = set()

    def claim_cred(claim_id: str) -> Credibility:
        if claim_id in credibilities:
            return credibilities[claim_id]
        if claim_id in in_progress:
            raise CyclicCaseError(f"claim-argument cycle through claim {claim_id!r}")
        in_progress.add(claim_id)
        claim = claims[claim_id]
        if not claim.supported_by:
            cred = Credibility(0.0, f"claim {claim.id} has no supporting arguments")
        else:
            best = None
            for arg_id in claim.supported_by:
                candidate = argument_cred(arg_id)
                if best is None or candidate.value > best.value:
                    best = candidate
            cred = best
        in_progress.discard(claim_id)
        credibilities[claim_id] = cred
        return cred

    def argument_cred(argument_id: str) -> Credibility:
        if argument_id in credibilities:
            return credibilities[argument_id]
        if argument_id in in_progress:
            raise CyclicCaseError(
                f"claim-argument cycle through argument {argument_id!r}")
        in_progress.add(argument_id)
        argument = arguments[argument_id]
        factors: list[Credibility] = [
            Credibility(argument.acceptance_criteria_reasonableness,
                        f"argument {argument.id} acceptance-criteria reasonableness "
                        f"{argument.acceptance_criteria_reasonableness!r}"),
            Credibility(argument.suitability,
                        f"argument {argument.id} suitability {argument.suitability!r}"),
        ]
        factors.extend(claim_cred(p) for p in argument.premises)
        factors.extend(credibilities[e] for e in argument.evidence)
        weakest = factors[0]
        for candidate in factors[1:]:
            if candidate.value < weakest.value:
                weakest = candidate
        in_progress.discard(argument_id)
        credibilities[argument_id] = weakest
        return weakest

    root = claim_cred(case.root)
    for claim in case.claims:
        claim_cred(claim.id)
    for argument in case.arguments:
        argument_cred(argument.id)
    return credibilities, root.value


def find_case_gaps(case: SafetyCase, threshold: float) -> list[Finding]:
    """Unsupported claims and nodes whose credibility falls below threshold.

    CCA-UNSUPPORTED (error): claim with no arguments (its zero credibility
    is not additionally reported as weak).
    CCA-WEAK (warning): any other node with credibility < threshold, naming
    the minimising factor.
    """
    credibilities, _ = assess_cca(case)
    findings: list[Finding] = []
    unsupported = {c.id for c in case.claims if not c.supported_by}
    for claim_id in unsupported:
        findings.append(Finding(
            "CCA-UNSUPPORTED", Severity.ERROR, claim_id,
            f"claim {claim_id!r} has no supporting arguments"))
    for node_id, cred in credibilities.items():
        if node_id in unsupported:
            continue
        if cred.value < threshold:
            findings.append(Finding(
                "CCA-WEAK", Severity.WARNING, node_id,
                f"credibility {cred.value!r} below threshold {threshold!r}; "
                f"limited by {cred.limiting_factor}"))
    return sort_findings(findings)
