"""Harm-probability model, validation targets, sensitivities and a
Monte-Carlo event simulator.

The analytic model combines the leaf probabilities as

    p_fi = p_is + p_pl
    p_ub = p_tc * (p_fi + p_sm)
    p_h  = (p_fs + p_ub) * p_scs * p_ip + p_ode

The additive terms are a rare-event approximation: any intermediate
exceeding 1 raises a SOTIF-SUPRA-UNIT finding (fatal in strict mode)
rather than being clamped, so modelling errors stay visible.  The
simulator draws each leaf as an independent Bernoulli event per trial and
serves as an independent check on the analytic value.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .model import (
    DERIVED_SYMBOLS,
    LEAF_SYMBOLS,
    Finding,
    Severity,
    SotifLeaves,
    StrictModelViolationError,
    UnknownSymbolError,
    ValidationTarget,
)


@dataclass(frozen=True)
class SotifResult:
    p_fi: float
    p_ub: float
    p_h: float


@dataclass(frozen=True)
class TargetVerdict:
    name: str
    symbol: str
    observed: float
    threshold: float
    comparator: str
    passed: bool


# built-in performance-limitation acceptance target, applied when the model
# declares no explicit target for p_pl
PL_GAMAB = ValidationTarget(name="PL-GAMAB", symbol="p_pl",
                            threshold=1e-8, comparator="le")


def compute_harm(leaves: SotifLeaves, *,
                 strict: bool = False) -> tuple[SotifResult, list[Finding]]:
    """Evaluate the harm model; flags supra-unit intermediates."""
    p_fi = leaves.p_is + leaves.p_pl
    p_ub = leaves.p_tc * (p_fi + leaves.p_sm)
    p_h = (leaves.p_fs + p_ub) * leaves.p_scs * leaves.p_ip + leaves.p_ode

    findings: list[Finding] = []
    intermediates = (("p_fi", p_fi),
                     ("p_fi + p_sm", p_fi + leaves.p_sm),
                     ("p_fs + p_ub", leaves.p_fs + p_ub),
                     ("p_h", p_h))
    for name, value in intermediates:
        if value > 1.0:
            severity = Severity.ERROR if strict else Severity.WARNING
            findings.append(Finding(
                "SOTIF-SUPRA-UNIT", severity, name,
                f"intermediate {name} = {value!r} exceeds 1; the additive "
                "model is a rare-event approximation"))
    if strict and findings:
        raise StrictModelViolationError(
            "; ".join(f.message for f in findings))
    return SotifResult(p_fi=p_fi, p_ub=p_ub, p_h=p_h), findings


def _symbol_values(leaves: SotifLeaves, result: SotifResult) -> dict[str, float]:
    values = leaves.as_dict()
    values.update({"p_fi": result.p_fi, "p_ub": result.p_ub, "p_h": result.p_h})
    return values


_COMPARE = {
    "le": lambda observed, threshold: observed <= threshold,
    "lt": lambda observed, threshold: observed < threshold,
    "ge": lambda observed, threshold: observed >= threshold,
    "gt": lambda observed, threshold: observed > threshold,
}


def check_sotif_targets(leaves: SotifLeaves, result: SotifResult,
                        targets: Iterable[ValidationTarget]) -> list[TargetVerdict]:
    """One verdict per declared target, plus the built-in PL-GAMAB default
    when no explicit target constrains p_pl."""
    targets = list(targets)
    if not any(t.symbol == "p_pl" for t in targets):
        targets.append(PL_GAMAB)
    values = _symbol_values(leaves, result)
    verdicts = []
    for target in targets:
        if target.symbol not in values:
            raise UnknownSymbolError(
                f"target {target.name!r} names unknown symbol {target.symbol!r}; "
                f"known: {LEAF_SYMBOLS + DERIVED_SYMBOLS}")
        observed = values[target.symbol]
        verdicts.append(TargetVerdict(
            name=target.name, symbol=target.symbol, observed=observed,
            threshold=target.threshold, comparator=target.comparator,
            passed=_COMPARE[target.comparator](observed, target.threshold)))
    return verdicts


def sensitivity(leaves: SotifLeaves) -> dict[str, float]:
    """Analytic partial derivatives of p_h with respect to each leaf."""
    exposure = leaves.p_scs * leaves.p_ip
    p_fi = leaves.p_is + leaves.p_pl
    p_ub = leaves.p_tc * (p_fi + leaves.p_sm)
    dh_dleaf_common = leaves.p_tc * exposure
    return {
        "p_fs": exposure,
        "p_tc": (leaves.p_is + leaves.p_pl + leaves.p_sm) * exposure,
        "p_is": dh_dleaf_common,
        "p_pl": dh_dleaf_common,
        "p_sm": dh_dleaf_common,
        "p_scs": (leaves.p_fs + p_ub) * leaves.p_ip,
        "p_ip": (leaves.p_fs + p_ub) * leaves.p_scs,
        "p_ode": 1.0,
    }


_MC_CHUNK = 1 << 18  # trials per block; fixed so the draw stream is reproducible


def monte_carlo_harm(leaves: SotifLeaves, samples: int,
                     seed: int) -> tuple[float, float]:
    """Estimate the harm probability by simulating independent leaf events.

    Per trial: harm = ((FS or (TC and (IS or PL or SM))) and SCS and IP)
    or ODE.  Uses the counter-based Philox generator keyed on the seed, so
    a given (seed, samples) pair reproduces bit-for-bit.  Returns
    (estimate, binomial standard error).
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    probs = np.array([leaves.as_dict()[s] for s in LEAF_SYMBOLS])
    rng = np.random.Generator(np.random.Philox(key=seed))
    hits = 0
    remaining = samples
    while remaining > 0:
        n = min(remaining, _MC_CHUNK)
        events = rng.random((n, len(LEAF_SYMBOLS))) < probs
        fs, tc, is_, pl, sm, scs, ip, ode = events.T
        unintended = tc & (is_ | pl | sm)
        harm = ((fs | unintended) & scs & ip) | ode
        hits += int(harm.sum())
        remaining -= n
    estimate = hits / samples
    std_error = math.sqrt(estimate * (1.0 - estimate) / samples)
    return estimate, std_error
