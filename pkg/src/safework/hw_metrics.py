"""ISO 26262 hardware architectural metrics and failure-rate classes.

Each FMEDA row's total rate is partitioned into single-point, residual,
latent, detected-multiple-point and safe portions; SPFM, LFM and PMHF are
then ratios and sums over those portions:

    SPFM = 1 - (sum_spf + sum_rf) / sum_sr
    LFM  = 1 - sum_mpf_latent / (sum_sr - sum_spf - sum_rf)
    PMHF = sum_spf + sum_rf            [per hour]

with SPFM := 1 when no safety-related rate exists and LFM := 1 when no
faults are left to be latent.  Targets per ASIL:

    metric   ASIL B     ASIL C     ASIL D
    SPFM     >= 90%     >= 97%     >= 99%
    LFM      >= 60%     >= 80%     >= 90%
    PMHF     < 1e-7/h   < 1e-7/h   < 1e-8/h

Percentage targets are inclusive, the PMHF target is strict; QM and A
carry no hardware-metric targets.

Failure-rate classes anchor at one-hundredth of the ASIL D PMHF target:
class 1 targets 1e-10/h (to be undercut strictly) and every next class
relaxes the target by a factor of ten (met inclusively).
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .model import (
    Asil,
    EmptyInputError,
    FmedaRow,
    InvalidClassError,
    NotApplicableError,
)


@dataclass(frozen=True)
class RowPartition:
    """One row's rate split into fault categories, all per hour."""

    lambda_spf: float
    lambda_rf: float
    lambda_mpf_latent: float
    lambda_mpf_detected: float
    lambda_safe: float

    @property
    def total(self) -> float:
        return (self.lambda_spf + self.lambda_rf + self.lambda_mpf_latent
                + self.lambda_mpf_detected + self.lambda_safe)


@dataclass(frozen=True)
class HwMetricsResult:
    spfm: float
    lfm: float
    pmhf: float  # per hour
    lambda_sr_total: float
    lambda_spf_total: float
    lambda_rf_total: float
    lambda_mpf_latent_total: float


@dataclass(frozen=True)
class MetricVerdict:
    metric: str                # "SPFM" | "LFM" | "PMHF"
    value: float
    target: float | None       # None: no target for this ASIL
    comparator: str | None     # "ge" | "lt"
    passed: bool | None


@dataclass(frozen=True)
class FrcVerdict:
    component_id: str
    failure_mode: str
    required_class: int
    class_target: float        # per hour
    observed_residual: float   # per hour
    passes: bool
    dedicated_measures_required: bool


def classify_fmeda_row(row: FmedaRow) -> RowPartition:
    """Split a row's total rate into fault categories.

    Non-safety-related rates are entirely safe.  An uncovered direct
    violator is a single-point fault; a covered one leaves a residual
    fraction (1 - dc_residual), the detected remainder joining the latent
    pool.  The latent pool splits by dc_latent (absent coverage counts as
    zero); rows that cannot stay latent contribute the pool to safe.
    Remainders are computed by subtraction so the parts conserve the total.
    """
    lam = row.lambda_total
    if not row.safety_related:
        return RowPartition(0.0, 0.0, 0.0, 0.0, lam)

    spf = rf = 0.0
    if row.can_violate_goal_directly:
        if row.dc_residual is None:
            return RowPartition(lam, 0.0, 0.0, 0.0, 0.0)
        rf = lam * (1.0 - row.dc_residual)
        pool = lam - rf
    else:
        pool = lam

    if row.can_be_latent:
        dc_latent = row.dc_latent if row.dc_latent is not None else 0.0
        mpf_latent = pool * (1.0 - dc_latent)
        mpf_detected = pool - mpf_latent
        return RowPartition(spf, rf, mpf_latent, mpf_detected, 0.0)
    return RowPartition(spf, rf, 0.0, 0.0, pool)


def compute_hw_metrics(rows: Iterable[FmedaRow]) -> HwMetricsResult:
    """Aggregate SPFM, LFM and PMHF over a set of FMEDA rows."""
    rows = list(rows)
    if not rows:
        raise EmptyInputError("compute_hw_metrics needs at least one FMEDA row")

    parts = [(row, classify_fmeda_row(row)) for row in rows]
    sr_parts = [p for row, p in parts if row.safety_related]
    lambda_sr = math.fsum(p.total for p in sr_parts)
    lambda_spf = math.fsum(p.lambda_spf for p in sr_parts)
    lambda_rf = math.fsum(p.lambda_rf for p in sr_parts)
    lambda_mpf_latent = math.fsum(p.lambda_mpf_latent for p in sr_parts)

    dangerous = lambda_spf + lambda_rf
    spfm = 1.0 if lambda_sr == 0.0 else 1.0 - dangerous / lambda_sr
    lfm_denominator = lambda_sr - dangerous
    lfm = 1.0 if lfm_denominator == 0.0 else 1.0 - lambda_mpf_latent / lfm_denominator

    return HwMetricsResult(spfm=spfm, lfm=lfm, pmhf=dangerous,
                           lambda_sr_total=lambda_sr,
                           lambda_spf_total=lambda_spf,
                           lambda_rf_total=lambda_rf,
                           lambda_mpf_latent_total=lambda_mpf_latent)


# ASIL -> (SPFM target, LFM target, PMHF target per hour)
METRIC_TARGETS: dict[Asil, tuple[float, float, float]] = {
    Asil.B: (0.90, 0.60, 1e-7),
    Asil.C: (0.97, 0.80, 1e-7),
    Asil.D: (0.99, 0.90, 1e-8),
}


def check_metric_targets(result: HwMetricsResult, asil: Asil) -> list[MetricVerdict]:
    """Verdicts against the ASIL's targets; QM/A have no targets."""
    if asil not in METRIC_TARGETS:
        return [MetricVerdict("SPFM", result.spfm, None, None, None),
                MetricVerdict("LFM", result.lfm, None, None, None),
                MetricVerdict("PMHF", result.pmhf, None, None, None)]
    spfm_target, lfm_target, pmhf_target = METRIC_TARGETS[asil]
    return [
        MetricVerdict("SPFM", result.spfm, spfm_target, "ge",
                      result.spfm >= spfm_target),
        MetricVerdict("LFM", result.lfm, lfm_target, "ge",
                      result.lfm >= lfm_target),
        MetricVerdict("PMHF", result.pmhf, pmhf_target, "lt",
                      result.pmhf < pmhf_target),
    ]


def frc_target(class_index: int) -> float:
    """Per-hour target of a failure-rate class: 1e-10 for class 1, x10 per class."""
    if class_index < 1:
        raise InvalidClassError(f"failure rate class must be >= 1, got {class_index}")
    # 10^(i-11) keeps the ladder on exact powers of ten (integer exponent).
    return 10.0 ** (class_index - 11)


# diagnostic-coverage band thresholds, highest first
_DC_BANDS = (0.999, 0.99, 0.90)

# ASIL -> required class per band (>=99.9%, >=99%, >=90%, <90%)
_FRC_TABLE: dict[Asil, tuple[int, int, int, int]] = {
    Asil.D: (4, 3, 2, 1),
    Asil.C: (5, 4, 3, 2),
    Asil.B: (5, 4, 3, 2),
}


def _dc_band(dc_residual: float | None) -> int:
    if dc_residual is None:
        return 3
    for band, threshold in enumerate(_DC_BANDS):
        if dc_residual >= threshold:
            return band
    return 3


def check_frc(row: FmedaRow, goal_asil: Asil) -> FrcVerdict:
    """Failure-rate-class verdict for one direct-violation failure mode.

    The class 1 target must be undercut strictly; classes 2 and above are
    met inclusively.  Dedicated measures are demanded in the lowest
    coverage band for ASIL C and D.
    """
    if goal_asil not in _FRC_TABLE:
        raise NotApplicableError(
            f"failure rate classes apply to ASIL B/C/D goals, not {goal_asil}")
    if not (row.safety_related and row.can_violate_goal_directly):
        raise NotApplicableError(
            f"row {row.component_id}/{row.failure_mode} cannot directly "
            "violate a safety goal")

    band = _dc_band(row.dc_residual)
    required_class = _FRC_TABLE[goal_asil][band]
    target = frc_target(required_class)
    if required_class == 1:
        passes = row.lambda_total < target
    else:
        passes = row.lambda_total <= target
    dedicated = band == 3 and goal_asil in (Asil.C, Asil.D)
    return FrcVerdict(component_id=row.component_id, failure_mode=row.failure_mode,
                      required_class=required_class, class_target=target,
                      observed_residual=row.lambda_total, passes=passes,
                      dedicated_measures_required=dedicated)
