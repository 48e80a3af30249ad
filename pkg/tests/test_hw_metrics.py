from __future__ import annotations

import math
import random

import pytest

from safework.hw_metrics import (
    METRIC_TARGETS,
    HwMetricsResult,
    check_frc,
    check_metric_targets,
    classify_fmeda_row,
    compute_hw_metrics,
    frc_target,
)
from safework.model import (
    Asil,
    EmptyInputError,
    FmedaRow,
    InvalidClassError,
    NotApplicableError,
)

FIT = 1e-9


def row(lam_fit=100.0, sr=True, violates=True, dc_res=None, latent=False,
        dc_lat=None, component="c", mode="m"):
    return FmedaRow(component_id=component, failure_mode=mode,
                    lambda_total=lam_fit * FIT, safety_related=sr,
                    can_violate_goal_directly=violates, dc_residual=dc_res,
                    can_be_latent=latent, dc_latent=dc_lat)


WORKED_ROW = row(100.0, dc_res=0.99, latent=True, dc_lat=0.9)


# --------------------------------------------------------------------------
# partition
# --------------------------------------------------------------------------


def test_partition_worked_example():
    # hand arithmetic: rf = 100*(1-0.99) = 1 FIT; pool = 99 FIT;
    # latent = 99*(1-0.9) = 9.9 FIT; detected = 89.1 FIT
    p = classify_fmeda_row(WORKED_ROW)
    assert p.lambda_spf == 0.0
    assert p.lambda_rf == pytest.approx(1.0 * FIT, rel=1e-12)
    assert p.lambda_mpf_latent == pytest.approx(9.9 * FIT, rel=1e-12)
    assert p.lambda_mpf_detected == pytest.approx(89.1 * FIT, rel=1e-12)
    assert p.lambda_safe == 0.0


def test_non_safety_related_is_all_safe():
    p = classify_fmeda_row(row(50.0, sr=False, violates=False))
    assert p.lambda_safe == 50.0 * FIT
    assert (p.lambda_spf, p.lambda_rf, p.lambda_mpf_latent,
            p.lambda_mpf_detected) == (0.0, 0.0, 0.0, 0.0)


def test_uncovered_direct_violation_is_single_point():
    p = classify_fmeda_row(row(10.0, dc_res=None))
    assert p.lambda_spf == 10.0 * FIT
    assert p.total == p.lambda_spf


def random_row(rng: random.Random) -> FmedaRow:
    violates = rng.random() < 0.6
    latent = rng.random() < 0.6
    return row(lam_fit=rng.uniform(0.0, 1000.0), sr=rng.random() < 0.8,
               violates=violates,
               dc_res=rng.uniform(0.0, 1.0) if violates and rng.random() < 0.7 else None,
               latent=latent,
               dc_lat=rng.uniform(0.0, 1.0) if latent and rng.random() < 0.7 else None)


def test_partition_conserves_total():
    rng = random.Random(31)
    for _ in range(400):
        r = random_row(rng)
        p = classify_fmeda_row(r)
        assert p.total == pytest.approx(r.lambda_total, rel=1e-12)
        for part in (p.lambda_spf, p.lambda_rf, p.lambda_mpf_latent,
                     p.lambda_mpf_detected, p.lambda_safe):
            assert part >= 0.0


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------


def test_metrics_worked_example():
    result = compute_hw_metrics([WORKED_ROW])
    assert result.spfm == 0.99
    assert result.lfm == 0.90
    assert result.pmhf == pytest.approx(1.0 * FIT, rel=1e-12)


def test_only_non_safety_rows_hit_zero_denominator_convention():
    result = compute_hw_metrics([row(50.0, sr=False, violates=False)])
    assert result == HwMetricsResult(spfm=1.0, lfm=1.0, pmhf=0.0,
                                     lambda_sr_total=0.0, lambda_spf_total=0.0,
                                     lambda_rf_total=0.0,
                                     lambda_mpf_latent_total=0.0)


def test_duplicating_rows_preserves_ratios_and_doubles_pmhf():
    one = compute_hw_metrics([WORKED_ROW])
    two = compute_hw_metrics([WORKED_ROW, WORKED_ROW])
    assert two.spfm == pytest.approx(one.spfm, rel=1e-12)
    assert two.lfm == pytest.approx(one.lfm, rel=1e-12)
    assert two.pmhf == pytest.approx(2.0 * one.pmhf, rel=1e-12)


def test_empty_rows_raise():
    with pytest.raises(EmptyInputError):
        compute_hw_metrics([])


def test_spfm_monotone_in_dc_residual_and_lfm_in_dc_latent():
    rng = random.Random(17)
    for _ in range(250):
        rows = [random_row(rng) for _ in range(rng.randint(1, 5))]
        grid = sorted(rng.uniform(0.0, 1.0) for _ in range(4))
        spfms = []
        lfms = []
        for dc in grid:
            varied = [
                FmedaRow(r.component_id, r.failure_mode, r.lambda_total,
                         r.safety_related, r.can_violate_goal_directly,
                         dc if r.can_violate_goal_directly else r.dc_residual,
                         r.can_be_latent, r.dc_latent)
                for r in rows]
            spfms.append(compute_hw_metrics(varied).spfm)
            varied_latent = [
                FmedaRow(r.component_id, r.failure_mode, r.lambda_total,
                         r.safety_related, r.can_violate_goal_directly,
                         r.dc_residual, r.can_be_latent,
                         dc if r.can_be_latent else r.dc_latent)
                for r in rows]
            lfms.append(compute_hw_metrics(varied_latent).lfm)
        assert all(a <= b + 1e-12 for a, b in zip(spfms, spfms[1:]))
        assert all(a <= b + 1e-12 for a, b in zip(lfms, lfms[1:]))


def test_pmhf_scales_linearly_and_ratios_are_scale_free():
    rng = random.Random(23)
    for _ in range(200):
        rows = [random_row(rng) for _ in range(rng.randint(1, 5))]
        if all(not r.safety_related for r in rows):
            continue
        k = rng.uniform(0.1, 50.0)
        base = compute_hw_metrics(rows)
        scaled = compute_hw_metrics([
            FmedaRow(r.component_id, r.failure_mode, r.lambda_total * k,
                     r.safety_related, r.can_violate_goal_directly, r.dc_residual,
                     r.can_be_latent, r.dc_latent) for r in rows])
        assert scaled.pmhf == pytest.approx(k * base.pmhf, rel=1e-12)
        assert scaled.spfm == pytest.approx(base.spfm, rel=1e-12, abs=1e-12)
        assert scaled.lfm == pytest.approx(base.lfm, rel=1e-12, abs=1e-12)


# --------------------------------------------------------------------------
# targets
# --------------------------------------------------------------------------


def result_with(spfm=1.0, lfm=1.0, pmhf=0.0):
    return HwMetricsResult(spfm=spfm, lfm=lfm, pmhf=pmhf, lambda_sr_total=0.0,
                           lambda_spf_total=0.0, lambda_rf_total=0.0,
                           lambda_mpf_latent_total=0.0)


def test_target_matrix_boundary_semantics():
    # inclusive >= for the coverage metrics, strict < for PMHF, all 9 cells
    for asil, (spfm_t, lfm_t, pmhf_t) in METRIC_TARGETS.items():
        at_threshold = result_with(spfm=spfm_t, lfm=lfm_t, pmhf=pmhf_t)
        verdicts = {v.metric: v.passed for v in check_metric_targets(at_threshold, asil)}
        assert verdicts == {"SPFM": True, "LFM": True, "PMHF": False}


def test_qm_and_a_have_no_targets():
    for asil in (Asil.QM, Asil.A):
        verdicts = check_metric_targets(result_with(), asil)
        assert all(v.passed is None and v.target is None for v in verdicts)


def test_asil_b_example_passes_all():
    verdicts = {v.metric: v.passed
                for v in check_metric_targets(result_with(0.95, 0.70, 5e-8), Asil.B)}
    assert verdicts == {"SPFM": True, "LFM": True, "PMHF": True}


# --------------------------------------------------------------------------
# failure rate classes
# --------------------------------------------------------------------------


def test_frc_ladder_anchor_and_steps():
    assert frc_target(1) == 1e-10
    assert frc_target(4) == 1e-7
    for i in range(1, 6):
        ratio = frc_target(i + 1) / frc_target(i)
        assert ratio == pytest.approx(10.0, rel=1e-15)


def test_frc_target_rejects_bad_class():
    with pytest.raises(InvalidClassError):
        frc_target(0)


def test_frc_asil_d_bands():
    v = check_frc(row(5.0, dc_res=0.995), Asil.D)  # 5e-9/h, band >= 99%
    assert (v.required_class, v.class_target, v.passes) == (3, 1e-8, True)
    v = check_frc(row(5.0, dc_res=0.9995), Asil.D)  # band >= 99.9%
    assert (v.required_class, v.class_target) == (4, 1e-7)
    v = check_frc(row(0.05, dc_res=None), Asil.D)  # band < 90%
    assert (v.required_class, v.dedicated_measures_required) == (1, True)


def test_frc_asil_b_no_mechanism_is_class_two_without_dedicated():
    v = check_frc(row(0.5, dc_res=None), Asil.B)
    assert (v.required_class, v.dedicated_measures_required) == (2, False)
    assert v.passes  # 5e-10 <= 1e-9 inclusively


def test_frc_class_one_boundary_is_strict_others_inclusive():
    at_class1 = row(0.1, dc_res=None)  # exactly 1e-10/h
    assert not check_frc(at_class1, Asil.D).passes
    at_class2 = row(1.0, dc_res=None)  # exactly 1e-9/h, ASIL B -> class 2
    assert check_frc(at_class2, Asil.B).passes


def test_frc_not_applicable_cases():
    with pytest.raises(NotApplicableError):
        check_frc(row(1.0, dc_res=0.99), Asil.A)
    with pytest.raises(NotApplicableError):
        check_frc(row(1.0, violates=False), Asil.D)
    with pytest.raises(NotApplicableError):
        check_frc(row(1.0, sr=False), Asil.D)
