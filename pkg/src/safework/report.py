"""Report assembly: orchestrates the analyses and renders their results.

Sections appear in a fixed order (model, rigor, state machines, HARA, HW
metrics, FRC, SOTIF, trace, CCA); a section is absent when its analysis
was not requested.  The overall verdict is ``fail`` when any
error-severity finding or failed quantitative target exists,
``pass_with_warnings`` when only warnings remain, and ``pass`` otherwise.
Both emitters are deterministic; the JSON form round-trips every number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .hara import check_hara, max_asil
from .hw_metrics import (
    FrcVerdict,
    HwMetricsResult,
    MetricVerdict,
    check_frc,
    check_metric_targets,
    compute_hw_metrics,
)
from .item_rigor import check_signals, score_item_rigor, validate_state_machine
from .model import (
    Asil,
    Finding,
    NotApplicableError,
    SafetyModel,
    Severity,
    sort_findings,
    validate_model,
)
from .safety_case import Credibility, assess_cca, find_case_gaps
from .sotif import (
    SotifResult,
    TargetVerdict,
    check_sotif_targets,
    compute_harm,
    monte_carlo_harm,
    sensitivity,
)
from .trace import check_traceability, detect_cycles

ALL_SECTIONS = ("model", "rigor", "state_machines", "hara", "hw", "frc",
                "sotif", "trace", "cca")


@dataclass(frozen=True)
class RigorSection:
    score: float
    missing: tuple[str, ...]
    signal_findings: tuple[Finding, ...]


@dataclass(frozen=True)
class HwSection:
    target_asil: Asil
    metrics: HwMetricsResult
    verdicts: tuple[MetricVerdict, ...]


@dataclass(frozen=True)
class FrcSection:
    goal_asil: Asil
    verdicts: tuple[FrcVerdict, ...]
    skipped: int  # rows not applicable (non-safety-related or indirect)


@dataclass(frozen=True)
class SotifSection:
    result: SotifResult
    findings: tuple[Finding, ...]
    target_verdicts: tuple[TargetVerdict, ...]
    sensitivities: tuple[tuple[str, float], ...]
    mc_samples: int
    mc_seed: int
    mc_estimate: float
    mc_std_error: float


@dataclass(frozen=True)
class CcaSection:
    threshold: float
    root_credibility: float
    credibilities: tuple[tuple[str, float, str], ...]  # (id, value, limiting factor)
    findings: tuple[Finding, ...]


@dataclass(frozen=True)
class AnalysisReport:
    model_name: str
    tool_version: str
    model_findings: tuple[Finding, ...] | None = None
    rigor: RigorSection | None = None
    sm_findings: tuple[Finding, ...] | None = None
    hara_findings: tuple[Finding, ...] | None = None
    hw: HwSection | None = None
    frc: FrcSection | None = None
    sotif: SotifSection | None = None
    trace_findings: tuple[Finding, ...] | None = None
    cca: CcaSection | None = None
    notes: tuple[str, ...] = ()

    def all_findings(self) -> list[Finding]:
        found: list[Finding] = []
        for group in (self.model_findings, self.sm_findings, self.hara_findings,
                      self.trace_findings):
            if group:
                found.extend(group)
        if self.rigor:
            found.extend(self.rigor.signal_findings)
        if self.sotif:
            found.extend(self.sotif.findings)
        if self.cca:
            found.extend(self.cca.findings)
        return found

    def failed_targets(self) -> int:
        failed = 0
        if self.hw:
            failed += sum(1 for v in self.hw.verdicts if v.passed is False)
        if self.frc:
            failed += sum(1 for v in self.frc.verdicts if not v.passes)
        if self.sotif:
            failed += sum(1 for v in self.sotif.target_verdicts if not v.passed)
        return failed

    @property
    def overall_verdict(self) -> str:
        findings = self.all_findings()
        if (self.failed_targets() > 0
                or any(f.severity is Severity.ERROR for f in findings)):
            return "fail"
        if any(f.severity is Severity.WARNING for f in findings):
            return "pass_with_warnings"
        return "pass"


def hardware_target_asil(model: SafetyModel) -> Asil:
    """The ASIL the hardware metrics are judged against: the strictest
    safety goal (QM when the model declares no goals)."""
    if not model.safety_goals:
        return Asil.QM
    return max_asil(g.asil for g in model.safety_goals)


def build_report(model: SafetyModel, sections: tuple[str, ...] = ALL_SECTIONS, *,
                 seed: int = 0, mc_samples: int = 100_000,
                 cca_threshold: float = 0.8, strict: bool = False,
                 model_name: str | None = None) -> AnalysisReport:
    """Run the requested analyses over a loaded model."""
    notes: list[str] = []
    kwargs: dict = {}

    if "model" in sections:
        kwargs["model_findings"] = tuple(validate_model(model))

    if "rigor" in sections:
        score, missing = score_item_rigor(model.item, model.state_machines)
        kwargs["rigor"] = RigorSection(
            score=score, missing=tuple(missing),
            signal_findings=tuple(check_signals(model.item)))

    if "state_machines" in sections:
        findings: list[Finding] = []
        for sm in model.state_machines:
            findings.extend(validate_state_machine(sm))
        kwargs["sm_findings"] = tuple(sort_findings(findings))

    if "hara" in sections:
        kwargs["hara_findings"] = tuple(check_hara(model))

    target_asil = hardware_target_asil(model)

    if "hw" in sections:
        if model.fmeda:
            metrics = compute_hw_metrics(model.fmeda)
            kwargs["hw"] = HwSection(
                target_asil=target_asil, metrics=metrics,
                verdicts=tuple(check_metric_targets(metrics, target_asil)))
        else:
            notes.append("hw: no FMEDA rows declared, metrics skipped")

    if "frc" in sections:
        verdicts = []
        skipped = 0
        if target_asil in (Asil.B, Asil.C, Asil.D):
            for row in model.fmeda:
                try:
                    verdicts.append(check_frc(row, target_asil))
                except NotApplicableError:
                    skipped += 1
            kwargs["frc"] = FrcSection(goal_asil=target_asil,
                                       verdicts=tuple(verdicts), skipped=skipped)
        else:
            notes.append("frc: no safety goal rated B or above, "
                         "failure-rate classes skipped")

    if "sotif" in sections:
        if model.sotif is not None:
            result, findings = compute_harm(model.sotif, strict=strict)
            verdicts = check_sotif_targets(model.sotif, result, model.targets)
            grads = sensitivity(model.sotif)
            estimate, std_error = monte_carlo_harm(model.sotif, mc_samples, seed)
            kwargs["sotif"] = SotifSection(
                result=result, findings=tuple(findings),
                target_verdicts=tuple(verdicts),
                sensitivities=tuple(sorted(grads.items())),
                mc_samples=mc_samples, mc_seed=seed,
                mc_estimate=estimate, mc_std_error=std_error)
        else:
            notes.append("sotif: no leaf probabilities declared, skipped")

    if "trace" in sections:
        findings = list(check_traceability(model.trace))
        findings.extend(detect_cycles(model.trace))
        kwargs["trace_findings"] = tuple(sort_findings(findings))

    if "cca" in sections:
        if model.safety_case is not None:
            credibilities, root = assess_cca(model.safety_case)
            kwargs["cca"] = CcaSection(
                threshold=cca_threshold, root_credibility=root,
                credibilities=tuple(
                    (node_id, cred.value, cred.limiting_factor)
                    for node_id, cred in sorted(credibilities.items())),
                findings=tuple(find_case_gaps(model.safety_case, cca_threshold)))
        else:
            notes.append("cca: no safety case declared, skipped")

    return AnalysisReport(model_name=model_name or model.item.name,
                          tool_version=__version__, notes=tuple(notes), **kwargs)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _finding_dict(finding: Finding) -> dict:
    return {"rule": finding.rule_id, "severity": finding.severity.value,
            "subject": finding.subject, "message": finding.message}


def report_to_dict(report: AnalysisReport) -> dict:
    """Stable machine-readable form of a report (schema_version 1)."""
    doc: dict = {
        "schema_version": 1,
        "model_name": report.model_name,
        "tool_version": report.tool_version,
        "overall_verdict": report.overall_verdict,
    }
    if report.model_findings is not None:
        doc["model"] = {"findings": [_finding_dict(f) for f in report.model_findings]}
    if report.rigor is not None:
        doc["rigor"] = {
            "score": report.rigor.score,
            "missing": list(report.rigor.missing),
            "signal_findings": [_finding_dict(f) for f in report.rigor.signal_findings],
        }
    if report.sm_findings is not None:
        doc["state_machines"] = {
            "findings": [_finding_dict(f) for f in report.sm_findings]}
    if report.hara_findings is not None:
        doc["hara"] = {"findings": [_finding_dict(f) for f in report.hara_findings]}
    if report.hw is not None:
        metrics = report.hw.metrics
        doc["hw_metrics"] = {
            "target_asil": report.hw.target_asil.value,
            "spfm": metrics.spfm,
            "lfm": metrics.lfm,
            "pmhf_per_hour": metrics.pmhf,
            "lambda_sr_total": metrics.lambda_sr_total,
            "lambda_spf_total": metrics.lambda_spf_total,
            "lambda_rf_total": metrics.lambda_rf_total,
            "lambda_mpf_latent_total": metrics.lambda_mpf_latent_total,
            "verdicts": [
                {"metric": v.metric, "value": v.value, "target": v.target,
                 "comparator": v.comparator, "passed": v.passed}
                for v in report.hw.verdicts],
        }
    if report.frc is not None:
        doc["frc"] = {
            "goal_asil": report.frc.goal_asil.value,
            "skipped_rows": report.frc.skipped,
            "verdicts": [
                {"component_id": v.component_id, "failure_mode": v.failure_mode,
                 "required_class": v.required_class,
                 "class_target_per_hour": v.class_target,
                 "observed_per_hour": v.observed_residual,
                 "passes": v.passes,
                 "dedicated_measures_required": v.dedicated_measures_required}
                for v in report.frc.verdicts],
        }
    if report.sotif is not None:
        section = report.sotif
        doc["sotif"] = {
            "p_fi": section.result.p_fi,
            "p_ub": section.result.p_ub,
            "p_h": section.result.p_h,
            "findings": [_finding_dict(f) for f in section.findings],
            "targets": [
                {"name": v.name, "symbol": v.symbol, "observed": v.observed,
                 "threshold": v.threshold, "comparator": v.comparator,
                 "passed": v.passed}
                for v in section.target_verdicts],
            "sensitivities": {symbol: value for symbol, value in section.sensitivities},
            "monte_carlo": {
                "samples": section.mc_samples,
                "seed": section.mc_seed,
                "estimate": section.mc_estimate,
                "std_error": section.mc_std_error,
            },
        }
    if report.trace_findings is not None:
        doc["trace"] = {"findings": [_finding_dict(f) for f in report.trace_findings]}
    if report.cca is not None:
        doc["cca"] = {
            "threshold": report.cca.threshold,
            "root_credibility": report.cca.root_credibility,
            "credibilities": [
                {"id": node_id, "value": value, "limiting_factor": factor}
                for node_id, value, factor in report.cca.credibilities],
            "findings": [_finding_dict(f) for f in report.cca.findings],
        }
    if report.notes:
        doc["notes"] = list(report.notes)
    return doc


def emit_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _fmt(value: float) -> str:
    # repr is shortest round-trip: reparses to the identical double
    return repr(float(value))


def _emit_findings(lines: list[str], findings: tuple[Finding, ...]) -> None:
    if not findings:
        lines.append("  no findings")
        return
    for finding in findings:
        lines.append(f"  [{finding.severity.value}] {finding.rule_id} "
                     f"{finding.subject}: {finding.message}")


def emit_text(report: AnalysisReport) -> str:
    """Human-readable rendering with sections in fixed order."""
    lines = [
        f"safework report - model {report.model_name!r} "
        f"(tool version {report.tool_version})",
        "",
    ]
    if report.model_findings is not None:
        lines.append("== model validation ==")
        _emit_findings(lines, report.model_findings)
        lines.append("")
    if report.rigor is not None:
        lines.append("== item definition rigor ==")
        lines.append(f"  rigor score: {_fmt(report.rigor.score)}")
        if report.rigor.missing:
            lines.append("  missing criteria:")
            for name in report.rigor.missing:
                lines.append(f"    - {name}")
        else:
            lines.append("  missing criteria: none")
        _emit_findings(lines, report.rigor.signal_findings)
        lines.append("")
    if report.sm_findings is not None:
        lines.append("== state machines ==")
        _emit_findings(lines, report.sm_findings)
        lines.append("")
    if report.hara_findings is not None:
        lines.append("== HARA ==")
        _emit_findings(lines, report.hara_findings)
        lines.append("")
    if report.hw is not None:
        metrics = report.hw.metrics
        lines.append("== hardware metrics ==")
        lines.append(f"  target ASIL: {report.hw.target_asil}")
        lines.append(f"  SPFM: {_fmt(metrics.spfm)}")
        lines.append(f"  LFM: {_fmt(metrics.lfm)}")
        lines.append(f"  PMHF: {_fmt(metrics.pmhf)} /h")
        for verdict in report.hw.verdicts:
            if verdict.passed is None:
                lines.append(f"  {verdict.metric}: no target for this ASIL")
            else:
                op = ">=" if verdict.comparator == "ge" else "<"
                status = "pass" if verdict.passed else "FAIL"
                lines.append(f"  {verdict.metric} {op} {_fmt(verdict.target)}: {status}")
        lines.append("")
    if report.frc is not None:
        lines.append("== failure rate classes ==")
        lines.append(f"  goal ASIL: {report.frc.goal_asil}")
        if not report.frc.verdicts:
            lines.append("  no applicable rows")
        for verdict in report.frc.verdicts:
            status = "pass" if verdict.passes else "FAIL"
            dedicated = " (dedicated measures required)" \
                if verdict.dedicated_measures_required else ""
            lines.append(
                f"  {verdict.component_id}/{verdict.failure_mode}: FRC "
                f"{verdict.required_class}, target {_fmt(verdict.class_target)} /h, "
                f"observed {_fmt(verdict.observed_residual)} /h: {status}{dedicated}")
        if report.frc.skipped:
            lines.append(f"  skipped rows (not applicable): {report.frc.skipped}")
        lines.append("")
    if report.sotif is not None:
        section = report.sotif
        lines.append("== SOTIF harm model ==")
        lines.append(f"  p_fi: {_fmt(section.result.p_fi)}")
        lines.append(f"  p_ub: {_fmt(section.result.p_ub)}")
        lines.append(f"  p_h: {_fmt(section.result.p_h)}")
        _emit_findings(lines, section.findings)
        for verdict in section.target_verdicts:
            op = {"le": "<=", "lt": "<", "ge": ">=", "gt": ">"}[verdict.comparator]
            status = "pass" if verdict.passed else "FAIL"
            lines.append(f"  target {verdict.name}: {verdict.symbol} = "
                         f"{_fmt(verdict.observed)} {op} {_fmt(verdict.threshold)}: "
                         f"{status}")
        lines.append("  sensitivities (d p_h / d leaf):")
        for symbol, value in section.sensitivities:
            lines.append(f"    {symbol}: {_fmt(value)}")
        lines.append(f"  monte carlo ({section.mc_samples} samples, seed "
                     f"{section.mc_seed}): estimate {_fmt(section.mc_estimate)}, "
                     f"std error {_fmt(section.mc_std_error)}")
        lines.append("")
    if report.trace_findings is not None:
        lines.append("== traceability ==")
        _emit_findings(lines, report.trace_findings)
        lines.append("")
    if report.cca is not None:
        lines.append("== safety case credibility ==")
        lines.append(f"  threshold: {_fmt(report.cca.threshold)}")
        lines.append(f"  root credibility: {_fmt(report.cca.root_credibility)}")
        for node_id, value, factor in report.cca.credibilities:
            lines.append(f"  {node_id}: {_fmt(value)} (limited by {factor})")
        _emit_findings(lines, report.cca.findings)
        lines.append("")
    for note in report.notes:
        lines.append(f"note: {note}")
    if report.notes:
        lines.append("")
    lines.append(f"overall verdict: {report.overall_verdict}")
    return "\n".join(lines) + "\n"


def emit_report(report: AnalysisReport, format: str = "text") -> str:
    if format == "text":
        return emit_text(report)
    if format == "json":
        return emit_json(report)
    raise ValueError(f"unknown report format {format!r}")
