"""Figure and CSV emission for the report path.

``render_figures`` writes PNG charts plus delimited companions
(findings.csv, metrics.csv) next to the report so results can be eyeballed
and post-processed without reparsing the JSON.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .report import AnalysisReport  # noqa: E402


def render_figures(report: AnalysisReport, outdir: str | Path) -> list[Path]:
    """Render available charts and CSVs for a report; returns written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    written.append(_findings_csv(report, outdir / "findings.csv"))
    written.append(_metrics_csv(report, outdir / "metrics.csv"))

    if report.sotif is not None:
        written.append(_sensitivity_figure(report, outdir / "sotif_sensitivity.png"))
    if report.hw is not None:
        written.append(_hw_metrics_figure(report, outdir / "hw_metrics.png"))
    if report.cca is not None:
        written.append(_cca_figure(report, outdir / "cca_credibility.png"))
    return written


def _findings_csv(report: AnalysisReport, path: Path) -> Path:
    sections = [
        ("model", report.model_findings or ()),
        ("rigor", report.rigor.signal_findings if report.rigor else ()),
        ("state_machines", report.sm_findings or ()),
        ("hara", report.hara_findings or ()),
        ("sotif", report.sotif.findings if report.sotif else ()),
        ("trace", report.trace_findings or ()),
        ("cca", report.cca.findings if report.cca else ()),
    ]
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["section", "rule", "severity", "subject", "message"])
        for section, findings in sections:
            for f in findings:
                writer.writerow([section, f.rule_id, f.severity.value,
                                 f.subject, f.message])
    return path


def _metrics_csv(report: AnalysisReport, path: Path) -> Path:
    rows: list[tuple[str, str, float]] = []
    if report.rigor is not None:
        rows.append(("rigor", "score", report.rigor.score))
    if report.hw is not None:
        metrics = report.hw.metrics
        rows += [("hw", "spfm", metrics.spfm), ("hw", "lfm", metrics.lfm),
                 ("hw", "pmhf_per_hour", metrics.pmhf)]
    if report.sotif is not None:
        result = report.sotif.result
        rows += [("sotif", "p_fi", result.p_fi), ("sotif", "p_ub", result.p_ub),
                 ("sotif", "p_h", result.p_h),
                 ("sotif", "mc_estimate", report.sotif.mc_estimate),
                 ("sotif", "mc_std_error", report.sotif.mc_std_error)]
    if report.cca is not None:
        rows.append(("cca", "root_credibility", report.cca.root_credibility))
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["section", "metric", "value"])
        for section, metric, value in rows:
            writer.writerow([section, metric, repr(value)])
    return path


def _sensitivity_figure(report: AnalysisReport, path: Path) -> Path:
    assert report.sotif is not None
    symbols = [s for s, _ in report.sotif.sensitivities]
    values = [v for _, v in report.sotif.sensitivities]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.barh(symbols, values, color="#3465a4")
    positive = [v for v in values if v > 0]
    if positive and max(positive) / min(positive) > 100:
        ax.set_xscale("log")
    ax.set_xlabel("d p_h / d leaf")
    ax.set_title("Harm-probability sensitivity per leaf")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _hw_metrics_figure(report: AnalysisReport, path: Path) -> Path:
    assert report.hw is not None
    metrics = report.hw.metrics
    fig, (ax_ratio, ax_rate) = plt.subplots(1, 2, figsize=(8, 4))

    names = ["SPFM", "LFM"]
    values = [metrics.spfm, metrics.lfm]
    targets = {v.metric: v.target for v in report.hw.verdicts if v.target is not None}
    ax_ratio.bar(names, values, color="#4e9a06")
    for i, name in enumerate(names):
        if name in targets:
            ax_ratio.hlines(targets[name], i - 0.4, i + 0.4,
                            colors="#a40000", linestyles="dashed")
    ax_ratio.set_ylim(0.0, 1.05)
    ax_ratio.set_title(f"Coverage metrics (ASIL {report.hw.target_asil})")

    ax_rate.bar(["PMHF"], [metrics.pmhf], color="#4e9a06")
    if "PMHF" in targets:
        ax_rate.axhline(targets["PMHF"], color="#a40000", linestyle="dashed",
                        label="target")
        ax_rate.legend()
    ax_rate.set_yscale("log")
    ax_rate.set_ylabel("per hour")
    ax_rate.set_title("Residual dangerous failure rate")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _cca_figure(report: AnalysisReport, path: Path) -> Path:
    assert report.cca is not None
    ids = [node_id for node_id, _, _ in report.cca.credibilities]
    values = [value for _, value, _ in report.cca.credibilities]
    fig, ax = plt.subplots(figsize=(7, max(3, 0.4 * len(ids))))
    ax.barh(ids, values, color="#75507b")
    ax.axvline(report.cca.threshold, color="#a40000", linestyle="dashed",
               label="threshold")
    ax.set_xlim(0.0, 1.05)
    ax.set_xlabel("credibility")
    ax.set_title("Safety-case credibility rollup")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
