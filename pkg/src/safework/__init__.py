"""safework: batch functional-safety analysis workbench.

Loads a declared safety model of an automotive item and runs rigor
scoring, state-machine and HARA checks, hardware architectural metrics,
harm-probability analysis, traceability and safety-case credibility
assessment, emitting findings reports.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Asil,
    FailureRate,
    Finding,
    SafetyModel,
    Severity,
    load_model,
    validate_model,
)
from .report import (  # noqa: F401
    AnalysisReport,
    build_report,
    emit_json,
    emit_text,
)
