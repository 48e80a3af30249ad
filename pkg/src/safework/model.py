"""Core domain types and the safety-model loader.

A safety model is a single UTF-8 JSON document with the top-level keys
``item``, ``state_machines``, ``hazards``, ``safety_goals``, ``fmeda``,
``sotif``, ``targets``, ``trace`` and ``safety_case``.  ``load_model``
turns the document into an immutable :class:`SafetyModel`; all structural
problems (syntax, schema, dangling/duplicate ids) raise, while softer
issues surface later as :class:`Finding` objects from ``validate_model``.

All failure rates are normalised to per-hour on load; FIT is accepted on
input (1 FIT = 1e-9 per hour).
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from enum import Enum


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class ModelError(Exception):
    """Base class for everything raised while building or analysing a model."""


class ParseError(ModelError):
    """The input is not well-formed JSON."""


class SchemaError(ModelError):
    """A required key is missing, has the wrong kind, or is out of range."""


class ModelReferenceError(ModelError):
    """A dangling or duplicate entity id."""


class EmptyInputError(ModelError):
    """An operation that needs at least one element got none."""


class InvalidClassError(ModelError):
    """Failure-rate class index below 1."""


class NotApplicableError(ModelError):
    """The requested check does not apply to the given inputs."""


class StrictModelViolationError(ModelError):
    """A modelling assumption was violated while running in strict mode."""


class UnknownSymbolError(ModelError):
    """A validation target names a symbol the harm model does not define."""


class CyclicCaseError(ModelError):
    """The claim-argument graph of a safety case contains a cycle."""


class MissingRootError(ModelError):
    """The safety case names a root claim that does not exist."""


# ---------------------------------------------------------------------------
# Primitives
# ---------------------------------------------------------------------------


@functools.total_ordering
class Asil(Enum):
    """Automotive Safety Integrity Level, totally ordered QM < A < B < C < D."""

    QM = "QM"
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def rank(self) -> int:
        return _ASIL_ORDER.index(self)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Asil):
            return NotImplemented
        return self.rank < other.rank

    def __str__(self) -> str:
        return self.value


_ASIL_ORDER = [Asil.QM, Asil.A, Asil.B, Asil.C, Asil.D]

FIT_PER_HOUR = 1e-9


@dataclass(frozen=True)
class FailureRate:
    """A nonnegative failure rate, stored canonically in per-hour units."""

    per_hour: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.per_hour) or self.per_hour < 0:
            raise SchemaError(f"failure rate must be finite and >= 0, got {self.per_hour}")

    @classmethod
    def from_fit(cls, value: float) -> "FailureRate":
        return cls(value * FIT_PER_HOUR)

    @property
    def fit(self) -> float:
        return self.per_hour / FIT_PER_HOUR

    @classmethod
    def from_json(cls, obj: object, where: str) -> "FailureRate":
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: rate must be an object with 'value' and 'unit'")
        value = _number(obj, "value", where)
        unit = _string(obj, "unit", where)
        if unit == "FIT":
            return cls.from_fit(value)
        if unit == "per_hour":
            return cls(value)
        raise SchemaError(f"{where}: unit must be 'FIT' or 'per_hour', got {unit!r}")

    def to_json(self) -> dict:
        return {"value": self.per_hour, "unit": "per_hour"}


def unit_interval(value: object, where: str) -> float:
    """Validate a probability/coverage/score: a finite real in [0, 1]."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number in [0, 1], got {value!r}")
    x = float(value)
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise SchemaError(f"{where}: value {x} outside [0, 1]")
    return x


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Finding:
    """One rule violation or note produced by an analysis."""

    rule_id: str
    severity: Severity
    subject: str
    message: str


def sort_findings(findings: list[Finding]) -> list[Finding]:
    """Deterministic ordering used by every checker: (rule_id, subject)."""
    return sorted(findings, key=lambda f: (f.rule_id, f.subject, f.message))


# ---------------------------------------------------------------------------
# Item definition
# ---------------------------------------------------------------------------

REQUIREMENT_CRITERIA = (
    "legal_and_standards",
    "vehicle_level_behavior",
    "quality_performance_availability",
    "constraints_and_dependencies",
    "behavioral_shortfalls",
    "actuator_capabilities",
)

BOUNDARY_CRITERIA = (
    "item_elements",
    "vehicle_effects",
    "functionality_provided",
    "functionality_required",
    "function_allocation",
    "operational_scenarios",
)

ARTIFACT_KINDS = (
    "state_transition_diagrams",
    "state_transition_tables",
    "sequence_diagrams",
    "use_case_diagrams",
)

SIGNAL_DIRECTIONS = ("in", "out", "inout")


@dataclass(frozen=True)
class InterfaceSignal:
    name: str
    direction: str
    semantic_type: str
    unit: str | None = None
    range_min: float | None = None
    range_max: float | None = None


@dataclass(frozen=True)
class ItemDefinition:
    name: str
    description: str
    requirement_checklist: tuple[bool, ...]  # aligned with REQUIREMENT_CRITERIA
    boundary_checklist: tuple[bool, ...]     # aligned with BOUNDARY_CRITERIA
    artifacts_present: tuple[bool, ...]      # aligned with ARTIFACT_KINDS
    interfaces: tuple[InterfaceSignal, ...] = ()


@dataclass(frozen=True)
class StateMachine:
    name: str
    states: tuple[str, ...]
    initial: str
    events: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]  # (from_state, event, to_state)


# ---------------------------------------------------------------------------
# HARA
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hazard:
    id: str
    description: str
    operational_situation: str
    asil: Asil | None


@dataclass(frozen=True)
class SafetyGoal:
    id: str
    statement: str
    asil: Asil
    covers: tuple[str, ...]


# ---------------------------------------------------------------------------
# FMEDA
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FmedaRow:
    component_id: str
    failure_mode: str
    lambda_total: float  # per hour
    safety_related: bool
    can_violate_goal_directly: bool
    dc_residual: float | None
    can_be_latent: bool
    dc_latent: float | None


# ---------------------------------------------------------------------------
# SOTIF
# ---------------------------------------------------------------------------

LEAF_SYMBOLS = ("p_fs", "p_tc", "p_is", "p_pl", "p_sm", "p_scs", "p_ip", "p_ode")
DERIVED_SYMBOLS = ("p_fi", "p_ub", "p_h")


@dataclass(frozen=True)
class SotifLeaves:
    """Leaf probabilities of the harm model, each a per-hour probability."""

    p_fs: float   # failure (malfunction)
    p_tc: float   # triggering condition present
    p_is: float   # insufficiency of specification
    p_pl: float   # performance limitation
    p_sm: float   # misuse
    p_scs: float  # safety-critical situation
    p_ip: float   # involved persons contributing to harm
    p_ode: float  # hazardous ODD exit

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in LEAF_SYMBOLS}


COMPARATORS = ("le", "lt", "ge", "gt")


@dataclass(frozen=True)
class ValidationTarget:
    name: str
    symbol: str
    threshold: float
    comparator: str


# ---------------------------------------------------------------------------
# Traceability
# ---------------------------------------------------------------------------

TRACE_KINDS = (
    "item",
    "hazard",
    "safety_goal",
    "functional_req",
    "technical_req",
    "hw_element",
    "sw_element",
    "test",
    "work_product",
)

TRACE_RELATIONS = ("derives", "allocates", "verifies", "covers")

# relation -> (allowed source kinds, allowed target kinds)
RELATION_COMPATIBILITY: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "covers": (("safety_goal",), ("hazard",)),
    "derives": (
        ("functional_req", "technical_req"),
        ("safety_goal", "functional_req"),
    ),
    "allocates": (("hw_element", "sw_element"), ("technical_req",)),
    "verifies": (("test",), ("functional_req", "technical_req")),
}

# derives is further restricted to the two canonical parent/child pairs
DERIVES_PAIRS = (("functional_req", "safety_goal"), ("technical_req", "functional_req"))


@dataclass(frozen=True)
class TraceNode:
    id: str
    kind: str
    title: str
    asil: Asil | None = None


@dataclass(frozen=True)
class TraceEdge:
    source: str
    target: str
    relation: str


@dataclass(frozen=True)
class TraceGraph:
    nodes: tuple[TraceNode, ...] = ()
    edges: tuple[TraceEdge, ...] = ()

    def node_by_id(self, node_id: str) -> TraceNode:
        return {n.id: n for n in self.nodes}[node_id]


# ---------------------------------------------------------------------------
# Safety case
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    id: str
    text: str
    supported_by: tuple[str, ...]


@dataclass(frozen=True)
class Argument:
    id: str
    text: str
    acceptance_criteria_reasonableness: float
    suitability: float
    premises: tuple[str, ...]
    evidence: tuple[str, ...]


@dataclass(frozen=True)
class Evidence:
    id: str
    text: str
    confidence: float
    coverage: float


@dataclass(frozen=True)
class SafetyCase:
    root: str
    claims: tuple[Claim, ...]
    arguments: tuple[Argument, ...]
    evidence: tuple[Evidence, ...]


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SafetyModel:
    item: ItemDefinition
    state_machines: tuple[StateMachine, ...] = ()
    hazards: tuple[Hazard, ...] = ()
    safety_goals: tuple[SafetyGoal, ...] = ()
    fmeda: tuple[FmedaRow, ...] = ()
    sotif: SotifLeaves | None = None
    targets: tuple[ValidationTarget, ...] = ()
    trace: TraceGraph = field(default_factory=TraceGraph)
    safety_case: SafetyCase | None = None
    load_findings: tuple[Finding, ...] = ()


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def _require(obj: dict, key: str, where: str) -> object:
    if key not in obj:
        raise SchemaError(f"{where}: missing required key {key!r}")
    return obj[key]


def _string(obj: dict, key: str, where: str, *, nonempty: bool = True) -> str:
    value = _require(obj, key, where)
    if not isinstance(value, str):
        raise SchemaError(f"{where}: {key!r} must be a string, got {type(value).__name__}")
    if nonempty and not value:
        raise SchemaError(f"{where}: {key!r} must be nonempty")
    return value


def _number(obj: dict, key: str, where: str) -> float:
    value = _require(obj, key, where)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: {key!r} must be a number, got {type(value).__name__}")
    x = float(value)
    if not math.isfinite(x):
        raise SchemaError(f"{where}: {key!r} must be finite")
    return x


def _boolean(obj: dict, key: str, where: str) -> bool:
    value = _require(obj, key, where)
    if not isinstance(value, bool):
        raise SchemaError(f"{where}: {key!r} must be a boolean, got {type(value).__name__}")
    return value


def _array(obj: dict, key: str, where: str) -> list:
    value = obj.get(key, [])
    if not isinstance(value, list):
        raise SchemaError(f"{where}: {key!r} must be an array")
    return value


def _object(value: object, where: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _asil(obj: dict, key: str, where: str, *, required: bool) -> Asil | None:
    if key not in obj or obj[key] is None:
        if required:
            raise SchemaError(f"{where}: missing required key {key!r}")
        return None
    value = obj[key]
    try:
        return Asil(value)
    except ValueError:
        raise SchemaError(f"{where}: {key!r} must be one of QM/A/B/C/D, got {value!r}") from None


class _KeyAudit:
    """Tracks unknown keys: fatal in strict mode, warnings otherwise."""

    def __init__(self, strict: bool) -> None:
        self.strict = strict
        self.findings: list[Finding] = []

    def check(self, obj: dict, known: tuple[str, ...], where: str) -> None:
        for key in obj:
            if key not in known:
                if self.strict:
                    raise SchemaError(f"{where}: unknown key {key!r}")
                self.findings.append(
                    Finding("MDL-UNKNOWN-KEY", Severity.WARNING, where,
                            f"unknown key {key!r} ignored")
                )


# ---------------------------------------------------------------------------
# Section parsers
# ---------------------------------------------------------------------------


def _checklist(obj: dict, key: str, names: tuple[str, ...], where: str,
               audit: _KeyAudit) -> tuple[bool, ...]:
    raw = _object(_require(obj, key, where), f"{where}.{key}")
    audit.check(raw, names, f"{where}.{key}")
    return tuple(_boolean(raw, name, f"{where}.{key}") for name in names)


_SIGNAL_KEYS = ("name", "direction", "semantic_type", "unit", "range_min", "range_max")


def _parse_signal(raw: object, where: str, audit: _KeyAudit) -> InterfaceSignal:
    obj = _object(raw, where)
    audit.check(obj, _SIGNAL_KEYS, where)
    direction = _string(obj, "direction", where)
    if direction not in SIGNAL_DIRECTIONS:
        raise SchemaError(f"{where}: direction must be one of {SIGNAL_DIRECTIONS}")
    unit = obj.get("unit")
    if unit is not None and not isinstance(unit, str):
        raise SchemaError(f"{where}: 'unit' must be a string")
    bounds = {}
    for bound in ("range_min", "range_max"):
        if obj.get(bound) is None:
            bounds[bound] = None
        else:
            bounds[bound] = _number(obj, bound, where)
    return InterfaceSignal(
        name=_string(obj, "name", where),
        direction=direction,
        semantic_type=_string(obj, "semantic_type", where),
        unit=unit,
        range_min=bounds["range_min"],
        range_max=bounds["range_max"],
    )


_ITEM_KEYS = ("name", "description", "requirement_checklist", "boundary_checklist",
              "artifacts", "interfaces")


def _parse_item(raw: object, audit: _KeyAudit) -> ItemDefinition:
    obj = _object(raw, "item")
    audit.check(obj, _ITEM_KEYS, "item")
    signals = tuple(
        _parse_signal(sig, f"item.interfaces[{i}]", audit)
        for i, sig in enumerate(_array(obj, "interfaces", "item"))
    )
    return ItemDefinition(
        name=_string(obj, "name", "item"),
        description=_string(obj, "description", "item", nonempty=False),
        requirement_checklist=_checklist(obj, "requirement_checklist",
                                         REQUIREMENT_CRITERIA, "item", audit),
        boundary_checklist=_checklist(obj, "boundary_checklist",
                                      BOUNDARY_CRITERIA, "item", audit),
        artifacts_present=_checklist(obj, "artifacts", ARTIFACT_KINDS, "item", audit),
        interfaces=signals,
    )


_SM_KEYS = ("name", "states", "initial", "events", "transitions")


def _parse_state_machine(raw: object, where: str, audit: _KeyAudit) -> StateMachine:
    obj = _object(raw, where)
    audit.check(obj, _SM_KEYS, where)
    states = tuple(str(s) for s in _array(obj, "states", where))
    if not states:
        raise SchemaError(f"{where}: 'states' must be nonempty")
    if len(set(states)) != len(states):
        raise SchemaError(f"{where}: duplicate state ids")
    events = tuple(str(e) for e in _array(obj, "events", where))
    initial = _string(obj, "initial", where)
    if initial not in states:
        raise SchemaError(f"{where}: initial state {initial!r} not in states")
    transitions = []
    for i, tr in enumerate(_array(obj, "transitions", where)):
        if not (isinstance(tr, list) and len(tr) == 3):
            raise SchemaError(f"{where}.transitions[{i}]: expected [from, event, to]")
        src, event, dst = (str(x) for x in tr)
        if src not in states or dst not in states:
            raise SchemaError(f"{where}.transitions[{i}]: endpoint not in states")
        if event not in events:
            raise SchemaError(f"{where}.transitions[{i}]: event {event!r} not declared")
        transitions.append((src, event, dst))
    return StateMachine(name=_string(obj, "name", where), states=states,
                        initial=initial, events=events, transitions=tuple(transitions))


_HAZARD_KEYS = ("id", "description", "operational_situation", "asil")


def _parse_hazard(raw: object, where: str, audit: _KeyAudit) -> Hazard:
    obj = _object(raw, where)
    audit.check(obj, _HAZARD_KEYS, where)
    return Hazard(
        id=_string(obj, "id", where),
        description=_string(obj, "description", where),
        operational_situation=_string(obj, "operational_situation", where, nonempty=False),
        asil=_asil(obj, "asil", where, required=False),
    )


_GOAL_KEYS = ("id", "statement", "asil", "covers")


def _parse_goal(raw: object, where: str, audit: _KeyAudit) -> SafetyGoal:
    obj = _object(raw, where)
    audit.check(obj, _GOAL_KEYS, where)
    covers = tuple(str(h) for h in _array(obj, "covers", where))
    if not covers:
        raise SchemaError(f"{where}: 'covers' must list at least one hazard id")
    asil = _asil(obj, "asil", where, required=True)
    assert asil is not None
    return SafetyGoal(id=_string(obj, "id", where),
                      statement=_string(obj, "statement", where),
                      asil=asil, covers=covers)


_FMEDA_KEYS = ("component_id", "failure_mode", "lambda_total", "safety_related",
               "can_violate_goal_directly", "dc_residual", "can_be_latent", "dc_latent")


def _parse_fmeda_row(raw: object, where: str, audit: _KeyAudit) -> FmedaRow:
    obj = _object(raw, where)
    audit.check(obj, _FMEDA_KEYS, where)
    dc_residual = None
    if obj.get("dc_residual") is not None:
        dc_residual = unit_interval(obj["dc_residual"], f"{where}.dc_residual")
    can_be_latent = _boolean(obj, "can_be_latent", where)
    dc_latent = None
    if obj.get("dc_latent") is not None:
        if not can_be_latent:
            raise SchemaError(f"{where}: dc_latent given but can_be_latent is false")
        dc_latent = unit_interval(obj["dc_latent"], f"{where}.dc_latent")
    return FmedaRow(
        component_id=_string(obj, "component_id", where),
        failure_mode=_string(obj, "failure_mode", where),
        lambda_total=FailureRate.from_json(_require(obj, "lambda_total", where),
                                           f"{where}.lambda_total").per_hour,
        safety_related=_boolean(obj, "safety_related", where),
        can_violate_goal_directly=_boolean(obj, "can_violate_goal_directly", where),
        dc_residual=dc_residual,
        can_be_latent=can_be_latent,
        dc_latent=dc_latent,
    )


def _parse_sotif(raw: object, audit: _KeyAudit) -> SotifLeaves:
    obj = _object(raw, "sotif")
    audit.check(obj, LEAF_SYMBOLS, "sotif")
    values = {name: unit_interval(_require(obj, name, "sotif"), f"sotif.{name}")
              for name in LEAF_SYMBOLS}
    return SotifLeaves(**values)


_TARGET_KEYS = ("name", "symbol", "threshold", "comparator")


def _parse_target(raw: object, where: str, audit: _KeyAudit) -> ValidationTarget:
    obj = _object(raw, where)
    audit.check(obj, _TARGET_KEYS, where)
    threshold = _number(obj, "threshold", where)
    if threshold < 0:
        raise SchemaError(f"{where}: threshold must be >= 0")
    comparator = _string(obj, "comparator", where)
    if comparator not in COMPARATORS:
        raise SchemaError(f"{where}: comparator must be one of {COMPARATORS}")
    return ValidationTarget(name=_string(obj, "name", where),
                            symbol=_string(obj, "symbol", where),
                            threshold=threshold, comparator=comparator)


_NODE_KEYS = ("id", "kind", "title", "asil")
_EDGE_KEYS = ("from", "to", "relation")


def _parse_trace(raw: object, audit: _KeyAudit) -> TraceGraph:
    obj = _object(raw, "trace")
    audit.check(obj, ("nodes", "edges"), "trace")
    nodes = []
    for i, n in enumerate(_array(obj, "nodes", "trace")):
        where = f"trace.nodes[{i}]"
        nobj = _object(n, where)
        audit.check(nobj, _NODE_KEYS, where)
        kind = _string(nobj, "kind", where)
        if kind not in TRACE_KINDS:
            raise SchemaError(f"{where}: kind must be one of {TRACE_KINDS}, got {kind!r}")
        nodes.append(TraceNode(id=_string(nobj, "id", where), kind=kind,
                               title=_string(nobj, "title", where, nonempty=False),
                               asil=_asil(nobj, "asil", where, required=False)))
    node_ids = {n.id for n in nodes}
    edges = []
    for i, e in enumerate(_array(obj, "edges", "trace")):
        where = f"trace.edges[{i}]"
        eobj = _object(e, where)
        audit.check(eobj, _EDGE_KEYS, where)
        relation = _string(eobj, "relation", where)
        if relation not in TRACE_RELATIONS:
            raise SchemaError(f"{where}: relation must be one of {TRACE_RELATIONS}")
        source = _string(eobj, "from", where)
        target = _string(eobj, "to", where)
        for endpoint in (source, target):
            if endpoint not in node_ids:
                raise ModelReferenceError(f"{where}: unknown trace node {endpoint!r}")
        edges.append(TraceEdge(source=source, target=target, relation=relation))
    graph = TraceGraph(nodes=tuple(nodes), edges=tuple(edges))
    by_id = {n.id: n for n in nodes}
    for i, edge in enumerate(graph.edges):
        src_kinds, dst_kinds = RELATION_COMPATIBILITY[edge.relation]
        src, dst = by_id[edge.source], by_id[edge.target]
        ok = src.kind in src_kinds and dst.kind in dst_kinds
        if ok and edge.relation == "derives":
            ok = (src.kind, dst.kind) in DERIVES_PAIRS
        if not ok:
            raise SchemaError(
                f"trace.edges[{i}]: relation {edge.relation!r} not allowed from "
                f"{src.kind} {src.id!r} to {dst.kind} {dst.id!r}")
    return graph


_CASE_KEYS = ("root", "claims", "arguments", "evidence")


def _parse_case(raw: object, audit: _KeyAudit) -> SafetyCase:
    obj = _object(raw, "safety_case")
    audit.check(obj, _CASE_KEYS, "safety_case")
    claims = []
    for i, c in enumerate(_array(obj, "claims", "safety_case")):
        where = f"safety_case.claims[{i}]"
        cobj = _object(c, where)
        audit.check(cobj, ("id", "text", "supported_by"), where)
        claims.append(Claim(id=_string(cobj, "id", where),
                            text=_string(cobj, "text", where),
                            supported_by=tuple(str(a) for a in
                                               _array(cobj, "supported_by", where))))
    arguments = []
    for i, a in enumerate(_array(obj, "arguments", "safety_case")):
        where = f"safety_case.arguments[{i}]"
        aobj = _object(a, where)
        audit.check(aobj, ("id", "text", "acceptance_criteria_reasonableness",
                           "suitability", "premises", "evidence"), where)
        premises = tuple(str(p) for p in _array(aobj, "premises", where))
        evidence = tuple(str(e) for e in _array(aobj, "evidence", where))
        if not premises and not evidence:
            raise SchemaError(f"{where}: argument needs at least one premise or evidence")
        arguments.append(Argument(
            id=_string(aobj, "id", where),
            text=_string(aobj, "text", where),
            acceptance_criteria_reasonableness=unit_interval(
                _require(aobj, "acceptance_criteria_reasonableness", where),
                f"{where}.acceptance_criteria_reasonableness"),
            suitability=unit_interval(_require(aobj, "suitability", where),
                                      f"{where}.suitability"),
            premises=premises, evidence=evidence))
    evidence = []
    for i, e in enumerate(_array(obj, "evidence", "safety_case")):
        where = f"safety_case.evidence[{i}]"
        eobj = _object(e, where)
        audit.check(eobj, ("id", "text", "confidence", "coverage"), where)
        evidence.append(Evidence(
            id=_string(eobj, "id", where), text=_string(eobj, "text", where),
            confidence=unit_interval(_require(eobj, "confidence", where),
                                     f"{where}.confidence"),
            coverage=unit_interval(_require(eobj, "coverage", where),
                                   f"{where}.coverage")))
    return SafetyCase(root=_string(obj, "root", "safety_case"),
                      claims=tuple(claims), arguments=tuple(arguments),
                      evidence=tuple(evidence))


# ---------------------------------------------------------------------------
# Load / validate / dump
# ---------------------------------------------------------------------------

_TOP_KEYS = ("item", "state_machines", "hazards", "safety_goals", "fmeda",
             "sotif", "targets", "trace", "safety_case")


def load_model(source_text: str, *, strict: bool = False) -> SafetyModel:
    """Parse and resolve a model file into an immutable :class:`SafetyModel`.

    Raises :class:`ParseError` on malformed JSON, :class:`SchemaError` on
    missing/mistyped keys and :class:`ModelReferenceError` on duplicate or
    dangling ids.  In strict mode unknown keys are fatal; otherwise they
    produce ``MDL-UNKNOWN-KEY`` warnings carried on the returned model.
    """
    try:
        doc = json.loads(source_text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected a JSON object")

    audit = _KeyAudit(strict)
    audit.check(doc, _TOP_KEYS, "top level")

    item = _parse_item(_require(doc, "item", "top level"), audit)
    machines = tuple(_parse_state_machine(sm, f"state_machines[{i}]", audit)
                     for i, sm in enumerate(_array(doc, "state_machines", "top level")))
    hazards = tuple(_parse_hazard(h, f"hazards[{i}]", audit)
                    for i, h in enumerate(_array(doc, "hazards", "top level")))
    goals = tuple(_parse_goal(g, f"safety_goals[{i}]", audit)
                  for i, g in enumerate(_array(doc, "safety_goals", "top level")))
    fmeda = tuple(_parse_fmeda_row(r, f"fmeda[{i}]", audit)
                  for i, r in enumerate(_array(doc, "fmeda", "top level")))
    sotif = _parse_sotif(doc["sotif"], audit) if doc.get("sotif") is not None else None
    targets = tuple(_parse_target(t, f"targets[{i}]", audit)
                    for i, t in enumerate(_array(doc, "targets", "top level")))
    trace = _parse_trace(doc["trace"], audit) if doc.get("trace") is not None else TraceGraph()
    case = _parse_case(doc["safety_case"], audit) if doc.get("safety_case") is not None else None

    model = SafetyModel(item=item, state_machines=machines, hazards=hazards,
                        safety_goals=goals, fmeda=fmeda, sotif=sotif,
                        targets=targets, trace=trace, safety_case=case,
                        load_findings=tuple(audit.findings))
    _resolve_references(model)
    return model


def _resolve_references(model: SafetyModel) -> None:
    """Model-wide id uniqueness plus resolution of every cross-reference.

    A trace node may reuse the id of a declared hazard or safety goal when
    its kind matches: the node then stands for that entity in the graph.
    """
    seen: dict[str, str] = {}

    def register(entity_id: str, kind: str) -> None:
        prior = seen.get(entity_id)
        if prior is not None:
            raise ModelReferenceError(
                f"duplicate id {entity_id!r} ({prior} and {kind})")
        seen[entity_id] = kind

    for hazard in model.hazards:
        register(hazard.id, "hazard")
    for goal in model.safety_goals:
        register(goal.id, "safety_goal")
    if model.safety_case is not None:
        for claim in model.safety_case.claims:
            register(claim.id, "claim")
        for argument in model.safety_case.arguments:
            register(argument.id, "argument")
        for evidence in model.safety_case.evidence:
            register(evidence.id, "evidence")
    for node in model.trace.nodes:
        prior = seen.get(node.id)
        if prior is not None and prior != node.kind:
            raise ModelReferenceError(
                f"duplicate id {node.id!r} ({prior} and trace node of kind {node.kind})")
        if prior is None:
            seen[node.id] = node.kind

    hazard_ids = {h.id for h in model.hazards}
    for goal in model.safety_goals:
        for covered in goal.covers:
            if covered not in hazard_ids:
                raise ModelReferenceError(
                    f"safety goal {goal.id!r} covers unknown hazard {covered!r}")

    if model.safety_case is not None:
        case = model.safety_case
        claim_ids = {c.id for c in case.claims}
        argument_ids = {a.id for a in case.arguments}
        evidence_ids = {e.id for e in case.evidence}
        if case.root not in claim_ids:
            raise ModelReferenceError(
                f"safety case root {case.root!r} is not a declared claim")
        for claim in case.claims:
            for arg_id in claim.supported_by:
                if arg_id not in argument_ids:
                    raise ModelReferenceError(
                        f"claim {claim.id!r} cites unknown argument {arg_id!r}")
        for argument in case.arguments:
            for premise in argument.premises:
                if premise not in claim_ids:
                    raise ModelReferenceError(
                        f"argument {argument.id!r} cites unknown claim {premise!r}")
            for ev in argument.evidence:
                if ev not in evidence_ids:
                    raise ModelReferenceError(
                        f"argument {argument.id!r} cites unknown evidence {ev!r}")


def validate_model(model: SafetyModel) -> list[Finding]:
    """Semantic, non-fatal checks over a loaded model.

    Rule catalog: MDL-UNKNOWN-KEY (warning, from non-strict load),
    HAZ-NO-ASIL (warning, hazard declared without a risk level),
    SIG-BAD-RANGE (error, signal with range_min > range_max).
    """
    findings = list(model.load_findings)
    for hazard in model.hazards:
        if hazard.asil is None:
            findings.append(Finding("HAZ-NO-ASIL", Severity.WARNING, hazard.id,
                                    "hazard declared without an ASIL level"))
    for signal in model.item.interfaces:
        if (signal.range_min is not None and signal.range_max is not None
                and signal.range_min > signal.range_max):
            findings.append(Finding("SIG-BAD-RANGE", Severity.ERROR, signal.name,
                                    f"range_min {signal.range_min} exceeds "
                                    f"range_max {signal.range_max}"))
    return sort_findings(findings)


def dump_model(model: SafetyModel) -> dict:
    """Serialise a model back to the input schema (round-trips via load_model)."""

    def checklist(names: tuple[str, ...], flags: tuple[bool, ...]) -> dict:
        return dict(zip(names, flags))

    def signal(sig: InterfaceSignal) -> dict:
        out: dict = {"name": sig.name, "direction": sig.direction,
                     "semantic_type": sig.semantic_type}
        if sig.unit is not None:
            out["unit"] = sig.unit
        if sig.range_min is not None:
            out["range_min"] = sig.range_min
        if sig.range_max is not None:
            out["range_max"] = sig.range_max
        return out

    doc: dict = {
        "item": {
            "name": model.item.name,
            "description": model.item.description,
            "requirement_checklist": checklist(REQUIREMENT_CRITERIA,
                                               model.item.requirement_checklist),
            "boundary_checklist": checklist(BOUNDARY_CRITERIA,
                                            model.item.boundary_checklist),
            "artifacts": checklist(ARTIFACT_KINDS, model.item.artifacts_present),
            "interfaces": [signal(s) for s in model.item.interfaces],
        },
        "state_machines": [
            {"name": sm.name, "states": list(sm.states), "initial": sm.initial,
             "events": list(sm.events),
             "transitions": [list(t) for t in sm.transitions]}
            for sm in model.state_machines
        ],
        "hazards": [
            {"id": h.id, "description": h.description,
             "operational_situation": h.operational_situation,
             **({"asil": h.asil.value} if h.asil is not None else {})}
            for h in model.hazards
        ],
        "safety_goals": [
            {"id": g.id, "statement": g.statement, "asil": g.asil.value,
             "covers": list(g.covers)}
            for g in model.safety_goals
        ],
        "fmeda": [
            {"component_id": r.component_id, "failure_mode": r.failure_mode,
             "lambda_total": {"value": r.lambda_total, "unit": "per_hour"},
             "safety_related": r.safety_related,
             "can_violate_goal_directly": r.can_violate_goal_directly,
             **({"dc_residual": r.dc_residual} if r.dc_residual is not None else {}),
             "can_be_latent": r.can_be_latent,
             **({"dc_latent": r.dc_latent} if r.dc_latent is not None else {})}
            for r in model.fmeda
        ],
        "targets": [
            {"name": t.name, "symbol": t.symbol, "threshold": t.threshold,
             "comparator": t.comparator}
            for t in model.targets
        ],
        "trace": {
            "nodes": [
                {"id": n.id, "kind": n.kind, "title": n.title,
                 **({"asil": n.asil.value} if n.asil is not None else {})}
                for n in model.trace.nodes
            ],
            "edges": [
                {"from": e.source, "to": e.target, "relation": e.relation}
                for e in model.trace.edges
            ],
        },
    }
    if model.sotif is not None:
        doc["sotif"] = model.sotif.as_dict()
    if model.safety_case is not None:
        case = model.safety_case
        doc["safety_case"] = {
            "root": case.root,
            "claims": [{"id": c.id, "text": c.text,
                        "supported_by": list(c.supported_by)} for c in case.claims],
            "arguments": [
                {"id": a.id, "text": a.text,
                 "acceptance_criteria_reasonableness": a.acceptance_criteria_reasonableness,
                 "suitability": a.suitability, "premises": list(a.premises),
                 "evidence": list(a.evidence)}
                for a in case.arguments
            ],
            "evidence": [{"id": e.id, "text": e.text, "confidence": e.confidence,
                          "coverage": e.coverage} for e in case.evidence],
        }
    return doc
