"""Traceability-graph completeness, consistency and cycle checks.

The canonical chains are: safety_goal -covers-> hazard,
functional_req -derives-> safety_goal, technical_req -derives-> functional_req,
hw/sw_element -allocates-> technical_req, test -verifies-> requirement.
Relation/kind compatibility is enforced at load time; the checks here are
about completeness (every safety-rated artifact fully linked) and about
the derives subgraph staying acyclic.
"""

from __future__ import annotations

from collections import deque

from .model import (
    Asil,
    Finding,
    Severity,
    TraceGraph,
    TRACE_KINDS,
    sort_findings,
)


def check_traceability(graph: TraceGraph) -> list[Finding]:
    """Completeness rules over the typed trace graph.

    TR-GOAL-NOREQ (error): safety goal with no deriving functional requirement.
    TR-FREQ-NOTREQ (error): safety-rated (>= A) functional requirement with no
    deriving technical requirement.
    TR-TREQ-NOALLOC (error): technical requirement allocated to no element.
    TR-REQ-NOTEST (error): safety-rated requirement verified by no test.
    TR-ASIL-DROP (error): derives edge whose child carries a lower ASIL than
    its parent.
    TR-ORPHAN (warning): node with no edges at all.
    QM and unrated requirements are exempt from TR-FREQ-NOTREQ/TR-REQ-NOTEST.
    """
    findings: list[Finding] = []
    by_id = {n.id: n for n in graph.nodes}

    incoming: dict[str, list] = {n.id: [] for n in graph.nodes}
    touched: set[str] = set()
    for edge in graph.edges:
        incoming[edge.target].append(edge)
        touched.add(edge.source)
        touched.add(edge.target)

    for node in graph.nodes:
        rated = node.asil is not None and node.asil >= Asil.A
        if node.kind == "safety_goal":
            if not any(e.relation == "derives" and by_id[e.source].kind == "functional_req"
                       for e in incoming[node.id]):
                findings.append(Finding(
                    "TR-GOAL-NOREQ", Severity.ERROR, node.id,
                    f"safety goal {node.id!r} has no deriving functional requirement"))
        if node.kind == "functional_req" and rated:
            if not any(e.relation == "derives" and by_id[e.source].kind == "technical_req"
                       for e in incoming[node.id]):
                findings.append(Finding(
                    "TR-FREQ-NOTREQ", Severity.ERROR, node.id,
                    f"functional requirement {node.id!r} (ASIL {node.asil}) has no "
                    "deriving technical requirement"))
        if node.kind == "technical_req":
            if not any(e.relation == "allocates" for e in incoming[node.id]):
                findings.append(Finding(
                    "TR-TREQ-NOALLOC", Severity.ERROR, node.id,
                    f"technical requirement {node.id!r} is allocated to no element"))
        if node.kind in ("functional_req", "technical_req") and rated:
            if not any(e.relation == "verifies" for e in incoming[node.id]):
                findings.append(Finding(
                    "TR-REQ-NOTEST", Severity.ERROR, node.id,
                    f"requirement {node.id!r} (ASIL {node.asil}) is verified by no test"))
        if node.id not in touched:
            findings.append(Finding(
                "TR-ORPHAN", Severity.WARNING, node.id,
                f"{node.kind} {node.id!r} participates in no trace edge"))

    for edge in graph.edges:
        if edge.relation != "derives":
            continue
        child, parent = by_id[edge.source], by_id[edge.target]
        if child.asil is not None and parent.asil is not None and child.asil < parent.asil:
            findings.append(Finding(
                "TR-ASIL-DROP", Severity.ERROR, child.id,
                f"{child.id!r} (ASIL {child.asil}) derives from {parent.id!r} "
                f"(ASIL {parent.asil}); child ASIL must not decrease"))

    return sort_findings(findings)


def trace_matrix(graph: TraceGraph, from_kind: str,
                 to_kind: str) -> dict[str, tuple[str, ...]]:
    """For each node of ``from_kind``, the ``to_kind`` nodes connected to it.

    Connectivity follows trace edges in either direction.  A node of the
    queried kind always reaches itself (zero-length path); when the kinds
    differ, a disconnected node maps to an empty tuple.
    """
    for kind in (from_kind, to_kind):
        if kind not in TRACE_KINDS:
            raise ValueError(f"unknown trace kind {kind!r}")
    neighbours: dict[str, set[str]] = {n.id: set() for n in graph.nodes}
    for edge in graph.edges:
        neighbours[edge.source].add(edge.target)
        neighbours[edge.target].add(edge.source)
    by_id = {n.id: n for n in graph.nodes}

    matrix: dict[str, tuple[str, ...]] = {}
    for node in graph.nodes:
        if node.kind != from_kind:
            continue
        seen = {node.id}
        queue = deque([node.id])
        while queue:
            for nxt in neighbours[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        matrix[node.id] = tuple(sorted(
            reached for reached in seen if by_id[reached].kind == to_kind))
    return dict(sorted(matrix.items()))


def detect_cycles(graph: TraceGraph) -> list[Finding]:
    """TR-CYCLE error per nontrivial strongly connected component (or
    self-loop) of the derives subgraph, listing member ids."""
    successors: dict[str, set[str]] = {n.id: set() for n in graph.nodes}
    self_loops: set[str] = set()
    for edge in graph.edges:
        if edge.relation != "derives":
            continue
        if edge.source == edge.target:
            self_loops.add(edge.source)
        successors[edge.source].add(edge.target)

    def closure(start: str, adjacency: dict[str, set[str]]) -> set[str]:
        seen = set()
        queue = deque([start])
        while queue:
            for nxt in adjacency[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    predecessors: dict[str, set[str]] = {n.id: set() for n in graph.nodes}
    for src, dsts in successors.items():
        for dst in dsts:
            predecessors[dst].add(src)

    # SCC = descendants(v) intersect ancestors(v); graphs are small enough
    # that the quadratic closure is fine and trivially deterministic
    findings: list[Finding] = []
    assigned: set[str] = set()
    for node in graph.nodes:
        if node.id in assigned:
            continue
        component = closure(node.id, successors) & closure(node.id, predecessors)
        component.add(node.id)
        if len(component) >= 2 or node.id in self_loops:
            members = sorted(component)
            findings.append(Finding(
                "TR-CYCLE", Severity.ERROR, ",".join(members),
                f"derives cycle through {', '.join(repr(m) for m in members)}"))
            assigned.update(component)
    return sort_findings(findings)
