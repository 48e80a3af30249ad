from __future__ import annotations

from importlib import resources

import pytest

from safework.model import SafetyModel, load_model

MINIMAL_MODEL = """
{
  "item": {
    "name": "HWA",
    "description": "",
    "requirement_checklist": {
      "legal_and_standards": false,
      "vehicle_level_behavior": false,
      "quality_performance_availability": false,
      "constraints_and_dependencies": false,
      "behavioral_shortfalls": false,
      "actuator_capabilities": false
    },
    "boundary_checklist": {
      "item_elements": false,
      "vehicle_effects": false,
      "functionality_provided": false,
      "functionality_required": false,
      "function_allocation": false,
      "operational_scenarios": false
    },
    "artifacts": {
      "state_transition_diagrams": false,
      "state_transition_tables": false,
      "sequence_diagrams": false,
      "use_case_diagrams": false
    },
    "interfaces": []
  }
}
"""


def example_model_text() -> str:
    return resources.files("safework").joinpath("data/example_model.json").read_text(
        encoding="utf-8")


@pytest.fixture(scope="session")
def example_model() -> SafetyModel:
    return load_model(example_model_text())


@pytest.fixture()
def minimal_model() -> SafetyModel:
    return load_model(MINIMAL_MODEL)
