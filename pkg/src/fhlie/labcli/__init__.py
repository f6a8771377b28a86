"""Scenario runner, report rendering and the ``fhlie`` command line."""

from .report import Report, Table, Verdict
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario

__all__ = ["Report", "Table", "Verdict", "Scenario", "ScenarioError", "load_scenario", "parse_scenario"]
