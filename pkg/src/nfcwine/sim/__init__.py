from .engine import Engine, SimReport, run_scenario
from .reader import ScanOutcome, read_tag_value, scan, verify_uid, write_tag
from .scenario import FaultPlan, Scenario, ScenarioError, load_scenario, parse_scenario

__all__ = [
    "Engine", "SimReport", "run_scenario",
    "ScanOutcome", "write_tag", "scan", "verify_uid", "read_tag_value",
    "Scenario", "FaultPlan", "ScenarioError", "parse_scenario", "load_scenario",
]
