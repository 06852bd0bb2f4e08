"""
Run Artifact Generators
=======================
JSON dumps of one simulated run: the report, the row placement, the shuffle
plan, and the payload transcript (JSON lines, one message per line).
"""

from ..config import RUN_REPORT_FILENAME
from ..scheme.placement import PlacementMap
from ..scheme.shuffle import ShufflePlan
from ..utils.serialization import to_json, to_json_lines
from .base import BaseGenerator


class RunReportGenerator(BaseGenerator):
    """RunReport as JSON."""

    output_filename = RUN_REPORT_FILENAME

    def __init__(self, report):
        self.report = report

    def generate(self) -> str:
        return to_json(self.report.to_dict())


class PlacementGenerator(BaseGenerator):
    output_filename = "placement.json"

    def __init__(self, placement: PlacementMap):
        self.placement = placement

    def generate(self) -> str:
        return to_json(self.placement.to_dict())


class PlanGenerator(BaseGenerator):
    output_filename = "shuffle_plan.json"

    def __init__(self, plan: ShufflePlan):
        self.plan = plan

    def generate(self) -> str:
        return to_json(self.plan.to_dict())


class TranscriptGenerator(BaseGenerator):
    output_filename = "transcript.jsonl"

    def __init__(self, transcript):
        self.transcript = transcript

    def generate(self) -> str:
        return to_json_lines(entry.to_dict() for entry in self.transcript)
