"""
Generators package.
Contains artifact generators for the analytic tables and simulated runs.
"""

from .base import FORMATS, BaseGenerator, TableGenerator
from .tradeoff_curve import TradeoffCurveGenerator
from .feasible_table import FeasibleTableGenerator
from .latency_table import LatencyTableGenerator
from .run_artifacts import PlacementGenerator, PlanGenerator, RunReportGenerator, TranscriptGenerator

__all__ = [
    'FORMATS',
    'BaseGenerator',
    'TableGenerator',
    'TradeoffCurveGenerator',
    'FeasibleTableGenerator',
    'LatencyTableGenerator',
    'RunReportGenerator',
    'PlacementGenerator',
    'PlanGenerator',
    'TranscriptGenerator',
]
