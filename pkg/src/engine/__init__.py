"""
Engine Modules
==============
Straggler sampling and the end-to-end map-shuffle-reduce simulator.
"""

from .simulator import (
    RunReport,
    Simulation,
    Transcript,
    TranscriptEntry,
    decode_systems,
    execute_plan,
    map_phase,
    reduce_phase,
    replay_transcript,
    run,
    transcript_digest,
)
from .stragglers import LatencyEstimate, StragglerModel, monte_carlo_latency, sample_stragglers

__all__ = [
    'RunReport',
    'Simulation',
    'Transcript',
    'TranscriptEntry',
    'decode_systems',
    'execute_plan',
    'map_phase',
    'reduce_phase',
    'replay_transcript',
    'run',
    'transcript_digest',
    'LatencyEstimate',
    'StragglerModel',
    'monte_carlo_latency',
    'sample_stragglers',
]
