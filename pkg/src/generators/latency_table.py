"""
Latency Table Generator
=======================
Analytic D(q) for every q in [1, K], optionally next to a seeded Monte Carlo
estimate and its relative error.
"""

from typing import List, Optional

import pandas as pd

from ..config import LATENCY_FILENAME
from ..engine.stragglers import monte_carlo_latency
from ..scheme.latency import latency
from ..scheme.params import SystemParams
from ..utils.serialization import dataframe_to_csv, format_decimal, to_json
from .base import FORMAT_CSV, TableGenerator


class LatencyTableGenerator(TableGenerator):
    """Generator for the per-q latency table."""

    stem = LATENCY_FILENAME

    def __init__(self, params: SystemParams, trials: int = 0, seed: int = 0, fmt: str = FORMAT_CSV):
        super().__init__(fmt)
        self.params = params
        self.trials = trials
        self.seed = seed
        self._records: Optional[List[dict]] = None

    @property
    def records(self) -> List[dict]:
        if self._records is None:
            records = []
            for q in range(1, self.params.K + 1):
                record = {'q': q, 'D': latency(self.params, q)}
                if self.trials:
                    # one stream per q so each row is reproducible on its own
                    estimate = monte_carlo_latency(self.params, q, self.trials, self.seed + q)
                    record['empirical'] = estimate.empirical
                    record['relative_error'] = estimate.relative_error
                records.append(record)
            self._records = records
        return self._records

    def to_dataframe(self) -> pd.DataFrame:
        df = pd.DataFrame(self.records)
        for column in df.columns.drop('q'):
            df[column] = df[column].map(format_decimal)
        return df

    def generate(self) -> str:
        if self.fmt == FORMAT_CSV:
            comments = [f"trials={self.trials} seed={self.seed}"] if self.trials else []
            return dataframe_to_csv(self.to_dataframe(), comments)
        return to_json([
            {key: (value if key == 'q' else float(format_decimal(value))) for key, value in record.items()}
            for record in self.records
        ])
