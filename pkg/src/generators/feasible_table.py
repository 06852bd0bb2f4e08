"""
Feasible Rates Generator
========================
Every feasible (l, r2) pair with its effective storage mu/r2 and achievable
load, sorted by load and then (l, r2), the optimum flagged.
"""

from typing import List, Optional

import pandas as pd

from ..config import FEASIBLE_FILENAME
from ..scheme.params import SystemParams
from ..scheme.rates import (
    LoadBreakdown,
    effective_storage,
    enumerate_feasible,
    load_breakdown,
    optimize_rates,
)
from ..utils.serialization import dataframe_to_csv, format_decimal, fraction_fields, to_json
from .base import FORMAT_CSV, TableGenerator

CSV_COLUMNS = ['l', 'r1', 'r2', 'mu_eff', 'load', 's_q', 'case', 'optimal']


class FeasibleTableGenerator(TableGenerator):
    """Generator for the table of feasible rate pairs."""

    stem = FEASIBLE_FILENAME

    def __init__(self, params: SystemParams, fmt: str = FORMAT_CSV):
        super().__init__(fmt)
        self.params = params
        self._rows: Optional[List[LoadBreakdown]] = None

    @property
    def rows(self) -> List[LoadBreakdown]:
        """Load breakdowns of every feasible pair, best first."""
        if self._rows is None:
            breakdowns = [load_breakdown(self.params, pair) for pair in enumerate_feasible(self.params)]
            self._rows = sorted(breakdowns, key=lambda b: (b.total, b.rates.l, b.rates.r2))
        return self._rows

    @property
    def optimum(self):
        return optimize_rates(self.params)[0]

    def to_dataframe(self) -> pd.DataFrame:
        best = self.optimum if self.rows else None
        return pd.DataFrame(
            [
                {
                    'l': b.rates.l,
                    'r1': str(b.rates.r1),
                    'r2': b.rates.r2,
                    'mu_eff': str(effective_storage(self.params, b.rates)),
                    'load': format_decimal(b.total),
                    's_q': b.s_q,
                    'case': b.case,
                    'optimal': b.rates == best,
                }
                for b in self.rows
            ],
            columns=CSV_COLUMNS,
        )

    def generate(self) -> str:
        if self.fmt == FORMAT_CSV:
            return dataframe_to_csv(self.to_dataframe())

        best = self.optimum if self.rows else None
        return to_json([
            {
                'l': b.rates.l,
                'r1': fraction_fields(b.rates.r1),
                'r2': b.rates.r2,
                'mu_eff': fraction_fields(effective_storage(self.params, b.rates)),
                'load': fraction_fields(b.total),
                's_q': b.s_q,
                'case': b.case,
                'optimal': b.rates == best,
            }
            for b in self.rows
        ])
