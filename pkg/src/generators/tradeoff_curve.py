"""
Trade-off Curve Generator
=========================
Optimized versus baseline communication load against map-phase latency, one
row per admissible q.

CSV columns: q,D,L_opt,L_base,l_opt,r2_opt (decimals with 12 significant
digits). Skipped q values are listed as trailing comment lines. JSON rows
carry the loads as exact {value, num, den} objects.
"""

from typing import Optional

import pandas as pd

from ..config import TRADEOFF_FILENAME
from ..scheme.latency import TradeoffCurve, tradeoff_curve
from ..scheme.params import SystemParams
from ..utils.serialization import dataframe_to_csv, format_decimal, fraction_fields, to_json
from .base import FORMAT_CSV, TableGenerator

CSV_COLUMNS = ['q', 'D', 'L_opt', 'L_base', 'l_opt', 'r2_opt']


class TradeoffCurveGenerator(TableGenerator):
    """Generator for the latency-load trade-off table."""

    stem = TRADEOFF_FILENAME

    def __init__(self, params: SystemParams, fmt: str = FORMAT_CSV):
        super().__init__(fmt)
        self.params = params
        self._curve: Optional[TradeoffCurve] = None

    @property
    def curve(self) -> TradeoffCurve:
        if self._curve is None:
            self._curve = tradeoff_curve(self.params)
        return self._curve

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            {
                'q': point.q,
                'D': format_decimal(point.latency),
                'L_opt': format_decimal(point.optimized_load),
                'L_base': format_decimal(point.baseline_load),
                'l_opt': point.optimized_rates.l,
                'r2_opt': point.optimized_rates.r2,
            }
            for point in self.curve
        ]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)

    def generate(self) -> str:
        if self.fmt == FORMAT_CSV:
            comments = [f"q={q} skipped: no feasible rate pair" for q in self.curve.skipped]
            return dataframe_to_csv(self.to_dataframe(), comments)

        return to_json([
            {
                'q': point.q,
                'D': float(format_decimal(point.latency)),
                'L_opt': fraction_fields(point.optimized_load),
                'L_base': fraction_fields(point.baseline_load),
                'l_opt': point.optimized_rates.l,
                'r2_opt': point.optimized_rates.r2,
            }
            for point in self.curve
        ])
