"""
Serialization Utilities
=======================
Shared helpers for rendering exact rationals and writing CSV / JSON artifacts.
"""

from fractions import Fraction
import json
from typing import Any, Dict, Iterable, Union

import pandas as pd

from ..config import SIGNIFICANT_DIGITS

Number = Union[int, Fraction]


def format_decimal(value: Number, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Render a rational as a decimal with the given significant digits."""
    return f"{float(value):.{digits}g}"


def fraction_fields(value: Number) -> Dict[str, Any]:
    """
    JSON fields for an exact rational.

    Returns:
        {'value': decimal, 'num': numerator, 'den': denominator}
    """
    value = Fraction(value)
    return {
        'value': float(format_decimal(value)),
        'num': value.numerator,
        'den': value.denominator,
    }


def to_json(payload: Any) -> str:
    """Deterministic JSON text (stable key order, trailing newline)."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def to_json_lines(records: Iterable[Dict[str, Any]]) -> str:
    """One compact JSON object per line."""
    return "".join(json.dumps(record, sort_keys=True, separators=(',', ':')) + "\n" for record in records)


def dataframe_to_csv(df: pd.DataFrame, comments: Iterable[str] = ()) -> str:
    """
    CSV text of a table, followed by '# ...' comment lines.

    Args:
        df: Table to write (index is dropped)
        comments: Lines appended after the data, each prefixed with '# '
    """
    text = df.to_csv(index=False, lineterminator="\n")
    return text + "".join(f"# {line}\n" for line in comments)
