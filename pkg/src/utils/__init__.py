"""
Utility Modules
===============
Shared utilities for subset ranking and artifact serialization.
"""

from .combinatorics import colex_rank, colex_subsets, colex_subsets_of, colex_unrank
from .serialization import dataframe_to_csv, format_decimal, fraction_fields, to_json, to_json_lines

__all__ = [
    'colex_rank',
    'colex_unrank',
    'colex_subsets',
    'colex_subsets_of',
    'dataframe_to_csv',
    'format_decimal',
    'fraction_fields',
    'to_json',
    'to_json_lines',
]
