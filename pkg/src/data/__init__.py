"""
Data Modules
============
Seeded generation of the problem matrices.
"""

from .instance import ProblemData

__all__ = ['ProblemData']
