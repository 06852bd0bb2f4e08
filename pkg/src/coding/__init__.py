"""
Coding Modules
==============
GF(2^w) arithmetic and the MDS outer code.
"""

from .field import field, gf_add, gf_inv, gf_mul, matrix_from_bytes, matrix_to_bytes
from .mds import GeneratorMatrix, decode_rows, encode, make_generator

__all__ = [
    'field',
    'gf_add',
    'gf_mul',
    'gf_inv',
    'matrix_to_bytes',
    'matrix_from_bytes',
    'GeneratorMatrix',
    'make_generator',
    'encode',
    'decode_rows',
]
