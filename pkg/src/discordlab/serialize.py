"""JSON encoding of complex matrices and vectors.

Matrices serialize row-major, each entry as an [re, im] pair; this is the
wire format used by scenario files and verdict attachments.
"""
from __future__ import annotations

import numpy as np


def matrix_to_json(matrix: np.ndarray) -> list[list[list[float]]]:
    matrix = np.asarray(matrix, dtype=complex)
    return [[[float(entry.real), float(entry.imag)] for entry in row]
            for row in matrix]


def matrix_from_json(data: list) -> np.ndarray:
    rows = []
    for row in data:
        rows.append([complex(entry[0], entry[1]) for entry in row])
    out = np.asarray(rows, dtype=complex)
    if out.ndim != 2:
        raise ValueError("matrix payload must be a list of rows of [re, im] pairs")
    return out


def vector_to_json(vector: np.ndarray) -> list[list[float]]:
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    return [[float(entry.real), float(entry.imag)] for entry in vector]


def vector_from_json(data: list) -> np.ndarray:
    return np.asarray([complex(entry[0], entry[1]) for entry in data], dtype=complex)
