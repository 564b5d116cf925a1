"""Construction of the two-column-banded determinant matrices.

Index convention: the classical displays of these matrices are 1-based; all
storage here is 0-based.  The structural rule, taken as normative, is that
coefficient j (1-based) of vector i occupies positions (row j, column 2i-1)
and (row j+1, column 2i) in 1-based coordinates, i.e. (j-1, 2i-2) and
(j, 2i-1) in storage.  Each variable therefore appears exactly twice, the
second occurrence offset by (+1, +1), and every built matrix satisfies
entry[r+1, 2i-1] = entry[r, 2i-2] for r = 0..2n-4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import ProblemSpec, binomial


class ShapeError(ValueError):
    """Wrong number or length of coefficient vectors."""


def _check_vectors(spec: ProblemSpec, vectors: Sequence) -> None:
    if len(vectors) != spec.n - 1:
        raise ShapeError(f"expected {spec.n - 1} vectors, got {len(vectors)}")
    for v in vectors:
        if len(v) != spec.degree:
            raise ShapeError(f"vectors must have length {spec.degree}, got {len(v)}")


def build_real(spec: ProblemSpec, vectors: Sequence[np.ndarray]) -> np.ndarray:
    """(2n-2) x (2n-2) real matrix from n-1 coefficient vectors."""
    _check_vectors(spec, vectors)
    D, d = spec.matrix_size, spec.degree
    out = np.zeros((D, D))
    for i, v in enumerate(vectors):
        v = np.asarray(v, dtype=np.float64)
        out[0:d, 2 * i] = v
        out[1:D, 2 * i + 1] = v
    return out


def build_complex(spec: ProblemSpec, vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Complex variant of build_real."""
    _check_vectors(spec, vectors)
    D, d = spec.matrix_size, spec.degree
    out = np.zeros((D, D), dtype=np.complex128)
    for i, v in enumerate(vectors):
        v = np.asarray(v, dtype=np.complex128)
        out[0:d, 2 * i] = v
        out[1:D, 2 * i + 1] = v
    return out


def batch_build_real(spec: ProblemSpec, vectors: np.ndarray) -> np.ndarray:
    """Batched fill: vectors (S, n-1, 2n-3) -> matrices (S, D, D)."""
    S = vectors.shape[0]
    D, d = spec.matrix_size, spec.degree
    out = np.zeros((S, D, D))
    for i in range(spec.n - 1):
        out[:, 0:d, 2 * i] = vectors[:, i, :]
        out[:, 1:D, 2 * i + 1] = vectors[:, i, :]
    return out


def batch_build_complex_parts(
    spec: ProblemSpec, re: np.ndarray, im: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Batched fill of real/imaginary parts, each (S, n-1, 2n-3) -> (S, D, D)."""
    return batch_build_real(spec, re), batch_build_real(spec, im)


@dataclass(frozen=True)
class SymbolicTemplate:
    """Positions and variance scales of the banded matrix in symbolic form.

    entries maps 0-based (row, col) to the 0-based variable index
    k = (i-1)(2n-3) + j - 1 for vector i, coefficient j (1-based pair).
    scales[k] is the entry variance C(2n-4, j-1) as an exact integer.
    """

    n: int
    size: int
    entries: dict[tuple[int, int], int]
    scales: tuple[int, ...]

    def positions_of(self, k: int) -> list[tuple[int, int]]:
        return sorted(rc for rc, kk in self.entries.items() if kk == k)

    def row_entries(self) -> list[list[tuple[int, int]]]:
        """Per-row list of (col, var index), columns ascending."""
        rows: list[list[tuple[int, int]]] = [[] for _ in range(self.size)]
        for (r, c), k in sorted(self.entries.items()):
            rows[r].append((c, k))
        return rows

    def instantiate(self, values: Sequence[int]) -> list[list[int]]:
        """Integer matrix with entry (r, c) = values[k]; zeros elsewhere."""
        mat = [[0] * self.size for _ in range(self.size)]
        for (r, c), k in self.entries.items():
            mat[r][c] = values[k]
        return mat


def build_symbolic(spec: ProblemSpec) -> SymbolicTemplate:
    """Symbolic template with exactly 2N nonzero positions and scale vector."""
    n, d, D = spec.n, spec.degree, spec.matrix_size
    entries: dict[tuple[int, int], int] = {}
    scales = []
    for i in range(n - 1):
        for j in range(d):
            k = i * d + j
            entries[(j, 2 * i)] = k
            entries[(j + 1, 2 * i + 1)] = k
    for i in range(n - 1):
        for j in range(d):
            scales.append(binomial(2 * n - 4, j))
    assert len(entries) == 2 * spec.num_vars
    return SymbolicTemplate(n=n, size=D, entries=entries, scales=tuple(scales))


def realify(a: np.ndarray) -> np.ndarray:
    """Expand an m x m complex matrix to 2m x 2m real blocks [[x, y], [-y, x]].

    det(realify(A)) = |det A|^2 >= 0.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("realify requires a square matrix")
    m = a.shape[0]
    out = np.zeros((2 * m, 2 * m))
    re, im = a.real, a.imag
    out[0::2, 0::2] = re
    out[0::2, 1::2] = im
    out[1::2, 0::2] = -im
    out[1::2, 1::2] = re
    return out
