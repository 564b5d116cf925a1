"""Determinant evaluation: floating sign/log-modulus and exact integer routes.

The floating routes delegate to the active LU backend (batch of one), so a
single-matrix call returns exactly what the Monte Carlo engine would compute
for the same matrix.  A zero determinant is a valid output (sign 0,
log-modulus -inf), never an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import backend
from .exact import LN2


@dataclass(frozen=True)
class SignedLogDet:
    """sign is -1/0/+1 for real input, a unit complex number for complex input."""

    sign: Union[int, complex]
    log_modulus: float

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def value(self) -> Union[float, complex]:
        if self.is_zero:
            return 0.0
        return self.sign * math.exp(self.log_modulus)


def logabsdet_real(mat: np.ndarray) -> SignedLogDet:
    """LU with partial pivoting; log of pivot magnitudes, swap parity in sign."""
    m = np.ascontiguousarray(np.asarray(mat, dtype=np.float64))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    sign, mant, expo = backend.current().lu_logabsdet_real_batch(m[None, :, :].copy())
    if sign[0] == 0:
        return SignedLogDet(0, -math.inf)
    return SignedLogDet(int(sign[0]), math.log(mant[0]) + float(expo[0]) * LN2)


def logabsdet_complex(mat: np.ndarray) -> SignedLogDet:
    """Complex LU; sign is the unit phase of the determinant."""
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    re = np.ascontiguousarray(m.real)[None, :, :].copy()
    im = np.ascontiguousarray(m.imag)[None, :, :].copy()
    phr, phi, mant, expo = backend.current().lu_logabsdetsq_complex_batch(re, im)
    if mant[0] == 0.0:
        return SignedLogDet(0, -math.inf)
    logmod = 0.5 * (math.log(mant[0]) + float(expo[0]) * LN2)
    return SignedLogDet(complex(phr[0], phi[0]), logmod)


def det_exact_integer(mat) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination.

    Bareiss scheme: every division is exact; row swaps flip the sign.
    """
    if isinstance(mat, np.ndarray):
        rows = mat.tolist()
    else:
        rows = [list(r) for r in mat]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("expected a square matrix")
    a = [[int(x) for x in r] for r in rows]
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]
