import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlines.detkernel import (
    SignedLogDet,
    det_exact_integer,
    logabsdet_complex,
    logabsdet_real,
)
from hyperlines.rng import RngStream


def cofactor_det(mat):
    """Independent exact oracle: recursive cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = 0
    for c in range(n):
        if mat[0][c] == 0:
            continue
        minor = [row[:c] + row[c + 1 :] for row in mat[1:]]
        total += (-1) ** c * mat[0][c] * cofactor_det(minor)
    return total


EXAMPLE_N3 = [[1, 0, 4, 0], [2, 1, 5, 4], [3, 2, 6, 5], [0, 3, 0, 6]]


class TestLogAbsDetReal:
    def test_identity(self):
        out = logabsdet_real(np.eye(4))
        assert out.sign == 1 and out.log_modulus == 0.0

    def test_diag(self):
        out = logabsdet_real(np.diag([2.0, -3.0]))
        assert out.sign == -1
        assert out.log_modulus == pytest.approx(math.log(6), rel=1e-15)

    def test_integer_example(self):
        assert cofactor_det(EXAMPLE_N3) == 27
        out = logabsdet_real(np.array(EXAMPLE_N3, dtype=float))
        assert out.sign == 1
        assert out.log_modulus == pytest.approx(math.log(27), rel=1e-12)

    def test_zero_matrix_is_valid_output(self):
        out = logabsdet_real(np.zeros((3, 3)))
        assert out.sign == 0 and out.log_modulus == -math.inf and out.is_zero
        assert out.value() == 0.0

    def test_row_swap_flips_sign(self):
        rng = RngStream(17, 0)
        for _ in range(20):
            a = rng.normals(25).reshape(5, 5)
            b = a.copy()
            b[[0, 3]] = b[[3, 0]]
            da, db = logabsdet_real(a), logabsdet_real(b)
            assert da.sign == -db.sign
            assert da.log_modulus == pytest.approx(db.log_modulus, rel=1e-9)

    def test_row_scaling(self):
        rng = RngStream(18, 0)
        a = rng.normals(16).reshape(4, 4)
        b = a.copy()
        b[2] *= 7.0
        assert logabsdet_real(b).log_modulus == pytest.approx(
            logabsdet_real(a).log_modulus + math.log(7), rel=1e-9
        )

    def test_cubic_determinant_identity(self):
        # structured 4x4 built from standard normals a..f with sqrt(2) middle
        rng = RngStream(200, 0)
        for _ in range(50):
            a, b, c, d, e, f = rng.normals(6)
            r2 = math.sqrt(2.0)
            m = np.array(
                [
                    [a, 0, d, 0],
                    [r2 * b, a, r2 * e, d],
                    [c, r2 * b, f, r2 * e],
                    [0, c, 0, f],
                ]
            )
            want = (a * f - c * d) ** 2 - 2 * (b * f - c * e) * (a * e - b * d)
            got = logabsdet_real(m)
            assert got.sign == (0 if want == 0 else math.copysign(1, want))
            assert got.log_modulus == pytest.approx(math.log(abs(want)), rel=1e-10)


class TestLogAbsDetComplex:
    def test_identity(self):
        out = logabsdet_complex(np.eye(3, dtype=complex))
        assert out.log_modulus == 0.0
        assert out.sign == pytest.approx(1 + 0j)

    def test_scalar(self):
        out = logabsdet_complex(np.array([[3 + 4j]]))
        assert out.log_modulus == pytest.approx(math.log(5), rel=1e-15)
        assert out.sign == pytest.approx((3 + 4j) / 5, rel=1e-15)

    def test_realify_agreement(self):
        from hyperlines.matrices import realify

        rng = RngStream(19, 0)
        for m in range(1, 7):
            z = rng.normals(2 * m * m)
            a = (z[0::2] + 1j * z[1::2]).reshape(m, m)
            lc = logabsdet_complex(a)
            lr = logabsdet_real(realify(a))
            assert lr.sign == 1
            assert 2 * lc.log_modulus == pytest.approx(lr.log_modulus, abs=1e-9)


class TestDetExactInteger:
    def test_integer_example(self):
        assert det_exact_integer(EXAMPLE_N3) == 27

    def test_upper_triangular(self):
        assert det_exact_integer([[1, 5, 7], [0, 2, 9], [0, 0, 3]]) == 6

    def test_needs_row_swap(self):
        assert det_exact_integer([[0, 1], [1, 0]]) == -1

    def test_singular(self):
        assert det_exact_integer([[1, 2], [2, 4]]) == 0

    def test_numpy_input(self):
        assert det_exact_integer(np.array(EXAMPLE_N3)) == 27

    @settings(deadline=None, max_examples=40)
    @given(st.integers(1, 5), st.integers(0, 10**6))
    def test_against_cofactor_oracle(self, size, seed):
        rng = np.random.default_rng(seed)
        m = rng.integers(-9, 10, size=(size, size)).tolist()
        assert det_exact_integer(m) == cofactor_det(m)

    def test_float_exact_agreement(self):
        rng = np.random.default_rng(7)
        for size in range(2, 11):
            for _ in range(5):
                m = rng.integers(-9, 10, size=(size, size))
                exact = det_exact_integer(m)
                out = logabsdet_real(m.astype(float))
                if exact == 0:
                    assert out.sign == 0
                else:
                    got = out.sign * math.exp(out.log_modulus)
                    assert got == pytest.approx(exact, rel=1e-10)


class TestSignedLogDet:
    def test_value(self):
        assert SignedLogDet(-1, math.log(6)).value() == pytest.approx(-6.0)
        assert SignedLogDet(0, -math.inf).value() == 0.0
