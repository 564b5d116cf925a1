"""Counts of lines on hypersurfaces of degree 2n-3 in projective n-space.

Exact routes (big-integer combinatorics, symbolic determinant expansion,
Bombieri norms) and reproducible Monte Carlo estimation of the real and
complex line counts, cross-validated against each other.
"""

from .accum import DyadicSum, MCEstimate, MomentAccumulator
from .backend import HAVE_COMPILED, backend_name, use_backend
from .detkernel import SignedLogDet, det_exact_integer, logabsdet_complex, logabsdet_real
from .exact import (
    DomainError,
    ExactRational,
    LogScalar,
    ProblemSpec,
    SqrtRational,
    binomial,
    closed_form_expected_det,
    double_factorial,
    e3_abs_det_mean,
    e3_closed_form,
    grassmannian_volume,
    prefactor_complex,
    prefactor_real,
    rn_signed_count,
    zagier_asymptotic,
    zagier_cn,
)
from .matrices import SymbolicTemplate, build_complex, build_real, build_symbolic, realify
from .mc import (
    LineCountEstimate,
    density_test_n3,
    estimate_abs_det_real,
    estimate_abs_det_sq_complex,
    estimate_cn_mc,
    estimate_en,
    estimate_signed_det_real,
    realify_check,
    sqrt_law_study,
)
from .rng import RngStream, sample_complex_vector, sample_real_vector
from .sympoly import (
    CapacityError,
    SparsePoly,
    bombieri_norm_sq,
    cn_exact_symbolic,
    complex_second_moment,
    expand_determinant,
    expected_det_exact,
    expected_det_sq_exact,
    verify_lemma_i1,
    verify_lemma_i2,
)

__version__ = "0.1.0"
