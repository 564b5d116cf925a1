"""Monte Carlo estimation of determinant moments and line-count assembly.

Work is split across `streams` logical substreams; stream w draws from the
counter-based generator keyed (seed, w) and owns an exact accumulator, so the
result is a deterministic function of (seed, streams, samples) no matter how
many OS threads execute the streams.  Merging is exact integer addition,
folded in stream-id order.

Mean determinant magnitudes are accumulated from (mantissa, exponent) pairs
and may exceed the float64 range at large n; estimates then report the mean
in log space (log_mean stays finite) while the assembled line-count estimate
is formed as exp(prefactor_log + log_mean).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.special

from . import backend
from .accum import MCEstimate, MomentAccumulator, estimate_from_accumulator
from .exact import (
    ProblemSpec,
    double_factorial,
    log_bigint,
    log_fraction,
    prefactor_complex,
    prefactor_real,
    zagier_cn,
)
from .matrices import batch_build_real
from .rng import RngStream, sample_complex_batch_parts, sample_real_batch

MC_MAX_N = 30
_BATCH = 1 << 15


def _validate(spec: ProblemSpec, samples: int, streams: int, max_n: int = MC_MAX_N) -> None:
    if samples < 1000:
        raise ValueError(f"samples must be >= 1000, got {samples}")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    if spec.n > max_n:
        raise ValueError(
            f"n = {spec.n} exceeds the Monte Carlo guard n <= {max_n}; "
            "pass max_n explicitly to override"
        )


def _stream_counts(samples: int, streams: int) -> list[int]:
    base, rem = divmod(samples, streams)
    return [base + (1 if w < rem else 0) for w in range(streams)]


def _run_stream_real(spec: ProblemSpec, seed: int, stream_id: int, count: int, signed: bool):
    rng = RngStream(seed, stream_id)
    kern = backend.current()
    acc = MomentAccumulator()
    left = count
    while left > 0:
        b = min(_BATCH, left)
        vecs = sample_real_batch(spec, rng, b)
        mats = batch_build_real(spec, vecs)
        sign, mant, expo = kern.lu_logabsdet_real_batch(mats)
        if signed:
            acc.ingest_scaled(sign * mant, expo)
        else:
            acc.ingest_scaled(mant, expo)
        left -= b
    return acc


def _run_stream_complex(spec: ProblemSpec, seed: int, stream_id: int, count: int):
    rng = RngStream(seed, stream_id)
    kern = backend.current()
    acc = MomentAccumulator()
    left = count
    while left > 0:
        b = min(_BATCH, left)
        re, im = sample_complex_batch_parts(spec, rng, b)
        mre = batch_build_real(spec, re)
        mim = batch_build_real(spec, im)
        _, _, mant, expo = kern.lu_logabsdetsq_complex_batch(mre, mim)
        acc.ingest_scaled(mant, expo)
        left -= b
    return acc


def _run(spec, samples, seed, streams, runner, max_n=MC_MAX_N) -> MomentAccumulator:
    _validate(spec, samples, streams, max_n)
    counts = _stream_counts(samples, streams)
    if streams == 1:
        return runner(spec, seed, 0, counts[0])
    with ThreadPoolExecutor(max_workers=streams) as pool:
        futures = [
            pool.submit(runner, spec, seed, w, counts[w]) for w in range(streams)
        ]
        accs = [f.result() for f in futures]
    merged = accs[0]
    for acc in accs[1:]:  # left fold in stream-id order
        merged.merge(acc)
    return merged


def estimate_abs_det_real(
    spec: ProblemSpec, samples: int, seed: int, streams: int = 1, max_n: int = MC_MAX_N
) -> MCEstimate:
    """Mean of |det| over fresh draws of the real banded matrix."""
    acc = _run(
        spec, samples, seed, streams,
        lambda sp, se, w, c: _run_stream_real(sp, se, w, c, signed=False),
        max_n,
    )
    return estimate_from_accumulator(acc, seed, streams, backend.backend_name())


def estimate_signed_det_real(
    spec: ProblemSpec, samples: int, seed: int, streams: int = 1, max_n: int = MC_MAX_N
) -> MCEstimate:
    """Mean of det (no absolute value) over fresh draws."""
    acc = _run(
        spec, samples, seed, streams,
        lambda sp, se, w, c: _run_stream_real(sp, se, w, c, signed=True),
        max_n,
    )
    return estimate_from_accumulator(acc, seed, streams, backend.backend_name())


def estimate_abs_det_sq_complex(
    spec: ProblemSpec, samples: int, seed: int, streams: int = 1, max_n: int = MC_MAX_N
) -> MCEstimate:
    """Mean of |det|^2 over fresh draws of the complex banded matrix."""
    acc = _run(spec, samples, seed, streams, _run_stream_complex, max_n)
    return estimate_from_accumulator(acc, seed, streams, backend.backend_name())


@dataclass(frozen=True)
class LineCountEstimate:
    """Raw determinant moment combined with the exact prefactor in log space."""

    n: int
    raw: MCEstimate
    prefactor_log: float
    value: float
    value_ci95: tuple[float, float]

    def to_record(self, op: str) -> dict:
        rec = {"op": op, "n": self.n}
        rec.update(self.raw.to_record())
        rec["prefactor_log"] = self.prefactor_log
        rec["value"] = self.value if math.isfinite(self.value) else None
        rec["value_ci95"] = [
            v if math.isfinite(v) else None for v in self.value_ci95
        ]
        return rec


def _assemble(n: int, raw: MCEstimate, prefactor_log: float) -> LineCountEstimate:
    if raw.log_mean is None:
        raise ValueError("cannot assemble a line count from a non-positive mean")
    value = math.exp(prefactor_log + raw.log_mean)
    lo = raw.mean - 1.96 * raw.std_error
    hi = raw.mean + 1.96 * raw.std_error
    pf = math.exp(prefactor_log) if prefactor_log < 700 else math.inf
    ci = (max(lo, 0.0) * pf, hi * pf)
    return LineCountEstimate(
        n=n, raw=raw, prefactor_log=prefactor_log, value=value, value_ci95=ci
    )


def estimate_en(
    spec: ProblemSpec, samples: int, seed: int, streams: int = 1, max_n: int = MC_MAX_N
) -> LineCountEstimate:
    """Estimated expected number of real lines: exact prefactor x mean |det|."""
    raw = estimate_abs_det_real(spec, samples, seed, streams, max_n)
    return _assemble(spec.n, raw, log_fraction(prefactor_real(spec)))


def estimate_cn_mc(
    spec: ProblemSpec, samples: int, seed: int, streams: int = 1, max_n: int = MC_MAX_N
) -> LineCountEstimate:
    """Estimated complex line count: exact prefactor x mean |det|^2."""
    raw = estimate_abs_det_sq_complex(spec, samples, seed, streams, max_n)
    return _assemble(spec.n, raw, log_fraction(prefactor_complex(spec)))


# --- cubic-case distribution tests ------------------------------------------


def _char_fn_grid() -> np.ndarray:
    """Fixed 20-point grid with |t| <= 3: the origin plus a golden spiral."""
    pts = [(0.0, 0.0, 0.0)]
    golden = 2.399963229728653
    for i in range(1, 20):
        r = 3.0 * i / 19.0
        cz = 1.0 - 2.0 * i / 20.0
        sz = math.sqrt(1.0 - cz * cz)
        phi = golden * i
        pts.append((r * sz * math.cos(phi), r * sz * math.sin(phi), r * cz))
    return np.array(pts)


@dataclass(frozen=True)
class DensityReport:
    samples: int
    seed: int
    ks_statistic: float
    p_value: float
    char_fn_max_abs_dev: float
    char_fn_dev_at_zero: float


def density_test_n3(samples: int, seed: int) -> DensityReport:
    """Distribution checks for the cubic-case 2x2-minor vector.

    Draws six standard normals (a..f) per sample, forms
    (x, y, z) = (bf - ce, af - cd, ae - bd), and checks

    * the radius |(x, y, z)| against the CDF F(r) = 1 - (1 + r) e^{-r}
      (Kolmogorov-Smirnov, asymptotic p-value), and
    * the empirical characteristic function E cos(t . v) against
      1 / (1 + |t|^2) on a fixed grid of 20 points with |t| <= 3.
    """
    if samples < 10_000:
        raise ValueError("density test needs samples >= 10^4")
    rng = RngStream(seed, 0)
    z = rng.normals(6 * samples).reshape(samples, 6)
    a, b, c, d, e, f = (z[:, i] for i in range(6))
    x = b * f - c * e
    y = a * f - c * d
    w = a * e - b * d
    r = np.sqrt(x * x + y * y + w * w)
    r.sort()
    n = float(samples)
    cdf = 1.0 - (1.0 + r) * np.exp(-r)
    i = np.arange(1, samples + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    ks = max(d_plus, d_minus)
    p_value = float(scipy.special.kolmogorov(math.sqrt(n) * ks))

    grid = _char_fn_grid()
    devs = []
    for t in grid:
        emp = float(np.mean(np.cos(t[0] * x + t[1] * y + t[2] * w)))
        devs.append(abs(emp - 1.0 / (1.0 + float(t @ t))))
    return DensityReport(
        samples=samples,
        seed=seed,
        ks_statistic=float(ks),
        p_value=p_value,
        char_fn_max_abs_dev=max(devs),
        char_fn_dev_at_zero=devs[0],
    )


@dataclass(frozen=True)
class RealifyReport:
    trials: int
    max_abs_log_dev: float
    nonnegative: bool


def realify_check(trials: int, seed: int = 0) -> RealifyReport:
    """Random complex matrices of sizes 1..8: block realification preserves |det|^2."""
    from .detkernel import logabsdet_complex, logabsdet_real
    from .matrices import realify

    rng = RngStream(seed, 0)
    worst = 0.0
    nonneg = True
    for trial in range(trials):
        m = 1 + trial % 8
        z = rng.normals(2 * m * m)
        mat = (z[0::2] + 1j * z[1::2]).reshape(m, m)
        lc = logabsdet_complex(mat)
        lr = logabsdet_real(realify(mat))
        if lr.sign < 0:
            nonneg = False
        if lc.is_zero or lr.is_zero:
            if lc.is_zero != lr.is_zero:
                nonneg = False
            continue
        worst = max(worst, abs(2.0 * lc.log_modulus - lr.log_modulus))
    return RealifyReport(trials=trials, max_abs_log_dev=worst, nonnegative=nonneg)


# --- square-root-law study ----------------------------------------------------


@dataclass(frozen=True)
class SqrtLawRow:
    n: int
    log_en: float
    log_cn: float
    ratio: float
    lower_bound_ratio: float
    std_error: float  # standard error of log_en (delta method)


def sqrt_law_study(
    n_min: int,
    n_max: int,
    samples: int,
    seed: int,
    streams: int = 1,
    max_n: int = MC_MAX_N,
) -> list[SqrtLawRow]:
    """Per-n comparison of the estimated real-count log with the exact complex log.

    ratio = log(estimated E_n) / log(C_n); the lower-bound column is
    log((2n-3)!!) / log(C_n).  C_n is exact (big integer), its log taken via
    bit length plus the top 64 bits.
    """
    if not 3 <= n_min <= n_max <= max_n:
        raise ValueError("need 3 <= n_min <= n_max <= Monte Carlo cap")
    rows = []
    for n in range(n_min, n_max + 1):
        spec = ProblemSpec(n)
        est = estimate_en(spec, samples, seed, streams, max_n)
        log_en = est.prefactor_log + (est.raw.log_mean or -math.inf)
        log_cn = log_bigint(zagier_cn(n))
        se_log = est.raw.rel_std_error
        rows.append(
            SqrtLawRow(
                n=n,
                log_en=log_en,
                log_cn=log_cn,
                ratio=log_en / log_cn,
                lower_bound_ratio=log_bigint(double_factorial(2 * n - 3)) / log_cn,
                std_error=se_log,
            )
        )
    return rows


def sqrt_law_csv(rows: list[SqrtLawRow]) -> str:
    lines = ["n,log_en,log_cn,ratio,lower_bound_ratio,std_error"]
    for r in rows:
        lines.append(
            f"{r.n},{r.log_en!r},{r.log_cn!r},{r.ratio!r},"
            f"{r.lower_bound_ratio!r},{r.std_error!r}"
        )
    return "\n".join(lines) + "\n"
