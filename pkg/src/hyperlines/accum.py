"""Exact, mergeable accumulators for Monte Carlo sums.

Sample values arrive as (mantissa, base-2 exponent) pairs, so a value may lie
far outside the float64 range.  Each accumulator keeps the running sum and sum
of squares as *exact* big integers scaled by a power of two.  Consequences:

* merging accumulators is integer addition: merged results are bit-identical
  to a single pass over the concatenated samples, in any merge order;
* the textbook sum-of-squares variance formula is safe, because there is no
  floating-point cancellation anywhere;
* results are independent of thread scheduling and platform.

The only roundings are per-sample (squaring the 53-bit mantissa) and the final
conversion of exact rationals to float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exact import fraction_to_float, log_fraction

_2P53 = 9007199254740992.0  # 2^53
# chunk size keeping sum of 53-bit mantissas inside int64
_CHUNK = 512


class DyadicSum:
    """Exact sum of dyadic rationals: value = acc * 2^base with int acc, base."""

    __slots__ = ("acc", "base")

    def __init__(self, acc: int = 0, base: int = 0):
        self.acc = acc
        self.base = base

    def add_int(self, v: int, e: int) -> None:
        if v == 0:
            return
        if self.acc == 0:
            self.acc, self.base = v, e
        elif e >= self.base:
            self.acc += v << (e - self.base)
        else:
            self.acc = (self.acc << (self.base - e)) + v
            self.base = e

    def add_scaled_batch(self, values: np.ndarray, exps: Optional[np.ndarray] = None) -> None:
        """Add sum of values[i] * 2^exps[i] exactly; values finite float64."""
        fm, fe = np.frexp(values)
        m = (fm * _2P53).astype(np.int64)  # exact: fm has a 53-bit significand
        e = fe.astype(np.int64) - 53
        if exps is not None:
            e = e + exps
        order = np.argsort(e, kind="stable")
        es = e[order]
        ms = m[order]
        cuts = np.nonzero(np.diff(es))[0] + 1
        start = 0
        for stop in [*cuts.tolist(), len(es)]:
            if stop == start:
                continue
            group = ms[start:stop]
            total = 0
            for c0 in range(0, len(group), _CHUNK):
                total += int(group[c0 : c0 + _CHUNK].sum())
            self.add_int(total, int(es[start]))
            start = stop

    def merge(self, other: "DyadicSum") -> None:
        self.add_int(other.acc, other.base)

    def as_fraction(self) -> Fraction:
        if self.base >= 0:
            return Fraction(self.acc << self.base)
        return Fraction(self.acc, 1 << (-self.base))

    def __eq__(self, other) -> bool:
        return isinstance(other, DyadicSum) and self.as_fraction() == other.as_fraction()

    def __repr__(self) -> str:
        return f"DyadicSum(acc={self.acc}, base={self.base})"


class MomentAccumulator:
    """Streaming count / exact sum / exact sum of squares of scaled samples."""

    __slots__ = ("count", "s", "ss")

    def __init__(self):
        self.count = 0
        self.s = DyadicSum()
        self.ss = DyadicSum()

    def ingest_scaled(self, values: np.ndarray, exps: Optional[np.ndarray] = None) -> None:
        """Ingest samples values[i] * 2^exps[i] (exps may be omitted for plain floats)."""
        values = np.asarray(values, dtype=np.float64)
        self.count += values.size
        fm, fe = np.frexp(values)
        e = fe.astype(np.int64)
        if exps is not None:
            e = e + exps
        self.s.add_scaled_batch(fm, e)
        # per-sample square: one rounding in fm*fm, deterministic
        self.ss.add_scaled_batch(fm * fm, 2 * e)

    def merge(self, other: "MomentAccumulator") -> None:
        self.count += other.count
        self.s.merge(other.s)
        self.ss.merge(other.ss)

    # --- exact statistics ---------------------------------------------------

    def mean_fraction(self) -> Fraction:
        if self.count == 0:
            raise ValueError("empty accumulator")
        return self.s.as_fraction() / self.count

    def second_moment_fraction(self) -> Fraction:
        return self.ss.as_fraction() / self.count

    def variance_fraction(self) -> Fraction:
        """Unbiased sample variance, clamped at zero."""
        if self.count < 2:
            raise ValueError("variance needs count > 1")
        s = self.s.as_fraction()
        t = self.ss.as_fraction()
        var = (t - s * s / self.count) / (self.count - 1)
        return var if var > 0 else Fraction(0)


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo estimate with full reproducibility provenance.

    mean/std_error may be +-inf when the exact value exceeds the float64
    range; log_mean (natural log of the mean, when positive) stays finite.
    """

    mean: float
    variance: float
    count: int
    std_error: float
    ci95: tuple[float, float]
    seed: int
    streams: int
    log_mean: Optional[float] = None
    rel_std_error: float = math.nan  # std_error / mean, exact-ratio route
    second_moment: float = 0.0
    backend: str = ""

    def to_record(self) -> dict:
        def _f(x):
            return x if (x is None or math.isfinite(x)) else None

        return {
            "mean": _f(self.mean),
            "variance": _f(self.variance),
            "std_error": _f(self.std_error),
            "ci95": [_f(self.ci95[0]), _f(self.ci95[1])],
            "samples": self.count,
            "seed": self.seed,
            "streams": self.streams,
            "log_mean": _f(self.log_mean) if self.log_mean is not None else None,
            "backend": self.backend,
        }


def estimate_from_accumulator(
    acc: MomentAccumulator, seed: int, streams: int, backend: str = ""
) -> MCEstimate:
    mean_fr = acc.mean_fraction()
    var_fr = acc.variance_fraction()
    mean = fraction_to_float(mean_fr)
    se_sq = fraction_to_float(var_fr / acc.count)
    se = math.sqrt(se_sq) if math.isfinite(se_sq) else math.inf
    log_mean = log_fraction(mean_fr) if mean_fr > 0 else None
    if mean_fr > 0:
        # ratio of two huge exact numbers stays a sane float
        rel = math.sqrt(fraction_to_float(var_fr / (mean_fr * mean_fr * acc.count)))
    else:
        rel = math.nan
    return MCEstimate(
        mean=mean,
        variance=fraction_to_float(var_fr),
        count=acc.count,
        std_error=se,
        ci95=(mean - 1.96 * se, mean + 1.96 * se),
        seed=seed,
        streams=streams,
        log_mean=log_mean,
        rel_std_error=rel,
        second_moment=fraction_to_float(acc.second_moment_fraction()),
        backend=backend,
    )
