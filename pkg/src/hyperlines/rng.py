"""Counter-based random streams and Kostlan coefficient sampling.

Generator
---------
Philox4x64-10 keyed by (seed, stream_id); the 256-bit counter is the block
index.  Distinct (seed, stream_id) pairs are independent keyed streams, and
any block can be produced without sequencing, so worker substreams are
reproducible regardless of thread scheduling.  The implementation is pure
vectorized uint64 numpy and is tested bit-for-bit against an independent
reference implementation of the same cipher.

Normal transform (fixed; do not change without a version bump)
--------------------------------------------------------------
Uniforms: u = (x >> 11) * 2^-53 from each 64-bit word, mapped to (-1, 1) via
2u - 1.  Normals use the Marsaglia polar method: attempt t consumes words
(2t, 2t+1) as (U, V); with s = U^2 + V^2, attempts with 0 < s < 1 are
accepted and yield the pair (U*f, V*f), f = sqrt(-2 ln(s) / s).  Accepted
pairs concatenated in attempt order form the canonical normal sequence of the
stream; batching never changes it.  ln is evaluated by a fixed 13-term atanh
polynomial after frexp reduction, so the whole pipeline uses only IEEE-754
basic operations (+, -, *, /, sqrt) and is bit-stable across platforms and
libm versions.
"""

from __future__ import annotations

import numpy as np

from .exact import ProblemSpec

_U64 = np.uint64
_M0 = _U64(0xD2E7470EE14C6C93)
_M1 = _U64(0xCA5A826395121157)
_W0 = _U64(0x9E3779B97F4A7C15)
_W1 = _U64(0xBB67AE8584CAA73B)
_MASK32 = _U64(0xFFFFFFFF)
_SH32 = _U64(32)
_SH11 = _U64(11)
_2NEG53 = 1.0 / 9007199254740992.0

# split of ln 2 used by the deterministic log
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_SQRT_HALF = 0.7071067811865476


def _mulhilo(a, b):
    lo = a * b
    ah = a >> _SH32
    al = a & _MASK32
    bh = b >> _SH32
    bl = b & _MASK32
    t = ah * bl + ((al * bl) >> _SH32)
    u = al * bh + (t & _MASK32)
    hi = ah * bh + (t >> _SH32) + (u >> _SH32)
    return hi, lo


def _philox_blocks(blocks: np.ndarray, key0: int, key1: int) -> np.ndarray:
    """Run Philox4x64-10 on an array of block indices; returns (len, 4) uint64."""
    c0 = blocks.astype(_U64)
    c1 = np.zeros_like(c0)
    c2 = np.zeros_like(c0)
    c3 = np.zeros_like(c0)
    k0 = np.full_like(c0, _U64(key0))
    k1 = np.full_like(c0, _U64(key1))
    for _ in range(10):
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    return np.stack((c0, c1, c2, c3), axis=1)


def deterministic_log(x: np.ndarray) -> np.ndarray:
    """ln(x) for positive finite x using only IEEE basic operations.

    frexp reduction to [sqrt(1/2), sqrt(2)), then the odd atanh series in
    s = (m-1)/(m+1) truncated at s^25; absolute error is a few 1e-17.
    """
    m, e = np.frexp(x)
    small = m < _SQRT_HALF
    m = np.where(small, m * 2.0, m)
    e = np.where(small, e - 1, e).astype(np.float64)
    s = (m - 1.0) / (m + 1.0)
    z = s * s
    acc = np.zeros_like(m)
    for k in range(12, 0, -1):
        acc = (acc + 1.0 / (2 * k + 1)) * z
    poly = 2.0 * s * (1.0 + acc)
    return e * _LN2_HI + (poly + e * _LN2_LO)


class RngStream:
    """Single-owner reproducible stream of uniforms and standard normals."""

    def __init__(self, seed: int, stream_id: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 <= stream_id < 2**64:
            raise ValueError("stream_id must be a 64-bit unsigned integer")
        self.seed = seed
        self.stream_id = stream_id
        self._next_word = 0  # index into the canonical uint64 sequence
        self._buffer = np.empty(0, dtype=np.float64)  # accepted, undelivered normals

    def raw_uint64(self, count: int) -> np.ndarray:
        """Next `count` words of the canonical uint64 sequence."""
        out = self._words_at(self._next_word, count)
        self._next_word += count
        return out

    def _words_at(self, start: int, count: int) -> np.ndarray:
        first_block = start // 4
        last_block = (start + count + 3) // 4
        blocks = np.arange(first_block, last_block, dtype=np.uint64)
        words = _philox_blocks(blocks, self.seed, self.stream_id).ravel()
        off = start - 4 * first_block
        return words[off : off + count]

    def normals(self, count: int) -> np.ndarray:
        """Next `count` values of the canonical standard-normal sequence."""
        parts = []
        have = len(self._buffer)
        if have:
            take = min(have, count)
            parts.append(self._buffer[:take])
            self._buffer = self._buffer[take:]
            count -= take
        while count > 0:
            attempts = max(64, int(count * 0.7) + 32)
            raw = self.raw_uint64(2 * attempts)
            u01 = (raw >> _SH11).astype(np.float64) * _2NEG53
            uv = 2.0 * u01 - 1.0
            u = uv[0::2]
            v = uv[1::2]
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            if len(s) == 0:
                continue
            t2 = -2.0 * deterministic_log(s)
            f = np.sqrt(t2 / s)
            pair = np.empty(2 * len(s), dtype=np.float64)
            pair[0::2] = u * f
            pair[1::2] = v * f
            take = min(len(pair), count)
            parts.append(pair[:take])
            self._buffer = pair[take:]
            count -= take
        if len(parts) == 1:
            return parts[0]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.float64)

    def standard_normal(self) -> float:
        return float(self.normals(1)[0])


# --- Kostlan coefficient vectors --------------------------------------------


def variance_schedule(spec: ProblemSpec) -> np.ndarray:
    """Entry variances C(2n-4, j-1), j = 1..2n-3; exact in float64 for n <= 30."""
    from math import comb

    n = spec.n
    return np.array([comb(2 * n - 4, j) for j in range(2 * n - 3)], dtype=np.float64)


def real_scales(spec: ProblemSpec) -> np.ndarray:
    return np.sqrt(variance_schedule(spec))


def complex_scales(spec: ProblemSpec) -> np.ndarray:
    # per-component scale sqrt(C(2n-4, j-1) / 2); halving is exact
    return np.sqrt(variance_schedule(spec) * 0.5)


def sample_real_vector(spec: ProblemSpec, rng: RngStream) -> np.ndarray:
    """One coefficient vector, entry j ~ N(0, C(2n-4, j-1))."""
    return rng.normals(spec.degree) * real_scales(spec)


def sample_complex_vector(spec: ProblemSpec, rng: RngStream) -> np.ndarray:
    """One complex vector with E|w_j|^2 = C(2n-4, j-1), parts independent."""
    z = rng.normals(2 * spec.degree)
    s = complex_scales(spec)
    return z[0::2] * s + 1j * (z[1::2] * s)


def sample_real_batch(spec: ProblemSpec, rng: RngStream, count: int) -> np.ndarray:
    """(count, n-1, 2n-3) array of scaled real coefficient vectors."""
    d, nv = spec.degree, spec.n - 1
    z = rng.normals(count * nv * d).reshape(count, nv, d)
    return z * real_scales(spec)


def sample_complex_batch_parts(
    spec: ProblemSpec, rng: RngStream, count: int
) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts, each (count, n-1, 2n-3), of complex vectors."""
    d, nv = spec.degree, spec.n - 1
    z = rng.normals(2 * count * nv * d).reshape(count, nv, d, 2)
    s = complex_scales(spec)
    return z[..., 0] * s, z[..., 1] * s
