"""Exact combinatorics and closed-form constants for line counts.

Everything here is computed in integer / rational arithmetic; floats appear
only at the very last conversion step.  Gamma values at integer and
half-integer arguments are folded symbolically into (rational, power of
sqrt(pi)) pairs so that group and Grassmannian volumes stay exact until the
final multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# ExactRational is plain fractions.Fraction: always lowest terms, positive
# denominator, arbitrary precision.
ExactRational = Fraction

LN2 = math.log(2.0)


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


@dataclass(frozen=True)
class ProblemSpec:
    """Ambient projective dimension n with derived quantities.

    degree d = 2n-3, matrix size D = 2n-2, variable count N = (n-1)(2n-3).
    """

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")

    @property
    def degree(self) -> int:
        return 2 * self.n - 3

    @property
    def matrix_size(self) -> int:
        return 2 * self.n - 2

    @property
    def num_vars(self) -> int:
        return (self.n - 1) * (2 * self.n - 3)


def _as_n(spec) -> int:
    """Accept either an integer n or a ProblemSpec."""
    n = getattr(spec, "n", spec)
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    return int(n)


@dataclass(frozen=True)
class LogScalar:
    """Overflow-safe scalar: sign in {-1, 0, +1} and natural log of |value|."""

    sign: int
    log_magnitude: float

    def __post_init__(self):
        if self.sign == 0 and self.log_magnitude != -math.inf:
            raise ValueError("sign 0 requires log_magnitude -inf")

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    @classmethod
    def from_float(cls, x: float) -> "LogScalar":
        if x == 0.0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))


@dataclass(frozen=True)
class SqrtRational:
    """Exact value a + b*sqrt(2) with rational a, b."""

    a: Fraction
    b: Fraction

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def scale(self, c) -> "SqrtRational":
        c = Fraction(c)
        return SqrtRational(self.a * c, self.b * c)


def binomial(m: int, k: int) -> int:
    """Exact binomial coefficient m!/(k!(m-k)!), requiring 0 <= k <= m."""
    if not 0 <= k <= m:
        raise DomainError(f"binomial requires 0 <= k <= m, got ({m}, {k})")
    return math.comb(m, k)


def double_factorial(m: int) -> int:
    """m!! = m(m-2)(m-4)...1 for odd m >= -1; (-1)!! = 1 (empty product)."""
    if m < -1 or m % 2 == 0:
        raise DomainError(f"double factorial requires odd m >= -1, got {m}")
    return math.prod(range(m, 0, -2))


def rn_signed_count(spec) -> int:
    """Signed count of real lines: (2n-3)!!."""
    n = _as_n(spec)
    return double_factorial(2 * n - 3)


def binomial_product_sqrt(n: int) -> int:
    """Exact integer square root of prod_{k=0}^{2n-3} C(2n-3, k).

    The product is a perfect square because the factors pair up as
    C(d, k) = C(d, d-k); raises if that ever fails.
    """
    d = 2 * n - 3
    prod = math.prod(binomial(d, k) for k in range(d + 1))
    r = math.isqrt(prod)
    if r * r != prod:
        raise ArithmeticError(f"binomial product for n={n} is not a perfect square")
    return r


def prefactor_real(spec) -> Fraction:
    """Exact rational factor relating E|det| to the expected real line count.

    Uses the telescoped factorial form
        (2n-3)^(n-1) * prod_{k=0}^{2n-3} k!  /  ((n-1)! * (2n-3)!^(n-1)),
    in which the half powers of the binomial product cancel in pairs, so no
    square roots are ever taken.
    """
    n = _as_n(spec)
    d = 2 * n - 3
    num = (d ** (n - 1)) * math.prod(math.factorial(k) for k in range(d + 1))
    den = math.factorial(n - 1) * math.factorial(d) ** (n - 1)
    return Fraction(num, den)


def prefactor_complex(spec) -> Fraction:
    """Exact rational factor relating E|det|^2 to the complex line count.

    (2n-3)^(2n-2) / (Gamma(n) Gamma(n+1)) * prod_k C(2n-3, k)^(-1), with the
    binomial product expanded in factorials.
    """
    n = _as_n(spec)
    d = 2 * n - 3
    prod_fact = math.prod(math.factorial(k) for k in range(d + 1))
    num = (d ** (2 * n - 2)) * prod_fact * prod_fact
    den = math.factorial(n - 1) * math.factorial(n) * math.factorial(d) ** (2 * n - 2)
    return Fraction(num, den)


def closed_form_expected_det(spec) -> int:
    """E det of the structured real matrix: (n-1)! * prod_k C(2n-4, 2k-2)."""
    n = _as_n(spec)
    return math.factorial(n - 1) * math.prod(
        binomial(2 * n - 4, 2 * k - 2) for k in range(1, n)
    )


def zagier_cn(spec) -> int:
    """Number of lines on a generic degree-(2n-3) hypersurface in CP^n.

    Coefficient of x^(n-1) in (1-x) * prod_{j=0}^{2n-3} (2n-3-j + j*x),
    computed by naive big-integer polynomial multiplication.
    """
    n = _as_n(spec)
    d = 2 * n - 3
    poly = [1, -1]
    for j in range(d + 1):
        a, b = d - j, j
        out = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            out[i] += c * a
            out[i + 1] += c * b
        poly = out
    return poly[n - 1]


def zagier_asymptotic(spec, log: bool = False):
    """Leading asymptotic sqrt(27/pi) * (2n-3)^(2n - 7/2) for the complex count.

    Evaluated in log space; with log=True returns the natural log itself.
    If exponentiation would overflow, returns a LogScalar instead.
    """
    n = _as_n(spec)
    d = 2 * n - 3
    lg = 0.5 * math.log(27.0 / math.pi) + (2 * n - 3.5) * math.log(d)
    if log:
        return lg
    if lg < 709.0:
        return math.exp(lg)
    return LogScalar(1, lg)


def e3_closed_form() -> SqrtRational:
    """Expected number of real lines on a random cubic surface: 6*sqrt(2) - 3."""
    return SqrtRational(Fraction(-3), Fraction(6))


def e3_abs_det_mean() -> SqrtRational:
    """Mean absolute determinant of the 4x4 cubic-case matrix: 4*sqrt(2) - 2."""
    return SqrtRational(Fraction(-2), Fraction(4))


# --- group and Grassmannian volumes ----------------------------------------
#
# Volumes are carried as (Fraction, h) pairs meaning value = Fraction * pi^(h/2),
# with h an integer, so identities between them can be checked exactly.


def _gamma_half(i: int) -> tuple[Fraction, int]:
    """Gamma(i/2) for integer i >= 1 as (rational, power of sqrt(pi))."""
    if i <= 0:
        raise DomainError(f"Gamma argument must be positive, got {i}/2")
    if i % 2 == 0:
        return Fraction(math.factorial(i // 2 - 1)), 0
    j = (i - 1) // 2
    return Fraction(math.factorial(2 * j), 4**j * math.factorial(j)), 1


def orthogonal_group_volume_exact(k: int) -> tuple[Fraction, int]:
    """|O(k)| = 2^k pi^(k(k+1)/4) / prod_{i=1}^k Gamma(i/2), as (frac, half-pi power)."""
    frac = Fraction(2**k)
    half = k * (k + 1) // 2
    for i in range(1, k + 1):
        g, s = _gamma_half(i)
        frac /= g
        half -= s
    return frac, half


def unitary_group_volume_exact(k: int) -> tuple[Fraction, int]:
    """|U(k)| = 2^k pi^(k(k+1)/2) / prod_{i=1}^{k-1} i!, as (frac, half-pi power)."""
    frac = Fraction(2**k, math.prod(math.factorial(i) for i in range(1, k)))
    return frac, k * (k + 1)


def grassmannian_volume_exact(k: int, m: int, field: str) -> tuple[Fraction, int]:
    """Volume of Gr(k, m) over the given field as (Fraction, half-pi power)."""
    if not 1 <= k < m:
        raise DomainError(f"need 1 <= k < m, got ({k}, {m})")
    if field == "real":
        vol = orthogonal_group_volume_exact
    elif field == "complex":
        vol = unitary_group_volume_exact
    else:
        raise DomainError(f"field must be 'real' or 'complex', got {field!r}")
    ft, ht = vol(m)
    fk, hk = vol(k)
    fc, hc = vol(m - k)
    return ft / (fk * fc), ht - hk - hc


def grassmannian_volume(k: int, m: int, field: str = "real") -> float:
    """Riemannian volume of the Grassmannian of k-planes in m-space."""
    frac, half = grassmannian_volume_exact(k, m, field)
    return float(frac) * math.pi ** (half / 2.0)


# --- logarithms of big integers and fractions -------------------------------


def log_bigint(x: int) -> float:
    """Natural log of a positive big integer via bit length + top 64 bits."""
    if x <= 0:
        raise DomainError("log_bigint requires a positive integer")
    nbits = x.bit_length()
    if nbits <= 64:
        return math.log(x)
    top = x >> (nbits - 64)
    return math.log(top) + (nbits - 64) * LN2


def log_fraction(fr: Fraction) -> float:
    """Natural log of a positive Fraction, safe for huge numerators/denominators."""
    if fr <= 0:
        raise DomainError("log_fraction requires a positive value")
    return log_bigint(fr.numerator) - log_bigint(fr.denominator)


def fraction_to_float(fr: Fraction) -> float:
    """Fraction -> float64 with one correct rounding; +-inf on overflow."""
    try:
        return float(fr)
    except OverflowError:
        return math.inf if fr > 0 else -math.inf
