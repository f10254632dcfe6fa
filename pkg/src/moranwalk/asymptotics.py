"""Asymptotic chain for the restricted walk: dominant pole, bootstrap, tails, Mellin.

Two constant systems are carried side by side (:class:`TailVariant`):

* ``PAPER`` uses the printed small-p shortcut
  ``c (p eps)^{H+1} ~ p^{(H+2)/2} / 2`` and ``N = p n / 2``.
* ``CORRECTED`` uses ``c = q / sqrt(p(p+4q))`` and ``p eps`` with eps the true
  smallest zero of ``1 - p z - p q z^2``, and ``N = n / 2`` for the Mellin sum.

All quantities are binary64 floats.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .moran_gf import ModelParams, binet_roots

__all__ = [
    "EULER_GAMMA",
    "RegimeError",
    "TailVariant",
    "BootstrapEstimate",
    "MellinParams",
    "epsilon_first",
    "epsilon_refined",
    "refined_correction",
    "den_root_numeric",
    "den_value",
    "bootstrap",
    "coeff_asymptotic_unbounded",
    "coeff_asymptotic_bounded",
    "tail_approx",
    "tail_exponential",
    "mean_height_sum",
    "mellin_params",
    "mellin_direct_sum",
    "mellin_main_term",
    "growth_rate_per_doubling",
]

EULER_GAMMA = 0.57721566490153286061


class RegimeError(ArithmeticError):
    """An asymptotic formula was asked for outside the range where it is defined."""


class TailVariant(enum.Enum):
    PAPER = "paper"
    CORRECTED = "corrected"

    @classmethod
    def parse(cls, value) -> "TailVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"variant must be 'paper' or 'corrected', got {value!r}") from None


def _pq(params: ModelParams) -> tuple[float, float]:
    return float(params.p), float(params.q)


def epsilon_first(params: ModelParams) -> float:
    """Smallest positive zero of ``1 - p z - p q z^2``, i.e. ``1/lambda_plus``."""
    b = binet_roots(params)
    # 2/(p + sd) == (sd - p)/(2pq) without the cancellation
    return 2.0 / (float(params.p) + b.sqrt_disc)


def refined_correction(params: ModelParams, H: int) -> float:
    """``q / (p sqrt(p(p+4q))) * (p eps)^{H+2}``: first-order shift of the pole."""
    if H < 0:
        raise ValueError("H must be nonnegative")
    p, q = _pq(params)
    sd = binet_roots(params).sqrt_disc
    return q / (p * sd) * (p * epsilon_first(params)) ** (H + 2)


def epsilon_refined(params: ModelParams, H: int) -> float:
    return epsilon_first(params) + refined_correction(params, H)


def den_value(params: ModelParams, H: int, z: float) -> float:
    """``1 - p z - p q z^2 + q p^{H+1} z^{H+2}`` in floating point."""
    p, q = _pq(params)
    return 1.0 - p * z - p * q * z * z + q / p * (p * z) ** (H + 2)


@dataclass(frozen=True)
class BootstrapEstimate:
    """Pole estimates for one (p, H).

    The ``*_offset`` fields are the same quantities measured from
    ``epsilon_first``; they keep full relative precision when the shift is far
    below the resolution of ``epsilon_first`` itself (large H).
    """

    params: ModelParams
    H: int
    epsilon_first: float
    epsilon_refined: float
    numeric_root: float
    refined_offset: float
    root_offset: float
    residual: float
    removable: bool = False  # the zero is z = 1/p, which the numerator shares

    @property
    def first_error(self) -> float:
        return self.root_offset

    @property
    def refined_error(self) -> float:
        return abs(self.refined_offset - self.root_offset)


def _shift_equation(params: ModelParams, H: int):
    """g(d) = den(eps + d) expanded around eps, plus its derivative.

    Uses den(eps) = 0 and p + 2 p q eps = sqrt(p(p+4q)) so no term of size
    O(1) is ever subtracted.
    """
    p, q = _pq(params)
    sd = binet_roots(params).sqrt_disc
    eps = epsilon_first(params)

    def g(d: float) -> float:
        return -sd * d - p * q * d * d + q / p * (p * (eps + d)) ** (H + 2)

    def dg(d: float) -> float:
        return -sd - 2 * p * q * d + q * (H + 2) * (p * (eps + d)) ** (H + 1)

    return g, dg, eps


def _root_offset(params: ModelParams, H: int) -> float:
    """Offset from eps of the smallest positive zero of the bounded denominator.

    The denominator factors as ``(1 - p z) D(z)`` with
    ``D(z) = 1 - p q z^2 sum_{k<H} (p z)^k`` strictly decreasing on z > 0, so
    the answer is ``min(1/p, r)`` where r is the unique positive zero of D;
    ``r < 1/p`` exactly when ``H q > p``. r is bracketed and bisected on the sign of D, read off the sign of the
    offset form g = den(eps + d), then polished by Newton on D.
    """
    g, dg, eps = _shift_equation(params, H)
    p = float(params.p)
    if H * params.q <= params.p:
        # D(1/p) = 1 - H q / p >= 0, so D has no zero below 1/p (D == 1 at H = 0)
        return 1.0 / p - eps

    def w(d):
        return 1.0 - p * (eps + d)

    def d_positive(d):
        # sign(D) = sign(g) / sign(1 - p z); at z = 1/p fall back to D itself
        wd = w(d)
        if wd == 0.0:
            z = eps + d
            s = sum((p * z) ** k for k in range(H))
            return 1.0 - p * float(params.q) * z * z * s > 0.0
        return (g(d) > 0.0) == (wd > 0.0)

    lo, hi = 0.0, eps
    while d_positive(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 64.0 * eps:
            raise RegimeError(f"no zero of the denominator found for p={params.p}, H={H}")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= 1e-6 * hi:
            break
        if d_positive(mid):
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    for _ in range(50):
        wd = w(d)
        gd = g(d)
        slope = dg(d) * wd + p * gd
        if wd == 0.0 or slope == 0.0:
            break
        step = gd * wd / slope
        nd = d - step
        if not lo <= nd <= hi:
            break
        d = nd
        if abs(step) <= 1e-13 * max(d, 1e-300):
            break
    return d


def den_root_numeric(params: ModelParams, H: int) -> float:
    """Smallest positive zero of ``den(F_{<=H})`` by bracketed bisection and Newton polish."""
    return bootstrap(params, H).numeric_root


def bootstrap(params: ModelParams, H: int) -> BootstrapEstimate:
    if H < 0:
        raise ValueError("H must be nonnegative")
    eps = epsilon_first(params)
    corr = refined_correction(params, H)
    d = _root_offset(params, H)
    root = eps + d
    residual = den_value(params, H, root)
    if abs(residual) > 1e-12:
        raise RegimeError(f"root polish did not converge: |den(root)| = {abs(residual):.3e}")
    removable = H * params.q <= params.p
    return BootstrapEstimate(params, H, eps, eps + corr, root, corr, d, residual, removable)


def coeff_asymptotic_unbounded(params: ModelParams, n: int) -> float:
    """Leading Binet term ``lambda_plus^{n+1} / sqrt(p(p+4q))``."""
    b = binet_roots(params)
    return b.lambda_plus ** (n + 1) / b.sqrt_disc


def _dominant_prefactor(params: ModelParams) -> float:
    p, q = _pq(params)
    eps = epsilon_first(params)
    return 1.0 / (p * (1.0 + 2.0 * eps * q))


def _tail_base_corrected(params: ModelParams, H: int) -> float:
    # c (p eps)^{H+1}, c = q / sqrt(p(p+4q))
    p, q = _pq(params)
    sd = binet_roots(params).sqrt_disc
    return q / sd * (p * epsilon_first(params)) ** (H + 1)


def coeff_asymptotic_bounded(params: ModelParams, n: int, H: int) -> float:
    """``eps^{-(n+1)} (1 - c (p eps)^{H+1})^n / (p (1 + 2 eps q))``."""
    if n < 0 or H < 0:
        raise ValueError("n and H must be nonnegative")
    a = _tail_base_corrected(params, H)
    if a >= 1.0:
        raise RegimeError(f"1 - c (p eps)^(H+1) = {1 - a:.3g} <= 0 at H={H}")
    eps = epsilon_first(params)
    return _dominant_prefactor(params) * eps ** (-(n + 1)) * (1.0 - a) ** n


def tail_approx(params: ModelParams, n: int, H: int, variant=TailVariant.PAPER) -> float:
    """Approximate ``P(H_n > H)`` as ``1 - (1 - a)^n``."""
    if n < 1 or H < 0:
        raise ValueError("need n >= 1 and H >= 0")
    variant = TailVariant.parse(variant)
    if variant is TailVariant.PAPER:
        a = float(params.p) ** ((H + 2) / 2) / 2
    else:
        a = _tail_base_corrected(params, H)
    if not 0.0 <= a < 1.0:
        raise RegimeError(f"tail base a = {a!r} outside [0, 1) at H={H}")
    return -math.expm1(n * math.log1p(-a))


def tail_exponential(params: ModelParams, n: int, H: int) -> float:
    """``1 - exp(-n p^{1+H/2} / 2)``."""
    if n < 1 or H < 0:
        raise ValueError("need n >= 1 and H >= 0")
    return -math.expm1(-n * float(params.p) ** (1 + H / 2) / 2)


def mean_height_sum(params: ModelParams, n: int, variant=TailVariant.PAPER) -> float:
    """``sum_{H>=0}`` of the approximate tail.

    PAPER sums :func:`tail_exponential`, CORRECTED sums :func:`tail_approx`.
    The sum runs through the first H whose term is below 1e-15, but never
    stops before ``ceil(4 log n / log(1/p))``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    variant = TailVariant.parse(variant)
    p = float(params.p)
    floor = math.ceil(4 * math.log(n) / math.log(1 / p)) if n > 1 else 0
    total = 0.0
    H = 0
    while True:
        if variant is TailVariant.PAPER:
            t = tail_exponential(params, n, H)
        else:
            t = tail_approx(params, n, H, variant)
        total += t
        if t < 1e-15 and H >= floor:
            return total
        H += 1


@dataclass(frozen=True)
class MellinParams:
    """Harmonic sum ``sum_{H>=1} (1 - exp(-N omega^H))``."""

    N: float
    omega: float
    euler_gamma: float = EULER_GAMMA

    def __post_init__(self):
        if not self.N > 0:
            raise ValueError("N must be positive")
        if not 0 < self.omega < 1:
            raise ValueError("omega must lie in (0, 1)")


def mellin_params(params: ModelParams, n: int, variant=TailVariant.PAPER) -> MellinParams:
    """PAPER: ``N = p n / 2``; CORRECTED: ``N = n / 2``. Both use ``omega = sqrt(p)``."""
    variant = TailVariant.parse(variant)
    p = float(params.p)
    N = p * n / 2 if variant is TailVariant.PAPER else n / 2
    return MellinParams(N, math.sqrt(p))


def mellin_direct_sum(mp: MellinParams) -> float:
    N, w = mp.N, mp.omega
    total = 0.0
    H = 1
    # 1 - exp(-x) equals 1 to within 4e-18 for x > 40
    while N * w**H > 40:
        total += 1.0
        H += 1
    while True:
        t = -math.expm1(-N * w**H)
        total += t
        if t < 1e-16:
            return total
        H += 1


def mellin_main_term(mp: MellinParams) -> float:
    """Non-oscillating part from the double pole at s = 0, sign-flipped."""
    L = math.log(mp.omega)
    return -math.log(mp.N) / L - 0.5 - mp.euler_gamma / L


def growth_rate_per_doubling(params: ModelParams, variant=TailVariant.PAPER) -> float:
    """Limit of ``mean(2n) - mean(n)`` implied by each constant system.

    PAPER: ``2 log_{1/p} 2``. CORRECTED: ``log 2 / log(1/(p eps))``.
    """
    variant = TailVariant.parse(variant)
    p = float(params.p)
    if variant is TailVariant.PAPER:
        return 2 * math.log(2) / math.log(1 / p)
    return math.log(2) / -math.log(p * epsilon_first(params))
