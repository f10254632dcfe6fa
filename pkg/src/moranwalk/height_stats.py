"""Exact law of the height H_n of an n-step restricted Moran walk.

The law is the normalized one,

    P(H_n <= H) = [z^n] F_{<=H} / [z^n] F,

so the PGF, mean and variance are finite sums over h = 0..n. Exact mode works
with integers ``b**n * [z^n]`` (b the denominator of p) and divides once at the
end. Float mode runs the same recurrences on ``F(eps z)``, whose coefficients
stay O(1) instead of decaying like ``eps**-n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from .asymptotics import epsilon_first
from .moran_gf import ModelParams, bounded_gf, unbounded_gf
from .rational_gf import Polynomial, RationalGF, gf_coeffs_scaled_int, gf_coeffs_upto

__all__ = [
    "EXACT_MAX_N",
    "HeightDistribution",
    "WalkFamily",
    "restricted_family",
    "resolve_mode",
    "height_cdf",
    "height_pmf",
    "height_pgf",
    "height_pgf_polynomial",
    "height_mean",
    "height_variance",
]

Number = Union[Fraction, float]

# largest n for which mode="auto" stays exact
EXACT_MAX_N = 2000
# float mode stops once the tail P(H_n > H) drops below this; later cdf values are 1.0
FLOAT_TAIL_CUTOFF = 1e-17


def resolve_mode(mode: str, n: int, exact_max_n: int = EXACT_MAX_N) -> str:
    if mode == "auto":
        return "exact" if n <= exact_max_n else "float"
    if mode not in ("exact", "float"):
        raise ValueError(f"mode must be 'exact', 'float' or 'auto', got {mode!r}")
    return mode


@dataclass(frozen=True)
class WalkFamily:
    """A bounded-height GF family plus what the two evaluation modes need."""

    name: str
    params: ModelParams
    # identity (and the cdf cache key) is (name, params) only
    bounded: Callable[[int], RationalGF] = field(compare=False)
    unbounded: RationalGF = field(compare=False)
    float_scale: float = field(compare=False)  # float mode evaluates gf(float_scale*z)

    def coeff(self, gf: RationalGF, n: int, mode: str):
        if mode == "exact":
            return gf_coeffs_scaled_int(gf, n, self.params.p.denominator)[n]
        return gf_coeffs_upto(gf, n, mode="float", scale=self.float_scale)[n]


def restricted_family(params: ModelParams) -> WalkFamily:
    return WalkFamily(
        "restricted",
        params,
        lambda H: bounded_gf(params, H),
        unbounded_gf(params),
        epsilon_first(params),
    )


def cdf_table(family: WalkFamily, n: int, mode: str) -> tuple:
    """``P(H_n <= H)`` for H = 0..n under the family's normalized law."""
    return _cdf_table(family, n, mode)


@lru_cache(maxsize=64)
def _cdf_table(family: WalkFamily, n: int, mode: str) -> tuple:
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = family.coeff(family.unbounded, n, mode)
    out = []
    if mode == "exact":
        for H in range(n):
            out.append(Fraction(family.coeff(family.bounded(H), n, mode), total))
        out.append(Fraction(1))
        return tuple(out)
    for H in range(n):
        c = family.coeff(family.bounded(H), n, mode) / total
        out.append(c)
        if 1.0 - c < FLOAT_TAIL_CUTOFF and H > 0:
            out.extend([1.0] * (n - H))
            return tuple(out)
    out.append(1.0)
    return tuple(out)


@dataclass(frozen=True)
class HeightDistribution:
    """``pmf[h] = P(H_n = h)`` for h = 0..n; Fractions in exact mode, floats otherwise."""

    params: ModelParams
    n: int
    pmf: tuple
    mode: str = "exact"
    model: str = "restricted"

    def cdf(self) -> list:
        acc = 0 if self.mode == "exact" else 0.0
        out = []
        for x in self.pmf:
            acc += x
            out.append(acc)
        return out

    def tail_sum_mean(self) -> Number:
        # E[H] = sum_{H>=0} P(H_n > H)
        return sum((1 - c for c in self.cdf()[:-1]), Fraction(0) if self.mode == "exact" else 0.0)

    def moment(self, k: int) -> Number:
        return sum((h**k * x for h, x in enumerate(self.pmf)), Fraction(0) if self.mode == "exact" else 0.0)

    def mean(self) -> Number:
        return self.tail_sum_mean()

    def variance(self) -> Number:
        m = self.mean()
        return self.moment(2) - m * m

    def pgf(self, u):
        """``E[u^H_n]``; exact when u is exact and the pmf is exact."""
        acc = 0 * u
        for x in reversed(self.pmf):
            acc = acc * u + x
        return acc

    def pgf_polynomial(self) -> Polynomial:
        if self.mode != "exact":
            raise ValueError("the PGF polynomial is only available in exact mode")
        return Polynomial(self.pmf)


def distribution_from_cdf(params: ModelParams, n: int, cdf, mode: str, model: str) -> HeightDistribution:
    pmf = [cdf[0]] + [cdf[h] - cdf[h - 1] for h in range(1, len(cdf))]
    return HeightDistribution(params, n, tuple(pmf), mode, model)


def height_cdf(params: ModelParams, n: int, H: int, mode: str = "auto") -> Number:
    """``P(H_n <= H)``; costs one recurrence sweep of length n."""
    if H < 0:
        raise ValueError("H must be nonnegative")
    mode = resolve_mode(mode, n)
    if H >= n:
        return Fraction(1) if mode == "exact" else 1.0
    fam = restricted_family(params)
    num = fam.coeff(fam.bounded(H), n, mode)
    den = fam.coeff(fam.unbounded, n, mode)
    return Fraction(num, den) if mode == "exact" else num / den


def height_pmf(params: ModelParams, n: int, mode: str = "auto") -> HeightDistribution:
    if n < 1:
        raise ValueError("n must be at least 1")
    mode = resolve_mode(mode, n)
    cdf = cdf_table(restricted_family(params), n, mode)
    return distribution_from_cdf(params, n, cdf, mode, "restricted")


def height_pgf(params: ModelParams, n: int, u, mode: str = "auto"):
    return height_pmf(params, n, mode).pgf(u)


def height_pgf_polynomial(params: ModelParams, n: int) -> Polynomial:
    """The PGF as an explicit degree-n polynomial in u with exact coefficients."""
    return height_pmf(params, n, "exact").pgf_polynomial()


def height_mean(params: ModelParams, n: int, mode: str = "auto") -> Number:
    return height_pmf(params, n, mode).mean()


def height_variance(params: ModelParams, n: int, mode: str = "auto") -> Number:
    return height_pmf(params, n, mode).variance()
