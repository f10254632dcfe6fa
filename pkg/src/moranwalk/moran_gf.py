"""Generating functions of the restricted Moran walk.

Steps go up by one with probability ``p`` or reset to height 0 with
probability ``q = 1 - p``; a reset is never taken at height 0. Decomposing a
walk at its returns to 0 gives sojourns ``u^k d`` (k >= 1) followed by a final
run of up-steps, hence

    F(z)       = 1 / (1 - p z - p q z^2)
    F_{<=H}(z) = (1 - p^{H+1} z^{H+1}) / (1 - p z - p q z^2 + q p^{H+1} z^{H+2}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .rational_gf import Polynomial, RationalGF, as_fraction, gf_from_fraction, poly_add, poly_sub

__all__ = [
    "ModelParams",
    "BinetData",
    "sojourn_gf",
    "sojourn_sequence_gf",
    "unbounded_gf",
    "bounded_gf",
    "binet_roots",
    "binet_coeff",
]


@dataclass(frozen=True)
class ModelParams:
    """Up-step probability ``p`` in (0, 1), held exactly. ``q`` is derived."""

    p: Fraction

    def __post_init__(self):
        p = as_fraction(self.p)
        if not 0 < p < 1:
            raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    @classmethod
    def parse(cls, text: str) -> "ModelParams":
        """Accept ``"1/3"`` or a decimal such as ``"0.3"`` (read as exactly 3/10)."""
        try:
            p = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a fraction or decimal: {text!r}") from exc
        return cls(p)

    def __str__(self):
        return f"p={self.p}"


def sojourn_gf(params: ModelParams) -> RationalGF:
    """One excursion ``u^k d`` with k >= 1: ``p q z^2 / (1 - p z)``."""
    p, q = params.p, params.q
    return gf_from_fraction(Polynomial.from_terms({2: p * q}), Polynomial((1, -p)))


def sojourn_sequence_gf(params: ModelParams) -> RationalGF:
    """``1/(1 - X)`` for the sojourn GF X, built from X's numerator and denominator."""
    x = sojourn_gf(params)
    return gf_from_fraction(x.den, poly_sub(x.den, x.num))


def unbounded_gf(params: ModelParams) -> RationalGF:
    p, q = params.p, params.q
    return gf_from_fraction(Polynomial((1,)), Polynomial((1, -p, -p * q)))


def bounded_gf(params: ModelParams, H: int) -> RationalGF:
    """GF of walks whose ordinates all stay ``<= H``."""
    if H < 0:
        raise ValueError("H must be nonnegative")
    p, q = params.p, params.q
    t = p ** (H + 1)
    num = Polynomial.from_terms({0: 1, H + 1: -t})
    # at H = 0 the z^{H+2} term lands on z^2, so add rather than build one dict
    den = poly_add(Polynomial((1, -p, -p * q)), Polynomial.from_terms({H + 2: q * t}))
    return gf_from_fraction(num, den)


@dataclass(frozen=True)
class BinetData:
    lambda_plus: float
    lambda_minus: float
    sqrt_disc: float


def binet_roots(params: ModelParams) -> BinetData:
    """Roots of ``x^2 - p x - p q``; their reciprocals are the poles of F."""
    p, q = float(params.p), float(params.q)
    sd = math.sqrt(p * (p + 4 * q))
    lam_plus = (p + sd) / 2
    # product form avoids cancellation in p - sd
    lam_minus = -p * q / lam_plus
    return BinetData(lam_plus, lam_minus, sd)


def binet_coeff(params: ModelParams, n: int) -> float:
    """``[z^n] F`` from the two-root closed form."""
    b = binet_roots(params)
    return (b.lambda_plus ** (n + 1) - b.lambda_minus ** (n + 1)) / b.sqrt_disc
