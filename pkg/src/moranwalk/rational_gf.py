"""Dense polynomials over Q and power-series coefficients of rational functions.

Coefficients are :class:`fractions.Fraction` throughout. A :class:`RationalGF`
is kept with ``den(0) == 1`` so that coefficients follow from the linear
recurrence ``a_n = num_n - sum_{k>=1} den_k * a_{n-k}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

__all__ = [
    "Polynomial",
    "RationalGF",
    "as_fraction",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_scale",
    "gf_from_fraction",
    "gf_coeff",
    "gf_coeffs_upto",
    "gf_coeffs_scaled_int",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and fraction/decimal strings to an exact Fraction.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient: {x!r}")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in z with exact coefficients; ``coeffs[k]`` multiplies z**k.

    Trailing zeros are stripped on construction, so the zero polynomial has
    ``coeffs == ()`` and ``degree == -1``.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_terms(cls, terms: dict[int, object]) -> "Polynomial":
        """Build from a sparse ``{power: coefficient}`` mapping."""
        if not terms:
            return cls(())
        if min(terms) < 0:
            raise ValueError("negative powers are not polynomial terms")
        cs = [Fraction(0)] * (max(terms) + 1)
        for k, c in terms.items():
            cs[k] += as_fraction(c)
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        # -1 stands in for minus infinity
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __call__(self, z):
        """Horner evaluation; exact for exact ``z``, float for float ``z``."""
        acc = 0 * z
        for c in reversed(self.coeffs):
            acc = acc * z + (c if isinstance(z, (int, Fraction)) else float(c))
        return acc

    def nonzero_terms(self) -> list[tuple[int, Fraction]]:
        return [(k, c) for k, c in enumerate(self.coeffs) if c != 0]

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = [f"{c}*z^{k}" if k else f"{c}" for k, c in self.nonzero_terms()]
        return "Polynomial(" + " + ".join(parts) + ")"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    n = max(len(a.coeffs), len(b.coeffs))
    return Polynomial(tuple(a[k] + b[k] for k in range(n)))


def poly_scale(a: Polynomial, c) -> Polynomial:
    c = as_fraction(c)
    return Polynomial(tuple(c * x for x in a.coeffs))


def poly_sub(a: Polynomial, b: Polynomial) -> Polynomial:
    return poly_add(a, poly_scale(b, -1))


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact convolution product."""
    if a.is_zero() or b.is_zero():
        return Polynomial(())
    out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in a.nonzero_terms():
        for j, y in b.nonzero_terms():
            out[i + j] += x * y
    return Polynomial(tuple(out))


@dataclass(frozen=True)
class RationalGF:
    """``num(z) / den(z)`` expanded as a power series at 0, with ``den(0) == 1``.

    Build through :func:`gf_from_fraction`; the constructor only checks the
    normalization.
    """

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den[0] != 1:
            raise ValueError("RationalGF requires den(0) == 1; use gf_from_fraction")


def gf_from_fraction(num: Polynomial, den: Polynomial) -> RationalGF:
    """Normalize ``num/den`` by den's constant term. No common factors are cancelled."""
    d0 = den[0]
    if d0 == 0:
        raise ValueError("denominator has zero constant term; no power series at z=0")
    inv = 1 / d0
    return RationalGF(poly_scale(num, inv), poly_scale(den, inv))


def gf_coeffs_upto(gf: RationalGF, N: int, mode: str = "exact", scale=1):
    """Coefficients ``[z^0..z^N]`` of ``gf`` in a single recurrence sweep.

    ``mode="exact"`` returns Fractions. ``mode="float"`` runs the same
    recurrence in binary64 and returns floats; ``scale`` then yields the
    coefficients of ``gf(scale*z)``, i.e. ``a_n * scale**n``, which keeps
    geometrically decaying sequences away from underflow for large ``N``.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if mode == "exact":
        s = as_fraction(scale)
        num = [(k, c * s**k) for k, c in gf.num.nonzero_terms() if k <= N]
        den = [(k, c * s**k) for k, c in gf.den.nonzero_terms() if k >= 1]
        zero = Fraction(0)
    elif mode == "float":
        s = float(scale)
        num = [(k, float(c) * s**k) for k, c in gf.num.nonzero_terms() if k <= N]
        den = [(k, float(c) * s**k) for k, c in gf.den.nonzero_terms() if k >= 1]
        zero = 0.0
    else:
        raise ValueError(f"unknown mode {mode!r} (expected 'exact' or 'float')")
    return _sparse_recurrence(num, den, N, zero)


def gf_coeff(gf: RationalGF, n: int) -> Fraction:
    """Exact coefficient of z**n."""
    return gf_coeffs_upto(gf, n)[n]


def gf_coeffs_scaled_int(gf: RationalGF, N: int, scale: int) -> list[int]:
    """Integers ``a_n * scale**n`` for n = 0..N.

    Requires every ``num_k * scale**k`` and ``den_k * scale**k`` to be an
    integer, which holds for walk GFs whose step weights have denominator
    ``scale``. Plain int arithmetic is far cheaper than Fractions here.
    """
    num, den = [], []
    for src, dst, lo in ((gf.num, num, 0), (gf.den, den, 1)):
        for k, c in src.nonzero_terms():
            if k < lo or (dst is num and k > N):
                continue
            v = c * Fraction(scale) ** k
            if v.denominator != 1:
                raise ValueError(f"coefficient of z^{k} is not integral after scaling by {scale}")
            dst.append((k, int(v)))
    return _sparse_recurrence(num, den, N, 0)


def _sparse_recurrence(num: Sequence[tuple[int, object]], den: Iterable[tuple[int, object]], N: int, zero):
    den = list(den)
    a = [zero] * (N + 1)
    for k, c in num:
        a[k] = c
    for m in range(1, N + 1):
        acc = a[m]
        for k, d in den:
            if k > m:
                break
            acc -= d * a[m - k]
        a[m] = acc
    return a
