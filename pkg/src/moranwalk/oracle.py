"""Independent ground truth: height-state DP, brute-force enumeration, simulation.

Two walk models:

* ``RESTRICTED``: a reset is never taken at height 0 (the class enumerated by
  the sojourn decomposition). Weights are sub-stochastic; the law of the
  height is the normalized one.
* ``STANDARD``: at height 0 a reset step keeps the walker at 0 with
  probability q. A genuine Markov chain, total weight 1.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .asymptotics import RegimeError
from .height_stats import (
    HeightDistribution,
    WalkFamily,
    cdf_table,
    distribution_from_cdf,
    resolve_mode,
    restricted_family,
)
from .moran_gf import ModelParams
from .rational_gf import Polynomial, RationalGF, gf_from_fraction

log = logging.getLogger(__name__)

__all__ = [
    "WalkModel",
    "SimulationResult",
    "DP_EXACT_MAX_N",
    "ENUMERATION_MAX_N",
    "SIM_CHUNK_SIZE",
    "dp_bounded_weight",
    "dp_total_weight",
    "enumerate_walks",
    "standard_bounded_gf",
    "standard_family",
    "standard_height_pmf",
    "restricted_up_probabilities",
    "simulate",
]

DP_EXACT_MAX_N = 500
ENUMERATION_MAX_N = 20
SIM_CHUNK_SIZE = 1 << 14


class WalkModel(enum.Enum):
    RESTRICTED = "restricted"
    STANDARD = "standard"

    @classmethod
    def parse(cls, value) -> "WalkModel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"model must be 'restricted' or 'standard', got {value!r}") from None


def _dp_weights(params: ModelParams, n: int, H: int, model: WalkModel, exact: bool):
    """Weight vector over heights 0..H after n steps, walks capped at H.

    Exact mode keeps integers scaled by ``b**n`` (b the denominator of p).
    """
    if exact:
        b = params.p.denominator
        up, down = params.p.numerator, b - params.p.numerator
        one = 1
    else:
        up, down = float(params.p), float(params.q)
        one = 1.0
    w = [one] + [0 * one] * H
    for _ in range(n):
        nxt = [0 * one] * (H + 1)
        reset = sum(w[1:], 0 * one) * down
        if model is WalkModel.STANDARD:
            reset += w[0] * down
        nxt[0] = reset
        for h in range(H):
            if w[h]:
                nxt[h + 1] = w[h] * up
        w = nxt
    return w


def dp_bounded_weight(
    params: ModelParams,
    n: int,
    H: int,
    model=WalkModel.RESTRICTED,
    mode: str = "auto",
    exact_max_n: int = DP_EXACT_MAX_N,
) -> Union[Fraction, float]:
    """Total weight of n-step walks of ``model`` whose heights all stay <= H.

    ``mode="auto"`` is exact up to ``exact_max_n`` steps and float beyond; the
    return type (Fraction or float) tells which was used.
    """
    if n < 0 or H < 0:
        raise ValueError("n and H must be nonnegative")
    model = WalkModel.parse(model)
    mode = resolve_mode(mode, n, exact_max_n)
    if mode == "float":
        log.info("dp_bounded_weight: float mode for n=%d", n)
    H_eff = min(H, n)
    w = _dp_weights(params, n, H_eff, model, mode == "exact")
    total = sum(w)
    if mode == "exact":
        return Fraction(total, params.p.denominator ** n)
    return float(total)


def dp_total_weight(params: ModelParams, n: int, model=WalkModel.RESTRICTED, mode: str = "auto", exact_max_n: int = DP_EXACT_MAX_N):
    return dp_bounded_weight(params, n, n, model, mode, exact_max_n)


def enumerate_walks(params: ModelParams, n: int, model=WalkModel.RESTRICTED) -> list[Fraction]:
    """Exact weight of each height 0..n over all 2**n step words."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > ENUMERATION_MAX_N:
        raise ValueError(f"enumeration is limited to n <= {ENUMERATION_MAX_N}, got {n}")
    model = WalkModel.parse(model)
    p, q = params.p, params.q
    hist = [Fraction(0)] * (n + 1)
    for word in itertools.product((True, False), repeat=n):
        h = top = 0
        ups = sum(word)
        valid = True
        for is_up in word:
            if is_up:
                h += 1
                top = max(top, h)
            elif h == 0 and model is WalkModel.RESTRICTED:
                valid = False
                break
            else:
                h = 0
        if valid:
            hist[top] += p**ups * q ** (n - ups)
    return hist


def standard_bounded_gf(params: ModelParams, H: int) -> RationalGF:
    """Standard-model walks with every run of up-steps of length <= H.

    ``S/(1 - q z S)`` with ``S = sum_{k<=H} (p z)^k``, which simplifies to
    ``(1 - (p z)^{H+1}) / (1 - z + q p^{H+1} z^{H+2})``.
    """
    if H < 0:
        raise ValueError("H must be nonnegative")
    p, q = params.p, params.q
    t = p ** (H + 1)
    return gf_from_fraction(
        Polynomial.from_terms({0: 1, H + 1: -t}),
        Polynomial.from_terms({0: 1, 1: -1, H + 2: q * t}),
    )


def standard_family(params: ModelParams) -> WalkFamily:
    return WalkFamily(
        "standard",
        params,
        lambda H: standard_bounded_gf(params, H),
        gf_from_fraction(Polynomial((1,)), Polynomial((1, -1))),
        1.0,
    )


def standard_height_pmf(params: ModelParams, n: int, mode: str = "auto") -> HeightDistribution:
    """Height law of the standard model via :func:`standard_bounded_gf`."""
    if n < 1:
        raise ValueError("n must be at least 1")
    mode = resolve_mode(mode, n)
    cdf = cdf_table(standard_family(params), n, mode)
    return distribution_from_cdf(params, n, cdf, mode, "standard")


def restricted_up_probabilities(params: ModelParams, n: int) -> np.ndarray:
    """``P(up | height >= 1, r steps left)`` for r = 0..n under the restricted law.

    With ``a_r = [z^r] 1/(1 - p z - p q z^2)`` this is ``p a_r / a_{r+1}``; the
    ratio ``t_r = a_{r+1}/a_r`` obeys ``t_r = p + p q / t_{r-1}``, which never
    underflows. Entry 0 is unused.
    """
    p, q = float(params.p), float(params.q)
    t = np.empty(n + 1)
    t[0] = p
    for r in range(1, n + 1):
        t[r] = p + p * q / t[r - 1]
    return p / t


@dataclass(frozen=True)
class SimulationResult:
    """Seeded Monte Carlo histogram of the height.

    ``mean`` and ``variance`` are the exact moments of the empirical histogram
    (variance with divisor ``trials``). ``attempts - trials`` walks were
    rejected (rejection method only). ``acceptance_rate`` is the exact
    probability that an unconditioned walk is a valid restricted walk.
    """

    model: WalkModel
    params: ModelParams
    n: int
    trials: int
    seed: int
    histogram: tuple[int, ...]
    mean: float
    variance: float
    method: str
    attempts: int
    acceptance_rate: float

    @property
    def rejections(self) -> int:
        return self.attempts - self.trials

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.trials)

    def empirical_cdf(self) -> list[float]:
        return list(np.cumsum(self.histogram) / self.trials)


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    # chunk i always gets the same stream, regardless of scheduling
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _simulate_chunk(rng, size, n, p, model, method, up_prob, max_attempts):
    """Return (max heights, attempts) for ``size`` accepted walks."""
    if model is WalkModel.STANDARD or method == "conditioned":
        h = np.zeros(size, dtype=np.int64)
        top = np.zeros(size, dtype=np.int64)
        for step in range(n):
            u = rng.random(size)
            if model is WalkModel.STANDARD:
                go_up = u < p
            else:
                left = n - step
                go_up = (h == 0) | (u < up_prob[left])
            h = np.where(go_up, h + 1, 0)
            np.maximum(top, h, out=top)
        return top, size
    # rejection: unconditioned walk, discard any that resets at height 0
    kept = []
    need, attempts = size, 0
    while need > 0:
        batch = max(need, 256)
        attempts += batch
        if attempts > max_attempts:
            raise RegimeError(
                f"rejection sampling exceeded {max_attempts} attempts; use method='conditioned'"
            )
        h = np.zeros(batch, dtype=np.int64)
        top = np.zeros(batch, dtype=np.int64)
        ok = np.ones(batch, dtype=bool)
        for _ in range(n):
            go_up = rng.random(batch) < p
            ok &= go_up | (h > 0)
            h = np.where(go_up, h + 1, 0)
            np.maximum(top, h, out=top)
        good = top[ok]
        if len(good) > need:
            # attempts beyond the last accepted walk are not charged
            last = np.flatnonzero(ok)[need - 1]
            attempts -= batch - (last + 1)
            good = good[:need]
        kept.append(good)
        need -= len(good)
    return np.concatenate(kept), attempts


def simulate(
    params: ModelParams,
    n: int,
    trials: int,
    seed: int,
    model=WalkModel.RESTRICTED,
    method: str = "conditioned",
    chunk_size: int = SIM_CHUNK_SIZE,
    max_attempts: int = 10**8,
) -> SimulationResult:
    """Simulate ``trials`` walks of length ``n`` and histogram their heights.

    Restricted walks are drawn either by ``method="conditioned"`` (step-wise
    sampling from the exact conditional law; no rejections) or
    ``method="rejection"`` (simulate the unconstrained chain and discard walks
    that reset at height 0; only practical for small n). Output depends only
    on (seed, trials, chunk_size): chunk i uses ``SeedSequence(seed, spawn_key=(i,))``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if method not in ("conditioned", "rejection"):
        raise ValueError(f"method must be 'conditioned' or 'rejection', got {method!r}")
    model = WalkModel.parse(model)
    p = float(params.p)
    up_prob = restricted_up_probabilities(params, n) if model is WalkModel.RESTRICTED else None
    if model is WalkModel.STANDARD:
        method, accept = "direct", 1.0
    else:
        fam = restricted_family(params)
        # [z^n]F = (scaled coefficient) * eps^-n, evaluated in logs
        scaled = fam.coeff(fam.unbounded, n, "float")
        accept = math.exp(math.log(scaled) - n * math.log(fam.float_scale))
    counts = np.zeros(n + 1, dtype=np.int64)
    attempts = 0
    for index, start in enumerate(range(0, trials, chunk_size)):
        size = min(chunk_size, trials - start)
        tops, used = _simulate_chunk(
            _chunk_rng(seed, index), size, n, p, model, method, up_prob, max_attempts - attempts
        )
        attempts += used
        counts += np.bincount(tops, minlength=n + 1)
    hist = tuple(int(c) for c in counts)
    s1 = sum(h * c for h, c in enumerate(hist))
    s2 = sum(h * h * c for h, c in enumerate(hist))
    mean = Fraction(s1, trials)
    var = Fraction(s2, trials) - mean * mean
    return SimulationResult(
        model, params, n, trials, seed, hist, float(mean), float(var), method, attempts, accept
    )
