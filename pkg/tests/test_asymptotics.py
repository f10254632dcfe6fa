import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moranwalk import ModelParams
from moranwalk.asymptotics import (
    EULER_GAMMA,
    MellinParams,
    RegimeError,
    TailVariant,
    bootstrap,
    coeff_asymptotic_bounded,
    coeff_asymptotic_unbounded,
    den_root_numeric,
    den_value,
    epsilon_first,
    epsilon_refined,
    growth_rate_per_doubling,
    mean_height_sum,
    mellin_direct_sum,
    mellin_main_term,
    mellin_params,
    tail_approx,
    tail_exponential,
)
from moranwalk.moran_gf import binet_roots, bounded_gf, unbounded_gf
from moranwalk.rational_gf import gf_coeff, gf_coeffs_upto

from conftest import P_GRID

SQRT_HALF = math.sqrt(0.5)


def mp_smallest_root(p: F, H: int, dps: int = 60):
    """Independent oracle: smallest positive real zero via mpmath.polyroots."""
    with mpmath.workdps(dps):
        p_, q_ = mpmath.mpf(p.numerator) / p.denominator, 1 - mpmath.mpf(p.numerator) / p.denominator
        coeffs = {0: 1, 1: -p_}
        coeffs[2] = coeffs.get(2, 0) - p_ * q_
        coeffs[H + 2] = coeffs.get(H + 2, 0) + q_ * p_ ** (H + 1)
        while coeffs.get(max(coeffs), 0) == 0:
            del coeffs[max(coeffs)]
        deg = max(coeffs)
        roots = mpmath.polyroots([coeffs.get(k, 0) for k in range(deg, -1, -1)], maxsteps=400, extraprec=4 * dps)
        real = [r.real for r in roots if abs(r.imag) < mpmath.mpf(10) ** (-dps // 3) and r.real > 0]
        return min(real)


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------- first root


def test_epsilon_first_half(half):
    eps = epsilon_first(half)
    assert eps == pytest.approx(math.sqrt(5) - 1, abs=1e-12)
    assert 1 - eps / 2 - eps**2 / 4 == pytest.approx(0, abs=1e-14)
    assert 1 / eps == pytest.approx(0.8090170, abs=1e-7)


@pytest.mark.parametrize("p", P_GRID)
def test_epsilon_first_grid(p):
    params = ModelParams(p)
    pf, qf = float(p), float(1 - p)
    eps = epsilon_first(params)
    b = binet_roots(params)
    assert abs(1 - pf * eps - pf * qf * eps**2) < 1e-14
    assert abs(eps * b.lambda_plus - 1) < 1e-12
    assert abs(pf + 2 * pf * qf * eps - b.sqrt_disc) < 1e-12
    assert eps > 1
    # Vieta on p q z^2 + p z - 1: the other zero is -1/(p q eps)
    other = (-pf - b.sqrt_disc) / (2 * pf * qf)
    assert eps * other == pytest.approx(-1 / (pf * qf), rel=1e-12)


def test_printed_first_root_is_not_a_zero(half):
    # (p + sqrt(p(p+4q)))/(2pq) fails 1 - p z - p q z^2 = 0
    pf, qf = 0.5, 0.5
    printed = (pf + binet_roots(half).sqrt_disc) / (2 * pf * qf)
    assert abs(1 - pf * printed - pf * qf * printed**2) > 1


# ---------------------------------------------------------------- bootstrap


def test_refined_example(half):
    est = bootstrap(half, 3)
    assert est.epsilon_refined == pytest.approx(1.3167, abs=5e-5)
    # 0.894427 * 0.618034**5
    assert est.refined_offset == pytest.approx(0.080650, abs=1e-6)
    assert est.numeric_root == pytest.approx(1.3647, abs=5e-5)
    assert abs(est.epsilon_refined - est.numeric_root) == pytest.approx(0.048, abs=5e-4)
    assert abs(est.epsilon_first - est.numeric_root) == pytest.approx(0.129, abs=5e-4)
    # independent bisection in the z variable: den(1.356) > 0 > den(1.37)
    assert den_value(half, 3, 1.356) > 0 > den_value(half, 3, 1.37)
    root = bisect(lambda z: den_value(half, 3, z), 1.356, 1.37)
    assert est.numeric_root == pytest.approx(root, abs=1e-12)


def test_refined_tends_to_first(half):
    assert epsilon_refined(half, 200) == epsilon_first(half)
    assert bootstrap(half, 200).refined_offset > 0


@given(st.sampled_from(P_GRID), st.integers(0, 60))
def test_refined_strictly_larger(p, H):
    est = bootstrap(ModelParams(p), H)
    assert est.refined_offset > 0
    assert est.epsilon_refined >= est.epsilon_first
    if est.refined_offset > 1e-15 * est.epsilon_first:
        assert est.epsilon_refined > est.epsilon_first


def test_root_at_zero_height(half):
    assert den_root_numeric(half, 0) == pytest.approx(2.0, abs=1e-15)
    assert bootstrap(half, 0).removable


def test_root_at_double_zero():
    # H q == p: 1/p is a double zero and the denominator never changes sign
    est = bootstrap(ModelParams(F(4, 5)), 4)
    assert est.numeric_root == pytest.approx(1.25, abs=1e-15)
    assert est.removable
    assert bootstrap(ModelParams(F(1, 2)), 1).numeric_root == pytest.approx(2.0, abs=1e-15)


def test_root_large_height(half):
    assert abs(den_root_numeric(half, 60) - 1.2360680) < 1e-7
    assert abs(den_root_numeric(half, 60) - epsilon_first(half)) < 1e-9


@pytest.mark.parametrize("p", [F(1, 20), F(1, 4), F(1, 2), F(4, 5), F(19, 20)])
@pytest.mark.parametrize("H", [0, 1, 2, 3, 5, 8, 13, 25])
def test_root_against_polyroots(p, H):
    est = bootstrap(ModelParams(p), H)
    ref = mp_smallest_root(p, H)
    assert abs(est.numeric_root - float(ref)) <= 1e-12 * float(ref)
    assert abs(est.residual) <= 1e-12


@pytest.mark.parametrize("p", [F(1, 20), F(1, 2), F(4, 5)])
@pytest.mark.parametrize("H", [20, 40])
def test_root_offset_relative_precision(p, H):
    # the offset keeps relative precision even when eps + offset rounds to eps
    est = bootstrap(ModelParams(p), H)
    with mpmath.workdps(120):
        ref_offset = mp_smallest_root(p, H, dps=120) - mpmath.mpf(2) / (
            mpmath.mpf(p.numerator) / p.denominator
            + mpmath.sqrt(mpmath.mpf(p.numerator) / p.denominator * (mpmath.mpf(p.numerator) / p.denominator + 4 * (1 - mpmath.mpf(p.numerator) / p.denominator)))
        )
        assert abs(est.root_offset / float(ref_offset) - 1) < 1e-9


def test_convergence_in_H(half):
    errs = [bootstrap(half, H).root_offset for H in range(5, 201)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-9


# ---------------------------------------------------------------- coefficients


def test_unbounded_asymptotic_examples(half):
    # 0.809017**5 / 1.118034 = 0.309980
    assert coeff_asymptotic_unbounded(half, 4) == pytest.approx(0.309980, abs=1e-6)
    assert coeff_asymptotic_unbounded(half, 4) == pytest.approx(((1 + math.sqrt(5)) / 4) ** 5 / math.sqrt(1.25), rel=1e-14)
    assert coeff_asymptotic_unbounded(half, 0) == pytest.approx(0.7236, abs=1e-4)
    exact30 = float(gf_coeff(unbounded_gf(half), 30))
    assert abs(coeff_asymptotic_unbounded(half, 30) / exact30 - 1) < 1e-6


@pytest.mark.parametrize("p", P_GRID)
def test_unbounded_asymptotic_two_forms(p):
    params = ModelParams(p)
    eps = epsilon_first(params)
    pf, qf = float(p), float(1 - p)
    for n in (0, 5, 40):
        other = 1 / (pf * (1 + 2 * eps * qf)) * eps ** (-(n + 1))
        assert coeff_asymptotic_unbounded(params, n) == pytest.approx(other, rel=1e-12)


@pytest.mark.parametrize("p", P_GRID)
def test_unbounded_asymptotic_error_bound(p):
    params = ModelParams(p)
    b = binet_roots(params)
    ratio = abs(b.lambda_minus / b.lambda_plus)
    exact = gf_coeffs_upto(unbounded_gf(params), 80)
    for n in range(10, 81):
        rel = abs(coeff_asymptotic_unbounded(params, n) / float(exact[n]) - 1)
        # plus a binary64 round-off floor once ratio**n is below it
        assert rel <= 2 * ratio**n + 1e-13


def test_bounded_asymptotic(half):
    unb = coeff_asymptotic_unbounded(half, 50)
    assert coeff_asymptotic_bounded(half, 50, 400) == pytest.approx(unb, rel=1e-15)
    val = coeff_asymptotic_bounded(half, 50, 12)
    assert 0 < val < unb
    exact = float(gf_coeff(bounded_gf(half, 12), 50))
    # observed relative gap 0.0084
    assert abs(val / exact - 1) <= 0.05


# ---------------------------------------------------------------- tails


def test_tail_examples(half):
    assert tail_approx(half, 100, 10, TailVariant.PAPER) == pytest.approx(1 - (1 - 1 / 128) ** 100, rel=1e-12)
    assert tail_approx(half, 100, 10, "paper") == pytest.approx(0.54357, abs=1e-5)
    assert tail_approx(half, 100, 10, "corrected") == pytest.approx(0.2014, abs=2e-4)
    assert tail_exponential(half, 100, 10) == pytest.approx(1 - math.exp(-0.78125), rel=1e-14)
    assert tail_exponential(half, 100, 10) == pytest.approx(0.5422, abs=1e-4)


def test_tail_limits(half):
    assert tail_exponential(half, 10, 500) < 1e-70
    assert tail_exponential(half, 10**9, 2) == 1.0
    # the approximations do not vanish for H >= n, unlike the exact law
    from moranwalk.height_stats import height_cdf

    assert height_cdf(half, 5, 5) == 1
    assert 0 < tail_approx(half, 5, 5, "corrected") < 0.25
    assert 0 < tail_approx(half, 5, 5, "paper") < 0.25


@given(st.sampled_from(P_GRID), st.integers(100, 10**6), st.integers(0, 80))
def test_exponential_consistency(p, n, H):
    params = ModelParams(p)
    t = tail_approx(params, n, H, TailVariant.PAPER)
    if 0.05 <= t <= 0.95:
        assert abs(t - tail_exponential(params, n, H)) <= 0.01


@given(st.sampled_from(P_GRID), st.integers(1, 10**6), st.integers(0, 80), st.sampled_from(list(TailVariant)))
def test_tail_in_unit_interval(p, n, H, variant):
    t = tail_approx(ModelParams(p), n, H, variant)
    assert 0 <= t <= 1


def test_regime_guard():
    with pytest.raises(ValueError):
        tail_approx(ModelParams(F(1, 2)), 0, 3)
    with pytest.raises(ValueError):
        TailVariant.parse("sloppy")
    assert issubclass(RegimeError, ArithmeticError)


# ---------------------------------------------------------------- sums and Mellin


def mp_direct(N, w):
    with mpmath.workdps(40):
        return mpmath.nsum(lambda H: -mpmath.expm1(-N * mpmath.mpf(w) ** H), [1, mpmath.inf])


def test_mellin_examples():
    mp = MellinParams(250.0, SQRT_HALF)
    main = mellin_main_term(mp)
    assert main == pytest.approx(17.097, abs=1e-3)
    assert abs(mellin_direct_sum(mp) - main) <= 0.02
    assert mellin_direct_sum(mp) == pytest.approx(float(mp_direct(250, SQRT_HALF)), abs=1e-13)
    # independent summation gives 0.8546; the first four terms alone give 0.7929
    assert mellin_direct_sum(MellinParams(1.0, 0.5)) == pytest.approx(float(mp_direct(1, 0.5)), abs=1e-14)
    assert mellin_direct_sum(MellinParams(1.0, 0.5)) == pytest.approx(0.854613, abs=1e-6)


def test_mellin_small_omega_is_a_step_count():
    mp = MellinParams(1e6, 0.01)
    # H = 1, 2 contribute 1; H = 3 has N omega^H = 1; the rest is ~0.01
    assert mellin_direct_sum(mp) == pytest.approx(math.log(1e6) / math.log(100), abs=0.5)
    assert mellin_direct_sum(mp) == pytest.approx(2 + -math.expm1(-1) + -math.expm1(-0.01), abs=1e-3)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_mellin_main_term_shift(k):
    w = 0.6
    base = mellin_main_term(MellinParams(3.0, w))
    assert mellin_main_term(MellinParams(3.0 * w**-k, w)) == pytest.approx(base + k, abs=1e-12)


def test_mellin_main_term_decomposition(half):
    mp = mellin_params(half, 1000, "paper")
    assert (mp.N, mp.omega) == (250.0, SQRT_HALF)
    leading = -math.log(mp.N) / math.log(mp.omega)
    two_log = -2 * math.log(1000) / math.log(0.5)
    assert two_log == pytest.approx(19.93, abs=5e-3)
    # -2 log_p(p/2)
    const = -2 * math.log(0.25) / math.log(0.5)
    assert leading == pytest.approx(two_log + const, abs=1e-12)
    assert mellin_main_term(mp) == pytest.approx(leading - 0.5 - EULER_GAMMA / math.log(mp.omega), abs=1e-12)


@pytest.mark.parametrize("N", [1e2, 1e3, 1e4, 1e5])
@pytest.mark.parametrize("w", [0.3, 0.5, SQRT_HALF, 0.8])
def test_mellin_agreement(N, w):
    mp = MellinParams(N, w)
    assert abs(mellin_direct_sum(mp) - mellin_main_term(mp)) <= 1e-3


def test_mellin_params_validation(half):
    with pytest.raises(ValueError):
        MellinParams(0.0, 0.5)
    with pytest.raises(ValueError):
        MellinParams(1.0, 1.0)
    assert mellin_params(half, 1000, "corrected").N == 500.0


def test_mean_height_sum_small_n(half):
    s = mean_height_sum(half, 2, "paper")
    assert 0 < s < 10


@pytest.mark.parametrize("n", [100, 1000, 10**5])
def test_mean_height_sum_is_shifted_mellin_sum(half, n):
    # sum over H >= 0 = (H = 0 term) + sum over H >= 1
    mp = mellin_params(half, n, "paper")
    total = mean_height_sum(half, n, TailVariant.PAPER)
    assert abs(total - (-math.expm1(-mp.N) + mellin_direct_sum(mp))) <= 1e-12


def test_mean_height_sum_leading_order(half):
    s = mean_height_sum(half, 1000, "paper")
    assert abs(s - 2 * math.log2(1000)) <= 3


def test_corrected_sum_tracks_exact_mean(half):
    from moranwalk.height_stats import height_mean

    exact = float(height_mean(half, 1000, "float"))
    assert abs(mean_height_sum(half, 1000, "corrected") - exact) < 0.01
    assert abs(mean_height_sum(half, 1000, "paper") - exact) > 4


def test_growth_rates(half):
    assert growth_rate_per_doubling(half, "paper") == pytest.approx(2.0, rel=1e-15)
    assert growth_rate_per_doubling(half, "corrected") == pytest.approx(math.log(2) / math.log((1 + math.sqrt(5)) / 2), rel=1e-12)
