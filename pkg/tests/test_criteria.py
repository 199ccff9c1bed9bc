import math

import numpy as np
import pytest

from hspec import (
    CriterionPreconditionError,
    TruncationSpec,
    builtin_symbol,
    check_hilbert_schmidt,
    check_multiplier_schatten,
    check_sr_sigma,
    check_sr_small,
    check_trace_class_positive,
    classify_tail,
    default_sigma,
    parse_symbol,
    sigma_lower_bound,
)
from oracles import heat_hs_limit, heat_trace_limit, odd_reciprocal_square_sum

HEAT = builtin_symbol("heat", 1, t=1.0)


def test_hs_heat_converges():
    v = check_hilbert_schmidt(HEAT, TruncationSpec(1, 40))
    assert v.tail_flag == "converging"
    assert v.partial_sum == pytest.approx(heat_hs_limit(1.0), abs=1e-12)


def test_hs_identity_diverges():
    v = check_hilbert_schmidt(parse_symbol("1", 1), TruncationSpec(1, 40))
    assert v.tail_flag == "diverging"
    # shell sums are the shell counts: constant 1 in dimension 1
    assert all(s == pytest.approx(1.0, rel=1e-12) for _, s in v.shells)


def test_hs_weak_power_diverges():
    v = check_hilbert_schmidt(builtin_symbol("power", 1, sigma=0.3), TruncationSpec(1, 400))
    assert v.tail_flag == "diverging"
    assert v.extras["fit_slope"] == pytest.approx(-0.6, abs=1e-6)


def test_hs_cross_check_recorded():
    v = check_hilbert_schmidt(parse_symbol("exp(-absnu/2)/(1+x1^2)", 1),
                              TruncationSpec(1, 30), q=100)
    assert "frobenius_squared" in v.extras
    assert v.extras["relative_gap"] < 1e-3


def test_shells_sum_to_partial_sum():
    v = check_hilbert_schmidt(builtin_symbol("heat", 2, t=1.0), TruncationSpec(2, 15))
    assert math.fsum(s for _, s in v.shells) == pytest.approx(v.partial_sum, rel=1e-12)


def test_hs_partial_sums_monotone_in_level():
    sums = [
        check_hilbert_schmidt(HEAT, TruncationSpec(1, n), cross_check=False).partial_sum
        for n in (5, 10, 20, 30)
    ]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_trace_class_heat():
    v = check_trace_class_positive(HEAT, TruncationSpec(1, 30))
    assert v.tail_flag == "converging"
    assert v.partial_sum == pytest.approx(heat_trace_limit(1.0), abs=1e-10)


def test_trace_class_power_sigma1_diverges():
    v = check_trace_class_positive(builtin_symbol("power", 1, sigma=1.0),
                                   TruncationSpec(1, 500))
    assert v.tail_flag == "diverging"


def test_trace_class_power_sigma2_converges():
    v = check_trace_class_positive(builtin_symbol("power", 1, sigma=2.0),
                                   TruncationSpec(1, 2000))
    assert v.tail_flag == "converging"
    assert v.partial_sum == pytest.approx(odd_reciprocal_square_sum(), abs=1e-3)


def test_trace_class_requires_flag():
    sym = parse_symbol("exp(-lam)", 1)  # same values as heat, but flag unset
    with pytest.raises(CriterionPreconditionError, match="positive_selfadjoint"):
        check_trace_class_positive(sym, TruncationSpec(1, 10))


def test_trace_class_refuses_asymmetric():
    sym = parse_symbol("x1 * exp(-absnu)", 1, positive_selfadjoint=True)
    with pytest.raises(CriterionPreconditionError, match="symmetry|positivity"):
        check_trace_class_positive(sym, TruncationSpec(1, 10))


def test_trace_class_refuses_negative_multiplier():
    sym = parse_symbol("-exp(-lam)", 1, positive_selfadjoint=True)
    with pytest.raises(CriterionPreconditionError, match="positivity"):
        check_trace_class_positive(sym, TruncationSpec(1, 10))


def test_trace_class_accepts_verified_quadrature_symbol():
    # x-free in value but assembled through quadrature; symmetry and
    # positivity are verified on the matrix rather than trusted
    sym = parse_symbol("exp(-lam) + 0 * x1", 1, positive_selfadjoint=True)
    assert not sym.is_multiplier
    v = check_trace_class_positive(sym, TruncationSpec(1, 15))
    assert v.tail_flag == "converging"
    assert v.partial_sum == pytest.approx(heat_trace_limit(1.0), abs=1e-10)


def test_sr_small_heat_r1():
    v = check_sr_small(HEAT, TruncationSpec(1, 40), r=1.0)
    assert v.tail_flag == "converging"
    # column integral e^(-2(2k+1)) to the power 1/2 gives the trace series
    assert v.partial_sum == pytest.approx(heat_trace_limit(1.0), abs=1e-12)


def test_sr_small_power_thresholds():
    assert check_sr_small(builtin_symbol("power", 1, sigma=2.0),
                          TruncationSpec(1, 500), r=1.0).tail_flag == "converging"
    assert check_sr_small(builtin_symbol("power", 1, sigma=1.0),
                          TruncationSpec(1, 500), r=1.0).tail_flag == "diverging"


def test_sr_small_range_validation():
    with pytest.raises(ValueError):
        check_sr_small(HEAT, TruncationSpec(1, 10), r=1.5)


def test_sr_sigma_heat():
    v = check_sr_sigma(HEAT, TruncationSpec(1, 40), r=1.5, sigma=1.0)
    assert v.tail_flag == "converging"


def test_sr_sigma_power_weighted_pseries():
    # weight (2k+1)^1 against symbol (2k+1)^(-3) squared: terms (2k+1)^(-5)
    v = check_sr_sigma(builtin_symbol("power", 1, sigma=3.0), TruncationSpec(1, 500),
                       r=1.5, sigma=0.5)
    assert v.tail_flag == "converging"
    assert v.extras["fit_slope"] == pytest.approx(-5.0, abs=1e-6)


def test_sr_sigma_bound_rejection():
    with pytest.raises(CriterionPreconditionError, match="1/6|0.16"):
        check_sr_sigma(HEAT, TruncationSpec(1, 10), r=1.5, sigma=0.1)


def test_sigma_default_inside_region():
    for dim in (1, 2, 3):
        for r in (1.2, 1.5, 1.9):
            assert default_sigma(dim, r) > sigma_lower_bound(dim, r)
    assert sigma_lower_bound(1, 1.5) == pytest.approx(1.0 / 6.0)


def test_multiplier_fast_path_exact():
    # for multipliers the S_r criterion is exactly sum |m(nu)|^r
    spec = TruncationSpec(1, 60)
    v = check_sr_small(HEAT, spec, r=1.0)
    exact = math.fsum(math.exp(-(2 * k + 1.0)) for k in range(61))
    assert v.partial_sum == exact  # bitwise: fsum over identical term lists


def test_multiplier_schatten_any_order():
    spec = TruncationSpec(1, 5000)
    p = builtin_symbol("power", 1, sigma=1.0)
    conv = check_multiplier_schatten(p, spec, r=1.2)
    div = check_multiplier_schatten(p, spec, r=0.9)
    assert conv.tail_flag == "converging"
    assert div.tail_flag == "diverging"
    assert div.extras["growth_exponent"] == pytest.approx(0.1, abs=0.02)


def test_multiplier_schatten_rejects_pseudo():
    sym = parse_symbol("x1 * exp(-absnu)", 1)
    with pytest.raises(CriterionPreconditionError, match="multiplier"):
        check_multiplier_schatten(sym, TruncationSpec(1, 10), r=1.0)


def test_bandlimit_tail_identically_zero():
    v = check_hilbert_schmidt(builtin_symbol("bandlimit", 1, cutoff=3),
                              TruncationSpec(1, 40))
    assert v.tail_flag == "converging"
    assert v.extras["note"] == "tail shells identically zero"
    assert v.partial_sum == pytest.approx(4.0, rel=1e-12)


def test_classify_tail_boundary():
    # exact p-series shells at the harmonic boundary flag divergence
    shells = [(s, (2.0 * s + 1.0) ** -1.0) for s in range(200)]
    assert classify_tail(shells, 1)[0] == "diverging"
    shells = [(s, (2.0 * s + 1.0) ** -1.2) for s in range(200)]
    assert classify_tail(shells, 1)[0] == "converging"
    shells = [(s, (2.0 * s + 1.0) ** -1.1) for s in range(200)]
    assert classify_tail(shells, 1)[0] == "inconclusive"


def test_verdict_reproducibility():
    a = check_hilbert_schmidt(HEAT, TruncationSpec(1, 30))
    b = check_hilbert_schmidt(HEAT, TruncationSpec(1, 30))
    assert a.to_dict() == b.to_dict()


def test_two_dim_heat_criteria():
    v = check_trace_class_positive(builtin_symbol("heat", 2, t=1.0), TruncationSpec(2, 25))
    assert v.tail_flag == "converging"
    # product of two 1-D geometric series
    assert v.partial_sum == pytest.approx(heat_trace_limit(1.0) ** 2, abs=1e-10)
