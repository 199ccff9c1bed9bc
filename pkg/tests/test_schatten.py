import math

import numpy as np
import pytest

from hspec import (
    TruncationSpec,
    assemble_matrix,
    build_report,
    builtin_symbol,
    hilbert_schmidt_direct,
    parse_symbol,
    schatten_norm,
    schatten_sum,
    singular_values,
    spectral_trace,
    trace_formula,
)
from oracles import heat_hs_limit, heat_trace_limit, odd_reciprocal_square_sum


def test_singular_values_diagonal():
    # multiplier singular values are the |m(nu)|
    sv = singular_values(np.diag([1.0, 1 / 3, 1 / 5]))
    assert sv == pytest.approx([1.0, 1 / 3, 1 / 5], rel=1e-15)


def test_singular_values_identity():
    assert singular_values(np.eye(5)).tolist() == [1.0] * 5


def test_singular_values_nilpotent_shift():
    sv = singular_values(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert sv == pytest.approx([1.0, 0.0], abs=1e-15)


def test_singular_values_sorted_nonnegative():
    rng = np.random.default_rng(3)
    sv = singular_values(rng.normal(size=(12, 12)))
    assert np.all(sv >= 0) and np.all(np.diff(sv) <= 0)


def test_singular_values_reject_nonfinite():
    with pytest.raises(ValueError):
        singular_values(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_schatten_norm_identity():
    assert schatten_norm(np.ones(5), 2.0) == pytest.approx(math.sqrt(5), rel=1e-15)


def test_schatten_sum_heat_geometric():
    sv = np.exp(-(2 * np.arange(400) + 1.0))
    assert schatten_sum(sv, 1.0) == pytest.approx(heat_trace_limit(1.0), abs=1e-14)


def test_schatten_partial_harmonic():
    # boundary case sigma p = n: partial sums of 1/(2k+1) keep growing
    sv = 1.0 / (2 * np.arange(1000) + 1.0)
    s_small = schatten_sum(sv[:100], 1.0)
    s_large = schatten_sum(sv, 1.0)
    assert s_large > s_small + 1.0


def test_schatten_order_validation():
    with pytest.raises(ValueError):
        schatten_sum(np.ones(3), 0.0)


def test_frobenius_identity():
    sym = parse_symbol("exp(-absnu/2)/(1+x1^2)", 1)
    m = assemble_matrix(sym, TruncationSpec(1, 15), q=60)
    fro2 = float(np.sum(m.entries**2))
    assert schatten_norm(singular_values(m), 2.0) ** 2 == pytest.approx(fro2, rel=1e-10)


def test_monotone_raw_sums_in_r():
    # for singular values <= 1 the raw sums decrease as r grows
    sv = np.exp(-(2 * np.arange(30) + 1.0))
    sums = [schatten_sum(sv, r) for r in (0.5, 1.0, 1.5, 2.0, 3.0)]
    assert all(a >= b for a, b in zip(sums, sums[1:]))


def test_multiplication_property_holder():
    # Schatten multiplication property via Hoelder on diagonal operators:
    # sum (a b)^r <= (sum a^p)^(r/p) (sum b^q)^(r/q), 1/r = 1/p + 1/q
    rng = np.random.default_rng(5)
    a = rng.uniform(0.01, 2.0, size=50)
    b = rng.uniform(0.01, 2.0, size=50)
    for p, q in [(2.0, 2.0), (4.0, 4.0), (2.0, 6.0)]:
        r = 1.0 / (1.0 / p + 1.0 / q)
        lhs = schatten_sum(a * b, r)
        rhs = schatten_sum(a, p) ** (r / p) * schatten_sum(b, q) ** (r / q)
        assert lhs <= rhs * (1 + 1e-12)


def test_trace_formula_identity_symbol():
    assert trace_formula(parse_symbol("1", 1), TruncationSpec(1, 9)) == pytest.approx(
        10.0, rel=1e-12
    )


def test_trace_formula_heat():
    # geometric series, truncation tail below e^(-61)
    got = trace_formula(builtin_symbol("heat", 1, t=1.0), TruncationSpec(1, 30))
    assert got == pytest.approx(heat_trace_limit(1.0), abs=1e-10)


def test_trace_formula_power_sigma2():
    got = trace_formula(builtin_symbol("power", 1, sigma=2.0), TruncationSpec(1, 10000))
    assert got == pytest.approx(odd_reciprocal_square_sum(), abs=1e-4)


def test_trace_formula_matches_matrix_diagonal():
    sym = parse_symbol("exp(-absnu/2)/(1+x1^2)", 1)
    spec = TruncationSpec(1, 12)
    m = assemble_matrix(sym, spec, q=80)
    assert trace_formula(sym, spec, q=160) == pytest.approx(m.trace(), abs=1e-10)


def test_spectral_trace_diagonal_heat():
    spec = TruncationSpec(1, 30)
    m = assemble_matrix(builtin_symbol("heat", 1, t=1.0), spec)
    assert spectral_trace(m) == pytest.approx(
        trace_formula(builtin_symbol("heat", 1, t=1.0), spec), abs=1e-12
    )


def test_spectral_trace_zero_diagonal():
    m = assemble_matrix(parse_symbol("x1", 1), TruncationSpec(1, 8), q=32)
    assert abs(spectral_trace(m)) < 1e-12


def test_spectral_trace_random_matrix():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(6, 6))
    assert spectral_trace(a) == pytest.approx(float(np.trace(a)), abs=1e-10)


def test_hilbert_schmidt_identity_symbol():
    assert hilbert_schmidt_direct(parse_symbol("1", 1), TruncationSpec(1, 9)) == pytest.approx(
        10.0, rel=1e-12
    )


def test_hilbert_schmidt_heat():
    got = hilbert_schmidt_direct(builtin_symbol("heat", 1, t=1.0), TruncationSpec(1, 40))
    assert got == pytest.approx(heat_hs_limit(1.0), abs=1e-12)


def test_hilbert_schmidt_projection_gap_shrinks():
    sym = parse_symbol("exp(-absnu/2)/(1+x1^2)", 1)

    def gap(level):
        spec = TruncationSpec(1, level)
        m = assemble_matrix(sym, spec, q=120)
        fro2 = float(np.sum(m.entries**2))
        direct = hilbert_schmidt_direct(sym, spec, q=120)
        return abs(fro2 - direct) / direct

    g20, g40 = gap(20), gap(40)
    assert g40 <= g20 / 10.0


def test_build_report_fields():
    report = build_report(builtin_symbol("heat", 1, t=1.0), TruncationSpec(1, 20),
                          r_values=(1.0, 2.0))
    assert report.formula_trace == pytest.approx(heat_trace_limit(1.0), abs=1e-10)
    assert report.matrix_trace == pytest.approx(report.formula_trace, abs=1e-12)
    assert report.schatten_sums[2.0] == pytest.approx(heat_hs_limit(1.0), abs=1e-12)
    assert np.all(np.diff(report.singular_values) <= 0)
    doc = report.to_dict()
    assert doc["level"] == 20 and len(doc["singular_values"]) == 21
