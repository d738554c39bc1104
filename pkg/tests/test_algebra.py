import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catnoise.algebra import (
    CutError,
    CutSpec,
    LogValue,
    cat_populations,
    count_k_group,
    delta,
    delta_log,
    trace_sum,
    two_lambda,
    two_lambda_log,
)
from catnoise.channel import derive_params, validate_channel
from catnoise.oracle import decohere_all, verify_cat_diagonality

from conftest import params

IDENTITY = params(1, 0, 1, 0)


def test_logvalue_basics():
    assert float(LogValue.from_float(-2.5)) == -2.5
    assert LogValue.from_float(0.0) == LogValue.zero()
    assert float(LogValue.power(-0.5, 3)) == pytest.approx(-0.125)
    assert float(LogValue.from_float(3.0) + LogValue.from_float(-3.0)) == 0.0
    assert float(LogValue.from_float(3.0) + LogValue.from_float(-1.0)) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        LogValue(0, 1.0)


def test_logvalue_survives_underflow():
    lv = LogValue.power(0.5, 5000)
    assert float(lv) == 0.0
    assert lv.log_magnitude == pytest.approx(5000 * math.log(0.5))


def test_cutspec_bounds():
    assert CutSpec(5, 2).alpha == 0.4
    for n, k in [(1, 1), (4, 0), (4, 3), (5, 3)]:
        with pytest.raises(CutError):
            CutSpec(n, k)


@pytest.mark.parametrize(
    "p, n, expected",
    [
        (IDENTITY, 5, 1.0),
        # exact: 0.85^3 - 0.05^3 and 0.85^2 + 0.05^2
        (params(0.9, 0.1, 0.85, -0.05), 3, float(Fraction(85, 100) ** 3 - Fraction(5, 100) ** 3)),
        (params(0.9, 0.1, 0.85, -0.05), 2, float(Fraction(85, 100) ** 2 + Fraction(5, 100) ** 2)),
    ],
)
def test_delta_examples(p, n, expected):
    assert delta(p, n) == pytest.approx(expected, rel=1e-14)
    assert float(delta_log(p, n)) == pytest.approx(expected, rel=1e-13)


def test_delta_frozen_values():
    p = params(0.9, 0.1, 0.85, -0.05)
    assert delta(p, 3) == pytest.approx(0.614, abs=1e-12)
    assert delta(p, 2) == pytest.approx(0.725, abs=1e-12)


def test_two_lambda_examples():
    for n in range(2, 9):
        for k in range(1, n // 2 + 1):
            assert two_lambda(IDENTITY, CutSpec(n, k)) == 0.0
            assert two_lambda_log(IDENTITY, CutSpec(n, k)).sign == 0
    assert two_lambda(params(0.5, 0.5, 0, 0), CutSpec(4, 2)) == pytest.approx(0.125)
    a, b = Fraction(28, 30), Fraction(2, 30)
    exact = float(2 * a**2 * b**2)
    assert exact == pytest.approx(0.0077432, abs=1e-7)
    assert two_lambda(params(28 / 30, 2 / 30, 26 / 30, 0), CutSpec(4, 2)) == pytest.approx(exact, rel=1e-14)


def test_two_lambda_matches_oracle_diagonal(depol_09):
    rho = decohere_all(4, depol_09).entries.real
    p = derive_params(depol_09)
    # |0011> has two zeros; its population is two_lambda / 2
    assert rho[0b0011, 0b0011] == pytest.approx(two_lambda(p, CutSpec(4, 2)) / 2, abs=1e-15)


def test_cat_populations_examples():
    co = cat_populations(IDENTITY, 3, 0)
    assert (co.alpha0_plus, co.alpha0_minus) == (1.0, 0.0)
    # fully mixed two-qubit state: each Bell population is 1/4
    co = cat_populations(params(0.5, 0.5, 0, 0), 2, 1)
    assert co.alpha_k_plus == pytest.approx(0.25)
    assert co.alpha_k_minus == pytest.approx(0.25)
    pops = verify_cat_diagonality(decohere_all(2, validate_channel([0.25] * 4))).populations
    np.testing.assert_allclose(pops, 0.25, atol=1e-15)
    co = cat_populations(params(0.7, 0.3, 0.5, 0.2), 3, 1)
    assert co.alpha_k_plus == pytest.approx(0.140, abs=1e-15)
    assert co.alpha_k_minus == pytest.approx(0.070, abs=1e-15)


def test_cat_populations_match_oracle_populations():
    # a=0.7, b=0.3, c=0.5, d=0.2 <=> pi = (0.6, 0.25, 0.05, 0.1)
    ch = validate_channel([0.6, 0.25, 0.05, 0.1])
    p = derive_params(ch)
    rep = verify_cat_diagonality(decohere_all(3, ch))
    pops = rep.populations
    # cat pair m = 0b011 has one zero (k = 1)
    co = cat_populations(p, 3, 1)
    assert pops[2 * 0b011] == pytest.approx(co.alpha_k_plus, abs=1e-14)
    assert pops[2 * 0b011 + 1] == pytest.approx(co.alpha_k_minus, abs=1e-14)
    co0 = cat_populations(p, 3, 0)
    assert pops[0] == pytest.approx(co0.alpha0_plus, abs=1e-14)
    assert pops[1] == pytest.approx(co0.alpha0_minus, abs=1e-14)


@pytest.mark.parametrize("n, k, expected", [(4, 1, 8), (4, 2, 6), (5, 2, 20)])
def test_count_k_group(n, k, expected):
    assert count_k_group(n, k) == expected


def test_group_counts_cover_basis():
    for n in range(2, 16):
        assert 2 + sum(count_k_group(n, k) for k in range(1, n // 2 + 1)) == 2**n


unit = st.floats(0, 1)


@st.composite
def physical_params(draw):
    a = draw(unit)
    b = 1 - a
    c = draw(st.floats(-1, 1)) * a
    d = draw(st.floats(-1, 1)) * b
    return params(a, b, c, d)


@given(physical_params(), st.integers(2, 30))
def test_trace_identity(p, n):
    assert trace_sum(p, n) == pytest.approx(1.0, abs=1e-10)


@given(physical_params(), st.integers(2, 300))
@settings(max_examples=300)
def test_log_and_linear_agree(p, n):
    lin, lv = delta(p, n), delta_log(p, n)
    if lin > 1e-290:
        assert float(lv) == pytest.approx(lin, rel=1e-9)
    for k in (1, n // 2):
        cut = CutSpec(n, k)
        lin = two_lambda(p, cut)
        if lin > 1e-290:
            assert float(two_lambda_log(p, cut)) == pytest.approx(lin, rel=1e-9)


@given(physical_params(), st.integers(2, 40))
def test_parity_branches(p, n):
    c, d = abs(p.c), abs(p.d)
    if p.c * p.d < 0 and n % 2:
        expected = abs(c**n - d**n)
    else:
        expected = c**n + d**n
    assert delta(p, n) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_cancellation_near_equal_coherences():
    # |c| and |d| differ in the 13th digit, odd N; reference from 50-digit arithmetic
    c, d = 0.4, -(0.4 - 3e-13)
    p = params(0.55, 0.45, c, d)
    mpmath.mp.dps = 50
    for n in (3, 11, 101):
        ref = abs(mpmath.mpf(c) ** n + mpmath.mpf(d) ** n)
        assert delta(p, n) == pytest.approx(float(ref), rel=1e-12)
        assert float(delta_log(p, n)) == pytest.approx(float(ref), rel=1e-12)


def test_exact_cancellation_is_zero():
    p = params(0.5, 0.5, 0.3, -0.3)
    assert delta(p, 5) == 0.0
    assert delta_log(p, 5).sign == 0
    assert delta(p, 4) == pytest.approx(2 * 0.3**4)


def test_populations_independent_of_permutation():
    ch = validate_channel([0.55, 0.2, 0.1, 0.15])
    pops = verify_cat_diagonality(decohere_all(5, ch)).populations
    by_k = {}
    for m in range(16):
        zeros = 5 - bin(m).count("1")
        k = min(zeros, 5 - zeros)
        by_k.setdefault(k, set()).add((round(pops[2 * m], 14), round(pops[2 * m + 1], 14)))
    assert all(len(v) == 1 for v in by_k.values())


def test_b_zero_gives_exact_zero_lambda_in_log_domain():
    p = params(1.0, 0.0, 0.4, 0.0)
    lv = two_lambda_log(p, CutSpec(10**6, 3))
    assert lv.sign == 0 and lv.log_magnitude == -math.inf
    assert not np.isnan(lv.log_magnitude)
