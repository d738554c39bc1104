from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catnoise.channel import (
    ChannelError,
    DerivedParams,
    NegativeProbability,
    NotNormalized,
    UnknownPreset,
    check_params,
    derive_params,
    preset,
    validate_channel,
)
from catnoise.oracle import apply_channel, build_cat_state


def test_identity_and_uniform_channels_validate():
    assert validate_channel([1, 0, 0, 0]).probs == (1.0, 0.0, 0.0, 0.0)
    assert validate_channel([0.25] * 4).probs == (0.25,) * 4


@pytest.mark.parametrize(
    "raw, exc",
    [
        ([0.5, 0.6, 0, 0], NotNormalized),
        ([1.1, -0.1, 0, 0], NegativeProbability),
        ([0.5, 0.5, 0], ChannelError),
        ([float("nan"), 0, 0, 1], ChannelError),
    ],
)
def test_invalid_channels(raw, exc):
    with pytest.raises(exc):
        validate_channel(raw)


def test_tiny_rounding_is_renormalised():
    ch = validate_channel([0.1] * 3 + [0.7 + 4e-13])
    assert sum(ch.probs) == pytest.approx(1.0, abs=1e-15)
    ch = validate_channel([1.0, -1e-13, 0.0, 0.0])
    assert ch.pi1 == 0.0


@pytest.mark.parametrize(
    "pis, expected",
    [
        ((1, 0, 0, 0), (1, 0, 1, 0)),
        ((0.5, 0, 0, 0.5), (1, 0, 0, 0)),
    ],
)
def test_derive_params_simple(pis, expected):
    p = derive_params(validate_channel(pis))
    assert (p.a, p.b, p.c, p.d) == pytest.approx(expected)


def test_derive_params_against_single_qubit_oracle(depol_09):
    p = derive_params(depol_09)
    exact = [Fraction(28, 30), Fraction(2, 30), Fraction(26, 30), Fraction(0)]
    assert (p.a, p.b, p.c, p.d) == pytest.approx([float(x) for x in exact], abs=1e-15)
    # cross-check: channel on qubit 0 of a Bell pair maps |00><11| to c|00><11| + d|10><01|
    rho = apply_channel(build_cat_state(2), depol_09, 0).entries
    assert rho[0, 3].real == pytest.approx(p.c / 2, abs=1e-15)
    assert rho[2, 1].real == pytest.approx(p.d / 2, abs=1e-15)
    assert rho[0, 0].real == pytest.approx(p.a / 2, abs=1e-15)
    assert rho[2, 2].real == pytest.approx(p.b / 2, abs=1e-15)


@pytest.mark.parametrize(
    "name, strength, expected",
    [
        ("depolarizing", 1.0, (1, 0, 0, 0)),
        ("dephasing", 0.7, (0.7, 0, 0, 0.3)),
        ("depolarizing", 0.4, (0.4, 0.2, 0.2, 0.2)),
    ],
)
def test_presets(name, strength, expected):
    assert preset(name, strength).probs == pytest.approx(expected, abs=1e-15)


def test_preset_errors():
    with pytest.raises(UnknownPreset):
        preset("amplitude-damping", 0.5)
    with pytest.raises(ChannelError):
        preset("dephasing", 1.2)


def test_check_params_rejects_unphysical():
    check_params(DerivedParams(0.7, 0.3, 0.5, -0.2))
    with pytest.raises(ChannelError):
        check_params(DerivedParams(0.7, 0.3, 0.8, 0.0))
    with pytest.raises(NotNormalized):
        check_params(DerivedParams(0.7, 0.4, 0.5, 0.0))


probs = st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda x: sum(x) > 1e-3)


@given(probs)
def test_params_invariants_and_round_trip(raw):
    total = sum(raw)
    ch = validate_channel([x / total for x in raw])
    p = derive_params(ch)
    assert p.a >= 0 and p.b >= 0
    assert abs(p.a + p.b - 1) <= 1e-12
    assert abs(p.c) <= p.a + 1e-15 and abs(p.d) <= p.b + 1e-15
    back = p.to_channel()
    np.testing.assert_allclose(back.probs, ch.probs, atol=1e-15, rtol=0)
    assert derive_params(ch) == p
