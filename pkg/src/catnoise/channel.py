"""Single-qubit Pauli channel and the four derived parameters (a, b, c, d).

A Pauli channel acts on one qubit as

    rho -> pi0 rho + pi1 X rho X + pi2 Y rho Y + pi3 Z rho Z

and on the cat-state operators |i><j| it only mixes |0><0| with |1><1|
(weights a, b) and |0><1| with |1><0| (weights c, d). Everything downstream
depends on the channel only through those four numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PROB_TOL = 1e-12


class ChannelError(ValueError):
    """Base class for invalid channel input."""


class NegativeProbability(ChannelError):
    pass


class NotNormalized(ChannelError):
    pass


class UnknownPreset(ChannelError):
    pass


@dataclass(frozen=True)
class PauliChannel:
    """Probabilities of I, X, Y, Z errors on a single qubit."""

    pi0: float
    pi1: float
    pi2: float
    pi3: float

    def __post_init__(self):
        probs = self.probs
        if any(p < 0 for p in probs):
            raise NegativeProbability(f"negative probability in {probs}")
        if abs(math.fsum(probs) - 1.0) > PROB_TOL:
            raise NotNormalized(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    @property
    def probs(self) -> tuple[float, float, float, float]:
        return (self.pi0, self.pi1, self.pi2, self.pi3)

    def params(self) -> "DerivedParams":
        return derive_params(self)


@dataclass(frozen=True)
class DerivedParams:
    """Populations (a, b) and coherence weights (c, d) of the channel.

    a + b = 1, |c| <= a and |d| <= b for every physical channel. Instances
    may also be built directly from (a, b, c, d) for analytic work; in that
    case nothing beyond finiteness is checked, use :func:`check_params`.
    """

    a: float
    b: float
    c: float
    d: float

    def to_channel(self) -> PauliChannel:
        """Invert the parametrisation: pi0 = (a+c)/2, pi3 = (a-c)/2, etc."""
        pis = [(self.a + self.c) / 2, (self.b + self.d) / 2,
               (self.b - self.d) / 2, (self.a - self.c) / 2]
        return validate_channel(pis)


def validate_channel(raw) -> PauliChannel:
    """Check four probabilities and return a :class:`PauliChannel`.

    Entries in [-1e-12, 0) are clipped to zero and a sum within 1e-12 of one
    is renormalised, so floating-point sweep grids do not trip validation.
    """
    values = [float(x) for x in raw]
    if len(values) != 4:
        raise ChannelError(f"expected 4 probabilities, got {len(values)}")
    if any(math.isnan(v) or math.isinf(v) for v in values):
        raise ChannelError(f"non-finite probability in {values}")
    for v in values:
        if v < -PROB_TOL:
            raise NegativeProbability(f"probability {v!r} < 0")
    values = [max(v, 0.0) for v in values]
    total = math.fsum(values)
    if abs(total - 1.0) > PROB_TOL:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1")
    if total != 1.0:
        values = [v / total for v in values]
    return PauliChannel(*values)


def derive_params(ch: PauliChannel) -> DerivedParams:
    p0, p1, p2, p3 = ch.probs
    return DerivedParams(a=p0 + p3, b=p1 + p2, c=p0 - p3, d=p1 - p2)


def check_params(p: DerivedParams, tol: float = PROB_TOL) -> None:
    """Raise :class:`ChannelError` unless (a, b, c, d) come from a channel."""
    if p.a < -tol or p.b < -tol:
        raise NegativeProbability(f"a={p.a}, b={p.b} must be >= 0")
    if abs(p.a + p.b - 1.0) > tol:
        raise NotNormalized(f"a + b = {p.a + p.b!r}, not 1")
    if abs(p.c) > p.a + tol or abs(p.d) > p.b + tol:
        raise ChannelError(f"need |c| <= a and |d| <= b, got {p}")


PRESETS = ("depolarizing", "dephasing")


def preset(name: str, strength: float) -> PauliChannel:
    """Named special cases; ``strength`` is the no-error probability pi0."""
    strength = float(strength)
    if not 0.0 <= strength <= 1.0:
        raise ChannelError(f"strength {strength!r} outside [0, 1]")
    if name == "depolarizing":
        rest = (1.0 - strength) / 3.0
        return validate_channel([strength, rest, rest, rest])
    if name == "dephasing":
        return validate_channel([strength, 0.0, 0.0, 1.0 - strength])
    raise UnknownPreset(f"unknown preset {name!r}; choose from {PRESETS}")
