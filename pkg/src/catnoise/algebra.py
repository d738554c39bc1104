"""Closed-form cat-basis coefficients of the decohered GHZ state.

After independent Pauli noise the N-qubit state is an X-state: it is
diagonal in the cat basis (|m> +- |m_bar>)/sqrt(2), with populations that
depend only on the number of zeros in m. The two quantities that decide
entanglement across a k:(N-k) cut are

    delta      = |c^N + d^N|
    two_lambda = a^k b^(N-k) + b^k a^(N-k)

Both underflow binary64 long before N becomes interesting, so every
quantity also has a :class:`LogValue` form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import DerivedParams

NEG_INF = float("-inf")


class CutError(ValueError):
    pass


@dataclass(frozen=True)
class LogValue:
    """Signed real stored as sign * exp(log_magnitude)."""

    sign: int
    log_magnitude: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if (self.sign == 0) != (self.log_magnitude == NEG_INF):
            raise ValueError("sign is 0 exactly when log_magnitude is -inf")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0, NEG_INF)

    @classmethod
    def from_float(cls, x: float) -> "LogValue":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def power(cls, x: float, n: int) -> "LogValue":
        """x**n for integer n >= 0 without underflow."""
        if n == 0:
            return cls(1, 0.0)
        if x == 0:
            return cls.zero()
        sign = -1 if (x < 0 and n % 2) else 1
        return cls(sign, n * math.log(abs(x)))

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __add__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        big, small = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        gap = small.log_magnitude - big.log_magnitude  # <= 0
        if big.sign == small.sign:
            return LogValue(big.sign, big.log_magnitude + math.log1p(math.exp(gap)))
        if gap == 0.0:
            return LogValue.zero()
        return LogValue(big.sign, big.log_magnitude + math.log1p(-math.exp(gap)))

    def __abs__(self) -> "LogValue":
        return LogValue(abs(self.sign), self.log_magnitude)


@dataclass(frozen=True)
class CutSpec:
    """Bipartite cut k:(N-k) with 1 <= k <= N // 2."""

    n_qubits: int
    k: int

    def __post_init__(self):
        if self.n_qubits < 2:
            raise CutError(f"need N >= 2, got {self.n_qubits}")
        if not 1 <= self.k <= self.n_qubits // 2:
            raise CutError(f"need 1 <= k <= {self.n_qubits // 2}, got k={self.k}")

    @property
    def alpha(self) -> float:
        return self.k / self.n_qubits


@dataclass(frozen=True)
class CatCoefficients:
    n_qubits: int
    k: int
    delta: float
    two_lambda: float
    alpha0_plus: float
    alpha0_minus: float
    alpha_k_plus: float
    alpha_k_minus: float


def _log1mexp(x: float) -> float:
    """log(1 - exp(x)) for x <= 0."""
    if x > -math.log(2):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


def _ordered_coherences(p: DerivedParams) -> tuple[float, float]:
    c, d = abs(p.c), abs(p.d)
    return (c, d) if c >= d else (d, c)


def _cancels(p: DerivedParams, n: int) -> bool:
    # c^N and d^N have opposite signs
    return p.c * p.d < 0 and n % 2 == 1


def _log_ratio_power(big: float, small: float, n: int) -> float:
    """n * log(small / big) with small <= big, accurate when small ~ big."""
    if small == 0:
        return NEG_INF
    if small < 0.5 * big:
        return n * (math.log(small) - math.log(big))
    return n * math.log1p((small - big) / big)


def delta_log(p: DerivedParams, n: int) -> LogValue:
    """|c^N + d^N| in log domain, cancellation-safe for opposite signs."""
    big, small = _ordered_coherences(p)
    if big == 0:
        return LogValue.zero()
    head = n * math.log(big)
    tail = _log_ratio_power(big, small, n)
    if _cancels(p, n):
        if small == big:
            return LogValue.zero()
        return LogValue(1, head + _log1mexp(tail))
    if tail == NEG_INF:
        return LogValue(1, head)
    return LogValue(1, head + math.log1p(math.exp(tail)))


def delta(p: DerivedParams, n: int) -> float:
    """|c^N + d^N|; odd N with c*d < 0 uses |c|^N * (1 - (|d|/|c|)^N)."""
    if n < 1:
        raise ValueError(f"need N >= 1, got {n}")
    big, small = _ordered_coherences(p)
    if _cancels(p, n):
        if small == big:
            return 0.0
        return big**n * -math.expm1(_log_ratio_power(big, small, n))
    return big**n + small**n


def two_lambda_log(p: DerivedParams, cut: CutSpec) -> LogValue:
    n, k = cut.n_qubits, cut.k
    a, b = LogValue.from_float(p.a), LogValue.from_float(p.b)
    first = _pow(a, k) * _pow(b, n - k)
    second = _pow(b, k) * _pow(a, n - k)
    return first + second


def _pow(x: LogValue, n: int) -> LogValue:
    if x.sign == 0:
        return x if n > 0 else LogValue(1, 0.0)
    return LogValue(1 if x.sign > 0 or n % 2 == 0 else -1, n * x.log_magnitude)


def two_lambda(p: DerivedParams, cut: CutSpec) -> float:
    """a^k b^(N-k) + b^k a^(N-k); the same for every choice of k qubits."""
    n, k = cut.n_qubits, cut.k
    return p.a**k * p.b ** (n - k) + p.b**k * p.a ** (n - k)


def cat_populations(p: DerivedParams, n: int, k: int) -> CatCoefficients:
    """Populations of one cat-basis pair in group k (k = 0 is the |Psi_0> pair).

    The pair sum alpha_k^+ + alpha_k^- equals two_lambda (not half of it):
    with that convention the trace sum_j C(N,j) a^j b^(N-j) is 1.
    """
    if n < 2:
        raise CutError(f"need N >= 2, got {n}")
    if not 0 <= k <= n // 2:
        raise CutError(f"need 0 <= k <= {n // 2}, got {k}")
    a, b, c, d = p.a, p.b, p.c, p.d
    pop0 = a**n + b**n
    coh0 = c**n + d**n
    popk = a**k * b ** (n - k) + b**k * a ** (n - k)
    cohk = c**k * d ** (n - k) + d**k * c ** (n - k)
    return CatCoefficients(
        n_qubits=n,
        k=k,
        delta=abs(coh0),
        two_lambda=popk,
        alpha0_plus=(pop0 + coh0) / 2,
        alpha0_minus=(pop0 - coh0) / 2,
        alpha_k_plus=(popk + cohk) / 2,
        alpha_k_minus=(popk - cohk) / 2,
    )


def count_k_group(n: int, k: int) -> int:
    """Number of cat-basis states in group k."""
    if not 1 <= k <= n // 2:
        raise CutError(f"need 1 <= k <= {n // 2}, got k={k}")
    if n % 2 == 0 and k == n // 2:
        return math.comb(n, k)
    return 2 * math.comb(n, k)


def trace_sum(p: DerivedParams, n: int) -> float:
    """Sum of all cat-basis populations, grouped by k."""
    total = cat_populations(p, n, 0)
    acc = [total.alpha0_plus, total.alpha0_minus]
    for k in range(1, n // 2 + 1):
        co = cat_populations(p, n, k)
        pairs = count_k_group(n, k) // 2
        acc.append(pairs * (co.alpha_k_plus + co.alpha_k_minus))
    return math.fsum(acc)
