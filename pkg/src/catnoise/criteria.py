"""Entanglement and distillability verdicts for the decohered cat state.

The state is NPPT across a k:(N-k) cut when delta > two_lambda(k). Since
two_lambda(k) strictly decreases in k for a != b, the N//2 cut is the most
robust and the smallest entangled k fixes how many equal groups a cat
state can be distilled into.

None of the formulas assume a >= b or |c| >= |d|; where a derivation
needs that ordering we use hi/lo = max/min(a, b) and big/small =
max/min(|c|, |d|).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from . import algebra
from .algebra import NEG_INF, CutSpec, LogValue
from .channel import DerivedParams

EPS_MARGIN = 1e-10
# a and b closer than this are treated as the a = b case
EQUAL_AB_TOL = 1e-12
INF = float("inf")


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


class DegenerateLogForm(ValueError):
    """The log-rearranged condition is undefined (a = b or c = d = 0)."""


@dataclass(frozen=True)
class CutVerdict:
    cut: CutSpec
    delta: LogValue
    two_lambda: LogValue
    margin: float
    entangled: Verdict


@dataclass(frozen=True)
class PartitionReport:
    n_qubits: int
    min_entangled_k: Optional[int]
    max_M: Optional[int]
    parity_class: str
    fully_separable_flag: bool


@dataclass(frozen=True)
class AsymptoticReport:
    f_threshold: float
    robust_pair_ok: bool
    finite_equals_asymptotic_alpha: Optional[float]
    regime: str


@dataclass(frozen=True)
class FiniteNCondition:
    status: Verdict
    mu: float
    margin: float
    alpha: float
    alpha_star: Optional[float]
    mu_nonnegative_predicted: Optional[bool]


@dataclass(frozen=True)
class GroupSizeLimit:
    """Outcome of following a fixed-k cut as N grows.

    ``status`` is "eventually-fails" (last satisfied N and first N after
    which it never holds again), "immediate-failure" (never satisfied for
    N >= 2k) or "boundary" (max|c,d| equals max(a,b), the limiting
    condition is an equality and the large-N argument does not apply).
    """

    k: int
    status: str
    last_satisfied_n: Optional[int]
    crossover_n: Optional[int]


@dataclass(frozen=True)
class ParityProbe:
    parity_class: str
    n: int
    delta_n: float
    delta_n_plus_1: float
    delta_even: float
    delta_odd: float


def _ordered(x: float, y: float) -> tuple[float, float]:
    return (x, y) if x >= y else (y, x)


def equal_ab(p: DerivedParams) -> bool:
    return abs(p.a - p.b) <= EQUAL_AB_TOL


def log_margin(dl: LogValue, tl: LogValue) -> float:
    """log(delta) - log(two_lambda) with the zero cases spelled out."""
    if dl.sign == 0 and tl.sign == 0:
        return math.nan
    if tl.sign == 0:
        return INF
    if dl.sign == 0:
        return NEG_INF
    return dl.log_magnitude - tl.log_magnitude


def classify_margin(margin: float) -> Verdict:
    if math.isnan(margin):
        # 0 > 0 fails; the state is diagonal in the computational basis
        return Verdict.NO
    if margin > EPS_MARGIN:
        return Verdict.YES
    if margin < -EPS_MARGIN:
        return Verdict.NO
    return Verdict.BOUNDARY


def cut_verdict(p: DerivedParams, cut: CutSpec) -> CutVerdict:
    dl = algebra.delta_log(p, cut.n_qubits)
    tl = algebra.two_lambda_log(p, cut)
    margin = log_margin(dl, tl)
    verdict = Verdict.NO if equal_ab(p) else classify_margin(margin)
    return CutVerdict(cut=cut, delta=dl, two_lambda=tl, margin=margin, entangled=verdict)


def is_yes(p: DerivedParams, n: int, k: int) -> bool:
    return cut_verdict(p, CutSpec(n, k)).entangled is Verdict.YES


def min_entangled_k(p: DerivedParams, n: int) -> Optional[int]:
    """Smallest k whose k:(N-k) cut is entangled, or None.

    The margin grows with k, so a binary search over [1, N//2] is valid;
    the answer is double-checked against its neighbour.
    """
    if n < 2:
        raise algebra.CutError(f"need N >= 2, got {n}")
    top = n // 2
    if equal_ab(p) or not is_yes(p, n, top):
        return None
    lo, hi = 1, top
    while lo < hi:
        mid = (lo + hi) // 2
        if is_yes(p, n, mid):
            hi = mid
        else:
            lo = mid + 1
    if lo > 1 and is_yes(p, n, lo - 1):
        # float noise broke monotonicity; fall back to a scan
        return next(k for k in range(1, top + 1) if is_yes(p, n, k))
    return lo


def max_groups(n: int, k: int) -> int:
    """Largest number of groups when the smallest entangled cut has size k."""
    if n % k == 0:
        return n // k
    return 1 + (n - k) // k


def parity_class(p: DerivedParams) -> str:
    return "opposite-sign" if p.c * p.d < 0 else "same-sign"


def max_distillable_M(p: DerivedParams, n: int) -> PartitionReport:
    k = min_entangled_k(p, n)
    return PartitionReport(
        n_qubits=n,
        min_entangled_k=k,
        max_M=None if k is None else max_groups(n, k),
        parity_class=parity_class(p),
        fully_separable_flag=k is None,
    )


def asymptotic_threshold(p: DerivedParams) -> float:
    """Lower bound on k/N for entanglement as N -> infinity.

    Equals log(a/|c|) / log(a/(1-a)) in the ordering a > b, |c| >= |d|.
    Returns inf when no fraction works (a = b, or c = d = 0).
    """
    hi, lo = _ordered(p.a, p.b)
    big, _ = _ordered(abs(p.c), abs(p.d))
    if equal_ab(p) or big == 0:
        return INF
    if lo == 0:
        return 0.0
    num = math.log(hi) - math.log(big)
    return max(num, 0.0) / (math.log(hi) - math.log(lo))


def asymptotic_condition(p: DerivedParams, alpha: float) -> bool:
    """max|c,d| > lo^alpha * hi^(1-alpha), evaluated in logs."""
    hi, lo = _ordered(p.a, p.b)
    big, _ = _ordered(abs(p.c), abs(p.d))
    if big == 0:
        return False
    if alpha == 0.5:
        return big > math.sqrt(hi * lo)
    rhs = (1 - alpha) * math.log(hi) + (alpha * math.log(lo) if lo > 0 else NEG_INF)
    return math.log(big) > rhs


def robust_pair_ok(p: DerivedParams) -> bool:
    """Large-N condition for the N/2:N/2 cut, c^2 > ab."""
    big, _ = _ordered(abs(p.c), abs(p.d))
    return big * big > p.a * p.b


def finite_equals_asymptotic_alpha(p: DerivedParams) -> Optional[float]:
    """Cut fraction at which the finite-N correction mu vanishes identically."""
    hi, lo = _ordered(p.a, p.b)
    big, small = _ordered(abs(p.c), abs(p.d))
    if small == 0 or lo == 0 or equal_ab(p):
        return None
    return 0.5 * (1 - (math.log(big) - math.log(small)) / (math.log(hi) - math.log(lo)))


def asymptotic_report(p: DerivedParams) -> AsymptoticReport:
    f = asymptotic_threshold(p)
    big, _ = _ordered(abs(p.c), abs(p.d))
    if equal_ab(p):
        regime = "never-entangled"
    elif big == 0:
        regime = "degenerate"
    elif f >= 0.5:
        regime = "never-entangled"
    else:
        regime = "entangled-for-alpha-above-f"
    return AsymptoticReport(
        f_threshold=f,
        robust_pair_ok=robust_pair_ok(p),
        finite_equals_asymptotic_alpha=finite_equals_asymptotic_alpha(p),
        regime=regime,
    )


def asymptotic_max_M(f: float) -> Optional[int]:
    """Largest M with 1/M > f; None means unbounded (f = 0)."""
    if f == 0:
        return None
    if math.isinf(f):
        return 0
    m = math.floor(1 / f)
    if m * f >= 1:
        m -= 1
    return m


def finite_n_condition(p: DerivedParams, cut: CutSpec) -> FiniteNCondition:
    """The cut condition rewritten as log|c| > log(b^alpha a^(1-alpha)) + mu/N.

    mu = log(1 + (lo/hi)^((1-2 alpha) N)) - log(1 +- (small/big)^N), the minus
    sign applying to odd N with c*d < 0. Raises :class:`DegenerateLogForm`
    for a = b or c = d = 0; use :func:`cut_verdict` there.
    """
    n, k = cut.n_qubits, cut.k
    hi, lo = _ordered(p.a, p.b)
    big, small = _ordered(abs(p.c), abs(p.d))
    if equal_ab(p) or big == 0:
        raise DegenerateLogForm(f"log form undefined for {p}")
    alpha = k / n

    lam_tail = (n - 2 * k) * (math.log(lo) - math.log(hi)) if lo > 0 else NEG_INF
    if n - 2 * k == 0:
        lam_tail = 0.0
    lam_term = math.log1p(math.exp(lam_tail))
    ratio = algebra._log_ratio_power(big, small, n)
    if algebra._cancels(p, n):
        coh_term = NEG_INF if small == big else algebra._log1mexp(ratio)
    else:
        coh_term = math.log1p(math.exp(ratio)) if ratio != NEG_INF else 0.0
    mu = lam_term - coh_term

    log_lo = math.log(lo) if lo > 0 else NEG_INF
    base = (n - k) * math.log(hi) + (k * log_lo if lo > 0 else NEG_INF)
    # margin = N * (log big - base/N - mu/N)
    if base == NEG_INF:
        margin = INF if coh_term != NEG_INF else math.nan
    else:
        margin = n * math.log(big) - base - mu
    status = classify_margin(margin)

    a_star = finite_equals_asymptotic_alpha(p)
    predicted = None
    if a_star is not None and not algebra._cancels(p, n):
        predicted = alpha >= a_star
    return FiniteNCondition(
        status=status, mu=mu, margin=margin, alpha=alpha,
        alpha_star=a_star, mu_nonnegative_predicted=predicted,
    )


def fixed_group_size_limit(p: DerivedParams, k: int, n_max: int = 10**7) -> GroupSizeLimit:
    """Follow the k:(N-k) cut for N = 2k, 2k+1, ... until it fails for good.

    With max|c,d| < max(a,b) the condition fails for every
    N >= (log 2 + k log(hi/lo)) / log(hi/big), so a scan up to that bound
    is exhaustive.
    """
    if k < 1:
        raise algebra.CutError(f"need k >= 1, got {k}")
    hi, lo = _ordered(p.a, p.b)
    big, _ = _ordered(abs(p.c), abs(p.d))
    if equal_ab(p):
        return GroupSizeLimit(k, "immediate-failure", None, 2 * k)
    if big >= hi:
        return GroupSizeLimit(k, "boundary", None, None)
    if lo == 0:
        # two_lambda = 0 while delta > 0: never ceases
        return GroupSizeLimit(k, "boundary", None, None)
    bound = math.ceil((math.log(2) + k * (math.log(hi) - math.log(lo)))
                      / (math.log(hi) - math.log(big))) + 1
    bound = max(bound, 2 * k)
    if bound > n_max:
        raise ValueError(f"scan bound {bound} exceeds n_max={n_max}")
    last = None
    for n in range(2 * k, bound + 1):
        if is_yes(p, n, k):
            last = n
    if last is None:
        return GroupSizeLimit(k, "immediate-failure", None, 2 * k)
    return GroupSizeLimit(k, "eventually-fails", last, last + 1)


def parity_probe(p: DerivedParams, n: int) -> ParityProbe:
    even, odd = (n, n + 1) if n % 2 == 0 else (n + 1, n)
    return ParityProbe(
        parity_class=parity_class(p),
        n=n,
        delta_n=algebra.delta(p, n),
        delta_n_plus_1=algebra.delta(p, n + 1),
        delta_even=algebra.delta(p, even),
        delta_odd=algebra.delta(p, odd),
    )


def lemma2_distillable(p: DerivedParams, group_sizes) -> bool:
    """An M-party cat state is distillable iff the smallest group's cut is entangled."""
    sizes = list(group_sizes)
    n = sum(sizes)
    g = min(sizes)
    if len(sizes) < 2 or g < 1:
        raise ValueError(f"need at least two nonempty groups, got {sizes}")
    return is_yes(p, n, min(g, n - g))
