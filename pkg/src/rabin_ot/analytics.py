"""Closed-form cheating probabilities, tradeoff relations and comparisons.

Every curve and identity used as a reference by the simulators and the
numerical oracles lives here as a pure function of the protocol knob
``p_question`` (the honest receiver's no-bit probability, cos(2*theta) in
the two-pure-state protocol).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

RESIDUAL_ATOL = 1e-12

# Published cheating probabilities of the stochastic-switching protocol,
# used as fixed comparison constants only.
BANSAL_SIKORA_POINT = (0.933, 0.9691)


class InfeasibleTradeoffError(ValueError):
    """No honest parameter choice realizes the requested cheat pair."""


def _check_probability(p: float, name: str = "p_question") -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return float(p)


def bob_guess_value(p_question: float) -> float:
    """Receiver success when following the protocol and guessing on no-bit."""
    p = _check_probability(p_question)
    return 1.0 - p / 2.0


def bob_cheat_value(p_question: float) -> float:
    """Receiver success under the optimal minimum-error measurement."""
    p = _check_probability(p_question)
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - p * p)))


def alice_guess_value(p_question: float) -> float:
    """Sender success when guessing the more likely of bit / no-bit."""
    p = _check_probability(p_question)
    return max(p, 1.0 - p)


def alice_monitor_value(p_question: float) -> float:
    """Sender success against outcome-frequency monitoring."""
    p = _check_probability(p_question)
    return max((1.0 + p) / 2.0, 1.0 - p)


def entangled_u(p_question: float, a: float) -> float:
    """Distinguishability parameter of the steered bit / no-bit pair."""
    p = _check_probability(p_question)
    if not 0.0 <= a <= 1.0:
        raise ValueError("coefficient a must lie in [0, 1]")
    ab_sq = a * a * (1.0 - a * a)
    value = (1.0 - 2.0 * p) ** 2 - 4.0 * ab_sq * (1.0 - p) * (1.0 - 3.0 * p)
    return math.sqrt(max(0.0, value))


def alice_two_state_value(p_question: float, a: float = 1.0 / math.sqrt(2.0)) -> float:
    """Sender success at guessing bit vs no-bit under full testing."""
    p = _check_probability(p_question)
    return max((1.0 + entangled_u(p, a)) / 2.0, 1.0 - p)


def three_state_srm_bound(p_question: float, a: float = 1.0 / math.sqrt(2.0)) -> float:
    """Square-root-measurement success at guessing no-bit / bit 0 / bit 1.

    A lower bound on the sender's three-outcome cheating probability; for
    small p_question it can fall below the guessing value.
    """
    p = _check_probability(p_question)
    if not 0.0 <= a <= 1.0:
        raise ValueError("coefficient a must lie in [0, 1]")
    ab = a * math.sqrt(max(0.0, 1.0 - a * a))
    ratio = (1.0 - p) / (1.0 + p)
    numerator = (1.0 - p + 2.0 * p * p) * (1.0 + 2.0 * ab * math.sqrt(ratio))
    numerator += p * (6.0 * p * ab * ab * ratio - 1.0)
    denominator = 1.0 + 2.0 * ab * math.sqrt(max(0.0, 1.0 - p * p))
    return numerator / denominator


def alice_three_state_value(p_question: float) -> float:
    """Optimal sender success at the three-outcome objective (a = b).

    The mirror-symmetric optimum 4p^2/(5p-1) applies only above p = 1/3;
    below, the optimum coincides with the guessing value 1 - p.  The two
    branches meet at p = 1/3 where both give 2/3.
    """
    p = _check_probability(p_question)
    if p <= 1.0 / 3.0:
        return 1.0 - p
    return 4.0 * p * p / (5.0 * p - 1.0)


@dataclass(frozen=True)
class CheatCurvePoint:
    p_question: float
    a_guess: float
    a_no_test: float
    a_monitor: float
    a_full_two_state: float
    a_full_three_state: float
    b_guess: float
    b_cheat: float

    def __post_init__(self):
        for name in (
            "a_guess",
            "a_no_test",
            "a_monitor",
            "a_full_two_state",
            "a_full_three_state",
            "b_guess",
            "b_cheat",
        ):
            value = getattr(self, name)
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"{name}={value!r} outside [0, 1]")


def quantum_curves(p_question: float) -> CheatCurvePoint:
    """All seven cheating/guessing curves of the two-pure-state protocol."""
    p = _check_probability(p_question)
    monitor = alice_monitor_value(p)
    return CheatCurvePoint(
        p_question=p,
        a_guess=alice_guess_value(p),
        a_no_test=1.0,
        a_monitor=monitor,
        a_full_two_state=monitor,
        a_full_three_state=alice_three_state_value(p),
        b_guess=bob_guess_value(p),
        b_cheat=bob_cheat_value(p),
    )


def classical_values(s: float, r: float) -> tuple[float, float]:
    """Cheat pair (A, B) of the send-probability / read-probability protocol."""
    _check_probability(s, "s")
    _check_probability(r, "r")
    a_value = 1.0 - r * s if r < 0.5 else 1.0 - s + r * s
    return a_value, (1.0 + s) / 2.0


def feasible_send_range(p_question: float) -> tuple[float, float]:
    """Send-probability interval realizing p_question with r >= 1/2."""
    p = _check_probability(p_question)
    if p >= 1.0:
        raise InfeasibleTradeoffError("p_question = 1 sends nothing; no tradeoff")
    return 1.0 - p, min(1.0, 2.0 * (1.0 - p))


def classical_tradeoff(p_question: float, a_value: float) -> float:
    """Receiver cheat value forced by a sender cheat value, r >= 1/2 regime."""
    p = _check_probability(p_question)
    _check_probability(a_value, "a_value")
    b_value = (3.0 - p - a_value) / 2.0
    s = 2.0 * b_value - 1.0
    lo, hi = feasible_send_range(p)
    if not lo - RESIDUAL_ATOL <= s <= hi + RESIDUAL_ATOL:
        raise InfeasibleTradeoffError(
            f"A={a_value!r} at p_question={p!r} needs send probability {s!r} "
            f"outside [{lo!r}, {hi!r}]"
        )
    r = (1.0 - p) / s if s > 0 else 1.0
    if r < 0.5 - RESIDUAL_ATOL or r > 1.0 + RESIDUAL_ATOL:
        raise InfeasibleTradeoffError(f"derived read probability {r!r} outside [1/2, 1]")
    return b_value


@dataclass(frozen=True)
class TradeoffPoint:
    p_question: float
    a_value: float
    b_value: float
    regime: str  # "r>=1/2" or "r<1/2"
    s: float
    r: float


def classical_segment(p_question: float, step: float = 0.01) -> list[TradeoffPoint]:
    """Feasible (A, B) segment of the classical protocol with r >= 1/2."""
    p = _check_probability(p_question)
    lo, hi = feasible_send_range(p)
    count = max(1, int(round((hi - lo) / step))) if hi > lo else 0
    points = []
    for i in range(count + 1):
        s = min(lo + i * step, hi)
        a_value, b_value = classical_values(s, (1.0 - p) / s if s > 0 else 1.0)
        points.append(
            TradeoffPoint(p, a_value, b_value, "r>=1/2", s, (1.0 - p) / s if s > 0 else 1.0)
        )
        if s >= hi:
            break
    return points


@dataclass(frozen=True)
class CoinFlipCheats:
    a_value: float
    b_value: float
    tradeoff_residual: float


def coin_flip_cheats(y: float, p_question: float) -> CoinFlipCheats:
    """Cheat pair of the protocol mixing the two trivial protocols.

    The residual checks the branch identity A + 2B = 3 - p (low p) or
    p*A + 2(1-p)*B = 1 + (1-p)^2 (high p); it should vanish identically.
    """
    _check_probability(y, "y")
    p = _check_probability(p_question)
    b_value = 1.0 - y * p / 2.0
    if p <= 0.5:
        a_value = 1.0 - p + y * p
        residual = abs(a_value + 2.0 * b_value - (3.0 - p))
    else:
        a_value = p + y * (1.0 - p)
        residual = abs(p * a_value + 2.0 * (1.0 - p) * b_value - (1.0 + (1.0 - p) ** 2))
    return CoinFlipCheats(a_value, b_value, residual)


@dataclass(frozen=True)
class ProtocolComparison:
    verdict: str  # "equal" or "send-read protocol better"
    slack: float


def compare_trivial_mixture(p_question: float) -> ProtocolComparison:
    """Compare the send/read protocol against the trivial-protocol mixture.

    The signed slack (1-2p)(1-p) is the gap between the two protocols'
    combined cheat bounds; it is non-positive above p = 1/2 where the
    send/read protocol wins, and the protocols are equally good below.
    """
    p = _check_probability(p_question)
    slack = (1.0 - 2.0 * p) * (1.0 - p)
    verdict = "equal" if p <= 0.5 else "send-read protocol better"
    return ProtocolComparison(verdict, slack)


@dataclass(frozen=True)
class GeneralizedClassicalResult:
    p_question: float
    a_value: float
    b_value: float
    tradeoff_residual: float


def generalized_classical(branches) -> GeneralizedClassicalResult:
    """Cheat pair of a probabilistic mixture of send/read protocols.

    ``branches`` is a sequence of (weight, s_k, r_k) with weights summing
    to 1 and every r_k >= 1/2 (protocols with r_k < 1/2 favour the
    receiver and would never be agreed to).
    """
    branch_list = [(float(w), float(s), float(r)) for w, s, r in branches]
    if not branch_list:
        raise ValueError("at least one branch required")
    total = sum(w for w, _, _ in branch_list)
    if abs(total - 1.0) > RESIDUAL_ATOL:
        raise ValueError(f"branch weights sum to {total!r}, not 1")
    for w, s, r in branch_list:
        _check_probability(w, "weight")
        _check_probability(s, "s")
        _check_probability(r, "r")
        if r < 0.5:
            raise ValueError(f"branch with r={r!r} < 1/2 is not acceptable")
    a_value = sum(w * (1.0 - s + r * s) for w, s, r in branch_list)
    b_value = 0.5 * (1.0 + sum(w * s for w, s, _ in branch_list))
    p_question = 1.0 - sum(w * r * s for w, s, r in branch_list)
    residual = abs(b_value - 0.5 * (3.0 - p_question - a_value))
    return GeneralizedClassicalResult(p_question, a_value, b_value, residual)


CROSSOVER_BRACKET = (0.34, 0.45)
CROSSOVER_ATOL = 1e-9


def advantage_crossover() -> float:
    """Boundary of the quantum-advantage region, solved numerically.

    Bisects B_quantum(p) = (3 - p - A_quantum(p)) / 2 inside a bracket
    known to contain the simple root (the analytic value is 5/13).
    """

    def gap(p: float) -> float:
        return bob_cheat_value(p) - 0.5 * (3.0 - p - alice_monitor_value(p))

    lo, hi = CROSSOVER_BRACKET
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if g_lo * g_hi > 0:
        raise RuntimeError("crossover bracket does not straddle a sign change")
    while hi - lo > CROSSOVER_ATOL:
        mid = (lo + hi) / 2.0
        if gap(mid) * g_lo <= 0:
            hi = mid
        else:
            lo = mid
            g_lo = gap(lo)
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class ComparisonPoints:
    """Fixed (A, B) reference points at p_question = 1/2."""

    stochastic_switching: tuple[float, float]
    pure_state_protocol: tuple[float, float]
    ideal: tuple[float, float]

    def pure_state_dominates(self) -> bool:
        a_q, b_q = self.pure_state_protocol
        a_s, b_s = self.stochastic_switching
        return a_q <= a_s and b_q <= b_s


def comparison_constants() -> ComparisonPoints:
    return ComparisonPoints(
        stochastic_switching=BANSAL_SIKORA_POINT,
        pure_state_protocol=(alice_monitor_value(0.5), bob_cheat_value(0.5)),
        ideal=(alice_guess_value(0.5), bob_guess_value(0.5)),
    )
