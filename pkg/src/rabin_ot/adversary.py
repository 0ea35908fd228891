"""Executable cheating strategies for both parties.

Each strategy comes in two forms: a closed-form success value (delegated
to :mod:`rabin_ot.analytics`) and a vectorized round simulator that plays
the actual protocol, used by the Monte Carlo estimator.  The registry at
the bottom names every (protocol, strategy) pair the toolkit can run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytics, protocols, qmath
from .protocols import ClassicalParams, ProtocolParams, RoundOutcome
from .qmath import BipartiteState, Povm

ALICE_KINDS = ("honest", "guess_only", "send_one", "monitored_mixture", "entangled_cheat")
BOB_KINDS = ("honest_usd", "guess_unknown", "helstrom_cheat")
OBJECTIVES = ("two_outcome", "three_outcome")

CERTAINTY_ATOL = 1e-15

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class AliceStrategy:
    kind: str
    x: float | None = None  # monitored mixture weight on |0>
    a: float | None = None  # entangled coefficient, b = sqrt(1 - a^2)
    objective: str = "two_outcome"
    alternate: bool = False  # swap (a, b) on odd rounds

    def __post_init__(self):
        if self.kind not in ALICE_KINDS:
            raise ValueError(f"unknown Alice strategy kind {self.kind!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.x is not None and not 0.0 <= self.x <= 1.0:
            raise ValueError("mixture weight x must lie in [0, 1]")
        if self.a is not None and not 0.0 <= self.a <= 1.0:
            raise ValueError("coefficient a must lie in [0, 1]")


@dataclass(frozen=True)
class BobStrategy:
    kind: str

    def __post_init__(self):
        if self.kind not in BOB_KINDS:
            raise ValueError(f"unknown Bob strategy kind {self.kind!r}")


@dataclass(frozen=True)
class StrategyProfile:
    alice: AliceStrategy
    bob: BobStrategy


@dataclass(frozen=True)
class CheatReport:
    success_probability: float
    certainty_fraction: float
    method: str  # "exact" or "monte-carlo"
    ci99: float | None = None
    rounds: int | None = None
    certainty_events: int | None = None
    notes: str = ""

    def __post_init__(self):
        if not 0.0 <= self.success_probability <= 1.0:
            raise ValueError("success probability outside [0, 1]")
        if (self.method == "monte-carlo") != (self.ci99 is not None):
            raise ValueError("ci99 present iff method is monte-carlo")


# ---------------------------------------------------------------------------
# Bob's strategies


def bob_guess_rule(outcome: RoundOutcome, rng: np.random.Generator) -> int:
    """Report the received bit; flip a fair coin on no-bit."""
    if outcome == RoundOutcome.BIT0:
        return 0
    if outcome == RoundOutcome.BIT1:
        return 1
    return int(rng.random() >= 0.5)


def bob_helstrom_cheat(theta: float) -> tuple[Povm, float]:
    """Minimum-error measurement between the two honest states.

    Projective measurement in the eigenbasis of the state difference;
    the positive-eigenvalue projector is the bit-0 guess.
    """
    psi0, psi1 = protocols.honest_states(theta)
    difference = (qmath.density(psi0) - qmath.density(psi1)) / 2.0
    eigenvalues, vectors = np.linalg.eigh(difference)
    guess1 = np.outer(vectors[:, 0], vectors[:, 0].conj())
    guess0 = np.outer(vectors[:, 1], vectors[:, 1].conj())
    del eigenvalues  # ordering is ascending, so column 1 is the positive branch
    povm = Povm(("Bit0", "Bit1"), (guess0, guess1))
    p = math.cos(2.0 * theta)
    return povm, analytics.bob_cheat_value(p)


# ---------------------------------------------------------------------------
# Alice's strategies

GUESS_BIT = "Bit"
GUESS_NO_BIT = "NoBit"


def alice_guess_rule(p_question: float) -> tuple[str, float]:
    """Guess the more likely of bit / no-bit; ties go to no-bit."""
    guess = GUESS_NO_BIT if p_question >= 0.5 else GUESS_BIT
    return guess, analytics.alice_guess_value(p_question)


def alice_no_testing_cheat() -> tuple[np.ndarray, CheatReport]:
    """Send the state orthogonal to the inconclusive element."""
    state = np.array([0.0, 1.0], dtype=complex)
    report = CheatReport(
        success_probability=1.0,
        certainty_fraction=1.0,
        method="exact",
        notes="receiver always gets a bit value; sender learns nothing about which",
    )
    return state, report


@dataclass(frozen=True)
class MonitoringCheat:
    """Statistical mixture of |0> and |1> that reproduces honest statistics."""

    weight_on_zero: float
    guess_no_bit_after_zero: bool
    success_probability: float
    certainty_fraction: float

    def guess(self, sent_zero: bool) -> str:
        if not sent_zero:
            return GUESS_BIT
        return GUESS_NO_BIT if self.guess_no_bit_after_zero else GUESS_BIT


def alice_monitoring_cheat(p_question: float) -> MonitoringCheat:
    """Optimal sender cheat when the receiver monitors outcome frequencies.

    Sends |0> with weight (1 + p)/2 (which keeps the no-bit frequency at
    p) and |1> otherwise; after |1> the receiver certainly gets a bit.
    """
    if not 0.0 <= p_question <= 1.0:
        raise ValueError("p_question must lie in [0, 1]")
    weight = (1.0 + p_question) / 2.0
    return MonitoringCheat(
        weight_on_zero=weight,
        guess_no_bit_after_zero=p_question >= 1.0 / 3.0,
        success_probability=analytics.alice_monitor_value(p_question),
        certainty_fraction=1.0 - weight,
    )


def cheat_state(theta: float, a: float, swap: bool = False) -> BipartiteState:
    """Entangled preparation a|0>|psi0> + b|1>|psi1| (optionally swapped)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("coefficient a must lie in [0, 1]")
    b = math.sqrt(max(0.0, 1.0 - a * a))
    if swap:
        a, b = b, a
    psi0, psi1 = protocols.honest_states(theta)
    amplitudes = np.concatenate([a * psi0, b * psi1])
    return BipartiteState(amplitudes)


def rho_no_bit(a: float) -> np.ndarray:
    """Sender-side state conditioned on the inconclusive outcome."""
    b = math.sqrt(max(0.0, 1.0 - a * a))
    return np.array([[a * a, a * b], [a * b, b * b]], dtype=complex)


def rho_bit(a: float) -> np.ndarray:
    """Sender-side state conditioned on any conclusive outcome."""
    b = math.sqrt(max(0.0, 1.0 - a * a))
    return np.diag([a * a, b * b]).astype(complex)


def _positive_projector_povm(weighted_difference: np.ndarray, labels) -> Povm:
    """Two-outcome measurement: positive eigenspace vs the rest."""
    eigenvalues, vectors = np.linalg.eigh(weighted_difference)
    dim = weighted_difference.shape[0]
    positive = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        if eigenvalues[idx] > 0:
            positive += np.outer(vectors[:, idx], vectors[:, idx].conj())
    return Povm(tuple(labels), (positive, np.eye(dim) - positive))


@dataclass(frozen=True)
class EntangledCheat:
    state: BipartiteState
    measurement: Povm  # sender-side bit / no-bit discrimination
    success_probability: float


def alice_entangled_cheat(p_question: float, a: float = INV_SQRT2) -> EntangledCheat:
    """Optimal bit/no-bit guess after full testing, via steering.

    The sender keeps one qubit of the entangled preparation and applies
    the minimum-error measurement between her two conditional states with
    priors (p, 1 - p).
    """
    params = ProtocolParams.from_p_question(p_question)
    state = cheat_state(params.theta, a)
    weighted = p_question * rho_no_bit(a) - (1.0 - p_question) * rho_bit(a)
    measurement = _positive_projector_povm(weighted, (GUESS_NO_BIT, GUESS_BIT))
    return EntangledCheat(state, measurement, analytics.alice_two_state_value(p_question, a))


def three_state_ensemble(p_question: float, a: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Sender-side ensemble conditioned on no-bit / bit 0 / bit 1."""
    b_sq = 1.0 - a * a
    priors = np.array(
        [p_question, a * a * (1.0 - p_question), b_sq * (1.0 - p_question)]
    )
    states = [
        rho_no_bit(a),
        np.diag([1.0, 0.0]).astype(complex),
        np.diag([0.0, 1.0]).astype(complex),
    ]
    return priors, states


def mirror_symmetric_ensemble(p_question: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Equal-coefficient ensemble: |+><+|, |0><0|, |1><1|."""
    return three_state_ensemble(p_question, INV_SQRT2)


def _mirror_ansatz_value(p: float, alpha: float) -> float:
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    cross = alpha * beta
    return (4.0 * p * cross + (1.0 - p) * alpha * alpha) / (1.0 + 2.0 * cross)


def mirror_optimal_povm(p_question: float) -> Povm:
    """Optimal three-outcome measurement for the mirror-symmetric ensemble.

    Built from the symmetric rank-1 ansatz: bit elements d|w><w| with
    w = alpha|0> - beta|1> and its mirror image, no-bit element along |+>.
    The scaling d = 1/(alpha + beta)^2 makes the no-bit residual rank 1.
    Valid (optimal) for p_question >= 1/3.
    """
    p = p_question
    lo, hi = INV_SQRT2, 1.0
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if _mirror_ansatz_value(p, m1) < _mirror_ansatz_value(p, m2):
            lo = m1
        else:
            hi = m2
    alpha = (lo + hi) / 2.0
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    d = 1.0 / (alpha + beta) ** 2
    w0 = np.array([alpha, -beta], dtype=complex)
    w1 = np.array([-beta, alpha], dtype=complex)
    bit0 = d * np.outer(w0, w0.conj())
    bit1 = d * np.outer(w1, w1.conj())
    no_bit = np.eye(2) - bit0 - bit1
    return Povm(("NoBit", "Bit0", "Bit1"), (no_bit, bit0, bit1))


@dataclass(frozen=True)
class ThreeStateCheat:
    srm_bound: float
    priors: np.ndarray
    states: tuple[np.ndarray, ...]
    mirror_optimum: float | None  # set when a = b


def alice_three_state_cheat(p_question: float, a: float = INV_SQRT2) -> ThreeStateCheat:
    """Sender cheat at guessing no-bit / bit 0 / bit 1 under full testing."""
    priors, states = three_state_ensemble(p_question, a)
    equal_coefficients = abs(a * a - 0.5) < 1e-12
    return ThreeStateCheat(
        srm_bound=analytics.three_state_srm_bound(p_question, a),
        priors=priors,
        states=tuple(states),
        mirror_optimum=(
            analytics.alice_three_state_value(p_question) if equal_coefficients else None
        ),
    )


@dataclass(frozen=True)
class ClassicalCheats:
    a_value: float
    b_value: float
    alice_rule: str
    bob_rule: str


def classical_alice_guess(sent: bool, r: float) -> str:
    """Guess the most likely receiver outcome given what was sent."""
    if not sent:
        return GUESS_NO_BIT
    return GUESS_BIT if r >= 0.5 else GUESS_NO_BIT


def classical_cheats(params: ClassicalParams) -> ClassicalCheats:
    """Optimal cheats for the classical (and mixed-state) protocol."""
    a_value, b_value = analytics.classical_values(params.s, params.r)
    return ClassicalCheats(
        a_value=a_value,
        b_value=b_value,
        alice_rule="guess the most likely outcome given whether the bit was sent",
        bob_rule="always attempt to read; guess on no bit",
    )


# ---------------------------------------------------------------------------
# Session sources (full-testing protocol plug-ins)


@dataclass(frozen=True)
class SendOneAliceSource:
    """Always send |1>, always declare the same bit (caught by tests)."""

    declared_bit: int = 0

    def prepare(self, round_index: int, u: float):
        return np.array([0.0, 1.0], dtype=complex)

    def declare(self, prepared, round_index: int, u: float):
        return self.declared_bit, prepared


@dataclass(frozen=True)
class EntangledAliceSource:
    """Keep half of the entangled preparation; declare by measuring it."""

    params: ProtocolParams
    a: float = INV_SQRT2
    alternate: bool = False

    def _coefficient(self, round_index: int) -> tuple[float, bool]:
        swap = self.alternate and round_index % 2 == 1
        return self.a, swap

    def prepare(self, round_index: int, u: float):
        a, swap = self._coefficient(round_index)
        return cheat_state(self.params.theta, a, swap=swap)

    def declare(self, prepared: BipartiteState, round_index: int, u: float):
        amplitudes = prepared.matrix()
        weight_zero = float(np.linalg.norm(amplitudes[0, :]) ** 2)
        outcome = 0 if u < weight_zero else 1
        branch = amplitudes[outcome, :]
        return outcome, branch / np.linalg.norm(branch)


# ---------------------------------------------------------------------------
# Monte Carlo scenario registry


@dataclass(frozen=True)
class McSample:
    success: np.ndarray  # bool per round
    certainty: np.ndarray  # bool per round: conditional success exactly 1


SimulateFn = Callable[[float, int, int], McSample]
ReferenceFn = Callable[[float], float]


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    description: str
    protocol: str
    profile: StrategyProfile
    simulate: SimulateFn
    reference: ReferenceFn


COIN_FLIP_Y = 0.5


def canonical_classical_params(p_question: float) -> ClassicalParams:
    """Deterministic (s, r) pair realizing p_question with r >= 1/2."""
    s = min(1.0, 2.0 * (1.0 - p_question))
    r = (1.0 - p_question) / s if s > 0 else 1.0
    return ClassicalParams(s=s, r=r)


def _confusion_matrix(states, povm: Povm) -> np.ndarray:
    """M[c, g] = P(outcome g | state c)."""
    return np.array(
        [
            [float(np.trace(np.asarray(rho) @ element).real) for element in povm.elements]
            for rho in states
        ]
    )


def _certain_outcomes(priors: np.ndarray, confusion: np.ndarray) -> np.ndarray:
    """Outcomes whose posterior puts probability 1 on a single state."""
    weighted = priors[:, None] * confusion
    return (weighted > CERTAINTY_ATOL).sum(axis=0) == 1


def _sample_measurement(
    confusion: np.ndarray, classes: np.ndarray, u: np.ndarray
) -> np.ndarray:
    cumulative = np.cumsum(confusion, axis=1)
    return protocols.sample_categorical(cumulative[classes], u)


def _quantum_setup(p_question: float, rounds: int, seed: int):
    params = ProtocolParams.from_p_question(p_question)
    uniforms = protocols.session_uniforms(seed, rounds)
    return params, uniforms


def _sim_quantum_honest(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    bits = (u[:, 0] >= 0.5).astype(int)
    outcomes = protocols.quantum_rounds(params, bits, u[:, 2])
    no_bit = outcomes == int(RoundOutcome.NO_BIT)
    return McSample(no_bit, np.zeros(rounds, dtype=bool))


def _sim_bob_guess(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    bits = (u[:, 0] >= 0.5).astype(int)
    outcomes = protocols.quantum_rounds(params, bits, u[:, 2])
    received = outcomes != int(RoundOutcome.NO_BIT)
    guesses = np.where(received, outcomes, (u[:, 3] >= 0.5).astype(int))
    return McSample(guesses == bits, received)


def _sim_bob_helstrom(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    bits = (u[:, 0] >= 0.5).astype(int)
    povm, _ = bob_helstrom_cheat(params.theta)
    psi0, psi1 = protocols.honest_states(params.theta)
    confusion = _confusion_matrix([qmath.density(psi0), qmath.density(psi1)], povm)
    guesses = _sample_measurement(confusion, bits, u[:, 2])
    certain = _certain_outcomes(np.array([0.5, 0.5]), confusion)
    return McSample(guesses == bits, certain[guesses])


def _sim_alice_guess(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    bits = (u[:, 0] >= 0.5).astype(int)
    outcomes = protocols.quantum_rounds(params, bits, u[:, 2])
    no_bit = outcomes == int(RoundOutcome.NO_BIT)
    guess, _ = alice_guess_rule(p)
    return McSample(no_bit == (guess == GUESS_NO_BIT), np.zeros(rounds, dtype=bool))


def _sim_alice_no_testing(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    state, _ = alice_no_testing_cheat()
    probs = qmath.born_probabilities(qmath.density(state), protocols.usd_povm(params.theta))
    received = u[:, 2] < probs["Bit0"] + probs["Bit1"]
    return McSample(received, np.ones(rounds, dtype=bool))


def _sim_alice_monitoring(p: float, rounds: int, seed: int) -> McSample:
    params, u = _quantum_setup(p, rounds, seed)
    cheat = alice_monitoring_cheat(p)
    sent_zero = u[:, 1] < cheat.weight_on_zero
    povm = protocols.usd_povm(params.theta)
    zero, one = np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
    confusion = _confusion_matrix([qmath.density(zero), qmath.density(one)], povm)
    outcomes = _sample_measurement(confusion, (~sent_zero).astype(int), u[:, 2])
    no_bit = outcomes == 2
    guessed_no_bit = sent_zero & cheat.guess_no_bit_after_zero
    return McSample(no_bit == guessed_no_bit, ~sent_zero)


def _steered_measurement_sample(
    priors: np.ndarray, states, povm: Povm, rounds: int, u_class: np.ndarray, u_meas: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cumulative = np.cumsum(priors)
    classes = (u_class[:, None] >= cumulative[:-1]).sum(axis=1)
    confusion = _confusion_matrix(states, povm)
    outcomes = _sample_measurement(confusion, classes, u_meas)
    certain = _certain_outcomes(priors, confusion)
    return classes, outcomes, certain[outcomes]


def _sim_alice_entangled(p: float, rounds: int, seed: int) -> McSample:
    _, u = _quantum_setup(p, rounds, seed)
    cheat = alice_entangled_cheat(p)
    a = INV_SQRT2
    priors = np.array([p, 1.0 - p])
    states = [rho_no_bit(a), rho_bit(a)]
    classes, outcomes, certainty = _steered_measurement_sample(
        priors, states, cheat.measurement, rounds, u[:, 2], u[:, 3]
    )
    return McSample(outcomes == classes, certainty)


def _sim_alice_entangled_3srm(p: float, rounds: int, seed: int) -> McSample:
    _, u = _quantum_setup(p, rounds, seed)
    priors, states = mirror_symmetric_ensemble(p)
    povm = qmath.srm_povm(priors, states)
    classes, outcomes, certainty = _steered_measurement_sample(
        priors, states, povm, rounds, u[:, 2], u[:, 3]
    )
    return McSample(outcomes == classes, certainty)


def _sim_alice_entangled_3opt(p: float, rounds: int, seed: int) -> McSample:
    _, u = _quantum_setup(p, rounds, seed)
    priors, states = mirror_symmetric_ensemble(p)
    if p <= 1.0 / 3.0:
        # Honest ancilla measurement plus guessing that a bit arrived:
        # correct exactly when the receiver got a bit.
        cumulative = np.cumsum(priors)
        classes = (u[:, 2][:, None] >= cumulative[:-1]).sum(axis=1)
        return McSample(classes != 0, np.zeros(rounds, dtype=bool))
    povm = mirror_optimal_povm(p)
    classes, outcomes, certainty = _steered_measurement_sample(
        priors, states, povm, rounds, u[:, 2], u[:, 3]
    )
    return McSample(outcomes == classes, certainty)


def _sim_classical_honest(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    u = protocols.session_uniforms(seed, rounds)
    bits = (u[:, 0] >= 0.5).astype(int)
    outcomes = protocols.classical_rounds(params, bits, u[:, 1], u[:, 2])
    return McSample(outcomes == int(RoundOutcome.NO_BIT), np.zeros(rounds, dtype=bool))


def _sim_classical_alice(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    u = protocols.session_uniforms(seed, rounds)
    sent = u[:, 1] < params.s
    received = sent & (u[:, 2] < params.r)
    guessed_bit = sent & (params.r >= 0.5)
    return McSample(received == guessed_bit, ~sent)


def _sim_classical_bob(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    u = protocols.session_uniforms(seed, rounds)
    sent = u[:, 1] < params.s
    success = np.where(sent, True, u[:, 3] < 0.5)
    return McSample(success.astype(bool), sent)


def _sim_coinflip_alice(p: float, rounds: int, seed: int) -> McSample:
    u = protocols.session_uniforms(seed, rounds)
    sender_lottery = u[:, 0] < COIN_FLIP_Y
    received = u[:, 2] < (1.0 - p)
    guess_received = p < 0.5  # tie favours guessing no-bit
    reader_success = received == guess_received
    success = np.where(sender_lottery, True, reader_success)
    return McSample(success.astype(bool), sender_lottery)


def _sim_coinflip_bob(p: float, rounds: int, seed: int) -> McSample:
    u = protocols.session_uniforms(seed, rounds)
    sender_lottery = u[:, 0] < COIN_FLIP_Y
    received = u[:, 2] < (1.0 - p)
    guess_success = received | (u[:, 3] < 0.5)
    success = np.where(sender_lottery, guess_success, True)
    certainty = np.where(sender_lottery, received, True)
    return McSample(success.astype(bool), certainty.astype(bool))


def _sim_mixed_honest(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    (rho0, rho1), povm = protocols.mixed_protocol(params)
    u = protocols.session_uniforms(seed, rounds)
    bits = (u[:, 0] >= 0.5).astype(int)
    confusion = _confusion_matrix([rho0, rho1], povm)
    outcomes = _sample_measurement(confusion, bits, u[:, 2])
    return McSample(outcomes == 2, np.zeros(rounds, dtype=bool))


def _sim_mixed_alice(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    u = protocols.session_uniforms(seed, rounds)
    # Forced mixture: |0> with weight 1-s, |1> and |2> with s/2 each.
    sent_signal = u[:, 1] >= (1.0 - params.s)
    received = sent_signal & (u[:, 2] < params.r)
    guessed_bit = sent_signal & (params.r >= 0.5)
    return McSample(received == guessed_bit, ~sent_signal)


def _sim_mixed_bob(p: float, rounds: int, seed: int) -> McSample:
    params = canonical_classical_params(p)
    (rho0, rho1), _ = protocols.mixed_protocol(params)
    u = protocols.session_uniforms(seed, rounds)
    bits = (u[:, 0] >= 0.5).astype(int)
    weighted = (rho0 - rho1) / 2.0
    povm = _positive_projector_povm(weighted, ("Bit0", "Bit1"))
    confusion = _confusion_matrix([rho0, rho1], povm)
    guesses = _sample_measurement(confusion, bits, u[:, 2])
    certain = _certain_outcomes(np.array([0.5, 0.5]), confusion)
    return McSample(guesses == bits, certain[guesses])


def _honest_profile(bob_kind: str = "honest_usd") -> StrategyProfile:
    return StrategyProfile(AliceStrategy("honest"), BobStrategy(bob_kind))


def _alice_profile(alice: AliceStrategy) -> StrategyProfile:
    return StrategyProfile(alice, BobStrategy("honest_usd"))


SCENARIOS: dict[str, ScenarioSpec] = {
    spec.name: spec
    for spec in [
        ScenarioSpec(
            "quantum-honest-nobit",
            "honest round; observable is the no-bit frequency",
            "quantum",
            _honest_profile(),
            _sim_quantum_honest,
            lambda p: p,
        ),
        ScenarioSpec(
            "bob-guess",
            "honest receiver guessing the bit on inconclusive outcomes",
            "quantum",
            _honest_profile("guess_unknown"),
            _sim_bob_guess,
            analytics.bob_guess_value,
        ),
        ScenarioSpec(
            "bob-helstrom",
            "receiver applies the minimum-error measurement",
            "quantum",
            _honest_profile("helstrom_cheat"),
            _sim_bob_helstrom,
            analytics.bob_cheat_value,
        ),
        ScenarioSpec(
            "alice-guess",
            "honest sender guessing bit/no-bit",
            "quantum",
            _alice_profile(AliceStrategy("guess_only")),
            _sim_alice_guess,
            analytics.alice_guess_value,
        ),
        ScenarioSpec(
            "alice-no-testing",
            "sender transmits |1> when the receiver never tests",
            "quantum",
            _alice_profile(AliceStrategy("send_one")),
            _sim_alice_no_testing,
            lambda p: 1.0,
        ),
        ScenarioSpec(
            "alice-monitoring",
            "sender mixes |0>/|1> against frequency monitoring",
            "quantum",
            _alice_profile(AliceStrategy("monitored_mixture")),
            _sim_alice_monitoring,
            analytics.alice_monitor_value,
        ),
        ScenarioSpec(
            "alice-entangled",
            "entangled cheat, bit/no-bit objective, full testing",
            "quantum",
            _alice_profile(AliceStrategy("entangled_cheat", a=INV_SQRT2)),
            _sim_alice_entangled,
            analytics.alice_two_state_value,
        ),
        ScenarioSpec(
            "alice-entangled-3srm",
            "entangled cheat, three-outcome objective, square-root measurement",
            "quantum",
            _alice_profile(
                AliceStrategy("entangled_cheat", a=INV_SQRT2, objective="three_outcome")
            ),
            _sim_alice_entangled_3srm,
            analytics.three_state_srm_bound,
        ),
        ScenarioSpec(
            "alice-entangled-3opt",
            "entangled cheat, three-outcome objective, optimal measurement",
            "quantum",
            _alice_profile(
                AliceStrategy("entangled_cheat", a=INV_SQRT2, objective="three_outcome")
            ),
            _sim_alice_entangled_3opt,
            analytics.alice_three_state_value,
        ),
        ScenarioSpec(
            "classical-honest-nobit",
            "honest classical round; observable is the no-bit frequency",
            "classical",
            _honest_profile(),
            _sim_classical_honest,
            lambda p: p,
        ),
        ScenarioSpec(
            "classical-alice",
            "classical sender forced to honest send frequency",
            "classical",
            _alice_profile(AliceStrategy("guess_only")),
            _sim_classical_alice,
            lambda p: analytics.classical_values(*_sr(p))[0],
        ),
        ScenarioSpec(
            "classical-bob",
            "classical receiver always reads",
            "classical",
            _honest_profile("guess_unknown"),
            _sim_classical_bob,
            lambda p: analytics.classical_values(*_sr(p))[1],
        ),
        ScenarioSpec(
            "coinflip-alice",
            "trivial-protocol mixture, cheating sender (y = 1/2)",
            "coin-flip",
            _alice_profile(AliceStrategy("guess_only")),
            _sim_coinflip_alice,
            lambda p: analytics.coin_flip_cheats(COIN_FLIP_Y, p).a_value,
        ),
        ScenarioSpec(
            "coinflip-bob",
            "trivial-protocol mixture, cheating receiver (y = 1/2)",
            "coin-flip",
            _honest_profile("guess_unknown"),
            _sim_coinflip_bob,
            lambda p: analytics.coin_flip_cheats(COIN_FLIP_Y, p).b_value,
        ),
        ScenarioSpec(
            "mixed-honest-nobit",
            "honest qutrit mixed-state round; no-bit frequency",
            "mixed",
            _honest_profile(),
            _sim_mixed_honest,
            lambda p: p,
        ),
        ScenarioSpec(
            "mixed-alice",
            "mixed-state sender forced to the honest mixture",
            "mixed",
            _alice_profile(AliceStrategy("guess_only")),
            _sim_mixed_alice,
            lambda p: analytics.classical_values(*_sr(p))[0],
        ),
        ScenarioSpec(
            "mixed-bob",
            "mixed-state receiver applies the minimum-error measurement",
            "mixed",
            _honest_profile("helstrom_cheat"),
            _sim_mixed_bob,
            lambda p: analytics.classical_values(*_sr(p))[1],
        ),
    ]
}


def _sr(p: float) -> tuple[float, float]:
    params = canonical_classical_params(p)
    return params.s, params.r
