"""Executable round definitions for every protocol variant.

Randomness contract: every simulated round i consumes a fixed-width block
of uniforms from a counter-based (Philox) stream keyed by the seed, so the
outcome of round i depends only on (seed, i) and results are reproducible
regardless of how rounds are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Protocol, runtime_checkable

import numpy as np

from . import qmath
from .qmath import BipartiteState, Povm

THETA_MAX = math.pi / 4.0
PARAM_ATOL = 1e-12

DRAWS_PER_ROUND = 4


class DegenerateProtocolError(ValueError):
    """The protocol knob makes the honest measurement ill-defined."""


class RoundOutcome(IntEnum):
    BIT0 = 0
    BIT1 = 1
    NO_BIT = 2
    ABORT = 3


@dataclass(frozen=True)
class ProtocolParams:
    """Two-pure-state protocol knob: theta in [0, pi/4]."""

    theta: float

    def __post_init__(self):
        if not -PARAM_ATOL <= self.theta <= THETA_MAX + PARAM_ATOL:
            raise ValueError(f"theta must lie in [0, pi/4], got {self.theta!r}")

    @property
    def p_question(self) -> float:
        return float(np.clip(math.cos(2.0 * self.theta), 0.0, 1.0))

    @classmethod
    def from_p_question(cls, p_question: float) -> "ProtocolParams":
        if not 0.0 <= p_question <= 1.0:
            raise ValueError(f"p_question must lie in [0, 1], got {p_question!r}")
        return cls(math.acos(p_question) / 2.0)


@dataclass(frozen=True)
class ClassicalParams:
    """Send probability s and read probability r."""

    s: float
    r: float

    def __post_init__(self):
        for name in ("s", "r"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @property
    def p_question(self) -> float:
        return 1.0 - self.r * self.s


@dataclass(frozen=True)
class CoinFlipParams:
    """Mixture weight y between the two trivial protocols."""

    y: float
    p_question: float

    def __post_init__(self):
        for name in ("y", "p_question"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class GeneralizedClassicalParams:
    """Probabilistic mixture of send/read protocols."""

    branches: tuple[tuple[float, float, float], ...]  # (weight, s_k, r_k)

    def __post_init__(self):
        branches = tuple((float(w), float(s), float(r)) for w, s, r in self.branches)
        if not branches:
            raise ValueError("at least one branch required")
        if abs(sum(w for w, _, _ in branches) - 1.0) > PARAM_ATOL:
            raise ValueError("branch weights must sum to 1")
        for triple in branches:
            for value in triple:
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"branch entry {value!r} outside [0, 1]")
        object.__setattr__(self, "branches", branches)

    @property
    def p_question(self) -> float:
        return 1.0 - sum(w * r * s for w, s, r in self.branches)


@dataclass(frozen=True)
class FullTestingConfig:
    """Fraction of rounds tested and total round count."""

    fraction_tested: float = 0.1
    rounds: int = 100_000

    def __post_init__(self):
        if not 0.0 < self.fraction_tested < 1.0:
            raise ValueError("fraction_tested must lie strictly between 0 and 1")
        if self.rounds < 1:
            raise ValueError("rounds must be positive")


@dataclass(frozen=True)
class Transcript:
    alice_sent: int | None
    bob_read: bool
    tested: bool
    declaration: int | None = None

    def __post_init__(self):
        if self.tested != (self.declaration is not None):
            raise ValueError("declaration present iff the round was tested")


def session_uniforms(seed: int, n_rounds: int) -> np.ndarray:
    """(n_rounds, DRAWS_PER_ROUND) uniforms; row i depends only on (seed, i)."""
    generator = np.random.Generator(np.random.Philox(key=seed))
    return generator.random((n_rounds, DRAWS_PER_ROUND))


def honest_states(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """State pair encoding bit 0 and bit 1, overlap cos(2*theta)."""
    if not -PARAM_ATOL <= theta <= THETA_MAX + PARAM_ATOL:
        raise ValueError(f"theta must lie in [0, pi/4], got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c, s], dtype=complex), np.array([c, -s], dtype=complex)


def conjugate_states(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """States orthogonal to the honest pair (test-failure directions)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([s, -c], dtype=complex), np.array([s, c], dtype=complex)


def usd_povm(theta: float) -> Povm:
    """Unambiguous discrimination measurement for the honest state pair."""
    if theta <= PARAM_ATOL:
        raise DegenerateProtocolError(
            "theta = 0 sends identical states; the conclusive elements vanish"
        )
    if theta > THETA_MAX + PARAM_ATOL:
        raise ValueError(f"theta must lie in (0, pi/4], got {theta!r}")
    bar0, bar1 = conjugate_states(theta)
    scale = 1.0 / (2.0 * math.cos(theta) ** 2)
    tan_sq = math.tan(theta) ** 2
    return Povm(
        labels=("Bit0", "Bit1", "NoBit"),
        elements=(
            scale * np.outer(bar1, bar1.conj()),
            scale * np.outer(bar0, bar0.conj()),
            (1.0 - tan_sq) * np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
        ),
    )


def _sample_outcome(probs: dict[str, float], u: float) -> RoundOutcome:
    order = (RoundOutcome.BIT0, RoundOutcome.BIT1, RoundOutcome.NO_BIT)
    cumulative = 0.0
    for outcome, label in zip(order, ("Bit0", "Bit1", "NoBit")):
        cumulative += probs[label]
        if u < cumulative:
            return outcome
    return RoundOutcome.NO_BIT


def sample_categorical(cumulative_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized categorical sampling: one cumulative row per round."""
    return (u[:, None] >= cumulative_rows[:, :-1]).sum(axis=1)


def _scalar_overlap(w: np.ndarray, v: np.ndarray) -> complex:
    """<w|v> via Python scalars; avoids FMA so symmetric terms cancel exactly."""
    return sum(complex(a).conjugate() * complex(b) for a, b in zip(w, v))


def usd_outcome_probabilities(theta: float) -> np.ndarray:
    """Born probabilities (Bit0, Bit1, NoBit) per honest state, shape (2, 3).

    Computed through amplitude overlaps, which makes the wrong-bit entries
    exactly zero: the orthogonal overlap is sc - cs, a bitwise cancellation.
    """
    if theta <= PARAM_ATOL:
        raise DegenerateProtocolError(
            "theta = 0 sends identical states; the conclusive elements vanish"
        )
    bar0, bar1 = conjugate_states(theta)
    scale = 1.0 / (2.0 * math.cos(theta) ** 2)
    no_bit_weight = 1.0 - math.tan(theta) ** 2
    rows = np.empty((2, 3))
    for x, psi in enumerate(honest_states(theta)):
        rows[x, 0] = scale * abs(_scalar_overlap(bar1, psi)) ** 2
        rows[x, 1] = scale * abs(_scalar_overlap(bar0, psi)) ** 2
        rows[x, 2] = no_bit_weight * abs(complex(psi[0])) ** 2
        rows[x] = [qmath.clip_probability(value) for value in rows[x]]
        if abs(rows[x].sum() - 1.0) > 1e-10:
            raise ValueError("outcome probabilities do not sum to 1")
    return rows


def quantum_round(params: ProtocolParams, bit: int, rng: np.random.Generator) -> RoundOutcome:
    """One honest round: send the encoded state, measure with the USD POVM."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    probabilities = usd_outcome_probabilities(params.theta)[bit]
    labels = ("Bit0", "Bit1", "NoBit")
    return _sample_outcome(dict(zip(labels, probabilities)), rng.random())


def quantum_outcome_rows(params: ProtocolParams) -> np.ndarray:
    """Cumulative USD outcome probabilities per honest state."""
    return np.cumsum(usd_outcome_probabilities(params.theta), axis=1)


def quantum_rounds(params: ProtocolParams, bits: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized honest rounds; returns RoundOutcome codes."""
    cumulative = quantum_outcome_rows(params)
    return sample_categorical(cumulative[np.asarray(bits, dtype=int)], np.asarray(u))


def classical_round(
    params: ClassicalParams, bit: int, rng: np.random.Generator
) -> tuple[RoundOutcome, Transcript]:
    """One round of the send-with-probability / read-with-probability protocol."""
    sent = rng.random() < params.s
    read = rng.random() < params.r
    outcome = RoundOutcome(bit) if sent and read else RoundOutcome.NO_BIT
    return outcome, Transcript(alice_sent=bit if sent else None, bob_read=read, tested=False)


def classical_rounds(params: ClassicalParams, bits, u_send, u_read) -> np.ndarray:
    received = (np.asarray(u_send) < params.s) & (np.asarray(u_read) < params.r)
    return np.where(received, np.asarray(bits, dtype=int), int(RoundOutcome.NO_BIT))


def coin_flip_round(
    params: CoinFlipParams, bit: int, rng: np.random.Generator
) -> RoundOutcome:
    """One round of the trivial-protocol mixture."""
    deliver = 1.0 - params.p_question
    if rng.random() < params.y:
        received = rng.random() < deliver  # sender-side lottery
    else:
        received = rng.random() < deliver  # receiver-side lottery
    return RoundOutcome(bit) if received else RoundOutcome.NO_BIT


def coin_flip_rounds(params: CoinFlipParams, bits, u_branch, u_deliver) -> np.ndarray:
    # Both branches deliver with probability 1 - p_question; the branch coin
    # only decides which side holds the lottery.
    del u_branch
    received = np.asarray(u_deliver) < (1.0 - params.p_question)
    return np.where(received, np.asarray(bits, dtype=int), int(RoundOutcome.NO_BIT))


def mixed_protocol(params: ClassicalParams) -> tuple[tuple[np.ndarray, np.ndarray], Povm]:
    """Qutrit mixed-state formulation of the classical protocol."""
    s, r = params.s, params.r
    rho0 = np.diag([1.0 - s, s, 0.0]).astype(complex)
    rho1 = np.diag([1.0 - s, 0.0, s]).astype(complex)
    povm = Povm(
        labels=("Bit0", "Bit1", "NoBit"),
        elements=(
            np.diag([0.0, r, 0.0]).astype(complex),
            np.diag([0.0, 0.0, r]).astype(complex),
            np.diag([1.0, 1.0 - r, 1.0 - r]).astype(complex),
        ),
    )
    return (rho0, rho1), povm


@runtime_checkable
class AliceRoundSource(Protocol):
    """Per-round state supplier for sessions with testing.

    ``prepare`` returns either a single-qubit state vector or a
    BipartiteState whose sent half goes to the receiver.  ``declare``
    returns the declared bit and the receiver-side state conditioned on
    the declaration, or None when the strategy cannot declare.
    """

    def prepare(self, round_index: int, u: float) -> np.ndarray | BipartiteState: ...

    def declare(
        self, prepared, round_index: int, u: float
    ) -> tuple[int, np.ndarray] | None: ...


@dataclass(frozen=True)
class HonestAliceSource:
    """Honest sender: random bit, honest state, truthful declaration."""

    params: ProtocolParams

    def prepare(self, round_index: int, u: float):
        psi0, psi1 = honest_states(self.params.theta)
        bit = 0 if u < 0.5 else 1
        return psi0 if bit == 0 else psi1

    def declare(self, prepared, round_index: int, u: float):
        psi0, _ = honest_states(self.params.theta)
        bit = 0 if np.allclose(prepared, psi0) else 1
        return bit, prepared


@dataclass(frozen=True)
class SessionStats:
    outcome_counts: dict[RoundOutcome, int]
    tested_rounds: int
    aborted: bool
    abort_round: int | None
    rounds: int

    @property
    def untested_rounds(self) -> int:
        return sum(self.outcome_counts.values())

    def frequency(self, outcome: RoundOutcome) -> float:
        total = self.untested_rounds
        return self.outcome_counts.get(outcome, 0) / total if total else float("nan")


def run_declaration_test(state: np.ndarray, declared: int, theta: float, u: float) -> bool:
    """Measure a declared state in its conjugate basis; True means pass."""
    bars = conjugate_states(theta)
    fail_probability = abs(np.vdot(bars[declared], state)) ** 2
    return not u < fail_probability


def full_testing_session(
    params: ProtocolParams,
    cfg: FullTestingConfig,
    source: AliceRoundSource,
    seed: int,
) -> SessionStats:
    """Session where the receiver tests a random fraction of the rounds.

    Tested rounds ask the source for a declaration and verify it with the
    two-outcome projective test; any mismatch (or missing declaration)
    aborts.  Untested rounds run the regular USD measurement.
    """
    n = cfg.rounds
    n_tested = int(round(cfg.fraction_tested * n))
    selection_rng = np.random.default_rng((seed, 0x7E57))
    tested = np.zeros(n, dtype=bool)
    if n_tested:
        tested[selection_rng.choice(n, size=n_tested, replace=False)] = True

    uniforms = session_uniforms(seed, n)
    povm = usd_povm(params.theta)
    cumulative_cache: dict[bytes, np.ndarray] = {}
    counts = {RoundOutcome.BIT0: 0, RoundOutcome.BIT1: 0, RoundOutcome.NO_BIT: 0}

    for i in range(n):
        u_prepare, u_declare, u_outcome, u_test = uniforms[i]
        prepared = source.prepare(i, u_prepare)
        if tested[i]:
            declaration = source.declare(prepared, i, u_declare)
            if declaration is None:
                return SessionStats(counts, int(tested[: i + 1].sum()), True, i, n)
            declared_bit, receiver_state = declaration
            if not run_declaration_test(receiver_state, declared_bit, params.theta, u_test):
                return SessionStats(counts, int(tested[: i + 1].sum()), True, i, n)
            continue
        if isinstance(prepared, BipartiteState):
            rho = qmath.reduced_state(prepared, keep=prepared.partition[1])
        else:
            rho = qmath.density(prepared)
        key = rho.tobytes()
        if key not in cumulative_cache:
            probs = qmath.born_probabilities(rho, povm)
            cumulative_cache[key] = np.cumsum(
                [probs["Bit0"], probs["Bit1"], probs["NoBit"]]
            )
        outcome = RoundOutcome(
            int((u_outcome >= cumulative_cache[key][:-1]).sum())
        )
        counts[outcome] += 1

    return SessionStats(counts, n_tested, False, None, n)
