import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabin_ot import adversary, protocols, qmath
from rabin_ot.protocols import (
    ClassicalParams,
    CoinFlipParams,
    DegenerateProtocolError,
    FullTestingConfig,
    GeneralizedClassicalParams,
    ProtocolParams,
    RoundOutcome,
    Transcript,
)


class TestParams:
    @given(st.floats(0.0, 1.0))
    def test_p_question_round_trip(self, p):
        params = ProtocolParams.from_p_question(p)
        assert params.p_question == pytest.approx(p, abs=1e-12)

    def test_theta_range_enforced(self):
        with pytest.raises(ValueError):
            ProtocolParams(math.pi / 3)
        with pytest.raises(ValueError):
            ProtocolParams(-0.1)

    def test_classical_p_question(self):
        assert ClassicalParams(s=1.0, r=0.5).p_question == pytest.approx(0.5)
        with pytest.raises(ValueError):
            ClassicalParams(s=1.2, r=0.5)

    def test_generalized_weights_must_sum(self):
        with pytest.raises(ValueError, match="sum"):
            GeneralizedClassicalParams(((0.5, 1.0, 1.0), (0.6, 1.0, 1.0)))

    def test_full_testing_config_bounds(self):
        with pytest.raises(ValueError):
            FullTestingConfig(fraction_tested=0.0)
        with pytest.raises(ValueError):
            FullTestingConfig(rounds=0)

    def test_transcript_declaration_iff_tested(self):
        Transcript(alice_sent=1, bob_read=True, tested=True, declaration=1)
        with pytest.raises(ValueError):
            Transcript(alice_sent=1, bob_read=True, tested=False, declaration=1)


class TestHonestStates:
    def test_degenerate_angle_gives_identical_states(self):
        psi0, psi1 = protocols.honest_states(0.0)
        assert np.allclose(psi0, psi1)
        assert abs(np.vdot(psi0, psi1)) == pytest.approx(1.0)

    def test_orthogonal_at_max_angle(self):
        psi0, psi1 = protocols.honest_states(math.pi / 4)
        assert abs(np.vdot(psi0, psi1)) < 1e-12

    def test_overlap_half_at_thirty_degrees(self):
        psi0, psi1 = protocols.honest_states(math.pi / 6)
        assert np.vdot(psi0, psi1).real == pytest.approx(0.5, abs=1e-12)

    @given(st.floats(0.0, math.pi / 4))
    def test_overlap_matches_p_question(self, theta):
        psi0, psi1 = protocols.honest_states(theta)
        assert np.vdot(psi0, psi1).real == pytest.approx(math.cos(2 * theta), abs=1e-12)


class TestUsdPovm:
    def test_inconclusive_probability_at_thirty_degrees(self):
        rows = protocols.usd_outcome_probabilities(math.pi / 6)
        assert rows[0, 2] == pytest.approx(0.5, abs=1e-12)
        assert rows[1, 2] == pytest.approx(0.5, abs=1e-12)

    def test_orthogonal_limit_has_vanishing_inconclusive_element(self):
        povm = protocols.usd_povm(math.pi / 4)
        assert np.max(np.abs(povm.element("NoBit"))) < 1e-12
        assert qmath.validate_povm(povm).passed

    def test_inconclusive_eigenvalue_two_thirds(self):
        element = protocols.usd_povm(math.pi / 6).element("NoBit")
        assert element[0, 0].real == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_zero_angle_rejected(self):
        with pytest.raises(DegenerateProtocolError):
            protocols.usd_povm(0.0)

    def test_validates_across_angle_grid(self):
        for theta in np.linspace(0.01, math.pi / 4, 25):
            assert qmath.validate_povm(protocols.usd_povm(float(theta))).passed


class TestQuantumRound:
    def test_orthogonal_states_always_conclusive(self):
        params = ProtocolParams(math.pi / 4)
        rng = np.random.default_rng(5)
        for _ in range(500):
            assert protocols.quantum_round(params, 0, rng) == RoundOutcome.BIT0

    def test_near_identical_states_almost_never_conclusive(self):
        params = ProtocolParams(1e-6)
        rng = np.random.default_rng(5)
        outcomes = [protocols.quantum_round(params, 1, rng) for _ in range(500)]
        assert all(o == RoundOutcome.NO_BIT for o in outcomes)

    def test_never_the_wrong_bit(self):
        params = ProtocolParams.from_p_question(0.5)
        u = protocols.session_uniforms(42, 200_000)
        bits = (u[:, 0] >= 0.5).astype(int)
        outcomes = protocols.quantum_rounds(params, bits, u[:, 2])
        wrong = (outcomes == 1 - bits) & (outcomes <= 1)
        assert not wrong.any()

    def test_no_bit_frequency_on_angle_grid(self):
        # 10^6 rounds per angle; frequency within 4 sigma of cos(2 theta).
        rounds = 1_000_000
        for i, theta in enumerate(np.arange(0.01, math.pi / 4, 0.01)):
            params = ProtocolParams(float(theta))
            p = params.p_question
            u = protocols.session_uniforms(900 + i, rounds)
            bits = (u[:, 0] >= 0.5).astype(int)
            outcomes = protocols.quantum_rounds(params, bits, u[:, 2])
            frequency = float((outcomes == int(RoundOutcome.NO_BIT)).mean())
            sigma = math.sqrt(max(p * (1 - p), 1e-12) / rounds)
            assert abs(frequency - p) <= 4 * sigma, f"theta={theta}"


class TestClassicalRound:
    def test_always_delivered(self):
        rng = np.random.default_rng(0)
        outcome, transcript = protocols.classical_round(ClassicalParams(1.0, 1.0), 1, rng)
        assert outcome == RoundOutcome.BIT1
        assert transcript.alice_sent == 1 and transcript.bob_read

    def test_never_sent(self):
        rng = np.random.default_rng(0)
        outcome, transcript = protocols.classical_round(ClassicalParams(0.0, 1.0), 0, rng)
        assert outcome == RoundOutcome.NO_BIT
        assert transcript.alice_sent is None

    def test_no_bit_frequency(self):
        params = ClassicalParams(1.0, 0.5)
        u = protocols.session_uniforms(17, 1_000_000)
        bits = (u[:, 0] >= 0.5).astype(int)
        outcomes = protocols.classical_rounds(params, bits, u[:, 1], u[:, 2])
        frequency = float((outcomes == int(RoundOutcome.NO_BIT)).mean())
        assert abs(frequency - 0.5) <= 4 * math.sqrt(0.25 / 1_000_000)


class TestCoinFlipRound:
    def test_deterministic_limits(self):
        rng = np.random.default_rng(0)
        assert (
            protocols.coin_flip_round(CoinFlipParams(1.0, 0.0), 1, rng) == RoundOutcome.BIT1
        )
        assert (
            protocols.coin_flip_round(CoinFlipParams(0.0, 1.0), 1, rng)
            == RoundOutcome.NO_BIT
        )

    def test_no_bit_frequency_grid(self):
        rounds = 100_000
        for y in np.linspace(0.0, 1.0, 11):
            for i, p in enumerate(np.linspace(0.0, 1.0, 11)):
                params = CoinFlipParams(float(y), float(p))
                u = protocols.session_uniforms(300 + i, rounds)
                bits = (u[:, 0] >= 0.5).astype(int)
                outcomes = protocols.coin_flip_rounds(params, bits, u[:, 1], u[:, 2])
                frequency = float((outcomes == int(RoundOutcome.NO_BIT)).mean())
                sigma = math.sqrt(max(p * (1 - p), 1e-12) / rounds)
                assert abs(frequency - p) <= 4 * sigma + 1e-12


class TestMixedProtocol:
    def test_deterministic_case(self):
        (rho0, _), povm = protocols.mixed_protocol(ClassicalParams(1.0, 1.0))
        probs = qmath.born_probabilities(rho0, povm)
        assert probs["Bit0"] == pytest.approx(1.0, abs=1e-12)

    def test_no_bit_probability(self):
        (rho0, rho1), povm = protocols.mixed_protocol(ClassicalParams(0.5, 1.0))
        for rho in (rho0, rho1):
            assert qmath.born_probabilities(rho, povm)["NoBit"] == pytest.approx(
                0.5, abs=1e-12
            )

    def test_completeness_on_parameter_grid(self):
        for s in np.linspace(0.0, 1.0, 6):
            for r in np.linspace(0.0, 1.0, 6):
                _, povm = protocols.mixed_protocol(ClassicalParams(float(s), float(r)))
                check = qmath.validate_povm(povm)
                assert check.passed and check.completeness_residual < 1e-12

    def test_wrong_bit_impossible(self):
        (rho0, rho1), povm = protocols.mixed_protocol(ClassicalParams(0.7, 0.6))
        assert qmath.born_probabilities(rho0, povm)["Bit1"] == 0.0
        assert qmath.born_probabilities(rho1, povm)["Bit0"] == 0.0

    def test_matches_classical_distribution_on_grid(self):
        # Same (s, r) must give statistically identical outcome distributions.
        rounds = 100_000
        for i, s in enumerate(np.linspace(0.0, 1.0, 11)):
            for j, r in enumerate(np.linspace(0.0, 1.0, 11)):
                params = ClassicalParams(float(s), float(r))
                u = protocols.session_uniforms(1000 + 20 * i + j, rounds)
                bits = (u[:, 0] >= 0.5).astype(int)
                classical = protocols.classical_rounds(params, bits, u[:, 1], u[:, 2])

                (rho0, rho1), povm = protocols.mixed_protocol(params)
                rows = np.array(
                    [
                        [qmath.born_probabilities(rho, povm)[k] for k in ("Bit0", "Bit1", "NoBit")]
                        for rho in (rho0, rho1)
                    ]
                )
                v = protocols.session_uniforms(5000 + 20 * i + j, rounds)
                mixed_bits = (v[:, 0] >= 0.5).astype(int)
                mixed = protocols.sample_categorical(
                    np.cumsum(rows, axis=1)[mixed_bits], v[:, 2]
                )
                for outcome in range(3):
                    f_classical = float((classical == outcome).mean())
                    f_mixed = float((mixed == outcome).mean())
                    sigma = math.sqrt(
                        2.0 * max(f_classical * (1 - f_classical), 1e-9) / rounds
                    )
                    assert abs(f_classical - f_mixed) <= 4 * sigma + 1e-9


class TestDeterminism:
    def test_session_uniforms_reproducible(self):
        a = protocols.session_uniforms(123, 1000)
        b = protocols.session_uniforms(123, 1000)
        assert np.array_equal(a, b)

    def test_round_depends_only_on_seed_and_index(self):
        long = protocols.session_uniforms(123, 2000)
        short = protocols.session_uniforms(123, 500)
        assert np.array_equal(long[:500], short)


class TestFullTestingSession:
    def test_honest_never_aborts_and_matches_frequency(self):
        params = ProtocolParams.from_p_question(0.5)
        cfg = FullTestingConfig(fraction_tested=0.1, rounds=100_000)
        stats = protocols.full_testing_session(
            params, cfg, protocols.HonestAliceSource(params), seed=11
        )
        assert not stats.aborted
        assert stats.tested_rounds == 10_000
        frequency = stats.frequency(RoundOutcome.NO_BIT)
        sigma = math.sqrt(0.25 / stats.untested_rounds)
        assert abs(frequency - 0.5) <= 3 * sigma

    def test_entangled_cheat_never_aborts(self):
        params = ProtocolParams.from_p_question(0.5)
        cfg = FullTestingConfig(fraction_tested=0.1, rounds=100_000)
        stats = protocols.full_testing_session(
            params, cfg, adversary.EntangledAliceSource(params), seed=12
        )
        assert not stats.aborted

    def test_constant_liar_aborts(self):
        params = ProtocolParams.from_p_question(0.5)
        cfg = FullTestingConfig(fraction_tested=0.1, rounds=10_000)
        stats = protocols.full_testing_session(
            params, cfg, adversary.SendOneAliceSource(declared_bit=0), seed=13
        )
        assert stats.aborted

    def test_missing_declaration_aborts(self):
        class Mute:
            def prepare(self, round_index, u):
                return np.array([1.0, 0.0], dtype=complex)

            def declare(self, prepared, round_index, u):
                return None

        params = ProtocolParams.from_p_question(0.5)
        cfg = FullTestingConfig(fraction_tested=0.5, rounds=50)
        stats = protocols.full_testing_session(params, cfg, Mute(), seed=3)
        assert stats.aborted

    def test_declaration_test_failure_rate(self):
        # Sending |1> and declaring bit 0 fails each test with probability
        # cos^2(theta).
        theta = math.pi / 6
        one = np.array([0.0, 1.0], dtype=complex)
        u = protocols.session_uniforms(77, 20_000)[:, 3]
        fails = sum(
            not protocols.run_declaration_test(one, 0, theta, float(x)) for x in u
        )
        expected = math.cos(theta) ** 2
        sigma = math.sqrt(expected * (1 - expected) / 20_000)
        assert abs(fails / 20_000 - expected) <= 4 * sigma
