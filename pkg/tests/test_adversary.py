import math

import numpy as np
import pytest

from rabin_ot import adversary, analytics, protocols, qmath, verify
from rabin_ot.adversary import GUESS_BIT, GUESS_NO_BIT, INV_SQRT2
from rabin_ot.protocols import ClassicalParams, RoundOutcome


class TestBobGuessRule:
    def test_received_bit_is_reported(self):
        rng = np.random.default_rng(0)
        assert adversary.bob_guess_rule(RoundOutcome.BIT0, rng) == 0
        assert adversary.bob_guess_rule(RoundOutcome.BIT1, rng) == 1

    @pytest.mark.parametrize("p,expected", [(0.0, 1.0), (1.0, 0.5), (0.5, 0.75)])
    def test_success_values(self, p, expected):
        assert analytics.bob_guess_value(p) == pytest.approx(expected, abs=1e-12)

    def test_session_rate_converges(self):
        report = verify.mc_estimate(verify.McConfig("bob-guess", 0.5, 400_000, 8))
        assert abs(report.success_probability - 0.75) <= 4 * report.ci99


class TestBobHelstromCheat:
    @pytest.mark.parametrize(
        "p,expected", [(1.0, 0.5), (0.0, 1.0), (0.5, (2 + math.sqrt(3)) / 4)]
    )
    def test_closed_form(self, p, expected):
        theta = protocols.ProtocolParams.from_p_question(p).theta
        _, value = adversary.bob_helstrom_cheat(theta)
        assert value == pytest.approx(expected, abs=1e-12)

    def test_measurement_achieves_the_value(self):
        theta = math.pi / 6
        povm, value = adversary.bob_helstrom_cheat(theta)
        assert qmath.validate_povm(povm).passed
        psi0, psi1 = protocols.honest_states(theta)
        achieved = 0.5 * (
            qmath.born_probabilities(qmath.density(psi0), povm)["Bit0"]
            + qmath.born_probabilities(qmath.density(psi1), povm)["Bit1"]
        )
        assert achieved == pytest.approx(value, abs=1e-12)

    def test_matches_eigenvalue_helstrom_everywhere(self):
        for p in np.linspace(0.0, 1.0, 41):
            theta = protocols.ProtocolParams.from_p_question(float(p)).theta
            psi0, psi1 = protocols.honest_states(theta)
            exact = qmath.helstrom_success(
                0.5, qmath.density(psi0), 0.5, qmath.density(psi1)
            )
            _, value = adversary.bob_helstrom_cheat(theta)
            assert value == pytest.approx(exact, abs=1e-12)

    def test_strictly_beats_guessing_in_the_interior(self):
        for p in np.linspace(0.001, 0.999, 999):
            gap = analytics.bob_cheat_value(float(p)) - analytics.bob_guess_value(float(p))
            assert gap > 1e-12
        for p in (0.0, 1.0):
            assert abs(
                analytics.bob_cheat_value(p) - analytics.bob_guess_value(p)
            ) <= 1e-12


class TestAliceGuessRule:
    @pytest.mark.parametrize("p,expected", [(0.5, 0.5), (0.0, 1.0), (0.8, 0.8)])
    def test_success_values(self, p, expected):
        _, value = adversary.alice_guess_rule(p)
        assert value == pytest.approx(expected, abs=1e-12)

    def test_tie_breaks_toward_no_bit(self):
        guess, _ = adversary.alice_guess_rule(0.5)
        assert guess == GUESS_NO_BIT
        assert adversary.alice_guess_rule(0.4)[0] == GUESS_BIT


class TestAliceNoTesting:
    def test_state_and_report(self):
        state, report = adversary.alice_no_testing_cheat()
        assert np.allclose(state, [0.0, 1.0])
        assert report.success_probability == 1.0
        assert report.certainty_fraction == 1.0
        assert report.method == "exact" and report.ci99 is None

    def test_receiver_never_inconclusive(self):
        state, _ = adversary.alice_no_testing_cheat()
        for theta in (0.3, math.pi / 6, math.pi / 4):
            probs = qmath.born_probabilities(
                qmath.density(state), protocols.usd_povm(theta)
            )
            assert probs["NoBit"] == pytest.approx(0.0, abs=1e-12)

    def test_receiver_bits_equiprobable(self):
        state, _ = adversary.alice_no_testing_cheat()
        probs = qmath.born_probabilities(
            qmath.density(state), protocols.usd_povm(math.pi / 6)
        )
        assert probs["Bit0"] == pytest.approx(probs["Bit1"], abs=1e-12)

    def test_monte_carlo_success_is_exactly_one(self):
        report = verify.mc_estimate(verify.McConfig("alice-no-testing", 0.5, 100_000, 7))
        assert report.success_probability == 1.0
        assert report.certainty_events == 100_000


class TestAliceMonitoring:
    @pytest.mark.parametrize(
        "p,success,weight",
        [(0.5, 0.75, 0.75), (1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0), (0.2, 0.8, 0.6)],
    )
    def test_success_and_mixture_weight(self, p, success, weight):
        cheat = adversary.alice_monitoring_cheat(p)
        assert cheat.success_probability == pytest.approx(success, abs=1e-12)
        assert cheat.weight_on_zero == pytest.approx(weight, abs=1e-12)

    def test_mixture_reproduces_honest_no_bit_probability(self):
        for p in np.linspace(0.02, 0.98, 25):
            cheat = adversary.alice_monitoring_cheat(float(p))
            theta = protocols.ProtocolParams.from_p_question(float(p)).theta
            povm = protocols.usd_povm(theta)
            zero = qmath.density(np.array([1.0, 0.0]))
            one = qmath.density(np.array([0.0, 1.0]))
            emitted = (
                cheat.weight_on_zero * qmath.born_probabilities(zero, povm)["NoBit"]
                + (1 - cheat.weight_on_zero) * qmath.born_probabilities(one, povm)["NoBit"]
            )
            assert emitted == pytest.approx(p, abs=1e-12)

    def test_guess_rule_switches_at_one_third(self):
        assert adversary.alice_monitoring_cheat(0.4).guess_no_bit_after_zero
        assert adversary.alice_monitoring_cheat(1.0 / 3.0).guess_no_bit_after_zero
        assert not adversary.alice_monitoring_cheat(0.3).guess_no_bit_after_zero
        assert adversary.alice_monitoring_cheat(0.5).guess(sent_zero=False) == GUESS_BIT

    def test_certainty_fraction(self):
        cheat = adversary.alice_monitoring_cheat(0.5)
        assert cheat.certainty_fraction == pytest.approx(0.25, abs=1e-12)


class TestAliceEntangled:
    def test_product_state_reduces_to_guessing(self):
        for p in (0.2, 0.5, 0.8):
            cheat = adversary.alice_entangled_cheat(p, a=1.0)
            assert cheat.success_probability == pytest.approx(
                max(p, 1 - p), abs=1e-12
            )

    @pytest.mark.parametrize("p,expected", [(0.5, 0.75), (1.0 / 3.0, 2.0 / 3.0)])
    def test_equal_coefficients_values(self, p, expected):
        cheat = adversary.alice_entangled_cheat(p)
        assert cheat.success_probability == pytest.approx(expected, abs=1e-12)

    def test_optimal_basis_is_plus_minus_at_equal_coefficients(self):
        cheat = adversary.alice_entangled_cheat(0.5)
        plus = qmath.density(np.array([INV_SQRT2, INV_SQRT2]))
        assert np.max(np.abs(cheat.measurement.elements[0] - plus)) < 1e-12

    def test_cheat_state_passes_validation(self):
        state = adversary.cheat_state(math.pi / 6, 0.6)
        assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12
        swapped = adversary.cheat_state(math.pi / 6, 0.6, swap=True)
        assert not np.allclose(state.amplitudes, swapped.amplitudes)

    def test_steered_states_match_reduced_forms(self):
        theta = math.pi / 6
        a = 0.6
        state = adversary.cheat_state(theta, a)
        povm = protocols.usd_povm(theta)
        _, rho_nb = qmath.conditional_remote_state(state, povm.element("NoBit"))
        _, rho_b = qmath.conditional_remote_state(
            state, povm.element("Bit0") + povm.element("Bit1")
        )
        assert np.max(np.abs(rho_nb - adversary.rho_no_bit(a))) < 1e-12
        assert np.max(np.abs(rho_b - adversary.rho_bit(a))) < 1e-12

    def test_equal_coefficients_dominate(self):
        for p in np.linspace(0.0, 1.0, 21):
            best = analytics.alice_two_state_value(float(p))
            for a in np.linspace(0.0, 1.0, 21):
                assert analytics.alice_two_state_value(float(p), float(a)) <= best + 1e-12

    def test_alternation_restores_bit_balance(self):
        # With a != b the per-round bit bias cancels between odd/even rounds.
        source = adversary.EntangledAliceSource(
            protocols.ProtocolParams.from_p_question(0.5), a=0.9, alternate=True
        )
        weights = []
        for i in (0, 1):
            prepared = source.prepare(i, 0.5)
            weights.append(float(np.linalg.norm(prepared.matrix()[0, :]) ** 2))
        assert weights[0] == pytest.approx(0.81, abs=1e-12)
        assert weights[1] == pytest.approx(0.19, abs=1e-12)
        assert sum(weights) / 2 == pytest.approx(0.5, abs=1e-12)


class TestAliceThreeState:
    @pytest.mark.parametrize(
        "p,expected", [(0.4, 0.64), (0.5, 2.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0)]
    )
    def test_mirror_optimum_values(self, p, expected):
        cheat = adversary.alice_three_state_cheat(p)
        assert cheat.mirror_optimum == pytest.approx(expected, abs=1e-12)

    def test_srm_bound_below_optimum_at_half(self):
        cheat = adversary.alice_three_state_cheat(0.5)
        assert cheat.srm_bound == pytest.approx(0.5 + math.sqrt(3) / 12, abs=1e-9)
        assert cheat.srm_bound <= cheat.mirror_optimum

    def test_mirror_optimum_absent_for_unequal_coefficients(self):
        assert adversary.alice_three_state_cheat(0.5, a=0.6).mirror_optimum is None

    def test_srm_bound_matches_measurement_on_grid(self):
        for p in np.linspace(0.0, 1.0, 101):
            cheat = adversary.alice_three_state_cheat(float(p))
            measured = qmath.srm_success(cheat.priors, cheat.states)
            assert measured == pytest.approx(cheat.srm_bound, abs=1e-9)

    def test_mirror_optimal_povm_validates_and_achieves(self):
        for p in (0.35, 0.4, 0.5, 0.75, 0.9):
            povm = adversary.mirror_optimal_povm(p)
            assert qmath.validate_povm(povm).passed
            priors, states = adversary.mirror_symmetric_ensemble(p)
            achieved = sum(
                w * float(np.trace(rho @ povm.elements[i]).real)
                for i, (w, rho) in enumerate(zip(priors, states))
            )
            assert achieved == pytest.approx(
                analytics.alice_three_state_value(p), abs=1e-12
            )


class TestClassicalCheats:
    @pytest.mark.parametrize(
        "s,r,a_value,b_value",
        [(1.0, 0.5, 0.5, 1.0), (0.0, 0.7, 1.0, 0.5), (0.5, 1.0, 1.0, 0.75)],
    )
    def test_values(self, s, r, a_value, b_value):
        cheats = adversary.classical_cheats(ClassicalParams(s, r))
        assert cheats.a_value == pytest.approx(a_value, abs=1e-12)
        assert cheats.b_value == pytest.approx(b_value, abs=1e-12)

    def test_guess_rule(self):
        assert adversary.classical_alice_guess(sent=False, r=0.9) == GUESS_NO_BIT
        assert adversary.classical_alice_guess(sent=True, r=0.9) == GUESS_BIT
        assert adversary.classical_alice_guess(sent=True, r=0.3) == GUESS_NO_BIT

    def test_mixed_state_protocol_shares_the_values(self):
        for p in (0.1, 0.5, 0.75):
            params = adversary.canonical_classical_params(p)
            cheats = adversary.classical_cheats(params)
            assert adversary.SCENARIOS["mixed-alice"].reference(p) == pytest.approx(
                cheats.a_value, abs=1e-12
            )
            assert adversary.SCENARIOS["mixed-bob"].reference(p) == pytest.approx(
                cheats.b_value, abs=1e-12
            )


class TestLowPQuestionRegime:
    def test_all_strategies_collapse_to_guessing(self):
        for p in np.linspace(0.0, 1.0 / 3.0, 30):
            guess = analytics.alice_guess_value(float(p))
            assert analytics.alice_monitor_value(float(p)) == pytest.approx(guess, abs=1e-12)
            assert analytics.alice_two_state_value(float(p)) == pytest.approx(guess, abs=1e-12)
            assert analytics.alice_three_state_value(float(p)) == pytest.approx(guess, abs=1e-12)


class TestStrategyTypes:
    def test_unknown_kinds_rejected(self):
        with pytest.raises(ValueError):
            adversary.AliceStrategy("improvise")
        with pytest.raises(ValueError):
            adversary.BobStrategy("improvise")

    def test_report_requires_ci_only_for_monte_carlo(self):
        with pytest.raises(ValueError):
            adversary.CheatReport(0.5, 0.0, "exact", ci99=0.01)
        with pytest.raises(ValueError):
            adversary.CheatReport(0.5, 0.0, "monte-carlo")


class TestRegistryMonteCarlo:
    def test_every_scenario_within_four_sigma(self):
        # 10^6 rounds per (scenario, p_question) pair at a fixed seed.
        rounds = 1_000_000
        for name, spec in adversary.SCENARIOS.items():
            for p in verify.MC_P_VALUES:
                report = verify.mc_estimate(verify.McConfig(name, p, rounds, 2024))
                reference = spec.reference(p)
                sigma = math.sqrt(max(reference * (1 - reference), 0.0) / rounds)
                deviation = abs(report.success_probability - reference)
                if sigma == 0.0:
                    assert deviation == 0.0, (name, p)
                else:
                    assert deviation <= 4 * sigma, (name, p, deviation, sigma)

    def test_certainty_fractions(self):
        report = verify.mc_estimate(verify.McConfig("alice-monitoring", 0.5, 200_000, 3))
        assert report.certainty_fraction == pytest.approx(0.25, abs=0.01)
        report = verify.mc_estimate(verify.McConfig("classical-alice", 0.75, 200_000, 3))
        assert report.certainty_fraction == pytest.approx(0.5, abs=0.01)
