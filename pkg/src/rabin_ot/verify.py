"""Independent verification: Monte Carlo estimation and search oracles.

The oracles re-derive optimal measurements and optimal cheat-state
coefficients by explicit parametrized search, never through the closed
forms they are checked against.  Everything is deterministic given the
seed; grid evaluation may be chunked across threads (capped by the
RABIN_OT_THREADS environment variable) with an order-preserving,
max-by-value reduction, so results do not depend on the schedule.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import adversary, analytics, protocols, qmath

Z99 = 2.576
CI_WIDTHS = 4.0

MINERR_GRID = (720, 1440)
MINERR_REFINE_HALVINGS = 20
THREE_OUTCOME_SAMPLES = 200
THREE_OUTCOME_REFINE = 12
A_GRID_STEP = 1e-3


def worker_count() -> int:
    """Thread cap for grid evaluation, from RABIN_OT_THREADS."""
    raw = os.environ.get("RABIN_OT_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _chunked_max(values_fn, chunks: list[np.ndarray]) -> tuple[float, int]:
    """Evaluate chunks (possibly in parallel) and reduce deterministically.

    Returns (best value, global flat index); ties resolve to the lowest
    index, i.e. the lexicographically smallest parameter tuple.
    """
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        results = [values_fn(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(values_fn, chunks))
    best_value, best_index, offset = -np.inf, 0, 0
    for block in results:
        local = int(np.argmax(block))
        if block[local] > best_value:
            best_value, best_index = float(block[local]), offset + local
        offset += block.size
    return best_value, best_index


@dataclass(frozen=True)
class McConfig:
    scenario: str
    p_question: float
    rounds: int
    seed: int

    def __post_init__(self):
        if self.scenario not in adversary.SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if not 0.0 <= self.p_question <= 1.0:
            raise ValueError("p_question must lie in [0, 1]")
        if self.rounds < 1:
            raise ValueError("rounds must be positive")


def mc_estimate(cfg: McConfig) -> adversary.CheatReport:
    """Run a scenario for the configured rounds and report the frequency."""
    spec = adversary.SCENARIOS[cfg.scenario]
    sample = spec.simulate(cfg.p_question, cfg.rounds, cfg.seed)
    estimate = float(sample.success.mean())
    half_width = Z99 * math.sqrt(max(0.0, estimate * (1.0 - estimate)) / cfg.rounds)
    events = int(sample.certainty.sum())
    return adversary.CheatReport(
        success_probability=estimate,
        certainty_fraction=events / cfg.rounds,
        method="monte-carlo",
        ci99=half_width,
        rounds=cfg.rounds,
        certainty_events=events,
    )


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_parameters: tuple
    grid_resolution: tuple
    evaluations: int
    rejected: int = 0
    flat: bool = False


def _sphere_directions(phi: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Unit vectors for polar angle phi and azimuth lam, shape (..., 3)."""
    sin_phi = np.sin(phi)
    return np.stack(
        [sin_phi * np.cos(lam), sin_phi * np.sin(lam), np.cos(phi)], axis=-1
    )


def _bloch_angles(vector: np.ndarray) -> list[float]:
    """(phi, lam) of a Bloch vector's direction; z-axis when near zero."""
    norm = float(np.linalg.norm(vector))
    if norm < 1e-12:
        return [0.0, 0.0]
    unit = vector / norm
    return [float(math.acos(np.clip(unit[2], -1.0, 1.0))), float(math.atan2(unit[1], unit[0]) % (2.0 * math.pi))]


def _direction_objective_max(
    weight: np.ndarray, offset: float, grid_steps: tuple[int, int]
) -> tuple[float, tuple[float, float], int]:
    """Maximize offset + weight . n(phi, lam) / 2 over the Bloch sphere."""
    n_phi, n_lam = grid_steps
    phis = np.linspace(0.0, math.pi, n_phi, endpoint=False)
    lams = np.linspace(0.0, 2.0 * math.pi, n_lam, endpoint=False)
    grid_lam, grid_phi = np.meshgrid(lams, phis)
    flat_phi, flat_lam = grid_phi.ravel(), grid_lam.ravel()

    def evaluate(indices: np.ndarray) -> np.ndarray:
        directions = _sphere_directions(flat_phi[indices], flat_lam[indices])
        return offset + directions @ weight / 2.0

    chunk_count = max(1, worker_count())
    chunks = np.array_split(np.arange(flat_phi.size), chunk_count)
    best_value, best_index = _chunked_max(evaluate, chunks)
    evaluations = flat_phi.size

    best_phi, best_lam = float(flat_phi[best_index]), float(flat_lam[best_index])
    step_phi, step_lam = math.pi / n_phi, 2.0 * math.pi / n_lam
    for _ in range(MINERR_REFINE_HALVINGS):
        step_phi /= 2.0
        step_lam /= 2.0
        local_phi = best_phi + step_phi * np.array([-1.0, 0.0, 1.0])
        local_lam = best_lam + step_lam * np.array([-1.0, 0.0, 1.0])
        mesh_lam, mesh_phi = np.meshgrid(local_lam, local_phi)
        directions = _sphere_directions(mesh_phi.ravel(), mesh_lam.ravel())
        values = offset + directions @ weight / 2.0
        evaluations += values.size
        pick = int(np.argmax(values))
        if values[pick] > best_value:
            best_value = float(values[pick])
            best_phi = float(mesh_phi.ravel()[pick])
            best_lam = float(mesh_lam.ravel()[pick])
    return best_value, (best_phi, best_lam), evaluations


def oracle_qubit_minerr(
    rho0,
    rho1,
    priors: tuple[float, float] = (0.5, 0.5),
    grid_steps: tuple[int, int] = MINERR_GRID,
) -> OracleResult:
    """Best two-outcome projective measurement found by Bloch-angle scan.

    Rank-1 pairs {P(n), 1 - P(n)} are scanned over the sphere and locally
    refined; the degenerate projective pairs {1, 0} (always guess one
    state) enter as explicit candidates.  The result must agree with the
    eigenvalue formula for the minimum error.
    """
    p0, p1 = priors
    if abs(p0 + p1 - 1.0) > 1e-12:
        raise ValueError("priors must sum to 1")
    weight = p0 * qmath.bloch_vector(rho0) - p1 * qmath.bloch_vector(rho1)
    best_value, best_angles, evaluations = _direction_objective_max(
        weight, 0.5, grid_steps
    )
    parameters: tuple = best_angles
    for trivial_value, label in ((p0, "always-0"), (p1, "always-1")):
        evaluations += 1
        if trivial_value > best_value:
            best_value, parameters = float(trivial_value), (label,)
    return OracleResult(best_value, parameters, grid_steps, evaluations)


def _three_outcome_objective(
    params_block: np.ndarray, priors: np.ndarray, blochs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Success of POVMs (c1|v1><v1|, c2|v2><v2|, 1 - rest) in Bloch form.

    Returns (values, valid); candidates whose repaired third element is
    not PSD are marked invalid with value -1.
    """
    c1, phi1, lam1 = params_block[:, 0], params_block[:, 1], params_block[:, 2]
    c2, phi2, lam2 = params_block[:, 3], params_block[:, 4], params_block[:, 5]
    n1 = _sphere_directions(phi1, lam1)
    n2 = _sphere_directions(phi2, lam2)
    trace_rest = 1.0 - (c1 + c2) / 2.0
    rest_vector = -(c1[:, None] * n1 + c2[:, None] * n2) / 2.0
    valid = trace_rest >= np.linalg.norm(rest_vector, axis=1)
    value = (
        priors[0] * c1 * (1.0 + n1 @ blochs[0]) / 2.0
        + priors[1] * c2 * (1.0 + n2 @ blochs[1]) / 2.0
        + priors[2] * (trace_rest + rest_vector @ blochs[2])
    )
    return np.where(valid, value, -1.0), valid


_THREE_PARAM_LO = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
_THREE_PARAM_HI = np.array([2.0, math.pi, 2.0 * math.pi, 2.0, math.pi, 2.0 * math.pi])

_INNER_RAY_GRID = 91
_INNER_RAY_REFINE = 35


def _best_weights_given_directions(
    angles_block: np.ndarray,
    priors: np.ndarray,
    blochs: np.ndarray,
    precise: bool = True,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact element weights for fixed Bloch directions.

    For fixed directions the success is linear in (c1, c2) and the
    feasible weights form a convex cone section, so the optimum sits at
    the origin or on the completeness boundary; every boundary point is
    the endpoint of a ray (c1, c2) = s(cos psi, sin psi), which reduces
    the weight choice to a one-dimensional maximization over psi.
    Returns (values, c1, c2) per candidate row of (phi1, lam1, phi2, lam2).
    With ``precise`` False the psi maximization stays on the coarse grid
    (cheap, smoothly biased; fine for line-search comparisons).
    """
    n1 = _sphere_directions(angles_block[:, 0], angles_block[:, 1])
    n2 = _sphere_directions(angles_block[:, 2], angles_block[:, 3])
    gain1 = priors[0] * (1.0 + n1 @ blochs[0]) / 2.0 - priors[2] * (1.0 + n1 @ blochs[2]) / 2.0
    gain2 = priors[1] * (1.0 + n2 @ blochs[1]) / 2.0 - priors[2] * (1.0 + n2 @ blochs[2]) / 2.0
    cross = np.einsum("kd,kd->k", n1, n2)

    def ray_gain(psi: np.ndarray) -> np.ndarray:
        cos_psi, sin_psi = np.cos(psi), np.sin(psi)
        # |c1 n1 + c2 n2| along the unit ray, then scale to the boundary.
        mixed = np.sqrt(
            np.maximum(
                cos_psi**2 + sin_psi**2 + 2.0 * cos_psi * sin_psi * cross[:, None], 0.0
            )
        )
        scale = 2.0 / (mixed + cos_psi + sin_psi)
        return scale * (gain1[:, None] * cos_psi + gain2[:, None] * sin_psi)

    psi_grid = np.linspace(0.0, math.pi / 2.0, _INNER_RAY_GRID)[None, :]
    coarse = ray_gain(psi_grid)
    pick = np.argmax(coarse, axis=1)
    psi_best = psi_grid[0][pick]
    if precise:
        step = (math.pi / 2.0) / (_INNER_RAY_GRID - 1)
        lo = np.clip(psi_best - step, 0.0, math.pi / 2.0)[:, None]
        hi = np.clip(psi_best + step, 0.0, math.pi / 2.0)[:, None]
        for _ in range(_INNER_RAY_REFINE):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            lower = ray_gain(m1) < ray_gain(m2)
            lo = np.where(lower, m1, lo)
            hi = np.where(lower, hi, m2)
        psi_best = ((lo + hi) / 2.0)[:, 0]
    best_gain = ray_gain(psi_best[:, None])[:, 0]

    cos_b, sin_b = np.cos(psi_best), np.sin(psi_best)
    mixed = np.sqrt(np.maximum(cos_b**2 + sin_b**2 + 2.0 * cos_b * sin_b * cross, 0.0))
    scale = 2.0 / (mixed + cos_b + sin_b)
    take = best_gain > 0.0
    values = priors[2] + np.where(take, best_gain, 0.0)
    c1 = np.where(take, scale * cos_b, 0.0)
    c2 = np.where(take, scale * sin_b, 0.0)
    return values, c1, c2


def oracle_three_outcome(
    states,
    priors,
    samples: int = THREE_OUTCOME_SAMPLES,
    refine_iters: int = THREE_OUTCOME_REFINE,
    seed: int = 7,
) -> OracleResult:
    """Best three-outcome qubit POVM found by random restarts + refinement.

    Two elements are free subnormalized rank-1 operators; the deficit is
    projected onto the third element and the candidate is rejected if
    that loses positivity.  Every rotation of which state receives the
    repaired element is searched.  Refinement runs cyclic line searches
    over the two Bloch directions with the element weights re-solved
    exactly at every step.
    """
    priors = np.asarray(priors, dtype=float)
    if priors.size != 3 or len(states) != 3:
        raise ValueError("exactly three states and priors required")
    if abs(priors.sum() - 1.0) > 1e-12:
        raise ValueError("priors must sum to 1")
    blochs_all = np.array([qmath.bloch_vector(s) for s in states])

    rng = np.random.default_rng(seed)
    best_value, best_parameters = -np.inf, ()
    evaluations = rejected = 0
    angle_lo = np.array([0.0, 0.0, 0.0, 0.0])
    angle_hi = np.array([math.pi, 2.0 * math.pi, math.pi, 2.0 * math.pi])

    for rotation in range(3):
        order = [(rotation + k) % 3 for k in range(3)]
        pri = priors[order]
        blochs = blochs_all[order]
        draws = rng.random((samples, 6))
        population = _THREE_PARAM_LO + draws * (_THREE_PARAM_HI - _THREE_PARAM_LO)
        raw_values, valid = _three_outcome_objective(population, pri, blochs)
        evaluations += samples
        rejected += int((~valid).sum())

        # Preselect starts by the weight-optimized value; always include the
        # structured seed pointing each element at its own state.
        candidate_angles = np.vstack(
            [population[:, [1, 2, 4, 5]], _bloch_angles(blochs[0]) + _bloch_angles(blochs[1])]
        )
        start_values, _, _ = _best_weights_given_directions(candidate_angles, pri, blochs)
        evaluations += candidate_angles.shape[0]
        keep = min(8, candidate_angles.shape[0])
        top = np.argsort(start_values)[::-1][:keep]
        angles = candidate_angles[top].copy()
        values, c1, c2 = _best_weights_given_directions(angles, pri, blochs)
        # Windows start covering the whole sphere per element so the first
        # sweeps are global; they shrink geometrically afterwards.
        window = np.tile(np.array([math.pi, 2.0 * math.pi, math.pi, 2.0 * math.pi]), (keep, 1))

        scan_offsets = np.linspace(-0.5, 0.5, 13)
        for sweep in range(refine_iters):
            precise = sweep >= refine_iters - 2
            for element in range(2):
                phi_coord, lam_coord = 2 * element, 2 * element + 1
                # Joint direction scan: the weight-maximized objective
                # couples the two angles of one element, so 1-D moves alone
                # get stuck between basins.
                grid_phi = np.clip(
                    angles[:, phi_coord][:, None] + window[:, phi_coord][:, None] * scan_offsets,
                    angle_lo[phi_coord],
                    angle_hi[phi_coord],
                )
                grid_lam = np.clip(
                    angles[:, lam_coord][:, None] + window[:, lam_coord][:, None] * scan_offsets,
                    angle_lo[lam_coord],
                    angle_hi[lam_coord],
                )
                cells = scan_offsets.size * scan_offsets.size
                scan = np.repeat(angles, cells, axis=0)
                pairs_phi = np.repeat(grid_phi, scan_offsets.size, axis=1)
                pairs_lam = np.tile(grid_lam, (1, scan_offsets.size))
                scan[:, phi_coord] = pairs_phi.ravel()
                scan[:, lam_coord] = pairs_lam.ravel()
                scan_values, _, _ = _best_weights_given_directions(scan, pri, blochs, False)
                evaluations += scan.shape[0]
                pick = np.argmax(scan_values.reshape(keep, cells), axis=1)
                rows = np.arange(keep)
                angles[:, phi_coord] = pairs_phi.reshape(keep, cells)[rows, pick]
                angles[:, lam_coord] = pairs_lam.reshape(keep, cells)[rows, pick]
                for coord in (phi_coord, lam_coord):
                    half_cell = window[:, coord] * (scan_offsets[1] - scan_offsets[0])
                    lo = np.clip(angles[:, coord] - half_cell, angle_lo[coord], angle_hi[coord])
                    hi = np.clip(angles[:, coord] + half_cell, angle_lo[coord], angle_hi[coord])
                    for _ in range(14):
                        m1 = lo + (hi - lo) / 3.0
                        m2 = hi - (hi - lo) / 3.0
                        trial = np.vstack([angles, angles])
                        trial[:keep, coord] = m1
                        trial[keep:, coord] = m2
                        both, _, _ = _best_weights_given_directions(trial, pri, blochs, precise)
                        evaluations += 2 * keep
                        lower = both[:keep] < both[keep:]
                        lo = np.where(lower, m1, lo)
                        hi = np.where(lower, hi, m2)
                    angles[:, coord] = (lo + hi) / 2.0
            values, c1, c2 = _best_weights_given_directions(angles, pri, blochs)
            evaluations += keep
            window *= 0.5

        local = int(np.argmax(values))
        if values[local] > best_value:
            best_value = float(values[local])
            best_parameters = (
                rotation,
                float(c1[local]),
                *angles[local, :2].tolist(),
                float(c2[local]),
                *angles[local, 2:].tolist(),
            )

    return OracleResult(
        best_value,
        best_parameters,
        (samples, refine_iters),
        evaluations,
        rejected=rejected,
    )


FLAT_ATOL = 1e-9


def oracle_cheat_state(
    p_question: float,
    objective: str = "two_outcome",
    a_grid_step: float = A_GRID_STEP,
    three_outcome_samples: int = 64,
    three_outcome_refine: int = 40,
    seed: int = 11,
) -> OracleResult:
    """Scan the cheat-state coefficient a for the best objective value.

    The two-outcome objective is the exact minimum-error value between
    the steered bit / no-bit states; the three-outcome objective invokes
    the POVM search per grid point.
    """
    if objective not in adversary.OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    count = int(round(1.0 / a_grid_step))
    a_values = np.linspace(0.0, 1.0, count + 1)
    values = np.empty(a_values.size)
    evaluations = 0
    for i, a in enumerate(a_values):
        if objective == "two_outcome":
            values[i] = qmath.helstrom_success(
                p_question,
                adversary.rho_no_bit(a),
                1.0 - p_question,
                adversary.rho_bit(a),
            )
            evaluations += 1
        else:
            priors, states = adversary.three_state_ensemble(p_question, a)
            result = oracle_three_outcome(
                states,
                priors,
                samples=three_outcome_samples,
                refine_iters=three_outcome_refine,
                seed=seed + i,
            )
            values[i] = result.best_value
            evaluations += result.evaluations
    best = int(np.argmax(values))
    spread = float(values.max() - values.min())
    return OracleResult(
        float(values[best]),
        (float(a_values[best]),),
        (a_grid_step,),
        evaluations,
        flat=spread < FLAT_ATOL,
    )


def oracle_alice_input_state(
    theta: float,
    target: str = "bit",
    grid_steps: tuple[int, int] = MINERR_GRID,
) -> OracleResult:
    """Best pure input state for forcing one receiver outcome class."""
    povm = protocols.usd_povm(theta)
    if target == "bit":
        element = povm.element("Bit0") + povm.element("Bit1")
    elif target == "no_bit":
        element = povm.element("NoBit")
    else:
        raise ValueError("target must be 'bit' or 'no_bit'")
    offset = float(np.trace(element).real) / 2.0
    weight = qmath.bloch_vector(element)  # trace part handled by offset
    best_value, best_angles, evaluations = _direction_objective_max(
        weight, offset, grid_steps
    )
    return OracleResult(
        qmath.clip_probability(best_value), best_angles, grid_steps, evaluations
    )


# ---------------------------------------------------------------------------
# Verification battery


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


MC_P_VALUES = (0.1, 1.0 / 3.0, 5.0 / 13.0, 0.5, 0.75)
MC_ROUNDS = 1_000_000
BATTERY_SEEDS = 100
BATTERY_ROUNDS = 100_000
BATTERY_P = 0.5


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def check_spot_values(inject_error: bool = False) -> CheckResult:
    target_b = (2.0 + math.sqrt(3.0)) / 4.0 + (1e-3 if inject_error else 0.0)
    deviations = [
        abs(analytics.bob_cheat_value(0.5) - target_b),
        abs(analytics.alice_monitor_value(0.5) - 0.75),
        abs(analytics.alice_three_state_value(0.4) - 0.64),
        abs(analytics.alice_monitor_value(1.0 / 3.0) - 2.0 / 3.0),
        abs(analytics.alice_two_state_value(1.0 / 3.0) - 2.0 / 3.0),
        abs(analytics.alice_three_state_value(1.0 / 3.0) - 2.0 / 3.0),
    ]
    worst = max(deviations)
    return _check("spot-values", worst <= 1e-12, f"max deviation {worst:.3e}")


def check_curve_orderings() -> CheckResult:
    failures = []
    for p in np.linspace(0.0, 1.0, 101):
        point = analytics.quantum_curves(float(p))
        values = [
            point.a_guess,
            point.a_no_test,
            point.a_monitor,
            point.a_full_two_state,
            point.a_full_three_state,
            point.b_guess,
            point.b_cheat,
        ]
        if any(not -1e-12 <= v <= 1.0 + 1e-12 for v in values):
            failures.append(f"value outside [0,1] at p={p:.2f}")
        if point.a_monitor != point.a_full_two_state:
            failures.append(f"monitoring != two-state at p={p:.2f}")
        if point.b_cheat < point.b_guess - 1e-12:
            failures.append(f"b_cheat < b_guess at p={p:.2f}")
        if point.a_full_three_state > point.a_monitor + 1e-12:
            failures.append(f"three-state above two-state at p={p:.2f}")
        if p <= 1.0 / 3.0 + 1e-12:
            guess = analytics.alice_guess_value(float(p))
            for name, value in (
                ("monitor", point.a_monitor),
                ("two-state", point.a_full_two_state),
                ("three-state", point.a_full_three_state),
            ):
                if abs(value - guess) > 1e-12:
                    failures.append(f"{name} != guessing at p={p:.2f}")
    endpoint = analytics.quantum_curves(1.0)
    if abs(endpoint.b_cheat - 0.5) > 1e-12 or abs(endpoint.a_monitor - 1.0) > 1e-12:
        failures.append("endpoint convention at p=1 broken")
    detail = failures[0] if failures else "orderings hold on the 0.01 grid"
    return _check("curve-orderings", not failures, detail)


def check_crossover() -> CheckResult:
    root = analytics.advantage_crossover()
    deviation = abs(root - 5.0 / 13.0)
    ok = deviation <= 1e-9
    for p in (0.1, 0.25, 0.35):
        b_classical = analytics.classical_tradeoff(p, analytics.alice_monitor_value(p))
        ok &= analytics.bob_cheat_value(p) < b_classical
    for p in (0.45, 0.6, 0.9):
        b_classical = analytics.classical_tradeoff(p, analytics.alice_monitor_value(p))
        ok &= analytics.bob_cheat_value(p) > b_classical
    return _check("crossover", ok, f"crossover = {root:.9f} (target 5/13)")


def check_tradeoff_identity() -> CheckResult:
    worst = 0.0
    for p in np.linspace(0.05, 0.95, 19):
        lo, hi = analytics.feasible_send_range(float(p))
        for s in np.linspace(lo, hi, 9):
            a_value, b_value = analytics.classical_values(float(s), (1.0 - p) / s)
            worst = max(worst, abs(b_value - 0.5 * (3.0 - p - a_value)))
    try:
        analytics.classical_tradeoff(0.5, 0.1)
        rejected = False
    except analytics.InfeasibleTradeoffError:
        rejected = True
    passed = worst < 1e-12 and rejected
    return _check("tradeoff-identity", passed, f"max residual {worst:.3e}")


def check_coinflip_identities() -> CheckResult:
    worst = 0.0
    for y in np.linspace(0.0, 1.0, 11):
        for p in np.linspace(0.0, 1.0, 21):
            worst = max(worst, analytics.coin_flip_cheats(float(y), float(p)).tradeoff_residual)
    return _check("coinflip-identities", worst < 1e-12, f"max residual {worst:.3e}")


def check_generalized_residual(seed: int = 1234, samples: int = 10_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        k = int(rng.integers(1, 6))
        weights = rng.random(k)
        weights /= weights.sum()
        branches = [
            (float(w), float(rng.random()), float(0.5 + 0.5 * rng.random()))
            for w in weights
        ]
        worst = max(worst, analytics.generalized_classical(branches).tradeoff_residual)
    return _check(
        "generalized-tradeoff", worst < 1e-12, f"max residual {worst:.3e} over {samples} mixtures"
    )


def check_appendix_slack() -> CheckResult:
    ok = True
    for p in np.linspace(0.5, 1.0, 51):
        comparison = analytics.compare_trivial_mixture(float(p))
        ok &= comparison.slack <= 1e-15
        expected = "equal" if p <= 0.5 else "send-read protocol better"
        ok &= comparison.verdict == expected
    ok &= analytics.compare_trivial_mixture(0.25).verdict == "equal"
    return _check("appendix-slack", ok, "slack non-positive above p = 1/2")


def check_srm_vs_optimum() -> CheckResult:
    failures = []
    for p in np.linspace(0.0, 1.0, 101):
        srm = analytics.three_state_srm_bound(float(p))
        optimum = analytics.alice_three_state_value(float(p))
        if srm > optimum + 1e-12:
            failures.append(f"SRM above optimum at p={p:.2f}")
        elif optimum - srm <= 1e-6:
            anchor = max(float(p), 1.0 - float(p))
            if abs(srm - anchor) > 1e-9 or abs(optimum - anchor) > 1e-9:
                failures.append(f"unexpected equality at p={p:.2f}")
    detail = failures[0] if failures else "SRM strictly below optimum except at collapse points"
    return _check("srm-vs-optimum", not failures, detail)


def check_two_state_consistency() -> CheckResult:
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 51):
        for a in np.linspace(0.0, 1.0, 21):
            exact = qmath.helstrom_success(
                float(p), adversary.rho_no_bit(float(a)), 1.0 - float(p), adversary.rho_bit(float(a))
            )
            worst = max(worst, abs(exact - analytics.alice_two_state_value(float(p), float(a))))
    return _check("two-state-consistency", worst < 1e-12, f"max deviation {worst:.3e}")


def check_srm_measurement_match() -> CheckResult:
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 101):
        priors, states = adversary.mirror_symmetric_ensemble(float(p))
        worst = max(
            worst,
            abs(qmath.srm_success(priors, states) - analytics.three_state_srm_bound(float(p))),
        )
    for a in (0.3, 0.6, 0.9):
        for p in (0.25, 0.5, 0.75):
            priors, states = adversary.three_state_ensemble(p, a)
            worst = max(
                worst,
                abs(qmath.srm_success(priors, states) - analytics.three_state_srm_bound(p, a)),
            )
    return _check("srm-measurement-match", worst < 1e-9, f"max deviation {worst:.3e}")


def check_oracle_minerr_points() -> CheckResult:
    params = protocols.ProtocolParams.from_p_question(0.5)
    psi0, psi1 = protocols.honest_states(params.theta)
    pair = oracle_qubit_minerr(qmath.density(psi0), qmath.density(psi1))
    deviation = abs(pair.best_value - (2.0 + math.sqrt(3.0)) / 4.0)

    steering = oracle_qubit_minerr(
        adversary.rho_no_bit(adversary.INV_SQRT2),
        adversary.rho_bit(adversary.INV_SQRT2),
    )
    deviation = max(deviation, abs(steering.best_value - 0.75))

    same = oracle_qubit_minerr(qmath.density(psi0), qmath.density(psi0))
    deviation = max(deviation, abs(same.best_value - 0.5))
    return _check("oracle-minerr-points", deviation <= 1e-6, f"max deviation {deviation:.3e}")


def _random_density(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real


def check_oracle_minerr_random(seed: int = 99, pairs: int = 50) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        rho0, rho1 = _random_density(rng), _random_density(rng)
        p0 = float(rng.random())
        exact = qmath.helstrom_success(p0, rho0, 1.0 - p0, rho1)
        found = oracle_qubit_minerr(rho0, rho1, (p0, 1.0 - p0)).best_value
        worst = max(worst, abs(found - exact))
    return _check(
        "oracle-minerr-random", worst <= 1e-6, f"max |grid - eigenvalue| {worst:.3e} over {pairs} pairs"
    )


THREE_OUTCOME_TARGETS = (0.35, 0.4, 0.5, 0.75)


def check_oracle_three_outcome(seed: int = 7) -> CheckResult:
    worst = 0.0
    srm_violation = 0.0
    for p in THREE_OUTCOME_TARGETS:
        priors, states = adversary.mirror_symmetric_ensemble(p)
        found = oracle_three_outcome(states, priors, seed=seed).best_value
        worst = max(worst, abs(found - analytics.alice_three_state_value(p)))
        srm_violation = max(srm_violation, qmath.srm_success(priors, states) - found)
    passed = worst <= 1e-4 and srm_violation <= 1e-4
    return _check(
        "oracle-three-outcome",
        passed,
        f"max deviation {worst:.3e}, SRM excess {srm_violation:.3e}",
    )


def check_oracle_cheat_state() -> CheckResult:
    failures = []
    for p in (0.4, 0.5, 0.75):
        result = oracle_cheat_state(p)
        if abs(result.best_parameters[0] - adversary.INV_SQRT2) >= A_GRID_STEP:
            failures.append(f"argmax {result.best_parameters[0]:.4f} off at p={p}")
        # The grid misses the exact maximizer by up to half a step, which
        # costs O(step^2) in value.
        if abs(result.best_value - analytics.alice_two_state_value(p)) > 1e-6:
            failures.append(f"value off at p={p}")
    flat = oracle_cheat_state(0.2)
    if not flat.flat:
        failures.append("objective not flat at p=0.2")
    if abs(flat.best_value - 0.8) > FLAT_ATOL:
        failures.append("flat value != 0.8 at p=0.2")
    detail = failures[0] if failures else "argmax at 1/sqrt(2); flat below p=1/3"
    return _check("oracle-cheat-state", not failures, detail)


def check_oracle_input_state() -> CheckResult:
    theta = math.pi / 6.0
    bit = oracle_alice_input_state(theta, "bit")
    no_bit = oracle_alice_input_state(theta, "no_bit")
    deviation = max(abs(bit.best_value - 1.0), abs(no_bit.best_value - 2.0 / 3.0))
    # The no-bit maximizer must be |0> (polar angle 0), the bit maximizer |1>.
    deviation = max(deviation, abs(no_bit.best_parameters[0]))
    deviation = max(deviation, abs(bit.best_parameters[0] - math.pi))
    orthogonal = oracle_alice_input_state(math.pi / 4.0, "no_bit")
    deviation = max(deviation, abs(orthogonal.best_value))
    return _check("oracle-input-state", deviation <= 1e-6, f"max deviation {deviation:.3e}")


def mc_agreement_runs(seed: int = 2024) -> list[tuple[str, float, adversary.CheatReport, float]]:
    """One fixed-seed run per (scenario, p_question) pair in the registry."""
    runs = []
    for name, spec in adversary.SCENARIOS.items():
        for p in MC_P_VALUES:
            report = mc_estimate(McConfig(name, p, MC_ROUNDS, seed))
            runs.append((name, p, report, spec.reference(p)))
    return runs


def check_mc_agreement(seed: int = 2024) -> CheckResult:
    failures = []
    for name, p, report, reference in mc_agreement_runs(seed):
        if abs(report.success_probability - reference) > CI_WIDTHS * (report.ci99 or 0.0) + 1e-15:
            failures.append(f"{name} at p={p:.4f}")
    detail = (
        f"{len(failures)} excursions: {failures[:3]}"
        if failures
        else f"{len(adversary.SCENARIOS) * len(MC_P_VALUES)} runs within {CI_WIDTHS:g} CI half-widths"
    )
    return _check("mc-agreement", not failures, detail)


def check_mc_battery(seed: int = 5150) -> CheckResult:
    total = excursions = 0
    for name, spec in adversary.SCENARIOS.items():
        reference = spec.reference(BATTERY_P)
        for offset in range(BATTERY_SEEDS):
            report = mc_estimate(McConfig(name, BATTERY_P, BATTERY_ROUNDS, seed + offset))
            total += 1
            if abs(report.success_probability - reference) > CI_WIDTHS * (report.ci99 or 0.0) + 1e-15:
                excursions += 1
    rate = excursions / total
    return _check(
        "mc-battery", rate < 0.01, f"{excursions}/{total} excursions ({rate:.2%})"
    )


def check_sessions(seed: int = 31) -> CheckResult:
    params = protocols.ProtocolParams.from_p_question(0.5)
    cfg = protocols.FullTestingConfig(fraction_tested=0.1, rounds=20_000)
    failures = []

    honest = protocols.full_testing_session(
        params, cfg, protocols.HonestAliceSource(params), seed
    )
    if honest.aborted:
        failures.append("honest session aborted")
    frequency = honest.frequency(protocols.RoundOutcome.NO_BIT)
    sigma = math.sqrt(0.25 / honest.untested_rounds)
    if abs(frequency - 0.5) > 4.0 * sigma:
        failures.append(f"honest no-bit frequency {frequency:.4f}")

    entangled = protocols.full_testing_session(
        params, cfg, adversary.EntangledAliceSource(params), seed + 1
    )
    if entangled.aborted:
        failures.append("entangled session aborted")

    liar = protocols.full_testing_session(
        params,
        protocols.FullTestingConfig(fraction_tested=0.1, rounds=2_000),
        adversary.SendOneAliceSource(),
        seed + 2,
    )
    if not liar.aborted:
        failures.append("|1>-sender passed the tests")

    detail = failures[0] if failures else "session behaviour as expected"
    return _check("sessions", not failures, detail)


def check_determinism(seed: int = 404) -> CheckResult:
    cfg = McConfig("bob-helstrom", 0.5, 50_000, seed)
    identical = mc_estimate(cfg) == mc_estimate(cfg)
    priors, states = adversary.mirror_symmetric_ensemble(0.5)
    first = oracle_three_outcome(states, priors, samples=40, refine_iters=30, seed=seed)
    second = oracle_three_outcome(states, priors, samples=40, refine_iters=30, seed=seed)
    identical &= first == second
    return _check("determinism", identical, "repeated runs are bit-identical")


def quick_checks(inject_error: bool = False) -> list[CheckResult]:
    """Closed-form identities only; runs in a few seconds."""
    return [
        check_spot_values(inject_error),
        check_curve_orderings(),
        check_crossover(),
        check_tradeoff_identity(),
        check_coinflip_identities(),
        check_generalized_residual(),
        check_appendix_slack(),
        check_srm_vs_optimum(),
        check_two_state_consistency(),
        check_srm_measurement_match(),
    ]


def full_checks(seed: int = 2024, inject_error: bool = False) -> list[CheckResult]:
    """Everything: identities, oracles, Monte Carlo and sessions."""
    return quick_checks(inject_error) + [
        check_oracle_minerr_points(),
        check_oracle_minerr_random(),
        check_oracle_three_outcome(),
        check_oracle_cheat_state(),
        check_oracle_input_state(),
        check_mc_agreement(seed),
        check_mc_battery(),
        check_sessions(),
        check_determinism(),
    ]
