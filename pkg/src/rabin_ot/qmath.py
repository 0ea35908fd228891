"""Small-dimension complex linear algebra and measurement theory.

Operators and state vectors are plain complex numpy arrays (dimensions 2-4).
Hermiticity, positivity and unit trace are checkable predicates, never
silently assumed.  All functions are pure; all container types are frozen
and hold read-only arrays, so everything here is safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10
TRACE_ATOL = 1e-12
COMPLETENESS_ATOL = 1e-10
KERNEL_CUTOFF = 1e-10
PROB_CLIP_ATOL = 1e-9
UNIT_NORM_ATOL = 1e-12


def as_operator(m) -> np.ndarray:
    """Coerce to a square complex matrix."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def is_hermitian(m, atol: float = PSD_ATOL) -> bool:
    arr = as_operator(m)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= atol)


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(as_operator(m))[0])


def pure_state(amplitudes) -> np.ndarray:
    """Validate a unit vector and return it as a complex array."""
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1:
        raise ValueError("state vector must be one-dimensional")
    if abs(np.linalg.norm(vec) - 1.0) > UNIT_NORM_ATOL:
        raise ValueError("state vector is not normalized")
    return vec


def density(psi) -> np.ndarray:
    """Rank-1 density matrix |psi><psi|."""
    vec = pure_state(psi)
    return np.outer(vec, vec.conj())


def density_matrix_violations(rho, eig_atol: float = 1e-10) -> list[str]:
    """List of violated density-matrix predicates (empty means valid)."""
    arr = as_operator(rho)
    problems = []
    if not is_hermitian(arr, HERMITIAN_ATOL):
        problems.append("not Hermitian")
    elif min_eigenvalue(arr) < -eig_atol:
        problems.append(f"negative eigenvalue {min_eigenvalue(arr):.3e}")
    if abs(np.trace(arr).real - 1.0) > TRACE_ATOL or abs(np.trace(arr).imag) > TRACE_ATOL:
        problems.append(f"trace {np.trace(arr):.6g} != 1")
    return problems


def is_density_matrix(rho) -> bool:
    return not density_matrix_violations(rho)


def clip_probability(p: float, atol: float = PROB_CLIP_ATOL) -> float:
    """Clip to [0, 1]; a clip larger than ``atol`` is a contract violation."""
    if p < -atol or p > 1.0 + atol:
        raise ValueError(f"value {p!r} is not a probability up to rounding")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class Povm:
    """Labelled positive operators summing to identity."""

    labels: tuple[str, ...]
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.elements):
            raise ValueError("labels and elements must have equal length")
        if not self.elements:
            raise ValueError("POVM needs at least one element")
        mats = tuple(_frozen(as_operator(e)) for e in self.elements)
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise ValueError(f"dimension mismatch among POVM elements: {sorted(dims)}")
        object.__setattr__(self, "elements", mats)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def element(self, label: str) -> np.ndarray:
        return self.elements[self.labels.index(label)]


@dataclass(frozen=True)
class PovmCheck:
    passed: bool
    failures: tuple[str, ...]
    completeness_residual: float


def validate_povm(povm: Povm, atol: float = PSD_ATOL) -> PovmCheck:
    """Check positivity of each element and completeness of the set."""
    failures = []
    for idx, element in enumerate(povm.elements):
        if not is_hermitian(element, atol):
            failures.append(f"element {idx} ({povm.labels[idx]}) is not Hermitian")
        elif min_eigenvalue(element) < -atol:
            failures.append(
                f"element {idx} ({povm.labels[idx]}) has eigenvalue "
                f"{min_eigenvalue(element):.3e}"
            )
    residual_matrix = sum(povm.elements) - np.eye(povm.dim)
    residual = float(np.max(np.abs(residual_matrix)))
    if residual > COMPLETENESS_ATOL:
        failures.append(f"completeness residual {residual:.3e}")
    return PovmCheck(not failures, tuple(failures), residual)


def born_probabilities(state, povm: Povm) -> dict[str, float]:
    """Outcome probabilities tr(rho Pi_i), clipped to [0, 1]."""
    rho = as_operator(state)
    if rho.shape[0] != povm.dim:
        raise ValueError(f"state dimension {rho.shape[0]} != POVM dimension {povm.dim}")
    probs = {
        label: clip_probability(float(np.trace(rho @ element).real))
        for label, element in zip(povm.labels, povm.elements)
    }
    total = sum(probs.values())
    if abs(total - 1.0) > COMPLETENESS_ATOL:
        raise ValueError(f"outcome probabilities sum to {total!r}, not 1")
    return probs


def helstrom_success(p0: float, rho0, p1: float, rho1) -> float:
    """Minimum-error success probability for two states with given priors.

    Equals (1 + ||p0*rho0 - p1*rho1||_1) / 2, evaluated through the
    eigenvalues of the Hermitian weighted difference.
    """
    if abs(p0 + p1 - 1.0) > TRACE_ATOL:
        raise ValueError("priors must sum to 1")
    a, b = as_operator(rho0), as_operator(rho1)
    if a.shape != b.shape:
        raise ValueError("state dimensions do not match")
    for m in (a, b):
        if not is_hermitian(m):
            raise ValueError("states must be Hermitian")
    eigenvalues = np.linalg.eigvalsh(p0 * a - p1 * b)
    return clip_probability(0.5 * (1.0 + float(np.abs(eigenvalues).sum())))


def psd_sqrt_and_pinv_sqrt(
    m, kernel_cutoff: float = KERNEL_CUTOFF
) -> tuple[np.ndarray, np.ndarray]:
    """Square root and pseudo-inverse square root of a PSD matrix.

    Eigenvalues below ``kernel_cutoff`` are treated as the kernel: the
    pseudo-inverse square root acts as zero there.
    """
    arr = as_operator(m)
    if not is_hermitian(arr):
        raise ValueError("matrix must be Hermitian")
    eigenvalues, vectors = np.linalg.eigh(arr)
    if eigenvalues[0] < -kernel_cutoff:
        raise ValueError(f"matrix is not PSD: eigenvalue {eigenvalues[0]:.3e}")
    clipped = np.clip(eigenvalues, 0.0, None)
    sqrt = (vectors * np.sqrt(clipped)) @ vectors.conj().T
    inv = np.where(clipped >= kernel_cutoff, 1.0 / np.sqrt(np.where(clipped > 0, clipped, 1.0)), 0.0)
    pinv_sqrt = (vectors * inv) @ vectors.conj().T
    return sqrt, pinv_sqrt


NULL_OUTCOME = "Null"


def _validated_ensemble(priors, states) -> tuple[np.ndarray, list[np.ndarray]]:
    priors = np.asarray(priors, dtype=float)
    mats = [as_operator(s) for s in states]
    if priors.size == 0 or not mats:
        raise ValueError("ensemble must not be empty")
    if priors.size != len(mats):
        raise ValueError("one prior per state required")
    if abs(priors.sum() - 1.0) > TRACE_ATOL:
        raise ValueError("priors must sum to 1")
    if len({m.shape[0] for m in mats}) != 1:
        raise ValueError("dimension mismatch in ensemble")
    return priors, mats


def srm_povm(priors, states, labels: tuple[str, ...] | None = None) -> Povm:
    """Square-root measurement for an ensemble.

    Elements are p_i * rho^(-1/2) rho_i rho^(-1/2) for the average state
    rho; any completeness deficit on the kernel of rho goes to an extra
    null outcome.
    """
    weights, mats = _validated_ensemble(priors, states)
    if labels is None:
        labels = tuple(f"outcome{i}" for i in range(len(mats)))
    average = sum(w * m for w, m in zip(weights, mats))
    _, inv_sqrt = psd_sqrt_and_pinv_sqrt(average)
    elements = [w * (inv_sqrt @ m @ inv_sqrt) for w, m in zip(weights, mats)]
    deficit = np.eye(mats[0].shape[0]) - sum(elements)
    if float(np.max(np.abs(deficit))) > COMPLETENESS_ATOL:
        elements.append(deficit)
        labels = tuple(labels) + (NULL_OUTCOME,)
    return Povm(tuple(labels), tuple(elements))


def srm_success(priors, states) -> float:
    """Average success of the square-root measurement on an ensemble."""
    weights, mats = _validated_ensemble(priors, states)
    povm = srm_povm(weights, mats)
    total = sum(
        w * float(np.trace(m @ povm.elements[i]).real)
        for i, (w, m) in enumerate(zip(weights, mats))
    )
    return clip_probability(total)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure two-qubit state; the first tensor factor is the kept side.

    Amplitude ordering is |ij> -> index 2*i + j with i the qubit named by
    ``partition[0]`` (Alice) and j the one sent away (Bob).
    """

    amplitudes: np.ndarray
    partition: tuple[str, str] = ("alice", "bob")

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex)
        if vec.shape != (4,):
            raise ValueError("bipartite amplitudes must have length 4")
        if abs(np.linalg.norm(vec) - 1.0) > UNIT_NORM_ATOL:
            raise ValueError("bipartite state is not normalized")
        object.__setattr__(self, "amplitudes", _frozen(vec))

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (kept, sent) index order."""
        return self.amplitudes.reshape(2, 2)


def reduced_state(psi: BipartiteState, keep: str = "alice") -> np.ndarray:
    """Reduced density matrix of one side of a bipartite pure state."""
    m = psi.matrix()
    if keep == psi.partition[0]:
        return m @ m.conj().T
    if keep == psi.partition[1]:
        return m.T @ m.conj()
    raise ValueError(f"unknown subsystem {keep!r}; partition is {psi.partition}")


UNDEFINED_PROBABILITY = 1e-14


def conditional_remote_state(
    psi: BipartiteState, bob_element
) -> tuple[float, np.ndarray | None]:
    """Probability of a measurement element on the sent qubit and the
    conditional state steered onto the kept qubit.

    Returns (probability, None) when the outcome probability is below
    ``UNDEFINED_PROBABILITY`` and the conditional state is undefined.
    """
    element = as_operator(bob_element)
    if element.shape != (2, 2):
        raise ValueError("measurement element must be 2x2")
    if not is_hermitian(element) or min_eigenvalue(element) < -PSD_ATOL:
        raise ValueError("measurement element must be PSD")
    m = psi.matrix()
    unnormalized = (m @ element.T) @ m.conj().T
    probability = float(np.trace(unnormalized).real)
    if probability < UNDEFINED_PROBABILITY:
        return max(probability, 0.0), None
    conditional = unnormalized / probability
    conditional = (conditional + conditional.conj().T) / 2.0
    return clip_probability(probability), conditional


def bloch_vector(rho) -> np.ndarray:
    """Bloch vector (rx, ry, rz) of a qubit operator with unit trace."""
    arr = as_operator(rho)
    if arr.shape != (2, 2):
        raise ValueError("Bloch vector is defined for qubits only")
    return np.array(
        [2.0 * arr[0, 1].real, -2.0 * arr[0, 1].imag, (arr[0, 0] - arr[1, 1]).real]
    )
