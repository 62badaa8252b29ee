"""Dense statevector simulation for small qubit registers.

Indexing convention, fixed package-wide: qubit q is the bit of weight 2**q
in the amplitude index, so qubit 0 is the least significant bit and the
basis state |b_{n-1} ... b_1 b_0> sits at index sum(b_q * 2**q).

Gate application is a pairwise bitmask kernel over the flat amplitude
array, O(2**n) per gate; no 2**n x 2**n matrix is ever formed. All
operations return fresh StateVector values and never mutate their input,
so states can be handed between threads freely. The numpy kernels are
vectorized but sequential-equivalent: results are bit-identical to a pair
by pair loop.

Sampling uses numpy's default_rng, i.e. the PCG64 generator. The generator
identity is part of the reproducibility contract: the same
(state, qubits, shots, seed) always yields the same histogram.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

MAX_QUBITS = 24

# 2x2 gates must satisfy U+ U = I to this tolerance before being applied
UNITARY_ATOL = 1e-12

# exact-mode histogram entries at or below this are numerical dust
PROBABILITY_FLOOR = 1e-15


@dataclass
class StateVector:
    """Amplitudes of an n-qubit register (length 2**num_qubits, complex128)."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitudes contain non-finite values")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass
class Histogram:
    """Readout over a measured qubit subset.

    In sampled mode `entries` maps outcome -> count and `total_shots` is
    the number of draws. In exact mode (total_shots == 0) it maps
    outcome -> probability. Zero entries are omitted in both modes.
    """

    num_bits: int
    entries: dict
    total_shots: int = 0
    seed: int | None = None

    def __post_init__(self) -> None:
        size = 1 << self.num_bits
        for m in self.entries:
            if not 0 <= m < size:
                raise ValueError(f"outcome {m} out of range for {self.num_bits} bits")
        total = sum(self.entries.values())
        if self.total_shots:
            if total != self.total_shots:
                raise ValueError(
                    f"counts sum to {total}, expected total_shots={self.total_shots}"
                )
        elif abs(total - 1.0) > 1e-10:
            raise ValueError(
                f"exact-mode probabilities sum to {total!r}, expected 1 within 1e-10"
            )

    @property
    def is_sampled(self) -> bool:
        return self.total_shots > 0

    def probability(self, outcome: int) -> float:
        value = self.entries.get(outcome, 0)
        if self.is_sampled:
            return value / self.total_shots
        return float(value)

    def mass(self, outcomes) -> float:
        """Total probability of a collection of distinct outcomes."""
        return sum(self.probability(m) for m in outcomes)


def new_state(num_qubits: int) -> StateVector:
    """The all-zeros register |0...0>."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _require_gate(gate) -> np.ndarray:
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError(f"gate must be 2x2, got shape {gate.shape}")
    if not np.all(np.isfinite(gate)):
        raise ValueError("gate contains non-finite entries")
    deviation = np.abs(gate.conj().T @ gate - np.eye(2)).max()
    if deviation > UNITARY_ATOL:
        raise ValueError(
            f"gate is not unitary within {UNITARY_ATOL} (deviation {deviation:.3e})"
        )
    return gate


def _check_qubit(state: StateVector, qubit: int, role: str = "target") -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(
            f"{role} qubit {qubit} out of range for a "
            f"{state.num_qubits}-qubit register"
        )


def _zero_bit_indices(num_qubits: int, bit: int) -> np.ndarray:
    """Indices whose `bit` is 0, i.e. the lower member of every stride pair."""
    mask = (1 << bit) - 1
    g = np.arange(1 << (num_qubits - 1))
    return ((g >> bit) << (bit + 1)) | (g & mask)


def apply_single(state: StateVector, gate, target: int) -> StateVector:
    """Apply a 2x2 unitary to one qubit.

    Amplitudes are updated pairwise over index pairs differing only in bit
    `target`; the norm is preserved to the gate's unitarity precision.
    """
    gate = _require_gate(gate)
    _check_qubit(state, target)
    i0 = _zero_bit_indices(state.num_qubits, target)
    i1 = i0 | (1 << target)
    amps = state.amplitudes
    a0 = amps[i0]
    a1 = amps[i1]
    out = np.empty_like(amps)
    out[i0] = gate[0, 0] * a0 + gate[0, 1] * a1
    out[i1] = gate[1, 0] * a0 + gate[1, 1] * a1
    return StateVector(state.num_qubits, out)


def apply_controlled(state: StateVector, gate, control: int, target: int) -> StateVector:
    """Apply `gate` to `target` on the subspace where `control` reads 1."""
    gate = _require_gate(gate)
    _check_qubit(state, control, "control")
    _check_qubit(state, target)
    if control == target:
        raise ConfigurationError("control and target must be distinct qubits")
    lo, hi = sorted((control, target))
    g = np.arange(1 << (state.num_qubits - 2))
    x = ((g >> lo) << (lo + 1)) | (g & ((1 << lo) - 1))
    x = ((x >> hi) << (hi + 1)) | (x & ((1 << hi) - 1))
    i0 = x | (1 << control)
    i1 = i0 | (1 << target)
    amps = state.amplitudes
    a0 = amps[i0]
    a1 = amps[i1]
    out = amps.copy()
    out[i0] = gate[0, 0] * a0 + gate[0, 1] * a1
    out[i1] = gate[1, 0] * a0 + gate[1, 1] * a1
    return StateVector(state.num_qubits, out)


def probabilities(state: StateVector, qubits) -> np.ndarray:
    """Marginal outcome distribution over the listed qubits.

    The first listed qubit is the most significant bit of the outcome
    index; the result has length 2**len(qubits) and sums to the state's
    squared norm (1 for normalized states).
    """
    qubits = list(qubits)
    if not qubits:
        raise ConfigurationError("at least one qubit must be measured")
    if len(set(qubits)) != len(qubits):
        raise ConfigurationError(f"duplicate qubits in {qubits}")
    for q in qubits:
        _check_qubit(state, q, "measured")
    n = state.num_qubits
    tensor = (np.abs(state.amplitudes) ** 2).reshape([2] * n)
    axes = [n - 1 - q for q in qubits]  # tensor axis of qubit q is n-1-q
    other = tuple(a for a in range(n) if a not in axes)
    if other:
        tensor = tensor.sum(axis=other)
    order = [sorted(axes).index(a) for a in axes]
    return tensor.transpose(order).reshape(-1)


def exact_histogram(state: StateVector, qubits, floor: float = PROBABILITY_FLOOR) -> Histogram:
    """Exact-mode histogram of the marginal distribution over `qubits`."""
    qubits = list(qubits)
    probs = probabilities(state, qubits)
    entries = {int(m): float(p) for m, p in enumerate(probs) if p > floor}
    return Histogram(num_bits=len(qubits), entries=entries)


def sample(state: StateVector, qubits, shots: int, seed: int) -> Histogram:
    """Draw `shots` outcomes multinomially from probabilities(state, qubits).

    The draw is a single multinomial from numpy's default_rng (PCG64)
    seeded with `seed`; identical inputs give identical histograms. Kept
    single-threaded so the draw sequence stays deterministic.
    """
    qubits = list(qubits)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = probabilities(state, qubits)
    probs = probs / probs.sum()  # remove float drift before drawing
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    entries = {int(m): int(c) for m, c in enumerate(counts) if c}
    return Histogram(num_bits=len(qubits), entries=entries, total_shots=shots, seed=seed)
