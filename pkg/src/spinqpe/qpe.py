"""Phase-estimation circuits for single-qubit axis rotations, plus readout
decoding.

Register layout: counting qubits 0..n-1 (qubit j carries weight 2^j in the
measured outcome), target qubit n. A run applies the target preparation,
a Hadamard on every counting qubit, a controlled rotation by 2^j times the
auxiliary angle from each counting qubit j, and the inverse Fourier
transform on the counting register.

Bin map: with R(a)|-> = exp(+i a/2)|->, the estimated phase of the |-axis>
eigencomponent is a/(4 pi) mod 1, so it lands in bin
m_minus = round(2^n a / (4 pi)) mod 2^n and the |+axis> component in the
mirror bin 2^n - m_minus mod 2^n. The auxiliary angle only selects these
readout locations; the decoded masses equal the squared overlaps of the
prepared target state with the axis eigenvectors.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigurationError
from .gates import Axis, RotationSpec, hadamard, rotation_power
from .iqft import build_iqft, apply_iqft
from .statevector import Histogram, apply_controlled, apply_single, exact_histogram, new_state, sample

MAX_COUNTING_QUBITS = 16

#: decode window half-width used when the configuration is not dyadic-exact
DEFAULT_LEAKY_WINDOW = 2

#: decoded windows covering less total mass than this raise a leakage warning
DEFAULT_COVERAGE_THRESHOLD = 0.98

_DYADIC_ATOL = 1e-9


@dataclass(eq=False)
class QpeConfig:
    """One phase-estimation run.

    target_prep is the gate sequence applied to the target qubit starting
    from |0>, first element first. In sampled mode a seed is mandatory so
    every run is reproducible.
    """

    counting_qubits: int = 10
    aux: RotationSpec = RotationSpec(Axis.Y, math.pi / 4)
    target_prep: tuple = ()
    shots: int = 10000
    seed: int | None = None
    mode: str = "exact"

    def __post_init__(self) -> None:
        if not 1 <= self.counting_qubits <= MAX_COUNTING_QUBITS:
            raise ConfigurationError(
                f"counting_qubits must be in [1, {MAX_COUNTING_QUBITS}], "
                f"got {self.counting_qubits}"
            )
        if not isinstance(self.aux, RotationSpec):
            raise ConfigurationError(f"aux must be a RotationSpec, got {self.aux!r}")
        if self.mode not in ("exact", "sampled"):
            raise ConfigurationError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.mode == "sampled":
            if self.shots < 1:
                raise ConfigurationError(f"sampled mode needs shots >= 1, got {self.shots}")
            if self.seed is None:
                raise ConfigurationError("sampled mode needs an explicit seed")
        self.target_prep = tuple(self.target_prep)


@dataclass(frozen=True)
class ExpectedBins:
    m_plus: int
    m_minus: int
    dyadic_exact: bool


@dataclass(frozen=True)
class DecodedPeak:
    outcome: int
    fraction: float
    signed_angle: float  # 2 pi fraction, folded into (-pi, pi]
    probability: float


@dataclass
class DecodeResult:
    m_plus: int
    m_minus: int
    dyadic_exact: bool
    window: int
    p_plus: float
    p_minus: float
    coverage: float
    peak_plus: DecodedPeak
    peak_minus: DecodedPeak
    warnings: list = field(default_factory=list)


def expected_bins(config: QpeConfig) -> ExpectedBins:
    """Readout bins for the two auxiliary-rotation eigencomponents.

    Also reports whether 2^n * a / (4 pi) is an integer ("dyadic-exact"),
    i.e. whether the run is free of spectral leakage.
    """
    size = 1 << config.counting_qubits
    x = size * config.aux.angle / (4.0 * math.pi)
    m_minus = round(x) % size
    m_plus = (size - m_minus) % size
    dyadic = math.isclose(x, round(x), rel_tol=0.0, abs_tol=_DYADIC_ATOL)
    return ExpectedBins(m_plus=m_plus, m_minus=m_minus, dyadic_exact=dyadic)


def run_qpe(config: QpeConfig) -> Histogram:
    """Assemble and run the estimation circuit, returning the counting
    register readout (exact probabilities or a seeded sample)."""
    n = config.counting_qubits
    target = n
    state = new_state(n + 1)
    for gate in config.target_prep:
        state = apply_single(state, gate, target)
    h = hadamard()
    for q in range(n):
        state = apply_single(state, h, q)
    for j in range(n):
        state = apply_controlled(state, rotation_power(config.aux, 1 << j), j, target)
    counting = tuple(range(n - 1, -1, -1))  # MSB first
    state = apply_iqft(state, build_iqft(counting))
    if config.mode == "sampled":
        return sample(state, counting, config.shots, config.seed)
    return exact_histogram(state, counting)


def _signed_angle(fraction: float) -> float:
    turn = 2.0 * math.pi * fraction
    return turn if fraction <= 0.5 else turn - 2.0 * math.pi


def _peak(hist: Histogram, outcome: int, mass: float) -> DecodedPeak:
    fraction = outcome / (1 << hist.num_bits)
    return DecodedPeak(
        outcome=outcome,
        fraction=fraction,
        signed_angle=_signed_angle(fraction),
        probability=mass,
    )


def decode(
    hist: Histogram,
    config: QpeConfig,
    window: int | None = None,
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD,
) -> DecodeResult:
    """Total mass around the two expected bins.

    `window` is the half-width in bins, cyclic; None selects 0 for
    dyadic-exact configurations and 2 otherwise. The two windows must not
    overlap. Coverage below `coverage_threshold` is reported as a leakage
    warning, not an error.
    """
    if hist.num_bits != config.counting_qubits:
        raise ConfigurationError(
            f"histogram has {hist.num_bits} bits but the configuration "
            f"counts {config.counting_qubits}"
        )
    bins = expected_bins(config)
    if window is None:
        window = 0 if bins.dyadic_exact else DEFAULT_LEAKY_WINDOW
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    size = 1 << hist.num_bits
    window_plus = {(bins.m_plus + d) % size for d in range(-window, window + 1)}
    window_minus = {(bins.m_minus + d) % size for d in range(-window, window + 1)}
    if window_plus & window_minus:
        raise ConfigurationError(
            f"decode windows around bins {bins.m_plus} and {bins.m_minus} "
            f"overlap (window={window}); the two eigencomponents are not "
            "separable in this configuration"
        )
    p_plus = hist.mass(window_plus)
    p_minus = hist.mass(window_minus)
    coverage = p_plus + p_minus
    notes = []
    if coverage < coverage_threshold:
        notes.append(
            f"leakage: decoded windows cover {coverage:.6f} "
            f"< threshold {coverage_threshold}"
        )
    return DecodeResult(
        m_plus=bins.m_plus,
        m_minus=bins.m_minus,
        dyadic_exact=bins.dyadic_exact,
        window=window,
        p_plus=p_plus,
        p_minus=p_minus,
        coverage=coverage,
        peak_plus=_peak(hist, bins.m_plus, p_plus),
        peak_minus=_peak(hist, bins.m_minus, p_minus),
        warnings=notes,
    )


def format_binary(outcome: int, num_bits: int) -> str:
    """Binary-fraction form "0.b1b2...bn" with b1 the most significant bit."""
    if not 0 <= outcome < (1 << num_bits):
        raise ValueError(f"outcome {outcome} out of range for {num_bits} bits")
    return "0." + format(outcome, f"0{num_bits}b")
