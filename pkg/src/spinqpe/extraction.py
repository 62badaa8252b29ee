"""Reconstruct segment amplitudes and the accumulated phase from the two
estimation readouts.

The vertical run (auxiliary axis Y, target prepared by rx(-eta)) measures
C^2 and S^2; the horizontal run (auxiliary axis X, target prepared by
ry(delta) rx(-eta)) measures |A|^2 / 2 and |B|^2 / 2. From those,

    sin(delta) = (|A|^2 - 1) / (2 S C)
    theta      = atan( (S-C)/(S+C) * tan(delta/2) )

sin(delta) only fixes delta up to the reflection delta <-> pi - delta, so
the caller picks a branch explicitly; "principal" (delta = asin(...))
covers |delta| <= pi/2.
"""

import math
import warnings
from dataclasses import dataclass, field, replace

from .errors import (
    ConfigurationError,
    EstimateClampedWarning,
    InconsistentAmplitudesError,
    SingularConfigurationError,
    UndefinedPhaseError,
)
from .gates import Axis, rx, ry
from .precession import AmplitudePair, PathParams, total_phase, wrap_angle
from .qpe import DecodeResult, QpeConfig, decode, run_qpe, DEFAULT_COVERAGE_THRESHOLD
from .statevector import Histogram

BRANCHES = ("principal", "reflected")

#: below this, 2*S*C is too small for the sin(delta) inversion to mean anything
SC_MIN = 1e-6

#: |sin(delta)| may exceed 1 by at most this much before it is an error
TOL_CLAMP = 0.02


def reconstruct_CS(p_plus: float, p_minus: float) -> AmplitudePair:
    """Amplitudes from the vertical readout's two window masses.

    The inputs are renormalized so C^2 + S^2 = 1 (removing common-mode
    loss in leaky or sampled runs) and the nonnegative roots are taken,
    valid while eta stays within (-pi/2, pi/2].
    """
    if p_plus < 0.0 or p_minus < 0.0:
        raise ValueError(f"window masses must be >= 0, got ({p_plus!r}, {p_minus!r})")
    total = p_plus + p_minus
    if total <= 0.0:
        raise ConfigurationError("both window masses are zero; empty histogram")
    return AmplitudePair(C=math.sqrt(p_plus / total), S=math.sqrt(p_minus / total))


def reconstruct_absA(p_plus: float) -> float:
    """|A| from the horizontal readout's plus-window mass |A|^2 / 2."""
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"window mass must be in [0, 1], got {p_plus!r}")
    return math.sqrt(2.0 * p_plus)


def infer_sin_delta(
    absA: float,
    cs: AmplitudePair,
    sc_min: float = SC_MIN,
    tol_clamp: float = TOL_CLAMP,
) -> float:
    """sin(delta) = (|A|^2 - 1) / (2 S C).

    Values within `tol_clamp` outside [-1, 1] are clamped with a warning
    (sampling noise); anything further out is an inconsistency error. A
    vanishing S*C (eta near pi/2, where the first segment lands on an
    eigenvector) makes the inversion uninformative and is an error.
    """
    twice_sc = 2.0 * cs.S * cs.C
    if abs(twice_sc) < sc_min:
        raise SingularConfigurationError(
            f"2*S*C = {twice_sc:.3e} below {sc_min}; sin(delta) cannot be "
            "inferred near eta = +-pi/2"
        )
    raw = (absA * absA - 1.0) / twice_sc
    if abs(raw) > 1.0 + tol_clamp:
        raise InconsistentAmplitudesError(
            f"sin(delta) = {raw!r} exceeds [-1, 1] by more than "
            f"{tol_clamp}; the readouts are mutually inconsistent"
        )
    if abs(raw) > 1.0:
        clamped = math.copysign(1.0, raw)
        warnings.warn(
            f"sin(delta) = {raw!r} clamped to {clamped}",
            EstimateClampedWarning,
        )
        return clamped
    return raw


def theta_from_estimates(cs: AmplitudePair, delta: float) -> float:
    """Principal-branch atan( (S-C)/(S+C) * tan(delta/2) )."""
    s_plus_c = cs.S + cs.C
    if s_plus_c <= 0.0:
        raise UndefinedPhaseError(
            f"S + C = {s_plus_c!r} is not positive; the arctan form has no "
            "principal branch here"
        )
    return math.atan((cs.S - cs.C) / s_plus_c * math.tan(delta / 2.0))


@dataclass
class ExtractionResult:
    """Everything one pipeline run produced, configs echoed for provenance."""

    C_est: float
    S_est: float
    absA_est: float
    sin_delta_raw: float
    sin_delta_est: float
    delta_est: float
    theta_est: float
    theta_analytic: float
    residual_theta: float
    coverage_v: float
    coverage_h: float
    cs_mass_raw: float  # p_plus + p_minus before renormalization
    branch: str
    params: PathParams
    decode_v: DecodeResult
    decode_h: DecodeResult
    hist_v: Histogram
    hist_h: Histogram
    config_v: QpeConfig
    config_h: QpeConfig
    warnings: list = field(default_factory=list)


def full_pipeline(
    params: PathParams,
    qpev_config: QpeConfig,
    qpeh_config: QpeConfig,
    branch: str = "principal",
    window: int | None = None,
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD,
) -> ExtractionResult:
    """Run both estimation circuits and reconstruct delta and theta.

    The target preparations are derived from `params` (rx(-eta) for the
    vertical run, then ry(delta) appended for the horizontal run); the
    configs supply register width, auxiliary angles, shots, seeds and
    mode. The vertical config must rotate about Y and the horizontal one
    about X.
    """
    if branch not in BRANCHES:
        raise ConfigurationError(f"branch must be one of {BRANCHES}, got {branch!r}")
    if qpev_config.aux.axis is not Axis.Y:
        raise ConfigurationError("the vertical run must use a Y-axis auxiliary rotation")
    if qpeh_config.aux.axis is not Axis.X:
        raise ConfigurationError("the horizontal run must use an X-axis auxiliary rotation")

    config_v = replace(qpev_config, target_prep=(rx(-params.eta),))
    config_h = replace(qpeh_config, target_prep=(rx(-params.eta), ry(params.delta)))

    hist_v = run_qpe(config_v)
    hist_h = run_qpe(config_h)
    decode_v = decode(hist_v, config_v, window=window, coverage_threshold=coverage_threshold)
    decode_h = decode(hist_h, config_h, window=window, coverage_threshold=coverage_threshold)

    notes = [f"qpev: {w}" for w in decode_v.warnings]
    notes += [f"qpeh: {w}" for w in decode_h.warnings]

    canonical_eta = wrap_angle(params.eta)
    if not -math.pi / 2.0 <= canonical_eta <= math.pi / 2.0:
        notes.append(
            f"branch ambiguity: eta = {params.eta!r} lies outside "
            "[-pi/2, pi/2], where the nonnegative C, S roots are not valid"
        )

    cs = reconstruct_CS(decode_v.p_plus, decode_v.p_minus)
    absA_est = reconstruct_absA(decode_h.p_plus)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sin_delta_est = infer_sin_delta(absA_est, cs)
    notes += [str(w.message) for w in caught]
    sin_delta_raw = (absA_est * absA_est - 1.0) / (2.0 * cs.S * cs.C)

    if branch == "principal":
        delta_est = math.asin(sin_delta_est)
    else:
        delta_est = math.pi - math.asin(sin_delta_est)
    theta_est = theta_from_estimates(cs, delta_est)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        theta_analytic = total_phase(params).theta
    notes += [str(w.message) for w in caught]

    return ExtractionResult(
        C_est=cs.C,
        S_est=cs.S,
        absA_est=absA_est,
        sin_delta_raw=sin_delta_raw,
        sin_delta_est=sin_delta_est,
        delta_est=delta_est,
        theta_est=theta_est,
        theta_analytic=theta_analytic,
        residual_theta=wrap_angle(theta_est - theta_analytic),
        coverage_v=decode_v.coverage,
        coverage_h=decode_h.coverage,
        cs_mass_raw=decode_v.p_plus + decode_v.p_minus,
        branch=branch,
        params=params,
        decode_v=decode_v,
        decode_h=decode_h,
        hist_v=hist_v,
        hist_h=hist_h,
        config_v=config_v,
        config_h=config_h,
        warnings=notes,
    )
