"""Command line front end.

Subcommands: `analytic` evaluates the closed-form path model, `qpev` and
`qpeh` run the two estimation circuits, `pipeline` runs both and extracts
the accumulated phase, `sweep` grids the exact pipeline over angle ranges
and writes CSV.

Exit codes: 0 success (warnings allowed), 2 usage or angle-parse error,
3 singular or inconsistent configuration, 4 I/O error. Errors are emitted
as one-line JSON objects on stderr.
"""

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

from .angles import parse_angle
from .errors import AngleParseError, ConfigurationError
from .extraction import full_pipeline, reconstruct_CS, reconstruct_absA
from .gates import Axis, RotationSpec, rx, ry
from .precession import PathParams, amplitudes_AB, amplitudes_CS, total_phase
from .qpe import QpeConfig, decode, expected_bins, run_qpe
from .records import (
    decode_payload,
    extraction_payloads,
    histogram_payload,
    make_record,
    sweep_csv,
    to_csv,
    to_json,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4

DEFAULT_N = 10
DEFAULT_SHOTS = 10000
DEFAULT_AUX = "pi/4"
DEFAULT_SEED = 0


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv"], default="json",
                        help="record output format (default json)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=DEFAULT_N,
                        help=f"counting-register width (default {DEFAULT_N})")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--shots", type=int, default=None,
                       help="sample this many shots instead of exact probabilities")
    group.add_argument("--exact", action="store_true",
                       help="exact probabilities (the default)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"sampling seed (default {DEFAULT_SEED}, sampled mode only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinqpe",
        description="Phase estimation readout of two-segment spin precession",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form amplitudes and phase")
    p.add_argument("--eta", required=True, help="segment-1 angle (radians or pi fraction)")
    p.add_argument("--delta", required=True, help="segment-2 angle")
    _add_output_flags(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("qpev", help="vertical run: measure C^2 and S^2")
    p.add_argument("--eta", required=True, help="segment-1 angle")
    p.add_argument("--aux", default=DEFAULT_AUX,
                   help=f"auxiliary Y-rotation angle (default {DEFAULT_AUX})")
    p.add_argument("--allow-leakage", action="store_true",
                   help="accept a non dyadic-exact auxiliary angle")
    _add_run_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_qpev)

    p = sub.add_parser("qpeh", help="horizontal run: measure |A|^2/2 and |B|^2/2")
    p.add_argument("--eta", required=True, help="segment-1 angle")
    p.add_argument("--delta", required=True, help="segment-2 angle")
    p.add_argument("--aux", default=DEFAULT_AUX,
                   help=f"auxiliary X-rotation angle (default {DEFAULT_AUX})")
    p.add_argument("--allow-leakage", action="store_true",
                   help="accept a non dyadic-exact auxiliary angle")
    _add_run_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_qpeh)

    p = sub.add_parser("pipeline", help="both runs plus phase extraction")
    p.add_argument("--eta", required=True, help="segment-1 angle")
    p.add_argument("--delta", required=True, help="segment-2 angle")
    p.add_argument("--aux-v", default=DEFAULT_AUX,
                   help=f"vertical auxiliary angle (default {DEFAULT_AUX})")
    p.add_argument("--aux-h", default=DEFAULT_AUX,
                   help=f"horizontal auxiliary angle (default {DEFAULT_AUX})")
    p.add_argument("--branch", choices=["principal", "reflected"],
                   default="principal", help="delta branch for asin(sin delta)")
    _add_run_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sweep", help="grid the exact pipeline, write CSV")
    p.add_argument("--eta-range", required=True, metavar="LO:HI",
                   help="segment-1 range, e.g. 0.2:1.3 or pi/12:pi/3")
    p.add_argument("--delta-range", required=True, metavar="LO:HI",
                   help="segment-2 range")
    p.add_argument("--steps", type=int, default=12,
                   help="grid points per axis (default 12)")
    p.add_argument("--exact", action="store_true",
                   help="exact probabilities (sweeps always run exact)")
    p.add_argument("--n", type=int, default=DEFAULT_N,
                   help=f"counting-register width (default {DEFAULT_N})")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write CSV to PATH instead of stdout")
    p.set_defaults(func=cmd_sweep)

    return parser


def _resolve_mode(args) -> tuple[str, int, int | None]:
    if args.shots is not None:
        if args.shots < 1:
            raise ConfigurationError(f"--shots must be >= 1, got {args.shots}")
        return "sampled", args.shots, args.seed
    return "exact", DEFAULT_SHOTS, None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_record(record: dict, args) -> None:
    _write(to_csv(record) if args.format == "csv" else to_json(record), args.out)


def _analytic_section(params: PathParams) -> tuple[dict, list]:
    cs = amplitudes_CS(params.eta)
    ab = amplitudes_AB(params)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        tp = total_phase(params)
    notes = [str(w.message) for w in caught]
    section = {
        "C": cs.C,
        "S": cs.S,
        "absA": abs(ab.A),
        "theta": tp.theta,
        "C2": cs.C ** 2,
        "S2": cs.S ** 2,
        "A_re": ab.A.real,
        "A_im": ab.A.imag,
        "B_re": ab.B.real,
        "B_im": ab.B.imag,
        "gamma1": ab.gamma1,
        "gamma2": ab.gamma2,
        "half_absA2": abs(ab.A) ** 2 / 2.0,
        "half_absB2": abs(ab.B) ** 2 / 2.0,
        "magnitude": tp.magnitude,
        "theta_arctan": tp.theta_arctan,
    }
    return section, notes


def cmd_analytic(args) -> int:
    eta = parse_angle(args.eta)
    delta = parse_angle(args.delta)
    params = PathParams(eta.value, delta.value)
    analytic, notes = _analytic_section(params)
    record = make_record(
        command=args._argv,
        config={"eta": eta.value, "delta": delta.value},
        analytic=analytic,
        warnings=notes,
    )
    _emit_record(record, args)
    return EXIT_OK


def _check_dyadic(config: QpeConfig, allow_leakage: bool) -> None:
    bins = expected_bins(config)
    if not bins.dyadic_exact and not allow_leakage:
        size = 1 << config.counting_qubits
        raise ConfigurationError(
            f"auxiliary angle {config.aux.angle!r} is not an integer multiple "
            f"of 4*pi/{size}, so the readout leaks into neighboring bins; "
            "rerun with --allow-leakage to accept that"
        )


def cmd_qpev(args) -> int:
    eta = parse_angle(args.eta)
    aux = parse_angle(args.aux)
    mode, shots, seed = _resolve_mode(args)
    config = QpeConfig(
        counting_qubits=args.n,
        aux=RotationSpec(Axis.Y, aux.value),
        target_prep=(rx(-eta.value),),
        shots=shots,
        seed=seed,
        mode=mode,
    )
    _check_dyadic(config, args.allow_leakage)
    hist = run_qpe(config)
    decoded = decode(hist, config)
    cs = reconstruct_CS(decoded.p_plus, decoded.p_minus)
    reference = amplitudes_CS(eta.value)
    record = make_record(
        command=args._argv,
        config={
            "eta": eta.value, "aux_v": aux.value, "n": args.n,
            "shots": shots if mode == "sampled" else None,
            "seed": seed, "mode": mode,
        },
        histograms={"qpev": histogram_payload(hist)},
        decoded={"qpev": decode_payload(decoded, args.n)},
        estimates={"C": cs.C, "S": cs.S},
        analytic={"C": reference.C, "S": reference.S,
                  "C2": reference.C ** 2, "S2": reference.S ** 2},
        warnings=decoded.warnings,
    )
    _emit_record(record, args)
    return EXIT_OK


def cmd_qpeh(args) -> int:
    eta = parse_angle(args.eta)
    delta = parse_angle(args.delta)
    aux = parse_angle(args.aux)
    mode, shots, seed = _resolve_mode(args)
    config = QpeConfig(
        counting_qubits=args.n,
        aux=RotationSpec(Axis.X, aux.value),
        target_prep=(rx(-eta.value), ry(delta.value)),
        shots=shots,
        seed=seed,
        mode=mode,
    )
    _check_dyadic(config, args.allow_leakage)
    hist = run_qpe(config)
    decoded = decode(hist, config)
    absA = reconstruct_absA(decoded.p_plus)
    params = PathParams(eta.value, delta.value)
    analytic, notes = _analytic_section(params)
    record = make_record(
        command=args._argv,
        config={
            "eta": eta.value, "delta": delta.value, "aux_h": aux.value,
            "n": args.n, "shots": shots if mode == "sampled" else None,
            "seed": seed, "mode": mode,
        },
        histograms={"qpeh": histogram_payload(hist)},
        decoded={"qpeh": decode_payload(decoded, args.n)},
        estimates={"absA": absA},
        analytic=analytic,
        warnings=decoded.warnings + notes,
    )
    _emit_record(record, args)
    return EXIT_OK


def _run_pipeline(eta: float, delta: float, aux_v: float, aux_h: float,
                  n: int, mode: str, shots: int, seed: int | None, branch: str):
    params = PathParams(eta, delta)
    config_v = QpeConfig(counting_qubits=n, aux=RotationSpec(Axis.Y, aux_v),
                         shots=shots, seed=seed, mode=mode)
    config_h = QpeConfig(counting_qubits=n, aux=RotationSpec(Axis.X, aux_h),
                         shots=shots, seed=seed, mode=mode)
    return full_pipeline(params, config_v, config_h, branch=branch)


def cmd_pipeline(args) -> int:
    eta = parse_angle(args.eta)
    delta = parse_angle(args.delta)
    aux_v = parse_angle(args.aux_v)
    aux_h = parse_angle(args.aux_h)
    mode, shots, seed = _resolve_mode(args)
    result = _run_pipeline(eta.value, delta.value, aux_v.value, aux_h.value,
                           args.n, mode, shots, seed, args.branch)
    analytic, notes = _analytic_section(result.params)
    histograms, decoded, estimates = extraction_payloads(result)
    record = make_record(
        command=args._argv,
        config={
            "eta": eta.value, "delta": delta.value,
            "aux_v": aux_v.value, "aux_h": aux_h.value, "n": args.n,
            "shots": shots if mode == "sampled" else None,
            "seed": seed, "mode": mode, "branch": args.branch,
        },
        histograms=histograms,
        decoded=decoded,
        estimates=estimates,
        analytic=analytic,
        residual_theta=result.residual_theta,
        warnings=result.warnings + notes,
    )
    _emit_record(record, args)
    return EXIT_OK


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    lo_text, sep, hi_text = text.partition(":")
    if not sep:
        raise ConfigurationError(f"{flag} must look like LO:HI, got {text!r}")
    lo = parse_angle(lo_text).value
    hi = parse_angle(hi_text).value
    limit = math.pi / 2.0
    for value in (lo, hi):
        if not -limit < value < limit:
            raise ConfigurationError(
                f"{flag} endpoint {value!r} outside (-pi/2, pi/2); the "
                "nonnegative-root reconstruction is only valid inside"
            )
    return lo, hi


def _grid(lo: float, hi: float, steps: int) -> list:
    if steps < 1:
        raise ConfigurationError(f"--steps must be >= 1, got {steps}")
    if lo == hi or steps == 1:
        return [lo]
    width = (hi - lo) / (steps - 1)
    return [lo + i * width for i in range(steps)]


def cmd_sweep(args) -> int:
    eta_lo, eta_hi = _parse_range(args.eta_range, "--eta-range")
    delta_lo, delta_hi = _parse_range(args.delta_range, "--delta-range")
    aux = parse_angle(DEFAULT_AUX).value
    rows = []
    for eta in _grid(eta_lo, eta_hi, args.steps):
        for delta in _grid(delta_lo, delta_hi, args.steps):
            result = _run_pipeline(eta, delta, aux, aux, args.n,
                                   "exact", DEFAULT_SHOTS, None, "principal")
            cs = amplitudes_CS(eta)
            ab = amplitudes_AB(result.params)
            rows.append({
                "eta": eta,
                "delta": delta,
                "C2": cs.C ** 2,
                "half_absA2": abs(ab.A) ** 2 / 2.0,
                "theta_analytic": result.theta_analytic,
                "theta_est": result.theta_est,
                "residual_theta": result.residual_theta,
            })
    _write(sweep_csv(rows), args.out)
    return EXIT_OK


def _emit_error(code: int, exc: BaseException) -> None:
    payload = {"error": {
        "exit_code": code,
        "type": type(exc).__name__,
        "message": str(exc),
    }}
    print(json.dumps(payload), file=sys.stderr)


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        return args.func(args)
    except AngleParseError as exc:
        _emit_error(EXIT_USAGE, exc)
        return EXIT_USAGE
    except ConfigurationError as exc:
        _emit_error(EXIT_CONFIG, exc)
        return EXIT_CONFIG
    except OSError as exc:
        _emit_error(EXIT_IO, exc)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
