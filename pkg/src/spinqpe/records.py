"""Run records: the stable JSON/CSV output format of the command line tool.

A record echoes the command that produced it, the resolved configuration
(including seeds), the histograms with both raw integer outcomes and their
binary-fraction strings, decoded window masses, estimates, analytic
references and residuals. Records carry no timestamps, so re-running the
echoed command reproduces the record byte for byte.
"""

import csv
import io
import json

from .extraction import ExtractionResult
from .qpe import DecodedPeak, DecodeResult, format_binary
from .statevector import Histogram

TOOL_VERSION = "0.1.0"

_NUM_OR_NULL = {"type": ["number", "null"]}
_INT_OR_NULL = {"type": ["integer", "null"]}

RUN_RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "spinqpe run record",
    "type": "object",
    "additionalProperties": False,
    "required": [
        "command", "config", "histograms", "decoded", "estimates",
        "analytic", "residuals", "warnings", "version",
    ],
    "properties": {
        "command": {"type": "array", "items": {"type": "string"}},
        "config": {
            "type": "object",
            "additionalProperties": False,
            "required": [
                "eta", "delta", "aux_v", "aux_h", "n", "shots", "seed",
                "mode", "branch",
            ],
            "properties": {
                "eta": _NUM_OR_NULL,
                "delta": _NUM_OR_NULL,
                "aux_v": _NUM_OR_NULL,
                "aux_h": _NUM_OR_NULL,
                "n": _INT_OR_NULL,
                "shots": _INT_OR_NULL,
                "seed": _INT_OR_NULL,
                "mode": {"enum": ["exact", "sampled", None]},
                "branch": {"enum": ["principal", "reflected", None]},
            },
        },
        "histograms": {
            "type": "object",
            "additionalProperties": False,
            "required": ["qpev", "qpeh"],
            "properties": {
                "qpev": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/histogram"}]},
                "qpeh": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/histogram"}]},
            },
        },
        "decoded": {
            "type": "object",
            "additionalProperties": False,
            "required": ["qpev", "qpeh"],
            "properties": {
                "qpev": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/decode"}]},
                "qpeh": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/decode"}]},
            },
        },
        "estimates": {
            "type": "object",
            "additionalProperties": False,
            "required": ["C", "S", "absA", "sin_delta", "delta", "theta"],
            "properties": {
                "C": _NUM_OR_NULL,
                "S": _NUM_OR_NULL,
                "absA": _NUM_OR_NULL,
                "sin_delta": _NUM_OR_NULL,
                "sin_delta_raw": _NUM_OR_NULL,
                "delta": _NUM_OR_NULL,
                "theta": _NUM_OR_NULL,
            },
        },
        "analytic": {
            "type": "object",
            "additionalProperties": False,
            "required": ["C", "S", "absA", "theta"],
            "properties": {
                "C": _NUM_OR_NULL,
                "S": _NUM_OR_NULL,
                "absA": _NUM_OR_NULL,
                "theta": _NUM_OR_NULL,
                "C2": _NUM_OR_NULL,
                "S2": _NUM_OR_NULL,
                "A_re": _NUM_OR_NULL,
                "A_im": _NUM_OR_NULL,
                "B_re": _NUM_OR_NULL,
                "B_im": _NUM_OR_NULL,
                "gamma1": _NUM_OR_NULL,
                "gamma2": _NUM_OR_NULL,
                "half_absA2": _NUM_OR_NULL,
                "half_absB2": _NUM_OR_NULL,
                "magnitude": _NUM_OR_NULL,
                "theta_arctan": _NUM_OR_NULL,
            },
        },
        "residuals": {
            "type": "object",
            "additionalProperties": False,
            "required": ["theta"],
            "properties": {"theta": _NUM_OR_NULL},
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
        "version": {"type": "string"},
    },
    "$defs": {
        "histogram": {
            "type": "object",
            "additionalProperties": False,
            "required": ["num_bits", "mode", "total_shots", "seed", "entries"],
            "properties": {
                "num_bits": {"type": "integer"},
                "mode": {"enum": ["exact", "sampled"]},
                "total_shots": {"type": "integer"},
                "seed": _INT_OR_NULL,
                "entries": {"type": "array", "items": {"$ref": "#/$defs/bin"}},
            },
        },
        "bin": {
            "type": "object",
            "additionalProperties": False,
            "required": ["m", "bits", "probability"],
            "properties": {
                "m": {"type": "integer"},
                "bits": {"type": "string"},
                "count": {"type": "integer"},
                "probability": {"type": "number"},
            },
        },
        "decode": {
            "type": "object",
            "additionalProperties": False,
            "required": [
                "m_plus", "m_minus", "dyadic_exact", "window",
                "p_plus", "p_minus", "coverage", "peaks",
            ],
            "properties": {
                "m_plus": {"type": "integer"},
                "m_minus": {"type": "integer"},
                "dyadic_exact": {"type": "boolean"},
                "window": {"type": "integer"},
                "p_plus": {"type": "number"},
                "p_minus": {"type": "number"},
                "coverage": {"type": "number"},
                "peaks": {"type": "array", "items": {"$ref": "#/$defs/peak"}},
            },
        },
        "peak": {
            "type": "object",
            "additionalProperties": False,
            "required": ["m", "bits", "fraction", "signed_angle", "probability"],
            "properties": {
                "m": {"type": "integer"},
                "bits": {"type": "string"},
                "fraction": {"type": "number"},
                "signed_angle": {"type": "number"},
                "probability": {"type": "number"},
            },
        },
    },
}

#: flat column set used when a record is emitted as CSV (one record per row)
CSV_COLUMNS = [
    "command", "eta", "delta", "aux_v", "aux_h", "n", "shots", "seed",
    "mode", "branch", "C", "S", "absA", "sin_delta", "delta_est", "theta",
    "C_analytic", "S_analytic", "absA_analytic", "theta_analytic",
    "residual_theta", "warnings",
]

#: column set of sweep output files
SWEEP_COLUMNS = [
    "eta", "delta", "C2", "half_absA2", "theta_analytic", "theta_est",
    "residual_theta",
]


def histogram_payload(hist: Histogram) -> dict:
    """Histogram entries sorted by outcome, zero bins omitted."""
    entries = []
    for m in sorted(hist.entries):
        entry = {
            "m": m,
            "bits": format_binary(m, hist.num_bits),
        }
        if hist.is_sampled:
            entry["count"] = hist.entries[m]
        entry["probability"] = hist.probability(m)
        entries.append(entry)
    return {
        "num_bits": hist.num_bits,
        "mode": "sampled" if hist.is_sampled else "exact",
        "total_shots": hist.total_shots,
        "seed": hist.seed,
        "entries": entries,
    }


def _peak_payload(peak: DecodedPeak, num_bits: int) -> dict:
    return {
        "m": peak.outcome,
        "bits": format_binary(peak.outcome, num_bits),
        "fraction": peak.fraction,
        "signed_angle": peak.signed_angle,
        "probability": peak.probability,
    }


def decode_payload(result: DecodeResult, num_bits: int) -> dict:
    return {
        "m_plus": result.m_plus,
        "m_minus": result.m_minus,
        "dyadic_exact": result.dyadic_exact,
        "window": result.window,
        "p_plus": result.p_plus,
        "p_minus": result.p_minus,
        "coverage": result.coverage,
        "peaks": [
            _peak_payload(result.peak_plus, num_bits),
            _peak_payload(result.peak_minus, num_bits),
        ],
    }


def make_record(
    command: list,
    config: dict,
    histograms: dict | None = None,
    decoded: dict | None = None,
    estimates: dict | None = None,
    analytic: dict | None = None,
    residual_theta: float | None = None,
    warnings: list | None = None,
) -> dict:
    """Assemble a schema-conforming record; absent sections become nulls."""
    base_config = {
        "eta": None, "delta": None, "aux_v": None, "aux_h": None,
        "n": None, "shots": None, "seed": None, "mode": None, "branch": None,
    }
    base_config.update(config)
    base_estimates = {
        "C": None, "S": None, "absA": None, "sin_delta": None,
        "delta": None, "theta": None,
    }
    base_estimates.update(estimates or {})
    base_analytic = {"C": None, "S": None, "absA": None, "theta": None}
    base_analytic.update(analytic or {})
    return {
        "command": list(command),
        "config": base_config,
        "histograms": {"qpev": None, "qpeh": None, **(histograms or {})},
        "decoded": {"qpev": None, "qpeh": None, **(decoded or {})},
        "estimates": base_estimates,
        "analytic": base_analytic,
        "residuals": {"theta": residual_theta},
        "warnings": list(warnings or []),
        "version": TOOL_VERSION,
    }


def extraction_payloads(result: ExtractionResult) -> tuple[dict, dict, dict]:
    """(histograms, decoded, estimates) sections for a pipeline record."""
    n_v = result.hist_v.num_bits
    n_h = result.hist_h.num_bits
    histograms = {
        "qpev": histogram_payload(result.hist_v),
        "qpeh": histogram_payload(result.hist_h),
    }
    decoded = {
        "qpev": decode_payload(result.decode_v, n_v),
        "qpeh": decode_payload(result.decode_h, n_h),
    }
    estimates = {
        "C": result.C_est,
        "S": result.S_est,
        "absA": result.absA_est,
        "sin_delta": result.sin_delta_est,
        "sin_delta_raw": result.sin_delta_raw,
        "delta": result.delta_est,
        "theta": result.theta_est,
    }
    return histograms, decoded, estimates


def to_json(record: dict) -> str:
    return json.dumps(record, indent=2) + "\n"


def _flatten(record: dict) -> dict:
    cfg = record["config"]
    est = record["estimates"]
    ana = record["analytic"]
    return {
        "command": " ".join(record["command"]),
        "eta": cfg["eta"],
        "delta": cfg["delta"],
        "aux_v": cfg["aux_v"],
        "aux_h": cfg["aux_h"],
        "n": cfg["n"],
        "shots": cfg["shots"],
        "seed": cfg["seed"],
        "mode": cfg["mode"],
        "branch": cfg["branch"],
        "C": est["C"],
        "S": est["S"],
        "absA": est["absA"],
        "sin_delta": est["sin_delta"],
        "delta_est": est["delta"],
        "theta": est["theta"],
        "C_analytic": ana["C"],
        "S_analytic": ana["S"],
        "absA_analytic": ana["absA"],
        "theta_analytic": ana["theta"],
        "residual_theta": record["residuals"]["theta"],
        "warnings": "; ".join(record["warnings"]),
    }


def to_csv(record: dict) -> str:
    """One record as an RFC 4180 CSV document (header plus one row)."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    row = _flatten(record)
    writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return buffer.getvalue()


def sweep_csv(rows: list) -> str:
    """Sweep rows (dicts keyed by SWEEP_COLUMNS) as a CSV document."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()
