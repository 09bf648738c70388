"""JSON documents for spectra, difference approximations and certificates.

Reals inside certificates are written as decimal strings with 17 significant
digits, which round-trip every double exactly. Rationals are ``[num, den]``.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .diophantine import DiffApproximation
from .errors import PreconditionError
from .recurrence import RecurrenceCertificate
from .spectral import DISCRETE, TWO_PI, PureState, Spectrum, make_spectrum, spectrum_from_rationals


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def parse_real(x) -> float:
    return float(x)


def _time_out(mode: str, t):
    return int(t) if mode == DISCRETE else fmt_real(t)


def _time_in(mode: str, t):
    return int(t) if mode == DISCRETE else parse_real(t)


def _rational(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


# --- spectra ---------------------------------------------------------------

def spectrum_to_dict(s: Spectrum) -> dict:
    doc = {"mode": s.mode, "values": [float(v) for v in s.raw_values]}
    if s.exact_values is not None:
        doc["rational_values"] = [_rational(s.exact_values[k]) for k in s.degeneracy_map]
        if not (s.mode == DISCRETE and s.scale == TWO_PI):
            doc["scale"] = s.scale
    return doc


def spectrum_from_dict(doc: dict) -> Spectrum:
    """Read ``{"mode", "values", optional "rational_values", optional "scale"}``.

    When ``rational_values`` is present the float ``values`` are ignored.
    """
    mode = doc.get("mode", "continuous")
    if "rational_values" in doc:
        rs = [Fraction(int(p[0]), int(p[1])) for p in doc["rational_values"]]
        return spectrum_from_rationals(rs, mode, doc.get("scale"))
    if "values" not in doc:
        raise PreconditionError("spectrum document needs 'values' or 'rational_values'")
    vals = [float(v) for v in doc["values"]]
    if "scale" in doc:
        vals = [float(doc["scale"]) * v for v in vals]
    return make_spectrum(vals, mode)


def load_spectrum(path: str | Path) -> Spectrum:
    with open(path) as fh:
        return spectrum_from_dict(json.load(fh))


# --- difference approximations ---------------------------------------------

def approx_to_dict(a: DiffApproximation) -> dict:
    return {
        "q": a.q,
        "l": list(a.l),
        "N": a.N,
        "method": a.method,
        "max_pair_error": a.max_pair_error,
        "q_bound": a.q_bound,
        "reduced": a.reduced,
        "collision": list(a.collision),
        "bound_exceeded": a.bound_exceeded,
    }


def approx_from_dict(doc: dict) -> DiffApproximation:
    return DiffApproximation(
        q=int(doc["q"]),
        l=tuple(int(v) for v in doc["l"]),
        N=int(doc["N"]),
        method=doc["method"],
        max_pair_error=float(doc["max_pair_error"]),
        q_bound=int(doc["q_bound"]),
        reduced=bool(doc["reduced"]),
        collision=tuple(doc.get("collision", (0, 1))),
        bound_exceeded=bool(doc.get("bound_exceeded", False)),
    )


def approx_input_from_dict(doc: dict) -> dict:
    """Normalize an approximation request into keyword arguments for ``diff_approx``.

    ``integer_pair`` indices are 0-based.
    """
    if "rational_alphas" in doc:
        alphas = [Fraction(int(p[0]), int(p[1])) for p in doc["rational_alphas"]]
    elif "alphas" in doc:
        alphas = [float(v) for v in doc["alphas"]]
    else:
        raise PreconditionError("approximation input needs 'alphas' or 'rational_alphas'")
    out = {"alphas": alphas, "N": int(doc["N"]), "method": doc.get("method", "simplex_hull")}
    if doc.get("integer_pair") is not None:
        out["integer_pair"] = tuple(int(v) for v in doc["integer_pair"])
    return out


# --- certificates ----------------------------------------------------------

def certificate_to_dict(c: RecurrenceCertificate) -> dict:
    return {
        "mode": c.mode,
        "recurrence_time": _time_out(c.mode, c.recurrence_time),
        "base_time": _time_out(c.mode, c.base_time),
        "multiplier": c.multiplier,
        "phase_integers": list(c.phase_integers),
        "epsilon": fmt_real(c.epsilon),
        "worst_case_at_tr": fmt_real(c.worst_case_at_tr),
        "witness_state": [[fmt_real(z.real), fmt_real(z.imag)] for z in c.witness_state.amplitudes],
        "witness_time": _time_out(c.mode, c.witness_time),
        "bound_used": c.bound_used,
        "bound_value": fmt_real(c.bound_value),
        "bound_value_literal": fmt_real(c.bound_value_literal),
        "method": c.method,
        "N": c.N,
        "max_phase_error": fmt_real(c.max_phase_error),
        "free_dimensions": c.free_dimensions,
        "extra": c.extra,
    }


def certificate_from_dict(doc: dict) -> RecurrenceCertificate:
    mode = doc["mode"]
    amps = [complex(parse_real(re), parse_real(im)) for re, im in doc["witness_state"]]
    return RecurrenceCertificate(
        mode=mode,
        recurrence_time=_time_in(mode, doc["recurrence_time"]),
        base_time=_time_in(mode, doc["base_time"]),
        multiplier=int(doc["multiplier"]),
        phase_integers=tuple(int(v) for v in doc["phase_integers"]),
        epsilon=parse_real(doc["epsilon"]),
        worst_case_at_tr=parse_real(doc["worst_case_at_tr"]),
        witness_state=PureState(amps),
        witness_time=_time_in(mode, doc["witness_time"]),
        bound_used=doc["bound_used"],
        bound_value=parse_real(doc["bound_value"]),
        bound_value_literal=parse_real(doc.get("bound_value_literal", math.nan)),
        method=doc.get("method", "simplex_hull"),
        N=int(doc.get("N", 0)),
        max_phase_error=parse_real(doc.get("max_phase_error", 0.0)),
        free_dimensions=int(doc.get("free_dimensions", 0)),
        extra=dict(doc.get("extra", {})),
    )


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
