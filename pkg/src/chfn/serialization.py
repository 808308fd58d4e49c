"""JSON wire format: complex numbers as [re, im], matrices row-major.

Floats are written with Python's shortest round-trip repr, so
dump -> load -> dump is byte-stable.
"""
import json

import numpy as np

from .errors import ValidationError
from .invariants import PairInvariants

INDENT = None


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v):
    if isinstance(v, (int, float)):
        return complex(v)
    try:
        re, im = v
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"expected [re, im], got {v!r}") from exc


def vector_to_json(v):
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def vector_from_json(v):
    out = np.array([complex_from_json(z) for z in v], dtype=np.complex128)
    if out.shape != (4,):
        raise ValidationError(f"expected 4 coordinates, got {out.shape[0]}")
    return out


def matrix_to_json(M):
    M = np.asarray(M)
    return [[complex_to_json(z) for z in row] for row in M]


def matrix_from_json(rows):
    try:
        M = np.array([[complex_from_json(z) for z in row] for row in rows],
                     dtype=np.complex128)
    except TypeError as exc:
        raise ValidationError("matrix must be a 4x4 array of [re, im] pairs") from exc
    if M.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {M.shape}")
    return M


def _indexed(index, value):
    return {"index": int(index), "value": complex_to_json(value)}


def pair_invariants_to_json(P):
    return {
        "tauA": complex_to_json(P.tauA),
        "tauB": complex_to_json(P.tauB),
        "sigmaA": float(P.sigmaA),
        "sigmaB": float(P.sigmaB),
        "X1": complex_to_json(P.X1),
        "X2": complex_to_json(P.X2),
        "X3": complex_to_json(P.X3),
        "alpha": _indexed(P.alpha_index, P.alpha),
        "beta": _indexed(P.beta_index, P.beta),
    }


def pair_invariants_from_json(d):
    try:
        alpha, beta = d["alpha"], d["beta"]
        if int(alpha["index"]) not in (1, 2) or int(beta["index"]) not in (1, 2):
            raise ValidationError("alpha/beta index must be 1 or 2")
        return PairInvariants(
            tauA=complex_from_json(d["tauA"]),
            tauB=complex_from_json(d["tauB"]),
            sigmaA=float(d["sigmaA"]),
            sigmaB=float(d["sigmaB"]),
            X1=complex_from_json(d["X1"]),
            X2=complex_from_json(d["X2"]),
            X3=complex_from_json(d["X3"]),
            alpha_index=int(alpha["index"]),
            alpha=complex_from_json(alpha["value"]),
            beta_index=int(beta["index"]),
            beta=complex_from_json(beta["value"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed pair-invariants record: {exc}") from exc


def decomposition_to_json(d):
    return {"r": float(d.r), "theta": float(d.theta), "phi": float(d.phi),
            "frame": matrix_to_json(d.frame), "residual": float(d.residual)}


def decomposition_from_json(d):
    from .isometry import LoxodromicDecomposition

    try:
        return LoxodromicDecomposition(float(d["r"]), float(d["theta"]), float(d["phi"]),
                                       matrix_from_json(d["frame"]), float(d["residual"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed decomposition record: {exc}") from exc


def classification_to_json(c):
    out = {"class": c.kind.value,
           "eigenvalues": [complex_to_json(z) for z in c.eigenvalues],
           "modulus_deviation": float(c.modulus_deviation)}
    if c.attracting is not None:
        out["attracting"] = vector_to_json(c.attracting)
        out["repelling"] = vector_to_json(c.repelling)
    if c.boundary_fixed_points:
        out["boundary_fixed_points"] = [vector_to_json(v) for v in c.boundary_fixed_points]
    if c.interior_fixed_point is not None:
        out["interior_fixed_point"] = vector_to_json(c.interior_fixed_point)
    return out


def report_to_json(report):
    return {
        "nonsingular": bool(report.overall),
        "failed_condition": report.failed_condition(),
        "conditions": {
            "i": {"ok": bool(report.condition_i),
                  "shared_points": [vector_to_json(v) for v in report.shared_points]},
            "ii": {"ok": bool(report.condition_ii), "chain_gap": float(report.chain_gap),
                   "polar": None if report.polar is None else vector_to_json(report.polar)},
            "iii": {"ok": bool(report.condition_iii),
                    "eta_indices": list(report.eta_indices),
                    "nu_indices": list(report.nu_indices)},
        },
    }


def twist_to_json(kappa, psi):
    return {"kappa": complex_to_json(kappa), "psi": float(psi)}


def twist_from_json(d):
    try:
        return complex_from_json(d["kappa"]), float(d["psi"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed twist record: {exc}") from exc


def surface_input_to_json(genus, pants, twists):
    from .gluing import _parse_twist

    return {"genus": int(genus),
            "pants": [pair_invariants_to_json(P) for P in pants],
            "twists": [twist_to_json(*_parse_twist(t)) for t in twists]}


def surface_input_from_json(d):
    try:
        genus = d["genus"]
        pants = [pair_invariants_from_json(P) for P in d["pants"]]
        twists = [twist_from_json(t) for t in d["twists"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed surface record: {exc}") from exc
    if not isinstance(genus, int) or isinstance(genus, bool):
        raise ValidationError("genus must be an integer")
    return genus, pants, twists


def corpus_to_json(matrices):
    return {"matrices": [matrix_to_json(M) for M in matrices]}


def corpus_from_json(d):
    try:
        return [matrix_from_json(M) for M in d["matrices"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed corpus: {exc}") from exc


def dumps(obj):
    return json.dumps(obj, indent=INDENT, allow_nan=False)


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc


def dump_corpus(path, matrices):
    with open(path, "w") as fh:
        fh.write(dumps(corpus_to_json(matrices)))


def load_corpus(path):
    with open(path) as fh:
        return corpus_from_json(loads(fh.read()))
