"""File formats: JSON state files, sector/shadow emitters, region export.

State file schema: {"n_qubits": n, "amplitudes": [[re, im], ...]} with the
basis index ascending and qubit 1 as the most significant bit.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction

import numpy as np

from .errors import ContractViolation
from .pauli import PureState
from .regions import RegionSpec
from .sectors import SectorVector


def state_to_dict(state: PureState) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amps],
    }


def state_from_dict(payload: dict) -> PureState:
    try:
        n = int(payload["n_qubits"])
        pairs = payload["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ContractViolation(f"malformed state payload: {exc}") from exc
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return PureState(n, amps)


def save_state(state: PureState, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh)


def load_state(path: str) -> PureState:
    with open(path) as fh:
        return state_from_dict(json.load(fh))


def state_fingerprint(state: PureState) -> str:
    digest = hashlib.sha256(np.round(state.amps, 12).tobytes())
    return digest.hexdigest()[:16]


def sectors_to_json(sv: SectorVector, label: str | None = None) -> dict:
    out = {"n_qubits": sv.n_qubits, "values": list(sv.values)}
    if label:
        out["state"] = label
    return out


def sectors_to_csv(sv: SectorVector) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["m", "S_m"])
    for m, v in enumerate(sv.values):
        writer.writerow([m, repr(v)])
    return buf.getvalue()


def _frac_pair(f: Fraction) -> list:
    return [f.numerator, f.denominator]


def region_to_json(region: RegionSpec) -> dict:
    def rows(items):
        return [
            {
                "label": r.label,
                "coeffs": [_frac_pair(c) for c in r.coeffs],
                "rhs": _frac_pair(r.rhs),
                "sense": r.sense,
            }
            for r in items
        ]

    return {
        "n_qubits": region.n_qubits,
        "name": region.name,
        "equalities": rows(region.equalities),
        "inequalities": rows(region.inequalities),
    }


def witness_to_json(witness) -> dict:
    return {
        "n": witness.n,
        "y": {str(q): _frac_pair(v) for q, v in witness.y.items()},
        "y_prime": {str(k): _frac_pair(v) for k, v in witness.y_prime.items()},
        "Q": [_frac_pair(v) for v in witness.q_values],
        "objective": _frac_pair(witness.objective),
    }


def format_fraction(value: float, max_denominator: int = 10**6, tol: float = 1e-9):
    """Exact-looking fraction when one is this close, else the float."""
    frac = Fraction(value).limit_denominator(max_denominator)
    if abs(float(frac) - value) <= tol:
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"
    return repr(value)
