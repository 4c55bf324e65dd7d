"""Loading and resolution of the bundled data files.

Three files drive the computations: fitted hyperfine coefficients per
(v, L), reduced orbital two-photon elements per ro-vibrational transition,
and spin-independent center frequencies.  A reference/ subdirectory holds
the published level shifts, mixing coefficients and line lists used by the
validation command and the regression tests.

The data directory is resolved from an explicit path, then the
H2PLUS_DATA_DIR environment variable, then the package's bundled data.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .angular import HalfInt
from .hyperfine import (
    HyperfineCoefficients,
    HyperfineEigenstate,
    HyperfineSolution,
    RoVibLevel,
    diagonalize_even,
    diagonalize_odd,
)
from .twophoton import OrbitalReducedElements

__all__ = [
    "DataError",
    "DATA_DIR_ENV_VAR",
    "default_data_dir",
    "resolve_data_dir",
    "CoefficientRecord",
    "load_coefficients",
    "load_orbital_elements",
    "load_center_frequencies",
    "solve_level",
    "load_reference_levels_even",
    "load_reference_levels_odd",
    "load_reference_lines",
]

DATA_DIR_ENV_VAR = "H2PLUS_DATA_DIR"

COEFFICIENTS_FILE = "hyperfine_coefficients.json"
ORBITAL_FILE = "orbital_reduced_elements.json"
CENTERS_FILE = "center_frequencies.json"


class DataError(Exception):
    """A required data file is missing, unreadable or malformed."""


def default_data_dir() -> Path:
    return Path(resources.files("h2plus") / "data")


def resolve_data_dir(explicit: str | os.PathLike | None = None) -> Path:
    """Explicit path, then $H2PLUS_DATA_DIR, then the bundled directory."""
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(DATA_DIR_ENV_VAR)
    if env:
        return Path(env)
    return default_data_dir()


def _read_json(path: Path) -> dict:
    if not path.is_file():
        raise DataError(f"data file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _require(record: dict, key: str, path: Path):
    if key not in record:
        raise DataError(f"{path}: record is missing key {key!r}: {record}")
    return record[key]


@dataclass(frozen=True)
class CoefficientRecord:
    """One fitted coefficient set with its provenance and fit residual."""

    level: RoVibLevel
    coefficients: HyperfineCoefficients
    fit_residual_mhz: float
    provenance: str


def load_coefficients(data_dir: str | os.PathLike | None = None) -> dict[RoVibLevel, CoefficientRecord]:
    path = resolve_data_dir(data_dir) / COEFFICIENTS_FILE
    payload = _read_json(path)
    if payload.get("units") != "MHz":
        raise DataError(f"{path}: expected units 'MHz', got {payload.get('units')!r}")
    table: dict[RoVibLevel, CoefficientRecord] = {}
    for record in _require(payload, "coefficients", path):
        level = RoVibLevel(int(_require(record, "v", path)), int(_require(record, "L", path)))
        coeffs = HyperfineCoefficients(
            b_f=float(_require(record, "b_F", path)),
            c_e=float(_require(record, "c_e", path)),
            c_i=float(_require(record, "c_I", path)),
            d1=float(_require(record, "d_1", path)),
            d2=float(_require(record, "d_2", path)),
        )
        table[level] = CoefficientRecord(
            level=level,
            coefficients=coeffs,
            fit_residual_mhz=float(_require(record, "fit_residual_MHz", path)),
            provenance=str(record.get("provenance", "")),
        )
    if not table:
        raise DataError(f"{path}: no coefficient records")
    return table


def load_orbital_elements(
    data_dir: str | os.PathLike | None = None,
) -> dict[tuple[RoVibLevel, RoVibLevel], OrbitalReducedElements]:
    path = resolve_data_dir(data_dir) / ORBITAL_FILE
    payload = _read_json(path)
    table: dict[tuple[RoVibLevel, RoVibLevel], OrbitalReducedElements] = {}
    for record in _require(payload, "elements", path):
        lower = RoVibLevel(int(_require(record, "v", path)), int(_require(record, "L", path)))
        upper = RoVibLevel(
            int(_require(record, "v_prime", path)), int(_require(record, "L_prime", path))
        )
        table[(lower, upper)] = OrbitalReducedElements(
            lower=lower,
            upper=upper,
            q0=float(_require(record, "Q0", path)),
            q2=float(_require(record, "Q2", path)),
        )
    if not table:
        raise DataError(f"{path}: no orbital element records")
    return table


def load_center_frequencies(data_dir: str | os.PathLike | None = None) -> dict[int, dict]:
    """Per-photon center frequencies of the fundamental band, keyed by L."""
    path = resolve_data_dir(data_dir) / CENTERS_FILE
    payload = _read_json(path)
    table = {}
    for record in _require(payload, "centers", path):
        table[int(_require(record, "L", path))] = {
            "nu_2ph_MHz": float(_require(record, "nu_2ph_MHz", path)),
            "lambda_um": float(_require(record, "lambda_um", path)),
        }
    if not table:
        raise DataError(f"{path}: no center frequency records")
    return table


def solve_level(
    v: int, L: int, data_dir: str | os.PathLike | None = None,
    coefficients: dict[RoVibLevel, CoefficientRecord] | None = None,
) -> HyperfineSolution:
    """Diagonalize the level (v, L) with the shipped coefficients."""
    if coefficients is None:
        coefficients = load_coefficients(data_dir)
    level = RoVibLevel(v, L)
    try:
        record = coefficients[level]
    except KeyError:
        available = ", ".join(f"({lv.v},{lv.L})" for lv in sorted(coefficients))
        raise DataError(
            f"no hyperfine coefficients for (v={v}, L={L}); available: {available}"
        ) from None
    if L % 2 == 0:
        return diagonalize_even(L, record.coefficients.c_e, v=v)
    return diagonalize_odd(L, record.coefficients, v=v)


# --- published reference data (validation fixtures) ---


def _reference_path(data_dir, name: str) -> Path:
    return resolve_data_dir(data_dir) / "reference" / name


def load_reference_levels_even(data_dir=None) -> list[dict]:
    payload = _read_json(_reference_path(data_dir, "levels_even.json"))
    return _require(payload, "levels", _reference_path(data_dir, "levels_even.json"))


def load_reference_levels_odd(data_dir=None) -> list[HyperfineSolution]:
    path = _reference_path(data_dir, "levels_odd.json")
    payload = _read_json(path)
    solutions = []
    for entry in _require(payload, "levels", path):
        level = RoVibLevel(int(entry["v"]), int(entry["L"]))
        states = tuple(
            HyperfineEigenstate(
                level=level,
                f_tilde=HalfInt.parse(row["F_tilde"]),
                j=HalfInt.parse(row["J"]),
                shift_mhz=float(row["shift_MHz"]),
                c1=float(row["C1"]),
                c3=float(row["C3"]),
            )
            for row in entry["states"]
        )
        solutions.append(HyperfineSolution(level, states))
    return solutions


def load_reference_lines(data_dir=None) -> list[dict]:
    path = _reference_path(data_dir, "two_photon_lines.json")
    payload = _read_json(path)
    return _require(payload, "transitions", path)
