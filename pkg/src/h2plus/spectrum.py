"""Hyperfine-resolved two-photon spectra for a ro-vibrational transition.

Assembles every pair of lower and upper hyperfine sublevels into a line
list: per-photon frequency shifts in MHz and averaged squared matrix
elements per polarization pair in atomic units.  Frequencies follow the
per-photon convention throughout: a hyperfine energy difference contributes
half of itself to the photon frequency, and center frequencies are photon
frequencies (9.1 um wavelengths for the fundamental band).

Line computations are independent of each other; the result ordering is
fixed (ascending frequency shift) regardless of evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .angular import HalfInt
from .hyperfine import HyperfineEigenstate, HyperfineSolution, RoVibLevel
from .twophoton import (
    OrbitalReducedElements,
    PolarizationPair,
    averaged_sq_matrix_element,
)

__all__ = [
    "TransitionLine",
    "SpectrumResult",
    "FrequencyGrid",
    "line_position_shift",
    "two_photon_spectrum",
    "convolve_profile",
    "spectrum_to_dict",
    "spectrum_to_csv",
    "spectrum_to_json",
    "format_shift",
    "format_intensity",
    "SHIFT_DECIMALS",
    "INTENSITY_SIGNIFICANT_DIGITS",
]

# Output precision used by every renderer: shifts carry 4 decimals in MHz,
# intensities 4 significant figures.
SHIFT_DECIMALS = 4
INTENSITY_SIGNIFICANT_DIGITS = 4


def format_shift(value: float) -> str:
    return f"{value:.{SHIFT_DECIMALS}f}"


def format_intensity(value: float) -> str:
    return f"{value:.{INTENSITY_SIGNIFICANT_DIGITS - 1}e}" if value else "0.000e+00"


@dataclass(frozen=True)
class TransitionLine:
    """One hyperfine component of a two-photon transition.

    delta_f is the per-photon frequency shift in MHz; intensities map each
    polarization pair to the averaged squared matrix element in atomic
    units.  Selection-forbidden combinations carry exact zeros.
    """

    lower_f: HalfInt
    lower_j: HalfInt
    upper_f: HalfInt
    upper_j: HalfInt
    delta_f_mhz: float
    intensity: dict[PolarizationPair, float]

    @property
    def dark(self) -> bool:
        """True when every requested polarization has zero intensity."""
        return all(v == 0.0 for v in self.intensity.values())

    def label(self) -> str:
        return (
            f"({self.lower_f},{self.lower_j}) -> ({self.upper_f},{self.upper_j})"
        )


@dataclass(frozen=True)
class SpectrumResult:
    """Full line list of one ro-vibrational two-photon transition."""

    lower: RoVibLevel
    upper: RoVibLevel
    lines: tuple[TransitionLine, ...]
    pols: tuple[PolarizationPair, ...]
    center_frequency_mhz: float | None = None
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def n_bright(self) -> int:
        return sum(1 for line in self.lines if not line.dark)


def line_position_shift(lower: HyperfineEigenstate, upper: HyperfineEigenstate) -> float:
    """Per-photon frequency shift of a hyperfine component in MHz: half of
    the upper-minus-lower hyperfine energy difference."""
    return 0.5 * (upper.shift_mhz - lower.shift_mhz)


def two_photon_spectrum(
    lower_sol: HyperfineSolution,
    upper_sol: HyperfineSolution,
    orb: OrbitalReducedElements,
    pols: Sequence[PolarizationPair],
    center_frequency_mhz: float | None = None,
    provenance: dict[str, str] | None = None,
) -> SpectrumResult:
    """Enumerate all hyperfine sublevel pairs of the transition.

    Every pair is emitted, including those that are dark for all requested
    polarizations; lines are sorted by ascending frequency shift.
    """
    if lower_sol.level == upper_sol.level:
        raise ValueError("lower and upper levels must differ")
    pols = tuple(pols)
    lines = []
    for lo in lower_sol.states:
        for up in upper_sol.states:
            intensity = {
                pol: averaged_sq_matrix_element(lo, up, pol, orb) for pol in pols
            }
            lines.append(
                TransitionLine(
                    lower_f=lo.f_tilde,
                    lower_j=lo.j,
                    upper_f=up.f_tilde,
                    upper_j=up.j,
                    delta_f_mhz=line_position_shift(lo, up),
                    intensity=intensity,
                )
            )
    lines.sort(
        key=lambda ln: (
            ln.delta_f_mhz,
            ln.lower_j.twice,
            ln.upper_j.twice,
            ln.lower_f.twice,
            ln.upper_f.twice,
        )
    )
    return SpectrumResult(
        lower=lower_sol.level,
        upper=upper_sol.level,
        lines=tuple(lines),
        pols=pols,
        center_frequency_mhz=center_frequency_mhz,
        provenance=dict(provenance or {}),
    )


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid in MHz: start, stop (inclusive) and step."""

    start_mhz: float
    stop_mhz: float
    step_mhz: float

    def __post_init__(self):
        if self.step_mhz <= 0.0:
            raise ValueError(f"grid step must be positive, got {self.step_mhz}")
        if self.stop_mhz < self.start_mhz:
            raise ValueError("grid stop must not precede its start")

    def frequencies(self) -> np.ndarray:
        n = int(math.floor((self.stop_mhz - self.start_mhz) / self.step_mhz + 1e-9)) + 1
        return self.start_mhz + self.step_mhz * np.arange(n)


def convolve_profile(
    lines: Iterable[TransitionLine],
    pol: PolarizationPair,
    gamma_f_rad_s: float,
    grid: FrequencyGrid,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample the spectrum as a sum of Lorentzians on a frequency grid.

    Each line contributes a peak-normalized Lorentzian of FWHM
    gamma_f/(2 pi) (converted to MHz) centered at its frequency shift, with
    peak height equal to the line intensity for the chosen polarization.
    Returns (frequencies_MHz, samples).
    """
    if gamma_f_rad_s <= 0.0:
        raise ValueError(f"instrumental width must be positive, got {gamma_f_rad_s}")
    freqs = grid.frequencies()
    if freqs.size == 0:
        raise ValueError("frequency grid is empty")
    fwhm_mhz = gamma_f_rad_s / (2.0 * math.pi) / 1e6
    half_width = 0.5 * fwhm_mhz
    samples = np.zeros_like(freqs)
    for line in lines:
        amplitude = line.intensity.get(pol, 0.0)
        if amplitude == 0.0:
            continue
        samples += amplitude * half_width**2 / (
            (freqs - line.delta_f_mhz) ** 2 + half_width**2
        )
    return freqs, samples


def spectrum_to_dict(result: SpectrumResult, absolute: bool = False) -> dict:
    """JSON-ready dictionary mirroring the spectrum result."""
    payload = {
        "lower": {"v": result.lower.v, "L": result.lower.L},
        "upper": {"v": result.upper.v, "L": result.upper.L},
        "center_frequency_MHz": result.center_frequency_mhz,
        "polarizations": [pol.token for pol in result.pols],
        "units": {"delta_f": "MHz", "intensity": "a.u."},
        "provenance": result.provenance,
        "lines": [],
    }
    for line in result.lines:
        row = {
            "F_lower": str(line.lower_f),
            "J_lower": str(line.lower_j),
            "F_upper": str(line.upper_f),
            "J_upper": str(line.upper_j),
            "delta_f_MHz": round(line.delta_f_mhz, SHIFT_DECIMALS),
            "intensity": {
                pol.token: float(f"{line.intensity[pol]:.{INTENSITY_SIGNIFICANT_DIGITS-1}e}")
                for pol in result.pols
            },
            "dark": line.dark,
        }
        if absolute and result.center_frequency_mhz is not None:
            row["absolute_f_MHz"] = round(
                result.center_frequency_mhz + line.delta_f_mhz, SHIFT_DECIMALS
            )
        payload["lines"].append(row)
    return payload


def spectrum_to_csv(result: SpectrumResult, absolute: bool = False) -> str:
    """Render the line list as CSV with locale-independent formatting.

    Columns: L, v, F_lower, J_lower, F_upper, J_upper, delta_f_MHz and one
    intensity column per requested polarization pair; an absolute frequency
    column is appended on request.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = ["L", "v", "F_lower", "J_lower", "F_upper", "J_upper", "delta_f_MHz"]
    header += [f"intensity_{pol.token}" for pol in result.pols]
    if absolute:
        if result.center_frequency_mhz is None:
            raise ValueError("no center frequency available for absolute output")
        header.append("absolute_f_MHz")
    writer.writerow(header)
    for line in result.lines:
        row = [
            result.lower.L,
            result.lower.v,
            str(line.lower_f),
            str(line.lower_j),
            str(line.upper_f),
            str(line.upper_j),
            format_shift(line.delta_f_mhz),
        ]
        row += [format_intensity(line.intensity[pol]) for pol in result.pols]
        if absolute:
            row.append(format_shift(result.center_frequency_mhz + line.delta_f_mhz))
        writer.writerow(row)
    return buffer.getvalue()


def spectrum_to_json(result: SpectrumResult, absolute: bool = False) -> str:
    return json.dumps(spectrum_to_dict(result, absolute=absolute), indent=2, sort_keys=True)
