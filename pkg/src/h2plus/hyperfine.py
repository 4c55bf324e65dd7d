"""Hyperfine structure of a ro-vibrational level (v, L) of H2+.

The effective spin Hamiltonian couples the electron spin S_e = 1/2, the
total nuclear spin I (0 for even L, 1 for odd L by Pauli symmetry in the
ground electronic state) and the orbital angular momentum L through five
constants b_F, c_e, c_I, d_1, d_2 in MHz.  Angular momenta are coupled as
F = S_e + I, J = L + F; the Hamiltonian is block diagonal in J, and every
block is at most 2x2, so the diagonalization is fully analytic.

Energies are M_J independent throughout; no operation takes a projection.
All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .angular import HalfInt

__all__ = [
    "RoVibLevel",
    "HyperfineCoefficients",
    "SpinBasisState",
    "HyperfineEigenstate",
    "HyperfineSolution",
    "FitError",
    "FitResult",
    "allowed_spin_states",
    "build_hfs_matrix",
    "hfs_matrix_entries",
    "diagonalize_even",
    "diagonalize_odd",
    "fit_coefficients",
    "fit_even_coefficient",
    "PURE_STATE_THRESHOLD",
]

F_HALF = HalfInt(1)
F_THREE_HALF = HalfInt(3)

# A mixing amplitude below this is snapped to exactly zero and the state is
# treated as pure.
PURE_STATE_THRESHOLD = 1e-12


class FitError(RuntimeError):
    """Coefficient fit did not converge or exceeded its residual budget."""


@dataclass(frozen=True, order=True)
class RoVibLevel:
    """A ro-vibrational level, identified by (v, L)."""

    v: int
    L: int

    def __post_init__(self):
        if self.v < 0 or self.L < 0:
            raise ValueError(f"v and L must be non-negative, got ({self.v}, {self.L})")

    @property
    def nuclear_spin(self) -> int:
        """Total nuclear spin: 0 for even L, 1 for odd L."""
        return self.L % 2

    @property
    def f_values(self) -> tuple[HalfInt, ...]:
        if self.nuclear_spin == 0:
            return (F_HALF,)
        return (F_HALF, F_THREE_HALF)


@dataclass(frozen=True)
class HyperfineCoefficients:
    """The five effective-Hamiltonian constants of one (v, L) level, MHz.

    For even L only c_e enters; the other four are ignored.
    """

    b_f: float = 0.0
    c_e: float = 0.0
    c_i: float = 0.0
    d1: float = 0.0
    d2: float = 0.0

    def __post_init__(self):
        for name in ("b_f", "c_e", "c_i", "d1", "d2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coefficient {name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.b_f, self.c_e, self.c_i, self.d1, self.d2])

    @classmethod
    def from_array(cls, values) -> "HyperfineCoefficients":
        b_f, c_e, c_i, d1, d2 = (float(x) for x in values)
        return cls(b_f, c_e, c_i, d1, d2)


@dataclass(frozen=True)
class SpinBasisState:
    """A pure coupled state |L, S_e=1/2, I, F, J> (no projection)."""

    L: int
    I: int
    F: HalfInt
    J: HalfInt

    def __str__(self) -> str:
        return f"|L={self.L} I={self.I} F={self.F} J={self.J}>"


@dataclass(frozen=True)
class HyperfineEigenstate:
    """One hyperfine sublevel with its energy shift and mixing amplitudes.

    coeffs = (C1, C3) are the amplitudes on the (F=1/2, F=3/2) pure basis
    states of the same J.  F_tilde labels the dominant F.
    """

    level: RoVibLevel
    f_tilde: HalfInt
    j: HalfInt
    shift_mhz: float
    c1: float
    c3: float

    @property
    def coeffs(self) -> tuple[float, float]:
        return (self.c1, self.c3)

    @property
    def is_pure(self) -> bool:
        return min(abs(self.c1), abs(self.c3)) < PURE_STATE_THRESHOLD

    def coeff_for(self, f: HalfInt) -> float:
        """Amplitude on the pure-F basis state; 0 for an F the level lacks."""
        if f == F_HALF:
            return self.c1
        if f == F_THREE_HALF:
            return self.c3 if self.level.nuclear_spin == 1 else 0.0
        return 0.0

    def label(self) -> str:
        return f"(F~={self.f_tilde}, J={self.j})"


@dataclass(frozen=True)
class HyperfineSolution:
    """All hyperfine sublevels of one (v, L), ordered by descending J then
    descending F_tilde."""

    level: RoVibLevel
    states: tuple[HyperfineEigenstate, ...]

    def state(self, f_tilde: HalfInt, j: HalfInt) -> HyperfineEigenstate:
        for s in self.states:
            if s.f_tilde == f_tilde and s.j == j:
                return s
        raise KeyError(f"no state (F~={f_tilde}, J={j}) in level {self.level}")


def allowed_spin_states(L: int) -> list[SpinBasisState]:
    """The pure coupled basis of a level with orbital momentum L.

    Even L (I=0): F=1/2, J = L -/+ 1/2 (J=-1/2 dropped at L=0).
    Odd L (I=1): F=1/2 with J = L -/+ 1/2 and F=3/2 with J = L-3/2 ... L+3/2
    (J = L-3/2 dropped at L=1).  Ordered by descending J, then descending F.
    """
    if L < 0:
        raise ValueError(f"L must be non-negative, got {L}")
    tl = 2 * L
    states: list[SpinBasisState] = []
    if L % 2 == 0:
        for tj in (tl + 1, tl - 1):
            if tj >= 0:
                states.append(SpinBasisState(L, 0, F_HALF, HalfInt(tj)))
    else:
        candidates = [
            (tl + 3, F_THREE_HALF),
            (tl + 1, F_THREE_HALF),
            (tl + 1, F_HALF),
            (tl - 1, F_THREE_HALF),
            (tl - 1, F_HALF),
            (tl - 3, F_THREE_HALF),
        ]
        for tj, f in candidates:
            if tj >= 0:
                states.append(SpinBasisState(L, 1, f, HalfInt(tj)))
    return states


def hfs_matrix_entries(L: int, c: HyperfineCoefficients) -> dict[str, float]:
    """Closed-form entries of the odd-L effective Hamiltonian.

    Keys A..K name the entries of the block-diagonal matrix over the basis
    (F=3/2, J=L+3/2), (3/2, L+1/2), (1/2, L+1/2), (3/2, L-1/2),
    (1/2, L-1/2), (3/2, L-3/2):

        [[A, 0, 0, 0, 0, 0],
         [0, B, C, 0, 0, 0],
         [0, C, D, 0, 0, 0],
         [0, 0, 0, E, G, 0],
         [0, 0, 0, G, H, 0],
         [0, 0, 0, 0, 0, K]]

    K is absent for L=1.
    """
    if L < 1 or L % 2 == 0:
        raise ValueError(f"odd L required, got {L}")
    b, ce, ci, d1, d2 = c.b_f, c.c_e, c.c_i, c.d1, c.d2
    d_plus = 2.0 * d1 + d2
    d_minus = d1 - d2
    up = 2 * L + 3
    dn = 2 * L - 1
    entries = {
        "A": b / 2 + L / 2 * (ce + 2 * ci - d_plus / (3 * up)),
        "B": b / 2 + (L - 3) / 6 * (ce + 2 * ci) + (L + 3) / 6 * d_plus / up,
        "C": math.sqrt(L * up) / 3 * (ce - ci) - math.sqrt(L) / (6 * math.sqrt(up)) * d_minus,
        "D": -b - L / 6 * (ce - 4 * ci),
        "E": b / 2 - (L + 4) / 6 * (ce + 2 * ci) + (L - 2) / 6 * d_plus / dn,
        "G": math.sqrt((L + 1) * dn) / 3 * (ce - ci)
        + math.sqrt(L + 1) / (6 * math.sqrt(dn)) * d_minus,
        "H": -b + (L + 1) / 6 * (ce - 4 * ci),
    }
    if L >= 3:
        entries["K"] = b / 2 - (L + 1) / 2 * (ce + 2 * ci + d_plus / (3 * dn))
    return entries


def build_hfs_matrix(L: int, c: HyperfineCoefficients) -> np.ndarray:
    """Full block-diagonal matrix of `hfs_matrix_entries` (5x5 for L=1,
    6x6 for L>=3), over the same ordered basis as `allowed_spin_states`."""
    e = hfs_matrix_entries(L, c)
    n = 5 if L == 1 else 6
    h = np.zeros((n, n))
    h[0, 0] = e["A"]
    h[1, 1], h[2, 2] = e["B"], e["D"]
    h[1, 2] = h[2, 1] = e["C"]
    h[3, 3], h[4, 4] = e["E"], e["H"]
    h[3, 4] = h[4, 3] = e["G"]
    if n == 6:
        h[5, 5] = e["K"]
    return h


def diagonalize_even(L: int, c_e: float, v: int = 0) -> HyperfineSolution:
    """Hyperfine solution for an even-L level, where only c_e contributes.

    Shifts are +L/2 * c_e for J = L+1/2 and -(L+1)/2 * c_e for J = L-1/2
    (the latter state does not exist at L=0).  All states are pure F=1/2.
    """
    if L % 2:
        raise ValueError(f"even L required, got {L}")
    level = RoVibLevel(v, L)
    states = [
        HyperfineEigenstate(level, F_HALF, HalfInt(2 * L + 1), L / 2 * c_e, 1.0, 0.0)
    ]
    if L > 0:
        states.append(
            HyperfineEigenstate(
                level, F_HALF, HalfInt(2 * L - 1), -(L + 1) / 2 * c_e, 1.0, 0.0
            )
        )
    return HyperfineSolution(level, tuple(states))


def _solve_block(m33: float, m11: float, m31: float):
    """Analytic eigenpairs of the symmetric block [[m33, m31], [m31, m11]]
    over the (F=3/2, F=1/2) basis.

    Returns ((shift, c1, c3) for the F~=3/2 state, same for F~=1/2).  The
    F~=3/2 eigenvector is normalized with C3 > 0 and the F~=1/2 partner is
    its orthogonal complement (C1 = -C3+, C3 = C1+), which reproduces the
    sign pattern of the published mixing coefficients.
    """
    half_sum = 0.5 * (m33 + m11)
    half_diff = 0.5 * (m33 - m11)
    radius = math.hypot(half_diff, m31)

    if abs(m31) < PURE_STATE_THRESHOLD * max(1.0, radius):
        return (m33, 0.0, 1.0), (m11, 1.0, 0.0)

    # Eigenvector of the F=3/2 dominant eigenvalue, cancellation-free branch.
    if half_diff >= 0.0:
        lam_32, lam_12 = half_sum + radius, half_sum - radius
        v3, v1 = half_diff + radius, m31
    else:
        lam_32, lam_12 = half_sum - radius, half_sum + radius
        v3, v1 = half_diff - radius, m31
    norm = math.hypot(v3, v1)
    c3_plus, c1_plus = v3 / norm, v1 / norm
    if c3_plus < 0.0:
        c3_plus, c1_plus = -c3_plus, -c1_plus
    if abs(c1_plus) < PURE_STATE_THRESHOLD:
        c1_plus = 0.0
        c3_plus = 1.0
    return (lam_32, c1_plus, c3_plus), (lam_12, -c3_plus, c1_plus)


def diagonalize_odd(L: int, c: HyperfineCoefficients, v: int = 0) -> HyperfineSolution:
    """Hyperfine solution for an odd-L level.

    The J = L +/- 3/2 states are pure F=3/2 with shifts A and K; each
    J = L +/- 1/2 pair mixes F=1/2 and F=3/2 and is solved in closed form.
    """
    if L % 2 == 0:
        raise ValueError(f"odd L required, got {L}")
    level = RoVibLevel(v, L)
    e = hfs_matrix_entries(L, c)
    tl = 2 * L

    states = [HyperfineEigenstate(level, F_THREE_HALF, HalfInt(tl + 3), e["A"], 0.0, 1.0)]
    upper_32, upper_12 = _solve_block(e["B"], e["D"], e["C"])
    states.append(HyperfineEigenstate(level, F_THREE_HALF, HalfInt(tl + 1), *upper_32))
    states.append(HyperfineEigenstate(level, F_HALF, HalfInt(tl + 1), *upper_12))
    lower_32, lower_12 = _solve_block(e["E"], e["H"], e["G"])
    states.append(HyperfineEigenstate(level, F_THREE_HALF, HalfInt(tl - 1), *lower_32))
    states.append(HyperfineEigenstate(level, F_HALF, HalfInt(tl - 1), *lower_12))
    if L >= 3:
        states.append(
            HyperfineEigenstate(level, F_THREE_HALF, HalfInt(tl - 3), e["K"], 0.0, 1.0)
        )
    return HyperfineSolution(level, tuple(states))


@dataclass(frozen=True)
class FitResult:
    """Outcome of a coefficient fit, with its residual diagnostics."""

    coefficients: HyperfineCoefficients
    residual_norm_mhz: float
    max_shift_residual_mhz: float
    max_mixing_residual: float
    shift_residuals_mhz: tuple[float, ...] = field(default=())


# Weight that puts a mixing-amplitude residual on the same footing as a
# shift residual in MHz (1e-5 in amplitude ~ 1e-3 MHz in shift budget).
_MIXING_WEIGHT = 100.0

_SHIFT_RESIDUAL_LIMIT_MHZ = 1e-3


def _reconstruct_entries(L: int, observed: HyperfineSolution) -> dict[str, float]:
    """Rebuild the matrix entries A..K from observed shifts and mixings."""
    tl = 2 * L
    entries = {"A": observed.state(F_THREE_HALF, HalfInt(tl + 3)).shift_mhz}

    for key33, key11, key31, tj in (("B", "D", "C", tl + 1), ("E", "H", "G", tl - 1)):
        hi = observed.state(F_THREE_HALF, HalfInt(tj))
        lo = observed.state(F_HALF, HalfInt(tj))
        v_hi = np.array([hi.c3, hi.c1])
        v_lo = np.array([lo.c3, lo.c1])
        v_hi = v_hi / np.linalg.norm(v_hi)
        v_lo = v_lo / np.linalg.norm(v_lo)
        block = hi.shift_mhz * np.outer(v_hi, v_hi) + lo.shift_mhz * np.outer(v_lo, v_lo)
        entries[key33] = block[0, 0]
        entries[key11] = block[1, 1]
        entries[key31] = 0.5 * (block[0, 1] + block[1, 0])
    if L >= 3:
        entries["K"] = observed.state(F_THREE_HALF, HalfInt(tl - 3)).shift_mhz
    return entries


def _linear_fit(L: int, observed: HyperfineSolution) -> np.ndarray:
    """Least-squares coefficients from the linearity of the matrix entries."""
    target = _reconstruct_entries(L, observed)
    keys = sorted(target)
    design = np.zeros((len(keys), 5))
    for col in range(5):
        unit = np.zeros(5)
        unit[col] = 1.0
        entries = hfs_matrix_entries(L, HyperfineCoefficients.from_array(unit))
        design[:, col] = [entries[k] for k in keys]
    rhs = np.array([target[k] for k in keys])
    solution, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    return solution


def _canonical_states(solution: HyperfineSolution) -> list[HyperfineEigenstate]:
    return sorted(solution.states, key=lambda s: (-s.j.twice, -s.f_tilde.twice))


def _observation_vector(solution: HyperfineSolution) -> np.ndarray:
    states = _canonical_states(solution)
    obs = [s.shift_mhz for s in states]
    for s in states:
        if s.j.twice in (2 * solution.level.L + 1, 2 * solution.level.L - 1):
            small = s.c1 if s.f_tilde == F_THREE_HALF else s.c3
            obs.append(_MIXING_WEIGHT * small)
    return np.array(obs)


def fit_coefficients(L: int, observed: HyperfineSolution) -> FitResult:
    """Recover the five Hamiltonian constants from an observed solution.

    The observed solution must contain all hyperfine sublevels of the odd-L
    level (shifts plus mixing coefficients).  A linear reconstruction of the
    matrix entries seeds a least-squares polish on the shifts and on the
    small mixing amplitudes; the polished minimum is deterministic.
    """
    if L % 2 == 0:
        raise ValueError("fit_coefficients handles odd L; use fit_even_coefficient")
    expected_n = 5 if L == 1 else 6
    if len(observed.states) != expected_n:
        raise FitError(
            f"need all {expected_n} sublevels of L={L}, got {len(observed.states)}"
        )

    target = _observation_vector(observed)

    def residuals(params):
        predicted = diagonalize_odd(L, HyperfineCoefficients.from_array(params),
                                    v=observed.level.v)
        return _observation_vector(predicted) - target

    seed = _linear_fit(L, observed)
    result = least_squares(residuals, seed, method="lm", xtol=1e-15, ftol=1e-15)
    if not result.success:
        raise FitError(f"coefficient fit did not converge: {result.message}")

    res = residuals(result.x)
    n_shift = len(observed.states)
    shift_res = tuple(abs(r) for r in res[:n_shift])
    mixing_res = max((abs(r) / _MIXING_WEIGHT for r in res[n_shift:]), default=0.0)
    max_shift = max(shift_res)
    if max_shift > _SHIFT_RESIDUAL_LIMIT_MHZ:
        raise FitError(
            f"fit residual {max_shift:.6f} MHz exceeds {_SHIFT_RESIDUAL_LIMIT_MHZ} MHz; "
            f"per-state residuals (MHz): {['%.6f' % r for r in shift_res]}"
        )
    return FitResult(
        coefficients=HyperfineCoefficients.from_array(result.x),
        residual_norm_mhz=float(np.linalg.norm(res)),
        max_shift_residual_mhz=max_shift,
        max_mixing_residual=mixing_res,
        shift_residuals_mhz=shift_res,
    )


def fit_even_coefficient(L: int, shift_upper_j: float, shift_lower_j: float | None = None) -> FitResult:
    """Invert c_e from the even-L shifts.

    The J = L+1/2 shift determines c_e = 2*shift/L; the J = L-1/2 shift, when
    given, only enters the residual as a consistency check.  L=0 carries no
    information and returns c_e = 0.
    """
    if L % 2:
        raise ValueError(f"even L required, got {L}")
    if L == 0:
        c_e = 0.0
        residual = abs(shift_upper_j)
    else:
        c_e = 2.0 * shift_upper_j / L
        residual = 0.0
        if shift_lower_j is not None:
            residual = abs(shift_lower_j - (-(L + 1) / 2 * c_e))
    return FitResult(
        coefficients=HyperfineCoefficients(c_e=c_e),
        residual_norm_mhz=residual,
        max_shift_residual_mhz=residual,
        max_mixing_residual=0.0,
        shift_residuals_mhz=(residual,),
    )
