"""Two-photon transition amplitudes between hyperfine states.

The symmetrized two-photon operator for standard polarizations q1, q2 in
{-1, 0, +1} decomposes into irreducible tensors of rank 0 and 2 only (the
rank-1 part cancels under symmetrization).  Matrix elements between
hyperfine states factor through the Wigner-Eckart theorem into polarization
coefficients, Clebsch-Gordan geometry, and reduced orbital elements
<vL||Q(k)||v'L'> that are ingested as data in atomic units.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angular import HalfInt, clebsch_gordan, minus_one_pow, wigner6j
from .hyperfine import F_HALF, F_THREE_HALF, HyperfineEigenstate, RoVibLevel

__all__ = [
    "PolarizationPair",
    "TensorCoeffs",
    "OrbitalReducedElements",
    "IntermediateSums",
    "SelectionRuleError",
    "SelectionVerdict",
    "tensor_coefficients",
    "reduced_from_intermediate_sums",
    "hyperfine_reduced_q",
    "averaged_sq_matrix_element",
    "polarized_matrix_element",
    "selection_check",
    "PI_PI",
    "SIGMA_PLUS_SIGMA_PLUS",
    "SIGMA_PLUS_SIGMA_MINUS",
]

_COMPONENT_NAMES = {-1: "sm", 0: "pi", 1: "sp"}
_COMPONENT_VALUES = {name: q for q, name in _COMPONENT_NAMES.items()}


class SelectionRuleError(ValueError):
    """A requested coupling violates a structural selection rule."""


@dataclass(frozen=True, order=True)
class PolarizationPair:
    """Standard polarization components (q1, q2) of the two absorbed photons:
    sigma- (q=-1), pi (q=0), sigma+ (q=+1)."""

    q1: int
    q2: int

    def __post_init__(self):
        for q in (self.q1, self.q2):
            if q not in (-1, 0, 1):
                raise ValueError(f"polarization component must be -1, 0 or +1, got {q}")

    @property
    def q_total(self) -> int:
        return self.q1 + self.q2

    @property
    def token(self) -> str:
        return _COMPONENT_NAMES[self.q1] + _COMPONENT_NAMES[self.q2]

    @classmethod
    def from_token(cls, token: str) -> "PolarizationPair":
        """Parse tokens like 'pipi', 'spsp', 'spsm', 'pisp'."""
        t = token.strip().lower()
        if len(t) == 4 and t[:2] in _COMPONENT_VALUES and t[2:] in _COMPONENT_VALUES:
            return cls(_COMPONENT_VALUES[t[:2]], _COMPONENT_VALUES[t[2:]])
        raise ValueError(f"unknown polarization token {token!r}")

    def swapped(self) -> "PolarizationPair":
        return PolarizationPair(self.q2, self.q1)

    def __str__(self) -> str:
        return self.token


PI_PI = PolarizationPair(0, 0)
SIGMA_PLUS_SIGMA_PLUS = PolarizationPair(1, 1)
SIGMA_PLUS_SIGMA_MINUS = PolarizationPair(1, -1)


@dataclass(frozen=True)
class TensorCoeffs:
    """Rank-2 and rank-0 weights of the symmetrized two-photon operator for
    one polarization pair: a2[q] for q = -2..2 and the scalar weight a00.

    Only the entry at q = q1+q2 can be nonzero, and a00 requires q1+q2 = 0.
    """

    a2: tuple[float, float, float, float, float]
    a00: float
    q_total: int

    def a2_at(self, q: int) -> float:
        if not -2 <= q <= 2:
            return 0.0
        return self.a2[q + 2]

    def norm_sq(self) -> float:
        return sum(a * a for a in self.a2) + self.a00 * self.a00


@dataclass(frozen=True)
class OrbitalReducedElements:
    """Reduced orbital elements <vL||Q(0)||v'L'> and <vL||Q(2)||v'L'> in
    atomic units for one ro-vibrational transition."""

    lower: RoVibLevel
    upper: RoVibLevel
    q0: float
    q2: float

    def __post_init__(self):
        delta_l = abs(self.upper.L - self.lower.L)
        if delta_l not in (0, 2):
            raise SelectionRuleError(
                f"two-photon operator cannot couple L={self.lower.L} to L={self.upper.L}"
            )
        if delta_l != 0 and self.q0 != 0.0:
            raise ValueError("Q(0) must vanish unless L = L'")

    def element(self, k: int) -> float:
        if k == 0:
            return self.q0
        if k == 2:
            return self.q2
        raise ValueError(f"rank must be 0 or 2, got {k}")


@dataclass(frozen=True)
class IntermediateSums:
    """The three partial sums over intermediate states with orbital momentum
    L-1, L, L+1, in atomic units."""

    a_minus: float
    a_zero: float
    a_plus: float


def tensor_coefficients(pair: PolarizationPair) -> TensorCoeffs:
    """Polarization weights a(k)_q = <1 1 q1 q2 | k q> for k = 0 and 2."""
    q = pair.q_total
    a2 = [0.0] * 5
    a2[q + 2] = clebsch_gordan(1, pair.q1, 1, pair.q2, 2, q)
    a00 = clebsch_gordan(1, pair.q1, 1, pair.q2, 0, 0) if q == 0 else 0.0
    return TensorCoeffs(a2=tuple(a2), a00=a00, q_total=q)


def reduced_from_intermediate_sums(
    sums: IntermediateSums, lower: RoVibLevel, upper: RoVibLevel
) -> OrbitalReducedElements:
    """Assemble <vL||Q(k)||v'L'> from the three intermediate-state sums.

    For L' = L both ranks contribute; for L' = L -/+ 2 only the rank-2
    element survives and involves a_minus / a_plus alone.
    """
    L, Lp = lower.L, upper.L
    root = math.sqrt(2 * L + 1)
    am, a0, ap = sums.a_minus, sums.a_zero, sums.a_plus
    if Lp == L:
        q0 = -root * math.sqrt(3.0) / 3.0 * (am + a0 + ap)
        if L == 0:
            q2 = 0.0
        else:
            q2 = (
                -root
                / math.sqrt(6.0)
                * math.sqrt((2 * L + 3) * (2 * L - 1) * L * (L + 1))
                * (
                    am / (L * (2 * L - 1))
                    - a0 / (L * (L + 1))
                    + ap / ((2 * L + 3) * (L + 1))
                )
            )
    elif Lp == L - 2:
        q0 = 0.0
        q2 = -root * math.sqrt((2 * L - 3) / (2 * L - 1)) * am
    elif Lp == L + 2:
        q0 = 0.0
        q2 = -root * math.sqrt((2 * L + 5) / (2 * L + 3)) * ap
    else:
        raise SelectionRuleError(f"|L - L'| must be 0 or 2, got L={L}, L'={Lp}")
    return OrbitalReducedElements(lower=lower, upper=upper, q0=q0, q2=q2)


def _check_levels(
    lower: HyperfineEigenstate, upper: HyperfineEigenstate, orb: OrbitalReducedElements
) -> None:
    if (lower.level.L, upper.level.L) != (orb.lower.L, orb.upper.L):
        raise ValueError(
            f"orbital elements are for L={orb.lower.L}->L'={orb.upper.L}, "
            f"got states with L={lower.level.L}->L'={upper.level.L}"
        )


def hyperfine_reduced_q(
    k: int,
    lower: HyperfineEigenstate,
    upper: HyperfineEigenstate,
    orb: OrbitalReducedElements,
) -> float:
    """Reduced element <g J||Q(k)||e J'> between (possibly mixed) hyperfine
    states, as a mixing-weighted sum over the shared pure-F channels.

    Each channel carries C_F(g) * C_F(e) * (-1)^(J'+L+F+k) *
    sqrt((2J+1)(2J'+1)) * {L k L'; J' F J} * <vL||Q(k)||v'L'>.  Violated
    triangles vanish through the 6j symbol; states of different total
    nuclear spin give exactly zero.
    """
    if k not in (0, 2):
        raise ValueError(f"rank must be 0 or 2, got {k}")
    if lower.level.nuclear_spin != upper.level.nuclear_spin:
        return 0.0
    _check_levels(lower, upper, orb)
    orbital = orb.element(k)
    if orbital == 0.0:
        return 0.0

    L, Lp = lower.level.L, upper.level.L
    j, jp = lower.j, upper.j
    f_values = (F_HALF, F_THREE_HALF) if lower.level.nuclear_spin == 1 else (F_HALF,)
    total = 0.0
    for f in f_values:
        weight = lower.coeff_for(f) * upper.coeff_for(f)
        if weight == 0.0:
            continue
        six = wigner6j(L, k, Lp, jp, f, j)
        if six == 0.0:
            continue
        total += weight * minus_one_pow(jp, L, f, k) * six
    return total * math.sqrt((j.twice + 1.0) * (jp.twice + 1.0)) * orbital


def averaged_sq_matrix_element(
    lower: HyperfineEigenstate,
    upper: HyperfineEigenstate,
    pair: PolarizationPair,
    orb: OrbitalReducedElements,
) -> float:
    """Squared two-photon matrix element averaged over the magnetic sublevels
    of an unpolarized initial state, in atomic units:

        (1/(2J+1)) * sum_k |a(k)_q <gJ||Q(k)||eJ'>|^2 / (2k+1),  q = q1+q2.
    """
    coeffs = tensor_coefficients(pair)
    q = coeffs.q_total
    total = 0.0
    for k, amplitude in ((0, coeffs.a00), (2, coeffs.a2_at(q))):
        if amplitude == 0.0:
            continue
        reduced = hyperfine_reduced_q(k, lower, upper, orb)
        if reduced == 0.0:
            continue
        total += (amplitude * reduced) ** 2 / (2 * k + 1)
    return total / (lower.j.twice + 1.0)


def polarized_matrix_element(
    lower: HyperfineEigenstate,
    m_lower: HalfInt,
    upper: HyperfineEigenstate,
    m_upper: HalfInt,
    pair: PolarizationPair,
    orb: OrbitalReducedElements,
) -> float:
    """Two-photon matrix element between specific magnetic sublevels:

        sum_k a(k)_q <J' k M' q | J M> <gJ||Q(k)||eJ'> / sqrt(2J+1).

    Zero unless M = M' + q1 + q2.
    """
    m_lower = HalfInt.of(m_lower)
    m_upper = HalfInt.of(m_upper)
    if abs(m_lower.twice) > lower.j.twice or abs(m_upper.twice) > upper.j.twice:
        raise ValueError("projection exceeds its angular momentum")
    coeffs = tensor_coefficients(pair)
    q = coeffs.q_total
    if m_lower.twice != m_upper.twice + 2 * q:
        return 0.0
    total = 0.0
    for k, amplitude in ((0, coeffs.a00), (2, coeffs.a2_at(q))):
        if amplitude == 0.0:
            continue
        geometry = clebsch_gordan(upper.j, m_upper, k, q, lower.j, m_lower)
        if geometry == 0.0:
            continue
        total += amplitude * geometry * hyperfine_reduced_q(k, lower, upper, orb)
    return total / math.sqrt(lower.j.twice + 1.0)


@dataclass(frozen=True)
class SelectionVerdict:
    """Outcome of a selection-rule check.

    `weak` marks transitions that survive only through F-state mixing.
    `delta_m` is the required projection change M_J' - M_J for the pair.
    """

    allowed: bool
    weak: bool = False
    reason: str | None = None
    delta_m: int = 0

    def __bool__(self) -> bool:
        return self.allowed


def selection_check(
    lower: HyperfineEigenstate,
    upper: HyperfineEigenstate,
    pair: PolarizationPair,
) -> SelectionVerdict:
    """Classify a hyperfine transition as allowed, weakly allowed (through
    mixed states of different dominant F), or forbidden with a reason."""
    q = pair.q_total
    delta_m = -q
    delta_l = abs(upper.level.L - lower.level.L)
    if delta_l not in (0, 2):
        return SelectionVerdict(False, reason=f"|delta L| = {delta_l} (must be 0 or 2)",
                                delta_m=delta_m)
    if lower.level.nuclear_spin != upper.level.nuclear_spin:
        return SelectionVerdict(False, reason="total nuclear spin changes",
                                delta_m=delta_m)
    delta_j_twice = abs(upper.j.twice - lower.j.twice)
    if delta_j_twice > 4:
        return SelectionVerdict(False, reason=f"|delta J| = {HalfInt(delta_j_twice)} > 2",
                                delta_m=delta_m)
    if 2 * abs(q) > lower.j.twice + upper.j.twice:
        return SelectionVerdict(
            False,
            reason=f"no sublevel pair with M_J' = M_J - {q} exists",
            delta_m=delta_m,
        )
    if lower.f_tilde != upper.f_tilde:
        if lower.is_pure and upper.is_pure:
            return SelectionVerdict(False, reason="delta F != 0 between pure states",
                                    delta_m=delta_m)
        return SelectionVerdict(True, weak=True, delta_m=delta_m)
    return SelectionVerdict(True, delta_m=delta_m)
