"""Physical configuration types, mode conventions and unit handling.

Natural units everywhere: hbar = c = 1 and the cavity length L sets the
length scale, so energies come out in 1/L and forces in 1/L^2.  SI
conversion happens only at the CLI boundary through `to_si`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "Boundary",
    "CouplingKind",
    "CavitySpec",
    "AtomSpec",
    "CouplingModel",
    "SeriesControl",
    "EnergyBreakdown",
    "EnergyResult",
    "mode_weight",
    "momentum_matrix_element_1s2s",
    "to_si",
    "HBAR_C",
]

# hbar * c in J*m (CODATA hbar = 1.054571817e-34, c = 299792458)
HBAR_C = 3.16152677e-26


class Boundary(enum.Enum):
    """Cavity wall condition; fixes the mode functions sin/cos(k_j x)."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class CouplingKind(enum.Enum):
    BARE_POINT = "bare"
    SMEARED_DIAMAGNETIC = "smeared"


@dataclass(frozen=True)
class CavitySpec:
    """Cavity of length L; mode j has k_j = w_j = pi j / L, j >= 1.

    There is no j = 0 term in any sum, for either boundary kind.
    """

    length_L: float
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        if not self.length_L > 0:
            raise DomainError("CavitySpec: length_L must be positive")
        if not isinstance(self.boundary, Boundary):
            object.__setattr__(self, "boundary", Boundary(self.boundary))

    def omega(self, j):
        return math.pi * j / self.length_L


@dataclass(frozen=True)
class AtomSpec:
    """Two-level atom: position, gap, coupling and smearing radius.

    position_x in [0, L] (walls are legal; series handle them term by
    term), gap_Omega > 0 in 1/length units, coupling_lambda >= 0,
    radius_a0 >= 0 (only meaningful for the smeared coupling).
    """

    position_x: float
    gap_Omega: float
    coupling_lambda: float
    radius_a0: float = 0.0

    def __post_init__(self):
        if not self.gap_Omega > 0:
            raise DomainError("AtomSpec: gap_Omega must be positive")
        if self.coupling_lambda < 0:
            raise DomainError("AtomSpec: coupling_lambda must be >= 0")
        if self.radius_a0 < 0:
            raise DomainError("AtomSpec: radius_a0 must be >= 0")

    def validate_in(self, cavity: CavitySpec):
        if not 0.0 <= self.position_x <= cavity.length_L:
            raise DomainError(
                f"AtomSpec: position_x={self.position_x} outside [0, {cavity.length_L}]")


@dataclass(frozen=True)
class CouplingModel:
    """Coupling choice: point paramagnetic only, or smeared with the
    alpha-weighted quadratic self-interaction term added."""

    kind: CouplingKind = CouplingKind.BARE_POINT
    alpha: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, CouplingKind):
            object.__setattr__(self, "kind", CouplingKind(self.kind))
        if self.alpha < 0:
            raise DomainError("CouplingModel: alpha must be >= 0")

    @property
    def smeared(self):
        return self.kind is CouplingKind.SMEARED_DIAMAGNETIC


def bare_point():
    return CouplingModel(CouplingKind.BARE_POINT, alpha=0.0)


def smeared_diamagnetic(alpha=1.0):
    return CouplingModel(CouplingKind.SMEARED_DIAMAGNETIC, alpha=alpha)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for mode sums.

    abs_tol=None means "auto": resolved to 1e-14 * lambda^2 at call time
    (the natural energy scale is lambda^2).  tail_policy=None picks the
    default per series: averaged_tail for bare sums, integral_bound for
    smeared ones.
    """

    rel_tol: float = 1e-10
    abs_tol: float | None = None
    max_modes: int = 10**7
    tail_policy: str | None = None  # "integral_bound" | "averaged_tail" | None

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("SeriesControl: rel_tol must be positive")
        if self.abs_tol is not None and not self.abs_tol > 0:
            raise DomainError("SeriesControl: abs_tol must be positive")
        if self.max_modes < 1:
            raise DomainError("SeriesControl: max_modes must be >= 1")
        if self.tail_policy not in (None, "integral_bound", "averaged_tail"):
            raise DomainError(f"SeriesControl: unknown tail_policy {self.tail_policy!r}")

    def resolved_abs_tol(self, coupling_lambda):
        if self.abs_tol is not None:
            return self.abs_tol
        return 1e-14 * coupling_lambda**2


@dataclass(frozen=True)
class EnergyBreakdown:
    """Paramagnetic and diamagnetic pieces of a smeared energy shift.

    total = e2_udw + alpha * e1_phi2 holds as an exact arithmetic
    identity at assembly.
    """

    e2_udw: float
    e1_phi2: float
    total: float


@dataclass(frozen=True)
class EnergyResult:
    """Energy shift in units of 1/L with its evaluation metadata."""

    value: float
    error_bound: float
    modes_used: int
    path: str  # "series" | "closed_form"
    breakdown: EnergyBreakdown | None = None
    warnings: tuple = ()


def mode_weight(j, L, a0):
    """Per-mode weight of the Lorentzian atomic profile.

    f_j(L, a0) = 2 / ((a0 pi j / L)^2 + 1), strictly decreasing in j,
    range (0, 2].  Convention note: the weight tends to 2 (not 1) as
    a0 -> 0, so the smeared series does not reduce to the point-coupling
    series in that limit (f^2 contributes an extra factor 4); both
    conventions are kept distinct throughout.

    Accepts scalar or ndarray j.
    """

    if L <= 0:
        raise DomainError("mode_weight: L must be positive")
    if a0 < 0:
        raise DomainError("mode_weight: a0 must be >= 0")
    return 2.0 / ((a0 * math.pi / L) ** 2 * j * j + 1.0)


def momentum_matrix_element_1s2s(a0):
    """|<e|p|g>| = 4 sqrt(2) / (27 a0) for hydrogenic 1s -> 2s orbitals.

    Documentation helper for rescaling the diamagnetic weight
    (alpha ~ alpha' / |<e|p|g>|^2); not consumed by the solvers.
    """

    if a0 <= 0:
        raise DomainError("momentum_matrix_element_1s2s: a0 must be positive")
    return 4.0 * math.sqrt(2.0) / (27.0 * a0)


def to_si(value, unit, L_meters):
    """Convert a natural-units value to SI.

    unit="energy": multiply by hbar*c/L (joules); unit="force":
    multiply by hbar*c/L^2 (newtons).  Linear in `value`.
    """

    if L_meters <= 0:
        raise DomainError("to_si: L_meters must be positive")
    if unit == "energy":
        return value * HBAR_C / L_meters
    if unit == "force":
        return value * HBAR_C / L_meters**2
    raise DomainError(f"to_si: unknown unit {unit!r}")
