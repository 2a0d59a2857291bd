"""Casimir-Polder energies and forces for two-level atoms in a 1+1D cavity.

Ground-state energy shifts and Casimir-type forces for Unruh-DeWitt
atoms between Dirichlet or Neumann walls, with or without the smeared
diamagnetic self-interaction, for single atoms, N-atom media and
fourth-order atom pairs.  Every quantity has two independent routes
(mode series vs special-function closed forms, analytic force series vs
finite differences) that the validation suite reconciles.

Natural units: hbar = c = 1, lengths in units of the cavity length L,
energies in 1/L, forces in 1/L^2; `to_si` converts at the boundary.
"""

from .errors import (
    CasimirCavityError,
    DomainError,
    ImaginaryResidue,
    NoConvergence,
    NoCrossing,
    PoleOnPath,
)
from .model import (
    AtomSpec,
    Boundary,
    CavitySpec,
    CouplingKind,
    CouplingModel,
    EnergyBreakdown,
    EnergyResult,
    HBAR_C,
    SeriesControl,
    bare_point,
    mode_weight,
    momentum_matrix_element_1s2s,
    smeared_diamagnetic,
    to_si,
)
from .specfun import (
    SeriesAccuracy,
    gauss_2f1,
    gen_harmonic,
    inc_beta,
    lerch_phi,
    pochhammer,
    polygamma,
)
from .energy import boundary_sum_rule, energy_closed_form, energy_series
from .force import (
    AlphaSweepResult,
    Constraint,
    ForceResult,
    alpha_sweep,
    atom_force,
    cross_check,
    finite_difference_force,
    wall_force_fixed_position,
    wall_force_fixed_ratio,
)
from .medium import (
    CriticalScan,
    MediumSpec,
    PairSpec,
    critical_atom_number,
    empty_casimir_force,
    medium_energy,
    medium_wall_force,
    pair_energy_4th,
    pair_wall_force_fixed_ratio,
    uniform_wall_force,
)
from .validate import run_validation

__version__ = "0.1.0"

__all__ = [
    "AlphaSweepResult", "AtomSpec", "Boundary", "CasimirCavityError",
    "CavitySpec", "Constraint", "CouplingKind", "CouplingModel",
    "CriticalScan", "DomainError", "EnergyBreakdown", "EnergyResult",
    "ForceResult", "HBAR_C", "ImaginaryResidue", "MediumSpec",
    "NoConvergence", "NoCrossing", "PairSpec", "PoleOnPath",
    "SeriesAccuracy", "SeriesControl", "alpha_sweep", "atom_force",
    "bare_point", "boundary_sum_rule", "critical_atom_number",
    "cross_check", "empty_casimir_force", "energy_closed_form",
    "energy_series", "finite_difference_force", "gauss_2f1",
    "gen_harmonic", "inc_beta", "lerch_phi", "medium_energy",
    "medium_wall_force", "mode_weight", "momentum_matrix_element_1s2s",
    "pair_energy_4th", "pair_wall_force_fixed_ratio", "pochhammer",
    "polygamma", "run_validation", "smeared_diamagnetic", "to_si",
    "uniform_wall_force", "wall_force_fixed_position",
    "wall_force_fixed_ratio", "__version__",
]
