"""Forces on the cavity walls and on the atom.

Wall forces come in two flavors depending on the constraint applied
while the cavity length varies: `fixed_ratio` keeps x/L constant (the
medium co-expands), `fixed_position` keeps x constant (only the far
wall moves).  Every analytic series has a finite-difference counterpart
built on the energy series; the validation suite reconciles the two and
marks an analytic path `suspect` if they ever disagree (the
finite-difference value is then authoritative).

Sign conventions: wall forces positive = repulsive (plates pushed
apart); atom force positive = pushed toward larger x.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from ._summation import (
    bare_trig_squared_sum,
    force_coef_family,
    oscillating_sum,
    smeared_wall_force_fixed_ratio_sum,
)
from .energy import energy_series
from .errors import DomainError, NoConvergence
from .model import (
    AtomSpec,
    Boundary,
    CavitySpec,
    CouplingModel,
    SeriesControl,
    mode_weight,
)

__all__ = [
    "Constraint",
    "ForceResult",
    "AlphaSweepResult",
    "wall_force_fixed_ratio",
    "wall_force_fixed_position",
    "atom_force",
    "alpha_sweep",
    "finite_difference_force",
    "cross_check",
]

_DEFAULT_CTL = SeriesControl()


class Constraint(enum.Enum):
    FIXED_RATIO = "fixed-ratio"
    FIXED_POSITION = "fixed-position"
    ATOM_POSITION = "atom"


@dataclass(frozen=True)
class ForceResult:
    """Force in units of 1/L^2 with evaluation metadata."""

    value: float
    error_bound: float
    constraint: Constraint
    method: str = "analytic"        # "analytic" | "fd"
    flags: tuple = ()               # e.g. ("derived_extension",)


def _osc_sum(coef, z, abs_tol, rel_tol, max_modes):
    """oscillating_sum honoring the relative tolerance on its own value."""

    try:
        return oscillating_sum(coef, z, abs_tol, max_modes)
    except NoConvergence as exc:
        best, est = exc.best, exc.error_estimate
        if best is not None and est is not None and \
                est <= max(abs_tol, rel_tol * abs(best)):
            return best, est, max_modes
        raise


def _neumann_flags(cavity):
    # no Neumann wall-force formulas are printed in the source material;
    # they follow from the same differentiation prescription
    return ("derived_extension",) if cavity.boundary is Boundary.NEUMANN else ()


def wall_force_fixed_ratio(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                           ctl: SeriesControl | None = None) -> ForceResult:
    """-dE/dL with x/L held fixed.

    BarePoint:  F = lam^2 sum_j trig^2(pi j x/L) / (pi j + L Omega)^2
    (term-wise non-negative for Dirichlet).  Smeared alpha=1 uses the
    printed b_j coefficient series; smeared alpha != 1 has no printed
    analytic form and falls back to the finite difference of the energy
    (method="fd").
    """

    ctl = ctl or _DEFAULT_CTL
    atom.validate_in(cavity)
    lam = atom.coupling_lambda
    flags = _neumann_flags(cavity)
    if lam == 0.0:
        return ForceResult(0.0, 0.0, Constraint.FIXED_RATIO, "analytic", flags)
    L, Om = cavity.length_L, atom.gap_Omega
    theta = atom.position_x / L
    lam2 = lam * lam
    use_sin = cavity.boundary is Boundary.DIRICHLET
    abs_tol = ctl.resolved_abs_tol(lam) / lam2

    if not model.smeared:
        family = force_coef_family(L, Om)
        res = bare_trig_squared_sum(family, theta, use_sin,
                                    max(abs_tol, ctl.rel_tol * family[1]()),
                                    ctl.max_modes, ctl.tail_policy or "averaged_tail")
        return ForceResult(lam2 * res.value,
                           lam2 * (res.error_bound + res.rounding),
                           Constraint.FIXED_RATIO, "analytic", flags)

    if atom.radius_a0 <= 0.0:
        raise DomainError("wall_force_fixed_ratio: smeared coupling requires a0 > 0")
    if model.alpha != 1.0:
        value, err = _fd_wall_force(cavity, atom, model, ctl, fixed_ratio=True)
        return ForceResult(value, err, Constraint.FIXED_RATIO, "fd",
                           flags + ("fd_fallback",))
    if use_sin and (theta == 0.0 or theta == 1.0):
        return ForceResult(0.0, 0.0, Constraint.FIXED_RATIO, "analytic", flags)
    value, tail, modes = smeared_wall_force_fixed_ratio_sum(
        L, Om, atom.radius_a0, theta, use_sin, abs_tol, ctl.max_modes)
    return ForceResult(lam2 * value, lam2 * tail, Constraint.FIXED_RATIO,
                       "analytic", flags)


def wall_force_fixed_position(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                              ctl: SeriesControl | None = None) -> ForceResult:
    """Force on the wall at x=L with the atom pinned relative to x=0.

    Adds the symmetry-breaking oscillating series to the fixed-ratio
    force; the second series vanishes identically at x = L/2.
    """

    ctl = ctl or _DEFAULT_CTL
    base = wall_force_fixed_ratio(cavity, atom, model, ctl)
    lam = atom.coupling_lambda
    if lam == 0.0:
        return ForceResult(0.0, 0.0, Constraint.FIXED_POSITION, base.method, base.flags)
    if base.method == "fd":
        value, err = _fd_wall_force(cavity, atom, model, ctl, fixed_ratio=False)
        return ForceResult(value, err, Constraint.FIXED_POSITION, "fd", base.flags)
    term2, err2 = _second_wall_series(cavity, atom, model, ctl)
    return ForceResult(base.value + term2, base.error_bound + err2,
                       Constraint.FIXED_POSITION, "analytic", base.flags)


def _second_wall_series(cavity, atom, model, ctl):
    """The extra sum of the fixed-position prescription, with its sign.

    Bare Dirichlet:  -lam^2 (x/L) sum_j sin(2 pi j x/L) / (pi j + L Om);
    smeared Dirichlet (alpha=1):
      +lam^2 x sum_j f_j^2 pi j sin(2 pi j x/L) / (Om L^2 (pi j + L Om)).
    Neumann carries the opposite sign in both cases (cos^2 parity).
    """

    L, Om = cavity.length_L, atom.gap_Omega
    lam2 = atom.coupling_lambda ** 2
    theta = atom.position_x / L
    if theta in (0.0, 0.5, 1.0):
        return 0.0, 0.0  # sin(2 pi j theta) = 0 termwise
    z = cmath.exp(2j * math.pi * theta)
    abs_tol = ctl.resolved_abs_tol(atom.coupling_lambda) / lam2
    sign = 1.0 if cavity.boundary is Boundary.DIRICHLET else -1.0
    if not model.smeared:
        coef = lambda j: 1.0 / (math.pi * j + L * Om)
        s, err, _ = _osc_sum(coef, z, abs_tol, ctl.rel_tol, ctl.max_modes)
        return -sign * lam2 * theta * s.imag, lam2 * theta * err
    a0 = atom.radius_a0

    def coef(j):
        f = mode_weight(j, L, a0)
        return f * f * math.pi * j / (Om * L * L * (math.pi * j + L * Om))

    s, err, _ = _osc_sum(coef, z, abs_tol, ctl.rel_tol, ctl.max_modes)
    x = atom.position_x
    return sign * lam2 * x * s.imag, lam2 * x * err


def atom_force(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
               ctl: SeriesControl | None = None) -> ForceResult:
    """-dE/dx_d: term-wise derivative of the energy series.

    BarePoint Dirichlet:  F = lam^2 sum_j sin(2 pi j x/L) / (pi j + L Om);
    the smeared series carries the weight f_j^2 (1/(pi j + L Om) -
    alpha/(L Om)).  Neumann flips the overall sign.  Vanishes by
    symmetry at x = L/2 and term-wise at the walls.
    """

    ctl = ctl or _DEFAULT_CTL
    atom.validate_in(cavity)
    lam = atom.coupling_lambda
    if lam == 0.0:
        return ForceResult(0.0, 0.0, Constraint.ATOM_POSITION)
    L, Om = cavity.length_L, atom.gap_Omega
    theta = atom.position_x / L
    lam2 = lam * lam
    if theta in (0.0, 0.5, 1.0):
        return ForceResult(0.0, 0.0, Constraint.ATOM_POSITION)
    sign = 1.0 if cavity.boundary is Boundary.DIRICHLET else -1.0
    abs_tol = ctl.resolved_abs_tol(lam) / lam2
    z = cmath.exp(2j * math.pi * theta)
    if not model.smeared:
        coef = lambda j: 1.0 / (math.pi * j + L * Om)
    else:
        if atom.radius_a0 <= 0.0:
            raise DomainError("atom_force: smeared coupling requires a0 > 0")
        a0, alpha = atom.radius_a0, model.alpha

        def coef(j):
            f = mode_weight(j, L, a0)
            return f * f * (1.0 / (math.pi * j + L * Om) - alpha / (L * Om))

    s, err, modes = _osc_sum(coef, z, abs_tol, ctl.rel_tol, ctl.max_modes)
    return ForceResult(sign * lam2 * s.imag, lam2 * err, Constraint.ATOM_POSITION)


@dataclass(frozen=True)
class AlphaSweepResult:
    points: tuple            # ((alpha, ForceResult), ...)
    alpha_star: float | None  # interpolated zero crossing, if bracketed
    bracket: tuple | None     # (alpha_lo, alpha_hi) around the sign change


def alpha_sweep(cavity: CavitySpec, atom: AtomSpec, ctl: SeriesControl | None,
                alphas) -> AlphaSweepResult:
    """atom_force over a grid of diamagnetic weights alpha.

    The force is affine in alpha, so at most one sign change exists;
    when the grid brackets it, alpha_star is the linear interpolation
    between the sign-change pair.
    """

    alphas = list(alphas)
    if not alphas:
        raise DomainError("alpha_sweep: alphas must be non-empty")
    if atom.radius_a0 <= 0.0:
        raise DomainError("alpha_sweep: requires a smeared atom (a0 > 0)")
    from .model import smeared_diamagnetic

    points = []
    for a in alphas:
        res = atom_force(cavity, atom, smeared_diamagnetic(alpha=a), ctl)
        points.append((float(a), res))
    alpha_star = None
    bracket = None
    for (a0_, r0), (a1_, r1) in zip(points, points[1:]):
        if r0.value == 0.0:
            alpha_star, bracket = a0_, (a0_, a0_)
            break
        if r0.value * r1.value < 0.0:
            w = abs(r0.value) / (abs(r0.value) + abs(r1.value))
            alpha_star, bracket = a0_ + w * (a1_ - a0_), (a0_, a1_)
            break
    return AlphaSweepResult(tuple(points), alpha_star, bracket)


# ----------------------------------------------------------------------
# Finite-difference oracles
# ----------------------------------------------------------------------

def _energy_value(cavity, atom, model, ctl):
    return energy_series(cavity, atom, model, ctl).value


def finite_difference_force(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                            constraint: Constraint, ctl: SeriesControl | None = None,
                            h_rel: float = 1e-6, richardson: bool = False) -> ForceResult:
    """Force via a 4th-order central stencil on the energy series.

    fixed_ratio / fixed_position differentiate -dE/dL under the matching
    constraint; atom_position differentiates -dE/dx.  With
    richardson=True, stencils at h and h/2 are combined to 6th order.
    """

    ctl = ctl or _DEFAULT_CTL
    lam = atom.coupling_lambda
    if lam == 0.0:
        return ForceResult(0.0, 0.0, constraint, "fd")
    # the 1/h stencil amplification demands much tighter energies than
    # the force tolerance itself; the Abel-corrected kernels make this cheap
    ctl = SeriesControl(rel_tol=min(ctl.rel_tol, 1e-13),
                        abs_tol=min(ctl.resolved_abs_tol(lam), 1e-16 * lam * lam),
                        max_modes=ctl.max_modes,
                        tail_policy=ctl.tail_policy)
    L = cavity.length_L

    def dE(h):
        if constraint is Constraint.ATOM_POSITION:
            def at(x):
                return _energy_value(cavity, AtomSpec(x, atom.gap_Omega,
                                                      atom.coupling_lambda,
                                                      atom.radius_a0), model, ctl)
            x0 = atom.position_x
            samples = [at(x0 - 2 * h), at(x0 - h), at(x0 + h), at(x0 + 2 * h)]
        else:
            theta = atom.position_x / L

            def at(Lp):
                xp = theta * Lp if constraint is Constraint.FIXED_RATIO else atom.position_x
                return _energy_value(CavitySpec(Lp, cavity.boundary),
                                     AtomSpec(xp, atom.gap_Omega,
                                              atom.coupling_lambda,
                                              atom.radius_a0), model, ctl)
            samples = [at(L - 2 * h), at(L - h), at(L + h), at(L + 2 * h)]
        m2, m1, p1, p2 = samples
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)

    h = h_rel * L
    d1 = dE(h)
    if richardson:
        d_half = dE(0.5 * h)
        deriv = (16.0 * d_half - d1) / 15.0
    else:
        deriv = d1
    # noise floor: series error bounds amplified by the stencil 1.5/h
    noise = 1.5 * ctl.resolved_abs_tol(atom.coupling_lambda) / h
    return ForceResult(-deriv, noise + abs(deriv) * 1e-10, constraint, "fd")


_ANALYTIC = {
    Constraint.FIXED_RATIO: wall_force_fixed_ratio,
    Constraint.FIXED_POSITION: wall_force_fixed_position,
    Constraint.ATOM_POSITION: atom_force,
}


def cross_check(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                constraint: Constraint, ctl: SeriesControl | None = None,
                rel_tol: float = 1e-6, h_rel: float = 1e-6):
    """Reconcile the analytic force series against the finite difference.

    Returns (analytic, fd, suspect).  suspect=True means the two
    disagree beyond rel_tol plus the numerical floors; the fd number is
    then authoritative (the energy series it differentiates is itself
    cross-validated against the closed forms).
    """

    ctl = ctl or _DEFAULT_CTL
    analytic = _ANALYTIC[constraint](cavity, atom, model, ctl)
    fd = finite_difference_force(cavity, atom, model, constraint, ctl,
                                 h_rel=h_rel, richardson=True)
    lam2 = atom.coupling_lambda ** 2
    scale = max(abs(analytic.value), abs(fd.value))
    floor = (1e-3 * h_rel * h_rel * lam2 / cavity.length_L ** 2
             + analytic.error_bound + fd.error_bound)
    suspect = abs(analytic.value - fd.value) > rel_tol * scale + floor
    if suspect and analytic.method != "fd":
        analytic = ForceResult(analytic.value, analytic.error_bound,
                               analytic.constraint, analytic.method,
                               analytic.flags + ("suspect",))
    return analytic, fd, suspect


def _fd_wall_force(cavity, atom, model, ctl, fixed_ratio):
    constraint = Constraint.FIXED_RATIO if fixed_ratio else Constraint.FIXED_POSITION
    res = finite_difference_force(cavity, atom, model, constraint, ctl)
    return res.value, res.error_bound
