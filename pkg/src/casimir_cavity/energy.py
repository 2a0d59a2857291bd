"""Second-order ground-state energy shifts.

Two independent evaluation routes: `energy_series` sums the mode series
directly (compensated, with tail policies), `energy_closed_form`
evaluates the exact special-function expressions.  Their agreement is a
primary correctness check, exercised by the validation suite.
"""

from __future__ import annotations

import cmath
import math

from . import specfun
from ._summation import (
    bare_trig_squared_sum,
    energy_coef_family,
    smeared_energy_sums,
)
from .errors import DomainError, ImaginaryResidue
from .model import (
    AtomSpec,
    Boundary,
    CavitySpec,
    CouplingModel,
    EnergyBreakdown,
    EnergyResult,
    SeriesControl,
)

__all__ = ["energy_series", "energy_closed_form", "boundary_sum_rule"]

_DEFAULT_CTL = SeriesControl()


def _zero_result(path="series"):
    return EnergyResult(0.0, 0.0, 0, path)


def _tolerance_passes(run, abs_tol, rel_tol, scale0):
    """Run `run(tol)` until its error bound meets max(abs, rel*|value|).

    The first pass uses an a-priori scale estimate for the relative
    part; later passes tighten using the computed value (matters near
    the walls where the energy is much smaller than its envelope).
    """

    tol = max(abs_tol, rel_tol * scale0)
    for _ in range(4):
        value, bound = run(tol)
        target = max(abs_tol, rel_tol * abs(value))
        if bound <= target or tol <= target:
            return
        tol = 0.5 * target


def energy_series(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                  ctl: SeriesControl | None = None) -> EnergyResult:
    """Ground-state energy shift by direct mode summation (units 1/L).

    BarePoint:  E = -lam^2 sum_j trig^2(k_j x) / ((w_j + Omega) pi j).
    SmearedDiamagnetic: paramagnetic and diamagnetic channels are summed
    separately and assembled as total = e2_udw + alpha * e1_phi2 (exact
    identity, reported in the attached EnergyBreakdown).

    Truncation follows ctl.tail_policy; the returned error_bound is the
    tail bound plus a rounding estimate.  Raises DomainError for the
    smeared coupling with a0 = 0 (the phi^2 channel diverges like
    sum 1/w_j) and NoConvergence if max_modes is hit first.
    """

    ctl = ctl or _DEFAULT_CTL
    atom.validate_in(cavity)
    lam = atom.coupling_lambda
    if lam == 0.0:
        return _zero_result()
    L, Om = cavity.length_L, atom.gap_Omega
    theta = atom.position_x / L
    lam2 = lam * lam
    abs_tol = ctl.resolved_abs_tol(lam) / lam2  # per lambda^2
    use_sin = cavity.boundary is Boundary.DIRICHLET

    if not model.smeared:
        policy = ctl.tail_policy or "averaged_tail"
        family = energy_coef_family(L, Om)
        scale = family[1]()  # exact sum of the coefficient envelope
        out = {}

        def run(tol):
            res = bare_trig_squared_sum(family, theta, use_sin, tol,
                                        ctl.max_modes, policy)
            out["res"] = res
            return res.value, res.error_bound

        _tolerance_passes(run, abs_tol, ctl.rel_tol, scale)
        res = out["res"]
        return EnergyResult(-lam2 * res.value,
                            lam2 * (res.error_bound + res.rounding),
                            res.modes_used, "series")

    # smeared coupling
    if atom.radius_a0 <= 0.0:
        raise DomainError(
            "energy_series: smeared coupling requires a0 > 0 "
            "(the alpha*phi^2 channel diverges for a point atom)")
    if use_sin and (theta == 0.0 or theta == 1.0):
        breakdown = EnergyBreakdown(0.0, 0.0, 0.0)
        return EnergyResult(0.0, 0.0, 0, "series", breakdown)
    alpha = model.alpha
    out = {}

    def run(tol):
        res = smeared_energy_sums(L, Om, atom.radius_a0, theta, use_sin,
                                  alpha, tol, ctl.max_modes)
        out["res"] = res
        total = res.e2 + alpha * res.e1
        return total, res.error_bound

    mu2 = (L / (math.pi * atom.radius_a0)) ** 2
    scale0 = (1.0 + alpha) * 4.0 * math.log(2.0 + mu2) / (Om * L)
    _tolerance_passes(run, abs_tol, ctl.rel_tol, scale0)
    res = out["res"]
    e2 = lam2 * res.e2
    e1 = lam2 * res.e1
    total = e2 + alpha * e1
    breakdown = EnergyBreakdown(e2, e1, total)
    return EnergyResult(total, lam2 * res.error_bound, res.modes_used,
                        "series", breakdown)


# ----------------------------------------------------------------------
# Closed forms
# ----------------------------------------------------------------------

def energy_closed_form(cavity: CavitySpec, atom: AtomSpec, model: CouplingModel,
                       acc: specfun.SeriesAccuracy | None = None) -> EnergyResult:
    """Ground-state energy shift from the exact special-function forms.

    Requires an interior position (the expressions carry log/Lerch
    singularities at the walls) and, for the smeared coupling, the full
    combination alpha = 1.  The imaginary residue of the assembled
    expression must satisfy |Im| < 1e-9 |Re| + 1e-14, else
    ImaginaryResidue is raised; the real part is returned.
    """

    atom.validate_in(cavity)
    acc = acc or specfun.SeriesAccuracy()
    L, Om, lam = cavity.length_L, atom.gap_Omega, atom.coupling_lambda
    theta = atom.position_x / L
    if theta == 0.0 or theta == 1.0:
        raise DomainError("energy_closed_form: wall positions are singular; "
                          "use energy_series")
    if lam == 0.0:
        return _zero_result("closed_form")
    if model.smeared:
        if model.alpha != 1.0:
            raise DomainError("energy_closed_form: smeared closed forms assume alpha = 1")
        if atom.radius_a0 <= 0.0:
            raise DomainError("energy_closed_form: smeared coupling requires a0 > 0")
        value, absmag = _closed_smeared(L, Om, atom.radius_a0, theta,
                                        cavity.boundary, acc)
        amp = max(1.0, L / atom.radius_a0)
    else:
        value, absmag = _closed_bare(L, Om, theta, cavity.boundary, acc)
        amp = 1.0
    lam2 = lam * lam
    value = lam2 * value
    if not abs(value.imag) <= 1e-9 * abs(value.real) + 1e-14:
        raise ImaginaryResidue(
            f"energy_closed_form: imaginary residue {value.imag:.3e} vs real "
            f"{value.real:.3e} signals a special-function accuracy fault")
    err = lam2 * (16.0 * acc.abs_tol * amp + 1e-15 * absmag) + abs(value.imag)
    return EnergyResult(value.real, err, 0, "closed_form")


def _closed_bare(L, Om, theta, boundary, acc):
    nu = L * Om / math.pi
    z = cmath.exp(2j * math.pi * theta)
    zb = cmath.exp(-2j * math.pi * theta)
    lerch_p = specfun.lerch_phi(z, 1, nu + 1.0, acc)
    lerch_m = specfun.lerch_phi(zb, 1, nu + 1.0, acc)
    h2 = 2.0 * specfun.gen_harmonic(nu)
    log_term = math.log(2.0 - 2.0 * math.cos(2.0 * math.pi * theta))
    if boundary is Boundary.DIRICHLET:
        bracket = h2 + z * lerch_p + zb * lerch_m + log_term
    else:
        # sign structure fixed relative to the printed source, see the
        # validation report; the corrected form matches the series
        bracket = h2 - z * lerch_p - zb * lerch_m - log_term
    absmag = abs(h2) + abs(z * lerch_p) + abs(zb * lerch_m) + abs(log_term)
    pref = -1.0 / (4.0 * math.pi * Om)
    return pref * bracket, abs(pref) * absmag


def _closed_smeared(L, Om, a0, theta, boundary, acc):
    i = 1j
    q = a0 * Om
    mu = L / (a0 * math.pi)
    nu = L * Om / math.pi
    E = cmath.exp(2j * math.pi * theta)
    Eb = cmath.exp(-2j * math.pi * theta)

    f21 = specfun.gauss_2f1
    lerch = specfun.lerch_phi
    psi0 = lambda w: specfun.polygamma(0, w)
    psi1 = lambda w: specfun.polygamma(1, w)

    def beta0(zz, aa):
        return specfun.inc_beta(zz, aa, 0.0, acc)

    f21_p_E = f21(1, 1 + i * mu, 2 + i * mu, E, acc)
    f21_p_Eb = f21(1, 1 + i * mu, 2 + i * mu, Eb, acc)
    f21_m_E = f21(1, 1 - i * mu, 2 - i * mu, E, acc)
    f21_m_Eb = f21(1, 1 - i * mu, 2 - i * mu, Eb, acc)
    f21_nu_Eb = f21(1, nu + 1, nu + 2, Eb, acc)

    if boundary is Boundary.DIRICHLET:
        inner = ((a0 * (q + i) ** 2 * (q - 2 * i) / (-L + i * math.pi * a0))
                 * (f21_p_Eb + E ** 2 * f21_p_E)
                 - (a0 * (q - i) ** 2 * (q + 2 * i) / (L + i * math.pi * a0))
                 * (f21_m_Eb + E ** 2 * f21_m_E)
                 - 4.0 * f21_nu_Eb / (L * Om + math.pi)
                 - 4.0 * E ** (1.0 - nu) * beta0(E, nu + 1.0) / math.pi)
        terms = [
            math.pi ** 2 / ((q * q + 1.0) ** 2 * E) * inner,
            -8.0 * math.pi * psi0(nu + 1.0) / (q * q + 1.0) ** 2,
            L * lerch(Eb, 2, 1 + i * mu, acc) / (a0 * (q - i) * E),
            L * lerch(Eb, 2, 1 - i * mu, acc) / (a0 * (q + i) * E),
            L * E * lerch(E, 2, 1 + i * mu, acc) / (a0 * (q - i)),
            L * E * lerch(E, 2, 1 - i * mu, acc) / (a0 * (q + i)),
            math.pi * (-4.0 - 2 * i * q) * psi0(1 + i * mu) / (q - i) ** 2,
            2 * i * math.pi * (q + 2 * i) * psi0(1 - i * mu) / (q + i) ** 2,
            -2.0 * L * psi1(1 + i * mu) / (a0 * (q - i)),
            -2.0 * L * psi1(1 - i * mu) / (a0 * (q + i)),
        ]
        pref = 1.0 / (4.0 * math.pi ** 2 * Om)
        value = pref * sum(terms)
        absmag = abs(pref) * sum(abs(t) for t in terms)
        return value, absmag

    inner2f1 = ((a0 * (2 + i * q) * (q + i) ** 2 / (math.pi * a0 + i * L))
                * (f21_p_Eb + E ** 2 * f21_p_E)
                + (a0 * (q - i) ** 2 * (q + 2 * i) / (L + i * math.pi * a0))
                * (f21_m_Eb + E ** 2 * f21_m_E)
                + 4.0 * f21_nu_Eb / (L * Om + math.pi))
    inner_terms = [
        -2 * i * math.pi * a0 * (q ** 3 + 3 * q + 2 * i) * psi0(1 + i * mu),
        2 * math.pi * a0 * (2 + i * q * (q * q + 3)) * psi0(1 - i * mu),
        L * (q + i) * (q - i) ** 2 * (-E) * lerch(E, 2, 1 - i * mu, acc),
        -L * (q + i) ** 2 * (q - i) * E * lerch(E, 2, 1 + i * mu, acc),
        (math.pi ** 2 * a0 / E) * inner2f1,
        4.0 * math.pi * a0 * beta0(E, nu + 1.0) / E ** nu,
        -2.0 * L * (q + i) * (q - i) ** 2 * psi1(1 - i * mu),
        -2.0 * L * (q + i) ** 2 * (q - i) * psi1(1 + i * mu),
        -8.0 * math.pi * a0 * psi0(nu + 1.0),
    ]
    outer_terms = [
        E * sum(inner_terms),
        -L * (q + i) * (q - i) ** 2 * lerch(Eb, 2, 1 - i * mu, acc),
        -L * (q + i) ** 2 * (q - i) * lerch(Eb, 2, 1 + i * mu, acc),
    ]
    pref = 1.0 / (4.0 * a0 * Om * (math.pi * q * q + math.pi) ** 2 * E)
    value = pref * sum(outer_terms)
    absmag = abs(pref) * sum(abs(t) for t in outer_terms)
    return value, absmag


def boundary_sum_rule(cavity_d: CavitySpec, cavity_n: CavitySpec, atom: AtomSpec,
                      model: CouplingModel, ctl: SeriesControl | None = None) -> float:
    """E_Dirichlet(x) + E_Neumann(x): a position-independent validation sum.

    Built from sin^2 + cos^2 = 1 applied term by term.  For BarePoint it
    equals -lam^2 H(L Omega / pi) / (pi Omega) at every position; for
    the smeared coupling it equals the x-independent combination
    lam^2 sum_j f_j^2 (alpha (w_j+Omega) - w_j) / (Omega (w_j+Omega) w_j L).
    """

    if cavity_d.length_L != cavity_n.length_L:
        raise DomainError("boundary_sum_rule: cavities must share L")
    if cavity_d.boundary is not Boundary.DIRICHLET or cavity_n.boundary is not Boundary.NEUMANN:
        raise DomainError("boundary_sum_rule: pass (Dirichlet, Neumann) cavities")
    ed = energy_series(cavity_d, atom, model, ctl)
    en = energy_series(cavity_n, atom, model, ctl)
    return ed.value + en.value
