"""Cross-route validation suite.

Runs every identity and sign-structure check the library promises:
series vs closed forms, boundary sum rules, finite-difference
reconciliation of every analytic force (collecting `suspect` findings),
specfun identities, medium additivity/collapse agreement and the
fourth-order pair properties.  Produces a JSON-serializable report;
deterministic for a fixed seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import specfun
from .energy import boundary_sum_rule, energy_closed_form, energy_series
from .errors import CasimirCavityError
from .force import (
    Constraint,
    alpha_sweep,
    atom_force,
    cross_check,
    finite_difference_force,
    wall_force_fixed_position,
    wall_force_fixed_ratio,
)
from .medium import (
    MediumSpec,
    PairSpec,
    empty_casimir_force,
    medium_energy,
    medium_wall_force,
    pair_energy_4th,
    pair_wall_force_fixed_ratio,
    uniform_wall_force,
)
from .model import (
    AtomSpec,
    Boundary,
    CavitySpec,
    CouplingModel,
    SeriesControl,
    bare_point,
    mode_weight,
    smeared_diamagnetic,
    to_si,
)

__all__ = ["CheckResult", "run_validation"]

_LAM = 1e-4


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    details: str = ""


def _check(results, name, residual, tolerance, details=""):
    results.append(CheckResult(name, bool(residual <= tolerance),
                               float(residual), float(tolerance), details))


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


# ----------------------------------------------------------------------
# check groups
# ----------------------------------------------------------------------

def _specfun_checks(rng, results):
    acc = specfun.SeriesAccuracy()
    # Lerch restricted to z=0
    a = 2.5 + 0.7j
    _check(results, "specfun.lerch_z0", abs(specfun.lerch_phi(0, 2, a) - a**-2.0),
           1e-15, "phi(0,s,a) = a^-s")
    # realness for real z in (-1,1), a>0
    worst = max(abs(specfun.lerch_phi(z, 1, a_).imag)
                for z in (-0.9, -0.3, 0.4, 0.85) for a_ in (0.5, 3.7))
    _check(results, "specfun.lerch_real_axis", worst, 1e-13)
    # conjugate symmetry
    worst = 0.0
    for _ in range(25):
        th = rng.uniform(0.05, 0.95)
        z = cmath.exp(2j * math.pi * th)
        a_ = complex(rng.uniform(0.5, 4), rng.uniform(-30, 30))
        worst = max(worst, abs(specfun.lerch_phi(z.conjugate(), 1, a_.conjugate())
                               - specfun.lerch_phi(z, 1, a_).conjugate()))
        worst = max(worst, abs(specfun.polygamma(0, a_.conjugate())
                               - specfun.polygamma(0, a_).conjugate()))
        b_ = complex(rng.uniform(0.5, 3), rng.uniform(-5, 5))
        worst = max(worst, abs(
            specfun.gauss_2f1(1, b_.conjugate(), 1 + b_.conjugate(), z.conjugate())
            - specfun.gauss_2f1(1, b_, 1 + b_, z).conjugate()))
    _check(results, "specfun.conjugate_symmetry", worst, 5e-11)
    # 2F1(a,b;b;z) = (1-z)^-a on 50 random points, |z| <= 0.9
    worst = 0.0
    for _ in range(50):
        a_ = complex(rng.uniform(-2, 3), rng.uniform(-2, 2))
        b_ = complex(rng.uniform(0.3, 4), rng.uniform(-2, 2))
        z = rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
        want = (1 - z) ** (-a_)
        worst = max(worst, abs(specfun.gauss_2f1(a_, b_, b_, z) - want) / abs(want))
    _check(results, "specfun.2f1_degenerate_identity", worst, 1e-10)
    # digamma recurrence on 50 random complex points
    worst = 0.0
    for _ in range(50):
        x = complex(rng.uniform(0.2, 20), rng.uniform(-20, 20))
        worst = max(worst, abs(specfun.polygamma(0, x + 1) - specfun.polygamma(0, x)
                               - 1.0 / x))
    _check(results, "specfun.digamma_recurrence", worst, 1e-12)
    # H(x) = psi(x+1) + gamma across (0, 100), against the defining series
    worst = 0.0
    for x in (0.5, 1.0, 7.3, 26.0, 99.5):
        k = np.arange(1, 2_000_000, dtype=np.float64)
        brute = x * float(np.sum(1.0 / (k * (x + k)), dtype=np.longdouble))
        brute += math.log1p(x / (k[-1] + 0.5))  # midpoint integral tail
        worst = max(worst, abs(specfun.gen_harmonic(x) - brute) / abs(brute))
    _check(results, "specfun.harmonic_digamma_relation", worst, 1e-10,
           "brute series with midpoint-integral tail vs the digamma relation")


def _random_atom(rng, smeared, L=1.0):
    theta = rng.uniform(0.06, 0.94)
    Om = rng.uniform(1.1, 8.3) * math.pi / L
    a0 = 10 ** rng.uniform(-3.2, -1.5) * L if smeared else 0.0
    return AtomSpec(theta * L, Om, _LAM, a0)


def _closed_vs_series_checks(rng, results, n_sets=20):
    cases = [
        ("dirichlet_bare", Boundary.DIRICHLET, bare_point()),
        ("neumann_bare", Boundary.NEUMANN, bare_point()),
        ("dirichlet_smeared", Boundary.DIRICHLET, smeared_diamagnetic()),
        ("neumann_smeared", Boundary.NEUMANN, smeared_diamagnetic()),
    ]
    for name, bnd, model in cases:
        cav = CavitySpec(1.0, bnd)
        worst = 0.0
        for _ in range(n_sets):
            atom = _random_atom(rng, model.smeared)
            s = energy_series(cav, atom, model)
            c = energy_closed_form(cav, atom, model)
            worst = max(worst, _rel(s.value, c.value))
        _check(results, f"energy.closed_vs_series.{name}", worst, 1e-8)
    # the Neumann bare closed form needed a sign adjudication against the
    # printed source; the series is ground truth for that call
    cav = CavitySpec(1.0, Boundary.NEUMANN)
    atom = AtomSpec(0.3, 2 * math.pi, _LAM)
    res = _rel(energy_series(cav, atom, bare_point()).value,
               energy_closed_form(cav, atom, bare_point()).value)
    _check(results, "energy.closed_form_neumann_bare_sign", res, 1e-8,
           "Lerch pair enters with matched minus signs; the printed asymmetric "
           "form fails this check by ~14% and was adjudicated against the series")


def _sum_rule_checks(rng, results):
    cav_d, cav_n = CavitySpec(1.0, Boundary.DIRICHLET), CavitySpec(1.0, Boundary.NEUMANN)
    for name, model, a0 in (("bare", bare_point(), 0.0),
                            ("smeared", smeared_diamagnetic(), 1e-3)):
        Om = 2.0 * math.pi
        vals = [boundary_sum_rule(cav_d, cav_n, AtomSpec(th, Om, _LAM, a0), model)
                for th in rng.uniform(0.03, 0.97, size=20)]
        mean = float(np.mean(vals))
        var = float(np.var(vals))
        _check(results, f"energy.sum_rule_position_independence.{name}",
               var, (1e-10 * abs(mean)) ** 2)
        if not model.smeared:
            want = -_LAM**2 * specfun.gen_harmonic(2.0) / (math.pi * Om)
            _check(results, "energy.sum_rule_value.bare", _rel(mean, want), 1e-10)
    # exact telescoping point: L*Omega/pi = 1
    v = boundary_sum_rule(cav_d, cav_n, AtomSpec(0.41, math.pi, _LAM), bare_point())
    _check(results, "energy.sum_rule_H1_exact", _rel(v, -_LAM**2 / math.pi**2), 1e-12,
           "H(1) = 1 by telescoping")


def _term_identity_check(results):
    # -f^2 s^2/((w+Om)wL) + f^2 s^2/(Om w L) == f^2 s^2/(Om L (w+Om)) termwise
    L, Om, a0, x = 1.0, 2 * math.pi, 1e-3, 0.37
    j = np.arange(1, 2001, dtype=np.float64)
    w = math.pi * j / L
    f2 = mode_weight(j, L, a0) ** 2
    s2 = np.sin(w * x) ** 2
    lhs = -f2 * s2 / ((w + Om) * w * L) + f2 * s2 / (Om * w * L)
    rhs = f2 * s2 / (Om * L * (w + Om))
    denom = np.abs(rhs) + 1e-300
    _check(results, "energy.term_identity_e2_plus_e1", float(np.max(np.abs(lhs - rhs) / denom)),
           5e-15)


def _mirror_checks(results):
    for bnd in (Boundary.DIRICHLET, Boundary.NEUMANN):
        cav = CavitySpec(1.0, bnd)
        for name, model, a0 in (("bare", bare_point(), 0.0),
                                ("smeared", smeared_diamagnetic(), 1e-3)):
            a = energy_series(cav, AtomSpec(0.23, 2 * math.pi, _LAM, a0), model)
            b = energy_series(cav, AtomSpec(0.77, 2 * math.pi, _LAM, a0), model)
            tol = 2.0 * (a.error_bound + b.error_bound) + 1e-14 * abs(a.value)
            _check(results, f"energy.mirror_symmetry.{bnd.value}_{name}",
                   abs(a.value - b.value), tol)
    cav = CavitySpec(1.0, Boundary.DIRICHLET)
    for x in (0.0, 1.0):
        r = energy_series(cav, AtomSpec(x, 2 * math.pi, _LAM), bare_point())
        _check(results, f"energy.dirichlet_wall_zero.x{x:g}", abs(r.value), 0.0)


def _fd_checks(rng, results, n_sets, analytic_overrides=None):
    """Analytic vs finite-difference forces; collects suspect findings."""

    suspects = []
    combos = [(b, m, a0, c)
              for b in (Boundary.DIRICHLET, Boundary.NEUMANN)
              for (m, a0) in ((bare_point(), 0.0), (smeared_diamagnetic(), 1e-3))
              for c in (Constraint.FIXED_RATIO, Constraint.FIXED_POSITION,
                        Constraint.ATOM_POSITION)]
    for bnd, model, a0, cons in combos:
        cav = CavitySpec(1.0, bnd)
        pts = n_sets if cons is not Constraint.ATOM_POSITION else max(3, n_sets // 2)
        worst = 0.0
        for _ in range(pts):
            atom = _random_atom(rng, model.smeared)
            if analytic_overrides and cons in analytic_overrides:
                an = analytic_overrides[cons](cav, atom, model, None)
                fd = finite_difference_force(cav, atom, model, cons, None,
                                             richardson=True)
                scale = max(abs(an.value), abs(fd.value))
                resid = abs(an.value - fd.value) / scale if scale else 0.0
                worst = max(worst, resid)
            else:
                an, fd, suspect = cross_check(cav, atom, model, cons)
                scale = max(abs(an.value), abs(fd.value), 1e-300)
                worst = max(worst, abs(an.value - fd.value) / scale)
                if suspect:
                    suspects.append({
                        "case": f"{bnd.value}/{model.kind.value}/{cons.value}",
                        "x": atom.position_x, "Omega": atom.gap_Omega,
                        "a0": atom.radius_a0,
                        "analytic": an.value, "fd": fd.value,
                    })
        _check(results, f"force.fd_consistency.{bnd.value}_{model.kind.value}"
                        f"_{cons.value}", worst, 1e-6)
    return suspects


def _sign_structure_checks(results):
    cav_d = CavitySpec(1.0, Boundary.DIRICHLET)
    cav_n = CavitySpec(1.0, Boundary.NEUMANN)
    grid = np.linspace(0.05, 0.95, 19)
    bare, smeared = bare_point(), smeared_diamagnetic()

    e_d = [energy_series(cav_d, AtomSpec(t, 2 * math.pi, _LAM), bare).value
           for t in grid]
    ok = (np.argmin(e_d) == len(grid) // 2) and all(v < 0 for v in e_d)
    wall0 = energy_series(cav_d, AtomSpec(0.0, 2 * math.pi, _LAM), bare).value
    _check(results, "sign.bare_dirichlet_min_center", 0.0 if ok and wall0 == 0.0 else 1.0,
           0.0, "energy negative, minimum at L/2, zero at walls")

    e_s = [energy_series(cav_d, AtomSpec(t, 2 * math.pi, _LAM, 1e-3), smeared).value
           for t in grid]
    ok = (np.argmax(e_s) == len(grid) // 2) and all(v > 0 for v in e_s)
    _check(results, "sign.smeared_dirichlet_max_center", 0.0 if ok else 1.0, 0.0,
           "energy positive with maximum at L/2")

    e_nb = [energy_series(cav_n, AtomSpec(t, 2 * math.pi, _LAM), bare).value
            for t in grid]
    e_ns = [energy_series(cav_n, AtomSpec(t, 2 * math.pi, _LAM, 1e-3), smeared).value
            for t in grid]
    ok = (np.argmax(e_nb) == len(grid) // 2) and (np.argmin(e_ns) == len(grid) // 2)
    _check(results, "sign.neumann_inverted_concavity", 0.0 if ok else 1.0, 0.0,
           "Neumann curves curve opposite to Dirichlet")

    f_bare = [wall_force_fixed_ratio(cav_d, AtomSpec(t, 2 * math.pi, _LAM), bare).value
              for t in np.linspace(0.0, 1.0, 20)]
    f_sm = [wall_force_fixed_ratio(cav_d, AtomSpec(t, 2 * math.pi, _LAM, 1e-3),
                                   smeared).value for t in np.linspace(0.02, 0.98, 20)]
    ok = all(v >= 0 for v in f_bare) and all(v <= 0 for v in f_sm)
    _check(results, "sign.wall_force_fixed_ratio", 0.0 if ok else 1.0, 0.0,
           "bare repulsive everywhere, smeared alpha=1 attractive everywhere")

    # gap monotonicity at the center
    for name, model, a0 in (("bare", bare, 0.0), ("smeared", smeared, 1e-3)):
        mags = [abs(energy_series(cav_d, AtomSpec(0.5, om, _LAM, a0), model).value)
                for om in (2 * math.pi, 4 * math.pi, 6 * math.pi)]
        ok = mags[0] > mags[1] > mags[2]
        _check(results, f"sign.gap_monotone_{name}", 0.0 if ok else 1.0, 0.0)

    # atom-force antisymmetry and boundary flip
    am = atom_force(cav_d, AtomSpec(0.23, 2 * math.pi, _LAM), bare)
    ap = atom_force(cav_d, AtomSpec(0.77, 2 * math.pi, _LAM), bare)
    _check(results, "sign.atom_force_antisymmetry", abs(am.value + ap.value),
           2.0 * (am.error_bound + ap.error_bound) + 1e-14 * abs(am.value))
    fd_ = atom_force(cav_d, AtomSpec(0.1, 2 * math.pi, _LAM), bare).value
    fn_ = atom_force(cav_n, AtomSpec(0.1, 2 * math.pi, _LAM), bare).value
    _check(results, "sign.atom_force_boundary_flip",
           0.0 if (fd_ > 0 > fn_) else 1.0, 0.0,
           "bare atom at x=0.1L: repelled from the wall (Dirichlet), attracted (Neumann)")

    # single sign change of the atom force in alpha on [0, 1]
    sweep = alpha_sweep(cav_d, AtomSpec(0.1, 2 * math.pi, _LAM, 1e-3), None,
                        np.linspace(0.0, 1.0, 101))
    signs = [1 if r.value > 0 else -1 for _, r in sweep.points]
    changes = sum(1 for u, v in zip(signs, signs[1:]) if u != v)
    _check(results, "sign.alpha_single_crossing", abs(changes - 1), 0.0,
           f"alpha* = {sweep.alpha_star}")


def _medium_checks(rng, results):
    cav = CavitySpec(1.0, Boundary.DIRICHLET)
    med = MediumSpec.uniform(5, 1.0, 2 * math.pi, _LAM)
    tot = medium_energy(cav, med, bare_point())
    parts = sum(energy_series(cav, a, bare_point()).value for a in med.atoms)
    _check(results, "medium.energy_additivity", abs(tot.value - parts),
           1e-16 * abs(parts))

    # mirror invariance of the fixed-ratio force under x -> L - x
    xs = rng.uniform(0.1, 0.9, size=4)
    m1 = MediumSpec(tuple(AtomSpec(x, 2 * math.pi, _LAM) for x in xs))
    m2 = MediumSpec(tuple(AtomSpec(1.0 - x, 2 * math.pi, _LAM) for x in xs))
    f1 = medium_wall_force(cav, m1, bare_point())
    f2 = medium_wall_force(cav, m2, bare_point())
    _check(results, "medium.mirror_invariance", _rel(f1.value, f2.value), 1e-12)

    # collapsed path == per-atom path
    tmpl = AtomSpec(0.5, 2 * math.pi, _LAM)
    worst = 0.0
    for cons in (Constraint.FIXED_RATIO, Constraint.FIXED_POSITION):
        for n in (3, 17, 40):
            med = MediumSpec.uniform(n, 1.0, 2 * math.pi, _LAM)
            per = sum((wall_force_fixed_ratio if cons is Constraint.FIXED_RATIO
                       else wall_force_fixed_position)(cav, a, bare_point()).value
                      for a in med.atoms)
            col = uniform_wall_force(cav, tmpl, bare_point(), None, cons, n).value
            worst = max(worst, _rel(per, col))
    _check(results, "medium.collapsed_equals_per_atom", worst, 1e-11)

    # affinity of the force-vs-N table (stated tolerance; see details)
    Ns = np.arange(1, 101, dtype=float)
    F = np.array([uniform_wall_force(cav, tmpl, bare_point(), None,
                                     Constraint.FIXED_RATIO, int(n)).value for n in Ns])
    A = np.vstack([np.ones_like(Ns), Ns]).T
    coef, *_ = np.linalg.lstsq(A, F, rcond=None)
    resid = float(np.max(np.abs(F - A @ coef)) / np.max(np.abs(F)))
    _check(results, "medium.force_affine_in_N", resid, 1e-6,
           "discreteness term psi'(1+nu/(N+1))/(N+1) makes the exact table "
           "deviate from affinity at the 1e-3 level; 1e-6 holds only in the "
           "continuum-average limit")
    _check(results, "medium.empty_casimir_value",
           abs(empty_casimir_force(1.0) + 0.13089969), 1e-7)
    # SI conversion linearity
    v = to_si(-math.pi / 24, "force", 0.5)
    _check(results, "medium.to_si_linear",
           abs(3 * v - to_si(3 * (-math.pi / 24), "force", 0.5)), 1e-30)


def _pair_checks(rng, results):
    cav = CavitySpec(1.0, Boundary.DIRICHLET)
    p = PairSpec(0.3, 0.7, 2 * math.pi, _LAM)
    e1 = pair_energy_4th(cav, p)
    e2 = pair_energy_4th(cav, PairSpec(0.7, 0.3, 2 * math.pi, _LAM))
    _check(results, "pair.swap_symmetry", abs(e1.value - e2.value), 1e-18)
    walls = pair_energy_4th(cav, PairSpec(0.0, 1.0, 2 * math.pi, _LAM))
    _check(results, "pair.both_walls_zero", abs(walls.value), 0.0)

    seps = np.linspace(0.02, 0.96, 25)
    vals = [pair_wall_force_fixed_ratio(
        cav, PairSpec(0.5 - d / 2, 0.5 + d / 2, 2 * math.pi, _LAM)).value
        for d in seps]
    _check(results, "pair.force_positive_symmetric_sweep",
           0.0 if all(v > 0 for v in vals) else 1.0, 0.0)

    worst = 0.0
    for _ in range(5):
        # random interior placements with a minimum separation of L/20
        # (nearly coincident atoms beat too slowly for the desk-scale ladder)
        xa, xb = rng.uniform(0.1, 0.9, size=2)
        while abs(xb - xa) < 0.05:
            xa, xb = rng.uniform(0.1, 0.9, size=2)
        pr = PairSpec(float(xa), float(xb), 2 * math.pi, _LAM)
        fa = pair_wall_force_fixed_ratio(cav, pr).value
        h = 1e-5

        def e_at(Lp):
            return pair_energy_4th(
                CavitySpec(Lp, Boundary.DIRICHLET),
                PairSpec(float(xa) * Lp, float(xb) * Lp, 2 * math.pi, _LAM)).value

        fd = -(e_at(1 + h) - e_at(1 - h)) / (2 * h)
        worst = max(worst, _rel(fa, fd))
    _check(results, "pair.force_fd_consistency", worst, 1e-5)


GROUPS = ("specfun", "closed_form", "sum_rule", "term_identity", "mirror",
          "fd", "sign", "medium", "pair")


def run_validation(seed=0, strict=False, n_sets=10, analytic_overrides=None,
                   groups=None):
    """Run the validation suite; returns a JSON-serializable report dict.

    groups selects a subset of check groups (default: all of GROUPS);
    analytic_overrides maps a force Constraint to a replacement callable,
    used to demonstrate that the finite-difference reconciliation catches
    injected defects.
    """

    from . import __version__

    rng = np.random.default_rng(seed)
    selected = set(GROUPS if groups is None else groups)
    results: list[CheckResult] = []
    suspects = []
    if "specfun" in selected:
        _specfun_checks(rng, results)
    if "closed_form" in selected:
        _closed_vs_series_checks(rng, results, n_sets=max(n_sets, 20))
    if "sum_rule" in selected:
        _sum_rule_checks(rng, results)
    if "term_identity" in selected:
        _term_identity_check(results)
    if "mirror" in selected:
        _mirror_checks(results)
    if "fd" in selected:
        suspects = _fd_checks(rng, results, n_sets, analytic_overrides)
    if "sign" in selected:
        _sign_structure_checks(results)
    if "medium" in selected:
        _medium_checks(rng, results)
    if "pair" in selected:
        _pair_checks(rng, results)
    failed = [c.name for c in results if not c.passed]
    return {
        "tool_version": __version__,
        "seed": int(seed),
        "strict": bool(strict),
        "n_parameter_sets": int(n_sets),
        "checks": [asdict(c) for c in results],
        "suspect_analytic_forces": suspects,
        "n_checks": len(results),
        "n_failed": len(failed),
        "failed": failed,
        "passed": not failed,
    }
