"""Deterministic compensated mode-sum kernels with tail policies.

All kernels work per lambda^2 (every series in the package is exactly
linear in the squared coupling); callers rescale.  Summation is in fixed
ascending-j order: numpy pairwise block sums promoted to extended
precision, combined across blocks with Neumaier compensation, so results
are bit-stable and effectively error-free at working precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import NoConvergence
from .specfun import _Euler, _LevinU, _AccelStall

_EPS = 2.2e-16
_BLOCK = 65536


class NeumaierSum:
    """Compensated accumulator on top of extended-precision partials."""

    def __init__(self):
        self._s = np.longdouble(0.0)
        self._c = np.longdouble(0.0)

    def add(self, x):
        x = np.longdouble(x)
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self):
        return float(self._s + self._c)


def _block_ranges(max_modes, start=1):
    lo = start
    size = 4096
    while lo <= max_modes:
        hi = min(lo + size - 1, max_modes)
        yield lo, hi
        lo = hi + 1
        size = min(2 * size, _BLOCK * 16)


@dataclass
class BareSumResult:
    value: float         # sum_j c_j trig^2(pi j theta), per lambda^2
    error_bound: float   # truncation bound on `value`
    modes_used: int
    rounding: float


def bare_trig_squared_sum(family, theta, use_sin, tol, max_modes, policy):
    """Slowly convergent "bare" sums  sum_j c_j trig^2(pi j theta).

    Uses trig^2 = (1 -/+ cos(2 pi j theta)) / 2.

    Parameters
    ----------
    family : tuple
        (coef_vec, smooth_total, smooth_tail, coef_at) closures: c_j on
        ndarray indices, the exact sum_{j>=1} c_j, the exact
        sum_{j>J} c_j, and the scalar c_j.
    theta : float
        x_d / L in [0, 1].
    use_sin : bool
        True for sin^2 (Dirichlet modes), False for cos^2 (Neumann).
    tol : float
        Absolute stopping tolerance on the assembled sum.
    policy : str
        "averaged_tail": the non-oscillating half-sum is evaluated in
        closed form (digamma family), only the oscillating half is
        truncated, with a two-sided Abel bound -- this is what makes the
        1/j^2-type series reachable at tight tolerances.
        "integral_bound": plain summation of c_j trig^2 with the exact
        monotone envelope sum_{j>J} c_j as tail bound.
    """

    coef_vec, smooth_total, smooth_tail, coef_at = family
    sign = -1.0 if use_sin else 1.0
    phi = 2.0 * math.pi * theta
    if theta == 0.0 or theta == 1.0:
        # cos(2 pi j theta) == 1 exactly: sin^2 -> 0, cos^2 -> smooth sum
        if use_sin:
            return BareSumResult(0.0, 0.0, 0, 0.0)
        s = smooth_total()
        return BareSumResult(s, 0.0, 0, _EPS * abs(s))

    if policy == "integral_bound":
        acc, acc_abs = NeumaierSum(), NeumaierSum()
        for lo, hi in _block_ranges(max_modes):
            j = np.arange(lo, hi + 1, dtype=np.float64)
            trig = np.sin(math.pi * theta * j) if use_sin else np.cos(math.pi * theta * j)
            terms = coef_vec(j) * trig * trig
            acc.add(np.sum(terms, dtype=np.longdouble))
            acc_abs.add(np.sum(terms, dtype=np.longdouble))
            tail = smooth_tail(hi)
            if tail < tol:
                return BareSumResult(acc.value, tail, hi, _EPS * acc_abs.value)
        raise NoConvergence(
            f"bare mode sum: envelope tail above tolerance after {max_modes} modes",
            best=acc.value)

    # averaged tail: smooth half exact; oscillating half truncated with
    # its two leading Abel boundary terms restored, so the residual is
    # bounded by |delta c_m| / |1-z|^2 (c convex decreasing)
    z = cmath.exp(1j * phi)
    g = 1.0 / (1.0 - z)
    gap2 = abs(g) * abs(g)
    acc, acc_abs = NeumaierSum(), NeumaierSum()
    smooth = smooth_total()
    for lo, hi in _block_ranges(max_modes):
        j = np.arange(lo, hi + 1, dtype=np.float64)
        terms = coef_vec(j) * np.cos(phi * j)
        acc.add(np.sum(terms, dtype=np.longdouble))
        acc_abs.add(np.sum(np.abs(terms), dtype=np.longdouble))
        m = hi + 1
        cm = coef_at(m)
        dcm = coef_at(m + 1) - cm
        bound = abs(dcm) * gap2  # Abel residual after the boundary terms
        if bound < tol:
            zm = cmath.exp(1j * phi * m)
            corr = (cm * zm * g + z * dcm * zm * g * g).real
            value = 0.5 * (smooth + sign * (acc.value + corr))
            rounding = _EPS * 0.5 * (acc_abs.value + abs(smooth))
            return BareSumResult(value, bound, hi, rounding)
    raise NoConvergence(
        f"bare mode sum: oscillation bound above tolerance after {max_modes} modes",
        best=0.5 * (smooth + sign * acc.value))


# ----------------------------------------------------------------------
# Smeared (absolutely convergent) two-channel sums
# ----------------------------------------------------------------------

@dataclass
class SmearedSumResult:
    e2: float            # paramagnetic channel, per lambda^2
    e1: float            # diamagnetic channel, per lambda^2
    error_bound: float
    modes_used: int


def smeared_energy_sums(L, Omega, a0, theta, boundary_sin, alpha,
                        tol, max_modes):
    """Channel sums of the smeared energy series.

    e2_j = -f_j^2 trig^2 / ((w_j+Omega) w_j L),
    e1_j = +f_j^2 trig^2 / (Omega w_j L),  f_j the Lorentzian weight.
    Truncation by analytic envelope integrals (terms decay like j^-6 /
    j^-5 beyond j ~ L/(pi a0)).
    """

    mu2 = (L / (math.pi * a0)) ** 2
    fac = math.pi / L
    acc2, acc1, accabs = NeumaierSum(), NeumaierSum(), NeumaierSum()
    for lo, hi in _block_ranges(max_modes):
        j = np.arange(lo, hi + 1, dtype=np.float64)
        w = fac * j
        f2 = (2.0 * mu2 / (j * j + mu2)) ** 2
        trig = np.sin(w * theta * L) if boundary_sin else np.cos(w * theta * L)
        s2 = trig * trig
        base = f2 * s2 / (w * L)
        e2 = -base / (w + Omega)
        e1 = base / Omega
        acc2.add(np.sum(e2, dtype=np.longdouble))
        acc1.add(np.sum(e1, dtype=np.longdouble))
        accabs.add(np.sum(np.abs(e2) + abs(alpha) * e1, dtype=np.longdouble))
        J = hi
        tail2 = 4.0 * mu2 * mu2 * L / (5.0 * math.pi**2 * J**5)
        tail1 = mu2 * mu2 / (Omega * math.pi * J**4)
        tail = tail2 + abs(alpha) * tail1
        if tail < tol and J * math.pi / L >= 2.0 * Omega:
            rounding = _EPS * accabs.value
            return SmearedSumResult(acc2.value, acc1.value, tail + rounding, J)
    raise NoConvergence(
        f"smeared mode sum: tail above tolerance after {max_modes} modes",
        best=acc2.value)


def smeared_wall_force_fixed_ratio_sum(L, Omega, a0, theta, boundary_sin,
                                       tol, max_modes):
    """sum_j b_j with b_j the printed fixed-ratio force coefficient
    (per lambda^2), trig^2 = sin^2 (Dirichlet) or cos^2 (Neumann)."""

    a2 = a0 * a0
    pi = math.pi
    acc, accabs = NeumaierSum(), NeumaierSum()
    for lo, hi in _block_ranges(max_modes):
        j = np.arange(lo, hi + 1, dtype=np.float64)
        trig = np.sin(pi * j * theta) if boundary_sin else np.cos(pi * j * theta)
        num = 4.0 * L**3 * (L**3 * Omega - pi**2 * a2 * j**2 * (4.0 * pi * j + 3.0 * L * Omega))
        den = Omega * (pi**2 * a2 * j**2 + L**2) ** 3 * (pi * j + L * Omega) ** 2
        terms = num / den * trig * trig
        acc.add(np.sum(terms, dtype=np.longdouble))
        accabs.add(np.sum(np.abs(terms), dtype=np.longdouble))
        J = hi
        tail = (16.0 * L**3 / (4.0 * Omega * pi**5 * a2**2 * J**4)
                + 12.0 * L**4 / (5.0 * pi**6 * a2**2 * J**5)
                + 4.0 * L**6 / (7.0 * pi**8 * a2**3 * J**7))
        if tail < tol:
            return acc.value, tail + _EPS * accabs.value, J
    raise NoConvergence(
        f"smeared force sum: tail above tolerance after {max_modes} modes",
        best=acc.value)


# ----------------------------------------------------------------------
# Conditionally convergent oscillating sums (Levin-accelerated)
# ----------------------------------------------------------------------

def oscillating_sum(coef_at, z, tol, max_modes):
    """sum_{j>=1} coef_j z^j for smooth real coefficients and |z| = 1.

    Levin u-transformation after a burn-in, grown geometrically if the
    accelerator stalls; falls back to Euler averaging, then to direct
    summation with the Abel two-sided bound.  Returns (value, error,
    modes_used).
    """

    z = complex(z)
    if z == 1.0:
        raise NoConvergence("oscillating sum evaluated at z=1")
    burn = 64
    stall_best = None
    while burn <= max(max_modes // 2, 64):
        head = 0j
        comp = 0j
        zj = 1.0 + 0j
        for j in range(1, burn + 1):
            zj = cmath.exp(1j * j * cmath.phase(z)) if j % 256 == 0 else zj * z
            y = coef_at(j) * zj - comp
            t = head + y
            comp = (t - head) - y
            head = t
        for scheme in ("levin_u", "euler"):
            accel = _LevinU() if scheme == "levin_u" else _Euler()
            partial = head
            pcomp = 0j
            prev = None
            prev_diff = math.inf
            zj_t = zj
            for n in range(min(600, max_modes - burn)):
                j = burn + 1 + n
                zj_t = cmath.exp(1j * j * cmath.phase(z)) if j % 256 == 0 else zj_t * z
                term = coef_at(j) * zj_t
                y = term - pcomp
                t = partial + y
                pcomp = (t - partial) - y
                partial = t
                val = accel.feed(partial - head, term)
                if prev is not None:
                    diff = abs(val - prev)
                    floor = 1e-16 * (abs(val) + abs(head)) * (n + 1)
                    est = 2.0 * max(diff, prev_diff) + floor
                    if est <= tol and n >= 6:
                        return head + val, est, j
                    if stall_best is None or est < stall_best[1]:
                        stall_best = (head + val, est)
                    prev_diff = diff
                    if n > 220:
                        break
                prev = val
        burn *= 4
    best, est = stall_best if stall_best else (0j, math.inf)
    if est <= tol:
        return best, est, burn
    raise NoConvergence(
        f"oscillating sum: accelerator stalled (best error ~{est:.2e})",
        best=best, error_estimate=est)


# ----------------------------------------------------------------------
# Exact smooth sums/tails for the bare coefficient families
# ----------------------------------------------------------------------

def energy_coef_family(L, Omega):
    """c_j = L / (pi j (pi j + L Omega)): closures for bare_trig_sums."""

    nu = L * Omega / math.pi
    pref = L / math.pi**2

    def coef_vec(j):
        return pref / (j * (j + nu))

    def smooth_total():
        return pref * (float(_sp.digamma(1.0 + nu)) + np.euler_gamma) / nu

    def smooth_tail(J):
        return pref * float(_sp.digamma(J + 1.0 + nu) - _sp.digamma(J + 1.0)) / nu

    def coef_at(j):
        return pref / (j * (j + nu))

    return coef_vec, smooth_total, smooth_tail, coef_at


def force_coef_family(L, Omega):
    """d_j = 1 / (pi j + L Omega)^2: closures for bare_trig_sums."""

    nu = L * Omega / math.pi
    pref = 1.0 / math.pi**2

    def coef_vec(j):
        return pref / (j + nu) ** 2

    def smooth_total():
        return pref * float(_sp.polygamma(1, 1.0 + nu))

    def smooth_tail(J):
        return pref * float(_sp.polygamma(1, J + 1.0 + nu))

    def coef_at(j):
        return pref / (j + nu) ** 2

    return coef_vec, smooth_total, smooth_tail, coef_at
