"""Independent oracles for the test suite.

Every reference value frozen into the tests was produced by one of
these routines, which deliberately avoid the library's own evaluation
paths: plain partial sums in extended precision (numpy longdouble with
Euler-Maclaurin tails, or mpmath), mpmath's independent special-function
implementations, and quadrature of defining integrals.  Rerun
`python tests/oracles.py` to regenerate the frozen constants.
"""

import cmath
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 30


# ----------------------------------------------------------------------
# special-function oracles
# ----------------------------------------------------------------------

def lerch_euler_sum(z, s, a, n_terms=4000, depth=48):
    """Brute-force partial sums of sum z^n/(n+a)^s with Euler averaging,
    in mpmath working precision."""

    z, a = mp.mpc(z), mp.mpc(a)
    col = []
    partial = mp.mpc(0)
    zn = mp.mpc(1)
    last = None
    for n in range(n_terms):
        partial += zn / (n + a) ** s
        zn *= z
        v = partial
        for k in range(len(col)):
            v, col[k] = (v + col[k]) / 2, v
        if len(col) < depth:
            col.append(v)
        last = v
    return last


def lerch_reference(z, s, a):
    """mpmath's Lerch transcendent (integral-representation algorithms)."""

    return mp.lerchphi(mp.mpc(z), s, mp.mpc(a))


def harmonic_brute(x, terms=10**8):
    """H(x) = x sum 1/(k(x+k)) by direct longdouble summation of `terms`
    terms plus the midpoint integral tail correction."""

    x_ = np.longdouble(x)
    total = np.longdouble(0.0)
    chunk = 10**7
    for lo in range(1, terms + 1, chunk):
        hi = min(lo + chunk - 1, terms)
        k = np.arange(lo, hi + 1, dtype=np.longdouble)
        total += np.sum(x_ / (k * (x_ + k)))
    # midpoint integral tail: x * int dk/(k(k+x)) = ln((K+x)/K) from K+1/2
    K = np.longdouble(terms) + 0.5
    return float(total + np.log((K + x_) / K))


def hyp2f1_reference(a, b, c, z):
    return mp.hyp2f1(mp.mpc(a), mp.mpc(b), mp.mpc(c), mp.mpc(z))


def psi_reference(n, x):
    return mp.psi(n, mp.mpc(x))


def incbeta_chord_quad(z, a):
    """B(z; a, 0) by adaptive quadrature of the defining integral along
    the straight chord from 0 to z (principal branch)."""

    z, a = mp.mpc(z), mp.mpc(a)
    return mp.quad(lambda t: t ** (a - 1) / (1 - t), [0, z])


# ----------------------------------------------------------------------
# energy-series oracles
# ----------------------------------------------------------------------

def bare_energy_brute(L, Omega, lam, x, kind, terms=10**8):
    """Direct longdouble summation of the point-coupling energy series
    with an integral tail correction."""

    total = np.longdouble(0.0)
    chunk = 10**7
    Lq, Oq, xq = np.longdouble(L), np.longdouble(Omega), np.longdouble(x)
    for lo in range(1, terms + 1, chunk):
        hi = min(lo + chunk - 1, terms)
        j = np.arange(lo, hi + 1, dtype=np.longdouble)
        trig = np.sin(np.pi * j * xq / Lq) if kind == "sin" else np.cos(np.pi * j * xq / Lq)
        total += np.sum(trig * trig / ((np.pi * j / Lq + Oq) * np.pi * j))
    # averaged tail: trig^2 -> 1/2 and the exact midpoint integral of the
    # smooth envelope (L/pi^2)/(j(j+nu)); the oscillating remainder at
    # j > 1e8 is below the longdouble floor
    J = np.longdouble(terms) + 0.5
    nu = Lq * Oq / np.pi
    tail = 0.5 * (Lq / np.pi**2) * np.log1p(nu / J) / nu
    return float(-lam * lam * (total + tail))


def smeared_energy_brute(L, Omega, lam, a0, x, kind, terms=2 * 10**6):
    """Direct longdouble summation of the smeared combined series."""

    total = np.longdouble(0.0)
    Lq, Oq, xq, aq = (np.longdouble(L), np.longdouble(Omega),
                      np.longdouble(x), np.longdouble(a0))
    chunk = 10**6
    for lo in range(1, terms + 1, chunk):
        hi = min(lo + chunk - 1, terms)
        j = np.arange(lo, hi + 1, dtype=np.longdouble)
        w = np.pi * j / Lq
        f = 2.0 / ((aq * w) ** 2 + 1.0)
        trig = np.sin(w * xq) if kind == "sin" else np.cos(w * xq)
        total += np.sum(f * f * trig * trig / (Oq * Lq * (Oq + w)))
    return float(lam * lam * total)


# ----------------------------------------------------------------------
# fourth-order pair oracle
# ----------------------------------------------------------------------

def pair_energy_square_brute(L, Omega, xa, xb, M):
    """Square-truncated (j, l <= M) double sum of the pair energy, per
    lambda^4, rows accumulated in longdouble."""

    j = np.arange(1, M + 1, dtype=np.float64)
    sa = np.sin(math.pi * j * xa / L)
    sb = np.sin(math.pi * j * xb / L)
    total = np.longdouble(0.0)
    for jj in range(1, M + 1):
        ll = j
        sja, sjb = sa[jj - 1], sb[jj - 1]
        pref = -(L * L) / (math.pi**3 * jj * ll * Omega * (jj + ll)
                           * (math.pi * jj + L * Omega) ** 2 * (math.pi * ll + L * Omega))
        br = (2.0 * (2.0 * math.pi * L * Omega * (jj + 2 * ll)
                     + math.pi**2 * jj * (jj + ll) + 2.0 * (L * Omega) ** 2)
              * sja * sjb * sa * sb
              + L * Omega * sja**2 * ((math.pi * jj + 3 * math.pi * ll
                                       + 2 * L * Omega) * sa**2
                                      + 2 * math.pi * (jj + ll) * sb**2)
              + L * Omega * sjb**2 * (2 * math.pi * (jj + ll) * sa**2
                                      + (math.pi * jj + 3 * math.pi * ll
                                         + 2 * L * Omega) * sb**2))
        total += np.sum(pref * br, dtype=np.longdouble)
    return float(total)


def pair_energy_extrapolated(L, Omega, xa, xb, M=10**4):
    """Square sums at M/2 and M, Richardson-extrapolated at exponent 1
    (the square tail decays like 1/M)."""

    s_half = pair_energy_square_brute(L, Omega, xa, xb, M // 2)
    s_full = pair_energy_square_brute(L, Omega, xa, xb, M)
    return 2.0 * s_full - s_half


# ----------------------------------------------------------------------
# critical-atom-number oracle
# ----------------------------------------------------------------------

def uniform_fixed_ratio_brute(L, Omega, n, terms=10**6):
    """Collapsed fixed-ratio medium force per lambda^2 without polygamma:
    longdouble partial sums with an Euler-Maclaurin tail through j^-5."""

    P = np.longdouble(n + 1)
    Lq, Oq = np.longdouble(L), np.longdouble(Omega)

    def series_tail(a, J):
        # sum_{j>J} 1/(pi j + a)^2 by Euler-Maclaurin at j = J
        J = np.longdouble(J)
        den = np.pi * J + a
        return 1.0 / (np.pi * den) - 0.5 / den**2 + np.pi / (6.0 * den**3)

    def dsum(scale):
        # sum over multiples j = scale*m of 1/(pi j + L Omega)^2
        m = np.arange(1, terms + 1, dtype=np.longdouble)
        s = np.sum(1.0 / (np.pi * scale * m + Lq * Oq) ** 2)
        return s + series_tail(Lq * Oq / scale, terms) / scale**2

    S_all = dsum(np.longdouble(1.0))
    S_P = dsum(P)
    return float(0.5 * P * (S_all - S_P))


def uniform_position_extra_mp(L, Omega, n, R0=20000, dps=25):
    """W(P) by the residue-pair reorganization evaluated in mpmath:
    head sum over r <= R0, tanh-sinh quadrature of the regular part,
    exact log integral of the singular part, midpoint EM correction."""

    with mp.workdps(dps):
        P = n + 1
        nu = mp.mpf(L) * Omega / mp.pi
        M = (P + 1) // 2 - 1 if P % 2 else P // 2 - 1
        if M <= 0:
            return 0.0

        def h(r):
            A = (r + nu) / P
            B = (P - r + nu) / P
            return mp.cot(mp.pi * r / P) * (mp.psi(0, B) - mp.psi(0, A)) / (2 * mp.pi * P)

        if M <= R0:
            return float(mp.fsum(h(r) for r in range(1, M + 1)))
        head = mp.fsum(h(r) for r in range(1, R0 + 1))
        eps = nu / P
        u0 = mp.mpf(2 * R0 + 1) / (2 * P)
        u1 = mp.mpf(2 * M + 1) / (2 * P)
        I0 = (mp.log(u1 / (u1 + eps)) - mp.log(u0 / (u0 + eps))) / (2 * mp.pi**2 * eps)

        def Hr(u):
            g = mp.psi(0, 1 - u + eps) - mp.psi(0, 1 + u + eps)
            ctn = mp.cot(mp.pi * u) - 1 / (mp.pi * u)
            return ctn / (u + eps) / (2 * mp.pi) + (ctn + 1 / (mp.pi * u)) * g / (2 * mp.pi)

        I1 = mp.quad(Hr, [u0, u1])
        dh = lambda r: h(r + mp.mpf("0.5")) - h(r - mp.mpf("0.5"))
        em = -(dh(mp.mpf(M) + mp.mpf("0.5")) - dh(mp.mpf(R0) + mp.mpf("0.5"))) / 24
        return float(head + I0 + I1 + em)


def critical_total_force(L, Omega, lam, n, constraint):
    """Total wall force (medium + empty-cavity Casimir) at atom count n,
    via the brute/mpmath routes above."""

    base = uniform_fixed_ratio_brute(L, Omega, n)
    if constraint == "fixed-position":
        base += uniform_position_extra_mp(L, Omega, n)
    return lam * lam * base - math.pi / (24.0 * L * L)


if __name__ == "__main__":
    print("# frozen oracle values")
    print("LERCH_HALF =", repr(2 * math.log(2)))
    v = lerch_euler_sum(1j, 1, 1 + 2j)
    print("LERCH_I_1P2I =", complex(v))
    print("  cross-check vs mpmath:", complex(lerch_reference(1j, 1, 1 + 2j)))
    print("HARMONIC_2P5 =", repr(harmonic_brute(2.5)))
    print("  digamma relation:", float(mp.psi(0, 3.5) + mp.euler))
    mu = 1.0 / (math.pi * 1e-3)
    z = cmath.exp(2j * math.pi * 0.3)
    print("HYP2F1_APPB =", complex(hyp2f1_reference(1, 1 + mu * 1j, 2 + mu * 1j, z)))
    mu2 = 1.0 / (math.pi * 1e-2)
    print("PSI0_1_31 =", complex(psi_reference(0, 1 + mu2 * 1j)))
    print("INCBETA_03 =", complex(incbeta_chord_quad(z, 3.0)))
    print("NEUMANN_HALF_E =", repr(bare_energy_brute(1.0, 2 * math.pi, 1e-4, 0.5,
                                                     "cos", terms=10**8)))
    print("  exact -lam^2/(4 pi^2):", repr(-1e-8 / (4 * math.pi**2)))
    print("DIRICHLET_03_E =", repr(bare_energy_brute(1.0, 2 * math.pi, 1e-4, 0.3,
                                                     "sin", terms=10**8)))
    print("SMEARED_D_HALF_E =", repr(smeared_energy_brute(1.0, 2 * math.pi, 1e-4,
                                                          1e-3, 0.5, "sin")))
    print("PAIR_E4_03_07 =", repr(pair_energy_extrapolated(1.0, 2 * math.pi, 0.3, 0.7)))
