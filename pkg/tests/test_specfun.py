"""Special-function layer: frozen oracle values, identities, error bounds.

Reference constants were generated by tests/oracles.py (brute-force
partial sums with Euler averaging, mpmath cross-implementations, and
chord quadrature of defining integrals).
"""

import cmath
import math

import numpy as np
import pytest

from casimir_cavity import (
    DomainError,
    NoConvergence,
    PoleOnPath,
    SeriesAccuracy,
    gauss_2f1,
    gen_harmonic,
    inc_beta,
    lerch_phi,
    pochhammer,
    polygamma,
)

EULER_GAMMA = 0.5772156649015328606
Z03 = cmath.exp(2j * math.pi * 0.3)

# frozen oracle values (tests/oracles.py)
LERCH_HALF = 1.3862943611198906            # 2 ln 2, direct sum of z^n/(n+1)
LERCH_I_1P2I = 0.24974647409677705 - 0.15673869045291453j  # Euler-averaged sums
LERCH_I_1P2I_MP = 0.2497464741043213 - 0.15673869044547017j  # mpmath lerchphi
HARMONIC_2P5 = 1.680372305546776           # 1e8-term sum + integral tail
HYP2F1_APPB = 0.5000037527501551 + 0.36207401790655414j     # mpmath hyp2f1
PSI0_1_31 = 3.4605225549632768 + 1.5550883635269477j        # mpmath psi
INCBETA_03 = 0.2323136665028177 - 0.028845359430958423j     # chord quadrature


class TestLerchPhi:
    def test_z_zero_single_term(self):
        assert lerch_phi(0, 2, 3) == pytest.approx(1 / 9, abs=1e-16)

    def test_interior_log_series(self):
        # sum z^n/(n+1) = -ln(1-z)/z at z = 1/2
        assert lerch_phi(0.5, 1, 1).real == pytest.approx(LERCH_HALF, abs=1e-11)

    def test_unit_circle_complex_shift(self):
        v = lerch_phi(1j, 1, 1 + 2j)
        assert abs(v - LERCH_I_1P2I) < 2e-10   # oracle is Euler-depth limited
        assert abs(v - LERCH_I_1P2I_MP) < 5e-12

    def test_real_axis_stays_real(self):
        for z in (-0.9, -0.25, 0.4, 0.85):
            for a in (0.5, 3.7):
                assert abs(lerch_phi(z, 1, a).imag) < 1e-13

    def test_conjugate_symmetry(self, rng):
        for _ in range(20):
            z = cmath.exp(2j * math.pi * rng.uniform(0.05, 0.95))
            a = complex(rng.uniform(0.5, 4), rng.uniform(-40, 40))
            lhs = lerch_phi(z.conjugate(), 1, a.conjugate())
            assert abs(lhs - lerch_phi(z, 1, a).conjugate()) < 5e-11

    def test_pole_on_path(self):
        with pytest.raises(PoleOnPath):
            lerch_phi(0.5, 1, 0)
        with pytest.raises(PoleOnPath):
            lerch_phi(0.5, 2, -3)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            lerch_phi(1.0, 1, 2.0)
        with pytest.raises(DomainError):
            lerch_phi(1.5, 1, 2.0)

    def test_z_one_hurwitz(self):
        # sum 1/(n+1)^2 = pi^2/6
        assert lerch_phi(1.0, 2, 1.0).real == pytest.approx(math.pi**2 / 6, rel=1e-12)

    def test_no_convergence_budget(self):
        acc = SeriesAccuracy(abs_tol=1e-14, max_terms=8)
        with pytest.raises(NoConvergence):
            lerch_phi(Z03, 1, 3.0, acc)


class TestGenHarmonic:
    def test_zero(self):
        assert gen_harmonic(0.0) == pytest.approx(0.0, abs=1e-15)

    def test_one_telescoping(self):
        assert gen_harmonic(1.0) == pytest.approx(1.0, abs=1e-14)

    def test_brute_force_value(self):
        assert gen_harmonic(2.5) == pytest.approx(HARMONIC_2P5, abs=1e-12)

    def test_digamma_relation_grid(self):
        from scipy.special import digamma
        for x in np.linspace(0.2, 99.7, 37):
            want = float(digamma(x + 1)) + EULER_GAMMA
            assert gen_harmonic(x) == pytest.approx(want, abs=1e-13)

    def test_pole(self):
        with pytest.raises(PoleOnPath):
            gen_harmonic(-2.0)


class TestGauss2F1:
    def test_degenerate_binomial(self):
        assert gauss_2f1(1, 0.7, 0.7, 0.3).real == pytest.approx(1 / 0.7, rel=1e-11)

    def test_log_value(self):
        assert gauss_2f1(1, 1, 2, 0.5).real == pytest.approx(LERCH_HALF, rel=1e-11)

    def test_marginal_unit_circle_instance(self):
        mu = 1.0 / (math.pi * 1e-3)
        v = gauss_2f1(1, 1 + mu * 1j, 2 + mu * 1j, Z03)
        assert abs(v - HYP2F1_APPB) < 1e-11

    def test_degenerate_identity_grid(self, rng):
        worst = 0.0
        for _ in range(50):
            a = complex(rng.uniform(-2, 3), rng.uniform(-2, 2))
            b = complex(rng.uniform(0.3, 4), rng.uniform(-2, 2))
            z = rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
            want = (1 - z) ** (-a)
            worst = max(worst, abs(gauss_2f1(a, b, b, z) - want) / abs(want))
        assert worst < 1e-10

    def test_z_one_gauss_theorem(self):
        # 2F1(1,1;3;1) = Gamma(3)Gamma(1)/Gamma(2)^2 = 2
        assert gauss_2f1(1, 1, 3, 1.0).real == pytest.approx(2.0, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            gauss_2f1(1, 1, -2, 0.5)
        with pytest.raises(DomainError):
            gauss_2f1(1, 1, 2, 1.0)  # Re(c-a-b) = 0 at z = 1


class TestPolygamma:
    def test_psi0_at_one(self):
        assert polygamma(0, 1.0).real == pytest.approx(-EULER_GAMMA, abs=1e-14)

    def test_psi1_at_one(self):
        assert polygamma(1, 1.0).real == pytest.approx(math.pi**2 / 6, abs=1e-13)

    def test_large_imaginary_shift(self):
        mu = 1.0 / (math.pi * 1e-2)
        assert abs(polygamma(0, 1 + mu * 1j) - PSI0_1_31) < 1e-12

    def test_recurrence_complex(self, rng):
        for _ in range(50):
            x = complex(rng.uniform(0.2, 20), rng.uniform(-20, 20))
            got = polygamma(0, x + 1) - polygamma(0, x)
            assert abs(got - 1.0 / x) < 1e-12

    def test_trigamma_recurrence(self, rng):
        for _ in range(25):
            x = complex(rng.uniform(0.3, 10), rng.uniform(-10, 10))
            got = polygamma(1, x) - polygamma(1, x + 1)
            assert abs(got - 1.0 / x**2) < 1e-12

    def test_reflection_region(self):
        # scipy real trigamma as reference on the negative half-plane
        from scipy.special import polygamma as sp_polygamma
        assert polygamma(1, -2.5).real == pytest.approx(
            float(sp_polygamma(1, -2.5)), rel=1e-12)

    def test_pole_and_order(self):
        with pytest.raises(PoleOnPath):
            polygamma(0, -4.0)
        with pytest.raises(DomainError):
            polygamma(2, 1.5)


class TestIncBeta:
    def test_logarithmic_case(self):
        assert inc_beta(0.5, 1, 0).real == pytest.approx(math.log(2), rel=1e-11)

    def test_empty_range(self):
        assert inc_beta(0, 2.3, 0.5) == 0

    def test_unit_circle_chord_value(self):
        assert abs(inc_beta(Z03, 3.0, 0.0) - INCBETA_03) < 1e-11

    def test_real_beta_against_scipy(self):
        from scipy.special import betainc, beta
        got = inc_beta(0.4, 2.0, 3.0).real
        want = float(betainc(2.0, 3.0, 0.4) * beta(2.0, 3.0))
        assert got == pytest.approx(want, rel=1e-11)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            inc_beta(1.0, 2.0, 0.0)


class TestPochhammer:
    def test_definition(self):
        assert pochhammer(3.3 + 1j, 0) == 1

    def test_factorial(self):
        assert pochhammer(1, 5) == 120

    def test_product(self):
        assert pochhammer(2.5, 3).real == pytest.approx(39.375, abs=1e-13)


class TestErrorEstimates:
    """Every reported error estimate must bound the true error against a
    10x-tighter re-evaluation (spec invariant, 100 random inputs)."""

    def test_estimates_dominate(self, rng):
        tight = SeriesAccuracy(abs_tol=1e-13)
        loose = SeriesAccuracy(abs_tol=1e-12)
        violations = 0
        for _ in range(100):
            th = rng.uniform(0.05, 0.95)
            z = cmath.exp(2j * math.pi * th)
            a = complex(rng.uniform(0.5, 5), rng.uniform(-50, 50))
            kind = rng.integers(0, 3)
            if kind == 0:
                v, e = lerch_phi(z, 1, a, loose, with_error=True)
                w = lerch_phi(z, 1, a, tight)
            elif kind == 1:
                v, e = lerch_phi(z, 2, a, loose, with_error=True)
                w = lerch_phi(z, 2, a, tight)
            else:
                b = complex(rng.uniform(0.5, 4), rng.uniform(-20, 20))
                v, e = gauss_2f1(1, b, b + 1, z, loose, with_error=True)
                w = gauss_2f1(1, b, b + 1, z, tight)
            if abs(v - w) > e + 1e-15 * abs(v):
                violations += 1
        assert violations == 0
