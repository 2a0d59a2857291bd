"""Configuration types, mode weights and unit conversion."""

import math

import numpy as np
import pytest

from casimir_cavity import (
    AtomSpec,
    Boundary,
    CavitySpec,
    CouplingKind,
    CouplingModel,
    DomainError,
    HBAR_C,
    SeriesControl,
    bare_point,
    mode_weight,
    momentum_matrix_element_1s2s,
    smeared_diamagnetic,
    to_si,
)


class TestModeWeight:
    def test_point_limit_is_two(self):
        for j in (1, 7, 10**6):
            assert mode_weight(j, 1.0, 0.0) == 2.0

    def test_unit_argument(self):
        assert mode_weight(1, 1.0, 1.0 / math.pi) == pytest.approx(1.0, abs=1e-15)

    def test_printed_value(self):
        want = 2.0 / (1.0 + (0.01 * math.pi) ** 2)
        assert mode_weight(10, 1.0, 1e-3) == pytest.approx(want, rel=1e-15)

    def test_monotone_decreasing(self):
        j = np.arange(1, 5000)
        f = mode_weight(j, 1.0, 2e-3)
        assert np.all(np.diff(f) < 0)
        assert 0 < f[-1] and f[0] <= 2.0

    def test_large_j_closed_form(self):
        j = 10**6
        want = 2.0 / ((1e-3 * math.pi * j) ** 2 + 1.0)
        assert mode_weight(j, 1.0, 1e-3) == pytest.approx(want, rel=1e-14)

    def test_validation(self):
        with pytest.raises(DomainError):
            mode_weight(1, 0.0, 1e-3)
        with pytest.raises(DomainError):
            mode_weight(1, 1.0, -1e-3)


class TestMatrixElement:
    def test_hydrogenic_scale(self):
        # ~20 for a0 = 1e-2
        assert momentum_matrix_element_1s2s(1e-2) == pytest.approx(20.951, rel=1e-4)

    def test_normalization_point(self):
        a0 = 4 * math.sqrt(2) / 27
        assert momentum_matrix_element_1s2s(a0) == pytest.approx(1.0, rel=1e-15)

    def test_unit_radius(self):
        assert momentum_matrix_element_1s2s(1.0) == pytest.approx(0.2095131204, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            momentum_matrix_element_1s2s(0.0)


class TestToSi:
    def test_zero(self):
        assert to_si(0.0, "force", 0.5) == 0.0

    def test_energy_unit(self):
        assert to_si(1.0, "energy", 1.0) == pytest.approx(3.16152677e-26, rel=1e-9)

    def test_casimir_half_meter(self):
        # -pi/24 / L^2 * hbar c with L = 0.5 m
        want = (-math.pi / 24) * HBAR_C / 0.25
        got = to_si(-math.pi / 24, "force", 0.5)
        assert got == pytest.approx(want, rel=1e-15)
        assert got == pytest.approx(-1.65537e-26, rel=1e-5)

    def test_linearity(self):
        v = to_si(0.37, "force", 2.0)
        assert to_si(7.0 * 0.37, "force", 2.0) == pytest.approx(7.0 * v, rel=1e-15)

    def test_bad_unit(self):
        with pytest.raises(DomainError):
            to_si(1.0, "momentum", 1.0)
        with pytest.raises(DomainError):
            to_si(1.0, "force", 0.0)


class TestSpecs:
    def test_cavity_validation(self):
        with pytest.raises(DomainError):
            CavitySpec(0.0)
        cav = CavitySpec(2.0, "neumann")
        assert cav.boundary is Boundary.NEUMANN
        assert cav.omega(3) == pytest.approx(3 * math.pi / 2)

    def test_atom_validation(self):
        with pytest.raises(DomainError):
            AtomSpec(0.5, 0.0, 1e-4)
        with pytest.raises(DomainError):
            AtomSpec(0.5, 1.0, -1e-4)
        with pytest.raises(DomainError):
            AtomSpec(1.5, 1.0, 1e-4).validate_in(CavitySpec(1.0))
        # walls are legal inputs
        AtomSpec(0.0, 1.0, 1e-4).validate_in(CavitySpec(1.0))
        AtomSpec(1.0, 1.0, 1e-4).validate_in(CavitySpec(1.0))

    def test_coupling_model(self):
        assert bare_point().kind is CouplingKind.BARE_POINT
        assert not bare_point().smeared
        assert smeared_diamagnetic(0.3).alpha == 0.3
        with pytest.raises(DomainError):
            CouplingModel(CouplingKind.SMEARED_DIAMAGNETIC, alpha=-0.1)

    def test_series_control(self):
        ctl = SeriesControl()
        assert ctl.resolved_abs_tol(1e-4) == pytest.approx(1e-22)
        assert SeriesControl(abs_tol=1e-20).resolved_abs_tol(1.0) == 1e-20
        with pytest.raises(DomainError):
            SeriesControl(rel_tol=0.0)
        with pytest.raises(DomainError):
            SeriesControl(max_modes=0)
        with pytest.raises(DomainError):
            SeriesControl(tail_policy="midpoint")
