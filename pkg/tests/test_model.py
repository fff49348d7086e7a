import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eitcav import (
    ASYMMETRIC_A,
    ASYMMETRIC_B,
    MARGINAL,
    STABLE,
    SYMMETRIC_MINUS,
    SYMMETRIC_PLUS,
    UNSTABLE,
    AsymmetryError,
    DomainError,
    DriveSpec,
    ModelParams,
    PhysicalParams,
    SingularInput,
    analytic_drive,
    analytic_steady_theta0,
    io_phases,
    normalize_params,
    reduced_polarizations,
    steady_residual,
)

# Frozen from the closed forms I = Y/2 (1 +- eta), eta = sqrt(1 - Y^2) and
# I = Y/2 (1 +- sqrt(1 - 1/Y^2)), evaluated in double precision.
I_HI_095, I_LO_095 = 0.623318702461962, 0.32668129753803804
I_PLUS_105, I_MINUS_105 = 0.6850781059358213, 0.36492189406417874


def _physical(**kw):
    base = dict(n_atoms=1e6, g1=1.0, g2=1.0, gamma1=2.0, gamma2=2.0, kappa1=0.2, kappa2=0.2,
                omega1=100.0, omega2=200.0, omega_a1=100.125, omega_a2=199.875,
                omega_c1=100.0, omega_c2=200.0, transmission1=0.1, transmission2=0.1)
    base.update(kw)
    return PhysicalParams(**base)


class TestNormalize:
    def test_cooperativity_and_detuning(self):
        # g^2 N / (gamma_w kappa) = 250 and (omega_a1 - omega_1)/gamma_w = 0.0625
        p = _physical(n_atoms=250 * 2.0 * 0.2, omega_a1=100.125, omega_a2=199.875)
        params, drive = normalize_params(p)
        assert params.cooperativity == pytest.approx(250.0, rel=1e-12)
        assert params.epsilon == pytest.approx(0.0625, rel=1e-12)
        assert params.gamma_over_kappa == pytest.approx(10.0)
        assert drive.Y == 0.0

    def test_cavity_detuning_and_drive(self):
        p = _physical(omega_c1=100.02, omega_c2=200.02, e_in1=0.5, e_in2=0.5j)
        params, drive = normalize_params(p)
        assert params.theta1 == pytest.approx(0.1)
        assert params.theta2 == pytest.approx(0.1)
        y = math.sqrt(2) * 1.0 / 2.0 * 2 / math.sqrt(0.1) * 0.5
        assert drive.Y == pytest.approx(y * y / params.intensity_scale)
        assert drive.phase2 == pytest.approx(math.pi / 2)

    @pytest.mark.parametrize("kw", [
        dict(gamma2=2.5), dict(kappa2=0.3), dict(omega_a2=199.8), dict(g2=1.1),
        dict(e_in1=1.0, e_in2=2.0),
    ])
    def test_rejects_asymmetry(self, kw):
        with pytest.raises(AsymmetryError):
            normalize_params(_physical(**kw))

    @pytest.mark.parametrize("kw", [dict(gamma1=0.0, gamma2=0.0), dict(kappa1=-1, kappa2=-1),
                                    dict(transmission1=0.0, transmission2=0.0)])
    def test_rejects_bad_rates(self, kw):
        with pytest.raises(DomainError):
            normalize_params(_physical(**kw))


class TestParams:
    def test_validity_flags(self):
        assert ModelParams(0.0625, 250).is_valid
        assert not ModelParams(0.0625, 250, gamma_over_kappa=3).is_valid
        assert not ModelParams(0.6, 250).is_valid

    @pytest.mark.parametrize("kw", [dict(epsilon=0, cooperativity=1), dict(epsilon=0.1, cooperativity=-1)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            ModelParams(**kw)

    def test_negative_drive(self):
        with pytest.raises(DomainError):
            DriveSpec(-0.1)


class TestPolarizations:
    def test_symmetric_point(self):
        p = reduced_polarizations(1, 1, 0.1)
        assert p.v == pytest.approx(0.1j)
        assert p.w == pytest.approx(-0.1j)

    def test_dark_field(self):
        p = reduced_polarizations(1, 0, 0.1)
        assert p.v == 0 and p.w == 0

    def test_hand_evaluation(self):
        # v = i 4 eps x1 |x2|^2 / S^2 with S = 5: 0.2 * 2 / 25 = 0.016
        p = reduced_polarizations(2, 1, 0.05)
        assert p.v == pytest.approx(0.016j, abs=1e-15)
        assert p.w == pytest.approx(-0.032j, abs=1e-15)

    def test_floor(self):
        with pytest.raises(SingularInput):
            reduced_polarizations(1e-16, 0, 0.1)

    @given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 0.5))
    def test_sign_structure(self, a, b, eps):
        p = reduced_polarizations(a, b, eps)
        assert p.v.real == 0 and p.v.imag >= 0
        assert p.w.real == 0 and p.w.imag <= 0


class TestResidual:
    def test_empty_cavity(self):
        params = ModelParams(0.1, 0.0)
        r = steady_residual((0j, 0j), params, (1 + 1j, 2.0))
        np.testing.assert_allclose(r, [-(1 + 1j), -2.0])

    def test_linear_solution(self):
        params = ModelParams(0.1, 0.0, theta1=0.3, theta2=-0.7)
        y = (1.5 + 0.2j, -0.4j)
        x = (y[0] / (1 + 0.3j), y[1] / (1 - 0.7j))
        assert np.abs(steady_residual(x, params, y)).max() < 1e-15

    def test_zero_field_with_atoms_is_singular(self, fig_params):
        with pytest.raises(SingularInput):
            steady_residual((0j, 0j), fig_params, DriveSpec(1.0))

    @pytest.mark.parametrize("Y", [0.1, 0.5, 0.95, 1.0, 1.05, 2.0, 10.0])
    def test_analytic_states_annihilate_residual(self, fig_params, Y):
        for s in analytic_steady_theta0(Y, fig_params):
            r = steady_residual(s, fig_params, analytic_drive(Y, s))
            assert np.abs(r).max() < 1e-10


class TestAnalyticSteady:
    def test_below_fold(self, fig_params):
        states = analytic_steady_theta0(0.95, fig_params)
        assert [s.branch for s in states] == [ASYMMETRIC_A, ASYMMETRIC_B]
        a, b = states
        assert a.I1 == pytest.approx(I_HI_095, abs=1e-15)
        assert a.I2 == pytest.approx(I_LO_095, abs=1e-15)
        assert (b.I1, b.I2) == (a.I2, a.I1)
        assert a.stability == b.stability == STABLE
        # six-figure values
        assert round(a.I1, 6) == 0.623319 and round(a.I2, 6) == 0.326681

    def test_above_fold(self, fig_params):
        plus, minus = analytic_steady_theta0(1.05, fig_params)
        assert plus.branch == SYMMETRIC_PLUS and minus.branch == SYMMETRIC_MINUS
        assert plus.I1 == plus.I2 == pytest.approx(I_PLUS_105, abs=1e-15)
        assert minus.I1 == pytest.approx(I_MINUS_105, abs=1e-15)
        assert (plus.stability, minus.stability) == (STABLE, UNSTABLE)
        assert round(plus.I1, 6) == 0.685078 and round(minus.I1, 6) == 0.364922

    def test_fold_point(self, fig_params):
        (s,) = analytic_steady_theta0(1.0, fig_params)
        assert s.I1 == s.I2 == 0.5
        assert s.stability == MARGINAL

    def test_large_drive(self, fig_params):
        plus, minus = analytic_steady_theta0(2.0, fig_params)
        assert plus.I1 == pytest.approx(1 + math.sqrt(3) / 2, abs=1e-14)
        assert minus.I1 == pytest.approx(1 - math.sqrt(3) / 2, abs=1e-14)

    def test_real_amplitudes(self, fig_params):
        for s in analytic_steady_theta0(0.7, fig_params):
            assert s.x1.imag == 0 and s.x1.real > 0
            assert abs(s.x1) ** 2 == pytest.approx(fig_params.intensity_scale * s.I1, rel=1e-12)

    @pytest.mark.parametrize("Y", [0.0, -1.0])
    def test_domain(self, fig_params, Y):
        with pytest.raises(DomainError):
            analytic_steady_theta0(Y, fig_params)

    def test_requires_zero_detuning(self, fig_params):
        with pytest.raises(DomainError):
            analytic_steady_theta0(0.9, fig_params.with_theta(0.01))

    @given(st.floats(0.05, 0.999), st.floats(1.0, 1000.0), st.floats(0.01, 0.5))
    def test_universality_and_sum_rules(self, Y, C, eps):
        ref = analytic_steady_theta0(Y, ModelParams(0.0625, 250))
        got = analytic_steady_theta0(Y, ModelParams(eps, C))
        for r, g in zip(ref, got):
            assert g.I1 == pytest.approx(r.I1, abs=1e-12)
            assert g.I2 == pytest.approx(r.I2, abs=1e-12)
        a = got[0]
        assert a.I1 + a.I2 == pytest.approx(Y, abs=1e-12)
        assert a.I1 * a.I2 == pytest.approx(Y ** 4 / 4, abs=1e-12)

    @given(st.floats(1.0001, 50.0))
    def test_symmetric_rule(self, Y):
        for s in analytic_steady_theta0(Y, ModelParams(0.0625, 250)):
            assert s.I1 + 1 / (4 * s.I1) == pytest.approx(Y, abs=1e-12 * max(1, Y))


class TestPhases:
    def test_fold(self, fig_params):
        (s,) = analytic_steady_theta0(1.0, fig_params)
        assert s.phases_in == pytest.approx((math.pi / 4, -math.pi / 4), abs=1e-15)

    def test_symmetric(self, fig_params):
        plus = analytic_steady_theta0(1.05, fig_params)[0]
        assert plus.phases_in[0] == pytest.approx(math.atan(1 / (2 * I_PLUS_105)), abs=1e-15)
        assert plus.phases_in[0] == pytest.approx(0.630476, abs=1e-6)
        assert plus.phases_in[1] == -plus.phases_in[0]

    def test_asymmetric(self, fig_params):
        a = analytic_steady_theta0(0.95, fig_params)[0]
        assert a.phases_in[0] == pytest.approx(math.atan(math.sqrt(I_LO_095 / I_HI_095)), abs=1e-15)
        assert a.phases_in[1] == pytest.approx(-math.atan(math.sqrt(I_HI_095 / I_LO_095)), abs=1e-15)
        assert a.phases_in == pytest.approx((0.626618, -0.944178), abs=1e-6)

    @pytest.mark.parametrize("Y", [0.3, 0.95, 1.0, 1.05, 3.0])
    def test_antisymmetry_and_direct_evaluation(self, fig_params, Y):
        for s in analytic_steady_theta0(Y, fig_params):
            assert s.phases_out == (-s.phases_in[0], -s.phases_in[1])
            # direct: phase of y_j = (1 + i theta) x_j + 2 C p_j relative to the real x_j
            y = steady_residual(s, fig_params, (0j, 0j))
            assert cmath.phase(y[0]) == pytest.approx(s.phases_in[0], abs=1e-12)
            assert cmath.phase(y[1]) == pytest.approx(s.phases_in[1], abs=1e-12)
            out = 2 * np.array([s.x1, s.x2]) - y
            assert cmath.phase(out[0]) == pytest.approx(s.phases_out[0], abs=1e-12)

    def test_domain(self, fig_params):
        a = analytic_steady_theta0(0.95, fig_params)[0]
        from dataclasses import replace
        with pytest.raises(DomainError):
            io_phases(replace(a, I2=0.0))


@settings(max_examples=50)
@given(st.floats(0.05, 0.999))
def test_swap_symmetry(Y):
    params = ModelParams(0.0625, 250)
    a, b = analytic_steady_theta0(Y, params)
    assert (a.I1, a.I2) == (b.I2, b.I1)
    assert a.I1 >= a.I2
    # the swapped amplitudes solve the swapped problem
    r = steady_residual((a.x2, a.x1), params, analytic_drive(Y, b))
    assert np.abs(r).max() < 1e-10
