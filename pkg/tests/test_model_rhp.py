"""
Tests for Gamma, the parabolic cylinder function and the model-problem constants
"""

import cmath
import math

import numpy as np
import pytest
from scipy import special

from mkdv_core.exceptions import SpecialFunctionError, ValidationError
from mkdv_core.model_rhp import (
    arg_gamma,
    beta_constants,
    cylinder_parameter,
    gamma,
    log_gamma,
    m1_b_from_a,
    m1_entries,
    m1_matrix,
    parabolic_cylinder_U,
    pcf_on_segment,
    wronskian,
    wronskian_exact,
    wronskian_report,
)


def nu_of(r):
    return -math.log1p(-abs(r) ** 2) / (2.0 * math.pi)


class TestGamma:
    """Lanczos log-Gamma"""

    @pytest.mark.unit
    def test_arg_gamma_exact(self):
        assert arg_gamma(-1j) == pytest.approx(1.87243665, abs=1e-8)
        assert arg_gamma(1.0 - 1.0j) == pytest.approx(0.30164, abs=1e-5)

    @pytest.mark.unit
    @pytest.mark.parametrize("w", [0.5 + 0.3j, 3.0 - 2.0j, -0.3 + 1.0j, -2.5 + 0.5j, 0.1j, 7.5])
    def test_gamma_oracle(self, w):
        assert gamma(w) == pytest.approx(complex(special.gamma(w)), rel=1e-11)
        assert log_gamma(w).real == pytest.approx(special.loggamma(w).real, abs=1e-11)

    @pytest.mark.unit
    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_factorials(self, n):
        assert gamma(n + 1).real == pytest.approx(math.factorial(n), rel=1e-13)

    @pytest.mark.unit
    @pytest.mark.parametrize("pole", [0.0, -1.0, -3.0])
    def test_poles(self, pole):
        with pytest.raises(SpecialFunctionError):
            log_gamma(pole)


class TestParabolicCylinder:
    """Recessive solution U(a, z)"""

    @pytest.mark.unit
    @pytest.mark.parametrize("z", [1.0, 2.0, -1.0, 0.5 + 0.5j, 3.0 - 1.0j])
    def test_minus_half_closed_form(self, z):
        expected = cmath.exp(-0.25 * z * z)
        u, du = parabolic_cylinder_U(-0.5, z, derivative=True)
        assert u == pytest.approx(expected, rel=1e-8)
        assert du == pytest.approx(-0.5 * z * expected, rel=1e-8)

    @pytest.mark.unit
    @pytest.mark.parametrize("z", [0.5, 2.0, 4.0])
    def test_hermite_closed_form(self, z):
        # U(-5/2, z) = D_2(z) = (z^2 - 1) exp(-z^2/4)
        assert parabolic_cylinder_U(-2.5, z) == pytest.approx((z * z - 1.0) * math.exp(-0.25 * z * z), rel=1e-8, abs=1e-12)

    @pytest.mark.unit
    @pytest.mark.parametrize("a,x", [(0.5, 1.5), (1.0, 0.7), (-1.2, 2.5)])
    def test_real_parameter_oracle(self, a, x):
        d, dp = special.pbdv(-a - 0.5, x)
        u, du = parabolic_cylinder_U(a, x, derivative=True)
        assert u.real == pytest.approx(d, rel=1e-8)
        assert du.real == pytest.approx(dp, rel=1e-7)
        assert abs(u.imag) <= 1e-10 * abs(d)

    @pytest.mark.unit
    def test_segment_matches_pointwise(self):
        points, u, du = pcf_on_segment(-0.5, 1.0, 2.0, n=11)
        assert points.size == 11
        assert np.allclose(u, np.exp(-0.25 * points**2), rtol=1e-8)
        assert np.allclose(du, -0.5 * points * np.exp(-0.25 * points**2), rtol=1e-7)

    @pytest.mark.unit
    @pytest.mark.parametrize("a,z", [(0.0, 40.0), (complex(0.0, 20.0), 1.0)])
    def test_outside_envelope(self, a, z):
        with pytest.raises(SpecialFunctionError):
            parabolic_cylinder_U(a, z)


class TestWronskian:
    """W{U(a, z), U(a, -z)} = sqrt(2 pi) / Gamma(1/2 + a)"""

    @pytest.mark.unit
    @pytest.mark.parametrize("nu_value", [0.1, 0.5, 1.0])
    def test_against_closed_form(self, nu_value):
        report = wronskian_report(cylinder_parameter(nu_value))
        assert report["relative_error"] <= 1e-6
        assert report["spread"] <= 1e-6

    @pytest.mark.unit
    def test_real_parameter(self):
        value = wronskian(0.3)
        assert value == pytest.approx(wronskian_exact(0.3), rel=1e-6)

    @pytest.mark.unit
    @pytest.mark.parametrize("a", [-0.5, -1.5])
    def test_vanishing_wronskian(self, a):
        with pytest.raises(SpecialFunctionError, match="pole"):
            wronskian(a)


class TestBetaConstants:
    """Model-problem constants on both branches"""

    R = 0.3j

    @pytest.mark.unit
    def test_cylinder_parameter(self):
        assert cylinder_parameter(0.25) == complex(-0.5, -0.25)

    @pytest.mark.unit
    def test_exp_weighted_branch_modulus(self):
        nu_value = nu_of(self.R)
        c = beta_constants(nu_value, self.R, "exp-weighted")
        assert abs(c.beta12) ** 2 == pytest.approx(nu_value * math.exp(2.0 * math.pi * nu_value), rel=1e-12)
        assert c.beta12 * c.beta21 == pytest.approx(-nu_value, abs=1e-14)

    @pytest.mark.unit
    def test_normalized_branch_modulus(self):
        nu_value = nu_of(self.R)
        c = beta_constants(nu_value, self.R, "modulus-normalized")
        assert abs(c.beta12) ** 2 == pytest.approx(nu_value, rel=1e-12)
        assert c.branch == "modulus-normalized"

    @pytest.mark.unit
    def test_branches_share_phase(self):
        nu_value = nu_of(self.R)
        weighted = beta_constants(nu_value, self.R, "exp-weighted")
        normalized = beta_constants(nu_value, self.R, "modulus-normalized")
        assert weighted.beta12 / normalized.beta12 == pytest.approx(math.exp(math.pi * nu_value), rel=1e-12)

    @pytest.mark.unit
    def test_validation(self):
        nu_value = nu_of(self.R)
        with pytest.raises(ValidationError):
            beta_constants(nu_value, self.R, "other")
        with pytest.raises(ValidationError):
            beta_constants(0.0, 0.0)
        with pytest.raises(ValidationError):
            beta_constants(nu_value + 0.01, self.R)
        with pytest.raises(ValidationError):
            beta_constants(1.0, 1.0)

    @pytest.mark.unit
    def test_residue_matrices(self):
        c = beta_constants(nu_of(self.R), self.R)
        m_a = m1_matrix(c)
        m12, m21 = m1_entries(c)
        assert m_a[0, 0] == 0 and m_a[1, 1] == 0
        assert m_a[0, 1] == m12 == -1j * c.beta12
        assert m21 == 1j * c.beta21
        m_b = m1_b_from_a(m_a)
        assert m_b[0, 1] == pytest.approx(m12.conjugate())
        assert m_b[1, 0] == pytest.approx(m21.conjugate())
