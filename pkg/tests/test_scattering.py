"""
Tests for direct scattering
"""

import math

import numpy as np
import pytest

from mkdv_core.exceptions import ScatteringError, ValidationError
from mkdv_core.potentials import Potential, gaussian, zero
from mkdv_core.scattering import (
    ScatteringData,
    born_approximation,
    evolve_reflection,
    scatter,
    step_bound,
    symmetric_zgrid,
    transfer_matrix,
)


class TestClosedForms:
    """Potentials with known scattering data"""

    @pytest.mark.unit
    def test_zero_potential_exact(self):
        sd = scatter(zero(), symmetric_zgrid(3.0, 31))
        assert np.all(sd.a == 1.0)
        assert np.all(sd.b == 0.0)
        assert np.all(sd.r == 0.0)

    @pytest.mark.unit
    def test_box_at_origin_closed_form(self, unit_box):
        sd = scatter(unit_box, [0.0])
        assert sd.r[0] == pytest.approx(math.tanh(1.0), abs=1e-8)
        assert sd.b[0] == pytest.approx(-math.sinh(1.0), abs=1e-8)
        assert sd.a[0] == pytest.approx(math.cosh(1.0), abs=1e-8)

    @pytest.mark.unit
    @pytest.mark.parametrize("eps", [0.05, 0.3, 0.8])
    def test_gaussian_at_origin_exact(self, eps):
        sd = scatter(gaussian(eps, 1.0), [0.0])
        assert sd.b[0] == pytest.approx(-math.sinh(eps * math.sqrt(math.pi)), abs=1e-8)

    @pytest.mark.unit
    def test_born_at_origin(self, small_gaussian):
        assert born_approximation(small_gaussian, 0.0) == pytest.approx(-0.3 * math.sqrt(math.pi), abs=1e-12)

    @pytest.mark.unit
    def test_born_matches_small_amplitude(self):
        q = gaussian(1e-3, 1.0)
        z = np.linspace(-1.5, 1.5, 7)
        sd = scatter(q, z)
        assert np.allclose(sd.b, born_approximation(q, z), atol=1e-8)

    @pytest.mark.unit
    def test_born_of_zero(self):
        assert np.all(born_approximation(zero(), np.array([0.0, 1.0])) == 0.0)


class TestInvariants:
    """Unitarity, symmetry and the transfer matrix"""

    @pytest.mark.unit
    def test_gaussian_defects(self, gaussian_scattering):
        assert gaussian_scattering.unitarity_defect() <= 1e-8
        assert gaussian_scattering.symmetry_defect() <= 1e-8
        assert 0.0 < gaussian_scattering.reflection_sup < 1.0

    @pytest.mark.unit
    def test_transfer_matrix_unimodular(self, small_gaussian):
        phi = transfer_matrix(small_gaussian, 0.8)
        assert np.linalg.det(phi) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.unit
    def test_workers_agree_with_serial(self, small_gaussian):
        z = symmetric_zgrid(2.0, 21)
        serial = scatter(small_gaussian, z)
        pooled = scatter(small_gaussian, z, workers=3)
        assert np.allclose(pooled.r, serial.r, atol=1e-7)
        assert pooled.symmetry_defect() <= 1e-8

    @pytest.mark.unit
    def test_step_bound(self):
        assert step_bound(0.0) == 0.02
        assert step_bound(19.0) == pytest.approx(0.01)


class TestErrors:
    """Failure modes of the solver"""

    @pytest.mark.unit
    def test_step_above_bound(self, small_gaussian):
        with pytest.raises(ScatteringError, match="admissible"):
            transfer_matrix(small_gaussian, 1.0, step=0.5)

    @pytest.mark.unit
    def test_undecayed_potential(self):
        flat = Potential("flat", lambda x: np.ones_like(x), -1.0, 1.0)
        with pytest.raises(ScatteringError, match="decayed"):
            scatter(flat, [0.0])

    @pytest.mark.unit
    @pytest.mark.parametrize("zgrid", [[], [np.nan], [[0.0, 1.0]]])
    def test_bad_grid(self, small_gaussian, zgrid):
        with pytest.raises(ValidationError):
            scatter(small_gaussian, zgrid)

    @pytest.mark.unit
    def test_symmetry_needs_symmetric_grid(self):
        sd = scatter(zero(), [0.0, 1.0, 2.0])
        with pytest.raises(ValidationError):
            sd.symmetry_defect()

    @pytest.mark.unit
    def test_mismatched_arrays(self):
        with pytest.raises(ValidationError):
            ScatteringData(zgrid=np.zeros(3), a=np.ones(3), b=np.zeros(2), r=np.zeros(3))


class TestGrid:
    @pytest.mark.unit
    def test_symmetric_zgrid(self):
        z = symmetric_zgrid(2.0, 41)
        assert z.size == 41
        assert z[20] == 0.0
        assert np.array_equal(z, -z[::-1])

    @pytest.mark.unit
    @pytest.mark.parametrize("zmax,nz", [(2.0, 40), (2.0, 1), (0.0, 11)])
    def test_symmetric_zgrid_validation(self, zmax, nz):
        with pytest.raises(ValidationError):
            symmetric_zgrid(zmax, nz)


class TestTimeEvolution:
    """Reflection coefficient evolution laws"""

    @pytest.mark.unit
    def test_modulus_and_unitarity_preserved(self, gaussian_scattering):
        later = evolve_reflection(gaussian_scattering, 3.0, sign=1, rate=32.0)
        assert later.t == 3.0
        assert np.allclose(np.abs(later.r), np.abs(gaussian_scattering.r), atol=1e-15)
        assert np.array_equal(later.a, gaussian_scattering.a)
        assert later.unitarity_defect() <= 1e-8
        assert later.symmetry_defect() <= 1e-8

    @pytest.mark.unit
    def test_phase_law(self, gaussian_scattering):
        t = 0.5
        later = evolve_reflection(gaussian_scattering, t)
        z = gaussian_scattering.zgrid
        expected = gaussian_scattering.r * np.exp(-16j * t * z**5)
        assert np.allclose(later.r, expected, atol=1e-15)

    @pytest.mark.unit
    def test_bad_sign(self, gaussian_scattering):
        with pytest.raises(ValidationError):
            evolve_reflection(gaussian_scattering, 1.0, sign=0)
