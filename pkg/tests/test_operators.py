import cmath
import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s2workbench.errors import BudgetTooSmall, NonConverged
from s2workbench.operators import (
    MOP_UPPER_CONSTANT,
    WCO_UPPER_CONSTANT,
    compactness_diagnostic,
    disk_grid,
    isometry_defect,
    mop_norm_bounds,
    multiplier_matrix,
    point_spectrum,
    section_norm,
    spectrum_membership,
    spectrum_sample,
    wco_norm_bounds,
    weighted_composition_matrix,
)
from s2workbench.series import (
    CoefficientSeries,
    DiskAutomorphism,
    compose_with_automorphism,
    evaluate,
    multiply,
)
from s2workbench.spaces import S2, norm

complexes = st.builds(
    complex, st.floats(-1, 1, allow_subnormal=False), st.floats(-1, 1, allow_subnormal=False)
)
polys = st.lists(complexes, min_size=1, max_size=8).map(CoefficientSeries)
automorphisms = st.builds(
    lambda r, t, th: DiskAutomorphism(r * cmath.exp(1j * t), th),
    st.floats(0, 0.9),
    st.floats(0, 2 * math.pi),
    st.floats(0, 2 * math.pi),
)

IDENTITY_MAP = DiskAutomorphism(0, math.pi)
MINUS_Z = DiskAutomorphism(0, 0)


def basis_vector(n):
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0 if n == 0 else 1.0 / n
    return CoefficientSeries(c)


def to_basis(series, N):
    c = series.padded(N).coeffs.copy()
    c[1:] *= np.arange(1, N + 1)
    return c


def matrix_oracle(apply, N):
    """Column n = basis coefficients of apply(e_n), built one vector at a time."""
    return np.column_stack([to_basis(apply(basis_vector(n)), N) for n in range(N + 1)])


class TestMultiplierMatrix:
    def test_identity(self):
        np.testing.assert_array_equal(multiplier_matrix([1], 2).entries, np.eye(3))

    def test_shift(self):
        A = multiplier_matrix([0, 1], 2).entries
        expected = np.zeros((3, 3))
        expected[1, 0] = 1
        expected[2, 1] = 2
        np.testing.assert_array_equal(A, expected)
        oracle = matrix_oracle(lambda e: multiply([0, 1], e, 2), 2)
        np.testing.assert_allclose(A, oracle)

    def test_constant(self):
        np.testing.assert_allclose(multiplier_matrix([2 - 1j], 5).entries, (2 - 1j) * np.eye(6))

    def test_section_size_validated(self):
        with pytest.raises(BudgetTooSmall):
            multiplier_matrix([1], 0)

    @given(polys, st.integers(1, 12))
    def test_matches_oracle_and_shape(self, psi, N):
        A = multiplier_matrix(psi, N).entries
        oracle = matrix_oracle(lambda e: multiply(psi, e, N), N)
        np.testing.assert_allclose(A, oracle, atol=1e-13)
        assert np.all(np.triu(A, 1) == 0)
        np.testing.assert_array_equal(np.diag(A), np.full(N + 1, psi[0]))

    @given(polys, st.integers(1, 10))
    def test_column_norms(self, psi, N):
        A = multiplier_matrix(psi, N).entries
        for m in range(N + 1):
            full = multiply(psi, basis_vector(m), psi.budget + m)
            assert np.linalg.norm(A[:, m]) <= norm(S2, full) + 1e-12

    def test_json(self):
        d = multiplier_matrix([0, 1j], 1).to_dict()
        assert d == {"n": 1, "entries": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]]}


class TestWeightedCompositionMatrix:
    def test_minus_z(self):
        A = weighted_composition_matrix([1], MINUS_Z, 2).entries
        np.testing.assert_allclose(A, np.diag([1, -1, 1]), atol=1e-15)

    def test_identity(self):
        A = weighted_composition_matrix([1], IDENTITY_MAP, 6).entries
        np.testing.assert_allclose(A, np.eye(7), atol=1e-14)

    def test_reduces_to_multiplier(self):
        A = weighted_composition_matrix([0, 1], IDENTITY_MAP, 2).entries
        np.testing.assert_allclose(A, multiplier_matrix([0, 1], 2).entries, atol=1e-14)

    @settings(max_examples=40)
    @given(polys, automorphisms, st.integers(1, 10))
    def test_matches_compose_then_multiply(self, psi, phi, N):
        A = weighted_composition_matrix(psi, phi, N).entries
        oracle = matrix_oracle(lambda e: multiply(psi, compose_with_automorphism(e, phi, N), N), N)
        np.testing.assert_allclose(A, oracle, atol=1e-11)


class TestSectionNorm:
    def test_examples(self):
        assert section_norm(np.eye(3)) == pytest.approx(1, abs=1e-15)
        assert section_norm(np.diag([1, 2, 0])) == pytest.approx(2, abs=1e-12)
        assert section_norm(np.zeros((3, 3))) == 0

    @pytest.mark.parametrize("N", [2, 3, 10, 60, 120])
    def test_shift_weights(self, N):
        # weighted shift: the singular values are the weights 1 and (n+1)/n
        A = multiplier_matrix([0, 1], N)
        weights = [1.0] + [(n + 1) / n for n in range(1, N)]
        assert max(weights) == 2
        assert abs(section_norm(A) - 2) <= 1e-9

    @settings(max_examples=50)
    @given(polys, st.integers(1, 30))
    def test_against_svd(self, psi, N):
        A = multiplier_matrix(psi, N).entries
        sv = np.linalg.norm(A, 2)
        est = section_norm(A)
        assert est <= sv * (1 + 1e-12) + 1e-15
        assert est >= sv * (1 - 1e-6) - 1e-15

    def test_nonconverged_carries_estimate(self):
        # equal top singular values with a rotating component never settle from ones
        A = np.array([[0, 1], [1, 0]], dtype=complex) + np.diag([1e-9, 0])
        with pytest.raises(NonConverged) as exc:
            section_norm(np.diag([1.0, 0.999999]), tol=1e-300, max_iter=5)
        assert 0 < exc.value.estimate <= 1.0
        assert section_norm(A) == pytest.approx(1, abs=1e-6)

    @given(polys)
    def test_monotone_in_section(self, psi):
        vals = [section_norm(multiplier_matrix(psi, N)) for N in (2, 4, 8, 16)]
        for a, b in zip(vals, vals[1:]):
            assert b >= a - 1e-9 * max(1, a)


class TestNormBounds:
    def test_constant_one(self):
        est = mop_norm_bounds([1], 4)
        assert est.lower_bound == pytest.approx(1)
        assert est.paper_lower == pytest.approx(1)
        assert est.paper_upper == pytest.approx(MOP_UPPER_CONSTANT)
        # the quoted constant is sqrt(1 + 4 pi^2 / 3)
        assert MOP_UPPER_CONSTANT == pytest.approx(math.sqrt(1 + 4 * math.pi**2 / 3), abs=0)
        assert MOP_UPPER_CONSTANT == pytest.approx(3.7629, abs=1e-4)

    def test_shift(self):
        est = mop_norm_bounds([0, 1], 60)
        assert abs(est.lower_bound - 2) <= 1e-9
        assert est.paper_lower == pytest.approx(1)

    def test_scaled_constant(self):
        assert mop_norm_bounds([0.5], 3).lower_bound == pytest.approx(0.5)

    def test_wco_identity(self):
        est = wco_norm_bounds([1], IDENTITY_MAP, 8)
        assert est.lower_bound == pytest.approx(1)
        assert est.paper_upper == pytest.approx(WCO_UPPER_CONSTANT)
        assert WCO_UPPER_CONSTANT == pytest.approx(math.sqrt(1 + 8 * math.pi**2 / 3))

    def test_wco_minus_z(self):
        assert wco_norm_bounds([1], MINUS_Z, 8).lower_bound == pytest.approx(1)

    def test_wco_upper_formula(self):
        psi = CoefficientSeries([1, 0.5])
        est = wco_norm_bounds(psi, DiskAutomorphism(0.5), 8)
        assert est.paper_upper == pytest.approx(math.sqrt((1 + 8 * math.pi**2 / 3) * 3) * norm(S2, psi))

    @settings(max_examples=40)
    @given(polys, automorphisms)
    def test_sandwiches_hold(self, psi, phi):
        mop = mop_norm_bounds(psi, 24)
        assert mop.paper_lower <= mop.paper_upper
        wco = wco_norm_bounds(psi, phi, 24)
        assert wco.paper_lower - 1e-9 <= wco.lower_bound <= wco.paper_upper + 1e-9


class TestIsometry:
    def test_unimodular_constant(self):
        assert isometry_defect([1j]) == pytest.approx(0, abs=1e-15)

    def test_shift(self):
        assert isometry_defect([0, 1]) == pytest.approx(3)

    def test_constant_two(self):
        # ||2|| - 1 = 1 but ||2 z||^2 - 1 = 3, and the defect is the max
        assert isometry_defect([2]) == pytest.approx(3)


class TestCompactness:
    def test_zero(self):
        np.testing.assert_array_equal(compactness_diagnostic([0], 5), np.zeros(5))

    def test_shift(self):
        d = compactness_diagnostic([0, 1], 50)
        n = np.arange(1, 51)
        np.testing.assert_allclose(d, (n + 1) / n, rtol=0, atol=1e-12)
        assert d[:3] == pytest.approx([2, 1.5, 4 / 3])

    def test_one(self):
        np.testing.assert_allclose(compactness_diagnostic([1], 7), np.ones(7))


class TestPointSpectrum:
    def test_constant(self):
        assert point_spectrum([3 + 4j]) == {3 + 4j}

    def test_nonconstant(self):
        assert point_spectrum([0, 1]) == set()

    def test_below_tolerance(self):
        assert point_spectrum([1, 1e-15], 1e-8) == {1}


class TestSpectrum:
    def test_constant_sample(self):
        rep = spectrum_sample([2 + 1j], 4, 16)
        assert np.all(rep.image_samples == 2 + 1j)
        assert rep.distinct_values() == [2 + 1j]

    def test_identity_fills_grid(self):
        rep = spectrum_sample([0, 1], 4, 16)
        np.testing.assert_allclose(rep.image_samples, disk_grid(4, 16))
        assert np.max(np.abs(rep.image_samples)) == pytest.approx(1)

    def test_one_plus_z(self):
        rep = spectrum_sample([1, 1], 8, 64)
        assert np.all(np.abs(rep.image_samples - 1) <= 1 + 1e-12)

    def test_csv(self, tmp_path):
        path = tmp_path / "s.csv"
        rep = spectrum_sample([0, 1], 2, 8)
        rep.write_csv(path)
        rows = list(csv.reader(open(path)))
        assert rows[0] == ["re", "im"]
        assert len(rows) == 1 + rep.image_samples.size
        assert complex(float(rows[5][0]), float(rows[5][1])) == rep.image_samples[4]

    @pytest.mark.parametrize("lam", [0, 0.9, 0.99j])
    def test_inside(self, lam):
        assert spectrum_membership([0, 1], lam).verdict == "Inside"

    def test_outside_with_certificate(self):
        v = spectrum_membership([0, 1], 1.5)
        assert v.verdict == "Outside"
        # distance from 1.5 to the closed disk is 0.5
        assert v.certificate.c >= 0.5 - 1e-12
        assert v.certificate.resolvent_norm_bound <= 1 / 0.25 + 1 / 0.0625 + 1e-9
        assert v.certificate.residual < 1e-8
        # ||1/(z - 1.5)||^2 sits under the resolvent bound
        assert v.certificate.inverse_norm_squared <= v.certificate.resolvent_norm_bound

    def test_constant_symbol(self):
        assert spectrum_membership([2j], 2j).verdict == "Inside"

    def test_uncertain_when_budget_too_small(self):
        v = spectrum_membership([0, 1], 1.02, budget=20)
        assert v.verdict == "Uncertain"

    @settings(max_examples=15)
    @given(polys, st.floats(0, 2 * math.pi))
    def test_consistency(self, psi, t):
        far = (float(np.sum(np.abs(psi.coeffs))) + 0.5) * cmath.exp(1j * t)
        v = spectrum_membership(psi, far)
        # slow reciprocal decay may leave the budget short, but never Inside
        assert v.verdict in ("Outside", "Uncertain")
        if v.verdict == "Outside":
            finer = evaluate(psi, disk_grid(128, 1024))
            assert np.min(np.abs(finer - far)) >= v.certificate.c / 2
        img = spectrum_sample(psi, 8, 32).image_samples
        assert spectrum_membership(psi, img[len(img) // 3]).verdict == "Inside"
