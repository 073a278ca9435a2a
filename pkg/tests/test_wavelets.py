"""Filter-bank identities, single-index numbering, and transform exactness."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besov_invert.errors import ConfigError
from besov_invert.wavelets import (CoeffField, basis_function, build_basis,
                                   daubechies_lowpass, decode_index, dwt,
                                   encode_index, grid_inner, idwt,
                                   quadrature_mirror, truncate)

SQRT2 = np.sqrt(2.0)


class TestFilters:
    def test_haar_is_forced(self):
        taps = daubechies_lowpass(1)
        np.testing.assert_allclose(taps, [1 / SQRT2, 1 / SQRT2], atol=1e-15)

    @pytest.mark.parametrize("family", [1, 2, 3, 4, 6, 8])
    def test_quadrature_mirror_identities(self, family):
        h = np.array(daubechies_lowpass(family))
        g = quadrature_mirror(h)
        assert abs(h.sum() - SQRT2) < 1e-12
        assert abs(g.sum()) < 1e-12
        # orthonormality over all even shifts
        for m in range(len(h) // 2):
            target = 1.0 if m == 0 else 0.0
            assert abs(np.dot(h[: len(h) - 2 * m], h[2 * m:]) - target) < 1e-12

    @pytest.mark.parametrize("family", [2, 3, 4, 6, 8])
    def test_vanishing_moments(self, family):
        g = quadrature_mirror(np.array(daubechies_lowpass(family)))
        t = np.arange(len(g), dtype=float)
        for moment in range(family):
            assert abs(np.sum(g * t ** moment)) < 1e-8

    def test_known_db2_values(self):
        # classical db2 taps, published to full double precision
        expected = [0.48296291314453416, 0.8365163037378079,
                    0.2241438680420134, -0.12940952255126037]
        np.testing.assert_allclose(daubechies_lowpass(2), expected, atol=1e-14)

    def test_grid_too_small_names_both_sizes(self):
        with pytest.raises(ConfigError, match="2"):
            build_basis(1, 2, 1)  # filter length 4 > 2 grid points
        try:
            build_basis(1, 2, 1)
        except ConfigError as exc:
            assert "4" in str(exc) and "2" in str(exc)


class TestNumbering:
    def test_scaling_function_is_first(self):
        assert decode_index(1, 2) == (0, "scaling", (0, 0))
        assert encode_index(0, "scaling", (0, 0), 2) == 1

    def test_scale_zero_range_d2(self):
        ells = [encode_index(0, nu, (0, 0), 2)
                for nu in [(0, 1), (1, 0), (1, 1)]]
        assert sorted(ells) == [2, 3, 4]

    def test_scale_one_range_d2(self):
        ells = [encode_index(1, nu, (k1, k2), 2)
                for nu in [(0, 1), (1, 0), (1, 1)]
                for k1 in range(2) for k2 in range(2)]
        assert sorted(ells) == list(range(5, 17))

    @pytest.mark.parametrize("d,J", [(1, 6), (2, 3)])
    def test_encode_decode_bijection(self, d, J):
        seen = set()
        for ell in range(1, 2 ** (J * d) + 1):
            j, nu, k = decode_index(ell, d)
            assert encode_index(j, nu, k, d) == ell
            seen.add((j, nu, k))
        assert len(seen) == 2 ** (J * d)

    @pytest.mark.parametrize("d", [1, 2])
    def test_scale_partition(self, d):
        # {1}, {2..2^d}, {2^{jd}+1..2^{(j+1)d}} partition {1..2^{Jd}}
        J = 4
        counts = {}
        for ell in range(2, 2 ** (J * d) + 1):
            j, _, _ = decode_index(ell, d)
            counts[j] = counts.get(j, 0) + 1
        for j in range(J):
            assert counts[j] == 2 ** ((j + 1) * d) - 2 ** (j * d)

    def test_out_of_range_raises(self):
        with pytest.raises(IndexError):
            decode_index(0, 1)
        with pytest.raises(IndexError):
            encode_index(1, (1,), (2,), 1)  # k=2 out of range at scale 1
        with pytest.raises(IndexError):
            encode_index(0, (0, 0), (0, 0), 2)  # zero orientation


class TestTransforms:
    def test_haar_scaling_function_is_constant(self):
        basis = build_basis(1, 1, 2)
        e1 = np.zeros(4)
        e1[0] = 1.0
        np.testing.assert_allclose(idwt(e1, basis), np.ones(4), atol=1e-14)

    @pytest.mark.parametrize("d", [1, 2])
    @pytest.mark.parametrize("family", [2, 3, 4, 6, 8])
    def test_perfect_reconstruction(self, d, family):
        J = 6 if d == 1 else (3 if 2 * family <= 8 else 4)
        basis = build_basis(d, family, J)
        rng = np.random.default_rng(family * 10 + d)
        for _ in range(10):
            x = rng.standard_normal((2 ** J,) * d)
            back = idwt(dwt(x, basis), basis)
            assert np.abs(back - x).max() <= 1e-12 * np.abs(x).max()

    @pytest.mark.parametrize("d", [1, 2])
    def test_isometry_quadrature_to_euclidean(self, d):
        J = 5 if d == 1 else 3
        basis = build_basis(d, 4, J)
        rng = np.random.default_rng(0)
        x = rng.standard_normal((2 ** J,) * d)
        coeffs = dwt(x, basis)
        quad_norm_sq = np.sum(x * x) / x.size
        assert abs(np.sum(coeffs.coeffs ** 2) - quad_norm_sq) < 1e-12 * quad_norm_sq

    def test_coefficients_are_l2_pairings(self):
        basis = build_basis(1, 2, 4)
        rng = np.random.default_rng(1)
        x = rng.standard_normal(16)
        coeffs = dwt(x, basis)
        for ell in (1, 3, 7, 16):
            psi = basis_function(ell, basis)
            assert abs(coeffs.coeffs[ell - 1] - grid_inner(x, psi)) < 1e-12

    @pytest.mark.parametrize("d,J,family", [(1, 6, 4), (2, 3, 2)])
    def test_gram_identity_via_quadrature_oracle(self, d, J, family):
        basis = build_basis(d, family, J)
        count = min(64, basis.size)
        vectors = [basis_function(ell, basis).ravel() for ell in range(1, count + 1)]
        gram = np.array([[np.dot(u, v) / u.size for v in vectors] for u in vectors])
        assert np.abs(gram - np.eye(count)).max() < 1e-10

    def test_wrong_shape_raises(self):
        basis = build_basis(1, 2, 4)
        with pytest.raises(ValueError):
            dwt(np.zeros(15), basis)
        with pytest.raises(ValueError):
            idwt(np.zeros(15), basis)


class TestCoeffField:
    def test_length_validation(self):
        with pytest.raises(ValueError):
            CoeffField(d=1, J=3, coeffs=np.zeros(7))

    def test_finiteness_validation(self):
        bad = np.zeros(8)
        bad[3] = np.nan
        with pytest.raises(ValueError):
            CoeffField(d=1, J=3, coeffs=bad)


class TestTruncate:
    def setup_method(self):
        rng = np.random.default_rng(7)
        self.field = CoeffField(d=1, J=4, coeffs=rng.standard_normal(16))

    def test_full_projection_is_identity(self):
        out = truncate(self.field, 16)
        np.testing.assert_array_equal(out.coeffs, self.field.coeffs)

    def test_idempotent(self):
        once = truncate(self.field, 5)
        twice = truncate(once, 5)
        np.testing.assert_array_equal(once.coeffs, twice.coeffs)

    def test_zero_projection(self):
        assert np.all(truncate(self.field, 0).coeffs == 0)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            truncate(self.field, -1)
        with pytest.raises(IndexError):
            truncate(self.field, 17)

    @given(st.integers(min_value=0, max_value=16),
           st.floats(-10, 10), st.floats(-10, 10),
           st.integers(min_value=0, max_value=2 ** 32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_linearity(self, n, a, b, seed):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(16)
        y = rng.standard_normal(16)
        lhs = truncate(CoeffField(1, 4, a * x + b * y), n).coeffs
        rhs = a * truncate(CoeffField(1, 4, x), n).coeffs \
            + b * truncate(CoeffField(1, 4, y), n).coeffs
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)
