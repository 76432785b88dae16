import numpy as np
import pytest
from hypothesis import given, strategies as st

from bcnsim.linalg import hermitian_solve, inv_norm_cdf, is_hermitian, outer_hermitian


def _mpmath_inv_cdf(p, tol=1e-13):
    """Bisection on the mpmath normal CDF; independent of scipy."""
    import mpmath

    lo, hi = mpmath.mpf(-10), mpmath.mpf(10)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mpmath.ncdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


class TestHermitianSolve:
    def test_identity(self):
        x = hermitian_solve(np.eye(2), np.array([1.0, 1j]))
        np.testing.assert_allclose(x, [1.0, 1j])

    def test_scaled_identity(self):
        x = hermitian_solve(2.0 * np.eye(2), np.array([2.0, 0.0]))
        np.testing.assert_allclose(x, [1.0, 0.0])

    def test_rank_one_update(self):
        # (I + vv^H)^-1 b with v = b = e1: closed-form inverse by hand
        v = np.array([1.0, 0.0])
        a = np.eye(2) + outer_hermitian(v)
        x = hermitian_solve(a, np.array([1.0, 0.0]))
        np.testing.assert_allclose(x, [0.5, 0.0])

    @pytest.mark.parametrize("m", [2, 5, 11, 20])
    def test_random_pd_roundtrip(self, m):
        rng = np.random.default_rng(m)
        for _ in range(20):
            b_mat = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            a = b_mat @ b_mat.conj().T + 0.1 * np.eye(m)
            b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            x = hermitian_solve(a, b)
            assert np.linalg.norm(a @ x - b) <= 1e-9 * np.linalg.norm(b)

    def test_non_pd_rejected(self):
        with pytest.raises(ValueError, match="positive definite"):
            hermitian_solve(-np.eye(3), np.ones(3))


class TestOuterHermitian:
    @pytest.mark.parametrize(
        "v,expected",
        [
            ([1.0, 0.0], [[1.0, 0.0], [0.0, 0.0]]),
            ([0.0, 1j], [[0.0, 0.0], [0.0, 1.0]]),
            ([1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]]),
        ],
    )
    def test_examples(self, v, expected):
        np.testing.assert_allclose(outer_hermitian(np.array(v)), expected)

    def test_hermitian_exactly(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        m = outer_hermitian(v)
        assert np.array_equal(m, m.conj().T)
        assert is_hermitian(m)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            outer_hermitian(np.array([]))


class TestInvNormCdf:
    def test_median(self):
        assert inv_norm_cdf(0.5) == 0.0

    @pytest.mark.parametrize("p", [1 - 1e-3, 0.975, 0.2, 1e-6])
    def test_against_bisection_oracle(self, p):
        assert inv_norm_cdf(p) == pytest.approx(_mpmath_inv_cdf(p), abs=1e-9)

    @given(st.floats(min_value=1e-7, max_value=0.5))
    def test_symmetry(self, p):
        assert inv_norm_cdf(1 - p) == pytest.approx(-inv_norm_cdf(p), rel=1e-9, abs=1e-12)

    def test_monotone(self):
        ps = np.linspace(0.01, 0.99, 50)
        vals = [inv_norm_cdf(p) for p in ps]
        assert np.all(np.diff(vals) > 0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            inv_norm_cdf(p)
