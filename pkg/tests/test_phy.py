import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bcnsim.channel import ChannelState
from bcnsim.linalg import inv_norm_cdf
from bcnsim.phy import (
    BeamformingDecision,
    FblParams,
    LinkBudget,
    fbl_rate,
    rate_all,
    received_energy_all,
    shannon_rate,
    sinr,
    sinr_all,
)


def _lb(**kw):
    defaults = dict(noise_power=1e-14, bandwidth=5000.0, slot_seconds=1.0, alpha_max=0.8)
    defaults.update(kw)
    return LinkBudget(**defaults)


def sinr_loop_oracle(h, f, G, alpha, noise):
    """Scalar-loop re-derivation of the cascade SINR, kept deliberately
    naive: amplitude of alpha_nn * g_n^H h_nn * (h_nn^T f) term by term."""
    n = h.shape[0]
    out = np.zeros(n)
    for i in range(n):
        sig = 0.0
        interf = 0.0
        for j in range(n):
            amp = alpha[j] * np.vdot(G[i], h[j]) * (h[j] @ f)
            if i == j:
                sig = abs(amp) ** 2
            else:
                interf += abs(amp) ** 2
        out[i] = sig / (noise + interf)
    return out


def _random_setup(rng, n=3, m=4, scale=1e-4):
    h = scale * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))
    f = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    f *= np.sqrt(0.5) / np.linalg.norm(f)
    G = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    G /= np.linalg.norm(G, axis=1, keepdims=True)
    alpha = rng.uniform(0.1, 0.8, size=n)
    return ChannelState(h=h), BeamformingDecision(f=f, G=G, alpha=alpha)


class TestSinr:
    def test_matches_scalar_loop_oracle(self):
        rng = np.random.default_rng(0)
        lb = _lb()
        for _ in range(200):
            n = int(rng.integers(1, 6))
            m = int(rng.integers(1, 6))
            ch, dec = _random_setup(rng, n, m)
            got = sinr_all(ch, dec, lb)
            want = sinr_loop_oracle(ch.h, dec.f, dec.G, dec.alpha, lb.noise_power)
            np.testing.assert_allclose(got, want, rtol=1e-10)

    def test_single_node_closed_form(self):
        # one node, g matched so g^H h = ||h||: S = alpha^2 |h^T f|^2 ||h||^2 / noise
        rng = np.random.default_rng(1)
        lb = _lb()
        h = 1e-4 * (rng.standard_normal((1, 3)) + 1j * rng.standard_normal((1, 3)))
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        g = h[0] / np.linalg.norm(h[0])
        dec = BeamformingDecision(f=f, G=g[None, :], alpha=np.array([0.8]))
        expected = 0.64 * abs(h[0] @ f) ** 2 * np.linalg.norm(h[0]) ** 2 / lb.noise_power
        assert sinr(0, ChannelState(h=h), dec, lb) == pytest.approx(expected, rel=1e-12)

    def test_transpose_not_conjugate_on_forward_channel(self):
        # the forward factor is h^T f; using h^H f instead must change the value
        lb = _lb()
        h = np.array([[1.0 + 1.0j, 0.5 - 0.2j]]) * 1e-4
        f = np.array([0.3 + 0.1j, -0.2 + 0.4j])
        g = h[0].conj() / np.linalg.norm(h[0])
        dec = BeamformingDecision(f=f, G=g[None, :], alpha=np.array([0.5]))
        got = sinr(0, ChannelState(h=h), dec, lb)
        want = 0.25 * abs(np.vdot(g, h[0])) ** 2 * abs(h[0] @ f) ** 2 / lb.noise_power
        wrong = 0.25 * abs(np.vdot(g, h[0])) ** 2 * abs(h[0].conj() @ f) ** 2 / lb.noise_power
        assert got == pytest.approx(want, rel=1e-12)
        assert abs(got - wrong) > 1e-3 * got

    def test_interference_reduces_sinr(self):
        rng = np.random.default_rng(2)
        lb = _lb()
        ch, dec = _random_setup(rng, n=4)
        full = sinr_all(ch, dec, lb)
        for i in range(4):
            alone = dec.alpha.copy()
            alone[np.arange(4) != i] = 0.0
            solo = BeamformingDecision(f=dec.f, G=dec.G, alpha=alone)
            assert sinr(i, ch, solo, lb) >= full[i]

    def test_scales_with_alpha_squared(self):
        rng = np.random.default_rng(3)
        lb = _lb()
        ch, dec = _random_setup(rng, n=1)
        s1 = sinr_all(ch, dec, lb)[0]
        half = BeamformingDecision(f=dec.f, G=dec.G, alpha=dec.alpha / 2)
        assert sinr_all(ch, half, lb)[0] == pytest.approx(s1 / 4, rel=1e-12)


class TestValidate:
    def test_accepts_feasible(self):
        rng = np.random.default_rng(0)
        _, dec = _random_setup(rng)
        dec.validate(power_budget=0.5, alpha_max=0.8)

    def test_rejects_power(self):
        rng = np.random.default_rng(0)
        _, dec = _random_setup(rng)
        with pytest.raises(ValueError, match="power"):
            dec.validate(power_budget=0.1, alpha_max=0.8)

    def test_rejects_alpha(self):
        rng = np.random.default_rng(0)
        _, dec = _random_setup(rng)
        dec.alpha = np.full(3, 0.9)
        with pytest.raises(ValueError, match="eflection"):
            dec.validate(power_budget=0.5, alpha_max=0.8)

    def test_rejects_unnormalized_g(self):
        rng = np.random.default_rng(0)
        _, dec = _random_setup(rng)
        dec.G = 2.0 * dec.G
        with pytest.raises(ValueError, match="unit norm"):
            dec.validate(power_budget=0.5, alpha_max=0.8)


class TestRates:
    def test_shannon_reference(self):
        lb = _lb(bandwidth=5000.0, slot_seconds=1.0)
        assert shannon_rate(1.0, lb) == pytest.approx(5000.0)
        assert shannon_rate(3.0, lb) == pytest.approx(10000.0)
        assert shannon_rate(0.0, lb) == 0.0

    def test_shannon_scales_with_bandwidth_and_slot(self):
        assert shannon_rate(1.0, _lb(bandwidth=1e4)) == pytest.approx(1e4)
        assert shannon_rate(1.0, _lb(slot_seconds=2.0)) == pytest.approx(1e4)

    def test_fbl_reference_value(self):
        # independent arithmetic: W tau [log2(1+s) - sqrt((1-(1+s)^-2)/L) Qinv(psi) log2 e]
        lb = _lb()
        s, ell, psi = 10.0, 100, 1e-3
        disp = np.sqrt((1 - (1 + s) ** -2) / ell)
        want = 5000.0 * (np.log2(11.0) - disp * inv_norm_cdf(1 - psi) * np.log2(np.e))
        got = float(fbl_rate(s, FblParams(blocklength=ell, error_prob=psi), lb))
        assert got == pytest.approx(want, rel=1e-12)

    def test_fbl_clamped_at_zero(self):
        lb = _lb()
        r = fbl_rate(1e-4, FblParams(blocklength=10, error_prob=1e-6), lb)
        assert float(r) == 0.0

    def test_fbl_none_is_exactly_shannon(self):
        lb = _lb()
        s = np.logspace(-3, 3, 50)
        np.testing.assert_array_equal(
            fbl_rate(s, FblParams(blocklength=None), lb), shannon_rate(s, lb)
        )

    @settings(deadline=None, max_examples=50)
    @given(
        st.floats(min_value=1e-6, max_value=1e4),
        st.integers(min_value=1, max_value=10**6),
        st.floats(min_value=1e-8, max_value=0.4),
    )
    def test_fbl_never_exceeds_shannon(self, s, ell, psi):
        lb = _lb()
        r = float(fbl_rate(s, FblParams(blocklength=ell, error_prob=psi), lb))
        assert 0.0 <= r <= float(shannon_rate(s, lb)) + 1e-9

    def test_fbl_monotone_in_blocklength(self):
        lb = _lb()
        s = np.logspace(-2, 2, 30)
        prev = fbl_rate(s, FblParams(blocklength=10, error_prob=1e-3), lb)
        for ell in (100, 1000, 10_000, 100_000):
            cur = fbl_rate(s, FblParams(blocklength=ell, error_prob=1e-3), lb)
            assert np.all(cur >= prev - 1e-9)
            prev = cur
        assert np.all(shannon_rate(s, lb) >= prev - 1e-9)

    def test_fbl_monotone_in_error_prob(self):
        lb = _lb()
        s = np.logspace(-2, 2, 30)
        prev = None
        for psi in (1e-6, 1e-4, 1e-2, 0.3):
            cur = fbl_rate(s, FblParams(blocklength=200, error_prob=psi), lb)
            if prev is not None:
                assert np.all(cur >= prev - 1e-9)
            prev = cur

    def test_rate_all_dispatch(self):
        rng = np.random.default_rng(5)
        lb = _lb()
        ch, dec = _random_setup(rng)
        s = sinr_all(ch, dec, lb)
        np.testing.assert_array_equal(rate_all(ch, dec, lb), shannon_rate(s, lb))
        np.testing.assert_array_equal(
            rate_all(ch, dec, lb, FblParams(blocklength=None)), shannon_rate(s, lb)
        )
        fbl = FblParams(blocklength=500, error_prob=1e-3)
        np.testing.assert_array_equal(
            rate_all(ch, dec, lb, fbl), fbl_rate(s, fbl, lb)
        )


class TestReceivedEnergy:
    def test_matches_direct_formula(self):
        rng = np.random.default_rng(6)
        ch, dec = _random_setup(rng)
        want = [abs(ch.h[i] @ dec.f) ** 2 for i in range(3)]
        np.testing.assert_allclose(received_energy_all(ch, dec), want, rtol=1e-12)

    def test_scales_with_power(self):
        rng = np.random.default_rng(7)
        ch, dec = _random_setup(rng)
        e1 = received_energy_all(ch, dec)
        dec2 = BeamformingDecision(f=2.0 * dec.f, G=dec.G, alpha=dec.alpha)
        np.testing.assert_allclose(received_energy_all(ch, dec2), 4.0 * e1, rtol=1e-12)


class TestParamValidation:
    def test_link_budget(self):
        with pytest.raises(ValueError):
            _lb(noise_power=0.0)
        with pytest.raises(ValueError):
            _lb(bandwidth=-1.0)
        with pytest.raises(ValueError):
            _lb(alpha_max=1.5)

    def test_fbl_params(self):
        with pytest.raises(ValueError):
            FblParams(blocklength=0)
        with pytest.raises(ValueError):
            FblParams(error_prob=0.0)
        with pytest.raises(ValueError):
            FblParams(error_prob=1.0)
        FblParams(blocklength=None)  # unbounded is fine
