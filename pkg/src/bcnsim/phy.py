"""SINR, rate, and received-energy computations for one slot.

The backscatter cascade is reciprocal, so each term carries
``g^H h h^T f`` with a transpose (not conjugate) on the second channel
factor. Backscattered noise and carrier leakage are negligible after the
round-trip attenuation and are left out of the SINR.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelState
from .linalg import inv_norm_cdf

__all__ = [
    "LinkBudget",
    "BeamformingDecision",
    "FblParams",
    "sinr",
    "sinr_all",
    "shannon_rate",
    "fbl_rate",
    "rate_all",
    "received_energy",
    "received_energy_all",
]

LOG2E = float(np.log2(np.e))


@dataclass
class LinkBudget:
    noise_power: float  # sigma_w^2, watts
    bandwidth: float  # Hz
    slot_seconds: float = 1.0
    alpha_max: float = 0.8

    def __post_init__(self):
        if self.noise_power <= 0 or self.bandwidth <= 0 or self.slot_seconds <= 0:
            raise ValueError("noise_power, bandwidth and slot_seconds must be positive")
        if not 0.0 < self.alpha_max <= 1.0:
            raise ValueError("alpha_max must lie in (0, 1]")


@dataclass
class BeamformingDecision:
    """Transmit beamformer f (M,), receive beamformers G (N, M) with
    unit-norm rows, and reflection coefficients alpha (N,)."""

    f: np.ndarray
    G: np.ndarray
    alpha: np.ndarray

    def validate(self, power_budget: float, alpha_max: float, tol: float = 1e-9):
        if np.vdot(self.f, self.f).real > power_budget * (1.0 + tol):
            raise ValueError("transmit power budget exceeded")
        g_norms = np.linalg.norm(self.G, axis=1)
        if np.any(np.abs(g_norms - 1.0) > tol):
            raise ValueError("receive beamformers must be unit norm")
        if np.any(self.alpha < -tol) or np.any(self.alpha > alpha_max + tol):
            raise ValueError("reflection coefficients outside [0, alpha_max]")


@dataclass
class FblParams:
    """Finite-blocklength settings; ``blocklength=None`` means unbounded
    codewords (plain Shannon rate)."""

    blocklength: int | None = None
    error_prob: float = 1e-3

    def __post_init__(self):
        if self.blocklength is not None and self.blocklength < 1:
            raise ValueError("blocklength must be >= 1 when finite")
        if not 0.0 < self.error_prob < 1.0:
            raise ValueError("error_prob must lie in (0, 1)")


def _cascade_gains(ch: ChannelState, dec: BeamformingDecision) -> np.ndarray:
    """Matrix of |alpha_nn g_n^H h_nn h_nn^T f| amplitudes.

    Entry (n, nn) is ``alpha_nn * g_n^H h_nn * (h_nn^T f)``; the diagonal
    is the signal path, off-diagonal entries are interference.
    """
    u = ch.h @ dec.f  # h_n^T f
    c = dec.G.conj() @ ch.h.T  # c[n, nn] = g_n^H h_nn
    return c * (dec.alpha * u)[None, :]


def sinr_all(ch: ChannelState, dec: BeamformingDecision, lb: LinkBudget) -> np.ndarray:
    """Per-node SINR vector."""
    a = np.abs(_cascade_gains(ch, dec)) ** 2
    sig = np.diag(a).copy()
    interference = a.sum(axis=1) - sig
    return sig / (lb.noise_power + interference)


def sinr(n: int, ch: ChannelState, dec: BeamformingDecision, lb: LinkBudget) -> float:
    return float(sinr_all(ch, dec, lb)[n])


def shannon_rate(s, lb: LinkBudget):
    """Bits per slot: W * tau * log2(1 + s)."""
    return lb.bandwidth * lb.slot_seconds * np.log2(1.0 + np.asarray(s))


def fbl_rate(s, fbl: FblParams, lb: LinkBudget):
    """Normal-approximation achievable rate in bits per slot.

    W * tau * [log2(1+s) - sqrt((1/L)(1 - (1+s)^-2)) * Qinv(psi) * log2(e)],
    clamped at zero; equals the Shannon rate when the blocklength is
    unbounded.
    """
    if fbl.blocklength is None:
        return shannon_rate(s, lb)
    s = np.asarray(s, dtype=float)
    dispersion = np.sqrt((1.0 - (1.0 + s) ** -2) / fbl.blocklength)
    qinv = inv_norm_cdf(1.0 - fbl.error_prob)
    r = lb.bandwidth * lb.slot_seconds * (np.log2(1.0 + s) - dispersion * qinv * LOG2E)
    return np.maximum(r, 0.0)


def rate_all(
    ch: ChannelState,
    dec: BeamformingDecision,
    lb: LinkBudget,
    fbl: FblParams | None = None,
) -> np.ndarray:
    """Per-node rates under the configured rate model."""
    s = sinr_all(ch, dec, lb)
    if fbl is None or fbl.blocklength is None:
        return shannon_rate(s, lb)
    return fbl_rate(s, fbl, lb)


def received_energy_all(ch: ChannelState, dec: BeamformingDecision) -> np.ndarray:
    """|h_n^T f|^2 per node (downlink energy diagnostic)."""
    return np.abs(ch.h @ dec.f) ** 2


def received_energy(n: int, ch: ChannelState, dec: BeamformingDecision) -> float:
    return float(received_energy_all(ch, dec)[n])
