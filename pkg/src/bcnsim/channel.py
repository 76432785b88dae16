"""Per-slot channel generation: Rician fading with distance-based path loss.

Channels are block fading: constant within a slot, drawn independently
across slots. The line-of-sight component is fixed per node (uniform
linear array steering at a fixed angle of departure), only the scattered
component is redrawn each slot.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Geometry",
    "ChannelParams",
    "ChannelState",
    "pathloss",
    "los_steering",
    "draw_geometry",
    "RicianChannel",
]

SPEED_OF_LIGHT = 3e8


@dataclass
class Geometry:
    """Node placement: distance and angle of departure per backscatter node."""

    distances: np.ndarray  # meters, shape (N,)
    angles: np.ndarray  # radians in [-pi/2, pi/2], shape (N,)

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=float)
        self.angles = np.asarray(self.angles, dtype=float)
        if self.distances.shape != self.angles.shape:
            raise ValueError("distances and angles must have equal length")
        if np.any(self.distances <= 0):
            raise ValueError("distances must be positive")
        if np.any(np.abs(self.angles) > np.pi / 2 + 1e-12):
            raise ValueError("angles must lie in [-pi/2, pi/2]")

    @property
    def num_nodes(self) -> int:
        return self.distances.size


@dataclass
class ChannelParams:
    rician_k: float  # ratio of deterministic to scattered power, >= 0
    pathloss_exp: float  # path loss exponent rho
    carrier_freq: float  # Hz
    num_antennas: int

    def __post_init__(self):
        if self.rician_k < 0:
            raise ValueError("rician_k must be >= 0")
        if self.pathloss_exp <= 0:
            raise ValueError("pathloss_exp must be positive")
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be positive")
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")


@dataclass
class ChannelState:
    """One slot of channel vectors, shape (N, M): row n is h_n."""

    h: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.h.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.h.shape[1]


def pathloss(d: float, params: ChannelParams) -> float:
    """Distance power law times the free-space wavelength factor:
    d^{-rho} * (c / (4 pi f))^2.
    """
    if d <= 0:
        raise ValueError("distance must be positive")
    lam_factor = SPEED_OF_LIGHT / (4.0 * np.pi * params.carrier_freq)
    return float(d ** (-params.pathloss_exp) * lam_factor**2)


def los_steering(theta: float, m: int) -> np.ndarray:
    """Half-wavelength ULA steering vector: entry k = exp(-j pi k sin(theta))."""
    if m < 1:
        raise ValueError("antenna count must be >= 1")
    k = np.arange(m)
    return np.exp(-1j * np.pi * k * np.sin(theta))


def draw_geometry(
    num_nodes: int, avg_distance: float, rng: np.random.Generator
) -> Geometry:
    """Place nodes uniformly in a disc of radius 1.5 * avg_distance.

    Uniform-in-area placement in a disc of radius R gives E[d] = 2R/3, so
    R = 1.5 * avg_distance hits the target average. Angles of departure
    are uniform in [-pi/2, pi/2] and stay fixed for the whole run.
    """
    radius = 1.5 * avg_distance
    # inverse-CDF sampling of the disc radial density 2r/R^2
    d = radius * np.sqrt(rng.uniform(size=num_nodes))
    d = np.maximum(d, 1e-3)  # exclude the reader's own location
    theta = rng.uniform(-np.pi / 2, np.pi / 2, size=num_nodes)
    return Geometry(distances=d, angles=theta)


class RicianChannel:
    """Draws i.i.d. per-slot channels h_n = sqrt(beta_n) * (
    sqrt(K/(K+1)) h_d + sqrt(1/(K+1)) h_s ).

    The deterministic part ``h_d`` is the ULA steering vector at the
    node's fixed angle; ``h_s`` has i.i.d. zero-mean unit-variance
    circular complex Gaussian entries, fresh every slot.
    """

    def __init__(self, geom: Geometry, params: ChannelParams):
        self.geom = geom
        self.params = params
        m = params.num_antennas
        self.beta = np.array([pathloss(d, params) for d in geom.distances])
        self.h_det = np.vstack([los_steering(th, m) for th in geom.angles])
        k = params.rician_k
        amp = np.sqrt(self.beta)
        self._det_part = (amp * np.sqrt(k / (k + 1.0)))[:, None] * self.h_det
        self._scat_amp = (amp * np.sqrt(1.0 / (k + 1.0)))[:, None]

    @property
    def shape(self) -> tuple:
        return self.h_det.shape

    def draw(self, rng: np.random.Generator) -> ChannelState:
        n, m = self.shape
        scat = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        scat *= np.sqrt(0.5)
        return ChannelState(h=self._det_part + self._scat_amp * scat)

    def draw_many(self, num_slots: int, rng: np.random.Generator) -> np.ndarray:
        """Stacked draws, shape (T, N, M). Same stream layout as repeated
        ``draw`` calls, so the two are interchangeable for a given rng state.
        """
        n, m = self.shape
        out = np.empty((num_slots, n, m), dtype=complex)
        for t in range(num_slots):
            scat = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
            out[t] = self._det_part + self._scat_amp * (np.sqrt(0.5) * scat)
        return out
