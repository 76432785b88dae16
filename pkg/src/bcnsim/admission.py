"""Closed-form per-slot data-admission policies for the three utilities.

Each policy minimizes sum_n Q_n D_n - V * U(D) over D in [0, D_max]^N.
All three share the hard cutoff D_n = 0 once Q_n reaches V (for the
common utility: once the queue total reaches V), which is what caps the
queues at V + D_max. Admissions are real-valued bits.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AdmissionConfig",
    "QueueState",
    "utility_value",
    "admit",
    "admit_sum",
    "admit_common",
    "admit_proportional",
    "admission_objective",
    "admission_oracle",
]

UTILITIES = ("sum", "proportional", "common")


@dataclass
class AdmissionConfig:
    utility: str  # one of "sum", "proportional", "common"
    v_param: float  # V, bits
    d_max: float  # bits per slot

    def __post_init__(self):
        if self.utility not in UTILITIES:
            raise ValueError(f"unknown utility {self.utility!r}")
        if self.v_param <= 0 or self.d_max <= 0:
            raise ValueError("v_param and d_max must be positive")


@dataclass
class QueueState:
    """Per-node buffered bits."""

    q: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        if np.any(self.q < 0):
            raise ValueError("queue levels must be nonnegative")


def utility_value(D: np.ndarray, utility: str) -> float:
    """U(D): sum, log-sum (natural log), or minimum of the admitted bits."""
    D = np.asarray(D, dtype=float)
    if utility == "sum":
        return float(D.sum())
    if utility == "proportional":
        return float(np.log1p(D).sum())
    if utility == "common":
        return float(D.min())
    raise ValueError(f"unknown utility {utility!r}")


def admit_sum(Q: np.ndarray, cfg: AdmissionConfig) -> np.ndarray:
    """Greedy binary rule: full admission while the queue is at or below V."""
    Q = np.asarray(Q, dtype=float)
    return np.where(Q <= cfg.v_param, cfg.d_max, 0.0)


def admit_common(Q: np.ndarray, cfg: AdmissionConfig) -> np.ndarray:
    """Shared binary rule: everyone admits D_max while sum(Q) <= V."""
    Q = np.asarray(Q, dtype=float)
    d = cfg.d_max if Q.sum() <= cfg.v_param else 0.0
    return np.full(Q.shape, d)


def admit_proportional(Q: np.ndarray, cfg: AdmissionConfig) -> np.ndarray:
    """Inverse-queue rule: D_n = V/Q_n - 1 between full admission
    (Q_n <= V/(1+D_max)) and the hard cutoff at Q_n >= V."""
    Q = np.asarray(Q, dtype=float)
    v, dmax = cfg.v_param, cfg.d_max
    with np.errstate(divide="ignore"):
        interior = v / np.where(Q > 0.0, Q, np.inf) - 1.0
    d = np.where(Q <= v / (1.0 + dmax), dmax, np.clip(interior, 0.0, dmax))
    return np.where(Q >= v, 0.0, d)


_POLICIES = {
    "sum": admit_sum,
    "proportional": admit_proportional,
    "common": admit_common,
}


def admit(Q: np.ndarray, cfg: AdmissionConfig) -> np.ndarray:
    return _POLICIES[cfg.utility](Q, cfg)


def admission_objective(Q: np.ndarray, D: np.ndarray, cfg: AdmissionConfig) -> float:
    """The quantity the admission step minimizes: Q.D - V * U(D)."""
    Q = np.asarray(Q, dtype=float)
    D = np.asarray(D, dtype=float)
    return float(Q @ D - cfg.v_param * utility_value(D, cfg.utility))


def admission_oracle(
    Q: np.ndarray, cfg: AdmissionConfig, grid_points: int = 1001
) -> np.ndarray:
    """Grid-search minimizer of the admission objective, for testing.

    The sum and proportional objectives are separable, so each
    coordinate is minimized over a 1-D grid; the common utility is
    optimal at equal admissions, so a single shared grid suffices.
    """
    Q = np.asarray(Q, dtype=float)
    grid = np.linspace(0.0, cfg.d_max, grid_points)
    if cfg.utility == "sum":
        obj = Q[:, None] * grid[None, :] - cfg.v_param * grid[None, :]
        return grid[np.argmin(obj, axis=1)]
    if cfg.utility == "proportional":
        obj = Q[:, None] * grid[None, :] - cfg.v_param * np.log1p(grid)[None, :]
        return grid[np.argmin(obj, axis=1)]
    # common: equal admissions, shared scalar D
    obj = Q.sum() * grid - cfg.v_param * grid
    return np.full(Q.shape, grid[np.argmin(obj)])
