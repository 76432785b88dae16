"""Per-slot link scheduling: maximize sum_n Q_n R_n over (f, G, alpha).

The weighted-sum-rate problem is non-convex (NP-hard in general), so it
is solved by alternating closed-form updates: a Lagrangian-dual auxiliary
gamma moves the SINRs out of the logarithms, a quadratic-transform
auxiliary y removes the ratios, and each of f, alpha, g then has an exact
maximizer with the others fixed. The weighted objective is therefore
nondecreasing across iterations.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelState
from .linalg import hermitian_solve
from .phy import BeamformingDecision, FblParams, LinkBudget, fbl_rate, shannon_rate

__all__ = [
    "SchedulerConfig",
    "ScheduleResult",
    "init_f",
    "update_g",
    "update_gamma",
    "update_y",
    "update_f",
    "update_alpha",
    "schedule_slot",
    "cascade_coeffs",
    "dual_objective",
    "quadratic_objective",
]


@dataclass
class SchedulerConfig:
    power_budget: float  # P, watts
    epsilon: float = 0.01  # relative convergence tolerance
    it_max: int = 100
    eta_tol: float = 1e-6  # relative tolerance on ||f||^2 - P in the dual search

    def __post_init__(self):
        if self.power_budget <= 0:
            raise ValueError("power_budget must be positive")
        if self.epsilon <= 0 or self.eta_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.it_max < 1:
            raise ValueError("it_max must be >= 1")


@dataclass
class ScheduleResult:
    decision: BeamformingDecision
    objective: float  # sum_n Q_n R_n at the returned decision (weighted bits)
    iterations: int
    objective_trace: np.ndarray  # per-iteration objective, configured rate model
    shannon_trace: np.ndarray  # same trace under the Shannon rate (always monotone)


def cascade_coeffs(ch: ChannelState, dec: BeamformingDecision):
    """Scalarized cascade coefficients (c, u).

    ``c[n, nn] = g_n^H h_nn`` and ``u[nn] = h_nn^T f``, so the full
    cascade term ``g_n^H h_nn h_nn^T f`` is just ``c[n, nn] * u[nn]``.
    """
    return dec.G.conj() @ ch.h.T, ch.h @ dec.f


def init_f(Q: np.ndarray, ch: ChannelState, power_budget: float) -> np.ndarray:
    """Queue-weighted conjugate-sum starting point, scaled to full power.

    Reduces to maximum ratio transmission for a single node. A zero
    weighted sum (all queues empty, or exact cancellation) falls back to
    equal weights.
    """
    v = Q @ ch.h.conj()
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v = ch.h.conj().sum(axis=0)
        norm = np.linalg.norm(v)
    return np.sqrt(power_budget) * v / norm


def _g_update(h: np.ndarray, f: np.ndarray, alpha: np.ndarray, noise_power: float):
    """MMSE-style receive beamformers, unit-normalized.

    g_n is the regularized-inverse image of the cascade vector
    zeta_n = alpha_n (h_n^T f) h_n; zeta_n = 0 gets the matched filter to
    h_n as a harmless placeholder (its SINR is zero either way).
    """
    m = h.shape[1]
    u = h @ f
    zeta_scale = alpha * u
    w = np.abs(zeta_scale) ** 2 / noise_power
    a = np.eye(m, dtype=complex) + h.T @ (w[:, None] * h.conj())
    z = h.T * zeta_scale[None, :]
    x = hermitian_solve(a, z)
    norms = np.linalg.norm(x, axis=0)
    g = np.empty_like(h)
    for n in range(h.shape[0]):
        if norms[n] > 0.0:
            g[n] = x[:, n] / norms[n]
        else:
            g[n] = h[n].conj() / np.linalg.norm(h[n])
    return g


def update_g(ch: ChannelState, dec: BeamformingDecision, lb: LinkBudget) -> np.ndarray:
    return _g_update(ch.h, dec.f, dec.alpha, lb.noise_power)


def _sinr_from_coeffs(c, u, alpha, noise_power):
    a = np.abs(c * (alpha * u)[None, :]) ** 2
    sig = np.diag(a).copy()
    return sig / (noise_power + a.sum(axis=1) - sig)


def update_gamma(
    ch: ChannelState, dec: BeamformingDecision, Q: np.ndarray, lb: LinkBudget
) -> np.ndarray:
    """Optimal dual-transform auxiliary: gamma_n equals the current SINR."""
    c, u = cascade_coeffs(ch, dec)
    return _sinr_from_coeffs(c, u, dec.alpha, lb.noise_power)


def _y_update(c, u, alpha, Q, gamma, noise_power):
    a = np.abs(c * (alpha * u)[None, :]) ** 2
    den = noise_power + a.sum(axis=1)  # includes the own-signal term
    sig = alpha * np.diag(c) * u
    return np.sqrt(Q * (1.0 + gamma)) * sig.conj() / den


def update_y(
    ch: ChannelState,
    dec: BeamformingDecision,
    Q: np.ndarray,
    gamma: np.ndarray,
    lb: LinkBudget,
) -> np.ndarray:
    c, u = cascade_coeffs(ch, dec)
    return _y_update(c, u, dec.alpha, Q, gamma, lb.noise_power)


def _f_update(h, c, alpha, Q, gamma, y, cfg: SchedulerConfig):
    """Exact maximizer of the quadratic-transform objective over f subject
    to the power budget, via the dual variable on ||f||^2.

    The system matrix is a weighted sum of conj(h_nn) h_nn^T outer
    products, so its eigendecomposition turns the dual search into a
    scalar monotone bisection which is run to high accuracy (the
    configured eta_tol is an upper bound on the accepted mismatch).
    """
    p = cfg.power_budget
    w = alpha**2 * (np.abs(y[:, None]) ** 2 * np.abs(c) ** 2).sum(axis=0)
    a = h.conj().T @ (w[:, None] * h)
    rhs = h.conj().T @ (np.sqrt(Q * (1.0 + gamma)) * alpha * y.conj() * np.diag(c).conj())
    if np.linalg.norm(rhs) == 0.0:
        return np.zeros(h.shape[1], dtype=complex)
    lam, vec = np.linalg.eigh(a)
    lam = np.maximum(lam, 0.0)
    ce = vec.conj().T @ rhs
    ce2 = np.abs(ce) ** 2
    active = ce2 > 0.0
    lam_a, ce2_a = lam[active], ce2[active]

    def norm_sq(eta):
        if eta <= 0.0 and lam_a.min() <= 0.0:
            return np.inf
        return float((ce2_a / (lam_a + eta) ** 2).sum())

    eta = 0.0
    if norm_sq(0.0) > p:
        # secular equation ||f(eta)||^2 = P: bracket by doubling, then
        # bisection-safeguarded Newton on 1/||f(eta)|| (nearly linear in
        # eta, so a handful of steps reach far below eta_tol)
        lo, hi = 0.0, 1.0
        while norm_sq(hi) > p:
            lo, hi = hi, 2.0 * hi
        eta = 0.5 * (lo + hi)
        rtol = min(cfg.eta_tol, 1e-12)
        for _ in range(100):
            n2 = norm_sq(eta)
            if abs(n2 - p) <= rtol * p:
                break
            if n2 > p:
                lo = eta
            else:
                hi = eta
            dphi = float((ce2_a / (lam_a + eta) ** 3).sum()) * n2**-1.5
            step = -(n2**-0.5 - p**-0.5) / dphi
            eta += step
            if not lo < eta < hi:
                eta = 0.5 * (lo + hi)
    den = lam + eta
    coeff = np.where(active, ce / np.where(den > 0.0, den, 1.0), 0.0)
    return vec @ coeff


def update_f(
    ch: ChannelState,
    dec: BeamformingDecision,
    Q: np.ndarray,
    gamma: np.ndarray,
    y: np.ndarray,
    cfg: SchedulerConfig,
) -> np.ndarray:
    c, _ = cascade_coeffs(ch, dec)
    return _f_update(ch.h, c, dec.alpha, Q, gamma, y, cfg)


def _alpha_update(c, u, Q, gamma, y, alpha_max):
    """Clipped per-node stationary point of the quadratic-transform
    objective in alpha_n. A zero denominator means the node is fully
    silenced, in which case reflecting at full strength is harmless.
    """
    num = np.sqrt(Q * (1.0 + gamma)) * np.real(y * np.diag(c) * u)
    den = np.abs(u) ** 2 * (np.abs(y[:, None]) ** 2 * np.abs(c) ** 2).sum(axis=0)
    alpha = np.where(den > 0.0, np.divide(num, den, out=np.full_like(num, np.inf), where=den > 0.0), alpha_max)
    return np.clip(alpha, 0.0, alpha_max)


def update_alpha(
    ch: ChannelState,
    dec: BeamformingDecision,
    Q: np.ndarray,
    gamma: np.ndarray,
    y: np.ndarray,
    alpha_max: float,
) -> np.ndarray:
    c, u = cascade_coeffs(ch, dec)
    return _alpha_update(c, u, Q, gamma, y, alpha_max)


def dual_objective(
    Q: np.ndarray,
    gamma: np.ndarray,
    c: np.ndarray,
    u: np.ndarray,
    alpha: np.ndarray,
    lb: LinkBudget,
) -> float:
    """Dual-transform surrogate (nats scale converted to weighted bits).

    At gamma = gamma* this equals sum_n Q_n W tau log2(1 + SINR_n).
    """
    a = np.abs(c * (alpha * u)[None, :]) ** 2
    sig = np.diag(a).copy()
    den = lb.noise_power + a.sum(axis=1)
    val = (
        Q * np.log(1.0 + gamma) - Q * gamma + Q * (1.0 + gamma) * sig / den
    ).sum()
    return float(val * lb.bandwidth * lb.slot_seconds / np.log(2.0))


def quadratic_objective(
    Q: np.ndarray,
    gamma: np.ndarray,
    y: np.ndarray,
    c: np.ndarray,
    u: np.ndarray,
    alpha: np.ndarray,
    lb: LinkBudget,
) -> float:
    """Quadratic-transform surrogate; equals the dual surrogate at y = y*."""
    sig = alpha * np.diag(c) * u
    a = np.abs(c * (alpha * u)[None, :]) ** 2
    den = lb.noise_power + a.sum(axis=1)
    val = (
        Q * np.log(1.0 + gamma)
        - Q * gamma
        + 2.0 * np.sqrt(Q * (1.0 + gamma)) * np.real(y * sig)
        - np.abs(y) ** 2 * den
    ).sum()
    return float(val * lb.bandwidth * lb.slot_seconds / np.log(2.0))


def schedule_slot(
    Q: np.ndarray,
    ch: ChannelState,
    cfg: SchedulerConfig,
    lb: LinkBudget,
    fbl: FblParams | None = None,
) -> ScheduleResult:
    """One slot of the alternating link-scheduling algorithm.

    Starts from the queue-weighted conjugate beamformer with all
    reflection coefficients at alpha_max, then cycles gamma, y, f, alpha,
    g updates until the relative objective improvement drops below
    epsilon or it_max is hit. With a finite blocklength the same updates
    are kept (they are derived for the Shannon rate) and only the rate
    evaluations and the stopping objective switch to the
    finite-blocklength formula.
    """
    Q = np.asarray(Q, dtype=float)
    h = ch.h
    noise = lb.noise_power
    wt = lb.bandwidth * lb.slot_seconds

    f = init_f(Q, ch, cfg.power_budget)
    alpha = np.full(h.shape[0], lb.alpha_max)
    g = _g_update(h, f, alpha, noise)
    decision = BeamformingDecision(f=f, G=g, alpha=alpha)

    if not np.any(Q > 0.0):
        return ScheduleResult(
            decision=decision,
            objective=0.0,
            iterations=0,
            objective_trace=np.empty(0),
            shannon_trace=np.empty(0),
        )

    use_fbl = fbl is not None and fbl.blocklength is not None
    trace: list[float] = []
    shannon: list[float] = []
    r_p = 0.0
    it = 0
    while it < cfg.it_max:
        c = g.conj() @ h.T
        u = h @ f
        gamma = _sinr_from_coeffs(c, u, alpha, noise)
        y = _y_update(c, u, alpha, Q, gamma, noise)
        f = _f_update(h, c, alpha, Q, gamma, y, cfg)
        u = h @ f
        alpha = _alpha_update(c, u, Q, gamma, y, lb.alpha_max)
        g = _g_update(h, f, alpha, noise)
        c = g.conj() @ h.T
        s = _sinr_from_coeffs(c, u, alpha, noise)
        r_sh = float(Q @ (wt * np.log2(1.0 + s)))
        if use_fbl:
            r_c = float(Q @ fbl_rate(s, fbl, lb))
        else:
            r_c = r_sh
        trace.append(r_c)
        shannon.append(r_sh)
        it += 1
        if abs(r_c - r_p) <= cfg.epsilon * r_p:
            break
        r_p = r_c

    decision = BeamformingDecision(f=f, G=g, alpha=alpha)
    return ScheduleResult(
        decision=decision,
        objective=trace[-1],
        iterations=it,
        objective_trace=np.asarray(trace),
        shannon_trace=np.asarray(shannon),
    )
