"""Closed-loop discrete-time simulation.

Each slot: draw a channel, run the configured controller (alternating
scheduler or the conjugate-sum baseline), compute rates, admit data with
the configured policy using the pre-admission queues, and evolve the
queues. Runs are deterministic given the seed; replica r uses seed
``base_seed + r``.
"""

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .admission import admit, utility_value
from .channel import ChannelState
from .config import NetworkConfig
from .phy import BeamformingDecision, received_energy_all, rate_all
from .scheduler import schedule_slot, update_g

__all__ = [
    "SlotMetrics",
    "SlotLog",
    "RunSummary",
    "RunResult",
    "InvariantViolation",
    "queue_step",
    "mrt_baseline_decision",
    "run",
    "run_replicas",
]


class InvariantViolation(AssertionError):
    """A runtime guarantee of the controller failed (queue bound or
    scheduler monotonicity). Not a recoverable condition."""


def queue_step(Q: np.ndarray, R: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Buffer evolution: Q' = max(Q - R, 0) + D."""
    return np.maximum(np.asarray(Q, float) - R, 0.0) + D


def mrt_baseline_decision(
    Q: np.ndarray, ch: ChannelState, cfg: NetworkConfig
) -> BeamformingDecision:
    """Unweighted conjugate-sum transmit beam at full power, full
    reflection, and the optimal receive beamformers."""
    v = ch.h.conj().sum(axis=0)
    f = np.sqrt(cfg.power_w) * v / np.linalg.norm(v)
    alpha = np.full(ch.num_nodes, cfg.alpha_max)
    dec = BeamformingDecision(f=f, G=np.empty_like(ch.h), alpha=alpha)
    dec.G = update_g(ch, dec, cfg.link_budget())
    return dec


@dataclass
class SlotMetrics:
    slot: int
    rates: np.ndarray
    admissions: np.ndarray
    queues_after: np.ndarray
    utility_value: float
    received_energy: np.ndarray
    scheduler_iterations: int
    lyapunov: float
    dpp_upper_terms: tuple[float, float, float]  # (-sum QR, +sum QD, -V*U)


@dataclass
class SlotLog:
    """Column-oriented per-slot metrics for one replica."""

    rates: np.ndarray  # (T, N)
    admissions: np.ndarray  # (T, N)
    queues_after: np.ndarray  # (T, N)
    served: np.ndarray  # (T, N), min(Q, R)
    utility: np.ndarray  # (T,)
    energy: np.ndarray  # (T, N)
    iterations: np.ndarray  # (T,)
    lyapunov: np.ndarray  # (T,)
    dpp_service: np.ndarray  # (T,)
    dpp_admit: np.ndarray  # (T,)
    dpp_penalty: np.ndarray  # (T,)

    @property
    def num_slots(self) -> int:
        return self.utility.size

    def slot(self, t: int) -> SlotMetrics:
        return SlotMetrics(
            slot=t,
            rates=self.rates[t],
            admissions=self.admissions[t],
            queues_after=self.queues_after[t],
            utility_value=float(self.utility[t]),
            received_energy=self.energy[t],
            scheduler_iterations=int(self.iterations[t]),
            lyapunov=float(self.lyapunov[t]),
            dpp_upper_terms=(
                float(self.dpp_service[t]),
                float(self.dpp_admit[t]),
                float(self.dpp_penalty[t]),
            ),
        )


@dataclass
class RunSummary:
    replica: int
    seed: int
    avg_utility: float
    avg_queue: float
    per_bn_throughput: np.ndarray  # time-average served bits per slot
    per_bn_energy: np.ndarray
    max_queue_seen: float
    b_constant: float  # (N/2)(R_max^2 + D_max^2), R_max = max observed rate
    mean_iterations: float
    # same averages over the post-warm-up window
    avg_utility_steady: float
    avg_queue_steady: float
    per_bn_throughput_steady: np.ndarray
    per_bn_energy_steady: np.ndarray
    total_admitted: np.ndarray
    total_served: np.ndarray
    final_queue: np.ndarray


@dataclass
class RunResult:
    config: NetworkConfig
    summary: RunSummary
    log: SlotLog


def _summarize(cfg: NetworkConfig, replica: int, log: SlotLog) -> RunSummary:
    t0 = int(cfg.warmup_fraction * log.num_slots)
    r_max = float(log.rates.max(initial=0.0))
    return RunSummary(
        replica=replica,
        seed=cfg.seed + replica,
        avg_utility=float(log.utility.mean()),
        avg_queue=float(log.queues_after.mean()),
        per_bn_throughput=log.served.mean(axis=0),
        per_bn_energy=log.energy.mean(axis=0),
        max_queue_seen=float(log.queues_after.max()),
        b_constant=0.5 * cfg.num_bns * (r_max**2 + cfg.d_max_bits**2),
        mean_iterations=float(log.iterations.mean()),
        avg_utility_steady=float(log.utility[t0:].mean()),
        avg_queue_steady=float(log.queues_after[t0:].mean()),
        per_bn_throughput_steady=log.served[t0:].mean(axis=0),
        per_bn_energy_steady=log.energy[t0:].mean(axis=0),
        total_admitted=log.admissions.sum(axis=0),
        total_served=log.served.sum(axis=0),
        final_queue=log.queues_after[-1].copy(),
    )


def run(cfg: NetworkConfig, replica: int = 0) -> RunResult:
    """Simulate one replica of the closed loop."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed + replica)
    chan = cfg.build_channel(rng)
    lb = cfg.link_budget()
    sched_cfg = cfg.scheduler_config()
    adm_cfg = cfg.admission_config()
    fbl = cfg.fbl_params()
    t_total, n = cfg.horizon, cfg.num_bns
    mdpp = cfg.controller == "mdpp"
    queue_cap = cfg.v_param + cfg.d_max_bits

    log = SlotLog(
        rates=np.zeros((t_total, n)),
        admissions=np.zeros((t_total, n)),
        queues_after=np.zeros((t_total, n)),
        served=np.zeros((t_total, n)),
        utility=np.zeros(t_total),
        energy=np.zeros((t_total, n)),
        iterations=np.zeros(t_total, dtype=int),
        lyapunov=np.zeros(t_total),
        dpp_service=np.zeros(t_total),
        dpp_admit=np.zeros(t_total),
        dpp_penalty=np.zeros(t_total),
    )

    Q = np.zeros(n)
    for t in range(t_total):
        ch = chan.draw(rng)
        if mdpp:
            res = schedule_slot(Q, ch, sched_cfg, lb, fbl)
            dec, iters = res.decision, res.iterations
            tr = res.shannon_trace
            if tr.size > 1:
                drop = np.diff(tr) < -1e-9 * np.abs(tr[:-1])
                if np.any(drop):
                    raise InvariantViolation(
                        f"slot {t}: scheduler objective decreased across iterations"
                    )
        else:
            dec = mrt_baseline_decision(Q, ch, cfg)
            iters = 0
        R = rate_all(ch, dec, lb, fbl)
        D = admit(Q, adm_cfg)
        served = np.minimum(Q, R)
        u_val = utility_value(D, cfg.utility)
        q_next = queue_step(Q, R, D)

        log.rates[t] = R
        log.admissions[t] = D
        log.queues_after[t] = q_next
        log.served[t] = served
        log.utility[t] = u_val
        log.energy[t] = received_energy_all(ch, dec)
        log.iterations[t] = iters
        log.lyapunov[t] = 0.5 * float(q_next @ q_next)
        log.dpp_service[t] = -float(Q @ R)
        log.dpp_admit[t] = float(Q @ D)
        log.dpp_penalty[t] = -cfg.v_param * u_val

        if mdpp and np.any(q_next > queue_cap):
            raise InvariantViolation(
                f"slot {t}: queue bound V + D_max = {queue_cap} violated "
                f"(max queue {q_next.max()})"
            )
        Q = q_next

    return RunResult(config=cfg, summary=_summarize(cfg, replica, log), log=log)


def run_replicas(cfg: NetworkConfig, keep_logs: bool = False) -> list[RunResult]:
    """Run all replicas of a config; replica r draws from seed + r.

    With ``workers`` > 1 replicas are dispatched to a process pool.
    """
    cfg.validate()
    if cfg.workers == 1 or cfg.replicas == 1:
        results = [run(cfg, r) for r in range(cfg.replicas)]
    else:
        results = Parallel(n_jobs=cfg.workers)(
            delayed(run)(cfg, r) for r in range(cfg.replicas)
        )
    if not keep_logs:
        for res in results:
            res.log = None  # type: ignore[assignment]
    return results
