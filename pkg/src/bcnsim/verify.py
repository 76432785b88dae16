"""Self-check suites runnable from the CLI (`bcnsim verify <suite>`).

Each suite runs fixed-seed randomized property checks against an
independent reference (brute-force search, grid oracles, direct formula
re-evaluation) and reports one pass/fail line per property. The pytest
suite drives the same checks at larger sample counts.
"""

from dataclasses import dataclass

import numpy as np

from .admission import (
    AdmissionConfig,
    admission_objective,
    admission_oracle,
    admit,
)
from .channel import ChannelState
from .config import NetworkConfig
from .phy import (
    BeamformingDecision,
    FblParams,
    LinkBudget,
    fbl_rate,
    shannon_rate,
    sinr_all,
)
from .scheduler import (
    SchedulerConfig,
    cascade_coeffs,
    dual_objective,
    quadratic_objective,
    schedule_slot,
    update_gamma,
    update_y,
)
from .sim import run

__all__ = ["SUITES", "run_suite", "random_instance", "random_search_best"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def random_instance(rng: np.random.Generator, m: int, n: int):
    """A feasible random slot at physically plausible scales: channels of
    magnitude ~1e-4 (round-trip SINRs of order one), 500 mW budget,
    -110 dBm noise, queues up to ~1.3e5 bits."""
    lb = LinkBudget(noise_power=1e-14, bandwidth=5000.0, alpha_max=0.8)
    beta = 10.0 ** rng.uniform(-8.5, -7.0, size=n)
    h = np.sqrt(beta / 2.0)[:, None] * (
        rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    )
    ch = ChannelState(h=h)
    p = 0.5
    f = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    f *= np.sqrt(p * rng.uniform(0.2, 1.0)) / np.linalg.norm(f)
    g = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    alpha = rng.uniform(0.0, lb.alpha_max, size=n)
    dec = BeamformingDecision(f=f, G=g, alpha=alpha)
    Q = rng.uniform(0.0, 1.3e5, size=n)
    return ch, dec, Q, lb, p


def random_search_best(
    ch: ChannelState,
    dec: BeamformingDecision,
    lb: LinkBudget,
    n_samples: int,
    rng: np.random.Generator,
    batch: int = 200_000,
) -> np.ndarray:
    """Best per-node SINR over random unit-norm receive beamformers
    (brute-force reference for the closed-form receiver)."""
    n, m = ch.h.shape
    zeta = (dec.alpha * (ch.h @ dec.f))[:, None] * ch.h  # rows: alpha_n u_n h_n
    best = np.zeros(n)
    remaining = n_samples
    while remaining > 0:
        k = min(batch, remaining)
        g = rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        amp2 = np.abs(g.conj() @ zeta.T) ** 2  # (k, n): |g^H zeta_nn|^2
        total = amp2.sum(axis=1)
        for i in range(n):
            s = amp2[:, i] / (lb.noise_power + total - amp2[:, i])
            best[i] = max(best[i], s.max())
        remaining -= k
    return best


# suites ------------------------------------------------------------------

def suite_transforms(n_instances: int = 1000, seed: int = 7) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    wt_err = dual_err = quad_err = 0.0
    stat_fail = 0
    for i in range(n_instances):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(2, 6))
        ch, dec, Q, lb, _ = random_instance(rng, m, n)
        c, u = cascade_coeffs(ch, dec)
        gamma = update_gamma(ch, dec, Q, lb)
        direct = float(Q @ shannon_rate(sinr_all(ch, dec, lb), lb))
        tilde = dual_objective(Q, gamma, c, u, dec.alpha, lb)
        y = update_y(ch, dec, Q, gamma, lb)
        dtilde = quadratic_objective(Q, gamma, y, c, u, dec.alpha, lb)
        scale = max(abs(direct), 1e-30)
        dual_err = max(dual_err, abs(tilde - direct) / scale)
        quad_err = max(quad_err, abs(dtilde - tilde) / scale)
        if i < 50:  # finite-difference stationarity spot checks
            for _ in range(2):
                j = int(rng.integers(n))
                for dg in (1e-4, -1e-4):
                    gp = gamma.copy()
                    gp[j] = max(gp[j] + dg, 0.0)
                    if dual_objective(Q, gp, c, u, dec.alpha, lb) > tilde * (1 + 1e-12) + 1e-9:
                        stat_fail += 1
                yp = y.copy()
                yp[j] += (1e-4 + 1e-4j) * max(abs(y[j]), 1e-12)
                if quadratic_objective(Q, gamma, yp, c, u, dec.alpha, lb) > dtilde * (1 + 1e-12) + 1e-9:
                    stat_fail += 1
    return [
        CheckResult("dual transform matches weighted rate at gamma*",
                    dual_err <= 1e-9, f"max rel err {dual_err:.2e}"),
        CheckResult("quadratic transform matches dual surrogate at y*",
                    quad_err <= 1e-9, f"max rel err {quad_err:.2e}"),
        CheckResult("gamma*/y* are local maxima (finite differences)",
                    stat_fail == 0, f"{stat_fail} violations"),
    ]


def suite_admission_oracle(
    n_instances: int = 1000, grid_points: int = 4001, seed: int = 11
) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    for utility in ("sum", "proportional", "common"):
        worst = -np.inf
        for _ in range(n_instances):
            n = int(rng.integers(1, 5))
            v = 10.0 ** rng.uniform(1, 6)
            dmax = 10.0 ** rng.uniform(0, 5)
            cfg = AdmissionConfig(utility=utility, v_param=v, d_max=dmax)
            Q = rng.uniform(0.0, 1.5 * (v + dmax), size=n)
            closed = admission_objective(Q, admit(Q, cfg), cfg)
            grid = admission_objective(Q, admission_oracle(Q, cfg, grid_points), cfg)
            scale = max(abs(closed), abs(grid), 1.0)
            worst = max(worst, (closed - grid) / scale)
        out.append(CheckResult(
            f"{utility}: closed form at least as good as grid oracle",
            worst <= 1e-9, f"worst normalized gap {worst:.2e}"))
    return out


def suite_scheduler_oracle(
    n_instances: int = 20,
    n_samples: int = 100_000,
    seed: int = 3,
) -> list[CheckResult]:
    """Converged objective against a random-search lower bound over
    feasible (f, alpha) with the closed-form receiver."""
    from .scheduler import update_g

    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_instances):
        ch, _, Q, lb, p = random_instance(rng, 2, 2)
        cfg = SchedulerConfig(power_budget=p, epsilon=1e-6, it_max=300)
        res = schedule_slot(Q, ch, cfg, lb)
        best = 0.0
        for _ in range(n_samples // 1000):
            f = rng.standard_normal((1000, 2)) + 1j * rng.standard_normal((1000, 2))
            f *= (np.sqrt(p * rng.uniform(0.0, 1.0, size=1000))
                  / np.linalg.norm(f, axis=1))[:, None]
            alphas = rng.uniform(0.0, lb.alpha_max, size=(1000, 2))
            for k in range(0, 1000, 100):  # evaluate a subsample with optimal g
                dec = BeamformingDecision(f=f[k], G=np.empty_like(ch.h),
                                          alpha=alphas[k])
                dec.G = update_g(ch, dec, lb)
                val = float(Q @ shannon_rate(sinr_all(ch, dec, lb), lb))
                best = max(best, val)
        worst = min(worst, res.objective / max(best, 1e-30))
    return [CheckResult(
        "converged objective >= 0.999 x random-search bound",
        worst >= 0.999, f"worst ratio {worst:.6f}")]


def suite_queue_bounds(seed: int = 1) -> list[CheckResult]:
    out = []
    for utility in ("sum", "proportional", "common"):
        ok, detail = True, ""
        for s in range(10):
            cfg = NetworkConfig(utility=utility, v_param=1e5, horizon=100,
                                seed=seed + s)
            try:
                res = run(cfg)
            except AssertionError as exc:  # InvariantViolation
                ok, detail = False, str(exc)
                break
            bound = cfg.v_param + cfg.d_max_bits
            if res.summary.max_queue_seen > bound:
                ok = False
                detail = f"max queue {res.summary.max_queue_seen} > {bound}"
                break
        out.append(CheckResult(f"{utility}: queues stay below V + D_max over 10 seeds",
                               ok, detail))
    return out


def suite_fbl(seed: int = 5) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    lb = LinkBudget(noise_power=1e-14, bandwidth=5000.0)
    s = 10.0 ** rng.uniform(-3, 3, size=2000)
    shannon = shannon_rate(s, lb)
    checks = []
    ok = True
    for ell in (100, 1000, 10_000):
        r = fbl_rate(s, FblParams(blocklength=ell, error_prob=1e-3), lb)
        ok &= bool(np.all(r <= shannon + 1e-9))
    checks.append(CheckResult("finite-blocklength rate never exceeds Shannon", ok))
    lengths = [100, 1000, 10_000, None]
    rates = [fbl_rate(s, FblParams(blocklength=ell, error_prob=1e-3), lb)
             for ell in lengths]
    mono_l = all(np.all(rates[i] <= rates[i + 1] + 1e-9) for i in range(3))
    checks.append(CheckResult("rate nondecreasing in blocklength", mono_l))
    psis = [1e-5, 1e-4, 1e-3, 1e-2]
    rates_psi = [fbl_rate(s, FblParams(blocklength=100, error_prob=p), lb)
                 for p in psis]
    mono_p = all(np.all(rates_psi[i] <= rates_psi[i + 1] + 1e-9) for i in range(3))
    checks.append(CheckResult("rate nondecreasing in error probability", mono_p))
    exact = np.array_equal(
        fbl_rate(s, FblParams(blocklength=None), lb), shannon
    )
    checks.append(CheckResult("unbounded blocklength equals Shannon exactly", exact))
    return checks


SUITES = {
    "transforms": suite_transforms,
    "admission_oracle": suite_admission_oracle,
    "scheduler_oracle": suite_scheduler_oracle,
    "queue_bounds": suite_queue_bounds,
    "fbl": suite_fbl,
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name]()
