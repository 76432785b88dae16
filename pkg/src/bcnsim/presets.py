"""Named scenario presets producing plot-ready sweeps.

Each preset expands to an ExperimentSpec with the default parameter set
(5 nodes, 5 antennas, -110 dBm noise, 500 mW, 5 kHz, D_max = 30 kbits)
and desk-scale horizons/replica counts so that every preset finishes in
minutes on one core. Horizons and replica counts are therefore smaller
than a full study would use; scale them up via overrides for
publication-grade noise floors.
"""

from dataclasses import replace

from .config import ExperimentSpec, NetworkConfig

__all__ = ["PRESETS", "build_preset"]


def _spec(base: NetworkConfig, sweep, out: str) -> ExperimentSpec:
    return ExperimentSpec(base=base.validate(), sweep=sweep, output_dir=out)


def fig3_convergence() -> ExperimentSpec:
    """Scheduler iteration counts versus node and antenna counts."""
    base = NetworkConfig(utility="sum", v_param=1e5, horizon=100, replicas=5)
    sweep = [("num_bns", [3, 5, 7]), ("num_antennas", [3, 5, 7])]
    return _spec(base, sweep, "results/fig3_convergence")


def fig4_tradeoff() -> ExperimentSpec:
    """Utility versus average queue level under the proportional utility:
    V from 1e7 to 1e9 crossed with antenna count and power budget."""
    base = NetworkConfig(utility="proportional", horizon=200, replicas=3,
                         warmup_fraction=0.2)
    sweep = [
        ("v_param", [1e7, 1e8, 1e9]),
        ("num_antennas", [6, 8, 10]),
        ("power_w", [0.1, 0.8]),
    ]
    return _spec(base, sweep, "results/fig4_tradeoff")


def fig5_common_vs_m() -> ExperimentSpec:
    """Common throughput utility versus the antenna count."""
    base = NetworkConfig(utility="common", v_param=1e5, horizon=300, replicas=5,
                         warmup_fraction=0.2)
    sweep = [("num_antennas", [6, 8, 10, 12])]
    return _spec(base, sweep, "results/fig5_common_vs_M")


def fig7_sum_vs_n() -> ExperimentSpec:
    """Sum throughput utility versus node count, scheduler against the
    conjugate-sum baseline, nodes in a 50 m-radius disc."""
    base = NetworkConfig(utility="sum", v_param=1e7, avg_distance_m=100.0 / 3.0,
                         horizon=600, replicas=5, warmup_fraction=0.5)
    sweep = [("controller", ["mdpp", "mrt_baseline"]), ("num_bns", [5, 7, 9])]
    return _spec(base, sweep, "results/fig7_sum_vs_N")


def fig8_fairness() -> ExperimentSpec:
    """Per-node throughput and received energy at staggered distances
    (18/22/30/34 m) under each utility. Uses V = 1e5 instead of the
    study-scale 1e7 so the steady state is reached within the horizon."""
    base = NetworkConfig(num_bns=4, distances_m=[18.0, 22.0, 30.0, 34.0],
                         v_param=1e5, horizon=800, replicas=3,
                         warmup_fraction=0.25)
    sweep = [("utility", ["sum", "proportional", "common"])]
    return _spec(base, sweep, "results/fig8_fairness")


def fig9_fbl_range() -> ExperimentSpec:
    """Common utility versus codeword length {inf, 1e4, 1e3, 1e2} at
    error probability 1e-3."""
    base = NetworkConfig(utility="common", v_param=1e5, error_prob=1e-3,
                         horizon=300, replicas=3, warmup_fraction=0.2)
    sweep = [("blocklength", [None, 10000, 1000, 100])]
    return _spec(base, sweep, "results/fig9_fbl_range")


def fig10_fbl_psi() -> ExperimentSpec:
    """Common utility versus decoder error probability for short
    codewords."""
    base = NetworkConfig(utility="common", v_param=1e5, horizon=300, replicas=3,
                         warmup_fraction=0.2)
    sweep = [
        ("blocklength", [100, 1000]),
        ("error_prob", [1e-5, 1e-4, 1e-3, 1e-2]),
    ]
    return _spec(base, sweep, "results/fig10_fbl_psi")


PRESETS = {
    "fig3_convergence": fig3_convergence,
    "fig4_tradeoff": fig4_tradeoff,
    "fig5_common_vs_M": fig5_common_vs_m,
    "fig7_sum_vs_N": fig7_sum_vs_n,
    "fig8_fairness": fig8_fairness,
    "fig9_fbl_range": fig9_fbl_range,
    "fig10_fbl_psi": fig10_fbl_psi,
}


def build_preset(name: str, overrides: dict | None = None) -> ExperimentSpec:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    spec = PRESETS[name]()
    if overrides:
        spec = ExperimentSpec(
            base=replace(spec.base, **overrides).validate(),
            sweep=spec.sweep,
            output_dir=spec.output_dir,
            emit=spec.emit,
        )
    return spec
