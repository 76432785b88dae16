"""Run configuration: dataclasses, defaults, and JSON loading.

A configuration file is a JSON object whose keys are ``NetworkConfig``
field names, plus the optional experiment keys ``sweep`` (mapping of
field name to list of values, expanded as a cartesian product),
``output_dir`` and ``emit``. Unknown keys are rejected. An empty object
yields the default desk-scale setup (5 nodes, 5 antennas, -110 dBm
noise, 500 mW, 5 kHz, D_max = 30 kbits, alpha_max = 0.8).

Noise is configured in dBm and converted to watts at load time; all
internal computation is in SI units.
"""

import itertools
import json
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .admission import UTILITIES, AdmissionConfig
from .channel import ChannelParams, Geometry, RicianChannel, draw_geometry
from .phy import FblParams, LinkBudget
from .scheduler import SchedulerConfig

__all__ = ["NetworkConfig", "ExperimentSpec", "ConfigError", "load_config", "parse_spec"]

CONTROLLERS = ("mdpp", "mrt_baseline")
EMIT_KINDS = ("summary_json", "slots_csv", "sweep_csv")


class ConfigError(ValueError):
    """Configuration parse or validation failure; the message names the
    offending field."""


@dataclass
class NetworkConfig:
    # topology
    num_bns: int = 5
    num_antennas: int = 5
    # link budget
    noise_dbm: float = -110.0
    power_w: float = 0.5
    bandwidth_hz: float = 5000.0
    slot_seconds: float = 1.0
    alpha_max: float = 0.8
    # admission
    utility: str = "sum"
    v_param: float = 1e5
    d_max_bits: float = 30e3
    # scheduler
    epsilon: float = 0.01
    it_max: int = 100
    eta_tol: float = 1e-6
    # channel / geometry
    rician_k: float = 1.0
    pathloss_exp: float = 3.0
    carrier_freq_hz: float = 915e6
    distances_m: list[float] | None = None  # explicit placement overrides the disc
    avg_distance_m: float = 30.0
    # rate model
    blocklength: int | None = None  # None = unbounded codewords (Shannon)
    error_prob: float = 1e-3
    # run shape
    controller: str = "mdpp"
    horizon: int = 1000
    seed: int = 1
    replicas: int = 1
    warmup_fraction: float = 0.1
    workers: int = 1

    @property
    def noise_power_w(self) -> float:
        return 10.0 ** (self.noise_dbm / 10.0) * 1e-3

    def validate(self) -> "NetworkConfig":
        def check(cond, name, msg):
            if not cond:
                raise ConfigError(f"{name}: {msg}")

        check(self.num_bns >= 1, "num_bns", "must be >= 1")
        check(self.num_antennas >= 1, "num_antennas", "must be >= 1")
        check(self.power_w > 0, "power_w", "must be positive")
        check(self.bandwidth_hz > 0, "bandwidth_hz", "must be positive")
        check(self.slot_seconds > 0, "slot_seconds", "must be positive")
        check(0 < self.alpha_max <= 1, "alpha_max", "must lie in (0, 1]")
        check(self.utility in UTILITIES, "utility", f"must be one of {UTILITIES}")
        check(self.v_param > 0, "v_param", "must be positive")
        check(self.d_max_bits > 0, "d_max_bits", "must be positive")
        check(self.epsilon > 0, "epsilon", "must be positive")
        check(self.it_max >= 1, "it_max", "must be >= 1")
        check(self.eta_tol > 0, "eta_tol", "must be positive")
        check(self.rician_k >= 0, "rician_k", "must be >= 0")
        check(self.pathloss_exp > 0, "pathloss_exp", "must be positive")
        check(self.carrier_freq_hz > 0, "carrier_freq_hz", "must be positive")
        if self.distances_m is not None:
            check(len(self.distances_m) == self.num_bns, "distances_m",
                  "length must equal num_bns")
            check(all(d > 0 for d in self.distances_m), "distances_m",
                  "distances must be positive")
        check(self.avg_distance_m > 0, "avg_distance_m", "must be positive")
        if self.blocklength is not None:
            check(self.blocklength >= 1, "blocklength", "must be >= 1 when finite")
        check(0 < self.error_prob < 1, "error_prob", "must lie in (0, 1)")
        check(self.controller in CONTROLLERS, "controller",
              f"must be one of {CONTROLLERS}")
        check(self.horizon >= 1, "horizon", "must be >= 1")
        check(self.replicas >= 1, "replicas", "must be >= 1")
        check(0 <= self.warmup_fraction < 1, "warmup_fraction", "must lie in [0, 1)")
        check(self.workers >= 1 or self.workers == -1, "workers",
              "must be >= 1 (or -1 for all cores)")
        return self

    # component builders -------------------------------------------------
    def link_budget(self) -> LinkBudget:
        return LinkBudget(
            noise_power=self.noise_power_w,
            bandwidth=self.bandwidth_hz,
            slot_seconds=self.slot_seconds,
            alpha_max=self.alpha_max,
        )

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            rician_k=self.rician_k,
            pathloss_exp=self.pathloss_exp,
            carrier_freq=self.carrier_freq_hz,
            num_antennas=self.num_antennas,
        )

    def scheduler_config(self) -> SchedulerConfig:
        return SchedulerConfig(
            power_budget=self.power_w,
            epsilon=self.epsilon,
            it_max=self.it_max,
            eta_tol=self.eta_tol,
        )

    def admission_config(self) -> AdmissionConfig:
        return AdmissionConfig(
            utility=self.utility, v_param=self.v_param, d_max=self.d_max_bits
        )

    def fbl_params(self) -> FblParams:
        return FblParams(blocklength=self.blocklength, error_prob=self.error_prob)

    def build_channel(self, rng: np.random.Generator) -> RicianChannel:
        """Channel model for one replica: explicit distances if given,
        otherwise a fresh disc placement; angles always drawn from the
        replica stream and then held fixed."""
        if self.distances_m is not None:
            angles = rng.uniform(-np.pi / 2, np.pi / 2, size=self.num_bns)
            geom = Geometry(
                distances=np.asarray(self.distances_m, dtype=float), angles=angles
            )
        else:
            geom = draw_geometry(self.num_bns, self.avg_distance_m, rng)
        return RicianChannel(geom, self.channel_params())


@dataclass
class ExperimentSpec:
    base: NetworkConfig
    sweep: list[tuple[str, list]] = field(default_factory=list)
    output_dir: str = "results"
    emit: tuple[str, ...] = ("summary_json", "slots_csv", "sweep_csv")

    def points(self) -> list[NetworkConfig]:
        """Expand the sweep into one config per cartesian-product point."""
        if not self.sweep:
            return [self.base]
        names = [name for name, _ in self.sweep]
        out = []
        for combo in itertools.product(*(vals for _, vals in self.sweep)):
            out.append(replace(self.base, **dict(zip(names, combo))).validate())
        return out


_FIELD_NAMES = {f.name for f in fields(NetworkConfig)}
_SPEC_KEYS = {"sweep", "output_dir", "emit"}


def parse_spec(doc: dict) -> ExperimentSpec:
    """Build an ExperimentSpec from a decoded JSON object."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")
    unknown = set(doc) - _FIELD_NAMES - _SPEC_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    cfg_kwargs = {k: v for k, v in doc.items() if k in _FIELD_NAMES}
    try:
        base = NetworkConfig(**cfg_kwargs).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    sweep: list[tuple[str, list]] = []
    for name, values in dict(doc.get("sweep", {})).items():
        if name not in _FIELD_NAMES:
            raise ConfigError(f"sweep: unknown config field {name!r}")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep: {name}: expected a nonempty list")
        sweep.append((name, values))
    emit = tuple(doc.get("emit", EMIT_KINDS))
    for kind in emit:
        if kind not in EMIT_KINDS:
            raise ConfigError(f"emit: unknown output kind {kind!r}")
    return ExperimentSpec(
        base=base,
        sweep=sweep,
        output_dir=str(doc.get("output_dir", "results")),
        emit=emit,
    )


def load_config(path: str) -> ExperimentSpec:
    """Parse a JSON configuration file into an ExperimentSpec."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    return parse_spec(doc)
