"""Online energy allocation and data scheduling for monostatic
backscatter networks with multi-antenna readers.

The closed loop couples three pieces solved fresh every slot:
a weighted-sum-rate link scheduler (alternating closed-form beamforming
and reflection-coefficient updates), a closed-form data-admission policy
for the chosen throughput utility, and the queue evolution that the two
jointly stabilize.
"""

from .admission import AdmissionConfig, QueueState, admit, admission_oracle, utility_value
from .channel import ChannelParams, ChannelState, Geometry, RicianChannel
from .config import ExperimentSpec, NetworkConfig, load_config
from .phy import BeamformingDecision, FblParams, LinkBudget, fbl_rate, shannon_rate, sinr
from .scheduler import ScheduleResult, SchedulerConfig, schedule_slot
from .sim import RunResult, RunSummary, queue_step, run, run_replicas

__all__ = [
    "AdmissionConfig",
    "BeamformingDecision",
    "ChannelParams",
    "ChannelState",
    "ExperimentSpec",
    "FblParams",
    "Geometry",
    "LinkBudget",
    "NetworkConfig",
    "QueueState",
    "RicianChannel",
    "RunResult",
    "RunSummary",
    "ScheduleResult",
    "SchedulerConfig",
    "admit",
    "admission_oracle",
    "fbl_rate",
    "load_config",
    "queue_step",
    "run",
    "run_replicas",
    "schedule_slot",
    "shannon_rate",
    "sinr",
    "utility_value",
]

__version__ = "0.1.0"
