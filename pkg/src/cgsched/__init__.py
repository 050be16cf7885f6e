"""Configured-grant uplink repetition scheduling: planners, oracles and a Monte-Carlo engine."""
from .analytics import InfeasibleError, dimension_T, expected_wastage, reliability_exact, window_config
from .engine import Scenario, SimReport, run, wilson_ci
from .model import (
    PATTERN_0231,
    PATTERN_0303,
    PATTERN_ALL_ZERO,
    BaselineFirstTo,
    BaselineStartAtRv0,
    CgConfig,
    FlexibleOffset,
    MultiConfig,
    RvPattern,
    SharedAssist,
    SharedParams,
    generate_offsets,
    validate_config,
)
from .phy import ChannelParams, DecodeModel, collision_prob
from .schemes import plan
from .traffic import AlwaysAtSlot, ExplicitPmf, GeometricDelay, UniformOverSlots, arrival_pmf

__all__ = [
    "PATTERN_0231", "PATTERN_0303", "PATTERN_ALL_ZERO", "InfeasibleError", "window_config",
    "AlwaysAtSlot", "BaselineFirstTo", "BaselineStartAtRv0", "CgConfig", "ChannelParams",
    "DecodeModel", "ExplicitPmf", "FlexibleOffset", "GeometricDelay", "MultiConfig", "RvPattern",
    "Scenario", "SharedAssist", "SharedParams", "SimReport", "UniformOverSlots", "arrival_pmf",
    "collision_prob", "dimension_T", "expected_wastage", "generate_offsets", "plan",
    "reliability_exact", "run", "validate_config", "wilson_ci",
]
__version__ = "0.1.0"
