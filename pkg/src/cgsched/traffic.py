"""Per-period packet arrival laws and their PMF over transmission occasions."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .model import CgConfig

PMF_TOL = 1e-12


@dataclass(frozen=True)
class AlwaysAtSlot:
    slot: int = 0
    kind = "always"


@dataclass(frozen=True)
class UniformOverSlots:
    lo: int
    hi: int
    kind = "uniform"


@dataclass(frozen=True)
class GeometricDelay:
    """Arrival offset ~ Geometric on {0, 1, ...} with mean ``mean_slots``.

    Mass beyond the last slot of the period means no arrival in that period.
    """

    mean_slots: float
    kind = "geometric"


@dataclass(frozen=True)
class ExplicitPmf:
    """Arrival exactly at TO ``i`` with probability ``p[i-1]``, none with ``p_o``."""

    p_o: float
    p: tuple[float, ...] = ()
    kind = "pmf"

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))


TrafficModel = Union[AlwaysAtSlot, UniformOverSlots, GeometricDelay, ExplicitPmf]


def traffic_violations(model: TrafficModel, config: CgConfig) -> list[str]:
    P = config.period_slots
    if isinstance(model, AlwaysAtSlot):
        if not 0 <= model.slot < P:
            return [f"arrival slot {model.slot} outside [0, {P})"]
    elif isinstance(model, UniformOverSlots):
        if not 0 <= model.lo <= model.hi < P:
            return [f"uniform range requires 0 <= lo <= hi < {P}"]
    elif isinstance(model, GeometricDelay):
        if not model.mean_slots > 0:
            return ["geometric mean arrival must be positive"]
    elif isinstance(model, ExplicitPmf):
        probs = (model.p_o,) + model.p
        if any(not 0.0 <= x <= 1.0 for x in probs):
            return ["probability out of range"]
        if abs(sum(probs) - 1.0) > PMF_TOL:
            return ["arrival PMF does not sum to 1"]
        if len(model.p) > config.T:
            return ["arrival PMF longer than the number of TOs"]
    else:
        return [f"unknown traffic model {model!r}"]
    return []


def slot_distribution(model: TrafficModel, config: CgConfig) -> tuple[np.ndarray, float]:
    """Probability of arrival at each in-period slot offset, plus P(no arrival)."""
    P = config.period_slots
    probs = np.zeros(P)
    if isinstance(model, AlwaysAtSlot):
        probs[model.slot] = 1.0
    elif isinstance(model, UniformOverSlots):
        probs[model.lo : model.hi + 1] = 1.0 / (model.hi - model.lo + 1)
    elif isinstance(model, GeometricDelay):
        success = 1.0 / (1.0 + model.mean_slots)
        k = np.arange(P)
        probs = success * (1.0 - success) ** k
    elif isinstance(model, ExplicitPmf):
        for off, p in zip(config.to_offsets, model.p):
            probs[off] += p
    else:
        raise TypeError(f"unknown traffic model {model!r}")
    p_none = max(0.0, 1.0 - float(probs.sum()))
    if isinstance(model, ExplicitPmf):
        p_none = model.p_o
    return probs, p_none


def first_usable_to(config: CgConfig, offset: int) -> Optional[int]:
    """0-based index of the first TO at or after in-period ``offset``."""
    idx = bisect.bisect_left(config.to_offsets, offset)
    return idx if idx < config.T else None


def arrival_pmf(model: TrafficModel, config: CgConfig) -> tuple[float, list[float]]:
    """``(p_o, [p_1..p_T])``: p_i is P(first usable TO is the i-th).

    Arrivals after the last TO fold into p_o.
    """
    probs, p_none = slot_distribution(model, config)
    p = [0.0] * config.T
    p_o = p_none
    for off, mass in enumerate(probs):
        if mass == 0.0:
            continue
        idx = first_usable_to(config, off)
        if idx is None:
            p_o += mass
        else:
            p[idx] += mass
    return p_o, p


def _cdf(model: TrafficModel, config: CgConfig) -> np.ndarray:
    probs, p_none = slot_distribution(model, config)
    cdf = np.cumsum(probs)
    if p_none <= PMF_TOL and cdf[-1] > 0:
        # keep round-off in the sum from leaking mass into "no arrival"
        cdf = np.minimum(cdf / cdf[-1], 1.0)
    return cdf


def _inverse_cdf(cdf: np.ndarray, u):
    # index == len(cdf) means no arrival
    return np.searchsorted(cdf, u, side="right")


def sample_arrival(model: TrafficModel, config: CgConfig, rng: np.random.Generator, period_index: int) -> Optional[int]:
    """Absolute arrival slot in period ``period_index`` or None. Consumes one uniform."""
    idx = int(_inverse_cdf(_cdf(model, config), rng.random()))
    if idx >= config.period_slots:
        return None
    return period_index * config.period_slots + idx


def sample_offsets(model: TrafficModel, config: CgConfig, uniforms: np.ndarray) -> np.ndarray:
    """Vectorised in-period arrival offsets from uniforms; ``period_slots`` marks no arrival."""
    return _inverse_cdf(_cdf(model, config), uniforms)
