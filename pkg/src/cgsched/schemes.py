"""Map (config, arrival slot) to the repetitions a UE transmits.

RVs are bound to TO positions for the 3GPP baselines and to transmissions
for the flexible scheme. Every plan is clipped to the latency window
``[arrival, arrival + D)``. When a period yields nothing, the UE retries in
later periods, up to ``max_periods_deferral`` times.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .model import (
    CG_SCHEMES,
    BaselineFirstTo,
    BaselineStartAtRv0,
    CgConfig,
    FlexibleOffset,
    MultiConfig,
    SchemeKind,
    SharedAssist,
    SharedParams,
    tos_in_period,
)
from .traffic import first_usable_to


class Resource(enum.Enum):
    CG = "cg"
    SHARED = "shared"


@dataclass(frozen=True)
class PlannedRep:
    slot: int
    resource: Resource
    rv: int


@dataclass(frozen=True)
class TransmissionPlan:
    repetitions: tuple[PlannedRep, ...] = ()
    deferred_periods: int = 0
    chosen_config: Optional[int] = None

    def __len__(self):
        return len(self.repetitions)

    @property
    def n_cg(self) -> int:
        return sum(r.resource is Resource.CG for r in self.repetitions)

    @property
    def n_shared(self) -> int:
        return sum(r.resource is Resource.SHARED for r in self.repetitions)

    @property
    def slots(self) -> list[int]:
        return [r.slot for r in self.repetitions]


def _period_reps(scheme: SchemeKind, config: CgConfig, arrival: int, period: int) -> list[PlannedRep]:
    """Repetitions inside one period, before budget clipping."""
    tos = tos_in_period(config, period)
    K = config.rep_count
    rv_at = config.rv_pattern.rv_at
    if isinstance(scheme, BaselineFirstTo):
        if not tos or arrival > tos[0][0]:
            return []
        # masked TOs inside the first K positions are lost, not shifted
        return [PlannedRep(s, Resource.CG, rv_at(pos)) for s, pos in tos if pos < K]
    if isinstance(scheme, BaselineStartAtRv0):
        for idx, (s, pos) in enumerate(tos):
            if s >= arrival and rv_at(pos) == 0:
                return [PlannedRep(s2, Resource.CG, rv_at(p2)) for s2, p2 in tos[idx : idx + K]]
        return []
    if isinstance(scheme, FlexibleOffset):
        remaining = [s for s, _ in tos if s >= arrival][:K]
        return [PlannedRep(s, Resource.CG, rv_at(j)) for j, s in enumerate(remaining)]
    raise ValueError(f"scheme {scheme!r} is not a CG scheme")


def _deferring(
    period_fn: Callable[[int, int], tuple[list[PlannedRep], Optional[int]]],
    period_slots: int,
    budget: int,
    max_deferral: int,
    arrival: int,
) -> TransmissionPlan:
    n = arrival // period_slots
    deadline = arrival + budget
    for m in range(n, n + max_deferral + 1):
        start = arrival if m == n else m * period_slots
        if start >= deadline:
            break
        reps, chosen = period_fn(start, m)
        reps = [r for r in reps if r.slot < deadline]
        if reps:
            return TransmissionPlan(tuple(reps), m - n, chosen)
    return TransmissionPlan()


def plan_cg(config: CgConfig, arrival: int, scheme: Optional[SchemeKind] = None) -> TransmissionPlan:
    """Plan under one of the three licensed-only CG schemes."""
    scheme = config.scheme if scheme is None else scheme
    if not isinstance(scheme, CG_SCHEMES):
        raise ValueError(f"plan_cg does not handle scheme {scheme!r}")
    return _deferring(
        lambda start, m: (_period_reps(scheme, config, start, m), None),
        config.period_slots,
        config.latency_budget_slots,
        config.max_periods_deferral,
        arrival,
    )


def plan_shared_assist(config: CgConfig, shared: SharedParams, arrival: int) -> TransmissionPlan:
    """Flexible CG repetitions on the K TOs, the remainder on shared spectrum after LBT."""
    if config.T != config.rep_count:
        raise ValueError("shared assist requires T == K")
    period = arrival // config.period_slots
    cg = _period_reps(FlexibleOffset(), config, arrival, period)
    n_cg = len(cg)
    first_shared = max(cg[-1].slot if cg else arrival, arrival) + shared.lbt_delay_slots + 1
    rv_at = config.rv_pattern.rv_at
    sh = [
        PlannedRep(first_shared + j, Resource.SHARED, rv_at(n_cg + j))
        for j in range(config.rep_count - n_cg)
    ]
    deadline = arrival + config.latency_budget_slots
    return TransmissionPlan(tuple(r for r in cg + sh if r.slot < deadline))


def plan_multi_config(
    configs: Sequence[CgConfig],
    arrival: int,
    latency_budget_slots: Optional[int] = None,
    max_periods_deferral: Optional[int] = None,
) -> TransmissionPlan:
    """Use whichever member config can start transmitting soonest (ties: lowest index)."""
    if not configs:
        raise ValueError("plan_multi_config needs at least one config")
    budget = configs[0].latency_budget_slots if latency_budget_slots is None else latency_budget_slots
    deferral = configs[0].max_periods_deferral if max_periods_deferral is None else max_periods_deferral

    def period_fn(start, m):
        best, best_idx = [], None
        for idx, member in enumerate(configs):
            reps = _period_reps(member.scheme, member, start, m)
            if reps and (best_idx is None or reps[0].slot < best[0].slot):
                best, best_idx = reps, idx
        return best, best_idx

    return _deferring(period_fn, configs[0].period_slots, budget, deferral, arrival)


def plan(config: CgConfig, arrival: int) -> TransmissionPlan:
    """Dispatch on ``config.scheme``."""
    scheme = config.scheme
    if isinstance(scheme, SharedAssist):
        return plan_shared_assist(config, scheme.shared, arrival)
    if isinstance(scheme, MultiConfig):
        return plan_multi_config(
            scheme.configs, arrival, config.latency_budget_slots, config.max_periods_deferral
        )
    return plan_cg(config, arrival)


def wasted_tos(config: CgConfig, arrival: Optional[int], period_index: int) -> int:
    """TOs of the period that pass unused before the data arrives.

    ``i - 1`` for an arrival whose first usable TO is the i-th, ``T`` when
    there is no arrival or it comes after the last TO.
    """
    if arrival is None:
        return config.T
    idx = first_usable_to(config, arrival - period_index * config.period_slots)
    return config.T if idx is None else idx
