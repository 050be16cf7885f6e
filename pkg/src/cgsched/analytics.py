"""Exact reliability, T-dimensioning and expected TO wastage.

Reliability is conditional on a packet arriving in the period. It is
computed per arrival slot, so the latency-budget clipping and deferral
applied by the planners are reproduced exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import CgConfig, FlexibleOffset, RvPattern, SchemeKind, check_config
from .phy import ChannelParams, DecodeModel, Predicate, RepOutcome, decode
from .schemes import TransmissionPlan, plan
from .traffic import (
    ExplicitPmf,
    TrafficModel,
    first_usable_to,
    slot_distribution,
    traffic_violations,
)

ENUMERATION_MAX_T = 16


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class ArrivalTerm:
    offset: int
    to_index: Optional[int]  # 1-based, None after the last TO
    prob: float
    n_cg: int
    n_shared: int
    success: float


@dataclass(frozen=True)
class ReliabilityResult:
    reliability: float
    terms: tuple[ArrivalTerm, ...]


def plan_success_prob(
    pl: TransmissionPlan,
    params: ChannelParams,
    predicate: Optional[Predicate] = None,
) -> float:
    """P(decode) for a fixed plan.

    Closed form ``1 - eps^n_cg * f^n_sh`` for any-success, otherwise exact
    enumeration of all received subsets.
    """
    if predicate is None and params.decode_model is DecodeModel.ANY_SUCCESS:
        f = 1.0 - (1.0 - params.shared_collision) * (1.0 - params.epsilon)
        return 1.0 - params.epsilon ** pl.n_cg * f ** pl.n_shared
    reps = pl.repetitions
    p_rx = [params.p_receive(r.resource) for r in reps]
    total = 0.0
    for pattern in itertools.product((False, True), repeat=len(reps)):
        w = math.prod(p if got else 1.0 - p for p, got in zip(p_rx, pattern))
        if w == 0.0:
            continue
        outcomes = [RepOutcome(r, got) for r, got in zip(reps, pattern)]
        ok, _ = decode(outcomes, params.decode_model, predicate)
        if ok:
            total += w
    return total


def reliability_exact(
    config: CgConfig,
    traffic: TrafficModel,
    params: ChannelParams,
    predicate: Optional[Predicate] = None,
) -> ReliabilityResult:
    """Exact delivery probability given an arrival, for the scheme in ``config``."""
    check_config(config)
    bad = traffic_violations(traffic, config) + params.violations()
    if bad:
        raise ValueError("; ".join(bad))
    enumerating = predicate is not None or params.decode_model is DecodeModel.RV_AWARE
    if enumerating and config.T > ENUMERATION_MAX_T:
        raise ValueError(f"enumeration bound exceeded: T={config.T} > {ENUMERATION_MAX_T}")

    probs, _ = slot_distribution(traffic, config)
    return _reliability_from_slots(config, probs, params, predicate)


def _reliability_from_slots(config, probs, params, predicate) -> ReliabilityResult:
    mass = float(probs.sum())
    if mass <= 0.0:
        raise ValueError("traffic law never produces an arrival")
    terms = []
    for off, p in enumerate(probs):
        if p == 0.0:
            continue
        pl = plan(config, off)
        idx = first_usable_to(config, off)
        terms.append(
            ArrivalTerm(
                offset=off,
                to_index=None if idx is None else idx + 1,
                prob=p / mass,
                n_cg=pl.n_cg,
                n_shared=pl.n_shared,
                success=plan_success_prob(pl, params, predicate),
            )
        )
    rel = math.fsum(t.prob * t.success for t in terms)
    return ReliabilityResult(min(1.0, max(0.0, rel)), tuple(terms))


def window_config(
    r: int,
    rep_count: int,
    scheme: SchemeKind,
    period_slots: int,
    pattern: RvPattern = RvPattern(),
    latency_budget_slots: Optional[int] = None,
    max_periods_deferral: int = 0,
) -> CgConfig:
    """Config with ``r`` contiguous TOs at offsets ``0..r-1``."""
    return CgConfig(
        period_slots=period_slots,
        to_offsets=tuple(range(r)),
        rep_count=rep_count,
        rv_pattern=pattern,
        scheme=scheme,
        latency_budget_slots=latency_budget_slots,
        max_periods_deferral=max_periods_deferral,
    )


def dimension_T(
    traffic: TrafficModel,
    epsilon: float,
    target: float,
    rep_count: Optional[int] = None,
    scheme: SchemeKind = FlexibleOffset(),
    r_max: int = 32,
    period_slots: Optional[int] = None,
    shared_collision: float = 0.0,
    pattern: RvPattern = RvPattern(),
    latency_budget_slots: Optional[int] = None,
    max_periods_deferral: int = 0,
) -> int:
    """Smallest TO count r in ``[K, r_max]`` whose exact reliability meets ``target``.

    ``rep_count=None`` ties K to r (search starts at 1). The traffic law is
    held fixed while the window ``0..r-1`` grows; arrivals after the window
    count as failures unless deferral is enabled. An explicit PMF puts TO
    ``i`` at slot ``i-1``.
    """
    if not 0.0 <= target < 1.0:
        raise ValueError("target must lie in [0, 1)")
    P = period_slots or r_max
    if r_max > P:
        raise ValueError("r_max exceeds the period")
    params = ChannelParams(epsilon=epsilon, shared_collision=shared_collision)
    r_min = 1 if rep_count is None else rep_count
    for r in range(r_min, r_max + 1):
        cfg = window_config(
            r, r if rep_count is None else rep_count, scheme, P, pattern,
            latency_budget_slots, max_periods_deferral,
        )
        if isinstance(traffic, ExplicitPmf):
            if len(traffic.p) > P:
                raise ValueError("explicit PMF longer than the period")
            probs = np.zeros(P)
            probs[: len(traffic.p)] = traffic.p
            rel = _reliability_from_slots(check_config(cfg), probs, params, None).reliability
        else:
            rel = reliability_exact(cfg, traffic, params).reliability
        if rel >= target:
            return r
    raise InfeasibleError(f"no T in [{r_min}, {r_max}] reaches reliability {target}")


def expected_wastage(p_o: float, p: Sequence[float], T: Optional[int] = None) -> float:
    """Expected unused TOs per period: ``p_o*T + sum_i p_i*(i-1)``."""
    T = len(p) if T is None else T
    if len(p) != T:
        raise ValueError("length of p must equal T")
    if abs(p_o + math.fsum(p) - 1.0) > 1e-9:
        raise ValueError("arrival PMF not normalized")
    return p_o * T + math.fsum(pi * i for i, pi in enumerate(p))
