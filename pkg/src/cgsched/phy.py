"""Repetition reception draws, decode predicates and the shared-band collision law."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Collection, Optional, Sequence

import numpy as np

from .schemes import PlannedRep, Resource, TransmissionPlan


class DecodeModel(enum.Enum):
    ANY_SUCCESS = "any_success"
    RV_AWARE = "rv_aware"


@dataclass(frozen=True)
class ChannelParams:
    epsilon: float = 0.0
    shared_collision: float = 0.0
    decode_model: DecodeModel = DecodeModel.ANY_SUCCESS

    def violations(self) -> list[str]:
        out = []
        if not 0.0 <= self.epsilon <= 1.0:
            out.append("epsilon: probability out of range")
        if not 0.0 <= self.shared_collision <= 1.0:
            out.append("shared_collision: probability out of range")
        return out

    def p_receive(self, resource: Resource) -> float:
        p = 1.0 - self.epsilon
        if resource is Resource.SHARED:
            p *= 1.0 - self.shared_collision
        return p


@dataclass(frozen=True)
class RepOutcome:
    rep: PlannedRep
    received: bool


def collision_prob(contenders: int, q: float) -> float:
    """Slotted-ALOHA collision probability ``1 - (1-q)^(N-1)``."""
    if contenders < 1:
        raise ValueError("contenders must be >= 1")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q out of range")
    return 1.0 - (1.0 - q) ** (contenders - 1)


def transmit(plan: TransmissionPlan, params: ChannelParams, rng: np.random.Generator) -> list[RepOutcome]:
    """Independent reception draw per repetition (one uniform each, in slot order)."""
    reps = plan.repetitions
    u = rng.random(len(reps))
    return [RepOutcome(r, bool(x < params.p_receive(r.resource))) for r, x in zip(reps, u)]


def rv_aware_decodable(rvs: Collection[int]) -> bool:
    """Default RV table: RV0 alone, RV3 with any other rep, or all of {1,2,3}."""
    s = set(rvs)
    if 0 in s:
        return True
    if 3 in s and len(rvs) >= 2:
        return True
    return {1, 2, 3} <= s


def any_success_decodable(rvs: Collection[int]) -> bool:
    return len(rvs) >= 1


Predicate = Callable[[Sequence[int]], bool]


def predicate_for(model: DecodeModel) -> Predicate:
    if model is DecodeModel.RV_AWARE:
        return rv_aware_decodable
    return any_success_decodable


def decode(
    outcomes: Sequence[RepOutcome],
    model: DecodeModel = DecodeModel.ANY_SUCCESS,
    predicate: Optional[Predicate] = None,
) -> tuple[bool, Optional[int]]:
    """Return ``(decoded, decode_slot)`` scanning received reps in slot order.

    ``predicate`` overrides the table implied by ``model``.
    """
    pred = predicate or predicate_for(model)
    acc: list[int] = []
    for o in sorted(outcomes, key=lambda o: o.rep.slot):
        if not o.received:
            continue
        acc.append(o.rep.rv)
        if pred(acc):
            return True, o.rep.slot
    return False, None
