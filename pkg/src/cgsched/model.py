"""Core configured-grant types and transmission-occasion geometry.

All types are frozen dataclasses. Constructors do not validate; call
:func:`validate_config` (returns violations) or :func:`check_config` (raises).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

RV_IDS = (0, 1, 2, 3)

# The three Release-16 CG patterns.
PATTERN_ALL_ZERO = (0, 0, 0, 0)
PATTERN_0303 = (0, 3, 0, 3)
PATTERN_0231 = (0, 2, 3, 1)


class ConfigError(ValueError):
    """Raised when a configuration violates its invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class RvPattern:
    ids: tuple[int, ...] = PATTERN_0231

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))

    def rv_at(self, position: int) -> int:
        # Patterns shorter than K repeat cyclically.
        return self.ids[position % len(self.ids)]

    def violations(self) -> list[str]:
        out = []
        if not self.ids:
            out.append("RV pattern is empty")
            return out
        bad = [i for i in self.ids if i not in RV_IDS]
        if bad:
            out.append(f"RV ids {bad} not in {{0,1,2,3}}")
        if self.ids[0] != 0:
            out.append("RV pattern must start with RV 0")
        return out

    def __str__(self):
        return ",".join(str(i) for i in self.ids)


@dataclass(frozen=True)
class SharedParams:
    """Shared-spectrum assist parameters.

    Exactly one of ``collision`` or the slotted-ALOHA pair
    (``contenders``, ``tx_prob``) must be set.
    """

    lbt_delay_slots: int = 0
    collision: Optional[float] = None
    contenders: Optional[int] = None
    tx_prob: Optional[float] = None

    def violations(self) -> list[str]:
        out = []
        if self.lbt_delay_slots < 0:
            out.append("lbt_delay_slots must be non-negative")
        explicit = self.collision is not None
        pair = self.contenders is not None or self.tx_prob is not None
        if explicit == pair:
            out.append("set exactly one of collision or (contenders, tx_prob)")
        if explicit and not 0.0 <= self.collision <= 1.0:
            out.append("collision probability out of range")
        if pair:
            if self.contenders is None or self.tx_prob is None:
                out.append("contenders and tx_prob must be set together")
            else:
                if self.contenders < 1:
                    out.append("contenders must be >= 1")
                if not 0.0 <= self.tx_prob <= 1.0:
                    out.append("tx_prob out of range")
        return out

    @property
    def collision_probability(self) -> float:
        if self.collision is not None:
            return float(self.collision)
        from .phy import collision_prob

        return collision_prob(self.contenders, self.tx_prob)


@dataclass(frozen=True)
class BaselineFirstTo:
    name = "first_to"


@dataclass(frozen=True)
class BaselineStartAtRv0:
    name = "start_at_rv0"


@dataclass(frozen=True)
class FlexibleOffset:
    name = "flexible"


@dataclass(frozen=True)
class SharedAssist:
    shared: SharedParams = field(default_factory=SharedParams)
    name = "shared_assist"


@dataclass(frozen=True)
class MultiConfig:
    configs: tuple["CgConfig", ...] = ()
    name = "multi"

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))


SchemeKind = Union[BaselineFirstTo, BaselineStartAtRv0, FlexibleOffset, SharedAssist, MultiConfig]
CG_SCHEMES = (BaselineFirstTo, BaselineStartAtRv0, FlexibleOffset)


@dataclass(frozen=True)
class CgConfig:
    period_slots: int
    to_offsets: tuple[int, ...]
    rep_count: int
    rv_pattern: RvPattern = field(default_factory=RvPattern)
    scheme: SchemeKind = field(default_factory=FlexibleOffset)
    latency_budget_slots: Optional[int] = None
    max_periods_deferral: int = 1
    availability_mask: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "to_offsets", tuple(int(o) for o in self.to_offsets))
        object.__setattr__(self, "availability_mask", frozenset(int(m) for m in self.availability_mask))
        if not isinstance(self.rv_pattern, RvPattern):
            object.__setattr__(self, "rv_pattern", RvPattern(tuple(self.rv_pattern)))
        if self.latency_budget_slots is None:
            object.__setattr__(self, "latency_budget_slots", self.period_slots)

    @property
    def T(self) -> int:
        return len(self.to_offsets)

    @property
    def K(self) -> int:
        return self.rep_count

    @property
    def tos_per_period(self) -> int:
        """TOs allocated per period, summed over members for multi-config."""
        if isinstance(self.scheme, MultiConfig):
            return sum(c.T for c in self.scheme.configs)
        return self.T

    def is_masked(self, slot: int) -> bool:
        return (slot % self.period_slots) in self.availability_mask


def validate_config(config: CgConfig) -> list[str]:
    """Return every invariant violation of ``config``; empty means valid."""
    out: list[str] = []
    P = config.period_slots
    if P < 1:
        out.append("period must be positive")
    offsets = config.to_offsets
    if not offsets:
        out.append("at least one TO offset is required")
    for o in offsets:
        if o < 0:
            out.append(f"offset {o} is negative")
        elif P >= 1 and o >= P:
            out.append(f"offset {o} ≥ period {P}")
    if any(b <= a for a, b in zip(offsets, offsets[1:])):
        out.append("offsets must be strictly increasing")
    if config.rep_count < 1:
        out.append("K must be positive")
    elif config.rep_count > len(offsets):
        out.append("K exceeds T")
    out.extend(config.rv_pattern.violations())
    if config.latency_budget_slots is None or config.latency_budget_slots < 1:
        out.append("latency budget D must be >= 1")
    if config.max_periods_deferral < 0:
        out.append("max_periods_deferral must be non-negative")
    if P >= 1 and any(not 0 <= m < P for m in config.availability_mask):
        out.append("availability mask residues must lie in [0, period)")

    scheme = config.scheme
    if isinstance(scheme, SharedAssist):
        out.extend(scheme.shared.violations())
        if config.T != config.rep_count:
            out.append("shared assist requires T == K")
    elif isinstance(scheme, MultiConfig):
        out.extend(_multi_violations(config, scheme))
    elif not isinstance(scheme, CG_SCHEMES):
        out.append(f"unknown scheme {scheme!r}")
    return out


def _multi_violations(config: CgConfig, scheme: MultiConfig) -> list[str]:
    out = []
    members = scheme.configs
    if len(members) < 2:
        out.append("multi-config needs at least 2 member configs")
    for idx, member in enumerate(members):
        if isinstance(member.scheme, MultiConfig):
            out.append(f"member {idx} may not itself be multi-config")
            continue
        out.extend(f"member {idx}: {v}" for v in validate_config(member))
        if member.period_slots != config.period_slots:
            out.append(f"member {idx}: period differs from enclosing config")
    firsts = [m.to_offsets[0] for m in members if m.to_offsets]
    if len(set(firsts)) != len(firsts):
        out.append("member configs must have distinct first-TO offsets")
    union = tuple(sorted({o for m in members for o in m.to_offsets}))
    if members and config.to_offsets != union:
        out.append("multi-config offsets must be the union of member offsets")
    return out


def check_config(config: CgConfig) -> CgConfig:
    violations = validate_config(config)
    if violations:
        raise ConfigError(violations)
    return config


def multi_config(
    members: Sequence[CgConfig],
    latency_budget_slots: Optional[int] = None,
    max_periods_deferral: int = 1,
    availability_mask: frozenset[int] = frozenset(),
) -> CgConfig:
    """Wrap member configs into one enclosing multi-config."""
    members = tuple(members)
    union = tuple(sorted({o for m in members for o in m.to_offsets}))
    return CgConfig(
        period_slots=members[0].period_slots,
        to_offsets=union,
        rep_count=max(m.rep_count for m in members),
        rv_pattern=members[0].rv_pattern,
        scheme=MultiConfig(members),
        latency_budget_slots=latency_budget_slots,
        max_periods_deferral=max_periods_deferral,
        availability_mask=availability_mask,
    )


def generate_offsets(T: int, gap: int = 0, start: int = 0) -> list[int]:
    """TO offsets ``start, start+(gap+1), ...``; ``gap=0`` is the consecutive layout."""
    return [start + j * (gap + 1) for j in range(T)]


def infer_gap(offsets: Sequence[int]) -> Optional[int]:
    """Gap of an evenly spaced offset list, or None if spacing is irregular."""
    if len(offsets) < 2:
        return 0
    steps = {b - a for a, b in zip(offsets, offsets[1:])}
    if len(steps) != 1:
        return None
    return steps.pop() - 1


def tos_in_period(config: CgConfig, period_index: int) -> list[tuple[int, int]]:
    """Unmasked TOs of a period as ``(absolute slot, pattern position)`` pairs."""
    base = period_index * config.period_slots
    return [
        (base + off, pos)
        for pos, off in enumerate(config.to_offsets)
        if off not in config.availability_mask
    ]
