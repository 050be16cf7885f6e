"""Replicated Monte-Carlo driver.

Period ``i`` of a run owns a fixed block of ``draws_per_packet`` uniforms in
the Philox stream keyed by ``master_seed``: the first picks the arrival
offset, the next ones decide reception of repetition 0, 1, ... in slot
order. Results therefore do not depend on chunking or on the number of
workers, and changing a parameter that only extends a plan (larger D,
larger T) keeps common random numbers for the shared prefix.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import CgConfig, validate_config
from .phy import ChannelParams, DecodeModel, RepOutcome, decode, transmit
from .schemes import TransmissionPlan, plan, wasted_tos
from .traffic import TrafficModel, sample_arrival, sample_offsets, slot_distribution, traffic_violations

CHUNK = 1 << 16
TABLE_MAX_REPS = 16


@dataclass(frozen=True)
class Scenario:
    config: CgConfig
    traffic: TrafficModel
    channel: ChannelParams = field(default_factory=ChannelParams)
    slot_duration_ms: float = 1.0
    packets: int = 100_000
    master_seed: int = 1
    scenario_id: str = "s0"
    ci_z: float = 1.96


def scenario_violations(s: Scenario) -> list[str]:
    out = validate_config(s.config)
    if not out:
        out += traffic_violations(s.traffic, s.config)
    out += s.channel.violations()
    if s.packets < 1:
        out.append("packets must be >= 1")
    if not s.slot_duration_ms > 0:
        out.append("slot_duration_ms must be positive")
    if not 0 <= s.master_seed < 2**64:
        out.append("master_seed must be an unsigned 64-bit integer")
    return out


@dataclass(frozen=True)
class Percentiles:
    p50: float
    p90: float
    p99: float
    max: float

    def scaled(self, factor: float) -> "Percentiles":
        return Percentiles(self.p50 * factor, self.p90 * factor, self.p99 * factor, self.max * factor)


NAN_PERCENTILES = Percentiles(math.nan, math.nan, math.nan, math.nan)


@dataclass(frozen=True)
class SimReport:
    periods: int
    attempted: int
    delivered: int
    reliability: float
    ci_lo: float
    ci_hi: float
    latency_slots: Percentiles
    latency_ms: Percentiles
    mean_wastage_tos: float
    wastage_std: float
    tos_allocated_per_period: int
    shared_reps_used: int


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval, clamped to [0, 1]."""
    if trials <= 0:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    n = trials
    phat = successes / n
    denom = 1.0 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def percentile(samples, q: float):
    """Nearest-rank percentile: element ``ceil(q*n)`` (1-based) of the sorted samples."""
    if len(samples) == 0:
        raise ValueError("percentile of empty sample")
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    ordered = np.sort(np.asarray(samples))
    rank = max(1, math.ceil(q * len(ordered) - 1e-12))
    return ordered[rank - 1].item()


def draws_per_packet(config: CgConfig) -> int:
    # one arrival draw + one per repetition, padded to whole Philox blocks
    return 4 * math.ceil((1 + config.rep_count) / 4)


def packet_rng(master_seed: int, packet: int, config: CgConfig) -> np.random.Generator:
    """Generator positioned at the start of ``packet``'s block of uniforms."""
    M = draws_per_packet(config)
    return np.random.Generator(np.random.Philox(key=master_seed, counter=packet * M // 4))


@dataclass(frozen=True)
class PacketResult:
    arrival: Optional[int]
    plan: TransmissionPlan
    decoded: bool
    decode_slot: Optional[int]
    wasted: int

    @property
    def latency_slots(self) -> Optional[int]:
        return None if self.decode_slot is None else self.decode_slot - self.arrival + 1


def simulate_packet(s: Scenario, packet: int) -> PacketResult:
    """Slow scalar path for one period, built from the public per-step APIs."""
    cfg = s.config
    rng = packet_rng(s.master_seed, packet, cfg)
    arrival = sample_arrival(s.traffic, cfg, rng, packet)
    wasted = wasted_tos(cfg, arrival, packet)
    if arrival is None:
        return PacketResult(None, TransmissionPlan(), False, None, wasted)
    pl = plan(cfg, arrival)
    ok, slot = decode(transmit(pl, s.channel, rng), s.channel.decode_model)
    if ok and slot >= arrival + cfg.latency_budget_slots:
        ok, slot = False, None
    return PacketResult(arrival, pl, ok, slot, wasted)


@dataclass
class _Template:
    reps: tuple
    rel_slots: np.ndarray
    p_rx: np.ndarray
    n_shared: int
    wasted: int
    table: Optional[np.ndarray]  # decode position per received-subset bitmask


def _decode_table(pl: TransmissionPlan, model: DecodeModel) -> np.ndarray:
    reps = pl.repetitions
    pos = {r.slot: j for j, r in enumerate(reps)}
    table = np.full(1 << len(reps), -1, dtype=np.int64)
    for mask in range(1 << len(reps)):
        outs = [RepOutcome(r, bool(mask >> j & 1)) for j, r in enumerate(reps)]
        ok, slot = decode(outs, model)
        if ok:
            table[mask] = pos[slot]
    return table


def _templates(s: Scenario, probs: np.ndarray) -> dict[int, _Template]:
    cfg, ch = s.config, s.channel
    out = {}
    for off in np.flatnonzero(probs):
        off = int(off)
        pl = plan(cfg, off)
        n = len(pl)
        table = None
        if ch.decode_model is not DecodeModel.ANY_SUCCESS and n <= TABLE_MAX_REPS:
            table = _decode_table(pl, ch.decode_model)
        out[off] = _Template(
            reps=pl.repetitions,
            rel_slots=np.array([r.slot - off for r in pl.repetitions], dtype=np.int64),
            p_rx=np.array([ch.p_receive(r.resource) for r in pl.repetitions]),
            n_shared=pl.n_shared,
            wasted=wasted_tos(cfg, off, 0),
            table=table,
        )
    return out


@dataclass
class _Tally:
    attempted: int = 0
    delivered: int = 0
    shared_reps: int = 0
    wastage_sum: float = 0.0
    wastage_sq: float = 0.0
    latencies: list = field(default_factory=list)


def _run_chunk(s: Scenario, templates, start: int, stop: int) -> _Tally:
    cfg = s.config
    M = draws_per_packet(cfg)
    gen = packet_rng(s.master_seed, start, cfg)
    u = gen.random((stop - start) * M).reshape(stop - start, M)
    offs = sample_offsets(s.traffic, cfg, u[:, 0])
    t = _Tally()
    n_none = int(np.count_nonzero(offs >= cfg.period_slots))
    t.wastage_sum += n_none * cfg.T
    t.wastage_sq += n_none * cfg.T**2
    D = cfg.latency_budget_slots
    for off, tpl in templates.items():
        rows = np.flatnonzero(offs == off)
        if rows.size == 0:
            continue
        t.attempted += rows.size
        t.shared_reps += rows.size * tpl.n_shared
        t.wastage_sum += rows.size * tpl.wasted
        t.wastage_sq += rows.size * tpl.wasted**2
        n = tpl.rel_slots.size
        if n == 0:
            continue
        recv = u[rows, 1 : 1 + n] < tpl.p_rx
        if s.channel.decode_model is DecodeModel.ANY_SUCCESS:
            ok = recv.any(axis=1)
            first = recv.argmax(axis=1)
        elif tpl.table is not None:
            idx = tpl.table[recv @ (1 << np.arange(n, dtype=np.int64))]
            ok = idx >= 0
            first = np.where(ok, idx, 0)
        else:
            ok = np.zeros(rows.size, dtype=bool)
            first = np.zeros(rows.size, dtype=np.int64)
            pos = {r.slot: j for j, r in enumerate(tpl.reps)}
            for k, row in enumerate(recv):
                got, slot = decode([RepOutcome(r, bool(g)) for r, g in zip(tpl.reps, row)], s.channel.decode_model)
                if got:
                    ok[k], first[k] = True, pos[slot]
        lat = tpl.rel_slots[first[ok]] + 1
        lat = lat[lat <= D]
        t.delivered += lat.size
        t.latencies.append(lat)
    return t


def run(s: Scenario, workers: int = 1) -> SimReport:
    bad = scenario_violations(s)
    if bad:
        raise ValueError("; ".join(bad))
    probs, _ = slot_distribution(s.traffic, s.config)
    templates = _templates(s, probs)
    bounds = [(a, min(a + CHUNK, s.packets)) for a in range(0, s.packets, CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(lambda b: _run_chunk(s, templates, *b), bounds))
    else:
        tallies = [_run_chunk(s, templates, a, b) for a, b in bounds]

    attempted = sum(t.attempted for t in tallies)
    delivered = sum(t.delivered for t in tallies)
    w_sum = sum(t.wastage_sum for t in tallies)
    w_sq = sum(t.wastage_sq for t in tallies)
    lats = [a for t in tallies for a in t.latencies]
    lat = np.sort(np.concatenate(lats)) if lats else np.empty(0, dtype=np.int64)

    if attempted:
        rel = delivered / attempted
        lo, hi = wilson_ci(delivered, attempted, s.ci_z)
    else:
        rel = lo = hi = math.nan
    if lat.size:
        pct = Percentiles(*(float(percentile(lat, q)) for q in (0.5, 0.9, 0.99, 1.0)))
    else:
        pct = NAN_PERCENTILES
    mean_w = w_sum / s.packets
    var_w = max(0.0, w_sq / s.packets - mean_w**2)
    return SimReport(
        periods=s.packets,
        attempted=attempted,
        delivered=delivered,
        reliability=rel,
        ci_lo=lo,
        ci_hi=hi,
        latency_slots=pct,
        latency_ms=pct.scaled(s.slot_duration_ms),
        mean_wastage_tos=mean_w,
        wastage_std=math.sqrt(var_w),
        tos_allocated_per_period=s.config.tos_per_period,
        shared_reps_used=sum(t.shared_reps for t in tallies),
    )
