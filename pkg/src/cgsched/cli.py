"""Scenario files, subcommands and report emission.

Scenario files are sectioned ``key = value`` text::

    [config]
    period = 10
    offsets = 0,1,2,3,4,5     # or: t = 6, gap = 0, start = 0
    k = 4
    pattern = 0,2,3,1
    scheme = flexible          # first_to | start_at_rv0 | flexible | shared_assist | multi
    budget = 10                # latency budget D in slots (default: period)
    max_deferral = 1
    mask = 7                   # blocked slot residues (TDD downlink)

    [traffic]
    kind = uniform             # always(slot) | uniform(lo, hi) | geometric(mean) | pmf(p_o, p)
    lo = 0
    hi = 5

    [channel]
    epsilon = 0.1
    decode = any_success       # any_success | rv_aware

    [shared]                   # shared_assist only
    lbt_delay = 0
    collision = 0.2            # or: contenders = 5, q = 0.2

    [sim]
    packets = 100000
    seed = 1
    slot_ms = 0.125

    [multi.0]                  # scheme = multi: one section per member config
    offsets = 0,1,2,3
    k = 4
    scheme = first_to
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .analytics import InfeasibleError, dimension_T, expected_wastage, reliability_exact
from .engine import Scenario, SimReport, run, scenario_violations
from .model import (
    BaselineFirstTo,
    BaselineStartAtRv0,
    CgConfig,
    FlexibleOffset,
    MultiConfig,
    RvPattern,
    SharedAssist,
    SharedParams,
    generate_offsets,
    infer_gap,
    multi_config,
    validate_config,
)
from .phy import ChannelParams, DecodeModel
from .traffic import (
    AlwaysAtSlot,
    ExplicitPmf,
    GeometricDelay,
    UniformOverSlots,
    arrival_pmf,
    traffic_violations,
)

CSV_COLUMNS = (
    "scenario_id", "scheme", "T", "K", "gap", "epsilon", "collision", "packets", "seed",
    "reliability", "ci_lo", "ci_hi", "latency_p50_slots", "latency_p99_slots",
    "latency_p99_ms", "mean_wastage_tos", "tos_per_period", "shared_reps_used",
)
FORMATS = ("csv", "json-lines", "table")
SUBCOMMANDS = ("simulate", "analyze", "dimension", "wastage", "sweep")

SCHEMES = {
    "first_to": BaselineFirstTo,
    "start_at_rv0": BaselineStartAtRv0,
    "flexible": FlexibleOffset,
}

_CONFIG_KEYS = {"period", "offsets", "t", "gap", "start", "k", "pattern", "scheme", "budget", "max_deferral", "mask"}
_MEMBER_KEYS = {"offsets", "t", "gap", "start", "k", "pattern", "scheme"}
_TRAFFIC_KEYS = {
    "always": {"slot"},
    "uniform": {"lo", "hi"},
    "geometric": {"mean"},
    "pmf": {"p_o", "p"},
}
_SECTION_KEYS = {
    "config": _CONFIG_KEYS,
    "traffic": {"kind", "slot", "lo", "hi", "mean", "p_o", "p"},
    "channel": {"epsilon", "collision", "decode"},
    "shared": {"lbt_delay", "collision", "contenders", "q"},
    "sim": {"packets", "seed", "slot_ms", "ci_z", "id"},
}


class ScenarioError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


# ---------------------------------------------------------------- parsing


class _Section:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.items: dict[str, tuple[str, int]] = {}
        self.used: set[str] = set()

    def has(self, key):
        return key in self.items

    def line_of(self, key):
        return self.items[key][1] if key in self.items else self.line

    def raw(self, key, default=None):
        if key not in self.items:
            if default is _REQUIRED:
                raise ScenarioError(f"[{self.name}] missing required key '{key}'", self.line)
            return default
        self.used.add(key)
        return self.items[key][0]

    def get(self, key, conv, default=None):
        raw = self.raw(key, default)
        if raw is None:
            return None
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed value for '{key}': {raw!r} ({exc})", self.line_of(key)) from None


_REQUIRED = object()


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        pass
    v = float(s)
    if not v.is_integer():
        raise ValueError("expected an integer")
    return int(v)


def _prob(s: str) -> float:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise ValueError("probability out of range")
    return v


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(_int(x) for x in s.split(",") if x.strip())


def _float_list(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _read_sections(text: str) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([A-Za-z_][\w.]*)\]", line)
        if m:
            name = m.group(1)
            if name not in _SECTION_KEYS and not re.fullmatch(r"multi\.\d+", name):
                raise ScenarioError(f"unknown section [{name}]", lineno)
            if name in sections:
                raise ScenarioError(f"duplicate section [{name}]", lineno)
            current = sections[name] = _Section(name, lineno)
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*)\s*=\s*(.*)", line)
        if not m:
            raise ScenarioError(f"cannot parse line: {line!r}", lineno)
        if current is None:
            raise ScenarioError("key outside of any section", lineno)
        key, value = m.group(1).lower(), m.group(2).strip()
        allowed = _MEMBER_KEYS if current.name.startswith("multi.") else _SECTION_KEYS[current.name]
        if key not in allowed:
            raise ScenarioError(f"unknown key '{key}' in [{current.name}]", lineno)
        if key in current.items:
            raise ScenarioError(f"duplicate key '{key}'", lineno)
        current.items[key] = (value, lineno)
    return sections


def _offsets(sec: _Section) -> tuple[int, ...]:
    if sec.has("offsets"):
        if any(sec.has(k) for k in ("t", "gap", "start")):
            raise ScenarioError("give either offsets or t/gap/start, not both", sec.line_of("offsets"))
        return sec.get("offsets", _int_list)
    T = sec.get("t", _int, _REQUIRED)
    return tuple(generate_offsets(T, sec.get("gap", _int, "0"), sec.get("start", _int, "0")))


def _scheme_name(sec: _Section, default: str) -> str:
    name = sec.get("scheme", str.lower, default)
    if name not in (*SCHEMES, "shared_assist", "multi"):
        raise ScenarioError(f"unknown scheme '{name}'", sec.line_of("scheme"))
    return name


def _shared_params(sec: Optional[_Section], line: int) -> SharedParams:
    if sec is None:
        raise ScenarioError("scheme shared_assist needs a [shared] section", line)
    sp = SharedParams(
        lbt_delay_slots=sec.get("lbt_delay", _int, "0"),
        collision=sec.get("collision", _prob),
        contenders=sec.get("contenders", _int),
        tx_prob=sec.get("q", _prob),
    )
    bad = sp.violations()
    if bad:
        raise ScenarioError("; ".join(bad), sec.line)
    return sp


def parse_scenario(text: str, default_id: str = "s0") -> Scenario:
    """Parse and validate a scenario file's contents."""
    secs = _read_sections(text)
    for required in ("config", "traffic", "channel"):
        if required not in secs:
            raise ScenarioError(f"missing section [{required}]")
    c = secs["config"]
    period = c.get("period", _int, _REQUIRED)
    scheme_name = _scheme_name(c, "flexible")
    pattern = RvPattern(c.get("pattern", _int_list, "0,2,3,1"))
    budget = c.get("budget", _int, str(period))
    deferral = c.get("max_deferral", _int, "1")
    mask = frozenset(c.get("mask", _int_list, ""))

    shared = None
    if scheme_name == "shared_assist":
        shared = _shared_params(secs.get("shared"), c.line_of("scheme"))

    if scheme_name == "multi":
        for key in ("offsets", "t", "gap", "start", "k"):
            if c.has(key):
                raise ScenarioError(f"'{key}' belongs in [multi.N] sections when scheme = multi", c.line_of(key))
        names = sorted((n for n in secs if n.startswith("multi.")), key=lambda n: int(n.split(".")[1]))
        members = []
        for n in names:
            m = secs[n]
            member_scheme = _scheme_name(m, "first_to")
            if member_scheme == "multi":
                raise ScenarioError("member configs cannot be multi", m.line_of("scheme"))
            members.append(
                CgConfig(
                    period_slots=period,
                    to_offsets=_offsets(m),
                    rep_count=m.get("k", _int, _REQUIRED),
                    rv_pattern=RvPattern(m.get("pattern", _int_list, str(pattern))),
                    scheme=SharedAssist(shared) if member_scheme == "shared_assist" else SCHEMES[member_scheme](),
                    latency_budget_slots=budget,
                    max_periods_deferral=deferral,
                    availability_mask=mask,
                )
            )
            _check_unused(m)
        if len(members) < 2:
            raise ScenarioError("scheme multi needs at least two [multi.N] sections", c.line)
        config = multi_config(members, budget, deferral, mask)
        config = dataclasses.replace(config, rv_pattern=pattern)
    else:
        for n in secs:
            if n.startswith("multi."):
                raise ScenarioError(f"[{n}] requires scheme = multi", secs[n].line)
        config = CgConfig(
            period_slots=period,
            to_offsets=_offsets(c),
            rep_count=c.get("k", _int, _REQUIRED),
            rv_pattern=pattern,
            scheme=SharedAssist(shared) if shared else SCHEMES[scheme_name](),
            latency_budget_slots=budget,
            max_periods_deferral=deferral,
            availability_mask=mask,
        )
    _check_unused(c)
    bad = validate_config(config)
    if bad:
        raise ScenarioError("invalid config: " + "; ".join(bad), c.line)

    traffic = _parse_traffic(secs["traffic"], config)

    ch = secs["channel"]
    decode_name = ch.get("decode", str.lower, "any_success")
    try:
        decode_model = DecodeModel(decode_name)
    except ValueError:
        raise ScenarioError(f"unknown decode model '{decode_name}'", ch.line_of("decode")) from None
    collision = ch.get("collision", _prob, "0")
    if shared is not None:
        if ch.has("collision") and collision != shared.collision_probability:
            raise ScenarioError("[channel] collision disagrees with [shared]", ch.line_of("collision"))
        collision = shared.collision_probability
    channel = ChannelParams(ch.get("epsilon", _prob, _REQUIRED), collision, decode_model)
    _check_unused(ch)
    if "shared" in secs and shared is None:
        raise ScenarioError("[shared] is only meaningful with scheme = shared_assist", secs["shared"].line)

    sim = secs.get("sim") or _Section("sim", 0)
    scenario = Scenario(
        config=config,
        traffic=traffic,
        channel=channel,
        slot_duration_ms=sim.get("slot_ms", float, "1.0"),
        packets=sim.get("packets", _int, "100000"),
        master_seed=sim.get("seed", _int, "1"),
        scenario_id=sim.get("id", str, default_id),
        ci_z=sim.get("ci_z", float, "1.96"),
    )
    bad = scenario_violations(scenario)
    if bad:
        raise ScenarioError("; ".join(bad), sim.line or None)
    return scenario


def _parse_traffic(t: _Section, config: CgConfig):
    kind = t.get("kind", str.lower, _REQUIRED)
    if kind not in _TRAFFIC_KEYS:
        raise ScenarioError(f"unknown traffic kind '{kind}'", t.line_of("kind"))
    for key in t.items:
        if key != "kind" and key not in _TRAFFIC_KEYS[kind]:
            raise ScenarioError(f"unknown key '{key}' for traffic kind {kind}", t.line_of(key))
    if kind == "always":
        model = AlwaysAtSlot(t.get("slot", _int, "0"))
    elif kind == "uniform":
        model = UniformOverSlots(t.get("lo", _int, _REQUIRED), t.get("hi", _int, _REQUIRED))
    elif kind == "geometric":
        model = GeometricDelay(t.get("mean", float, _REQUIRED))
    else:
        model = ExplicitPmf(t.get("p_o", _prob, _REQUIRED), t.get("p", _float_list, ""))
    bad = traffic_violations(model, config)
    if bad:
        raise ScenarioError("; ".join(bad), t.line)
    return model


def _check_unused(sec: _Section):
    for key in sec.items:
        if key not in sec.used:
            raise ScenarioError(f"key '{key}' is not used here", sec.line_of(key))


def _fmt_num(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _ints(xs) -> str:
    return ",".join(str(x) for x in xs)


def format_scenario(s: Scenario) -> str:
    """Canonical scenario text; ``parse_scenario`` of it returns an equal Scenario."""
    c = s.config
    out = ["[config]", f"period = {c.period_slots}"]
    scheme = c.scheme
    if isinstance(scheme, MultiConfig):
        out.append("scheme = multi")
    else:
        out += [f"offsets = {_ints(c.to_offsets)}", f"k = {c.rep_count}", f"scheme = {scheme.name}"]
    out += [
        f"pattern = {c.rv_pattern}",
        f"budget = {c.latency_budget_slots}",
        f"max_deferral = {c.max_periods_deferral}",
    ]
    if c.availability_mask:
        out.append(f"mask = {_ints(sorted(c.availability_mask))}")

    t = s.traffic
    out += ["", "[traffic]", f"kind = {t.kind}"]
    if isinstance(t, AlwaysAtSlot):
        out.append(f"slot = {t.slot}")
    elif isinstance(t, UniformOverSlots):
        out += [f"lo = {t.lo}", f"hi = {t.hi}"]
    elif isinstance(t, GeometricDelay):
        out.append(f"mean = {t.mean_slots!r}")
    else:
        out += [f"p_o = {t.p_o!r}", f"p = {','.join(repr(x) for x in t.p)}"]

    shared = scheme.shared if isinstance(scheme, SharedAssist) else None
    if isinstance(scheme, MultiConfig):
        shared = next((m.scheme.shared for m in scheme.configs if isinstance(m.scheme, SharedAssist)), None)
    out += ["", "[channel]", f"epsilon = {s.channel.epsilon!r}", f"decode = {s.channel.decode_model.value}"]
    if shared is None and s.channel.shared_collision:
        out.append(f"collision = {s.channel.shared_collision!r}")
    if shared is not None:
        out += ["", "[shared]", f"lbt_delay = {shared.lbt_delay_slots}"]
        if shared.collision is not None:
            out.append(f"collision = {shared.collision!r}")
        else:
            out += [f"contenders = {shared.contenders}", f"q = {shared.tx_prob!r}"]
    out += [
        "", "[sim]",
        f"packets = {s.packets}",
        f"seed = {s.master_seed}",
        f"slot_ms = {s.slot_duration_ms!r}",
        f"ci_z = {s.ci_z!r}",
        f"id = {s.scenario_id}",
    ]
    if isinstance(scheme, MultiConfig):
        for i, m in enumerate(scheme.configs):
            out += [
                "", f"[multi.{i}]",
                f"offsets = {_ints(m.to_offsets)}",
                f"k = {m.rep_count}",
                f"pattern = {m.rv_pattern}",
                f"scheme = {m.scheme.name}",
            ]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple[float, ...]


SWEEPABLE = {
    "channel.epsilon", "channel.collision", "shared.collision", "shared.lbt_delay",
    "config.T", "config.gap", "config.k", "config.budget", "config.D", "config.period",
    "config.max_deferral", "traffic.mean", "traffic.lo", "traffic.hi", "traffic.slot",
    "sim.seed", "sim.packets",
}


def parse_sweep(arg: str) -> SweepSpec:
    """``param=v1,v2,...`` or ``param=start:stop:step`` (stop inclusive)."""
    if "=" not in arg:
        raise ValueError(f"sweep must look like param=values, got {arg!r}")
    param, text = (x.strip() for x in arg.split("=", 1))
    if param not in SWEEPABLE:
        raise ValueError(f"'{param}' is not a sweepable parameter")
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError("range sweep needs start:stop:step with step > 0")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = tuple(round(start + i * step, 12) for i in range(max(n, 0)))
    else:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    if not values:
        raise ValueError(f"empty value set for {param}")
    return SweepSpec(param, values)


def _as_int(v: float, param: str) -> int:
    if not float(v).is_integer():
        raise ValueError(f"{param} needs integer values, got {v}")
    return int(v)


def apply_sweep(s: Scenario, param: str, value: float) -> Scenario:
    """Return ``s`` with one sweepable scalar replaced."""
    rep = dataclasses.replace
    c = s.config
    section, name = param.split(".", 1)
    if section == "channel" and name == "epsilon":
        return rep(s, channel=rep(s.channel, epsilon=float(value)))
    if name == "collision":
        ch = rep(s.channel, shared_collision=float(value))
        if isinstance(c.scheme, SharedAssist):
            sp = SharedParams(c.scheme.shared.lbt_delay_slots, collision=float(value))
            c = rep(c, scheme=SharedAssist(sp))
        return rep(s, channel=ch, config=c)
    if param == "shared.lbt_delay":
        if not isinstance(c.scheme, SharedAssist):
            raise ValueError("shared.lbt_delay needs scheme shared_assist")
        sp = rep(c.scheme.shared, lbt_delay_slots=_as_int(value, param))
        return rep(s, config=rep(c, scheme=SharedAssist(sp)))
    if section == "config":
        v = _as_int(value, param)
        if name in ("T", "gap", "k") and isinstance(c.scheme, MultiConfig):
            raise ValueError(f"{param} cannot be swept for multi-config scenarios")
        if name in ("T", "gap"):
            gap = infer_gap(c.to_offsets)
            if gap is None:
                raise ValueError(f"{param} sweep needs evenly spaced offsets")
            T = v if name == "T" else c.T
            gap = v if name == "gap" else gap
            new = rep(c, to_offsets=tuple(generate_offsets(T, gap, c.to_offsets[0])))
            if name == "T" and isinstance(c.scheme, SharedAssist):
                new = rep(new, rep_count=T)
            return rep(s, config=new)
        field_name = {
            "k": "rep_count", "budget": "latency_budget_slots", "D": "latency_budget_slots",
            "period": "period_slots", "max_deferral": "max_periods_deferral",
        }[name]
        return rep(s, config=rep(c, **{field_name: v}))
    if section == "traffic":
        t = s.traffic
        attr = {"mean": "mean_slots"}.get(name, name)
        if not hasattr(t, attr):
            raise ValueError(f"{param} does not apply to traffic kind {t.kind}")
        val = float(value) if attr == "mean_slots" else _as_int(value, param)
        return rep(s, traffic=rep(t, **{attr: val}))
    if param == "sim.seed":
        return rep(s, master_seed=_as_int(value, param))
    if param == "sim.packets":
        return rep(s, packets=_as_int(value, param))
    raise ValueError(f"'{param}' is not a sweepable parameter")


# ---------------------------------------------------------------- reports


def report_row(s: Scenario, r: SimReport) -> dict:
    c = s.config
    return {
        "scenario_id": s.scenario_id,
        "scheme": c.scheme.name,
        "T": c.T,
        "K": c.rep_count,
        "gap": infer_gap(c.to_offsets),
        "epsilon": s.channel.epsilon,
        "collision": s.channel.shared_collision,
        "packets": s.packets,
        "seed": s.master_seed,
        "reliability": r.reliability,
        "ci_lo": r.ci_lo,
        "ci_hi": r.ci_hi,
        "latency_p50_slots": r.latency_slots.p50,
        "latency_p99_slots": r.latency_slots.p99,
        "latency_p99_ms": r.latency_ms.p99,
        "mean_wastage_tos": r.mean_wastage_tos,
        "tos_per_period": r.tos_allocated_per_period,
        "shared_reps_used": r.shared_reps_used,
    }


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return None if math.isnan(v) else float(f"{v:.6g}")
    return v


def emit_report(rows: Sequence[dict], fmt: str = "csv", columns: Optional[Sequence[str]] = None) -> str:
    """Serialise report rows as csv, json-lines or a fixed-width table."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    columns = list(columns or (rows[0].keys() if rows else CSV_COLUMNS))
    if fmt == "json-lines":
        return "".join(json.dumps({k: _json_value(row.get(k)) for k in columns}) + "\n" for row in rows)
    cells = [[format_value(row.get(k)) for k in columns] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        return buf.getvalue()
    cells = [[x or "-" for x in r] for r in cells]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(columns)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(columns, widths))]
    lines += ["  ".join(x.rjust(w) for x, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list[list[str]]:
    """Cells of a table rendering; ``-`` marks an empty cell."""
    return [["" if x == "-" else x for x in line.split()] for line in text.splitlines() if line.strip()]


# ---------------------------------------------------------------- commands


def _analytic(s: Scenario) -> Optional[float]:
    try:
        return reliability_exact(s.config, s.traffic, s.channel).reliability
    except ValueError as exc:
        print(f"note: analytic oracle unavailable for {s.scenario_id}: {exc}", file=sys.stderr)
        return None


def run_command(subcommand: str, s: Scenario, opts: argparse.Namespace) -> str:
    """Execute one subcommand; raises on error, returns the serialised output."""
    fmt = opts.format
    workers = getattr(opts, "workers", 1)
    if subcommand == "simulate":
        return emit_report([report_row(s, run(s, workers))], fmt, CSV_COLUMNS)
    if subcommand == "analyze":
        res = reliability_exact(s.config, s.traffic, s.channel)
        if getattr(opts, "breakdown", False):
            rows = [dataclasses.asdict(t) for t in res.terms]
            return emit_report(rows, fmt, ("offset", "to_index", "prob", "n_cg", "n_shared", "success"))
        c = s.config
        row = {
            "scenario_id": s.scenario_id, "scheme": c.scheme.name, "T": c.T, "K": c.rep_count,
            "gap": infer_gap(c.to_offsets), "epsilon": s.channel.epsilon,
            "collision": s.channel.shared_collision, "reliability_exact": res.reliability,
        }
        return emit_report([row], fmt)
    if subcommand == "dimension":
        if opts.target is None:
            raise ValueError("dimension needs --target")
        c = s.config
        if isinstance(c.scheme, MultiConfig):
            raise ValueError("dimension does not support multi-config scenarios")
        r_max = opts.r_max or c.period_slots
        T = dimension_T(
            s.traffic, s.channel.epsilon, opts.target,
            rep_count=None if opts.k_equals_t else c.rep_count,
            scheme=c.scheme, r_max=r_max, period_slots=max(c.period_slots, r_max),
            shared_collision=s.channel.shared_collision, pattern=c.rv_pattern,
            latency_budget_slots=c.latency_budget_slots,
        )
        return f"{T}\n"
    if subcommand == "wastage":
        p_o, p = arrival_pmf(s.traffic, s.config)
        return format_value(expected_wastage(p_o, p, s.config.T)) + "\n"
    if subcommand == "sweep":
        specs = [parse_sweep(a) for a in (opts.sweep or [])]
        if not specs:
            raise ValueError("sweep needs at least one --sweep param=values")
        rows = []
        for combo in itertools.product(*(sp.values for sp in specs)):
            cur = s
            for sp, v in zip(specs, combo):
                cur = apply_sweep(cur, sp.param, v)
            bad = scenario_violations(cur)
            if bad:
                raise ValueError("; ".join(bad))
            row = report_row(cur, run(cur, workers))
            row["sweep"] = ";".join(f"{sp.param}={format_value(v)}" for sp, v in zip(specs, combo))
            row["reliability_exact"] = _analytic(cur)
            rows.append(row)
        return emit_report(rows, fmt, CSV_COLUMNS + ("sweep", "reliability_exact"))
    raise ValueError(f"unknown subcommand {subcommand!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgsched", description="Configured-grant repetition scheduling simulator")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--scenario", required=True, help="scenario file")
    p.add_argument("--seed", type=int, help="override [sim] seed")
    p.add_argument("--packets", type=int, help="override [sim] packets (periods simulated)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--sweep", action="append", metavar="PARAM=V1,V2,...")
    p.add_argument("--workers", type=int, default=1, help="parallel chunks")
    p.add_argument("--target", type=float, help="reliability target for dimension")
    p.add_argument("--r-max", type=int, help="largest T tried by dimension (default: period)")
    p.add_argument("--k-equals-t", action="store_true", help="dimension with K tied to T")
    p.add_argument("--breakdown", action="store_true", help="analyze: per-arrival terms")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        path = Path(opts.scenario)
        s = parse_scenario(path.read_text(), default_id=path.stem)
        if opts.seed is not None:
            s = dataclasses.replace(s, master_seed=opts.seed)
        if opts.packets is not None:
            s = dataclasses.replace(s, packets=opts.packets)
        bad = scenario_violations(s)
        if bad:
            raise ScenarioError("; ".join(bad))
        text = run_command(opts.subcommand, s, opts)
        if opts.out:
            Path(opts.out).write_text(text)
        else:
            sys.stdout.write(text)
    except (InfeasibleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
