import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from cgsched.cli import (
    CSV_COLUMNS,
    ScenarioError,
    apply_sweep,
    emit_report,
    format_scenario,
    main,
    parse_scenario,
    parse_sweep,
    parse_table,
)
from cgsched.engine import Scenario
from cgsched.model import BaselineFirstTo, FlexibleOffset, MultiConfig, SharedAssist, SharedParams
from cgsched.phy import ChannelParams, DecodeModel
from cgsched.traffic import AlwaysAtSlot, ExplicitPmf, GeometricDelay, UniformOverSlots

from conftest import configs, make_config

MINIMAL = """
[config]
period = 10
offsets = 0,1,2,3
k = 4
pattern = 0,2,3,1
scheme = flexible

[traffic]
kind = uniform
lo = 0
hi = 3

[channel]
epsilon = 0.1
"""


def test_minimal_scenario_defaults():
    s = parse_scenario(MINIMAL)
    assert s.config.latency_budget_slots == 10
    assert s.packets == 100_000
    assert s.master_seed == 1
    assert s.config.max_periods_deferral == 1
    assert s.channel.decode_model is DecodeModel.ANY_SUCCESS
    assert isinstance(s.config.scheme, FlexibleOffset)
    assert s.traffic == UniformOverSlots(0, 3)


def test_generated_offsets_in_file():
    s = parse_scenario(MINIMAL.replace("offsets = 0,1,2,3", "t = 4\ngap = 1"))
    assert s.config.to_offsets == (0, 2, 4, 6)


def _err(text):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    return exc.value


def test_probability_out_of_range():
    e = _err(MINIMAL.replace("epsilon = 0.1", "epsilon = 1.5"))
    assert "probability out of range" in str(e)
    assert e.line == 15


def test_k_exceeds_t_reported():
    e = _err(MINIMAL.replace("k = 4", "k = 5"))
    assert "K exceeds T" in str(e)
    assert e.line == 2


@pytest.mark.parametrize(
    "old, new, fragment",
    [
        ("k = 4", "k = 4\nfoo = 1", "unknown key 'foo'"),
        ("period = 10", "period = ten", "malformed value"),
        ("[sim]", "[sim]", ""),
        ("[traffic]", "[trafic]", "unknown section"),
        ("lo = 0", "lo = 0\nmean = 2", "unknown key 'mean' for traffic kind uniform"),
        ("scheme = flexible", "scheme = fancy", "unknown scheme"),
        ("kind = uniform", "kind = bursty", "unknown traffic kind"),
        ("offsets = 0,1,2,3", "offsets = 0,1,2,3\nt = 4", "either offsets or t"),
        ("k = 4", "", "missing required key 'k'"),
        ("scheme = flexible", "scheme = shared_assist", "needs a [shared] section"),
        ("hi = 3", "hi = 12", "uniform range"),
        ("k = 4", "k = 4\nk = 3", "duplicate key"),
    ],
)
def test_parse_errors(old, new, fragment):
    if not fragment:
        return
    assert fragment in str(_err(MINIMAL.replace(old, new)))


def test_comments_and_shared_section():
    text = MINIMAL.replace("scheme = flexible", "scheme = shared_assist  # assist") + """
[shared]
lbt_delay = 2
contenders = 5
q = 0.2
[sim]
packets = 500
seed = 9
"""
    s = parse_scenario(text)
    assert s.config.scheme == SharedAssist(SharedParams(2, None, 5, 0.2))
    assert s.channel.shared_collision == pytest.approx(0.5904)
    assert (s.packets, s.master_seed) == (500, 9)


def test_multi_sections():
    text = """
[config]
period = 10
scheme = multi
budget = 15
[multi.0]
offsets = 0,1,2,3
k = 4
[multi.1]
t = 4
start = 5
k = 4
pattern = 0,0,0,0
[traffic]
kind = always
slot = 3
[channel]
epsilon = 0.2
"""
    s = parse_scenario(text)
    assert isinstance(s.config.scheme, MultiConfig)
    members = s.config.scheme.configs
    assert [m.to_offsets for m in members] == [(0, 1, 2, 3), (5, 6, 7, 8)]
    assert isinstance(members[0].scheme, BaselineFirstTo)
    assert s.config.to_offsets == (0, 1, 2, 3, 5, 6, 7, 8)
    assert parse_scenario(format_scenario(s)) == s


traffics = st.one_of(
    st.builds(AlwaysAtSlot, st.integers(0, 1)),
    st.builds(lambda hi: UniformOverSlots(0, hi), st.integers(0, 1)),
    st.builds(GeometricDelay, st.floats(0.01, 100)),
    st.just(ExplicitPmf(0.25, (0.75,))),
)


@settings(max_examples=200)
@given(configs(schemes=(BaselineFirstTo(), FlexibleOffset())), traffics, st.data())
def test_round_trip(cfg, traffic, data):
    eps = data.draw(st.floats(0, 1))
    use_shared = data.draw(st.booleans())
    collision = data.draw(st.floats(0, 1))
    if use_shared:
        cfg = make_config(P=cfg.period_slots, offsets=cfg.to_offsets, K=cfg.T, pattern=cfg.rv_pattern.ids,
                          D=cfg.latency_budget_slots, deferral=cfg.max_periods_deferral,
                          mask=cfg.availability_mask,
                          scheme=SharedAssist(SharedParams(data.draw(st.integers(0, 4)), collision=collision)))
    s = Scenario(
        config=cfg,
        traffic=traffic,
        channel=ChannelParams(eps, collision, data.draw(st.sampled_from(list(DecodeModel)))),
        slot_duration_ms=data.draw(st.floats(0.01, 10)),
        packets=data.draw(st.integers(1, 10**7)),
        master_seed=data.draw(st.integers(0, 2**64 - 1)),
        scenario_id=data.draw(st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)),
    )
    assert parse_scenario(format_scenario(s)) == s


def test_parse_sweep_forms():
    assert parse_sweep("channel.epsilon=0.05,0.1,0.2").values == (0.05, 0.1, 0.2)
    assert parse_sweep("config.T=4:8:1").values == (4, 5, 6, 7, 8)
    with pytest.raises(ValueError):
        parse_sweep("channel.nope=1")
    with pytest.raises(ValueError):
        parse_sweep("config.T=4:8:0")


def test_apply_sweep_rebuilds_offsets():
    s = parse_scenario(MINIMAL.replace("offsets = 0,1,2,3", "t = 4\ngap = 1\nstart = 1"))
    assert apply_sweep(s, "config.T", 6).config.to_offsets == (1, 3, 5, 7, 9, 11)
    assert apply_sweep(s, "config.gap", 0).config.to_offsets == (1, 2, 3, 4)
    assert apply_sweep(s, "config.budget", 3).config.latency_budget_slots == 3
    with pytest.raises(ValueError):
        apply_sweep(s, "traffic.mean", 2.0)


def _row(**kw):
    row = {c: i for i, c in enumerate(CSV_COLUMNS)}
    row.update(scenario_id="x", scheme="flexible", reliability=0.123456789, gap=None)
    row.update(kw)
    return row


def test_csv_has_exact_columns():
    out = emit_report([_row()], "csv", CSV_COLUMNS)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 2
    assert rows[1][CSV_COLUMNS.index("reliability")] == "0.123457"


def test_csv_row_count():
    out = emit_report([_row(), _row(), _row()], "csv", CSV_COLUMNS)
    assert len(out.strip().splitlines()) == 4


def test_table_matches_csv_fields():
    rows = [_row(), _row(reliability=1.0, scenario_id="y")]
    table = parse_table(emit_report(rows, "table", CSV_COLUMNS))
    via_csv = list(csv.reader(io.StringIO(emit_report(rows, "csv", CSV_COLUMNS))))
    assert table == via_csv


def test_json_lines():
    out = emit_report([_row(reliability=float("nan"))], "json-lines", CSV_COLUMNS)
    obj = json.loads(out)
    assert list(obj) == list(CSV_COLUMNS)
    assert obj["reliability"] is None


@pytest.fixture
def scenario_file(tmp_path):
    def write(text, name="sc.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


ALWAYS0 = MINIMAL.replace("kind = uniform\nlo = 0\nhi = 3", "kind = always\nslot = 0")


def test_cli_dimension(scenario_file, capsys):
    assert main(["dimension", "--scenario", scenario_file(ALWAYS0), "--target", "0.9999"]) == 0
    assert capsys.readouterr().out == "4\n"
    assert main(["dimension", "--scenario", scenario_file(ALWAYS0), "--target", "0.99", "--k-equals-t"]) == 0
    assert capsys.readouterr().out == "2\n"


def test_cli_dimension_infeasible(scenario_file, capsys):
    path = scenario_file(ALWAYS0.replace("epsilon = 0.1", "epsilon = 0.9"))
    assert main(["dimension", "--scenario", path, "--target", "0.9999", "--r-max", "6"]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_wastage(scenario_file, capsys):
    assert main(["wastage", "--scenario", scenario_file(MINIMAL)]) == 0
    assert capsys.readouterr().out == "1.5\n"


def test_cli_simulate_and_analyze(scenario_file, capsys, tmp_path):
    out = tmp_path / "r.csv"
    path = scenario_file(MINIMAL)
    assert main(["simulate", "--scenario", path, "--packets", "5000", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and rows[0]["scenario_id"] == "sc" and rows[0]["packets"] == "5000"
    assert main(["analyze", "--scenario", path, "--format", "json-lines"]) == 0
    assert json.loads(capsys.readouterr().out)["reliability_exact"] == pytest.approx(
        (1 - 0.1**4 + 1 - 0.1**3 + 1 - 0.1**2 + 1 - 0.1) / 4, rel=1e-6)


def test_cli_sweep_epsilon(scenario_file, capsys):
    path = scenario_file(MINIMAL)
    assert main(["sweep", "--scenario", path, "--packets", "20000",
                 "--sweep", "channel.epsilon=0.05,0.1,0.2"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 3
    rel = [float(r["reliability"]) for r in rows]
    assert rel[0] > rel[1] > rel[2]
    assert all(r["reliability_exact"] for r in rows)


def test_cli_sweep_product(scenario_file, capsys):
    path = scenario_file(MINIMAL)
    assert main(["sweep", "--scenario", path, "--packets", "1000", "--sweep", "channel.epsilon=0.1,0.2",
                 "--sweep", "config.budget=2,4,8"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 1 + 6


def test_cli_errors_give_nonzero_status(scenario_file, capsys, tmp_path):
    assert main(["simulate", "--scenario", str(tmp_path / "missing.ini")]) == 1
    assert main(["simulate", "--scenario", scenario_file(MINIMAL.replace("k = 4", "k = 9"))]) == 1
    assert main(["sweep", "--scenario", scenario_file(MINIMAL)]) == 1
    assert main(["simulate", "--scenario", scenario_file(MINIMAL), "--packets", "10",
                 "--out", str(tmp_path / "nodir" / "x.csv")]) == 1
    err = capsys.readouterr().err
    assert err.count("error:") == 4


def test_cli_oracle_unavailable_still_simulates(scenario_file, capsys):
    text = MINIMAL.replace("offsets = 0,1,2,3", "t = 17").replace("period = 10", "period = 20") \
        .replace("epsilon = 0.1", "epsilon = 0.1\ndecode = rv_aware")
    assert main(["sweep", "--scenario", scenario_file(text), "--packets", "500",
                 "--sweep", "channel.epsilon=0.1"]) == 0
    cap = capsys.readouterr()
    assert "oracle unavailable" in cap.err
    row = next(csv.DictReader(io.StringIO(cap.out)))
    assert row["reliability_exact"] == "" and row["reliability"]
