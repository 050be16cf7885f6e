from hypothesis import given, strategies as st

from cgsched.model import (
    ConfigError,
    MultiConfig,
    RvPattern,
    SharedAssist,
    SharedParams,
    check_config,
    generate_offsets,
    infer_gap,
    multi_config,
    tos_in_period,
    validate_config,
)

from conftest import configs, make_config

import pytest


def test_valid_config_has_no_violations():
    assert validate_config(make_config(P=10, offsets=[0, 1, 2, 3], K=4, pattern=(0, 2, 3, 1), D=10)) == []


def test_offset_beyond_period():
    assert validate_config(make_config(P=4, offsets=[0, 1, 5], K=2)) == ["offset 5 ≥ period 4"]


def test_k_exceeds_t():
    assert validate_config(make_config(offsets=[0, 1, 2, 3], K=5)) == ["K exceeds T"]


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(offsets=[2, 1]), "strictly increasing"),
        (dict(offsets=[]), "at least one TO"),
        (dict(K=0), "K must be positive"),
        (dict(D=0), "latency budget"),
        (dict(deferral=-1), "max_periods_deferral"),
        (dict(pattern=(3, 0)), "start with RV 0"),
        (dict(pattern=(0, 5)), "not in"),
        (dict(pattern=()), "empty"),
        (dict(mask=[12]), "mask"),
    ],
)
def test_each_invariant_reported(kwargs, fragment):
    out = validate_config(make_config(**kwargs))
    assert any(fragment in v for v in out), out


def test_check_config_raises_with_all_violations():
    with pytest.raises(ConfigError) as exc:
        check_config(make_config(P=4, offsets=[0, 1, 5], K=5))
    assert len(exc.value.violations) == 2


def test_shared_assist_requires_t_equals_k():
    cfg = make_config(offsets=range(6), K=4, scheme=SharedAssist(SharedParams(collision=0.1)))
    assert "shared assist requires T == K" in validate_config(cfg)


@pytest.mark.parametrize(
    "sp, ok",
    [
        (SharedParams(collision=0.2), True),
        (SharedParams(contenders=3, tx_prob=0.1), True),
        (SharedParams(), False),
        (SharedParams(collision=0.2, contenders=3, tx_prob=0.1), False),
        (SharedParams(contenders=3), False),
        (SharedParams(collision=1.5), False),
        (SharedParams(lbt_delay_slots=-1, collision=0.0), False),
    ],
)
def test_shared_params_exactly_one_source(sp, ok):
    assert (sp.violations() == []) is ok


def test_shared_params_derived_collision():
    assert SharedParams(contenders=5, tx_prob=0.2).collision_probability == pytest.approx(0.5904)


def test_multi_config_validation():
    a = make_config(offsets=[0, 1, 2, 3])
    b = make_config(offsets=[5, 6, 7, 8])
    assert validate_config(multi_config([a, b])) == []
    assert any("distinct" in v for v in validate_config(multi_config([a, a])))
    assert any("at least 2" in v for v in validate_config(multi_config([a])))
    nested = make_config(scheme=MultiConfig((a, b)))
    assert any("may not itself be multi" in v for v in validate_config(multi_config([nested, b])))


def test_rv_pattern_cycles_beyond_its_length():
    p = RvPattern((0, 2, 3, 1))
    assert [p.rv_at(i) for i in range(6)] == [0, 2, 3, 1, 0, 2]


@pytest.mark.parametrize(
    "T, gap, start, expected",
    [(4, 0, 0, [0, 1, 2, 3]), (4, 1, 0, [0, 2, 4, 6]), (1, 7, 3, [3])],
)
def test_generate_offsets(T, gap, start, expected):
    assert generate_offsets(T, gap, start) == expected


@given(st.integers(1, 50), st.integers(0, 10), st.integers(0, 100))
def test_generate_offsets_strictly_increasing(T, gap, start):
    out = generate_offsets(T, gap, start)
    assert len(out) == T
    assert all(b > a for a, b in zip(out, out[1:]))
    if T > 1:
        assert infer_gap(out) == gap


def test_infer_gap_irregular():
    assert infer_gap([0, 1, 3]) is None


def test_tos_in_period_shift():
    cfg = make_config(P=10, offsets=[0, 1, 2, 3])
    assert [s for s, _ in tos_in_period(cfg, 2)] == [20, 21, 22, 23]


def test_tos_in_period_mask_keeps_pattern_positions():
    cfg = make_config(P=10, offsets=[0, 1, 2, 3], mask={1})
    assert tos_in_period(cfg, 0) == [(0, 0), (2, 2), (3, 3)]


def test_tos_in_period_single():
    assert tos_in_period(make_config(offsets=[5], K=1), 0) == [(5, 0)]


@given(configs(), st.integers(0, 1000))
def test_tos_in_period_properties(cfg, n):
    tos = tos_in_period(cfg, n)
    P = cfg.period_slots
    assert all(n * P <= s < (n + 1) * P for s, _ in tos)
    positions = [p for _, p in tos]
    assert all(b > a for a, b in zip(positions, positions[1:]))
    assert all(s % P not in cfg.availability_mask for s, _ in tos)


@given(configs())
def test_validate_config_idempotent(cfg):
    first = validate_config(cfg)
    assert validate_config(cfg) == first
    assert first == []
