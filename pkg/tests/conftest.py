import pytest
from hypothesis import strategies as st

from cgsched.model import (
    PATTERN_0231,
    PATTERN_0303,
    PATTERN_ALL_ZERO,
    BaselineFirstTo,
    BaselineStartAtRv0,
    CgConfig,
    FlexibleOffset,
    RvPattern,
)

PATTERNS = (PATTERN_ALL_ZERO, PATTERN_0303, PATTERN_0231)
CG_SCHEME_KINDS = (BaselineFirstTo(), BaselineStartAtRv0(), FlexibleOffset())


def make_config(
    P=10, offsets=(0, 1, 2, 3), K=4, pattern=PATTERN_0231, scheme=None, D=None, deferral=1, mask=()
):
    return CgConfig(
        period_slots=P,
        to_offsets=tuple(offsets),
        rep_count=K,
        rv_pattern=RvPattern(pattern),
        scheme=FlexibleOffset() if scheme is None else scheme,
        latency_budget_slots=D,
        max_periods_deferral=deferral,
        availability_mask=frozenset(mask),
    )


@st.composite
def configs(draw, schemes=CG_SCHEME_KINDS, t_equals_k=False, masked=True, max_period=16):
    P = draw(st.integers(2, max_period))
    offsets = sorted(draw(st.sets(st.integers(0, P - 1), min_size=1, max_size=P)))
    T = len(offsets)
    K = T if t_equals_k else draw(st.integers(1, T))
    mask = draw(st.sets(st.integers(0, P - 1), max_size=P // 2)) if masked else set()
    return make_config(
        P=P,
        offsets=offsets,
        K=K,
        pattern=draw(st.sampled_from(PATTERNS)),
        scheme=draw(st.sampled_from(schemes)),
        D=draw(st.integers(1, 3 * P)),
        deferral=draw(st.integers(0, 2)),
        mask=mask,
    )


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
