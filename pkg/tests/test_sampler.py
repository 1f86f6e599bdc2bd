import numpy as np
import pytest

from cpmmg.casemodel import ComponentSpec
from cpmmg.sampler import HOURS, DOWN, Sampler, StateTimeline, contingency_windows, draw_interval


def _hourly_oracle(blocks):
    """Failed set at every hour, then maximal runs with an equal nonempty set."""
    state = [set() for _ in range(HOURS)]
    for cid, bl in blocks.items():
        for a, b in bl:
            for h in range(a, b):
                state[h].add(cid)
    out, h = [], 0
    while h < HOURS:
        if not state[h]:
            h += 1
            continue
        k = h
        while k < HOURS and state[k] == state[h]:
            k += 1
        out.append((h, k, frozenset(state[h])))
        h = k
    return out


@pytest.mark.parametrize("seed", range(20))
def test_windows_match_hourly_sweep(seed):
    rng = np.random.default_rng(seed)
    blocks = {}
    for c in range(6):
        starts = np.sort(rng.choice(HOURS - 50, rng.integers(0, 6), replace=False))
        bl = []
        for s in starts:
            e = int(s + rng.integers(1, 40))
            if bl and s <= bl[-1][1]:
                continue
            bl.append((int(s), e))
        blocks[f"c{c}"] = bl
    got = [(w.start, w.end, w.failed) for w in contingency_windows(blocks)]
    assert got == _hourly_oracle(blocks)


def test_back_to_back_blocks_stay_one_window():
    ws = contingency_windows({"a": [(10, 20), (20, 30)]})
    assert [(w.start, w.end) for w in ws] == [(10, 30)]


def test_midpoint_rule():
    tl = StateTimeline("x", ((0.0, 10.4, 1), (10.4, 12.4, 0), (12.4, HOURS, 1)), 5.0, 1)
    # hours 10 (mid 10.5) and 11 (mid 11.5) are down, 12 (mid 12.5) is up
    assert tl.down_hours() == [(10, 12)]
    tl = StateTimeline("x", ((0.0, 10.6, 1), (10.6, 10.9, 0), (10.9, HOURS, 1)), 5.0, 1)
    assert tl.down_hours() == []


def test_zero_rate_never_fails():
    assert draw_interval(0.0, np.random.default_rng(0)) == float("inf")


def _comp_case(bundled, n, lam, mu):
    return [ComponentSpec(f"X{k}", "line", lam, mu) for k in range(n)]


def test_steady_state_unavailability(bundled):
    lam, mu = 1.0, 100.0
    s = Sampler(bundled, 7, _comp_case(bundled, 20, lam, mu))
    down = 0.0
    years = 1000
    for _ in range(years):
        down += sum(t.unavailability() * HOURS for t in s.next_year().values())
    est = down / (20 * years * HOURS)
    assert est == pytest.approx(lam / (lam + mu), rel=0.05)


def test_residual_carries_into_next_year(bundled):
    s = Sampler(bundled, 3, _comp_case(bundled, 1, 40.0, 1.0))
    prev = s.next_year()["X0"]
    for _ in range(30):
        cur = s.next_year()["X0"]
        assert cur.intervals[0][2] == prev.end_state
        assert cur.intervals[0][1] == pytest.approx(min(prev.residual, HOURS))
        prev = cur


def test_streams_are_per_component(bundled):
    a = Sampler(bundled, 11, _comp_case(bundled, 3, 2.0, 50.0)).next_year()
    b = Sampler(bundled, 11, _comp_case(bundled, 5, 2.0, 50.0)).next_year()
    for k in range(3):
        assert a[f"X{k}"] == b[f"X{k}"]


def test_timeline_covers_year(bundled):
    s = Sampler(bundled, 1)
    for tl in s.next_year().values():
        assert tl.intervals[0][0] == 0.0 and tl.intervals[-1][1] == HOURS
        for (a, b, x), (c, d, y) in zip(tl.intervals, tl.intervals[1:]):
            assert b == c and x != y


def test_zero_rate_components_skipped(bundled, single_case):
    s = Sampler(single_case, 0)
    assert set(s.specs) == {"UP"}
