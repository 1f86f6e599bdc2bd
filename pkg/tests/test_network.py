import dataclasses

import numpy as np
import pytest

from cpmmg.dispatch.network import DmsIterationError, congestion_caps, dms_coordinate, line_flows, ps_allocate


def test_line_flow_recursion(bundled):
    ex = {"MG1": np.array([0.1]), "MG2": np.array([-0.2]), "MG3": np.array([0.3]),
          "MG4": np.array([0.4]), "MG5": np.array([-0.5])}
    flows, sub = line_flows(bundled.graph, ex)
    assert flows["MG3-MG4"][0] == pytest.approx(0.4)
    assert flows["MG3-MG5"][0] == pytest.approx(-0.5)
    assert flows["MG2-MG3"][0] == pytest.approx(0.2)
    assert flows["MG1-MG2"][0] == pytest.approx(0.0)
    assert sub[0] == pytest.approx(-0.1)


def test_ps_examples():
    np.testing.assert_allclose(ps_allocate([0.6, 0.4], 0.5), [0.3, 0.2])
    np.testing.assert_allclose(ps_allocate([0.6, 0.4], 0.5, [-0.2]), [0.42, 0.28])
    np.testing.assert_allclose(ps_allocate([0.2, 0.1], 0.5), [0.2, 0.1])
    np.testing.assert_allclose(ps_allocate([-0.6, -0.4], 0.5), [-0.3, -0.2])


@pytest.mark.parametrize("seed", range(5))
def test_ps_preserves_ratios_and_fills_capacity(seed):
    rng = np.random.default_rng(seed)
    for _ in range(50):
        claims = rng.uniform(0.01, 2.0, rng.integers(1, 6))
        counter = -rng.uniform(0, 0.5, rng.integers(0, 3))
        cap = rng.uniform(0.0, claims.sum())
        a = ps_allocate(claims, cap, counter)
        if claims.sum() > cap + np.abs(counter).sum():
            assert a.sum() + counter.sum() == pytest.approx(cap, abs=1e-9)
            np.testing.assert_allclose(a / a[0], claims / claims[0], rtol=1e-9)


def _small_lines(graph, cap):
    return dataclasses.replace(graph, lines=tuple(dataclasses.replace(l, capacity=cap) for l in graph.lines))


def test_dms_loop_removes_congestion(bundled):
    graph = _small_lines(bundled.graph, 0.5)
    want = {"MG1": 0.2, "MG2": 0.3, "MG3": 0.4, "MG4": 0.3, "MG5": -0.1}

    def solve(mg, lo, hi):
        return np.clip(np.full(2, want[mg]), lo, hi)

    ex, flows, sub, it = dms_coordinate(graph, solve, 2, sub_capacity=1.0)
    assert it >= 2
    for l in graph.lines:
        assert np.all(np.abs(flows[l.id]) <= l.capacity + 1e-9)
    assert np.all(np.abs(sub) <= 1.0 + 1e-9)
    assert congestion_caps(graph, ex, {m: np.full(2, np.inf) for m in ex},
                           {m: np.full(2, -np.inf) for m in ex}, 1.0) == []


def test_dms_loop_reports_stubborn_congestion(bundled):
    graph = _small_lines(bundled.graph, 0.1)
    with pytest.raises(DmsIterationError, match="MG"):
        dms_coordinate(graph, lambda mg, lo, hi: np.ones(1), 1, cap=3)


def test_uncongested_single_pass(bundled):
    ex, flows, sub, it = dms_coordinate(bundled.graph, lambda mg, lo, hi: np.full(3, 0.1), 3, 10.0)
    assert it == 1 and sub[0] == pytest.approx(-0.5)
