from fractions import Fraction

import numpy as np
import pytest

from cpmmg.adequacy import (AdequacyLedger, coefficient_of_variation, histogram, run_ibgc_sber, summarize)
from oracles import fraction_ibgc_sber, random_exchange_hour


def test_seller_example():
    ib, sb = run_ibgc_sber([-0.5], [np.array([0.3, 0.2, 0.1])], [np.array([0.3, 0.2, 0.1])],
                           [np.array([0.1, 2.0, 15.1])], 2.0)
    np.testing.assert_allclose(ib[0], [0.2, 0.2, 0.1])


def test_buyer_example():
    ib, sb = run_ibgc_sber([-0.4, 0.4], [np.array([0.2]), np.array([0.0, 0.0])],
                           [np.array([0.2]), np.array([0.3, 0.5])],
                           [np.array([2.0]), np.array([0.1, 0.2])], 2.0)
    np.testing.assert_allclose(sb[1], [0.3, 0.1])
    np.testing.assert_allclose(ib[0], [0.2])


def test_no_expensive_shed_no_sber():
    ib, sb = run_ibgc_sber([-0.4, 0.4], [np.array([0.2]), np.array([0.0])], [np.array([0.2]), np.array([0.5])],
                           [np.array([1.0]), np.array([0.1])], 2.0)
    assert sb[1].sum() == 0 and ib[0].sum() == pytest.approx(0.2)


@pytest.mark.parametrize("seed", range(5))
def test_matches_rational_oracle(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        ex, ls, demand, costs = random_exchange_hour(rng)
        ib, sb = run_ibgc_sber(ex, ls, demand, costs, 2.0)
        oib, osb = fraction_ibgc_sber(ex, ls, demand, costs, 2.0)
        assert [[Fraction(float(v)) for v in row] for row in ib] == oib
        assert [[Fraction(float(v)) for v in row] for row in sb] == osb


@pytest.mark.parametrize("seed", range(3))
def test_index_bounds(seed):
    rng = np.random.default_rng(50 + seed)
    for _ in range(200):
        ex, ls, demand, costs = random_exchange_hour(rng)
        ib, sb = run_ibgc_sber(ex, ls, demand, costs, 2.0)
        for m in range(len(ex)):
            assert ib[m].sum() <= max(-ex[m], 0) + 1e-12
            assert np.all(ib[m] <= ls[m] + 1e-12)
            assert sb[m].sum() <= max(ex[m], 0) + 1e-12
            assert np.all(sb[m] <= demand[m] - ls[m] + 1e-12)


def _ledger():
    return AdequacyLedger(("A", "B"), {"A": (1.0, 2.0), "B": (3.0,)})


def test_ledger_annualises():
    led = _ledger()
    led.record_shedding(0, "A", np.array([[1.0, 1.0], [0.5, 0.0]]), "IO")
    led.record_shedding(1, "B", np.array([2.0]), "SD")
    r = summarize(led, {"seed": 1})
    assert r.total == pytest.approx(2.25)
    assert r.eens_mg("A") == pytest.approx(1.25) and r.eens_mode("SD") == pytest.approx(1.0)
    np.testing.assert_allclose(r.yearly_totals, [2.5, 2.0])


def test_ledger_rejects_negative():
    with pytest.raises(AssertionError):
        _ledger().record_shedding(0, "A", np.array([-1e-3]), "IO")


def test_merge_is_order_free():
    parts = []
    rng = np.random.default_rng(0)
    for k in range(3):
        led = _ledger()
        for y in range(k, 12, 3):
            led.record_shedding(y, "A", rng.random(2) * 0.1, "JO")
            led.record_indices(y, "B", rng.random(1), rng.random(1))
        parts.append(led)
    a, b, c = parts
    r1, r2 = summarize(a.merge(b).merge(c)), summarize(c.merge(b.merge(a)))
    assert np.array_equal(r1.eens, r2.eens) and np.array_equal(r1.ibgc, r2.ibgc)
    with pytest.raises(ValueError):
        a.merge(a)


def test_cov_definition():
    y = np.array([1.0, 2.0, 3.0, 6.0])
    assert coefficient_of_variation(y) == pytest.approx(y.std(ddof=1) / (y.mean() * 2))
    assert coefficient_of_variation([1.0]) is None
    assert coefficient_of_variation([0.0, 0.0]) is None


def test_convergence_is_prefix_mean():
    led = _ledger()
    vals = [3.0, 1.0, 2.0, 0.0]
    for y, v in enumerate(vals):
        led.record_shedding(y, "B", np.array([v]), "GC")
    np.testing.assert_allclose(summarize(led).convergence(), np.cumsum(vals) / np.arange(1, 5))


def test_histogram_counts():
    edges, counts = histogram([0.0, 0.4, 1.0, 1.9, 2.0], bin_width=1.0)
    np.testing.assert_allclose(edges, [0, 1, 2])
    assert list(counts) == [2, 3]
    edges, counts = histogram(np.zeros(5))
    assert counts.sum() == 5
    with pytest.raises(ValueError):
        histogram([1.0], bin_width=0)
