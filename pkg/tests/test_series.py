import numpy as np
import pytest

from cpmmg.series import (ExogenousSeries, build_series, read_series_csv, rts_load_profile, rts_season,
                          synthetic_series, write_series_csv)


def test_rts_peak_location():
    prof = rts_load_profile()
    assert len(prof) == 8760
    h = int(np.argmax(prof))
    assert prof[h] == pytest.approx(1.0)
    # week 51 (0-based 50), Tuesday, hour ending 18:00
    assert h // 168 == 50 and (h % 168) // 24 == 1 and h % 24 == 17


def test_rts_mean_load_factor():
    assert rts_load_profile().mean() == pytest.approx(0.614, abs=0.005)


def test_seasons():
    assert rts_season(0) == "winter" and rts_season(25) == "summer"


def test_synthetic_ranges():
    s = synthetic_series(1, seed=3)
    for a in (s.wind_cf, s.pv_cf, s.load_frac):
        assert a.min() >= 0 and a.max() <= 1
    assert s.pv_cf.reshape(-1, 24)[:, 0].max() == 0.0
    assert abs(s.wind_cf.mean() - 0.35) < 0.05
    assert s.price.min() > 0


def test_synthetic_deterministic():
    a, b = synthetic_series(1, seed=9), synthetic_series(1, seed=9)
    assert np.array_equal(a.wind_cf, b.wind_cf) and np.array_equal(a.price, b.price)


def test_csv_round_trip(tmp_path):
    s = synthetic_series(1, seed=1)
    write_series_csv(s, tmp_path / "s.csv")
    back = read_series_csv(tmp_path / "s.csv")
    for f in ("wind_cf", "pv_cf", "load_frac", "price"):
        assert np.array_equal(getattr(s, f), getattr(back, f))


def test_constant_block():
    s = build_series({"constant": {"load_frac": 0.5, "price": 0.1}})
    assert np.all(s.load_frac == 0.5) and np.all(s.wind_cf == 0)


def test_index_wraps():
    s = build_series({"constant": {}})
    assert list(s.index(np.array([0, 8760, 8761]))) == [0, 0, 1]


def test_bad_lengths_rejected():
    with pytest.raises(ValueError):
        ExogenousSeries(np.zeros(3), np.zeros(2), np.zeros(3), np.zeros(3))
