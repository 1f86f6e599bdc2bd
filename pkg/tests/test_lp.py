import numpy as np
import pytest

from cpmmg.dispatch.lp import LpProblem


def test_small_lp_vertex():
    # min -x - 2y  s.t. x + y <= 4, x <= 3, y <= 2.5
    p = LpProblem("t")
    x = p.add_vars("x", 1, 0, 3, -1.0)
    y = p.add_vars("y", 1, 0, 2.5, -2.0)
    p.add_rows("ub", [(x, 1.0), (y, 1.0)], [4.0])
    s = p.solve()
    assert s.ok
    np.testing.assert_allclose(s.x, [1.5, 2.5])
    assert s.objective == pytest.approx(-6.5)


def test_repeated_columns_are_summed():
    p = LpProblem()
    x = p.add_vars("x", 1, 0, 10, 1.0)
    p.add_rows("eq", [(x, 1.0), (x, 2.0)], [6.0])
    assert p.solve().x[0] == pytest.approx(2.0)


def test_ge_rows():
    p = LpProblem()
    x = p.add_vars("x", 2, 0, 10, [1.0, 3.0])
    p.add_ge([(x[[0]], 1.0), (x[[1]], 1.0)], [5.0])
    p.add_ge([(x[[1]], 1.0)], [1.0])
    s = p.solve()
    np.testing.assert_allclose(s.x, [4.0, 1.0])


def test_infeasible_and_unbounded():
    p = LpProblem()
    x = p.add_vars("x", 1, 0, 1)
    p.add_rows("eq", [(x, 1.0)], [2.0])
    assert p.solve().status == "infeasible"
    p = LpProblem()
    p.add_vars("x", 1, 0, np.inf, -1.0)
    assert p.solve().status == "unbounded"
    p = LpProblem()
    p.add_vars("x", 1, 2, 1)
    assert p.solve().status == "infeasible"


def test_vectorised_blocks():
    p = LpProblem()
    a = p.add_vars("a", 3, 0, 5, 1.0)
    p.add_rows("eq", [(a, 1.0)], [1.0, 2.0, 3.0], "fix")
    s = p.solve()
    np.testing.assert_allclose(s.x, [1, 2, 3])


def test_lp_text_lists_everything():
    p = LpProblem("demo")
    a = p.add_vars("a", 2, 0, 5, [1.0, -1.0])
    p.add_rows("ub", [(a, 1.0)], [3.0, 4.0], "cap")
    txt = p.to_lp_text()
    assert txt.startswith("\\") or "Minimize" in txt
    assert "Subject To" in txt and "Bounds" in txt and txt.rstrip().endswith("End")
    assert "a_0" in txt or "a[0]" in txt
