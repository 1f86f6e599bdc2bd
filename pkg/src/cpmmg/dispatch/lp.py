"""Small LP builder on top of ``scipy.optimize.linprog`` (HiGHS dual simplex).

Variables are allocated in named blocks; constraints are added row-blocks at
a time from ``(column indices, coefficient)`` terms so the dispatch models
can be assembled without Python loops over hours.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

OPTIMAL, INFEASIBLE, UNBOUNDED, FAILED = "optimal", "infeasible", "unbounded", "failed"


class LpError(RuntimeError):
    pass


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None
    objective: float | None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


class LpProblem:
    """Minimise ``c @ x`` subject to row blocks and variable bounds."""

    def __init__(self, name: str = "lp"):
        self.name = name
        self.n = 0
        self._lb: list[np.ndarray] = []
        self._ub: list[np.ndarray] = []
        self._c: list[np.ndarray] = []
        self._blocks: list[tuple[str, np.ndarray]] = []
        self._rows = {"eq": [], "ub": []}
        self._nrows = {"eq": 0, "ub": 0}
        self._rhs = {"eq": [], "ub": []}
        self._row_names = {"eq": [], "ub": []}

    # -- variables
    def add_vars(self, name: str, shape, lb=0.0, ub=np.inf, cost=0.0) -> np.ndarray:
        shape = (shape,) if np.isscalar(shape) else tuple(shape)
        size = int(np.prod(shape)) if shape else 1
        idx = np.arange(self.n, self.n + size).reshape(shape)
        self.n += size
        self._lb.append(np.broadcast_to(np.asarray(lb, float), shape).ravel().copy())
        self._ub.append(np.broadcast_to(np.asarray(ub, float), shape).ravel().copy())
        self._c.append(np.broadcast_to(np.asarray(cost, float), shape).ravel().copy())
        self._blocks.append((name, idx))
        return idx

    def add_cost(self, cols, coef) -> None:
        """Add ``coef`` to the objective coefficients of ``cols``."""
        c = self.cost_vector()
        np.add.at(c, np.ravel(cols), np.broadcast_to(coef, np.shape(cols)).ravel())
        self._c = [c]

    def cost_vector(self) -> np.ndarray:
        return np.concatenate(self._c) if self._c else np.zeros(0)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return np.concatenate(self._lb), np.concatenate(self._ub)

    def set_bounds(self, cols, lb=None, ub=None) -> None:
        lo, hi = self.bounds()
        if lb is not None:
            lo[np.ravel(cols)] = np.broadcast_to(lb, np.shape(cols)).ravel()
        if ub is not None:
            hi[np.ravel(cols)] = np.broadcast_to(ub, np.shape(cols)).ravel()
        self._lb, self._ub = [lo], [hi]

    # -- constraints
    def add_rows(self, kind: str, terms, rhs, name: str = "c") -> None:
        """Add ``k`` rows: ``sum_j coef_j * x[cols_j] (== | <=) rhs``.

        Each term is ``(cols, coef)`` with ``cols`` of shape (k,) and ``coef``
        scalar or (k,).  Repeated columns within a row are summed.
        """
        if kind not in ("eq", "ub"):
            raise ValueError(kind)
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        k = None
        rr, cc, vv = [], [], []
        for cols, coef in terms:
            cols = np.atleast_1d(np.asarray(cols))
            if k is None:
                k = len(cols)
            elif len(cols) != k:
                raise ValueError("term shapes differ")
            rr.append(np.arange(k))
            cc.append(cols)
            vv.append(np.broadcast_to(np.asarray(coef, dtype=float), (k,)))
        if k is None:
            return
        rhs = np.broadcast_to(rhs, (k,)).astype(float)
        base = self._nrows[kind]
        self._rows[kind].append((np.concatenate(rr) + base, np.concatenate(cc), np.concatenate(vv)))
        self._rhs[kind].append(rhs)
        self._row_names[kind].append((name, base, k))
        self._nrows[kind] += k

    def add_ge(self, terms, rhs, name: str = "c") -> None:
        self.add_rows("ub", [(c, -np.asarray(v, dtype=float)) for c, v in terms],
                      -np.asarray(rhs, dtype=float), name)

    def matrix(self, kind: str):
        m = self._nrows[kind]
        if m == 0:
            return None, None
        r = np.concatenate([p[0] for p in self._rows[kind]])
        c = np.concatenate([p[1] for p in self._rows[kind]])
        v = np.concatenate([p[2] for p in self._rows[kind]])
        A = sparse.csr_matrix((v, (r, c)), shape=(m, self.n))
        return A, np.concatenate(self._rhs[kind])

    # -- naming / dumps
    def var_names(self) -> list[str]:
        names = [""] * self.n
        for name, idx in self._blocks:
            for pos, i in np.ndenumerate(idx):
                names[i] = name + "".join(f"_{p}" for p in pos)
        return names

    def to_lp_text(self) -> str:
        """CPLEX-LP style text for cross-checking with an external solver."""
        names = self.var_names()
        c = self.cost_vector()

        def expr(cols, vals):
            return " ".join(f"{'+' if v >= 0 else '-'} {abs(v):.12g} {names[j]}" for j, v in zip(cols, vals)) or "0 " + names[0]

        out = [f"\\ {self.name}", "Minimize", " obj: " + expr(np.flatnonzero(c), c[c != 0]), "Subject To"]
        for kind, op in (("eq", "="), ("ub", "<=")):
            A, b = self.matrix(kind)
            if A is None:
                continue
            labels = []
            for bi, (nm, base, k) in enumerate(self._row_names[kind]):
                labels.extend(f"{nm}{bi}_{i}" for i in range(k))
            for i in range(A.shape[0]):
                row = A.getrow(i)
                out.append(f" {kind}_{labels[i]}: {expr(row.indices, row.data)} {op} {b[i]:.12g}")
        out.append("Bounds")
        lo, hi = self.bounds()
        for j in range(self.n):
            l = "-inf" if np.isneginf(lo[j]) else f"{lo[j]:.12g}"
            h = "+inf" if np.isposinf(hi[j]) else f"{hi[j]:.12g}"
            out.append(f" {l} <= {names[j]} <= {h}")
        out.append("End")
        return "\n".join(out) + "\n"

    def solve(self) -> LpSolution:
        return solve_lp(self)


def solve_lp(p: LpProblem) -> LpSolution:
    """Solve with HiGHS dual simplex; returns a clipped basic solution."""
    c = p.cost_vector()
    lo, hi = p.bounds()
    if np.any(lo > hi + 1e-12):
        return LpSolution(INFEASIBLE, None, None, "contradictory variable bounds")
    A_eq, b_eq = p.matrix("eq")
    A_ub, b_ub = p.matrix("ub")
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=np.column_stack([lo, hi]), method="highs-ds")
    if res.status == 0:
        x = np.clip(res.x, lo, hi)
        return LpSolution(OPTIMAL, x, float(c @ x), res.message)
    status = {2: INFEASIBLE, 3: UNBOUNDED}.get(res.status, FAILED)
    return LpSolution(status, None, None, res.message)
