"""Small dense linear feasibility kernel.

Strict homogeneous conditions are encoded by normalization (``> 0`` becomes
``>= 1``), so only closed constraints reach the solver. HiGHS (through
``scipy.optimize.linprog``) does the pivoting; every witness is re-checked
here before it is reported as feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

WITNESS_TOL = 1e-8

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
INDETERMINATE = "indeterminate"

_RELATIONS = (">=", "<=", "==")


class IndeterminateError(RuntimeError):
    """The LP solver could not certify an answer."""


@dataclass
class LinearConstraintSystem:
    n: int
    constraints: list = field(default_factory=list)
    objective: Optional[np.ndarray] = None

    def add(self, coeffs, relation: str, bound: float) -> "LinearConstraintSystem":
        coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
        if coeffs.shape != (self.n,):
            raise ValueError(f"constraint has {coeffs.size} coefficients, expected {self.n}")
        if relation == "=":
            relation = "=="
        if relation not in _RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        if not np.isfinite(bound):
            raise ValueError("constraint bounds must be finite")
        self.constraints.append((coeffs, relation, float(bound)))
        return self

    def violation(self, x) -> float:
        """Largest constraint violation at ``x`` (0 when all hold)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        for a, rel, b in self.constraints:
            v = float(a @ x)
            if rel == ">=":
                worst = max(worst, b - v)
            elif rel == "<=":
                worst = max(worst, v - b)
            else:
                worst = max(worst, abs(v - b))
        return worst

    def matrices(self):
        A_ub, b_ub, A_eq, b_eq = [], [], [], []
        for a, rel, b in self.constraints:
            if rel == ">=":
                A_ub.append(-a)
                b_ub.append(-b)
            elif rel == "<=":
                A_ub.append(a)
                b_ub.append(b)
            else:
                A_eq.append(a)
                b_eq.append(b)
        def pack(rows, rhs):
            if not rows:
                return None, None
            return np.array(rows), np.array(rhs)
        return pack(A_ub, b_ub) + pack(A_eq, b_eq)


@dataclass
class FeasibilityResult:
    status: str
    witness: Optional[np.ndarray] = None
    value: Optional[float] = None
    message: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    @property
    def indeterminate(self) -> bool:
        return self.status == INDETERMINATE


def feasible(sys: LinearConstraintSystem) -> FeasibilityResult:
    """Decide feasibility (or minimize ``sys.objective``) over free variables."""
    if sys.n < 1:
        raise ValueError("need at least one variable")
    if not sys.constraints:
        x = np.zeros(sys.n)
        if sys.objective is not None and np.any(sys.objective):
            return FeasibilityResult(INDETERMINATE, message="unbounded objective")
        return FeasibilityResult(FEASIBLE, x, 0.0)
    A_ub, b_ub, A_eq, b_eq = sys.matrices()
    c = np.zeros(sys.n) if sys.objective is None else np.asarray(sys.objective, dtype=float)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * sys.n, method="highs")
    if res.status == 2:
        return FeasibilityResult(INFEASIBLE, message=res.message)
    if res.status != 0:
        return FeasibilityResult(INDETERMINATE, message=res.message)
    x = np.asarray(res.x, dtype=float)
    if sys.violation(x) > WITNESS_TOL:
        return FeasibilityResult(INDETERMINATE, x, message="witness fails re-check")
    return FeasibilityResult(FEASIBLE, x, float(c @ x))


def box_fit(columns: Sequence, boxes: Sequence, target) -> tuple[np.ndarray, float]:
    """Coefficients ``k_j`` in ``boxes`` minimizing ``max|sum_j k_j col_j - target|``.

    ``boxes`` are closed-relaxed: anything with ``lo``/``hi`` attributes or a
    ``(lo, hi)`` pair, infinite ends allowed.
    """
    target = np.asarray(target, dtype=float).reshape(-1)
    if len(columns) != len(boxes):
        raise ValueError("need one box per column")
    if len(columns) == 0:
        return np.zeros(0), float(np.max(np.abs(target), initial=0.0))
    C = np.column_stack([np.asarray(c, dtype=float).reshape(-1) for c in columns])
    bounds = []
    for box in boxes:
        lo, hi = (box.lo, box.hi) if hasattr(box, "lo") else box
        bounds.append((float(lo), None if np.isinf(hi) else float(hi)))
    m, d = len(columns), target.size
    # variables (k_1..k_m, t); minimize t subject to |C k - target| <= t
    c = np.zeros(m + 1)
    c[-1] = 1.0
    ones = np.ones((d, 1))
    A_ub = np.vstack([np.hstack([C, -ones]), np.hstack([-C, -ones])])
    b_ub = np.concatenate([target, -target])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds + [(0, None)], method="highs")
    if res.status != 0:
        raise IndeterminateError(f"box_fit failed: {res.message}")
    k = np.asarray(res.x[:m], dtype=float)
    for j, (lo, hi) in enumerate(bounds):
        k[j] = max(k[j], lo) if hi is None else min(max(k[j], lo), hi)
    residual = float(np.max(np.abs(C @ k - target), initial=0.0))
    return k, residual
