"""Continuous LP representation and a bounded-variable primal simplex solver.

Problems are stated in the standard form

    min/max c.x
    s.t.    A_eq x  = b_eq
            A_ub x <= b_ub
            l <= x <= u

Inequality rows receive slack variables internally so that the working
problem is an equality system over bounded variables. A two-phase start
(artificial variables, then the true objective) makes the solver total:
it reports Infeasible/Unbounded instead of raising.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Status",
    "SolveLimits",
    "LinearProgram",
    "LpOutcome",
    "MalformedProblemError",
    "to_standard_form",
    "solve_lp",
]


class MalformedProblemError(ValueError):
    """Structurally invalid problem data (distinct from an infeasible model)."""


class Status(enum.IntEnum):
    OPTIMAL = 0
    ITERATION_LIMIT = 1
    INFEASIBLE = 2
    UNBOUNDED = 3
    NUMERICAL = 4


@dataclass(frozen=True)
class SolveLimits:
    max_iterations: int = 20000
    max_nodes: int = 200000
    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-7
    integrality_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.max_iterations <= 0 or self.max_nodes <= 0:
            raise MalformedProblemError("iteration/node limits must be positive")
        if self.feasibility_tol <= 0 or self.optimality_tol <= 0:
            raise MalformedProblemError("tolerances must be positive")


def _as_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise MalformedProblemError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True)
class LinearProgram:
    """Continuous problem in standard form.

    eq_rows and ub_rows are sequences of (coefficient vector, rhs); bounds is
    one (lower, upper) pair per variable where -inf/+inf mark free sides.
    """

    objective: tuple
    eq_rows: tuple = ()
    ub_rows: tuple = ()
    bounds: tuple = ()
    direction: str = "min"

    def __post_init__(self) -> None:
        c = _as_vector(self.objective, "objective")
        if c.size == 0:
            raise MalformedProblemError("problem has no variables")
        if not np.all(np.isfinite(c)):
            raise MalformedProblemError("objective coefficients must be finite")
        n = c.size
        eq = tuple((_as_vector(a, "eq row"), float(rhs)) for a, rhs in self.eq_rows)
        ub = tuple((_as_vector(a, "ub row"), float(rhs)) for a, rhs in self.ub_rows)
        for rows, label in ((eq, "equality"), (ub, "inequality")):
            for a, rhs in rows:
                if a.size != n:
                    raise MalformedProblemError(
                        f"{label} row has {a.size} coefficients, expected {n}"
                    )
                if not np.all(np.isfinite(a)):
                    raise MalformedProblemError(f"{label} row has non-finite coefficients")
                if not math.isfinite(rhs):
                    raise MalformedProblemError("constraint rhs must be finite")
        bounds = self.bounds if self.bounds else tuple((0.0, math.inf) for _ in range(n))
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        if len(bounds) != n:
            raise MalformedProblemError("bounds length must equal variable count")
        for lo, hi in bounds:
            if math.isnan(lo) or math.isnan(hi):
                raise MalformedProblemError("bounds must not be NaN")
            if lo > hi:
                raise MalformedProblemError(f"lower bound {lo} exceeds upper bound {hi}")
        if self.direction not in ("min", "max"):
            raise MalformedProblemError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "objective", tuple(c))
        object.__setattr__(self, "eq_rows", tuple((tuple(a), rhs) for a, rhs in eq))
        object.__setattr__(self, "ub_rows", tuple((tuple(a), rhs) for a, rhs in ub))
        object.__setattr__(self, "bounds", bounds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpOutcome:
    status: Status
    x: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0
    eq_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ub_slacks: np.ndarray = field(default_factory=lambda: np.zeros(0))


_SENSE_FLIP = {"le": 1.0, "ge": -1.0}


def to_standard_form(rows):
    """Split (coeffs, sense, rhs) rows into (eq_rows, ub_rows).

    ">=" rows are negated into "<=" form; row order within each output list
    follows input order.
    """
    eq_rows: list[tuple] = []
    ub_rows: list[tuple] = []
    width = None
    for coeffs, sense, rhs in rows:
        a = _as_vector(coeffs, "constraint row")
        if width is None:
            width = a.size
        elif a.size != width:
            raise MalformedProblemError("constraint rows have inconsistent widths")
        if sense == "eq":
            eq_rows.append((tuple(a), float(rhs)))
        elif sense in _SENSE_FLIP:
            s = _SENSE_FLIP[sense]
            ub_rows.append((tuple(s * a), s * float(rhs)))
        else:
            raise MalformedProblemError(f"unknown constraint sense {sense!r}")
    return eq_rows, ub_rows


# Nonbasic variable rests at one of its bounds (or at zero when free).
_AT_LOWER = 0
_AT_UPPER = 1
_FREE = 2


class _Unbounded(Exception):
    pass


class _Singular(Exception):
    pass


def _price(A, c, basis, nonbasic, status):
    """Reduced costs of the nonbasic columns for the current basis."""
    B = A[:, basis]
    try:
        y = np.linalg.solve(B.T, c[basis])
    except np.linalg.LinAlgError:
        raise _Singular
    return c[nonbasic] - A[:, nonbasic].T @ y


def _run_simplex(A, b, c, lo, hi, basis, status, x, limits, iteration, stall_after):
    """Minimize c.x over Ax = b, lo <= x <= hi from the given basic solution.

    `basis` holds one variable index per row; `status` marks every variable's
    nonbasic rest position (entries for basic variables are ignored). Mutates
    basis/status/x in place. Returns (optimal?, iterations); raises _Unbounded
    on an unblocked improving ray.
    """
    m, n_total = A.shape
    opt_tol = limits.optimality_tol
    feas_tol = limits.feasibility_tol
    bland = False
    stall = 0
    last_obj = math.inf
    while iteration < limits.max_iterations:
        nonbasic = np.array([j for j in range(n_total) if j not in set(basis)], dtype=int)
        try:
            d = _price(A, c, basis, nonbasic, status)
        except _Singular:
            raise
        # Entering candidates: at-lower (or free) columns want d < 0, at-upper
        # columns want d > 0. Fixed columns (lo == hi) never enter.
        gaps = hi[nonbasic] - lo[nonbasic]
        at_lower = np.array([status[j] != _AT_UPPER for j in nonbasic])
        is_free = np.array([status[j] == _FREE for j in nonbasic])
        viol = np.where(is_free, np.abs(d), np.where(at_lower, -d, d))
        viol[gaps <= 0] = -math.inf
        eligible = np.nonzero(viol > opt_tol)[0]
        if eligible.size == 0:
            return True, iteration
        if bland:
            k = eligible[np.argmin(nonbasic[eligible])]
        else:
            k = eligible[np.argmax(viol[eligible])]
        j_in = int(nonbasic[k])
        if status[j_in] == _FREE:
            sigma = 1.0 if d[k] < 0 else -1.0
        else:
            sigma = 1.0 if status[j_in] != _AT_UPPER else -1.0

        B = A[:, basis]
        try:
            w = np.linalg.solve(B, A[:, j_in])
        except np.linalg.LinAlgError:
            raise _Singular
        # x_B moves at rate -sigma*w as the entering variable moves by t >= 0.
        rate = -sigma * w
        t_best = hi[j_in] - lo[j_in]  # bound flip distance (inf if one side open)
        leave_pos = -1
        leave_to_upper = False
        for i in range(m):
            bi = basis[i]
            if rate[i] < -feas_tol:
                if math.isfinite(lo[bi]):
                    t_i = (x[bi] - lo[bi]) / (-rate[i])
                else:
                    continue
                hits_upper = False
            elif rate[i] > feas_tol:
                if math.isfinite(hi[bi]):
                    t_i = (hi[bi] - x[bi]) / rate[i]
                else:
                    continue
                hits_upper = True
            else:
                continue
            t_i = max(t_i, 0.0)
            better = t_i < t_best - 1e-12
            tie = abs(t_i - t_best) <= 1e-12
            if better or (tie and leave_pos >= 0 and (
                (bland and bi < basis[leave_pos])
                or (not bland and abs(rate[i]) > abs(rate[leave_pos]))
            )):
                t_best = t_i
                leave_pos = i
                leave_to_upper = hits_upper
        if not math.isfinite(t_best):
            raise _Unbounded
        # Apply the step.
        x[j_in] += sigma * t_best
        for i in range(m):
            x[basis[i]] += rate[i] * t_best
        if leave_pos < 0:
            # Entering variable ran to its opposite bound: status flip only.
            status[j_in] = _AT_UPPER if status[j_in] == _AT_LOWER else _AT_LOWER
            x[j_in] = hi[j_in] if status[j_in] == _AT_UPPER else lo[j_in]
        else:
            j_out = basis[leave_pos]
            x[j_out] = hi[j_out] if leave_to_upper else lo[j_out]
            status[j_out] = _AT_UPPER if leave_to_upper else _AT_LOWER
            basis[leave_pos] = j_in
        iteration += 1
        obj = float(c @ x)
        if obj < last_obj - opt_tol:
            last_obj = obj
            stall = 0
            bland = False
        else:
            stall += 1
            if stall > stall_after:
                bland = True
    return False, iteration


def _solve_bounded(A, b, c, lo, hi, limits, slack_of=None):
    """Two-phase bounded simplex on an all-equality system.

    slack_of maps row index -> column index of that row's slack; rows whose
    slack can absorb the starting residual seed the basis directly, so
    artificials are only created where needed (typically equality rows).
    Returns (status, x, iterations) where x covers all columns of A.
    """
    m, n = A.shape
    slack_of = slack_of or {}
    stall_after = 3 * (m + n)
    x = np.empty(n)
    status = np.empty(n, dtype=int)
    for j in range(n):
        if math.isfinite(lo[j]):
            x[j], status[j] = lo[j], _AT_LOWER
        elif math.isfinite(hi[j]):
            x[j], status[j] = hi[j], _AT_UPPER
        else:
            x[j], status[j] = 0.0, _FREE
    residual = b - A @ x
    basis = [-1] * m
    needy = []
    for i in range(m):
        j_s = slack_of.get(i)
        if j_s is not None and residual[i] >= 0:
            x[j_s] = residual[i]
            basis[i] = j_s
        else:
            needy.append(i)
    n_art = len(needy)
    art_cols = np.zeros((m, n_art))
    for pos, i in enumerate(needy):
        art_cols[i, pos] = 1.0 if residual[i] >= 0 else -1.0
        basis[i] = n + pos
    A1 = np.hstack([A, art_cols])
    lo1 = np.concatenate([lo, np.zeros(n_art)])
    hi1 = np.concatenate([hi, np.full(n_art, math.inf)])
    x = np.concatenate([x, np.abs(residual[needy])])
    status = np.concatenate([status, np.full(n_art, _AT_LOWER)])

    scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    c1 = np.concatenate([np.zeros(n), np.ones(n_art)])
    try:
        done, iters = _run_simplex(
            A1, b, c1, lo1, hi1, basis, status, x, limits, 0, stall_after
        )
    except _Unbounded:
        return Status.NUMERICAL, None, 0
    except _Singular:
        return Status.NUMERICAL, None, 0
    if not done:
        return Status.ITERATION_LIMIT, None, iters
    if float(c1 @ x) > limits.feasibility_tol * scale:
        return Status.INFEASIBLE, None, iters

    # Phase 2: keep artificials but pin them to zero.
    lo1[n:] = 0.0
    hi1[n:] = 0.0
    x[n:] = 0.0
    c2 = np.concatenate([c, np.zeros(n_art)])
    try:
        done, iters = _run_simplex(
            A1, b, c2, lo1, hi1, basis, status, x, limits, iters, stall_after
        )
    except _Unbounded:
        return Status.UNBOUNDED, None, iters
    except _Singular:
        return Status.NUMERICAL, None, iters
    if not done:
        return Status.ITERATION_LIMIT, None, iters
    return Status.OPTIMAL, x[:n].copy(), iters


def solve_lp(lp: LinearProgram, limits: SolveLimits | None = None) -> LpOutcome:
    """Solve an LP, returning a status-coded outcome (never raising on
    infeasibility or unboundedness)."""
    limits = limits or SolveLimits()
    n = lp.num_vars
    sign = -1.0 if lp.direction == "max" else 1.0
    c = sign * np.asarray(lp.objective)
    A_eq = np.array([a for a, _ in lp.eq_rows], dtype=float).reshape(len(lp.eq_rows), n)
    b_eq = np.array([rhs for _, rhs in lp.eq_rows], dtype=float)
    A_ub = np.array([a for a, _ in lp.ub_rows], dtype=float).reshape(len(lp.ub_rows), n)
    b_ub = np.array([rhs for _, rhs in lp.ub_rows], dtype=float)
    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]

    # Slack per inequality row turns the system into equalities.
    A = np.zeros((m_eq + m_ub, n + m_ub))
    A[:m_eq, :n] = A_eq
    A[m_eq:, :n] = A_ub
    A[m_eq:, n:] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])
    lo = np.array([lo for lo, _ in lp.bounds] + [0.0] * m_ub)
    hi = np.array([hi for _, hi in lp.bounds] + [math.inf] * m_ub)
    c_full = np.concatenate([c, np.zeros(m_ub)])

    slack_of = {m_eq + i: n + i for i in range(m_ub)}
    status, x_full, iters = _solve_bounded(A, b, c_full, lo, hi, limits, slack_of)
    if status is not Status.OPTIMAL:
        return LpOutcome(status=status, iterations=iters)
    x = x_full[:n]
    eq_residuals = A_eq @ x - b_eq if m_eq else np.zeros(0)
    ub_slacks = b_ub - A_ub @ x if m_ub else np.zeros(0)
    objective = float(np.asarray(lp.objective) @ x)
    return LpOutcome(
        status=Status.OPTIMAL,
        x=x,
        objective_value=objective,
        iterations=iters,
        eq_residuals=eq_residuals,
        ub_slacks=ub_slacks,
    )
