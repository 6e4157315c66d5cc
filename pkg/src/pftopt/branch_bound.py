"""LP-relaxation branch-and-bound for mixed binary/integer/continuous programs.

Node selection is best-bound (ties by insertion order) and branching picks the
most-fractional integer variable, so the search is deterministic. No cuts or
heuristics: the instances this toolkit targets solve in a handful of nodes.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .linprog import (
    LinearProgram,
    LpOutcome,
    MalformedProblemError,
    SolveLimits,
    Status,
    solve_lp,
)

__all__ = ["VarKind", "MipProblem", "MipOutcome", "BranchDecision", "branch", "solve_mip"]


class VarKind(enum.Enum):
    CONTINUOUS = "C"
    INTEGER = "I"
    BINARY = "B"


@dataclass(frozen=True)
class MipProblem:
    base: LinearProgram
    kinds: tuple
    names: tuple

    def __post_init__(self) -> None:
        n = self.base.num_vars
        kinds = tuple(self.kinds)
        names = tuple(self.names)
        if len(kinds) != n or len(names) != n:
            raise MalformedProblemError("kinds and names must match the variable count")
        if any(not isinstance(k, VarKind) for k in kinds):
            raise MalformedProblemError("kinds must be VarKind values")
        if any(not name for name in names):
            raise MalformedProblemError("variable names must be non-empty")
        if len(set(names)) != n:
            raise MalformedProblemError("variable names must be unique")
        # Binary variables are clamped into [0, 1] at construction.
        bounds = list(self.base.bounds)
        changed = False
        for i, kind in enumerate(kinds):
            if kind is VarKind.BINARY:
                lo, hi = bounds[i]
                clamped = (max(lo, 0.0), min(hi, 1.0))
                if clamped != (lo, hi):
                    bounds[i] = clamped
                    changed = True
        if changed:
            base = LinearProgram(
                objective=self.base.objective,
                eq_rows=self.base.eq_rows,
                ub_rows=self.base.ub_rows,
                bounds=tuple(bounds),
                direction=self.base.direction,
            )
            object.__setattr__(self, "base", base)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "names", names)

    @property
    def num_vars(self) -> int:
        return self.base.num_vars

    def integer_indices(self) -> list[int]:
        return [i for i, k in enumerate(self.kinds) if k is not VarKind.CONTINUOUS]


@dataclass(frozen=True)
class MipOutcome:
    status: Status
    x: np.ndarray | None = None
    objective_value: float | None = None
    nodes_explored: int = 0
    best_bound: float = math.nan


@dataclass(frozen=True)
class BranchDecision:
    """Branch on variable `index`: floor child adds x <= floor_value, ceil
    child adds x >= ceil_value."""

    index: int
    floor_value: float
    ceil_value: float


def branch(node_relaxation: LpOutcome, mip: MipProblem, tol: float = 1e-6):
    """Pick the most-fractional integer variable of an Optimal relaxation.

    Returns None when every integer variable is already integral; ties in
    fractionality break toward the lowest index.
    """
    if node_relaxation.status is not Status.OPTIMAL:
        raise ValueError("branching requires an Optimal relaxation")
    x = node_relaxation.x
    best_idx = -1
    best_dist = math.inf
    for i in mip.integer_indices():
        frac = x[i] - math.floor(x[i])
        if min(frac, 1.0 - frac) <= tol:
            continue
        dist = abs(frac - 0.5)
        if dist < best_dist - 1e-12:
            best_dist = dist
            best_idx = i
    if best_idx < 0:
        return None
    return BranchDecision(
        index=best_idx,
        floor_value=math.floor(x[best_idx]),
        ceil_value=math.ceil(x[best_idx]),
    )


def _relaxation(mip: MipProblem, bounds: tuple) -> LinearProgram:
    base = mip.base
    return LinearProgram(
        objective=base.objective,
        eq_rows=base.eq_rows,
        ub_rows=base.ub_rows,
        bounds=bounds,
        direction="min",
    )


def solve_mip(mip: MipProblem, limits: SolveLimits | None = None) -> MipOutcome:
    """Exact best-bound branch-and-bound over the LP relaxation tree."""
    limits = limits or SolveLimits()
    sign = -1.0 if mip.base.direction == "max" else 1.0
    # Work in minimization sense; flip the reported objective at the end.
    work = MipProblem(
        base=LinearProgram(
            objective=tuple(sign * c for c in mip.base.objective),
            eq_rows=mip.base.eq_rows,
            ub_rows=mip.base.ub_rows,
            bounds=mip.base.bounds,
            direction="min",
        ),
        kinds=mip.kinds,
        names=mip.names,
    )
    tol = limits.integrality_tol

    root = solve_lp(_relaxation(work, work.base.bounds), limits)
    nodes = 1
    if root.status is Status.INFEASIBLE:
        return MipOutcome(status=Status.INFEASIBLE, nodes_explored=nodes)
    if root.status is Status.UNBOUNDED:
        return MipOutcome(status=Status.UNBOUNDED, nodes_explored=nodes)
    if root.status is not Status.OPTIMAL:
        return MipOutcome(status=root.status, nodes_explored=nodes)

    incumbent = None
    incumbent_obj = math.inf
    counter = 0
    heap: list[tuple] = []

    def consider(outcome: LpOutcome, bounds: tuple) -> None:
        nonlocal incumbent, incumbent_obj, counter
        decision = branch(outcome, work, tol)
        if decision is None:
            if outcome.objective_value < incumbent_obj - 1e-9:
                incumbent = outcome.x.copy()
                incumbent_obj = outcome.objective_value
            return
        i = decision.index
        lo, hi = bounds[i]
        down = list(bounds)
        down[i] = (lo, decision.floor_value)
        up = list(bounds)
        up[i] = (decision.ceil_value, hi)
        for child in (tuple(down), tuple(up)):
            counter += 1
            heapq.heappush(heap, (outcome.objective_value, counter, child))

    consider(root, work.base.bounds)
    best_bound = root.objective_value
    hit_node_limit = False
    while heap:
        bound, _, bounds = heapq.heappop(heap)
        best_bound = bound
        if bound >= incumbent_obj - 1e-9:
            continue  # pruned by the incumbent
        if nodes >= limits.max_nodes:
            hit_node_limit = True
            break
        outcome = solve_lp(_relaxation(work, bounds), limits)
        nodes += 1
        if outcome.status is not Status.OPTIMAL:
            continue  # infeasible subproblem (unbounded cannot appear below a bounded root)
        if outcome.objective_value >= incumbent_obj - 1e-9:
            continue
        consider(outcome, bounds)

    if incumbent is None:
        if hit_node_limit:
            return MipOutcome(status=Status.ITERATION_LIMIT, nodes_explored=nodes)
        return MipOutcome(status=Status.INFEASIBLE, nodes_explored=nodes)
    status = Status.ITERATION_LIMIT if hit_node_limit else Status.OPTIMAL
    x = incumbent
    # Snap near-integral values so callers see clean integers.
    for i in work.integer_indices():
        x[i] = round(x[i])
    obj = float(np.asarray(mip.base.objective) @ x)
    final_bound = min(best_bound, incumbent_obj) if hit_node_limit else incumbent_obj
    return MipOutcome(
        status=status,
        x=x,
        objective_value=obj,
        nodes_explored=nodes,
        best_bound=sign * final_bound,
    )
