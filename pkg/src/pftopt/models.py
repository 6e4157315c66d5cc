"""Builders that turn networks, distance matrices, and adjacency structures
into solvable mixed-integer problems.

Each builder is a pure function returning a MipProblem; nothing here touches
the solver. Variable naming follows the conventions of the underlying
formulations (arc variables "X<i>_<j>", assignment variables "Y<i>_<j>",
placement variables "X<j>").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


from .branch_bound import MipProblem, VarKind
from .linprog import LinearProgram, to_standard_form

__all__ = [
    "InputError",
    "Network",
    "DistanceMatrix",
    "AdjacencySet",
    "PathSet",
    "MinColorsResult",
    "build_shortest_path",
    "build_tour",
    "force_arc",
    "build_set_cover",
    "enumerate_st_paths",
    "build_flow_capture",
    "build_coloring",
    "min_colors",
    "build_service_coverage",
    "build_transportation",
    "build_max_flow",
    "build_facility_location",
]


class InputError(ValueError):
    """Invalid builder input (bad ids, shapes, or parameter ranges)."""


@dataclass(frozen=True)
class Network:
    """Directed arc list; capacity may be math.inf for uncapacitated arcs."""

    node_ids: tuple
    arcs: tuple  # of (tail, head, weight, capacity)

    def __post_init__(self) -> None:
        nodes = tuple(self.node_ids)
        if len(set(nodes)) != len(nodes):
            raise InputError("duplicate node ids")
        node_set = set(nodes)
        seen = set()
        arcs = []
        for tail, head, weight, capacity in self.arcs:
            if tail not in node_set or head not in node_set:
                raise InputError(f"arc ({tail}, {head}) references an unknown node")
            if tail == head:
                raise InputError(f"self-loop on node {tail}")
            if (tail, head) in seen:
                raise InputError(f"duplicate arc ({tail}, {head})")
            seen.add((tail, head))
            weight = float(weight)
            capacity = float(capacity)
            if weight < 0 or math.isnan(weight):
                raise InputError(f"arc ({tail}, {head}) has negative weight")
            if capacity < 0 or math.isnan(capacity):
                raise InputError(f"arc ({tail}, {head}) has negative capacity")
            arcs.append((tail, head, weight, capacity))
        object.__setattr__(self, "node_ids", nodes)
        object.__setattr__(self, "arcs", tuple(arcs))


@dataclass(frozen=True)
class DistanceMatrix:
    from_ids: tuple
    to_ids: tuple
    d: tuple  # row-major, one row per from_id

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(v) for v in row) for row in self.d)
        if len(rows) != len(self.from_ids):
            raise InputError("distance matrix row count must match from_ids")
        for row in rows:
            if len(row) != len(self.to_ids):
                raise InputError("distance matrix column count must match to_ids")
            for v in row:
                if v < 0 or not math.isfinite(v):
                    raise InputError("distances must be finite and non-negative")
        object.__setattr__(self, "from_ids", tuple(self.from_ids))
        object.__setattr__(self, "to_ids", tuple(self.to_ids))
        object.__setattr__(self, "d", rows)

    def is_square(self) -> bool:
        return self.from_ids == self.to_ids


@dataclass(frozen=True)
class AdjacencySet:
    area_ids: tuple
    pairs: frozenset  # of frozenset({a, b}) boundary pairs

    def __post_init__(self) -> None:
        areas = tuple(self.area_ids)
        if len(set(areas)) != len(areas):
            raise InputError("duplicate area ids")
        area_set = set(areas)
        norm = set()
        for pair in self.pairs:
            a, b = tuple(pair)
            if a == b:
                raise InputError(f"self-pair on area {a}")
            if a not in area_set or b not in area_set:
                raise InputError(f"pair ({a}, {b}) references an unknown area")
            norm.add(frozenset((a, b)))
        object.__setattr__(self, "area_ids", areas)
        object.__setattr__(self, "pairs", frozenset(norm))

    def neighbors(self, area) -> list:
        out = [b for pair in self.pairs for b in pair if area in pair and b != area]
        order = {a: i for i, a in enumerate(self.area_ids)}
        return sorted(set(out), key=order.__getitem__)


@dataclass(frozen=True)
class PathSet:
    source: object
    sink: object
    paths: tuple  # of node-id tuples
    flow: tuple  # one f_r >= 0 per path

    def __post_init__(self) -> None:
        paths = tuple(tuple(p) for p in self.paths)
        flows = tuple(float(f) for f in self.flow)
        if len(flows) != len(paths):
            raise InputError("one flow value per path required")
        for p in paths:
            if len(p) < 2 or p[0] != self.source or p[-1] != self.sink:
                raise InputError(f"path {p} must run source -> sink")
            if len(set(p)) != len(p):
                raise InputError(f"path {p} is not simple")
        if any(f < 0 for f in flows):
            raise InputError("path flows must be non-negative")
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "flow", flows)

    def with_flows(self, flows) -> "PathSet":
        return PathSet(source=self.source, sink=self.sink, paths=self.paths, flow=tuple(flows))


def _mip(objective, rows, bounds, kinds, names, direction) -> MipProblem:
    eq_rows, ub_rows = to_standard_form(rows)
    base = LinearProgram(
        objective=tuple(objective),
        eq_rows=eq_rows,
        ub_rows=ub_rows,
        bounds=tuple(bounds),
        direction=direction,
    )
    return MipProblem(base=base, kinds=tuple(kinds), names=tuple(names))


def build_shortest_path(net: Network, s, t) -> MipProblem:
    """One binary per arc; unit flow leaves s and enters t, with single-entry
    caps on every node that has entering arcs."""
    if s == t:
        raise InputError("source and sink must differ")
    if s not in net.node_ids or t not in net.node_ids:
        raise InputError("source or sink not in network")
    arcs = net.arcs
    n = len(arcs)
    rows = []
    for node in net.node_ids:
        coeffs = [0.0] * n
        for idx, (tail, head, _, _) in enumerate(arcs):
            if head == node:
                coeffs[idx] += 1.0
            elif tail == node:
                coeffs[idx] -= 1.0
        rhs = -1.0 if node == s else (1.0 if node == t else 0.0)
        rows.append((coeffs, "eq", rhs))
    for node in net.node_ids:
        entering = [idx for idx, (_, head, _, _) in enumerate(arcs) if head == node]
        if not entering:
            continue
        coeffs = [0.0] * n
        for idx in entering:
            coeffs[idx] = 1.0
        rows.append((coeffs, "le", 1.0))
    return _mip(
        objective=[w for _, _, w, _ in arcs],
        rows=rows,
        bounds=[(0.0, 1.0)] * n,
        kinds=[VarKind.BINARY] * n,
        names=[f"X{tail}{head}" for tail, head, _, _ in arcs],
        direction="min",
    )


def _tour_arc_names(n: int) -> list[tuple]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def build_tour(d: DistanceMatrix) -> MipProblem:
    """Minimum-cost closed tour with single-entry/single-exit degree rows and
    MTZ ordering variables u_i (u_1 pinned to 1) to forbid subtours."""
    if not d.is_square():
        raise InputError("tour requires a square distance matrix")
    n = len(d.from_ids)
    if n < 3:
        raise InputError("tour requires at least 3 nodes")
    arc_pairs = _tour_arc_names(n)
    n_arcs = len(arc_pairs)
    n_total = n_arcs + n  # arcs then u_1..u_N
    arc_idx = {pair: k for k, pair in enumerate(arc_pairs)}

    rows = []
    for j in range(1, n + 1):  # entry: exactly one arc into j
        coeffs = [0.0] * n_total
        for i in range(1, n + 1):
            if i != j:
                coeffs[arc_idx[(i, j)]] = 1.0
        rows.append((coeffs, "eq", 1.0))
    for i in range(1, n + 1):  # exit: exactly one arc out of i
        coeffs = [0.0] * n_total
        for j in range(1, n + 1):
            if i != j:
                coeffs[arc_idx[(i, j)]] = 1.0
        rows.append((coeffs, "eq", 1.0))
    for i in range(2, n + 1):  # MTZ: u_i - u_j + N*X_ij <= N - 1
        for j in range(2, n + 1):
            if i == j:
                continue
            coeffs = [0.0] * n_total
            coeffs[n_arcs + i - 1] = 1.0
            coeffs[n_arcs + j - 1] = -1.0
            coeffs[arc_idx[(i, j)]] = float(n)
            rows.append((coeffs, "le", float(n - 1)))

    objective = [0.0] * n_total
    for (i, j), k in arc_idx.items():
        objective[k] = d.d[i - 1][j - 1]
    bounds = [(0.0, 1.0)] * n_arcs + [(1.0, 1.0)] + [(2.0, float(n))] * (n - 1)
    kinds = [VarKind.BINARY] * n_arcs + [VarKind.INTEGER] * n
    names = [f"X{d.from_ids[i - 1]}{d.to_ids[j - 1]}" for i, j in arc_pairs]
    names += [f"U{node}" for node in d.from_ids]
    return _mip(objective, rows, bounds, kinds, names, "min")


def force_arc(mip: MipProblem, i, j) -> MipProblem:
    """Return a copy of a tour problem with X_i_j pinned to 1 (sensitivity runs)."""
    name = f"X{i}{j}"
    if name not in mip.names:
        raise InputError(f"arc {name} not in model")
    idx = mip.names.index(name)
    coeffs = [0.0] * mip.num_vars
    coeffs[idx] = 1.0
    base = mip.base
    return MipProblem(
        base=LinearProgram(
            objective=base.objective,
            eq_rows=base.eq_rows + ((tuple(coeffs), 1.0),),
            ub_rows=base.ub_rows,
            bounds=base.bounds,
            direction=base.direction,
        ),
        kinds=mip.kinds,
        names=mip.names,
    )


def build_set_cover(adj: AdjacencySet, cost) -> MipProblem:
    """Minimum-cost covering: every area's closed neighborhood (itself plus
    boundary sharers) must contain at least one placement."""
    areas = adj.area_ids
    n = len(areas)
    cost = [float(c) for c in cost]
    if len(cost) != n:
        raise InputError("one cost per area required")
    if any(c <= 0 for c in cost):
        raise InputError("costs must be positive")
    index = {a: i for i, a in enumerate(areas)}
    rows = []
    for area in areas:
        coeffs = [0.0] * n
        coeffs[index[area]] = 1.0
        for nb in adj.neighbors(area):
            coeffs[index[nb]] = 1.0
        rows.append((coeffs, "ge", 1.0))
    return _mip(
        objective=cost,
        rows=rows,
        bounds=[(0.0, 1.0)] * n,
        kinds=[VarKind.BINARY] * n,
        names=[f"X{a}" for a in areas],
        direction="min",
    )


def enumerate_st_paths(net: Network, s, t, flows=None) -> PathSet:
    """All simple directed s->t paths by depth-first search, neighbors visited
    in ascending node-id order. Default per-path flow is the minimum arc
    weight along the path; `flows` overrides the whole vector."""
    if s == t:
        raise InputError("source and sink must differ")
    out_arcs: dict = {node: [] for node in net.node_ids}
    weight = {}
    for tail, head, w, _ in net.arcs:
        out_arcs[tail].append(head)
        weight[(tail, head)] = w
    for heads in out_arcs.values():
        heads.sort()
    paths: list[tuple] = []
    stack = [s]
    on_path = {s}

    def dfs(node) -> None:
        if node == t:
            paths.append(tuple(stack))
            return
        for head in out_arcs.get(node, ()):
            if head in on_path:
                continue
            stack.append(head)
            on_path.add(head)
            dfs(head)
            stack.pop()
            on_path.discard(head)

    dfs(s)
    if flows is None:
        flows = [
            min(weight[(p[k], p[k + 1])] for k in range(len(p) - 1)) for p in paths
        ]
    elif len(tuple(flows)) != len(paths):
        raise InputError("override flows must match the path count")
    return PathSet(source=s, sink=t, paths=tuple(paths), flow=tuple(flows))


def build_flow_capture(ps: PathSet, candidates, p: int) -> MipProblem:
    """Place p facilities on candidate nodes to maximize the captured path
    flow; a path counts iff at least one placed node lies on it."""
    candidates = tuple(candidates)
    if p > len(candidates):
        raise InputError("p exceeds the candidate count")
    if ps.source in candidates or ps.sink in candidates:
        raise InputError("source and sink nodes cannot be candidates")
    n_x = len(candidates)
    n_y = len(ps.paths)
    n = n_x + n_y
    cand_idx = {node: k for k, node in enumerate(candidates)}
    rows = []
    coeffs = [1.0] * n_x + [0.0] * n_y
    rows.append((coeffs, "eq", float(p)))
    for r, path in enumerate(ps.paths):
        coeffs = [0.0] * n
        coeffs[n_x + r] = 1.0
        for node in path:
            if node in cand_idx:
                coeffs[cand_idx[node]] = -1.0
        rows.append((coeffs, "le", 0.0))
    objective = [0.0] * n_x + list(ps.flow)
    return _mip(
        objective=objective,
        rows=rows,
        bounds=[(0.0, 1.0)] * n,
        kinds=[VarKind.BINARY] * n,
        names=[f"X{node}" for node in candidates] + [f"Y{r + 1}" for r in range(n_y)],
        direction="max",
    )


def build_coloring(adj: AdjacencySet, colors: int) -> MipProblem:
    """Feasibility model: one color per area, boundary pairs never share a
    color. Variables are laid out in per-color blocks (x[k*N + i])."""
    if colors < 1:
        raise InputError("need at least one color")
    areas = adj.area_ids
    n_areas = len(areas)
    n = n_areas * colors
    index = {a: i for i, a in enumerate(areas)}
    rows = []
    for k in range(colors):
        for pair in sorted(adj.pairs, key=lambda pr: sorted(index[a] for a in pr)):
            a, b = sorted(pair, key=index.__getitem__)
            coeffs = [0.0] * n
            coeffs[k * n_areas + index[a]] = 1.0
            coeffs[k * n_areas + index[b]] = 1.0
            rows.append((coeffs, "le", 1.0))
    for i in range(n_areas):
        coeffs = [0.0] * n
        for k in range(colors):
            coeffs[k * n_areas + i] = 1.0
        rows.append((coeffs, "eq", 1.0))
    return _mip(
        objective=[1.0] * n,
        rows=rows,
        bounds=[(0.0, 1.0)] * n,
        kinds=[VarKind.BINARY] * n,
        names=[f"{areas[i]}_{k}" for k in range(colors) for i in range(n_areas)],
        direction="min",
    )


@dataclass(frozen=True)
class MinColorsResult:
    found: bool
    colors: int | None
    assignment: dict = field(default_factory=dict)  # area -> color index (0-based)
    max_tried: int = 0


def min_colors(adj: AdjacencySet, max_colors: int, solve=None) -> MinColorsResult:
    """Smallest feasible color count in 1..max_colors by ascending scan."""
    from .branch_bound import solve_mip
    from .linprog import Status

    solve = solve or solve_mip
    areas = adj.area_ids
    n_areas = len(areas)
    for k in range(1, max_colors + 1):
        outcome = solve(build_coloring(adj, k))
        if outcome.status is Status.OPTIMAL:
            assignment = {}
            for color in range(k):
                for i, area in enumerate(areas):
                    if outcome.x[color * n_areas + i] > 0.5:
                        assignment[area] = color
            return MinColorsResult(found=True, colors=k, assignment=assignment, max_tried=k)
    return MinColorsResult(found=False, colors=None, max_tried=max_colors)


def build_service_coverage(d: DistanceMatrix, p: int) -> MipProblem:
    """Open exactly p servers among the candidate columns and assign every
    demand row to exactly one open server, minimizing total distance."""
    n_demand = len(d.from_ids)
    m_cand = len(d.to_ids)
    if p > m_cand:
        raise InputError("p exceeds the candidate count")
    n_y = n_demand * m_cand  # stored in candidate-major blocks (j outer, i inner)
    n = n_y + m_cand

    def y_idx(i: int, j: int) -> int:
        return j * n_demand + i

    rows = []
    for i in range(n_demand):  # each demand served exactly once
        coeffs = [0.0] * n
        for j in range(m_cand):
            coeffs[y_idx(i, j)] = 1.0
        rows.append((coeffs, "eq", 1.0))
    coeffs = [0.0] * n_y + [1.0] * m_cand  # exactly p servers open
    rows.append((coeffs, "eq", float(p)))
    for j in range(m_cand):  # linking: Y_ij <= X_j
        for i in range(n_demand):
            coeffs = [0.0] * n
            coeffs[y_idx(i, j)] = 1.0
            coeffs[n_y + j] = -1.0
            rows.append((coeffs, "le", 0.0))
    objective = [0.0] * n
    for j in range(m_cand):
        for i in range(n_demand):
            objective[y_idx(i, j)] = d.d[i][j]
    names = [
        f"Y{d.from_ids[i]}{d.to_ids[j]}" for j in range(m_cand) for i in range(n_demand)
    ] + [f"X{c}" for c in d.to_ids]
    return _mip(
        objective=objective,
        rows=rows,
        bounds=[(0.0, 1.0)] * n,
        kinds=[VarKind.BINARY] * n,
        names=names,
        direction="min",
    )


class FixedCapacity:
    """Supply mode: each supplier i ships at most its stated capacity."""

    def __init__(self, capacities):
        self.capacities = tuple(float(u) for u in capacities)


class DesignCapacity:
    """Supply mode: each supplier may ship up to the total demand; the solve
    reveals the cost-minimal capacity to design for."""


def build_transportation(cost: DistanceMatrix, demand, supply_mode) -> MipProblem:
    """Integer shipments X_ij meeting every store's demand exactly, with
    supplier rows capped by fixed or design capacity."""
    m_sup = len(cost.from_ids)
    n_dem = len(cost.to_ids)
    demand = [float(v) for v in demand]
    if len(demand) != n_dem:
        raise InputError("one demand per store required")
    if isinstance(supply_mode, FixedCapacity):
        caps = supply_mode.capacities
        if len(caps) != m_sup:
            raise InputError("one capacity per supplier required")
    elif isinstance(supply_mode, DesignCapacity) or supply_mode is DesignCapacity:
        caps = tuple(sum(demand) for _ in range(m_sup))
    else:
        raise InputError(f"unknown supply mode {supply_mode!r}")
    n = m_sup * n_dem

    def x_idx(i: int, j: int) -> int:
        return i * n_dem + j

    rows = []
    for j in range(n_dem):
        coeffs = [0.0] * n
        for i in range(m_sup):
            coeffs[x_idx(i, j)] = 1.0
        rows.append((coeffs, "eq", demand[j]))
    for i in range(m_sup):
        coeffs = [0.0] * n
        for j in range(n_dem):
            coeffs[x_idx(i, j)] = 1.0
        rows.append((coeffs, "le", caps[i]))
    objective = [0.0] * n
    for i in range(m_sup):
        for j in range(n_dem):
            objective[x_idx(i, j)] = cost.d[i][j]
    names = [
        f"X{cost.from_ids[i]}{cost.to_ids[j]}" for i in range(m_sup) for j in range(n_dem)
    ]
    return _mip(
        objective=objective,
        rows=rows,
        bounds=[(0.0, math.inf)] * n,
        kinds=[VarKind.INTEGER] * n,
        names=names,
        direction="min",
    )


def build_max_flow(net: Network, s, t, sink_cap: float | None = None) -> MipProblem:
    """Continuous arc flows, capacity bounds, conservation at every
    intermediate node, maximizing total flow out of the source. An optional
    sink_cap caps the total flow into the sink."""
    if s == t:
        raise InputError("source and sink must differ")
    if s not in net.node_ids or t not in net.node_ids:
        raise InputError("source or sink not in network")
    arcs = net.arcs
    n = len(arcs)
    rows = []
    for node in net.node_ids:
        if node in (s, t):
            continue
        coeffs = [0.0] * n
        for idx, (tail, head, _, _) in enumerate(arcs):
            if head == node:
                coeffs[idx] += 1.0
            elif tail == node:
                coeffs[idx] -= 1.0
        rows.append((coeffs, "eq", 0.0))
    if sink_cap is not None:
        coeffs = [1.0 if head == t else 0.0 for _, head, _, _ in arcs]
        rows.append((coeffs, "le", float(sink_cap)))
    objective = [1.0 if tail == s else 0.0 for tail, _, _, _ in arcs]
    return _mip(
        objective=objective,
        rows=rows,
        bounds=[(0.0, cap) for _, _, _, cap in arcs],
        kinds=[VarKind.CONTINUOUS] * n,
        names=[f"X{tail}{head}" for tail, head, _, _ in arcs],
        direction="max",
    )


def build_facility_location(unit_cost: DistanceMatrix, fixed_cost, demand, capacity) -> MipProblem:
    """Open/close binaries X_i with linking rows sum_j Y_ij <= u_i X_i,
    minimizing unit shipping plus fixed operating cost."""
    n_fac = len(unit_cost.from_ids)
    m_store = len(unit_cost.to_ids)
    fixed_cost = [float(f) for f in fixed_cost]
    demand = [float(v) for v in demand]
    capacity = [float(u) for u in capacity]
    if len(fixed_cost) != n_fac or len(capacity) != n_fac:
        raise InputError("one fixed cost and capacity per facility required")
    if len(demand) != m_store:
        raise InputError("one demand per store required")
    if sum(capacity) < sum(demand):
        raise InputError("total capacity below total demand")
    n_y = n_fac * m_store
    n = n_y + n_fac

    def y_idx(i: int, j: int) -> int:
        return i * m_store + j

    rows = []
    for j in range(m_store):
        coeffs = [0.0] * n
        for i in range(n_fac):
            coeffs[y_idx(i, j)] = 1.0
        rows.append((coeffs, "eq", demand[j]))
    for i in range(n_fac):
        coeffs = [0.0] * n
        for j in range(m_store):
            coeffs[y_idx(i, j)] = 1.0
        coeffs[n_y + i] = -capacity[i]
        rows.append((coeffs, "le", 0.0))
    objective = [0.0] * n
    for i in range(n_fac):
        for j in range(m_store):
            objective[y_idx(i, j)] = unit_cost.d[i][j]
        objective[n_y + i] = fixed_cost[i]
    names = [
        f"Y{unit_cost.from_ids[i]}{unit_cost.to_ids[j]}"
        for i in range(n_fac)
        for j in range(m_store)
    ] + [f"X{f}" for f in unit_cost.from_ids]
    bounds = [(0.0, math.inf)] * n_y + [(0.0, 1.0)] * n_fac
    kinds = [VarKind.INTEGER] * n_y + [VarKind.BINARY] * n_fac
    return _mip(objective, rows, bounds, kinds, names, "min")
