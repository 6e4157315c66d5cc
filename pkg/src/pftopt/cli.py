"""Command-line front door.

Subcommands load PFT/network/spatial files, build the matching model, solve
it, and print a report (text by default, JSON behind --json). Exit codes:
0 optimal/feasible, 2 infeasible, 3 unbounded, 64 usage error, 65 parse
error, 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import models, pft as pft_mod, spatial
from .branch_bound import MipProblem, MipOutcome, solve_mip
from .linprog import MalformedProblemError, Status

USAGE_ERROR = 64
PARSE_ERROR = 65

_STATUS_TEXT = {
    Status.OPTIMAL: "Optimal",
    Status.ITERATION_LIMIT: "IterationLimit",
    Status.INFEASIBLE: "Infeasible",
    Status.UNBOUNDED: "Unbounded",
    Status.NUMERICAL: "Numerical",
}

_STATUS_EXIT = {
    Status.OPTIMAL: 0,
    Status.INFEASIBLE: 2,
    Status.UNBOUNDED: 3,
}


@dataclass
class RunReport:
    status_text: str
    objective: float | None
    nonzero: list  # (name, value), |value| > 1e-9 only
    constraint_lines: list
    nodes: int
    iterations: int
    wall_time_s: float | None = None
    extra_lines: list = field(default_factory=list)

    def to_text(self) -> str:
        out = [f"status: {self.status_text}"]
        if self.objective is not None:
            out.append(f"objective: {_num(self.objective)}")
        if self.nonzero:
            out.append("variables:")
            out.extend(f"  {name} = {_num(value)}" for name, value in self.nonzero)
        out.extend(self.extra_lines)
        out.extend(self.constraint_lines)
        out.append(f"nodes: {self.nodes}")
        out.append(f"iterations: {self.iterations}")
        if self.wall_time_s is not None:
            out.append(f"time_s: {self.wall_time_s:.3f}")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {
            "status": self.status_text,
            "objective": self.objective,
            "variables": [{"name": n, "value": v} for n, v in self.nonzero],
            "nodes": self.nodes,
            "iterations": self.iterations,
        }
        return json.dumps(doc, indent=2) + "\n"


def _num(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return f"{value:g}"


def _report(mip: MipProblem, outcome: MipOutcome, wall: float | None) -> RunReport:
    nonzero = []
    con_lines = []
    objective = None
    if outcome.x is not None:
        x = outcome.x
        nonzero = [
            (mip.names[i], float(x[i])) for i in range(len(x)) if abs(x[i]) > 1e-9
        ]
        objective = float(outcome.objective_value)
        base = mip.base
        for j, (coeffs, rhs) in enumerate(base.eq_rows):
            lhs = float(np.dot(coeffs, x))
            con_lines.append(f"eq[{j}]: {_num(lhs)} = {_num(rhs)}")
        for j, (coeffs, rhs) in enumerate(base.ub_rows):
            lhs = float(np.dot(coeffs, x))
            con_lines.append(f"ub[{j}]: {_num(lhs)} <= {_num(rhs)}")
    return RunReport(
        status_text=_STATUS_TEXT[outcome.status],
        objective=objective,
        nonzero=nonzero,
        constraint_lines=con_lines,
        nodes=outcome.nodes_explored,
        iterations=0,
        wall_time_s=wall,
    )


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc}") from exc


def _maybe_int(token: str):
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        return token


def load_network(path: str) -> models.Network:
    """CSV with header tail,head,weight,capacity; blank capacity = +inf."""
    rows = list(csv.reader(io.StringIO(_read(path))))
    if not rows:
        raise models.InputError(f"{path}: empty network file")
    body = [row for row in rows[1:] if row and any(cell.strip() for cell in row)]
    nodes: list = []
    arcs = []
    for row in body:
        if len(row) < 3:
            raise models.InputError(f"{path}: network rows need tail,head,weight[,capacity]")
        tail, head = _maybe_int(row[0]), _maybe_int(row[1])
        weight = float(row[2])
        cap_cell = row[3].strip() if len(row) > 3 else ""
        capacity = float(cap_cell) if cap_cell else math.inf
        for node in (tail, head):
            if node not in nodes:
                nodes.append(node)
        arcs.append((tail, head, weight, capacity))
    return models.Network(node_ids=tuple(nodes), arcs=tuple(arcs))


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _square_matrix(d: models.DistanceMatrix) -> models.DistanceMatrix:
    """Reorder columns so to_ids matches from_ids (tour/square inputs)."""
    if d.is_square():
        return d
    if set(d.from_ids) != set(d.to_ids):
        raise models.InputError("distance matrix is not square over one id set")
    col = {t: j for j, t in enumerate(d.to_ids)}
    rows = tuple(
        tuple(d.d[i][col[t]] for t in d.from_ids) for i in range(len(d.from_ids))
    )
    return models.DistanceMatrix(from_ids=d.from_ids, to_ids=d.from_ids, d=rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pftopt", description="Formulation-table MILP toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument(
            "--deterministic",
            action="store_true",
            help="suppress the wall-time field for byte-identical output",
        )

    p = sub.add_parser("solve", help="solve a generic PFT file")
    p.add_argument("--pft", required=True)
    common(p)

    p = sub.add_parser("audit", help="run the structural audit on a PFT file")
    p.add_argument("--pft", required=True)
    common(p)

    p = sub.add_parser("shortest-path", help="shortest s-t path over a network CSV")
    p.add_argument("--net", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--sink", required=True)
    common(p)

    p = sub.add_parser("tour", help="minimum-cost closed tour from a distance CSV")
    p.add_argument("--dist", required=True)
    p.add_argument("--from-col", type=int, default=0)
    p.add_argument("--to-col", type=int, default=1)
    p.add_argument("--dist-col", type=int, default=2)
    p.add_argument(
        "--force-arc",
        action="append",
        default=[],
        metavar="I,J",
        help="pin arc i->j into the tour (repeatable)",
    )
    common(p)

    p = sub.add_parser("cover", help="minimum-cost set cover from a .gal file")
    p.add_argument("--gal", required=True)
    p.add_argument("--cost", help="comma-separated per-area costs (default all 1)")
    common(p)

    p = sub.add_parser("flow-capture", help="flow-capturing placement over a network CSV")
    p.add_argument("--net", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--sink", required=True)
    p.add_argument("--placements", type=int, required=True)
    p.add_argument("--flows", help="comma-separated per-path flow overrides")
    common(p)

    p = sub.add_parser("color", help="fewest-colors zone heterogeneity from a .gal file")
    p.add_argument("--gal", required=True)
    p.add_argument("--max-colors", type=int, required=True)
    p.add_argument("--out", help="write an id,Color assignment CSV here")
    common(p)

    p = sub.add_parser("service", help="p-server service coverage from a distance CSV")
    p.add_argument("--dist", required=True)
    p.add_argument("--open", type=int, required=True, dest="open_count")
    common(p)

    p = sub.add_parser("transport", help="supply/demand shipment optimization")
    p.add_argument("--cost", required=True, help="linear from,to,cost CSV")
    p.add_argument("--demand", required=True, help="comma-separated per-store demand")
    p.add_argument("--capacity", help="comma-separated per-supplier capacity")
    p.add_argument(
        "--design-capacity",
        action="store_true",
        help="cap each supplier at total demand instead of fixed capacity",
    )
    common(p)

    p = sub.add_parser("maxflow", help="maximum s-t flow over a capacitated network CSV")
    p.add_argument("--net", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--sink", required=True)
    p.add_argument("--sink-cap", type=float)
    common(p)

    p = sub.add_parser("facility", help="fixed-charge warehouse location")
    p.add_argument("--cost", required=True, help="linear facility,store,unit-cost CSV")
    p.add_argument("--demand", required=True)
    p.add_argument("--capacity", required=True)
    p.add_argument("--fixed", required=True)
    common(p)

    return parser


def _build_model(args) -> MipProblem | None:
    """Dispatch to the builder for the chosen subcommand."""
    cmd = args.command
    if cmd == "solve":
        return pft_mod.compile_pft(pft_mod.parse_pft(_read(args.pft)))
    if cmd == "shortest-path":
        net = load_network(args.net)
        return models.build_shortest_path(net, _maybe_int(args.source), _maybe_int(args.sink))
    if cmd == "tour":
        d = _square_matrix(
            spatial.parse_distance_matrix(
                _read(args.dist), args.from_col, args.to_col, args.dist_col
            )
        )
        mip = models.build_tour(d)
        for spec in args.force_arc:
            i, j = (tok.strip() for tok in spec.split(","))
            mip = models.force_arc(mip, i, j)
        return mip
    if cmd == "cover":
        adj = spatial.weights_to_pairs(spatial.parse_gal(_read(args.gal)))
        cost = _float_list(args.cost) if args.cost else [1.0] * len(adj.area_ids)
        return models.build_set_cover(adj, cost)
    if cmd == "flow-capture":
        net = load_network(args.net)
        s, t = _maybe_int(args.source), _maybe_int(args.sink)
        flows = _float_list(args.flows) if args.flows else None
        ps = models.enumerate_st_paths(net, s, t, flows=flows)
        candidates = [n for n in net.node_ids if n not in (s, t)]
        return models.build_flow_capture(ps, candidates, args.placements)
    if cmd == "service":
        d = spatial.parse_distance_matrix(_read(args.dist))
        return models.build_service_coverage(d, args.open_count)
    if cmd == "transport":
        cost = spatial.parse_distance_matrix(_read(args.cost))
        demand = _float_list(args.demand)
        if args.design_capacity:
            mode = models.DesignCapacity()
        else:
            if not args.capacity:
                raise models.InputError("--capacity required unless --design-capacity")
            mode = models.FixedCapacity(_float_list(args.capacity))
        return models.build_transportation(cost, demand, mode)
    if cmd == "maxflow":
        net = load_network(args.net)
        return models.build_max_flow(
            net, _maybe_int(args.source), _maybe_int(args.sink), sink_cap=args.sink_cap
        )
    if cmd == "facility":
        cost = spatial.parse_distance_matrix(_read(args.cost))
        return models.build_facility_location(
            cost, _float_list(args.fixed), _float_list(args.demand), _float_list(args.capacity)
        )
    raise AssertionError(cmd)


def _run_audit(args, stdout) -> int:
    table = pft_mod.parse_pft(_read(args.pft))
    report = pft_mod.audit_pft(table)
    if args.json:
        doc = [
            {"kind": f.kind.value, "subject": f.subject, "message": f.message}
            for f in report.findings
        ]
        stdout.write(json.dumps(doc, indent=2) + "\n")
    elif report.findings:
        for finding in report.findings:
            stdout.write(f"{finding.kind.value}: {finding.message}\n")
    else:
        stdout.write("no findings\n")
    return 0


def _run_color(args, stdout) -> int:
    adj = spatial.weights_to_pairs(spatial.parse_gal(_read(args.gal)))
    started = time.perf_counter()
    result = models.min_colors(adj, args.max_colors)
    wall = None if args.deterministic else time.perf_counter() - started
    if not result.found:
        if args.json:
            doc = {"status": "Infeasible", "max_colors": result.max_tried}
            stdout.write(json.dumps(doc, indent=2) + "\n")
        else:
            stdout.write(f"status: Infeasible\nno coloring with up to {result.max_tried} colors\n")
        return 2
    if args.json:
        doc = {
            "status": "Optimal",
            "colors": result.colors,
            "assignment": {str(k): v for k, v in result.assignment.items()},
        }
        stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        stdout.write(f"status: Optimal\ncolors: {result.colors}\n")
        for area, color in result.assignment.items():
            stdout.write(f"  {area} = {color}\n")
        if wall is not None:
            stdout.write(f"time_s: {wall:.3f}\n")
    if args.out:
        text = spatial.write_assignment_csv(
            result.assignment, id_header="id", label_header="Color"
        )
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        if args.command == "audit":
            return _run_audit(args, stdout)
        if args.command == "color":
            return _run_color(args, stdout)
        started = time.perf_counter()
        mip = _build_model(args)
        outcome = solve_mip(mip)
        wall = None if args.deterministic else time.perf_counter() - started
        report = _report(mip, outcome, wall)
        stdout.write(report.to_json() if args.json else report.to_text())
        return _STATUS_EXIT.get(outcome.status, 1)
    except (pft_mod.PftParseError, spatial.GalParseError, spatial.DistanceCsvError) as exc:
        stderr.write(f"parse error: {exc}\n")
        return PARSE_ERROR
    except (models.InputError, MalformedProblemError, FileNotFoundError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
