"""End-to-end tests for the command-line interface."""

import io
import json

import pytest

from pftopt.cli import PARSE_ERROR, USAGE_ERROR, run

def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestSolve:
    def test_shortest_path_fixture(self, fixtures):
        code, out, _ = _run(["solve", "--pft", str(fixtures / "shortest_path.pft.csv")])
        assert code == 0
        assert "status: Optimal" in out
        assert "objective: 1867" in out
        assert "X14" in out and "X47" in out

    def test_json_report_matches_text(self, fixtures):
        path = str(fixtures / "shortest_path.pft.csv")
        code, out, _ = _run(["solve", "--pft", path, "--json"])
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"status", "objective", "variables", "nodes", "iterations"}
        assert doc["status"] == "Optimal"
        assert doc["objective"] == pytest.approx(1867.0)
        names = {v["name"] for v in doc["variables"]}
        assert names == {"X14", "X47"}

    def test_deterministic_output_is_byte_identical(self, fixtures):
        argv = ["solve", "--pft", str(fixtures / "transport_two_warehouse.pft.csv"), "--deterministic"]
        _, first, _ = _run(argv)
        _, second, _ = _run(argv)
        assert first == second
        assert "time_s" not in first

    def test_infeasible_exits_2(self, tmp_path):
        text = (
            "#PFT v1 dir=min title=empty region\n"
            "var,kind,a,b,obj\n"
            "x,C,1,1,1\n"
            "@sense,,le,ge,\n"
            "@rhs,,1,2,\n"
        )
        path = tmp_path / "infeasible.pft.csv"
        path.write_text(text)
        code, out, _ = _run(["solve", "--pft", str(path)])
        assert code == 2
        assert "Infeasible" in out

    def test_unbounded_exits_3(self, tmp_path):
        text = (
            "#PFT v1 dir=max title=no ceiling\n"
            "var,kind,obj\n"
            "x,C,1\n"
        )
        path = tmp_path / "unbounded.pft.csv"
        path.write_text(text)
        code, out, _ = _run(["solve", "--pft", str(path)])
        assert code == 3
        assert "Unbounded" in out

    def test_malformed_pft_exits_65(self, tmp_path):
        path = tmp_path / "bad.pft.csv"
        path.write_text("var,kind,obj\nx,C,1\n")
        code, _, err = _run(["solve", "--pft", str(path)])
        assert code == PARSE_ERROR
        assert "parse error" in err

    def test_missing_file_exits_64(self):
        code, _, _ = _run(["solve", "--pft", "/nonexistent.pft.csv"])
        assert code == USAGE_ERROR

    def test_unknown_subcommand_exits_64(self):
        code, _, _ = _run(["frobnicate"])
        assert code == USAGE_ERROR


class TestAudit:
    def test_clean_fixture(self, fixtures):
        code, out, _ = _run(["audit", "--pft", str(fixtures / "transport_two_warehouse.pft.csv")])
        assert code == 0
        assert out == "no findings\n"

    def test_findings_reported(self, tmp_path):
        text = (
            "#PFT v1 dir=min title=loose\n"
            "var,kind,cap,obj\n"
            "x1,C,1,1\n"
            "x2,C,,1\n"
            "@sense,,le,\n"
            "@rhs,,9,\n"
        )
        path = tmp_path / "loose.pft.csv"
        path.write_text(text)
        code, out, _ = _run(["audit", "--pft", str(path)])
        assert code == 0
        assert "UbRowSingleton" in out
        assert "ZeroRow" in out

    def test_json_findings(self, tmp_path):
        path = tmp_path / "loose.pft.csv"
        path.write_text(
            "#PFT v1 dir=min title=loose\n"
            "var,kind,cap,obj\n"
            "x1,C,1,1\n"
            "@sense,,le,\n"
            "@rhs,,9,\n"
        )
        code, out, _ = _run(["audit", "--pft", str(path), "--json"])
        assert code == 0
        doc = json.loads(out)
        assert doc and all({"kind", "subject", "message"} <= set(f) for f in doc)


class TestNetworkCommands:
    def test_shortest_path(self, fixtures):
        code, out, _ = _run(
            [
                "shortest-path",
                "--net", str(fixtures / "intercity_road.net.csv"),
                "--source", "1",
                "--sink", "7",
            ]
        )
        assert code == 0
        assert "objective: 1867" in out

    def test_maxflow(self, fixtures):
        code, out, _ = _run(
            [
                "maxflow",
                "--net", str(fixtures / "capacitated.net.csv"),
                "--source", "1",
                "--sink", "7",
            ]
        )
        assert code == 0
        assert "objective: 9" in out

    def test_maxflow_sink_cap(self, fixtures):
        code, out, _ = _run(
            [
                "maxflow",
                "--net", str(fixtures / "capacitated.net.csv"),
                "--source", "1",
                "--sink", "7",
                "--sink-cap", "5",
            ]
        )
        assert code == 0
        assert "objective: 5" in out

    def test_flow_capture(self, tmp_path):
        # two parallel two-hop routes; one placement captures the heavier one
        net = tmp_path / "net.csv"
        net.write_text(
            "tail,head,weight,capacity\n1,2,4,\n2,9,4,\n1,3,1,\n3,9,1,\n"
        )
        code, out, _ = _run(
            [
                "flow-capture",
                "--net", str(net),
                "--source", "1",
                "--sink", "9",
                "--placements", "1",
            ]
        )
        assert code == 0
        assert "objective: 4" in out
        assert "X2" in out


class TestSpatialCommands:
    def test_color_infeasible_exit_2(self, fixtures):
        code, out, _ = _run(
            ["color", "--gal", str(fixtures / "demo.gal"), "--max-colors", "1"]
        )
        assert code == 2
        assert "Infeasible" in out

    def test_color_writes_assignment(self, fixtures, tmp_path):
        out_path = tmp_path / "colors.csv"
        code, out, _ = _run(
            [
                "color",
                "--gal", str(fixtures / "demo.gal"),
                "--max-colors", "3",
                "--out", str(out_path),
                "--deterministic",
            ]
        )
        assert code == 0
        assert "colors: 2" in out
        lines = out_path.read_text().splitlines()
        assert lines[0] == "id,Color"
        assert len(lines) == 4

    def test_cover(self, fixtures):
        code, out, _ = _run(["cover", "--gal", str(fixtures / "neighborhoods.gal")])
        assert code == 0
        assert "objective: 3" in out

    def test_malformed_gal_exits_65(self, tmp_path):
        path = tmp_path / "bad.gal"
        path.write_text("0 2 demo id\nA 1\n")
        code, _, err = _run(["color", "--gal", str(path), "--max-colors", "2"])
        assert code == PARSE_ERROR
        assert "parse error" in err


class TestTableCommands:
    def test_transport_fixed(self, tmp_path):
        cost = tmp_path / "cost.csv"
        rows = ["from,to,cost"]
        for i, per_store in zip("AB", ((2, 4, 5, 2, 1), (3, 1, 3, 2, 3))):
            rows.extend(f"{i},{j + 1},{c}" for j, c in enumerate(per_store))
        cost.write_text("\n".join(rows) + "\n")
        code, out, _ = _run(
            [
                "transport",
                "--cost", str(cost),
                "--demand", "500,900,1800,200,700",
                "--capacity", "1000,3200",
            ]
        )
        assert code == 0
        assert "objective: 8600" in out

    def test_transport_design_capacity(self, tmp_path):
        cost = tmp_path / "cost.csv"
        rows = ["from,to,cost"]
        for i, per_store in zip("AB", ((2, 4, 5, 2, 1), (3, 1, 3, 2, 3))):
            rows.extend(f"{i},{j + 1},{c}" for j, c in enumerate(per_store))
        cost.write_text("\n".join(rows) + "\n")
        code, out, _ = _run(
            [
                "transport",
                "--cost", str(cost),
                "--demand", "500,900,1800,200,700",
                "--design-capacity",
            ]
        )
        assert code == 0
        assert "objective: 8400" in out

    def test_transport_requires_capacity_flag(self, tmp_path):
        cost = tmp_path / "cost.csv"
        cost.write_text("from,to,cost\nA,1,2\n")
        code, _, err = _run(
            ["transport", "--cost", str(cost), "--demand", "5"]
        )
        assert code == USAGE_ERROR

    def test_facility(self, tmp_path):
        cost = tmp_path / "unit.csv"
        rows = ["facility,store,cost"]
        unit = ((1, 2, 3, 4, 5), (5, 4, 3, 2, 1), (1, 2, 3, 4, 5), (5, 4, 3, 2, 1))
        for i, per_store in enumerate(unit, start=1):
            rows.extend(f"{i},{j + 1},{c}" for j, c in enumerate(per_store))
        cost.write_text("\n".join(rows) + "\n")
        code, out, _ = _run(
            [
                "facility",
                "--cost", str(cost),
                "--demand", "10,20,30,40,50",
                "--capacity", "60,10,50,55",
                "--fixed", "20,30,20,30",
            ]
        )
        assert code == 0
        assert "objective: 410" in out

    def test_service(self, tmp_path):
        dist = tmp_path / "dist.csv"
        rows = ["demand,candidate,distance"]
        d = ((1, 9), (9, 1))
        for i in (1, 2):
            rows.extend(f"{i},{j + 1},{d[i - 1][j]}" for j in range(2))
        dist.write_text("\n".join(rows) + "\n")
        code, out, _ = _run(["service", "--dist", str(dist), "--open", "1"])
        assert code == 0
        assert "objective: 10" in out

    def test_tour_with_force_arc(self, tmp_path):
        dist = tmp_path / "square.csv"
        rows = ["from,to,dist"]
        d = {
            (1, 2): 1, (2, 1): 1, (1, 3): 9, (3, 1): 9, (1, 4): 4, (4, 1): 4,
            (2, 3): 2, (3, 2): 2, (2, 4): 8, (4, 2): 8, (3, 4): 3, (4, 3): 3,
            (1, 1): 0, (2, 2): 0, (3, 3): 0, (4, 4): 0,
        }
        rows.extend(f"{a},{b},{v}" for (a, b), v in sorted(d.items()))
        dist.write_text("\n".join(rows) + "\n")
        code, out, _ = _run(["tour", "--dist", str(dist)])
        assert code == 0
        assert "objective: 10" in out  # 1-2-3-4-1 = 1+2+3+4
        code, out, _ = _run(["tour", "--dist", str(dist), "--force-arc", "1,3"])
        assert code == 0
        assert "objective: 10" not in out
