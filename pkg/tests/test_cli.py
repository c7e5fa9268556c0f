import json
import math

import pytest

from fria.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTables:
    def test_table1_values(self, capsys):
        code, out, _ = run(capsys, "table", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("delta,1e-06")
        coarse = lines[1].split(",")
        thma = lines[2].split(",")
        assert coarse[0] == "coarse" and coarse[1] == "225.07908"
        assert thma[0] == "thmA" and thma[1] == "0.31831"
        assert coarse[1:] == [
            "225.07908", "22.50791", "2.25079", "0.22508", "0.22508", "0.22508", "0.22508",
        ]
        assert thma[1:] == [
            "0.31831", "0.31829", "0.31673", "0.22508", "0.03167", "0.00318", "0.00032",
        ]

    def test_table3_values(self, capsys):
        code, out, _ = run(capsys, "table", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[1].split(",")[1:] == ["183.77630", "18.37763", "1.83776", "0.55133"]
        assert lines[2].split(",")[1:] == ["0.55133"] * 4

    def test_table_to_file(self, capsys, tmp_path):
        target = tmp_path / "t1.csv"
        code, out, _ = run(capsys, "table", "1", "--out", str(target))
        assert code == 0 and out == ""
        assert target.read_text().startswith("delta,")


class TestBounds:
    def test_semidefinite_appendix_case(self, capsys):
        code, out, _ = run(
            capsys, "bounds", "friedrichs", "--lengths", "2,2,2", "--weight", "diag:0,0,1"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["method"] == "semidef"
        assert payload["value"] == pytest.approx(2.0 / math.pi, rel=1e-11)
        assert payload["seminorm"] is True

    def test_default_weight_is_identity(self, capsys):
        code, out, _ = run(capsys, "bounds", "friedrichs", "--lengths", "1,1")
        payload = json.loads(out)
        assert code == 0
        assert payload["value"] == pytest.approx(1.0 / (math.pi * math.sqrt(2.0)), rel=1e-11)
        assert payload["inputs"]["weight"] == {"diag": [1.0, 1.0]}

    def test_explicit_method(self, capsys):
        code, out, _ = run(
            capsys, "bounds", "friedrichs",
            "--lengths", "1,1", "--weight", "diag:1,1e-6", "--method", "coarse",
        )
        payload = json.loads(out)
        assert payload["method"] == "coarse"
        assert payload["value"] == pytest.approx(225.0790790, rel=1e-9)

    def test_maxwell(self, capsys):
        code, out, _ = run(
            capsys, "bounds", "maxwell",
            "--lengths", "1,1,1", "--eps", "diag:1,1,1e-6",
            "--diam", "1.7320508", "--eps-max", "1",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["value"] == pytest.approx(math.sqrt(3.0) / math.pi, rel=1e-7)

    def test_deterministic_output(self, capsys):
        argv = ["bounds", "friedrichs", "--lengths", "1,1", "--weight", "diag:1,0.01"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_json_round_trip(self, capsys):
        argv = ["bounds", "friedrichs", "--lengths", "1.5,2.5", "--weight", "diag:2,3"]
        _, first, _ = run(capsys, *argv)
        payload = json.loads(first)
        lengths = ",".join(repr(v) for v in payload["inputs"]["lengths"])
        weight = "diag:" + ",".join(repr(v) for v in payload["inputs"]["weight"]["diag"])
        _, second, _ = run(capsys, "bounds", "friedrichs", "--lengths", lengths, "--weight", weight)
        assert first == second


class TestErrors:
    def test_unknown_flag_is_usage_error(self, capsys):
        code, _, err = run(capsys, "bounds", "friedrichs", "--lengths", "1,1", "--bogus")
        assert code == 1
        assert "bogus" in err

    def test_bad_weight_is_usage_error(self, capsys):
        code, _, err = run(capsys, "bounds", "friedrichs", "--lengths", "1,1", "--weight", "diag:x")
        assert code == 1
        assert "--weight" in err

    def test_dimension_mismatch(self, capsys):
        code, _, err = run(
            capsys, "bounds", "friedrichs", "--lengths", "1,1", "--weight", "diag:1,1,1"
        )
        assert code == 1
        assert "dimensional" in err

    def test_inapplicable_bound_is_computational_error(self, capsys):
        code, _, err = run(
            capsys, "bounds", "friedrichs",
            "--lengths", "1,1", "--weight", "diag:0,1", "--method", "coarse",
        )
        assert code == 2
        assert "coarse" in err

    def test_missing_subcommand(self, capsys):
        code, _, err = run(capsys, "bounds")
        assert code == 1


class TestExperiment:
    def test_csv_header_and_row(self, capsys):
        code, out, _ = run(capsys, "experiment", "table2", "--levels", "0:0")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "level,elements,M_coarse,M_thmA"
        fields = lines[1].split(",")
        assert fields[:2] == ["0", "384"]
        assert float(fields[2]) == pytest.approx(18.4444, abs=5e-4)
        assert float(fields[3]) == pytest.approx(1.5563, abs=5e-4)

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "experiment", "table2", "--levels", "0:0", "--out", "json")
        rows = json.loads(out)
        assert rows[0]["level"] == 0
        assert rows[0]["elements"] == 384
        assert set(rows[0]) == {"level", "elements", "M_coarse", "M_thmA"}

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "rows.json"
        code, out, _ = run(
            capsys, "experiment", "table2", "--levels", "0:0", "--out", str(target)
        )
        assert code == 0 and out == ""
        assert json.loads(target.read_text())[0]["elements"] == 384

    def test_solution_export(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "experiment", "table2", "--levels", "0:0",
            "--solutions", str(tmp_path / "sols"),
        )
        assert code == 0
        lines = (tmp_path / "sols" / "solution_level0.csv").read_text().splitlines()
        assert lines[0] == "vertex,value"
        assert len(lines) == 1 + 225
        # boundary vertex 0 sits at the domain corner, value exactly zero
        assert lines[1] == "0,0"

    def test_custom_constants_column_names(self, capsys):
        code, out, _ = run(
            capsys, "experiment", "table2", "--levels", "0:0", "--constants", "1,2,3"
        )
        assert out.splitlines()[0] == "level,elements,M_1,M_2,M_3"

    def test_bad_levels(self, capsys):
        code, _, err = run(capsys, "experiment", "table2", "--levels", "a:b")
        assert code == 1


class TestOracle:
    def test_json_payload(self, capsys):
        code, out, _ = run(
            capsys, "oracle", "cfa", "--domain", "square", "--n", "16", "--alpha", "diag:1,0.01"
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"lambda_min", "c_estimate", "bound_thmA", "margin"}
        assert payload["margin"] > 0.0
        assert payload["bound_thmA"] == pytest.approx(
            1.0 / (math.pi * math.sqrt(1.01)), rel=1e-9
        )

    def test_lshape_domain(self, capsys):
        code, out, _ = run(capsys, "oracle", "cfa", "--domain", "lshape", "--level", "0")
        assert code == 0
        payload = json.loads(out)
        # strict subdomain of the unit square: larger eigenvalue, positive margin
        assert payload["lambda_min"] > 2.0 * math.pi**2
        assert payload["margin"] > 0.0
