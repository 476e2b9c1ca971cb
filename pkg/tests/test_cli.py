import io
import json

import pytest

from openpoint.cli import run
from openpoint.space import space_from_json, space_to_json

from .conftest import make_discrete, make_sierpinski


@pytest.fixture
def sierpinski_file(tmp_path):
    path = tmp_path / "sierpinski.json"
    path.write_text(json.dumps(space_to_json(make_sierpinski())))
    return str(path)


@pytest.fixture
def discrete2_file(tmp_path):
    path = tmp_path / "discrete2.json"
    path.write_text(json.dumps(space_to_json(make_discrete(2))))
    return str(path)


def invoke(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out=out, err=err, stdin=io.StringIO(stdin_text))
    return code, out.getvalue(), err.getvalue()


def ndjson_lines(text):
    return [json.loads(line) for line in text.splitlines() if line]


class TestValidate:
    def test_prints_canonical_form(self, sierpinski_file):
        code, out, _ = invoke(["validate", sierpinski_file])
        assert code == 0
        obj = json.loads(out)
        assert obj["opens"] == [[], ["b"], ["a", "b"]]

    def test_missing_file_is_usage_error(self):
        code, out, err = invoke(["validate", "/nowhere/x.json"])
        assert code == 1 and not out and "error" in err

    def test_invalid_topology_fails(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"name": "bad", "points": ["a", "b"],
                                   "opens": [["b"], ["a", "b"]]}))
        code, out, err = invoke(["validate", str(bad)])
        assert code == 1 and "error" in err


class TestInvariants:
    def test_sierpinski_record(self, sierpinski_file):
        code, out, _ = invoke(["invariants", sierpinski_file])
        assert code == 0
        rec = json.loads(out)
        assert rec == {"space": "sierpinski", "n": 2,
                       "d": 1, "delta": 1, "gd": 1, "pi": 1, "w": 2, "t": 1}


class TestSolve:
    def test_table_lines(self, sierpinski_file):
        code, out, _ = invoke(["solve", sierpinski_file])
        assert code == 0
        recs = ndjson_lines(out)
        empty = next(r for r in recs if r["closed_set"] == [])
        assert empty["value"] == 1 and empty["best_move"] == ["b"]


class TestPlay:
    def test_interactive_legal_point(self, sierpinski_file):
        code, out, err = invoke(
            ["play", sierpinski_file, "--pI", "optimal"], stdin_text="b\n"
        )
        assert code == 0
        final = ndjson_lines(out)[-1]
        assert final == {"length": 1, "gd": 1, "matched_gd": True}

    def test_interactive_reprompts_outside_point(self, sierpinski_file):
        code, out, err = invoke(
            ["play", sierpinski_file], stdin_text="a\nb\n"
        )
        assert code == 0
        assert "outside the offered open" in err

    def test_random_picker_seeded(self, discrete2_file):
        code1, out1, _ = invoke(["--seed", "7", "play", discrete2_file, "--pII", "random"])
        code2, out2, _ = invoke(["--seed", "7", "play", discrete2_file, "--pII", "random"])
        assert code1 == code2 == 0 and out1 == out2
        assert ndjson_lines(out1)[-1]["length"] == 2

    def test_aggregate_with_ledger(self, tmp_path, sierpinski_file, discrete2_file):
        ledger_path = tmp_path / "ledger.ndjson"
        code, out, _ = invoke([
            "play", discrete2_file, sierpinski_file,
            "--pI", "aggregate", "--pII", "first",
            "--ledger", str(ledger_path),
        ])
        assert code == 0
        entries = ndjson_lines(ledger_path.read_text())
        assert entries and list(entries[0]) == ["stage", "alpha", "beta", "eta", "epsilon"]
        keys = [(e["alpha"], e["beta"], e["eta"], e["epsilon"]) for e in entries]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)

    def test_ledger_without_aggregate_rejected(self, sierpinski_file):
        code, _, err = invoke(["play", sierpinski_file, "--ledger", "x.ndjson"])
        assert code == 1 and "ledger" in err


class TestEnumerate:
    def test_three_point_count(self):
        code, out, _ = invoke(["enumerate", "--n", "3", "--method", "both"])
        assert code == 0
        assert len(ndjson_lines(out)) == 29

    def test_unlabeled(self):
        code, out, _ = invoke(["enumerate", "--n", "3", "--mode", "unlabeled"])
        assert len(ndjson_lines(out)) == 9

    def test_every_line_loads_back(self):
        _, out, _ = invoke(["enumerate", "--n", "2"])
        for rec in ndjson_lines(out):
            space_from_json(rec)

    def test_out_of_range(self):
        code, _, err = invoke(["enumerate", "--n", "9"])
        assert code == 1 and "error" in err


class TestSuite:
    def test_chain_on_three_points(self):
        code, out, err = invoke(["suite", "--n", "3", "--checks", "chain"])
        assert code == 0
        recs = ndjson_lines(out)
        assert len(recs) == 29 and all(r["status"] == "pass" for r in recs)
        assert "29/29" in err

    def test_report_file(self, tmp_path):
        report = tmp_path / "report.ndjson"
        code, out, _ = invoke(["suite", "--n", "2", "--checks", "variants",
                               "--report", str(report)])
        assert code == 0 and not out
        assert len(ndjson_lines(report.read_text())) == 4


class TestProduct:
    def test_product_file_roundtrip(self, tmp_path, sierpinski_file, discrete2_file):
        out_path = tmp_path / "prod.json"
        code, _, _ = invoke(["product", discrete2_file, sierpinski_file,
                             "-o", str(out_path)])
        assert code == 0
        prod = space_from_json(json.loads(out_path.read_text()))
        assert prod.n == 4 and len(prod.opens) == 9


class TestFanCheck:
    def test_holds_exit_zero(self, tmp_path):
        spec = tmp_path / "fan.json"
        s = space_to_json(make_sierpinski())
        spec.write_text(json.dumps({"factors": [s, s]}))
        code, out, _ = invoke(["fan-check", str(spec), "--kappa", "2"])
        assert code == 0
        head = ndjson_lines(out)[0]
        assert head["status"] == "holds" and head["unknown_cells"] == 0

    def test_factor_paths_accepted(self, tmp_path, sierpinski_file):
        spec = tmp_path / "fan.json"
        spec.write_text(json.dumps({"factors": [sierpinski_file]}))
        code, out, _ = invoke(["fan-check", str(spec), "--kappa", "1"])
        assert code == 0


class TestGreedy:
    def test_worked_example(self, tmp_path):
        path = tmp_path / "line.json"
        path.write_text(json.dumps({
            "points": ["a", "b", "c"],
            "dist": [["0", "2/5", "1"], ["2/5", "0", "3/5"], ["1", "3/5", "0"]],
        }))
        code, out, _ = invoke(["greedy", str(path), "--start", "a"])
        assert code == 0
        recs = ndjson_lines(out)
        assert [r["point"] for r in recs] == ["a", "c", "b"]
        assert [r["radius"] for r in recs] == [None, "1", "2/5"]

    def test_unknown_start(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"points": ["a"], "dist": [["0"]]}))
        code, _, err = invoke(["greedy", str(path), "--start", "z"])
        assert code == 1


class TestPrettyFormat:
    def test_validate_pretty_is_indented_json(self, sierpinski_file):
        code, out, _ = invoke(["--format", "pretty", "validate", sierpinski_file])
        assert code == 0 and out.startswith("{\n")
        assert json.loads(out)["name"] == "sierpinski"


class TestDeterminism:
    def test_suite_byte_identical(self):
        _, out1, _ = invoke(["--seed", "3", "suite", "--n", "2",
                             "--checks", "chain,variants,metric"])
        _, out2, _ = invoke(["--seed", "3", "suite", "--n", "2",
                             "--checks", "chain,variants,metric"])
        assert out1 == out2
