"""
CLI Test Suite
==============
End-to-end runs of the queen-spectra command line through main(argv).

Covers:
- Exit-code contract (0 pass / 1 failed check / 2 bad input / 3 budget)
- JSON payloads against the shipped schema, fixed CSV headers
- Byte-identical reports across repeated runs and worker counts
"""

import json
from pathlib import Path

import jsonschema
import pytest

from src.cli import EXIT_BAD_INPUT, EXIT_BUDGET, EXIT_OK, main
from utils.config_loader import ConfigLoader, ConfigurationError

SCHEMA_PATH = Path(__file__).parent.parent / "config" / "schemas" / "spectrum.schema.json"


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture
def run_cli(capsys):
    """
    Run main(argv) and capture its streams.

    Usage:
        code, out, err = run_cli("spectrum", "--n", "5")
    """
    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def env_loader(monkeypatch):
    """Reload configuration after env changes, and again once they are undone."""
    yield lambda: ConfigLoader().reload()
    monkeypatch.undo()
    ConfigLoader().reload()


def sections_of(out):
    return json.loads(out)["sections"]


class TestSpectrumCommand:

    @pytest.mark.smoke
    def test_formula_csv_at_eleven(self, run_cli):
        code, out, _ = run_cli("spectrum", "--n", "11", "--method", "formula", "--format", "csv")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "mu,lambda,multiplicity"
        assert len(lines) == 7
        assert lines[1:] == ["13,130,1", "4,31,90", "3,20,40", "2,9,120", "1,-2,840", "0,-13,240"]

    def test_enumerated_csv_at_five_omits_empty_class(self, run_cli):
        code, out, _ = run_cli("spectrum", "--n", "5", "--method", "enumerate", "--format", "csv")
        assert code == EXIT_OK
        assert out.splitlines()[1:] == ["13,52,1", "4,7,36", "3,2,16", "2,-3,48", "1,-8,24"]

    def test_non_generic_formula_request_is_rejected(self, run_cli):
        code, out, err = run_cli("spectrum", "--n", "6", "--method", "formula")
        assert code == EXIT_BAD_INPUT
        assert out == ""
        assert "generic odd regime" in err

    def test_both_methods_validate_against_schema(self, run_cli, schema):
        code, out, _ = run_cli("spectrum", "--n", "5", "7", "--method", "both", "--format", "json")
        assert code == EXIT_OK
        sections = sections_of(out)
        assert [s["n"] for s in sections] == [5, 7]
        for section in sections:
            assert [t["method"] for t in section["tables"]] == ["formula", "enumeration"]
            for table in section["tables"]:
                jsonschema.validate(instance=table, schema=schema)
            assert any(c["name"] == "formula = enumeration" and c["pass"] for c in section["checks"])

    def test_schema_rejects_fractional_multiplicity(self, run_cli, schema):
        code, out, _ = run_cli("spectrum", "--n", "5", "--method", "formula", "--format", "json")
        assert code == EXIT_OK
        table = sections_of(out)[0]["tables"][0]
        table["rows"][0]["multiplicity"] = 1.5
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(instance=table, schema=schema)

    def test_multi_table_csv_is_keyed_by_n_and_method(self, run_cli):
        code, out, _ = run_cli("spectrum", "--range", "5..7", "--method", "enumerate", "--format", "csv")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "n,method,mu,lambda,multiplicity"
        assert {line.split(",")[0] for line in lines[1:]} == {"5", "6", "7"}

    def test_text_layout(self, run_cli):
        code, out, _ = run_cli("spectrum", "--n", "5")
        assert code == EXIT_OK
        assert "mu | lambda | multiplicity" in out
        assert "verdict=pass" in out

    def test_enumeration_budget_flag(self, run_cli):
        code, _, err = run_cli("spectrum", "--n", "101", "--method", "enumerate", "--budget", "1000")
        assert code == EXIT_BUDGET
        assert "Budget exceeded" in err

    def test_budget_from_environment(self, run_cli, monkeypatch, env_loader):
        monkeypatch.setenv("QUEEN_SPECTRA_BUDGET", "1000")
        env_loader()
        code, _, _ = run_cli("spectrum", "--n", "11", "--method", "enumerate")
        assert code == EXIT_BUDGET

    def test_out_path(self, run_cli, tmp_path):
        target = tmp_path / "n5.json"
        code, out, _ = run_cli("spectrum", "--n", "5", "--format", "json", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["command"] == "spectrum --n 5 --method formula"


class TestVerifyCommand:

    @pytest.mark.smoke
    @pytest.mark.oracle
    def test_verify_five_passes(self, run_cli):
        code, out, _ = run_cli("verify", "--n", "5", "--format", "json")
        report = json.loads(out)
        assert code == EXIT_OK
        assert report["summary"]["verdict"] == "pass"
        assert report["summary"]["fail"] == 0
        assert report["summary"]["skipped"] == 0
        orbit_section = report["sections"][0]
        assert orbit_section["n"] is None
        assert orbit_section["pair_orbits"] == 9
        assert orbit_section["reference_rows"] == 14
        names = {c["name"] for c in report["sections"][1]["checks"]}
        assert {"trace(A^4) = sum lambda^4 M", "M_0 = 0", "union size = 25(n-1)"} <= names

    @pytest.mark.regression
    def test_verify_twenty_five_skips_oracle(self, run_cli):
        code, out, _ = run_cli("verify", "--n", "25", "--format", "json")
        assert code == EXIT_OK
        checks = sections_of(out)[1]["checks"]
        by_name = {c["name"]: c for c in checks}
        assert by_name["trace(A^1) = sum lambda^1 M"]["status"] == "skipped"
        assert by_name["formula = enumeration"]["pass"] is True
        assert by_name["{a != 0 : mu >= 2} = union of lines"]["pass"] is True

    def test_verify_non_generic_asserts_only_universal_identities(self, run_cli):
        code, out, _ = run_cli("verify", "--n", "9", "--format", "json")
        assert code == EXIT_OK
        section = sections_of(out)[1]
        assert section["regime"] == "non_generic"
        assert "note" in section
        assert all(c["pass"] is not False for c in section["checks"])

    @pytest.mark.regression
    @pytest.mark.oracle
    def test_report_is_byte_identical(self, run_cli):
        first = run_cli("verify", "--n", "5", "--format", "json", "--workers", "1")[1]
        second = run_cli("verify", "--n", "5", "--format", "json", "--workers", "1")[1]
        threaded = run_cli("verify", "--n", "5", "--format", "json", "--workers", "4")[1]
        assert first == second == threaded

    def test_check_list_csv(self, run_cli):
        code, out, _ = run_cli("verify", "--n", "9", "--format", "csv")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "n,name,lhs,rhs,status"


class TestOrbitsCommand:

    def test_orbits_report(self, run_cli):
        code, out, _ = run_cli("orbits", "--n", "7", "--format", "json")
        section = sections_of(out)[0]
        assert code == EXIT_OK
        assert sorted(section["orbit_sizes"]) == [3, 3, 6, 6, 12, 12, 12, 12, 12]
        assert len(section["prototype_lines"]) == 25
        assert all(c["pass"] for c in section["checks"])

    def test_kernel_validation_respects_budget(self, run_cli):
        code, out, err = run_cli("orbits", "--n", "101", "--budget", "1000")
        assert code == EXIT_BUDGET
        assert out == ""
        assert "Budget exceeded" in err

    def test_orbits_non_generic(self, run_cli):
        code, _, err = run_cli("orbits", "--n", "9")
        assert code == EXIT_BAD_INPUT
        assert "generic odd regime" in err


class TestScanCommand:

    def test_scan_mixed_range(self, run_cli):
        code, out, _ = run_cli("scan", "--range", "5..8", "--format", "json")
        sections = sections_of(out)
        assert code == EXIT_OK
        assert [(s["n"], s["regime"]) for s in sections] == [
            (5, "generic_odd"), (6, "non_generic"), (7, "generic_odd"), (8, "non_generic"),
        ]
        for section in sections:
            names = {c["name"] for c in section["checks"]}
            assert ("formula = enumeration" in names) == (section["regime"] == "generic_odd")
            assert section["tables"][0]["rows"], "every scanned n carries its histogram"

    def test_scan_nine(self, run_cli):
        code, out, _ = run_cli("scan", "--range", "9..9", "--format", "json")
        section = sections_of(out)[0]
        by_name = {c["name"]: c for c in section["checks"]}
        assert code == EXIT_OK
        assert section["regime"] == "non_generic"
        assert by_name["sum mu*M = 13n^2"]["lhs"] == 13 * 81

    def test_scan_single_point(self, run_cli):
        code, out, _ = run_cli("scan", "--range", "1..1", "--format", "json")
        section = sections_of(out)[0]
        assert code == EXIT_OK
        assert section["mu_values"] == [13]
        assert section["tables"][0]["rows"] == [{"mu": 13, "lambda": 13 - 13, "multiplicity": 1}]

    @pytest.mark.parametrize("bad", ["8..5", "0..3", "five"])
    def test_bad_range(self, run_cli, bad):
        code, _, _ = run_cli("scan", "--range", bad)
        assert code == EXIT_BAD_INPUT


class TestGraphCommand:

    @pytest.mark.oracle
    def test_edge_list_to_file(self, run_cli, tmp_path):
        target = tmp_path / "edges.txt"
        code, out, _ = run_cli("graph", "--n", "5", "--out", str(target), "--format", "json")
        lines = target.read_text(encoding="utf-8").splitlines()
        assert code == EXIT_OK
        assert lines[0] == "# queen3d-torus n=5 vertices=125 degree=52"
        assert len(lines) == 3251
        assert sections_of(out)[0]["edges"] == 3250

    def test_edge_list_to_stdout(self, run_cli):
        code, out, err = run_cli("graph", "--n", "2")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "# queen3d-torus n=2 vertices=8 degree=7"
        assert len(out.splitlines()) == 1 + 28
        assert "verdict=pass" in err

    def test_graph_over_budget(self, run_cli):
        code, _, _ = run_cli("graph", "--n", "50")
        assert code == EXIT_BUDGET


class TestArguments:

    @pytest.mark.parametrize("argv", [
        ["spectrum", "--n", "0"],
        ["spectrum"],
        ["spectrum", "--n", "5", "--format", "xml"],
        ["bogus"],
        [],
    ])
    def test_bad_arguments(self, run_cli, argv):
        code, _, _ = run_cli(*argv)
        assert code == EXIT_BAD_INPUT

    def test_version(self, run_cli):
        code, out, _ = run_cli("--version")
        assert code == EXIT_OK
        assert out.startswith("queen-spectra ")

    def test_invalid_environment_is_a_configuration_error(self, run_cli, monkeypatch, env_loader):
        monkeypatch.setenv("QUEEN_SPECTRA_WORKERS", "many")
        with pytest.raises(ConfigurationError):
            env_loader()
        code, _, err = run_cli("spectrum", "--n", "5")
        assert code == EXIT_BAD_INPUT
        assert "Configuration Error" in err
