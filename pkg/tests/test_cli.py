import csv
import io
import json
import subprocess
import sys

import pytest

from heckedirac import __version__
from heckedirac.cli import RunConfig, UsageError, bounds_scan, main, parse_c, render
from heckedirac.orbits import in_orbit, nu_regular

from conftest import cover, root_system


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_verify_a2_all_pass(capsys):
    code, rep = run_json(capsys, "verify", "--series", "A", "--rank", "2")
    assert code == 0 and rep["all_pass"] and rep["summary"]["fail"] == 0
    assert rep["version"] == __version__ and rep["config"]["seed"] == 0
    assert all(r["anchor"] and r["suite"] in ("hecke", "spin", "cohomology", "differential") for r in rep["checks"])
    assert any(r["name"] == "dirac_square" and "D^2" in r["anchor"] or "D" in r["anchor"] for r in rep["checks"])


def test_verify_dihedral_skips_exact(capsys):
    code, rep = run_json(capsys, "verify", "--series", "I2", "--m", "5")
    assert code == 0 and not rep["exact"]
    status = {r["name"]: r["status"] for r in rep["checks"]}
    assert status["casimir_central"] == "skipped" and status["dbar_squared"] == "skipped"
    assert status["dirac_square"] == "pass"


def test_verify_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", "--series", "A", "--rank", "1", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_numeric_section_alias(capsys):
    code, rep = run_json(capsys, "verify", "--series", "A", "--rank", "1", "--section", "2", "--section", "5")
    assert code == 0 and rep["config"]["suites"] == ["hecke", "differential"]


def test_verify_single_suite(capsys):
    code, rep = run_json(capsys, "verify", "--series", "B", "--rank", "2", "--suite", "spin")
    assert code == 0 and {r["suite"] for r in rep["checks"]} == {"spin"}


def test_ctable_a2(capsys):
    code, rep = run_json(capsys, "ctable", "--series", "A", "--rank", "2")
    assert code == 0 and rep["order"] == 12
    rows = rep["characters"]
    assert len(rows) == 6
    assert sorted(r["c_value"] for r in rows if r["genuine"]) == ["1/2", "1/2", "2"]
    assert sum(r["genuine"] for r in rows) == 3
    assert {r["orbit_match"] for r in rows if r["genuine"]} == {"(3)", "(2,1)"}


def test_ctable_csv(capsys):
    code, out, _ = run(capsys, "ctable", "--series", "A", "--rank", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert sorted(r["c_value"] for r in rows if r["genuine"] == "True") == ["1/2", "1/2"]


def test_dirac_report_trivial(capsys):
    code, rep = run_json(capsys, "dirac-report", "--series", "A", "--rank", "2", "--nu", "trivial")
    assert code == 0
    assert rep["dim_HD"] == rep["dim"] == 2
    assert rep["vogan_check"]["status"] == "pass"
    assert rep["inequality"]["summary"]["violated"] is False


def test_dirac_report_a1_critical(capsys):
    # the kernel sits inside the image at the critical length, so H^D = 0
    code, rep = run_json(capsys, "dirac-report", "--series", "A", "--rank", "1", "--nu", "0.5")
    assert code == 0
    assert rep["nu_norm2"] == "1/2"
    assert rep["dim_kernel"] == 1 and rep["dim_intersection"] == 1 and rep["dim_HD"] == 0


def test_dirac_report_needs_nu(capsys):
    code, _, err = run(capsys, "dirac-report", "--series", "A", "--rank", "1")
    assert code == 2 and "--nu" in err


def test_dirac_report_bad_nu_length(capsys):
    code, _, _ = run(capsys, "dirac-report", "--series", "A", "--rank", "2", "--nu", "1,2")
    assert code == 2


def test_bounds_a2(capsys):
    code, rep = run_json(capsys, "bounds", "--series", "A", "--rank", "2", "--nu-grid", "-1:1:1")
    s = rep["summary"]
    assert code == 0 and s["points"] == 9
    assert s["exceed_regular_all_flagged"] and s["saturating_points_in_regular_orbit"]


def test_bounds_scan_direct():
    rs = root_system("A2")
    rows = bounds_scan(rs, rs.parameters(), [(1, 1), (0, 0), (2, 0)])
    assert rows[0]["saturates_top_bound"] and rows[0]["in_regular_orbit"]
    assert not rows[1]["violated_some"] and not rows[1]["saturates_top_bound"]
    assert rows[2]["exceeds_regular_bound"] and rows[2]["violated_some"]
    assert in_orbit(rs, cover("A2").weyl, rs.from_weight((1, 1)), nu_regular(rs).nu)


def test_orbits_a3(capsys):
    code, rep = run_json(capsys, "orbits", "--series", "A", "--rank", "3")
    assert code == 0 and len(rep["orbits"]) == 5
    assert rep["solvable_lengths"] == ["5", "2"]


def test_zeta_commands(capsys):
    code, rep = run_json(capsys, "zeta", "--series", "A", "--rank", "2")
    assert code == 0 and rep["matches_omega_wtilde"]["exact_match"]
    assert {r["coefficient"] for r in rep["zeta"]} == {"3/2", "1/2"}
    code, rep = run_json(capsys, "zeta", "--series", "A", "--rank", "2", "--z", "cubic")
    assert code == 0 and rep["zeta"] == [] and rep["unique"]
    code, rep = run_json(capsys, "zeta", "--series", "A", "--rank", "1", "--z", "one")
    assert code == 0 and [r["coefficient"] for r in rep["zeta"]] == ["1"]


def test_text_format(capsys):
    code, out, _ = run(capsys, "orbits", "--series", "A", "--rank", "2", "--format", "text")
    assert code == 0 and "label=(3)" in out and out.startswith("command:")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"series": "B", "rank": 2, "c": {"long": 1, "short": 2}, "seed": 4}))
    code, rep = run_json(capsys, "ctable", "--config", str(cfg), "--seed", "5")
    assert code == 0 and rep["config"]["seed"] == 5 and rep["config"]["c"] == {"long": "1", "short": "2"}


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"series": "A", "bogus": 1}',
                                     '{"rank": "two"}', '{"c": [1]}'])
def test_corrupt_config_exit_2(tmp_path, capsys, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    code, _, err = run(capsys, "verify", "--config", str(cfg))
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--series", "Z", "--rank", "2"],
    ["verify", "--series", "A", "--rank", "2", "--tol", "-1"],
    ["verify", "--series", "A", "--rank", "2", "--suite", "nine"],
    ["verify", "--series", "A", "--rank", "2", "--c", "long"],
    ["verify", "--series", "B", "--rank", "2", "--c", "long=x"],
    ["dirac-report", "--series", "A", "--rank", "1", "--nu", "0.5", "--chirality", "?"],
    ["bounds", "--series", "A", "--rank", "2", "--nu-grid", "1:0:1"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_c():
    assert parse_c("long=1, short=1/2") == {"long": "1", "short": "1/2"}
    with pytest.raises(UsageError):
        parse_c("long")


def test_runconfig_validate():
    with pytest.raises(UsageError):
        RunConfig(format="xml").validate()
    assert RunConfig(rank=2).validate().echo()["series"] == "A"


def test_render_csv_quotes_lists():
    out = render({}, [{"a": [1, 2], "b": "x"}], "csv")
    assert out.splitlines() == ["a,b", '"[1, 2]",x']


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "heckedirac", "orbits", "--series", "A", "--rank", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)["root_system"] == "A1"


def test_negative_values_parse(capsys):
    code, rep = run_json(capsys, "dirac-report", "--series", "A", "--rank", "1", "--nu", "-0.3")
    assert code == 0 and rep["nu"] == ["-3/10"]
