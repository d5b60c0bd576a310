import json

import pytest

from forge.cli import SCENARIO_DIR, apply_overrides, main, run_scenario
from forge.errors import ConfigError
from forge.report import CSV_COLUMNS, SCHEMA_VERSION, read_csv
from forge.scenario import DEFAULTS, build_model, load_scenario, parse_scenario


def test_scenario_parsing_and_defaults():
    cfg = parse_scenario("class = flat_front\nomega_hat = z^(-2)  # comment\nrho_hat = 0.5\nrays = 4\n")
    assert cfg.kind == "flat_front" and cfg.options["rays"] == 4
    assert cfg.options["grid"] == DEFAULTS["grid"] and cfg.data["mu"] == 0.0
    m = build_model(cfg)
    assert m.kind == "flat_front"


@pytest.mark.parametrize("text,line,col", [
    ("class = maxface\ng = z/(2\n", 2, 9),
    ("class = flat_front\n  bogus = 1\n", 2, 3),
    ("class = nothing\n", 1, 9),
    ("class = flat_front\njust words\n", 2, 1),
    ("class = flat_front\nrays = 2.5\n", 2, 8),
    ("class = flat_front\nrays = 1\nrays = 2\n", 3, 1),
])
def test_config_errors_carry_positions(text, line, col):
    with pytest.raises(ConfigError) as ei:
        parse_scenario(text)
    assert (ei.value.line, ei.value.col) == (line, col)
    assert f"line {line}, column {col}" in str(ei.value)


def test_missing_data_key():
    with pytest.raises(ConfigError):
        build_model(parse_scenario("class = improper_affine\nF = 0\n"))


def test_overrides():
    cfg = load_scenario(SCENARIO_DIR / "flatfront_pole2.scn")
    apply_overrides(cfg, rays=3, rmin=1e-6, grid=32, tol=1e-8)
    assert cfg.options["rays"] == 3 and cfg.options["decades"] == 6
    assert cfg.options["grid"] == 32 and cfg.options["tol"] == 1e-8
    with pytest.raises(ConfigError):
        apply_overrides(cfg, rmin=5.0)


def test_run_writes_json_and_csv(tmp_path, capsys):
    code = main(["run", str(SCENARIO_DIR / "flatfront_pole2.scn"), "--out", str(tmp_path), "--rays", "4"])
    assert code == 0
    doc = json.loads((tmp_path / "flatfront_pole2.report.json").read_text())
    assert doc["schema_version"] == SCHEMA_VERSION and doc["tool_version"]
    assert doc["ends"][0]["weakly_complete"] is True
    assert "timing" in doc and doc["tolerances"]["path_length_abs"] == 1e-9
    assert "evidence, not proof" in doc["ends"][0]["evidence_note"]
    csvs = sorted(tmp_path.glob("*.csv"))
    assert len(csvs) == 2
    rows = read_csv(csvs[0])
    assert len(rows) == 4 * 8 and all(len(r) == len(CSV_COLUMNS) for r in rows)
    assert "consistency: pass" in capsys.readouterr().out


def test_run_paraboloid_by_name(capsys):
    assert main(["run", "affine_paraboloid"]) == 0
    out = capsys.readouterr().out
    assert "weakly_complete=False" in out


def test_exit_code_for_config_error(tmp_path, capsys):
    p = tmp_path / "bad.scn"
    p.write_text("class = maxface\ng = z/(2\n")
    assert main(["run", str(p)]) == 2
    assert "line 2, column 9" in capsys.readouterr().err


def test_exit_code_for_data_error(tmp_path):
    p = tmp_path / "nonexact.scn"
    p.write_text("class = improper_affine\nF = i/z\nG = z\n")
    doc = run_scenario(load_scenario(p))
    assert doc.exit_code == 2 and doc.errors[0]["type"] == "ExactnessViolation"
    assert main(["run", str(p)]) == 2


def test_exit_code_for_numerical_error(tmp_path):
    p = tmp_path / "unstable.scn"
    p.write_text("class = flat_s3\nprofile = constant\nomega0 = 3.5\n")
    assert main(["run", str(p)]) == 2  # range violation is a data error
    p.write_text("class = flat_front\nomega_hat = 1\nrho_hat = 0.5\ndecades = 2\n")
    # too few decades for the divergence rule: the report is inconclusive or bounded, never a crash
    assert main(["run", str(p)]) in (0, 3)


def test_reproduce_commands(capsys):
    for ex in ("s3-counterexample", "completeness-lemma-demo"):
        assert main(["reproduce", ex]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 10


def test_mesh_command(tmp_path):
    obj = tmp_path / "s3.obj"
    assert main(["mesh", "flat_s3_counterexample", "--obj", str(obj)]) == 0
    text = obj.read_text()
    assert "stereographic" in text.splitlines()[1] or "stereographic" in text[:400]
    assert main(["mesh", "cmc1_elliptic", "--obj", str(tmp_path / "c.obj")]) == 2
