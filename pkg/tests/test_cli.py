import json

import pytest

from src.cli import main
from src.cli.commands import EXIT_DISAGREEMENT, EXIT_IO, EXIT_OK, EXIT_VALIDATION, build_parser
from src.cli.runspec import RunSpec, RunSpecError, axis_from_range, run_spec_from_args
from src.odeflow import StepCollapseError
from src.weyl import endpoints

GRID_HEADER_LINE = "alpha,p,q,closed_form,oracle_plus,oracle_minus,agree"


def _write(tmp_path, raw, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


def _single(tmp_path, **fields):
    item = {"id": "s", "x": 0.0, "y": 0.0, "alpha": 0.5, **fields}
    return _write(tmp_path, {"background_index": 0, "singularities": [item]})


@pytest.mark.parametrize("name, total", [("aharonov_bohm_pair", 4), ("mixed", 7), ("point_interaction", 1)])
def test_classify_table(configs_dir, capsys, name, total):
    assert main(["classify", "--input", str(configs_dir / f"{name}.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert f"total = {total}" in out.splitlines()
    if name == "point_interaction":
        assert "POINT_INTERACTION" in out


def test_classify_json_without_timestamp_is_deterministic(configs_dir, tmp_path, clean_env):
    outputs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        argv = ["classify", "--input", str(configs_dir / "mixed.json"), "--format", "json",
                "--output", str(path), "--no-timestamp"]
        assert main(argv) == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    report = json.loads(outputs[0])
    assert "generated_at" not in report
    assert report["total"] == 7
    assert report["background_index"] == 3


def test_classify_json_has_timestamp(configs_dir, tmp_path):
    path = tmp_path / "report.json"
    argv = ["classify", "--input", str(configs_dir / "infinite_background.json"), "--format", "json",
            "--output", str(path)]
    assert main(argv) == EXIT_OK
    report = json.loads(path.read_text(encoding="utf-8"))
    assert "generated_at" in report
    assert report["total"] == "infinite"


def test_classify_csv(configs_dir, capsys):
    assert main(["classify", "--input", str(configs_dir / "point_interaction.json"), "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "id,alpha,p,q,class,index"
    assert lines[1] == "delta,2,0,0,POINT_INTERACTION,1"


def test_malformed_json_is_io_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    output = tmp_path / "report.json"
    argv = ["classify", "--input", str(path), "--format", "json", "--output", str(output)]
    assert main(argv) == EXIT_IO
    assert not output.exists()


def test_missing_input_is_io_error(tmp_path):
    assert main(["classify", "--input", str(tmp_path / "missing.json")]) == EXIT_IO


def test_violations_exit_validation(tmp_path, capsys):
    path = _single(tmp_path, p=-0.1)
    assert main(["classify", "--input", path]) == EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "NEGATIVE_P" in err
    assert "Traceback" not in err


def test_same_input_and_output(tmp_path):
    path = _single(tmp_path)
    assert main(["classify", "--input", path, "--output", path]) == EXIT_VALIDATION
    assert json.loads(open(path, encoding="utf-8").read())["singularities"][0]["id"] == "s"


def test_invalid_setting_flag(tmp_path):
    assert main(["classify", "--input", _single(tmp_path), "--rel-tol", "1.0"]) == EXIT_VALIDATION


def test_empty_range(capsys):
    argv = ["grid", "--alpha-range", "0.9", "0.1", "0.1", "--p-values", "0"]
    assert main(argv) == EXIT_VALIDATION
    assert "INVALID_RUN" in capsys.readouterr().err


@pytest.mark.parametrize("bounds, expected", [
    ((0.1, 0.5, 0.1), (0.1, 0.2, 0.3, 0.4, 0.5)),
    ((0.0, 0.0, 1.0), (0.0,)),
    ((1.0, 2.0, 0.4), (1.0, 1.4, 1.8)),
])
def test_axis_from_range(bounds, expected):
    assert axis_from_range(*bounds) == expected


@pytest.mark.parametrize("bounds", [(0.0, 1.0, 0.0), (0.0, 1.0, -0.1), (1.0, 0.0, 0.1)])
def test_axis_from_range_rejects(bounds):
    with pytest.raises(RunSpecError):
        axis_from_range(*bounds)


@pytest.mark.parametrize("fields", [
    {"command": "classify"},
    {"command": "grid", "alphas": (0.5,), "ps": ()},
    {"command": "grid", "alphas": (0.5,), "ps": (-1.0,)},
    {"command": "grid", "alphas": (0.5,), "ps": (0.0,), "jobs": 0},
    {"command": "grid", "alphas": (0.5,), "ps": (0.0,), "fmt": "xml"},
])
def test_run_spec_validation(fields):
    with pytest.raises(RunSpecError):
        RunSpec(**fields)


def test_flags_win_over_environment(clean_env):
    clean_env.setenv("DEFICIENCY_RMAX", "30")
    clean_env.setenv("DEFICIENCY_JOBS", "3")
    base = ["grid", "--alpha-values", "0.5", "--p-values", "0"]

    spec = run_spec_from_args(build_parser().parse_args(base))
    assert spec.settings.r_max == 30.0
    assert spec.jobs == 3
    assert spec.fmt == "csv"

    spec = run_spec_from_args(build_parser().parse_args(base + ["--rmax", "50", "--jobs", "2"]))
    assert spec.settings.r_max == 50.0
    assert spec.jobs == 2


def test_grid_skips_unbounded_points(capsys):
    argv = ["grid", "--alpha-values", "0.5", "0.25", "--p-values", "0", "--q-values", "-1", "-2"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == GRID_HEADER_LINE
    assert lines[1:] == [
        "0.5,0,-1,SKIPPED,SKIPPED,SKIPPED,skipped",
        "0.5,0,-2,SKIPPED,SKIPPED,SKIPPED,skipped",
        "0.25,0,-1,SKIPPED,SKIPPED,SKIPPED,skipped",
        "0.25,0,-2,SKIPPED,SKIPPED,SKIPPED,skipped",
    ]


def test_verify_integration_failure_exits_with_disagreement(tmp_path, capsys, clean_env, monkeypatch):
    def collapse(*args, **kwargs):
        raise StepCollapseError("passo colapsou")

    monkeypatch.setattr(endpoints, "integrate", collapse)
    output = tmp_path / "verify.json"
    argv = ["verify", "--input", _single(tmp_path, alpha=0.5), "--format", "json",
            "--output", str(output), "--no-timestamp"]
    assert main(argv) == EXIT_DISAGREEMENT
    payload = json.loads(output.read_text(encoding="utf-8"))
    assert payload["summary"]["inconclusive"] == 1
    harmonics = payload["results"][0]["results"][0]["harmonics"]
    assert {h["inconclusive"] for h in harmonics} == {"integration-failure"}
    assert "integration-failure" in capsys.readouterr().err


@pytest.mark.slow
def test_verify_pair_and_integer_flux(tmp_path, capsys):
    raw = {"background_index": 0, "singularities": [
        {"id": "half", "x": 0.0, "y": 0.0, "alpha": 0.5},
        {"id": "integer", "x": 2.0, "y": 0.0, "alpha": 0.0},
    ]}
    output = tmp_path / "verify.json"
    dump = tmp_path / "trajectories"
    argv = ["verify", "--input", _write(tmp_path, raw), "--format", "json", "--output", str(output),
            "--no-timestamp", "--dump-trajectories", str(dump)]
    assert main(argv) == EXIT_OK
    payload = json.loads(output.read_text(encoding="utf-8"))
    assert payload["summary"]["agree"] == 2
    assert [r["status"] for r in payload["results"]] == ["agree", "agree"]
    assert [r["results"][0]["total"] for r in payload["results"]] == [2, 1]
    assert any(dump.glob("half_ell0_minus_zero_*.csv"))


@pytest.mark.slow
def test_verify_coulomb_case(tmp_path, capsys):
    assert main(["verify", "--input", _single(tmp_path, alpha=0.2, p=0.5, q=1.0)]) == EXIT_OK
    footer = capsys.readouterr().out.splitlines()[-1]
    assert footer.startswith("agree = 1,")


@pytest.mark.slow
def test_verify_boundary_warning(tmp_path, capsys):
    # l = 0: nu² = 0.3² + 0.905 = 0.995
    assert main(["verify", "--input", _single(tmp_path, alpha=0.3, p=0.905)]) == EXIT_OK
    captured = capsys.readouterr()
    assert "boundary-inconclusive" in captured.err
    assert "boundary-inconclusive = 1" in captured.out


@pytest.mark.slow
def test_grid_agreement(capsys):
    argv = ["grid", "--alpha-range", "0.1", "0.9", "0.1", "--p-values", "0", "0.5", "1.5", "--q-values", "0"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == GRID_HEADER_LINE
    assert len(lines) == 28
    assert all(line.endswith(",true") for line in lines[1:])


@pytest.mark.slow
def test_grid_is_independent_of_jobs(tmp_path):
    contents = []
    for jobs in ("1", "2"):
        path = tmp_path / f"grid{jobs}.csv"
        argv = ["grid", "--alpha-values", "0.3", "0.5", "--p-values", "0.8", "--q-values", "0", "-1",
                "--jobs", jobs, "--output", str(path)]
        assert main(argv) == EXIT_OK
        contents.append(path.read_text(encoding="utf-8"))
    assert contents[0] == contents[1]
