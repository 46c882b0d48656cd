import numpy as np
import pytest

from ptnls import ParseError, SolverDiverged, ValidationError
from ptnls import cli
from ptnls.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SOLVER,
    EXIT_VALIDATION,
    TRACE_COLUMNS,
    main,
    parse_config,
    read_csv,
    run_job,
    serialize_jobspec,
    write_csv,
)

MINIMAL = """\
# two-Gaussian input
params.gamma = 0.5
params.kappa = 1
ic.A = 4
ic.B = 2
ic.a = 0.3
ic.b = 0.1
"""

FAST_SIM = """\
params.gamma = 0.1
ic.A = 0.2
ic.B = 0.2
grid.n = 255
run.dt0 = 1e-3
run.dt_min = 1e-6
run.t_max = 0.05
run.sample_every = 10
"""


class TestParseConfig:
    def test_minimal_with_defaults(self):
        spec = parse_config(MINIMAL, "criteria")
        assert spec.params.gamma == 0.5
        assert spec.params.g1 == 1.0  # default
        assert spec.ic.ampU == 4.0 and spec.ic.widthV == 0.1
        assert spec.runConfig.tMax == 5.0
        assert spec.grid.n == 7999

    def test_comments_and_blank_lines_ignored(self):
        spec = parse_config("\n# note\nparams.gamma = 0.25 # inline\n", "criteria")
        assert spec.params.gamma == 0.25

    def test_duplicate_key(self):
        text = "params.gamma = 0.5\nparams.gamma = 0.6\n"
        with pytest.raises(ParseError) as exc:
            parse_config(text, "criteria")
        assert exc.value.line == 2

    def test_unknown_key(self):
        with pytest.raises(ParseError):
            parse_config("params.delta = 1\n", "criteria")

    def test_missing_equals(self):
        with pytest.raises(ParseError):
            parse_config("params.gamma 0.5\n", "criteria")

    def test_unparseable_value(self):
        with pytest.raises(ParseError):
            parse_config("params.gamma = fast\n", "criteria")

    def test_negative_gamma_rejected(self):
        with pytest.raises(ValidationError):
            parse_config("params.gamma = -1\n", "criteria")

    def test_unknown_mode(self):
        with pytest.raises(ValidationError):
            parse_config(MINIMAL, "explode")

    def test_sweep_requires_axis(self):
        with pytest.raises(ValidationError):
            parse_config(MINIMAL, "sweep")

    def test_sweep_axis_whitelist(self):
        text = MINIMAL + "sweep.axis = grid.n\nsweep.values = 1,2\n"
        with pytest.raises(ValidationError):
            parse_config(text, "sweep")

    def test_figure_requires_known_id(self):
        with pytest.raises(ValidationError):
            parse_config("figure.id = fig9z\n", "figure")

    def test_round_trip(self):
        text = MINIMAL + "sweep.axis = ic.B\nsweep.values = 1.3,2.6,3.9\n"
        spec = parse_config(text, "sweep")
        again = parse_config(serialize_jobspec(spec), "sweep")
        assert again == spec


class TestCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "x.csv"
        cols = [np.array([0.0, 0.1, 0.2]), np.array([1.0, -2.5, 3.25e-17])]
        write_csv(path, ["t", "val"], cols)
        header, data = read_csv(path)
        assert header == ["t", "val"]
        assert np.allclose(data["t"], cols[0], rtol=1e-12)
        assert np.allclose(data["val"], cols[1], rtol=1e-11)

    def test_rectangular(self, tmp_path):
        path = tmp_path / "x.csv"
        write_csv(path, ["a", "b", "c"], [[1, 2], [3, 4], [5, 6]])
        lines = path.read_text().splitlines()
        assert all(line.count(",") == 2 for line in lines)


class TestModes:
    def test_criteria_focusing(self, tmp_path):
        spec = parse_config(MINIMAL + "params.g = -0.5\n", "criteria", tmp_path)
        assert run_job(spec) == EXIT_OK
        header, data = read_csv(tmp_path / "criteria.csv")
        assert header == ["t", "F", "M", "G"]
        assert data["t"][0] == 0.0
        report = (tmp_path / "report.txt").read_text()
        assert "theorem1.satisfied" in report
        assert "lemma1.satisfied" in report

    def test_criteria_early_collapse(self, tmp_path):
        text = (
            "params.gamma = 0.5\nparams.kappa = 1\n"
            "params.g1 = 4\nparams.g2 = -1\nparams.g = -0.5\n"
            "ic.A = 5.8\nic.B = 0.9\n"
        )
        spec = parse_config(text, "criteria", tmp_path)
        assert run_job(spec) == EXIT_OK
        header, data = read_csv(tmp_path / "criteria.csv")
        assert header == ["t", "Z"]
        report = (tmp_path / "report.txt").read_text()
        assert "theorem2.satisfied" in report

    def test_criteria_manakov_report(self, tmp_path):
        spec = parse_config(MINIMAL, "criteria", tmp_path)  # g1=g2=g=1
        assert run_job(spec) == EXIT_OK
        report = (tmp_path / "report.txt").read_text()
        assert "manakov.Sconst" in report
        assert "manakov.satisfied" in report

    def test_simulate(self, tmp_path):
        spec = parse_config(FAST_SIM, "simulate", tmp_path)
        assert run_job(spec) == EXIT_OK
        header, data = read_csv(tmp_path / "trace.csv")
        assert header == TRACE_COLUMNS
        assert data["t"][-1] == pytest.approx(0.05, abs=1e-9)
        outcome = (tmp_path / "outcome.txt").read_text()
        assert "verdict = " in outcome and "component = " in outcome

    def test_sweep_simulate(self, tmp_path):
        text = FAST_SIM + "sweep.axis = ic.A\nsweep.values = 0.1,0.2\n"
        spec = parse_config(text, "sweep", tmp_path)
        assert run_job(spec, workers=2) == EXIT_OK
        lines = (tmp_path / "summary.csv").read_text().splitlines()
        assert lines[0] == "value,outcome,time"
        assert len(lines) == 3
        assert (tmp_path / "A=0.1" / "trace.csv").exists()
        assert (tmp_path / "A=0.2" / "outcome.txt").exists()

    def test_sweep_criteria(self, tmp_path):
        text = (
            "params.gamma = 0.5\nparams.g = -0.5\n"
            "ic.A = 4\nic.B = 2\nic.a = 0.3\nic.b = 0.1\n"
            "sweep.axis = ic.B\nsweep.values = 2,3\nsweep.target = criteria\n"
            "criteria.samples = 512\n"
        )
        spec = parse_config(text, "sweep", tmp_path)
        assert run_job(spec) == EXIT_OK
        _, data = read_csv(tmp_path / "B=2" / "criteria.csv")
        assert "F" in data

    def test_figure_criteria_deterministic(self, tmp_path):
        spec = parse_config(
            "figure.id = fig1b\ncriteria.samples = 512\n", "figure", tmp_path / "r1"
        )
        assert run_job(spec, workers=2) == EXIT_OK
        spec2 = parse_config(
            "figure.id = fig1b\ncriteria.samples = 512\n", "figure", tmp_path / "r2"
        )
        assert run_job(spec2) == EXIT_OK
        s1 = (tmp_path / "r1" / "summary.csv").read_bytes()
        s2 = (tmp_path / "r2" / "summary.csv").read_bytes()
        assert s1 == s2
        assert len(s1.splitlines()) == 4  # header + three gamma values

    def test_figure_fig2_panels(self, tmp_path):
        spec = parse_config(
            "figure.id = fig2\ncriteria.samples = 512\n", "figure", tmp_path
        )
        assert run_job(spec) == EXIT_OK
        for tag in ("a", "c", "e"):
            assert (tmp_path / f"panel_{tag}" / "criteria.csv").exists()
            assert (tmp_path / f"panel_{tag}" / "report.txt").exists()

    def test_convergence(self, tmp_path):
        spec = parse_config(FAST_SIM, "convergence", tmp_path)
        assert run_job(spec) == EXIT_OK
        text = (tmp_path / "convergence.txt").read_text()
        assert "converged = " in text
        assert "adaptivityHeadroom = " in text


class TestExitCodes:
    def test_ok(self, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text(MINIMAL)
        assert main(["criteria", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK

    def test_missing_config_file(self, tmp_path):
        assert main(["criteria", "--config", str(tmp_path / "nope.cfg")]) == EXIT_IO

    def test_parse_error(self, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("params.gamma = 0.5\nparams.gamma = 0.6\n")
        assert main(["criteria", "--config", str(cfg)]) == EXIT_PARSE

    def test_validation_error(self, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("params.kappa = -2\n")
        assert main(["criteria", "--config", str(cfg)]) == EXIT_VALIDATION

    def test_solver_divergence_mapped(self, tmp_path, monkeypatch):
        spec = parse_config(FAST_SIM, "simulate", tmp_path)

        def boom(*args, **kwargs):
            raise SolverDiverged("synthetic divergence")

        monkeypatch.setattr(cli, "run", boom)
        assert run_job(spec) == EXIT_SOLVER
