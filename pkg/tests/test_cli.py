"""
Tests for the command line driver.
"""

import json
from io import StringIO

import pytest

from wallcross.cli.main import WallcrossCLI
from wallcross.models.error_codes import EngineInvariantError, ExitCode
from wallcross.services.euler_service import WallCrossingEngine
from wallcross.services.selftest_service import PATH_SEEDS, PATH_SYSTEMS, run_selftest


def run(*argv):
    stdout, stderr = StringIO(), StringIO()
    code = WallcrossCLI().run(list(argv), stdout, stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture
def cp1_squared():
    return {
        "k": 2,
        "weights": [{"w": [1, 0], "mult": 2}, {"w": [0, 1], "mult": 2}],
        "tau": ["1", "1"],
    }


class TestCommands:
    def test_euler(self, problem_writer, test_data):
        code, out, err = run("euler", problem_writer(**test_data["cp2"]))
        assert code == ExitCode.SUCCESS
        assert out == "1\n"
        assert err == ""

    def test_euler_parallel_falls_back_in_rank_one(self, problem_writer, test_data):
        code, out, _ = run("euler", problem_writer(**test_data["cp2"]), "--parallel")
        assert code == ExitCode.SUCCESS
        assert out == "1\n"

    def test_classify_on_wall(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["three_weights"], tau=["1", "1"]))
        code, out, _ = run("classify", path)
        assert code == ExitCode.SUCCESS
        assert out.strip() == "on_wall I={3}"

    def test_classify_regular(self, problem_writer, test_data):
        code, out, _ = run("classify", problem_writer(**test_data["three_weights"]))
        assert out.strip() == "super_regular"

    def test_walls(self, problem_writer, test_data):
        code, out, _ = run("walls", problem_writer(**test_data["three_weights"]))
        assert code == ExitCode.SUCCESS
        assert out.splitlines() == ["I={1} e=[0, 1]", "I={2} e=[1, 0]", "I={3} e=[1, -1]"]

    def test_check(self, problem_writer, test_data):
        code, out, _ = run("check", problem_writer(**test_data["cp2"]))
        assert code == ExitCode.SUCCESS
        lines = out.splitlines()
        assert lines[0].startswith("proper: yes")
        assert "level: super_regular" in lines
        assert "dimension: 4" in lines

    def test_crossing(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["three_weights"], tau=["1", "1"], eta=[1, -1]))
        code, out, _ = run("crossing", path)
        assert code == ExitCode.SUCCESS
        assert out == "1\n"

    def test_crossing_needs_eta(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["three_weights"], tau=["1", "1"]))
        code, _, err = run("crossing", path)
        assert code == ExitCode.VALIDATION_ERROR
        assert "eta" in err

    def test_crossing_off_the_walls(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["three_weights"], eta=[1, -1]))
        code, _, _ = run("crossing", path)
        assert code == ExitCode.PRECONDITION_FAILED

    def test_vortex(self, problem_writer, test_data):
        code, out, _ = run("vortex", problem_writer(**test_data["cp1_vortex"]))
        assert code == ExitCode.SUCCESS
        lines = out.splitlines()
        assert lines[0] == "1"
        assert "real_dimension: 6" in lines

    def test_vortex_higher_genus_reports_only(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["cp1_vortex"], genus=1))
        code, out, _ = run("vortex", path)
        assert code == ExitCode.SUCCESS
        assert out.splitlines()[0] == "invariant: not computed in genus 1"

    def test_table(self, problem_writer, cp1_squared):
        code, out, _ = run("table", problem_writer(**cp1_squared))
        assert code == ExitCode.SUCCESS
        assert out.splitlines() == ["x1^2: 0", "x1*x2: 1", "x2^2: 0"]

    def test_trace(self, problem_writer, test_data):
        code, out, _ = run("trace", problem_writer(**test_data["three_weights"]))
        assert code == ExitCode.SUCCESS
        lines = out.splitlines()
        assert lines[0] == "value: 1"
        assert lines[1].startswith("k=2")
        assert lines[2].startswith("  k=1")


class TestOutput:
    def test_json_format(self, problem_writer, test_data):
        code, out, _ = run("euler", problem_writer(**test_data["cp2"]), "--format", "json")
        assert code == ExitCode.SUCCESS
        assert json.loads(out) == {"value": "1"}

    def test_trace_json(self, problem_writer, test_data):
        code, out, _ = run("trace", problem_writer(**test_data["three_weights"]), "--format", "json")
        data = json.loads(out)
        assert data["value"] == "1"
        assert data["tree"]["k"] == 2
        assert data["tree"]["crossings"][0]["wall"] == [1]

    def test_out_file(self, tmp_path, problem_writer, test_data):
        target = tmp_path / "result.txt"
        code, out, _ = run("euler", problem_writer(**test_data["cp2"]), "--out", str(target))
        assert code == ExitCode.SUCCESS
        assert out == ""
        assert target.read_text() == "1\n"

    def test_unwritable_out_file(self, tmp_path, problem_writer, test_data):
        target = tmp_path / "missing" / "result.txt"
        code, _, err = run("euler", problem_writer(**test_data["cp2"]), "--out", str(target))
        assert code == ExitCode.VALIDATION_ERROR
        assert err.startswith("error: --out")


class TestExitCodes:
    def test_unknown_command(self):
        code, _, err = run("integrate")
        assert code == ExitCode.VALIDATION_ERROR
        assert err.startswith("error: arguments")

    def test_missing_input(self):
        code, _, _ = run("euler")
        assert code == ExitCode.VALIDATION_ERROR

    def test_missing_file(self, tmp_path):
        code, _, err = run("euler", str(tmp_path / "absent.json"))
        assert code == ExitCode.VALIDATION_ERROR
        assert err.startswith("error: input")

    def test_bad_retries(self, problem_writer, test_data):
        code, _, _ = run("euler", problem_writer(**test_data["cp2"]), "--retries", "0")
        assert code == ExitCode.VALIDATION_ERROR

    def test_on_wall_level(self, problem_writer, test_data):
        path = problem_writer(**dict(test_data["three_weights"], tau=["1", "1"]))
        code, out, err = run("euler", path)
        assert code == ExitCode.PRECONDITION_FAILED
        assert out == ""
        assert "non-regular tau" in err

    def test_internal_invariant(self, monkeypatch, problem_writer, test_data):
        def broken(self, problem, x, seed=None):
            raise EngineInvariantError("pushed class is not e1-invariant", "e1")

        monkeypatch.setattr(WallCrossingEngine, "euler_class", broken)
        code, _, err = run("euler", problem_writer(**test_data["cp2"]))
        assert code == ExitCode.INTERNAL_INVARIANT
        assert "e1-invariant" in err


@pytest.mark.slow
def test_selftest():
    code, out, _ = run("selftest")
    assert code == ExitCode.SUCCESS
    assert "FAIL" not in out


class TestSelfTestSuites:
    def test_selected_suite(self):
        passed, results = run_selftest(0, ["residue_oracle"])
        assert passed
        assert [r.name for r in results] == ["residue_oracle"]
        assert results[0].checks > 0
        assert results[0].render().startswith("residue_oracle: ok")

    def test_unknown_suite(self):
        passed, results = run_selftest(0, ["nonexistent"])
        assert not passed
        assert results[0].failures == ["unknown suite"]

    def test_path_independence_sweeps_every_system_and_seed(self):
        passed, results = run_selftest(0, ["path_independence"])
        assert passed, results[0].failures
        assert results[0].checks == len(PATH_SYSTEMS) * (len(PATH_SEEDS) - 1)
        assert len(PATH_SYSTEMS) == 5
        assert list(PATH_SEEDS) == list(range(20))
