import json

import pytest
from click.testing import CliRunner

from tnn_strata.cli import main

IDENTITY3 = json.dumps(
    {"n": 3, "entries": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
)
UPPER3 = json.dumps(
    {"n": 3, "entries": [["1", "1", "0"], ["0", "1", "1"], ["0", "0", "1"]]}
)


@pytest.fixture
def runner():
    return CliRunner()


class TestParam:
    def test_known_top_cell_point(self, runner):
        res = runner.invoke(
            main, ["param", "--word", "s1.s2.s1", "--n", "3", "--params", "1,1,1/2"]
        )
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert obj["cell"] == "3,2,1"
        assert obj["tnn"] is True
        assert obj["entries"][0] == ["1", "3/2", "1"]

    def test_wrong_param_count_usage_error(self, runner):
        res = runner.invoke(
            main, ["param", "--word", "s1", "--n", "3", "--params", "1,2"]
        )
        assert res.exit_code == 2

    def test_nonpositive_param_precondition(self, runner):
        res = runner.invoke(
            main, ["param", "--word", "s1", "--n", "3", "--params", "-1"]
        )
        assert res.exit_code == 3


class TestQueries:
    def test_cell_of_identity(self, runner):
        res = runner.invoke(main, ["cell-of"], input=IDENTITY3)
        assert res.exit_code == 0
        assert json.loads(res.output) == {"cell": "1,2,3", "length": 0}

    def test_tnn_true(self, runner):
        res = runner.invoke(main, ["tnn"], input=UPPER3)
        assert json.loads(res.output) == {"tnn": True}

    def test_parse_error_exit_2(self, runner):
        res = runner.invoke(main, ["cell-of"], input="not json")
        assert res.exit_code == 2

    def test_bad_entry_exit_2(self, runner):
        bad = json.dumps({"n": 2, "entries": [["1", "x"], ["0", "1"]]})
        res = runner.invoke(main, ["cell-of"], input=bad)
        assert res.exit_code == 2


class TestProjectRho:
    def test_project(self, runner):
        res = runner.invoke(main, ["project", "--u", "2,1,3"], input=UPPER3)
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert obj["x_u"]["entries"][0] == ["1", "1", "0"]

    def test_project_precondition_exit_3(self, runner):
        res = runner.invoke(main, ["project", "--u", "2,1,3"], input=IDENTITY3)
        assert res.exit_code == 3

    def test_rho_roundtrip(self, runner, tmp_path):
        base = tmp_path / "base.json"
        base.write_text(
            json.dumps(
                {"n": 3, "entries": [["1", "2", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
            )
        )
        x = json.dumps(
            {"n": 3, "entries": [["1", "1", "2"], ["0", "1", "3"], ["0", "0", "1"]]}
        )
        res = runner.invoke(
            main, ["rho", "--u", "2,1,3", "--base", str(base)], input=x
        )
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert obj["entries"][0][1] == "2"


class TestFlowVerbs:
    def test_backward_flow(self, runner):
        x = json.dumps(
            {"n": 3, "entries": [["1", "0", "1/3"], ["0", "1", "0"], ["0", "0", "1"]]}
        )
        res = runner.invoke(main, ["flow", "--u", "1,2,3"], input=x)
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert abs(obj["str"]) < 1e-6

    def test_forward_needs_target(self, runner):
        res = runner.invoke(
            main, ["flow", "--u", "1,2,3", "--direction", "forward"], input=UPPER3
        )
        assert res.exit_code == 2

    def test_dump_trajectory_jsonl(self, runner):
        x = json.dumps(
            {"n": 3, "entries": [["1", "1", "0"], ["0", "1", "1"], ["0", "0", "1"]]}
        )
        res = runner.invoke(
            main, ["flow", "--u", "1,2,3", "--dump-trajectory"], input=x
        )
        assert res.exit_code == 0
        lines = res.output.strip().splitlines()
        assert len(lines) >= 2
        first = json.loads(lines[0])
        assert set(first) == {"t", "str", "entries"}


class TestLinkVerbs:
    def test_census_s3_top(self, runner):
        res = runner.invoke(
            main, ["link-census", "--u", "1,2,3", "--v", "3,2,1", "--count", "1"]
        )
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert obj["euler"] == 1
        assert sorted(s["dim"] for s in obj["strata"]) == [0, 0, 1, 1, 2]

    def test_census_incomparable_exit_3(self, runner):
        res = runner.invoke(
            main, ["link-census", "--u", "2,1,3", "--v", "1,3,2"]
        )
        assert res.exit_code == 3

    def test_link_sample_level(self, runner):
        res = runner.invoke(
            main,
            [
                "link-sample",
                "--u",
                "1,2,3",
                "--v",
                "2,1,3",
                "--epsilon",
                "0.5",
                "--count",
                "2",
            ],
        )
        assert res.exit_code == 0
        obj = json.loads(res.output)
        for p in obj["points"]:
            assert abs(p["str"] - obj["level"]) <= 1e-9


class TestVerify:
    def test_verify_pass(self, runner):
        res = runner.invoke(main, ["verify", "bruhat", "--n", "3"])
        assert res.exit_code == 0
        [rep] = json.loads(res.output)
        assert rep["ok"] is True
        assert "wall_time" not in rep

    def test_unknown_suite_exit_2(self, runner):
        res = runner.invoke(main, ["verify", "nope"])
        assert res.exit_code == 2

    def test_byte_identical_given_seed(self, runner):
        args = ["verify", "gauss", "--n", "3", "--seed", "7", "--samples", "20"]
        a = runner.invoke(main, args).output
        b = runner.invoke(main, args).output
        assert a == b

    def test_timings_flag_adds_wall_time(self, runner):
        res = runner.invoke(
            main, ["verify", "bruhat", "--n", "3", "--timings"]
        )
        [rep] = json.loads(res.output)
        assert "wall_time" in rep


class TestDeterminism:
    def test_link_sample_byte_identical(self, runner):
        args = [
            "link-sample",
            "--u",
            "1,2,3",
            "--v",
            "2,1,3",
            "--count",
            "2",
            "--seed",
            "5",
        ]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output
