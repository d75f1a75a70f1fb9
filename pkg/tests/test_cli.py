"""Command-line surface: flags, formats, exit codes."""

import json

import pytest

from circkep.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestUsage:
    def test_no_arguments_is_usage_error(self, capsys):
        code, _, err = run(capsys, "simulate")
        assert code == 1

    def test_excluded_pair_cited(self, capsys):
        code, _, err = run(
            capsys, "simulate", "--alpha", "0", "--beta", "0", "--delta", "1",
            "--ic", "1,0,0.9,0",
        )
        assert code == 1
        assert "(0, 0)" in err

    def test_help_exits_zero(self, capsys):
        code, out, _ = run(capsys, "simulate", "--help")
        assert code == 0
        assert "--tau-end" in out

    def test_unknown_flag_rejected(self, capsys):
        code, _, _ = run(capsys, "classify", "--alpha", "1", "--beta", "1",
                         "--delta", "0.3", "--bogus", "1")
        assert code == 1


class TestSimulate:
    def test_chart_run_circularizes(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--alpha", "0", "--beta", "1", "--delta", "0.1",
            "--ic", "1,0,0.9,0", "--frame", "chart", "--tau-end", "1000",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "tau,t,theta,c1,c2,c3,ecc_sq"
        first = float(lines[1].split(",")[-1])
        last = float(lines[-1].split(",")[-1])
        assert last < first * 1e-2  # squared eccentricity collapses

    def test_reduced_header(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--ic", "1,0,0.9,0", "--tau-end", "1.5",
        )
        assert code == 0
        assert out.startswith("t,r,p,l,theta,ecc_sq,energy")

    def test_byte_stable(self, capsys):
        argv = ["simulate", "--alpha", "1", "--beta", "1", "--delta", "0.3",
                "--ic", "1,0,0.9,0", "--tau-end", "1.5"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "traj.csv"
        code, out, _ = run(
            capsys, "simulate", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--ic", "1,0,0.9,0", "--tau-end", "1.5", "--out", str(path),
        )
        assert code == 0
        assert out == ""
        assert path.read_text().startswith("t,r,p,l")


class TestClassify:
    def test_critical_json(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--json", "--tau-end", "800",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["regime_predicted"] == "critical-sub-half"
        assert abs(doc["ecc_sq_limit"] - 0.36) < 1e-3

    def test_infinite_time_point(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--alpha", "0", "--beta", "4", "--delta", "0.1",
            "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["omega"]["verdict"] == "infinite"
        assert doc["regime_observed"] == "ecc-to-one-infinite-time"

    def test_undetermined_exit_code(self, capsys):
        # far too little chart time to measure anything
        code, out, _ = run(
            capsys, "classify", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--json", "--tau-end", "50",
        )
        assert code == 3


class TestSweepCommand:
    def test_csv_output(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--alphas", "0.25,1.25", "--betas", "0.25,1.0",
            "--delta", "0.2", "--tau-end", "2000", "--jobs", "1",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("alpha,beta,delta,gamma,")
        assert len(lines) == 5

    def test_range_syntax(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--alphas", "0.25:1.25:2", "--betas", "1.0,1.5",
            "--delta", "0.2", "--tau-end", "1000", "--jobs", "1",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 5

    def test_origin_rejected(self, capsys):
        code, _, err = run(
            capsys, "sweep", "--alphas", "0,1", "--betas", "0,1",
            "--delta", "0.2",
        )
        assert code == 1
        assert "0, 0" in err or "(0" in err


class TestEquilibriaCommand:
    def test_critical_pair(self, capsys):
        code, out, _ = run(
            capsys, "equilibria", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--json",
        )
        assert code == 0
        docs = json.loads(out)
        assert len(docs) == 2
        interior = docs[0]
        assert interior["location"][0] == pytest.approx(1.5625)
        assert interior["extras"]["ecc_sq"] == pytest.approx(0.36)

    def test_zero_hopf(self, capsys):
        code, out, _ = run(
            capsys, "equilibria", "--alpha", "1", "--beta", "0", "--delta", "0.1",
            "--json",
        )
        docs = json.loads(out)
        assert docs[0]["stability"] == "zero-hopf"
        assert docs[0]["extras"]["decay_a"] == -0.5


class TestChartCommand:
    def test_forward(self, capsys):
        code, out, _ = run(
            capsys, "chart", "--alpha", "1", "--beta", "0", "--delta", "0.1",
            "--ic", "0.08,1.0,0.2,0",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["chart"] == "gamma-neg"
        assert doc["coords"]["c1"] == pytest.approx(2.0)
        assert doc["roundtrip_max_err"] < 1e-12

    def test_inverse(self, capsys):
        code, out, _ = run(
            capsys, "chart", "--alpha", "1", "--beta", "0", "--delta", "0.1",
            "--coords", "2.0,0.2,0.04",
        )
        doc = json.loads(out)
        assert doc["reduced"]["r"] == pytest.approx(0.08)
        assert doc["reduced"]["p"] == pytest.approx(1.0)


class TestConfigPrecedence:
    def test_config_file_supplies_default(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("tau-end = 1.5\n# comment\nrtol = 1e-8\n")
        code, out, _ = run(
            capsys, "simulate", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--ic", "1,0,0.9,0", "--config", str(cfg),
        )
        assert code == 0
        last_t = float(out.strip().split("\n")[-1].split(",")[0])
        assert last_t == pytest.approx(1.5)

    def test_flag_beats_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("tau-end = 1.5\n")
        code, out, _ = run(
            capsys, "simulate", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--ic", "1,0,0.9,0", "--config", str(cfg), "--tau-end", "1",
        )
        last_t = float(out.strip().split("\n")[-1].split(",")[0])
        assert last_t == pytest.approx(1.0)


class TestVerifyCommand:
    def test_filtered_check_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--filter", "equilibrium*")
        assert code == 0
        assert "PASS" in out
        assert "equilibrium-algebra" in out

    def test_unmatched_filter(self, capsys):
        code, _, err = run(capsys, "verify", "--filter", "no-such-check*")
        assert code == 1


class TestChartOverride:
    def test_second_critical_chart(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--alpha", "1", "--beta", "1", "--delta", "0.7",
            "--ic", "1,0,0.9,0", "--frame", "chart", "--chart", "critical-l2",
            "--tau-end", "200",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "tau,t,theta,c1,c2,c3,ecc_sq"
        assert float(lines[-1].split(",")[-1]) == pytest.approx(1.0, abs=1e-3)

    def test_mismatched_chart_rejected(self, capsys):
        code, _, err = run(
            capsys, "simulate", "--alpha", "1", "--beta", "2", "--delta", "0.5",
            "--ic", "1,0,0.9,0", "--frame", "chart", "--chart", "gamma-neg",
            "--tau-end", "10",
        )
        assert code == 1
        assert "not valid" in err

    def test_classify_custom_ic(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--alpha", "1", "--beta", "1", "--delta", "0.3",
            "--ic", "0.4,-0.1,0.5,0", "--json", "--tau-end", "600",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["regime_observed"] == "critical-sub-half"


class TestJobsEnv:
    def test_env_fallback_honored(self, capsys, monkeypatch):
        monkeypatch.setenv("CIRCKEP_JOBS", "1")
        code, out, _ = run(
            capsys, "sweep", "--alphas", "1.25", "--betas", "1.0",
            "--delta", "0.2", "--tau-end", "1000",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 2
