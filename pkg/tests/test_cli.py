"""Tests for the command-line front end and its artifacts."""

import argparse
import json

import pandas as pd
import pytest

from main import main, report_failure, servers_arg
from src.config import EXIT_INFEASIBLE, EXIT_INVALID_ARGUMENTS, EXIT_OK, EXIT_VERIFICATION_FAILED
from src.errors import InsufficientRowsError, InvalidParamsError, PipelineError


def read_csv(path):
    return pd.read_csv(path, comment='#')


class TestTradeoff:
    def test_csv(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["tradeoff", "--K", "6", "--N", "12", "--mu", "1/2", "--output", str(out)]) == EXIT_OK
        assert out.read_text().splitlines()[0] == "q,D,L_opt,L_base,l_opt,r2_opt"
        df = read_csv(out)
        assert df['q'].tolist() == [2, 3, 4, 5, 6]
        assert (df['L_opt'] <= df['L_base']).all()
        row = df[df['q'] == 4].iloc[0]
        assert row['D'] == pytest.approx(11.7)
        assert row['L_opt'] == pytest.approx(3.8)

    def test_json_has_exact_loads(self, tmp_path):
        out = tmp_path / "curve.json"
        assert main(["tradeoff", "--format", "json", "--output", str(out)]) == EXIT_OK
        rows = json.loads(out.read_text())
        row = next(r for r in rows if r['q'] == 4)
        assert row['L_opt'] == {'value': 3.8, 'num': 19, 'den': 5}
        assert (row['l_opt'], row['r2_opt']) == (4, 3)

    def test_repeatable(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["tradeoff", "--K", "8", "--N", "24", "--output", str(first)])
        main(["tradeoff", "--K", "8", "--N", "24", "--output", str(second)])
        assert first.read_bytes() == second.read_bytes()


    def test_nearest_point_gap(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert main(["tradeoff", "--K", "6", "--N", "12", "--at", "11.5", "--output", str(out)]) == EXIT_OK
        printed = capsys.readouterr().out
        assert "nearest q=4" in printed
        assert "L_base=4.2  L_opt=3.8" in printed
        assert "gain 1.105x" in printed


class TestSimulate:
    def test_proposed(self, tmp_path):
        out = tmp_path / "report.json"
        transcript = tmp_path / "transcript.jsonl"
        plan = tmp_path / "plan.json"
        placement = tmp_path / "placement.json"
        code = main([
            "simulate", "--K", "6", "--q", "4", "--mu", "1/2", "--m", "20", "--N", "12",
            "--l", "4", "--r2", "3", "--fixed-Q", "1,2,3,4", "--output", str(out),
            "--transcript-output", str(transcript), "--plan-output", str(plan),
            "--placement-output", str(placement),
        ])
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report['verified'] is True
        assert report['message_count'] == 76
        lines = transcript.read_text().splitlines()
        assert len(lines) == 76
        assert json.loads(lines[0])['components'] == [[2, 3, 2], [1, 6, 3], [0, 9, 4]]
        assert json.loads(plan.read_text())['message_count'] == 76
        assert len(json.loads(placement.read_text())['blocks']) == 20

    def test_baseline(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["simulate", "--l", "6", "--r2", "2", "--fixed-Q", "1,2,3,4", "--output", str(out)])
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report['message_count'] == 84
        assert report['counted_load'] == {'value': 4.2, 'num': 21, 'den': 5}

    def test_optimized_rates_and_sampled_stragglers(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["simulate", "--seed", "3", "--output", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report['rates']['l'] == 4
        assert report['empirical_latency'] >= 6

    def test_same_seed_same_bytes(self, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (first, second):
            main(["simulate", "--seed", "8", "--output", str(tmp_path / "r.json"),
                  "--transcript-output", str(path)])
        assert first.read_bytes() == second.read_bytes()

    def test_storage_violation(self, tmp_path, caplog):
        code = main(["simulate", "--l", "6", "--r2", "3", "--output", str(tmp_path / "r.json")])
        assert code == EXIT_INFEASIBLE
        assert "violates 12b" in caplog.text

    def test_divisibility_suggests_multiplier(self, tmp_path, caplog):
        code = main(["simulate", "--m", "10", "--l", "4", "--r2", "3", "--output", str(tmp_path / "r.json")])
        assert code == EXIT_INFEASIBLE
        assert "--m 20" in caplog.text

    def test_rates_need_both_flags(self, tmp_path):
        assert main(["simulate", "--l", "4", "--output", str(tmp_path / "r.json")]) == EXIT_INVALID_ARGUMENTS

    def test_invalid_params(self, tmp_path):
        assert main(["simulate", "--q", "9", "--output", str(tmp_path / "r.json")]) == EXIT_INVALID_ARGUMENTS

    def test_field_too_small_for_code(self, tmp_path, caplog):
        code = main(["simulate", "--w", "8", "--m", "240", "--l", "6", "--r2", "2", "--fixed-Q", "1,2,3,4",
                     "--output", str(tmp_path / "r.json")])
        assert code == EXIT_INFEASIBLE
        assert "need 360 evaluation points" in caplog.text

    def test_repeated_fixed_server(self, tmp_path):
        code = main(["simulate", "--l", "4", "--r2", "3", "--fixed-Q", "1,1,2,3", "--output", str(tmp_path / "r.json")])
        assert code == EXIT_INVALID_ARGUMENTS

    def test_fixed_server_out_of_range(self, tmp_path):
        code = main(["simulate", "--l", "4", "--r2", "3", "--fixed-Q", "1,2,3,9", "--output", str(tmp_path / "r.json")])
        assert code == EXIT_INVALID_ARGUMENTS

    @pytest.mark.parametrize("text", ["", ",", " , "])
    def test_empty_fixed_set(self, text):
        with pytest.raises(SystemExit) as excinfo:
            main(["simulate", "--fixed-Q", text])
        assert excinfo.value.code == EXIT_INVALID_ARGUMENTS

    def test_unparseable_fraction(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["simulate", "--mu", "half"])
        assert excinfo.value.code == EXIT_INVALID_ARGUMENTS


class TestFeasible:
    def test_optimum_first(self, tmp_path):
        out = tmp_path / "feasible.csv"
        assert main(["feasible", "--output", str(out)]) == EXIT_OK
        df = read_csv(out)
        first = df.iloc[0]
        assert (first['l'], first['r2']) == (4, 3)
        assert first['load'] == pytest.approx(3.8)
        assert bool(first['optimal'])
        assert df['optimal'].sum() == 1
        assert df['load'].is_monotonic_increasing

    def test_no_stragglers_include_uncoded(self, tmp_path):
        out = tmp_path / "feasible.json"
        assert main(["feasible", "--q", "6", "--format", "json", "--output", str(out)]) == EXIT_OK
        rows = json.loads(out.read_text())
        assert any(r['l'] == 6 and r['r2'] == 3 for r in rows)


class TestLatency:
    def test_analytic(self, tmp_path):
        out = tmp_path / "latency.csv"
        assert main(["latency", "--K", "6", "--mu", "1/2", "--N", "12", "--output", str(out)]) == EXIT_OK
        df = read_csv(out)
        assert df.loc[df['q'] == 4, 'D'].iloc[0] == pytest.approx(11.7)
        assert df['D'].is_monotonic_increasing

    def test_monte_carlo(self, tmp_path):
        out = tmp_path / "latency.csv"
        assert main(["latency", "--trials", "100000", "--seed", "7", "--output", str(out)]) == EXIT_OK
        df = read_csv(out)
        assert (df['relative_error'] < 0.02).all()


def test_verify_example(capsys):
    assert main(["verify-example"]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "4 + 36 + 36" in printed
    assert "11.7" in printed
    assert "PASS" in printed


def test_no_command():
    assert main([]) == EXIT_INVALID_ARGUMENTS


class TestArgumentHelpers:
    def test_servers_are_sorted(self):
        assert servers_arg("4, 2,3,1") == (1, 2, 3, 4)

    def test_empty_server_list(self):
        with pytest.raises(argparse.ArgumentTypeError):
            servers_arg(" , ")

    def test_wrapped_cause_picks_exit_code(self):
        args = argparse.Namespace(m=20, N=12)
        wrapped = PipelineError('shuffle', InvalidParamsError("bad set"))
        assert report_failure(wrapped, args) == EXIT_INVALID_ARGUMENTS
        failed = PipelineError('reduce', InsufficientRowsError("short"))
        assert report_failure(failed, args) == EXIT_VERIFICATION_FAILED
