import csv
import io
import json

from stream_mwm.cli import main
from stream_mwm.report import RUN_CSV_HEADER


def run_to_file(tmp_path, name, argv):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_text()


def test_run_exact_on_stdin_example(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("p mwm 3 2\n0 1 5\n1 2 8\n"))
    assert main(["run", "--input", "-", "--eps", "2", "--alg", "exact"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["output_weight"] == 8
    assert report["algorithm"] == "exact"


def test_run_path_greedy_single_edge(capsys):
    assert main(["run", "--gen", "path", "--n", "2", "--alg", "greedy"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["m"] == 1
    assert report["output_weight"] >= 0
    assert report["ratio_bound"] == "2"


def test_run_er_semi_with_oracle_and_monitors(capsys):
    code = main(
        ["run", "--gen", "er", "--n", "10", "--p", "0.5", "--wmax", "100",
         "--seed", "7", "--eps", "1/2", "--alg", "semi", "--oracle", "--monitors"]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ratio"] is not None
    assert 1.0 <= report["ratio"] <= 2.5
    assert report["oracle_weight"] >= report["output_weight"]
    assert set(report["monitor_verdicts"]) == {
        "phi_growth", "eviction_gap", "terminal_weights", "ratio_bound"
    }
    assert all(v == "pass" for v in report["monitor_verdicts"].values())


def test_run_oracle_silently_off_beyond_capacity(capsys):
    code = main(
        ["run", "--gen", "er", "--n", "30", "--p", "0.3", "--seed", "1",
         "--alg", "semi", "--oracle"]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["oracle_weight"] is None and report["ratio"] is None


def test_run_monitors_skipped_beyond_trace_limits(capsys):
    code = main(
        ["run", "--gen", "er", "--n", "100", "--p", "0.1", "--seed", "2",
         "--alg", "semi", "--monitors"]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["monitor_verdicts"]["phi_growth"] == "skipped"
    assert report["monitor_verdicts"]["ratio_bound"] == "pass"


def test_run_csv_report(tmp_path):
    code, text = run_to_file(
        tmp_path, "r.csv",
        ["run", "--gen", "path", "--n", "4", "--seed", "3", "--report", "csv"],
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == RUN_CSV_HEADER
    assert len(rows) == 2


def test_run_reports_are_deterministic(tmp_path):
    argv = ["run", "--gen", "er", "--n", "12", "--p", "0.6", "--seed", "11",
            "--eps", "1/2", "--oracle", "--monitors"]
    code1, text1 = run_to_file(tmp_path, "a.json", argv)
    code2, text2 = run_to_file(tmp_path, "b.json", argv)
    assert code1 == code2 == 0
    assert text1 == text2


def test_run_exit_2_on_missing_file(capsys):
    assert main(["run", "--input", "/nonexistent/stream.txt"]) == 2
    assert "error" in capsys.readouterr().err


def test_run_exit_2_on_malformed_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("p mwm 2 1\n0 0 3\n"))
    assert main(["run", "--input", "-"]) == 2
    assert "self-loop at line 2" in capsys.readouterr().err


def test_run_exit_2_on_bad_epsilon(capsys):
    assert main(["run", "--gen", "path", "--n", "4", "--eps", "7"]) == 2
    capsys.readouterr()


def test_bench_csv_shape_and_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("STREAM_MWM_THREADS", "1")
    argv = ["bench", "--ns", "100,200", "--reps", "2", "--seed", "5", "--eps", "1/2"]
    code, text = run_to_file(tmp_path, "bench.csv", argv)
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    assert len(body) == 4
    cols = {name: i for i, name in enumerate(header)}
    for row in body:
        n = int(row[cols["n"]])
        assert int(row[cols["peak_live_entries"]]) <= int(row[cols["n_times_queue_cap"]])
        assert int(row[cols["max_queue_len"]]) <= int(row[cols["queue_cap"]])
        assert int(row[cols["n_times_queue_cap"]]) == n * int(row[cols["queue_cap"]])
    # Same seed: non-timing columns identical across repetitions.
    timing = [cols["p50_ns"], cols["p99_ns"], cols["max_ns"], cols["rep"]]
    def strip(row):
        return [c for i, c in enumerate(row) if i not in timing]
    assert strip(body[0]) == strip(body[1])
    assert strip(body[2]) == strip(body[3])


def test_bench_parallel_workers(tmp_path, monkeypatch):
    monkeypatch.setenv("STREAM_MWM_THREADS", "2")
    code, text = run_to_file(
        tmp_path, "bench2.csv",
        ["bench", "--ns", "100,200", "--reps", "1", "--seed", "5"],
    )
    assert code == 0
    assert len(text.strip().split("\n")) == 3


def test_gen_requires_n(capsys):
    assert main(["run", "--gen", "path"]) == 2
    capsys.readouterr()
