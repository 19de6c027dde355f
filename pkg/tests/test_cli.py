import io

import pytest

from basketq.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main
from basketq.verify import History
from basketq import EMPTY, OK


def run(*argv):
    out = io.StringIO()
    return main(list(argv), out=out), out.getvalue()


def test_bench_fai_five_rows():
    code, out = run("bench", "--impl", "fai", "--threads", "1", "--ops", "1000")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "impl,threads,ops_per_thread,work_limit,padding,run,seconds,mean,stddev"
    assert len(lines) == 6


def test_bench_sweep_to_file(tmp_path):
    path = tmp_path / "b.csv"
    code, _ = run("bench", "--impl", "cas,rw", "--threads", "1,2", "--ops", "100", "--runs", "2",
                  "--padding", "--output", str(path))
    assert code == EXIT_OK
    assert len(path.read_text().strip().splitlines()) == 1 + 2 * 2 * 2


def test_bench_queue_impl():
    code, _ = run("bench", "--impl", "queue-cas-fai-swap", "--threads", "2", "--ops", "200",
                  "--runs", "1", "--verify")
    assert code == EXIT_OK


def test_stress_clean(tmp_path):
    hist = tmp_path / "h.txt"
    code, out = run("stress", "--llic", "rw", "--basket", "fai-swap", "--threads", "8", "--ops", "1000",
                    "--history-out", str(hist))
    assert code == EXIT_OK
    assert "0 violations" in out
    assert len(History.load(hist)) == 16000


def test_check_clean_and_dirty(tmp_path):
    good = History.from_ops([(0, "enq", 1, OK, 0, 1), (1, "deq", None, 1, 2, 3)])
    bad = History.from_ops([(0, "enq", 1, OK, 0, 1), (1, "deq", None, EMPTY, 2, 3)])
    good.save(tmp_path / "g.txt")
    bad.save(tmp_path / "b.txt")
    assert run("check", str(tmp_path / "g.txt"), "--linearize", "queue")[0] == EXIT_OK
    code, out = run("check", str(tmp_path / "b.txt"))
    assert code == EXIT_VIOLATION and "VWit" in out


def test_check_missing_file(tmp_path):
    assert run("check", str(tmp_path / "nope.txt"))[0] == EXIT_USAGE


def test_explore_cas_llic():
    code, out = run("explore", "--algo", "cas-llic", "--procs", "2", "--ops", "2")
    assert code == EXIT_OK
    assert "all 20 histories linearizable" in out


def test_explore_reports_counterexample():
    code, out = run("explore", "--algo", "fai-swap-basket", "--procs", "3", "--ops", "1")
    assert code == EXIT_VIOLATION
    assert "NOT linearizable" in out


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["bench", "--bogus"],
    ["bench", "--runs", "0"],
    ["bench", "--threads", "a,b"],
    ["bench", "--impl", "nope"],
    ["stress", "--llic", "nope"],
    ["stress", "--threads", "1", "--roles", "split"],
    ["explore"],
    ["explore", "--algo", "rw-llic", "--procs", "3", "--n", "2"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("BASKETQ_SEED", "oops")
    assert run("bench", "--impl", "fai", "--ops", "10", "--runs", "1")[0] == EXIT_USAGE
    monkeypatch.setenv("BASKETQ_SEED", "17")
    assert run("bench", "--impl", "fai", "--ops", "10", "--runs", "1")[0] == EXIT_OK


def test_help_exits_zero():
    assert run("--help")[0] == EXIT_OK
