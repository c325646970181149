import pytest

from cachecomp import cli
from cachecomp.strategies import run
from cachecomp.trace import parse_trace


@pytest.fixture
def trace_file(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("a\nb\nc\na\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def weighted_file(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("a 5\nb\nc\nb\na 5\n", encoding="utf-8")
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_prints_cost(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "simulate", "--strategy", "lru", "--k", "2", "--trace", trace_file
        )
        assert code == 0
        assert "cost 2" in out

    def test_event_csv(self, capsys, trace_file, tmp_path):
        out_file = tmp_path / "events.csv"
        code, _, _ = run_cli(
            capsys, "simulate", "--strategy", "lru", "--k", "2",
            "--trace", trace_file, "--out", str(out_file),
        )
        assert code == 0
        lines = out_file.read_text().strip().splitlines()
        assert lines[0] == "index,node,kind,evicted,cost"
        assert lines[3] == "2,c,move,a,1"

    def test_matches_library(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "simulate", "--strategy", "fwf", "--k", "2", "--trace", trace_file
        )
        expected = run("fwf", 2, parse_trace("a\nb\nc\na\n")).total_cost
        assert f"cost {expected}" in out

    def test_unknown_strategy_is_domain_error(self, capsys, trace_file):
        code, _, err = run_cli(
            capsys, "simulate", "--strategy", "lfu", "--k", "2", "--trace", trace_file
        )
        assert code == 1 and "error" in err


class TestOptimal:
    def test_paging_uses_belady(self, capsys, trace_file):
        code, out, _ = run_cli(capsys, "optimal", "--k", "2", "--trace", trace_file)
        assert code == 0
        assert "method belady" in out and "cost 1" in out

    def test_weighted_uses_flow_with_schedule(self, capsys, weighted_file):
        code, out, _ = run_cli(
            capsys, "optimal", "--k", "2", "--trace", weighted_file, "-v"
        )
        assert code == 0
        assert "method flow" in out
        assert "request,predecessor" in out

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "optimal", "--k", "2", "--trace", "/no/such")
        assert code == 1 and err


class TestCertify:
    def test_pass_verdict(self, capsys, weighted_file, tmp_path):
        cert = tmp_path / "cert.txt"
        code, out, _ = run_cli(
            capsys, "certify", "--k", "2", "--h", "1", "--trace", weighted_file,
            "--out", str(cert),
        )
        assert code == 0
        assert "feasible PASS" in out and "bound PASS" in out and "verdict PASS" in out
        assert "ratio 1" in out  # k/(k-h+1) = 2/2
        assert cert.read_text().startswith("cachecomp-certificate 1")

    def test_h_defaults_to_k(self, capsys, trace_file):
        code, out, _ = run_cli(capsys, "certify", "--k", "2", "--trace", trace_file)
        assert code == 0 and "h 2" in out and "ratio 2" in out

    def test_h_out_of_range(self, capsys, trace_file):
        code, _, err = run_cli(
            capsys, "certify", "--k", "2", "--h", "3", "--trace", trace_file
        )
        assert code == 1 and err

    def test_failure_exits_three(self, capsys, trace_file, monkeypatch):
        from cachecomp.dualcert import Violation

        monkeypatch.setattr(
            cli.dualcert, "check_feasibility_fast", lambda dual, trace: [Violation(0, 1, 1)]
        )
        code, out, _ = run_cli(capsys, "certify", "--k", "2", "--trace", trace_file)
        assert code == 3
        assert "feasible FAIL" in out and "verdict FAIL" in out


class TestPhases:
    def test_summary_and_csv(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "phases", "--k", "2", "--trace", trace_file, "-v"
        )
        assert code == 0
        assert "num_phases 1" in out and "avenew 1" in out
        assert "phase,start,end,distinct,new" in out


class TestSweep:
    def test_stdout_csv(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "sweep", "--trace", trace_file, "--n", "3",
            "--strategies", "lru,fwf", "--c-family", "log:4", "--d", "1",
        )
        assert code == 0
        assert "k,strategy,cost,opt,ratio,phases,avenew,violator" in out
        assert "violators lru" in out
        # n rows per strategy
        rows = [l for l in out.splitlines() if l and l[0].isdigit()]
        assert len(rows) == 6

    def test_gnuplot_requires_out(self, capsys, trace_file):
        code, _, err = run_cli(
            capsys, "sweep", "--trace", trace_file, "--n", "2",
            "--strategies", "lru", "--gnuplot",
        )
        assert code == 1 and "gnuplot" in err

    def test_out_and_gnuplot_files(self, capsys, trace_file, tmp_path):
        out_csv = tmp_path / "sweep.csv"
        code, _, _ = run_cli(
            capsys, "sweep", "--trace", trace_file, "--n", "2",
            "--strategies", "lru", "--out", str(out_csv), "--gnuplot",
        )
        assert code == 0
        assert out_csv.exists() and (tmp_path / "sweep.csv.gp").exists()

    def test_rational_d(self, capsys, trace_file):
        code, out, _ = run_cli(
            capsys, "sweep", "--trace", trace_file, "--n", "2",
            "--strategies", "lru", "--c-family", "const:2", "--d", "1/2",
        )
        assert code == 0


class TestUsageErrors:
    def test_no_subcommand(self, capsys):
        assert cli.main([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert cli.main(["frobnicate"]) == 2

    def test_missing_required_flag(self, capsys, trace_file):
        assert cli.main(["simulate", "--trace", trace_file]) == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv_template",
        [
            ["simulate", "--strategy", "mark", "--k", "2", "--trace", "{t}", "-v"],
            ["optimal", "--k", "2", "--trace", "{t}", "-v"],
            ["certify", "--k", "2", "--trace", "{t}"],
            ["phases", "--k", "2", "--trace", "{t}", "-v"],
            [
                "sweep", "--trace", "{t}", "--n", "3", "--strategies",
                "lru,mark", "--trials", "8", "--c-family", "log:4",
            ],
        ],
    )
    def test_two_runs_identical(self, capsys, trace_file, argv_template):
        argv = [a.format(t=trace_file) for a in argv_template]
        code1, out1, _ = run_cli(capsys, *argv)
        code2, out2, _ = run_cli(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2
