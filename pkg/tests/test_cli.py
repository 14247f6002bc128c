import csv
import io
import subprocess
import sys

import pytest

from pclique.cli import BENCH_HEADER, main
from pclique.graph import to_dimacs
from pclique.instances import small_example


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def example9(tmp_path):
    path = tmp_path / "example9.clq"
    path.write_text(to_dimacs(small_example()))
    return str(path)


def test_solve_sequential(example9):
    code, out = run("solve", example9, "--split", "seq")
    assert code == 0
    assert out.splitlines()[0] == "omega=4 clique=1,3,6,8"
    assert "nodes=4" in out


def test_solve_parallel_reports_threads(example9):
    code, out = run("solve", example9, "--threads", "4", "--split", "resplit")
    assert code == 0 and out.startswith("omega=4 ")
    assert sum(line.startswith("thread ") for line in out.splitlines()) == 4


def test_solve_prime_and_random():
    code, out = run("solve", "--random", "40,0.5,3", "--prime", "40")
    assert code == 0 and out.startswith("omega<=40")
    code, out = run("solve", "--random", "40,0.5,3", "--threads", "2", "--split", "steal", "--seed", "5")
    assert code == 0 and out.startswith("omega=")


def test_exit_codes(example9, tmp_path):
    bad = tmp_path / "bad.clq"
    bad.write_text("p edge 3 1\ne 1 9\n")
    assert run("solve", str(bad))[0] == 2
    assert run("solve", "--random", "300,0.95,1", "--timeout", "0.05")[0] == 3
    assert run("solve", example9, "--threads", "0", "--split", "dist1")[0] == 4
    assert run("solve", example9, "--threads", "2", "--split", "seq")[0] == 4
    assert run("solve", example9, "--split", "dist9")[0] == 4
    assert run("solve", str(tmp_path / "missing.clq"))[0] == 4
    assert run("solve", "--random", "10,2.0,1")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["solve", example9, "--threads", "many"])
    assert exc.value.code == 4


def test_parse_error_names_input(tmp_path, capsys):
    bad = tmp_path / "broken.clq"
    bad.write_text("p edge 2 1\ne 1\n")
    assert run("solve", str(bad))[0] == 2
    err = capsys.readouterr().err
    assert "broken.clq" in err and "line 2" in err


def test_analyze_rows():
    code, out = run("analyze", "c-fat200-2", "--no-header")
    assert code == 0 and out.strip() == "c-fat200-2,24,24,1,95.8,1×24"
    code, out = run("analyze", "--random", "30,0.5,7")
    code2, out2 = run("analyze", "--random", "30,0.5,7")
    assert out == out2 and out.splitlines()[0] == "instance,omega,total,prove,avoid%,location"


def test_bench_csv_and_plot(tmp_path):
    dest = tmp_path / "bench.csv"
    plot = tmp_path / "plot.py"
    code, _ = run("bench", "hamming6-4", "johnson8-4-4", "--strategies", "seq,dist1,resplit",
                  "--workers", "1,2", "--repeats", "3", "-o", str(dest), "--plot-script", str(plot))
    assert code == 0
    rows = list(csv.reader(dest.open()))
    assert rows[0] == BENCH_HEADER
    body = [dict(zip(BENCH_HEADER, r)) for r in rows[1:]]
    plain = [r for r in body if r["run"] != "mean"]
    summary = [r for r in body if r["run"] == "mean"]
    # seq only at one worker: (1 + 2 + 2) groups per instance
    assert len(plain) == 2 * 5 * 3 and len(summary) == 2 * 5
    assert all(r["status"] == "ok" for r in plain)
    assert all(r["status"].startswith("summary:") and "range=(" in r["status"] for r in summary)
    for name in ("hamming6-4", "johnson8-4-4"):
        assert len({r["omega"] for r in body if r["instance"] == name}) == 1
    det = [r["total_nodes"] for r in plain if r["strategy"] == "dist1" and r["workers"] == "1"
           and r["instance"] == "hamming6-4"]
    assert len(set(det)) == 1
    assert "matplotlib" in plot.read_text()
    compile(plot.read_text(), str(plot), "exec")


def test_bench_records_bad_instance():
    code, out = run("bench", "no-such-graph", "hamming6-2", "--repeats", "1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[1][0] == "no-such-graph" and rows[1][-1].startswith("error:")
    assert rows[2][0] == "hamming6-2" and rows[2][-1] == "ok"


def test_generate_round_trip(tmp_path):
    dest = tmp_path / "m.clq"
    assert run("generate", "MANN_a9", "-o", str(dest))[0] == 0
    code, out = run("solve", str(dest))
    assert out.startswith("omega=16 ")


def test_module_entry_point(example9):
    proc = subprocess.run([sys.executable, "-m", "pclique", "solve", example9],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and proc.stdout.startswith("omega=4 clique=1,3,6,8")
