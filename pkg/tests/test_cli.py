import subprocess
import sys
from fractions import Fraction

import pytest

from nodeavg.cli import BAD_INPUT, FAILED, OK, generate, main
from nodeavg.cluster import ClusterGraph, validate_family
from nodeavg.errors import InputError
from nodeavg.io import load_graph, read_rows


def _rows(path):
    with open(path, encoding="utf-8") as fh:
        return read_rows(fh)


def test_gen_ct_base(tmp_path):
    out = tmp_path / "ct.txt"
    assert main(["gen", "ct", "--k", "0", "--beta", "6", "-o", str(out)]) == OK
    cg = load_graph(out)
    assert isinstance(cg, ClusterGraph) and cg.n == 48
    assert validate_family(cg) == []
    assert main(["verify", "family", "--graph", str(out)]) == OK


def test_gen_ct_lift(tmp_path):
    out = tmp_path / "lift.txt"
    assert main(["gen", "ct", "--k", "1", "--beta", "10", "--lift", "5", "--seed", "7", "-o", str(out)]) == OK
    cg = load_graph(out)
    assert cg.n == 36000 and cg.lift_order == 5


def test_gen_regular(tmp_path):
    out = tmp_path / "r.txt"
    assert main(["gen", "regular", "--n", "100", "--d", "3", "--seed", "1", "-o", str(out)]) == OK
    g = load_graph(out)
    assert (g.n, g.m) == (100, 150)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert main(["gen", "gnp", "--n", "300", "--p", "1/50", "--seed", "3", "-o", str(path)]) == OK
    assert a.read_bytes() == b.read_bytes()


def test_generator_strings():
    assert generate("path:n=4").m == 3
    assert generate("bipartite:a=3,b=3").m == 9
    assert generate("ct:k=0,beta=6,lift=2,seed=1").n == 96
    for bad in ("nosuch:n=3", "gnp:n=10", "path:n=x", "path:4"):
        with pytest.raises(InputError):
            generate(bad)


def test_run_ruling22_ten_trials(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["run", "--algo", "ruling22", "--gen", "gnp:n=300,p=0.03,seed=2",
                 "--trials", "10", "-o", str(out)]) == OK
    rows = _rows(out)
    assert len(rows) == 11
    assert [r["seed"] for r in rows[:10]] == [str(s) for s in range(10)]
    agg = rows[-1]
    assert agg["seed"] == "all" and agg["trials"] == "10"
    assert agg["avg_v"] == sum((r["avg_v"] for r in rows[:10]), Fraction(0)) / 10
    assert main(["report", str(out)]) == OK


def test_run_luby_on_ct_reports_s0_fraction(tmp_path):
    out = tmp_path / "luby.csv"
    assert main(["run", "--algo", "luby-mis", "--gen", "ct:k=1,beta=12", "--trials", "3", "-o", str(out)]) == OK
    for r in _rows(out)[:3]:
        assert r["s0_fraction"] >= Fraction(2, 3)


def test_run_rand_mm_has_removal_columns(tmp_path):
    out = tmp_path / "mm.csv"
    assert main(["run", "--algo", "rand-mm", "--gen", "gnp:n=1000,p=0.01,seed=1", "--trials", "50",
                 "-o", str(out)]) == OK
    rows = _rows(out)
    assert len(rows) == 51
    for r in rows[:50]:
        fracs = r["removal_fractions"].split(";")
        assert len(fracs) == int(r["iterations"])
        assert float(r["min_removal_fraction"]) == pytest.approx(min(map(float, fracs)), abs=1e-9)


def test_run_writes_traces(tmp_path):
    traces = tmp_path / "t.jsonl"
    assert main(["run", "--algo", "luby-mis", "--gen", "path:n=5", "--trials", "2", "-o", str(tmp_path / "x.csv"),
                 "--traces", str(traces)]) == OK
    assert len(traces.read_text().splitlines()) == 2


def test_run_output_is_byte_identical(tmp_path, monkeypatch):
    argv = ["run", "--algo", "rand-mm", "--gen", "gnp:n=400,p=0.02,seed=5", "--trials", "6"]
    paths = []
    for threads in ("1", "1", "3"):
        monkeypatch.setenv("NODEAVG_THREADS", threads)
        paths.append(tmp_path / f"out{len(paths)}.csv")
        assert main(argv + ["-o", str(paths[-1])]) == OK
    assert paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()


def test_run_program_engine_matches_kernel(tmp_path):
    argv = ["run", "--algo", "luby-mis", "--gen", "gnp:n=200,p=0.05,seed=1", "--trials", "3"]
    a, b = tmp_path / "k.csv", tmp_path / "p.csv"
    assert main(argv + ["-o", str(a)]) == OK
    assert main(argv + ["--engine", "program", "-o", str(b)]) == OK
    # programs keep no per-iteration history, so compare the core columns only
    core = ["seed", "avg_v", "avg_e", "worst", "exp_v_max"]
    assert [[r[k] for k in core] for r in _rows(a)] == [[r[k] for k in core] for r in _rows(b)]


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "--algo", "sinkless", "--gen", "path:n=5"]) == BAD_INPUT
    assert main(["run", "--algo", "luby-mis", "--graph", str(tmp_path / "none.txt")]) == BAD_INPUT
    assert main(["run", "--algo", "luby-mis", "--gen", "path:n=5", "--trials", "0"]) == BAD_INPUT
    assert main(["verify", "family", "--gen", "path:n=5"]) == BAD_INPUT
    assert main(["run", "--algo", "det-mm", "--gen", "path:n=4", "--engine", "program"]) == BAD_INPUT
    assert "error:" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["run", "--algo", "nosuch", "--gen", "path:n=3"])


def test_broken_family_file_fails(tmp_path):
    good = tmp_path / "ct.txt"
    assert main(["gen", "ct", "--k", "0", "--beta", "6", "-o", str(good)]) == OK
    lines = good.read_text().splitlines()
    # drop one edge and fix the header so the file still parses
    edges = [i for i, ln in enumerate(lines) if ln.startswith("e ")]
    del lines[edges[0]]
    lines = [f"edges {len(edges) - 1}" if ln.startswith("edges ") else ln for ln in lines]
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["verify", "family", "--graph", str(bad)]) == FAILED


def test_report_detects_edited_aggregate(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["run", "--algo", "luby-mis", "--gen", "gnp:n=100,p=0.05,seed=1", "--trials", "3",
                 "-o", str(out)]) == OK
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    last = lines[-1].split(",")
    last[header.index("worst")] = "999"
    out.write_text("\n".join(lines[:-1] + [",".join(last)]) + "\n")
    assert main(["report", str(out)]) == FAILED


def test_verify_iso_on_lift(capsys):
    assert main(["verify", "iso", "--gen", "ct:k=1,beta=10,lift=50,seed=1", "--k", "1", "--pairs", "3"]) == OK
    out = capsys.readouterr().out
    assert out.count("verified True, hashes equal True") == 3


def test_verify_iso_without_pairs(capsys):
    assert main(["verify", "iso", "--gen", "ct:k=1,beta=10", "--k", "2"]) == FAILED


def test_verify_cycles_on_k4_lifts(capsys):
    assert main(["verify", "cycles", "--gen", "complete:n=4", "--ell", "4", "--lifts", "50", "--q", "100"]) == OK
    out = capsys.readouterr().out
    mean = float(out.split("mean fraction ")[1].split()[0])
    assert mean <= 0.81


def test_verify_alpha(capsys):
    assert main(["verify", "alpha", "--gen", "ct:k=0,beta=6", "--samples", "5"]) == OK
    assert "alpha: pass" in capsys.readouterr().out
    assert main(["verify", "alpha", "--gen", "ct:k=0,beta=6", "--cluster", "0"]) == BAD_INPUT


def test_sweep_and_svg(tmp_path):
    out, svg = tmp_path / "s.csv", tmp_path / "s.svg"
    argv = ["sweep", "--algo", "ruling22", "--algo", "luby-mis", "--sizes", "100,300", "--trials", "2"]
    assert main(argv + ["-o", str(out), "--svg", str(svg)]) == OK
    rows = _rows(out)
    assert [(r["size"], r["algorithm"]) for r in rows] == [
        ("100", "ruling22"), ("100", "luby-mis"), ("300", "ruling22"), ("300", "luby-mis")]
    assert svg.read_text().lstrip().startswith("<?xml")
    again = tmp_path / "again.svg"
    assert main(argv + ["-o", str(tmp_path / "s2.csv"), "--svg", str(again)]) == OK
    assert svg.read_bytes() == again.read_bytes()
    assert out.read_bytes() == (tmp_path / "s2.csv").read_bytes()


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "nodeavg.cli", "gen", "regular", "--n", "10", "--d", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("graph v1")
    assert "wrote 10 nodes, 15 edges" in res.stderr
