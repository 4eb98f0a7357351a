import os

import pytest

from cluspt.cli import main
from cluspt.instances import generate_instance, serialize_instance


@pytest.fixture
def toy_file(toy_text, tmp_path):
    p = tmp_path / "toy.cluspt"
    p.write_text(toy_text)
    return str(p)


def test_solve_writes_solution(toy_file, tmp_path, capsys):
    out = str(tmp_path / "toy.sol")
    rc = main(["solve", toy_file, "--algo", "gacspt", "--seed", "3",
               "--pop", "10", "--gens", "30", "--out", out])
    assert rc == 0
    assert "cost=8.0" in capsys.readouterr().out
    lines = open(out, encoding="utf-8").read().splitlines()
    assert lines[0] == "# cost = 8.0"
    edges = [tuple(l.split()) for l in lines[1:]]
    assert len(edges) == 3
    # 1-based endpoints
    assert {e[0] for e in edges} <= {"1", "2", "3", "4"}


def test_solve_all_algorithms(toy_file, tmp_path):
    for algo in ("gacspt", "nlsea", "mlsea"):
        out = str(tmp_path / f"{algo}.sol")
        rc = main(["solve", toy_file, "--algo", algo, "--seed", "0",
                   "--pop", "6", "--gens", "20", "--budget", "60",
                   "--out", out])
        assert rc == 0
        assert os.path.exists(out)


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.cluspt"
    p.write_text("NAME: bad\nTYPE: TSP\n")
    rc = main(["solve", str(p), "--algo", "gacspt"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_infeasible_exit_code(tmp_path, capsys):
    p = tmp_path / "disc.cluspt"
    p.write_text("""NAME: disc
TYPE: CluSPT
DIMENSION: 4
EDGE_WEIGHT_TYPE: EXPLICIT
NUMBER_OF_CLUSTERS: 2
ROOT: 1
EDGE_SECTION
1 2 1.0
3 4 1.0
CLUSTER_SECTION
1 2 -1
3 4 -1
""")
    rc = main(["solve", str(p), "--algo", "gacspt"])
    assert rc == 3
    assert "infeasible" in capsys.readouterr().err


def test_generate_solve_bench_stats_convergence(tmp_path, capsys):
    insts = tmp_path / "insts"
    insts.mkdir()
    for s in (1, 2):
        inst = generate_instance(7, 3, seed=s)
        (insts / f"{inst.name}.cluspt").write_text(serialize_instance(inst))
    results = tmp_path / "results"
    rc = main(["bench", str(insts), "--algos", "gacspt", "nlsea", "mlsea",
               "--runs", "2", "--seed", "0", "--pop", "8", "--gens", "20",
               "--budget", "80", "--stall", "5", "--out", str(results)])
    assert rc == 0
    jsonl = results / "results.jsonl"
    summary = results / "summary.csv"
    assert jsonl.exists() and summary.exists()
    text = summary.read_text()
    assert text.startswith("instance,algo,BF,Avg,CV,Rm")
    assert len(text.splitlines()) == 1 + 2 * 3

    base = tmp_path / "baseline.txt"
    names = sorted(f.stem for f in insts.glob("*.cluspt"))
    base.write_text("\n".join(f"{n} 100.0" for n in names) + "\n")
    rc = main(["stats", str(jsonl), "--baseline", str(base)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "RPD%" in out
    assert "Friedman" in out

    trace = tmp_path / "trace.csv"
    rc = main(["convergence", str(jsonl), "--out", str(trace)])
    assert rc == 0
    head = trace.read_text().splitlines()
    assert head[0] == "generation,gacspt,mlsea,nlsea"
    assert head[1].startswith("0,")


def test_generate_command(tmp_path, capsys):
    out = str(tmp_path / "g.cluspt")
    rc = main(["generate", "--n", "9", "--k", "3", "--seed", "5",
               "--out", out])
    assert rc == 0
    from cluspt.instances import parse_instance
    inst = parse_instance(open(out, encoding="utf-8").read())
    assert inst.graph.n == 9 and inst.k == 3
