from __future__ import annotations

import pytest

from pathdec import formats
from pathdec.cli import main
from pathdec.digraph import Digraph


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_complete(capsys, tmp_path):
    code, out, _ = _run(capsys, ["generate", "--n", "5", "--p", "1"])
    assert code == 0 and formats.parse_edge_list(out).m == 20
    f = tmp_path / "g.txt"
    assert main(["generate", "--n", "6", "--class", "example", "--t", "2", "--out", str(f)]) == 0
    assert formats.read_edge_list(f).m == 6


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as info:
        main(["generate", "--p", "0.5"])
    assert info.value.code == 64
    assert main(["generate", "--n", "5"]) == 64
    assert main(["generate", "--n", "5", "--class", "example"]) == 64
    assert main(["montecarlo", "--n-list", "5", "--p-list", "2", "--trials", "3"]) == 64


def test_unreadable_input_exits_66(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a graph\n")
    for argv in (["pn", "--in", str(tmp_path / "missing")], ["classify", "--in", str(bad)]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 66


def test_decompose_then_verify(capsys, tmp_path):
    g, pth, tr = tmp_path / "g.txt", tmp_path / "p.txt", tmp_path / "trace.txt"
    assert main(["generate", "--n", "400", "--class", "example", "--t", "120", "--euler-deg", "6",
                 "--seed", "1", "--out", str(g)]) == 0
    code, _, err = _run(capsys, ["decompose", "--in", str(g), "--out", str(pth), "--mode", "permissive",
                                 "--kappa", "3", "--seed", "1", "--trace", str(tr)])
    assert code == 0 and "stage verify: ok" in err
    assert tr.read_text().splitlines()[0].split()[0] in ("short2", "short1", "medium", "long")
    code, out, _ = _run(capsys, ["verify", "--graph", str(g), "--paths", str(pth)])
    assert code == 0 and out == "PASS paths=24000 excess=24000\n"


def test_decompose_failure_exit_2(capsys, tmp_path):
    g = tmp_path / "tri.txt"
    formats.write_edge_list(Digraph(3, [(0, 1), (1, 2), (2, 0)]), g)
    code, out, err = _run(capsys, ["decompose", "--in", str(g)])
    assert code == 2 and out == "" and "stage input: FAILED" in err


def test_verify_fail_exit_1(capsys, tmp_path):
    g, p = tmp_path / "g.txt", tmp_path / "p.txt"
    formats.write_edge_list(Digraph(3, [(0, 1), (1, 2)]), g)
    p.write_text("paths 2\n0 1\n1 2\n")
    code, out, _ = _run(capsys, ["verify", "--graph", str(g), "--paths", str(p)])
    assert code == 1 and out == "FAIL\n  path count 2 != excess 1\n"


def test_classify_and_pn(capsys, tmp_path):
    g = tmp_path / "g.txt"
    formats.write_edge_list(Digraph(3, [(0, 1), (1, 2), (2, 0)]), g)
    code, out, _ = _run(capsys, ["pn", "--in", str(g)])
    assert code == 0 and out == "pn=2 excess=0 consistent=no\n"
    code, out, _ = _run(capsys, ["classify", "--in", str(g), "--kappa", "1", "--threshold", "1"])
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("n=3 m=3") and lines[5] == "P5 SKIPPED"


def test_montecarlo_extremes(capsys):
    code, out, _ = _run(capsys, ["montecarlo", "--n-list", "5", "--p-list", "0,1", "--trials", "5"])
    assert code == 0
    assert out.splitlines()[1].startswith("5,0,5,1.000000")
    assert out.splitlines()[2].startswith("5,1,5,0.000000")
