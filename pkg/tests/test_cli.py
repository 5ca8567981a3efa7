import os
import subprocess
import sys

import pytest

from flbl.cli import main

P4 = "4 3\n0 1\n1 2\n2 3\n"
TRIANGLE_PENDANT = "4 4\n0 1\n1 2\n0 2\n2 3\n"


def run_cli(args):
    try:
        code = main(args)
    except SystemExit as exc:
        code = exc.code
    return code


def test_build_and_query_p4(tmp_path, capsys):
    gpath = tmp_path / "p4.txt"
    gpath.write_text(P4)
    out = tmp_path / "p4.flbl"
    assert run_cli(["build", str(gpath), "--scheme", "1", "--f", "1",
                    "-o", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "max_label_bits" in captured
    assert run_cli(["query", str(out), "--fail", "1", "--pair", "0,3",
                    "--pair", "2,3"]) == 0
    captured = capsys.readouterr().out
    assert "0,3: disconnected" in captured
    assert "2,3: connected" in captured


def test_query_count_no_faults(tmp_path, capsys):
    gpath = tmp_path / "t.txt"
    gpath.write_text(TRIANGLE_PENDANT)
    out = tmp_path / "t.flbl"
    run_cli(["build", str(gpath), "--scheme", "1", "--f", "2", "-o", str(out)])
    capsys.readouterr()
    assert run_cli(["query", str(out), "--fail", "", "--count"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_known_bridge_fault(tmp_path, capsys):
    gpath = tmp_path / "t.txt"
    gpath.write_text(TRIANGLE_PENDANT)
    out = tmp_path / "t.flbl"
    run_cli(["build", str(gpath), "--scheme", "2", "--f", "1", "-o", str(out)])
    capsys.readouterr()
    run_cli(["query", str(out), "--fail", "3", "--pair", "0,3"])
    assert "disconnected" in capsys.readouterr().out


def test_fault_budget_exit_code(tmp_path, capsys):
    gpath = tmp_path / "p4.txt"
    gpath.write_text(P4)
    out = tmp_path / "p4.flbl"
    run_cli(["build", str(gpath), "--scheme", "1", "--f", "1", "-o", str(out)])
    capsys.readouterr()
    assert run_cli(["query", str(out), "--fail", "0,1", "--count"]) == 4


def test_parse_error_exit_code(tmp_path):
    gpath = tmp_path / "bad.txt"
    gpath.write_text("3 1\n0 9\n")
    out = tmp_path / "bad.flbl"
    with pytest.raises(SystemExit) as exc:
        main(["build", str(gpath), "--scheme", "1", "--f", "1", "-o", str(out)])
    assert exc.value.code == 1


def test_size_cap_exit_code(tmp_path, monkeypatch, capsys):
    n = 24
    lines = [f"{i} {i + 1}" for i in range(n - 1)]
    gpath = tmp_path / "big.txt"
    gpath.write_text(f"{n} {n - 1}\n" + "\n".join(lines) + "\n")
    out = tmp_path / "big.flbl"
    code = run_cli(["build", str(gpath), "--scheme", "1", "--f", "1",
                    "--phi-mode", "exact", "-o", str(out)])
    assert code == 2


def test_scheme4_reroute_warning(tmp_path, capsys):
    n = 64
    edges = [(i, (i + 1) % n) for i in range(n)]
    gpath = tmp_path / "c64.txt"
    gpath.write_text(f"{n} {len(edges)}\n" + "\n".join(f"{u} {v}" for u, v in edges) + "\n")
    out = tmp_path / "c64.flbl"
    assert run_cli(["build", str(gpath), "--scheme", "4", "--f", "1",
                    "-o", str(out)]) == 0
    err = capsys.readouterr().err
    assert "rerouting" in err
    from flbl import labelfile as LF

    lf = LF.read_label_file(str(out))
    assert lf.scheme == LF.SCHEME_RAND_LONG


def test_build_deterministic_bytes(tmp_path, capsys):
    gpath = tmp_path / "t.txt"
    gpath.write_text(TRIANGLE_PENDANT)
    a = tmp_path / "a.flbl"
    b = tmp_path / "b.flbl"
    run_cli(["build", str(gpath), "--scheme", "3", "--f", "2", "--seed", "9",
             "-o", str(a)])
    run_cli(["build", str(gpath), "--scheme", "3", "--f", "2", "--seed", "9",
             "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_verify_command(tmp_path, capsys):
    gpath = tmp_path / "t.txt"
    gpath.write_text(TRIANGLE_PENDANT)
    out = tmp_path / "t.flbl"
    run_cli(["build", str(gpath), "--scheme", "1", "--f", "2", "-o", str(out)])
    capsys.readouterr()
    assert run_cli(["verify", str(gpath), str(out), "--trials", "60"]) == 0
    assert "mismatches=0" in capsys.readouterr().out


def test_stats_csv(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.txt").write_text(TRIANGLE_PENDANT)
    (corpus / "b.txt").write_text(P4)
    assert run_cli(["stats", str(corpus), "--scheme", "1",
                    "--f-range", "1,2"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "f,scheme,max_bits,mean_bits"
    assert len(out) == 3


def test_query_is_label_closed_subprocess(tmp_path):
    # the graph file is deleted before querying; answers still correct
    gpath = tmp_path / "t.txt"
    gpath.write_text(TRIANGLE_PENDANT)
    out = tmp_path / "t.flbl"
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(sys.path)
    subprocess.run(
        [sys.executable, "-m", "flbl.cli", "build", str(gpath), "--scheme", "1",
         "--f", "1", "-o", str(out)],
        check=True, env=env, capture_output=True,
    )
    gpath.unlink()
    got = subprocess.run(
        [sys.executable, "-m", "flbl.cli", "query", str(out), "--fail", "3",
         "--pair", "0,3"],
        check=True, env=env, capture_output=True, text=True,
    )
    assert "disconnected" in got.stdout


def test_env_override_nexact(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FLBL_NEXACT", "4")
    gpath = tmp_path / "c6.txt"
    edges = [(i, (i + 1) % 6) for i in range(6)]
    gpath.write_text("6 6\n" + "\n".join(f"{u} {v}" for u, v in edges) + "\n")
    out = tmp_path / "c6.flbl"
    code = run_cli(["build", str(gpath), "--scheme", "1", "--f", "1",
                    "--phi-mode", "exact", "-o", str(out)])
    assert code == 2


def test_edgeless_graph_scheme2_clean_error(tmp_path, capsys):
    gpath = tmp_path / "e.txt"
    gpath.write_text("2 0\n")
    out = tmp_path / "e.flbl"
    assert run_cli(["build", str(gpath), "--scheme", "2", "--f", "1",
                    "-o", str(out)]) == 3
    assert "error" in capsys.readouterr().err


def test_edgeless_graph_scheme1_works(tmp_path, capsys):
    gpath = tmp_path / "e.txt"
    gpath.write_text("3 0\n")
    out = tmp_path / "e.flbl"
    assert run_cli(["build", str(gpath), "--scheme", "1", "--f", "1",
                    "-o", str(out)]) == 0
    capsys.readouterr()
    assert run_cli(["query", str(out), "--fail", "", "--count"]) == 0
    assert capsys.readouterr().out.strip() == "3"
