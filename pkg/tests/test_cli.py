from __future__ import annotations

import json
import subprocess
import sys


from sepgraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_relation(capsys):
    code, out, _ = run(capsys, "--graph", "G3", "normalize", "--mode", "leavitt", "a*a' + b*b'")
    assert code == 0 and out == "1 * e{} |> v\n"


def test_in_q(capsys):
    code, out, _ = run(capsys, "--graph", "G3", "in-q", "v - a*a' - b*b'")
    assert code == 0
    assert out.splitlines() == ["true", "witness: 1 * e{d_ab} |> v"]
    code, out, _ = run(capsys, "--graph", "G3", "in-q", "v")
    assert out.splitlines()[0] == "false"


def test_socle_fim(capsys):
    code, out, _ = run(capsys, "socle", "--fim", "1", "--bound", "3")
    assert code == 0 and out.splitlines() == ["blocks: 1,2,3", "routes agree: yes"]


def test_socle_graph(capsys):
    code, out, _ = run(capsys, "--graph", "G4", "socle", "--bound", "3")
    assert code == 0 and out.splitlines()[-1] == "blocks: 3,3,3,3"
    code, out, _ = run(capsys, "--graph", "loop1", "socle", "--cohn", "--bound", "4")
    assert out.splitlines() == ["class {v}: size 4 (continues past bound)", "blocks: 4"]


def test_phi_bar(capsys):
    code, out, _ = run(capsys, "--graph", "G3", "phi-bar", "v - a*a' - b*b'")
    assert code == 0 and out.splitlines()[0] == "added: d_ab for block v:0 {a b}"


def test_q_basis_and_basis(capsys):
    code, out, _ = run(capsys, "--graph", "G3", "q-basis", "--bound", "0", "--measure", "tree")
    assert out.splitlines() == ["e{v \\ v@v:0} |> v", "count: 1"]
    code, out, _ = run(capsys, "--graph", "G1", "basis", "--bound", "4")
    assert out.splitlines()[-1] == "count: 4"


def test_ecb(capsys):
    code, out, _ = run(capsys, "--graph", "G2", "ecb", "--bound", "3")
    assert code == 0 and out.splitlines()[-1].startswith("found: 0; infinite neighbourhood: ")


def test_orbit_and_dot(capsys):
    code, out, _ = run(capsys, "--graph", "G4", "orbit", "{a, c}")
    assert code == 0
    assert out.splitlines()[-1] == "size: 3 (complete); trivial isotropy: yes"
    code, out, _ = run(capsys, "--graph", "G4", "orbit", "{a, c}", "--emit-dot")
    assert out.startswith("digraph orbit {") and out.rstrip().endswith("}")
    code, _, err = run(capsys, "--graph", "G3", "orbit", "{a}")
    assert code == 1 and "exits" in err


def test_fim_and_verify(capsys):
    code, out, _ = run(capsys, "fim", "--n", "2", "--bound", "2", "--samples", "50")
    assert code == 0 and out.splitlines() == ["blocks: 1,2,2", "filtration: 50 products, 0 violations"]
    code, out, _ = run(capsys, "--graph", "G5", "verify", "--samples", "50")
    assert code == 0 and out.splitlines()[-1] == "verify: pass"


def test_exit_codes(capsys):
    code, _, err = run(capsys, "--graph", "nosuch", "validate")
    assert code == 1 and "nosuch" in err
    code, _, err = run(capsys, "--graph", "G3", "normalize", "a * (b")
    assert code == 2 and err.startswith("parse error: line 1, col ")
    code, _, err = run(capsys, "--graph", "G3", "normalize", "a*c")
    assert code == 1 and "unknown vertex or edge c" in err
    code, _, err = run(capsys, "normalize", "v")
    assert code == 1 and "no graph given" in err
    code, _, _ = run(capsys, "--graph", "G3", "normalize")
    assert code == 2
    code, _, _ = run(capsys, "--graph", "G3", "bogus")
    assert code == 2


def test_validate_files(capsys, tmp_path):
    good = tmp_path / "good.sg"
    good.write_text("vertex v\nedge a v v\nedge b v v\npartition v { a } { b }\n")
    code, out, _ = run(capsys, "--graph", str(good), "validate")
    assert code == 0 and out == "ok: 1 vertices, 2 edges, 2 blocks\n"
    bad = tmp_path / "bad.sg"
    bad.write_text("vertex v\nedge a v v\npartition v { a } { a }\n")
    code, _, err = run(capsys, "--graph", str(bad), "validate")
    assert code in (1, 2) and err
    broken = tmp_path / "broken.sg"
    broken.write_text("vertex v\nedge a v\n")
    code, _, err = run(capsys, "--graph", str(broken), "validate")
    assert code == 2 and "line 2" in err


def test_json_lines(capsys):
    code, out, _ = run(capsys, "--graph", "G4", "socle", "--bound", "3", "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows[-1]["blocks"] == [3, 3, 3, 3]
    assert all(r["size"] == 3 for r in rows[:-1])


def test_deterministic_output():
    cmd = [sys.executable, "-m", "sepgraph", "--graph", "G2", "q-basis", "--bound", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.endswith(b"count: 21\n")
    cmd = [sys.executable, "-m", "sepgraph", "--graph", "G3", "--seed", "5", "verify",
           "--samples", "30"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    assert a == b
