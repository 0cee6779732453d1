import json
from fractions import Fraction

import pytest

from autoreal import artifacts
from autoreal.cli import main, parse_rational
from autoreal.pwl import tooth

F = Fraction


def run(*argv) -> int:
    return main(list(argv))


def test_parse_rational():
    assert parse_rational("3/8") == F(3, 8)
    assert parse_rational("0.011") == F(3, 8)
    assert parse_rational("1") == 1
    with pytest.raises(ValueError):
        parse_rational("0.02")


def test_build_and_roundtrip(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("build", "--corpus", "tooth:1/4,1/2,1/8", "-o", str(out)) == 0
    art = artifacts.load(str(out))
    assert art.kind == "pwl"
    assert art.obj == tooth(F(1, 4), F(1, 2), F(1, 8))
    # artifacts re-read identically
    art.save(str(out))
    again = artifacts.load(str(out))
    assert again.obj == art.obj and again.provenance == art.provenance


def test_build_pwl_spec(tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps(tooth(F(1, 4), F(1, 2), F(1, 8)).to_json()))
    out = tmp_path / "g.json"
    assert run("build", "--pwl", str(spec), "-o", str(out)) == 0
    assert artifacts.load(str(out)).kind == "pwl"


def test_build_unknown_corpus(tmp_path):
    assert run("build", "--corpus", "nonsense", "-o", str(tmp_path / "x")) == 2


def test_full_chain_and_eval(tmp_path, capsys):
    t = tmp_path / "t.json"
    tb = tmp_path / "tb.json"
    td = tmp_path / "td.json"
    tf = tmp_path / "tf.json"
    ts = tmp_path / "ts.json"
    assert run("build", "--corpus", "constant:0", "-o", str(t)) == 0
    assert run("convert", str(t), "--to", "buchi", "--normalize", "-o", str(tb)) == 0
    assert run("convert", str(tb), "--to", "detbuchi", "-o", str(td)) == 0
    assert run("convert", str(td), "--to", "fst", "-o", str(tf)) == 0
    assert run("convert", str(tf), "--to", "det-signed", "-o", str(ts)) == 0
    capsys.readouterr()
    assert run("eval", str(ts), "--x", "1/3", "--exact") == 0
    assert capsys.readouterr().out.strip() == "0"
    assert run("eval", str(t), "--x", "1/3") == 0
    assert capsys.readouterr().out.strip() == "0"
    # the converted machine carries provenance through the chain
    art = artifacts.load(str(ts))
    assert art.provenance.get("normalized") is True
    assert art.provenance.get("construction") == "adet"
    assert "delay" in art.provenance


def test_illegal_edge(tmp_path, capsys):
    t = tmp_path / "t.json"
    run("build", "--corpus", "identity-pwl", "-o", str(t))
    assert run("convert", str(t), "--to", "det-signed", "-o", "/dev/null") == 2
    err = capsys.readouterr().err
    assert "legal edges" in err


def test_check_equiv_and_exit_codes(tmp_path, capsys):
    t = tmp_path / "t.json"
    tb = tmp_path / "tb.json"
    td = tmp_path / "td.json"
    tf = tmp_path / "tf.json"
    ts = tmp_path / "ts.json"
    run("build", "--corpus", "tooth:1/4,1/2,1/8", "-o", str(t))
    run("convert", str(t), "--to", "buchi", "--normalize", "-o", str(tb))
    run("convert", str(tb), "--to", "detbuchi", "-o", str(td))
    run("convert", str(td), "--to", "fst", "-o", str(tf))
    run("convert", str(tf), "--to", "det-signed", "-o", str(ts))
    capsys.readouterr()
    assert run("check", "--equiv", str(ts), str(t), "--depth", "5",
               "--tol", "1/256") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and report["max_deviation"] == "0"
    assert run("check", "--invariants", str(ts), "--depth", "4") == 0
    assert run("check", "--rational", str(ts), "--max-den", "8") == 0
    assert run("check", "--lipschitz", str(ts), "--depth", "5",
               "--bound", "1") == 0
    assert run("check", "--obstruction", "fz-cofinite", "--budget", "6") == 0
    assert run("check", "--obstruction", "fz:3", "--budget", "8") == 1


def test_eval_graph_lookup(tmp_path, capsys):
    t = tmp_path / "c.json"
    tb = tmp_path / "cb.json"
    td = tmp_path / "cd.json"
    run("build", "--corpus", "constant:0", "-o", str(t))
    run("convert", str(t), "--to", "buchi", "--normalize", "-o", str(tb))
    run("convert", str(tb), "--to", "detbuchi", "-o", str(td))
    capsys.readouterr()
    assert run("eval", str(td), "--x", "1/2", "--graph-lookup",
               "--digits", "6") == 0
    out = capsys.readouterr().out
    assert out.split()[0][:6] in ("010011", "010100")  # a rep prefix of 5/16


def test_export_dot(tmp_path, capsys):
    b = tmp_path / "b.json"
    run("build", "--corpus", "step", "-o", str(b))
    capsys.readouterr()
    assert run("export-dot", str(b)) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph") and "doublecircle" in dot

    c = tmp_path / "c.json"
    run("build", "--corpus", "counterexample-fst", "-o", str(c))
    capsys.readouterr()
    assert run("export-dot", str(c)) == 0
    assert "/" in capsys.readouterr().out  # input/output edge labels

    t = tmp_path / "t.json"
    run("build", "--corpus", "identity-pwl", "-o", str(t))
    assert run("export-dot", str(t)) == 2


def test_fst_artifact_roundtrip(tmp_path):
    c = tmp_path / "c.json"
    run("build", "--corpus", "counterexample-fst", "-o", str(c))
    art = artifacts.load(str(c))
    from autoreal.corpus import counterexample_transducer

    assert art.obj == counterexample_transducer()
