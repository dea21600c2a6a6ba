import io
import os
import shutil

import pytest

from rtgevol.cli import main
from rtgevol.formats import parse_grammar, parse_xml
from rtgevol.mapping import parse_mapping
from rtgevol.trees import to_term

from conftest import data_path, read


@pytest.fixture
def work(tmp_path):
    for name in os.listdir(data_path()):
        src = data_path(name)
        if os.path.isfile(src):
            shutil.copy(src, tmp_path / name)
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_union(work, rtg):
    out = work / "u.rtg"
    assert run("union", work / "patient.dtd", work / "insurance.dtd", work / "billing.dtd",
               "-o", out) == 0
    g = parse_grammar(out.read_text())
    assert len(g.rules) == len(rtg.rules) and len(g.starts) == 3


def test_genmap(work, capsys, ltg, hospital_script):
    assert run("genmap", work / "hospital.rtg", "-o", work / "m.map", "--target", work / "t.ltg") == 0
    assert "12 operations, cost 44" in capsys.readouterr().err
    mf = parse_mapping((work / "m.map").read_text())
    assert mf.script == hospital_script
    assert (mf.source, mf.target) == ("hospital.rtg", "t.ltg")
    assert parse_grammar((work / "t.ltg").read_text()) == ltg


def test_apply_and_invert(work, rtg, ltg):
    assert run("apply", work / "hospital.rtg", work / "hospital.map", "-o", work / "a.ltg") == 0
    assert parse_grammar((work / "a.ltg").read_text()) == ltg
    assert run("invert", work / "hospital.map", "-o", work / "inv.map") == 0
    assert (work / "inv.map").read_text() == read("inverse.map")
    assert run("apply", work / "hospital.ltg", work / "inv.map", "-o", work / "b.rtg") == 0
    assert parse_grammar((work / "b.rtg").read_text()) == rtg


def test_compose(work):
    assert run("compose", work / "hospital.map", work / "inverse.map", "-o", work / "c.map") == 0
    mf = parse_mapping((work / "c.map").read_text())
    assert len(mf.script) == 24 and mf.source == mf.target == "hospital.rtg"
    assert run("compose", work / "hospital.map", work / "hospital.map", "-o", work / "x.map") == 3


def test_validate(work, capsys):
    assert run("validate", work / "fig3a.xml", work / "hospital.ltg") == 0
    assert run("validate", work / "fig3b.xml", work / "hospital.ltg", "--witness") == 0
    out = capsys.readouterr().out
    assert "(1.0, B^0.2)" in out
    assert run("validate", work / "fig3b.xml", work / "hospital.rtg") == 3


def test_correct(work, capsys):
    (work / "d.xml").write_text("<info><bill><SSN/><date/></bill></info>")
    assert run("correct", work / "d.xml", work / "hospital.ltg", "--at", "0",
               "--model", "(P|T)|(C|Pol)", "--th", 2, "--all") == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert run("correct", work / "d.xml", work / "hospital.ltg", "--nt", "P", "--th", 0) == 4


def test_translate_all_and_best(work, capsys):
    assert run("translate", work / "fig3b.xml", work / "inverse.map", "--th", 5, "--all") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(ln.startswith("5\t") for ln in lines)
    assert run("translate", work / "fig3b.xml", work / "inverse.map", "--th", 5, "--best",
               "-o", work / "best.xml") == 0
    best = parse_xml((work / "best.xml").read_text())
    assert lines[0] == "5\t" + to_term(best)


def test_translate_interactive(work, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("3\n9\nx\n3\n" * 8))
    out = work / "i.xml"
    assert run("translate", work / "fig3b.xml", work / "inverse.map", "--th", 5,
               "--interactive", "-o", out) == 0
    assert "candidates" in capsys.readouterr().err
    assert (work / "i.xml.trace").exists()
    assert parse_xml(out.read_text()).label == "hospital"


def test_translate_no_solution(work):
    assert run("translate", work / "fig3b.xml", work / "inverse.map", "--th", 1) == 4


def test_exit_codes(work, capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    (work / "bad.rtg").write_text("start: A\nA -> a [B.(]\n")
    assert run("validate", work / "fig3a.xml", work / "bad.rtg") == 2
    (work / "bad.xml").write_text("<a><b></a>")
    assert run("validate", work / "bad.xml", work / "hospital.ltg") == 2
    assert run("validate", work / "missing.xml", work / "hospital.ltg") == 1
    assert run("translate", work / "fig3b.xml", work / "inverse.map", "--th", -1) == 1
