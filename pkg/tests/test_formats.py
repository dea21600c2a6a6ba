import pytest

from rtgevol import regex as rx
from rtgevol.errors import RegexSyntaxError, UnsupportedFeature
from rtgevol.formats import import_dtd, parse_grammar, parse_xml, serialize_grammar, serialize_xml
from rtgevol.grammar import is_ltg
from rtgevol.trees import from_term

from conftest import read


def test_patient_dtd(service_grammars):
    g = service_grammars[0]
    assert g.starts == {"Hospital"}
    assert g.rules["Patient"] == ("patient", rx.regex_to_tree("SSN.Pname.VisitInfo*"))
    assert g.rules["SSN"] == ("SSN", rx.eps())
    assert is_ltg(g)


def test_pcdata_and_empty():
    g = import_dtd("<!ELEMENT a (b, c)>\n<!ELEMENT b (#PCDATA)>\n<!ELEMENT c EMPTY>")
    assert g.reg("B") == rx.eps() and g.reg("C") == rx.eps()
    assert g.starts == {"A"}


def test_name_collision():
    g = import_dtd("<!ELEMENT a (A*)>\n<!ELEMENT A EMPTY>")
    assert g.rules["A"][0] == "a" and g.rules["A_2"][0] == "A"


def test_comments_ignored():
    g = import_dtd("<!-- <!ATTLIST x y CDATA #IMPLIED> -->\n<!ELEMENT a EMPTY>")
    assert set(g.rules) == {"A"}


@pytest.mark.parametrize("text", [
    "<!ELEMENT a (b+)>", "<!ELEMENT a (b?)>", "<!ELEMENT a ANY>",
    "<!ELEMENT a (#PCDATA|b)*>", "<!ELEMENT a EMPTY>\n<!ATTLIST a id CDATA #IMPLIED>",
])
def test_unsupported(text):
    with pytest.raises(UnsupportedFeature):
        import_dtd(text)


@pytest.mark.parametrize("text", ["<!ELEMENT a (b,>", "<!ELEMENT a>", "", "<!ELEMENT a (b))>"])
def test_dtd_syntax_errors(text):
    with pytest.raises(RegexSyntaxError):
        import_dtd(text)


def test_grammar_round_trip(rtg, ltg):
    for g in (rtg, ltg):
        assert parse_grammar(serialize_grammar(g)) == g


def test_ltg_file_layout(ltg):
    lines = serialize_grammar(ltg).splitlines()
    assert lines[0] == "start: H1"
    structural = [ln for ln in lines[1:] if not ln.endswith("[epsilon]")]
    assert len(structural) == 10
    assert "H1 -> hospital [I1*|I1*|I1*]" in lines


def test_grammar_syntax_error_position():
    with pytest.raises(RegexSyntaxError) as info:
        parse_grammar("start: A\nA -> a [B.(C]\n")
    assert info.value.lineno == 2 and info.value.offset is not None


def test_bad_rule_line():
    with pytest.raises(RegexSyntaxError):
        parse_grammar("A = a[B]")


def test_xml_round_trip(fig3):
    for t in fig3.values():
        assert parse_xml(serialize_xml(t)) == t
    assert serialize_xml(fig3["c"]) == read("fig3c.xml")


def test_xml_drops_text_and_attributes():
    t = parse_xml('<a x="1">hello<b>there</b><c/></a>')
    assert t == from_term("a(b,c)")
