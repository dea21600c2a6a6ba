import itertools

import pytest

from rtgevol import regex as rx
from rtgevol.errors import RegexSyntaxError
from rtgevol.trees import Tree

from oracles import regex_runs, regex_words

P = rx.regex_to_tree


def test_parse_hospital_model():
    assert P("T.(Y|Co)") == rx.concat(Tree("T"), rx.choice(Tree("Y"), Tree("Co")))


def test_parse_single_and_parens():
    assert P("A") == Tree("A")
    assert P("(A)") == Tree("A")
    assert P("((A))") == Tree("A")


def test_precedence():
    assert P("A|B.C*") == rx.choice(Tree("A"), rx.concat(Tree("B"), rx.star(Tree("C"))))


def test_epsilon_keyword():
    assert P("epsilon") == rx.eps()
    assert rx.tree_to_regex(rx.eps()) == "epsilon"


def test_serialize():
    assert rx.tree_to_regex(rx.concat(Tree("T"), rx.choice(Tree("Y"), Tree("Co")))) == "T.(Y|Co)"
    assert rx.tree_to_regex(rx.star(Tree("I1"))) == "I1*"


def test_nested_choice_kept():
    t = P("(P|T)|(C|Pol)|B")
    assert len(t.children) == 3
    assert rx.tree_to_regex(t) == "(P|T)|(C|Pol)|B"


def test_unary_operator_syntax():
    t = rx.choice(rx.concat(Tree("A"), Tree("B")))
    s = rx.tree_to_regex(t)
    assert P(s) == t


@pytest.mark.parametrize("bad", ["A|", "(A", "A B", "A..B", "*", "A+B", ""])
def test_syntax_errors_carry_offset(bad):
    with pytest.raises(RegexSyntaxError) as exc:
        P(bad)
    assert exc.value.offset is not None


def test_well_formed():
    ok, v = rx.is_well_formed(Tree("hospital", (rx.star(Tree("I1")),)))
    assert ok and v is None
    ok, v = rx.is_well_formed(Tree("a", (Tree(rx.STAR, (Tree("A"), Tree("B"))),)))
    assert not ok and v.condition == "iii" and v.position == (0,)
    ok, v = rx.is_well_formed(Tree("|", (Tree("A"),)))
    assert not ok and v.condition == "i"
    ok, v = rx.is_well_formed(Tree("a", (Tree("A"), Tree("B"))))
    assert not ok and v.condition == "i"
    ok, v = rx.is_well_formed(Tree("a", (Tree(rx.CONCAT, (Tree(rx.CHOICE),)),)))
    assert not ok and v.condition == "iii" and v.position == (0, 0)


def test_match_b_in_info_model():
    ws = list(rx.match_word(P("(P|T)|(C|Pol)|B"), ["B"], offset=(0,)))
    assert ws == [((0, 2),)]


def test_match_empty_star():
    assert list(rx.match_word(P("I1*"), [])) == [()]


def test_match_duplicate_choice():
    # oracle: two distinct occurrences can consume A
    assert list(rx.match_word(P("A|A"), ["A"])) == [((0,),), ((1,),)]
    assert len(regex_runs(P("A|A"), ("A",))) == 2


def test_match_cap():
    r = P("(A|A)*")
    assert len(list(rx.match_word(r, ["A"] * 8, cap=10))) == 10
    assert len(list(rx.match_word(r, ["A"] * 8, cap=None))) == 2 ** 8


def test_match_rejects():
    assert not rx.accepts(P("S.N.V*"), ["S"])
    assert rx.accepts(P("S.N.V*"), ["S", "N", "V", "V"])


@pytest.mark.parametrize("text,word", [("S.N.V*", ("S", "N")), ("A*", ()), ("A|epsilon", ()),
                                       ("(A.B)|C", ("C",)), ("A.(B|C.D)", ("A", "B"))])
def test_min_word(text, word):
    assert rx.min_word(P(text)) == word


EXPRS = ["A", "A|B", "A.B", "A*", "(A|B)*", "A.B*|C", "(A.A)*.B", "(A|epsilon).(B|A)*",
         "A*.A*", "(A*)*", "|(A.B).C", "(A|B.C)*.(C|epsilon)", "A.(B|C)*.A"]


@pytest.mark.parametrize("text", EXPRS)
def test_round_trip(text):
    t = P(text)
    assert P(rx.tree_to_regex(t)) == t


@pytest.mark.parametrize("text", EXPRS)
def test_match_agrees_with_oracle(text):
    r = P(text)
    for n in range(5):
        for w in itertools.product("ABC", repeat=n):
            runs = set(rx.match_word(r, w, cap=None))
            assert runs == regex_runs(r, w), (text, w)
            assert bool(runs) == (w in regex_words(r, 5))


@pytest.mark.parametrize("text", EXPRS)
def test_min_word_is_shortest(text):
    r = P(text)
    w = rx.min_word(r)
    assert rx.accepts(r, w)
    assert all(len(v) >= len(w) for v in regex_words(r, 5))


def test_occurrences_preorder():
    r = P("A.(B|A)*.A")
    assert rx.occurrences(r, "A") == [(0,), (1, 0, 1), (2,)]
