import pytest

from rtgevol import regex as rx
from rtgevol.errors import ConflictingTerminal, EmptyLanguage, NotReduced, Unproductive
from rtgevol.grammar import (Grammar, check_reduced, competing_pairs, grammar, is_ltg,
                             is_reduced, min_tree, normalize, reduce, rename, union_grammars)
from rtgevol.trees import Tree, from_term

from oracles import language, tree_language

P = rx.regex_to_tree

FIG4_NAMES = {
    "Hospital": "H1", "Hospital_2": "H2", "Hospital_3": "H3", "Info": "I1", "Info_2": "I2",
    "Info_3": "I3", "Patient": "P", "VisitInfo": "V", "Treatment": "T", "Procedure": "PR",
    "Cover": "C", "Policy": "Pol", "Bill": "B", "Item": "It", "SSN": "S", "Pname": "N",
    "TrId": "Id", "Date": "D", "Tname": "TN", "Plname": "PN", "Price": "PZ",
}


def test_normalize_merges():
    g = normalize([("H", "hospital", P("I*")), ("H", "hospital", P("J*"))], ["H"])
    assert g.reg("H") == P("I*|J*")


def test_normalize_identity(rtg):
    assert normalize([(x, a, b) for x, (a, b) in rtg.rules.items()], rtg.starts) == rtg


def test_normalize_conflict():
    with pytest.raises(ConflictingTerminal):
        normalize([("X", "a", P("A")), ("X", "b", P("B"))])


def test_sets_derived_from_rules(rtg):
    assert "PZ" in rtg.nonterminals and "price" in rtg.terminals
    assert len(rtg.nonterminals) == 21


def test_reduce_keeps_fig4(rtg):
    assert reduce(rtg) == rtg
    assert is_reduced(rtg)


def test_reduce_drops_unreachable():
    g = grammar({"A": ("a", "epsilon"), "Z": ("z", "epsilon")}, ["A"])
    assert set(reduce(g).rules) == {"A"}
    with pytest.raises(NotReduced):
        check_reduced(g)


def test_reduce_empty_language():
    with pytest.raises(EmptyLanguage):
        reduce(grammar({"S": ("a", "S")}, ["S"]))


def test_reduce_prunes_unproductive_alternative():
    g = grammar({"A": ("a", "B|C"), "B": ("b", "B"), "C": ("c", "epsilon")}, ["A"])
    r = reduce(g)
    assert set(r.rules) == {"A", "C"}
    # same language up to size 4, by enumeration
    assert language(r, 4) == language(g, 4)


def test_competing_pairs(rtg, ltg):
    assert competing_pairs(rtg) == {"hospital": ("H1", "H2", "H3"), "info": ("I1", "I2", "I3")}
    assert competing_pairs(ltg) == {}
    assert competing_pairs(grammar({"A": ("a", "epsilon")}, ["A"])) == {}


def test_is_ltg(rtg, ltg):
    assert not is_ltg(rtg)
    assert is_ltg(ltg)
    assert is_ltg(Grammar({}, frozenset()))


def test_union_of_services_is_fig4(service_grammars, rtg):
    u = union_grammars(service_grammars)
    assert rename(u, FIG4_NAMES) == rtg


def test_union_singleton(rtg):
    assert union_grammars([rtg]) == rtg


def test_union_renames_clash():
    g1 = grammar({"X": ("a", "epsilon")}, ["X"])
    g2 = grammar({"X": ("b", "epsilon")}, ["X"])
    u = union_grammars([g1, g2])
    assert u.rules == {"X": ("a", rx.eps()), "X_2": ("b", rx.eps())}
    assert u.starts == {"X", "X_2"}


def test_union_shares_identical_closures():
    g1 = grammar({"R": ("r", "L*"), "L": ("l", "epsilon")}, ["R"])
    g2 = grammar({"R": ("r", "L.L"), "L": ("l", "epsilon")}, ["R"])
    u = union_grammars([g1, g2])
    assert set(u.rules) == {"R", "R_2", "L"}


def test_union_preserves_membership(service_grammars):
    u = union_grammars(service_grammars)
    for g in service_grammars:
        assert language(g, 7) <= language(u, 7)


def test_min_tree(ltg):
    assert min_tree(ltg, "PR") == Tree("procedure")
    assert min_tree(ltg, "V") == from_term("visitInfo(trId,date)")
    assert min_tree(grammar({"A": ("a", "epsilon")}, ["A"]), "A") == Tree("a")


def test_min_tree_matches_enumeration(ltg):
    lang = tree_language(ltg, 8)
    for x in ltg.rules:
        smallest = min(lang[x], key=lambda t: (t.size(), t.preorder_labels()))
        assert min_tree(ltg, x).size() == smallest.size()
        assert min_tree(ltg, x).preorder_labels() == smallest.preorder_labels()


def test_min_tree_unproductive():
    g = Grammar({"S": ("a", P("S"))}, frozenset({"S"}))
    with pytest.raises(Unproductive):
        min_tree(g, "S")
