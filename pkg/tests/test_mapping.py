import random

import pytest

from rtgevol import editops as eo
from rtgevol.errors import NotDefinedAt, NotReduced, RegexSyntaxError, SchemaMismatch
from rtgevol.grammar import grammar, is_ltg
from rtgevol.mapping import (SchemaMapping, apply_script, compose, identity, intermediates,
                             invert, invert_script, make_mapping, mapping_gen, parse_mapping,
                             script_cost, serialize_mapping)

from conftest import read
from oracles import random_grammar, random_script


def test_apply_golden(rtg, ltg, hospital_script):
    assert apply_script(rtg, hospital_script) == ltg


def test_inverse_golden(rtg, ltg, hospital_script, hospital_inverse_script):
    assert invert_script(hospital_script) == hospital_inverse_script
    assert apply_script(ltg, hospital_inverse_script) == rtg


def test_cost_44(rtg, hospital_script):
    assert script_cost(hospital_script, rtg) == 44
    assert make_mapping(rtg, hospital_script).cost() == 44


def test_intermediates_chain(rtg, ltg, hospital_script):
    gs = intermediates(rtg, hospital_script)
    assert len(gs) == 13 and gs[0] == rtg and gs[-1] == ltg


def test_mapping_gen_golden(rtg, ltg, hospital_script):
    m = mapping_gen(rtg)
    assert m.script == hospital_script
    assert m.target == ltg
    assert is_ltg(m.target)


def test_mapping_gen_on_ltg_is_identity(ltg):
    assert mapping_gen(ltg) == identity(ltg)


def test_mapping_gen_competing_starts():
    g = grammar({"A": ("a", "epsilon"), "B": ("a", "epsilon")}, ["A", "B"])
    m = mapping_gen(g)
    assert set(m.target.rules) == {"A"} and m.target.starts == {"A"}
    assert apply_script(m.target, invert_script(m.script)) == g


def test_mapping_gen_promotes_start():
    g = grammar({"R": ("r", "A"), "A": ("a", "epsilon"), "B": ("a", "epsilon")}, ["R", "B"])
    m = mapping_gen(g)
    assert eo.SetStart("A") in m.script
    assert m.target.starts == {"R", "A"}


def test_undefined_op_reports_index(rtg, hospital_script):
    bad = hospital_script[:3] + (eo.DelElm("Q", "A", (0, 0)),)
    with pytest.raises(NotDefinedAt) as info:
        apply_script(rtg, bad)
    assert info.value.index == 3


def test_unreduced_result_rejected(rtg):
    with pytest.raises(NotReduced):
        apply_script(rtg, [eo.InsRule("Z", "z", False)])


def test_compose(rtg, ltg, hospital_script):
    m = make_mapping(rtg, hospital_script)
    back = invert(m)
    both = compose(m, back)
    assert both.source == both.target == rtg
    assert len(both) == 24
    with pytest.raises(SchemaMismatch):
        compose(m, m)


def test_compose_with_identity(rtg, hospital_script):
    m = make_mapping(rtg, hospital_script)
    assert compose(identity(rtg), m) == m
    assert compose(m, identity(m.target)) == m


def test_invert_involution(rtg, hospital_script):
    m = make_mapping(rtg, hospital_script)
    assert invert(invert(m)) == m
    assert invert(m).check() == invert(m)


def test_check_detects_wrong_target(rtg, ltg, hospital_script):
    with pytest.raises(SchemaMismatch):
        SchemaMapping(rtg, rtg, hospital_script).check()


def test_file_round_trip(hospital_script):
    text = serialize_mapping(hospital_script, "a.rtg", "b.rtg")
    mf = parse_mapping(text)
    assert mf.script == hospital_script and (mf.source, mf.target) == ("a.rtg", "b.rtg")
    assert parse_mapping(read("hospital.map")).source == "hospital.rtg"


def test_parse_error_has_line():
    with pytest.raises(RegexSyntaxError) as info:
        parse_mapping("# header\nins_opr(H1,|,0,1)\nbogus(1)\n")
    assert info.value.lineno == 3


def test_random_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        g = random_grammar(rng)
        script, cur = random_script(rng, g, rng.randint(1, 8))
        assert apply_script(cur, invert_script(script), strict=False) == g


def test_mapping_gen_random():
    rng = random.Random(9)
    for _ in range(40):
        g = random_grammar(rng)
        m = mapping_gen(g)
        assert is_ltg(m.target)
        assert apply_script(g, m.script) == m.target
        assert apply_script(m.target, invert_script(m.script)) == g
