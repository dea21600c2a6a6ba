"""Schema evolution for XML types written as regular tree grammars."""
from .errors import *  # noqa: F401,F403
from .trees import Tree, format_position, parse_position, to_term, from_term
from .grammar import (Grammar, grammar, normalize, reduce, competing_pairs, is_ltg,
                      union_grammars, min_tree, check_reduced, is_reduced)
from .regex import regex_to_tree, tree_to_regex, is_well_formed, match_word, min_word
from .derivation import validate, witnesses, is_valid
from .editops import apply_edit, cost, expand, invert_op, parse_op
from .mapping import (SchemaMapping, apply_script, compose, invert, make_mapping, mapping_gen,
                      script_cost)
from .corrector import correct
from .xtram import annotate, translate
from .formats import import_dtd, parse_grammar, parse_xml, serialize_grammar, serialize_xml

__version__ = "0.1.0"
