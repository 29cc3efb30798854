"""Decide whether a regular tree language given by a deterministic
bottom-up tree automaton is recognizable top-down deterministically."""

from .automata import (DBA, DTA, complete, eval_context, eval_tree, member_dba,
                       member_dta, reduce, representatives, size)
from .decision import (ConflictWitness, Decision, analyze, associated_dta, close_triples,
                       explain, find_conflict, is_top_down_deterministic, seed_triples)
from .errors import (AutomatonError, IncompleteAutomatonError, ParseError,
                     ResourceLimitError)
from .formats import parse_dba, parse_dta, render_dba, render_dta
from .trees import (Context, RankedAlphabet, Tree, enumerate_contexts, enumerate_trees,
                    nodes, parse_context, parse_tree, plug, plug_context, validate_tree)

__version__ = "0.1.0"
