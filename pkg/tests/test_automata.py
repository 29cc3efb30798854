import warnings

import pytest

from tdcheck.automata import (DBA, DTA, complete, eval_context, eval_tree, is_total, member_dba,
                              member_dta, reduce, representatives, run_dba, run_dta, size)
from tdcheck.decision import associated_dta
from tdcheck.errors import AutomatonError, EmptyAutomatonWarning, IncompleteAutomatonError
from tdcheck.trees import RankedAlphabet, enumerate_trees, parse_context, parse_tree

T = parse_tree
C = parse_context


def state(A, t):
    return A.name(eval_tree(A, T(t)))


def test_eval_tree_gzigzag(gzigzag):
    assert state(gzigzag, "f(a,b)") == "p_ab"
    assert state(gzigzag, "g(f(a,b))") == "p"
    assert state(gzigzag, "g(g(f(a,b)))") == "p'"


def test_eval_tree_trap(fab, fab_completed):
    assert eval_tree(fab_completed, T("f(a,a)")) == fab_completed.trap
    assert fab_completed.name(fab_completed.trap) == "trap"
    with pytest.raises(IncompleteAutomatonError):
        eval_tree(fab, T("f(a,a)"))


@pytest.mark.parametrize("q,c,expected", [
    ("p_ab", "x", "p_ab"),
    ("p_ab", "g(x)", "p"),
    ("p", "g(x)", "p'"),
])
def test_eval_context(gzigzag, q, c, expected):
    assert gzigzag.name(eval_context(gzigzag, gzigzag.state_id(q), C(c))) == expected


def test_member_dba(gzigzag, fab_completed):
    assert member_dba(gzigzag, T("g(f(a,b))"))
    assert not member_dba(complete(gzigzag), T("g(g(f(a,b)))"))
    assert not member_dba(fab_completed, T("f(a,a)"))
    assert member_dba(fab_completed, T("f(b,a)"))


def test_language_of_gzigzag_by_enumeration(gzigzag):
    # g^n(f(x,y)): any x,y for n = 0, (a,b) for odd n, (b,a) for even n > 0
    A = complete(gzigzag)

    def expected(t):
        n = 0
        while t.label == "g":
            t, n = t.children[0], n + 1
        if t.label != "f" or any(c.label not in "ab" for c in t.children):
            return False
        pair = "".join(c.label for c in t.children)
        return n == 0 or pair == ("ab" if n % 2 else "ba")

    trees = enumerate_trees(A.alphabet, 9)
    assert sum(map(expected, trees)) > 4
    for t in trees:
        assert member_dba(A, t) == expected(t), t


def test_member_dta_on_associated_dta(gzigzag):
    B = associated_dta(gzigzag)
    assert member_dta(B, T("f(a,a)"))
    assert not member_dta(B, T("g(f(b,a))"))
    assert member_dta(B, T("g(f(a,b))"))
    assert not member_dta(B, T("a"))  # no a-transition lands in the final set


def test_member_dta_missing_root_entry():
    B = DTA(RankedAlphabet.parse("f/2,a/0"), ["s"], "s", {("s", "a"): ()})
    assert not member_dta(B, T("f(a,a)"))
    assert member_dta(B, T("a"))


def test_runs(gzigzag):
    t = T("g(f(a,b))")
    run = run_dba(gzigzag, t)
    assert {u: gzigzag.name(q) for u, q in run.items()} == {
        (): "p", (1,): "p_ab", (1, 1): "q_a", (1, 2): "q_b"}
    B = associated_dta(gzigzag)
    top = run_dta(B, t)
    assert top[()] == ("q", "p", "p_ab", "p_ba")
    assert top[(1,)] == ("p_ab", "p'")
    assert run_dta(B, T("g(f(b,a))")) is None


def test_reduce_keeps_gzigzag(gzigzag):
    assert reduce(gzigzag) is gzigzag
    assert len(representatives(gzigzag)) == 7


def test_reduce_drops_unsupported_state(gzigzag):
    extra = DBA.from_names(
        gzigzag.alphabet, gzigzag.states + ("r",), gzigzag.finals | {"r"},
        [(s, tuple(gzigzag.names[a] for a in args), gzigzag.names[t])
         for s, args, t in gzigzag.transitions()] + [("f", ("r", "r"), "r")])
    assert extra.n == 8
    assert reduce(extra) == gzigzag


def test_reduce_without_leaves_is_empty():
    A = DBA.from_names(RankedAlphabet.parse("f/2"), ["q"], ["q"], [("f", ("q", "q"), "q")])
    with pytest.warns(EmptyAutomatonWarning):
        R = reduce(A)
    assert R.states == () and R.delta == {} and R.finals == frozenset()


def test_representatives_are_smallest(gzigzag):
    reps = representatives(gzigzag)
    got = {gzigzag.name(q): str(t) for q, t in reps.items()}
    assert got == {"q_a": "a", "q_b": "b", "q": "f(a,a)", "p_ab": "f(a,b)", "p_ba": "f(b,a)",
                   "p": "g(f(a,b))", "p'": "g(f(b,a))"}
    for q, t in reps.items():
        assert eval_tree(gzigzag, t) == q


def test_complete(fab, gzigzag):
    C1 = complete(fab)
    assert C1.trap == 3 and C1.delta == fab.delta
    assert complete(C1) is C1
    G = complete(gzigzag)
    assert eval_tree(G, T("f(f(a,a),a)")) == G.trap


def test_complete_total_automaton_adds_unreachable_trap():
    A = DBA.from_names(RankedAlphabet.parse("f/2,a/0"), ["e", "o"], ["o"], {
        ("a", ()): "o", ("f", ("e", "e")): "o", ("f", ("e", "o")): "e",
        ("f", ("o", "e")): "e", ("f", ("o", "o")): "o"})
    assert is_total(A)
    B = complete(A)
    for t in enumerate_trees(A.alphabet, 5):
        assert eval_tree(B, t) != B.trap
        assert member_dba(A, t) == member_dba(B, t)


def test_trap_name_avoids_clash():
    A = DBA.from_names(RankedAlphabet.parse("a/0"), ["trap"], ["trap"], [("a", (), "trap")])
    assert complete(A).trap_name == "trap1"


def test_size(fab, gzigzag):
    assert size(fab) == 11
    assert size(gzigzag) == 29
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyAutomatonWarning)
        empty = reduce(DBA(RankedAlphabet.parse("f/2"), [], {}, []))
    assert size(empty) == 0
    assert size(complete(fab)) == 11  # the trap is not counted


def test_accessors(fab, gzigzag):
    assert gzigzag.finals == {"q", "p", "p_ab", "p_ba"}
    assert set(fab.states) == {"qa", "qb", "qf"}
    assert gzigzag.alphabet == RankedAlphabet({"f": 2, "g": 1, "a": 0, "b": 0})
    assert isinstance(gzigzag.finals, frozenset)
    with pytest.raises(AttributeError):
        gzigzag.delta = {}


def test_dba_rejects_nondeterminism_and_bad_refs():
    ab = RankedAlphabet.parse("f/2,a/0")
    with pytest.raises(AutomatonError, match="non-deterministic"):
        DBA.from_names(ab, ["p", "q"], [], [("a", (), "p"), ("a", (), "q")])
    with pytest.raises(AutomatonError, match="undeclared state"):
        DBA.from_names(ab, ["p"], [], [("a", (), "r")])
    with pytest.raises(AutomatonError, match="arity"):
        DBA(ab, ["p"], {("f", (0,)): 0}, [])
    with pytest.raises(AutomatonError, match="undeclared symbol"):
        DBA(ab, ["p"], {("g", (0,)): 0}, [])
    with pytest.raises(AutomatonError):
        DBA(ab, ["p"], {("a", ()): 1}, [])  # id 1 would be the trap


def test_dta_validation():
    ab = RankedAlphabet.parse("f/2,a/0")
    with pytest.raises(AutomatonError):
        DTA(ab, ["s"], "t", {})
    with pytest.raises(AutomatonError):
        DTA(ab, ["s"], "s", {("s", "f"): ("s",)})
    with pytest.raises(AutomatonError):
        DTA(ab, ["s"], "s", {("s", "f"): ("s", "u")})
