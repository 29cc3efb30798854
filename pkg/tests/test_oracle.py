import pytest

from tdcheck.automata import DBA, DTA, member_dba
from tdcheck.decision import analyze, associated_dta
from tdcheck.errors import ResourceLimitError
from tdcheck.oracle import (GenSpec, SplitMix64, bounded_language_equal, bounded_subset,
                            check_violation, exchange_violation_search, random_dba,
                            witness_as_violation)
from tdcheck.trees import RankedAlphabet, parse_tree

T = parse_tree


def test_splitmix_reference_values():
    # published first outputs of splitmix64 seeded with 0
    g = SplitMix64(0)
    assert [g.next() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    r = SplitMix64(1)
    assert all(0.0 <= r.random() < 1.0 for _ in range(1000))


def test_exchange_search_fab(fab):
    v = exchange_violation_search(fab, 3)
    assert v is not None
    assert v.base_tree == T("f(a,b)") and v.node == ()
    assert v.alternative_children == (T("b"), T("a"))
    assert v.position == 1 and v.exchanged_tree == T("f(b,b)")
    assert check_violation(fab, v)


def test_exchange_search_gzigzag(gzigzag):
    assert exchange_violation_search(gzigzag, 5) is None


def test_exchange_search_single_tree():
    A = DBA.from_names(RankedAlphabet.parse("a/0,f/2"), ["q"], ["q"], [("a", (), "q")])
    for bound in (1, 3, 5):
        assert exchange_violation_search(A, bound) is None


def test_exchange_search_cap(gzigzag):
    with pytest.raises(ResourceLimitError):
        exchange_violation_search(gzigzag, 7, cap=100)


def test_bounded_equal(gzigzag, fab):
    assert bounded_language_equal(gzigzag, associated_dta(gzigzag), 7) is None
    assert bounded_language_equal(fab, associated_dta(fab), 3) == T("f(a,a)")


def test_monadic_chain_as_dta():
    # even number of g above a
    ab = RankedAlphabet.parse("a/0,g/1")
    A = DBA.from_names(ab, ["e", "o"], ["e"],
                       [("a", (), "e"), ("g", ("e",), "o"), ("g", ("o",), "e")])
    B = DTA(ab, ["E", "O"], "E", {("E", "a"): (), ("E", "g"): ("O",), ("O", "g"): ("E",)})
    assert bounded_language_equal(A, B, 5) is None
    assert member_dba(A, T("g(g(a))")) and not member_dba(A, T("g(a)"))


def test_bounded_subset(gzigzag, fab):
    assert bounded_subset(fab, associated_dta(fab), 3) is None
    assert bounded_subset(gzigzag, associated_dta(gzigzag), 7) is None
    empty = DTA(fab.alphabet, ["s"], "s", {})
    assert bounded_subset(fab, empty, 3) == T("f(a,b)")


def test_random_dba_deterministic():
    spec = GenSpec(7, 3, (("f", 2), ("a", 0)), density=0.8)
    A, B = random_dba(spec), random_dba(spec)
    assert A == B and A.delta == B.delta and A.finals == B.finals


def test_random_dba_density_extremes():
    full = random_dba(GenSpec(3, 3, density=1.0))
    assert full.n == 3
    assert len(full.delta) == 2 + 9 + 3  # a, b, f over 3x3, g over 3
    empty = random_dba(GenSpec(3, 3, density=0.0))
    assert empty.n == 0 and empty.delta == {}


def test_random_dba_seeds_differ():
    seen = {tuple(sorted(random_dba(GenSpec(s, 3)).delta.items())) for s in range(20)}
    assert len(seen) > 10


@pytest.mark.parametrize("kw", [
    {"density": 1.5}, {"final_prob": -0.1}, {"states": 0},
    {"symbols": (("f", 2),)}, {"seed": 1 << 64}])
def test_genspec_validation(kw):
    args = {"seed": 0, "states": 2, **kw}
    with pytest.raises(Exception):
        GenSpec(**args)


def test_genspec_from_json():
    g = GenSpec.from_json({"seed": 1, "states": 2, "arities": [2, 0, 0]})
    assert g.symbols == (("f0", 2), ("a", 0), ("b", 0))
    g = GenSpec.from_json({"seed": 1, "states": 2, "symbols": "f/2,a/0", "density": 0.5})
    assert g.alphabet == RankedAlphabet.parse("a/0,f/2") and g.density == 0.5


def test_witness_is_violation(fab):
    v = witness_as_violation(analyze(fab).witness)
    assert check_violation(fab, v)
