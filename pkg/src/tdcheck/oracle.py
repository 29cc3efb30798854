"""Brute-force checks that stay independent of the triple fixpoint.

Everything here works by enumerating trees and evaluating membership
directly: a bounded search for violations of the subtree exchange
property, bounded language comparisons against a DTA, and a seeded
random DBA generator for differential testing.
"""

from dataclasses import dataclass
import itertools
import warnings

from .automata import DBA, complete, member_dba, member_dta, reduce
from .errors import EmptyAutomatonWarning, ResourceLimitError
from .trees import (DEFAULT_ENUM_CAP, RankedAlphabet, Tree, enumerate_contexts,
                    plug, replace, trees_by_size)

DEFAULT_SEARCH_CAP = 5_000_000

_MASK = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 generator; portable, so seeds reproduce anywhere."""

    def __init__(self, seed):
        self.state = seed & _MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self):
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def below(self, n):
        return self.next() % n


@dataclass(frozen=True)
class ExchangeViolation:
    base_tree: Tree
    node: tuple
    symbol: str
    original_children: tuple
    alternative_children: tuple
    position: int
    exchanged_tree: Tree


@dataclass(frozen=True)
class GenSpec:
    """Parameters of :func:`random_dba`.

    *symbols* is a sequence of ``(name, arity)`` pairs; use
    :meth:`from_arities` to name them automatically.
    """

    seed: int
    states: int
    symbols: tuple = (("a", 0), ("b", 0), ("f", 2), ("g", 1))
    density: float = 0.7
    final_prob: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density {self.density} outside [0, 1]")
        if not 0.0 <= self.final_prob <= 1.0:
            raise ValueError(f"final probability {self.final_prob} outside [0, 1]")
        if self.states < 1:
            raise ValueError("need at least one state")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        symbols = tuple((str(s), int(k)) for s, k in self.symbols)
        RankedAlphabet(symbols)
        if not any(k == 0 for _, k in symbols):
            raise ValueError("the alphabet needs a nullary symbol")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def from_arities(cls, seed, states, arities, **kw):
        """Name nullary symbols a, b, c, ... and others f0, f1, ... in input order."""
        names = []
        leaves = iter("abcdefghijklmnopqrstuvw")
        inner = itertools.count()
        for k in arities:
            names.append((next(leaves), 0) if k == 0 else (f"f{next(inner)}", k))
        return cls(seed, states, tuple(names), **kw)

    @classmethod
    def from_json(cls, obj):
        obj = dict(obj)
        symbols = obj.pop("symbols", None)
        if isinstance(symbols, str):
            symbols = tuple(RankedAlphabet.parse(symbols).items())
        elif symbols is not None:
            symbols = tuple(tuple(s) for s in symbols)
        if "arities" in obj:
            arities = obj.pop("arities")
            return cls.from_arities(obj.pop("seed"), obj.pop("states"), arities, **obj)
        if symbols is not None:
            obj["symbols"] = symbols
        return cls(**obj)

    @property
    def alphabet(self):
        return RankedAlphabet(self.symbols)


def random_dba(spec):
    """A reduced random DBA; a deterministic function of *spec*.

    States are ``s0 .. s(n-1)``.  For every symbol (alphabetical) and every
    argument tuple (lexicographic over state indices) one uniform draw
    decides whether the entry exists (``draw < density``); an existing
    entry then draws its target.  Finally each state draws finality.
    """
    rng = SplitMix64(spec.seed)
    alphabet = spec.alphabet
    n = spec.states
    delta = {}
    for symbol, k in alphabet.items():
        for args in itertools.product(range(n), repeat=k):
            if rng.random() < spec.density:
                delta[(symbol, args)] = rng.below(n)
    finals = {q for q in range(n) if rng.random() < spec.final_prob}
    A = DBA(alphabet, [f"s{i}" for i in range(n)], delta, finals)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyAutomatonWarning)
        return reduce(A)


def _evaluable(A):
    return complete(A) if A.trap is None else A


def exchange_violation_search(A, max_tree_size, cap=DEFAULT_SEARCH_CAP):
    """First violation of the subtree exchange property among small trees.

    For every context ``c`` and every pair of trees ``f(t1..tk)``,
    ``f(s1..sk)`` such that both plugged into ``c`` are accepted and have at
    most *max_tree_size* nodes, each single-position mix is tested.
    Contexts, then pairs, then positions are visited in canonical order.
    """
    A = _evaluable(A)
    alphabet = A.alphabet
    trees = trees_by_size(alphabet, max_tree_size, DEFAULT_ENUM_CAP)
    work = 0
    for c in enumerate_contexts(alphabet, max_tree_size, DEFAULT_ENUM_CAP):
        budget = max_tree_size - c.size + 1
        accepted = {}
        for n in range(1, budget + 1):
            for r in trees[n]:
                work += 1
                if work > cap:
                    raise ResourceLimitError(f"exchange search exceeded {cap} evaluations")
                if r.children and member_dba(A, plug(c, r)):
                    accepted.setdefault(r.label, []).append(r)
        for symbol in sorted(accepted):
            group = accepted[symbol]
            for r1, r2 in itertools.product(group, repeat=2):
                if r1 == r2:
                    continue
                for i in range(len(r1.children)):
                    if r1.children[i] == r2.children[i]:
                        continue
                    kids = list(r1.children)
                    kids[i] = r2.children[i]
                    exchanged = plug(c, Tree(symbol, kids))
                    work += 1
                    if work > cap:
                        raise ResourceLimitError(f"exchange search exceeded {cap} evaluations")
                    if not member_dba(A, exchanged):
                        return ExchangeViolation(
                            base_tree=plug(c, r1),
                            node=c.hole,
                            symbol=symbol,
                            original_children=r1.children,
                            alternative_children=r2.children,
                            position=i + 1,
                            exchanged_tree=exchanged,
                        )
    return None


def bounded_language_equal(A, B, max_tree_size, cap=DEFAULT_ENUM_CAP):
    """First tree (canonical order) on which DBA *A* and DTA *B* disagree, or None."""
    A = _evaluable(A)
    for level in trees_by_size(A.alphabet, max_tree_size, cap)[1:]:
        for t in level:
            if member_dba(A, t) != member_dta(B, t):
                return t
    return None


def bounded_subset(A, B, max_tree_size, cap=DEFAULT_ENUM_CAP):
    """First tree in ``L(A) \\ L(B)`` with at most *max_tree_size* nodes, or None."""
    A = _evaluable(A)
    for level in trees_by_size(A.alphabet, max_tree_size, cap)[1:]:
        for t in level:
            if member_dba(A, t) and not member_dta(B, t):
                return t
    return None


def confirm_witness(A, witness):
    """Re-check a conflict witness by membership alone.

    True iff both accepted trees are in ``L(A)``, the violating tree is
    not, and the three trees are the same context around ``f(...)``
    differing only in the exchanged position.
    """
    A = _evaluable(A)
    w = witness
    f = w.symbol
    if len(w.left_trees) != len(w.right_trees) or not 1 <= w.position <= len(w.left_trees):
        return False
    mixed = list(w.left_trees)
    mixed[w.position - 1] = w.right_trees[w.position - 1]
    shaped = (plug(w.context, Tree(f, w.left_trees)) == w.accepted_trees[0]
              and plug(w.context, Tree(f, w.right_trees)) == w.accepted_trees[1]
              and plug(w.context, Tree(f, mixed)) == w.violating_tree)
    return (shaped
            and member_dba(A, w.accepted_trees[0])
            and member_dba(A, w.accepted_trees[1])
            and not member_dba(A, w.violating_tree))


def witness_as_violation(witness):
    """View a conflict witness as an exchange-property violation."""
    return ExchangeViolation(
        base_tree=witness.accepted_trees[0],
        node=witness.context.hole,
        symbol=witness.symbol,
        original_children=tuple(witness.left_trees),
        alternative_children=tuple(witness.right_trees),
        position=witness.position,
        exchanged_tree=witness.violating_tree,
    )


def check_violation(A, v):
    """Membership re-check of an :class:`ExchangeViolation`."""
    A = _evaluable(A)
    u = v.node
    with_orig = replace(v.base_tree, u, Tree(v.symbol, v.original_children))
    with_alt = replace(v.base_tree, u, Tree(v.symbol, v.alternative_children))
    kids = list(v.original_children)
    kids[v.position - 1] = v.alternative_children[v.position - 1]
    exchanged = replace(v.base_tree, u, Tree(v.symbol, kids))
    return (exchanged == v.exchanged_tree
            and member_dba(A, v.base_tree)
            and member_dba(A, with_orig)
            and member_dba(A, with_alt)
            and not member_dba(A, exchanged))
