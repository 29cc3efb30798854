"""Deterministic bottom-up (DBA) and top-down (DTA) tree automata.

States of a :class:`DBA` are interned as small integers ``0..n-1`` with a
side table of display names.  A DBA may carry an *implicit* trap state
with id ``n``: it is never stored in the transition map, every missing
lookup falls through to it and it absorbs every tuple that mentions it.
"""

import warnings

from .errors import AutomatonError, EmptyAutomatonWarning, IncompleteAutomatonError
from .trees import HOLE, NAME_RE, Context, RankedAlphabet, Tree


class DBA:
    """Deterministic bottom-up tree automaton.

    *delta* maps ``(symbol, args)`` (``args`` a tuple of state ids) to a
    state id.  Use :meth:`from_names` to build one from display names.
    """

    __slots__ = ("alphabet", "names", "delta", "final_ids", "trap", "trap_name",
                 "_index", "_by_symbol")

    def __init__(self, alphabet, names, delta, final_ids, trap_name=None):
        alphabet = RankedAlphabet(alphabet)
        names = tuple(names)
        n = len(names)
        if len(set(names)) != n:
            raise AutomatonError("duplicate state names")
        trap = n if trap_name is not None else None
        if trap_name is not None and trap_name in names:
            raise AutomatonError(f"trap name {trap_name!r} clashes with a state")
        delta = dict(delta)
        for (symbol, args), target in delta.items():
            if symbol not in alphabet:
                raise AutomatonError(f"undeclared symbol {symbol!r}")
            if len(args) != alphabet.arity(symbol):
                raise AutomatonError(f"transition for {symbol!r} has {len(args)} arguments, "
                                     f"arity is {alphabet.arity(symbol)}")
            for q in args + (target,):
                if not (0 <= q < n):
                    raise AutomatonError(f"transition {symbol}{args} -> {target} "
                                         "mentions an undeclared or trap state")
        final_ids = frozenset(final_ids)
        if not all(0 <= q < n for q in final_ids):
            raise AutomatonError("final states must be declared (and not the trap)")
        by_symbol = {s: [] for s in alphabet}
        for (symbol, args), target in sorted(delta.items()):
            by_symbol[symbol].append((args, target))
        _set = object.__setattr__
        _set(self, "alphabet", alphabet)
        _set(self, "names", names)
        _set(self, "delta", delta)
        _set(self, "final_ids", final_ids)
        _set(self, "trap", trap)
        _set(self, "trap_name", trap_name)
        _set(self, "_index", {name: i for i, name in enumerate(names)})
        _set(self, "_by_symbol", {s: tuple(v) for s, v in by_symbol.items()})

    def __setattr__(self, name, value):
        raise AttributeError("DBA is immutable")

    @classmethod
    def from_names(cls, alphabet, states, finals, transitions):
        """Build from display names.

        *transitions* is an iterable of ``(symbol, arg_names, target_name)``
        or a mapping ``{(symbol, arg_names): target_name}``.
        """
        states = tuple(states)
        for name in states:
            if not isinstance(name, str) or not NAME_RE.fullmatch(name):
                raise AutomatonError(f"invalid state name {name!r}")
        index = {name: i for i, name in enumerate(states)}

        def sid(name):
            try:
                return index[name]
            except KeyError:
                raise AutomatonError(f"undeclared state {name!r}") from None

        if hasattr(transitions, "items"):
            transitions = [(s, args, t) for (s, args), t in transitions.items()]
        delta = {}
        for symbol, args, target in transitions:
            key = (symbol, tuple(sid(a) for a in args))
            value = sid(target)
            if key in delta and delta[key] != value:
                raise AutomatonError(f"non-deterministic transitions for {symbol}{tuple(args)}")
            delta[key] = value
        return cls(alphabet, states, delta, {sid(f) for f in finals})

    # -- read-only views -------------------------------------------------

    @property
    def states(self):
        """Display names of the declared states (trap excluded), in order."""
        return self.names

    @property
    def finals(self):
        return frozenset(self.names[q] for q in self.final_ids)

    @property
    def n(self):
        return len(self.names)

    @property
    def all_ids(self):
        """State ids including the trap, when enabled."""
        return range(self.n + (self.trap is not None))

    def state_id(self, name):
        if name == self.trap_name and self.trap is not None:
            return self.trap
        return self._index[name]

    def name(self, q):
        if q == self.trap:
            return self.trap_name
        return self.names[q]

    def transitions(self, symbol=None):
        """Explicit entries as ``(symbol, args, target)``, sorted by symbol then args."""
        symbols = self.alphabet.symbols if symbol is None else (symbol,)
        for s in symbols:
            for args, target in self._by_symbol[s]:
                yield s, args, target

    def is_final(self, q):
        return q in self.final_ids

    def step(self, symbol, args):
        """One bottom-up transition, falling through to the trap when enabled."""
        trap = self.trap
        if trap is not None and trap in args:
            return trap
        q = self.delta.get((symbol, args))
        if q is None:
            if trap is None:
                raise IncompleteAutomatonError(
                    f"no transition for {symbol}({','.join(self.name(a) for a in args)})")
            return trap
        return q

    def __eq__(self, other):
        return (isinstance(other, DBA) and self.alphabet == other.alphabet
                and self.names == other.names and self.delta == other.delta
                and self.final_ids == other.final_ids and self.trap_name == other.trap_name)

    def __hash__(self):
        return hash((self.alphabet, self.names, frozenset(self.delta.items()), self.final_ids))

    def __repr__(self):
        return (f"<DBA {self.n} states, {len(self.delta)} transitions"
                f"{', trap' if self.trap is not None else ''}>")


def eval_tree(A, t):
    """The state ``A`` reaches at the root of *t*."""
    if t.label == HOLE:
        raise AutomatonError("cannot evaluate a hole without a state")
    return A.step(t.label, tuple(eval_tree(A, c) for c in t.children))


def _eval_with_hole(A, t, q):
    if t.label == HOLE:
        return q
    return A.step(t.label, tuple(_eval_with_hole(A, c, q) for c in t.children))


def eval_context(A, q, c):
    """Evaluate context *c* bottom-up with the hole already carrying state *q*."""
    if isinstance(c, Context):
        c = c.tree
    return _eval_with_hole(A, c, q)


def member_dba(A, t):
    return eval_tree(A, t) in A.final_ids


def run_dba(A, t):
    """The bottom-up run of *A* on *t* as ``{address: state}``."""
    run = {}

    def visit(node, u):
        args = tuple(visit(c, u + (i,)) for i, c in enumerate(node.children, 1))
        run[u] = A.step(node.label, args)
        return run[u]

    visit(t, ())
    return run


def representatives(A):
    """Smallest tree reaching each reachable state.

    Returns ``{state id: Tree}``; ties in size are broken by canonical
    tree order.  The keys are exactly the reachable (non-trap) states.
    """
    best = {}
    entries = list(A.transitions())
    changed = True
    while changed:
        changed = False
        for symbol, args, target in entries:
            if not all(a in best for a in args):
                continue
            current = best.get(target)
            size = 1 + sum(best[a].size for a in args)
            if current is not None and current.size < size:
                continue
            cand = Tree(symbol, [best[a] for a in args])
            if current is None or (size, cand) < (current.size, current):
                best[target] = cand
                changed = True
    return best


def reduce(A):
    """Restrict *A* to its reachable states; the language is unchanged."""
    reps = representatives(A)
    keep = [q for q in range(A.n) if q in reps]
    if not keep:
        warnings.warn("automaton has no reachable state", EmptyAutomatonWarning, stacklevel=2)
    if len(keep) == A.n:
        return A
    remap = {q: i for i, q in enumerate(keep)}
    delta = {(s, tuple(remap[a] for a in args)): remap[t]
             for (s, args), t in A.delta.items()
             if t in remap and all(a in remap for a in args)}
    return DBA(A.alphabet, [A.names[q] for q in keep], delta,
               {remap[q] for q in A.final_ids if q in remap}, A.trap_name)


def fresh_name(taken, base="trap"):
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def complete(A):
    """Enable an implicit trap state; no transitions are materialized.

    A no-op when the trap is already enabled.
    """
    if A.trap is not None:
        return A
    return DBA(A.alphabet, A.names, A.delta, A.final_ids, fresh_name(set(A.names)))


def size(A):
    """``|Q| + sum(k + 1)`` over the explicit (non-trap) transitions."""
    return A.n + sum(len(args) + 1 for (_, args) in A.delta)


def is_total(A):
    """True iff every ``(symbol, args)`` over declared states has an explicit entry."""
    expected = sum(A.n ** k for _, k in A.alphabet.items())
    return len(A.delta) == expected


class DTA:
    """Deterministic top-down tree automaton with a partial transition map.

    ``delta[(state, symbol)]`` is a tuple of ``arity(symbol)`` states; a
    nullary symbol is accepted at a leaf iff its entry is present (with
    value ``()``).  A tree is accepted iff a complete run exists.
    """

    __slots__ = ("alphabet", "states", "initial", "delta")

    def __init__(self, alphabet, states, initial, delta):
        alphabet = RankedAlphabet(alphabet)
        states = tuple(states)
        known = set(states)
        if len(known) != len(states):
            raise AutomatonError("duplicate DTA states")
        if initial not in known:
            raise AutomatonError(f"initial state {initial!r} is not a declared state")
        delta = {k: tuple(v) for k, v in delta.items()}
        for (q, symbol), targets in delta.items():
            if q not in known:
                raise AutomatonError(f"undeclared DTA state {q!r}")
            if symbol not in alphabet:
                raise AutomatonError(f"undeclared symbol {symbol!r}")
            if len(targets) != alphabet.arity(symbol):
                raise AutomatonError(f"transition ({q!r}, {symbol}) has {len(targets)} "
                                     f"targets, arity is {alphabet.arity(symbol)}")
            for p in targets:
                if p not in known:
                    raise AutomatonError(f"undeclared DTA state {p!r}")
        _set = object.__setattr__
        _set(self, "alphabet", alphabet)
        _set(self, "states", states)
        _set(self, "initial", initial)
        _set(self, "delta", delta)

    def __setattr__(self, name, value):
        raise AttributeError("DTA is immutable")

    def __eq__(self, other):
        return (isinstance(other, DTA) and self.alphabet == other.alphabet
                and set(self.states) == set(other.states) and self.initial == other.initial
                and self.delta == other.delta)

    def __hash__(self):
        return hash((self.alphabet, self.initial, frozenset(self.delta.items())))

    def __repr__(self):
        return f"<DTA {len(self.states)} states, {len(self.delta)} transitions>"


def run_dta(B, t, state=None):
    """The top-down run as ``{address: state}``, or ``None`` if none exists."""
    run = {}
    stack = [((), t, B.initial if state is None else state)]
    while stack:
        u, node, q = stack.pop()
        targets = B.delta.get((q, node.label))
        if targets is None:
            return None
        run[u] = q
        for i, (child, p) in enumerate(zip(node.children, targets), 1):
            stack.append((u + (i,), child, p))
    return run


def member_dta(B, t):
    stack = [(t, B.initial)]
    delta = B.delta
    while stack:
        node, q = stack.pop()
        targets = delta.get((q, node.label))
        if targets is None:
            return False
        stack.extend(zip(node.children, targets))
    return True
