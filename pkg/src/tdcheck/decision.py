"""Deciding whether a DBA language is deterministic top-down.

The procedure works on the reduced, trap-completed automaton.  It
collects *seed* triples ``(q, q', q'')`` produced by two transitions of a
symbol of arity >= 2 and the single-position mix of their argument
tuples, closes them under one-symbol contexts, and reports a conflict
when some closed triple lands in ``F x F x (Q \\ F)``.  Triples whose third
component equals the first or second, or whose first or second
component is the trap, can never become conflicts and are dropped.
"""

from collections import deque
from dataclasses import dataclass, field
import warnings

import numpy as np

from .automata import DTA, complete, reduce, representatives, size
from .errors import EmptyAutomatonWarning, ResourceLimitError
from .trees import TRIVIAL_CONTEXT, Tree, one_symbol_context, plug, plug_context

DEFAULT_DTA_STATE_CAP = 10 ** 6
_CHUNK = 1 << 21       # max cells per vectorized block
_DENSE_LIMIT = 1 << 26  # visited-set bitmap up to this many triple keys


@dataclass(frozen=True)
class Seed:
    symbol: str
    left: tuple
    right: tuple
    position: int  # 1-based


@dataclass(frozen=True)
class Step:
    parent: tuple
    symbol: str
    position: int  # 1-based slot that carries the parent's states
    args: tuple    # the explicit transition's arguments; args[position-1] is parent[0]


class Triple:
    """A state triple ``(q, q', q'')`` with the provenance that produced it.

    Equality and hashing ignore provenance.
    """

    __slots__ = ("first", "second", "third", "provenance")

    def __init__(self, first, second, third, provenance=None):
        self.first = first
        self.second = second
        self.third = third
        self.provenance = provenance

    @property
    def key(self):
        return (self.first, self.second, self.third)

    def __eq__(self, other):
        return isinstance(other, Triple) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Triple{self.key}"


@dataclass(frozen=True)
class ConflictWitness:
    triple: tuple            # state names (q, q', q'')
    symbol: str
    position: int
    context: object          # Context
    left_trees: tuple
    right_trees: tuple
    accepted_trees: tuple    # (c[f(left)], c[f(right)])
    violating_tree: Tree     # c[f(left with position <- right)]
    trail: tuple = ()        # ((q, q', q''), via) from the seed outwards

    @property
    def exchanged_subtree(self):
        kids = list(self.left_trees)
        kids[self.position - 1] = self.right_trees[self.position - 1]
        return Tree(self.symbol, kids)


@dataclass(frozen=True)
class Decision:
    answer: bool
    witness: object = None
    stats: dict = field(default_factory=dict)
    notes: tuple = ()


def _prepared(A):
    """Reduce, then complete; also return the per-state representative trees."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyAutomatonWarning)
        R = reduce(A)
    return complete(R), representatives(R)


def _require_trap(A):
    if A.trap is None:
        raise ValueError("the automaton must be trap-completed (see automata.complete)")


class _Columns:
    """Every one-symbol context ``f(.., x at j, ..)`` that occurs in an explicit
    transition, as a row of a lookup table ``state -> target`` (trap default)."""

    def __init__(self, A):
        self.trap = A.trap
        self.index = {}
        self.rows = []
        for symbol, args, _ in A.transitions():
            for j in range(len(args)):
                key = (symbol, j, args[:j] + args[j + 1:])
                if key not in self.index:
                    self.index[key] = len(self.rows)
                    self.rows.append(key)
        table = np.full((len(self.rows), A.n + 1), A.trap, dtype=np.int32)
        for symbol, args, target in A.transitions():
            for j in range(len(args)):
                table[self.index[(symbol, j, args[:j] + args[j + 1:])], args[j]] = target
        self.table = table
        self.by_state = np.ascontiguousarray(table.T)  # [state, row]

    def step(self, row, q):
        """Provenance of moving a triple with first component *q* through *row*."""
        symbol, j, side = self.rows[row]
        return Step(None, symbol, j + 1, side[:j] + (q,) + side[j:])


class _Visited:
    def __init__(self, N):
        self.dense = N ** 3 <= _DENSE_LIMIT
        if self.dense:
            self.bits = np.zeros(N ** 3, dtype=bool)
        else:
            self.keys = np.empty(0, dtype=np.int64)

    def fresh(self, keys):
        """Positions in *keys* of unseen keys, first occurrence only, in order."""
        if self.dense:
            pos = np.flatnonzero(~self.bits[keys])
        else:
            pos = np.flatnonzero(~np.isin(keys, self.keys))
        _, first = np.unique(keys[pos], return_index=True)
        first.sort()
        return pos[first]

    def add(self, keys):
        if self.dense:
            self.bits[keys] = True
        else:
            self.keys = np.union1d(self.keys, keys)


def _decode(keys, N):
    keys = keys.tolist()
    return [(k // (N * N), (k // N) % N, k % N) for k in keys]


def seed_triples(A):
    """Triples from pairs of same-symbol transitions and a one-position mix.

    *A* must be reduced and trap-completed.  For transitions
    ``f(p) -> q`` and ``f(p') -> q'`` of a symbol of arity >= 2 and a
    position ``j``, the triple is ``(q, q', delta(p with p'_j at j))``.
    Returns ``{(q, q', q''): Triple}`` in a deterministic order; each key
    keeps the first provenance found.

    Pairs of transitions are never enumerated.  With ``r = p'_j`` the
    triple only depends on ``(q, q'', r)`` and on ``(r, q')``, so the
    seeds of one ``(f, j)`` are a boolean matrix product of those two
    relations.
    """
    _require_trap(A)
    cols = _Columns(A)
    n = A.n
    N = n + 1
    seen = _Visited(N)
    out = {}
    for symbol, k in A.alphabet.items():
        if k < 2:
            continue
        entries = [(args, target) for _, args, target in A.transitions(symbol)]
        if not entries:
            continue
        m = len(entries)
        slots = np.array([args for args, _ in entries], dtype=np.int64)
        targets = np.array([t for _, t in entries], dtype=np.int64)
        for j in range(k):
            rows = np.array([cols.index[(symbol, j, args[:j] + args[j + 1:])]
                             for args, _ in entries], dtype=np.int64)
            # left relation: (q * N + q'') * n + r -> first entry index
            step = max(1, _CHUNK // n)
            flats, owners = [], []
            for lo in range(0, m, step):
                hi = min(m, lo + step)
                mixed = cols.table[rows[lo:hi], :n].astype(np.int64)
                flat = ((targets[lo:hi, None] * N + mixed) * n + np.arange(n)).ravel()
                vals, first = np.unique(flat, return_index=True)
                flats.append(vals)
                owners.append(first // n + lo)
            left, first = np.unique(np.concatenate(flats), return_index=True)
            left_owner = np.concatenate(owners)[first]
            pair, r_of = np.divmod(left, n)
            q_of, q2_of = np.divmod(pair, N)
            keep = q_of != q2_of
            pair, r_of, left_owner = pair[keep], r_of[keep], left_owner[keep]
            # right relation: r -> q'
            right, first = np.unique(slots[:, j] * N + targets, return_index=True)
            right_owner = np.full((n, N), -1, dtype=np.int64)
            right_owner[right // N, right % N] = first
            right_has = (right_owner >= 0).astype(np.float32)
            groups, starts = np.unique(pair, return_index=True)
            bounds = np.append(starts, pair.size)
            block = max(1, _CHUNK // max(n, N))
            for g0 in range(0, groups.size, block):
                g1 = min(groups.size, g0 + block)
                lo, hi = bounds[g0], bounds[g1]
                local = np.repeat(np.arange(g1 - g0), np.diff(bounds[g0:g1 + 1]))
                has = np.zeros((g1 - g0, n), dtype=np.float32)
                has[local, r_of[lo:hi]] = 1.0
                owner = np.full((g1 - g0, n), m, dtype=np.int64)
                owner[local, r_of[lo:hi]] = left_owner[lo:hi]
                g_pair = groups[g0:g1]
                q, q2 = np.divmod(g_pair, N)
                reach = (has @ right_has) > 0.5
                reach &= np.arange(N)[None, :] != q2[:, None]
                ii, q1 = np.nonzero(reach)
                keys = (q[ii] * N + q1) * N + q2[ii]
                fresh = seen.fresh(keys)
                keys, ii, q1 = keys[fresh], ii[fresh], q1[fresh]
                seen.add(keys)
                if not keys.size:
                    continue
                # provenance: the earliest left transition, then the smallest r
                both = (has[ii] > 0.5) & (right_owner[:, q1].T >= 0)
                r = np.argmin(np.where(both, owner[ii], m), axis=1)
                e1 = owner[ii, r].tolist()
                e2 = right_owner[r, q1].tolist()
                for key, a, b in zip(_decode(keys, N), e1, e2):
                    out[key] = Triple(*key, Seed(symbol, entries[a][0], entries[b][0], j + 1))
    return out


def close_triples(A, seeds, cap=None):
    """Least superset of *seeds* closed under one-symbol contexts.

    From ``(q, q', q'')`` and an explicit transition with ``q`` at position
    ``j``, the same transition with ``q'`` resp. ``q''`` at ``j`` gives the
    next triple.  The worklist is processed breadth-first, a whole level at
    a time, so each triple is expanded once.  Returns
    ``{(q, q', q''): Triple}`` in discovery order; raises
    :class:`ResourceLimitError` beyond *cap* triples (default ``|Q|**3``,
    trap counted).
    """
    _require_trap(A)
    trap = A.trap
    N = A.n + 1
    if cap is None:
        cap = N ** 3
    if isinstance(seeds, dict):
        seeds = seeds.values()
    closed = {}
    for t in seeds:
        closed.setdefault(t.key, t)
    if len(closed) > cap:
        raise ResourceLimitError(f"more than {cap} triples")
    cols = _Columns(A)
    seen = _Visited(N)
    frontier = np.array([(a * N + b) * N + c for a, b, c in closed], dtype=np.int64)
    seen.add(frontier)
    by_state = cols.by_state
    width = max(1, len(cols.rows))
    while frontier.size:
        level = []
        for lo in range(0, frontier.size, max(1, _CHUNK // width)):
            part = frontier[lo:lo + max(1, _CHUNK // width)]
            q, rest = np.divmod(part, N * N)
            q1, q2 = np.divmod(rest, N)
            r = by_state[q]
            r1 = by_state[q1]
            r2 = by_state[q2]
            keep = (r != trap) & (r1 != trap) & (r2 != r) & (r2 != r1)
            ii, rows = np.nonzero(keep)
            keys = (r[ii, rows].astype(np.int64) * N + r1[ii, rows]) * N + r2[ii, rows]
            first = seen.fresh(keys)
            keys = keys[first]
            seen.add(keys)
            if len(closed) + keys.size > cap:
                raise ResourceLimitError(f"more than {cap} triples")
            parents = _decode(part[ii[first]], N)
            for key, parent, row in zip(_decode(keys, N), parents, rows[first].tolist()):
                st = cols.step(row, parent[0])
                closed[key] = Triple(*key, Step(parent, st.symbol, st.position, st.args))
            level.append(keys)
        frontier = np.concatenate(level) if level else np.empty(0, dtype=np.int64)
    return closed


def conflicts(A, closed):
    """Keys of closed triples in ``F x F x (Q \\ F)``, in discovery order."""
    F = A.final_ids
    return [key for key in closed
            if key[0] in F and key[1] in F and key[2] not in F]


def _materialize(A, reps, closed, key):
    steps = []
    node = closed[key]
    while isinstance(node.provenance, Step):
        steps.append(node)
        node = closed[node.provenance.parent]
    seed = node.provenance
    ctx = TRIVIAL_CONTEXT
    trail = [(tuple(A.name(q) for q in node.key),
              f"seed {seed.symbol} at position {seed.position}")]
    for t in reversed(steps):
        st = t.provenance
        wrap = one_symbol_context(st.symbol, [reps[a] for a in st.args], st.position)
        ctx = plug_context(wrap, ctx)
        trail.append((tuple(A.name(q) for q in t.key), f"{st.symbol} at position {st.position}"))
    left = tuple(reps[a] for a in seed.left)
    right = tuple(reps[a] for a in seed.right)
    mixed = list(left)
    mixed[seed.position - 1] = right[seed.position - 1]
    return ConflictWitness(
        triple=tuple(A.name(q) for q in key),
        symbol=seed.symbol,
        position=seed.position,
        context=ctx,
        left_trees=left,
        right_trees=right,
        accepted_trees=(plug(ctx, Tree(seed.symbol, left)), plug(ctx, Tree(seed.symbol, right))),
        violating_tree=plug(ctx, Tree(seed.symbol, mixed)),
        trail=tuple(trail),
    )


def analyze(A, cap=None):
    """Run the full pipeline; returns a :class:`Decision`."""
    B, reps = _prepared(A)
    notes = []
    seeds = seed_triples(B)
    closed = close_triples(B, seeds, cap)
    found = conflicts(B, closed)
    stats = {
        "states": A.n,
        "reduced_states": B.n,
        "transitions": len(B.delta),
        "size": size(B),
        "seeds": len(seeds),
        "triples": len(closed),
        "conflicts": len(found),
    }
    if not B.final_ids:
        notes.append("empty language")
    if not found:
        return Decision(True, None, stats, tuple(notes))
    notes.append("witness is one of possibly many")
    return Decision(False, _materialize(B, reps, closed, found[0]), stats, tuple(notes))


def find_conflict(A, cap=None):
    """A materialized :class:`ConflictWitness`, or ``None`` when conflict-free."""
    return analyze(A, cap).witness


def is_top_down_deterministic(A, cap=None):
    return analyze(A, cap)


def subset_name(A, Q):
    """Display a set of state ids as ``{a,b}`` in declaration order."""
    return "{" + ",".join(A.name(q) for q in sorted(Q)) + "}"


def associated_dta(A, max_states=DEFAULT_DTA_STATE_CAP):
    """Subset-construction DTA started from the final set, built on the fly.

    DTA states are tuples of base-state names (declaration order).  An
    ``f`` entry is omitted when no ``f``-transition targets the current
    set, so the empty set is never constructed except as the initial
    state of an automaton without final states.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyAutomatonWarning)
        A = reduce(A)
    by_symbol = {s: [(args, t) for _, args, t in A.transitions(s)] for s in A.alphabet}

    def label(Q):
        return tuple(A.name(q) for q in sorted(Q))

    initial = frozenset(A.final_ids)
    seen = {initial: label(initial)}
    queue = deque([initial])
    delta = {}
    while queue:
        Q0 = queue.popleft()
        for symbol, k in A.alphabet.items():
            hits = [args for args, t in by_symbol[symbol] if t in Q0]
            if not hits:
                continue
            if k == 0:
                delta[(seen[Q0], symbol)] = ()
                continue
            targets = []
            for i in range(k):
                Qi = frozenset(args[i] for args in hits)
                if Qi not in seen:
                    if len(seen) >= max_states:
                        raise ResourceLimitError(f"more than {max_states} subset states")
                    seen[Qi] = label(Qi)
                    queue.append(Qi)
                targets.append(seen[Qi])
            delta[(seen[Q0], symbol)] = tuple(targets)
    return DTA(A.alphabet, list(seen.values()), seen[initial], delta)


def explain(decision):
    """JSON-ready report of a :class:`Decision` (trees in textual syntax)."""
    w = decision.witness
    witness = None
    if w is not None:
        witness = {
            "triple": list(w.triple),
            "symbol": w.symbol,
            "position": w.position,
            "context": str(w.context),
            "left_trees": [str(t) for t in w.left_trees],
            "right_trees": [str(t) for t in w.right_trees],
            "accepted_trees": [str(t) for t in w.accepted_trees],
            "violating_tree": str(w.violating_tree),
            "trail": [{"triple": list(t), "via": via} for t, via in w.trail],
        }
    return {
        "answer": decision.answer,
        "witness": witness,
        "stats": dict(decision.stats),
        "notes": list(decision.notes),
    }
