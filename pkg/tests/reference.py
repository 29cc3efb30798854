"""Deliberately naive re-implementations used as test oracles.

Nothing here shares code with the vectorized fixpoint in tdcheck.decision;
everything goes through DBA.step and plain Python loops.
"""

import itertools

from tdcheck.automata import eval_context
from tdcheck.trees import enumerate_contexts


def naive_seeds(A, prune=True):
    out = set()
    for symbol, k in A.alphabet.items():
        if k < 2:
            continue
        entries = [(args, t) for _, args, t in A.transitions(symbol)]
        for (p, q), (p2, q2) in itertools.product(entries, repeat=2):
            for j in range(k):
                q3 = A.step(symbol, p[:j] + (p2[j],) + p[j + 1:])
                if prune and q3 in (q, q2):
                    continue
                out.add((q, q2, q3))
    return out


def naive_closure(A, seeds, prune=True):
    trap = A.trap
    closed = set(seeds)
    work = list(closed)
    while work:
        q, q1, q2 = work.pop()
        for symbol, args, target in A.transitions():
            for j, s in enumerate(args):
                if s != q:
                    continue
                r1 = A.step(symbol, args[:j] + (q1,) + args[j + 1:])
                r2 = A.step(symbol, args[:j] + (q2,) + args[j + 1:])
                if prune and (r1 == trap or r2 in (target, r1)):
                    continue
                key = (target, r1, r2)
                if key not in closed:
                    closed.add(key)
                    work.append(key)
    return closed


def naive_has_conflict(A):
    F = A.final_ids
    return any(a in F and b in F and c not in F
               for a, b, c in naive_closure(A, naive_seeds(A)))


def bounded_conflict(A, max_context_size):
    """A conflict found by trying every context up to the given size (unpruned seeds)."""
    F = A.final_ids
    seeds = naive_seeds(A, prune=False)
    for c in enumerate_contexts(A.alphabet, max_context_size):
        for q, q1, q2 in seeds:
            if (eval_context(A, q, c) in F and eval_context(A, q1, c) in F
                    and eval_context(A, q2, c) not in F):
                return (q, q1, q2), c
    return None


def count_trees(arities, n):
    """Number of trees with exactly n nodes, by direct recursion on the root."""
    if n <= 0:
        return 0
    total = 0
    for k in arities:
        if k == 0:
            total += n == 1
            continue
        total += _forests(arities, n - 1, k)
    return total


def _forests(arities, n, k):
    if k == 0:
        return int(n == 0)
    return sum(count_trees(arities, first) * _forests(arities, n - first, k - 1)
               for first in range(1, n + 1))
