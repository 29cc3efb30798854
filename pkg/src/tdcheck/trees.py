"""Ranked alphabets, trees, contexts and bounded enumeration.

Trees are immutable and hashable.  The canonical order compares labels
first (the hole ``x`` sorts below every symbol) and then the children
lexicographically; enumeration sorts by node count first and by the
canonical order second.
"""

import functools
import itertools
import re

from .errors import AutomatonError, ParseError, ResourceLimitError

HOLE = "x"
NAME_RE = re.compile(r"[\w'.]+")

DEFAULT_ENUM_CAP = 500_000


class RankedAlphabet:
    """A finite map from symbol names to arities."""

    __slots__ = ("_arity",)

    def __init__(self, symbols):
        if isinstance(symbols, RankedAlphabet):
            symbols = symbols._arity
        items = symbols.items() if hasattr(symbols, "items") else symbols
        arity = {}
        for name, k in items:
            if not isinstance(name, str) or not NAME_RE.fullmatch(name):
                raise AutomatonError(f"invalid symbol name {name!r}")
            if name == HOLE:
                raise AutomatonError(f"symbol name {HOLE!r} is reserved for the hole")
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise AutomatonError(f"invalid arity {k!r} for symbol {name!r}")
            if name in arity and arity[name] != k:
                raise AutomatonError(f"symbol {name!r} declared with two arities")
            arity[name] = k
        object.__setattr__(self, "_arity", dict(sorted(arity.items())))

    def __setattr__(self, name, value):
        raise AttributeError("RankedAlphabet is immutable")

    @classmethod
    def parse(cls, text):
        """Parse ``"f/2,a/0"`` (commas and/or whitespace separate items)."""
        items = []
        for item in re.split(r"[,\s]+", text.strip()):
            if not item:
                continue
            name, sep, k = item.partition("/")
            if not sep or not k.isdigit():
                raise ParseError(f"expected symbol/arity, got {item!r}")
            items.append((name, int(k)))
        return cls(items)

    def arity(self, symbol):
        return self._arity[symbol]

    @property
    def symbols(self):
        """Symbol names in alphabetical order."""
        return tuple(self._arity)

    def items(self):
        return self._arity.items()

    def of_arity(self, k):
        return tuple(s for s, a in self._arity.items() if a == k)

    @property
    def max_arity(self):
        return max(self._arity.values(), default=0)

    def __contains__(self, symbol):
        return symbol in self._arity

    def __iter__(self):
        return iter(self._arity)

    def __len__(self):
        return len(self._arity)

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self._arity == other._arity

    def __hash__(self):
        return hash(tuple(self._arity.items()))

    def __str__(self):
        return ",".join(f"{s}/{k}" for s, k in self._arity.items())

    def __repr__(self):
        return f"RankedAlphabet({str(self)!r})"


@functools.total_ordering
class Tree:
    """A ranked, ordered tree ``label(children...)``.

    The hole label ``x`` is permitted so that the same class backs
    :class:`Context`; :func:`validate_tree` rejects it.
    """

    __slots__ = ("label", "children", "size", "_hash")

    def __init__(self, label, children=()):
        children = tuple(children)
        for child in children:
            if not isinstance(child, Tree):
                raise TypeError(f"child {child!r} is not a Tree")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "size", 1 + sum(c.size for c in children))
        object.__setattr__(self, "_hash", hash((label, children)))

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return (self._hash == other._hash and self.label == other.label
                and self.children == other.children)

    def __lt__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _compare(self, other) < 0

    def __repr__(self):
        return f"Tree({str(self)!r})"

    def __str__(self):
        if not self.children:
            return self.label
        return f"{self.label}({','.join(str(c) for c in self.children)})"

    @property
    def depth(self):
        return 1 + max((c.depth for c in self.children), default=0)

    def holes(self):
        """Addresses of all hole leaves."""
        return [u for u, node in iter_nodes(self) if node.label == HOLE]


def _label_key(label):
    return (0, "") if label == HOLE else (1, label)


def _compare(a, b):
    if a is b:
        return 0
    ka, kb = _label_key(a.label), _label_key(b.label)
    if ka != kb:
        return -1 if ka < kb else 1
    for ca, cb in zip(a.children, b.children):
        c = _compare(ca, cb)
        if c:
            return c
    return (len(a.children) > len(b.children)) - (len(a.children) < len(b.children))


def size_key(t):
    """Sort key for the size-lexicographic enumeration order."""
    return (t.size, t)


class Context:
    """A tree with exactly one leaf labelled by the hole ``x``."""

    __slots__ = ("tree", "hole")

    def __init__(self, tree):
        if isinstance(tree, Context):
            tree = tree.tree
        holes = tree.holes()
        if len(holes) != 1:
            raise AutomatonError(f"a context needs exactly one hole, found {len(holes)} in {tree}")
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "hole", holes[0])

    def __setattr__(self, name, value):
        raise AttributeError("Context is immutable")

    @property
    def size(self):
        return self.tree.size

    def __eq__(self, other):
        return isinstance(other, Context) and self.tree == other.tree

    def __lt__(self, other):
        return self.tree < other.tree

    def __hash__(self):
        return hash(("ctx", self.tree))

    def __str__(self):
        return str(self.tree)

    def __repr__(self):
        return f"Context({str(self)!r})"


def validate_tree(alphabet, t):
    """True iff every label of *t* is in *alphabet* with matching child count."""
    stack = [t]
    while stack:
        node = stack.pop()
        if node.label not in alphabet or alphabet.arity(node.label) != len(node.children):
            return False
        stack.extend(node.children)
    return True


def validate_context(alphabet, c):
    stack = [c.tree]
    while stack:
        node = stack.pop()
        if node.label == HOLE:
            continue
        if node.label not in alphabet or alphabet.arity(node.label) != len(node.children):
            return False
        stack.extend(node.children)
    return True


def iter_nodes(t):
    """Yield ``(address, subtree)`` pairs in preorder; addresses are 1-based tuples."""
    stack = [((), t)]
    while stack:
        u, node = stack.pop()
        yield u, node
        for i in range(len(node.children), 0, -1):
            stack.append((u + (i,), node.children[i - 1]))


HOLE_TREE = Tree(HOLE)
TRIVIAL_CONTEXT = Context(HOLE_TREE)


def nodes(t):
    """The node set of *t*; the root is the empty address ``()``."""
    if isinstance(t, Context):
        t = t.tree
    return {u for u, _ in iter_nodes(t)}


def subtree(t, address):
    for i in address:
        t = t.children[i - 1]
    return t


def replace(t, address, s):
    """``t[address <- s]``."""
    if not address:
        return s
    i = address[0]
    children = list(t.children)
    children[i - 1] = replace(children[i - 1], address[1:], s)
    return Tree(t.label, children)


def plug(c, t):
    """Replace the hole of context *c* with tree *t*."""
    return replace(c.tree, c.hole, t)


def plug_context(c, d):
    """Replace the hole of *c* with context *d*; the result is a context."""
    return Context(replace(c.tree, c.hole, d.tree))


def one_symbol_context(symbol, args, position):
    """``symbol(args...)`` with the argument at 1-based *position* replaced by the hole."""
    children = list(args)
    children[position - 1] = HOLE_TREE
    return Context(Tree(symbol, children))


# -- textual syntax ---------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:([\w'.]+)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace
            break
        if m.group(1) is not None:
            out.append(("name", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            if m.group(2) not in "(),":
                raise ParseError(f"unexpected character {m.group(2)!r}", col=m.start(2) + 1)
            out.append((m.group(2), m.group(2), m.start(2)))
        pos = m.end()
    return out


def parse_tree(text, alphabet=None):
    """Parse ``f(a,g(b))``; nullary symbols are written bare.

    With *alphabet* given, arities are checked.  The hole ``x`` is accepted
    syntactically; use :func:`parse_context` to require exactly one.
    """
    tokens = _tokenize(text)
    pos = 0

    def err(msg, at=None):
        col = None if at is None else at + 1
        return ParseError(msg, col=col)

    def node():
        nonlocal pos
        if pos >= len(tokens):
            raise err("unexpected end of input")
        kind, val, at = tokens[pos]
        if kind != "name":
            raise err(f"expected a symbol, got {val!r}", at)
        pos += 1
        children = []
        if pos < len(tokens) and tokens[pos][0] == "(":
            pos += 1
            if pos < len(tokens) and tokens[pos][0] == ")":  # a() is a
                pos += 1
            else:
                children.append(node())
                while pos < len(tokens) and tokens[pos][0] == ",":
                    pos += 1
                    children.append(node())
                if pos >= len(tokens) or tokens[pos][0] != ")":
                    raise err("expected ')'", tokens[pos][2] if pos < len(tokens) else None)
                pos += 1
        if alphabet is not None and val != HOLE:
            if val not in alphabet:
                raise err(f"unknown symbol {val!r}", at)
            if alphabet.arity(val) != len(children):
                raise err(f"symbol {val!r} has arity {alphabet.arity(val)}, "
                          f"got {len(children)} children", at)
        if val == HOLE and children:
            raise err("the hole cannot have children", at)
        return Tree(val, children)

    t = node()
    if pos != len(tokens):
        raise err(f"trailing input {tokens[pos][1]!r}", tokens[pos][2])
    return t


def parse_context(text, alphabet=None):
    t = parse_tree(text, alphabet)
    try:
        return Context(t)
    except AutomatonError as e:
        raise ParseError(str(e)) from None


# -- bounded enumeration ----------------------------------------------------

def _compositions(total, parts):
    """All tuples of *parts* positive ints summing to *total*."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cut + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def trees_by_size(alphabet, max_nodes, cap=DEFAULT_ENUM_CAP):
    """``result[n]`` lists all trees with exactly ``n`` nodes, canonically sorted."""
    by_size = [[] for _ in range(max_nodes + 1)]
    total = 0
    for n in range(1, max_nodes + 1):
        level = []
        for symbol, k in alphabet.items():
            if k == 0:
                if n == 1:
                    level.append(Tree(symbol))
                continue
            for sizes in _compositions(n - 1, k):
                for kids in itertools.product(*(by_size[s] for s in sizes)):
                    level.append(Tree(symbol, kids))
                    total += 1
                    if total > cap:
                        raise ResourceLimitError(
                            f"more than {cap} trees with at most {max_nodes} nodes")
        level.sort()
        by_size[n] = level
    return by_size


def enumerate_trees(alphabet, max_nodes, cap=DEFAULT_ENUM_CAP):
    """All trees with at most *max_nodes* nodes, by size then canonical order."""
    if not alphabet.of_arity(0):
        return []
    return [t for level in trees_by_size(alphabet, max_nodes, cap) for t in level]


def enumerate_contexts(alphabet, max_nodes, cap=DEFAULT_ENUM_CAP):
    """All contexts with at most *max_nodes* nodes (hole included), starting with ``x``."""
    if max_nodes < 1:
        return []
    trees = trees_by_size(alphabet, max_nodes, cap)
    ctx = [[] for _ in range(max_nodes + 1)]
    ctx[1] = [HOLE_TREE]
    total = 1
    for n in range(2, max_nodes + 1):
        level = []
        for symbol, k in alphabet.items():
            if k == 0:
                continue
            for sizes in _compositions(n - 1, k):
                for j in range(k):
                    pools = [ctx[s] if i == j else trees[s] for i, s in enumerate(sizes)]
                    for kids in itertools.product(*pools):
                        level.append(Tree(symbol, kids))
                        total += 1
                        if total > cap:
                            raise ResourceLimitError(
                                f"more than {cap} contexts with at most {max_nodes} nodes")
        level.sort()
        ctx[n] = level
    return [Context(t) for level in ctx for t in level]
