"""Reading and writing the ``.dba`` and ``.dta`` text formats.

See ``docs/formats.md`` for the grammar.  Both renderers are canonical:
``render_dba(parse_dba(render_dba(A))) == render_dba(A)``.
"""

import re

from .automata import DBA, DTA
from .errors import AutomatonError, ParseError
from .trees import HOLE, NAME_RE, RankedAlphabet

_HEADER_RE = re.compile(r"^\s*(alphabet|states|final|initial|trans)\s*:(.*)$")
_DBA_SECTIONS = ("alphabet", "states", "final", "trans")
_DTA_SECTIONS = ("alphabet", "states", "initial", "trans")


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _sections(text, allowed):
    """Split *text* into ``{section: [(line_no, col_offset, body), ...]}``."""
    if text.startswith("\ufeff"):
        text = text[1:]
    found = {}
    first_line = {}
    current = None
    for lno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _HEADER_RE.match(line)
        if m:
            name = m.group(1)
            if name not in allowed:
                raise ParseError(f"unexpected section {name!r}", lno, m.start(1) + 1)
            if name in found:
                raise ParseError(f"section {name!r} repeated "
                                 f"(first on line {first_line[name]})", lno, m.start(1) + 1)
            found[name] = []
            first_line[name] = lno
            current = name
            if m.group(2).strip():
                found[name].append((lno, m.start(2), m.group(2)))
            continue
        if current is None:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("content before the first section header", lno, col)
        found[current].append((lno, 0, line))
    for name in allowed:
        if name not in found:
            raise ParseError(f"missing section {name!r}:")
    return found


def _items(lines, pattern=r"[^\s,]+"):
    for lno, offset, body in lines:
        for m in re.finditer(pattern, body):
            yield lno, offset + m.start() + 1, m.group()


def _parse_alphabet(lines):
    items = []
    for lno, col, item in _items(lines):
        name, sep, k = item.partition("/")
        if not sep or not k.isdigit():
            raise ParseError(f"expected symbol/arity, got {item!r}", lno, col)
        if not NAME_RE.fullmatch(name):
            raise ParseError(f"invalid symbol name {name!r}", lno, col)
        if name == HOLE:
            raise ParseError(f"symbol name {HOLE!r} is reserved for the hole", lno, col)
        if any(n == name for n, _ in items):
            raise ParseError(f"symbol {name!r} declared twice", lno, col)
        items.append((name, int(k)))
    return RankedAlphabet(items)


def _parse_names(lines, what):
    names = []
    for lno, col, item in _items(lines):
        if not NAME_RE.fullmatch(item):
            raise ParseError(f"invalid {what} name {item!r}", lno, col)
        names.append((lno, col, item))
    return names


_TRANS_TOKEN = re.compile(r"\s*(?:(->)|([\w'.]+)|(\S))")


def _tokens(body, offset):
    out = []
    pos = 0
    while pos < len(body):
        m = _TRANS_TOKEN.match(body, pos)
        if m is None:
            break
        if m.group(1):
            out.append(("->", m.group(1), offset + m.start(1) + 1))
        elif m.group(2):
            out.append(("name", m.group(2), offset + m.start(2) + 1))
        elif m.group(3):
            out.append((m.group(3), m.group(3), offset + m.start(3) + 1))
        pos = m.end()
    return out


def _parse_transition(lno, offset, body):
    toks = _tokens(body, offset)
    pos = 0

    def expect(kind, what):
        nonlocal pos
        if pos >= len(toks):
            end = offset + len(body.rstrip()) + 1
            raise ParseError(f"expected {what}, got end of line", lno, end)
        tok = toks[pos]
        if tok[0] != kind:
            raise ParseError(f"expected {what}, got {tok[1]!r}", lno, tok[2])
        pos += 1
        return tok

    symbol = expect("name", "a symbol")
    args = []
    if pos < len(toks) and toks[pos][0] == "(":
        pos += 1
        if pos < len(toks) and toks[pos][0] == ")":
            pos += 1
        else:
            args.append(expect("name", "a state"))
            while pos < len(toks) and toks[pos][0] == ",":
                pos += 1
                args.append(expect("name", "a state"))
            expect(")", "')' or ','")
    expect("->", "'->'")
    target = expect("name", "a target state")
    if pos < len(toks):
        raise ParseError(f"unexpected {toks[pos][1]!r} after the target", lno, toks[pos][2])
    return symbol, args, target


def parse_dba(text):
    """Parse a ``.dba`` description into a validated :class:`DBA`.

    Raises :class:`ParseError` carrying line (and column) information.
    """
    sec = _sections(text, _DBA_SECTIONS)
    alphabet = _parse_alphabet(sec["alphabet"])
    index = {}
    for lno, col, name in _parse_names(sec["states"], "state"):
        if name in index:
            raise ParseError(f"state {name!r} declared twice", lno, col)
        index[name] = len(index)

    def state(tok):
        if tok[1] not in index:
            raise ParseError(f"undeclared state {tok[1]!r}", lno, tok[2])
        return index[tok[1]]

    finals = set()
    for lno, col, name in _parse_names(sec["final"], "state"):
        if name not in index:
            raise ParseError(f"undeclared state {name!r} in final section", lno, col)
        finals.add(index[name])

    delta = {}
    origin = {}
    for lno, offset, body in sec["trans"]:
        symbol, args, target = _parse_transition(lno, offset, body)
        if symbol[1] not in alphabet:
            raise ParseError(f"undeclared symbol {symbol[1]!r}", lno, symbol[2])
        k = alphabet.arity(symbol[1])
        if len(args) != k:
            raise ParseError(f"symbol {symbol[1]!r} has arity {k}, "
                             f"transition lists {len(args)} argument(s)", lno, symbol[2])
        key = (symbol[1], tuple(state(a) for a in args))
        value = state(target)
        if key in delta:
            shown = symbol[1] + (f"({','.join(a[1] for a in args)})" if args else "")
            raise ParseError(f"duplicate transition for {shown} (non-deterministic; "
                             f"first given on line {origin[key]})", lno, symbol[2])
        delta[key] = value
        origin[key] = lno
    try:
        return DBA(alphabet, list(index), delta, finals)
    except AutomatonError as e:
        raise ParseError(str(e)) from None


def render_dba(A):
    """Canonical text: symbols alphabetically, states in declaration order,
    transitions sorted by symbol then argument tuple.  The trap is implicit
    and never written."""
    lines = [
        "alphabet: " + " ".join(f"{s}/{k}" for s, k in A.alphabet.items()),
        "states: " + " ".join(A.names),
        "final: " + " ".join(A.names[q] for q in sorted(A.final_ids)),
        "trans:",
    ]
    for symbol, args, target in A.transitions():
        lhs = symbol if not args else f"{symbol}({','.join(A.names[a] for a in args)})"
        lines.append(f"  {lhs} -> {A.names[target]}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


# -- .dta -------------------------------------------------------------------

def format_subset(state):
    if isinstance(state, (tuple, frozenset, set, list)):
        return "{" + ",".join(state) + "}"
    return str(state)


def render_dta(B):
    """Write a DTA; states render as brace sets, in the DTA's state order."""
    lines = [
        "alphabet: " + " ".join(f"{s}/{k}" for s, k in B.alphabet.items()),
        "states: " + " ".join(format_subset(q) for q in B.states),
        "initial: " + format_subset(B.initial),
        "trans:",
    ]
    for q in B.states:
        for symbol in B.alphabet.symbols:
            targets = B.delta.get((q, symbol))
            if targets is None:
                continue
            rhs = " ".join(format_subset(p) for p in targets) if targets else "."
            lines.append(f"  {format_subset(q)} --{symbol}--> {rhs}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


_SUBSET_RE = re.compile(r"\{([^{}]*)\}")


def _parse_subset(text, lno, col):
    m = _SUBSET_RE.fullmatch(text)
    if not m:
        raise ParseError(f"expected a brace set, got {text!r}", lno, col)
    names = tuple(n.strip() for n in m.group(1).split(",") if n.strip())
    for n in names:
        if not NAME_RE.fullmatch(n):
            raise ParseError(f"invalid state name {n!r}", lno, col)
    return names


_DTA_TRANS_RE = re.compile(r"^\s*(\{[^{}]*\})\s*--([\w'.]+)-->\s*(.*?)\s*$")


def parse_dta(text):
    """Parse the ``.dta`` format written by :func:`render_dta`.

    States come back as tuples of base-state names.
    """
    sec = _sections(text, _DTA_SECTIONS)
    alphabet = _parse_alphabet(sec["alphabet"])
    states = [_parse_subset(item, lno, col)
              for lno, col, item in _items(sec["states"], r"\{[^{}]*\}|[^\s{}]+")]
    init = list(_items(sec["initial"], r"\{[^{}]*\}|[^\s{}]+"))
    if len(init) != 1:
        raise ParseError("the initial section needs exactly one state")
    initial = _parse_subset(init[0][2], init[0][0], init[0][1])
    known = set(states)
    delta = {}
    for lno, offset, body in sec["trans"]:
        m = _DTA_TRANS_RE.match(body)
        if not m:
            raise ParseError("expected 'STATE --symbol--> STATE ...'", lno, offset + 1)
        src = _parse_subset(m.group(1), lno, offset + m.start(1) + 1)
        symbol = m.group(2)
        if symbol not in alphabet:
            raise ParseError(f"undeclared symbol {symbol!r}", lno, offset + m.start(2) + 1)
        rhs = m.group(3)
        if rhs == ".":
            targets = ()
        else:
            targets = tuple(_parse_subset(t, lno, offset + m.start(3) + 1)
                            for t in re.findall(r"\{[^{}]*\}", rhs))
            if re.sub(r"\{[^{}]*\}", "", rhs).strip():
                raise ParseError(f"malformed target list {rhs!r}", lno, offset + m.start(3) + 1)
        if len(targets) != alphabet.arity(symbol):
            raise ParseError(f"symbol {symbol!r} has arity {alphabet.arity(symbol)}, "
                             f"got {len(targets)} target(s)", lno, offset + m.start(2) + 1)
        for q in (src,) + targets:
            if q not in known:
                raise ParseError(f"undeclared DTA state {format_subset(q)}", lno, offset + 1)
        if (src, symbol) in delta:
            raise ParseError(f"duplicate transition for {format_subset(src)} and {symbol!r}",
                             lno, offset + 1)
        delta[(src, symbol)] = targets
    try:
        return DTA(alphabet, states, initial, delta)
    except AutomatonError as e:
        raise ParseError(str(e)) from None
