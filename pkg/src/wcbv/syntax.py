"""Surface syntax: a named-variable parser and two printers.

Grammar::

    term := ('\\' | 'λ') ident+ '.' term | atom+ [lambda]
    atom := ident | '(' term ')' | '#' nat | 'true' | 'false'

Application is left-associative.  As a convenience a trailing abstraction
may appear without parentheses (``f \\x. x``).
"""

from __future__ import annotations

import re

from .terms import MAX_INDEX, App, Lam, Term, Var, church_bool, church_nat


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lam>\\|λ)
  | (?P<dot>\.)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<num>\#\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def term(self, scope: list[str]) -> Term:
        if self.peek()[0] == "lam":
            return self.abstraction(scope)
        head = None
        while True:
            kind = self.peek()[0]
            if kind == "lam":
                arg = self.abstraction(scope)
            elif kind in ("ident", "num", "lpar"):
                arg = self.atom(scope)
            else:
                break
            head = arg if head is None else App(head, arg)
            if kind == "lam":
                break
        if head is None:
            tok = self.peek()
            raise ParseError(f"expected a term, found {tok[1] or 'end of input'!r}", tok[2])
        return head

    def abstraction(self, scope: list[str]) -> Term:
        self.expect("lam")
        names = [self.expect("ident")]
        while self.peek()[0] == "ident":
            names.append(self.advance())
        for _, name, pos in names:
            if name in _KEYWORDS:
                raise ParseError(f"{name!r} cannot be bound", pos)
        self.expect("dot")
        inner = scope + [name for _, name, _ in names]
        body = self.term(inner)
        for _ in names:
            body = Lam(body)
        return body

    def atom(self, scope: list[str]) -> Term:
        kind, text, pos = self.advance()
        if kind == "lpar":
            t = self.term(scope)
            self.expect("rpar")
            return t
        if kind == "num":
            n = int(text[1:])
            if n >= MAX_INDEX:
                raise ParseError("numeral too large", pos)
            return church_nat(n)
        if text == "true":
            return church_bool(True)
        if text == "false":
            return church_bool(False)
        for depth, name in enumerate(reversed(scope)):
            if name == text:
                return Var(depth)
        raise ParseError(f"unbound identifier {text!r}", pos)


def parse(text: str) -> Term:
    """Parse named surface syntax into a (necessarily closed) de Bruijn term."""
    p = _Parser(text)
    t = p.term([])
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return t


_DB_TOKEN = re.compile(r"\s*(?:(?P<lam>λ|\\)|(?P<lpar>\()|(?P<rpar>\))|(?P<num>\d+))")


def parse_debruijn(text: str) -> Term:
    """Inverse of ``to_debruijn``; accepts open terms."""
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _DB_TOKEN.match(stripped, pos)
        if m is None:
            raise ParseError("unexpected character", pos)
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("eof", "", len(stripped)))
    i = 0

    def term():
        nonlocal i
        head = None
        while True:
            kind, text_, pos_ = tokens[i]
            if kind == "lam":
                i += 1
                arg = Lam(term())
            elif kind == "lpar":
                i += 1
                arg = term()
                if tokens[i][0] != "rpar":
                    raise ParseError("expected ')'", tokens[i][2])
                i += 1
            elif kind == "num":
                i += 1
                n = int(text_)
                if n >= MAX_INDEX:
                    raise ParseError("index too large", pos_)
                arg = Var(n)
            else:
                break
            head = arg if head is None else App(head, arg)
            if kind == "lam":
                break
        if head is None:
            raise ParseError("expected a term", tokens[i][2])
        return head

    t = term()
    if tokens[i][0] != "eof":
        raise ParseError("trailing input", tokens[i][2])
    return t


_NAMES = "xfghkyzuvwpqrabcdemnost"


def _binder_name(height: int) -> str:
    if height < len(_NAMES):
        return _NAMES[height]
    return f"x{height}"


def _heights(s: Term) -> dict[int, int]:
    """Abstraction nesting height below each Lam node, keyed by id."""
    heights: dict[int, int] = {}
    stack = [(s, False)]
    while stack:
        t, done = stack.pop()
        if isinstance(t, Var):
            continue
        if not done:
            stack.append((t, True))
            stack.extend((c, False) for c in ((t.body,) if isinstance(t, Lam) else (t.fun, t.arg)))
            continue
        if isinstance(t, Lam):
            heights[id(t)] = _lam_height(t.body, heights) + 1
        else:
            heights[id(t)] = max(_lam_height(t.fun, heights), _lam_height(t.arg, heights))
    return heights


def _lam_height(t: Term, heights: dict[int, int]) -> int:
    return 0 if isinstance(t, Var) else heights[id(t)]


def to_named(s: Term) -> str:
    """Print with each binder named by how many abstractions nest below it.

    Heights strictly decrease going inwards, so no name is ever shadowed,
    and the innermost binder is always ``x``.
    """
    heights = _heights(s)

    def go(t: Term, scope: list) -> str:
        if isinstance(t, Var):
            if t.n >= len(scope):
                raise ValueError("cannot print an open term with names")
            return scope[-1 - t.n]
        if isinstance(t, Lam):
            name = _binder_name(heights[id(t)] - 1)
            scope.append(name)
            body = go(t.body, scope)
            scope.pop()
            sep = "" if isinstance(t.body, Lam) else " "
            return f"\\{name}.{sep}{body}"
        return f"{fun_part(t.fun, scope)} {arg_part(t.arg, scope)}"

    def fun_part(t: Term, scope: list) -> str:
        text = go(t, scope)
        return f"({text})" if isinstance(t, Lam) else text

    def arg_part(t: Term, scope: list) -> str:
        text = go(t, scope)
        return text if isinstance(t, Var) else f"({text})"

    return go(s, [])


def to_debruijn(s: Term) -> str:
    if isinstance(s, Var):
        return str(s.n)
    if isinstance(s, Lam):
        return "λ" + to_debruijn(s.body)
    fun = to_debruijn(s.fun)
    if isinstance(s.fun, Lam):
        fun = f"({fun})"
    arg = to_debruijn(s.arg)
    if not isinstance(s.arg, Var):
        arg = f"({arg})"
    return f"{fun} {arg}"


def show(s: Term, style: str = "named") -> str:
    if style == "named":
        return to_named(s)
    if style == "debruijn":
        return to_debruijn(s)
    raise ValueError(f"unknown style {style!r}")
