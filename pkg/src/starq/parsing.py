"""Text form of symbols.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("+" | "-") factor | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | "x"INT | "xi"INT | "h" | "(" expr ")"

``h`` denotes the deformation parameter nu = i*hbar.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .symbols import SymbolPoly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>xi\d+|x\d+|h)|(?P<op>[-+*^/()])|(?P<bad>\S))"
)


class ParseError(ValueError):
    """Malformed expression; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")

    def diagnostic(self) -> str:
        return f"{self.args[0]}\n  {self.text}\n  {' ' * self.pos}^"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break  # only trailing whitespace is left
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", start, text)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect_op(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise self.error(f"expected {op!r}", tok)
        return tok

    def parse(self) -> SymbolPoly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> SymbolPoly:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> SymbolPoly:
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> SymbolPoly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.factor()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self) -> SymbolPoly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise self.error("exponent must be a nonnegative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> SymbolPoly:
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            value = Fraction(int(text))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    raise self.error("expected integer denominator", den)
                if int(den[1]) == 0:
                    raise self.error("zero denominator", den)
                value /= int(den[1])
            return SymbolPoly.const(self.n, value)
        if kind == "var":
            if text == "h":
                return SymbolPoly.nu(self.n)
            prefix = "xi" if text.startswith("xi") else "x"
            index = int(text[len(prefix):])
            if not 1 <= index <= self.n:
                raise ParseError(
                    f"variable {text} out of range 1..{self.n}", pos, self.text
                )
            make = SymbolPoly.xi if prefix == "xi" else SymbolPoly.x
            return make(index - 1, self.n)
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {text!r}", tok)


def parse_symbol(text: str, n: int) -> SymbolPoly:
    """Parse ``text`` as a symbol on T*R^n."""
    return _Parser(text, n).parse()


def term_order_key(key) -> tuple:
    a, b, p = key
    return (sum(b), b, a, p)


def _format_monomial(n: int, a, b, p: int) -> list[str]:
    factors = []
    if p:
        factors.append("h" if p == 1 else f"h^{p}")
    for name, exps in (("x", a), ("xi", b)):
        for i, e in enumerate(exps):
            if e:
                factors.append(f"{name}{i + 1}" if e == 1 else f"{name}{i + 1}^{e}")
    return factors


def format_symbol(F: SymbolPoly) -> str:
    """Canonical text, terms in decreasing graded-lex order on (|b|, b, a, p)."""
    if not F:
        return "0"
    pieces = []
    for key in sorted((k for k, _ in F.items()), key=term_order_key, reverse=True):
        c = F.coefficient(*key)
        factors = _format_monomial(F.n, *key)
        mag = abs(c)
        if factors and mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)
