"""Text <-> jet expression conversion.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | factor
    factor := base ('^' uint)?
    base   := int | indep | dep "'"* | '(' expr ')'

``dep`` followed by k primes is the jet variable u_k (k <= 8).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

from .jet import JetPoly, RationalJetExpr, X, u_slot

MAX_PRIME_DEPTH = 8

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<prime>')|(?P<op>[-+*/^()])"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    line_start = i + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, dep: str, indep: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.dep = dep
        self.indep = indep

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> RationalJetExpr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.at_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.at_op("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok.text == "*":
                e = e * rhs
            else:
                if rhs.is_zero:
                    raise self.error("division by zero", op_tok)
                e = e / rhs
        return e

    def unary(self):
        if self.at_op("-"):
            self.take()
            return -self.unary()
        if self.at_op("+"):
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        base = self.base()
        if self.at_op("^"):
            self.take()
            t = self.tok
            if t.kind != "num":
                raise self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(t.text)
        return base

    def base(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            return RationalJetExpr(Fraction(int(t.text)))
        if self.at_op("("):
            self.take()
            e = self.expr()
            if not self.at_op(")"):
                raise self.error("expected ')'")
            self.take()
            return e
        if t.kind == "ident":
            self.take()
            primes = 0
            while self.tok.kind == "prime":
                self.take()
                primes += 1
            if t.text == self.dep:
                if primes > MAX_PRIME_DEPTH:
                    raise self.error(f"prime depth exceeds {MAX_PRIME_DEPTH}", t)
                return RationalJetExpr(JetPoly.var(u_slot(primes)))
            if t.text == self.indep:
                if primes:
                    raise self.error("primes on the independent variable", t)
                return RationalJetExpr(JetPoly.var(X))
            raise self.error(f"unknown identifier {t.text!r}", t)
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.text!r}")


def parse_expr(text: str, dep_name: str = "y", indep_name: str = "x") -> Union[JetPoly, RationalJetExpr]:
    """Parse text; returns a JetPoly unless a non-constant divisor occurred."""
    return _Parser(text, dep_name, indep_name).parse().simplify()


def _var_text(slot: int, dep: str, indep: str) -> str:
    return indep if slot == X else dep + "'" * (slot - 1)


def format_poly(p: JetPoly, dep: str = "y", indep: str = "x") -> str:
    """Render in descending canonical order; round-trips through parse_expr."""
    if p.is_zero:
        return "0"
    parts = []
    for mono, c in p.sorted_terms():
        factors = []
        for slot, e in enumerate(mono):
            if e:
                v = _var_text(slot, dep, indep)
                factors.append(v if e == 1 else f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)
