"""Reader for the pure-Prolog subset: facts and positive rules with ',' bodies.

Grammar: clauses end in '.', '%' starts a line comment, tokens are lowercase
or quoted atoms, integers, variables, ':-', ',', '(', ')', '[', ']', '|'.
Directives, operators, negation, and arithmetic are all out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    NIL,
    Atom,
    Int,
    Struct,
    Term,
    Var,
    VarNaming,
    format_term,
    fresh_var,
    make_list,
)


@dataclass(frozen=True)
class Clause:
    """One object rule: ``head :- body``; facts have an empty body."""

    head: Term
    body: tuple[Term, ...] = ()


@dataclass
class Program:
    """Clauses in source order; duplicates are kept."""

    clauses: list[Clause]


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # "atom", "var", "int", ":-", ",", "(", ")", "[", "]", "|", ".", "eof"
    text: str
    line: int
    col: int


_IDENT_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"
)
_PUNCT = frozenset(",()[]|.")


def _tokenize(src: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if src.startswith(":-", i):
            toks.append(_Token(":-", ":-", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            toks.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "'":
            i += 1
            col += 1
            buf: list[str] = []
            while True:
                if i >= n:
                    raise ParseError("unterminated quoted atom", start_line, start_col)
                c = src[i]
                if c == "'":
                    if i + 1 < n and src[i + 1] == "'":  # '' escapes a quote
                        buf.append("'")
                        i += 2
                        col += 2
                        continue
                    i += 1
                    col += 1
                    break
                if c == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
                buf.append(c)
                i += 1
            toks.append(_Token("atom", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit() and ch.isascii():
            j = i
            while j < n and src[j].isdigit() and src[j].isascii():
                j += 1
            toks.append(_Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ("a" <= ch <= "z") or ("A" <= ch <= "Z") or ch == "_":
            j = i
            while j < n and src[j] in _IDENT_CHARS:
                j += 1
            kind = "atom" if "a" <= ch <= "z" else "var"
            toks.append(_Token(kind, src[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Token("eof", "", line, col))
    return toks


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, src: str):
        self._toks = _tokenize(src)
        self._i = 0
        self._vars: dict[str, Var] = {}

    def _peek(self) -> _Token:
        return self._toks[self._i]

    def _next(self) -> _Token:
        tok = self._toks[self._i]
        if tok.kind != "eof":
            self._i += 1
        return tok

    def _expect(self, kind: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {_describe(tok)}",
                             tok.line, tok.col)
        return tok

    def at_eof(self) -> bool:
        return self._peek().kind == "eof"

    def clause(self) -> Clause:
        # Each clause gets its own variable scope, so clauses come out
        # renamed apart for free.
        self._vars = {}
        tok = self._peek()
        if tok.kind == ":-":
            raise ParseError("directives are not supported", tok.line, tok.col)
        head = self.term()
        self._check_literal(head, tok, "clause head")
        body: list[Term] = []
        nxt = self._next()
        if nxt.kind == ":-":
            while True:
                btok = self._peek()
                lit = self.term()
                self._check_literal(lit, btok, "body literal")
                body.append(lit)
                sep = self._next()
                if sep.kind == ",":
                    continue
                if sep.kind == ".":
                    break
                raise ParseError(f"expected ',' or '.', found {_describe(sep)}",
                                 sep.line, sep.col)
        elif nxt.kind != ".":
            raise ParseError(
                f"expected ':-' or '.' after clause head, found {_describe(nxt)}",
                nxt.line, nxt.col)
        return Clause(head, tuple(body))

    @staticmethod
    def _check_literal(t: Term, tok: _Token, where: str) -> None:
        if isinstance(t, Var):
            raise ParseError(f"{where} cannot be a variable", tok.line, tok.col)
        if isinstance(t, Int):
            raise ParseError(f"{where} cannot be an integer", tok.line, tok.col)
        if t == Atom("true"):
            raise ParseError(f"'true' is reserved and cannot be used as a {where}",
                             tok.line, tok.col)

    def term(self) -> Term:
        tok = self._next()
        if tok.kind == "var":
            if tok.text == "_":  # anonymous: fresh at every occurrence
                return fresh_var("_")
            v = self._vars.get(tok.text)
            if v is None:
                v = fresh_var(tok.text)
                self._vars[tok.text] = v
            return v
        if tok.kind == "int":
            return Int(int(tok.text))
        if tok.kind == "atom":
            if self._peek().kind == "(":
                self._next()
                args = [self.term()]
                while True:
                    sep = self._next()
                    if sep.kind == ",":
                        args.append(self.term())
                        continue
                    if sep.kind == ")":
                        break
                    raise ParseError(
                        f"expected ',' or ')' in argument list, found {_describe(sep)}",
                        sep.line, sep.col)
                return Struct(tok.text, tuple(args))
            return Atom(tok.text)
        if tok.kind == "[":
            return self._list()
        raise ParseError(f"expected a term, found {_describe(tok)}", tok.line, tok.col)

    def _list(self) -> Term:
        if self._peek().kind == "]":
            self._next()
            return NIL
        items = [self.term()]
        while self._peek().kind == ",":
            self._next()
            items.append(self.term())
        tail: Term = NIL
        if self._peek().kind == "|":
            self._next()
            tail = self.term()
        self._expect("]")
        return make_list(items, tail)


def parse_program(src: str) -> Program:
    p = _Parser(src)
    clauses: list[Clause] = []
    while not p.at_eof():
        clauses.append(p.clause())
    return Program(clauses)


def parse_query(src: str) -> Term:
    p = _Parser(src)
    tok = p._peek()
    t = p.term()
    if p._peek().kind == ".":
        p._next()
    end = p._peek()
    if end.kind != "eof":
        raise ParseError(f"unexpected input after query, found {_describe(end)}",
                         end.line, end.col)
    if isinstance(t, Var):
        raise ParseError("a query cannot be a bare variable", tok.line, tok.col)
    return t


def format_clause(c: Clause) -> str:
    naming = VarNaming()
    head = format_term(c.head, naming)
    if not c.body:
        return head + "."
    return head + " :- " + ", ".join(format_term(b, naming) for b in c.body) + "."


def format_program(p: Program) -> str:
    return "".join(format_clause(c) + "\n" for c in p.clauses)
