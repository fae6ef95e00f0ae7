"""Surface syntax: lexer, parser, and precedence-aware printer.

Types:   atoms are lowercase identifiers, `_|_` is the empty type,
         `/\\` binds tighter than `\\/` binds tighter than `->` (all
         right-associative), and `forall p. T` / `exists p. T` extend
         as far right as possible.
Terms:   `fn x : T => M`, juxtaposition application, `<M, N>`, postfix
         `.1` `.2` and `M [T]`, `inl M : T`, `inr M : T`,
         `case M of { x => S | y => T }`, `abort M : T`,
         `tfn p => M`, `pack <S, M> : T`, `unpack M as <p, x> in N`.
Files:   a sequence of `assume x : T ;` declarations followed by a term.
         `--` starts a line comment.

Printing opens every binder with a deterministic fresh name (the stored
hint, with the smallest numeric suffix avoiding capture), so
parse(print(t)) is alpha-equal to t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Type,
    Unpack, Var, free_vars, fresh_name, open_tm, open_ty, open_ty_tm,
    term_atoms, ty_atoms,
)
from .typecheck import Context


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


KEYWORDS = frozenset((
    "fn", "tfn", "case", "of", "inl", "inr", "abort", "pack", "unpack",
    "as", "in", "forall", "exists", "assume",
))

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+|--[^\n]*)
      | (?P<arrow>->)
      | (?P<darrow>=>)
      | (?P<tand>/\\)
      | (?P<tor>\\/)
      | (?P<bot>_\|_)
      | (?P<proj>\.[12](?![0-9A-Za-z_]))
      | (?P<ident>[a-z][0-9A-Za-z_]*)
      | (?P<sym>[()<>,\[\]:;|.{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, pos = 1, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup or "sym"
        if kind == "ident" and text in KEYWORDS:
            kind = "kw"
        if kind != "ws":
            toks.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _lex(src)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != "eof"

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            got = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", t.line, t.col)
        return self.next()

    def expect_ident(self, what: str) -> str:
        t = self.peek()
        if t.kind != "ident":
            got = t.text or "end of input"
            raise ParseError(f"expected {what}, found {got!r}", t.line, t.col)
        return self.next().text

    def expect_eof(self) -> None:
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected trailing input {t.text!r}", t.line, t.col)

    # -- types ------------------------------------------------------------

    def type_(self, tenv: list[str]) -> Type:
        left = self.or_type(tenv)
        if self.eat("->"):
            return Arrow(left, self.type_(tenv))
        return left

    def or_type(self, tenv: list[str]) -> Type:
        left = self.and_type(tenv)
        if self.eat("\\/"):
            return Or(left, self.or_type(tenv))
        return left

    def and_type(self, tenv: list[str]) -> Type:
        left = self.ty_atom(tenv)
        if self.eat("/\\"):
            return And(left, self.and_type(tenv))
        return left

    def ty_atom(self, tenv: list[str]) -> Type:
        t = self.peek()
        if t.kind == "bot":
            self.next()
            return Bot()
        if self.eat("("):
            ty = self.type_(tenv)
            self.expect(")")
            return ty
        if t.text in ("forall", "exists"):
            self.next()
            name = self.expect_ident("a type variable")
            self.expect(".")
            body = self.type_(tenv + [name])
            return (Forall if t.text == "forall" else Exists)(name, body)
        if t.kind == "ident":
            self.next()
            if t.text in tenv:
                return TyBound(len(tenv) - 1 - _rindex(tenv, t.text))
            return Atom(t.text)
        got = t.text or "end of input"
        raise ParseError(f"expected a type, found {got!r}", t.line, t.col)

    # -- terms ------------------------------------------------------------

    def term(self, env: list[str], tenv: list[str]) -> Term:
        t = self.peek()
        match t.text:
            case "fn":
                self.next()
                x = self.expect_ident("a variable")
                self.expect(":")
                ann = self.type_(tenv)
                self.expect("=>")
                return Lam(x, ann, self.term(env + [x], tenv))
            case "tfn":
                self.next()
                p = self.expect_ident("a type variable")
                self.expect("=>")
                return TyLam(p, self.term(env, tenv + [p]))
            case "inl" | "inr":
                self.next()
                body = self.app_term(env, tenv)
                self.expect(":")
                ann = self.type_(tenv)
                return (Inj1 if t.text == "inl" else Inj2)(body, ann)
            case "abort":
                self.next()
                body = self.app_term(env, tenv)
                self.expect(":")
                return Eps(body, self.type_(tenv))
            case "pack":
                self.next()
                self.expect("<")
                witness = self.type_(tenv)
                self.expect(",")
                body = self.term(env, tenv)
                self.expect(">")
                self.expect(":")
                return Pack(witness, body, self.type_(tenv))
            case "unpack":
                self.next()
                scrut = self.term(env, tenv)
                self.expect("as")
                self.expect("<")
                p = self.expect_ident("a type variable")
                self.expect(",")
                x = self.expect_ident("a variable")
                self.expect(">")
                self.expect("in")
                return Unpack(scrut, p, x, self.term(env + [x], tenv + [p]))
            case _:
                return self.app_term(env, tenv)

    def _starts_atom(self) -> bool:
        t = self.peek()
        return t.kind == "ident" or t.text in ("(", "<", "case")

    def app_term(self, env: list[str], tenv: list[str]) -> Term:
        f = self.post_term(env, tenv)
        while self._starts_atom():
            f = App(f, self.post_term(env, tenv))
        return f

    def post_term(self, env: list[str], tenv: list[str]) -> Term:
        a = self.atom(env, tenv)
        while True:
            t = self.peek()
            if t.kind == "proj":
                self.next()
                a = Proj1(a) if t.text == ".1" else Proj2(a)
            elif self.eat("["):
                a = TyApp(a, self.type_(tenv))
                self.expect("]")
            else:
                return a

    def atom(self, env: list[str], tenv: list[str]) -> Term:
        t = self.peek()
        if self.eat("("):
            m = self.term(env, tenv)
            self.expect(")")
            return m
        if self.eat("<"):
            left = self.term(env, tenv)
            self.expect(",")
            right = self.term(env, tenv)
            self.expect(">")
            return Pair(left, right)
        if t.text == "case":
            self.next()
            scrut = self.term(env, tenv)
            self.expect("of")
            self.expect("{")
            x = self.expect_ident("a variable")
            self.expect("=>")
            left = self.term(env + [x], tenv)
            self.expect("|")
            y = self.expect_ident("a variable")
            self.expect("=>")
            right = self.term(env + [y], tenv)
            self.expect("}")
            return Case(scrut, x, left, y, right)
        if t.kind == "ident":
            self.next()
            if t.text in env:
                return Bound(len(env) - 1 - _rindex(env, t.text))
            return Var(t.text)
        got = t.text or "end of input"
        raise ParseError(f"expected a term, found {got!r}", t.line, t.col)


def _rindex(xs: list[str], x: str) -> int:
    return len(xs) - 1 - xs[::-1].index(x)


def parse_type(src: str) -> Type:
    p = _Parser(src)
    ty = p.type_([])
    p.expect_eof()
    return ty


def parse_term(src: str) -> Term:
    p = _Parser(src)
    m = p.term([], [])
    p.expect_eof()
    return m


def parse_program(src: str) -> tuple[Context, Term]:
    """Parse `assume x : T ;` declarations followed by a term."""
    p = _Parser(src)
    ctx = Context()
    while p.at("assume"):
        p.next()
        name = p.expect_ident("a variable")
        p.expect(":")
        ty = p.type_([])
        p.expect(";")
        ctx = ctx.bind(name, ty)
    m = p.term([], [])
    p.expect_eof()
    return ctx, m


# ---------------------------------------------------------------------------
# Printing

_TY_ARROW, _TY_OR, _TY_AND, _TY_ATOM = 0, 1, 2, 3


def _ty(t: Type, prec: int) -> str:
    match t:
        case Atom(n):
            return n
        case Bot():
            return "_|_"
        case TyBound(i):
            return f"#{i}"  # dangling index; never produced by well-formed types
        case Arrow(d, c):
            s = f"{_ty(d, _TY_OR)} -> {_ty(c, _TY_ARROW)}"
            return f"({s})" if prec > _TY_ARROW else s
        case Or(l, r):
            s = f"{_ty(l, _TY_AND)} \\/ {_ty(r, _TY_OR)}"
            return f"({s})" if prec > _TY_OR else s
        case And(l, r):
            s = f"{_ty(l, _TY_ATOM)} /\\ {_ty(r, _TY_AND)}"
            return f"({s})" if prec > _TY_AND else s
        case Forall(h, b) | Exists(h, b):
            name = fresh_name(h or "p", ty_atoms(b))
            kw = "forall" if isinstance(t, Forall) else "exists"
            s = f"{kw} {name}. {_ty(open_ty(b, Atom(name)), _TY_ARROW)}"
            return f"({s})" if prec > _TY_ARROW else s
        case _:
            raise TypeError(f"not a type: {t!r}")


def print_type(t: Type) -> str:
    return _ty(t, _TY_ARROW)


_TM_LOW, _TM_APP, _TM_POST, _TM_ATOM = 0, 1, 2, 3


def _tm(t: Term, prec: int) -> str:
    match t:
        case Var(n):
            return n
        case Bound(i):
            return f"#{i}"  # dangling index; never produced by well-formed terms
        case Lam(h, ann, body):
            x = fresh_name(h or "x", free_vars(body))
            s = f"fn {x} : {print_type(ann)} => {_tm(open_tm(body, Var(x)), _TM_LOW)}"
            return f"({s})" if prec > _TM_LOW else s
        case TyLam(ph, body):
            a = fresh_name(ph or "p", term_atoms(body))
            s = f"tfn {a} => {_tm(open_ty_tm(body, Atom(a)), _TM_LOW)}"
            return f"({s})" if prec > _TM_LOW else s
        case App(f, a):
            s = f"{_tm(f, _TM_APP)} {_tm(a, _TM_POST)}"
            return f"({s})" if prec > _TM_APP else s
        case Pair(l, r):
            return f"<{_tm(l, _TM_LOW)}, {_tm(r, _TM_LOW)}>"
        case Proj1(m):
            return f"{_tm(m, _TM_POST)}.1"
        case Proj2(m):
            return f"{_tm(m, _TM_POST)}.2"
        case TyApp(m, ty):
            s = f"{_tm(m, _TM_POST)} [{print_type(ty)}]"
            return f"({s})" if prec > _TM_POST else s
        case Inj1(m, ann):
            s = f"inl {_tm(m, _TM_APP)} : {print_type(ann)}"
            return f"({s})" if prec > _TM_LOW else s
        case Inj2(m, ann):
            s = f"inr {_tm(m, _TM_APP)} : {print_type(ann)}"
            return f"({s})" if prec > _TM_LOW else s
        case Eps(m, ann):
            s = f"abort {_tm(m, _TM_APP)} : {print_type(ann)}"
            return f"({s})" if prec > _TM_LOW else s
        case Case(w, xh, l, yh, r):
            x = fresh_name(xh or "x", free_vars(l))
            y = fresh_name(yh or "y", free_vars(r))
            return (f"case {_tm(w, _TM_LOW)} of {{ {x} => {_tm(open_tm(l, Var(x)), _TM_LOW)}"
                    f" | {y} => {_tm(open_tm(r, Var(y)), _TM_LOW)} }}")
        case Pack(w, m, ann):
            s = f"pack <{print_type(w)}, {_tm(m, _TM_LOW)}> : {print_type(ann)}"
            return f"({s})" if prec > _TM_LOW else s
        case Unpack(w, ph, xh, body):
            a = fresh_name(ph or "p", term_atoms(body))
            x = fresh_name(xh or "x", free_vars(body))
            opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
            s = f"unpack {_tm(w, _TM_LOW)} as <{a}, {x}> in {_tm(opened, _TM_LOW)}"
            return f"({s})" if prec > _TM_LOW else s
        case _:
            raise TypeError(f"not a term: {t!r}")


def print_term(t: Term) -> str:
    return _tm(t, _TM_LOW)


def print_context(ctx: Context) -> str:
    return "".join(f"assume {n} : {print_type(ty)} ;\n" for n, ty in ctx.term_vars)


def print_program(ctx: Context, t: Term) -> str:
    return print_context(ctx) + print_term(t) + "\n"
