"""Concrete syntax: parser goldens, printer output, and round-trips."""

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from lamperm import (
    And,
    App,
    Arrow,
    Atom,
    Bot,
    Bound,
    CalculusId,
    Case,
    Context,
    Eps,
    Exists,
    Forall,
    GenConfig,
    Inj1,
    Lam,
    Or,
    Pack,
    Pair,
    Proj1,
    Proj2,
    TyApp,
    TyBound,
    TyLam,
    Unpack,
    Var,
    alpha_eq,
    gen_typed_term,
)
from lamperm.surface import (
    ParseError,
    parse_program,
    parse_term,
    parse_type,
    print_program,
    print_term,
    print_type,
)

P = Atom("p")
Q = Atom("q")
R = Atom("r")


def test_arrow_is_right_associative():
    assert parse_type("p -> q -> r") == Arrow(P, Arrow(Q, R))
    assert parse_type("(p -> q) -> r") == Arrow(Arrow(P, Q), R)


def test_connective_precedence():
    # /\ binds tighter than \/ which binds tighter than ->
    assert parse_type("p /\\ q \\/ r") == Or(And(P, Q), R)
    assert parse_type("p \\/ q -> r") == Arrow(Or(P, Q), R)
    assert parse_type("_|_ -> p") == Arrow(Bot(), P)


def test_quantified_types():
    assert parse_type("forall t. t -> t") == Forall("t", Arrow(TyBound(0), TyBound(0)))
    assert parse_type("exists t. t /\\ p") == Exists("t", And(TyBound(0), P))


def test_term_goldens():
    assert parse_term("fn x : p => x") == Lam("x", P, Bound(0))
    assert parse_term("f u v") == App(App(Var("f"), Var("u")), Var("v"))
    assert parse_term("<u, v>") == Pair(Var("u"), Var("v"))
    assert parse_term("c.1") == Proj1(Var("c"))
    assert parse_term("c.2") == Proj2(Var("c"))
    assert parse_term("inl u : p \\/ q") == Inj1(Var("u"), Or(P, Q))
    assert parse_term("case w of { x => x | y => u }") == Case(
        Var("w"), "x", Bound(0), "y", Var("u"))
    assert parse_term("abort a : q") == Eps(Var("a"), Q)
    assert parse_term("tfn t => fn x : t => x") == TyLam(
        "t", Lam("x", TyBound(0), Bound(0)))
    assert parse_term("g [p]") == TyApp(Var("g"), P)
    assert parse_term("pack <p, u> : exists t. t") == Pack(
        P, Var("u"), Exists("t", TyBound(0)))
    assert parse_term("unpack e as <t, x> in u") == Unpack(
        Var("e"), "t", "x", Var("u"))


def test_comments_and_whitespace_are_skipped():
    src = """
    -- the constant function
    fn x : p =>   -- takes x
      u
    """
    assert parse_term(src) == Lam("x", P, Var("u"))


def test_programs_carry_assumptions():
    ctx, t = parse_program("assume u : p ; assume f : p -> q ; f u")
    assert ctx == Context(term_vars=(("u", P), ("f", Arrow(P, Q))))
    assert t == App(Var("f"), Var("u"))


def test_parse_errors_are_reported():
    with pytest.raises(ParseError):
        parse_term("fn x : p =>")
    with pytest.raises(ParseError):
        parse_type("p ->")
    with pytest.raises(ParseError):
        parse_term("case w of { x => x }")


def test_printer_parenthesizes_applications():
    t = App(Var("f"), App(Var("g"), Var("u")))
    assert parse_term(print_term(t)) == t
    nested = Lam("x", P, App(Bound(0), Var("u")))
    assert parse_term(print_term(nested)) == nested


def test_shadowed_binders_print_distinctly():
    t = Lam("x", P, Lam("x", Q, Pair(Bound(0), Bound(1))))
    printed = print_term(t)
    assert alpha_eq(parse_term(printed), t)


@given(st.integers(0, 2**16))
@settings(max_examples=60, deadline=None)
def test_program_roundtrip_lambda(seed):
    ctx, t = gen_typed_term(GenConfig(calculus=CalculusId.LambdaFull, seed=seed))
    ctx2, t2 = parse_program(print_program(ctx, t))
    assert ctx2 == ctx
    assert alpha_eq(t2, t)


@given(st.integers(0, 2**16))
@settings(max_examples=60, deadline=None)
def test_program_roundtrip_system_f(seed):
    ctx, t = gen_typed_term(GenConfig(calculus=CalculusId.FFull, seed=seed))
    ctx2, t2 = parse_program(print_program(ctx, t))
    assert ctx2 == ctx
    assert alpha_eq(t2, t)


@given(st.integers(0, 2**16))
@settings(max_examples=60, deadline=None)
def test_type_roundtrip(seed):
    from lamperm.generate import gen_type
    import random
    cfg = GenConfig(calculus=CalculusId.FFull, seed=seed)
    ty = gen_type(cfg, random.Random(seed), fuel=6)
    assert parse_type(print_type(ty)) == ty
