"""Type synthesis goldens, error paths, and fragment membership."""

import pytest

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
    ExistentialEscape,
    Exists,
    Forall,
    IllFormedAnnotation,
    Inj1,
    Inj2,
    Lam,
    Or,
    Pack,
    Pair,
    Proj1,
    Proj2,
    TyApp,
    TyBound,
    TyLam,
    TypeInferenceError,
    TypeMismatch,
    UnboundVariable,
    Unpack,
    Var,
    in_fragment,
    infer,
)

P = Atom("p")
Q = Atom("q")
EMPTY = Context()
CTX = Context(term_vars=(("u", P), ("v", Q), ("b", Bot()), ("w", Or(P, Q))))


def test_identity_function():
    assert infer(EMPTY, Lam("x", P, Bound(0))) == Arrow(P, P)


def test_application_and_pairing():
    f = Lam("x", P, Pair(Bound(0), Var("v")))
    assert infer(CTX, App(f, Var("u"))) == And(P, Q)
    assert infer(CTX, Proj1(Pair(Var("u"), Var("v")))) == P
    assert infer(CTX, Proj2(Pair(Var("u"), Var("v")))) == Q


def test_sums_need_their_annotation():
    t = Inj1(Var("u"), Or(P, Q))
    assert infer(CTX, t) == Or(P, Q)
    assert infer(CTX, Inj2(Var("v"), Or(P, Q))) == Or(P, Q)
    with pytest.raises(TypeMismatch):
        infer(CTX, Inj1(Var("v"), Or(P, Q)))  # v : q is not the left summand
    with pytest.raises(IllFormedAnnotation):
        infer(CTX, Inj1(Var("u"), P))  # annotation is not a sum at all


def test_case_branches_must_agree():
    good = Case(Var("w"), "x", Var("v"), "y", Var("v"))
    assert infer(CTX, good) == Q
    bad = Case(Var("w"), "x", Bound(0), "y", Bound(0))
    with pytest.raises(TypeMismatch):
        infer(CTX, bad)  # branches give p and q


def test_case_scrutinee_must_be_a_sum():
    with pytest.raises(TypeMismatch):
        infer(CTX, Case(Var("u"), "x", Bound(0), "y", Bound(0)))


def test_ex_falso():
    assert infer(CTX, Eps(Var("b"), Q)) == Q
    with pytest.raises(TypeMismatch):
        infer(CTX, Eps(Var("u"), Q))  # u : p is not absurd


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        infer(EMPTY, Var("nope"))


def test_dangling_bound_index_is_rejected():
    with pytest.raises(TypeInferenceError):
        infer(EMPTY, Bound(0))


def test_ill_formed_annotation():
    with pytest.raises(IllFormedAnnotation):
        infer(EMPTY, Lam("x", TyBound(0), Bound(0)))


def test_polymorphic_identity():
    poly_id = TyLam("t", Lam("x", TyBound(0), Bound(0)))
    assert infer(EMPTY, poly_id) == Forall("t", Arrow(TyBound(0), TyBound(0)))
    assert infer(EMPTY, TyApp(poly_id, P)) == Arrow(P, P)


def test_type_application_needs_a_forall():
    with pytest.raises(TypeMismatch):
        infer(CTX, TyApp(Var("u"), P))


def test_pack_and_unpack():
    ex = Exists("t", TyBound(0))
    packed = Pack(P, Var("u"), ex)
    assert infer(CTX, packed) == ex
    # unpack, using the package at its abstract type
    t = Unpack(packed, "t", "x", Var("v"))
    assert infer(CTX, t) == Q


def test_unpack_must_not_leak_its_type_variable():
    ex = Exists("t", TyBound(0))
    packed = Pack(P, Var("u"), ex)
    leak = Unpack(packed, "t", "x", Bound(0))  # body has the abstract type
    with pytest.raises(ExistentialEscape):
        infer(CTX, leak)


def test_fragment_membership():
    lam_term = Case(Var("w"), "x", Bound(0), "y", Eps(Var("b"), P))
    assert in_fragment(lam_term, CalculusId.LambdaFull)
    assert in_fragment(lam_term, CalculusId.FFull)
    assert not in_fragment(lam_term, CalculusId.LambdaArrow)

    arrow_term = Lam("x", Bot(), Bound(0))
    assert in_fragment(arrow_term, CalculusId.LambdaArrow)

    poly = TyLam("t", Lam("x", TyBound(0), Bound(0)))
    assert in_fragment(poly, CalculusId.FFull)
    assert in_fragment(poly, CalculusId.FArrow)
    assert not in_fragment(poly, CalculusId.LambdaFull)


def test_arrow_fragment_admits_only_bot_atoms():
    # the lambda-arrow fragment is arrows over the sole atom bottom
    t = Lam("x", Arrow(Bot(), Bot()), Bound(0))
    assert in_fragment(t, CalculusId.LambdaArrow)
    assert not in_fragment(Lam("x", P, Bound(0)), CalculusId.LambdaArrow)
