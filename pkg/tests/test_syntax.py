"""Binding, substitution, and alpha-equivalence basics."""

from hypothesis import given, settings
from hypothesis import strategies as st

from lamperm import (
    App,
    Arrow,
    Atom,
    Bot,
    Bound,
    CalculusId,
    Case,
    Forall,
    GenConfig,
    Inj1,
    Lam,
    Or,
    Pair,
    TyBound,
    Var,
    alpha_eq,
    free_vars,
    gen_typed_term,
    size,
)
from lamperm.syntax import (
    close_tm,
    close_ty,
    fresh_name,
    open_tm,
    open_ty,
    quantifier_free,
    subst_term,
    subst_type,
    ty_atoms,
    well_formed_type,
)

P = Atom("p")
Q = Atom("q")


def test_fresh_name_prefers_the_base():
    assert fresh_name("x", frozenset()) == "x"
    assert fresh_name("x", {"y", "z"}) == "x"


def test_fresh_name_walks_past_collisions():
    assert fresh_name("x", {"x"}) == "x1"
    assert fresh_name("x", {"x", "x1"}) == "x2"


def test_equality_ignores_binder_hints():
    f = Lam("x", P, Bound(0))
    g = Lam("y", P, Bound(0))
    assert f == g
    assert alpha_eq(f, g)
    assert hash(f) == hash(g)


def test_alpha_eq_still_sees_annotations_and_structure():
    assert not alpha_eq(Lam("x", P, Bound(0)), Lam("x", Q, Bound(0)))
    assert not alpha_eq(Var("x"), Var("y"))
    assert not alpha_eq(Pair(Var("u"), Var("v")), Pair(Var("v"), Var("u")))


def test_open_close_term_roundtrip():
    body = App(Bound(0), Var("u"))
    opened = open_tm(body, Var("z"))
    assert opened == App(Var("z"), Var("u"))
    assert close_tm(opened, "z") == body


def test_close_leaves_other_names_alone():
    t = App(Var("u"), Var("v"))
    assert close_tm(t, "w") == t


def test_substitution_cannot_capture():
    # substituting y into the body of a binder named y must leave it free
    shadow = Lam("y", P, Var("x"))
    out = subst_term(shadow, "x", Var("y"))
    assert out == Lam("y", P, Var("y"))
    assert "y" in free_vars(out)


def test_subst_on_a_non_free_name_is_identity():
    t = Lam("x", P, App(Bound(0), Var("u")))
    assert subst_term(t, "z", Var("v")) == t


def test_free_vars_sees_through_binders():
    t = Case(
        Inj1(Var("u"), Or(P, Q)),
        "x", App(Var("f"), Bound(0)),
        "y", Var("v"),
    )
    assert free_vars(t) == {"u", "f", "v"}


def test_size_counts_nodes():
    assert size(Var("x")) == 1
    assert size(Pair(Var("u"), Var("v"))) == 3
    assert size(Lam("x", P, Bound(0))) == 2


def test_type_open_close_roundtrip():
    body = Arrow(TyBound(0), Atom("q"))
    opened = open_ty(body, Atom("t"))
    assert opened == Arrow(Atom("t"), Atom("q"))
    assert close_ty(opened, "t") == body


def test_subst_type_reaches_under_quantifiers():
    t = Forall("s", Arrow(TyBound(0), P))
    assert subst_type(t, "p", Q) == Forall("s", Arrow(TyBound(0), Q))


def test_ty_atoms_and_quantifier_free():
    t = Forall("s", Arrow(TyBound(0), Arrow(P, Q)))
    assert ty_atoms(t) == {"p", "q"}
    assert not quantifier_free(t)
    assert quantifier_free(Arrow(P, Or(Q, Bot())))


def test_well_formed_type_rejects_dangling_bound():
    assert well_formed_type(Forall("s", TyBound(0)))
    assert not well_formed_type(TyBound(0))
    assert not well_formed_type(Forall("s", TyBound(1)))


@given(st.integers(0, 2**16))
@settings(max_examples=40, deadline=None)
def test_generated_terms_are_locally_closed(seed):
    _, t = gen_typed_term(GenConfig(calculus=CalculusId.FFull, seed=seed))
    w = fresh_name("w", free_vars(t))
    assert close_tm(t, w) == t
    assert alpha_eq(t, t)


@given(st.integers(0, 2**16))
@settings(max_examples=40, deadline=None)
def test_close_then_open_restores_every_free_var(seed):
    _, t = gen_typed_term(GenConfig(calculus=CalculusId.FFull, seed=seed))
    for x in sorted(free_vars(t)):
        assert open_tm(close_tm(t, x), Var(x)) == t
