"""Structured AST serialization: field names and round-trips."""

import json

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from lamperm import (
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
    Lam,
    TyBound,
    Var,
    WITNESSES,
    alpha_eq,
    context_for,
    gen_typed_term,
)
from lamperm.ast_json import (
    AstJsonError,
    dump_program,
    load_program,
    program_from_json,
    program_to_json,
    term_from_json,
    term_to_json,
    type_from_json,
    type_to_json,
)


def test_field_names_are_stable():
    t = Case(Var("w"), "x", Bound(0), "y", Var("u"))
    doc = term_to_json(t)
    assert doc["node"] == "Case"
    assert set(doc) == {"node", "scrut", "xBinder", "leftBody",
                        "yBinder", "rightBody"}
    eps = term_to_json(Eps(Var("a"), Atom("q")))
    assert set(eps) == {"node", "t", "targetAnn"}
    forall = type_to_json(Forall("t", Arrow(TyBound(0), Bot())))
    assert set(forall) == {"node", "binder", "body"}
    assert forall["body"]["dom"] == {"node": "Atom", "name": "t"}


def test_bound_variables_become_named_on_export():
    doc = term_to_json(Lam("x", Atom("p"), Bound(0)))
    assert doc == {
        "node": "Lam", "var": "x",
        "ann": {"node": "Atom", "name": "p"},
        "body": {"node": "Var", "name": "x"},
    }
    assert term_from_json(doc) == Lam("x", Atom("p"), Bound(0))


def test_every_witness_round_trips():
    for w in WITNESSES:
        doc = term_to_json(w.term)
        back = term_from_json(doc)
        assert alpha_eq(back, w.term), w.rule.value


def test_program_round_trip_with_context():
    ctx = context_for(CalculusId.FFull)
    for w in WITNESSES:
        doc = program_to_json(ctx, w.term)
        ctx2, t2 = program_from_json(doc)
        assert ctx2 == ctx
        assert alpha_eq(t2, w.term)


def test_dump_and_load_are_inverse():
    ctx = Context(term_vars=(("u", Atom("p")),))
    text = dump_program(ctx, Var("u"))
    ctx2, t2 = load_program(text)
    assert (ctx2, t2) == (ctx, Var("u"))
    assert json.loads(text)["term"] == {"node": "Var", "name": "u"}


def test_malformed_documents_are_rejected():
    with pytest.raises(AstJsonError):
        load_program("{not json")
    with pytest.raises(AstJsonError):
        term_from_json({"node": "NoSuchNode"})
    with pytest.raises(AstJsonError):
        type_from_json({"node": "Arrow", "dom": {"node": "Bot"}})
    with pytest.raises(AstJsonError):
        program_from_json({"context": [{"var": ""}], "term": {"node": "Bot"}})


def test_unbound_names_in_documents_are_rejected():
    # a Var that refers to nothing is fine (free), but a dangling binder
    # reference inside a type must fail
    with pytest.raises(AstJsonError):
        type_from_json({"node": "Atom", "name": ""})


@given(st.integers(0, 2**16))
@settings(max_examples=50, deadline=None)
def test_generated_programs_round_trip(seed):
    ctx, t = gen_typed_term(GenConfig(calculus=CalculusId.FFull, seed=seed))
    text = dump_program(ctx, t)
    ctx2, t2 = load_program(text)
    assert ctx2 == ctx
    assert alpha_eq(t2, t)
