"""The implicational translation: type goldens, soundness, and simulation.

The simulation check is known to be partial: absorbing an eliminator into an
abort node can leave the translated term unchanged (or even run backwards),
so those steps cannot be matched by a forward beta-eta reduction.  The tests
below pin down exactly which rules survive and which do not.
"""

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
    GenConfig,
    Inj1,
    Lam,
    NotSimplyTyped,
    NotTargetType,
    Or,
    Pair,
    Proj1,
    RuleId,
    TyLam,
    TyBound,
    Var,
    WITNESSES,
    alpha_eq,
    check_simulation_simple,
    context_for,
    gen_typed_term,
    in_fragment,
    infer,
    redexes,
    spine,
    tr_ctx,
    tr_term,
    tr_type,
)
from lamperm.simple_translation import eta_successors
from lamperm.surface import parse_type, print_type

P = Atom("p")
Q = Atom("q")
B = Bot()
LCTX = context_for(CalculusId.LambdaFull)


def root_step(t):
    (s,) = [s for s in redexes(t) if s.path == ()]
    return s


def test_type_translation_goldens():
    assert tr_type(P) == B
    assert tr_type(B) == B
    assert tr_type(Arrow(P, Q)) == Arrow(B, B)
    assert tr_type(And(P, Q)) == Arrow(Arrow(B, Arrow(B, B)), B)
    assert tr_type(Or(P, Q)) == Arrow(Arrow(B, B), Arrow(Arrow(B, B), B))


def test_type_translation_example():
    got = tr_type(parse_type("p -> q -> p /\\ q"))
    assert got == parse_type("_|_ -> _|_ -> (_|_ -> _|_ -> _|_) -> _|_")
    assert print_type(got) == "_|_ -> _|_ -> (_|_ -> _|_ -> _|_) -> _|_"


def test_spine_unfolds_arrows_down_to_bottom():
    assert spine(B) == ()
    assert spine(Arrow(B, B)) == (B,)
    assert spine(tr_type(And(P, Q))) == (Arrow(B, Arrow(B, B)),)
    with pytest.raises(NotTargetType):
        spine(Arrow(B, P))


def test_variables_translate_to_themselves():
    assert tr_term(LCTX, Var("u")) == Var("u")


def test_pair_translation_shape():
    got = tr_term(LCTX, Pair(Var("u"), Var("v")))
    want = Lam("z", Arrow(B, Arrow(B, B)),
               App(App(Bound(0), Var("u")), Var("v")))
    assert got == want


def test_translation_rejects_polymorphism():
    poly = TyLam("t", Lam("x", TyBound(0), Bound(0)))
    with pytest.raises(NotSimplyTyped):
        tr_term(Context(), poly)


def test_translation_is_sound_on_the_witnesses():
    for w in WITNESSES:
        if w.calculus != CalculusId.LambdaFull:
            continue
        ctx = context_for(w.calculus)
        image = tr_term(ctx, w.term)
        assert infer(tr_ctx(ctx), image) == tr_type(infer(ctx, w.term))
        assert in_fragment(image, CalculusId.LambdaArrow)


def test_eta_contracts_only_fresh_wrappers():
    t = Lam("x", B, App(Var("f"), Bound(0)))
    assert ((), Var("f")) in eta_successors(t)
    self_apply = Lam("x", Arrow(B, B), App(Bound(0), Bound(0)))
    assert eta_successors(self_apply) == []


SIMULATED = [
    RuleId.B_ARROW, RuleId.B_PI1, RuleId.B_PI2,
    RuleId.B_CASE_INL, RuleId.B_CASE_INR,
    RuleId.C_EPS_APP, RuleId.C_EPS_PI1, RuleId.C_EPS_PI2, RuleId.C_EPS_CASE,
    RuleId.C_CASE_APP, RuleId.C_CASE_PI1, RuleId.C_CASE_PI2,
    RuleId.C_CASE_CASE,
]

NOT_SIMULATED = [RuleId.C_EPS_EPS, RuleId.C_CASE_EPS]


def test_simulation_holds_for_the_simulated_rules():
    by_rule = {w.rule: w for w in WITNESSES}
    for rule in SIMULATED:
        w = by_rule[rule]
        assert w.calculus == CalculusId.LambdaFull
        assert check_simulation_simple(LCTX, w.term, root_step(w.term)), rule.value


def test_absorbing_into_abort_is_not_simulated():
    by_rule = {w.rule: w for w in WITNESSES}
    for rule in NOT_SIMULATED:
        w = by_rule[rule]
        assert not check_simulation_simple(LCTX, w.term, root_step(w.term)), rule.value


def test_eps_eps_witness_translates_to_identical_images():
    w = {x.rule: x for x in WITNESSES}[RuleId.C_EPS_EPS]
    s = root_step(w.term)
    from lamperm.reduction import contract
    after = contract(LCTX, w.term, s.rule)
    assert alpha_eq(tr_term(LCTX, w.term), tr_term(LCTX, after))


def test_case_proj_fails_once_the_component_type_is_an_arrow():
    # atomic component: fine (this is the witness); arrow component: no match
    t = Proj1(Case(Var("w"),
                   "x", Pair(Var("f"), Var("v")),
                   "y", Pair(Var("f"), Var("v"))))
    assert infer(LCTX, t) == Arrow(P, Q)
    assert root_step(t).rule == RuleId.C_CASE_PI1
    assert not check_simulation_simple(LCTX, t, root_step(t))


def test_case_case_fails_once_the_branch_type_is_an_arrow():
    inner = Case(Var("w"), "x", Var("w"), "y", Var("w"))
    t = Case(inner, "x", Var("f"), "y", Var("f"))
    assert infer(LCTX, t) == Arrow(P, Q)
    assert root_step(t).rule == RuleId.C_CASE_CASE
    assert not check_simulation_simple(LCTX, t, root_step(t))


def test_case_eps_fails_at_arrow_targets_too():
    t = Eps(Case(Var("w"), "x", Var("a"), "y", Var("a")), Arrow(P, Q))
    assert root_step(t).rule == RuleId.C_CASE_EPS
    assert not check_simulation_simple(LCTX, t, root_step(t))


def test_translation_is_sound_on_generated_terms():
    for seed in range(40):
        ctx, t = gen_typed_term(GenConfig(calculus=CalculusId.LambdaFull,
                                          seed=seed))
        image = tr_term(ctx, t)
        assert infer(tr_ctx(ctx), image) == tr_type(infer(ctx, t))
        assert in_fragment(image, CalculusId.LambdaArrow)
