"""The typed-term generator: determinism, typing, size, and rule coverage."""

import random
from collections import Counter

import pytest

from lamperm import (
    CalculusId,
    GenConfig,
    RuleId,
    Strategy,
    gen_typed_term,
    in_fragment,
    infer,
    normalize,
    size,
)
from lamperm.generate import GenerationStuck, gen_type, _Gen
from lamperm.syntax import well_formed_type

LAMBDA_RULES = {r for r in RuleId
                if "TYAPP" not in r.name and "UNPACK" not in r.name
                and "TYLAM" not in r.name}


def test_generation_is_deterministic():
    cfg = GenConfig(calculus=CalculusId.FFull, seed=5)
    assert gen_typed_term(cfg) == gen_typed_term(cfg)


def test_different_seeds_give_different_terms():
    outs = {gen_typed_term(GenConfig(seed=s))[1] for s in range(20)}
    assert len(outs) > 10


def test_generated_terms_are_well_typed_and_sized():
    for calc in (CalculusId.LambdaFull, CalculusId.FFull):
        for seed in range(80):
            cfg = GenConfig(calculus=calc, seed=seed)
            ctx, t = gen_typed_term(cfg)
            assert size(t) <= cfg.max_size
            assert in_fragment(t, calc)
            infer(ctx, t)  # must not raise


def test_generated_types_are_well_formed():
    cfg = GenConfig(calculus=CalculusId.FFull, seed=0)
    for seed in range(60):
        ty = gen_type(cfg, random.Random(seed), fuel=6)
        assert well_formed_type(ty)


def test_lambda_terms_avoid_polymorphism():
    for seed in range(60):
        cfg = GenConfig(calculus=CalculusId.LambdaFull, seed=seed)
        _, t = gen_typed_term(cfg)
        assert in_fragment(t, CalculusId.LambdaFull)


def test_rule_coverage_over_two_hundred_seeds():
    for calc, want in ((CalculusId.LambdaFull, LAMBDA_RULES),
                       (CalculusId.FFull, set(RuleId))):
        seen = Counter()
        for seed in range(200):
            ctx, t = gen_typed_term(GenConfig(calculus=calc, seed=seed))
            _, trace = normalize(t, Strategy.LeftmostOutermost, ctx=ctx)
            for s in trace:
                seen[s.rule] += 1
        assert want <= set(seen), sorted(r.value for r in want - set(seen))


def test_generator_reports_being_stuck():
    # with no fuel and an empty context there is nothing of type p to build
    from lamperm import Atom, Context
    cfg = GenConfig(calculus=CalculusId.LambdaFull, seed=0)
    gen = _Gen(cfg, random.Random(0))
    with pytest.raises(GenerationStuck):
        gen.term(Context(), Atom("p"), 1)


def test_tiny_budgets_still_succeed():
    for seed in range(30):
        cfg = GenConfig(calculus=CalculusId.FFull, max_size=8, seed=seed)
        ctx, t = gen_typed_term(cfg)
        assert size(t) <= 8
        infer(ctx, t)
