"""Kernel, reducer, and verified double-negation translations.

Full simply typed lambda calculus (arrows, pairs, sums, absurdity) and
its polymorphic extension (universals, existentials), with a permutative
reduction relation, an exact termination measure for the commutative
fragment, and two checked translations into smaller fragments.
"""

from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Type,
    Unpack, Var, alpha_eq, free_vars, open_tm, open_ty, open_ty_tm, size,
    subst_term, subst_type, subst_type_in_term,
)
from .typecheck import (
    CalculusId, Context, ExistentialEscape, IllFormedAnnotation,
    TypeInferenceError, TypeMismatch, UnboundVariable, in_fragment, infer,
)
from .reduction import (
    FuelExhausted, InvalidStep, ReductionStep, RuleId, Strategy, contract,
    match_rule, normalize, redexes, step,
)
from .measure import DecreaseResult, NotCommutative, check_decrease, chi
from .search import DepthCapExceeded
from .simple_translation import (
    NotSimplyTyped, NotTargetType, check_simulation_simple, spine, tr_ctx,
    tr_term, tr_type,
)
from .cps_translation import (
    check_cps_commutative, check_simulation_cps_beta,
    check_substitution_lemmas, diamond, star_type, substitution_lemma_results,
    trf_ctx, trf_term, trf_type,
)
from .generate import GenConfig, GenerationStuck, gen_typed_term
from .suite import ALL_CHECKS, SuiteReport, run_suite
from .witnesses import WITNESSES, Witness, context_for, witnesses

__all__ = [name for name in dir() if not name.startswith("_")]
