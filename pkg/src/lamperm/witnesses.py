"""One minimal witness term per reduction rule.

Every witness is well typed under a small shared context, contains
exactly one redex, and that redex sits at the root and matches exactly
the rule the witness is named after.  The quantifier-free witnesses
also serve as inputs to the simply typed translation checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import RuleId
from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Unpack,
    Var,
)
from .typecheck import CalculusId, Context

_P = Atom("p")
_Q = Atom("q")
_PQ = Or(_P, _Q)
_ALL_T = Forall("t", TyBound(0))
_SOME_T = Exists("t", TyBound(0))

LAMBDA_CONTEXT = Context((
    ("a", Bot()),
    ("u", _P),
    ("v", _Q),
    ("w", _PQ),
    ("c", And(_P, _Q)),
    ("f", Arrow(_P, _Q)),
))

F_CONTEXT = Context(LAMBDA_CONTEXT.term_vars + (
    ("g", _ALL_T),
    ("h", _SOME_T),
))


@dataclass(frozen=True)
class Witness:
    rule: RuleId
    term: Term
    calculus: CalculusId


def _lam_witness(rule: RuleId, term: Term) -> Witness:
    return Witness(rule, term, CalculusId.LambdaFull)


def _f_witness(rule: RuleId, term: Term) -> Witness:
    return Witness(rule, term, CalculusId.FFull)


_a, _u, _v, _w, _c, _f = (Var(n) for n in "auvwcf")
_g, _h = Var("g"), Var("h")

WITNESSES: tuple[Witness, ...] = (
    _lam_witness(RuleId.B_ARROW, App(Lam("x", _P, Bound(0)), _u)),
    _lam_witness(RuleId.B_PI1, Proj1(Pair(_u, _v))),
    _lam_witness(RuleId.B_PI2, Proj2(Pair(_u, _v))),
    _lam_witness(RuleId.B_CASE_INL,
                 Case(Inj1(_u, _PQ), "x", Bound(0), "y", _u)),
    _lam_witness(RuleId.B_CASE_INR,
                 Case(Inj2(_v, _PQ), "x", _v, "y", Bound(0))),
    _f_witness(RuleId.B_UNPACK,
               Unpack(Pack(_P, _u, _SOME_T), "t", "x", _u)),
    _f_witness(RuleId.B_TYAPP, TyApp(TyLam("t", _u), _P)),
    _lam_witness(RuleId.C_EPS_APP, App(Eps(_a, Arrow(_P, _Q)), _u)),
    _lam_witness(RuleId.C_EPS_PI1, Proj1(Eps(_a, And(_P, _Q)))),
    _lam_witness(RuleId.C_EPS_PI2, Proj2(Eps(_a, And(_P, _Q)))),
    _lam_witness(RuleId.C_EPS_CASE,
                 Case(Eps(_a, _PQ), "x", Bound(0), "y", _u)),
    _lam_witness(RuleId.C_EPS_EPS, Eps(Eps(_a, Bot()), _P)),
    _f_witness(RuleId.C_EPS_TYAPP, TyApp(Eps(_a, _ALL_T), _P)),
    _f_witness(RuleId.C_EPS_UNPACK,
               Unpack(Eps(_a, _SOME_T), "t", "x", _u)),
    _lam_witness(RuleId.C_CASE_APP, App(Case(_w, "x", _f, "y", _f), _u)),
    _lam_witness(RuleId.C_CASE_PI1, Proj1(Case(_w, "x", _c, "y", _c))),
    _lam_witness(RuleId.C_CASE_PI2, Proj2(Case(_w, "x", _c, "y", _c))),
    _lam_witness(RuleId.C_CASE_CASE,
                 Case(Case(_w, "x", _w, "y", _w), "x2", _u, "y2", _u)),
    _lam_witness(RuleId.C_CASE_EPS, Eps(Case(_w, "x", _a, "y", _a), _Q)),
    _f_witness(RuleId.C_CASE_TYAPP, TyApp(Case(_w, "x", _g, "y", _g), _P)),
    _f_witness(RuleId.C_CASE_UNPACK,
               Unpack(Case(_w, "x", _h, "y", _h), "t", "z", _u)),
    _f_witness(RuleId.C_UNPACK_APP,
               App(Unpack(_h, "t", "x", _f), _u)),
    _f_witness(RuleId.C_UNPACK_PI1, Proj1(Unpack(_h, "t", "x", _c))),
    _f_witness(RuleId.C_UNPACK_PI2, Proj2(Unpack(_h, "t", "x", _c))),
    _f_witness(RuleId.C_UNPACK_CASE,
               Case(Unpack(_h, "t", "x", _w), "x2", _u, "y2", _u)),
    _f_witness(RuleId.C_UNPACK_EPS, Eps(Unpack(_h, "t", "x", _a), _P)),
    _f_witness(RuleId.C_UNPACK_TYAPP,
               TyApp(Unpack(_h, "t", "x", _g), _Q)),
    _f_witness(RuleId.C_UNPACK_UNPACK,
               Unpack(Unpack(_h, "t", "x", _h), "s", "z", _u)),
)


def witnesses(calculus: CalculusId | None = None) -> tuple[Witness, ...]:
    if calculus is None:
        return WITNESSES
    return tuple(w for w in WITNESSES if w.calculus == calculus)


def context_for(calculus: CalculusId) -> Context:
    if calculus == CalculusId.LambdaFull:
        return LAMBDA_CONTEXT
    return F_CONTEXT
