"""Reduction: beta rules, commutative (permutative) rules, and strategies.

Every reducible node decomposes as `head E` for an eliminator E.  Beta
rules fire when the head is the matching introduction form; commutative
rules fire when the head is itself a case, an unpack, or an ex falso,
and push E past it.  The commutative contracta are written twice: once
as an explicit per-rule catalog (`step`), once as three generic
push/absorb patterns (`commute_generic`); the two are cross-checked in
the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import (
    And, App, Arg, Arrow, Atom, Bot, Bound, Branches, Case, Eliminator, Eps,
    Epsilon, Exists, Forall, Inj1, Inj2, Lam, Or, Pack, Pair, Pi1, Pi2, Proj1,
    Proj2, Term, TyApp, TyArg, TyLam, Type, Unpack, UnpackBranch, Var,
    apply_eliminator, decompose_eliminator, free_vars, fresh_name, open_tm,
    open_ty, open_ty_tm, close_tm, close_ty_tm, subst_term, term_atoms,
    ty_atoms,
)
from .typecheck import Context, TypeInferenceError, infer

Path = tuple[int, ...]


class RuleId(Enum):
    B_ARROW = "B-ARROW"
    B_PI1 = "B-PI1"
    B_PI2 = "B-PI2"
    B_CASE_INL = "B-CASE-INL"
    B_CASE_INR = "B-CASE-INR"
    B_UNPACK = "B-UNPACK"
    B_TYAPP = "B-TYAPP"
    C_EPS_APP = "C-EPS-APP"
    C_EPS_PI1 = "C-EPS-PI1"
    C_EPS_PI2 = "C-EPS-PI2"
    C_EPS_CASE = "C-EPS-CASE"
    C_EPS_EPS = "C-EPS-EPS"
    C_CASE_APP = "C-CASE-APP"
    C_CASE_PI1 = "C-CASE-PI1"
    C_CASE_PI2 = "C-CASE-PI2"
    C_CASE_CASE = "C-CASE-CASE"
    C_CASE_EPS = "C-CASE-EPS"
    C_CASE_TYAPP = "C-CASE-TYAPP"
    C_EPS_TYAPP = "C-EPS-TYAPP"
    C_UNPACK_TYAPP = "C-UNPACK-TYAPP"
    C_CASE_UNPACK = "C-CASE-UNPACK"
    C_EPS_UNPACK = "C-EPS-UNPACK"
    C_UNPACK_UNPACK = "C-UNPACK-UNPACK"
    C_UNPACK_APP = "C-UNPACK-APP"
    C_UNPACK_PI1 = "C-UNPACK-PI1"
    C_UNPACK_PI2 = "C-UNPACK-PI2"
    C_UNPACK_CASE = "C-UNPACK-CASE"
    C_UNPACK_EPS = "C-UNPACK-EPS"


BETA_RULES = frozenset(r for r in RuleId if r.value.startswith("B-"))
COMMUTATIVE_RULES = frozenset(r for r in RuleId if r.value.startswith("C-"))


def is_commutative(rule: RuleId) -> bool:
    return rule in COMMUTATIVE_RULES


@dataclass(frozen=True)
class ReductionStep:
    """A redex position (child-index path from the root) and its rule."""

    path: Path
    rule: RuleId


class InvalidStep(Exception):
    pass


class FuelExhausted(Exception):
    """Normalization ran out of fuel; carries the partial trace."""

    def __init__(self, term: Term, trace: list[ReductionStep]):
        super().__init__(f"fuel exhausted after {len(trace)} steps")
        self.term = term
        self.trace = trace


class Strategy(Enum):
    LeftmostOutermost = "lo"
    RightmostInnermost = "ri"
    CommutationsFirst = "cfirst"


# ---------------------------------------------------------------------------
# Redex recognition

_ELIM_SUFFIX = {
    Arg: "APP",
    Pi1: "PI1",
    Pi2: "PI2",
    Branches: "CASE",
    TyArg: "TYAPP",
    UnpackBranch: "UNPACK",
    Epsilon: "EPS",
}

_BETA_AT = {
    (Arg, Lam): RuleId.B_ARROW,
    (Pi1, Pair): RuleId.B_PI1,
    (Pi2, Pair): RuleId.B_PI2,
    (Branches, Inj1): RuleId.B_CASE_INL,
    (Branches, Inj2): RuleId.B_CASE_INR,
    (UnpackBranch, Pack): RuleId.B_UNPACK,
    (TyArg, TyLam): RuleId.B_TYAPP,
}


def match_rule(t: Term) -> RuleId | None:
    """The rule firing at the root of `t`, if any (at most one per node)."""
    d = decompose_eliminator(t)
    if d is None:
        return None
    head, e = d
    beta = _BETA_AT.get((type(e), type(head)))
    if beta is not None:
        return beta
    suffix = _ELIM_SUFFIX[type(e)]
    if isinstance(head, Eps):
        return RuleId[f"C_EPS_{suffix}"]
    if isinstance(head, Case):
        return RuleId[f"C_CASE_{suffix}"]
    if isinstance(head, Unpack):
        return RuleId[f"C_UNPACK_{suffix}"]
    return None


def children(t: Term) -> list[tuple[int, Term]]:
    """Term children with their child indices, in path order."""
    match t:
        case Var(_) | Bound(_):
            return []
        case Lam(_, _, b) | TyLam(_, b):
            return [(0, b)]
        case App(f, a):
            return [(0, f), (1, a)]
        case Pair(l, r):
            return [(0, l), (1, r)]
        case Proj1(m) | Proj2(m) | Inj1(m, _) | Inj2(m, _) | Eps(m, _) | TyApp(m, _) | Pack(_, m, _):
            return [(0, m)]
        case Case(w, _, l, _, r):
            return [(0, w), (1, l), (2, r)]
        case Unpack(w, _, _, b):
            return [(0, w), (1, b)]
        case _:
            raise TypeError(f"not a term: {t!r}")


def subterm_at(t: Term, path: Path) -> Term:
    for i in path:
        kids = dict(children(t))
        if i not in kids:
            raise InvalidStep(f"no child {i} at this node")
        t = kids[i]
    return t


def redexes(m: Term) -> list[ReductionStep]:
    """All redexes of `m`, preorder by path."""
    out: list[ReductionStep] = []

    def walk(t: Term, path: Path) -> None:
        rule = match_rule(t)
        if rule is not None:
            out.append(ReductionStep(path, rule))
        for i, c in children(t):
            walk(c, path + (i,))

    walk(m, ())
    return out


# ---------------------------------------------------------------------------
# Contraction catalog (one entry per rule)


def _branch_type(ctx: Context, hint: str, bind_ty: Type, body: Term, what: str) -> Type:
    x = fresh_name(hint or "x", set(ctx.names()) | free_vars(body))
    try:
        return infer(ctx.bind(x, bind_ty), open_tm(body, Var(x)))
    except TypeInferenceError as exc:
        raise InvalidStep(f"{what}: cannot type the branch ({exc.message})") from exc


def _unpack_body_type(ctx: Context, p_hint: str, x_hint: str, bind_ty: Exists,
                      body: Term, what: str) -> Type:
    a = fresh_name(p_hint or "p", set(ctx.atoms()) | term_atoms(body) | ty_atoms(bind_ty))
    x = fresh_name(x_hint or "x", set(ctx.names()) | free_vars(body))
    opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
    try:
        ty = infer(ctx.bind_type(a).bind(x, open_ty(bind_ty.body, Atom(a))), opened)
    except TypeInferenceError as exc:
        raise InvalidStep(f"{what}: cannot type the unpack body ({exc.message})") from exc
    if a in ty_atoms(ty):
        raise InvalidStep(f"{what}: existential variable escapes the unpack body")
    return ty


def contract(ctx: Context, t: Term, rule: RuleId) -> Term:
    """Contract the redex at the root of `t` according to `rule`.

    Payloads moved under binders are locally closed, so no index
    adjustment is ever needed; beta contracta are built by opening the
    binder body directly with the (locally closed) argument.
    """
    match rule, t:
        # beta
        case RuleId.B_ARROW, App(Lam(_, _, body), a):
            return open_tm(body, a)
        case RuleId.B_PI1, Proj1(Pair(l, _)):
            return l
        case RuleId.B_PI2, Proj2(Pair(_, r)):
            return r
        case RuleId.B_CASE_INL, Case(Inj1(a, _), _, l, _, _):
            return open_tm(l, a)
        case RuleId.B_CASE_INR, Case(Inj2(b, _), _, _, _, r):
            return open_tm(r, b)
        case RuleId.B_UNPACK, Unpack(Pack(w, m, _), _, _, body):
            return open_tm(open_ty_tm(body, w), m)
        case RuleId.B_TYAPP, TyApp(TyLam(_, body), ty):
            return open_ty_tm(body, ty)

        # ex falso absorbs its eliminator
        case RuleId.C_EPS_APP, App(Eps(a, Arrow(_, cod)), _):
            return Eps(a, cod)
        case RuleId.C_EPS_PI1, Proj1(Eps(a, And(l, _))):
            return Eps(a, l)
        case RuleId.C_EPS_PI2, Proj2(Eps(a, And(_, r))):
            return Eps(a, r)
        case RuleId.C_EPS_CASE, Case(Eps(a, Or(sl, _)) , xh, l, _, _):
            return Eps(a, _branch_type(ctx, xh, sl, l, "C-EPS-CASE"))
        case RuleId.C_EPS_EPS, Eps(Eps(a, _), ann):
            return Eps(a, ann)
        case RuleId.C_EPS_TYAPP, TyApp(Eps(a, Forall(_, b)), ty):
            return Eps(a, open_ty(b, ty))
        case RuleId.C_EPS_UNPACK, Unpack(Eps(a, Exists(_, _) as ex), ph, xh, body):
            return Eps(a, _unpack_body_type(ctx, ph, xh, ex, body, "C-EPS-UNPACK"))

        # case pushes its eliminator into both branches
        case RuleId.C_CASE_APP, App(Case(w, xh, l, yh, r), n):
            return Case(w, xh, App(l, n), yh, App(r, n))
        case RuleId.C_CASE_PI1, Proj1(Case(w, xh, l, yh, r)):
            return Case(w, xh, Proj1(l), yh, Proj1(r))
        case RuleId.C_CASE_PI2, Proj2(Case(w, xh, l, yh, r)):
            return Case(w, xh, Proj2(l), yh, Proj2(r))
        case RuleId.C_CASE_CASE, Case(Case(w, xh, l, yh, r), ah, ab, bh, bb):
            return Case(w, xh, Case(l, ah, ab, bh, bb), yh, Case(r, ah, ab, bh, bb))
        case RuleId.C_CASE_EPS, Eps(Case(w, xh, l, yh, r), ann):
            return Case(w, xh, Eps(l, ann), yh, Eps(r, ann))
        case RuleId.C_CASE_TYAPP, TyApp(Case(w, xh, l, yh, r), ty):
            return Case(w, xh, TyApp(l, ty), yh, TyApp(r, ty))
        case RuleId.C_CASE_UNPACK, Unpack(Case(w, xh, l, yh, r), ph, zh, body):
            return Case(w, xh, Unpack(l, ph, zh, body), yh, Unpack(r, ph, zh, body))

        # unpack pushes its eliminator into the body
        case RuleId.C_UNPACK_APP, App(Unpack(w, ph, xh, b), n):
            return Unpack(w, ph, xh, App(b, n))
        case RuleId.C_UNPACK_PI1, Proj1(Unpack(w, ph, xh, b)):
            return Unpack(w, ph, xh, Proj1(b))
        case RuleId.C_UNPACK_PI2, Proj2(Unpack(w, ph, xh, b)):
            return Unpack(w, ph, xh, Proj2(b))
        case RuleId.C_UNPACK_CASE, Case(Unpack(w, ph, xh, b), ah, ab, bh, bb):
            return Unpack(w, ph, xh, Case(b, ah, ab, bh, bb))
        case RuleId.C_UNPACK_EPS, Eps(Unpack(w, ph, xh, b), ann):
            return Unpack(w, ph, xh, Eps(b, ann))
        case RuleId.C_UNPACK_TYAPP, TyApp(Unpack(w, ph, xh, b), ty):
            return Unpack(w, ph, xh, TyApp(b, ty))
        case RuleId.C_UNPACK_UNPACK, Unpack(Unpack(w, ph, xh, b), qh, zh, p):
            return Unpack(w, ph, xh, Unpack(b, qh, zh, p))

        case _:
            raise InvalidStep(f"term does not match rule {rule.value}")


# ---------------------------------------------------------------------------
# Generic commutation engine (three patterns), cross-checked against the
# catalog above in the tests.


def _elim_result_type(ctx: Context, e: Eliminator, scrut_ty: Type) -> Type:
    """Result type of eliminating a term of type `scrut_ty` with `e`."""
    match e, scrut_ty:
        case Arg(_), Arrow(_, cod):
            return cod
        case Pi1(), And(l, _):
            return l
        case Pi2(), And(_, r):
            return r
        case TyArg(ty), Forall(_, b):
            return open_ty(b, ty)
        case Epsilon(ty), Bot():
            return ty
        case Branches(xh, l, _, _), Or(sl, _):
            return _branch_type(ctx, xh, sl, l, "pattern")
        case UnpackBranch(ph, xh, b), Exists(_, _):
            return _unpack_body_type(ctx, ph, xh, scrut_ty, b, "pattern")
        case _:
            raise InvalidStep("eliminator does not fit the scrutinee type")


def commute_generic(ctx: Context, t: Term) -> tuple[RuleId, Term] | None:
    """Contract a commutative redex at the root via the generic patterns.

    Pattern 1: (case W of x=>S | y=>T) E  ~>  case W of x=>S E | y=>T E
    Pattern 2: (A eps_sigma) E            ~>  A eps_delta
    Pattern 3: (unpack W as <p,x> in P) E ~>  unpack W as <p,x> in P E
    """
    d = decompose_eliminator(t)
    if d is None:
        return None
    head, e = d
    suffix = _ELIM_SUFFIX[type(e)]
    match head:
        case Case(w, xh, l, yh, r):
            rule = RuleId[f"C_CASE_{suffix}"]
            return rule, Case(w, xh, apply_eliminator(l, e), yh, apply_eliminator(r, e))
        case Eps(a, ann):
            rule = RuleId[f"C_EPS_{suffix}"]
            return rule, Eps(a, _elim_result_type(ctx, e, ann))
        case Unpack(w, ph, xh, b):
            rule = RuleId[f"C_UNPACK_{suffix}"]
            return rule, Unpack(w, ph, xh, apply_eliminator(b, e))
        case _:
            return None


# ---------------------------------------------------------------------------
# Stepping and normalization


def step(m: Term, s: ReductionStep, ctx: Context | None = None) -> Term:
    """Contract the redex described by `s`, rebuilding the surrounding term.

    Binders along the path are opened with fresh variables (extending the
    context, since some contracta need the types of enclosing binders) and
    closed again on the way out.
    """
    return _step_at(ctx or Context(), m, s.path, s.rule)


def _step_at(ctx: Context, t: Term, path: Path, rule: RuleId) -> Term:
    if not path:
        if match_rule(t) is not rule:
            raise InvalidStep(f"no {rule.value} redex at the given path")
        return contract(ctx, t, rule)
    i, rest = path[0], path[1:]
    match t:
        case App(f, a):
            if i == 0:
                return App(_step_at(ctx, f, rest, rule), a)
            if i == 1:
                return App(f, _step_at(ctx, a, rest, rule))
        case Lam(h, ann, body):
            if i == 0:
                x = fresh_name(h or "x", set(ctx.names()) | free_vars(body))
                inner = _step_at(ctx.bind(x, ann), open_tm(body, Var(x)), rest, rule)
                return Lam(h, ann, close_tm(inner, x))
        case Pair(l, r):
            if i == 0:
                return Pair(_step_at(ctx, l, rest, rule), r)
            if i == 1:
                return Pair(l, _step_at(ctx, r, rest, rule))
        case Proj1(n):
            if i == 0:
                return Proj1(_step_at(ctx, n, rest, rule))
        case Proj2(n):
            if i == 0:
                return Proj2(_step_at(ctx, n, rest, rule))
        case Inj1(n, ann):
            if i == 0:
                return Inj1(_step_at(ctx, n, rest, rule), ann)
        case Inj2(n, ann):
            if i == 0:
                return Inj2(_step_at(ctx, n, rest, rule), ann)
        case Case(w, xh, l, yh, r):
            if i == 0:
                return Case(_step_at(ctx, w, rest, rule), xh, l, yh, r)
            if i in (1, 2):
                try:
                    sty = infer(ctx, w)
                except TypeInferenceError as exc:
                    raise InvalidStep(
                        f"cannot type the case scrutinee on the path ({exc.message})") from exc
                if not isinstance(sty, Or):
                    raise InvalidStep("case scrutinee on the path is not a sum")
                hint, branch, bind_ty = ((xh, l, sty.left) if i == 1 else (yh, r, sty.right))
                x = fresh_name(hint or "x", set(ctx.names()) | free_vars(branch))
                inner = _step_at(ctx.bind(x, bind_ty), open_tm(branch, Var(x)), rest, rule)
                closed = close_tm(inner, x)
                return Case(w, xh, closed, yh, r) if i == 1 else Case(w, xh, l, yh, closed)
        case Eps(n, ann):
            if i == 0:
                return Eps(_step_at(ctx, n, rest, rule), ann)
        case TyLam(ph, body):
            if i == 0:
                a = fresh_name(ph or "p", set(ctx.atoms()) | term_atoms(body))
                inner = _step_at(ctx.bind_type(a), open_ty_tm(body, Atom(a)), rest, rule)
                return TyLam(ph, close_ty_tm(inner, a))
        case TyApp(n, ty):
            if i == 0:
                return TyApp(_step_at(ctx, n, rest, rule), ty)
        case Pack(w, n, ann):
            if i == 0:
                return Pack(w, _step_at(ctx, n, rest, rule), ann)
        case Unpack(w, ph, xh, body):
            if i == 0:
                return Unpack(_step_at(ctx, w, rest, rule), ph, xh, body)
            if i == 1:
                try:
                    sty = infer(ctx, w)
                except TypeInferenceError as exc:
                    raise InvalidStep(
                        f"cannot type the unpack scrutinee on the path ({exc.message})") from exc
                if not isinstance(sty, Exists):
                    raise InvalidStep("unpack scrutinee on the path is not an existential")
                a = fresh_name(ph or "p", set(ctx.atoms()) | term_atoms(body) | ty_atoms(sty))
                x = fresh_name(xh or "x", set(ctx.names()) | free_vars(body))
                opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
                inner = _step_at(ctx.bind_type(a).bind(x, open_ty(sty.body, Atom(a))),
                                 opened, rest, rule)
                return Unpack(w, ph, xh, close_ty_tm(close_tm(inner, x), a))
    raise InvalidStep(f"path does not exist in the term (stuck at child {i})")


def open_at(ctx: Context, m: Term, path: Path) -> tuple[Context, Term]:
    """Open binders along `path`, returning the extended context and the
    (locally closed) subterm at that position."""
    for i in path:
        match m:
            case App(f, a) if i in (0, 1):
                m = (f, a)[i]
            case Lam(h, ann, body) if i == 0:
                x = fresh_name(h or "x", set(ctx.names()) | free_vars(body))
                ctx, m = ctx.bind(x, ann), open_tm(body, Var(x))
            case Pair(l, r) if i in (0, 1):
                m = (l, r)[i]
            case Proj1(n) | Proj2(n) | Inj1(n, _) | Inj2(n, _) | Eps(n, _) | TyApp(n, _) | Pack(_, n, _):
                if i != 0:
                    raise InvalidStep(f"no child {i} on the path")
                m = n
            case Case(w, xh, l, yh, r):
                if i == 0:
                    m = w
                    continue
                sty = infer(ctx, w)
                if not isinstance(sty, Or):
                    raise InvalidStep("case scrutinee on the path is not a sum")
                hint, branch, bind_ty = ((xh, l, sty.left) if i == 1 else (yh, r, sty.right))
                x = fresh_name(hint or "x", set(ctx.names()) | free_vars(branch))
                ctx, m = ctx.bind(x, bind_ty), open_tm(branch, Var(x))
            case TyLam(ph, body) if i == 0:
                a = fresh_name(ph or "p", set(ctx.atoms()) | term_atoms(body))
                ctx, m = ctx.bind_type(a), open_ty_tm(body, Atom(a))
            case Unpack(w, ph, xh, body):
                if i == 0:
                    m = w
                    continue
                sty = infer(ctx, w)
                if not isinstance(sty, Exists):
                    raise InvalidStep("unpack scrutinee on the path is not an existential")
                a = fresh_name(ph or "p", set(ctx.atoms()) | term_atoms(body) | ty_atoms(sty))
                x = fresh_name(xh or "x", set(ctx.names()) | free_vars(body))
                ctx = ctx.bind_type(a).bind(x, open_ty(sty.body, Atom(a)))
                m = open_tm(open_ty_tm(body, Atom(a)), Var(x))
            case _:
                raise InvalidStep(f"no child {i} on the path")
    return ctx, m


def pick_redex(steps: list[ReductionStep], strategy: Strategy) -> ReductionStep:
    if not steps:
        raise ValueError("no redexes to pick from")
    match strategy:
        case Strategy.LeftmostOutermost:
            return steps[0]
        case Strategy.RightmostInnermost:
            return max(steps, key=lambda s: s.path)
        case Strategy.CommutationsFirst:
            for s in steps:
                if is_commutative(s.rule):
                    return s
            return steps[0]
    raise ValueError(f"unknown strategy {strategy!r}")


def normalize(m: Term, strategy: Strategy, fuel: int = 100000,
              ctx: Context | None = None) -> tuple[Term, list[ReductionStep]]:
    """Reduce to normal form under `strategy`, or raise FuelExhausted."""
    ctx = ctx or Context()
    trace: list[ReductionStep] = []
    cur = m
    while True:
        steps = redexes(cur)
        if not steps:
            return cur, trace
        if len(trace) >= fuel:
            raise FuelExhausted(cur, trace)
        s = pick_redex(steps, strategy)
        cur = step(cur, s, ctx)
        trace.append(s)
