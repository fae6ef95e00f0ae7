"""Call-by-name continuation-passing translation into the arrow/forall fragment.

Each type tau gets a value type tau* and a computation type
trf tau = (tau* -> _|_) -> _|_; each term becomes an abstraction over
its continuation, with diamond (term against continuation) and at
(eliminator against continuation) doing the work.  Existentials become
universals over continuations, so the image needs no sums, pairs,
existentials, or absurdity eliminator of its own.

Three properties of the translation are checkable here: beta steps map
to nonempty beta chains (check_simulation_cps_beta), commutative steps
map to alpha-equal images (check_cps_commutative), and the translation
commutes with substitution up to an administrative substitution on
images (check_substitution_lemmas).
"""

from __future__ import annotations

from .reduction import (
    BETA_RULES, ReductionStep, RuleId, contract, match_rule, open_at,
    redexes, step, subterm_at,
)
from .search import DepthCapExceeded, default_search_budget, find_chain
from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eliminator, Eps, Exists, Forall,
    Inj1, Inj2, Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound,
    TyLam, Type, Unpack, Var, alpha_eq, apply_eliminator, close_tm,
    close_ty_tm, decompose_eliminator, free_vars, fresh_name, open_tm,
    open_ty, open_ty_tm, size, subst_term, subst_type, subst_type_in_term,
    term_atoms, Arg, Pi1, Pi2, Branches, TyArg, UnpackBranch, Epsilon,
)
from .typecheck import Context, infer

__all__ = [
    "star_type", "trf_type", "trf_ctx", "diamond", "at", "trf_term",
    "cps_term_subst", "check_simulation_cps_beta", "check_cps_commutative",
    "substitution_lemma_results", "check_substitution_lemmas",
    "DepthCapExceeded",
]


def star_type(t: Type) -> Type:
    match t:
        case Atom(_) | TyBound(_) | Bot():
            return t
        case Arrow(d, c):
            return Arrow(trf_type(d), trf_type(c))
        case And(l, r):
            return Arrow(Arrow(trf_type(l), Arrow(trf_type(r), Bot())), Bot())
        case Or(l, r):
            return Arrow(Arrow(trf_type(l), Bot()),
                         Arrow(Arrow(trf_type(r), Bot()), Bot()))
        case Forall(h, b):
            return Forall(h, trf_type(b))
        case Exists(h, b):
            return Arrow(Forall(h, Arrow(trf_type(b), Bot())), Bot())
        case _:
            raise ValueError(f"cannot translate type {t!r}")


def trf_type(t: Type) -> Type:
    return Arrow(Arrow(star_type(t), Bot()), Bot())


def trf_ctx(ctx: Context) -> Context:
    return Context(tuple((n, trf_type(ty)) for n, ty in ctx.term_vars),
                   ctx.type_vars)


def diamond(ctx: Context, m: Term, k: Term) -> Term:
    """Translate a term against a continuation (m diamond k).

    The continuation must be locally closed; it is placed into the image
    verbatim, under freshly built binders where the clause calls for it.
    """
    decomposed = decompose_eliminator(m)
    if decomposed is not None:
        head, elim = decomposed
        return diamond(ctx, head, at(ctx, elim, k, infer(ctx, head)))
    match m:
        case Var(_):
            return App(m, k)
        case Lam(h, ann, body):
            x = fresh_name(h or "x", free_vars(body) | set(ctx.names()))
            tb = trf_term(ctx.bind(x, ann), open_tm(body, Var(x)))
            return App(k, Lam(h, trf_type(ann), close_tm(tb, x)))
        case Pair(l, r):
            lty, rty = infer(ctx, l), infer(ctx, r)
            body = App(App(Bound(0), trf_term(ctx, l)), trf_term(ctx, r))
            return App(k, Lam("p", Arrow(trf_type(lty),
                                         Arrow(trf_type(rty), Bot())), body))
        case Inj1(a, Or(lty, rty)):
            return App(k, Lam("a", Arrow(trf_type(lty), Bot()),
                              Lam("b", Arrow(trf_type(rty), Bot()),
                                  App(Bound(1), trf_term(ctx, a)))))
        case Inj2(b, Or(lty, rty)):
            return App(k, Lam("a", Arrow(trf_type(lty), Bot()),
                              Lam("b", Arrow(trf_type(rty), Bot()),
                                  App(Bound(0), trf_term(ctx, b)))))
        case TyLam(h, body):
            a = fresh_name(h or "p", term_atoms(body) | ctx.atoms())
            tb = trf_term(ctx.bind_type(a), open_ty_tm(body, Atom(a)))
            return App(k, TyLam(h, close_ty_tm(tb, a)))
        case Pack(w, n, Exists(h, rho)):
            u_ann = Forall(h, Arrow(trf_type(rho), Bot()))
            body = App(TyApp(Bound(0), star_type(w)), trf_term(ctx, n))
            return App(k, Lam("u", u_ann, body))
        case _:
            raise ValueError(f"cannot translate term {m!r}")


def at(ctx: Context, e: Eliminator, k: Term, scrut_ty: Type) -> Term:
    """Translate an eliminator against a continuation (e at k)."""
    match e, scrut_ty:
        case Arg(r), Arrow(_, _):
            return Lam("m", star_type(scrut_ty),
                       App(App(Bound(0), trf_term(ctx, r)), k))
        case (Pi1() | Pi2()), And(lty, rty):
            pick = Bound(1) if isinstance(e, Pi1) else Bound(0)
            inner = Lam("a", trf_type(lty),
                        Lam("b", trf_type(rty), App(pick, k)))
            return Lam("m", star_type(scrut_ty), App(Bound(0), inner))
        case Branches(xh, l, yh, r), Or(lty, rty):
            branches = []
            for hint, branch, bty in ((xh, l, lty), (yh, r, rty)):
                x = fresh_name(hint or "x",
                               free_vars(branch) | free_vars(k) | set(ctx.names()))
                body = diamond(ctx.bind(x, bty), open_tm(branch, Var(x)), k)
                branches.append(Lam(hint, trf_type(bty), close_tm(body, x)))
            return Lam("m", star_type(scrut_ty),
                       App(App(Bound(0), branches[0]), branches[1]))
        case TyArg(ty), Forall(_, _):
            return Lam("m", star_type(scrut_ty),
                       App(TyApp(Bound(0), star_type(ty)), k))
        case UnpackBranch(ph, xh, body), Exists(_, rho):
            a = fresh_name(ph or "p",
                           term_atoms(body) | term_atoms(k) | ctx.atoms())
            rho_open = open_ty(rho, Atom(a))
            x = fresh_name(xh or "x",
                           free_vars(body) | free_vars(k) | set(ctx.names()))
            opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
            inner = diamond(ctx.bind_type(a).bind(x, rho_open), opened, k)
            lam = Lam(xh, trf_type(rho_open), close_tm(inner, x))
            return Lam("m", star_type(scrut_ty),
                       App(Bound(0), TyLam(ph, close_ty_tm(lam, a))))
        case Epsilon(_), Bot():
            return Lam("m", Bot(), Bound(0))
        case _:
            raise ValueError(
                f"eliminator {e!r} does not fit scrutinee type {scrut_ty!r}")


def trf_term(ctx: Context, m: Term) -> Term:
    ty = infer(ctx, m)
    k = fresh_name("k", free_vars(m) | set(ctx.names()))
    body = diamond(ctx, m, Var(k))
    return Lam("k", Arrow(star_type(ty), Bot()), close_tm(body, k))


def cps_term_subst(ctx: Context, t: Term, x: str, n: Term) -> Term:
    """Administrative substitution of a source term into a translated image.

    Applied occurrences x K become n diamond K; a stray bare occurrence
    becomes the full translation of n.  This is the substitution under
    which images commute with source-level substitution on the nose.
    """
    match t:
        case App(Var(y), kk) if y == x:
            return diamond(ctx, n, cps_term_subst(ctx, kk, x, n))
        case Var(y):
            return trf_term(ctx, n) if y == x else t
        case Bound(_):
            return t
        case App(f, a):
            return App(cps_term_subst(ctx, f, x, n),
                       cps_term_subst(ctx, a, x, n))
        case Lam(h, ann, body):
            z = fresh_name(h or "x",
                           free_vars(body) | free_vars(n) | {x} | set(ctx.names()))
            inner = cps_term_subst(ctx, open_tm(body, Var(z)), x, n)
            return Lam(h, ann, close_tm(inner, z))
        case TyLam(h, body):
            a = fresh_name(h or "p",
                           term_atoms(body) | term_atoms(n) | ctx.atoms())
            inner = cps_term_subst(ctx, open_ty_tm(body, Atom(a)), x, n)
            return TyLam(h, close_ty_tm(inner, a))
        case TyApp(f, ty):
            return TyApp(cps_term_subst(ctx, f, x, n), ty)
        case _:
            raise ValueError(f"not a translation image: {t!r}")


def _head_beta_moves(t: Term) -> list[Term]:
    return [step(t, s) for s in redexes(t) if all(i == 0 for i in s.path)]


def _collapse_value(ictx: Context, redex: Term, rule: RuleId) -> Term | None:
    """The translated operand whose applied copies collapse after a beta step."""
    match rule, redex:
        case RuleId.B_ARROW, App(_, a):
            return trf_term(ictx, a)
        case (RuleId.B_CASE_INL | RuleId.B_CASE_INR), Case(scrut, _, _, _, _):
            return trf_term(ictx, scrut.t)
        case RuleId.B_UNPACK, Unpack(scrut, _, _, _):
            return trf_term(ictx, scrut.t)
        case _:
            return None


def check_simulation_cps_beta(ctx: Context, m: Term, s: ReductionStep,
                              depth_cap: int | None = None,
                              search_budget: int | None = None) -> bool:
    """Does the image of a beta step reduce in at least one beta step?

    Localized exactly as in the simply typed checker.  The fast moves
    are head steps plus contractions of applied copies of the
    substituted operand's image, which is where the real chains live.
    """
    if s.rule not in BETA_RULES:
        raise ValueError(f"{s.rule.value} is not a beta rule")
    ictx, redex = open_at(ctx, m, s.path)
    if match_rule(redex) != s.rule:
        raise ValueError(f"step {s} does not match the term at its path")
    reduct = contract(ictx, redex, s.rule)
    a = trf_term(ictx, redex)
    b = trf_term(ictx, reduct)
    if alpha_eq(a, b):
        return False
    operand = _collapse_value(ictx, redex, s.rule)

    def fast(t: Term) -> list[Term]:
        out = _head_beta_moves(t)
        if operand is not None:
            for st in redexes(t):
                node = subterm_at(t, st.path)
                if isinstance(node, App) and node.fun == operand:
                    out.append(step(t, st))
        return out

    def full(t: Term) -> list[Term]:
        return [step(t, st) for st in redexes(t)]

    cap = depth_cap if depth_cap is not None else 16 + 4 * size(a)
    budget = (search_budget if search_budget is not None
              else default_search_budget(size(a)))
    return find_chain(a, b, fast, full, cap, budget) is not None


def check_cps_commutative(ctx: Context, m: Term, s: ReductionStep) -> bool:
    """A commutative step must leave the image unchanged up to alpha."""
    if s.rule in BETA_RULES:
        raise ValueError(f"{s.rule.value} is not a commutative rule")
    ictx, redex = open_at(ctx, m, s.path)
    if match_rule(redex) != s.rule:
        raise ValueError(f"step {s} does not match the term at its path")
    reduct = contract(ictx, redex, s.rule)
    return alpha_eq(trf_term(ictx, redex), trf_term(ictx, reduct))


def _subst_in_eliminator(e: Eliminator, x: str, n: Term) -> Eliminator:
    dummy = fresh_name("scrut", free_vars(n) | {x})
    applied = subst_term(apply_eliminator(Var(dummy), e), x, n)
    decomposed = decompose_eliminator(applied)
    assert decomposed is not None
    return decomposed[1]


def _subst_type_in_eliminator(e: Eliminator, p: str, rho: Type) -> Eliminator:
    applied = subst_type_in_term(apply_eliminator(Var("scrut"), e), p, rho)
    decomposed = decompose_eliminator(applied)
    assert decomposed is not None
    return decomposed[1]


def substitution_lemma_results(ctx: Context, r: Term, x: str, n: Term,
                               p: str, rho: Type,
                               elim: Eliminator | None = None,
                               scrut_ty: Type | None = None) -> dict[str, bool]:
    """Check the six substitution equations on concrete inputs.

    Term equations substitute n for the context variable x (through the
    administrative substitution on images); type equations substitute
    rho* for the atom p.  When no eliminator is supplied, one is taken
    from the root of r if it decomposes, otherwise the absurdity
    eliminator is used.
    """
    k = fresh_name("k", free_vars(r) | free_vars(n) | set(ctx.names()))
    kv = Var(k)
    star_rho = star_type(rho)
    ctx_p = Context(tuple((nm, subst_type(ty, p, rho)) for nm, ty in ctx.term_vars),
                    ctx.type_vars)
    r_x = subst_term(r, x, n)
    r_p = subst_type_in_term(r, p, rho)
    if elim is None:
        decomposed = decompose_eliminator(r)
        if decomposed is not None:
            _, elim = decomposed
            scrut_ty = infer(ctx, decomposed[0])
        else:
            elim, scrut_ty = Epsilon(rho), Bot()
    assert scrut_ty is not None

    results = {
        "trf-term-subst": alpha_eq(
            cps_term_subst(ctx, trf_term(ctx, r), x, n),
            trf_term(ctx, r_x)),
        "diamond-term-subst": alpha_eq(
            cps_term_subst(ctx, diamond(ctx, r, kv), x, n),
            diamond(ctx, r_x, kv)),
        "at-term-subst": alpha_eq(
            cps_term_subst(ctx, at(ctx, elim, kv, scrut_ty), x, n),
            at(ctx, _subst_in_eliminator(elim, x, n), kv, scrut_ty)),
        "trf-type-subst": alpha_eq(
            subst_type(trf_type(infer(ctx, r)), p, star_rho),
            trf_type(subst_type(infer(ctx, r), p, rho))),
        "diamond-type-subst": alpha_eq(
            subst_type_in_term(diamond(ctx, r, kv), p, star_rho),
            diamond(ctx_p, r_p, kv)),
        "at-type-subst": alpha_eq(
            subst_type_in_term(at(ctx, elim, kv, scrut_ty), p, star_rho),
            at(ctx_p, _subst_type_in_eliminator(elim, p, rho), kv,
               subst_type(scrut_ty, p, rho))),
    }
    return results


def check_substitution_lemmas(ctx: Context, r: Term, x: str, n: Term,
                              p: str, rho: Type,
                              elim: Eliminator | None = None,
                              scrut_ty: Type | None = None) -> bool:
    return all(substitution_lemma_results(ctx, r, x, n, p, rho,
                                          elim, scrut_ty).values())
