"""Double-negation translation into the arrow/absurdity fragment.

Types collapse every atom to absurdity and encode pairs and sums by
their continuation types; every translated type therefore unfolds as a
spine delta_1 -> ... -> delta_n -> _|_.  Terms are translated
type-directedly, with eliminators for pairs, sums, and absurdity
expanded into abstractions over that spine.

The translation is meant to map source reduction steps to beta-eta
reduction in the target; check_simulation_simple tests that claim for a
single source step by searching the target reduction graph.
"""

from __future__ import annotations

from .reduction import ReductionStep, contract, match_rule, open_at, redexes, step
from .search import DepthCapExceeded, default_search_budget, find_chain
from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Type,
    Unpack, Var, alpha_eq, close_tm, free_vars, fresh_name, open_tm, size,
)
from .typecheck import Context, infer

__all__ = [
    "NotSimplyTyped", "NotTargetType", "tr_type", "spine", "tr_ctx",
    "tr_term", "eta_successors", "beta_successors", "target_successors",
    "check_simulation_simple", "DepthCapExceeded",
]


class NotSimplyTyped(Exception):
    """The input mentions quantifiers and has no simply typed image."""


class NotTargetType(Exception):
    """A translated type failed to unfold to a spine ending in absurdity."""


def tr_type(t: Type) -> Type:
    match t:
        case Atom(_) | Bot():
            return Bot()
        case Arrow(d, c):
            return Arrow(tr_type(d), tr_type(c))
        case And(l, r):
            return Arrow(Arrow(tr_type(l), Arrow(tr_type(r), Bot())), Bot())
        case Or(l, r):
            return Arrow(Arrow(tr_type(l), Bot()),
                         Arrow(Arrow(tr_type(r), Bot()), Bot()))
        case _:
            raise NotSimplyTyped(f"cannot translate type {t!r}")


def spine(t: Type) -> tuple[Type, ...]:
    """Unfold arrows to the argument list; the tail must be absurdity."""
    args = []
    while isinstance(t, Arrow):
        args.append(t.dom)
        t = t.cod
    if not isinstance(t, Bot):
        raise NotTargetType(f"spine tail is {t!r}, not absurdity")
    return tuple(args)


def tr_ctx(ctx: Context) -> Context:
    return Context(tuple((n, tr_type(ty)) for n, ty in ctx.term_vars))


def _apply_bounds(head: Term, indices: list[int]) -> Term:
    for i in indices:
        head = App(head, Bound(i))
    return head


def _wrap_lams(body: Term, anns: tuple[Type, ...], hint: str) -> Term:
    for ann in reversed(anns):
        body = Lam(hint, ann, body)
    return body


def tr_term(ctx: Context, m: Term) -> Term:
    """Translate a well-typed term; eliminators expand over type spines.

    Subterms placed under the freshly built abstractions are locally
    closed, so they move under binders verbatim.
    """
    match m:
        case Var(_):
            return m
        case Lam(h, ann, body):
            x = fresh_name(h or "x", free_vars(body) | set(ctx.names()))
            tb = tr_term(ctx.bind(x, ann), open_tm(body, Var(x)))
            return Lam(h, tr_type(ann), close_tm(tb, x))
        case App(f, a):
            return App(tr_term(ctx, f), tr_term(ctx, a))
        case Pair(l, r):
            lty, rty = infer(ctx, l), infer(ctx, r)
            body = App(App(Bound(0), tr_term(ctx, l)), tr_term(ctx, r))
            return Lam("z", Arrow(tr_type(lty), Arrow(tr_type(rty), Bot())),
                       body)
        case Inj1(a, Or(lty, rty)):
            return Lam("x", Arrow(tr_type(lty), Bot()),
                       Lam("y", Arrow(tr_type(rty), Bot()),
                           App(Bound(1), tr_term(ctx, a))))
        case Inj2(b, Or(lty, rty)):
            return Lam("x", Arrow(tr_type(lty), Bot()),
                       Lam("y", Arrow(tr_type(rty), Bot()),
                           App(Bound(0), tr_term(ctx, b))))
        case Proj1(p) | Proj2(p):
            pty = infer(ctx, p)
            if not isinstance(pty, And):
                raise NotSimplyTyped(f"projection from non-pair type {pty!r}")
            lt, rt = tr_type(pty.left), tr_type(pty.right)
            own = lt if isinstance(m, Proj1) else rt
            args = spine(own)
            n = len(args)
            # continuation: \x:lt. \y:rt. pick x_1 .. x_n
            pick = Bound(1) if isinstance(m, Proj1) else Bound(0)
            k_body = _apply_bounds(pick, [n + 2 - i for i in range(1, n + 1)])
            k = Lam("x", lt, Lam("y", rt, k_body))
            return _wrap_lams(App(tr_term(ctx, p), k), args, "a")
        case Case(w, xh, l, yh, r):
            wty = infer(ctx, w)
            if not isinstance(wty, Or):
                raise NotSimplyTyped(f"case on non-sum type {wty!r}")
            res = infer(ctx, m)
            args = spine(tr_type(res))
            k = len(args)
            vec = [1 + k - i for i in range(1, k + 1)]
            branches = []
            for hint, branch, branch_ty in ((xh, l, wty.left),
                                            (yh, r, wty.right)):
                x = fresh_name(hint or "x", free_vars(branch) | set(ctx.names()))
                tb = tr_term(ctx.bind(x, branch_ty), open_tm(branch, Var(x)))
                branches.append(
                    Lam(hint, tr_type(branch_ty),
                        _apply_bounds(close_tm(tb, x), vec)))
            core = App(App(tr_term(ctx, w), branches[0]), branches[1])
            return _wrap_lams(core, args, "z")
        case Eps(t, target):
            args = spine(tr_type(target))
            return _wrap_lams(tr_term(ctx, t), args, "a")
        case TyLam(_, _) | TyApp(_, _) | Pack(_, _, _) | Unpack(_, _, _, _):
            raise NotSimplyTyped(f"polymorphic construct {type(m).__name__}")
        case _:
            raise NotSimplyTyped(f"cannot translate {m!r}")


Path = tuple[int, ...]


def eta_successors(t: Term) -> list[tuple[Path, Term]]:
    """All single eta contractions (\\x. M x -> M when x is not free in M).

    Only defined on the arrow/absurdity target fragment.
    """
    out: list[tuple[Path, Term]] = []
    match t:
        case Var(_):
            pass
        case Lam(h, ann, body):
            x = fresh_name(h or "x", free_vars(body))
            ob = open_tm(body, Var(x))
            if (isinstance(ob, App) and ob.arg == Var(x)
                    and x not in free_vars(ob.fun)):
                out.append(((), ob.fun))
            for p, b2 in eta_successors(ob):
                out.append(((0,) + p, Lam(h, ann, close_tm(b2, x))))
        case App(f, a):
            out.extend(((0,) + p, App(f2, a)) for p, f2 in eta_successors(f))
            out.extend(((1,) + p, App(f, a2)) for p, a2 in eta_successors(a))
        case _:
            raise NotSimplyTyped(f"eta search outside target fragment: {t!r}")
    return out


def beta_successors(t: Term) -> list[tuple[Path, Term]]:
    return [(s.path, step(t, s)) for s in redexes(t)]


def target_successors(t: Term) -> list[Term]:
    return ([t2 for _, t2 in beta_successors(t)]
            + [t2 for _, t2 in eta_successors(t)])


def _head_successors(t: Term) -> list[Term]:
    """Fast moves: steps whose path runs through head positions only."""
    out = [t2 for p, t2 in beta_successors(t) if all(i == 0 for i in p)]
    out += [t2 for p, t2 in eta_successors(t) if all(i == 0 for i in p)]
    return out


def check_simulation_simple(ctx: Context, m: Term, s: ReductionStep,
                            depth_cap: int | None = None,
                            search_budget: int | None = None) -> bool:
    """Does the translation of a single step reduce in at least one step?

    The step is localized first: the translation is compositional and
    type-directed and a step preserves the type of the redex, so the
    surrounding context translates identically on both sides and the
    claim holds for the whole term iff it holds for the redex itself.
    Raises DepthCapExceeded when the search could not settle the answer.
    """
    ictx, redex = open_at(ctx, m, s.path)
    if match_rule(redex) != s.rule:
        raise ValueError(f"step {s} does not match the term at its path")
    reduct = contract(ictx, redex, s.rule)
    a = tr_term(ictx, redex)
    b = tr_term(ictx, reduct)
    if alpha_eq(a, b):
        return False
    cap = depth_cap if depth_cap is not None else 16 + 4 * size(a)
    budget = (search_budget if search_budget is not None
              else default_search_budget(size(a)))
    chain = find_chain(a, b, _head_successors, target_successors, cap, budget)
    return chain is not None
