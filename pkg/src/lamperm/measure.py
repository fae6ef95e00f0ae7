"""The termination measure for commutative reduction.

chi maps terms to positive integers and strictly decreases along every
commutative step, while beta steps may increase it.  All arithmetic is
exact (Python ints), since the measure is exponential in nesting depth.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App, Bound, Case, Eps, Inj1, Inj2, Lam, Pack, Pair, Proj1, Proj2, Term,
    TyApp, TyLam, Unpack, Var,
)
from .reduction import ReductionStep, is_commutative, step
from .typecheck import Context


class NotCommutative(Exception):
    pass


def chi(m: Term) -> int:
    """The measure: variables count 1, eliminations square their head."""
    match m:
        case Var(_) | Bound(_):
            return 1
        case Lam(_, _, b) | TyLam(_, b):
            return chi(b)
        case Inj1(t, _) | Inj2(t, _) | Pack(_, t, _):
            return chi(t)
        case Pair(l, r):
            return chi(l) + chi(r)
        case App(f, a):
            return chi(f) ** 2 * chi(a)
        case Proj1(t) | Proj2(t) | TyApp(t, _):
            return chi(t) ** 2
        case Case(w, _, l, _, r):
            return chi(w) ** 2 * (chi(l) + chi(r)) + 1
        case Unpack(w, _, _, b):
            return chi(w) ** 2 * chi(b) + 1
        case Eps(t, _):
            return chi(t) ** 2 + 1
        case _:
            raise TypeError(f"not a term: {m!r}")


@dataclass(frozen=True)
class DecreaseResult:
    before: int
    after: int
    strictly_decreased: bool


def check_decrease(m: Term, s: ReductionStep, ctx: Context | None = None) -> DecreaseResult:
    """chi before and after a commutative step; rejects beta steps."""
    if not is_commutative(s.rule):
        raise NotCommutative(f"{s.rule.value} is a beta rule, not a commutative rule")
    before = chi(m)
    after = chi(step(m, s, ctx))
    return DecreaseResult(before, after, after < before)
