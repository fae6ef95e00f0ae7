"""Seeded type-directed generation of well-typed terms.

Terms are built top-down against a goal type under a size budget.  The
context always carries an absurdity-typed variable, so any goal can be
met within a budget of two nodes by aborting on that variable; all
other productions are conveniences layered on top of that guarantee.
Scrutinee positions are biased toward introduction forms and nested
eliminators, which is what makes the output interesting: that is where
beta redexes and commuting conversions live.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    And, Arrow, Atom, Bot, Case, Eps, Exists, Forall, Inj1, Inj2, Lam, Or,
    Pack, Pair, Proj1, Proj2, Term, TyApp, TyLam, Type, Unpack, Var, App,
    close_tm, close_ty, close_ty_tm, fresh_name, open_ty, size, ty_atoms,
)
from .typecheck import CalculusId, Context, infer

__all__ = ["GenConfig", "GenerationStuck", "gen_type", "gen_typed_term"]

MIN_BUDGET = 2


@dataclass(frozen=True)
class GenConfig:
    calculus: CalculusId = CalculusId.LambdaFull
    max_size: int = 30
    seed: int = 0
    atom_pool: tuple[str, ...] = ("p", "q", "r")
    context_arity: int = 4


class GenerationStuck(Exception):
    """No production fit the goal within the remaining budget."""


def _polymorphic(cfg: GenConfig) -> bool:
    return cfg.calculus in (CalculusId.FFull, CalculusId.FArrow)


def gen_type(cfg: GenConfig, rng: random.Random, fuel: int,
             extra_atoms: tuple[str, ...] = (), depth: int = 0) -> Type:
    pool = cfg.atom_pool + extra_atoms
    if fuel <= 1:
        return Bot() if rng.random() < 0.25 else Atom(rng.choice(pool))
    kinds = ["atom", "bot", "arrow", "and", "or"]
    weights = [3, 2, 4, 2, 3]
    if _polymorphic(cfg) and depth < 2:
        kinds += ["forall", "exists"]
        weights += [2, 3]
    match rng.choices(kinds, weights)[0]:
        case "atom":
            return Atom(rng.choice(pool))
        case "bot":
            return Bot()
        case "arrow":
            cut = rng.randint(1, fuel - 1)
            return Arrow(gen_type(cfg, rng, cut, extra_atoms, depth + 1),
                         gen_type(cfg, rng, fuel - cut, extra_atoms, depth + 1))
        case "and":
            cut = rng.randint(1, fuel - 1)
            return And(gen_type(cfg, rng, cut, extra_atoms, depth + 1),
                       gen_type(cfg, rng, fuel - cut, extra_atoms, depth + 1))
        case "or":
            cut = rng.randint(1, fuel - 1)
            return Or(gen_type(cfg, rng, cut, extra_atoms, depth + 1),
                      gen_type(cfg, rng, fuel - cut, extra_atoms, depth + 1))
        case kind:
            bound = fresh_name("t", set(pool))
            body = gen_type(cfg, rng, fuel - 1, extra_atoms + (bound,),
                            depth + 1)
            ctor = Forall if kind == "forall" else Exists
            return ctor(bound, close_ty(body, bound))


def _gen_goal(cfg: GenConfig, rng: random.Random) -> Type:
    # lean on sums, absurdity, and existentials: that is where the
    # commuting conversions are
    for _ in range(8):
        t = gen_type(cfg, rng, rng.randint(1, 5))
        if isinstance(t, (Or, Bot, Exists)) or rng.random() < 0.4:
            return t
    return t


def _gen_context(cfg: GenConfig, rng: random.Random) -> Context:
    entries = [("a0", Bot())]
    for i in range(1, max(1, cfg.context_arity)):
        entries.append((f"x{i}", gen_type(cfg, rng, rng.randint(1, 5))))
    return Context(tuple(entries))


def _split(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split a budget into parts, each at least MIN_BUDGET."""
    if total < parts * MIN_BUDGET:
        raise GenerationStuck(f"cannot split {total} into {parts}")
    sizes = [MIN_BUDGET] * parts
    for _ in range(total - parts * MIN_BUDGET):
        sizes[rng.randrange(parts)] += 1
    return sizes


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.poly = _polymorphic(cfg)

    def term(self, ctx: Context, goal: Type, fuel: int,
             scrutinee: bool = False) -> Term:
        if fuel < MIN_BUDGET:
            matches = [n for n, ty in ctx.term_vars if ty == goal]
            if matches and fuel >= 1:
                return Var(self.rng.choice(matches))
            raise GenerationStuck("budget exhausted")
        options: list[tuple[int, str]] = [(2 if scrutinee else 4, "var"),
                                          (3, "eps")]
        intro_weight = 8 if scrutinee else 5
        match goal:
            case Arrow(_, _):
                options.append((intro_weight, "lam"))
            case And(_, _):
                options.append((intro_weight, "pair"))
            case Or(_, _):
                options.append((intro_weight, "inj"))
            case Forall(_, _):
                options.append((intro_weight, "tylam"))
            case Exists(_, _):
                options.append((intro_weight, "pack"))
            case _:
                pass
        elim_weight = 6 if scrutinee else 4
        options += [(elim_weight, "app"), (elim_weight, "proj"),
                    (elim_weight, "case")]
        if self.poly:
            options += [(elim_weight, "tyapp"), (elim_weight, "unpack")]
        names = [name for _, name in options]
        weights = [w for w, _ in options]
        tried: set[str] = set()
        while len(tried) < len(names):
            pick = self.rng.choices(names, weights)[0]
            if pick in tried:
                continue
            tried.add(pick)
            try:
                return getattr(self, "_" + pick)(ctx, goal, fuel)
            except GenerationStuck:
                continue
        raise GenerationStuck(f"no production for {goal!r} at fuel {fuel}")

    def _fresh(self, ctx: Context, base: str) -> str:
        return fresh_name(base, set(ctx.names()))

    def _fresh_atom(self, ctx: Context, avoid: set[str]) -> str:
        return fresh_name("s", set(self.cfg.atom_pool) | ctx.atoms() | avoid)

    def _small_type(self, extra: tuple[str, ...] = ()) -> Type:
        return gen_type(self.cfg, self.rng, self.rng.randint(1, 3), extra)

    def _var(self, ctx: Context, goal: Type, fuel: int) -> Term:
        matches = [n for n, ty in ctx.term_vars if ty == goal]
        if not matches:
            raise GenerationStuck("no variable of goal type")
        return Var(self.rng.choice(matches))

    def _eps(self, ctx: Context, goal: Type, fuel: int) -> Term:
        return Eps(self.term(ctx, Bot(), fuel - 1, scrutinee=True), goal)

    def _lam(self, ctx: Context, goal: Type, fuel: int) -> Term:
        assert isinstance(goal, Arrow)
        x = self._fresh(ctx, "x")
        body = self.term(ctx.bind(x, goal.dom), goal.cod, fuel - 1)
        return Lam(x, goal.dom, close_tm(body, x))

    def _pair(self, ctx: Context, goal: Type, fuel: int) -> Term:
        assert isinstance(goal, And)
        k1, k2 = _split(self.rng, fuel - 1, 2)
        return Pair(self.term(ctx, goal.left, k1),
                    self.term(ctx, goal.right, k2))

    def _inj(self, ctx: Context, goal: Type, fuel: int) -> Term:
        assert isinstance(goal, Or)
        if self.rng.random() < 0.5:
            return Inj1(self.term(ctx, goal.left, fuel - 1), goal)
        return Inj2(self.term(ctx, goal.right, fuel - 1), goal)

    def _tylam(self, ctx: Context, goal: Type, fuel: int) -> Term:
        assert isinstance(goal, Forall)
        a = self._fresh_atom(ctx, ty_atoms(goal))
        body = self.term(ctx.bind_type(a), open_ty(goal.body, Atom(a)),
                         fuel - 1)
        return TyLam(goal.hint, close_ty_tm(body, a))

    def _pack(self, ctx: Context, goal: Type, fuel: int) -> Term:
        assert isinstance(goal, Exists)
        witness = self._small_type()
        return Pack(witness,
                    self.term(ctx, open_ty(goal.body, witness), fuel - 1),
                    goal)

    def _app(self, ctx: Context, goal: Type, fuel: int) -> Term:
        k1, k2 = _split(self.rng, fuel - 1, 2)
        dom = self._small_type()
        fun = self.term(ctx, Arrow(dom, goal), k1, scrutinee=True)
        return App(fun, self.term(ctx, dom, k2))

    def _proj(self, ctx: Context, goal: Type, fuel: int) -> Term:
        other = self._small_type()
        if self.rng.random() < 0.5:
            scrut = self.term(ctx, And(goal, other), fuel - 1, scrutinee=True)
            return Proj1(scrut)
        scrut = self.term(ctx, And(other, goal), fuel - 1, scrutinee=True)
        return Proj2(scrut)

    def _case(self, ctx: Context, goal: Type, fuel: int) -> Term:
        k0, k1, k2 = _split(self.rng, fuel - 1, 3)
        lty, rty = self._small_type(), self._small_type()
        scrut = self.term(ctx, Or(lty, rty), k0, scrutinee=True)
        x = self._fresh(ctx, "x")
        left = self.term(ctx.bind(x, lty), goal, k1)
        y = self._fresh(ctx, "y")
        right = self.term(ctx.bind(y, rty), goal, k2)
        return Case(scrut, x, close_tm(left, x), y, close_tm(right, y))

    def _tyapp(self, ctx: Context, goal: Type, fuel: int) -> Term:
        a = self.rng.choice(self.cfg.atom_pool)
        body = close_ty(goal, a)
        fun = self.term(ctx, Forall("t", body), fuel - 1, scrutinee=True)
        return TyApp(fun, Atom(a))

    def _unpack(self, ctx: Context, goal: Type, fuel: int) -> Term:
        k0, k1 = _split(self.rng, fuel - 1, 2)
        a = self._fresh_atom(ctx, ty_atoms(goal))
        rho_open = self._small_type((a,))
        ex = Exists("t", close_ty(rho_open, a))
        scrut = self.term(ctx, ex, k0, scrutinee=True)
        x = self._fresh(ctx, "x")
        body = self.term(ctx.bind_type(a).bind(x, rho_open), goal, k1)
        return Unpack(scrut, "t", x, close_ty_tm(close_tm(body, x), a))


def gen_typed_term(cfg: GenConfig,
                   rng: random.Random | None = None) -> tuple[Context, Term]:
    """Generate a context and a term well typed under it, deterministically.

    The same config (and no explicit rng) always yields the same pair.
    """
    if cfg.max_size < MIN_BUDGET:
        raise ValueError(f"max_size must be at least {MIN_BUDGET}")
    if rng is None:
        rng = random.Random(cfg.seed)
    gen = _Gen(cfg, rng)
    last: Exception | None = None
    for _ in range(64):
        ctx = _gen_context(cfg, rng)
        goal = _gen_goal(cfg, rng)
        try:
            term = gen.term(ctx, goal, cfg.max_size)
        except GenerationStuck as exc:
            last = exc
            continue
        assert size(term) <= cfg.max_size
        assert infer(ctx, term) == goal
        return ctx, term
    raise GenerationStuck(f"no term after 64 attempts: {last}")
