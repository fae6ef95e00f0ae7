"""Batch property checks over randomly generated well-typed terms.

run_suite generates a stream of terms from a seeded config and runs a
selection of named checks against each: translation soundness, step
simulation, commutation invariance, measure decrease, subject
reduction, normalization, strategy agreement, and the substitution
equations.  Failures keep a shrunk witness that can be serialized and
replayed.
"""

from __future__ import annotations

import csv
import random
from collections import Counter
from dataclasses import dataclass, field

from . import cps_translation as cps
from . import simple_translation as simple
from .generate import GenConfig, GenerationStuck, _Gen, gen_type, gen_typed_term
from .measure import check_decrease, chi
from .reduction import (
    BETA_RULES, FuelExhausted, ReductionStep, Strategy, is_commutative,
    redexes, step,
)
from .search import DepthCapExceeded
from .surface import print_program
from .syntax import (
    App, Bot, Case, Eps, Inj1, Inj2, Pack, Pair, Proj1, Proj2, Term, TyApp,
    Unpack, Var, alpha_eq, free_vars,
)
from .typecheck import CalculusId, Context, TypeInferenceError, in_fragment, infer
from .witnesses import context_for, witnesses

ALL_CHECKS = (
    "soundness-simple", "soundness-cps", "sim-simple", "sim-cps-beta",
    "cps-commutative", "chi-decrease", "subject-reduction", "normalization",
    "strategy-agreement", "substitution-lemmas",
)

NORMALIZATION_FUEL = 100_000

# checks that are anchored on the fixed commutative-rule witnesses and
# therefore run over them before any generated terms
WITNESS_CHECKS = ("cps-commutative", "chi-decrease")


@dataclass(frozen=True)
class Failure:
    check: str
    index: int
    detail: str
    context: Context
    term: Term

    def render(self) -> str:
        return (f"[{self.check}] term #{self.index}: {self.detail}\n"
                + print_program(self.context, self.term))


@dataclass
class SuiteReport:
    config: GenConfig
    count: int
    checks: tuple[str, ...]
    attempted: Counter = field(default_factory=Counter)
    passed: Counter = field(default_factory=Counter)
    failures: list[Failure] = field(default_factory=list)
    rule_counts: Counter = field(default_factory=Counter)
    chi_pairs: list[tuple[int, int]] = field(default_factory=list)

    def all_passed(self) -> bool:
        return not self.failures

    def to_rows(self) -> list[tuple[str, int, int, int]]:
        rows = []
        for check in self.checks:
            att = self.attempted[check]
            ok = self.passed[check]
            rows.append((check, att, ok, att - ok))
        return rows

    def render_text(self) -> str:
        lines = [f"suite: calculus={self.config.calculus.value} "
                 f"count={self.count} seed={self.config.seed} "
                 f"max_size={self.config.max_size}"]
        width = max(len(c) for c in self.checks)
        for check, att, ok, bad in self.to_rows():
            status = "pass" if bad == 0 else "FAIL"
            lines.append(f"  {check:<{width}}  {ok:>6}/{att:<6} {status}")
        lines.append(f"rules seen: {len(self.rule_counts)}/28")
        if self.failures:
            lines.append(f"{len(self.failures)} failing witness(es):")
            for f in self.failures[:10]:
                lines.append(f.render())
        return "\n".join(lines)


def _restrict(ctx: Context, t: Term) -> Context:
    fv = free_vars(t)
    return Context(tuple((n, ty) for n, ty in ctx.term_vars if n in fv),
                   ctx.type_vars)


def _quantifier_free_ctx(ctx: Context) -> bool:
    from .syntax import quantifier_free
    return all(quantifier_free(ty) for _, ty in ctx.term_vars)


Outcome = tuple[int, list[str]]


def _check_soundness_simple(cfg: GenConfig, ctx: Context, t: Term,
                            rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    if not in_fragment(t, CalculusId.LambdaFull) or not _quantifier_free_ctx(ctx):
        return 0, []
    try:
        image = simple.tr_term(ctx, t)
        want = simple.tr_type(infer(ctx, t))
        got = infer(simple.tr_ctx(ctx), image)
    except Exception as exc:
        return 1, [f"translation raised {exc!r}"]
    problems = []
    if got != want:
        problems.append("translated term has the wrong type")
    if not in_fragment(image, CalculusId.LambdaArrow):
        problems.append("translated term leaves the arrow fragment")
    return 1, problems


def _check_soundness_cps(cfg: GenConfig, ctx: Context, t: Term,
                         rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    try:
        image = cps.trf_term(ctx, t)
        want = cps.trf_type(infer(ctx, t))
        got = infer(cps.trf_ctx(ctx), image)
    except Exception as exc:
        return 1, [f"translation raised {exc!r}"]
    problems = []
    if got != want:
        problems.append("translated term has the wrong type")
    if not in_fragment(image, CalculusId.FArrow):
        problems.append("translated term leaves the arrow/forall fragment")
    return 1, problems


def _check_sim_simple(cfg: GenConfig, ctx: Context, t: Term,
                      rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    if not in_fragment(t, CalculusId.LambdaFull) or not _quantifier_free_ctx(ctx):
        return 0, []
    attempted = 0
    problems = []
    for s in redexes(t):
        attempted += 1
        try:
            if not simple.check_simulation_simple(ctx, t, s):
                problems.append(f"{s.rule.value} at {s.path}: image does not "
                                "reduce to the image of the reduct")
        except DepthCapExceeded as exc:
            problems.append(f"{s.rule.value} at {s.path}: {exc}")
    return attempted, problems


def _check_sim_cps_beta(cfg: GenConfig, ctx: Context, t: Term,
                        rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    attempted = 0
    problems = []
    for s in redexes(t):
        if s.rule not in BETA_RULES:
            continue
        attempted += 1
        try:
            if not cps.check_simulation_cps_beta(ctx, t, s):
                problems.append(f"{s.rule.value} at {s.path}: image does not "
                                "reduce to the image of the reduct")
        except DepthCapExceeded as exc:
            problems.append(f"{s.rule.value} at {s.path}: {exc}")
    return attempted, problems


def _check_cps_commutative(cfg: GenConfig, ctx: Context, t: Term,
                           rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    attempted = 0
    problems = []
    for s in redexes(t):
        if not is_commutative(s.rule):
            continue
        attempted += 1
        if not cps.check_cps_commutative(ctx, t, s):
            problems.append(f"{s.rule.value} at {s.path}: images differ")
    return attempted, problems


def commutation_only_trace(ctx: Context, t: Term,
                           rng: random.Random | None = None,
                           fuel: int = NORMALIZATION_FUEL) -> list[ReductionStep]:
    """Apply commutative steps until none remain; return the steps taken."""
    trace: list[ReductionStep] = []
    while True:
        cands = [s for s in redexes(t) if is_commutative(s.rule)]
        if not cands:
            return trace
        if len(trace) >= fuel:
            raise FuelExhausted(t, trace)
        s = cands[0] if rng is None else rng.choice(cands)
        t = step(t, s, ctx)
        trace.append(s)


def _check_chi_decrease(cfg: GenConfig, ctx: Context, t: Term,
                        rng: random.Random,
                        pairs: list[tuple[int, int]] | None = None) -> Outcome:
    ctx = _restrict(ctx, t)
    attempted = 1
    problems = []
    if chi(t) < 1:
        problems.append("chi below one")
    for s in redexes(t):
        if not is_commutative(s.rule):
            continue
        attempted += 1
        res = check_decrease(t, s, ctx)
        if pairs is not None:
            pairs.append((res.before, res.after))
        if not res.strictly_decreased or res.after < 1:
            problems.append(f"{s.rule.value} at {s.path}: chi went "
                            f"{res.before} -> {res.after}")
    # maximal commutation-only sequences stay within the starting measure
    bound = chi(t)
    for pick_rng in (None, random.Random(rng.random())):
        attempted += 1
        try:
            trace = commutation_only_trace(ctx, t, pick_rng, fuel=bound + 1)
        except FuelExhausted:
            problems.append(f"a commutation-only run exceeded chi = {bound}")
            continue
        if len(trace) > bound:
            problems.append(f"a commutation-only run took {len(trace)} steps, "
                            f"with chi only {bound}")
    return attempted, problems


def _check_subject_reduction(cfg: GenConfig, ctx: Context, t: Term,
                             rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    ty = infer(ctx, t)
    attempted = 0
    problems = []
    cur = t
    for _ in range(NORMALIZATION_FUEL):
        steps = redexes(cur)
        if not steps:
            break
        cur = step(cur, steps[0], ctx)
        attempted += 1
        try:
            ty2 = infer(ctx, cur)
        except TypeInferenceError as exc:
            problems.append(f"reduct fails to typecheck: {exc}")
            break
        if ty2 != ty:
            problems.append("type changed along the reduction")
            break
    return max(attempted, 1), problems


def _normalize_or_fail(ctx: Context, t: Term, strategy: Strategy):
    from .reduction import normalize
    return normalize(t, strategy, fuel=NORMALIZATION_FUEL, ctx=ctx)


def _check_normalization(cfg: GenConfig, ctx: Context, t: Term,
                         rng: random.Random,
                         rules_seen: Counter | None = None) -> Outcome:
    ctx = _restrict(ctx, t)
    problems = []
    attempted = 0
    for strategy in Strategy:
        attempted += 1
        try:
            nf, trace = _normalize_or_fail(ctx, t, strategy)
        except FuelExhausted:
            problems.append(f"{strategy.value}: fuel exhausted")
            continue
        if redexes(nf):
            problems.append(f"{strategy.value}: result is not normal")
        if rules_seen is not None:
            for s in trace:
                rules_seen[s.rule.value] += 1
    return attempted, problems


def _check_strategy_agreement(cfg: GenConfig, ctx: Context, t: Term,
                              rng: random.Random) -> Outcome:
    ctx = _restrict(ctx, t)
    try:
        nf_lo, _ = _normalize_or_fail(ctx, t, Strategy.LeftmostOutermost)
        nf_ri, _ = _normalize_or_fail(ctx, t, Strategy.RightmostInnermost)
    except FuelExhausted:
        return 1, ["fuel exhausted before agreement could be checked"]
    if not alpha_eq(nf_lo, nf_ri):
        return 1, ["leftmost-outermost and rightmost-innermost normal forms "
                   "differ"]
    return 1, []


def _check_substitution_lemmas(cfg: GenConfig, ctx: Context, t: Term,
                               rng: random.Random) -> Outcome:
    candidates = [(n, ty) for n, ty in ctx.term_vars if n != "a0"]
    if not candidates:
        return 0, []
    x, xty = candidates[rng.randrange(len(candidates))]
    ctx_sans_x = Context(tuple((n, ty) for n, ty in ctx.term_vars if n != x),
                         ctx.type_vars)
    gen = _Gen(cfg, rng)
    try:
        n = gen.term(ctx_sans_x, xty, max(6, cfg.max_size // 3))
    except GenerationStuck:
        n = Eps(Var("a0"), xty)
    p = rng.choice(cfg.atom_pool)
    rho = gen_type(cfg, rng, rng.randint(1, 4))
    results = cps.substitution_lemma_results(ctx, t, x, n, p, rho)
    bad = [name for name, ok in results.items() if not ok]
    return 6, [f"equation {name} failed for x={x}, p={p}" for name in bad]


_CHECK_FNS = {
    "soundness-simple": _check_soundness_simple,
    "soundness-cps": _check_soundness_cps,
    "sim-simple": _check_sim_simple,
    "sim-cps-beta": _check_sim_cps_beta,
    "cps-commutative": _check_cps_commutative,
    "chi-decrease": _check_chi_decrease,
    "subject-reduction": _check_subject_reduction,
    "normalization": _check_normalization,
    "strategy-agreement": _check_strategy_agreement,
    "substitution-lemmas": _check_substitution_lemmas,
}

_SHRINK_CHILDREN = {
    App: lambda t: [t.fun, t.arg],
    Pair: lambda t: [t.left, t.right],
    Proj1: lambda t: [t.t],
    Proj2: lambda t: [t.t],
    Inj1: lambda t: [t.t],
    Inj2: lambda t: [t.t],
    Eps: lambda t: [t.t],
    TyApp: lambda t: [t.t],
    Pack: lambda t: [t.t],
    Case: lambda t: [t.scrut],
    Unpack: lambda t: [t.scrut],
}


def shrink(ctx: Context, t: Term, still_fails, rounds: int = 64) -> Term:
    """Greedy structural shrinking: walk down to failing closed subterms."""
    cur = t
    for _ in range(rounds):
        getter = _SHRINK_CHILDREN.get(type(cur))
        if getter is None:
            break
        for child in getter(cur):
            try:
                if still_fails(ctx, child):
                    cur = child
                    break
            except Exception:
                continue
        else:
            break
    return cur


def _run_witness_pass(cfg: GenConfig, checks: tuple[str, ...],
                      report: SuiteReport) -> None:
    for w in witnesses():
        if not is_commutative(w.rule):
            continue
        ctx = context_for(w.calculus)
        for check in checks:
            if check not in WITNESS_CHECKS:
                continue
            crng = random.Random(f"{cfg.seed}:witness:{w.rule.value}:{check}")
            if check == "chi-decrease":
                attempted, problems = _check_chi_decrease(
                    cfg, ctx, w.term, crng, pairs=report.chi_pairs)
            else:
                attempted, problems = _CHECK_FNS[check](cfg, ctx, w.term, crng)
            report.attempted[check] += attempted
            report.passed[check] += attempted - len(problems)
            if problems:
                report.failures.append(Failure(
                    check, -1, f"witness {w.rule.value}: " + "; ".join(problems),
                    _restrict(ctx, w.term), w.term))


def run_suite(cfg: GenConfig, count: int,
              checks: tuple[str, ...] = ALL_CHECKS,
              include_witnesses: bool = True) -> SuiteReport:
    unknown = [c for c in checks if c not in _CHECK_FNS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    report = SuiteReport(config=cfg, count=count, checks=tuple(checks))
    if include_witnesses:
        _run_witness_pass(cfg, checks, report)
    for i in range(count):
        rng = random.Random(f"{cfg.seed}:{i}")
        ctx, t = gen_typed_term(cfg, rng)
        for s in redexes(t):
            report.rule_counts[s.rule.value] += 1
        for check in checks:
            crng = random.Random(f"{cfg.seed}:{i}:{check}")
            if check == "chi-decrease":
                attempted, problems = _check_chi_decrease(
                    cfg, ctx, t, crng, pairs=report.chi_pairs)
            elif check == "normalization":
                attempted, problems = _check_normalization(
                    cfg, ctx, t, crng, rules_seen=report.rule_counts)
            else:
                attempted, problems = _CHECK_FNS[check](cfg, ctx, t, crng)
            report.attempted[check] += attempted
            report.passed[check] += attempted - len(problems)
            if problems:
                fn = _CHECK_FNS[check]

                def still_fails(c: Context, cand: Term,
                                _fn=fn, _key=f"{cfg.seed}:{i}:{check}") -> bool:
                    out = _fn(cfg, c, cand, random.Random(_key))
                    return bool(out[1])

                witness = shrink(_restrict(ctx, t), t, still_fails)
                report.failures.append(Failure(
                    check, i, "; ".join(problems),
                    _restrict(ctx, witness), witness))
    return report


def write_csv(report: SuiteReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "attempted", "passed", "failed"])
        for row in report.to_rows():
            writer.writerow(row)


def write_rule_csv(report: SuiteReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rule", "count"])
        for rule, n in sorted(report.rule_counts.items()):
            writer.writerow([rule, n])


def write_failures(report: SuiteReport, path: str) -> None:
    with open(path, "w") as fh:
        for f in report.failures:
            fh.write(f.render() + "\n\n")
