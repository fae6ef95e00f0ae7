"""Type synthesis for the full calculus and its fragments.

Terms carry enough annotations (on lambdas, injections, ex falso, pack)
that every well-formed term synthesizes a unique type; no unification
is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Type,
    Unpack, Var, alpha_eq, close_ty, free_vars, fresh_name, open_tm, open_ty, open_ty_tm,
    quantifier_free, term_atoms, ty_atoms, well_formed_type,
)

Path = tuple[int, ...]


class TypeInferenceError(Exception):
    """Synthesis failure, with a path of child indices to the offending node."""

    def __init__(self, message: str, path: Path = ()):
        super().__init__(f"{message} (at path {'.'.join(map(str, path)) or 'root'})")
        self.message = message
        self.path = path


class UnboundVariable(TypeInferenceError):
    pass


class TypeMismatch(TypeInferenceError):
    pass


class ExistentialEscape(TypeInferenceError):
    pass


class IllFormedAnnotation(TypeInferenceError):
    pass


@dataclass(frozen=True)
class Context:
    """Typing context: ordered term-variable bindings plus type-variable names.

    Atoms not listed in type_vars are treated as ambient constants.
    """

    term_vars: tuple[tuple[str, Type], ...] = ()
    type_vars: frozenset[str] = frozenset()

    def lookup(self, name: str) -> Type | None:
        for n, ty in reversed(self.term_vars):
            if n == name:
                return ty
        return None

    def bind(self, name: str, ty: Type) -> Context:
        return Context(self.term_vars + ((name, ty),), self.type_vars)

    def bind_type(self, name: str) -> Context:
        return Context(self.term_vars, self.type_vars | {name})

    def names(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.term_vars)

    def atoms(self) -> frozenset[str]:
        out = set(self.type_vars)
        for _, ty in self.term_vars:
            out |= ty_atoms(ty)
        return frozenset(out)


def _check_ann(ann: Type, what: str, path: Path) -> None:
    if not well_formed_type(ann):
        raise IllFormedAnnotation(f"{what} has a dangling bound type index", path)


def infer(ctx: Context, m: Term) -> Type:
    """Synthesize the unique type of `m` under `ctx`, or raise."""
    return _infer(ctx, m, ())


def _fresh_var(ctx: Context, hint: str, *bodies: Term) -> str:
    avoid = set(ctx.names())
    for b in bodies:
        avoid |= free_vars(b)
    return fresh_name(hint or "x", avoid)


def _fresh_atom(ctx: Context, hint: str, *bodies: Term) -> str:
    avoid = set(ctx.atoms())
    for b in bodies:
        avoid |= term_atoms(b)
    return fresh_name(hint or "p", avoid)


def _infer(ctx: Context, m: Term, path: Path) -> Type:
    match m:
        case Var(name):
            ty = ctx.lookup(name)
            if ty is None:
                raise UnboundVariable(f"unbound variable {name}", path)
            return ty
        case Bound(index):
            raise UnboundVariable(f"dangling bound index {index}", path)
        case Lam(hint, ann, body):
            _check_ann(ann, "lambda annotation", path)
            x = _fresh_var(ctx, hint, body)
            cod = _infer(ctx.bind(x, ann), open_tm(body, Var(x)), path + (0,))
            return Arrow(ann, cod)
        case App(fun, arg):
            fun_ty = _infer(ctx, fun, path + (0,))
            if not isinstance(fun_ty, Arrow):
                raise TypeMismatch("applied term is not a function", path + (0,))
            arg_ty = _infer(ctx, arg, path + (1,))
            if not alpha_eq(arg_ty, fun_ty.dom):
                raise TypeMismatch("argument type does not match domain", path + (1,))
            return fun_ty.cod
        case Pair(left, right):
            return And(_infer(ctx, left, path + (0,)), _infer(ctx, right, path + (1,)))
        case Proj1(t):
            ty = _infer(ctx, t, path + (0,))
            if not isinstance(ty, And):
                raise TypeMismatch("projection from a non-pair", path + (0,))
            return ty.left
        case Proj2(t):
            ty = _infer(ctx, t, path + (0,))
            if not isinstance(ty, And):
                raise TypeMismatch("projection from a non-pair", path + (0,))
            return ty.right
        case Inj1(t, ann):
            _check_ann(ann, "injection annotation", path)
            if not isinstance(ann, Or):
                raise IllFormedAnnotation("injection annotation is not a sum", path)
            ty = _infer(ctx, t, path + (0,))
            if not alpha_eq(ty, ann.left):
                raise TypeMismatch("injected term does not match the left summand", path + (0,))
            return ann
        case Inj2(t, ann):
            _check_ann(ann, "injection annotation", path)
            if not isinstance(ann, Or):
                raise IllFormedAnnotation("injection annotation is not a sum", path)
            ty = _infer(ctx, t, path + (0,))
            if not alpha_eq(ty, ann.right):
                raise TypeMismatch("injected term does not match the right summand", path + (0,))
            return ann
        case Case(scrut, x_hint, left, y_hint, right):
            sty = _infer(ctx, scrut, path + (0,))
            if not isinstance(sty, Or):
                raise TypeMismatch("case scrutinee is not a sum", path + (0,))
            x = _fresh_var(ctx, x_hint, left)
            lty = _infer(ctx.bind(x, sty.left), open_tm(left, Var(x)), path + (1,))
            y = _fresh_var(ctx, y_hint, right)
            rty = _infer(ctx.bind(y, sty.right), open_tm(right, Var(y)), path + (2,))
            if not alpha_eq(lty, rty):
                raise TypeMismatch("case branches have different types", path)
            return lty
        case Eps(t, ann):
            _check_ann(ann, "ex falso annotation", path)
            ty = _infer(ctx, t, path + (0,))
            if not isinstance(ty, Bot):
                raise TypeMismatch("ex falso applied to a non-absurd term", path + (0,))
            return ann
        case TyLam(p_hint, body):
            a = _fresh_atom(ctx, p_hint, body)
            bty = _infer(ctx.bind_type(a), open_ty_tm(body, Atom(a)), path + (0,))
            return Forall(p_hint or "p", close_ty(bty, a))
        case TyApp(t, ty_arg):
            _check_ann(ty_arg, "type argument", path)
            ty = _infer(ctx, t, path + (0,))
            if not isinstance(ty, Forall):
                raise TypeMismatch("type application to a non-universal term", path + (0,))
            return open_ty(ty.body, ty_arg)
        case Pack(witness, t, ann):
            _check_ann(witness, "pack witness", path)
            _check_ann(ann, "pack annotation", path)
            if not isinstance(ann, Exists):
                raise IllFormedAnnotation("pack annotation is not an existential", path)
            expected = open_ty(ann.body, witness)
            actual = _infer(ctx, t, path + (0,))
            if not alpha_eq(actual, expected):
                raise IllFormedAnnotation(
                    "packed term does not match the annotation at the witness", path)
            return ann
        case Unpack(scrut, p_hint, x_hint, body):
            sty = _infer(ctx, scrut, path + (0,))
            if not isinstance(sty, Exists):
                raise TypeMismatch("unpack scrutinee is not an existential", path + (0,))
            a = _fresh_atom(ctx, p_hint, body)
            x = _fresh_var(ctx, x_hint, body)
            opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
            inner = ctx.bind_type(a).bind(x, open_ty(sty.body, Atom(a)))
            rty = _infer(inner, opened, path + (1,))
            if a in ty_atoms(rty):
                raise ExistentialEscape(
                    "existential type variable escapes through the unpack result", path)
            return rty
        case _:
            raise TypeInferenceError(f"not a term: {m!r}", path)


# ---------------------------------------------------------------------------
# Fragments


class CalculusId(Enum):
    LambdaFull = "LambdaFull"
    FFull = "FFull"
    LambdaArrow = "LambdaArrow"
    FArrow = "FArrow"


def _type_in_fragment(ty: Type, calculus: CalculusId) -> bool:
    match calculus:
        case CalculusId.FFull:
            return True
        case CalculusId.LambdaFull:
            return quantifier_free(ty)
        case CalculusId.LambdaArrow:
            match ty:
                case Bot():
                    return True
                case Arrow(d, c):
                    return _type_in_fragment(d, calculus) and _type_in_fragment(c, calculus)
                case _:
                    return False
        case CalculusId.FArrow:
            match ty:
                case Bot() | Atom(_):
                    return True
                case Arrow(d, c):
                    return _type_in_fragment(d, calculus) and _type_in_fragment(c, calculus)
                case Forall(_, b):
                    return _type_in_fragment(b, calculus)
                case _:
                    # bound type variables are fine; And/Or/Exists are not
                    return isinstance(ty, TyBound)
    return False


def in_fragment(m: Term, calculus: CalculusId) -> bool:
    """True iff every constructor and every embedded type fits the calculus."""
    lam_only = calculus in (CalculusId.LambdaArrow, CalculusId.FArrow)
    no_poly = calculus in (CalculusId.LambdaArrow, CalculusId.LambdaFull)
    tok = lambda ty: _type_in_fragment(ty, calculus)
    match m:
        case Var(_) | Bound(_):
            return True
        case Lam(_, ann, body):
            return tok(ann) and in_fragment(body, calculus)
        case App(f, a):
            return in_fragment(f, calculus) and in_fragment(a, calculus)
        case Pair(l, r):
            return not lam_only and in_fragment(l, calculus) and in_fragment(r, calculus)
        case Proj1(t) | Proj2(t):
            return not lam_only and in_fragment(t, calculus)
        case Inj1(t, ann) | Inj2(t, ann):
            return not lam_only and tok(ann) and in_fragment(t, calculus)
        case Case(w, _, l, _, r):
            return (not lam_only and in_fragment(w, calculus)
                    and in_fragment(l, calculus) and in_fragment(r, calculus))
        case Eps(t, ann):
            return not lam_only and tok(ann) and in_fragment(t, calculus)
        case TyLam(_, body):
            return not no_poly and in_fragment(body, calculus)
        case TyApp(t, ty):
            return not no_poly and tok(ty) and in_fragment(t, calculus)
        case Pack(w, t, ann):
            return (calculus is CalculusId.FFull and tok(w) and tok(ann)
                    and in_fragment(t, calculus))
        case Unpack(w, _, _, b):
            return (calculus is CalculusId.FFull
                    and in_fragment(w, calculus) and in_fragment(b, calculus))
        case _:
            raise TypeError(f"not a term: {m!r}")
