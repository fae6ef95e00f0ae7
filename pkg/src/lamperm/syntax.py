"""Core syntax: types, terms, eliminators, and the binding kernel.

Terms are stored locally nameless: free variables carry names, bound
variables are de Bruijn indices, with separate index sorts for term
binders and type binders.  Binder name hints ride along purely for
printing (compare=False), so structural equality `==` is exactly
alpha-equivalence and terms can live in sets and dict keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# Types


class Type:
    """Base class for types of the polymorphic calculus."""

    __match_args__ = ()


@dataclass(frozen=True)
class Atom(Type):
    """Type constant: p, q, ..."""

    name: str


@dataclass(frozen=True)
class Bot(Type):
    """The empty type."""


@dataclass(frozen=True)
class Arrow(Type):
    """Function type: dom -> cod"""

    dom: Type
    cod: Type


@dataclass(frozen=True)
class And(Type):
    """Conjunction (pair) type."""

    left: Type
    right: Type


@dataclass(frozen=True)
class Or(Type):
    """Disjunction (sum) type."""

    left: Type
    right: Type


@dataclass(frozen=True)
class Forall(Type):
    """Universal type; the body binds type index 0."""

    hint: str = field(compare=False)
    body: Type


@dataclass(frozen=True)
class Exists(Type):
    """Existential type; the body binds type index 0."""

    hint: str = field(compare=False)
    body: Type


@dataclass(frozen=True)
class TyBound(Type):
    """Bound type variable (de Bruijn index)."""

    index: int


# ---------------------------------------------------------------------------
# Terms


class Term:
    """Base class for terms."""

    __match_args__ = ()


@dataclass(frozen=True)
class Var(Term):
    """Free term variable."""

    name: str


@dataclass(frozen=True)
class Bound(Term):
    """Bound term variable (de Bruijn index)."""

    index: int


@dataclass(frozen=True)
class Lam(Term):
    """Typed abstraction; the body binds term index 0."""

    hint: str = field(compare=False)
    ann: Type
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Proj1(Term):
    t: Term


@dataclass(frozen=True)
class Proj2(Term):
    t: Term


@dataclass(frozen=True)
class Inj1(Term):
    """Left injection, annotated with the full sum type."""

    t: Term
    sum_ann: Type


@dataclass(frozen=True)
class Inj2(Term):
    """Right injection, annotated with the full sum type."""

    t: Term
    sum_ann: Type


@dataclass(frozen=True)
class Case(Term):
    """Sum elimination; each branch binds term index 0."""

    scrut: Term
    x_hint: str = field(compare=False)
    left: Term
    y_hint: str = field(compare=False)
    right: Term


@dataclass(frozen=True)
class Eps(Term):
    """Ex falso: maps a proof of the empty type to target_ann."""

    t: Term
    target_ann: Type


@dataclass(frozen=True)
class TyLam(Term):
    """Type abstraction; the body binds type index 0."""

    p_hint: str = field(compare=False)
    body: Term


@dataclass(frozen=True)
class TyApp(Term):
    t: Term
    ty_arg: Type


@dataclass(frozen=True)
class Pack(Term):
    """Existential introduction, annotated with the full existential type."""

    witness: Type
    t: Term
    ex_ann: Type


@dataclass(frozen=True)
class Unpack(Term):
    """Existential elimination; the body binds type index 0 and term index 0."""

    scrut: Term
    p_hint: str = field(compare=False)
    x_hint: str = field(compare=False)
    body: Term


# ---------------------------------------------------------------------------
# Eliminators (the E of a head/eliminator decomposition M E)


class Eliminator:
    """Base class for eliminators."""

    __match_args__ = ()


@dataclass(frozen=True)
class Arg(Eliminator):
    """Application to an argument."""

    term: Term


@dataclass(frozen=True)
class Pi1(Eliminator):
    pass


@dataclass(frozen=True)
class Pi2(Eliminator):
    pass


@dataclass(frozen=True)
class Branches(Eliminator):
    """Case branches; each body binds term index 0."""

    x_hint: str = field(compare=False)
    left: Term
    y_hint: str = field(compare=False)
    right: Term


@dataclass(frozen=True)
class TyArg(Eliminator):
    """Application to a type argument."""

    ty: Type


@dataclass(frozen=True)
class UnpackBranch(Eliminator):
    """Unpack clause; the body binds type index 0 and term index 0."""

    p_hint: str = field(compare=False)
    x_hint: str = field(compare=False)
    body: Term


@dataclass(frozen=True)
class Epsilon(Eliminator):
    """Ex falso at the given target type."""

    ty: Type


# ---------------------------------------------------------------------------
# Type-level binding operations


def open_ty(t: Type, repl: Type, depth: int = 0) -> Type:
    """Replace bound type index `depth` with the locally closed type `repl`."""
    match t:
        case TyBound(i):
            return repl if i == depth else t
        case Arrow(d, c):
            return Arrow(open_ty(d, repl, depth), open_ty(c, repl, depth))
        case And(l, r):
            return And(open_ty(l, repl, depth), open_ty(r, repl, depth))
        case Or(l, r):
            return Or(open_ty(l, repl, depth), open_ty(r, repl, depth))
        case Forall(h, b):
            return Forall(h, open_ty(b, repl, depth + 1))
        case Exists(h, b):
            return Exists(h, open_ty(b, repl, depth + 1))
        case _:
            return t


def close_ty(t: Type, name: str, depth: int = 0) -> Type:
    """Abstract the atom `name` to bound type index `depth`."""
    match t:
        case Atom(n):
            return TyBound(depth) if n == name else t
        case Arrow(d, c):
            return Arrow(close_ty(d, name, depth), close_ty(c, name, depth))
        case And(l, r):
            return And(close_ty(l, name, depth), close_ty(r, name, depth))
        case Or(l, r):
            return Or(close_ty(l, name, depth), close_ty(r, name, depth))
        case Forall(h, b):
            return Forall(h, close_ty(b, name, depth + 1))
        case Exists(h, b):
            return Exists(h, close_ty(b, name, depth + 1))
        case _:
            return t


def subst_type(t: Type, name: str, repl: Type) -> Type:
    """Substitute the type `repl` for the atom `name` in `t`.

    Quantifiers bind indices, not atoms, so the substitution can never
    capture; a quantifier whose printed name shadows `name` simply has
    no occurrences of the atom inside.
    """
    match t:
        case Atom(n):
            return repl if n == name else t
        case Arrow(d, c):
            return Arrow(subst_type(d, name, repl), subst_type(c, name, repl))
        case And(l, r):
            return And(subst_type(l, name, repl), subst_type(r, name, repl))
        case Or(l, r):
            return Or(subst_type(l, name, repl), subst_type(r, name, repl))
        case Forall(h, b):
            return Forall(h, subst_type(b, name, repl))
        case Exists(h, b):
            return Exists(h, subst_type(b, name, repl))
        case _:
            return t


def ty_atoms(t: Type) -> frozenset[str]:
    """Atom names occurring in a type."""
    match t:
        case Atom(n):
            return frozenset((n,))
        case Arrow(d, c):
            return ty_atoms(d) | ty_atoms(c)
        case And(l, r) | Or(l, r):
            return ty_atoms(l) | ty_atoms(r)
        case Forall(_, b) | Exists(_, b):
            return ty_atoms(b)
        case _:
            return frozenset()


def well_formed_type(t: Type, depth: int = 0) -> bool:
    """True iff every bound type index points at an enclosing quantifier."""
    match t:
        case TyBound(i):
            return 0 <= i < depth
        case Arrow(d, c):
            return well_formed_type(d, depth) and well_formed_type(c, depth)
        case And(l, r) | Or(l, r):
            return well_formed_type(l, depth) and well_formed_type(r, depth)
        case Forall(_, b) | Exists(_, b):
            return well_formed_type(b, depth + 1)
        case _:
            return True


def quantifier_free(t: Type) -> bool:
    match t:
        case Forall(_, _) | Exists(_, _):
            return False
        case Arrow(d, c):
            return quantifier_free(d) and quantifier_free(c)
        case And(l, r) | Or(l, r):
            return quantifier_free(l) and quantifier_free(r)
        case _:
            return True


# ---------------------------------------------------------------------------
# Term-level binding operations
#
# Each operation carries a `depth` for its own index sort.  Term binders
# (Lam bodies, Case branches, Unpack bodies) bump the term depth; type
# binders (TyLam bodies, Unpack bodies) bump the type depth.


def open_tm(t: Term, repl: Term, depth: int = 0) -> Term:
    """Replace bound term index `depth` with the locally closed term `repl`."""
    match t:
        case Bound(i):
            return repl if i == depth else t
        case Var(_):
            return t
        case Lam(h, a, b):
            return Lam(h, a, open_tm(b, repl, depth + 1))
        case App(f, a):
            return App(open_tm(f, repl, depth), open_tm(a, repl, depth))
        case Pair(l, r):
            return Pair(open_tm(l, repl, depth), open_tm(r, repl, depth))
        case Proj1(m):
            return Proj1(open_tm(m, repl, depth))
        case Proj2(m):
            return Proj2(open_tm(m, repl, depth))
        case Inj1(m, ann):
            return Inj1(open_tm(m, repl, depth), ann)
        case Inj2(m, ann):
            return Inj2(open_tm(m, repl, depth), ann)
        case Case(w, xh, l, yh, r):
            return Case(open_tm(w, repl, depth), xh,
                        open_tm(l, repl, depth + 1), yh,
                        open_tm(r, repl, depth + 1))
        case Eps(m, ann):
            return Eps(open_tm(m, repl, depth), ann)
        case TyLam(ph, b):
            return TyLam(ph, open_tm(b, repl, depth))
        case TyApp(m, ty):
            return TyApp(open_tm(m, repl, depth), ty)
        case Pack(w, m, ann):
            return Pack(w, open_tm(m, repl, depth), ann)
        case Unpack(w, ph, xh, b):
            return Unpack(open_tm(w, repl, depth), ph, xh,
                          open_tm(b, repl, depth + 1))
        case _:
            raise TypeError(f"not a term: {t!r}")


def close_tm(t: Term, name: str, depth: int = 0) -> Term:
    """Abstract the free variable `name` to bound term index `depth`."""
    match t:
        case Var(n):
            return Bound(depth) if n == name else t
        case Bound(_):
            return t
        case Lam(h, a, b):
            return Lam(h, a, close_tm(b, name, depth + 1))
        case App(f, a):
            return App(close_tm(f, name, depth), close_tm(a, name, depth))
        case Pair(l, r):
            return Pair(close_tm(l, name, depth), close_tm(r, name, depth))
        case Proj1(m):
            return Proj1(close_tm(m, name, depth))
        case Proj2(m):
            return Proj2(close_tm(m, name, depth))
        case Inj1(m, ann):
            return Inj1(close_tm(m, name, depth), ann)
        case Inj2(m, ann):
            return Inj2(close_tm(m, name, depth), ann)
        case Case(w, xh, l, yh, r):
            return Case(close_tm(w, name, depth), xh,
                        close_tm(l, name, depth + 1), yh,
                        close_tm(r, name, depth + 1))
        case Eps(m, ann):
            return Eps(close_tm(m, name, depth), ann)
        case TyLam(ph, b):
            return TyLam(ph, close_tm(b, name, depth))
        case TyApp(m, ty):
            return TyApp(close_tm(m, name, depth), ty)
        case Pack(w, m, ann):
            return Pack(w, close_tm(m, name, depth), ann)
        case Unpack(w, ph, xh, b):
            return Unpack(close_tm(w, name, depth), ph, xh,
                          close_tm(b, name, depth + 1))
        case _:
            raise TypeError(f"not a term: {t!r}")


def open_ty_tm(t: Term, repl: Type, depth: int = 0) -> Term:
    """Replace bound type index `depth` (in embedded types) with `repl`."""
    o = lambda ty: open_ty(ty, repl, depth)
    match t:
        case Var(_) | Bound(_):
            return t
        case Lam(h, a, b):
            return Lam(h, o(a), open_ty_tm(b, repl, depth))
        case App(f, a):
            return App(open_ty_tm(f, repl, depth), open_ty_tm(a, repl, depth))
        case Pair(l, r):
            return Pair(open_ty_tm(l, repl, depth), open_ty_tm(r, repl, depth))
        case Proj1(m):
            return Proj1(open_ty_tm(m, repl, depth))
        case Proj2(m):
            return Proj2(open_ty_tm(m, repl, depth))
        case Inj1(m, ann):
            return Inj1(open_ty_tm(m, repl, depth), o(ann))
        case Inj2(m, ann):
            return Inj2(open_ty_tm(m, repl, depth), o(ann))
        case Case(w, xh, l, yh, r):
            return Case(open_ty_tm(w, repl, depth), xh,
                        open_ty_tm(l, repl, depth), yh,
                        open_ty_tm(r, repl, depth))
        case Eps(m, ann):
            return Eps(open_ty_tm(m, repl, depth), o(ann))
        case TyLam(ph, b):
            return TyLam(ph, open_ty_tm(b, repl, depth + 1))
        case TyApp(m, ty):
            return TyApp(open_ty_tm(m, repl, depth), o(ty))
        case Pack(w, m, ann):
            return Pack(o(w), open_ty_tm(m, repl, depth), o(ann))
        case Unpack(w, ph, xh, b):
            return Unpack(open_ty_tm(w, repl, depth), ph, xh,
                          open_ty_tm(b, repl, depth + 1))
        case _:
            raise TypeError(f"not a term: {t!r}")


def close_ty_tm(t: Term, name: str, depth: int = 0) -> Term:
    """Abstract the atom `name` (in embedded types) to bound type index `depth`."""
    c = lambda ty: close_ty(ty, name, depth)
    match t:
        case Var(_) | Bound(_):
            return t
        case Lam(h, a, b):
            return Lam(h, c(a), close_ty_tm(b, name, depth))
        case App(f, a):
            return App(close_ty_tm(f, name, depth), close_ty_tm(a, name, depth))
        case Pair(l, r):
            return Pair(close_ty_tm(l, name, depth), close_ty_tm(r, name, depth))
        case Proj1(m):
            return Proj1(close_ty_tm(m, name, depth))
        case Proj2(m):
            return Proj2(close_ty_tm(m, name, depth))
        case Inj1(m, ann):
            return Inj1(close_ty_tm(m, name, depth), c(ann))
        case Inj2(m, ann):
            return Inj2(close_ty_tm(m, name, depth), c(ann))
        case Case(w, xh, l, yh, r):
            return Case(close_ty_tm(w, name, depth), xh,
                        close_ty_tm(l, name, depth), yh,
                        close_ty_tm(r, name, depth))
        case Eps(m, ann):
            return Eps(close_ty_tm(m, name, depth), c(ann))
        case TyLam(ph, b):
            return TyLam(ph, close_ty_tm(b, name, depth + 1))
        case TyApp(m, ty):
            return TyApp(close_ty_tm(m, name, depth), c(ty))
        case Pack(w, m, ann):
            return Pack(c(w), close_ty_tm(m, name, depth), c(ann))
        case Unpack(w, ph, xh, b):
            return Unpack(close_ty_tm(w, name, depth), ph, xh,
                          close_ty_tm(b, name, depth + 1))
        case _:
            raise TypeError(f"not a term: {t!r}")


def subst_term(m: Term, x: str, n: Term) -> Term:
    """Capture-avoiding substitution of `n` for the free variable `x` in `m`.

    Bound variables are indices, so no renaming is ever needed.
    """
    match m:
        case Var(name):
            return n if name == x else m
        case Bound(_):
            return m
        case Lam(h, a, b):
            return Lam(h, a, subst_term(b, x, n))
        case App(f, a):
            return App(subst_term(f, x, n), subst_term(a, x, n))
        case Pair(l, r):
            return Pair(subst_term(l, x, n), subst_term(r, x, n))
        case Proj1(t):
            return Proj1(subst_term(t, x, n))
        case Proj2(t):
            return Proj2(subst_term(t, x, n))
        case Inj1(t, ann):
            return Inj1(subst_term(t, x, n), ann)
        case Inj2(t, ann):
            return Inj2(subst_term(t, x, n), ann)
        case Case(w, xh, l, yh, r):
            return Case(subst_term(w, x, n), xh,
                        subst_term(l, x, n), yh, subst_term(r, x, n))
        case Eps(t, ann):
            return Eps(subst_term(t, x, n), ann)
        case TyLam(ph, b):
            return TyLam(ph, subst_term(b, x, n))
        case TyApp(t, ty):
            return TyApp(subst_term(t, x, n), ty)
        case Pack(w, t, ann):
            return Pack(w, subst_term(t, x, n), ann)
        case Unpack(w, ph, xh, b):
            return Unpack(subst_term(w, x, n), ph, xh, subst_term(b, x, n))
        case _:
            raise TypeError(f"not a term: {m!r}")


def subst_type_in_term(m: Term, p: str, s: Type) -> Term:
    """Substitute the type `s` for the atom `p` throughout a term's types."""
    f = lambda ty: subst_type(ty, p, s)
    match m:
        case Var(_) | Bound(_):
            return m
        case Lam(h, a, b):
            return Lam(h, f(a), subst_type_in_term(b, p, s))
        case App(g, a):
            return App(subst_type_in_term(g, p, s), subst_type_in_term(a, p, s))
        case Pair(l, r):
            return Pair(subst_type_in_term(l, p, s), subst_type_in_term(r, p, s))
        case Proj1(t):
            return Proj1(subst_type_in_term(t, p, s))
        case Proj2(t):
            return Proj2(subst_type_in_term(t, p, s))
        case Inj1(t, ann):
            return Inj1(subst_type_in_term(t, p, s), f(ann))
        case Inj2(t, ann):
            return Inj2(subst_type_in_term(t, p, s), f(ann))
        case Case(w, xh, l, yh, r):
            return Case(subst_type_in_term(w, p, s), xh,
                        subst_type_in_term(l, p, s), yh,
                        subst_type_in_term(r, p, s))
        case Eps(t, ann):
            return Eps(subst_type_in_term(t, p, s), f(ann))
        case TyLam(ph, b):
            return TyLam(ph, subst_type_in_term(b, p, s))
        case TyApp(t, ty):
            return TyApp(subst_type_in_term(t, p, s), f(ty))
        case Pack(w, t, ann):
            return Pack(f(w), subst_type_in_term(t, p, s), f(ann))
        case Unpack(w, ph, xh, b):
            return Unpack(subst_type_in_term(w, p, s), ph, xh,
                          subst_type_in_term(b, p, s))
        case _:
            raise TypeError(f"not a term: {m!r}")


def free_vars(t: Term) -> frozenset[str]:
    """Names of the free term variables."""
    match t:
        case Var(n):
            return frozenset((n,))
        case Bound(_):
            return frozenset()
        case Lam(_, _, b) | TyLam(_, b):
            return free_vars(b)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Pair(l, r):
            return free_vars(l) | free_vars(r)
        case Proj1(m) | Proj2(m) | Inj1(m, _) | Inj2(m, _) | Eps(m, _) | TyApp(m, _) | Pack(_, m, _):
            return free_vars(m)
        case Case(w, _, l, _, r):
            return free_vars(w) | free_vars(l) | free_vars(r)
        case Unpack(w, _, _, b):
            return free_vars(w) | free_vars(b)
        case _:
            raise TypeError(f"not a term: {t!r}")


def term_atoms(t: Term) -> frozenset[str]:
    """Atom names occurring in a term's embedded types."""
    match t:
        case Var(_) | Bound(_):
            return frozenset()
        case Lam(_, a, b):
            return ty_atoms(a) | term_atoms(b)
        case TyLam(_, b):
            return term_atoms(b)
        case App(f, a):
            return term_atoms(f) | term_atoms(a)
        case Pair(l, r):
            return term_atoms(l) | term_atoms(r)
        case Proj1(m) | Proj2(m):
            return term_atoms(m)
        case Inj1(m, ann) | Inj2(m, ann) | Eps(m, ann) | TyApp(m, ann):
            return term_atoms(m) | ty_atoms(ann)
        case Case(w, _, l, _, r):
            return term_atoms(w) | term_atoms(l) | term_atoms(r)
        case Pack(w, m, ann):
            return ty_atoms(w) | term_atoms(m) | ty_atoms(ann)
        case Unpack(w, _, _, b):
            return term_atoms(w) | term_atoms(b)
        case _:
            raise TypeError(f"not a term: {t!r}")


def size(t: Term) -> int:
    """Number of term nodes (types not counted)."""
    match t:
        case Var(_) | Bound(_):
            return 1
        case Lam(_, _, b) | TyLam(_, b):
            return 1 + size(b)
        case App(f, a):
            return 1 + size(f) + size(a)
        case Pair(l, r):
            return 1 + size(l) + size(r)
        case Proj1(m) | Proj2(m) | Inj1(m, _) | Inj2(m, _) | Eps(m, _) | TyApp(m, _) | Pack(_, m, _):
            return 1 + size(m)
        case Case(w, _, l, _, r):
            return 1 + size(w) + size(l) + size(r)
        case Unpack(w, _, _, b):
            return 1 + size(w) + size(b)
        case _:
            raise TypeError(f"not a term: {t!r}")


def alpha_eq(a: Term | Type, b: Term | Type) -> bool:
    """Alpha-equivalence; with this representation, plain equality."""
    return a == b


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """`base` itself if unused, else base with the smallest unused suffix."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


# ---------------------------------------------------------------------------
# Head/eliminator decomposition


def apply_eliminator(m: Term, e: Eliminator) -> Term:
    """Build the term `m E`."""
    match e:
        case Arg(t):
            return App(m, t)
        case Pi1():
            return Proj1(m)
        case Pi2():
            return Proj2(m)
        case Branches(xh, l, yh, r):
            return Case(m, xh, l, yh, r)
        case TyArg(ty):
            return TyApp(m, ty)
        case UnpackBranch(ph, xh, b):
            return Unpack(m, ph, xh, b)
        case Epsilon(ty):
            return Eps(m, ty)
        case _:
            raise TypeError(f"not an eliminator: {e!r}")


def decompose_eliminator(t: Term) -> tuple[Term, Eliminator] | None:
    """Split `t` into head and eliminator, or None for introduction forms."""
    match t:
        case App(f, a):
            return f, Arg(a)
        case Proj1(m):
            return m, Pi1()
        case Proj2(m):
            return m, Pi2()
        case Case(w, xh, l, yh, r):
            return w, Branches(xh, l, yh, r)
        case TyApp(m, ty):
            return m, TyArg(ty)
        case Unpack(w, ph, xh, b):
            return w, UnpackBranch(ph, xh, b)
        case Eps(m, ty):
            return m, Epsilon(ty)
        case _:
            return None
