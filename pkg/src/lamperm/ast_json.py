"""JSON AST import/export.

Binders are exported with explicit names (chosen with the same
deterministic freshening as the printer) and closed again on import, so
an export/import round trip is alpha-exact.
"""

from __future__ import annotations

import json
from typing import Any

from .syntax import (
    And, App, Arrow, Atom, Bot, Bound, Case, Eps, Exists, Forall, Inj1, Inj2,
    Lam, Or, Pack, Pair, Proj1, Proj2, Term, TyApp, TyBound, TyLam, Type,
    Unpack, Var, free_vars, fresh_name, open_tm, open_ty, open_ty_tm,
    term_atoms, ty_atoms,
)
from .typecheck import Context


class AstJsonError(Exception):
    pass


def type_to_json(t: Type) -> dict[str, Any]:
    match t:
        case Atom(n):
            return {"node": "Atom", "name": n}
        case Bot():
            return {"node": "Bot"}
        case Arrow(d, c):
            return {"node": "Arrow", "dom": type_to_json(d), "cod": type_to_json(c)}
        case And(l, r):
            return {"node": "And", "left": type_to_json(l), "right": type_to_json(r)}
        case Or(l, r):
            return {"node": "Or", "left": type_to_json(l), "right": type_to_json(r)}
        case Forall(h, b) | Exists(h, b):
            name = fresh_name(h or "p", ty_atoms(b))
            node = "Forall" if isinstance(t, Forall) else "Exists"
            return {"node": node, "binder": name,
                    "body": type_to_json(open_ty(b, Atom(name)))}
        case _:
            raise AstJsonError(f"cannot export type {t!r}")


def term_to_json(t: Term) -> dict[str, Any]:
    match t:
        case Var(n):
            return {"node": "Var", "name": n}
        case Lam(h, ann, body):
            x = fresh_name(h or "x", free_vars(body))
            return {"node": "Lam", "var": x, "ann": type_to_json(ann),
                    "body": term_to_json(open_tm(body, Var(x)))}
        case App(f, a):
            return {"node": "App", "fun": term_to_json(f), "arg": term_to_json(a)}
        case Pair(l, r):
            return {"node": "Pair", "left": term_to_json(l), "right": term_to_json(r)}
        case Proj1(m):
            return {"node": "Proj1", "t": term_to_json(m)}
        case Proj2(m):
            return {"node": "Proj2", "t": term_to_json(m)}
        case Inj1(m, ann):
            return {"node": "Inj1", "t": term_to_json(m), "sumAnn": type_to_json(ann)}
        case Inj2(m, ann):
            return {"node": "Inj2", "t": term_to_json(m), "sumAnn": type_to_json(ann)}
        case Case(w, xh, l, yh, r):
            x = fresh_name(xh or "x", free_vars(l))
            y = fresh_name(yh or "y", free_vars(r))
            return {"node": "Case", "scrut": term_to_json(w),
                    "xBinder": x, "leftBody": term_to_json(open_tm(l, Var(x))),
                    "yBinder": y, "rightBody": term_to_json(open_tm(r, Var(y)))}
        case Eps(m, ann):
            return {"node": "Eps", "t": term_to_json(m), "targetAnn": type_to_json(ann)}
        case TyLam(ph, body):
            a = fresh_name(ph or "p", term_atoms(body))
            return {"node": "TyLam", "typeVar": a,
                    "body": term_to_json(open_ty_tm(body, Atom(a)))}
        case TyApp(m, ty):
            return {"node": "TyApp", "t": term_to_json(m), "typeArg": type_to_json(ty)}
        case Pack(w, m, ann):
            return {"node": "Pack", "witness": type_to_json(w),
                    "t": term_to_json(m), "exAnn": type_to_json(ann)}
        case Unpack(w, ph, xh, body):
            a = fresh_name(ph or "p", term_atoms(body))
            x = fresh_name(xh or "x", free_vars(body))
            opened = open_tm(open_ty_tm(body, Atom(a)), Var(x))
            return {"node": "Unpack", "scrut": term_to_json(w),
                    "typeVarBinder": a, "termVarBinder": x,
                    "body": term_to_json(opened)}
        case Bound(_):
            raise AstJsonError("cannot export a dangling bound variable")
        case _:
            raise AstJsonError(f"cannot export term {t!r}")


def _field(obj: dict[str, Any], key: str) -> Any:
    if not isinstance(obj, dict) or "node" not in obj:
        raise AstJsonError(f"expected an AST node object, found {obj!r}")
    if key not in obj:
        raise AstJsonError(f"{obj['node']} node is missing field {key!r}")
    return obj[key]


def _name(obj: dict[str, Any], key: str) -> str:
    v = _field(obj, key)
    if not isinstance(v, str) or not v:
        raise AstJsonError(f"field {key!r} must be a non-empty string")
    return v


def type_from_json(obj: dict[str, Any], tenv: tuple[str, ...] = ()) -> Type:
    node = _field(obj, "node")
    match node:
        case "Atom":
            n = _name(obj, "name")
            if n in tenv:
                return TyBound(len(tenv) - 1 - _rindex(tenv, n))
            return Atom(n)
        case "Bot":
            return Bot()
        case "Arrow":
            return Arrow(type_from_json(_field(obj, "dom"), tenv),
                         type_from_json(_field(obj, "cod"), tenv))
        case "And":
            return And(type_from_json(_field(obj, "left"), tenv),
                       type_from_json(_field(obj, "right"), tenv))
        case "Or":
            return Or(type_from_json(_field(obj, "left"), tenv),
                      type_from_json(_field(obj, "right"), tenv))
        case "Forall" | "Exists":
            b = _name(obj, "binder")
            body = type_from_json(_field(obj, "body"), tenv + (b,))
            return (Forall if node == "Forall" else Exists)(b, body)
        case _:
            raise AstJsonError(f"unknown type node {node!r}")


def term_from_json(obj: dict[str, Any], env: tuple[str, ...] = (),
                   tenv: tuple[str, ...] = ()) -> Term:
    node = _field(obj, "node")
    match node:
        case "Var":
            n = _name(obj, "name")
            if n in env:
                return Bound(len(env) - 1 - _rindex(env, n))
            return Var(n)
        case "Lam":
            x = _name(obj, "var")
            return Lam(x, type_from_json(_field(obj, "ann"), tenv),
                       term_from_json(_field(obj, "body"), env + (x,), tenv))
        case "App":
            return App(term_from_json(_field(obj, "fun"), env, tenv),
                       term_from_json(_field(obj, "arg"), env, tenv))
        case "Pair":
            return Pair(term_from_json(_field(obj, "left"), env, tenv),
                        term_from_json(_field(obj, "right"), env, tenv))
        case "Proj1":
            return Proj1(term_from_json(_field(obj, "t"), env, tenv))
        case "Proj2":
            return Proj2(term_from_json(_field(obj, "t"), env, tenv))
        case "Inj1":
            return Inj1(term_from_json(_field(obj, "t"), env, tenv),
                        type_from_json(_field(obj, "sumAnn"), tenv))
        case "Inj2":
            return Inj2(term_from_json(_field(obj, "t"), env, tenv),
                        type_from_json(_field(obj, "sumAnn"), tenv))
        case "Case":
            x = _name(obj, "xBinder")
            y = _name(obj, "yBinder")
            return Case(term_from_json(_field(obj, "scrut"), env, tenv), x,
                        term_from_json(_field(obj, "leftBody"), env + (x,), tenv), y,
                        term_from_json(_field(obj, "rightBody"), env + (y,), tenv))
        case "Eps":
            return Eps(term_from_json(_field(obj, "t"), env, tenv),
                       type_from_json(_field(obj, "targetAnn"), tenv))
        case "TyLam":
            a = _name(obj, "typeVar")
            return TyLam(a, term_from_json(_field(obj, "body"), env, tenv + (a,)))
        case "TyApp":
            return TyApp(term_from_json(_field(obj, "t"), env, tenv),
                         type_from_json(_field(obj, "typeArg"), tenv))
        case "Pack":
            return Pack(type_from_json(_field(obj, "witness"), tenv),
                        term_from_json(_field(obj, "t"), env, tenv),
                        type_from_json(_field(obj, "exAnn"), tenv))
        case "Unpack":
            a = _name(obj, "typeVarBinder")
            x = _name(obj, "termVarBinder")
            return Unpack(term_from_json(_field(obj, "scrut"), env, tenv), a, x,
                          term_from_json(_field(obj, "body"), env + (x,), tenv + (a,)))
        case _:
            raise AstJsonError(f"unknown term node {node!r}")


def _rindex(xs: tuple[str, ...], x: str) -> int:
    for i in range(len(xs) - 1, -1, -1):
        if xs[i] == x:
            return i
    raise ValueError(x)


def program_to_json(ctx: Context, t: Term) -> dict[str, Any]:
    return {"context": [{"var": n, "type": type_to_json(ty)} for n, ty in ctx.term_vars],
            "term": term_to_json(t)}


def program_from_json(obj: dict[str, Any]) -> tuple[Context, Term]:
    if not isinstance(obj, dict) or "term" not in obj:
        raise AstJsonError("expected an object with a 'term' field")
    ctx = Context()
    for entry in obj.get("context", []):
        if not isinstance(entry, dict) or "var" not in entry or "type" not in entry:
            raise AstJsonError("context entries must have 'var' and 'type' fields")
        if not isinstance(entry["var"], str) or not entry["var"]:
            raise AstJsonError("context entry 'var' must be a non-empty string")
        ctx = ctx.bind(entry["var"], type_from_json(entry["type"]))
    return ctx, term_from_json(obj["term"])


def dump_program(ctx: Context, t: Term) -> str:
    return json.dumps(program_to_json(ctx, t), indent=2) + "\n"


def load_program(src: str) -> tuple[Context, Term]:
    try:
        obj = json.loads(src)
    except json.JSONDecodeError as exc:
        raise AstJsonError(f"invalid JSON: {exc}") from exc
    return program_from_json(obj)
