"""Evaluation and printing of parsed expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..algebra.laurent import LaurentPoly
from ..algebra.ratfunc import DenominatorVanishes, RatFunc
from ..algebra.vartable import VarTable
from ..localization import GenusSpec, chi_genus
from ..shiftops import ShiftOp, coulomb_U, macdonald_op
from .parser import BinOp, Ctor, Neg, Num, Pow, Var, parse_expr


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class PhiValue:
    """A truncated product, exact through ``q^order``."""

    poly: LaurentPoly
    order: int


_CANON = re.compile(r"([A-Za-z]+?)(\d*)$")
_GROUPS = {"y": 0, "x": 1, "a": 2, "z": 3, "q": 4, "s": 5, "t": 5, "eps": 6, "X": 7}


def _canon_key(name: str):
    m = _CANON.match(name)
    head, idx = m.group(1), m.group(2)
    return (_GROUPS.get(head, 8), head, int(idx) if idx else 0)


def canonical(f: RatFunc) -> RatFunc:
    """Re-express over a table in canonical order: y, x, a, z, q, s, eps, X."""
    names = sorted(f.vars.names, key=_canon_key)
    V = VarTable.of(*[(n, f.vars.role(n)) for n in names])
    return f.embed(V)


def _variable(name: str) -> RatFunc:
    if name == "t":
        return RatFunc.var(VarTable.of("s"), "s", 2)
    return RatFunc.var(VarTable.of(name), name)


def _const(c) -> RatFunc:
    return RatFunc.const(VarTable.of(), c)


def _as_laurent(f: RatFunc) -> LaurentPoly:
    num, (dmono, dfacs) = f.together()
    if dfacs:
        raise EvalError("phi needs a Laurent polynomial argument")
    return num * LaurentPoly.monomial(num.vars, tuple(-x for x in dmono))


def _phi(arg: RatFunc, power: int, order: int) -> PhiValue:
    p = _as_laurent(arg)
    V = p.vars if "q" in p.vars else p.vars.extend(["q"])
    p = p.embed(V)
    qi = V.index("q")
    one = LaurentPoly.const(V, 1)
    q = LaurentPoly.var(V, "q")
    out = one
    low = 0
    for e in range(power, 0):
        out = out * (one - q**e * p)
        low += e
    # factors with q-power above order - low only affect dropped terms
    for e in range(max(power, 0), order - low + 1):
        out = _truncate(out * (one - q**e * p), qi, order - low if e < order - low else order)
    return PhiValue(_truncate(out, qi, order), order)


def _truncate(p: LaurentPoly, qi: int, order: int) -> LaurentPoly:
    return LaurentPoly(p.vars, {e: c for e, c in p.terms.items() if e[qi] <= order})


def evaluate(node, nq: int = 6):
    if isinstance(node, Num):
        return _const(node.value)
    if isinstance(node, Var):
        return _variable(node.name)
    if isinstance(node, Neg):
        v = evaluate(node.arg, nq)
        return _scale(v, -1)
    if isinstance(node, Pow):
        v = evaluate(node.base, nq)
        if not isinstance(v, RatFunc):
            raise EvalError("only rational functions can be raised to a power")
        try:
            return v**node.exp
        except DenominatorVanishes as exc:
            raise EvalError(str(exc)) from exc
    if isinstance(node, BinOp):
        return _binop(node.op, evaluate(node.lhs, nq), evaluate(node.rhs, nq))
    if isinstance(node, Ctor):
        return _ctor(node, nq)
    raise EvalError(f"cannot evaluate {node!r}")


def _scale(v, c):
    if isinstance(v, RatFunc):
        return v * c
    if isinstance(v, ShiftOp):
        return v.scale(c)
    return PhiValue(v.poly.scale(Fraction(c)), v.order)


def _binop(op, a, b):
    try:
        if isinstance(a, RatFunc) and isinstance(b, RatFunc):
            if op in "+-*/":
                return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[op](b)
            raise EvalError(f"{op} needs an operator on the left")
        if isinstance(a, ShiftOp) and isinstance(b, ShiftOp):
            if op == "∘":
                return a @ b
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            raise EvalError(f"cannot combine two operators with {op}")
        if isinstance(a, ShiftOp) and isinstance(b, RatFunc) and op == "·":
            V = a.vars.union(b.vars)
            return a.embed(V).apply(b.embed(V))
        if isinstance(a, RatFunc) and isinstance(b, ShiftOp) and op == "*":
            return b.scale(a.embed(b.vars))
        if isinstance(b, RatFunc) and isinstance(a, ShiftOp) and op == "*":
            return a @ type(a).scalar(a.vars, a.block, b.embed(a.vars))
        if isinstance(a, PhiValue) and isinstance(b, RatFunc) and op == "*" and b.const_value() is not None:
            return _scale(a, b.const_value())
        if isinstance(b, PhiValue) and isinstance(a, RatFunc) and op == "*" and a.const_value() is not None:
            return _scale(b, a.const_value())
    except (TypeError, ValueError) as exc:
        if isinstance(exc, EvalError):
            raise
        raise EvalError(f"type mismatch: {exc}") from exc
    except DenominatorVanishes as exc:
        raise EvalError(str(exc)) from exc
    raise EvalError(f"type mismatch: {type(a).__name__} {op} {type(b).__name__}")


def _ctor(node: Ctor, nq: int):
    kind, prm = node.kind, node.params
    if kind == "Uy":
        return macdonald_op(prm[1], prm[0], "y")
    if kind == "Ux":
        return macdonald_op(prm[1], prm[0], "x", dual=True)
    if kind == "Ua":
        return coulomb_U(prm[1], prm[0])
    if kind == "Q":
        arg = evaluate(node.arg, nq)
        if not isinstance(arg, RatFunc):
            raise EvalError("Q takes a rational function argument")
        out = _const(1)
        for i in range(1, prm[0] + 1):
            out = out * (arg - _variable(f"a{i}"))
        return out
    if kind == "chi":
        space, k, n = prm[0], prm[1], prm[2]
        m = prm[3] if len(prm) > 3 else None
        try:
            return chi_genus(GenusSpec(space, k, n, m))
        except ValueError as exc:
            raise EvalError(str(exc)) from exc
    if kind == "phi":
        arg = evaluate(node.arg, nq)
        if not isinstance(arg, RatFunc):
            raise EvalError("phi takes a rational function argument")
        return _phi(arg, prm[0], nq)
    raise EvalError(f"unknown constructor {kind}")


# -- printing ------------------------------------------------------------------


def _even_in_s(f: RatFunc) -> bool:
    if "s" not in f.vars:
        return False
    i = f.vars.index("s")
    for (mono, facs), _ in f.terms.items():
        if mono[i] % 2:
            return False
        for F, _ in facs:
            if any(e[i] % 2 for e in F.terms):
                return False
    return True


def _s_to_t(f: RatFunc) -> RatFunc:
    """Rewrite ``s^(2j)`` as ``t^j`` for display."""
    i = f.vars.index("s")
    names = tuple("t" if n == "s" else n for n in f.vars.names)
    V = VarTable(names, f.vars.roles)

    def half(e):
        return tuple(x // 2 if j == i else x for j, x in enumerate(e))

    terms = {}
    for (mono, facs), c in f.terms.items():
        nf = frozenset((LaurentPoly(V, {half(e): v for e, v in F.terms.items()}), k) for F, k in facs)
        terms[(half(mono), nf)] = c
    return RatFunc(V, terms)


def render(value) -> str:
    if isinstance(value, RatFunc):
        f = canonical(value.compact())
        if _even_in_s(f):
            f = _s_to_t(f)
        num, (dmono, dfacs) = f.together()
        if not dfacs and not any(dmono):
            return num.to_str() if not num.is_zero else "0"
        return f.to_str()
    if isinstance(value, ShiftOp):
        return value.to_str()
    if isinstance(value, PhiValue):
        p = value.poly
        body = p.to_str() if not p.is_zero else "0"
        return f"{body} + O(q^{value.order + 1})"
    raise EvalError(f"cannot print {type(value).__name__}")


def eval_text(text: str, nq: int = 6) -> str:
    return render(evaluate(parse_expr(text), nq))
