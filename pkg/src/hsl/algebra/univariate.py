"""One distinguished variable at a time: division, limits, series, residues.

All routines view a :class:`RatFunc` as a univariate function of ``var`` with
coefficients rational in the remaining variables.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .laurent import LaurentPoly
from .ratfunc import DenominatorVanishes, RatFunc
from .vartable import VarTable
from .zerotest import find_witness, is_zero

_H = "_h"


class LimitDiverges(ArithmeticError):
    """The requested one-parameter limit is infinite."""


class NotPolynomial(ValueError):
    """The argument is not a polynomial in the distinguished variable."""


# ---------------------------------------------------------------------------
# the two generic entry points of the algebra core


_OPS: dict[str, Callable] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": lambda a, b: a**b,
}


def rat_arith(op: str, lhs: RatFunc, rhs=None) -> RatFunc:
    if op == "neg":
        return -lhs
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(lhs, rhs)


def rat_equal(lhs, rhs, seed: int = 0) -> bool:
    return rat_compare(lhs, rhs, seed)[0]


def rat_compare(lhs, rhs, seed: int = 0) -> tuple[bool, dict | None]:
    """Exact equality plus, on failure, a witness with both side values."""
    if not isinstance(lhs, RatFunc):
        lhs = RatFunc.coerce(rhs.vars, lhs)
    if not isinstance(rhs, RatFunc):
        rhs = RatFunc.coerce(lhs.vars, rhs)
    diff = lhs - rhs
    w = find_witness(diff, seed=seed)
    if w is None and is_zero(diff, seed=seed):
        return True, None
    if w is None:
        w = _any_point(diff, seed)
    pt = w["point"]
    lv = _value_or_none(lhs, pt)
    rv = _value_or_none(rhs, pt)
    return False, {"point": pt, "lhs": lv, "rhs": rv}


def _value_or_none(f: RatFunc, pt: dict):
    try:
        return f.evaluate({k: v for k, v in pt.items() if k in f.vars})
    except (DenominatorVanishes, ValueError):
        return None


def _any_point(f: RatFunc, seed: int) -> dict:
    # The fast path found no witness yet the exact test says nonzero: search harder.
    for s in range(seed + 1, seed + 200):
        w = find_witness(f, seed=s, tries=4)
        if w is not None:
            return w
    raise AssertionError("nonzero rational function without a witness point")


# ---------------------------------------------------------------------------
# coefficient extraction and division


def coefficients(f: RatFunc, var: str) -> dict[int, RatFunc]:
    """Coefficients of ``f`` as a polynomial in ``var`` (exact, compacted)."""
    i = f.vars.index(var)
    f = f.compact()
    if not f.terms:
        return {}
    (mono, facs), c = next(iter(f.terms.items()))
    num = LaurentPoly.monomial(f.vars, tuple(max(x, 0) if j == i else x for j, x in enumerate(mono)), c)
    den = RatFunc.const(f.vars, 1)
    if mono[i] < 0:
        raise NotPolynomial(f"negative power of {var}")
    for F, e in facs:
        if e > 0:
            num = num * F**e
        elif F.involves(i):
            raise NotPolynomial(f"denominator depends on {var}")
        else:
            den = den * RatFunc.from_poly(F, e)
    out = {}
    for k, part in num.split(i).items():
        if k < 0:
            raise NotPolynomial(f"negative power of {var}")
        out[k] = (RatFunc.from_poly(part) * den)
    return out


def from_coefficients(coeffs: dict[int, RatFunc], var: str, vars) -> RatFunc:
    total = RatFunc(vars, {})
    for k, c in coeffs.items():
        if k:
            c = c * RatFunc.var(c.vars.union(vars), var, k)
        total = total + c
    return total


def _clean(coeffs: dict[int, RatFunc]) -> dict[int, RatFunc]:
    out = {}
    for k, c in coeffs.items():
        c = c.compact()
        if c.terms:
            out[k] = c
    return out


def poly_divide(f: RatFunc, g: RatFunc, var: str) -> tuple[RatFunc, RatFunc]:
    """Euclidean division in ``var``: ``f = quotient * g + remainder``."""
    vars = f.vars.union(g.vars)
    f, g = f.embed(vars), g.embed(vars)
    fc = _clean(coefficients(f, var))
    gc = _clean(coefficients(g, var))
    if not gc:
        raise DenominatorVanishes("division by the zero polynomial")
    dg = max(gc)
    lead_inv = gc[dg].inverse()
    quot: dict[int, RatFunc] = {}
    while fc and max(fc) >= dg:
        df = max(fc)
        c = (fc[df] * lead_inv).compact()
        quot[df - dg] = c
        for k, gk in gc.items():
            fc[k + df - dg] = fc.get(k + df - dg, RatFunc(vars, {})) - c * gk
        fc = _clean(fc)
        if df in fc:  # exact cancellation must remove the leading term
            raise ArithmeticError("leading term did not cancel")
    return from_coefficients(quot, var, vars), from_coefficients(fc, var, vars)


def degree(f: RatFunc, var: str) -> int:
    """Degree of a polynomial in ``var`` (-1 for zero)."""
    c = _clean(coefficients(f, var))
    return max(c) if c else -1


# ---------------------------------------------------------------------------
# limits


def _orders(f: RatFunc, i: int, at_infinity: bool):
    for (mono, facs), c in f.terms.items():
        if at_infinity:
            yield mono[i] + sum(e * F.degree_range(i)[1] for F, e in facs), (mono, facs), c
        else:
            yield mono[i] + sum(e * F.degree_range(i)[0] for F, e in facs), (mono, facs), c


def _leading(f: RatFunc, i: int, at_infinity: bool, order: int) -> RatFunc:
    """Sum of the coefficients of ``var^order`` in terms of exactly that order."""
    out = RatFunc(f.vars, {})
    for o, (mono, facs), c in _orders(f, i, at_infinity):
        if o != order:
            continue
        m = list(mono)
        m[i] = 0
        t = RatFunc.monomial(f.vars, tuple(m), c)
        for F, e in facs:
            if not F.involves(i):
                t = t * RatFunc.from_poly(F, e)
                continue
            parts = F.split(i)
            lo, hi = F.degree_range(i)
            t = t * RatFunc.from_poly(parts[hi if at_infinity else lo], e)
        out = out + t
    return out


def limit_along(f: RatFunc, var: str, direction: str = "to-infinity") -> RatFunc:
    """Exact limit of ``f`` as ``var`` tends to 0 or to infinity."""
    if direction not in ("to-zero", "to-infinity"):
        raise ValueError(f"unknown direction {direction!r}")
    at_inf = direction == "to-infinity"
    i = f.vars.index(var)
    if not f.terms:
        return f
    orders = [o for o, _, _ in _orders(f, i, at_inf)]
    bad = max(orders) > 0 if at_inf else min(orders) < 0
    if not bad:
        return _leading(f, i, at_inf, 0)
    # Individual terms blow up; the sum may still converge.
    g = f.compact()
    (o, _, _), = list(_orders(g, i, at_inf))
    if (at_inf and o > 0) or (not at_inf and o < 0):
        raise LimitDiverges(f"limit {direction} in {var} is infinite")
    return _leading(g, i, at_inf, 0) if o == 0 else RatFunc(f.vars, {})


# ---------------------------------------------------------------------------
# Laurent expansions and residues


def _hvars(vars):
    name = _H
    while name in vars:
        name += "_"
    return vars.extend([(name, "aux")]), name


def _series_of_quotient(num: LaurentPoly, den: LaurentPoly, h: int, upto: int) -> dict[int, RatFunc]:
    """Laurent coefficients of ``num/den`` in variable index ``h`` up to ``h^upto``."""
    ns = num.split(h)
    ds = den.split(h)
    a, b = min(ns), min(ds)
    inv_lead = RatFunc.from_poly(ds[b], -1)
    out: dict[int, RatFunc] = {}
    s: list[RatFunc] = []
    for i in range(0, upto - (a - b) + 1):
        acc = RatFunc.from_poly(ns[a + i]) if (a + i) in ns else RatFunc(num.vars, {})
        for j in range(1, i + 1):
            if (b + j) in ds:
                acc = acc - RatFunc.from_poly(ds[b + j]) * s[i - j]
        si = (acc * inv_lead).compact()
        s.append(si)
        if si.terms:
            out[a - b + i] = si
    return out


def laurent_series(f: RatFunc, var: str, point="zero", upto: int = 0) -> dict[int, RatFunc]:
    """Coefficients ``c_j`` (``j <= upto``) of the expansion of ``f`` at ``point``.

    For a finite ``point`` the expansion variable is ``var - point``; at
    ``"infinity"`` it is ``1/var``.  Coefficients live in the table of ``f``.
    """
    vars, hname = _hvars(f.vars)
    f = f.embed(vars)
    h = vars.index(hname)
    hv = LaurentPoly.var(vars, hname)
    if point == "zero":
        image = hv
    elif point == "infinity":
        image = LaurentPoly.var(vars, hname, -1)
    else:
        p = point if isinstance(point, (RatFunc, LaurentPoly)) else LaurentPoly.const(vars, point)
        image = RatFunc.coerce(vars, p).embed(vars.union(p.vars)) + RatFunc.from_poly(hv)
    g = f.subs({var: image})
    base = VarTable(
        tuple(n for n in g.vars.names if n != hname),
        tuple(r for n, r in zip(g.vars.names, g.vars.roles) if n != hname),
    )
    total: dict[int, RatFunc] = {}
    for key, c in g.terms.items():
        num, (dmono, dfacs) = RatFunc(g.vars, {key: c}).together()
        den = LaurentPoly.monomial(g.vars, tuple(-x for x in dmono))
        for F, e in dfacs:
            den = den * F ** (-e)
        for j, cj in _series_of_quotient(num, den, h, upto).items():
            total[j] = total[j] + cj if j in total else cj
    out = {}
    for j, cj in sorted(total.items()):
        cj = cj.compact()
        if cj.terms:
            out[j] = cj.restrict(base)
    return out


def residue_at(f: RatFunc, var: str, point, measure: str = "dz") -> RatFunc:
    """Residue of ``f`` in ``var`` at a finite point, at ``"zero"`` or at ``"infinity"``.

    With ``measure="dz"`` this is the usual residue of ``f dz`` (at infinity:
    ``-Res_{w=0} f(1/w) dw / w^2``).  With ``measure="dz/z"`` the points 0 and
    infinity return the constant coefficient of the expansion in ``z`` or
    ``1/z``, the convention of the contour integral over the unit circle.
    """
    if measure not in ("dz", "dz/z"):
        raise ValueError(f"unknown measure {measure!r}")
    if measure == "dz/z" and point in ("zero", "infinity"):
        ser = laurent_series(f, var, point, 0)
        return ser.get(0, RatFunc(f.vars, {}))
    if measure == "dz/z":
        f = f * RatFunc.var(f.vars, var, -1)
    if point == "infinity":
        ser = laurent_series(f, var, "infinity", 1)
        c = ser.get(1)
        return -c if c is not None else RatFunc(f.vars, {})
    ser = laurent_series(f, var, point, -1)
    return ser.get(-1, RatFunc(f.vars, {}))


def simple_residue(f: RatFunc, var: str, point: RatFunc, measure: str = "dz") -> RatFunc:
    """Residue at a simple pole, computed without expanding anything.

    Each term carrying a linear factor ``F = B var^d (var - point)`` to the
    power -1 contributes ``[term * F / (B var^d)]`` at ``var = point``.  The
    result keeps the factored shape of ``f``.  A factor vanishing at
    ``point`` to a higher power raises :class:`NotPolynomial`.
    """
    if measure not in ("dz", "dz/z"):
        raise ValueError(f"unknown measure {measure!r}")
    if measure == "dz/z":
        f = f * RatFunc.var(f.vars, var, -1)
    i = f.vars.index(var)
    point = RatFunc.coerce(f.vars, point)
    roots: dict = {}
    total = RatFunc(f.vars, {})
    for (mono, facs), c in f.terms.items():
        hit = None
        for F, e in facs:
            if e >= 0 or not F.involves(i):
                continue
            if F not in roots:
                lo, hi = F.degree_range(i)
                root = None
                if hi == lo + 1:
                    parts = F.split(i)
                    root = -RatFunc.from_poly(parts[lo]) / RatFunc.from_poly(parts[hi])
                roots[F] = (root, lo, hi)
            root, lo, hi = roots[F]
            if root is not None and root == point:
                if e != -1 or hit is not None:
                    raise NotPolynomial(f"pole of {var} at {point.to_str()} is not simple")
                hit = F
        if hit is None:
            continue
        root, lo, hi = roots[hit]
        B = hit.split(i)[hi]
        rest = RatFunc(f.vars, {(mono, frozenset((G, e) for G, e in facs if G != hit)): c})
        total = total + rest / (RatFunc.from_poly(B) * RatFunc.var(f.vars, var, lo))
    return total.subs({var: point})


def linear_poles(f: RatFunc, var: str) -> list[RatFunc]:
    """Finite poles of ``f`` in ``var`` when every denominator factor is linear in it."""
    i = f.vars.index(var)
    poles: dict = {}
    for (mono, facs), _ in f.terms.items():
        if mono[i] < 0 and "zero" not in poles:
            poles["zero"] = RatFunc(f.vars, {})
        for F, e in facs:
            if e >= 0 or not F.involves(i):
                continue
            lo, hi = F.degree_range(i)
            if hi != lo + 1:
                raise NotPolynomial(f"denominator factor {F} is not linear in {var}")
            if lo > 0 and "zero" not in poles:
                poles["zero"] = RatFunc(f.vars, {})
            parts = F.split(i)
            poles[F] = -RatFunc.from_poly(parts[lo]) / RatFunc.from_poly(parts[hi])
    out = [v for k, v in poles.items() if k != "zero"]
    if "zero" in poles:
        out.append(RatFunc(f.vars, {}))
    return out


def as_fraction(f: RatFunc) -> Fraction:
    c = f.compact().const_value()
    if c is None:
        raise ValueError("not a constant")
    return Fraction(c)
