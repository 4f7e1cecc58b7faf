"""Contour-integral form of the rank-one flop identity, and a k = 2 experiment.

For ``k = 1`` the integrand is

    1/(1-t) * prod_j (1 - t y_j/z)/(1 - y_j/z) * prod_m (1 - t z/(q x_m))/(1 - z/(q x_m))

against ``dz/(2 pi i z)``.  Shrinking the contour picks up the poles at
``z = y_i`` and the value at ``z = 0``; growing it picks up minus the
residues at ``z = q x_l`` and the value at infinity.  Both boundary values
are ``t^n/(1-t)``, which is what makes the two pole sums agree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra.laurent import LaurentPoly
from .algebra.ratfunc import DenominatorVanishes, RatFunc
from .algebra.univariate import NotPolynomial, limit_along, linear_poles, rat_compare, residue_at, simple_residue
from .algebra.vartable import VarTable
from .checks import CheckResult, check_equal, format_witness, params, stopwatch
from .localization import GenusSpec, chi_genus, genus_vars, weight_factor


@lru_cache(maxsize=None)
def integrand_vars(n: int, k: int = 1) -> VarTable:
    zs = ["z"] if k == 1 else [f"z{i}" for i in range(1, k + 1)]
    return genus_vars(n, n).extend(zs)


def _ratio(V, num: dict, den: dict) -> LaurentPoly:
    e = [0] * len(V)
    for name, p in num.items():
        e[V.index(name)] += p
    for name, p in den.items():
        e[V.index(name)] -= p
    return LaurentPoly.monomial(V, tuple(e))


def _local_factors(V, n: int, z: str) -> RatFunc:
    """``prod_j w(y_j/z) * prod_m w(q^-1 z/x_m)`` with ``w(u) = (1 - t u)/(1 - u)``."""
    out = RatFunc.const(V, 1)
    for j in range(1, n + 1):
        out = out * weight_factor(V, _ratio(V, {f"y{j}": 1}, {z: 1}))
    for m in range(1, n + 1):
        out = out * weight_factor(V, _ratio(V, {z: 1}, {"q": 1, f"x{m}": 1}))
    return out


def _one_minus_t(V) -> RatFunc:
    return RatFunc.const(V, 1) - RatFunc.var(V, "s", 2)


def build_integrand(n: int) -> RatFunc:
    """The ``k = 1`` integrand without the measure ``dz/z``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    V = integrand_vars(n)
    return _local_factors(V, n, "z") / _one_minus_t(V)


def cute_identity_sides(n: int, V: VarTable | None = None) -> tuple[RatFunc, RatFunc]:
    """Both sides of the rank-one flop identity, written out term by term."""
    V = V or genus_vars(n, n)
    lhs = RatFunc(V, {})
    rhs = RatFunc(V, {})
    for i in range(1, n + 1):
        term = RatFunc.const(V, 1)
        for j in range(1, n + 1):
            if j != i:
                term = term * weight_factor(V, _ratio(V, {f"y{j}": 1}, {f"y{i}": 1}))
        for l in range(1, n + 1):
            term = term * weight_factor(V, _ratio(V, {f"y{i}": 1}, {"q": 1, f"x{l}": 1}))
        lhs = lhs + term
    for l in range(1, n + 1):
        term = RatFunc.const(V, 1)
        for m in range(1, n + 1):
            if m != l:
                term = term * weight_factor(V, _ratio(V, {f"x{l}": 1}, {f"x{m}": 1}))
        for i in range(1, n + 1):
            term = term * weight_factor(V, _ratio(V, {f"y{i}": 1}, {"q": 1, f"x{l}": 1}))
        rhs = rhs + term
    return lhs, rhs


def residue_data(n: int) -> dict:
    """Pole sums toward zero and toward infinity plus the two boundary values."""
    V = integrand_vars(n)
    base = genus_vars(n, n)
    f = build_integrand(n)
    zero_side = RatFunc(V, {})
    inf_side = RatFunc(V, {})
    for i in range(1, n + 1):
        zero_side = zero_side + simple_residue(f, "z", RatFunc.var(V, f"y{i}"), "dz/z")
    for l in range(1, n + 1):
        pole = RatFunc.var(V, "q") * RatFunc.var(V, f"x{l}")
        inf_side = inf_side - simple_residue(f, "z", pole, "dz/z")
    return {
        "zero_poles": zero_side.restrict(base),
        "infinity_poles": inf_side.restrict(base),
        "res_zero": residue_at(f, "z", "zero", "dz/z").restrict(base),
        "res_infinity": residue_at(f, "z", "infinity", "dz/z").restrict(base),
    }


def verify_residue_identity(n: int, seed: int = 0) -> CheckResult:
    """Both evaluations of the contour integral, their boundary terms and the genera."""
    prm = params(n, 1, n)
    with stopwatch() as sw:
        V = genus_vars(n, n)
        data = residue_data(n)
        t = RatFunc.var(V, "s", 2)
        boundary = t**n / _one_minus_t(V)
        lhs, rhs = cute_identity_sides(n, V)
        checks = [
            ("totals", data["zero_poles"] + data["res_zero"], data["infinity_poles"] + data["res_infinity"]),
            ("value at zero", data["res_zero"], boundary),
            ("value at infinity", data["res_infinity"], boundary),
            ("poles at y vs left side", data["zero_poles"], lhs),
            ("poles at qx vs right side", data["infinity_poles"], rhs),
            ("left side vs chi(X)", lhs, chi_genus(GenusSpec("X", 1, n, n), V)),
            ("right side vs chi(Xdual)", rhs, chi_genus(GenusSpec("Xdual", 1, n, n), V)),
        ]
        for label, a, b in checks:
            ok, w = rat_compare(a, b, seed=seed)
            if not ok:
                return CheckResult("residues", prm, "fail", format_witness(w), sw["ms"], detail=label)
        size = data["zero_poles"].nterms + data["infinity_poles"].nterms
    return CheckResult("residues", prm, "pass", elapsed_ms=sw["ms"], terms=size,
                       detail="both evaluations agree; boundary terms t^n/(1-t)")


def residue_sum_vanishes(n: int, seed: int = 0) -> CheckResult:
    """All residues of the integrand times ``dz/z`` (finite poles, 0 and infinity) sum to zero."""
    prm = params(n, 1, n)
    V = integrand_vars(n)
    f = build_integrand(n) * RatFunc.var(V, "z", -1)
    total = RatFunc(V, {})
    for p in linear_poles(f, "z"):
        # the poles away from 0 are simple; only z = 0 needs a series
        total = total + (residue_at(f, "z", p) if not p.terms else simple_residue(f, "z", p))
    total = total + residue_at(f, "z", "infinity")
    return check_equal("residues", prm, total, RatFunc(V, {}), seed, detail="sum of all residues")


# ---------------------------------------------------------------------------
# k = 2: iterated residues (exploratory)


def build_integrand_2(n: int) -> RatFunc:
    """The rank-two integrand without ``dz1 dz2/(z1 z2)``, including ``1/(2 (1-t)^2)``."""
    V = integrand_vars(n, 2)
    out = _local_factors(V, n, "z1") * _local_factors(V, n, "z2")
    for a, b in (("z1", "z2"), ("z2", "z1")):
        u = _ratio(V, {a: 1}, {b: 1})
        out = out * weight_factor(V, u).inverse()
    return out / (_one_minus_t(V) ** 2 * 2)


def chamber_point(n: int) -> dict:
    """``|y| ~ 1`` inside the contour ``|z| = 10``, ``|q x| ~ 1000`` outside, ``t = 10^-6``."""
    pt = {f"y{i}": 1 + Fraction(i, 10 * n) for i in range(1, n + 1)}
    pt.update({f"x{l}": 1000 * (1 + Fraction(l, 10 * n)) for l in range(1, n + 1)})
    pt.update({"q": 1, "s": Fraction(1, 1000), "z1": 10, "z2": 10})
    return pt


def _classify(pole: RatFunc, pt: dict) -> str:
    if not pole.terms:
        return "zero"
    return "inside" if abs(pole.evaluate(pt)) < 10 else "outside"


def _one_step(f: RatFunc, var: str, pt: dict, toward: str) -> list[tuple[str, RatFunc]]:
    """Pieces of the integral over ``var`` with the contour moved toward 0 or infinity."""
    out = []
    for p in linear_poles(f, var):
        kind = _classify(p, pt)
        if kind == "zero":
            continue
        if (toward == "zero") != (kind == "inside"):
            continue
        try:
            r = simple_residue(f, var, p, "dz/z")
        except NotPolynomial:
            r = residue_at(f, var, p, "dz/z")
        out.append((p.to_str(), r if toward == "zero" else -r))
    # the integrand stays bounded at both ends, so the dz/z boundary term is a limit
    boundary = "zero" if toward == "zero" else "infinity"
    out.append((boundary, limit_along(f, var, "to-" + boundary)))
    return out


def iterated_residues(n: int, toward: str) -> list[tuple[str, str, RatFunc]]:
    """Pole chains ``(z1 location, z2 location, contribution)``, z1 first."""
    f = build_integrand_2(n)
    pt = chamber_point(n)
    chains = []
    for p1, g in _one_step(f, "z1", pt, toward):
        if not g.terms:
            continue
        for p2, h in _one_step(g, "z2", pt, toward):
            if h.terms:
                chains.append((p1, p2, h))
    return chains


def brute_iterated_residues(n: int, k: int = 2, seed: int = 0) -> CheckResult:
    """Exploratory: classify the k = 2 iterated residues and compare with the genera.

    The chamber is fixed by :func:`chamber_point`.  The result is never a
    hard failure; ``extra`` carries the full pole-chain ledger.
    """
    if k != 2 or not 2 <= n <= 3:
        raise ValueError("only k = 2 and 2 <= n <= 3 are supported")
    prm = params(n, k, n)
    with stopwatch() as sw:
        V = integrand_vars(n, 2)
        base = genus_vars(n, n)
        ledger = {}
        totals = {}
        stable = {}
        for toward, prefix in (("zero", "y"), ("infinity", "x")):
            chains = iterated_residues(n, toward)
            total = RatFunc(V, {})
            pure = RatFunc(V, {})
            rows = []
            for p1, p2, h in chains:
                total = total + h
                is_pure = all(p not in ("zero", "infinity") and prefix in p for p in (p1, p2))
                if is_pure:
                    pure = pure + h
                rows.append({"z1": p1, "z2": p2, "stable": is_pure})
            ledger[toward] = sorted(rows, key=lambda r: (r["z1"], r["z2"]))
            totals[toward] = total.restrict(base)
            stable[toward] = pure.restrict(base)
        findings = {}
        for label, a, b in (
            ("totals agree", totals["zero"], totals["infinity"]),
            ("y-chains = chi(X(2,n))", stable["zero"], chi_genus(GenusSpec("X", 2, n, n), base)),
            ("qx-chains = chi(Xdual(2,n))", stable["infinity"], chi_genus(GenusSpec("Xdual", 2, n, n), base)),
        ):
            try:
                ok, _ = rat_compare(a, b, seed=seed)
            except DenominatorVanishes:
                ok = False
            findings[label] = ok
    detail = "; ".join(f"{k}: {'yes' if v else 'no'}" for k, v in findings.items())
    return CheckResult("residues", prm, "exploratory", elapsed_ms=sw["ms"], detail=detail,
                       extra={"findings": findings, "chains": ledger})
