"""Localization genera of Grassmannians and of the flop pair X(k,n,m), X∨(k,n,m).

Conventions: the y-variables are the weights of the framing C^n, the
x-variables those of C^m, ``q`` is the loop-rotation parameter and ``t = s^2``
where ``s`` is the stored variable.  A fixed point is a coordinate subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra.laurent import LaurentPoly
from .algebra.ratfunc import RatFunc
from .algebra.univariate import limit_along
from .algebra.vartable import VarTable
from .checks import CheckResult, check_equal, params, stopwatch

SPACES = ("Gr", "X", "Xdual")


def colex_subsets(n: int, k: int):
    """k-subsets of {1..n} as increasing tuples, in colexicographic order."""
    if k < 0 or k > n:
        return
    a = list(range(1, k + 1))
    while True:
        yield tuple(a)
        j = 0
        while j < k and a[j] + 1 == (a[j + 1] if j + 1 < k else n + 1):
            j += 1
        if j == k:
            return
        a[j] += 1
        a[:j] = range(1, j + 1)


@dataclass(frozen=True)
class GrassFixedPoint:
    subset: tuple
    k: int
    n: int

    def __post_init__(self):
        if len(self.subset) != self.k or len(set(self.subset)) != self.k:
            raise ValueError(f"{self.subset} is not a {self.k}-subset")
        if any(not 1 <= i <= self.n for i in self.subset):
            raise ValueError(f"{self.subset} not inside 1..{self.n}")

    @property
    def complement(self) -> tuple:
        return tuple(j for j in range(1, self.n + 1) if j not in self.subset)


def fixed_points(k: int, n: int) -> list[GrassFixedPoint]:
    return [GrassFixedPoint(I, k, n) for I in colex_subsets(n, k)]


@dataclass(frozen=True)
class GenusSpec:
    space: str
    k: int
    n: int
    m: int | None = None

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        if self.n < 0 or self.k < 0:
            raise ValueError("k and n must be nonnegative")
        if self.space == "Gr":
            if self.k > self.n:
                raise ValueError(f"Gr({self.k},{self.n}) needs k <= n")
            return
        if self.m is None or self.m < 0:
            raise ValueError("X and Xdual need m >= 0")
        if self.k > self.n:
            raise ValueError(f"{self.space}({self.k},{self.n},{self.m}) needs k <= n")


# ---------------------------------------------------------------------------
# variables and weight factors


@lru_cache(maxsize=None)
def genus_vars(n: int, m: int) -> VarTable:
    names = [f"y{i}" for i in range(1, n + 1)] + [f"x{l}" for l in range(1, m + 1)] + ["q", "s"]
    return VarTable.of(*names)


def _mono(V: VarTable, **powers) -> LaurentPoly:
    e = [0] * len(V)
    for name, p in powers.items():
        e[V.index(name)] += p
    return LaurentPoly.monomial(V, tuple(e))


def weight_factor(V: VarTable, w: LaurentPoly) -> RatFunc:
    """``(1 - t w) / (1 - w)`` for a monomial weight ``w``."""
    one = LaurentPoly.const(V, 1)
    t = LaurentPoly.var(V, "s", 2)
    return RatFunc.ratio(one - t * w, one - w)


def _ratio(V, num: str, den: str, qpow: int = 0) -> LaurentPoly:
    e = [0] * len(V)
    e[V.index(num)] += 1
    e[V.index(den)] -= 1
    if qpow:
        e[V.index("q")] += qpow
    return LaurentPoly.monomial(V, tuple(e))


def tangent_y(V, I, n) -> RatFunc:
    out = RatFunc.const(V, 1)
    for i in I:
        for j in range(1, n + 1):
            if j not in I:
                out = out * weight_factor(V, _ratio(V, f"y{j}", f"y{i}"))
    return out


def tangent_x(V, I, m) -> RatFunc:
    out = RatFunc.const(V, 1)
    for i in I:
        for j in range(1, m + 1):
            if j not in I:
                out = out * weight_factor(V, _ratio(V, f"x{i}", f"x{j}"))
    return out


def hom_weights(V, ys, xs) -> RatFunc:
    """``prod (1 - t q^-1 y_i/x_l) / (1 - q^-1 y_i/x_l)`` over the given indices."""
    out = RatFunc.const(V, 1)
    for i in ys:
        for l in xs:
            out = out * weight_factor(V, _ratio(V, f"y{i}", f"x{l}", -1))
    return out


def chi_genus(spec: GenusSpec, V: VarTable | None = None) -> RatFunc:
    """The localization sum of the chi_t genus, unsimplified."""
    k, n, m = spec.k, spec.n, spec.m
    if spec.space == "Gr":
        V = V or genus_vars(n, 0)
        return _sum(V, (tangent_y(V, I, n) for I in colex_subsets(n, k)))
    V = V or genus_vars(n, m)
    if spec.space == "X":
        xs = range(1, m + 1)
        return _sum(V, (tangent_y(V, I, n) * hom_weights(V, I, xs) for I in colex_subsets(n, k)))
    ys = range(1, n + 1)
    return _sum(V, (tangent_x(V, I, m) * hom_weights(V, ys, I) for I in colex_subsets(m, k)))


def _sum(V, items) -> RatFunc:
    total = RatFunc(V, {})
    for x in items:
        total = total + x
    return total


# ---------------------------------------------------------------------------
# characters


def lambda_char_rho(k: int, N: int, V: VarTable | None = None) -> LaurentPoly:
    """``chi_{Lambda^k(C^N)}(t^{rho_N}) = sum_{|J|=k} s^{sum_{j in J}(N+1-2j)}``."""
    V = V or VarTable.of("s")
    out = LaurentPoly.zero(V)
    for J in colex_subsets(N, k):
        out = out + LaurentPoly.var(V, "s", sum(N + 1 - 2 * j for j in J))
    return out


def poincare_gr(k: int, n: int, V: VarTable | None = None) -> LaurentPoly:
    """``s^{k(n-k)} chi_{Lambda^k}(t^{rho_n})``, the Poincare polynomial in t."""
    V = V or VarTable.of("s")
    return LaurentPoly.var(V, "s", k * (n - k)) * lambda_char_rho(k, n, V)


@lru_cache(maxsize=None)
def hecke_vars(n: int) -> VarTable:
    return VarTable.of(*[f"z{i}" for i in range(1, n + 1)], "s")


def hecke_eigenvalue(n: int, k: int, V: VarTable | None = None) -> LaurentPoly:
    """``s^{k(n-k)} sum_{|I|=k} prod_{i in I} z_i^-1 s^{2i-1-n}``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    V = V or hecke_vars(n)
    out = LaurentPoly.zero(V)
    for I in colex_subsets(n, k):
        e = [0] * len(V)
        e[V.index("s")] = k * (n - k) + sum(2 * i - 1 - n for i in I)
        for i in I:
            e[V.index(f"z{i}")] = -1
        out = out + LaurentPoly.monomial(V, tuple(e))
    return out


# ---------------------------------------------------------------------------
# verifications


def verify_flop(k: int, n: int, seed: int = 0) -> CheckResult:
    with stopwatch() as sw:
        V = genus_vars(n, n)
        lhs = chi_genus(GenusSpec("X", k, n, n), V)
        rhs = chi_genus(GenusSpec("Xdual", k, n, n), V)
    return check_equal("flop", params(n, k, n), lhs, rhs, seed, sw["ms"])


def wallcross_rhs(k: int, n: int, m: int, V: VarTable) -> RatFunc:
    """``sum_{k1+k2=k} t^{k2(m-k1)+k2(n-m-k2)/2} chi_{Lambda^k2}(t^rho) chi(X∨(k1,n,m))``."""
    total = RatFunc(V, {})
    for k2 in range(0, min(k, n - m) + 1):
        k1 = k - k2
        if k1 > m:
            continue  # X∨(k1,n,m) is empty
        weight = LaurentPoly.var(V, "s", 2 * k2 * (m - k1) + k2 * (n - m - k2)) * lambda_char_rho(k2, n - m, V)
        total = total + RatFunc.from_poly(weight) * chi_genus(GenusSpec("Xdual", k1, n, m), V)
    return total


def verify_wallcross(k: int, n: int, m: int, seed: int = 0) -> CheckResult:
    with stopwatch() as sw:
        V = genus_vars(n, m)
        lhs = chi_genus(GenusSpec("X", k, n, m), V)
        rhs = wallcross_rhs(k, n, m, V)
    return check_equal("wallcross", params(n, k, m), lhs, rhs, seed, sw["ms"])


def _descend(f: RatFunc, m: int, n: int) -> RatFunc:
    """Send ``x_l -> lam * x_l`` for ``l > m`` and let ``lam`` tend to infinity."""
    V = f.vars.extend(["lam"])
    f = f.embed(V)
    lam = LaurentPoly.var(V, "lam")
    g = f.subs({f"x{l}": lam * LaurentPoly.var(V, f"x{l}") for l in range(m + 1, n + 1)})
    return limit_along(g, "lam", "to-infinity").restrict(V.without("lam"))


def verify_asymptotic_descent(k: int, n: int, m: int, side: str = "X", seed: int = 0) -> CheckResult:
    """Limit of the m=n genus as the last n-m x-weights become repelling.

    ``side="X"`` compares with chi(X(k,n,m)); ``side="Xdual"`` compares with
    the weighted sum over fixed components of the dual side.
    """
    with stopwatch() as sw:
        V = genus_vars(n, n)
        if side == "X":
            lim = _descend(chi_genus(GenusSpec("X", k, n, n), V), m, n)
            target = chi_genus(GenusSpec("X", k, n, m), V)
        elif side == "Xdual":
            lim = _descend(chi_genus(GenusSpec("Xdual", k, n, n), V), m, n)
            target = wallcross_rhs(k, n, m, V)
        else:
            raise ValueError(f"unknown side {side!r}")
    return check_equal(f"asymptotics-{side}", params(n, k, m), lim, target, seed, sw["ms"])


def gr_chamber_limit(k: int, n: int) -> RatFunc:
    """Limit of chi(Gr(k,n)) along ``y_i = lam^i y_i'``, ``lam -> infinity``."""
    V0 = genus_vars(n, 0)
    V = V0.extend(["lam"])
    f = chi_genus(GenusSpec("Gr", k, n), V)
    lam = LaurentPoly.var(V, "lam")
    g = f.subs({f"y{i}": lam**i * LaurentPoly.var(V, f"y{i}") for i in range(1, n + 1)})
    return limit_along(g, "lam", "to-infinity").restrict(V0)


def verify_gr_chamber(k: int, n: int, seed: int = 0) -> CheckResult:
    with stopwatch() as sw:
        lim = gr_chamber_limit(k, n)
        target = RatFunc.from_poly(poincare_gr(k, n, lim.vars))
    return check_equal("asymptotics-Gr", params(n, k), lim, target, seed, sw["ms"])


def character_recursion_rhs(n: int, k: int, V: VarTable) -> LaurentPoly:
    """``E(n-1,k) + z_n^-1 t^{n-k} E(n-1,k-1)`` with out-of-range terms zero."""
    out = LaurentPoly.zero(V)
    if k <= n - 1:
        out = out + hecke_eigenvalue(n - 1, k, hecke_vars(n - 1)).embed(V)
    if k >= 1:
        e = [0] * len(V)
        e[V.index(f"z{n}")] = -1
        e[V.index("s")] = 2 * (n - k)
        out = out + LaurentPoly.monomial(V, tuple(e)) * hecke_eigenvalue(n - 1, k - 1, hecke_vars(n - 1)).embed(V)
    return out


def verify_character_recursion(n: int, k: int, seed: int = 0) -> CheckResult:
    """Check the Levi recursion; at ``n = 0`` check the base value 1 it starts from."""
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    with stopwatch() as sw:
        V = hecke_vars(n)
        lhs = RatFunc.from_poly(hecke_eigenvalue(n, k, V))
        if n == 0:
            rhs = RatFunc.const(V, 1)
        else:
            rhs = RatFunc.from_poly(character_recursion_rhs(n, k, V))
    return check_equal("characters", params(n, k), lhs, rhs, seed, sw["ms"])


def expected_pole_denominator(n: int, m: int, V: VarTable) -> RatFunc:
    """``prod_{i,l} (1 - q^-1 y_i/x_l)``, the denominator allowed by the residue analysis."""
    one = LaurentPoly.const(V, 1)
    out = RatFunc.const(V, 1)
    for i in range(1, n + 1):
        for l in range(1, m + 1):
            out = out * RatFunc.from_poly(one - _ratio(V, f"y{i}", f"x{l}", -1))
    return out


def poles_only_on_hom_divisors(k: int, n: int, m: int) -> bool:
    """Whether chi(X(k,n,m)) times the expected denominator is a Laurent polynomial."""
    V = genus_vars(n, m)
    f = (chi_genus(GenusSpec("X", k, n, m), V) * expected_pole_denominator(n, m, V)).compact()
    return all(e > 0 for key in f.terms for _, e in key[1])
