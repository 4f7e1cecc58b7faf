"""Difference operators: q-shifts on torus variables and epsilon-shifts on a-variables.

An operator is a finite sum ``sum_delta c_delta T^delta`` kept with every
coefficient to the LEFT of its shift.  Moving a shift across a coefficient
shifts the coefficient:

* multiplicative: ``q^{D_i} c(y) = c(.., q y_i, ..) q^{D_i}``
* additive: ``e^{eps d_i} c(a) = c(.., a_i + eps, ..) e^{eps d_i}``

so ``(c1 T^d1)(c2 T^d2) = c1 * c2(shifted by d1) T^(d1+d2)``.  Operators act
on functions from the right, ``f . T^d = f(shifted by -d)``, which makes
``(f . A) . B = f . (A B)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .algebra.laurent import LaurentPoly
from .algebra.ratfunc import DenominatorVanishes, RatFunc
from .algebra.univariate import coefficients, poly_divide, rat_compare
from .algebra.vartable import VarTable
from .algebra.zerotest import is_zero
from .checks import CheckResult, check_equal, failure, format_witness, params, size_of, stopwatch
from .localization import (
    GenusSpec,
    chi_genus,
    colex_subsets,
    genus_vars,
    lambda_char_rho,
    wallcross_rhs,
    weight_factor,
)


class ShiftOp:
    """Common machinery; subclasses fix how a shift moves a coefficient."""

    kind = ""

    def __init__(self, vars: VarTable, block: tuple[str, ...], terms: dict | None = None):
        self.vars = vars
        self.block = tuple(block)
        out = {}
        for d, c in (terms or {}).items():
            d = tuple(d)
            if len(d) != len(self.block):
                raise ValueError(f"shift {d} does not match block {self.block}")
            c = RatFunc.coerce(vars, c).embed(vars) if not isinstance(c, RatFunc) else c.embed(vars)
            if c.terms:
                out[d] = out[d] + c if d in out else c
        self.terms = {d: c for d, c in out.items() if c.terms}

    # -- construction helpers --------------------------------------------------
    @classmethod
    def identity(cls, vars, block):
        return cls(vars, block, {(0,) * len(block): RatFunc.const(vars, 1)})

    @classmethod
    def shift(cls, vars, block, delta, coeff=1):
        return cls(vars, block, {tuple(delta): RatFunc.coerce(vars, coeff)})

    @classmethod
    def scalar(cls, vars, block, c):
        return cls(vars, block, {(0,) * len(block): RatFunc.coerce(vars, c)})

    def _new(self, terms):
        return type(self)(self.vars, self.block, terms)

    def _check(self, other):
        if type(other) is not type(self) or other.block != self.block:
            raise TypeError("operators act on different variable blocks")
        if other.vars != self.vars:
            raise TypeError("operators live over different variable tables")

    # -- the shift automorphism ------------------------------------------------
    def shift_coeff(self, c: RatFunc, delta) -> RatFunc:
        raise NotImplementedError

    # -- algebra -----------------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return self._new(terms)

    def __neg__(self):
        return self._new({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ShiftOp":
        """Left multiplication by a coefficient (shift zero)."""
        c = RatFunc.coerce(self.vars, c)
        return self._new({d: c * v for d, v in self.terms.items()})

    def compose(self, other: "ShiftOp") -> "ShiftOp":
        self._check(other)
        out: dict = {}
        cache: dict = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                key = (d2, d1)
                if key not in cache:
                    cache[key] = self.shift_coeff(c2, d1)
                d = tuple(a + b for a, b in zip(d1, d2))
                v = c1 * cache[key]
                out[d] = out[d] + v if d in out else v
        return self._new(out)

    __matmul__ = compose

    def embed(self, V: VarTable) -> "ShiftOp":
        """The same operator over a larger variable table."""
        return type(self)(V, self.block, {d: c.embed(V) for d, c in self.terms.items()})

    def map_coeffs(self, fn) -> "ShiftOp":
        return self._new({d: fn(c) for d, c in self.terms.items()})

    def right_coefficients(self) -> dict:
        """Coefficients when every shift is written to the LEFT of its coefficient."""
        return {d: self.shift_coeff(c, tuple(-x for x in d)) for d, c in self.terms.items()}

    @classmethod
    def from_right_coefficients(cls, vars, block, terms: dict):
        """Build ``sum T^d c_d`` (shift written first) in normal form."""
        tmp = cls(vars, block)
        return cls(vars, block, {d: tmp.shift_coeff(RatFunc.coerce(vars, c), d) for d, c in terms.items()})

    # -- action on functions -----------------------------------------------------
    def apply(self, f: RatFunc) -> RatFunc:
        """Right action ``f . A``."""
        total = RatFunc(self.vars, {})
        for d, c in self.terms.items():
            neg = tuple(-x for x in d)
            total = total + self.shift_coeff(f * c, neg)
        return total

    # -- comparison -------------------------------------------------------------
    def compare(self, other, seed: int = 0):
        """Exact coefficientwise equality; returns ``(ok, shift, witness)``."""
        self._check(other)
        for d in sorted(set(self.terms) | set(other.terms)):
            a = self.terms.get(d, RatFunc(self.vars, {}))
            b = other.terms.get(d, RatFunc(self.vars, {}))
            ok, w = rat_compare(a, b, seed=seed)
            if not ok:
                return False, d, w
        return True, None, None

    def equals(self, other, seed: int = 0) -> bool:
        return self.compare(other, seed)[0]

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.terms.values())

    @property
    def nterms(self) -> int:
        return sum(c.nterms for c in self.terms.values())

    def shifts(self) -> list:
        return sorted(self.terms)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms, reverse=True):
            c = self.terms[d].compact()
            sh = self.shift_symbol(d)
            cs = c.to_str()
            if sh == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(sh)
            else:
                parts.append(f"[{cs}]*{sh}")
        return " + ".join(parts)

    def shift_symbol(self, d) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_str()})"


class MultShiftOp(ShiftOp):
    """Operators in ``q^{D_i}`` acting by ``y_i -> q y_i`` on a block of torus variables."""

    kind = "mult"

    def __init__(self, vars, block, terms=None, base: str = "q"):
        self.base = base
        super().__init__(vars, block, terms)

    def _new(self, terms):
        return MultShiftOp(self.vars, self.block, terms, self.base)

    def shift_coeff(self, c: RatFunc, delta) -> RatFunc:
        if not any(delta):
            return c
        V = self.vars
        subs = {}
        for name, k in zip(self.block, delta):
            if k:
                e = [0] * len(V)
                e[V.index(name)] = 1
                e[V.index(self.base)] = k
                subs[name] = LaurentPoly.monomial(V, tuple(e))
        return c.subs(subs)

    def shift_symbol(self, d) -> str:
        parts = []
        for name, k in zip(self.block, d):
            if k:
                parts.append(f"q^D[{name}]" if k == 1 else f"q^({k}*D[{name}])")
        return "*".join(parts) or "1"


class AddShiftOp(ShiftOp):
    """Operators in ``e^{eps d/da_i}`` acting by ``a_i -> a_i + eps``."""

    kind = "add"

    def __init__(self, vars, block, terms=None, step: str = "eps"):
        self.step = step
        super().__init__(vars, block, terms)

    def _new(self, terms):
        return AddShiftOp(self.vars, self.block, terms, self.step)

    def shift_coeff(self, c: RatFunc, delta) -> RatFunc:
        if not any(delta):
            return c
        V = self.vars
        eps = LaurentPoly.var(V, self.step)
        subs = {name: LaurentPoly.var(V, name) + eps * k for name, k in zip(self.block, delta) if k}
        return c.subs(subs)

    def shift_symbol(self, d) -> str:
        parts = []
        for name, k in zip(self.block, d):
            if k:
                parts.append(f"e^(eps*d[{name}])" if k == 1 else f"e^({k}*eps*d[{name}])")
        return "*".join(parts) or "1"


def op_compose(lhs: ShiftOp, rhs: ShiftOp) -> ShiftOp:
    return lhs.compose(rhs)


# ---------------------------------------------------------------------------
# Macdonald operators


def _blocks(n: int, m: int):
    return tuple(f"y{i}" for i in range(1, n + 1)), tuple(f"x{l}" for l in range(1, m + 1))


def macdonald_op(n: int, k: int, block: str = "y", dual: bool = False, V: VarTable | None = None) -> MultShiftOp:
    """The Macdonald operator on the y-block, or its dual form on the x-block.

    ``block="y"``: ``sum_I q^{D_I} prod_{i in I, j notin I} (1 - t y_j/y_i)/(1 - y_j/y_i)``
    with shifts written first, stored after moving them to the right.
    ``dual=True`` (x-block): ``sum_I prod (1 - t x_i/x_j)/(1 - x_i/x_j) q^{D_I}``.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if block not in ("y", "x"):
        raise ValueError(f"unknown block {block!r}")
    if V is None:
        V = genus_vars(n, 0) if block == "y" else genus_vars(0, n)
    names = tuple(f"{block}{i}" for i in range(1, n + 1))
    terms = {}
    for I in colex_subsets(n, k):
        c = RatFunc.const(V, 1)
        for i in I:
            for j in range(1, n + 1):
                if j in I:
                    continue
                if dual:
                    c = c * weight_factor(V, _mono_ratio(V, f"{block}{i}", f"{block}{j}"))
                else:
                    c = c * weight_factor(V, _mono_ratio(V, f"{block}{j}", f"{block}{i}"))
        delta = tuple(1 if i in I else 0 for i in range(1, n + 1))
        terms[delta] = c
    if dual:
        return MultShiftOp(V, names, terms)
    return MultShiftOp.from_right_coefficients(V, names, terms)


def _mono_ratio(V, num, den) -> LaurentPoly:
    e = [0] * len(V)
    e[V.index(num)] += 1
    e[V.index(den)] -= 1
    return LaurentPoly.monomial(V, tuple(e))


def verify_macdonald_commute(n: int, seed: int = 0) -> CheckResult:
    with stopwatch() as sw:
        V = genus_vars(n, 0)
        ops = [macdonald_op(n, k, "y", V=V) for k in range(n + 1)]
        size = 0
        for k in range(n + 1):
            for k2 in range(k + 1, n + 1):
                ab = ops[k] @ ops[k2]
                ba = ops[k2] @ ops[k]
                size += ab.nterms + ba.nterms
                ok, d, w = ab.compare(ba, seed)
                if not ok:
                    return CheckResult(
                        "macdonald", params(n), "fail", format_witness(w), sw["ms"], size,
                        detail=f"U{k} U{k2} != U{k2} U{k} at shift {d}",
                    )
    return CheckResult("macdonald", params(n), "pass", None, sw["ms"], size)


# ---------------------------------------------------------------------------
# the Maps-space symbol


def _qshift_ratio(V, w: LaurentPoly, a: int) -> RatFunc:
    """``phi_q(q^a w) / phi_q(w)`` for an integer ``a``."""
    one = LaurentPoly.const(V, 1)
    q = LaurentPoly.var(V, "q")
    out = RatFunc.const(V, 1)
    if a > 0:
        for j in range(a):
            out = out * RatFunc.from_poly(one - q**j * w, -1)
    elif a < 0:
        for j in range(1, -a + 1):
            out = out * RatFunc.from_poly(one - q ** (-j) * w)
    return out


@dataclass(frozen=True)
class PhiProduct:
    """``prefactor * prod_{i,l} phi_q(t y_i/x_l) / phi_q(y_i/x_l)``."""

    n: int
    m: int
    vars: VarTable
    prefactor: RatFunc

    @classmethod
    def plain(cls, n: int, m: int, V: VarTable | None = None) -> "PhiProduct":
        V = V or genus_vars(n, m)
        return cls(n, m, V, RatFunc.const(V, 1))

    def multiplier(self, shifts: dict) -> RatFunc:
        """Ratio of the bare symbol at ``v -> q^{shifts[v]} v`` to the symbol itself."""
        for v, a in shifts.items():
            if not isinstance(a, int):
                raise TypeError(f"non-integer q-power shift {a!r} for {v}")
        V = self.vars
        t = LaurentPoly.var(V, "s", 2)
        out = RatFunc.const(V, 1)
        for i in range(1, self.n + 1):
            for l in range(1, self.m + 1):
                a = shifts.get(f"y{i}", 0) - shifts.get(f"x{l}", 0)
                if a:
                    w = _mono_ratio(V, f"y{i}", f"x{l}")
                    out = out * _qshift_ratio(V, t * w, a) / _qshift_ratio(V, w, a)
        return out

    def shifted(self, shifts: dict) -> "PhiProduct":
        """The symbol with its variables shifted, rewritten over the unshifted symbol."""
        pre = self.prefactor
        if any(shifts.values()):
            V = self.vars
            subs = {}
            for v, a in shifts.items():
                if a:
                    e = [0] * len(V)
                    e[V.index(v)] = 1
                    e[V.index("q")] = a
                    subs[v] = LaurentPoly.monomial(V, tuple(e))
            pre = pre.subs(subs)
        return PhiProduct(self.n, self.m, self.vars, pre * self.multiplier(shifts))


def act_on_phi(op: MultShiftOp, target: PhiProduct, side: str = "right") -> list[tuple[RatFunc, PhiProduct]]:
    """Apply ``op`` to the symbol; each term yields ``(multiplier, bare symbol)``.

    ``side="right"`` is the standard right action ``Phi . c T^d = (Phi c)(shift by -d)``.
    ``side="left"`` is ``c T^d Phi = c * Phi(shift by +d)``, the way the x-block
    operators of the difference equation are applied.
    """
    if side not in ("right", "left"):
        raise ValueError(f"unknown side {side!r}")
    out = []
    bare = PhiProduct.plain(target.n, target.m, target.vars)
    for d, c in sorted(op.terms.items()):
        sign = -1 if side == "right" else 1
        shifts = {name: sign * k for name, k in zip(op.block, d) if k}
        moved = target.shifted(shifts)
        if side == "right":
            coeff = op.shift_coeff(c, tuple(-x for x in d)) * moved.prefactor
        else:
            coeff = c * moved.prefactor
        try:
            coeff = coeff.embed(target.vars)
        except DenominatorVanishes:  # pragma: no cover - substitution guards this
            raise
        out.append((coeff, bare))
    return out


def reduce_action(op: MultShiftOp, target: PhiProduct, side: str = "right") -> RatFunc:
    """Sum of the multipliers of :func:`act_on_phi`: the action divided by the bare symbol."""
    total = RatFunc(target.vars, {})
    for c, _ in act_on_phi(op, target, side):
        total = total + c
    return total


def maps_diffeq_sides(k: int, n: int, m: int, V: VarTable | None = None) -> tuple[RatFunc, RatFunc]:
    """Both sides of the Maps-space difference equation divided by the symbol."""
    V = V or genus_vars(n, m)
    phi = PhiProduct.plain(n, m, V)
    lhs = reduce_action(macdonald_op(n, k, "y", V=V), phi, "right")
    rhs = RatFunc(V, {})
    for k2 in range(0, min(k, n - m) + 1):
        k1 = k - k2
        if k1 > m:
            continue
        weight = LaurentPoly.var(V, "s", 2 * k2 * (m - k1) + k2 * (n - m - k2)) * lambda_char_rho(k2, n - m, V)
        ux = macdonald_op(m, k1, "x", dual=True, V=V)
        rhs = rhs + RatFunc.from_poly(weight) * reduce_action(ux, phi, "left")
    return lhs, rhs


def verify_maps_diffeq(k: int, n: int, m: int, seed: int = 0) -> CheckResult:
    """The difference equation, plus agreement of each side with the localization sums."""
    if not (0 <= k <= n and 1 <= m <= n):
        raise ValueError(f"need 0 <= k <= n and 1 <= m <= n, got {(k, n, m)}")
    with stopwatch() as sw:
        V = genus_vars(n, m)
        lhs, rhs = maps_diffeq_sides(k, n, m, V)
        main = check_equal("maps-diffeq", params(n, k, m), lhs, rhs, seed)
        if not main.passed:
            return main
        loc_l = chi_genus(GenusSpec("X", k, n, m), V)
        loc_r = wallcross_rhs(k, n, m, V)
        for mine, theirs, label in ((lhs, loc_l, "left"), (rhs, loc_r, "right")):
            ok, w = rat_compare(mine, theirs, seed=seed)
            if not ok:
                r = CheckResult("maps-diffeq", params(n, k, m), "fail", format_witness(w),
                                detail=f"{label} side differs from the localization sum")
                return r
    return CheckResult("maps-diffeq", params(n, k, m), "pass", None, sw["ms"], size_of(lhs, rhs))


# ---------------------------------------------------------------------------
# Coulomb-branch operators


def coulomb_vars(n: int) -> VarTable:
    return VarTable.of(*[f"a{i}" for i in range(1, n + 1)], ("eps", "add"), ("X", "central"))


def _ablock(n):
    return tuple(f"a{i}" for i in range(1, n + 1))


def coulomb_U(n: int, sign: int, V: VarTable | None = None) -> AddShiftOp:
    """``U^{+-}(X) = +- sum_i e^{+-eps d_i} prod_{j != i} (X - a_j)/(a_i - a_j)`` (shift first)."""
    if n < 1 or sign not in (1, -1):
        raise ValueError("need n >= 1 and sign in (+1, -1)")
    V = V or coulomb_vars(n)
    X = LaurentPoly.var(V, "X")
    a = [LaurentPoly.var(V, f"a{i}") for i in range(1, n + 1)]
    right = {}
    for i in range(n):
        c = RatFunc.const(V, sign)
        for j in range(n):
            if j != i:
                c = c * RatFunc.ratio(X - a[j], a[i] - a[j])
        d = tuple(sign if j == i else 0 for j in range(n))
        right[d] = c
    return AddShiftOp.from_right_coefficients(V, _ablock(n), right)


def coulomb_Q(n: int, V: VarTable | None = None) -> AddShiftOp:
    """``Q(X) = prod_i (X - a_i)`` as a multiplication operator."""
    V = V or coulomb_vars(n)
    X = LaurentPoly.var(V, "X")
    c = RatFunc.const(V, 1)
    for i in range(1, n + 1):
        c = c * RatFunc.from_poly(X - LaurentPoly.var(V, f"a{i}"))
    return AddShiftOp.scalar(V, _ablock(n), c)


def shift_X(op: AddShiftOp, amount: RatFunc | LaurentPoly) -> AddShiftOp:
    """Replace the central variable ``X`` by ``X + amount`` in every coefficient."""
    V = op.vars
    img = RatFunc.var(V, "X") + RatFunc.coerce(V, amount)
    return op.map_coeffs(lambda c: c.subs({"X": img}))


def coulomb_product(n: int, V: VarTable | None = None) -> AddShiftOp:
    """``U^+(X) U^-(X - eps)``."""
    V = V or coulomb_vars(n)
    eps = LaurentPoly.var(V, "eps")
    return coulomb_U(n, 1, V) @ shift_X(coulomb_U(n, -1, V), -eps)


def coulomb_Qtilde(n: int, seed: int = 0) -> tuple[AddShiftOp, CheckResult]:
    """Divide ``U^+(X)U^-(X-eps) + 1`` by ``Q(X - eps)`` shiftwise and check the relation."""
    with stopwatch() as sw:
        V = coulomb_vars(n)
        blk = _ablock(n)
        eps = LaurentPoly.var(V, "eps")
        P = coulomb_product(n, V) + AddShiftOp.identity(V, blk)
        Qm = shift_X(coulomb_Q(n, V), -eps).terms[(0,) * n]
        qt_terms = {}
        degs = []
        for d, c in P.terms.items():
            divisor = P.shift_coeff(Qm, d)
            quo, rem = poly_divide(c, divisor, "X")
            if rem.terms and not is_zero(rem):
                return AddShiftOp(V, blk), failure("mcrel", params(n), f"nonzero remainder at shift {d}", sw["ms"])
            if quo.terms:
                qt_terms[d] = quo
                degs.append(max(coefficients(quo, "X")))
        Qt = AddShiftOp(V, blk, qt_terms)
        deg = max(degs) if degs else None
        expected = n - 2 if n >= 2 else None
        if deg != expected and not (n == 1 and not Qt.terms):
            return Qt, failure("mcrel", params(n), f"deg_X Qtilde = {deg}, expected {expected}", sw["ms"])
        half = RatFunc.from_poly(eps) / 2
        lhs = shift_X(Qt, half) @ shift_X(coulomb_Q(n, V), -half)
        lhs = lhs - shift_X(coulomb_U(n, 1, V), half) @ shift_X(coulomb_U(n, -1, V), -half)
        ok, d, w = lhs.compare(AddShiftOp.identity(V, blk), seed)
        if not ok:
            r = CheckResult("mcrel", params(n), "fail", format_witness(w), sw["ms"], lhs.nterms,
                            detail=f"relation fails at shift {d}")
            return Qt, r
        ok, msg = _evaluation_check(n, V, seed)
        if not ok:
            return Qt, failure("mcrel", params(n), msg, sw["ms"])
    return Qt, CheckResult("mcrel", params(n), "pass", None, sw["ms"], lhs.nterms + P.nterms,
                           extra={"deg_qtilde": deg})


def evaluate_product_at(n: int, ell: int, V: VarTable | None = None) -> dict:
    """Shift-first coefficients of ``U^+(X)U^-(X-eps)`` at ``X = a_ell + eps``."""
    V = V or coulomb_vars(n)
    at = RatFunc.var(V, f"a{ell}") + RatFunc.var(V, "eps")
    return {d: c.subs({"X": at}) for d, c in coulomb_product(n, V).right_coefficients().items()}


def _evaluation_check(n: int, V, seed: int) -> tuple[bool, str]:
    zero = (0,) * n
    for ell in range(1, n + 1):
        coeffs = evaluate_product_at(n, ell, V)
        diag = coeffs.get(zero, RatFunc(V, {}))
        if not rat_compare(diag, RatFunc.const(V, -1), seed)[0]:
            return False, f"diagonal coefficient at X = a{ell} + eps is not -1"
        for d, c in coeffs.items():
            if d != zero and not is_zero(c):
                return False, f"coefficient of shift {d} at X = a{ell} + eps is nonzero"
    return True, ""


def all_shift_pairs(n: int):
    """Shift vectors e_i - e_j occurring in ``U^+ U^-``."""
    for i, j in iproduct(range(n), repeat=2):
        yield tuple((1 if r == i else 0) - (1 if r == j else 0) for r in range(n))
