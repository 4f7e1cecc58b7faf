"""Truncated Laurent series in q with exact rational coefficients.

This is an independent oracle for the Maps-space difference equations: the
torus variables y, x and s are fixed at rational points and only q stays
symbolic.  A q-shift of an argument then becomes a shift of the q-power in
the product defining ``phi_q``, so no symbolic reduction is involved.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra.laurent import LaurentPoly
from .algebra.ratfunc import DenominatorVanishes, RatFunc
from .checks import CheckResult, params, stopwatch
from .localization import genus_vars, lambda_char_rho


class QSeries:
    """``sum_k c_k q^k`` known exactly for ``k <= order``; ``order=None`` means exact."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: dict | None = None, order: int | None = None):
        self.order = order
        self.coeffs = {
            k: Fraction(v) for k, v in (coeffs or {}).items() if v and (order is None or k <= order)
        }

    @classmethod
    def const(cls, c, order: int | None = None) -> "QSeries":
        return cls({0: c}, order)

    @classmethod
    def monomial(cls, c, k: int) -> "QSeries":
        return cls({k: c})

    @property
    def val(self) -> int | None:
        """Lowest exponent with a nonzero coefficient."""
        return min(self.coeffs) if self.coeffs else None

    def coefficient(self, k: int) -> Fraction:
        if self.order is not None and k > self.order:
            raise ValueError(f"coefficient of q^{k} is beyond the truncation order {self.order}")
        return self.coeffs.get(k, Fraction(0))

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs, order if self.order is None else min(order, self.order))

    def __add__(self, other) -> "QSeries":
        other = _lift(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return QSeries(out, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other) -> "QSeries":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "QSeries":
        return _lift(other) - self

    def __mul__(self, other) -> "QSeries":
        other = _lift(other)
        orders = []
        if self.order is not None:
            orders.append(self.order + (other.val if other.coeffs else 0))
        if other.order is not None:
            orders.append(other.order + (self.val if self.coeffs else 0))
        order = min(orders) if orders else None
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if order is not None and i + j > order:
                    continue
                out[i + j] = out.get(i + j, 0) + a * b
        return QSeries(out, order)

    __rmul__ = __mul__

    def inverse(self, order: int) -> "QSeries":
        """``1/self`` known through ``q^order`` (or less if ``self`` is not precise enough)."""
        v = self.val
        if v is None:
            raise ZeroDivisionError("inverse of the zero series")
        lead = self.coeffs[v]
        if self.order is not None:
            order = min(order, self.order - 2 * v)
        # 1/(lead q^v (1 + u)) with u = O(q)
        out = {-v: 1 / lead}
        for k in range(-v + 1, order + 1):
            acc = Fraction(0)
            for j in range(1, k + v + 1):
                c = self.coeffs.get(v + j)
                if c:
                    acc += c * out.get(k - j, 0)
            if acc:
                out[k] = -acc / lead
        return QSeries(out, order)

    def __truediv__(self, other) -> "QSeries":
        other = _lift(other)
        budget = self.order if self.order is not None else (other.order or 0) + 64
        return self * other.inverse(budget - (self.val or 0) + 2 * (other.val or 0) + 1)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("use inverse() for negative powers")
        out = QSeries.const(1)
        for _ in range(e):
            out = out * self
        return out

    def agrees(self, other: "QSeries", upto: int) -> int | None:
        """First exponent ``<= upto`` where the coefficients differ, else None."""
        known = _min_order(self.order, other.order)
        if known is not None and upto > known:
            raise ValueError(f"cannot compare through q^{upto}: only known through q^{known}")
        keys = {k for k in set(self.coeffs) | set(other.coeffs) if k <= upto}
        for k in sorted(keys):
            if self.coeffs.get(k, 0) != other.coeffs.get(k, 0):
                return k
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def to_str(self) -> str:
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            parts.append(f"{c}" if k == 0 else f"({c})*q^{k}")
        body = " + ".join(parts) or "0"
        return body if self.order is None else f"{body} + O(q^{self.order + 1})"

    def __repr__(self) -> str:
        return f"QSeries({self.to_str()})"


def _lift(x) -> QSeries:
    return x if isinstance(x, QSeries) else QSeries.const(x)


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def phi_q(arg, qpower: int, order: int) -> QSeries:
    """``prod_{j >= 0} (1 - q^(j + qpower) arg)`` through ``q^order``."""
    if order < 0 and qpower >= 0:
        raise ValueError("order must be nonnegative")
    arg = Fraction(arg)
    if not arg:
        return QSeries.const(1, order)
    low = QSeries.const(1)
    for e in range(qpower, 0):
        low = low * QSeries({0: 1, e: -arg})
    # the nonnegative factors must be known to ``order - val(low)``
    need = order - (low.val or 0)
    high = QSeries.const(1, need)
    for e in range(max(qpower, 0), need + 1):
        high = high * QSeries({0: 1, e: -arg}) if e else high * (1 - arg)
    return (low * high).truncate(order)


# ---------------------------------------------------------------------------
# the Maps-space symbol at a rational point


def seeded_point(n: int, m: int, rng: random.Random) -> dict:
    """Rational values for ``y_i``, ``x_l`` and ``s`` with no ``y_i/x_l`` equal to 1."""
    while True:
        pt = {f"y{i}": Fraction(rng.randint(1, 50), rng.randint(1, 50)) for i in range(1, n + 1)}
        pt.update({f"x{l}": Fraction(rng.randint(1, 50), rng.randint(1, 50)) for l in range(1, m + 1)})
        pt["s"] = Fraction(rng.randint(2, 20), rng.randint(1, 20))
        ratios = {pt[f"y{i}"] / pt[f"x{l}"] for i in range(1, n + 1) for l in range(1, m + 1)}
        ys = [pt[f"y{i}"] for i in range(1, n + 1)]
        xs = [pt[f"x{l}"] for l in range(1, m + 1)]
        if 1 in ratios or len(set(ys)) < n or len(set(xs)) < m or pt["s"] ** 2 == 1:
            continue
        return pt


def maps_genus_series(n: int, m: int, point: dict, order: int, shifts: dict | None = None) -> QSeries:
    """``prod_{i,l} phi_q(t y_i/x_l) / phi_q(y_i/x_l)`` with ``v -> q^(shifts[v]) v``."""
    shifts = shifts or {}
    t = Fraction(point["s"]) ** 2
    out = QSeries.const(1)
    for i in range(1, n + 1):
        for l in range(1, m + 1):
            w = Fraction(point.get(f"y{i}", 0)) / Fraction(point[f"x{l}"])
            a = shifts.get(f"y{i}", 0) - shifts.get(f"x{l}", 0)
            # a negative shift puts q^(-a(a+1)/2) in front of both products
            work = order + a * a + abs(a) + 2
            num = phi_q(t * w, a, work)
            den = phi_q(w, a, work)
            out = out * num * den.inverse(work)
    if out.order < order:
        raise ArithmeticError(f"lost precision: q^{out.order} < q^{order}")
    return out.truncate(order)


def laurent_to_q(P: LaurentPoly, point: dict) -> QSeries:
    """Evaluate every variable but ``q``; the result is an exact Laurent polynomial in q."""
    V = P.vars
    out: dict = {}
    for e, c in P.terms.items():
        val = Fraction(c)
        k = 0
        for name, p in zip(V.names, e):
            if not p:
                continue
            if name == "q":
                k = p
            else:
                val *= Fraction(point[name]) ** p
        out[k] = out.get(k, 0) + val
    return QSeries(out)


def ratfunc_to_q(f: RatFunc, point: dict, order: int) -> QSeries:
    """Expansion in q of a rational function at a point in the other variables."""
    total = QSeries({}, order)
    for (mono, facs), c in f.terms.items():
        term = laurent_to_q(LaurentPoly.monomial(f.vars, mono, c), point)
        dens = []
        for F, e in facs:
            s = laurent_to_q(F, point)
            if e > 0:
                term = term * s**e
            else:
                if not s.coeffs:
                    raise DenominatorVanishes(f"{F.to_str()} vanishes at the point")
                dens.append(s**-e)
        for d in dens:
            term = term * d.inverse(order - (term.val or 0) + 2 * (d.val or 0))
        total = total + term.truncate(order)
    return total


# ---------------------------------------------------------------------------
# the difference-equation cross-check


def _apply_series(op, point, n, m, order, side):
    """Series of ``op`` applied to the symbol, shifting arguments rather than reducing.

    Same conventions as ``act_on_phi``: the right action moves the shift past
    the coefficient and shifts by ``-d``; the left action shifts by ``+d``.
    """
    total = QSeries({}, order)
    for d, c in sorted(op.terms.items()):
        if side == "right":
            shifts = {name: -k for name, k in zip(op.block, d) if k}
            coeff = op.shift_coeff(c, tuple(-k for k in d))
        else:
            shifts = {name: k for name, k in zip(op.block, d) if k}
            coeff = c
        cs = ratfunc_to_q(coeff, point, order + 8)
        total = total + cs * maps_genus_series(n, m, point, order + 8 - min(0, cs.val or 0), shifts)
    return total.truncate(order)


def diffeq_series(k: int, n: int, m: int, point: dict, order: int) -> tuple[QSeries, QSeries]:
    """Both sides of the Maps-space difference equation as q-series at ``point``."""
    from .shiftops import macdonald_op

    V = genus_vars(n, m)
    lhs = _apply_series(macdonald_op(n, k, "y", V=V), point, n, m, order, "right")
    rhs = QSeries({}, order)
    for k2 in range(0, min(k, n - m) + 1):
        k1 = k - k2
        if k1 > m:
            continue
        weight = LaurentPoly.var(V, "s", 2 * k2 * (m - k1) + k2 * (n - m - k2)) * lambda_char_rho(k2, n - m, V)
        ux = macdonald_op(m, k1, "x", dual=True, V=V)
        rhs = rhs + laurent_to_q(weight, point) * _apply_series(ux, point, n, m, order, "left")
    return lhs, rhs.truncate(order)


def crosscheck_diffeq(k: int, n: int, m: int, point: dict | None = None, order: int = 6, seed: int = 0) -> CheckResult:
    """Series oracle for the difference equation, and agreement with the reduced symbolic form."""
    from .shiftops import maps_diffeq_sides

    prm = params(n, k, m)
    if not (0 <= k <= n and 1 <= m <= n):
        raise ValueError(f"need 0 <= k <= n and 1 <= m <= n, got {(k, n, m)}")
    with stopwatch() as sw:
        rng = random.Random(seed)
        tries = 0
        while True:
            pt = point if point is not None else seeded_point(n, m, rng)
            try:
                lhs, rhs = diffeq_series(k, n, m, pt, order)
                red_l, red_r = maps_diffeq_sides(k, n, m)
                phi = maps_genus_series(n, m, pt, order + 8)
                sym_l = (ratfunc_to_q(red_l, pt, order + 8) * phi).truncate(order)
                sym_r = (ratfunc_to_q(red_r, pt, order + 8) * phi).truncate(order)
                break
            except DenominatorVanishes:
                tries += 1
                if point is not None or tries > 20:
                    raise
        witness_pt = {name: str(v) for name, v in sorted(pt.items())}
        for a, b, what in ((lhs, rhs, "series sides differ"),
                           (lhs, sym_l, "series left side differs from the reduced form"),
                           (rhs, sym_r, "series right side differs from the reduced form")):
            if min(a.order, b.order) < order:
                return CheckResult("qseries", prm, "fail",
                                   {"point": witness_pt, "lhs": f"order {a.order}", "rhs": f"order {b.order}"},
                                   sw["ms"], detail="series precision below the requested order")
            bad = a.agrees(b, order)
            if bad is not None:
                return CheckResult("qseries", prm, "fail",
                                   {"point": witness_pt, "lhs": str(a.coefficient(bad)), "rhs": str(b.coefficient(bad))},
                                   sw["ms"], detail=f"{what} at q^{bad}")
        terms = len(lhs.coeffs) + len(rhs.coeffs)
    return CheckResult("qseries", prm, "pass", elapsed_ms=sw["ms"], terms=terms,
                       detail=f"agree through q^{order}", extra={"order": order})
