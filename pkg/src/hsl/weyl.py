"""The Weyl algebra in z_i^{+-1} and D_i = eps z_i d/dz_i, and series in 1/x over it.

Elements are normal ordered, z-powers to the left of D-powers, with
coefficients that are polynomials in central variables (eps, x, x1, x2).
The only relation is ``D_i z_i^k = z_i^k (D_i + k eps)``.
"""

from __future__ import annotations

from math import comb
from operator import add

from .algebra.laurent import LaurentPoly, scalar
from .algebra.vartable import VarTable

#: Central coefficient variables shared by every Weyl computation.
CENTRAL = VarTable.of(("eps", "add"), ("x", "central"), ("x1", "central"), ("x2", "central"))


class WeylElem:
    """Finite sum of ``c * z^alpha D^beta`` over ``n`` pairs of generators."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero}

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "WeylElem":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "WeylElem":
        c = c if isinstance(c, LaurentPoly) else LaurentPoly.const(CENTRAL, c)
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def central(cls, n: int, name: str, power: int = 1) -> "WeylElem":
        return cls.const(n, LaurentPoly.var(CENTRAL, name, power))

    @classmethod
    def z(cls, n: int, i: int, power: int = 1) -> "WeylElem":
        a = [0] * n
        a[i - 1] = power
        return cls(n, {(tuple(a), (0,) * n): LaurentPoly.const(CENTRAL, 1)})

    @classmethod
    def D(cls, n: int, i: int, power: int = 1) -> "WeylElem":
        if power < 0:
            raise ValueError("D has no inverse in the Weyl algebra")
        b = [0] * n
        b[i - 1] = power
        return cls(n, {((0,) * n, tuple(b)): LaurentPoly.const(CENTRAL, 1)})

    # -- queries ------------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def nterms(self) -> int:
        return sum(len(c) for c in self.terms.values())

    def const_value(self):
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            (a, b), c = next(iter(self.terms.items()))
            if not any(a) and not any(b):
                return c.const_value()
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int,)):
            other = WeylElem.const(self.n, other)
        if not isinstance(other, WeylElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------------
    def _lift(self, other) -> "WeylElem":
        if isinstance(other, WeylElem):
            if other.n != self.n:
                raise ValueError("Weyl elements over different numbers of variables")
            return other
        return WeylElem.const(self.n, other)

    def __add__(self, other) -> "WeylElem":
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return WeylElem(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylElem":
        return WeylElem(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "WeylElem":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "WeylElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "WeylElem":
        other = self._lift(other)
        eps = LaurentPoly.var(CENTRAL, "eps")
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                # D^b1 z^a2 = z^a2 prod_i (D_i + a2_i eps)^b1_i, expanded binomially
                expansions = [((0,) * self.n, c1 * c2)]
                for i in range(self.n):
                    k, g = b1[i], a2[i]
                    if not k:
                        continue
                    nxt = []
                    for beta, c in expansions:
                        for j in range(k + 1):
                            if g == 0 and j != k:
                                continue
                            coeff = comb(k, j) * (g ** (k - j))
                            bb = list(beta)
                            bb[i] += j
                            nxt.append((tuple(bb), c * (eps ** (k - j)) * coeff))
                    expansions = nxt
                alpha = tuple(map(add, a1, a2))
                for beta, c in expansions:
                    key = (alpha, tuple(map(add, beta, b2)))
                    out[key] = out[key] + c if key in out else c
        return WeylElem(self.n, out)

    def __rmul__(self, other) -> "WeylElem":
        return self._lift(other) * self

    def __pow__(self, k: int) -> "WeylElem":
        out = WeylElem.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other) -> "WeylElem":
        other = self._lift(other)
        return self * other - other * self

    def map_coeffs(self, fn) -> "WeylElem":
        return WeylElem(self.n, {k: fn(c) for k, c in self.terms.items()})

    def subs_central(self, images: dict) -> "WeylElem":
        """Substitute central variables by polynomials (e.g. ``x -> x - eps``)."""
        idx = {CENTRAL.index(k): v for k, v in images.items()}

        def sub(c: LaurentPoly) -> LaurentPoly:
            out = LaurentPoly.zero(CENTRAL)
            for e, v in c.terms.items():
                t = LaurentPoly.monomial(CENTRAL, tuple(0 if i in idx else x for i, x in enumerate(e)), v)
                for i, img in idx.items():
                    if e[i]:
                        t = t * img ** e[i]
                out = out + t
            return out

        return self.map_coeffs(sub)

    def coefficient_in(self, name: str) -> dict[int, "WeylElem"]:
        """Split by powers of a central variable."""
        i = CENTRAL.index(name)
        out: dict[int, dict] = {}
        for k, c in self.terms.items():
            for p, part in c.split(i).items():
                d = out.setdefault(p, {})
                d[k] = d[k] + part if k in d else part
        return {p: WeylElem(self.n, d) for p, d in out.items()}

    # -- printing -------------------------------------------------------------------
    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0][1]), kv[0]), reverse=True):
            gens = []
            for i in range(self.n, 0, -1):
                if a[i - 1]:
                    gens.append(f"z{i}" + (f"^({a[i - 1]})" if a[i - 1] != 1 else ""))
            for i in range(self.n, 0, -1):
                if b[i - 1]:
                    gens.append(f"D{i}" + (f"^{b[i - 1]}" if b[i - 1] != 1 else ""))
            g = "*".join(gens)
            cs = c.to_str()
            if not g:
                parts.append(cs if len(c) == 1 else f"({cs})")
            elif cs == "1":
                parts.append(g)
            elif cs == "-1":
                parts.append("-" + g)
            else:
                parts.append(f"{cs if len(c) == 1 else '(' + cs + ')'}*{g}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"WeylElem({self.to_str()})"


class Mat2Weyl:
    """A 2x2 matrix with WeylElem entries."""

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        if len(self.rows) != 2 or any(len(r) != 2 for r in self.rows):
            raise ValueError("need a 2x2 array")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Mat2Weyl") -> "Mat2Weyl":
        return Mat2Weyl([[self[i, 0] * other[0, j] + self[i, 1] * other[1, j] for j in range(2)] for i in range(2)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat2Weyl) and all(self[i, j] == other[i, j] for i in range(2) for j in range(2))

    __hash__ = None

    def subs_central(self, images: dict) -> "Mat2Weyl":
        return Mat2Weyl([[self[i, j].subs_central(images) for j in range(2)] for i in range(2)])

    def to_str(self) -> str:
        return "[" + "; ".join(", ".join(self[i, j].to_str() for j in range(2)) for i in range(2)) + "]"


# ---------------------------------------------------------------------------
# series in 1/x with Weyl coefficients


class InvXSeries:
    """``sum_p c_p x^p`` known exactly for exponents ``p >= low``.

    ``low=None`` marks an exact (finite) series.
    """

    def __init__(self, n: int, coeffs: dict, low: int | None):
        self.n = n
        self.low = low
        self.coeffs = {p: c for p, c in coeffs.items() if not c.is_zero and (low is None or p >= low)}

    @classmethod
    def from_weyl(cls, w: WeylElem) -> "InvXSeries":
        """Read off the x-dependence of a Weyl element polynomial in x (exact)."""
        return cls(w.n, w.coefficient_in("x"), None)

    @property
    def top(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    @property
    def bottom(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def truncate(self, low: int) -> "InvXSeries":
        new_low = low if self.low is None else max(low, self.low)
        return InvXSeries(self.n, self.coeffs, new_low)

    def __add__(self, other: "InvXSeries") -> "InvXSeries":
        lows = [l for l in (self.low, other.low) if l is not None]
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out[p] + c if p in out else c
        return InvXSeries(self.n, out, max(lows) if lows else None)

    def __neg__(self) -> "InvXSeries":
        return InvXSeries(self.n, {p: -c for p, c in self.coeffs.items()}, self.low)

    def __sub__(self, other: "InvXSeries") -> "InvXSeries":
        return self + (-other)

    def __mul__(self, other: "InvXSeries") -> "InvXSeries":
        lows = []
        if self.low is not None and other.coeffs:
            lows.append(self.low + other.top)
        if other.low is not None and self.coeffs:
            lows.append(other.low + self.top)
        if self.low is not None and other.low is not None and not (self.coeffs and other.coeffs):
            lows.append(self.low + other.low)
        low = min(lows) if lows else None
        out: dict = {}
        for p, a in self.coeffs.items():
            for r, b in other.coeffs.items():
                if low is not None and p + r < low:
                    continue
                v = a * b
                out[p + r] = out[p + r] + v if p + r in out else v
        return InvXSeries(self.n, out, low)

    def inverse(self, low: int) -> "InvXSeries":
        """Two-sided inverse of ``x^d (1 + O(1/x))`` to precision ``low`` by Newton iteration."""
        d = self.top
        if d is None or self.coeffs[d].const_value() != 1:
            raise ValueError("leading coefficient must be exactly 1")
        one = InvXSeries(self.n, {0: WeylElem.const(self.n, 1)}, None)
        two = InvXSeries(self.n, {0: WeylElem.const(self.n, 2)}, None)
        y = InvXSeries(self.n, {-d: WeylElem.const(self.n, 1)}, -d)
        prec = 1
        while True:
            prec = min(2 * prec, -d - low + 1)
            target = -d - prec + 1
            a = self.truncate(d - prec + 1)
            y = (y * (two - a * y)).truncate(target)
            y.low = target
            if target <= low:
                break
        check = (self.truncate(d - (-d - low)) * y).truncate(low + d)
        residual = check - one
        if any(not c.is_zero for c in residual.coeffs.values()):
            raise ArithmeticError("series inversion did not converge")
        return y.truncate(low)

    def leading(self) -> tuple[int, WeylElem] | None:
        t = self.top
        return None if t is None else (t, self.coeffs[t])

    def agrees_with(self, other: "InvXSeries", low: int) -> bool:
        """Coefficientwise equality for exponents ``>= low``."""
        keys = {p for p in set(self.coeffs) | set(other.coeffs) if p >= low}
        z = WeylElem.zero(self.n)
        return all(self.coeffs.get(p, z) == other.coeffs.get(p, z) for p in keys)

    def to_str(self) -> str:
        parts = [f"({c.to_str()})*x^({p})" for p, c in sorted(self.coeffs.items(), reverse=True)]
        tail = "" if self.low is None else f" + O(x^({self.low - 1}))"
        return (" + ".join(parts) or "0") + tail
