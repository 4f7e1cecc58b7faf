"""Exact rational functions kept as sums of factored terms.

Every value is a finite sum ``sum_k c_k * m_k * prod_F F**e_F`` where ``m_k``
is a Laurent monomial and each ``F`` is a normalized
:class:`~hsl.algebra.laurent.LaurentPoly` with at least two terms (see
:meth:`LaurentPoly.normalize`).  Products, quotients by single terms and
substitutions never expand anything, so localization sums with dozens of
binomial factors stay cheap.  :meth:`RatFunc.together` produces the classical
numerator/denominator pair on demand; equality is decided exactly by
:func:`hsl.algebra.zerotest.is_zero`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from operator import add
from typing import Iterable, Mapping, Sequence

from .laurent import Exponent, LaurentPoly, Scalar, scalar
from .vartable import VarTable

Factors = frozenset  # of (LaurentPoly, int) pairs, exponents nonzero
Key = tuple  # (mono exponent, Factors)

_EMPTY: Factors = frozenset()


class DenominatorVanishes(ZeroDivisionError):
    """A denominator became identically zero (division or substitution)."""


def merge_factors(a: Factors, b: Factors, sign: int = 1) -> Factors:
    if not b:
        return a
    if not a and sign == 1:
        return b
    d = dict(a)
    for f, e in b:
        v = d.get(f, 0) + sign * e
        if v:
            d[f] = v
        else:
            del d[f]
    return frozenset(d.items())


def _emadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(add, a, b))


class RatFunc:
    """Immutable exact rational function over a :class:`VarTable`."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarTable, terms: Mapping[Key, Scalar] | None = None):
        self.vars = vars
        self.terms = {} if terms is None else terms

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, vars: VarTable, c) -> "RatFunc":
        c = scalar(c)
        return cls(vars, {(vars.zero(), _EMPTY): c} if c else {})

    @classmethod
    def var(cls, vars: VarTable, name: str, power: int = 1) -> "RatFunc":
        return cls(vars, {(vars.unit(name, power), _EMPTY): 1})

    @classmethod
    def monomial(cls, vars: VarTable, exp: Exponent, c=1) -> "RatFunc":
        c = scalar(c)
        return cls(vars, {(tuple(exp), _EMPTY): c} if c else {})

    @classmethod
    def from_poly(cls, p: LaurentPoly, power: int = 1) -> "RatFunc":
        """``p**power`` as a single factored term."""
        if p.is_zero:
            if power < 0:
                raise DenominatorVanishes("zero polynomial in a denominator")
            return cls(p.vars, {})
        c, m, F = p.normalize()
        coeff = scalar(Fraction(c) ** power)
        mono = tuple(x * power for x in m)
        facs = frozenset({(F, power)}) if F is not None and power else _EMPTY
        return cls(p.vars, {(mono, facs): coeff})

    @classmethod
    def ratio(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        return cls.from_poly(num) * cls.from_poly(den, -1)

    @classmethod
    def coerce(cls, vars: VarTable, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return cls.from_poly(x)
        return cls.const(vars, x)

    # -- queries ----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    @property
    def nterms(self) -> int:
        return len(self.terms)

    @property
    def is_single(self) -> bool:
        return len(self.terms) <= 1

    def const_value(self) -> Scalar | None:
        """Scalar value when syntactically constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            (mono, facs), c = next(iter(self.terms.items()))
            if not facs and not any(mono):
                return c
        return None

    def factors(self) -> set[LaurentPoly]:
        out = set()
        for _, facs in self.terms:
            out.update(f for f, _ in facs)
        return out

    def support(self) -> set[int]:
        out = set()
        for mono, facs in self.terms:
            out.update(i for i, k in enumerate(mono) if k)
            for f, _ in facs:
                out |= f.support()
        return out

    def involves(self, name: str) -> bool:
        return self.vars.index(name) in self.support() if name in self.vars else False

    def size(self) -> int:
        """Total number of stored polynomial terms; a cost measure for reports."""
        return sum(1 + sum(len(f) for f, _ in facs) for _, facs in self.terms)

    # -- table handling ---------------------------------------------------
    def embed(self, target: VarTable) -> "RatFunc":
        if target is self.vars:
            return self
        if target == self.vars:
            return RatFunc(target, self.terms)
        pos = self.vars.embedding(target)
        n = len(target)

        def emb(e):
            v = [0] * n
            for i, x in zip(pos, e):
                v[i] = x
            return tuple(v)

        out: dict = {}
        cache: dict = {}
        for (mono, facs), c in self.terms.items():
            mono = emb(mono)
            nf: dict = {}
            coeff = Fraction(c)
            for f, e in facs:
                if f not in cache:
                    cache[f] = f.embed(target).normalize()
                fc, fm, F = cache[f]
                coeff *= Fraction(fc) ** e
                mono = tuple(a + e * b for a, b in zip(mono, fm))
                nf[F] = nf.get(F, 0) + e
            key = (mono, frozenset((F, e) for F, e in nf.items() if e))
            out[key] = scalar(out.get(key, 0) + coeff)
        return RatFunc(target, {k: v for k, v in out.items() if v})

    def restrict(self, target: VarTable) -> "RatFunc":
        """Re-express over a smaller table; dropped variables must not occur."""
        if target == self.vars:
            return self
        pos = target.embedding(self.vars)
        keep = set(pos)
        if any(i not in keep for i in self.support()):
            raise ValueError("cannot drop a variable that still occurs")

        def proj(e):
            return tuple(e[i] for i in pos)

        out = {}
        for (mono, facs), c in self.terms.items():
            nf = frozenset(
                (LaurentPoly(target, {proj(e): v for e, v in f.terms.items()}), k) for f, k in facs
            )
            out[(proj(mono), nf)] = c
        return RatFunc(target, out)

    def _align(self, other: "RatFunc") -> tuple["RatFunc", "RatFunc"]:
        if self.vars is other.vars:
            return self, other
        if self.vars == other.vars:
            return self, RatFunc(self.vars, other.terms)
        u = self.vars.union(other.vars)
        return self.embed(u), other.embed(u)

    def _lift(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.vars, other)
        return None

    # -- arithmetic -------------------------------------------------------
    def _as_factor(self) -> "RatFunc":
        """Fold a sum of bare monomials into one factored term; else unchanged."""
        if len(self.terms) < 2 or any(facs for _, facs in self.terms):
            return self
        return RatFunc.from_poly(LaurentPoly(self.vars, {m: c for (m, _), c in self.terms.items()}))

    def __add__(self, other) -> "RatFunc":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for k, c in b.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = scalar(v)
            else:
                out.pop(k, None)
        return RatFunc(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "RatFunc":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = scalar(other)
            if not other:
                return RatFunc(self.vars, {})
            return RatFunc(self.vars, {k: scalar(c * other) for k, c in self.terms.items()})
        other = self._lift(other)
        if other is None:
            return NotImplemented
        a, b = self._align(other)
        a, b = a._as_factor(), b._as_factor()
        out: dict = {}
        for (ma, fa), ca in a.terms.items():
            for (mb, fb), cb in b.terms.items():
                key = (_emadd(ma, mb), merge_factors(fa, fb))
                out[key] = out.get(key, 0) + ca * cb
        return RatFunc(a.vars, {k: scalar(v) for k, v in out.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.terms:
            raise DenominatorVanishes("division by the zero rational function")
        f = self._as_factor()
        if len(f.terms) == 1:
            (mono, facs), c = next(iter(f.terms.items()))
            return RatFunc(f.vars, {
                (tuple(-x for x in mono), frozenset((G, -e) for G, e in facs)): scalar(Fraction(1) / c)
            })
        num, (dmono, dfacs) = self.together()
        if num.is_zero:
            raise DenominatorVanishes("division by the zero rational function")
        c, m, F = num.normalize()
        # the common denominator moves up: flip its exponents
        facs = frozenset((G, -e) for G, e in dfacs)
        if F is not None:
            facs = merge_factors(facs, frozenset({(F, -1)}))
        mono = tuple(a - b for a, b in zip(dmono, m))
        return RatFunc(self.vars, {(mono, facs): scalar(Fraction(1) / c)})

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DenominatorVanishes("division by zero scalar")
            return self * (Fraction(1) / Fraction(other))
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RatFunc.const(self.vars, 1)
        if len(self.terms) == 1:
            (mono, facs), c = next(iter(self.terms.items()))
            return RatFunc(self.vars, {
                (tuple(x * k for x in mono), frozenset((f, e * k) for f, e in facs)): scalar(Fraction(c) ** k)
            })
        result = RatFunc.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- equality ---------------------------------------------------------
    def is_zero(self, seed: int = 0) -> bool:
        from .zerotest import is_zero

        return is_zero(self, seed=seed)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- normal forms -------------------------------------------------------
    def together(self) -> tuple[LaurentPoly, Key]:
        """Expand over the least common factored denominator.

        Returns ``(N, (mono, facs))`` with ``self == N / (mono * prod F**-e)``;
        every exponent in ``facs`` is negative.  Factors shared by all terms
        in the numerator are expanded as well (no factorization is attempted).
        """
        zero = self.vars.zero()
        if not self.terms:
            return LaurentPoly(self.vars, {}), (zero, _EMPTY)
        lcd: dict = {}
        for _, facs in self.terms:
            for f, e in facs:
                if e < 0 and lcd.get(f, 0) < -e:
                    lcd[f] = -e
        powcache: dict = {}

        def fpow(f, k):
            key = (f, k)
            if key not in powcache:
                powcache[key] = f ** k
            return powcache[key]

        total = LaurentPoly(self.vars, {})
        for (mono, facs), c in self.terms.items():
            d = dict(facs)
            acc = LaurentPoly.monomial(self.vars, mono, c)
            for f, k in lcd.items():
                d[f] = d.get(f, 0) + k
            for f, k in sorted(d.items(), key=lambda fk: len(fk[0])):
                if k:
                    acc = acc * fpow(f, k)
            total = total + acc
        dfacs = frozenset((f, -k) for f, k in lcd.items())
        return total, (zero, dfacs)

    def numerator(self) -> LaurentPoly:
        return self.together()[0]

    def denominator(self) -> LaurentPoly:
        _, (mono, facs) = self.together()
        d = LaurentPoly.monomial(self.vars, tuple(-x for x in mono))
        for f, e in facs:
            d = d * f ** (-e)
        return d

    def compact(self, cancel: bool = True) -> "RatFunc":
        """Rewrite as a single factored term, cancelling known factors."""
        if len(self.terms) <= 1:
            return self
        num, (dmono, dfacs) = self.together()
        if num.is_zero:
            return RatFunc(self.vars, {})
        dd = dict(dfacs)
        if cancel:
            for f in sorted(dd, key=lambda p: (len(p), p.to_str())):
                while dd.get(f, 0) < 0:
                    q = num.exact_div(f)
                    if q is None:
                        break
                    num = q
                    dd[f] += 1
                    if not dd[f]:
                        del dd[f]
        c, m, F = num.normalize()
        if F is not None:
            dd[F] = dd.get(F, 0) + 1
            if not dd[F]:
                del dd[F]
        mono = tuple(a + b for a, b in zip(dmono, m))
        return RatFunc(self.vars, {(mono, frozenset(dd.items())): c})

    # -- evaluation -------------------------------------------------------
    def point(self, values: Mapping[str, Scalar]) -> tuple:
        """Dense point tuple from a name -> value mapping (missing names -> None)."""
        return tuple(None if n not in values else Fraction(values[n]) for n in self.vars.names)

    def evaluate(self, values: Mapping[str, Scalar] | Sequence) -> Fraction:
        """Exact value at a point; raises :class:`DenominatorVanishes` on a pole."""
        pt = self.point(values) if isinstance(values, Mapping) else tuple(values)
        return evaluate_terms(self.terms, pt)

    # -- substitution -------------------------------------------------------
    def subs(self, bindings: Mapping[str, object]) -> "RatFunc":
        """Substitute variables by scalars, Laurent polynomials or rational functions."""
        return substitute(self, bindings)

    def derivative(self, name: str) -> "RatFunc":
        i = self.vars.index(name)
        out = RatFunc(self.vars, {})
        for (mono, facs), c in self.terms.items():
            base = RatFunc(self.vars, {(mono, facs): c})
            if mono[i]:
                out = out + base * RatFunc.monomial(self.vars, self.vars.unit(name, -1), mono[i])
            for f, e in facs:
                df = f.derivative(i)
                if df.is_zero:
                    continue
                out = out + base * RatFunc.from_poly(df) * RatFunc.from_poly(f, -1) * e
        return out

    # -- printing ---------------------------------------------------------
    def to_str(self) -> str:
        """Canonical ``N / D`` rendering, diff-stable across runs.

        Each factor is printed with nonnegative exponents and a positive
        leading coefficient; the compensating monomial and sign are collected
        in front.
        """
        if not self.terms:
            return "0"
        if len(self.terms) == 1:
            return _single_str(self.vars, *next(iter(self.terms.items())))
        single = self.compact()
        if not single.terms:
            return "0"
        return _single_str(self.vars, *next(iter(single.terms.items())))

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()})"

    def __str__(self) -> str:
        return self.to_str()


def _paren(p: LaurentPoly) -> str:
    s = p.to_str()
    return s if len(p) <= 1 else f"({s})"


def _display_factor(f: LaurentPoly) -> tuple[Scalar, Exponent, LaurentPoly]:
    """``f = c * m * g`` with g having nonnegative exponents and positive leading term."""
    n = len(f.vars)
    lo = tuple(min(e[i] for e in f.terms) for i in range(n))
    g = f.scale(1, tuple(-x for x in lo))
    vals = [Fraction(v) for v in g.terms.values()]
    den = lcm(*(v.denominator for v in vals))
    content = Fraction(gcd(*(v.numerator * (den // v.denominator) for v in vals)), den)
    if g.sorted_terms()[0][1] < 0:
        content = -content
    return content, lo, g.scale(1 / content)


def _single_str(vars: VarTable, key: Key, c: Scalar) -> str:
    mono, facs = key
    coeff = Fraction(c)
    mono = list(mono)
    num, den = [], []
    for f, e in facs:
        fc, lo, g = _display_factor(f)
        coeff *= Fraction(fc) ** e
        mono = [a + e * b for a, b in zip(mono, lo)]
        if e > 0:
            num.append((g, e))
        else:
            den.append((g, -e))
    pos = tuple(max(x, 0) for x in mono)
    neg = tuple(max(-x, 0) for x in mono)
    ns = _product_str(LaurentPoly.monomial(vars, pos, scalar(coeff.numerator)), num)
    ds = _product_str(LaurentPoly.monomial(vars, neg, scalar(coeff.denominator)), den)
    return ns if ds == "1" else f"{_group(ns)} / {_group(ds, product=True)}"


def _group(s: str, product: bool = False) -> str:
    """Parenthesize when ``s`` has a top-level sum or quotient (or product)."""
    ops = "+/*" if product else "+/"
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and i > 0 and (ch in ops or (ch == "-" and s[i - 1] == " ")):
            return f"({s})"
    return s


def _product_str(unit: LaurentPoly, facs: list) -> str:
    parts = []
    facs = sorted(facs, key=lambda fe: fe[0].to_str())
    c, e = unit.single()
    lead = LaurentPoly.monomial(unit.vars, e, c).to_str()
    for f, k in facs:
        parts.append(_paren(f) + (f"^{k}" if k != 1 else ""))
    if not parts:
        return lead
    if lead == "1" and len(facs) == 1 and facs[0][1] == 1:
        return facs[0][0].to_str()
    if lead == "1":
        return "*".join(parts)
    if lead == "-1":
        return "-" + "*".join(parts)
    return lead + "*" + "*".join(parts)


# ---------------------------------------------------------------------------
# term-level helpers shared with the zero test


def evaluate_terms(terms: Mapping[Key, Scalar], pt: Sequence) -> Fraction:
    cache: dict = {}
    total = Fraction(0)
    for (mono, facs), c in terms.items():
        v = Fraction(c)
        for x, k in zip(pt, mono):
            if k:
                if x is None:
                    raise ValueError("point does not bind every variable")
                v *= x ** k
        for f, e in facs:
            fv = cache.get(f)
            if fv is None:
                fv = cache[f] = f.evaluate(pt)
            if not fv:
                if e < 0:
                    raise DenominatorVanishes("pole at evaluation point")
                v = Fraction(0)
                break
            v *= fv ** e
        total += v
    return total


def _subs_poly(p: LaurentPoly, images: dict, target: VarTable) -> RatFunc:
    """Image of one polynomial under ``images`` (index -> LaurentPoly|RatFunc)."""
    idx = [i for i in images if p.involves(i)]
    if not idx:
        return RatFunc.from_poly(p.embed(target))
    mono_imgs = {}
    poly_imgs = {}
    rat_imgs = {}
    for i in idx:
        img = images[i]
        if isinstance(img, LaurentPoly) and img.is_monomial:
            mono_imgs[i] = img.single()
        elif isinstance(img, LaurentPoly) and not img.is_zero:
            poly_imgs[i] = img
        elif isinstance(img, LaurentPoly):
            mono_imgs[i] = (0, target.zero())
            poly_imgs[i] = img  # zero image: handled by the generic path
        else:
            rat_imgs[i] = img
    pe = p.embed(target)
    if not poly_imgs and not rat_imgs:
        zero_vars = [i for i, (c, _) in mono_imgs.items() if c == 0]
        if not zero_vars:
            return RatFunc.from_poly(pe.subs_monomial(mono_imgs))
    # generic path: sum over terms
    if rat_imgs or any(isinstance(images[i], LaurentPoly) and images[i].is_zero for i in idx):
        total = RatFunc(target, {})
        for e, c in pe.terms.items():
            t = RatFunc.const(target, c)
            rest = list(e)
            for i in idx:
                k = e[i]
                rest[i] = 0
                if k:
                    img = images[i]
                    img = img if isinstance(img, RatFunc) else RatFunc.from_poly(img)
                    t = t * img ** k
            t = t * RatFunc.monomial(target, tuple(rest))
            total = total + t
        return total
    lows = {i: pe.degree_range(i)[0] for i in poly_imgs}
    num = LaurentPoly(target, {})
    powcache: dict = {}
    for e, c in pe.terms.items():
        rest = list(e)
        coeff = Fraction(c)
        for i in poly_imgs:
            rest[i] = 0
        for i, (ci, mi) in mono_imgs.items():
            k = e[i]
            rest[i] = 0
            if k:
                coeff *= Fraction(ci) ** k
                rest = [a + k * b for a, b in zip(rest, mi)]
        t = LaurentPoly.monomial(target, tuple(rest), coeff)
        for i, g in poly_imgs.items():
            k = e[i] - lows[i]
            if k:
                key = (i, k)
                if key not in powcache:
                    powcache[key] = g ** k
                t = t * powcache[key]
        num = num + t
    out = RatFunc.from_poly(num)
    for i, g in poly_imgs.items():
        if lows[i]:
            out = out * RatFunc.from_poly(g, lows[i])
    return out


def substitute(f: RatFunc, bindings: Mapping[str, object]) -> RatFunc:
    target = f.vars
    for name, img in bindings.items():
        if name not in target:
            target = target.extend([name])
        if not isinstance(img, (int, Fraction)):
            target = target.union(img.vars)
    f = f.embed(target)
    images: dict = {}
    for name, img in bindings.items():
        i = target.index(name)
        if isinstance(img, (int, Fraction)):
            images[i] = LaurentPoly.const(target, img)
        elif isinstance(img, LaurentPoly):
            images[i] = img.embed(target)
        elif isinstance(img, RatFunc):
            img = img.embed(target)
            if not img.terms:
                images[i] = LaurentPoly(target, {})
            elif len(img.terms) == 1 and not next(iter(img.terms))[1]:
                (mono, _), c = next(iter(img.terms.items()))
                images[i] = LaurentPoly.monomial(target, mono, c)
            else:
                images[i] = img
        else:
            raise TypeError(f"cannot substitute {type(img).__name__}")
    out = RatFunc(target, {})
    cache: dict = {}
    mono_idx = list(images)
    for (mono, facs), c in f.terms.items():
        t = RatFunc.const(target, c)
        if any(mono[i] for i in mono_idx):
            m = LaurentPoly.monomial(target, mono)
            t = t * _subs_poly(m, images, target)
        else:
            t = t * RatFunc.monomial(target, mono)
        for F, e in facs:
            img = cache.get(F)
            if img is None:
                img = cache[F] = _subs_poly(F, images, target)
            if e < 0 and img.is_single and not img.terms:
                raise DenominatorVanishes(f"substitution sends the factor {F} to zero")
            t = t * (img ** e if e > 0 else _safe_pow(img, e, F))
        out = out + t
    return out


def _safe_pow(img: RatFunc, e: int, F: LaurentPoly) -> RatFunc:
    try:
        return img ** e
    except ZeroDivisionError as exc:
        raise DenominatorVanishes(f"substitution sends the factor {F} to zero") from exc


def rsum(items: Iterable[RatFunc], vars: VarTable) -> RatFunc:
    total = RatFunc(vars, {})
    for x in items:
        total = total + x
    return total


def rprod(items: Iterable[RatFunc], vars: VarTable) -> RatFunc:
    total = RatFunc.const(vars, 1)
    for x in items:
        total = total * x
    return total
