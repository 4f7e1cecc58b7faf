"""Sparse multivariate Laurent polynomials with exact rational coefficients.

A polynomial maps dense integer exponent vectors (ordered by a
:class:`VarTable`) to nonzero coefficients.  Coefficients are ``int`` when
integral and :class:`fractions.Fraction` otherwise; Python's mixed arithmetic
keeps the common integer case fast.

Example (table ``(y1, y2)``)::

    1 - y2/y1   ->  {(0, 0): 1, (-1, 1): -1}
"""

from __future__ import annotations

from fractions import Fraction
from operator import add, sub
from typing import Mapping, Sequence, Union

from .vartable import VarTable

Scalar = Union[int, Fraction]
Exponent = tuple


def scalar(c) -> Scalar:
    """Canonical scalar: Fractions with unit denominator collapse to int."""
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _eadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(add, a, b))


def _esub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(sub, a, b))


def _escale(a: Exponent, k: int) -> Exponent:
    return tuple(x * k for x in a)


class LaurentPoly:
    """Immutable Laurent polynomial over Q."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[Exponent, Scalar] | None = None):
        self.vars = vars
        self.terms = {} if terms is None else terms
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars: VarTable) -> "LaurentPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: VarTable, c) -> "LaurentPoly":
        c = scalar(c)
        return cls(vars, {vars.zero(): c} if c else {})

    @classmethod
    def var(cls, vars: VarTable, name: str, power: int = 1) -> "LaurentPoly":
        return cls(vars, {vars.unit(name, power): 1})

    @classmethod
    def monomial(cls, vars: VarTable, exp: Exponent, c=1) -> "LaurentPoly":
        c = scalar(c)
        return cls(vars, {tuple(exp): c} if c else {})

    @classmethod
    def from_dict(cls, vars: VarTable, terms: Mapping[Exponent, Scalar]) -> "LaurentPoly":
        out = {}
        for e, c in terms.items():
            c = scalar(c)
            if c:
                out[tuple(e)] = c
        return cls(vars, out)

    # -- basic queries ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def const_value(self) -> Scalar | None:
        """The scalar value if this is a constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            e, c = next(iter(self.terms.items()))
            if not any(e):
                return c
        return None

    def single(self) -> tuple[Scalar, Exponent]:
        (e, c), = self.terms.items()
        return c, e

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = self._hash = hash(frozenset(self.terms.items()))
        return h

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                return self.const_value() == other
            return NotImplemented
        if self.vars is not other.vars and self.vars != other.vars:
            a, b = _align(self, other)
            return a.terms == b.terms
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()})"

    def __str__(self) -> str:
        return self.to_str()

    # -- table handling ---------------------------------------------------
    def embed(self, target: VarTable) -> "LaurentPoly":
        if target is self.vars or target == self.vars:
            return self if target is self.vars else LaurentPoly(target, self.terms)
        pos = self.vars.embedding(target)
        n = len(target)
        out = {}
        for e, c in self.terms.items():
            v = [0] * n
            for i, x in zip(pos, e):
                v[i] = x
            out[tuple(v)] = c
        return LaurentPoly(target, out)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(self.vars, other)

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        a, b = _align(self, other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = scalar(v) if isinstance(v, Fraction) else v
            else:
                out.pop(e, None)
        return LaurentPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, (LaurentPoly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = scalar(other)
            if not other:
                return LaurentPoly(self.vars, {})
            return LaurentPoly(self.vars, {e: scalar(c * other) for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = _align(self, other)
        if not a.terms or not b.terms:
            return LaurentPoly(a.vars, {})
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        get = out.get
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly(a.vars, {e: scalar(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            c, e = self.single()
            return LaurentPoly(self.vars, {_escale(e, k): scalar(Fraction(1) / c ** (-k))})
        result = LaurentPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar, exp: Exponent | None = None) -> "LaurentPoly":
        """Multiply by the monomial ``c * vars**exp``."""
        c = scalar(c)
        if not c:
            return LaurentPoly(self.vars, {})
        if exp is None or not any(exp):
            if c == 1:
                return self
            return LaurentPoly(self.vars, {e: scalar(v * c) for e, v in self.terms.items()})
        return LaurentPoly(self.vars, {_eadd(e, exp): scalar(v * c) for e, v in self.terms.items()})

    # -- evaluation and substitution -------------------------------------
    def evaluate(self, values: Sequence) -> Fraction:
        """Evaluate at a full point (one scalar per table variable)."""
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for v, k in zip(values, e):
                if k:
                    t *= v ** k
            total += t
        return total

    def subs_monomial(self, images: Mapping[int, tuple[Scalar, Exponent]]) -> "LaurentPoly":
        """Substitute variable ``i -> c_i * m_i`` for the indices in ``images``."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            coeff = Fraction(c) if images else c
            for i, (ci, mi) in images.items():
                k = e[i]
                if k:
                    ne[i] -= k
                    if ci != 1:
                        coeff *= Fraction(ci) ** k
                    ne = [a + k * b for a, b in zip(ne, mi)]
            key = tuple(ne)
            out[key] = out.get(key, 0) + coeff
        return LaurentPoly(self.vars, {e: scalar(c) for e, c in out.items() if c})

    # -- structure in one variable ----------------------------------------
    def degree_range(self, i: int) -> tuple[int, int]:
        ks = [e[i] for e in self.terms]
        return (min(ks), max(ks)) if ks else (0, 0)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def support(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(j for j, k in enumerate(e) if k)
        return out

    def split(self, i: int) -> dict[int, "LaurentPoly"]:
        """Coefficients of powers of variable ``i`` (with that variable removed)."""
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[e] = c
        return {k: LaurentPoly(self.vars, d) for k, d in parts.items()}

    def derivative(self, i: int) -> "LaurentPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = scalar(c * k)
        return LaurentPoly(self.vars, out)

    # -- normalization ----------------------------------------------------
    def normalize(self) -> tuple[Scalar, Exponent, "LaurentPoly | None"]:
        """Split into ``c * m * F`` with F monic at its lex-minimal exponent.

        F is None when the polynomial is a single monomial.  Two
        polynomials that differ by a unit ``c * m`` share the same F.
        """
        if not self.terms:
            raise ZeroDivisionError("normalize of the zero polynomial")
        emin = min(self.terms)
        c = self.terms[emin]
        if len(self.terms) == 1:
            return c, emin, None
        inv = Fraction(1) / c if c != 1 else 1
        if any(emin):
            terms = {_esub(e, emin): (scalar(v * inv) if inv != 1 else v) for e, v in self.terms.items()}
        else:
            terms = {e: (scalar(v * inv) if inv != 1 else v) for e, v in self.terms.items()}
        return c, emin, LaurentPoly(self.vars, terms)

    # -- division -----------------------------------------------------------
    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Quotient if ``other`` divides ``self`` in the Laurent ring, else None.

        Uses long division in a variable where ``other`` has a monomial
        leading coefficient; returns None when no such variable exists.
        """
        a, b = _align(self, other)
        if b.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if a.is_zero:
            return a
        if b.is_monomial:
            c, e = b.single()
            return a.scale(Fraction(1) / c, _escale(e, -1))
        for i in sorted(b.support()):
            parts = b.split(i)
            top = max(parts)
            lead = parts[top]
            if not lead.is_monomial:
                continue
            lo = min(parts)
            lc, le = lead.single()
            rem = a
            quot: dict = {}
            base = rem.degree_range(i)[0]
            guard = 0
            while not rem.is_zero:
                rparts = rem.split(i)
                rtop = max(rparts)
                if rtop - top < base - lo:
                    return None
                lead_r = rparts[rtop]
                # lead_r / lead: monomial division on every term
                q_terms = {}
                shift = rtop - top
                for e, c in lead_r.terms.items():
                    ne = list(_esub(e, le))
                    ne[i] += shift
                    q_terms[tuple(ne)] = scalar(Fraction(c) / lc)
                q = LaurentPoly(a.vars, q_terms)
                for e, c in q_terms.items():
                    quot[e] = scalar(quot.get(e, 0) + c)
                rem = rem - q * b
                guard += 1
                if guard > 10_000:
                    return None
            return LaurentPoly(a.vars, {e: c for e, c in quot.items() if c})
        return None

    # -- printing -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        """Terms in graded-lex order (total degree, then lex), descending."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = monomial_str(self.vars, e)
            if mono == "1":
                s = _fmt_scalar(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{_fmt_scalar(c)}*{mono}"
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _fmt_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction):
        return f"({c.numerator}/{c.denominator})"
    return str(c)


def monomial_str(vars: VarTable, e: Exponent) -> str:
    s = []
    for name, k in zip(vars.names, e):
        if k == 1:
            s.append(name)
        elif k:
            s.append(f"{name}^{k}" if k > 0 else f"{name}^({k})")
    return "*".join(s) if s else "1"


def _align(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if a.vars is b.vars:
        return a, b
    if a.vars == b.vars:
        return a, LaurentPoly(a.vars, b.terms)
    u = a.vars.union(b.vars)
    return a.embed(u), b.embed(u)


def align_all(polys: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    if not polys:
        return []
    u = polys[0].vars
    for p in polys[1:]:
        u = u.union(p.vars)
    return [p.embed(u) for p in polys]

