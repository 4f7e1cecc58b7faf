"""Exact zero test for sums of factored rational terms.

Expanding a localization sum over its common denominator is hopeless beyond
tiny ranks, so the test works one variable at a time instead.  Pick a
variable ``v`` in which every denominator factor is linear (``A v^d + B
v^(d+1)`` with monomial ``A``, ``B``) and every term stays bounded as ``v``
goes to 0 and to infinity.  Such a sum is ``c + sum_p r_p / (v - p)``, so it
vanishes exactly when every residue ``r_p`` and the value ``c`` at infinity
vanish.  Each of those is again a sum of factored terms in one variable
fewer, and the recursion bottoms out either in a trivial sum or in a sum
small enough to expand.

A random rational evaluation runs first and settles the nonzero case with a
witness.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping

from .laurent import LaurentPoly, scalar
from .ratfunc import DenominatorVanishes, RatFunc, evaluate_terms, merge_factors

#: Expand directly when the estimated numerator has at most this many terms.
BRUTE_LIMIT = 4000

_EMPTY = frozenset()


def is_zero(f: RatFunc, seed: int = 0) -> bool:
    """Exact decision of ``f == 0``."""
    if not f.terms:
        return True
    if len(f.terms) == 1:
        return False
    if find_witness(f, seed=seed) is not None:
        return False
    return _Prover(f.vars).zero(f.terms)


def find_witness(f: RatFunc, seed: int = 0, tries: int = 2) -> dict | None:
    """A point where ``f`` is defined and nonzero, or None if none was found."""
    rng = random.Random(seed)
    names = f.vars.names
    for _ in range(tries):
        for _attempt in range(8):
            pt = tuple(Fraction(rng.randint(2, 10**6), rng.randint(1, 997)) for _ in names)
            try:
                val = evaluate_terms(f.terms, pt)
            except DenominatorVanishes:
                continue
            break
        else:
            continue
        if val:
            return {"point": dict(zip(names, pt)), "value": val}
    return None


def witness_str(w: Mapping) -> str:
    pt = ", ".join(f"{k}={v}" for k, v in sorted(w["point"].items()))
    return f"value {w['value']} at {pt}"


class _Prover:
    def __init__(self, vars):
        self.vars = vars
        self.memo: dict = {}
        self.lin: dict = {}
        self.lead: dict = {}

    # -- entry --------------------------------------------------------------
    def zero(self, terms: dict) -> bool:
        terms = _strip_common(terms)
        if not terms:
            return True
        if len(terms) == 1:
            return False
        key = frozenset(terms.items())
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        res = self._decide(terms)
        self.memo[key] = res
        return res

    def _decide(self, terms: dict) -> bool:
        if _expansion_size(terms) <= BRUTE_LIMIT:
            return self._brute(terms)
        plan = self._choose_variable(terms)
        if plan is None:
            return self._brute(terms)
        v, roots = plan
        for F in roots:
            res = self._residue(terms, v, F)
            if res is None:
                return self._brute(terms)
            if not self.zero(res):
                return False
        return self.zero(self._value_at_infinity(terms, v))

    def _brute(self, terms: dict) -> bool:
        return RatFunc(self.vars, terms).together()[0].is_zero

    # -- variable choice ------------------------------------------------------
    def _linear(self, F: LaurentPoly, v: int):
        """``(d, A, B)`` when ``F = A v^d + B v^(d+1)`` with B a monomial.

        A and B are returned as polynomials free of ``v``; the root
        ``-A/B`` is then a Laurent polynomial.
        """
        key = (F, v)
        if key not in self.lin:
            out = None
            lo, hi = F.degree_range(v)
            if hi == lo + 1:
                parts = F.split(v)
                A, B = parts[lo], parts[hi]
                if B.is_monomial:
                    out = (lo, A, B)
            self.lin[key] = out
        return self.lin[key]

    def _choose_variable(self, terms: dict):
        support = set()
        for mono, facs in terms:
            support.update(i for i, k in enumerate(mono) if k)
            for f, _ in facs:
                support |= f.support()
        best = None
        for v in sorted(support):
            roots = set()
            ok = True
            for mono, facs in terms:
                o0 = o8 = mono[v]
                for f, e in facs:
                    lo, hi = f.degree_range(v)
                    o0 += e * lo
                    o8 += e * hi
                    if e < 0 and lo != hi:
                        if e != -1 or self._linear(f, v) is None:
                            ok = False
                            break
                        roots.add(f)
                if not ok or o0 < 0 or o8 > 0:
                    ok = False
                    break
            if ok and (best is None or len(roots) < len(best[1])):
                best = (v, roots)
                if not roots:
                    break
        if best is None:
            return None
        v, roots = best
        return v, sorted(roots, key=lambda f: f.to_str())

    # -- residues and limits ------------------------------------------------
    def _residue(self, terms: dict, v: int, F: LaurentPoly) -> dict | None:
        d, A, B = self._linear(F, v)
        if not A.is_monomial:
            return self._residue_general(terms, v, F, d, A, B)
        (ac, ae), (bc, be) = A.single(), B.single()
        pc = Fraction(-ac) / bc
        pe = tuple(a - b for a, b in zip(ae, be))
        # 1 / (p^d * B)
        scale = Fraction(1) / (pc**d * bc)
        scale_e = tuple(-(d * p + b) for p, b in zip(pe, be))
        image = {v: (pc, pe)}
        cache: dict = {}
        out: dict = {}
        for (mono, facs), c in terms.items():
            if (F, -1) not in facs:
                continue
            coeff = Fraction(c) * scale
            k = mono[v]
            m = list(mono)
            m[v] = 0
            if k:
                coeff *= pc**k
                m = [a + k * p for a, p in zip(m, pe)]
            m = [a + s for a, s in zip(m, scale_e)]
            nf: dict = {}
            dead = False
            for G, e in facs:
                if G == F:
                    continue
                if not G.involves(v):
                    nf[G] = nf.get(G, 0) + e
                    continue
                img = cache.get(G)
                if img is None:
                    g = G.subs_monomial(image)
                    img = cache[G] = None if g.is_zero else g.normalize()
                if img is None:
                    if e < 0:
                        return None
                    dead = True
                    break
                gc, ge, GF = img
                coeff *= Fraction(gc) ** e
                m = [a + e * b for a, b in zip(m, ge)]
                if GF is not None:
                    nf[GF] = nf.get(GF, 0) + e
            if dead:
                continue
            key = (tuple(m), frozenset((G, e) for G, e in nf.items() if e))
            val = out.get(key, 0) + coeff
            if val:
                out[key] = scalar(val)
            else:
                out.pop(key, None)
        return out

    def _residue_general(self, terms, v, F, d, A, B) -> dict | None:
        """Residue at a polynomial root ``p = -A/B`` via rational substitution."""
        bc, be = B.single()
        p = A.scale(Fraction(-1) / bc, tuple(-x for x in be))
        name = self.vars.names[v]
        scale = RatFunc.from_poly(p, -d) * RatFunc.monomial(self.vars, tuple(-x for x in be), Fraction(1) / bc)
        total = RatFunc(self.vars, {})
        for (mono, facs), c in terms.items():
            if (F, -1) not in facs:
                continue
            rest = RatFunc(self.vars, {(mono, merge_factors(facs, frozenset({(F, -1)}), -1)): c})
            try:
                total = total + rest.subs({name: p})
            except DenominatorVanishes:
                return None
        return (total * scale).terms

    def _lead(self, G: LaurentPoly, v: int):
        key = (G, v)
        if key not in self.lead:
            self.lead[key] = G.split(v)[G.degree_range(v)[1]].normalize()
        return self.lead[key]

    def _value_at_infinity(self, terms: dict, v: int) -> dict:
        out: dict = {}
        for (mono, facs), c in terms.items():
            order = mono[v] + sum(e * f.degree_range(v)[1] for f, e in facs)
            if order:
                continue
            coeff = Fraction(c)
            m = list(mono)
            m[v] = 0
            nf: dict = {}
            for G, e in facs:
                if not G.involves(v):
                    nf[G] = nf.get(G, 0) + e
                    continue
                gc, ge, GF = self._lead(G, v)
                coeff *= Fraction(gc) ** e
                m = [a + e * b for a, b in zip(m, ge)]
                if GF is not None:
                    nf[GF] = nf.get(GF, 0) + e
            key = (tuple(m), frozenset((G, e) for G, e in nf.items() if e))
            val = out.get(key, 0) + coeff
            if val:
                out[key] = scalar(val)
            else:
                out.pop(key, None)
        return out


def _strip_common(terms: dict) -> dict:
    """Divide every term by the common monomial and by factors shared by all terms.

    A factor is stripped only when it occurs in every term with exponents of
    one sign, so denominators that distinguish terms stay in place.
    """
    if len(terms) <= 1:
        return terms
    keys = list(terms)
    low = list(keys[0][0])
    common = dict(keys[0][1])
    for mono, facs in keys[1:]:
        low = [min(a, b) for a, b in zip(low, mono)]
        fd = dict(facs)
        for f in list(common):
            e, g = common[f], fd.get(f, 0)
            if e > 0 and g > 0:
                common[f] = min(e, g)
            elif e < 0 and g < 0:
                common[f] = max(e, g)
            else:
                del common[f]
    if not any(low) and not common:
        return terms
    strip = frozenset(common.items())
    out: dict = {}
    for (mono, facs), c in terms.items():
        key = (tuple(a - b for a, b in zip(mono, low)), merge_factors(facs, strip, -1))
        out[key] = out.get(key, 0) + c
    return {k: scalar(v) for k, v in out.items() if v}


def _expansion_size(terms: dict) -> int:
    """Upper bound on the number of numerator terms produced by ``together``."""
    lcd: dict = {}
    for _, facs in terms:
        for f, e in facs:
            if e < 0 and lcd.get(f, 0) < -e:
                lcd[f] = -e
    total = 0
    for _, facs in terms:
        d = dict(facs)
        size = 1
        for f, k in lcd.items():
            d[f] = d.get(f, 0) + k
        for f, k in d.items():
            size *= len(f) ** k
            if size > BRUTE_LIMIT:
                return size
        total += size
        if total > BRUTE_LIMIT:
            return total
    return total
