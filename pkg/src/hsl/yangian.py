"""The matrix S(x) over the Weyl algebra and the shifted Yangian checks.

``S(x) = M(z_n) ... M(z_1)`` with ``M(z) = [[x - D, z^-1], [-z, 0]]``.  The
suites below verify the RTT relation, ``qdet S = 1``, the Gauss
decomposition shape with shift ``(n, -n)``, commutativity of the Toda
Hamiltonians read off from ``S_11`` and the coproduct factorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product

from .algebra.laurent import LaurentPoly
from .checks import CheckResult, failure, params, stopwatch
from .weyl import CENTRAL, InvXSeries, Mat2Weyl, WeylElem


def local_factor(n: int, i: int, x: str = "x") -> Mat2Weyl:
    """``M(z_i) = [[x - D_i, z_i^-1], [-z_i, 0]]``."""
    X = WeylElem.central(n, x)
    return Mat2Weyl([[X - WeylElem.D(n, i), WeylElem.z(n, i, -1)], [-WeylElem.z(n, i), WeylElem.zero(n)]])


def build_S(n: int, indices=None, x: str = "x") -> Mat2Weyl:
    """Ordered product of local factors, highest index leftmost.

    ``indices`` restricts the product to a subset of ``1..n`` (all by default);
    the ambient Weyl algebra always has ``n`` pairs of generators.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    idx = sorted(indices if indices is not None else range(1, n + 1), reverse=True)
    one, zero = WeylElem.const(n, 1), WeylElem.zero(n)
    S = Mat2Weyl([[one, zero], [zero, one]])
    for i in idx:
        S = S @ local_factor(n, i, x)
    return S


# ---------------------------------------------------------------------------
# RTT


@dataclass(frozen=True)
class Mat4Rat:
    """``(x1 - x2) Id - eps P`` on ``V (x) V`` with basis order 11, 12, 21, 22.

    Entries are central polynomials; the R-matrix needs no denominators
    once the normalization ``1 / (x1 - x2 - eps)`` is dropped from both sides.
    """

    entries: tuple

    @classmethod
    def r_matrix(cls) -> "Mat4Rat":
        x1 = LaurentPoly.var(CENTRAL, "x1")
        x2 = LaurentPoly.var(CENTRAL, "x2")
        eps = LaurentPoly.var(CENTRAL, "eps")
        rows = []
        for a, b in product(range(2), repeat=2):
            row = []
            for c, d in product(range(2), repeat=2):
                v = LaurentPoly.zero(CENTRAL)
                if (a, b) == (c, d):
                    v = v + x1 - x2
                if (a, b) == (d, c):
                    v = v - eps
                row.append(v)
            rows.append(tuple(row))
        return cls(tuple(rows))

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]


def _tensor_products(A: Mat2Weyl, B: Mat2Weyl, swap: bool):
    """4x4 matrix ``(A (x) 1)(1 (x) B)``, or ``(1 (x) B)(A (x) 1)`` when ``swap``.

    Entry ``(ab, cd)`` is ``A_ac B_bd`` (resp. ``B_bd A_ac``).
    """
    out = []
    for a, b in product(range(2), repeat=2):
        row = []
        for c, d in product(range(2), repeat=2):
            row.append(B[b, d] * A[a, c] if swap else A[a, c] * B[b, d])
        out.append(row)
    return out


def _r_times(R: Mat4Rat, M, left: bool, n: int):
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            acc = WeylElem.zero(n)
            for k in range(4):
                if left and not R[i, k].is_zero:
                    acc = acc + WeylElem.const(n, R[i, k]) * M[k][j]
                if not left and not R[k, j].is_zero:
                    acc = acc + M[i][k] * WeylElem.const(n, R[k, j])
            row.append(acc)
        out.append(row)
    return out


def rtt_sides(S1: Mat2Weyl, S2: Mat2Weyl, n: int):
    """``R S_1(x1) S_2(x2)`` and ``S_2(x2) S_1(x1) R`` as 4x4 Weyl matrices."""
    R = Mat4Rat.r_matrix()
    lhs = _r_times(R, _tensor_products(S1, S2, swap=False), True, n)
    rhs = _r_times(R, _tensor_products(S1, S2, swap=True), False, n)
    return lhs, rhs


def verify_rtt(n: int, S: Mat2Weyl | None = None) -> CheckResult:
    """RTT relation for ``S(x)`` with independent spectral parameters ``x1, x2``."""
    prm = params(n=n)
    with stopwatch() as sw:
        S = S if S is not None else build_S(n)
        S1 = S.subs_central({"x": LaurentPoly.var(CENTRAL, "x1")})
        S2 = S.subs_central({"x": LaurentPoly.var(CENTRAL, "x2")})
        lhs, rhs = rtt_sides(S1, S2, n)
        bad = [(i, j) for i in range(4) for j in range(4) if lhs[i][j] != rhs[i][j]]
        size = sum(lhs[i][j].nterms + rhs[i][j].nterms for i in range(4) for j in range(4))
    if bad:
        i, j = bad[0]
        res = failure("rtt", prm, f"entry ({i},{j}) differs: {(lhs[i][j] - rhs[i][j]).to_str()}", sw["ms"])
        res.terms = size
        return res
    return CheckResult("rtt", prm, "pass", elapsed_ms=sw["ms"], terms=size, detail="16 entries agree")


# ---------------------------------------------------------------------------
# quantum determinant


def qdet(T: Mat2Weyl) -> WeylElem:
    """``T_22(x) T_11(x - eps) - T_12(x) T_21(x - eps)``."""
    shift = {"x": LaurentPoly.var(CENTRAL, "x") - LaurentPoly.var(CENTRAL, "eps")}
    return T[1, 1] * T[0, 0].subs_central(shift) - T[0, 1] * T[1, 0].subs_central(shift)


def qdet_S(n: int) -> WeylElem:
    return qdet(build_S(n))


def verify_qdet(n: int) -> CheckResult:
    prm = params(n=n)
    with stopwatch() as sw:
        q = qdet_S(n)
    if q.const_value() == 1:
        return CheckResult("qdet", prm, "pass", elapsed_ms=sw["ms"], terms=q.nterms, detail="qdet S(x) = 1")
    return failure("qdet", prm, f"qdet S(x) = {q.to_str()}", sw["ms"])


# ---------------------------------------------------------------------------
# Gauss decomposition


@dataclass
class GaussData:
    e: InvXSeries
    f: InvXSeries
    g1: InvXSeries
    g2: InvXSeries
    order: int


def _shape_ok(s: InvXSeries, lead: int) -> bool:
    """``s = x^lead (1 + O(1/x))``: nothing above ``x^lead``, coefficient exactly 1 there."""
    return s.top == lead and s.coeffs[lead].const_value() == 1


def gauss_decompose(n: int, order: int) -> tuple[GaussData, CheckResult]:
    """Gauss factors of ``S(x)`` known to relative order ``order`` in ``1/x``.

    ``g1`` and ``S_12``, ``S_21`` are polynomials; the inverse of ``g1`` is
    taken to precision ``x^(-n-order)`` so every factor is certified through
    ``order`` powers of ``1/x`` below its leading term.
    """
    prm = params(n=n)
    if order < 1:
        raise ValueError("order must be at least 1")
    with stopwatch() as sw:
        S = build_S(n)
        s11, s12, s21, s22 = (InvXSeries.from_weyl(S[i, j]) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
        # S_12 and S_21 have degree n - 1; g2 loses 2(n - 1) orders against g1^-1
        inv = s11.inverse(-3 * n - order + 2)
        e = inv * s12
        f = s21 * inv
        g2 = s22 - s21 * inv * s12
        data = GaussData(e, f, s11, g2, order)
        problems = []
        if not _shape_ok(s11, n):
            problems.append("g1 is not x^n (1 + O(1/x))")
        if e.low is not None and e.low > -1 - order or f.low is not None and f.low > -1 - order:
            problems.append("e, f not certified to the requested order")
        if g2.low is not None and g2.low > -n - order:
            problems.append("g2 not certified to the requested order")
        if e.top is not None and e.top > -1 or f.top is not None and f.top > -1:
            problems.append("e or f is not O(1/x)")
        if not _shape_ok(g2, -n):
            problems.append("g2 is not x^-n (1 + O(1/x))")
        # round trip: [[1,0],[f,1]] diag(g1, g2) [[1,e],[0,1]]
        rebuilt = {
            (0, 0): s11,
            (0, 1): s11 * e,
            (1, 0): f * s11,
            (1, 1): g2 + f * s11 * e,
        }
        for (i, j), series in rebuilt.items():
            want = InvXSeries.from_weyl(S[i, j])
            if not series.agrees_with(want, series.low if series.low is not None else -10**9):
                problems.append(f"round trip fails in entry ({i + 1},{j + 1})")
            elif series.low is not None and series.low > n - 1 - order:
                problems.append(f"round trip of entry ({i + 1},{j + 1}) not certified")
        size = sum(c.nterms for s in (e, f, g2) for c in s.coeffs.values())
    if problems:
        res = failure("gauss", prm, "; ".join(problems), sw["ms"])
    else:
        res = CheckResult(
            "gauss", prm, "pass", elapsed_ms=sw["ms"], terms=size,
            detail=f"shift (n, -n) certified to order {order}",
        )
    res.extra = {"order": order}
    return data, res


# ---------------------------------------------------------------------------
# Toda


def toda_hamiltonians(n: int) -> tuple[list[WeylElem], CheckResult]:
    """``H_r`` from ``S_11(x) = x^n + sum_r (-1)^r H_r x^(n-r)`` and their brackets."""
    prm = params(n=n)
    with stopwatch() as sw:
        parts = build_S(n)[0, 0].coefficient_in("x")
        if parts.get(n) is None or parts[n].const_value() != 1:
            return [], failure("toda", prm, "S_11 is not monic of degree n", sw["ms"])
        H = [parts.get(n - r, WeylElem.zero(n)) * (-1) ** r for r in range(1, n + 1)]
        bad = [(r + 1, s + 1) for r, s in combinations(range(n), 2) if not H[r].commutator(H[s]).is_zero]
    if bad:
        return H, failure("toda", prm, f"[H_{bad[0][0]}, H_{bad[0][1]}] != 0", sw["ms"])
    return H, CheckResult(
        "toda", prm, "pass", elapsed_ms=sw["ms"], terms=sum(h.nterms for h in H),
        detail=f"{n * (n - 1) // 2} brackets vanish",
    )


# ---------------------------------------------------------------------------
# coproduct


def verify_coproduct(n: int) -> CheckResult:
    """``S`` over ``z_n .. z_1`` equals ``S[{z_n}] S[{z_(n-1) .. z_1}]``."""
    prm = params(n=n)
    with stopwatch() as sw:
        whole = build_S(n)
        split = build_S(n, [n]) @ build_S(n, range(1, n))
    if whole == split:
        return CheckResult("coproduct", prm, "pass", elapsed_ms=sw["ms"])
    return failure("coproduct", prm, "factorized product differs", sw["ms"])


# ---------------------------------------------------------------------------
# random elements for property tests


def random_weyl(n: int, rng: random.Random, nterms: int = 3, max_exp: int = 3) -> WeylElem:
    out = WeylElem.zero(n)
    for _ in range(nterms):
        a = tuple(rng.randint(-max_exp, max_exp) for _ in range(n))
        b = tuple(rng.randint(0, max_exp) for _ in range(n))
        c = LaurentPoly.monomial(CENTRAL, (rng.randint(0, 2), rng.randint(0, 1), 0, 0), rng.randint(-5, 5) or 1)
        out = out + WeylElem(n, {(a, b): c})
    return out
