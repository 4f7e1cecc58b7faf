import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hsl.localization import GenusSpec, chi_genus, genus_vars
from hsl.qseries import (
    QSeries, crosscheck_diffeq, diffeq_series, maps_genus_series, phi_q, ratfunc_to_q, seeded_point,
)
from hsl.shiftops import PhiProduct

seeds = st.integers(0, 10**6)


def test_phi_half():
    assert phi_q(Fraction(1, 2), 0, 1).coeffs == {0: Fraction(1, 2), 1: Fraction(-1, 4)}


def test_phi_zero_argument():
    assert phi_q(0, 0, 5).coeffs == {0: 1}


def test_phi_negative_qpower_prepends_factors():
    v = Fraction(3, 7)
    lhs = phi_q(v, -2, 6)
    rhs = QSeries({0: 1, -2: -v}) * QSeries({0: 1, -1: -v}) * phi_q(v, 0, 9)
    assert lhs.agrees(rhs, 6) is None


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_functional_equation(seed):
    rng = random.Random(seed)
    v = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
    assert (phi_q(v, 1, 8) * (1 - v)).agrees(phi_q(v, 0, 8), 8) is None


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_q_binomial(seed):
    # phi(t v q)/phi(v q) = sum_d (v q)^d prod_{j<=d} (1 - t q^(j-1))/(1 - q^j); u = v q makes the sum finite
    rng = random.Random(seed)
    v = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))
    t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    N = 7
    lhs = phi_q(t * v, 1, N) * phi_q(v, 1, N + 2).inverse(N)
    rhs = QSeries({}, N)
    for d in range(N + 1):
        term = QSeries({d: v**d})
        for j in range(1, d + 1):
            term = term * QSeries({0: 1, j - 1: -t} if j > 1 else {0: 1 - t})
            term = term * QSeries({0: 1, j: -1}).inverse(N)
        rhs = rhs + term
    assert lhs.agrees(rhs, N) is None


def test_maps_series_at_t0():
    pt = {"y1": Fraction(1, 3), "x1": Fraction(2), "s": Fraction(0)}
    w = Fraction(1, 6)
    series = maps_genus_series(1, 1, pt, 4)
    assert series.coefficient(0) == 1 / (1 - w)
    assert series.agrees(phi_q(w, 0, 6).inverse(4), 4) is None


def test_maps_series_at_y0():
    pt = {"y1": Fraction(0), "y2": Fraction(0), "x1": Fraction(5), "s": Fraction(3)}
    assert maps_genus_series(2, 1, pt, 5).agrees(QSeries.const(1), 5) is None


def test_maps_series_order0():
    pt = {"y1": Fraction(2, 5), "x1": Fraction(7, 3), "s": Fraction(3, 2)}
    w, t = Fraction(6, 35), Fraction(9, 4)
    assert maps_genus_series(1, 1, pt, 0).coeffs == {0: (1 - t * w) / (1 - w)}


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from([("y1", 1), ("y1", -1), ("x1", 1), ("y2", -1), ("x2", 1)]))
def test_shift_coherence(seed, shift):
    rng = random.Random(seed)
    pt = seeded_point(2, 2, rng)
    N = 5
    name, a = shift
    shifted = maps_genus_series(2, 2, pt, N, {name: a})
    mult = PhiProduct.plain(2, 2).multiplier({name: a})
    assert shifted.agrees(maps_genus_series(2, 2, pt, N + 4) * ratfunc_to_q(mult, pt, N + 4), N) is None


def test_precision_is_tracked():
    s = QSeries({0: 1, 3: 2}, 4) * QSeries({0: 1, 1: 1}, 2)
    assert s.order == 2
    with pytest.raises(ValueError):
        s.coefficient(3)
    with pytest.raises(ValueError):
        s.agrees(QSeries.const(1), 3)


@pytest.mark.parametrize("k,n,m,order", [(1, 1, 1, 6), (1, 2, 2, 4), (0, 3, 2, 4), (2, 3, 1, 4)])
def test_crosscheck_examples(k, n, m, order):
    assert crosscheck_diffeq(k, n, m, order=order).status == "pass"


def test_crosscheck_122_matches_flop_sums():
    pt = seeded_point(2, 2, random.Random(3))
    N = 4
    lhs, rhs = diffeq_series(1, 2, 2, pt, N)
    base = maps_genus_series(2, 2, pt, N + 4)
    V = genus_vars(2, 2)
    assert lhs.agrees(base * ratfunc_to_q(chi_genus(GenusSpec("X", 1, 2, 2), V), pt, N + 4), N) is None
    assert rhs.agrees(base * ratfunc_to_q(chi_genus(GenusSpec("Xdual", 1, 2, 2), V), pt, N + 4), N) is None


def test_k0_sides_identical():
    pt = seeded_point(3, 2, random.Random(1))
    lhs, rhs = diffeq_series(0, 3, 2, pt, 4)
    assert lhs.coeffs == rhs.coeffs
