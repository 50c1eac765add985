import cmath
import io
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from sinefold.digits import u_value
from sinefold.equidist import (GOLDEN, SILVER, QuadraticPisot, Verdict, cos_product,
                               dilated_powers_mod1, equidist_experiment, experiment_samples,
                               nearest_int_norm, pisot_power_norms, product_identity_check,
                               star_discrepancy, weyl_sum, write_samples_csv, zero_classifier)
from sinefold.errors import DomainError, PrecisionError, ResourceError


def test_nearest_int_norm_examples():
    assert nearest_int_norm(2.7) == pytest.approx(0.3)
    assert nearest_int_norm(0.5) == 0.5
    assert nearest_int_norm(-1.25) == 0.25
    assert nearest_int_norm(Fraction(7, 3)) == Fraction(1, 3)
    with pytest.raises(DomainError):
        nearest_int_norm(float("inf"))


@given(st.floats(-1e6, 1e6))
def test_nearest_int_norm_range(x):
    d = nearest_int_norm(x)
    assert 0 <= d <= 0.5
    assert d == pytest.approx(min(abs(x - math.floor(x)), abs(math.ceil(x) - x)), abs=1e-9)


def test_weyl_sum_examples():
    assert abs(weyl_sum(1, 2**6, [Fraction(1, 2)] * 6)) < 1e-15
    assert weyl_sum(1, 1, [0.123]) == 1
    lam = [0.377 * q for q in range(16)]
    w = weyl_sum(1, 2**16, lam)
    assert abs(w) == pytest.approx(math.prod(abs(math.cos(math.pi * x)) for x in lam), abs=1e-12)


def test_weyl_sum_against_direct_sum():
    rng = np.random.default_rng(2)
    lam = list(rng.uniform(-3, 3, 9))
    for N in (1, 5, 100, 511, 512):
        direct = sum(cmath.exp(2j * math.pi * 3 * u_value(j, lam)) for j in range(N)) / N
        assert weyl_sum(3, N, lam) == pytest.approx(direct, abs=1e-11)


def test_weyl_sum_errors():
    with pytest.raises(DomainError):
        weyl_sum(0, 4, [0.1, 0.2])
    with pytest.raises(DomainError):
        weyl_sum(1, 9, [0.1, 0.2, 0.3])


def test_product_identity_examples():
    lam0 = 0.3141
    assert abs(math.cos(math.pi * lam0)) == pytest.approx(abs((1 + cmath.exp(2j * math.pi * lam0)) / 2))
    assert product_identity_check(1, 1, [lam0]) < 1e-15
    rng = np.random.default_rng(4)
    lam = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-99, 99, 12), rng.integers(1, 50, 12))]
    assert product_identity_check(2, 12, lam) < 1e-11
    half = [0.3, Fraction(1, 2), 0.7, 0.1]
    assert weyl_sum(1, 16, half) == pytest.approx(0, abs=1e-15)
    assert cos_product(1, half, 4) == pytest.approx(0, abs=1e-15)


def test_product_identity_200_triples():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 15))
        ell = int(rng.integers(1, 40)) * int(rng.choice([-1, 1]))
        worst = max(worst, product_identity_check(ell, n, rng.uniform(-5, 5, n)))
    assert worst <= 1e-10


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=64), min_size=2, max_size=9),
       st.integers(1, 5))
def test_weyl_shift(lam, ell):
    # u(2j, lam) = u(j, T lam): the even-index phases are exactly those of the shifted weights
    n = len(lam) - 1
    N = 2**n
    even = [ell * u_value(2 * j, lam) % 1 for j in range(N)]
    shifted = [ell * u_value(j, lam[1:]) % 1 for j in range(N)]
    assert even == shifted
    # splitting j < 2N by parity: W(2N, lam) = W(N, T lam) (1 + e(l lam_0)) / 2
    lhs = weyl_sum(ell, 2 * N, lam)
    rhs = weyl_sum(ell, N, lam[1:]) * (1 + cmath.exp(2j * math.pi * float(ell * lam[0] % 1))) / 2
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_classifier_examples():
    assert zero_classifier(1, [Fraction(1, 2)] * 10).verdict is Verdict.DEFINITELY_ZERO
    phis = [float(GOLDEN.theta()) ** q for q in range(40)]
    c = zero_classifier(1, phis)
    assert c.verdict is Verdict.INCONCLUSIVE
    roots = [q * math.sqrt(2) for q in range(1, 1025)]
    c = zero_classifier(1, roots)
    assert c.verdict is Verdict.DIVERGING
    assert c.square_sum > 25.0
    with pytest.raises(DomainError):
        zero_classifier(1, [0.1], Q=2)


def test_pisot_norms_examples():
    assert float(GOLDEN.theta()) ** 4 == pytest.approx(6.854, abs=1e-3)
    assert GOLDEN.traces(5)[4] == 7
    assert float(pisot_power_norms(GOLDEN, 1, 5)[4]) == pytest.approx(0.1459, abs=1e-4)
    conj = abs(1 - float(GOLDEN.theta()))
    norms = pisot_power_norms(GOLDEN, 1, 101)
    for q in range(2, 101):
        assert float(norms[q]) == pytest.approx(conj**q, abs=1e-12)
    silver = pisot_power_norms(SILVER, 1, 100)
    assert float(sum(v**2 for v in silver)) < 0.5


def test_pisot_norms_against_direct_512_bit():
    for p, x in ((GOLDEN, 1), (GOLDEN, 3), (SILVER, 2), (QuadraticPisot(3, 1), 1)):
        got = pisot_power_norms(p, x, 201)
        with mpmath.workprec(512):
            th = p.theta(512)
            for q in range(201):
                direct = x * th**q
                assert abs(got[q] - abs(direct - mpmath.nint(direct))) < mpmath.mpf(10) ** -20


def test_pisot_norms_errors():
    with pytest.raises(DomainError):
        pisot_power_norms(QuadraticPisot(1, -6), 1, 10)  # roots 3 and -2
    with pytest.raises(ResourceError):
        pisot_power_norms(GOLDEN, 1, 501)
    with pytest.raises(DomainError):
        QuadraticPisot(1, 1)


def brute_star_discrepancy(xs):
    xs = [x % 1.0 for x in xs]
    N = len(xs)
    worst = 0.0
    for t in xs + [1.0]:
        below = sum(x < t for x in xs) / N
        upto = sum(x <= t for x in xs) / N
        worst = max(worst, abs(below - t), abs(upto - t))
    return worst


def test_star_discrepancy_examples():
    assert star_discrepancy([0.25, 0.75]) == 0.25
    assert star_discrepancy([0.0]) == 1.0
    N = 20
    assert star_discrepancy([(k + 0.5) / N for k in range(N)]) == pytest.approx(1 / (2 * N))
    with pytest.raises(DomainError):
        star_discrepancy([])


@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=12))
def test_star_discrepancy_brute_force(xs):
    d = star_discrepancy(xs)
    assert d == pytest.approx(brute_star_discrepancy(xs), abs=1e-12)
    assert 0 <= d <= 1


# dyadic grid points, so that adding an integer is exact in floating point
@given(st.lists(st.integers(0, 2**20 - 1), min_size=1, max_size=12), st.integers(-5, 5))
def test_star_discrepancy_integer_shift(ks, k):
    xs = [v / 2**20 for v in ks]
    assert star_discrepancy([x + k for x in xs]) == star_discrepancy(xs)
    assert star_discrepancy([Fraction(v, 2**20) + k for v in ks]) == star_discrepancy(xs)


def test_experiment_contrast():
    gold = equidist_experiment("golden", 1, 16)
    root = equidist_experiment("sqrt2", 1, 16)
    root10 = equidist_experiment("sqrt2", 1, 10)
    assert gold.pisot and not root.pisot
    assert gold.star_discrepancy > 0.05
    assert root.star_discrepancy < root10.star_discrepancy
    assert gold.star_discrepancy > 3 * root.star_discrepancy
    assert gold.classification.verdict is Verdict.INCONCLUSIVE


def test_experiment_weyl_matches_cos_product():
    rep = equidist_experiment("sqrt2", 1, 12)
    for ell in (1, 2, 3):
        assert rep.weyl_mean_abs[ell] == pytest.approx(rep.cos_product[ell], abs=1e-10)


def test_experiment_x_zero():
    assert equidist_experiment("golden", 0, 8).star_discrepancy == 1.0


def test_experiment_errors():
    with pytest.raises(DomainError):
        equidist_experiment("golden", 1, 21)
    with pytest.raises(DomainError):
        equidist_experiment("0.5", 1, 4)
    with pytest.raises(PrecisionError):
        dilated_powers_mod1(lambda prec: mpmath.sqrt(2) if prec else 0, 1, 400, prec=80)


def test_pisot_path_agrees_with_generic_path():
    fast, _ = dilated_powers_mod1(GOLDEN, Fraction(3, 2), 60)
    slow, _ = dilated_powers_mod1(lambda prec: GOLDEN.theta(prec), Fraction(3, 2), 60)
    assert np.allclose(fast, slow, atol=1e-12)


def test_samples_csv():
    buf = io.StringIO()
    write_samples_csv(experiment_samples("golden", 1, 3), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "j,sample" and len(lines) == 9
