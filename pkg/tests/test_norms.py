import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from sinefold.errors import DomainError, ResourceError
from sinefold.norms import (EMINYAN_MU, RHO_HIGH, RHO_LOW, abs_product, admissible,
                            grid_sup, l1_norm, l1_quadrature, l1_upper_bound_check, l2_norm,
                            l2_quadrature, norm_report, parseval_sharp, phi, rho_estimate,
                            sup_norm, x0_witness, x0_witness_residual)

G = math.sqrt(3) / 2


def test_sup_r2_n1():
    rep = sup_norm(2, 1)
    assert rep.sup_estimate >= 0.75
    assert rep.sup_estimate <= G
    assert 0 < rep.argmax < math.pi


@pytest.mark.parametrize("n", range(0, 13))
def test_gelfond_sandwich(n):
    rep = sup_norm(2, n)
    assert G ** (n + 1) - 1e-9 <= rep.sup_estimate <= G**n + 1e-9
    assert rep.sup_upper <= G**n + 1e-9
    assert rep.passed


def test_sup_r2_n10_window():
    rep = sup_norm(2, 10)
    assert 0.2054 < G**11 <= rep.sup_estimate <= G**10 < 0.2374


@pytest.mark.parametrize("r", [3, 5, 7])
def test_odd_r_sup_is_one(r):
    rep = sup_norm(r, 5)
    assert abs(rep.sup_estimate - 1) <= 1e-9
    assert float(abs_product(math.pi / 2, r, 5)) == pytest.approx(1.0, abs=1e-12)
    assert rep.passed


@pytest.mark.parametrize("r", [2, 4, 6, 8])
@pytest.mark.parametrize("n", [0, 3, 6, 10])
def test_even_r_sandwich(r, n):
    c = math.cos(math.pi / (2 * r + 2))
    rep = sup_norm(r, n)
    assert c ** (n + 1) - 1e-9 <= rep.sup_estimate <= c**n + 1e-9
    assert rep.passed


@pytest.mark.parametrize("r,n", [(2, 4), (2, 8), (4, 4), (6, 3), (8, 3)])
def test_branch_and_bound_against_grid(r, n):
    grid_value, _ = grid_sup(r, n)
    assert sup_norm(r, n).sup_estimate == pytest.approx(grid_value, rel=1e-9)


def test_x0_witness():
    assert x0_witness(2) == pytest.approx(math.pi / 3)
    assert x0_witness(4) == pytest.approx(2 * math.pi / 5)
    assert x0_witness(6) == pytest.approx(3 * math.pi / 7)
    with pytest.raises(DomainError):
        x0_witness(3)
    for r in (2, 4, 6, 8):
        assert x0_witness_residual(r, 8) <= 1e-12


@pytest.mark.parametrize("r", range(2, 9))
def test_phi_maximum_at_multiple_of_pi_over_r_plus_1(r):
    x = np.linspace(1e-6, math.pi - 1e-6, 400_001)
    v = phi(x, r)
    xm = x[np.argmax(v)]
    k = round(xm * (r + 1) / math.pi)
    assert abs(xm - k * math.pi / (r + 1)) < 1e-4


def test_l1_small_cases():
    assert l1_norm(0)[0] == pytest.approx(2.0, rel=1e-14)
    assert l1_norm(1)[0] == pytest.approx(4 / 3, rel=1e-14)


@pytest.mark.parametrize("n", [2, 5, 8, 10, 12])
def test_l1_against_quadrature(n):
    value, err = l1_norm(n)
    assert err < 1e-9
    assert value == pytest.approx(l1_quadrature(n), rel=1e-12)


def test_l1_against_scipy_quad():
    n = 4
    f = lambda t: abs(np.prod([math.sin(2**k * t) for k in range(n + 1)]))
    pts = [j * math.pi / 2**n for j in range(1, 2**n)]
    val, _ = integrate.quad(f, 0, math.pi, points=pts, limit=200, epsabs=1e-14)
    assert l1_norm(n)[0] == pytest.approx(val, rel=1e-10)


def test_l1_ratio_bracket():
    vals = [l1_norm(n)[0] for n in range(6, 16)]
    ratios = [b / a for a, b in zip(vals, vals[1:])]
    assert all(0.60 < q < 0.72 for q in ratios)


def test_l1_cap():
    with pytest.raises(ResourceError):
        l1_norm(21)


def test_rho_fit():
    fit = rho_estimate(8, 14)
    assert RHO_LOW < fit.rho_hat < RHO_HIGH
    assert fit.rho_hat <= math.sqrt(2) / 2 <= G
    assert fit.r_squared > 0.9999
    assert fit.rho_hat == pytest.approx(math.exp(fit.slope))
    assert fit.to_dict()["eminyan_mu"] == EMINYAN_MU
    with pytest.raises(DomainError):
        rho_estimate(3, 10)
    with pytest.raises(DomainError):
        rho_estimate(9, 9)


def test_admissible_examples():
    assert admissible([1, 2, 4, 8])
    assert not admissible([1, 1])
    assert not admissible([1, 2, 3])
    with pytest.raises(ResourceError):
        admissible([1] * 25)


@given(st.lists(st.integers(1, 200), min_size=1, max_size=8))
def test_admissible_matches_brute_force(weights):
    sums = set()
    ok = True
    for j in range(2 ** len(weights)):
        s = sum(w if (j >> q) & 1 else -w for q, w in enumerate(weights))
        ok &= s not in sums
        sums.add(s)
    assert admissible(weights) == ok


def test_mean_square_values():
    # mean of sin^2 over a period is 1/2
    assert l2_norm([1]) == 0.5
    val, _ = integrate.quad(lambda t: math.sin(t) ** 2, 0, math.pi)
    assert val == pytest.approx(math.pi / 2)
    assert l2_norm([1, 2, 4]) == pytest.approx(l2_quadrature([1, 2, 4]), rel=1e-12)
    assert float(l2_norm([1, 2, 4, 8, 16], "cos")) == pytest.approx(1 / 32)
    assert l2_quadrature([1, 2, 4, 8, 16], "cos") == pytest.approx(1 / 32, rel=1e-12)


def test_sharp_parseval_value_is_half_the_mean_square():
    for w in ([1], [1, 2, 4], [1, 3, 9, 27]):
        assert parseval_sharp(len(w)) * 2 == l2_norm(w)


def _random_admissible(rng, max_len):
    while True:
        L = int(rng.integers(1, max_len + 1))
        w = sorted(int(v) for v in rng.choice(np.arange(1, 64), L, replace=False))
        if admissible(w):
            return w


def test_l2_against_quadrature_random():
    rng = np.random.default_rng(23)
    for _ in range(30):
        w = _random_admissible(rng, 10)
        for kind in ("sin", "cos"):
            assert l2_quadrature(w, kind) == pytest.approx(float(l2_norm(w, kind)), rel=1e-9)


def test_l2_against_scipy_quad():
    w = [1, 3, 7]
    f = lambda t: np.prod([math.sin(k * t) for k in w]) ** 2
    val, _ = integrate.quad(f, 0, math.pi, limit=200, epsabs=1e-14)
    assert val / math.pi == pytest.approx(float(l2_norm(w)), rel=1e-10)


def test_l2_rejects_inadmissible():
    with pytest.raises(DomainError):
        l2_norm([1, 2, 3])
    with pytest.raises(DomainError):
        l2_norm([1, 2], "tan")


def test_l1_bound_examples():
    two = l1_upper_bound_check([1, 2])
    assert two.value == pytest.approx(4 / 3, rel=1e-12)
    assert two.passed
    one = l1_upper_bound_check([1])
    assert one.value == pytest.approx(2.0) and one.upper == pytest.approx(math.pi / math.sqrt(2))
    assert one.passed
    # the sharper form pi / 2^(1 + N/2) fails already at lambda = (1, 2)
    assert l1_upper_bound_check([1, 2], sharp=True).upper == pytest.approx(1.1107, abs=1e-4)
    assert not l1_upper_bound_check([1, 2], sharp=True).passed


def test_l1_bound_random_admissible():
    rng = np.random.default_rng(29)
    for _ in range(50):
        assert l1_upper_bound_check(_random_admissible(rng, 8)).passed


def test_l1_bound_dyadic_implies_rate():
    w = [2**q for q in range(11)]
    chk = l1_upper_bound_check(w)
    assert chk.passed
    assert chk.value == pytest.approx(l1_norm(10)[0], rel=1e-10)


def test_norm_report_roundtrip():
    rep = norm_report(6)
    d = rep.to_dict()
    assert d["factor_count"] == 7 and d["passed"]
    assert {b["name"] for b in d["bound_checks"]} >= {"even_r_sandwich", "gelfond", "l1_parseval"}
    for b in rep.bound_checks:
        if b.passed:
            assert b.lower - b.tolerance <= b.value <= b.upper + b.tolerance
