"""Exact and pointwise checks of the digit-sum generating identities.

``product_poly(n)`` expands prod_{k<n} (1 + a X^(2^k)) with exact integer
coefficients and ``sum_poly(n)`` builds sum_{j<2^n} a^s(j) X^j directly from
digit sums; the two must agree coefficient by coefficient.  The exponential
forms (arbitrary weights lambda_k in place of 2^k) are checked at sampled
complex points, since both sides are finite sums of exponentials.
"""
from __future__ import annotations

import cmath
from typing import Mapping, Sequence

import numpy as np

from .digits import digit_sum, digit_sum_table, signed_sum_table, u_table
from .errors import DomainError, NumericRangeError, ResourceError
from .reports import IdentityCheckReport, make_report, merge_reports

DEFAULT_CAP = 20
DEFAULT_TOL = 1e-10


class BivariatePoly:
    """Sparse polynomial in (a, X) with integer coefficients.

    Keys are ``(degree_in_a, degree_in_X)``; zero coefficients are never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        self.coeffs = {k: int(v) for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def one(cls) -> "BivariatePoly":
        return cls({(0, 0): 1})

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BivariatePoly(out)

    def __mul__(self, other: "BivariatePoly") -> "BivariatePoly":
        out: dict[tuple[int, int], int] = {}
        for (a1, x1), c1 in self.coeffs.items():
            for (a2, x2), c2 in other.coeffs.items():
                key = (a1 + a2, x1 + x2)
                out[key] = out.get(key, 0) + c1 * c2
        return BivariatePoly(out)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        return "BivariatePoly(" + " + ".join(f"{c}*a^{i}*X^{j}" for (i, j), c in terms) + ")"

    @property
    def degree_a(self) -> int:
        return max((i for i, _ in self.coeffs), default=0)

    @property
    def degree_x(self) -> int:
        return max((j for _, j in self.coeffs), default=0)

    def specialize_a(self, a: int) -> list[int]:
        """Substitute an integer for a; return the dense X-coefficient list."""
        out = [0] * (self.degree_x + 1)
        for (i, j), c in self.coeffs.items():
            out[j] += c * a**i
        return out


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n > cap:
        raise ResourceError(f"n={n} exceeds cap {cap}")


def product_poly(n: int, cap: int = DEFAULT_CAP) -> BivariatePoly:
    _check_cap(n, cap)
    p = BivariatePoly.one()
    for k in range(n):
        p = p * BivariatePoly({(0, 0): 1, (1, 1 << k): 1})
    return p


def sum_poly(n: int, cap: int = DEFAULT_CAP) -> BivariatePoly:
    _check_cap(n, cap)
    return BivariatePoly({(digit_sum(j), j): 1 for j in range(1 << n)})


def _poly_mul_dense(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def check_corollary(n: int, a: int, cap: int = DEFAULT_CAP) -> IdentityCheckReport:
    """Exact check of the a = +1 / a = -1 specialisations.

    a = +1: the product equals sum_{j<2^n} X^j, and (1 - X) times it is 1 - X^(2^n).
    a = -1: the product equals sum_{j<2^n} (-1)^s(j) X^j.
    """
    if a not in (1, -1):
        raise DomainError("a must be +1 or -1")
    coeffs = product_poly(n, cap).specialize_a(a)
    size = 1 << n
    coeffs += [0] * (size - len(coeffs))
    if a == 1:
        expected = [1] * size
        telescoped = _poly_mul_dense([1, -1], coeffs)
        closed = [1] + [0] * (size - 1) + [-1]
        extra = max(abs(u - v) for u, v in zip(telescoped, closed))
    else:
        expected = [-1 if digit_sum(j) & 1 else 1 for j in range(size)]
        extra = 0
    residual = max(max(abs(u - v) for u, v in zip(coeffs, expected)), extra)
    name = "corollary_plus" if a == 1 else "corollary_minus"
    return IdentityCheckReport(name, n, float(residual), float(residual), size, 0.0,
                               residual == 0)


def _prepare(n: int, weights: Sequence[complex]) -> np.ndarray:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if len(weights) < n:
        raise DomainError(f"need at least {n} weights, got {len(weights)}")
    return np.asarray(weights[:n], dtype=complex)


def check_step_identity(n: int, a: complex, weights: Sequence[complex], z: complex,
                        tol: float = DEFAULT_TOL) -> IdentityCheckReport:
    """prod_{k<n} (1 + a e^{lambda_k z})  vs  sum_{j<2^n} a^s(j) e^{u(j, lambda) z}."""
    lam = _prepare(n, weights)
    try:
        lhs = complex(1.0)
        for w in lam:
            lhs *= 1 + a * cmath.exp(w * z)
        u = u_table(lam, n, dtype=complex)
        a_pow = _a_powers(a, n)
        with np.errstate(over="raise", invalid="raise"):
            rhs = complex(np.sum(a_pow * np.exp(u * z)))
    except (OverflowError, FloatingPointError) as exc:
        raise NumericRangeError(f"exponential overflow: {exc}") from exc
    return make_report("step", n, abs(lhs - rhs), 1 + max(abs(lhs), abs(rhs)), tol)


def check_general_identity(n: int, a: complex, weights: Sequence[complex], z: complex,
                           tol: float = DEFAULT_TOL) -> IdentityCheckReport:
    """a^n prod_k (e^{lambda_k z} + a^{-1} e^{-lambda_k z})  vs
    sum_j a^s(j) exp((sum_q sigma_q(j) lambda_q) z)."""
    if a == 0:
        raise DomainError("a must be nonzero")
    lam = _prepare(n, weights)
    try:
        lhs = complex(a) ** n
        for w in lam:
            lhs *= cmath.exp(w * z) + cmath.exp(-w * z) / a
        v = signed_sum_table(lam, n, dtype=complex)
        with np.errstate(over="raise", invalid="raise"):
            rhs = complex(np.sum(_a_powers(a, n) * np.exp(v * z)))
    except (OverflowError, FloatingPointError, ZeroDivisionError) as exc:
        raise NumericRangeError(f"exponential overflow: {exc}") from exc
    return make_report("general", n, abs(lhs - rhs), 1 + max(abs(lhs), abs(rhs)), tol)


def _a_powers(a: complex, n: int) -> np.ndarray:
    powers = np.array([complex(a) ** m for m in range(n + 1)])
    return powers[digit_sum_table(n)]


def _unit_disk(rng: np.random.Generator, size=None) -> np.ndarray:
    r = np.sqrt(rng.uniform(0, 1, size))
    t = rng.uniform(0, 2 * np.pi, size)
    return r * np.exp(1j * t)


def sample_identity(which: str, n: int, draws: int, seed: int,
                    tol: float = DEFAULT_TOL) -> IdentityCheckReport:
    """Run the step or general identity at ``draws`` seeded random points.

    a, every lambda_k and z are drawn uniformly from the unit disk.
    """
    check = {"step": check_step_identity, "general": check_general_identity}[which]
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(draws):
        a = complex(_unit_disk(rng))
        if which == "general":
            while abs(a) < 1e-3:
                a = complex(_unit_disk(rng))
        lam = [complex(w) for w in _unit_disk(rng, n)]
        z = complex(_unit_disk(rng))
        reports.append(check(n, a, lam, z, tol))
    return merge_reports(reports)


def minus_one_multiplicity(n: int, cap: int = DEFAULT_CAP) -> int:
    """Largest k such that (1 - X)^k divides the a = -1 product, by synthetic division."""
    coeffs = product_poly(n, cap).specialize_a(-1)
    k = 0
    while any(coeffs):
        # divide by (X - 1): Horner from the top, remainder is the value at X = 1
        quotient, carry = [], 0
        for c in reversed(coeffs):
            carry = carry + c
            quotient.append(carry)
        if quotient[-1] != 0:
            break
        coeffs = list(reversed(quotient[:-1]))
        k += 1
    return k
