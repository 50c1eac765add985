"""Sine-power moments and Wallis' limit 2^(4n) / (n C(2n,n)^2) -> pi."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

import mpmath
import numpy as np
from scipy import integrate

from .errors import DomainError, ResourceError

MOMENT_CAP = 10**4
COUNT_CAP = 14
RECURRENCE_CAP = 200
PARTIAL_CAP = 10**5


@dataclass(frozen=True)
class MomentValue:
    """int_0^{pi/2} sin^(2m) x dx = rational_part * pi."""

    m: int
    rational_part: Fraction

    @property
    def value(self) -> float:
        return float(self.rational_part) * math.pi


def sin_moment(m: int) -> MomentValue:
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > MOMENT_CAP:
        raise ResourceError(f"m={m} exceeds cap {MOMENT_CAP}")
    return MomentValue(m, Fraction(math.comb(2 * m, m), 2 ** (2 * m + 1)))


def sin_power_quad(n: int) -> float:
    """I_n = int_0^{pi/2} sin^n x dx by adaptive quadrature."""
    val, _ = integrate.quad(lambda x: math.sin(x) ** n, 0.0, math.pi / 2,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def sin_power_exact(n: int) -> mpmath.mpf:
    """I_n from the closed forms for even and odd n."""
    if n % 2 == 0:
        q = sin_moment(n // 2).rational_part
        return mpmath.mpf(q.numerator) / q.denominator * mpmath.pi
    m = (n - 1) // 2
    return mpmath.mpf(4**m * math.factorial(m) ** 2) / math.factorial(2 * m + 1)


def central_count(m: int, chunk: int = 1 << 20) -> int:
    """#{j < 2^(2m) : s(j) = m}, counted by enumeration."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > COUNT_CAP:
        raise ResourceError(f"enumeration limited to m <= {COUNT_CAP}")
    total = 1 << (2 * m)
    count = 0
    for start in range(0, total, chunk):
        j = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        count += int(np.count_nonzero(np.bitwise_count(j) == m))
    return count


@dataclass(frozen=True)
class RecurrenceReport:
    n_max: int
    max_recurrence_residual: float
    max_product_residual: float
    ratios_monotone: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return (self.max_recurrence_residual <= self.tolerance
                and self.max_product_residual <= self.tolerance
                and self.ratios_monotone)

    def to_dict(self) -> dict:
        return {"n_max": self.n_max, "max_recurrence_residual": self.max_recurrence_residual,
                "max_product_residual": self.max_product_residual,
                "ratios_monotone": self.ratios_monotone, "tolerance": self.tolerance,
                "passed": self.passed}


def moment_recurrence_check(n_max: int, tol: float = 1e-9) -> RecurrenceReport:
    """Check (n+2) I_{n+2} = (n+1) I_n and (n+1) I_{n+1} I_n = pi/2 with quadrature values.

    Also checks I_{n+2}/I_n <= I_{n+1}/I_n <= 1 and that I_{n+1}/I_n increases.
    """
    if not 0 <= n_max <= RECURRENCE_CAP:
        raise ResourceError(f"n_max must lie in [0, {RECURRENCE_CAP}]")
    vals = [sin_power_quad(k) for k in range(n_max + 3)]
    rec = max(abs((k + 2) * vals[k + 2] - (k + 1) * vals[k]) / ((k + 1) * vals[k])
              for k in range(n_max + 1))
    prod = max(abs((k + 1) * vals[k + 1] * vals[k] - math.pi / 2) / (math.pi / 2)
               for k in range(n_max + 1))
    ratios = [vals[k + 1] / vals[k] for k in range(n_max + 2)]
    monotone = all(vals[k + 2] / vals[k] <= ratios[k] * (1 + 1e-12) and ratios[k] <= 1
                   for k in range(n_max + 1))
    monotone &= all(b >= a * (1 - 1e-12) for a, b in zip(ratios, ratios[1:]))
    return RecurrenceReport(n_max, rec, prod, monotone, tol)


def wallis_partial(n: int, dps: int = 60) -> mpmath.mpf:
    """2^(4n) / (n C(2n,n)^2), exact rational rounded once to ``dps`` digits."""
    if n < 1:
        raise DomainError("n must be positive")
    if n > PARTIAL_CAP:
        raise ResourceError(f"n={n} exceeds cap {PARTIAL_CAP}")
    num = 1 << (4 * n)
    den = n * math.comb(2 * n, n) ** 2
    with mpmath.workdps(dps):
        return mpmath.mpf(num) / mpmath.mpf(den)


def wallis_product(terms: int, dps: int = 60) -> mpmath.mpf:
    """Partial Wallis product prod_{k<=terms} (2k)^2 / ((2k-1)(2k+1)), tends to pi/2."""
    p = Fraction(1)
    for k in range(1, terms + 1):
        p *= Fraction(4 * k * k, 4 * k * k - 1)
    with mpmath.workdps(dps):
        return mpmath.mpf(p.numerator) / p.denominator


def wallis_rows(ns: Iterable[int], dps: int = 60) -> list[tuple[int, mpmath.mpf, mpmath.mpf]]:
    rows = []
    with mpmath.workdps(dps):
        for n in ns:
            v = wallis_partial(n, dps)
            rows.append((n, v, v - mpmath.pi))
    return rows


def write_csv(rows, fh: TextIO, digits: int = 30) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "wallis_partial", "error_vs_pi"])
    for n, v, err in rows:
        writer.writerow([n, mpmath.nstr(v, digits), mpmath.nstr(err, 10)])
