"""Multigrade (Prouhet-Tarry-Escott) equalities from signed digit sums.

For integer weights lambda_0..lambda_{L-1} put v_j = sum_q sigma_q(j) lambda_q
and R_e = sum_{j<2^L} (-1)^s(j) v_j^e.  Expanding the product of
sinh(x lambda_k) in powers of x shows that

* R_e = 0 for every e < L,
* R_e = 0 whenever e and L have different parity,
* R_L = (-1)^L L! 2^L prod(lambda).

Splitting the v_j by the parity of s(j) therefore gives two multisets with
equal e-th power sums for all e < L.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .digits import digit_sum, signed_sums_exact
from .errors import DomainError, ResourceError

WEIGHT_CAP = 24
PARTITION_CAP = 20


@dataclass
class MultigradeWitness:
    weights: tuple[int, ...]
    residuals: dict[int, int]
    verified_range: list[int] = field(default_factory=list)
    pivot_expected: int = 0

    @property
    def length(self) -> int:
        return len(self.weights)

    @property
    def vanishing_ok(self) -> bool:
        L = self.length
        return all(r == 0 for e, r in self.residuals.items() if e < L or (e - L) % 2)

    @property
    def pivot_ok(self) -> bool | None:
        if self.length not in self.residuals:
            return None
        return self.residuals[self.length] == self.pivot_expected

    def to_dict(self) -> dict:
        return {
            "lambda": list(self.weights),
            "residuals": {str(e): r for e, r in sorted(self.residuals.items())},
            "verified_range": self.verified_range,
            "pivot_check": {"exponent": self.length, "expected": self.pivot_expected,
                            "ok": self.pivot_ok},
            "vanishing_ok": self.vanishing_ok,
        }


def taylor_pivot(weights: Sequence[int]) -> int:
    """(-1)^L L! 2^L prod(lambda): the first residual that need not vanish."""
    L = len(weights)
    return (-1) ** L * math.factorial(L) * 2**L * math.prod(int(w) for w in weights)


def _signed_value_counts(weights: Sequence[int]) -> Counter:
    """Net Thue-Morse weight of each distinct signed sum v."""
    sums = signed_sums_exact(weights)
    net: Counter = Counter()
    for j, v in enumerate(sums):
        net[v] += -1 if digit_sum(j) & 1 else 1
    return net


def multigrade_residuals(weights: Sequence[int], e_max: int | None = None) -> MultigradeWitness:
    weights = tuple(int(w) for w in weights)
    L = len(weights)
    if L < 1:
        raise DomainError("need at least one weight")
    if L > WEIGHT_CAP:
        raise ResourceError(f"at most {WEIGHT_CAP} weights, got {L}")
    if e_max is None:
        e_max = L
    if not 0 <= e_max <= 2 * L:
        raise DomainError(f"e_max must lie in [0, {2 * L}]")
    net = _signed_value_counts(weights)
    residuals = {e: 0 for e in range(e_max + 1)}
    for v, c in net.items():
        if c == 0:
            continue
        p = c
        for e in range(e_max + 1):
            residuals[e] += p
            p *= v
    witness = MultigradeWitness(weights, residuals, pivot_expected=taylor_pivot(weights))
    witness.verified_range = [e for e in range(e_max + 1) if residuals[e] == 0]
    return witness


@dataclass(frozen=True)
class ProuhetPartition:
    n: int
    even_class: tuple[int, ...]
    odd_class: tuple[int, ...]
    power_sums_even: tuple[int, ...]
    power_sums_odd: tuple[int, ...]

    @property
    def equal_below_n(self) -> bool:
        return self.power_sums_even[: self.n] == self.power_sums_odd[: self.n]

    @property
    def differs_at_n(self) -> bool:
        return self.power_sums_even[self.n] != self.power_sums_odd[self.n]

    def to_dict(self) -> dict:
        d = {"n": self.n, "equal_below_n": self.equal_below_n, "differs_at_n": self.differs_at_n,
             "power_sums_even": list(self.power_sums_even),
             "power_sums_odd": list(self.power_sums_odd)}
        if self.n <= 6:
            d["even_class"] = list(self.even_class)
            d["odd_class"] = list(self.odd_class)
        return d


def _power_sums(values: Sequence[int], e_max: int) -> tuple[int, ...]:
    sums = [0] * (e_max + 1)
    for v in values:
        p = 1
        for e in range(e_max + 1):
            sums[e] += p
            p *= v
    return tuple(sums)


def prouhet_partition(n: int) -> ProuhetPartition:
    """Split [0, 2^n) by the parity of s(j); power sums for e = 0..n."""
    if n < 1:
        raise DomainError("n must be positive")
    if n > PARTITION_CAP:
        raise ResourceError(f"n={n} exceeds cap {PARTITION_CAP}")
    even = tuple(j for j in range(1 << n) if not digit_sum(j) & 1)
    odd = tuple(j for j in range(1 << n) if digit_sum(j) & 1)
    return ProuhetPartition(n, even, odd, _power_sums(even, n), _power_sums(odd, n))


@dataclass(frozen=True)
class PTEPair:
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    degree: int  # power sums agree for 0 <= e <= degree

    def to_dict(self) -> dict:
        return {"plus": list(self.plus), "minus": list(self.minus), "degree": self.degree}


def multigrade_from_weights(weights: Sequence[int]) -> PTEPair:
    """The signed sums split by Thue-Morse sign, as two multisets."""
    weights = tuple(int(w) for w in weights)
    if not 1 <= len(weights) <= PARTITION_CAP:
        raise ResourceError(f"need 1..{PARTITION_CAP} weights")
    sums = signed_sums_exact(weights)
    plus = sorted(v for j, v in enumerate(sums) if not digit_sum(j) & 1)
    minus = sorted(v for j, v in enumerate(sums) if digit_sum(j) & 1)
    e_top = 2 * len(weights)
    a, b = _power_sums(plus, e_top), _power_sums(minus, e_top)
    degree = -1
    while degree + 1 <= e_top and a[degree + 1] == b[degree + 1]:
        degree += 1
    return PTEPair(tuple(plus), tuple(minus), degree)
