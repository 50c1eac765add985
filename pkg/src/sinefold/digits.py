"""Binary digit machinery.

Every digit list in this package is stored least significant first:
``digits[q]`` is the coefficient of ``2**q``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class BitExpansion:
    j: int
    digits: tuple[int, ...]
    width: int

    def __post_init__(self):
        if sum(d << q for q, d in enumerate(self.digits)) != self.j:
            raise DomainError(f"digits {self.digits} do not reconstruct {self.j}")
        if len(self.digits) != self.width:
            raise DomainError("digit list length must equal width")


@dataclass(frozen=True)
class SignedDigits:
    sigmas: tuple[int, ...]
    width: int

    def dyadic_sum(self) -> int:
        """sum_q sigma_q 2^q, which equals 2j + 1 - 2^width."""
        return sum(s << q for q, s in enumerate(self.sigmas))


def _check_width(j: int, width: int) -> None:
    if j < 0:
        raise DomainError(f"j must be nonnegative, got {j}")
    if width < 1:
        raise DomainError(f"width must be positive, got {width}")
    if j >> width:
        raise DomainError(f"{j} does not fit in {width} bits")


def bits(j: int, width: int) -> BitExpansion:
    _check_width(j, width)
    return BitExpansion(j, tuple((j >> q) & 1 for q in range(width)), width)


def digit_sum(j: int) -> int:
    if j < 0:
        raise DomainError(f"j must be nonnegative, got {j}")
    return j.bit_count()


def thue_morse(j: int) -> int:
    """(-1)**s(j)."""
    return -1 if digit_sum(j) & 1 else 1


def signed_digits(j: int, width: int) -> SignedDigits:
    _check_width(j, width)
    return SignedDigits(tuple(2 * ((j >> q) & 1) - 1 for q in range(width)), width)


def u_value(j: int, weights: Sequence):
    """Digit-weighted sum sum_q e_q(j) * weights[q].

    The result has the numeric kind of the weights (int, Fraction, mpf, complex...).
    """
    if j < 0:
        raise DomainError(f"j must be nonnegative, got {j}")
    if j.bit_length() > len(weights):
        raise DomainError(f"{j} needs {j.bit_length()} weights, got {len(weights)}")
    total = weights[0] * 0 if len(weights) else 0
    q = 0
    while j:
        if j & 1:
            total = total + weights[q]
        j >>= 1
        q += 1
    return total


# Vectorised tables over all j < 2**n, built by doubling: the block for
# bit k set is the block for bit k clear shifted by the k-th weight.

def digit_sum_table(n: int) -> np.ndarray:
    s = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        s = np.concatenate([s, s + 1])
    return s


def thue_morse_table(n: int) -> np.ndarray:
    t = np.ones(1, dtype=np.int64)
    for _ in range(n):
        t = np.concatenate([t, -t])
    return t


def u_table(weights: Sequence, n: int | None = None, dtype=float) -> np.ndarray:
    """u(j, weights) for every j < 2**n (n defaults to len(weights))."""
    n = len(weights) if n is None else n
    u = np.zeros(1, dtype=dtype)
    for k in range(n):
        u = np.concatenate([u, u + weights[k]])
    return u


def signed_sum_table(weights: Sequence, n: int | None = None, dtype=float) -> np.ndarray:
    """sum_q sigma_q(j) weights[q] for every j < 2**n."""
    n = len(weights) if n is None else n
    v = np.zeros(1, dtype=dtype)
    for k in range(n):
        v = np.concatenate([v - weights[k], v + weights[k]])
    return v


def signed_sums_exact(weights: Sequence[int]) -> list[int]:
    """Integer version of :func:`signed_sum_table`, no overflow."""
    v = [0]
    for w in weights:
        v = [x - w for x in v] + [x + w for x in v]
    return v
