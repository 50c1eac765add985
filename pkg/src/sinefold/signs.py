"""Sign words of P_n(x) = sin x sin 2x ... sin 2^n x on (0, pi).

P_n keeps one sign on each (j pi/2^n, (j+1) pi/2^n); reading these signs
left to right gives a word of length 2^n.  Passing from n to n + 1 replaces
every letter by its image under the morphism + -> +-, - -> -+.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .digits import thue_morse_table
from .errors import DomainError, ResourceError

THUE_MORSE_MORPHISM = {1: (1, -1), -1: (-1, 1)}


@dataclass(frozen=True)
class SignWord:
    n: int
    word: tuple[int, ...]

    def __post_init__(self):
        if len(self.word) != 1 << self.n:
            raise DomainError(f"a sign word for n={self.n} has length {1 << self.n}")

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.word)


def apply_morphism(word: Sequence[int], mapping: Mapping[int, Sequence[int]]) -> tuple[int, ...]:
    return tuple(letter for s in word for letter in mapping[s])


def morphism_word(n: int) -> SignWord:
    """n-fold image of the one-letter word + under + -> +-, - -> -+."""
    if not 0 <= n <= 24:
        raise ResourceError("n must lie in [0, 24]")
    w = np.ones(1, dtype=np.int8)
    for _ in range(n):
        nxt = np.empty(2 * w.size, dtype=np.int8)
        nxt[0::2] = w
        nxt[1::2] = -w
        w = nxt
    return SignWord(n, tuple(int(s) for s in w))


def sign_word_analytic(n: int) -> SignWord:
    """Signs of P_n at the midpoints (2j+1) pi / 2^(n+1), j < 2^n.

    Each factor's sign is counted separately and the magnitude is tracked as
    a sum of logs, so nothing underflows at large n.
    """
    if not 0 <= n <= 20:
        raise ResourceError("n must lie in [0, 20]")
    x = (2 * np.arange(1 << n) + 1) * (math.pi / 2 ** (n + 1))
    negatives = np.zeros(x.size, dtype=np.int64)
    log_abs = np.zeros(x.size)
    for k in range(n + 1):
        f = np.sin(2.0**k * x)
        negatives += f < 0
        with np.errstate(divide="ignore"):
            log_abs += np.log(np.abs(f))
    # midpoints avoid every zero j pi / 2^k
    assert np.all(np.isfinite(log_abs)), "a factor vanished at a midpoint"
    word = np.where(negatives % 2 == 0, 1, -1)
    return SignWord(n, tuple(int(s) for s in word))


def thue_morse_word(n: int) -> SignWord:
    return SignWord(n, tuple(int(t) for t in thue_morse_table(n)))


@dataclass(frozen=True)
class SplittingReport:
    n: int
    relations_checked: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"n": self.n, "relations_checked": self.relations_checked,
                "failures": self.failures, "passed": self.passed}


def splitting_check(n: int) -> SplittingReport:
    """p_{n+1,2j} = p_{n,j} and p_{n+1,2j+1} = -p_{n,j} for all j < 2^n."""
    if not 0 <= n <= 14:
        raise ResourceError("n must lie in [0, 14]")
    coarse = np.array(sign_word_analytic(n).word)
    fine = np.array(sign_word_analytic(n + 1).word)
    failures = int(np.sum(fine[0::2] != coarse) + np.sum(fine[1::2] != -coarse))
    return SplittingReport(n, 2 * coarse.size, failures)
