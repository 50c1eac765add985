"""Finite sine/cosine products and their 2^n-term expansions.

For a product of n factors f(lambda_k), each identity writes it as
``prefactor * sum_j sign_j * F(sum_q sigma_q(j) lambda_q)`` where the sign
is either +1 or the Thue-Morse value (-1)^s(j).  In the dyadic case
lambda_q = 2^q x the signed frequencies collapse to (2j + 1 - 2^n) x and the
sum folds onto the odd frequencies 1, 3, ..., 2^n - 1.
"""
from __future__ import annotations

import csv
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, TextIO

import numpy as np

from .digits import digit_sum, signed_sum_table, thue_morse_table
from .errors import DomainError
from .reports import IdentityCheckReport, make_report

KINDS = ("sin", "cos", "sinh", "cosh")
_FUNCS: dict[str, Callable] = {"sin": np.sin, "cos": np.cos, "sinh": np.sinh, "cosh": np.cosh}

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class ProductSpec:
    weights: tuple[float, ...]
    kind: str = "sin"
    dyadic: tuple[int, float] | None = None  # (r, x): weights[q] = r**q * x

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}")
        if not self.weights:
            raise DomainError("a product needs at least one factor")
        if self.dyadic is not None:
            r, x = self.dyadic
            for q, w in enumerate(self.weights):
                if w != r**q * x:
                    raise DomainError("weights do not match the dyadic family")

    @classmethod
    def from_dyadic(cls, factors: int, x: float, r: int = 2, kind: str = "sin") -> "ProductSpec":
        if r < 2:
            raise DomainError("r must be at least 2")
        return cls(tuple(r**q * x for q in range(factors)), kind, (r, x))

    @property
    def factors(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class TrigExpansion:
    """P(x) = amplitude * sum_t signs[t] * basis(frequencies[t] * x)."""

    signs: tuple[int, ...]
    frequencies: tuple[int, ...]
    amplitude: Fraction
    basis: str

    def __len__(self):
        return len(self.signs)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        f = np.sin if self.basis == "sin" else np.cos
        freqs = np.asarray(self.frequencies, dtype=float)
        signs = np.asarray(self.signs, dtype=float)
        vals = f(np.multiply.outer(x, freqs)) @ signs
        return float(self.amplitude) * vals

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sign", "frequency"])
        writer.writerows(zip(self.signs, self.frequencies))


def eval_product(spec: ProductSpec) -> float:
    f = _FUNCS[spec.kind]
    out = 1.0
    for w in spec.weights:
        out *= float(f(w))
    return out


def cos_closed_form_check(n: int, x: float) -> float:
    """|prod_{k<=n} cos 2^k x - sin(2^{n+1} x) / (2^{n+1} sin x)|."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    sx = math.sin(x)
    if abs(sx) < 1e-12:
        raise DomainError("x is a multiple of pi; the closed form is singular there")
    lhs = math.prod(math.cos(2**k * x) for k in range(n + 1))
    rhs = math.sin(2 ** (n + 1) * x) / (2 ** (n + 1) * sx)
    return abs(lhs - rhs)


# --- identity catalogue ---------------------------------------------------
#
# Each entry: (function on the left, basis on the right, Thue-Morse signed?,
# parity requirement, dyadic?).  Prefactors are computed in _prefactor.

IDENTITIES = (
    "cosh", "cos", "sinh", "sin", "cos2", "sin2", "cos2simple", "sin2simple",
    "sin-odd", "sinh-odd", "sin2-odd", "sin2simple-odd",
)

_LEFT = {
    "cosh": "cosh", "cos": "cos", "sinh": "sinh", "sin": "sin",
    "cos2": "cos", "sin2": "sin", "cos2simple": "cos", "sin2simple": "sin",
    "sin-odd": "sin", "sinh-odd": "sinh", "sin2-odd": "sin", "sin2simple-odd": "sin",
}
_EVEN_ONLY = {"sinh", "sin", "sin2", "sin2simple"}
_ODD_ONLY = {"sin-odd", "sinh-odd", "sin2-odd", "sin2simple-odd"}
_DYADIC = {"cos2", "sin2", "cos2simple", "sin2simple", "sin2-odd", "sin2simple-odd"}


def _rhs_terms(which: str, weights: np.ndarray, x: float | None, form: str):
    """Return (prefactor, signs, arguments, basis) for the right-hand side."""
    n = len(weights)
    m = n // 2
    if which in ("cos2simple", "sin2simple", "sin2simple-odd"):
        half = 1 << (n - 1)
        freqs = (2 * np.arange(half) + 1) * x
        if which == "cos2simple":
            return 2.0 ** (1 - n), np.ones(half), freqs, np.cos
        tm = thue_morse_table(n - 1).astype(float)
        if which == "sin2simple":
            return (-1) ** (m + 1) * 2.0 ** (1 - n), tm, freqs, np.cos
        return (-1) ** m * 2.0 ** (1 - n), tm, freqs, np.sin
    if which in ("cos2", "sin2", "sin2-odd"):
        size = 1 << n
        args = (2 * np.arange(size) + 1 - size) * x
    elif form == "digits":
        args = signed_sum_table(weights)
    else:
        args = None
    if form == "epsilon" and args is None:
        counts, args = _epsilon_terms(weights)
        tm = np.where(counts % 2 == 0, 1.0, -1.0)
    else:
        tm = thue_morse_table(n).astype(float)
    ones = np.ones(len(args))
    scale = 2.0 ** (-n)
    if which == "cosh":
        return scale, ones, args, np.cosh
    if which in ("cos", "cos2"):
        return scale, ones, args, np.cos
    if which == "sinh":
        return scale, tm, args, np.cosh
    if which in ("sin", "sin2"):
        return (-1) ** m * scale, tm, args, np.cos
    if which in ("sin-odd", "sin2-odd"):
        return (-1) ** (m + 1) * scale, tm, args, np.sin
    if which == "sinh-odd":
        return -scale, tm, args, np.sinh
    raise DomainError(f"unknown identity {which!r}")


def _epsilon_terms(weights: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Enumerate sign tuples directly: (number of +1 entries, sum eps_q lambda_q)."""
    counts, args = [], []
    for eps in itertools.product((-1, 1), repeat=len(weights)):
        counts.append(sum(e > 0 for e in eps))
        args.append(sum(e * w for e, w in zip(eps, weights)))
    return np.array(counts), np.array(args, dtype=float)


def check_identity(which: str, spec: ProductSpec, tol: float = DEFAULT_TOL,
                   form: str = "digits") -> IdentityCheckReport:
    """Compare a product with its expansion.

    ``form="epsilon"`` enumerates sign tuples instead of digit expansions
    (only meaningful for the non-dyadic identities).  The residual is scaled
    by |prefactor| * sum of |terms| so that exponentially small products are
    still judged relative to the size of what is being summed.
    """
    if which not in IDENTITIES:
        raise DomainError(f"unknown identity {which!r}")
    if form not in ("digits", "epsilon"):
        raise DomainError(f"unknown form {form!r}")
    n = spec.factors
    if which in _EVEN_ONLY and n % 2:
        raise DomainError(f"{which} needs an even number of factors, got {n}")
    if which in _ODD_ONLY and n % 2 == 0:
        raise DomainError(f"{which} needs an odd number of factors, got {n}")
    x = None
    if which in _DYADIC:
        if spec.dyadic is None or spec.dyadic[0] != 2:
            raise DomainError(f"{which} needs a dyadic r=2 product")
        x = spec.dyadic[1]
    if spec.kind != _LEFT[which]:
        spec = ProductSpec(spec.weights, _LEFT[which], spec.dyadic)
    lhs = eval_product(spec)
    weights = np.asarray(spec.weights, dtype=float)
    pref, signs, args, basis = _rhs_terms(which, weights, x, form)
    terms = signs * basis(args)
    rhs = pref * float(np.sum(terms))
    scale = abs(pref) * float(np.sum(np.abs(terms)))
    scale = max(scale, abs(lhs), np.finfo(float).tiny)
    return make_report(which, n, abs(lhs - rhs), scale, tol)


def epsilon_multiset(weights: Sequence) -> Counter:
    """Terms of the sign-tuple form as a multiset of (number of +1, signed sum)."""
    return Counter(
        (sum(e > 0 for e in eps), sum(e * w for e, w in zip(eps, weights)))
        for eps in itertools.product((-1, 1), repeat=len(weights))
    )


def digit_multiset(weights: Sequence) -> Counter:
    """Terms of the digit form as a multiset of (s(j), sum_q sigma_q(j) lambda_q)."""
    n = len(weights)
    out: Counter = Counter()
    for j in range(1 << n):
        v = sum(w if (j >> q) & 1 else -w for q, w in enumerate(weights))
        out[(digit_sum(j), v)] += 1
    return out


def dyadic_expansion(factors: int) -> TrigExpansion:
    """Folded expansion of sin x sin 2x ... sin 2^(factors-1) x on odd frequencies.

    Even factor count 2m:  (-1)^(m+1) 2^(1-2m) sum_t (-1)^s(t) cos((2t+1)x)
    Odd factor count 2m+1: (-1)^m     2^(-2m)  sum_t (-1)^s(t) sin((2t+1)x)
    with t ranging over [0, 2^(factors-1)).
    """
    if factors < 1:
        raise DomainError("need at least one factor")
    m = factors // 2
    half = 1 << (factors - 1)
    if factors % 2 == 0:
        pre, basis = (-1) ** (m + 1), "cos"
    else:
        pre, basis = (-1) ** m, "sin"
    tm = thue_morse_table(factors - 1)
    signs = tuple(int(pre * t) for t in tm)
    freqs = tuple(range(1, 2 * half, 2))
    return TrigExpansion(signs, freqs, Fraction(1, 1 << (factors - 1)), basis)


def fourier_expansion(spec: ProductSpec) -> TrigExpansion:
    if spec.dyadic is None or spec.dyadic[0] != 2:
        raise DomainError("fourier_expansion needs a dyadic r=2 product")
    if spec.kind != "sin":
        raise DomainError("fourier_expansion is defined for sine products")
    return dyadic_expansion(spec.factors)
