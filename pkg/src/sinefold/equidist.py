"""Finite-scale evidence for equidistribution of digit-weighted sums.

For the sequence j -> u(j, lambda) the Weyl mean over a full block j < 2^n
factors exactly:  |2^-n sum_j e(l u(j))| = prod_{k<n} |cos(pi l lambda_k)|.
Whether the infinite product vanishes is an asymptotic question, so the
classifier here only reports evidence, never a verdict about the limit.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, TextIO

import mpmath
import numpy as np

from .digits import u_table
from .errors import DomainError, PrecisionError, ResourceError

HALF_TOL = 1e-12
DIVERGENCE_THRESHOLD = 25.0
PISOT_CAP = 500


def nearest_int_norm(x):
    """Distance from x to the nearest integer; keeps the numeric kind of x."""
    if isinstance(x, mpmath.mpf):
        return abs(x - mpmath.nint(x))
    if isinstance(x, Fraction):
        return abs(x - round(x))
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    return abs(x - math.floor(x + 0.5))


def frac_part(x) -> float:
    """x mod 1 computed in the numeric kind of x, then rounded to a float."""
    if isinstance(x, mpmath.mpf):
        return float(x - mpmath.floor(x))
    if isinstance(x, Fraction):
        return float(x - math.floor(x))
    return float(x) % 1.0


def _reduced_weights(weights: Sequence, n: int) -> np.ndarray:
    if len(weights) < n:
        raise DomainError(f"need {n} weights, got {len(weights)}")
    return np.array([frac_part(w) for w in weights[:n]])


def _phases(ell: int, weights: Sequence, n: int) -> np.ndarray:
    """l * u(j, lambda) mod 1 for all j < 2^n, reducing each weight exactly first."""
    lam = _reduced_weights([w * ell for w in weights[:n]], n)
    return u_table(lam, n) % 1.0


def weyl_sum(ell: int, N: int, weights: Sequence) -> complex:
    """(1/N) sum_{j<N} exp(2 pi i l u(j, lambda))."""
    if ell == 0:
        raise DomainError("ell must be nonzero")
    if N < 1:
        raise DomainError("N must be positive")
    n = (N - 1).bit_length()
    ph = _phases(ell, weights, n)[:N]
    return complex(np.mean(np.exp(2j * np.pi * ph)))


def cos_product(ell: int, weights: Sequence, n: int) -> float:
    lam = _reduced_weights([w * ell for w in weights[:n]], n)
    return float(np.prod(np.abs(np.cos(np.pi * lam))))


def product_identity_check(ell: int, n: int, weights: Sequence) -> float:
    """| |weyl_sum(l, 2^n)| - prod_{k<n} |cos(pi l lambda_k)| |."""
    if n > 24:
        raise DomainError("n must be at most 24")
    return abs(abs(weyl_sum(ell, 1 << n, weights)) - cos_product(ell, weights, n))


class Verdict(enum.Enum):
    DEFINITELY_ZERO = "definitely_zero"
    DIVERGING = "diverging_square_sum_evidence"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    half_hit: int | None
    square_sum: float
    tail_slope: float

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "half_hit": self.half_hit,
                "square_sum": self.square_sum, "tail_slope": self.tail_slope}


def zero_classifier(ell: int, weights: Sequence, Q: int | None = None,
                    threshold: float = DIVERGENCE_THRESHOLD) -> Classification:
    """Evidence about whether prod_q |cos(pi l lambda_q)| vanishes.

    definitely_zero: some l lambda_q is within 1e-12 of 1/2 mod 1.
    diverging evidence: sum_{q<Q} ||l lambda_q||^2 exceeds ``threshold`` and
    still grows over the last quarter at no less than half its average rate.
    """
    Q = len(weights) if Q is None else Q
    if Q < 1 or Q > len(weights):
        raise DomainError("Q must lie in [1, len(weights)]")
    norms = [float(nearest_int_norm(ell * w)) for w in weights[:Q]]
    half = next((q for q, d in enumerate(norms) if d >= 0.5 - HALF_TOL), None)
    sq = np.cumsum(np.square(norms))
    total = float(sq[-1])
    quarter = max(1, Q // 4)
    slope = float((sq[-1] - sq[-1 - quarter]) / quarter) if Q > quarter else total / Q
    if half is not None:
        verdict = Verdict.DEFINITELY_ZERO
    elif total > threshold and slope >= 0.5 * total / Q:
        verdict = Verdict.DIVERGING
    else:
        verdict = Verdict.INCONCLUSIVE
    return Classification(verdict, half, total, slope)


@dataclass(frozen=True)
class QuadraticPisot:
    """Root theta > 1 of t^2 = trace * t - norm."""

    trace: int
    norm: int

    def __post_init__(self):
        if self.trace**2 - 4 * self.norm <= 0:
            raise DomainError("t^2 - trace t + norm has no real roots")

    def theta(self, prec: int = 256) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return (self.trace + mpmath.sqrt(self.trace**2 - 4 * self.norm)) / 2

    def conjugate(self, prec: int = 256) -> mpmath.mpf:
        with mpmath.workprec(prec):
            return (self.trace - mpmath.sqrt(self.trace**2 - 4 * self.norm)) / 2

    @property
    def is_pisot(self) -> bool:
        return self.theta(64) > 1 and abs(self.conjugate(64)) < 1

    def traces(self, count: int) -> list[int]:
        """theta^q + theta'^q for q < count, by t_{q+1} = trace t_q - norm t_{q-1}."""
        t = [2, self.trace]
        while len(t) < count:
            t.append(self.trace * t[-1] - self.norm * t[-2])
        return t[:count]


GOLDEN = QuadraticPisot(1, -1)
SILVER = QuadraticPisot(2, -1)


def pisot_power_norms(p: QuadraticPisot, x: int, Q: int, prec: int = 256) -> list[mpmath.mpf]:
    """||x theta^q|| for q < Q.

    x theta^q = x t_q - x theta'^q with t_q an integer, so only the small
    conjugate power is ever evaluated in floating point.
    """
    if not p.is_pisot:
        raise DomainError(f"{p} is not a Pisot number")
    if Q > PISOT_CAP:
        raise ResourceError(f"Q must be at most {PISOT_CAP}")
    if int(x) != x:
        raise DomainError("x must be an integer")
    with mpmath.workprec(prec):
        conj = p.conjugate(prec)
        return [nearest_int_norm(-x * conj**q) for q in range(Q)]


def star_discrepancy(samples: Sequence) -> float:
    """D*_N of the samples reduced mod 1 (sorted-sample formula)."""
    if len(samples) == 0:
        raise DomainError("need at least one sample")
    if isinstance(samples, np.ndarray) and samples.dtype.kind == "f":
        return _star_discrepancy_array(samples)
    return _star_discrepancy_array(np.array([frac_part(s) for s in samples]))


def _star_discrepancy_array(x: np.ndarray) -> float:
    x = np.sort(np.mod(x, 1.0))
    N = x.size
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - x), np.max(x - (i - 1) / N)))


# --- experiments -----------------------------------------------------------

_ROOTS = {"sqrt2": 2, "sqrt3": 3, "sqrt5": 5}


def resolve_theta(theta) -> tuple[QuadraticPisot | Callable[[int], mpmath.mpf], str]:
    """Named constant, QuadraticPisot, or a number (parsed exactly) -> (theta, label).

    Non-quadratic values come back as a function of the working precision.
    """
    if isinstance(theta, QuadraticPisot):
        return theta, f"quadratic({theta.trace},{theta.norm})"
    if theta == "golden":
        return GOLDEN, "golden"
    if theta == "silver":
        return SILVER, "silver"
    if theta in _ROOTS:
        root = _ROOTS[theta]
        return (lambda prec: _at_prec(prec, lambda: mpmath.sqrt(root))), theta
    try:
        value = Fraction(theta)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot interpret theta={theta!r}") from exc
    if value <= 1:
        raise DomainError("theta must exceed 1")
    return (lambda prec: _at_prec(prec, lambda: mpmath.mpf(value.numerator) / value.denominator)), str(theta)


def _at_prec(prec: int, make):
    with mpmath.workprec(prec):
        return make()


def dilated_powers_mod1(theta, x, count: int, prec: int | None = None) -> tuple[list[float], int]:
    """(x theta^q mod 1 for q < count, bits of precision used).

    Quadratic Pisot theta with rational x uses x theta^q = x t_q - x theta'^q,
    t_q an integer; otherwise theta^q is evaluated with
    count * log2(theta) + 64 bits so that the fractional part survives.
    """
    x = Fraction(x)
    if isinstance(theta, QuadraticPisot) and theta.is_pisot:
        used = max(prec or 0, 128)
        t = theta.traces(count)
        with mpmath.workprec(used):
            conj = theta.conjugate(used)
            xm = mpmath.mpf(x.numerator) / x.denominator
            out = []
            for q in range(count):
                exact = x * t[q]
                head = mpmath.mpf((exact - math.floor(exact)).numerator) / exact.denominator
                out.append(float(mpmath.frac(head - xm * conj**q)))
        return out, used
    evaluate = theta.theta if isinstance(theta, QuadraticPisot) else theta
    size = float(evaluate(64))
    needed = int(count * math.log2(size) + math.log2(max(1.0, abs(float(x)))) + 64)
    if prec is None:
        prec = needed
    elif prec < needed:
        raise PrecisionError(f"{prec} bits is below the {needed} bits needed for q < {count}")
    with mpmath.workprec(prec):
        th = evaluate(prec)
        xm = mpmath.mpf(x.numerator) / x.denominator
        return [float(mpmath.frac(xm * th**q)) for q in range(count)], prec


@dataclass
class EquidistReport:
    theta: str
    x: str
    n: int
    pisot: bool
    star_discrepancy: float
    weyl_mean_abs: dict[int, float]
    cos_product: dict[int, float]
    classification: Classification
    precision_bits: int

    def to_dict(self) -> dict:
        return {"theta": self.theta, "x": self.x, "n": self.n, "pisot": self.pisot,
                "star_discrepancy": self.star_discrepancy,
                "weyl_mean_abs": {str(k): v for k, v in self.weyl_mean_abs.items()},
                "cos_product": {str(k): v for k, v in self.cos_product.items()},
                "classification": self.classification.to_dict(),
                "precision_bits": self.precision_bits}


def experiment_samples(theta, x, n: int, prec: int | None = None) -> np.ndarray:
    """x u(j, (theta^q)_q) mod 1 for j < 2^n."""
    resolved, _ = resolve_theta(theta)
    lam, _ = dilated_powers_mod1(resolved, x, n, prec)
    return u_table(np.array(lam), n) % 1.0


def equidist_experiment(theta="golden", x=1, n: int = 16, classifier_terms: int = 1024,
                        prec: int | None = None) -> EquidistReport:
    """Discrepancy and Weyl means of x u(j, (theta^q)_q) mod 1 over j < 2^n."""
    if not 1 <= n <= 20:
        raise DomainError("n must lie in [1, 20]")
    resolved, label = resolve_theta(theta)
    terms = max(n, classifier_terms)
    lam, used = dilated_powers_mod1(resolved, x, terms, prec)
    samples = u_table(np.array(lam[:n]), n) % 1.0
    weyl, cosp = {}, {}
    for ell in (1, 2, 3):
        weyl[ell] = float(abs(np.mean(np.exp(2j * np.pi * ell * samples))))
        cosp[ell] = cos_product(ell, lam, n)
    pisot = isinstance(resolved, QuadraticPisot) and resolved.is_pisot
    return EquidistReport(label, str(Fraction(x)), n, pisot, star_discrepancy(samples),
                          weyl, cosp, zero_classifier(1, lam, terms), used)


def write_samples_csv(samples: Sequence[float], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["j", "sample"])
    writer.writerows((j, repr(float(v))) for j, v in enumerate(samples))
