"""Sup, L1 and L2 norms of sine products.

P_{r,n}(x) = |sin x sin rx ... sin r^n x|.  The sup norm is located by a
branch-and-bound search: on any interval each factor |sin r^k x| has an
exactly computable maximum, so the product of those maxima bounds P on the
interval and lets whole intervals be discarded.  The L1 norm of the dyadic
product uses its finite Fourier expansion: P_n keeps a constant sign on each
(j pi/2^n, (j+1) pi/2^n), so integrating the expansion's antiderivative
between consecutive zeros gives the norm up to rounding.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy import optimize, stats

from .errors import DomainError, ResourceError, SearchFailure
from .trigprod import dyadic_expansion

EPS = np.finfo(float).eps
RHO_LOW = 0.654336
RHO_HIGH = 0.663197
EMINYAN_MU = (2 + math.sqrt(2)) ** 0.25 / 2
L1_CAP = 20
ADMISSIBLE_CAP = 24


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lower: float
    value: float
    upper: float
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return self.lower - self.tolerance <= self.value <= self.upper + self.tolerance

    def to_dict(self) -> dict:
        return {"name": self.name, "lower": self.lower, "value": self.value,
                "upper": self.upper, "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class NormReport:
    r: int | None
    factor_count: int
    sup_estimate: float | None = None
    sup_upper: float | None = None
    argmax: float | None = None
    log_derivative: float | None = None
    l1_estimate: float | None = None
    l1_error_bound: float | None = None
    l2_exact: Fraction | None = None
    bound_checks: list[BoundCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.bound_checks)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "factor_count": self.factor_count,
            "sup_estimate": self.sup_estimate,
            "sup_upper": self.sup_upper,
            "argmax": self.argmax,
            "log_derivative": self.log_derivative,
            "l1_estimate": self.l1_estimate,
            "l1_error_bound": self.l1_error_bound,
            "l2_exact": self.l2_exact,
            "bound_checks": [b.to_dict() for b in self.bound_checks],
            "passed": self.passed,
        }


@dataclass(frozen=True)
class RhoFit:
    n_range: tuple[int, int]
    slope: float
    rho_hat: float
    r_squared: float
    intercept: float

    @property
    def in_window(self) -> bool:
        return RHO_LOW < self.rho_hat < RHO_HIGH

    def to_dict(self) -> dict:
        return {"n_range": list(self.n_range), "slope": self.slope, "rho_hat": self.rho_hat,
                "r_squared": self.r_squared, "C_hat": math.exp(self.intercept),
                "window": [RHO_LOW, RHO_HIGH], "in_window": self.in_window,
                "sqrt2_over_2": math.sqrt(2) / 2, "eminyan_mu": EMINYAN_MU}


# --- pointwise evaluation ---------------------------------------------------

def _multipliers(r: int, n: int) -> np.ndarray:
    if r < 1:
        raise DomainError("r must be a positive integer")
    if n < 0:
        raise DomainError("n must be nonnegative")
    if r**n >= 2**53:
        raise DomainError(f"r^n = {r}^{n} is not exactly representable in double precision")
    return np.array([float(r**k) for k in range(n + 1)])


def abs_product(x, r: int, n: int) -> np.ndarray:
    """|sin x sin rx ... sin r^n x| for an array of x."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for m in _multipliers(r, n):
        out *= np.abs(np.sin(m * x))
    return out


def abs_product_mp(x, r: int, n: int, dps: int = 40) -> mpmath.mpf:
    """High-precision |P_{r,n}(x)|; x is taken as exact (float or mpf)."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        out = mpmath.mpf(1)
        for k in range(n + 1):
            out *= abs(mpmath.sin(r**k * x))
        return out


def log_derivative(x: float, r: int, n: int) -> float:
    """d/dx log|P_{r,n}| = sum_k r^k cot(r^k x); diagnostic only (poles at zeros)."""
    return float(sum(r**k / math.tan(r**k * x) for k in range(n + 1)))


def phi(x, r: int) -> np.ndarray:
    """(sin^2 x)^(r/(r+1)) (sin^2 rx)^(1/(r+1)), powers taken on nonnegative bases."""
    x = np.asarray(x, dtype=float)
    return (np.sin(x) ** 2) ** (r / (r + 1)) * (np.sin(r * x) ** 2) ** (1 / (r + 1))


def x0_witness(r: int) -> float:
    """pi * floor((r+1)/2) / (r+1) for even r, where |sin r^k x0| = |sin x0| for all k."""
    if r < 2 or r % 2:
        raise DomainError("x0_witness is defined for even r >= 2")
    return math.pi * ((r + 1) // 2) / (r + 1)


def x0_witness_residual(r: int, n: int) -> float:
    """max_k ||sin r^k x0| - |sin x0|| for k <= n, evaluated in high precision."""
    with mpmath.workdps(40):
        x0 = mpmath.pi * ((r + 1) // 2) / (r + 1)
        base = abs(mpmath.sin(x0))
        return float(max(abs(abs(mpmath.sin(r**k * x0)) - base) for k in range(n + 1)))


# --- sup norm -------------------------------------------------------------

def _factor_upper(lo: np.ndarray, hi: np.ndarray, m: float) -> np.ndarray:
    """max of |sin(m x)| over [lo, hi], inflated by the argument rounding error."""
    a = m * lo
    b = m * hi
    slack = 4 * EPS * (np.abs(b) + 1)
    peak = np.floor((b + slack) / math.pi - 0.5) > np.floor((a - slack) / math.pi - 0.5)
    wide = (b - a) >= math.pi
    edge = np.maximum(np.abs(np.sin(a)), np.abs(np.sin(b))) + slack
    return np.where(peak | wide, 1.0, np.minimum(edge, 1.0))


def _bnb_sup(r: int, n: int, rtol: float, max_cells: int, tails: Sequence[float],
             split: int = 8):
    """Branch and bound on [0, pi/2]; P(pi - x) = P(x) covers the other half.

    ``tails[m]`` is a certified upper bound for sup P_{r,m} (m < n).  The
    factors k >= j of P_{r,n}(x) form P_{r,n-j}(r^j x), so on a cell

        P <= min_j  prod_{k<j} max|sin r^k x|  *  tails[n-j]

    Returns (best value, best x, certified upper bound, final cell width).
    """
    mults = _multipliers(r, n)
    tail = np.array([tails[n - j] for j in range(1, n + 1)] + [1.0])
    edges = np.linspace(0.0, math.pi / 2, 4097)
    lo, hi = edges[:-1], edges[1:]
    best, best_x, width = -1.0, math.pi / 2, math.pi / 2
    done_upper = 0.0
    for _ in range(400):
        # probe at a golden-ratio offset: midpoints of dyadic cells sit on zeros
        probe = lo + 0.3819660112501051 * (hi - lo)
        vals = abs_product(probe, r, n)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_x, width = float(vals[k]), float(probe[k]), float(hi[k] - lo[k])
        prefix = np.ones_like(lo)
        ub = np.full_like(lo, np.inf)
        for j, m in enumerate(mults):
            prefix = prefix * _factor_upper(lo, hi, m)
            ub = np.minimum(ub, prefix * tail[j])
        keep = ub > best * (1 + rtol)
        # cells that cannot be split any further are retired with their bound
        tiny = (hi - lo) <= 4 * EPS * np.maximum(np.abs(hi), 1e-300)
        retire = keep & tiny
        if retire.any():
            done_upper = max(done_upper, float(ub[retire].max()))
        keep &= ~tiny
        lo, hi = lo[keep], hi[keep]
        if lo.size == 0:
            return best, best_x, max(best * (1 + rtol), done_upper), width
        if lo.size * split > max_cells:
            raise SearchFailure(
                f"branch and bound exceeded {max_cells} cells (r={r}, n={n}, "
                f"live cells {lo.size}, best {best:.6g})")
        t = np.arange(split + 1) / split
        w = hi - lo
        grid = lo[:, None] + w[:, None] * t[None, :]
        grid[:, -1] = hi
        lo, hi = grid[:, :-1].ravel(), grid[:, 1:].ravel()
    raise SearchFailure(f"branch and bound did not converge (r={r}, n={n})")


@functools.lru_cache(maxsize=256)
def _sup_search(r: int, n: int, rtol: float, max_cells: int) -> tuple[float, float, float]:
    """(value, argmax, certified upper) for P_{r,n}, building on m < n."""
    tails = [_sup_search(r, m, rtol, max_cells)[2] for m in range(n)]
    best, x, certified, width = _bnb_sup(r, n, rtol, max_cells, tails)
    res = optimize.minimize_scalar(
        lambda t: -float(abs_product(t, r, n)), bounds=(x - width, x + width),
        method="bounded", options={"xatol": 1e-16})
    if -res.fun > best and 0 < res.x <= math.pi / 2:
        x = float(res.x)
    value = float(abs_product_mp(x, r, n))
    return value, x, max(certified, value)


def grid_sup(r: int, n: int, points: int | None = None, brackets: int = 32,
             cap: int = 2**22) -> tuple[float, float]:
    """Dense grid on (0, pi) followed by bounded refinement of the best brackets.

    Independent of the branch-and-bound route; reliable only while the grid
    resolves the fastest factor (points >> r^n).
    """
    if points is None:
        points = min(max(4096, 64 * r**n), cap)
    xs = np.linspace(0.0, math.pi, points + 1)
    vals = abs_product(xs, r, n)
    order = np.argsort(vals[1:-1])[::-1][:brackets] + 1
    best, best_x = float(vals[order[0]]), float(xs[order[0]])
    for i in order:
        res = optimize.minimize_scalar(
            lambda t: -float(abs_product(t, r, n)), bounds=(xs[i - 1], xs[i + 1]),
            method="bounded", options={"xatol": 1e-15})
        if -res.fun > best:
            best, best_x = float(-res.fun), float(res.x)
    return best, best_x


def sup_norm(r: int, n: int, rtol: float = 1e-10, max_cells: int = 2**22) -> NormReport:
    """Global maximum of |sin x sin rx ... sin r^n x| with bound checks attached."""
    if r < 2:
        raise DomainError("r must be at least 2")
    value, x, certified = _sup_search(r, n, rtol, max_cells)
    if x < 1e-300:
        raise SearchFailure("maximum located at the boundary")
    try:
        logd = log_derivative(x, r, n)
    except ZeroDivisionError:
        logd = float("nan")
    report = NormReport(r=r, factor_count=n + 1, sup_estimate=value, sup_upper=certified,
                        argmax=x, log_derivative=logd)
    report.bound_checks.extend(sup_bound_checks(r, n, value, certified))
    return report


def sup_bound_checks(r: int, n: int, value: float, certified: float,
                     tol: float = 1e-9) -> list[BoundCheck]:
    checks = []
    if r % 2:
        at_half = float(abs_product_mp(mpmath.pi / 2, r, n))
        checks.append(BoundCheck("odd_r_attained_at_pi_over_2", 1.0, at_half, 1.0, 1e-12))
        checks.append(BoundCheck("odd_r_sup_is_one", 1.0, value, 1.0, tol))
        return checks
    c = math.cos(math.pi / (2 * r + 2))
    checks.append(BoundCheck("even_r_sandwich", c ** (n + 1), value, c**n, tol))
    checks.append(BoundCheck("even_r_certified_upper", 0.0, certified, c**n, tol))
    with mpmath.workdps(40):
        x0 = mpmath.pi * ((r + 1) // 2) / (r + 1)
        at_x0 = float(abs_product_mp(x0, r, n))
    checks.append(BoundCheck("x0_witness_value", c ** (n + 1), at_x0, c ** (n + 1), 1e-12))
    if r == 2:
        g = math.sqrt(3) / 2
        checks.append(BoundCheck("gelfond", g ** (n + 1), value, g**n, tol))
    return checks


# --- L1 norm of the dyadic product ----------------------------------------

def l1_norm(n: int) -> tuple[float, float]:
    """int_0^pi |sin x sin 2x ... sin 2^n x| dx and a rounding-error bound.

    The antiderivative of the folded expansion is evaluated at every zero
    j pi / 2^n at once with one FFT of length 2^(n+1).
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > L1_CAP:
        raise ResourceError(f"n={n} exceeds the L1 cost cap {L1_CAP}")
    exp = dyadic_expansion(n + 1)
    size = 1 << (n + 1)
    freqs = np.asarray(exp.frequencies)
    coeffs = np.zeros(size, dtype=complex)
    coeffs[freqs] = np.asarray(exp.signs, dtype=float) / freqs
    g = np.fft.ifft(coeffs)[: (size >> 1) + 1] * size
    amp = float(exp.amplitude)
    if exp.basis == "cos":
        anti = amp * g.imag          # integral of cos(fx) is sin(fx)/f
    else:
        anti = -amp * g.real         # integral of sin(fx) is -cos(fx)/f
    value = float(np.sum(np.abs(np.diff(anti))))
    magnitude = amp * float(np.sum(1.0 / freqs))
    error = 2.0 ** (n + 2) * EPS * max(1.0, math.log2(size)) * magnitude
    return value, error


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def l1_quadrature(n: int, chunk: int = 1 << 14) -> float:
    """Gauss-Legendre on each sign-constant interval, evaluating the product directly."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    count = 1 << n
    h = math.pi / count
    total = 0.0
    for start in range(0, count, chunk):
        j = np.arange(start, min(start + chunk, count))
        x = (j[:, None] + 0.5 * (_GL_NODES[None, :] + 1)) * h
        p = np.ones_like(x)
        for k in range(n + 1):
            p *= np.sin(2.0**k * x)
        total += float(np.sum(np.abs(p @ _GL_WEIGHTS))) * h / 2
    return total


def rho_estimate(n_min: int, n_max: int) -> RhoFit:
    """Least-squares slope of log ||P_n||_1 against n."""
    if not (4 <= n_min < n_max <= 18):
        raise DomainError("need 4 <= n_min < n_max <= 18")
    ns = np.arange(n_min, n_max + 1)
    logs = np.log([l1_norm(int(k))[0] for k in ns])
    fit = stats.linregress(ns, logs)
    return RhoFit((n_min, n_max), float(fit.slope), float(math.exp(fit.slope)),
                  float(fit.rvalue**2), float(fit.intercept))


# --- admissible weights, Parseval, generic L1 -------------------------------

def admissible(weights: Sequence[int]) -> bool:
    """True iff the 2^(N+1) signed sums of the weights are pairwise distinct."""
    weights = [int(w) for w in weights]
    if len(weights) > ADMISSIBLE_CAP:
        raise ResourceError(f"at most {ADMISSIBLE_CAP} weights, got {len(weights)}")
    if not weights:
        raise DomainError("need at least one weight")
    if sum(abs(w) for w in weights) >= 2**62:
        raise DomainError("weights too large for the int64 enumeration")
    v = np.zeros(1, dtype=np.int64)
    for w in weights:
        v = np.concatenate([v - w, v + w])
    return np.unique(v).size == v.size


def random_admissible(rng: np.random.Generator, factors: int, max_weight: int | None = None,
                      attempts: int = 10_000) -> list[int]:
    """Sorted admissible weights drawn without replacement from [1, max_weight].

    Rejection sampling; the default range 2^(factors+2) accepts roughly one
    draw in ten at ten factors.
    """
    if factors < 1:
        raise DomainError("need at least one factor")
    hi = max_weight or 2 ** (factors + 2)
    if hi < factors:
        raise DomainError("max_weight is smaller than the number of factors")
    for _ in range(attempts):
        w = sorted(int(v) for v in rng.choice(np.arange(1, hi + 1), factors, replace=False))
        if admissible(w):
            return w
    raise SearchFailure(f"no admissible draw in {attempts} attempts")


def l2_norm(weights: Sequence[int], kind: str = "sin") -> Fraction:
    """(1/pi) int_0^pi prod f(lambda_j x)^2 dx for admissible positive integer weights.

    The product expands into 2^(N+1) terms that coincide in pairs (the sign
    tuples eps and -eps give the same term), leaving 2^N orthogonal modes
    of amplitude 2^-N, so the mean square is 2^-N * 2^-N * 2^N / 2 = 1/2^(N+1).
    """
    if kind not in ("sin", "cos"):
        raise DomainError("kind must be 'sin' or 'cos'")
    if any(int(w) <= 0 for w in weights):
        raise DomainError("weights must be positive integers")
    if not admissible(weights):
        raise DomainError(f"weights {list(weights)} are not admissible")
    return Fraction(1, 2 ** len(weights))


def parseval_sharp(factors: int) -> Fraction:
    """1/2^(N+2) for N+1 factors: half the true mean square.

    This is the mean square the sharper bound pi / 2^(1 + N/2) would need;
    kept so that the two forms can be compared side by side.
    """
    return Fraction(1, 2 ** (factors + 1))


def _panels(weights: Sequence[int], width_budget: float = 4.0) -> np.ndarray:
    """Breakpoints on [0, pi]: all zeros k pi / lambda_j, refined so each panel is smooth."""
    pts = {0.0, math.pi}
    for w in weights:
        w = abs(int(w))
        pts.update(k * math.pi / w for k in range(1, w))
    pts = np.array(sorted(pts))
    total = float(sum(abs(int(w)) for w in weights))
    out = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        pieces = max(1, math.ceil((b - a) * total / width_budget))
        out.append(np.linspace(a, b, pieces + 1)[1:])
    return np.concatenate(out)


def integrate_product(weights: Sequence[int], kind: str = "sin", power: int = 1) -> float:
    """int_0^pi |prod f(lambda_j x)|^power dx by Gauss-Legendre on smooth panels."""
    f = np.sin if kind == "sin" else np.cos
    edges = _panels(weights)
    a, b = edges[:-1], edges[1:]
    x = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * _GL_NODES[None, :]
    p = np.ones_like(x)
    for w in weights:
        p *= f(int(w) * x)
    vals = np.abs(p) ** power
    return float(np.sum((vals @ _GL_WEIGHTS) * 0.5 * (b - a)))


def l2_quadrature(weights: Sequence[int], kind: str = "sin") -> float:
    return integrate_product(weights, kind, power=2) / math.pi


def l1_upper_bound_check(weights: Sequence[int], sharp: bool = False) -> BoundCheck:
    """int_0^pi |prod sin(lambda_j x)| against the Parseval + Cauchy-Schwarz bound.

    With mean square 1/2^(N+1) the bound is pi / 2^((N+1)/2).  ``sharp=True``
    checks the sharper pi / 2^(1 + N/2) instead.
    """
    if not admissible(weights):
        raise DomainError(f"weights {list(weights)} are not admissible")
    big_n = len(weights) - 1
    bound = math.pi / 2 ** (1 + big_n / 2) if sharp else math.pi / 2 ** ((big_n + 1) / 2)
    value = integrate_product(weights, "sin", 1)
    name = "l1_parseval_sharp" if sharp else "l1_parseval"
    return BoundCheck(name, 0.0, value, bound, 0.0)


def norm_report(n: int, with_sup: bool = True) -> NormReport:
    """Sup, L1 and L2 data for the dyadic product P_n (n + 1 factors)."""
    report = sup_norm(2, n) if with_sup else NormReport(r=2, factor_count=n + 1)
    value, err = l1_norm(n)
    report.l1_estimate, report.l1_error_bound = value, err
    report.l2_exact = l2_norm([2**k for k in range(n + 1)])
    report.bound_checks.append(
        BoundCheck("l1_parseval", 0.0, value, math.pi / 2 ** ((n + 1) / 2), 0.0))
    return report
