"""Command-line front end.

Exit status: 0 when every requested check passed, 1 when a check failed,
2 for invalid arguments, 3 when a request exceeds a resource cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import mpmath
import numpy as np

from . import digits, equidist, norms, pte, series, signs, trigprod, wallis
from .errors import DomainError, NumericRangeError, ResourceError, SinefoldError
from .reports import dumps, merge_reports, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

SUBCOMMANDS = ("verify", "norms", "wallis", "pte", "equidist", "signs")

# Module operations each subcommand can reach.
DISPATCH: dict[str, tuple[Callable, ...]] = {
    "verify": (
        digits.bits, digits.digit_sum, digits.thue_morse, digits.signed_digits, digits.u_value,
        series.product_poly, series.sum_poly, series.check_corollary,
        series.check_step_identity, series.check_general_identity,
        series.minus_one_multiplicity,
        trigprod.eval_product, trigprod.cos_closed_form_check, trigprod.check_identity,
        trigprod.fourier_expansion,
    ),
    "norms": (
        norms.sup_norm, norms.x0_witness, norms.l1_norm, norms.l2_norm, norms.admissible,
        norms.l1_upper_bound_check, norms.rho_estimate,
    ),
    "wallis": (
        wallis.sin_moment, wallis.central_count, wallis.moment_recurrence_check,
        wallis.wallis_partial,
    ),
    "pte": (pte.multigrade_residuals, pte.prouhet_partition, pte.multigrade_from_weights),
    "equidist": (
        equidist.nearest_int_norm, equidist.weyl_sum, equidist.product_identity_check,
        equidist.zero_classifier, equidist.pisot_power_norms, equidist.star_discrepancy,
        equidist.equidist_experiment,
    ),
    "signs": (signs.sign_word_analytic, signs.morphism_word, signs.splitting_check),
}

VERIFY_GROUPS = ("digits", "exact", "step", "general") + trigprod.IDENTITIES + ("epsilon",)


@dataclass
class RunConfig:
    subcommand: str
    seed: int = 0
    fmt: str = "text"
    output: str | None = None
    tolerance: float | None = None
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise DomainError(f"unknown subcommand {self.subcommand!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.fmt not in ("json", "csv", "text"):
            raise DomainError(f"unknown format {self.fmt!r}")


@dataclass
class Outcome:
    payload: dict
    passed: bool
    csv_header: list[str]
    csv_rows: list[list]
    text_lines: list[str]


def thread_count() -> int:
    raw = os.environ.get("SINEFOLD_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, min(n, 64))


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map over a thread pool sized by SINEFOLD_THREADS."""
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _fmt_float(v) -> str:
    return "" if v is None else f"{float(v):.6g}"


# --- verify ------------------------------------------------------------------

def _digits_check(n: int) -> dict:
    size = 1 << n
    powers = [1 << q for q in range(n)]
    bad = 0
    for j in range(size):
        b = digits.bits(j, n)
        sd = digits.signed_digits(j, n)
        ok = (sum(d << q for q, d in enumerate(b.digits)) == j
              and sum(b.digits) == digits.digit_sum(j)
              and digits.thue_morse(j) == (-1) ** digits.digit_sum(j)
              and digits.u_value(j, powers) == j and sd.dyadic_sum() == 2 * j + 1 - size)
        bad += not ok
    return {"identity": "digits", "n": n, "samples": size, "max_residual": float(bad),
            "max_abs_residual": float(bad), "tolerance": 0.0, "passed": bad == 0}


def _exact_checks(n: int) -> list[dict]:
    out = []
    for k in range(1, n + 1):
        same = series.product_poly(k) == series.sum_poly(k)
        out.append({"identity": "product_equals_sum", "n": k, "samples": 1 << k,
                    "max_residual": 0.0 if same else 1.0, "max_abs_residual": 0.0 if same else 1.0,
                    "tolerance": 0.0, "passed": same})
    for a in (1, -1):
        out.append(merge_reports(series.check_corollary(k, a) for k in range(1, n + 1)).to_dict())
    mult = [series.minus_one_multiplicity(k) for k in range(1, n + 1)]
    bad = sum(m < k for k, m in zip(range(1, n + 1), mult))
    out.append({"identity": "minus_one_divisibility", "n": n, "samples": n,
                "max_residual": float(bad), "max_abs_residual": float(bad),
                "tolerance": 0.0, "passed": bad == 0})
    return out


_NON_DYADIC = ("cosh", "cos", "sinh", "sin", "sin-odd", "sinh-odd")


def _valid_counts(which: str, n_max: int) -> list[int]:
    if which in trigprod._EVEN_ONLY:
        return list(range(2, n_max + 1, 2))
    if which in trigprod._ODD_ONLY:
        return list(range(1, n_max + 1, 2))
    return list(range(1, n_max + 1))


def _trig_group(which: str, n_max: int, draws: int, seed: int, tol: float,
                form: str = "digits") -> dict:
    idx = VERIFY_GROUPS.index(which)
    counts = _valid_counts(which, n_max)
    reports = []
    for n in counts:
        rng = _rng(seed, idx, n)
        for _ in range(draws):
            if which in trigprod._DYADIC:
                spec = trigprod.ProductSpec.from_dyadic(n, float(rng.uniform(0.01, math.pi - 0.01)),
                                                        kind=trigprod._LEFT[which])
            else:
                w = tuple(float(v) for v in rng.uniform(-2.0, 2.0, n))
                spec = trigprod.ProductSpec(w, trigprod._LEFT[which])
            reports.append(trigprod.check_identity(which, spec, tol, form))
    merged = merge_reports(reports).to_dict()
    if form == "epsilon":
        merged["identity"] = f"{which}:epsilon"
    return merged


def _epsilon_groups(n_max: int, draws: int, seed: int, tol: float) -> list[dict]:
    out = [_trig_group(w, n_max, draws, seed, tol, "epsilon") for w in _NON_DYADIC]
    rng = _rng(seed, VERIFY_GROUPS.index("epsilon"))
    same = 0
    trials = 20
    for _ in range(trials):
        w = [int(v) for v in rng.integers(-20, 21, int(rng.integers(1, min(n_max, 8) + 1)))]
        same += trigprod.epsilon_multiset(w) == trigprod.digit_multiset(w)
    out.append({"identity": "epsilon_equals_digits", "n": min(n_max, 8), "samples": trials,
                "max_residual": float(trials - same), "max_abs_residual": float(trials - same),
                "tolerance": 0.0, "passed": same == trials})
    return out


def _closed_form_group(n_max: int, draws: int, seed: int, tol: float) -> dict:
    rng = _rng(seed, len(VERIFY_GROUPS))
    worst = 0.0
    count = 0
    for n in range(n_max + 1):
        for x in rng.uniform(0.05, math.pi - 0.05, draws):
            worst = max(worst, trigprod.cos_closed_form_check(n, float(x)))
            count += 1
    return {"identity": "cos_closed_form", "n": n_max, "samples": count, "max_residual": worst,
            "max_abs_residual": worst, "tolerance": tol, "passed": worst <= tol}


def _fourier_group(n_max: int, draws: int, seed: int, tol: float) -> dict:
    rng = _rng(seed, len(VERIFY_GROUPS) + 1)
    worst = 0.0
    for n in range(1, n_max + 1):
        xs = rng.uniform(0.0, math.pi, draws)
        spec = trigprod.ProductSpec.from_dyadic(n, 1.0)
        exp = trigprod.fourier_expansion(spec)
        direct = np.prod([np.sin(2.0**k * xs) for k in range(n)], axis=0)
        worst = max(worst, float(np.max(np.abs(exp.evaluate(xs) - direct))))
    return {"identity": "fourier_expansion", "n": n_max, "samples": n_max * draws,
            "max_residual": worst, "max_abs_residual": worst, "tolerance": tol,
            "passed": worst <= tol}


def run_verify(cfg: RunConfig) -> Outcome:
    o = cfg.options
    n_max, draws, tol = o["n"], o["draws"], cfg.tolerance or 1e-10
    if not 1 <= n_max <= 16:
        raise ResourceError("verify --n must lie in [1, 16]")
    wanted = VERIFY_GROUPS if "all" in o["identity"] else tuple(o["identity"])
    for w in wanted:
        if w not in VERIFY_GROUPS:
            raise DomainError(f"unknown identity group {w!r}")
    trig_n = min(n_max, 12)
    tasks: list[Callable[[], list[dict]]] = []
    for w in wanted:
        if w == "digits":
            tasks.append(lambda: [_digits_check(min(n_max, 12))])
        elif w == "exact":
            tasks.append(lambda: _exact_checks(n_max))
        elif w in ("step", "general"):
            tasks.append(lambda w=w: [merge_reports(
                series.sample_identity(w, k, draws, cfg.seed + 7919 * k, tol)
                for k in range(1, trig_n + 1)).to_dict()])
        elif w == "epsilon":
            tasks.append(lambda: _epsilon_groups(min(n_max, 10), max(1, draws // 4),
                                                 cfg.seed, tol))
        else:
            tasks.append(lambda w=w: [_trig_group(w, trig_n, draws, cfg.seed, tol)])
    if "all" in o["identity"]:
        tasks.append(lambda: [_closed_form_group(trig_n, draws, cfg.seed, tol),
                              _fourier_group(trig_n, draws, cfg.seed, 1e-12)])
    rows = [r for group in parallel_map(lambda t: t(), tasks) for r in group]
    rows = [to_jsonable(r) for r in rows]
    passed = all(r["passed"] for r in rows)
    header = ["identity", "n", "samples", "max_residual", "max_abs_residual", "tolerance", "passed"]
    text = [f"{r['identity']:<24} n<={r['n']:<3} samples={r['samples']:<6} "
            f"residual={r['max_residual']:.3e}  {'PASS' if r['passed'] else 'FAIL'}" for r in rows]
    payload = {"command": "verify", "seed": cfg.seed, "n": n_max, "draws": draws,
               "tolerance": tol, "reports": rows, "passed": passed}
    return Outcome(payload, passed, header, [[r[h] for h in header] for r in rows], text)


# --- norms -------------------------------------------------------------------

def run_norms(cfg: RunConfig) -> Outcome:
    o = cfg.options
    tol = cfg.tolerance or 1e-9
    payload: dict[str, Any] = {"command": "norms", "seed": cfg.seed}
    passed = True
    text: list[str] = []
    rows: list[list] = []
    if o["rho"]:
        fit = norms.rho_estimate(o["n_min"], o["n_max"])
        ok = fit.in_window and fit.rho_hat <= math.sqrt(2) / 2
        payload["rho"] = fit.to_dict() | {"passed": ok}
        passed &= ok
        text.append(f"rho_hat={fit.rho_hat:.7f} r2={fit.r_squared:.6f} "
                    f"window=({norms.RHO_LOW}, {norms.RHO_HIGH}) {'PASS' if ok else 'FAIL'}")
    if o["weights"]:
        lam = o["weights"]
        adm = norms.admissible(lam)
        entry: dict[str, Any] = {"lambda": lam, "admissible": adm}
        if adm:
            for kind in ("sin", "cos"):
                exact = norms.l2_norm(lam, kind)
                quad = norms.l2_quadrature(lam, kind)
                rel = abs(quad - float(exact)) / float(exact)
                entry[f"l2_{kind}"] = {"exact": exact, "quadrature": quad, "rel_diff": rel,
                                       "passed": rel <= tol}
                passed &= rel <= tol
            bound = norms.l1_upper_bound_check(lam)
            sharp = norms.l1_upper_bound_check(lam, sharp=True)
            entry["l1_bound"] = bound.to_dict()
            entry["l1_bound_sharp_form"] = sharp.to_dict()
            passed &= bound.passed
            text.append(f"lambda={lam} l2_sin={entry['l2_sin']['exact']} "
                        f"l1={bound.value:.6g} <= {bound.upper:.6g} "
                        f"{'PASS' if bound.passed else 'FAIL'}")
        else:
            text.append(f"lambda={lam} is not admissible")
        payload["weights"] = entry
    if not o["rho"] and not o["weights"]:
        r = o["r"]
        ns = list(range(o["n_min"], o["n_max"] + 1))
        if not ns or ns[0] < 0:
            raise DomainError("need 0 <= --n-min <= --n-max")
        if r == 2 and ns[-1] > norms.L1_CAP:
            raise ResourceError(f"--n-max exceeds the L1 cost cap {norms.L1_CAP}")

        def one(n: int):
            if r == 2:
                return norms.norm_report(n)
            return norms.sup_norm(r, n)

        reports = parallel_map(one, ns)
        payload["r"] = r
        if r % 2 == 0:
            payload["x0_witness"] = norms.x0_witness(r)
        payload["reports"] = [rep.to_dict() for rep in reports]
        for n, rep in zip(ns, reports):
            passed &= rep.passed
            rows.append([n, rep.sup_estimate, rep.l1_estimate,
                         None if rep.l2_exact is None else float(rep.l2_exact)])
            text.append(f"r={r} n={n:<3} sup={rep.sup_estimate:.12f} "
                        f"l1={_fmt_float(rep.l1_estimate)} {'PASS' if rep.passed else 'FAIL'}")
    payload["passed"] = passed
    return Outcome(payload, passed, ["n", "sup", "l1", "l2"], rows, text)


# --- wallis ------------------------------------------------------------------

def run_wallis(cfg: RunConfig) -> Outcome:
    o = cfg.options
    tol = cfg.tolerance or 1e-10
    moments = []
    for m in range(o["m_max"] + 1):
        mv = wallis.sin_moment(m)
        quad = wallis.sin_power_quad(2 * m)
        diff = abs(mv.value - quad)
        moments.append({"m": m, "exact": mv.rational_part, "quadrature": quad, "abs_diff": diff,
                        "passed": diff <= tol})
    counts = parallel_map(lambda m: (m, wallis.central_count(m), math.comb(2 * m, m)),
                          list(range(o["count_max"] + 1)))
    count_rows = [{"m": m, "count": c, "binomial": b, "passed": c == b} for m, c, b in counts]
    rec = wallis.moment_recurrence_check(o["recurrence"], tol=max(tol, 1e-9))
    partial_rows = wallis.wallis_rows(o["partials"])
    partials = [{"n": n, "value": v, "rel_error": abs(err) / mpmath.pi,
                 "passed": abs(err) / mpmath.pi < 1.0 / n} for n, v, err in partial_rows]
    passed = (all(m["passed"] for m in moments) and all(c["passed"] for c in count_rows)
              and rec.passed and all(p["passed"] for p in partials))
    payload = {"command": "wallis", "seed": cfg.seed, "moments": moments,
               "central_counts": count_rows, "recurrence": rec.to_dict(),
               "partials": partials, "passed": passed}
    text = [f"moments m<={o['m_max']}: max diff "
            f"{max(m['abs_diff'] for m in moments):.3e}",
            f"central counts m<={o['count_max']}: "
            f"{'all match' if all(c['passed'] for c in count_rows) else 'MISMATCH'}",
            f"recurrence n<={o['recurrence']}: residual {rec.max_product_residual:.3e}",
            *[f"wallis_partial({p['n']}) = {mpmath.nstr(p['value'], 20)}" for p in partials],
            "PASS" if passed else "FAIL"]
    rows = [[n, mpmath.nstr(v, 30), mpmath.nstr(err, 10)] for n, v, err in partial_rows]
    return Outcome(payload, passed, ["n", "wallis_partial", "error_vs_pi"], rows, text)


# --- pte ---------------------------------------------------------------------

def run_pte(cfg: RunConfig) -> Outcome:
    o = cfg.options
    payload: dict[str, Any] = {"command": "pte", "seed": cfg.seed}
    passed = True
    text: list[str] = []
    rows: list[list] = []
    if o["weights"]:
        w = pte.multigrade_residuals(o["weights"], min(2 * len(o["weights"]), len(o["weights"]) + 2))
        pair = pte.multigrade_from_weights(o["weights"])
        payload["certificate"] = w.to_dict()
        payload["pair"] = pair.to_dict()
        passed &= w.vanishing_ok and bool(w.pivot_ok)
        text.append(f"lambda={list(w.weights)} pivot={w.residuals[w.length]} "
                    f"expected={w.pivot_expected} degree={pair.degree}")
    rng = _rng(cfg.seed, 1)
    lo, hi = o["len_min"], o["len_max"]
    if not 1 <= lo <= hi:
        raise DomainError("need 1 <= --len-min <= --len-max")
    draws = []
    for _ in range(o["random"]):
        L = int(rng.integers(lo, hi + 1))
        draws.append([int(v) for v in rng.integers(-o["max_weight"], o["max_weight"] + 1, L)])
    witnesses = parallel_map(lambda lam: pte.multigrade_residuals(lam, len(lam) + 1), draws)
    bad = [wt.to_dict() for wt in witnesses if not (wt.vanishing_ok and wt.pivot_ok)]
    payload["random"] = {"count": len(witnesses), "failures": bad}
    passed &= not bad
    for wt in witnesses:
        rows.append([" ".join(map(str, wt.weights)), wt.length, wt.residuals[wt.length],
                     wt.pivot_expected, wt.vanishing_ok and wt.pivot_ok])
    text.append(f"random witnesses: {len(witnesses)} checked, {len(bad)} failures")
    parts = parallel_map(pte.prouhet_partition, list(range(1, o["prouhet_max"] + 1)))
    payload["prouhet"] = [p.to_dict() for p in parts]
    ok = all(p.equal_below_n and p.differs_at_n for p in parts)
    passed &= ok
    text.append(f"prouhet partitions n<={o['prouhet_max']}: {'PASS' if ok else 'FAIL'}")
    payload["passed"] = passed
    return Outcome(payload, passed, ["lambda", "length", "pivot", "expected", "ok"], rows, text)


# --- equidist ----------------------------------------------------------------

def _pisot_check(q_min: int, q_max: int, tol: float) -> dict:
    """pisot_power_norms for the golden ratio against phi^-q evaluated directly."""
    got = equidist.pisot_power_norms(equidist.GOLDEN, 1, q_max + 1)
    with mpmath.workprec(512):
        phi = (1 + mpmath.sqrt(5)) / 2
        worst = max(abs(float(got[q] - phi ** (-q))) for q in range(q_min, q_max + 1))
    return {"q_range": [q_min, q_max], "max_abs_diff": worst, "tolerance": tol,
            "passed": worst <= tol}


def _identity_triples(count: int, seed: int, tol: float) -> dict:
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 15))
        ell = int(rng.choice([-1, 1]) * rng.integers(1, 50))
        w = rng.uniform(0.0, 4.0, n)
        worst = max(worst, equidist.product_identity_check(ell, n, w))
    return {"count": count, "max_residual": worst, "tolerance": tol, "passed": worst <= tol}


def run_equidist(cfg: RunConfig) -> Outcome:
    o = cfg.options
    tol = cfg.tolerance or 1e-10
    theta = o["theta"]
    report = equidist.equidist_experiment(theta, o["x"], o["n"], o["terms"], o["prec"])
    payload: dict[str, Any] = {"command": "equidist", "seed": cfg.seed,
                               "experiment": report.to_dict()}
    passed = True
    if o["identity_checks"]:
        ident = _identity_triples(o["identity_checks"], cfg.seed, tol)
        payload["identity_checks"] = ident
        passed &= ident["passed"]
    if o["pisot_q_max"]:
        pc = _pisot_check(o["pisot_q_min"], o["pisot_q_max"], 1e-12)
        payload["pisot_norms"] = pc
        passed &= pc["passed"]
    payload["passed"] = passed
    c = report.classification
    text = [f"theta={report.theta} x={report.x} n={report.n} pisot={report.pisot}",
            f"star discrepancy D* = {report.star_discrepancy:.6g}",
            f"classifier: {c.verdict.value} (square sum {c.square_sum:.4g})"]
    if "identity_checks" in payload:
        text.append(f"product identity: max residual {payload['identity_checks']['max_residual']:.3e}")
    if "pisot_norms" in payload:
        text.append(f"pisot norms: max diff {payload['pisot_norms']['max_abs_diff']:.3e}")
    rows: list[list] = []
    if cfg.fmt == "csv":
        samples = equidist.experiment_samples(theta, o["x"], o["n"], o["prec"])
        rows = [[j, repr(float(v))] for j, v in enumerate(samples)]
    return Outcome(payload, passed, ["j", "sample"], rows, text)


# --- signs -------------------------------------------------------------------

def run_signs(cfg: RunConfig) -> Outcome:
    o = cfg.options
    n_max, split_max = o["n"], o["splitting"]
    if n_max > 20:
        raise ResourceError("signs --n must be at most 20")

    def compare(n: int) -> bool:
        a = signs.sign_word_analytic(n)
        return a == signs.morphism_word(n) == signs.thue_morse_word(n)

    agree = parallel_map(compare, list(range(n_max + 1)))
    splits = parallel_map(signs.splitting_check, list(range(min(split_max, n_max) + 1)))
    passed = all(agree) and all(s.passed for s in splits)
    word = signs.sign_word_analytic(o["word"]) if o["word"] is not None else None
    payload: dict[str, Any] = {
        "command": "signs", "seed": cfg.seed,
        "agreement": {str(n): ok for n, ok in enumerate(agree)},
        "splitting": [s.to_dict() for s in splits],
        "passed": passed,
    }
    if word is not None:
        payload["word"] = {"n": word.n, "signs": str(word)}
    text = [f"analytic = morphism = Thue-Morse for n<={n_max}: {all(agree)}",
            f"splitting relations n<={min(split_max, n_max)}: "
            f"{sum(s.relations_checked for s in splits)} checked, "
            f"{sum(s.failures for s in splits)} failures"]
    if word is not None:
        text.append(str(word))
    rows = [[j, s] for j, s in enumerate(word.word)] if word is not None else []
    return Outcome(payload, passed, ["j", "sign"], rows, text)


RUNNERS = {"verify": run_verify, "norms": run_norms, "wallis": run_wallis, "pte": run_pte,
           "equidist": run_equidist, "signs": run_signs}


# --- argument parsing --------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random draws")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="override the check tolerance")

    parser = argparse.ArgumentParser(prog="sinefold", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("verify", parents=[common], help="identity checks")
    p.add_argument("--identity", nargs="+", default=["all"],
                   choices=("all",) + VERIFY_GROUPS)
    p.add_argument("--n", type=int, default=12, help="largest factor count")
    p.add_argument("--draws", type=int, default=100, help="random draws per factor count")

    p = sub.add_parser("norms", parents=[common], help="sup, L1 and L2 norms")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--rho", action="store_true", help="fit the L1 growth rate")
    p.add_argument("--lambda", dest="weights", type=_int_list, default=None,
                   help="weights for the Parseval checks, e.g. '1,3,9'")

    p = sub.add_parser("wallis", parents=[common], help="sine moments and Wallis' formula")
    p.add_argument("--m-max", type=int, default=20)
    p.add_argument("--count-max", type=int, default=10)
    p.add_argument("--recurrence", type=int, default=100)
    p.add_argument("--partials", type=_int_list, default=[10, 100, 1000])

    p = sub.add_parser("pte", parents=[common], help="multigrade equalities")
    p.add_argument("--lambda", dest="weights", type=_int_list, default=None)
    p.add_argument("--random", type=int, default=100)
    p.add_argument("--len-min", type=int, default=2)
    p.add_argument("--len-max", type=int, default=12)
    p.add_argument("--max-weight", type=int, default=50)
    p.add_argument("--prouhet-max", type=int, default=10)

    p = sub.add_parser("equidist", parents=[common], help="digit-weighted sums mod 1")
    p.add_argument("--theta", default="golden", help="golden, silver, sqrt2, or a number")
    p.add_argument("--x", default="1")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--terms", type=int, default=1024, help="classifier terms")
    p.add_argument("--prec", type=int, default=None, help="working precision in bits")
    p.add_argument("--identity-checks", type=int, default=0)
    p.add_argument("--pisot-q-min", type=int, default=10)
    p.add_argument("--pisot-q-max", type=int, default=0)

    p = sub.add_parser("signs", parents=[common], help="sign words of the dyadic product")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--splitting", type=int, default=14)
    p.add_argument("--word", type=int, default=None, help="print the sign word for this n")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"subcommand", "seed", "fmt", "output", "tol"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    if "x" in options:
        options["x"] = _parse_x(options["x"])
    return RunConfig(args.subcommand, args.seed, args.fmt or "text", args.output, args.tol,
                     options)


def _parse_x(text: str):
    try:
        return Fraction(text)
    except ValueError as exc:
        raise DomainError(f"--x must be a rational number, got {text!r}") from exc


def render(outcome: Outcome, cfg: RunConfig) -> str:
    if cfg.fmt == "json":
        return dumps(outcome.payload) + "\n"
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(outcome.csv_header)
        writer.writerows(outcome.csv_rows)
        return buf.getvalue()
    return "\n".join(outcome.text_lines) + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns (exit status, rendered report)."""
    outcome = RUNNERS[cfg.subcommand](cfg)
    return (EXIT_OK if outcome.passed else EXIT_FAIL), render(outcome, cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        cfg = config_from_args(args)
        status, text = run(cfg)
    except ResourceError as exc:
        print(f"sinefold: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, NumericRangeError, ValueError) as exc:
        print(f"sinefold: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SinefoldError as exc:
        print(f"sinefold: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
