"""Independent high-precision checks of the counting pipeline.

These are oracles, not part of the certified path: the sampling check
screens the sign pattern of L on a dense grid with float64 and escalates
every ambiguous point to mpmath, and the n = 1 oracle recounts a univariate
input by direct certified root isolation. Both fail loudly on mismatch.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .counter import PolySystem, count_positive_ex, count_torus_ex
from .unipoly import isolate_real_roots, refine, sign_at, squarefree_part, trim

__all__ = ["direct_univariate_counts", "sampling_consistency", "verify_report"]


def direct_univariate_counts(system: PolySystem) -> tuple[int, int]:
    """(positive, nonzero-real) distinct-root counts of a 1 x 1 system."""
    if system.n != 1:
        raise ValueError("direct isolation oracle only applies to n = 1")
    es = [p[0] for p in system.support.points]
    cs = system.coeffs[0]
    shift = min(es)  # allow negative (Laurent) exponents
    f = [0] * (max(es) - shift + 1)
    for e, c in zip(es, cs):
        f[e - shift] = c
    f = trim(f)
    p = squarefree_part(f)
    zero_root = sign_at(p, Fraction(0)) == 0
    npos = nneg = 0
    for iv in isolate_real_roots(f):
        if zero_root and iv.lo < 0 < iv.hi:
            continue
        cur = iv
        while cur.lo < 0 < cur.hi:
            cur = refine(p, cur, cur.width() / 4)
        if cur.lo >= 0:
            npos += 1
        else:
            nneg += 1
    return npos, npos + nneg


def _mp_sign(terms, u: Fraction, dps: int = 80) -> int:
    with mpmath.workdps(dps):
        acc = mpmath.mpf(0)
        for b, g1, g0 in terms:
            v = (
                mpmath.mpf(g1.numerator) / g1.denominator * mpmath.mpf(u.numerator)
                / u.denominator
                + mpmath.mpf(g0.numerator) / g0.denominator
            )
            if v == 0:
                return 0
            acc += b * mpmath.log(abs(v))
        if abs(acc) < mpmath.mpf(10) ** (10 - dps):
            return 0
        return 1 if acc > 0 else -1


def _cell_points(lo: Optional[Fraction], hi: Optional[Fraction], n: int) -> np.ndarray:
    if lo is not None and hi is not None:
        lo_f, hi_f = float(lo), float(hi)
        return lo_f + (hi_f - lo_f) * (np.arange(1, n + 1) / (n + 1))
    t = np.linspace(-25.0, 25.0, n)
    if lo is None and hi is None:
        return t
    if lo is None:
        return float(hi) - np.exp(t)
    return float(lo) + np.exp(t)


def sampling_consistency(
    terms: Sequence[tuple[int, Fraction, Fraction]],
    cells: Sequence[dict],
    total_points: int = 100_000,
    dps: int = 80,
) -> list[str]:
    """Check reported per-cell sign data of L against a dense sample.

    ``cells`` entries carry lo/hi (Fraction or None) plus, when the cell was
    counted, the reported ``changes`` and ``degenerate`` numbers. A sampled
    sign pattern showing more sign changes than changes+degenerate in any
    counted cell is a violation. Ambiguous float points are escalated to
    mpmath before they are allowed to influence the pattern.
    """
    counted = [c for c in cells if "changes" in c]
    if not counted:
        return []
    per_cell = max(64, total_points // len(counted))
    bs = np.array([float(b) for b, _, _ in terms])
    g1s = np.array([float(g1) for _, g1, _ in terms])
    g0s = np.array([float(g0) for _, _, g0 in terms])
    violations = []
    for cell in counted:
        lo, hi = cell["lo"], cell["hi"]
        us = _cell_points(lo, hi, per_cell)
        args = np.abs(np.outer(us, g1s) + g0s)
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log(args)
            vals = logs @ bs
        # float error budget: relative log error plus cancellation slack
        tol = (np.abs(logs) + 1.0) @ np.abs(bs) * 1e-12
        signs = []
        for u, v, t in zip(us, vals, tol):
            if not np.isfinite(v) or abs(v) <= t:
                s = _mp_sign(terms, Fraction(float(u)), dps)
            else:
                s = 1 if v > 0 else -1
            if s != 0:
                signs.append(s)
        observed = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
        allowed = cell["changes"] + cell.get("degenerate", 0)
        if observed > allowed:
            violations.append(
                f"cell ({lo}, {hi}): sampled {observed} sign changes, reported {allowed}"
            )
    return violations


def verify_report(system: PolySystem, targets: Sequence[str]) -> dict:
    """Run every applicable oracle; raises AssertionError on a mismatch."""
    out: dict = {}
    if system.n == 1:
        npos, ntor = direct_univariate_counts(system)
        out["direct_isolation"] = {"positive": npos, "torus": ntor}
        if "positive" in targets:
            res, _ = count_positive_ex(system)
            if res.is_finite and res.count != npos:
                raise AssertionError(
                    f"positive count {res.count} disagrees with direct isolation {npos}"
                )
        if "torus" in targets:
            res, _ = count_torus_ex(system)
            if res.is_finite and res.count != ntor:
                raise AssertionError(
                    f"torus count {res.count} disagrees with direct isolation {ntor}"
                )
    if system.t == system.n + 2:
        for target, runner in (("positive", count_positive_ex), ("torus", count_torus_ex)):
            if target not in targets:
                continue
            res, details = runner(system)
            if not res.is_finite or "log_terms" not in details:
                continue
            violations = sampling_consistency(details["log_terms"], details["cells"])
            out[f"sampling_{target}"] = "ok" if not violations else violations
            if violations:
                raise AssertionError(f"sampling inconsistency ({target}): {violations}")
    return out
