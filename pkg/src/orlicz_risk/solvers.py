"""Scalar and small-dimensional convex optimization primitives.

Everything here is deterministic and stateless: bisection on monotone
functions, golden-section minimization with bracket expansion and
non-attainment detection, and projected-gradient maximization of concave
functions over a weighted probability simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, ConvergenceError, ParameterError

__all__ = [
    "SolveReport",
    "bisect_monotone",
    "golden_min",
    "simplex_max",
    "project_weighted_simplex",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a solve.  `attained` is False when the optimum is only
    approached at a boundary or in an expansion limit; `boundary` names the
    side ('left'/'right') when that happens."""

    arg: object
    value: float
    iterations: int
    converged: bool
    attained: bool = True
    boundary: str | None = None


def bisect_monotone(f: Callable[[float], float], target: float,
                    lo: float, hi: float, rel_tol: float = 1e-10,
                    max_expand: int = 60) -> SolveReport:
    """Smallest point where the nonincreasing function f drops to <= target.

    The bracket is expanded geometrically (halving lo, doubling hi, at most
    `max_expand` steps each way) until f(lo) > target >= f(hi).  If f never
    exceeds target even far left, the original lo endpoint is reported; if f
    never reaches target on the right, a BracketError is raised.
    """
    evals = 0

    def ff(x: float) -> float:
        nonlocal evals
        evals += 1
        return f(x)

    lo0 = lo
    flo = ff(lo)
    if flo <= target:
        probe = lo * 2.0 ** (-max_expand)
        if ff(probe) <= target:
            # degenerate: the whole expanded range sits below target
            return SolveReport(lo0, flo, evals, True)
        hi = lo
        lo = probe
        flo = ff(lo)
        # tighten the lower edge back up
        while lo * 2.0 < hi and ff(lo * 2.0) > target:
            lo *= 2.0
        fhi = ff(hi)
    else:
        fhi = ff(hi)
        expansions = 0
        while fhi > target:
            if expansions >= max_expand:
                raise BracketError(
                    f"f stayed above {target} after {max_expand} doublings (last f={fhi})"
                )
            lo = hi
            hi *= 2.0
            fhi = ff(hi)
            expansions += 1

    while hi - lo > rel_tol * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        if ff(mid) <= target:
            hi, fhi = mid, None
        else:
            lo = mid
    if fhi is None:
        fhi = ff(hi)
    return SolveReport(hi, fhi, evals, True)


def golden_min(f: Callable[[float], float], lo: float, hi: float, *,
               rel_tol: float = 1e-10, expand_left: bool = True,
               expand_right: bool = True, expand_factor: float = 4.0,
               max_expand: int = 200,
               limit_rel_improvement: float = 1e-12) -> SolveReport:
    """Minimize a unimodal f.  The bracket grows by `expand_factor` toward a
    downhill edge; when successive expansions improve the running minimum by
    less than `limit_rel_improvement` relative, the edge value is reported as
    a non-attained limit.  Hitting the expansion cap while still improving
    returns converged=False (the objective looks unbounded)."""
    evals = 0
    best_x = None
    best_f = math.inf

    def ff(x: float) -> float:
        nonlocal evals, best_x, best_f
        evals += 1
        v = f(x)
        if v < best_f:
            best_f, best_x = v, x
        return v

    a, b = float(lo), float(hi)
    fa, fb = ff(a), ff(b)
    m = 0.5 * (a + b)
    fm = ff(m)

    boundary = None
    attained = True
    converged = True
    expansions = 0
    while fm > min(fa, fb):
        side = "right" if fb < fa else "left"
        if side == "right" and not expand_right:
            break
        if side == "left" and not expand_left:
            break
        if expansions >= max_expand:
            boundary, attained, converged = side, False, False
            break
        span = (b - a) * (expand_factor - 1.0)
        if abs(b + span) > 1e300 or abs(a - span) > 1e300:
            boundary, attained, converged = side, False, False
            break
        prev_best = best_f
        if side == "right":
            a, fa, m, fm = m, fm, b, fb
            b = b + span
            fb = ff(b)
        else:
            b, fb, m, fm = m, fm, a, fa
            a = a - span
            fa = ff(a)
        expansions += 1
        # a limit (non-attained infimum) shows up as stalled improvement with
        # the new edge still sitting at the running minimum; an overshot
        # interior minimum leaves the new edge strictly above it instead
        slack = limit_rel_improvement * max(abs(best_f), 1e-30)
        edge_f = fb if side == "right" else fa
        if prev_best - best_f <= slack and edge_f <= best_f + slack:
            boundary, attained = side, False
            break

    if boundary is None:
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc, fd = ff(c), ff(d)
        while (b - a) > rel_tol * (abs(a) + abs(b) + 1.0):
            if fc < fd:
                b, fb = d, fd
                d, fd = c, fc
                c = b - _GOLDEN * (b - a)
                fc = ff(c)
            else:
                a, fa = c, fc
                c, fc = d, fd
                d = a + _GOLDEN * (b - a)
                fd = ff(d)
        tol_width = rel_tol * (abs(a) + abs(b) + 1.0)
        if not expand_left and abs(best_x - lo) <= tol_width:
            boundary, attained = "left", False
        elif not expand_right and abs(best_x - hi) <= tol_width:
            boundary, attained = "right", False

    return SolveReport(best_x, best_f, evals, converged, attained, boundary)


def project_weighted_simplex(v: np.ndarray, w: np.ndarray,
                             total: float = 1.0) -> np.ndarray:
    """Euclidean projection of v onto {q >= 0, sum(w*q) = total} for positive
    weights w, via the exact sorting algorithm.

    KKT gives q = max(0, v - theta*w); the support consists of the largest
    ratios v/w, and theta solves sum(w*(v - theta*w)) = total over the
    support.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    order = np.argsort(-(v / w), kind="stable")
    wv = (w * v)[order]
    ww = (w * w)[order]
    cum_wv = np.cumsum(wv)
    cum_ww = np.cumsum(ww)
    ratios = (v / w)[order]
    theta = None
    n = v.size
    for k in range(n):
        cand = (cum_wv[k] - total) / cum_ww[k]
        below = ratios[k + 1] if k + 1 < n else -math.inf
        if ratios[k] > cand >= below:
            theta = cand
            break
    if theta is None:
        theta = (cum_wv[-1] - total) / cum_ww[-1]
    q = np.maximum(v - theta * w, 0.0)
    # tiny negatives from float noise are clipped above; renormalization is
    # left to callers that need the constraint at machine precision
    return q


def simplex_max(g: Callable[[np.ndarray], float], weights: Sequence[float], *,
                grad: Callable[[np.ndarray], np.ndarray] | None = None,
                rel_tol: float = 1e-10, x_tol: float = 1e-9,
                max_iter: int = 100_000,
                q0: np.ndarray | None = None) -> SolveReport:
    """Maximize a concave g over the weighted simplex {q >= 0, sum(w*q) = 1}
    by projected-gradient ascent with Armijo backtracking.

    Infeasible or infinite objective values are rejected inside the line
    search, which keeps hard domain restrictions (inf penalties) explicit.
    Gradients default to central finite differences.
    """
    w = np.asarray(weights, dtype=float)
    n = w.size
    if n > 64:
        raise ParameterError(f"simplex_max handles at most 64 coordinates, got {n}")
    q = project_weighted_simplex(np.ones(n) if q0 is None else np.asarray(q0, float), w)
    fq = g(q)
    if not math.isfinite(fq):
        raise ConvergenceError("objective is not finite at the starting density", best=q)

    def numeric_grad(point: np.ndarray) -> np.ndarray:
        out = np.empty(n)
        for i in range(n):
            h = 1e-7 * (1.0 + abs(point[i]))
            up = point.copy()
            dn = point.copy()
            up[i] += h
            dn[i] = max(dn[i] - h, 0.0)
            gu, gd = g(up), g(dn)
            if not (math.isfinite(gu) and math.isfinite(gd)):
                h = 1e-9 * (1.0 + abs(point[i]))
                up = point.copy()
                up[i] += h
                gu, gd = g(up), g(point)
                dn = point
            out[i] = (gu - gd) / (up[i] - dn[i])
        return out

    gradient = grad if grad is not None else numeric_grad

    def stationary(point: np.ndarray, gr: np.ndarray) -> bool:
        # unit-step projected-gradient mapping: zero (up to clipping noise)
        # exactly at KKT points, large wherever mass still wants to move
        pg = project_weighted_simplex(point + gr, w) - point
        return float(np.max(np.abs(pg))) <= 1e3 * x_tol

    step = 1.0
    stall = 0
    resets = 0
    for it in range(1, max_iter + 1):
        gr = gradient(q)
        accepted = False
        trial_step = step
        for _ in range(60):
            cand = project_weighted_simplex(q + trial_step * gr, w)
            fc = g(cand)
            move = cand - q
            if math.isfinite(fc) and fc >= fq + 1e-4 * float(np.dot(gr, move)):
                accepted = True
                break
            trial_step *= 0.5
        if not accepted:
            if stationary(q, gr):
                return SolveReport(q, fq, it, True)
            # the line search is jammed by coordinates living on a vastly
            # smaller scale; retry once from a fresh step before giving up
            if resets < 3:
                resets += 1
                step = 1.0
                continue
            raise ConvergenceError(
                "line search jammed at a non-stationary density",
                best=SolveReport(q, fq, it, False),
            )
        improvement = fc - fq
        displacement = float(np.max(np.abs(move)))
        q, fq = cand, fc
        step = min(trial_step * 2.0, 1e6)
        if improvement <= rel_tol * (1.0 + abs(fq)) and displacement <= x_tol:
            stall += 1
            if stall >= 3:
                if stationary(q, gradient(q)):
                    return SolveReport(q, fq, it, True)
                if resets < 3:
                    resets += 1
                    stall = 0
                    step = 1.0
                    continue
                raise ConvergenceError(
                    "progress stalled at a non-stationary density",
                    best=SolveReport(q, fq, it, False),
                )
        else:
            stall = 0
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations", best=SolveReport(q, fq, max_iter, False)
    )
