"""Young functions and their conjugates.

A Young function is a convex nondecreasing map phi: [0, inf) -> [0, inf] with
phi(0) = 0, finite near 0, and phi(t) -> inf.  +inf is a first-class value
here; multiplying 0 by inf is trapped as a contract violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import ContractError, ParameterError
from . import solvers

__all__ = [
    "YoungFn",
    "make_power",
    "make_linf",
    "make_exp",
    "make_piecewise",
    "young_from_spec",
    "conjugate",
    "conjugate_young_fn",
    "validate",
    "YoungValidation",
    "ext_mul",
]

INF = math.inf

# exp(t) overflows float64 beyond this
_EXP_OVERFLOW = 709.0


def ext_mul(a: float, b: float) -> float:
    """Extended-real product; 0*inf is undefined and trapped."""
    if (a == 0.0 and math.isinf(b)) or (b == 0.0 and math.isinf(a)):
        raise ContractError("0 * inf is undefined in extended-real arithmetic")
    return a * b


@dataclass(frozen=True, eq=False)
class YoungFn:
    """A Young function with metadata used by the norm and conjugate solvers.

    finite_sup     sup of {t : phi(t) < inf} (inf for finite-everywhere phi)
    sup_slope      lim phi(t)/t, the largest slope (domain bound of phi*)
    step_threshold set when phi is 0 below a threshold and inf at/above it;
                   such functions admit an exact sup-norm formula
    """

    eval: Callable[[float], float]
    finite_sup: float
    conjugate_closed_form: Callable[[float], float] | None
    family_tag: str
    sup_slope: float = INF
    step_threshold: float | None = None
    params: Mapping[str, object] = field(default_factory=dict)

    def __call__(self, t: float) -> float:
        return self.eval(t)


def make_power(p: float) -> YoungFn:
    """phi(t) = t**p for p >= 1.  Conjugate: (p-1)*(s/p)**(p/(p-1)) for p > 1;
    for p = 1 the conjugate is 0 on [0, 1] and inf beyond."""
    p = float(p)
    if p < 1.0:
        raise ParameterError(f"power exponent must be >= 1, got {p}")
    if p == 1.0:

        def phi(t: float) -> float:
            return t

        def conj(s: float) -> float:
            return 0.0 if s <= 1.0 else INF

        return YoungFn(phi, INF, conj, "power", sup_slope=1.0, params={"p": 1.0})

    q = p / (p - 1.0)

    def phi(t: float) -> float:
        try:
            return t ** p
        except OverflowError:
            return INF

    def conj(s: float) -> float:
        try:
            return (p - 1.0) * (s / p) ** q
        except OverflowError:
            return INF

    return YoungFn(phi, INF, conj, "power", sup_slope=INF, params={"p": p})


def make_linf() -> YoungFn:
    """phi(t) = 0 for t < 1, inf for t >= 1.  Its Luxemburg norm is the
    conditional essential supremum; the conjugate is phi*(s) = s."""

    def phi(t: float) -> float:
        return 0.0 if t < 1.0 else INF

    def conj(s: float) -> float:
        return s

    return YoungFn(phi, 1.0, conj, "linf", sup_slope=INF, step_threshold=1.0)


def make_exp(scale: float = 1.0) -> YoungFn:
    """phi(t) = exp(scale*t) - 1.  Conjugate (for scale 1):
    phi*(s) = s*log(s) - s + 1 for s >= 1, and 0 on [0, 1]."""
    scale = float(scale)
    if scale <= 0.0:
        raise ParameterError(f"exp scale must be positive, got {scale}")

    def phi(t: float) -> float:
        u = scale * t
        if u > _EXP_OVERFLOW:
            return INF
        return math.expm1(u)

    def conj(s: float) -> float:
        # sup_t (s*t - expm1(scale*t)), attained at t = log(s/scale)/scale
        if s <= scale:
            return 0.0
        t_star = math.log(s / scale) / scale
        return s * t_star - math.expm1(scale * t_star)

    return YoungFn(phi, INF, conj, "exp", sup_slope=INF, params={"scale": scale})


def make_piecewise(knots, slopes) -> YoungFn:
    """Convex piecewise-linear Young function: slopes[i] applies on
    [knots[i-1], knots[i]] with knots[-1] extended to infinity.  Slopes must
    be nonnegative, nondecreasing, and end positive."""
    knots = [float(k) for k in knots]
    slopes = [float(m) for m in slopes]
    if len(slopes) != len(knots) + 1:
        raise ParameterError("need len(knots) + 1 slopes")
    if any(k <= 0 for k in knots) or any(b <= a for a, b in zip(knots, knots[1:])):
        raise ParameterError("knots must be positive and strictly increasing")
    if any(m < 0 for m in slopes) or any(b < a for a, b in zip(slopes, slopes[1:])):
        raise ParameterError("slopes must be nonnegative and nondecreasing")
    if slopes[-1] <= 0:
        raise ParameterError("final slope must be positive so the function diverges")

    bounds = [0.0] + knots
    base = [0.0]
    for i in range(len(knots)):
        base.append(base[i] + slopes[i] * (bounds[i + 1] - bounds[i]))

    def phi(t: float) -> float:
        for i in range(len(knots)):
            if t <= bounds[i + 1]:
                return base[i] + slopes[i] * (t - bounds[i])
        return base[-1] + slopes[-1] * (t - bounds[-1])

    return YoungFn(
        phi,
        INF,
        None,
        "piecewise",
        sup_slope=slopes[-1],
        params={"knots": tuple(knots), "slopes": tuple(slopes)},
    )


def young_from_spec(spec: Mapping) -> YoungFn:
    """Build a Young function from a scenario entry
    {"family": "power"|"linf"|"exp"|"piecewise", "params": {...}}."""
    family = spec.get("family")
    params = spec.get("params", {})
    if family == "power":
        return make_power(params["p"])
    if family == "linf":
        return make_linf()
    if family == "exp":
        return make_exp(params.get("scale", 1.0))
    if family == "piecewise":
        return make_piecewise(params["knots"], params["slopes"])
    raise ParameterError(f"unknown Young family {family!r}")


def conjugate(phi: YoungFn, s: float, use_closed_form: bool = True,
              rel_tol: float = 1e-10) -> float:
    """Conjugate value phi*(s) = sup_{t >= 0} (s*t - phi(t)).

    Uses the closed form when the family provides one, otherwise maximizes the
    concave objective by golden section with bracket expansion (factor 4, at
    most 200 expansions); an objective still improving at the expansion cap is
    reported as inf."""
    if s < 0.0:
        raise ParameterError(f"conjugate argument must be >= 0, got {s}")
    if s == 0.0:
        return 0.0
    if use_closed_form and phi.conjugate_closed_form is not None:
        return phi.conjugate_closed_form(s)

    def neg_obj(t: float) -> float:
        v = phi.eval(t)
        if math.isinf(v):
            return INF
        return v - s * t

    if math.isinf(phi.finite_sup):
        hi0 = max(1.0, 1.0 / s)
        report = solvers.golden_min(
            neg_obj, 0.0, hi0, rel_tol=rel_tol, expand_left=False,
            expand_right=True, expand_factor=4.0, max_expand=200,
        )
        if report.boundary == "right" and not report.converged:
            return INF
        return -report.value
    # finite domain: stay strictly below the (possibly infinite) boundary
    hi = phi.finite_sup
    if math.isinf(phi.eval(hi)):
        hi = hi * (1.0 - 1e-12)
    report = solvers.golden_min(
        neg_obj, 0.0, hi, rel_tol=rel_tol, expand_left=False, expand_right=False,
    )
    return -report.value


def conjugate_young_fn(phi: YoungFn) -> YoungFn:
    """The conjugate as a Young function in its own right.  Its finite domain
    ends at phi's largest slope, and its own conjugate is phi back."""

    def conj_eval(s: float) -> float:
        if s > phi.sup_slope:
            return INF
        return conjugate(phi, s)

    # the conjugate of a linear phi is a pure step: 0 up to the slope, inf beyond
    step = None
    if phi.family_tag == "power" and phi.params.get("p") == 1.0:
        step = 1.0
    elif phi.family_tag == "piecewise" and len(set(phi.params["slopes"])) == 1:
        step = phi.sup_slope
    return YoungFn(
        conj_eval,
        phi.sup_slope,
        phi.eval,
        phi.family_tag + "*",
        sup_slope=phi.finite_sup,
        step_threshold=step,
    )


@dataclass(frozen=True)
class YoungValidation:
    passed: bool
    origin_ok: bool
    finite_near_zero: bool
    monotone_ok: bool
    convex_ok: bool
    diverges: bool
    first_violation: tuple | None


def validate(phi: YoungFn, n_grid: int = 48) -> YoungValidation:
    """Check the defining properties on a sampled geometric grid: phi(0) = 0
    exactly, monotonicity and midpoint convexity on the open finite domain,
    and divergence beyond 1e6 at some probe.  Left-continuity at the domain
    edge is a convention the families supply and is not sampled."""

    def safe(t: float) -> float:
        try:
            return phi.eval(t)
        except OverflowError:
            return INF

    origin_ok = safe(0.0) == 0.0
    first_violation: tuple | None = None
    if not origin_ok:
        first_violation = ("origin", (0.0,), (safe(0.0),))

    t_hi = min(phi.finite_sup, 1e6)
    grid = [t_hi * (1.0 - 1e-9) * (1e-8) ** (1.0 - k / (n_grid - 1.0)) for k in range(n_grid)]

    finite_near_zero = math.isfinite(safe(grid[0]))
    if not finite_near_zero and first_violation is None:
        first_violation = ("finite_near_zero", (grid[0],), (safe(grid[0]),))

    vals = [safe(t) for t in grid]
    monotone_ok = True
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fb < fa - 1e-12 * max(1.0, abs(fa)):
            monotone_ok = False
            if first_violation is None:
                first_violation = ("monotone", (a, b), (fa, fb))
            break

    convex_ok = True
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if math.isinf(fa) or math.isinf(fb):
            continue
        mid = 0.5 * (a + b)
        fm = safe(mid)
        if fm > 0.5 * (fa + fb) + 1e-10 * max(1.0, abs(fa) + abs(fb)):
            convex_ok = False
            if first_violation is None:
                first_violation = ("convex", (a, mid, b), (fa, fm, fb))
            break

    diverges = False
    probes = [10.0 ** k for k in range(-2, 9)]
    if math.isfinite(phi.finite_sup):
        probes += [phi.finite_sup, 1.5 * phi.finite_sup]
    for t in probes:
        if safe(t) > 1e6:
            diverges = True
            break
    if not diverges and first_violation is None:
        first_violation = ("diverges", tuple(probes[-2:]), (safe(probes[-1]),))

    passed = origin_ok and finite_near_zero and monotone_ok and convex_ok and diverges
    return YoungValidation(
        passed, origin_ok, finite_near_zero, monotone_ok, convex_ok, diverges,
        first_violation,
    )
