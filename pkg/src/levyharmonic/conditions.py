"""Numeric verdicts for the regularity conditions the library relies on.

A check never proves anything; it integrates, samples, and fits, then
reports holds / fails / inconclusive together with its numeric evidence.
Divergence is operationalized as truncated integrals growing without
bound under cutoff refinement with a positive fitted divergence
exponent; anything below the resolution budget is inconclusive, never a
guess.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Tuple

from .errors import InvalidParameterError
from .exponent import LevyExponent, LevyTriplet
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate, integrate_finite

if TYPE_CHECKING:
    from .harmonic import ALBounds

__all__ = [
    "ConditionId",
    "Verdict",
    "ConditionReport",
    "check_L1prime",
    "check_L2",
    "check_L3",
    "check_theta_lemma",
    "check_AL",
    "check_la_rho_bounds",
]


class ConditionId(str, enum.Enum):
    L1P = "L1p"
    L2 = "L2"
    L3 = "L3"
    THETA_I = "THETA_I"
    THETA_II = "THETA_II"
    THETA_III = "THETA_III"
    AL_I = "AL_I"
    AL_II = "AL_II"
    AL_III = "AL_III"
    LA_RHO_BOUNDS = "LA_RHO_BOUNDS"


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


Evidence = Tuple[str, float, float]  # (quantity, value, threshold)


@dataclass
class ConditionReport:
    condition_id: str
    verdict: Verdict
    evidence: List[Evidence] = field(default_factory=list)
    notes: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.HOLDS


def _divergence_slope(samples):
    """Fitted d(log I)/d(log cutoff) from (cutoff, value) pairs."""
    import numpy as np
    xs, ys = zip(*[(c, v) for c, v in samples if v > 0.0])
    if len(xs) < 3:
        return 0.0
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def check_L1prime(exp: LevyExponent, q: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> ConditionReport:
    """Finiteness of int_0^inf dlam / (q + theta(lam))."""
    if q <= 0.0:
        raise InvalidParameterError(f"q must be positive, got {q}")

    def f(lam):
        return 1.0 / (q + exp.theta(lam))

    res = integrate(f, spec)
    if res.converged:
        # corroborate with the tail growth of theta itself
        lo, hi = exp.theta(1e2), exp.theta(1e6)
        growth = (math.log(hi) - math.log(lo)) / math.log(1e4) if hi > 0 and lo > 0 else 0.0
        ev = [("integral", res.value, math.inf), ("theta growth exponent", growth, 1.0)]
        verdict = Verdict.HOLDS if growth > 1.0 else Verdict.INCONCLUSIVE
        return ConditionReport(ConditionId.L1P, verdict, ev)
    # refine cutoffs and look at the divergence exponent
    samples = []
    total = 0.0
    edges = [0.0] + [10.0 ** k for k in range(0, 9)]
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate_finite(f, a, b, spec).value
        samples.append((b, total))
    slope = _divergence_slope(samples[2:])
    ev = [("truncated integral at 1e8", total, math.inf),
          ("divergence exponent", slope, 0.05)]
    if slope > 0.05:
        return ConditionReport(ConditionId.L1P, Verdict.FAILS, ev,
                               "truncated integrals grow without bound")
    return ConditionReport(ConditionId.L1P, Verdict.INCONCLUSIVE, ev,
                           "growth below resolution budget")


def check_L2(triplet: LevyTriplet,
             spec: QuadratureSpec = DEFAULT_SPEC) -> ConditionReport:
    """Either v > 0 or int_{(-1,1)} |x| nu(dx) = infinity."""
    if triplet.v > 0.0:
        return ConditionReport(ConditionId.L2, Verdict.HOLDS,
                               [("v", triplet.v, 0.0)], "Gaussian part present")
    sides = [s for s in (triplet.nu_plus, triplet.nu_minus) if s is not None]
    if not sides:
        return ConditionReport(ConditionId.L2, Verdict.FAILS,
                               [("v", 0.0, 0.0)], "no Gaussian part and no jumps")
    # |x| nu integrable near 0 iff declared exponent s0 > -2
    s0 = min(s.exponent_at_zero for s in sides)
    ev = [("smallest declared zero exponent", s0, -2.0)]
    # numeric corroboration: int_{eps}^{1} |x| nu over shrinking eps
    samples = []
    for k in range(1, 8):
        eps = 10.0 ** (-k)
        tot = 0.0
        for s in sides:
            tot += integrate_finite(lambda y: y * s.density(y), eps, 1.0, spec).value
        samples.append((1.0 / eps, tot))
    slope = _divergence_slope(samples)
    ev.append(("divergence exponent of cutoff integrals", slope, 0.02))
    if s0 <= -2.0 and slope > 0.02:
        return ConditionReport(ConditionId.L2, Verdict.HOLDS, ev,
                               "first moment of nu diverges near 0")
    if s0 > -2.0:
        return ConditionReport(ConditionId.L2, Verdict.FAILS, ev,
                               "v = 0 and int |x| nu(dx) finite near 0")
    return ConditionReport(ConditionId.L2, Verdict.INCONCLUSIVE, ev)


def _zero_end_refinement(f, spec):
    """(converges, limit_estimate, samples) for int_eps^1 f as eps -> 0."""
    vals = []
    total = 0.0
    hi = 1.0
    for k in range(1, 11):
        lo = 10.0 ** (-k)
        total += integrate_finite(f, lo, hi, spec).value
        vals.append((10.0 ** k, total))
        hi = lo
    deltas = [abs(vals[i + 1][1] - vals[i][1]) for i in range(len(vals) - 1)]
    if deltas[-1] <= 1e3 * spec.abs_tol or \
            (deltas[-3] > 0 and deltas[-1] / max(deltas[-3], 1e-300) < 0.25):
        # geometric extrapolation of the remaining mass
        r = deltas[-1] / deltas[-2] if deltas[-2] > 0 else 0.0
        rest = deltas[-1] * r / (1.0 - r) if 0.0 < r < 1.0 else 0.0
        return True, total + rest, vals
    return False, total, vals


def check_L3(exp: LevyExponent,
             spec: QuadratureSpec = DEFAULT_SPEC) -> ConditionReport:
    """Finiteness of
    int (|theta'| + |omega'|) (lam^2 and 1) / (theta^2 + omega^2) dlam.

    Sufficient, not necessary, for the zero-resolvent formula; a failing
    verdict does not assert nonexistence.
    """
    if not exp.has_derivatives:
        return ConditionReport(ConditionId.L3, Verdict.INCONCLUSIVE, [],
                               "derivatives unavailable")

    def f(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        num = (abs(exp.theta_prime(lam)) + abs(exp.omega_prime(lam)))
        num *= min(lam * lam, 1.0)
        return num / (th * th + om * om)

    zero_ok, zero_val, zero_samples = _zero_end_refinement(f, spec)
    tail = integrate(f, spec, lower=1.0)
    ev = [("zero-end integral", zero_val, math.inf),
          ("zero-end cutoff deltas shrink", 1.0 if zero_ok else 0.0, 1.0),
          ("tail integral", tail.value, math.inf)]
    if zero_ok and tail.converged:
        return ConditionReport(ConditionId.L3, Verdict.HOLDS, ev,
                               f"total {zero_val + tail.value:.6g}")
    slope = _divergence_slope(zero_samples[3:])
    ev.append(("zero-end divergence exponent (per decade)", slope, 0.0))
    if not zero_ok and (slope > 0.02 or _log_like(zero_samples)):
        return ConditionReport(ConditionId.L3, Verdict.FAILS, ev,
                               "integrand not integrable at 0; "
                               "condition is sufficient only")
    if not tail.converged:
        return ConditionReport(ConditionId.L3, Verdict.FAILS, ev,
                               "tail not integrable; condition is sufficient only")
    return ConditionReport(ConditionId.L3, Verdict.INCONCLUSIVE, ev)


def _log_like(samples) -> bool:
    """True when successive per-decade increments stay roughly constant,
    the signature of a logarithmic divergence."""
    deltas = [samples[i + 1][1] - samples[i][1] for i in range(len(samples) - 1)]
    tail = deltas[-4:]
    if any(d <= 0.0 for d in tail):
        return False
    return max(tail) / min(tail) < 1.5


def check_theta_lemma(exp: LevyExponent,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      q_grid=(1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5)) -> List[ConditionReport]:
    """Three verdicts: theta grows unboundedly; the split integral
    int_0^1 lam^2/theta + int_1^inf 1/theta is finite; q r_q(0) -> 0.
    """
    from .resolvent import resolvent_density

    reports = []

    # (i) sampled growth of the running minimum of theta on [L, 10 L]
    mins = []
    for k in range(0, 7):
        lam_lo = 10.0 ** k
        m = min(exp.theta(lam_lo * (1.0 + 9.0 * i / 15.0)) for i in range(16))
        mins.append((lam_lo, m))
    increasing = all(mins[i + 1][1] > mins[i][1] * 1.5 for i in range(len(mins) - 1))
    big = mins[-1][1] > 1e3 * max(mins[0][1], 1.0)
    ev = [("min theta on last window", mins[-1][1], 1e3 * max(mins[0][1], 1.0))]
    reports.append(ConditionReport(
        ConditionId.THETA_I,
        Verdict.HOLDS if (increasing and big) else Verdict.FAILS, ev,
        "sampled growth only, not a proof"))

    # (ii) two-piece integral
    head = integrate_finite(lambda lam: lam * lam / exp.theta(lam), 0.0, 1.0, spec)
    tail = integrate(lambda lam: 1.0 / exp.theta(lam), spec, lower=1.0)
    total = head.value + tail.value
    ev = [("head", head.value, math.inf), ("tail", tail.value, math.inf)]
    reports.append(ConditionReport(
        ConditionId.THETA_II,
        Verdict.HOLDS if (head.converged and tail.converged) else Verdict.FAILS,
        ev, f"total {total:.6g}"))

    # (iii) q r_q(0) along a decreasing grid
    import numpy as np
    qs = sorted(q_grid, reverse=True)
    vals = [q * resolvent_density(exp, q, 0.0, spec) for q in qs]
    decreasing = all(vals[i + 1] < vals[i] for i in range(len(vals) - 1))
    slope = float(np.polyfit(np.log(qs), np.log(vals), 1)[0]) if min(vals) > 0 else 0.0
    ev = [("q r_q(0) at smallest q", vals[-1], vals[0]),
          ("fitted decay exponent", slope, 0.0)]
    verdict = Verdict.HOLDS if (decreasing and slope > 0.02) else Verdict.FAILS
    reports.append(ConditionReport(ConditionId.THETA_III, verdict, ev,
                                   f"fitted q-exponent {slope:.4f}"))
    return reports


def check_AL(bounds: "ALBounds", exp: LevyExponent,
             spec: QuadratureSpec = DEFAULT_SPEC) -> List[ConditionReport]:
    """Three verdicts on the derivative envelopes and the lower-bound
    inequality they imply.

    (i)/(ii): theta'(lam) / lam^(alpha-1) and omega'(lam) / lam^(alpha-1)
    sampled over a log grid must stay inside [alpha c_under, alpha c_over];
    (iii): the scaled tangent inequality on the envelope constants,
    evaluated exactly.  Nonpositive omega envelopes violate the
    positivity precondition and give inconclusive for (ii)/(iii).
    """
    import numpy as np

    a = bounds.alpha
    slack = 1e-9
    reports = []
    lam_grid = np.geomspace(1e-3, 1e3, 25)

    if not exp.has_derivatives:
        for cid in (ConditionId.AL_I, ConditionId.AL_II, ConditionId.AL_III):
            reports.append(ConditionReport(cid, Verdict.INCONCLUSIVE, [],
                                           "derivatives unavailable"))
        return reports

    ratios_t = [exp.theta_prime(float(l)) / float(l) ** (a - 1.0) for l in lam_grid]
    lo_t, hi_t = min(ratios_t), max(ratios_t)
    ok_t = lo_t >= a * bounds.under_c_theta * (1.0 - slack) and \
        hi_t <= a * bounds.over_c_theta * (1.0 + slack)
    reports.append(ConditionReport(
        ConditionId.AL_I, Verdict.HOLDS if ok_t else Verdict.FAILS,
        [("min theta'/lam^(a-1)", lo_t, a * bounds.under_c_theta),
         ("max theta'/lam^(a-1)", hi_t, a * bounds.over_c_theta)]))

    if bounds.under_c_omega <= 0.0:
        note = "omega envelope not strictly positive; precondition violated"
        reports.append(ConditionReport(ConditionId.AL_II, Verdict.INCONCLUSIVE,
                                       [("under_c_omega", bounds.under_c_omega, 0.0)], note))
        reports.append(ConditionReport(ConditionId.AL_III, Verdict.INCONCLUSIVE,
                                       [("under_c_omega", bounds.under_c_omega, 0.0)], note))
        return reports

    ratios_o = [exp.omega_prime(float(l)) / float(l) ** (a - 1.0) for l in lam_grid]
    lo_o, hi_o = min(ratios_o), max(ratios_o)
    ok_o = lo_o >= a * bounds.under_c_omega * (1.0 - slack) and \
        hi_o <= a * bounds.over_c_omega * (1.0 + slack)
    reports.append(ConditionReport(
        ConditionId.AL_II, Verdict.HOLDS if ok_o else Verdict.FAILS,
        [("min omega'/lam^(a-1)", lo_o, a * bounds.under_c_omega),
         ("max omega'/lam^(a-1)", hi_o, a * bounds.over_c_omega)]))

    from .harmonic import _al_condition_iii
    holds, lhs, rhs = _al_condition_iii(bounds)
    reports.append(ConditionReport(
        ConditionId.AL_III, Verdict.HOLDS if holds else Verdict.FAILS,
        [("scaled tangent lhs", lhs, rhs)],
        f"lhs={lhs:.6g} rhs={rhs:.6g}"))
    return reports


def check_la_rho_bounds(exp: LevyExponent, bounds: "ALBounds",
                        spec: QuadratureSpec = DEFAULT_SPEC) -> ConditionReport:
    """Two-sided power envelopes on theta and omega themselves (not the
    derivatives): c_under lam^alpha <= theta <= c_over lam^alpha and the
    same for omega, sampled on a log grid."""
    import numpy as np

    a = bounds.alpha
    if bounds.under_c_omega <= 0.0:
        return ConditionReport(ConditionId.LA_RHO_BOUNDS, Verdict.INCONCLUSIVE,
                               [("under_c_omega", bounds.under_c_omega, 0.0)],
                               "omega envelope not strictly positive")
    slack = 1e-9
    lam_grid = np.geomspace(1e-3, 1e3, 25)
    ev = []
    ok = True
    for name, fn, lo_c, hi_c in (
            ("theta", exp.theta, bounds.under_c_theta, bounds.over_c_theta),
            ("omega", exp.omega, bounds.under_c_omega, bounds.over_c_omega)):
        ratios = [fn(float(l)) / float(l) ** a for l in lam_grid]
        ev.append((f"min {name}/lam^a", min(ratios), lo_c))
        ev.append((f"max {name}/lam^a", max(ratios), hi_c))
        ok = ok and min(ratios) >= lo_c * (1.0 - slack) \
            and max(ratios) <= hi_c * (1.0 + slack)
    return ConditionReport(ConditionId.LA_RHO_BOUNDS,
                           Verdict.HOLDS if ok else Verdict.FAILS, ev)
