"""The renormalized zero resolvent and its harmonicity certificates.

h_q(x) = r_q(0) - r_q(-x) is assembled from two absolutely tame
integrals rather than as a difference of diagonals,

    h_q(x) = (1/pi) int [(q+theta)(1 - cos(lam x)) - omega sin(lam x)] / F dlam,

and its q -> 0 limit h0 is computed by the direct formula with
F0 = theta^2 + omega^2 in the denominator.  The sin part of h0 is only
conditionally integrable; when its oscillatory quadrature fails to
converge, an integration-by-parts form (derivatives required) that
trades sin for the nonnegative 1 - cos kernel is used instead, and the
result records which path produced it.

Harmonicity is certified numerically: q R_q h(x) = h(x) + r_q(-x) with
the convolution R_q h evaluated by double quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

from .conditions import ConditionReport, Verdict
from .errors import InvalidParameterError
from .exponent import LevyExponent, effective_alpha
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, integrate,
                         integrate_finite, integrate_oscillatory,
                         integrate_tail_extrapolated)
from .resolvent import resolvent_density
from .stable import constants as stable_constants
from .stable import StableParams

__all__ = [
    "HarmonicProfile",
    "ALBounds",
    "H0Result",
    "h_q",
    "h_0",
    "h0_point",
    "symmetric_h0",
    "h0_limit_check",
    "LimitReport",
    "harmonicity_residual",
    "hp_identity_residual",
    "al_bounds_check",
]


@dataclass(frozen=True)
class H0Result:
    value: float
    error_estimate: float
    method: str  # "direct" or "parts"


@dataclass(frozen=True)
class ALBounds:
    """Two-sided power envelopes for the exponent derivatives:

        alpha under_c_theta lam^(alpha-1) <= theta'(lam) <= alpha over_c_theta lam^(alpha-1)

    and the same for omega'.  The omega constants may be nonpositive, in
    which case the lower-bound machinery does not apply and checks report
    inconclusive.
    """

    alpha: float
    under_c_theta: float
    over_c_theta: float
    under_c_omega: float
    over_c_omega: float

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise InvalidParameterError(f"alpha must be in (1, 2), got {self.alpha}")
        if self.under_c_theta > self.over_c_theta or self.under_c_omega > self.over_c_omega:
            raise InvalidParameterError("lower envelope exceeds upper envelope")
        if self.over_c_theta <= 0.0:
            raise InvalidParameterError("theta envelopes must be positive")

    @staticmethod
    def tight_stable(params: StableParams) -> "ALBounds":
        """Degenerate envelopes (under == over) of a stable exponent."""
        return ALBounds(params.alpha, params.c_theta, params.c_theta,
                        params.c_omega, params.c_omega)


@dataclass
class HarmonicProfile:
    """h0 and h_q sampled on a grid of spatial points."""

    exponent: LevyExponent
    xs: Sequence[float]
    h0_values: list = field(default_factory=list)
    hq_values: Dict[float, list] = field(default_factory=dict)
    error_estimates: list = field(default_factory=list)


def _hq_parts(exp: LevyExponent, q: float, x: float, spec: QuadratureSpec):
    sp = spec.with_hint(_alpha_or_none(exp))

    def g1(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        u = q + th
        return u / (u * u + om * om)

    def g2(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        u = q + th
        return om / (u * u + om * om)

    r1 = integrate_oscillatory(g1, "one_minus_cos", x, sp)
    r2 = integrate_oscillatory(g2, "sin", x, sp)
    return r1, r2


def _alpha_or_none(exp: LevyExponent) -> Optional[float]:
    try:
        return effective_alpha(exp)
    except Exception:
        return None


def h_q(exp: LevyExponent, q: float, x: float,
        spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """h_q(x) = r_q(0) - r_q(-x), assembled without the large-diagonal
    cancellation."""
    if q <= 0.0:
        raise InvalidParameterError(f"q must be positive, got {q}")
    if x == 0.0:
        return 0.0
    r1, r2 = _hq_parts(exp, q, x, spec)
    r1.require("h_q one-minus-cos part", point=x)
    r2.require("h_q sin part", point=x)
    return (r1.value - r2.value) / math.pi


def h0_point(exp: LevyExponent, x: float,
             spec: QuadratureSpec = DEFAULT_SPEC) -> H0Result:
    """Renormalized zero resolvent at x, with error and method record."""
    if x == 0.0:
        return H0Result(0.0, 0.0, "direct")
    sp = spec.with_hint(_alpha_or_none(exp))

    def g1(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        return th / (th * th + om * om)

    def g2(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        return om / (th * th + om * om)

    r1 = integrate_oscillatory(g1, "one_minus_cos", x, sp)
    r1.require("h0 one-minus-cos part", point=x)
    r2 = integrate_oscillatory(g2, "sin", x, sp)
    if r2.converged:
        return H0Result((r1.value - r2.value) / math.pi,
                        (r1.error_estimate + r2.error_estimate) / math.pi,
                        "direct")
    if not exp.has_derivatives:
        r2.require("h0 sin part (no derivative fallback available)", point=x)
    # integrate the sin part by parts: the boundary terms vanish and the
    # kernel becomes 1 - cos, at the price of one lam-derivative
    tp, op_ = exp.theta_prime, exp.omega_prime

    def g_parts(lam):
        th, om = exp.theta(lam), exp.omega(lam)
        f0 = th * th + om * om
        num = op_(lam) * f0 - om * (2.0 * th * tp(lam) + 2.0 * om * op_(lam))
        return num / (f0 * f0)

    r2b = integrate_oscillatory(g_parts, "one_minus_cos", x, sp)
    r2b.require("h0 sin part via integration by parts", point=x)
    value = r1.value / math.pi - r2b.value / (math.pi * x)
    err = (r1.error_estimate + r2b.error_estimate / abs(x)) / math.pi
    return H0Result(value, err, "parts")


def h_0(exp: LevyExponent, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Value of the renormalized zero resolvent at x."""
    return h0_point(exp, x, spec).value


def symmetric_h0(exp: LevyExponent, x: float,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """h0 for symmetric exponents: (1/pi) int (1 - cos(lam x)) / theta dlam.

    Valid when omega vanishes identically; used as an independent
    assembly to cross-check the general formula in that regime.
    """
    if x == 0.0:
        return 0.0
    sp = spec.with_hint(_alpha_or_none(exp))
    res = integrate_oscillatory(lambda lam: 1.0 / exp.theta(lam),
                                "one_minus_cos", x, sp)
    return res.require("symmetric h0", point=x) / math.pi


@dataclass(frozen=True)
class LimitReport:
    x: float
    q_values: tuple
    hq_values: tuple
    h0_value: float
    max_gap: float            # |h_q - h0| at the smallest q
    monotone_nonincreasing_in_q: bool
    rate_estimate: Optional[float]
    notes: str = ""


def h0_limit_check(exp: LevyExponent, x: float, q_sequence: Sequence[float],
                   spec: QuadratureSpec = DEFAULT_SPEC) -> LimitReport:
    """Observe h_q(x) -> h0(x) along a decreasing q sequence.

    Reports the terminal gap, an empirical convergence rate, and whether
    the sequence increased monotonically as q decreased (expected when
    omega vanishes).
    """
    qs = tuple(q_sequence)
    if any(q <= 0.0 for q in qs) or any(qs[i] <= qs[i + 1] for i in range(len(qs) - 1)):
        raise InvalidParameterError("q_sequence must be positive and strictly decreasing")
    hqs = tuple(h_q(exp, q, x, spec) for q in qs)
    h0v = h_0(exp, x, spec)
    gaps = [abs(hv - h0v) for hv in hqs]
    rate = None
    if len(qs) >= 2 and gaps[-1] > 0.0 and gaps[-2] > 0.0:
        rate = math.log(gaps[-2] / gaps[-1]) / math.log(qs[-2] / qs[-1])
    monotone = all(hqs[i] <= hqs[i + 1] + 1e-12 for i in range(len(hqs) - 1))
    return LimitReport(x, qs, hqs, h0v, gaps[-1], monotone, rate)


def _real_line_convolution(h: Callable[[float], float], exp: LevyExponent,
                           q: float, x: float, spec: QuadratureSpec,
                           growth: float, tail_budget: float = 2e-5) -> float:
    """int h(y) r_q(y - x) dy: kink-aware mid section plus octave-marched
    tails with power-law remainder extrapolation.

    The inner resolvent cannot be resolved below its quadrature floor, so
    the far tails are extrapolated from the trusted region; the floor
    passed to the tail integrator scales with the growth of h.
    """
    inner = QuadratureSpec(1e-9, 1e-12, spec.max_subdivisions)
    outer = QuadratureSpec(max(spec.rel_tol, 1e-7), max(spec.abs_tol, 1e-9),
                           spec.max_subdivisions)
    r_floor = 5e-12

    def f(y):
        return h(y) * resolvent_density_tolerant(exp, q, y - x, inner)

    from .resolvent import _tail_scale
    b = max(_tail_scale(exp, q, inner), 2.0 * abs(x) + 16.0)
    mid = integrate_finite(f, -b, b, outer, points=[0.0, x])
    mid.require("convolution mid section")

    def floor_fn(y):
        return abs(h(y)) * r_floor

    right = integrate_tail_extrapolated(f, b, outer, tail_budget, floor_fn)
    left = integrate_tail_extrapolated(lambda y: f(-y), b, outer,
                                       tail_budget, floor_fn)
    return mid.value + right.value + left.value


def harmonicity_residual(exp: LevyExponent, h: Callable[[float], float],
                         q: float, x: float,
                         spec: QuadratureSpec = DEFAULT_SPEC,
                         growth_exponent: Optional[float] = None) -> float:
    """|q R_q h(x) - h(x) - r_q(-x)| by double quadrature.

    h must grow strictly slower than theta's power index so the
    convolution converges; pass growth_exponent when it differs from
    alpha - 1.
    """
    if q <= 0.0:
        raise InvalidParameterError(f"q must be positive, got {q}")
    growth = growth_exponent if growth_exponent is not None \
        else (effective_alpha(exp) - 1.0)
    rq = _real_line_convolution(h, exp, q, x, spec, growth)
    inner = QuadratureSpec(1e-10, 1e-13, spec.max_subdivisions)
    return abs(q * rq - h(x) - resolvent_density(exp, q, -x, inner))


def hp_identity_residual(exp: LevyExponent, q: float, p: float, x: float,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Residual of the finite-p harmonicity identity

        R_q h_p(x) = h_p(x)/(q-p) + r_q(-x)/(q-p) - p r_p(0) / (q (q-p)),

    a consequence of the resolvent equation and a cheaper end-to-end
    certificate than the q -> 0 limit."""
    if q <= 0.0 or p <= 0.0:
        raise InvalidParameterError("q and p must be positive")
    if q == p:
        raise InvalidParameterError("q and p must differ")
    inner = QuadratureSpec(1e-10, 1e-13, spec.max_subdivisions)
    hp = lambda y: h_q(exp, p, y, inner)
    lhs = _real_line_convolution(hp, exp, q, x, spec,
                                 effective_alpha(exp) - 1.0)
    rhs = hp(x) / (q - p) + resolvent_density(exp, q, -x, inner) / (q - p) \
        - p * resolvent_density(exp, p, 0.0, inner) / (q * (q - p))
    return abs(lhs - rhs)


def _al_condition_iii(b: ALBounds) -> tuple[bool, float, float]:
    """Evaluate the lower-bound inequality; returns (holds, lhs, rhs)."""
    tan_factor = -math.tan(math.pi * b.alpha / 2.0)
    lhs = b.under_c_theta * (b.under_c_theta ** 2 + b.under_c_omega ** 2) \
        / (b.over_c_theta ** 2 + b.over_c_omega ** 2) * tan_factor
    rhs = max(b.over_c_omega, b.over_c_theta - b.under_c_omega)
    return lhs > rhs, lhs, rhs


def al_bounds_check(exp: LevyExponent, bounds: ALBounds,
                    xs: Sequence[float], qs: Sequence[float],
                    spec: QuadratureSpec = DEFAULT_SPEC) -> ConditionReport:
    """Verify the power sandwich on h_q and h0 implied by derivative
    envelopes.

    (a) h_q(x) / |x|^(alpha-1) is checked against the explicit upper
    constant assembled from the envelopes; (b) when the lower-bound
    inequality on the envelope constants holds, h0(x) / |x|^(alpha-1) is
    checked to stay inside [c_under, c_over].  Nonpositive omega
    envelopes make (b) inapplicable and yield an inconclusive verdict.
    """
    a = bounds.alpha
    slack = 1.0 + 1e-6
    p_ref = StableParams(a, 1.0, 0.0)
    c_int = stable_constants(p_ref, spec).c_int
    c_int_plus = stable_constants(p_ref, spec).c_int_plus

    c_upper = c_int / (math.pi * bounds.under_c_theta) \
        + a * (bounds.over_c_theta + max(bounds.over_c_omega, 0.0)) * c_int_plus \
        / (math.pi * (bounds.under_c_theta ** 2 + max(bounds.under_c_omega, 0.0) ** 2))

    evidence = []
    worst = Verdict.HOLDS
    notes = []

    ratio_max = 0.0
    for x in xs:
        if x == 0.0:
            continue
        scale = abs(x) ** (a - 1.0)
        for q in qs:
            ratio_max = max(ratio_max, h_q(exp, q, x, spec) / scale)
        h0r = h_0(exp, x, spec) / scale
        evidence.append((f"h0(x)/|x|^(a-1) at x={x:g}", h0r, c_upper * slack))
        if h0r > c_upper * slack:
            worst = Verdict.FAILS
    evidence.append(("sup h_q(x)/|x|^(a-1)", ratio_max, c_upper * slack))
    if ratio_max > c_upper * slack:
        worst = Verdict.FAILS

    if bounds.under_c_omega <= 0.0:
        notes.append("omega envelopes not strictly positive; "
                     "lower-bound inequality inapplicable")
        if worst == Verdict.HOLDS:
            worst = Verdict.INCONCLUSIVE
        return ConditionReport("AL_III", worst, evidence, "; ".join(notes))

    holds_iii, lhs, rhs = _al_condition_iii(bounds)
    evidence.append(("scaled tan inequality lhs - rhs", lhs - rhs, 0.0))
    if not holds_iii:
        notes.append("envelope inequality fails; no positive lower bound implied")
        return ConditionReport("AL_III", Verdict.INCONCLUSIVE if worst == Verdict.HOLDS
                               else worst, evidence, "; ".join(notes))

    tan_factor = -math.tan(math.pi * a / 2.0)
    denom_over = bounds.over_c_theta ** 2 + bounds.over_c_omega ** 2
    denom_under = bounds.under_c_theta ** 2 + bounds.under_c_omega ** 2
    base = a * c_int_plus / math.pi

    def lower_const(side_m: float) -> float:
        return (bounds.under_c_theta * tan_factor / denom_over
                - side_m / denom_under) * base

    c_low_pos = lower_const(bounds.over_c_omega)
    c_low_neg = lower_const(bounds.over_c_theta - bounds.under_c_omega)
    for x in xs:
        if x == 0.0:
            continue
        c_low = c_low_pos if x > 0.0 else c_low_neg
        h0r = h_0(exp, x, spec) / abs(x) ** (a - 1.0)
        evidence.append((f"h0 lower margin at x={x:g}", h0r - c_low / slack, 0.0))
        if h0r < c_low / slack:
            worst = Verdict.FAILS
    return ConditionReport("AL_III", worst, evidence, "; ".join(notes))
