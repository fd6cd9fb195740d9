"""Closed forms for the strictly stable family with index 1 < alpha < 2.

This module is the golden-reference layer: parameter conversions, the
derived constants, the closed-form renormalized zero resolvent, and the
closed-form excursion duration density.  Gamma-based constants come from
the local Lanczos implementation; the two density constants c_p and c_r
are defined by integrals and computed by quadrature so that arbitrary
(alpha, beta) are supported.

Two distinct constants share the letter C in the surrounding literature;
they are kept apart here under unambiguous names:

    c_port      2 Gamma(alpha) (-cos(pi alpha / 2))
    c_int       pi / c_port  ==  int_0^inf (1 - cos u) / u**alpha du

and never re-exposed under a single name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParameterError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate
from .special import gamma

__all__ = [
    "StableParams",
    "StableConstants",
    "constants",
    "h0_closed",
    "rho_closed",
    "entrance_law_identity_check",
]


@dataclass(frozen=True)
class StableParams:
    """Strictly stable parameters (alpha, c_theta, beta).

    The equivalent jump-intensity parameterization (alpha, c_plus,
    c_minus) is available through ``from_intensities`` /
    ``intensities``; the two are mutually convertible via

        c_theta = (c_plus + c_minus) * pi / (alpha * S_alpha)
        beta    = (c_plus - c_minus) / (c_plus + c_minus)

    with S_alpha = 2 Gamma(alpha) sin(pi alpha / 2).
    """

    alpha: float
    c_theta: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise InvalidParameterError(f"alpha must be in (1, 2), got {self.alpha}")
        if not self.c_theta > 0.0:
            raise InvalidParameterError(f"c_theta must be positive, got {self.c_theta}")
        if not -1.0 <= self.beta <= 1.0:
            raise InvalidParameterError(f"beta must be in [-1, 1], got {self.beta}")

    @staticmethod
    def from_intensities(alpha: float, c_plus: float, c_minus: float) -> "StableParams":
        if c_plus < 0.0 or c_minus < 0.0 or c_plus + c_minus <= 0.0:
            raise InvalidParameterError(
                f"need c_plus, c_minus >= 0 with positive sum, got ({c_plus}, {c_minus})")
        if not 1.0 < alpha < 2.0:
            raise InvalidParameterError(f"alpha must be in (1, 2), got {alpha}")
        s_alpha = 2.0 * gamma(alpha) * math.sin(math.pi * alpha / 2.0)
        c_theta = (c_plus + c_minus) * math.pi / (alpha * s_alpha)
        beta = (c_plus - c_minus) / (c_plus + c_minus)
        return StableParams(alpha, c_theta, beta)

    def intensities(self) -> tuple[float, float]:
        """(c_plus, c_minus) of the jump density c |x|**(-alpha-1)."""
        s_alpha = 2.0 * gamma(self.alpha) * math.sin(math.pi * self.alpha / 2.0)
        total = self.c_theta * self.alpha * s_alpha / math.pi
        return 0.5 * (1.0 + self.beta) * total, 0.5 * (1.0 - self.beta) * total

    @property
    def tan_factor(self) -> float:
        """-tan(pi alpha / 2), positive on (1, 2)."""
        return -math.tan(math.pi * self.alpha / 2.0)

    @property
    def c_omega(self) -> float:
        return self.c_theta * self.beta * self.tan_factor


@dataclass(frozen=True)
class StableConstants:
    """All derived constants of a stable parameter set."""

    alpha: float
    c_theta: float
    beta: float
    c_omega: float
    tan_factor: float
    s_alpha: float          # 2 Gamma(a) sin(pi a / 2)
    c_port: float           # 2 Gamma(a) (-cos(pi a / 2))
    c_int: float            # int (1 - cos u) u**-a du = pi / c_port
    c_int_plus: float       # same integral at a + 1
    c_p: float              # p_t(0) = c_p t**(-1/a)
    c_r: float              # r_q(0) = c_r q**(1/a - 1)


def _c_port(alpha: float) -> float:
    return 2.0 * gamma(alpha) * (-math.cos(math.pi * alpha / 2.0))


@lru_cache(maxsize=64)
def _cached_constants(params: StableParams, spec: QuadratureSpec) -> StableConstants:
    a = params.alpha
    c_th = params.c_theta
    c_om = params.c_omega
    s_alpha = 2.0 * gamma(a) * math.sin(math.pi * a / 2.0)
    c_port = _c_port(a)
    c_int = math.pi / c_port
    c_int_plus = math.pi / _c_port(a + 1.0)

    def p_density_integrand(lam):
        la = lam ** a
        return math.cos(c_om * la) * math.exp(-c_th * la)

    def r_density_integrand(lam):
        la = lam ** a
        u = 1.0 + c_th * la
        return u / (u * u + (c_om * la) ** 2)

    c_p = integrate(p_density_integrand, spec).require("c_p integral") / math.pi
    c_r = integrate(r_density_integrand, spec.with_hint(a)).require("c_r integral") / math.pi
    return StableConstants(a, c_th, params.beta, c_om, params.tan_factor,
                           s_alpha, c_port, c_int, c_int_plus, c_p, c_r)


def constants(params: StableParams, spec: QuadratureSpec = DEFAULT_SPEC) -> StableConstants:
    """Gamma-based constants in closed form; c_p and c_r by quadrature."""
    return _cached_constants(params, spec)


def h0_closed(params: StableParams, x: float) -> float:
    """Closed-form renormalized zero resolvent of the stable process.

        h0(x) = (1 - beta sgn x) |x|**(alpha-1)
                / (c_theta (1 + beta^2 tan^2(pi alpha / 2)) c_port)

    For beta = +1 the value is exactly 0 on x >= 0 (and symmetrically for
    beta = -1 on x <= 0).
    """
    if x == 0.0:
        return 0.0
    s = 1.0 if x > 0.0 else -1.0
    skew = 1.0 - params.beta * s
    if skew == 0.0:
        return 0.0
    t = math.tan(math.pi * params.alpha / 2.0)
    denom = params.c_theta * (1.0 + params.beta ** 2 * t * t) * _c_port(params.alpha)
    return skew / denom * abs(x) ** (params.alpha - 1.0)


def rho_closed(params: StableParams, t: float,
               spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Closed-form excursion duration density

        rho(t) = (1 - 1/alpha) / (c_r Gamma(1/alpha)) * t**(1/alpha - 2).
    """
    if t <= 0.0:
        raise InvalidParameterError(f"t must be positive, got {t}")
    a = params.alpha
    c_r = constants(params, spec).c_r
    return (1.0 - 1.0 / a) / (c_r * gamma(1.0 / a)) * t ** (1.0 / a - 2.0)


def survival_closed(params: StableParams, t: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Excursion-measure mass of durations exceeding t: the tail integral
    of rho_closed, which reduces to t**(1/alpha - 1) / (c_r Gamma(1/alpha))."""
    if t <= 0.0:
        raise InvalidParameterError(f"t must be positive, got {t}")
    a = params.alpha
    c_r = constants(params, spec).c_r
    return t ** (1.0 / a - 1.0) / (c_r * gamma(1.0 / a))


def entrance_law_identity_check(params: StableParams, q: float,
                                spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Residual of the Laplace identity tying the duration tail to r_q(0).

    LHS: int_0^inf exp(-q t) * (tail mass of rho beyond t) dt, by
    quadrature over t.  RHS: 1 / (q r_q(0)) with r_q(0) computed through
    the resolvent pipeline.  Both sides reduce analytically to
    q**(-1/alpha) / c_r; the returned residual |LHS - RHS| certifies the
    numeric chain.
    """
    if q <= 0.0:
        raise InvalidParameterError(f"q must be positive, got {q}")
    from .exponent import from_stable
    from .resolvent import resolvent_density

    lhs = integrate(lambda t: math.exp(-q * t) * survival_closed(params, t, spec),
                    spec).require("duration-tail Laplace transform")
    r_q0 = resolvent_density(from_stable(params), q, 0.0, spec)
    rhs = 1.0 / (q * r_q0)
    return abs(lhs - rhs)
