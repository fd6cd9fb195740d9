"""Characteristic exponents in frequency space.

A process enters the library as the pair theta(lam) = Re Psi(lam),
omega(lam) = Im Psi(lam) of its exponent, defined for lam > 0 and
extended to the whole line by parity (theta even, omega odd).  Exponents
come either from closed-form families (stable, Brownian) or from a
characteristic triplet (b, v, jump density) by numerical integration of

    theta(lam) = v lam^2 + int (1 - cos(lam x)) nu(dx)
    omega(lam) = b lam   + int (lam x 1_{(-1,1)}(x) - sin(lam x)) nu(dx)

with the compensation cutoff fixed at |x| < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .errors import InvalidParameterError
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, integrate,
                         integrate_finite, integrate_oscillatory)
from .stable import StableParams

__all__ = [
    "NuDensity",
    "LevyTriplet",
    "LevyExponent",
    "from_stable",
    "from_brownian",
    "from_triplet",
    "effective_alpha",
]


@dataclass(frozen=True, eq=False)
class NuDensity:
    """One side of the jump density, on its absolute coordinate y > 0.

    exponent_at_zero / exponent_at_inf declare the power behavior
    density(y) ~ C y**s near the respective end; they drive integrability
    checks and truncation.
    """

    density: Callable[[float], float]
    exponent_at_zero: float
    exponent_at_inf: float


@dataclass(frozen=True, eq=False)
class LevyTriplet:
    """Characteristic triplet (b, v, nu) with a two-sided jump density."""

    b: float = 0.0
    v: float = 0.0
    nu_plus: Optional[NuDensity] = None
    nu_minus: Optional[NuDensity] = None

    def __post_init__(self):
        if self.v < 0.0:
            raise InvalidParameterError(f"v must be >= 0, got {self.v}")
        for side in (self.nu_plus, self.nu_minus):
            if side is None:
                continue
            if side.exponent_at_zero <= -3.0:
                raise InvalidParameterError(
                    "jump density must keep x^2 integrable near 0 "
                    f"(declared exponent {side.exponent_at_zero})")
            if side.exponent_at_inf >= -1.0:
                raise InvalidParameterError(
                    "jump density must be integrable at infinity "
                    f"(declared exponent {side.exponent_at_inf})")

    def validate(self, spec: QuadratureSpec = DEFAULT_SPEC) -> None:
        """Sample-level invariants: non-negative densities, finite
        int (x^2 and 1) nu truncated integrals consistent with the
        declared exponents."""
        for side in (self.nu_plus, self.nu_minus):
            if side is None:
                continue
            for y in (1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3):
                if side.density(y) < 0.0:
                    raise InvalidParameterError(f"jump density negative at |x|={y}")
            small = integrate_finite(lambda y: y * y * side.density(y), 0.0, 1.0, spec)
            if not math.isfinite(small.value):
                raise InvalidParameterError("int x^2 nu(dx) diverges near 0")
            tail = integrate(side.density, spec.with_hint(-side.exponent_at_inf), lower=1.0)
            if not tail.converged:
                raise InvalidParameterError("int nu(dx) diverges at infinity")


@dataclass(frozen=True, eq=False)
class LevyExponent:
    """Evaluable exponent pair with optional derivatives.

    theta / omega (and the primes) are defined for lam > 0 only; use
    :meth:`eval` for arbitrary real arguments.  alpha_hint declares power
    growth theta(lam) ~ lam**alpha and steers downstream tail truncation.
    Instances are immutable and safe to share across workers.
    """

    theta: Callable[[float], float]
    omega: Callable[[float], float]
    theta_prime: Optional[Callable[[float], float]] = None
    omega_prime: Optional[Callable[[float], float]] = None
    alpha_hint: Optional[float] = None
    label: str = ""

    def eval(self, lam: float) -> tuple[float, float]:
        """(theta, omega) at any real lam, by parity for lam <= 0."""
        if lam == 0.0:
            return 0.0, 0.0
        if lam > 0.0:
            return self.theta(lam), self.omega(lam)
        return self.theta(-lam), -self.omega(-lam)

    @property
    def has_derivatives(self) -> bool:
        return self.theta_prime is not None and self.omega_prime is not None


def _validate_exponent(exp: LevyExponent, tol: float = 1e-6) -> LevyExponent:
    # origin limits and pointwise nonnegativity of theta on a coarse grid
    th0, om0 = exp.eval(1e-8)
    if abs(th0) > tol or abs(om0) > tol:
        raise InvalidParameterError(
            f"exponent does not vanish at the origin: theta={th0:.3g}, omega={om0:.3g}")
    for lam in (1e-4, 0.1, 1.0, 10.0, 1e4):
        if exp.theta(lam) < 0.0:
            raise InvalidParameterError(f"theta negative at lam={lam}")
    if exp.has_derivatives:
        for lam in (0.5, 1.0, 5.0):
            h = 1e-6 * lam
            fd = (exp.theta(lam + h) - exp.theta(lam - h)) / (2.0 * h)
            tp = exp.theta_prime(lam)
            if abs(fd - tp) > 1e-5 * max(1.0, abs(tp)):
                raise InvalidParameterError(
                    f"theta_prime inconsistent with finite differences at lam={lam}")
    return exp


def from_stable(params: StableParams) -> LevyExponent:
    """Exponent of the strictly stable family:

        theta(lam) = c_theta lam**alpha
        omega(lam) = c_omega lam**alpha,   c_omega = c_theta beta (-tan(pi alpha/2))

    with exact derivatives."""
    a = params.alpha
    c_th = params.c_theta
    c_om = params.c_omega
    return _validate_exponent(LevyExponent(
        theta=lambda lam: c_th * lam ** a,
        omega=lambda lam: c_om * lam ** a,
        theta_prime=lambda lam: a * c_th * lam ** (a - 1.0),
        omega_prime=lambda lam: a * c_om * lam ** (a - 1.0),
        alpha_hint=a,
        label=f"stable(alpha={a:g}, c_theta={c_th:g}, beta={params.beta:g})",
    ))


def from_brownian(v: float = 1.0) -> LevyExponent:
    """Pure Gaussian exponent theta = v lam^2, omega = 0."""
    if v <= 0.0:
        raise InvalidParameterError(f"v must be positive, got {v}")
    return _validate_exponent(LevyExponent(
        theta=lambda lam: v * lam * lam,
        omega=lambda lam: 0.0,
        theta_prime=lambda lam: 2.0 * v * lam,
        omega_prime=lambda lam: 0.0,
        alpha_hint=2.0,
        label=f"brownian(v={v:g})",
    ))


def _side_theta(side: NuDensity, lam: float, spec: QuadratureSpec) -> float:
    """int_0^inf (1 - cos(lam y)) density(y) dy, split at y = 1."""
    n = side.density
    head = integrate_finite(
        lambda y: 2.0 * math.sin(0.5 * lam * y) ** 2 * n(y), 0.0, 1.0, spec)
    plain = integrate(n, spec.with_hint(-side.exponent_at_inf), lower=1.0)
    osc = integrate_oscillatory(n, "cos", lam, spec, lower=1.0)
    for piece, what in ((head, "head"), (plain, "tail"), (osc, "cos tail")):
        piece.require(f"theta triplet {what}", point=lam)
    return head.value + plain.value - osc.value


def _side_omega(side: NuDensity, lam: float, spec: QuadratureSpec) -> float:
    """int_0^inf (lam y 1_{y<1} - sin(lam y)) density(y) dy, split at y = 1."""
    n = side.density
    head = integrate_finite(
        lambda y: (lam * y - math.sin(lam * y)) * n(y), 0.0, 1.0, spec)
    osc = integrate_oscillatory(n, "sin", lam, spec, lower=1.0)
    head.require("omega triplet head", point=lam)
    osc.require("omega triplet tail", point=lam)
    return head.value - osc.value


def _side_theta_prime(side: NuDensity, lam: float, spec: QuadratureSpec) -> float:
    n = side.density
    head = integrate_finite(lambda y: y * math.sin(lam * y) * n(y), 0.0, 1.0, spec)
    osc = integrate_oscillatory(lambda y: y * n(y), "sin", lam, spec, lower=1.0)
    head.require("theta_prime head", point=lam)
    osc.require("theta_prime tail", point=lam)
    return head.value + osc.value


def _side_omega_prime(side: NuDensity, lam: float, spec: QuadratureSpec) -> float:
    n = side.density
    head = integrate_finite(
        lambda y: y * (1.0 - math.cos(lam * y)) * n(y), 0.0, 1.0, spec)
    osc = integrate_oscillatory(lambda y: y * n(y), "cos", lam, spec, lower=1.0)
    head.require("omega_prime head", point=lam)
    osc.require("omega_prime tail", point=lam)
    return head.value - osc.value


def from_triplet(triplet: LevyTriplet, spec: QuadratureSpec = DEFAULT_SPEC,
                 alpha_hint: Optional[float] = None, label: str = "") -> LevyExponent:
    """Exponent evaluated on demand by quadrature of the triplet integrals.

    Each call integrates the defining expressions at the requested lam
    (memoized per exponent); derivatives are obtained by differentiating
    under the integral sign.  The caller supplies the drift b already
    compensated as desired; for the strictly stable jump density
    c |x|**(-alpha-1) the strict-stable drift is b = (c_plus - c_minus) / (alpha - 1).
    """
    triplet.validate(spec)
    sides_p = triplet.nu_plus
    sides_m = triplet.nu_minus
    b, v = triplet.b, triplet.v

    @lru_cache(maxsize=65536)
    def theta(lam: float) -> float:
        out = v * lam * lam
        if sides_p is not None:
            out += _side_theta(sides_p, lam, spec)
        if sides_m is not None:
            out += _side_theta(sides_m, lam, spec)
        return out

    @lru_cache(maxsize=65536)
    def omega(lam: float) -> float:
        out = b * lam
        if sides_p is not None:
            out += _side_omega(sides_p, lam, spec)
        if sides_m is not None:
            out -= _side_omega(sides_m, lam, spec)
        return out

    @lru_cache(maxsize=65536)
    def theta_prime(lam: float) -> float:
        out = 2.0 * v * lam
        if sides_p is not None:
            out += _side_theta_prime(sides_p, lam, spec)
        if sides_m is not None:
            out += _side_theta_prime(sides_m, lam, spec)
        return out

    @lru_cache(maxsize=65536)
    def omega_prime(lam: float) -> float:
        out = b
        if sides_p is not None:
            out += _side_omega_prime(sides_p, lam, spec)
        if sides_m is not None:
            out -= _side_omega_prime(sides_m, lam, spec)
        return out

    return _validate_exponent(LevyExponent(
        theta=theta, omega=omega,
        theta_prime=theta_prime, omega_prime=omega_prime,
        alpha_hint=alpha_hint,
        label=label or "triplet",
    ))


def power_law_triplet(alpha: float, c_plus: float, c_minus: float,
                      b: Optional[float] = None, v: float = 0.0) -> LevyTriplet:
    """Triplet with jump density c |x|**(-alpha-1) on each side.

    When b is omitted the strict-stable compensated drift
    (c_plus - c_minus) / (alpha - 1) is used, which makes the resulting
    exponent agree with the closed-form stable family.
    """
    if not 1.0 < alpha < 2.0:
        raise InvalidParameterError(f"alpha must be in (1, 2), got {alpha}")
    if c_plus < 0.0 or c_minus < 0.0 or c_plus + c_minus <= 0.0:
        raise InvalidParameterError("need nonnegative intensities with positive sum")
    if b is None:
        b = (c_plus - c_minus) / (alpha - 1.0)
    mk = lambda c: (NuDensity(lambda y, _c=c: _c * y ** (-alpha - 1.0),
                              -alpha - 1.0, -alpha - 1.0) if c > 0.0 else None)
    return LevyTriplet(b=b, v=v, nu_plus=mk(c_plus), nu_minus=mk(c_minus))


@lru_cache(maxsize=256)
def _fitted_alpha(exp: LevyExponent) -> float:
    # log-log regression of theta over lam in [1e2, 1e6]
    import numpy as np
    lams = np.geomspace(1e2, 1e6, 9)
    vals = np.array([exp.theta(float(l)) for l in lams])
    if np.any(vals <= 0.0):
        raise InvalidParameterError("cannot fit growth exponent: theta <= 0 in tail")
    slope, _ = np.polyfit(np.log(lams), np.log(vals), 1)
    return float(slope)


def effective_alpha(exp: LevyExponent) -> float:
    """Growth exponent of theta: the declared hint, else a log-log fit."""
    if exp.alpha_hint is not None:
        return exp.alpha_hint
    return _fitted_alpha(exp)
