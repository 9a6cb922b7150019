"""Closed-form outage probabilities, bounds, and the interference budget.

Layer conventions follow :mod:`d2dpl.model`: ``which`` is "cellular" or
"d2d" and selects the SIR threshold, link distance, and typical-user policy.
Fades are unit-mean exponential throughout; the background noise is zero, so
an interference-free trial can never be in outage (exp{-1/0} is taken as 0).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DeltaOutOfRange, MomentDiverges, NumericFailure
from .integrals import cellwise_quad, exp_cell_masses, exp_neg, expweight_quad
from .model import (
    ConstantPower,
    FractionalPower,
    NetworkParams,
    PiecewiseConstantPower,
    PolicyMoments,
    PowerPolicy,
    policy_moments,
)

__all__ = [
    "outage_independent_constant",
    "outage_independent_general",
    "outage_dependent_lower_bound",
    "outage_dependent_approx",
    "interference_budget",
    "success_given_budget",
]


def outage_independent_constant(
    params: NetworkParams, p_c: float, p_d: float, which: str
) -> float:
    """Exact outage of the ``which`` layer when both layers use fixed powers.

    1 - exp{-phi_i (lambda_c p_c^delta + lambda_d p_d^delta) / p_i^delta};
    scaling both powers by a common factor leaves the value unchanged.
    """
    if p_c <= 0 or p_d <= 0:
        raise ValueError("constant powers must be positive")
    delta = params.delta
    phi = params.geometry_exact(which)  # raises DeltaOutOfRange for delta >= 1
    mass = params.lambda_c * p_c**delta + params.lambda_d * p_d**delta
    own = (p_c if which == "cellular" else p_d) ** delta
    return 1.0 - math.exp(-phi * mass / own)


def _mean_success_independent(policy: PowerPolicy, exponent_mass: float, delta: float) -> float:
    """E over the policy's law of exp{-exponent_mass / P^delta}."""
    if exponent_mass == 0.0:
        return 1.0
    if isinstance(policy, ConstantPower):
        return float(exp_neg(exponent_mass / policy.level**delta))
    if isinstance(policy, FractionalPower):
        k, s = policy.scale, policy.exponent
        if s == 0.0:
            return float(exp_neg(exponent_mass / k**delta))
        coef = exponent_mass / k**delta
        return expweight_quad(lambda h: exp_neg(coef * h ** (s * delta)))
    if isinstance(policy, PiecewiseConstantPower):
        a = exp_cell_masses(policy.grid)
        with np.errstate(divide="ignore"):
            terms = exp_neg(exponent_mass / policy.levels**delta)
        return float(a @ terms)  # zero-power cells contribute no success mass
    raise TypeError(f"unsupported policy type {type(policy).__name__}")


def outage_independent_general(
    params: NetworkParams,
    policy_c: PowerPolicy,
    policy_d: PowerPolicy,
    which: str,
) -> float:
    """Outage of the ``which`` layer for channel-independent power laws.

    1 - E[exp{-phi_i (lambda_c E[P_c^delta] + lambda_d E[P_d^delta]) / P_i^delta}],
    the outer expectation running over the typical user's own power law. An
    infinite interference moment on a populated layer drives the value to 1.
    """
    delta = params.delta
    phi = params.geometry_exact(which)
    y_c = policy_moments(policy_c, delta).p_delta
    y_d = policy_moments(policy_d, delta).p_delta
    if (params.lambda_c > 0 and math.isinf(y_c)) or (
        params.lambda_d > 0 and math.isinf(y_d)
    ):
        return 1.0
    mass = phi * (params.lambda_c * y_c + params.lambda_d * y_d)
    own = policy_c if which == "cellular" else policy_d
    return 1.0 - _mean_success_independent(own, mass, delta)


def _mean_success_dependent(policy: PowerPolicy, coef: float, delta: float) -> float:
    """E over the own fade h of exp{-coef * (h P(h))^-delta}."""
    if coef == 0.0:
        return 1.0
    if isinstance(policy, ConstantPower):
        k = coef / policy.level**delta
        bl = k ** (1.0 / delta)  # boundary-layer scale of exp(-k h^-delta)
        return expweight_quad(
            lambda h: exp_neg(k * h**-delta),
            breakpoints=(0.01 * bl, bl, 100.0 * bl),
        )
    if isinstance(policy, FractionalPower):
        k0, s = policy.scale, policy.exponent
        k = coef / k0**delta
        g = delta * (1.0 - s)
        if g == 0.0:
            return float(exp_neg(k))
        if g > 0:
            bl = k ** (1.0 / g)
            return expweight_quad(
                lambda h: exp_neg(k * h**-g),
                breakpoints=(0.01 * bl, bl, 100.0 * bl),
            )
        return expweight_quad(lambda h: exp_neg(k * h**-g))
    if isinstance(policy, PiecewiseConstantPower):
        with np.errstate(divide="ignore"):
            ks = coef / policy.levels**delta
        cells = cellwise_quad(
            lambda h: exp_neg(ks[:, None] * h**-delta) * np.exp(-h),
            policy.grid,
        )
        return float(cells.sum())  # fade beyond the grid means zero power: outage
    raise TypeError(f"unsupported policy type {type(policy).__name__}")


def outage_dependent_lower_bound(
    params: NetworkParams,
    moments_c: PolicyMoments,
    moments_d: PolicyMoments,
    policy: PowerPolicy,
    which: str,
) -> float:
    """Lower bound on the ``which`` layer outage for own-fade power laws.

    1 - E[exp{-psi_i (lambda_c y_c + lambda_d y_d) (h_i P_i)^-delta}], the
    expectation over the typical link's own fade (and the deterministic
    dependence of P_i on it).
    """
    moments_c.require_finite("p_delta")
    moments_d.require_finite("p_delta")
    psi = params.geometry_bound(which)
    mass = params.lambda_c * moments_c.p_delta + params.lambda_d * moments_d.p_delta
    return 1.0 - _mean_success_dependent(policy, psi * mass, params.delta)


def outage_dependent_approx(
    params: NetworkParams,
    moments_c: PolicyMoments,
    moments_d: PolicyMoments,
    z_own: float,
    which: str,
) -> float:
    """Linearized form of the lower bound: 1 - exp{-psi_i mass z_own}.

    ``z_own`` is E[P_i^-delta h_i^-delta] for the typical link of the layer.
    Accurate when the exponent is small, i.e. tight outage targets.
    """
    if math.isinf(z_own):
        raise MomentDiverges("inv_p_h_delta")
    moments_c.require_finite("p_delta")
    moments_d.require_finite("p_delta")
    psi = params.geometry_bound(which)
    mass = params.lambda_c * moments_c.p_delta + params.lambda_d * moments_d.p_delta
    return 1.0 - float(exp_neg(psi * mass * z_own))


def success_given_budget(policy: PowerPolicy, q: float, delta: float) -> float:
    """E[exp{-q / P^delta}] for the policy's own power law; non-increasing in q."""
    if q < 0:
        raise ValueError(f"budget must be nonnegative, got {q}")
    return _mean_success_independent(policy, q, delta)


def interference_budget(
    policy_c: PowerPolicy, eps_c: float, delta: float, *, tol: float = 1e-12
) -> float:
    """Largest interference mass q keeping E[exp{-q/P_c^delta}] >= 1 - eps_c.

    The boundary is closed: the returned q itself still satisfies the outage
    target. Found by bisection on the continuous non-increasing success
    curve, to absolute tolerance ``tol``.
    """
    if not 0.0 < eps_c < 1.0:
        raise ValueError(f"outage target must lie in (0, 1), got {eps_c}")
    target = 1.0 - eps_c

    def f(q):
        return success_given_budget(policy_c, q, delta)

    if f(0.0) < target:
        # success probability falls short even with zero interference
        # (possible only when the policy has an atom at zero power)
        return 0.0
    hi = 1.0
    doublings = 0
    while f(hi) >= target:
        hi *= 2.0
        doublings += 1
        if doublings > 200:
            raise NumericFailure(
                "could not bracket the interference budget after 200 doublings"
            )
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
