"""Domain types: network parameters, power policies, and their fade moments.

Everything here is immutable after construction and all operations are pure,
so the types are safe to share across threads or processes. All powers are
linear (never dB).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DeltaOutOfRange, MomentDiverges
from .integrals import exp_cell_masses, gamma_moment, power_exp_cell_masses

CELLULAR = "cellular"
D2D = "d2d"
LAYERS = (CELLULAR, D2D)


def stability_exponent(alpha: float) -> float:
    """2/alpha: the exponent governing the heavy tail of Poisson interference."""
    if alpha <= 0:
        raise ValueError(f"path-loss exponent must be positive, got {alpha}")
    return 2.0 / alpha


def geometry_factor_exact(theta: float, r: float, delta: float) -> float:
    """Coefficient mapping density x power-moment to the exact outage exponent.

    Equals pi^2/sin(pi*delta) * delta * theta^delta * r^2. Only defined for
    0 < delta < 1; at delta >= 1 the aggregate interference of an
    independently powered Poisson field is infinite.
    """
    if theta <= 0 or r <= 0:
        raise ValueError("theta and r must be positive")
    if not 0.0 < delta < 1.0:
        raise DeltaOutOfRange(
            f"exact interference analysis needs 0 < delta < 1, got delta={delta}"
        )
    return math.pi**2 / math.sin(math.pi * delta) * delta * theta**delta * r**2


def geometry_factor_bound(theta: float, r: float, delta: float) -> float:
    """Coefficient of the outage lower bound: pi * r^2 * theta^delta * Gamma(1+delta)."""
    if theta <= 0 or r <= 0:
        raise ValueError("theta and r must be positive")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.pi * r**2 * theta**delta * math.gamma(1.0 + delta)


@dataclass(frozen=True)
class NetworkParams:
    """Densities, link distances, path loss, and per-layer QoS targets.

    ``delta`` = 2/alpha is derived at construction. Operations that rely on
    the exact independent-control analysis additionally require delta < 1 and
    outage targets at most 1 - 1/e; those checks live in the operations, not
    here, because the bound-based analysis has no such restriction.
    """

    lambda_c: float
    lambda_d: float
    r_c: float = 1.0
    r_d: float = 1.0
    alpha: float = 2.0 / 0.75
    theta_c: float = 0.1
    theta_d: float = 0.1
    eps_c: float = 0.01
    eps_d: float = 0.01
    delta: float = field(init=False)

    def __post_init__(self):
        if self.lambda_c < 0 or self.lambda_d < 0:
            raise ValueError("densities must be nonnegative")
        if self.r_c <= 0 or self.r_d <= 0:
            raise ValueError("link distances must be positive")
        if self.alpha <= 0:
            raise ValueError("path-loss exponent must be positive")
        if self.theta_c <= 0 or self.theta_d <= 0:
            raise ValueError("SIR thresholds must be positive")
        for eps in (self.eps_c, self.eps_d):
            if not 0.0 < eps < 1.0:
                raise ValueError(f"outage targets must lie in (0, 1), got {eps}")
        object.__setattr__(self, "delta", stability_exponent(self.alpha))

    def theta(self, which: str) -> float:
        return self.theta_c if which == CELLULAR else self.theta_d

    def r(self, which: str) -> float:
        return self.r_c if which == CELLULAR else self.r_d

    def eps(self, which: str) -> float:
        return self.eps_c if which == CELLULAR else self.eps_d

    def geometry_exact(self, which: str) -> float:
        return geometry_factor_exact(self.theta(which), self.r(which), self.delta)

    def geometry_bound(self, which: str) -> float:
        return geometry_factor_bound(self.theta(which), self.r(which), self.delta)


class PowerPolicy:
    """Base for transmit-power laws; see the concrete subclasses."""

    peak: float | None

    @property
    def is_channel_dependent(self) -> bool:
        raise NotImplementedError

    def power_at(self, h):
        """Transmit power as a function of the transmitter's own fade h."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n i.i.d. powers; dependent laws draw their own fades first."""
        if not self.is_channel_dependent:
            return self.power_at(np.zeros(n))
        return self.power_at(rng.standard_exponential(n))

    def _check_peak(self):
        if self.peak is not None and self.peak <= 0:
            raise ValueError("peak power must be positive when given")


@dataclass(frozen=True)
class ConstantPower(PowerPolicy):
    """Fixed transmit level, statistically independent of every channel."""

    level: float
    peak: float | None = None

    def __post_init__(self):
        if self.level <= 0:
            raise ValueError(f"constant power level must be positive, got {self.level}")
        self._check_peak()

    @property
    def is_channel_dependent(self) -> bool:
        return False

    def power_at(self, h):
        return np.full_like(np.asarray(h, dtype=float), self.level)


@dataclass(frozen=True)
class FractionalPower(PowerPolicy):
    """P = scale * h^(-exponent): partial inversion of the own-link fade.

    exponent = 0 degenerates to a constant level; exponent = 1 is full
    channel inversion.
    """

    scale: float
    exponent: float
    peak: float | None = None

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.exponent < 0:
            raise ValueError(f"exponent must be nonnegative, got {self.exponent}")
        self._check_peak()

    @property
    def is_channel_dependent(self) -> bool:
        return self.exponent != 0.0

    def power_at(self, h):
        h = np.asarray(h, dtype=float)
        if self.exponent == 0.0:
            return np.full_like(h, self.scale)
        with np.errstate(divide="ignore"):
            return self.scale * h**-self.exponent


@dataclass(frozen=True)
class PiecewiseConstantPower(PowerPolicy):
    """Level p_i on [x_i, x_{i+1}) of the own fade; zero beyond the last point.

    The zero tail carries mass e^{-grid[-1]}, so its moment contribution is
    dropped from the truncated sums below (and a zero level makes the
    inverse-power moment infinite).
    """

    grid: np.ndarray
    levels: np.ndarray
    peak: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("grid needs at least two points")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if grid[0] < 0:
            raise ValueError("grid must start at or above zero")
        if levels.shape != (grid.size - 1,):
            raise ValueError("need exactly one level per grid cell")
        if np.any(levels < 0):
            raise ValueError("levels must be nonnegative")
        grid.setflags(write=False)
        levels.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "levels", levels)
        self._check_peak()

    @property
    def is_channel_dependent(self) -> bool:
        return True

    def power_at(self, h):
        h = np.asarray(h, dtype=float)
        idx = np.searchsorted(self.grid, h, side="right") - 1
        inside = (idx >= 0) & (idx < self.levels.size) & (h >= self.grid[0]) & (h < self.grid[-1])
        out = np.zeros_like(h)
        out[inside] = self.levels[np.clip(idx[inside], 0, self.levels.size - 1)]
        return out


@dataclass(frozen=True)
class PolicyMoments:
    """Fade-averaged moments of a power law under unit-mean exponential fading.

    p_delta       E[P^delta]
    inv_p_h_delta E[P^-delta * h^-delta], h the transmitter's own fade
    mean          E[P]

    Divergent moments are stored as math.inf; callers that need finiteness
    use :meth:`require_finite`.
    """

    p_delta: float
    inv_p_h_delta: float
    mean: float

    def require_finite(self, *names: str) -> "PolicyMoments":
        for name in names:
            if not math.isfinite(getattr(self, name)):
                raise MomentDiverges(name)
        return self


def policy_moments(policy: PowerPolicy, delta: float) -> PolicyMoments:
    """Analytic moments of a policy; infinite ones come back as math.inf.

    For a fractional law P = k h^-s the closed forms are
    E[P^delta] = k^delta Gamma(1 - s*delta),
    E[P^-delta h^-delta] = k^-delta Gamma(1 + delta*(s - 1)),
    E[P] = k Gamma(1 - s),
    each finite exactly when its Gamma argument is positive.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if isinstance(policy, ConstantPower):
        p = policy.level
        return PolicyMoments(p**delta, p**-delta * gamma_moment(1.0 - delta), p)
    if isinstance(policy, FractionalPower):
        k, s = policy.scale, policy.exponent
        return PolicyMoments(
            k**delta * gamma_moment(1.0 - s * delta),
            k**-delta * gamma_moment(1.0 + delta * (s - 1.0)),
            k * gamma_moment(1.0 - s),
        )
    if isinstance(policy, PiecewiseConstantPower):
        a = exp_cell_masses(policy.grid)
        p = policy.levels
        y = float(a @ p**delta)
        mean = float(a @ p)
        if delta >= 1.0 and policy.grid[0] <= 0.0:
            z = math.inf
        else:
            c = power_exp_cell_masses(policy.grid, delta)
            if np.any((p == 0.0) & (c > 0.0)):
                z = math.inf
            else:
                with np.errstate(divide="ignore"):
                    z = float(c @ p**-delta)
        return PolicyMoments(y, z, mean)
    raise TypeError(f"unsupported policy type {type(policy).__name__}")


def mean_inverse_power(policy: PowerPolicy) -> float:
    """E[1/P], used for window-size heuristics; inf when it diverges.

    Zero piecewise levels are skipped: trials landing there are outages
    regardless of interference, so they carry no truncation sensitivity.
    """
    if isinstance(policy, ConstantPower):
        return 1.0 / policy.level
    if isinstance(policy, FractionalPower):
        return math.gamma(1.0 + policy.exponent) / policy.scale
    if isinstance(policy, PiecewiseConstantPower):
        a = exp_cell_masses(policy.grid)
        pos = policy.levels > 0
        return float(a[pos] @ (1.0 / policy.levels[pos]))
    raise TypeError(f"unsupported policy type {type(policy).__name__}")
