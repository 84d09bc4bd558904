"""Random scan Gibbs sampler for a Bayesian one-way random effects model.

Observations ``y_i ~ N(theta_i, 1/gam_i)`` for i = 1..K, group means
``theta_i ~ N(mu, 1/(lam_theta * lam_i))``, a normal prior on ``mu`` and
gamma priors (shape-rate throughout) on every precision.  The posterior
lives on the 3K+2 coordinates ``(theta_1..theta_K, mu, lam_theta,
lam_1..lam_K, gam_1..gam_K)``, which is the recorded layout.

Each iteration picks one of the four blocks -- lam_theta, (lam_i),
(gam_i), or the joint location block (theta, mu) -- uniformly at random
and redraws it from its full conditional: conjugate gammas for the
precision blocks and a joint multivariate normal for the locations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from ..chain import Chain
from ._rng import SeedLike, as_generator


@dataclass(frozen=True)
class RandomEffectsHyper:
    """Hyperparameters; gamma distributions are shape-rate (mean a/b)."""

    a1: float = 0.1
    a2: float = 0.1
    a3: float = 1.5
    b1: float = 0.1
    b2: float = 0.1
    b3: float = 1.5
    m0: float = 0.0
    v0: float = 0.001

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3", "b1", "b2", "b3", "v0"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"hyperparameter {name} must be > 0")


@dataclass
class RandomEffectsState:
    theta: np.ndarray
    mu: float
    lam_theta: float
    lam: np.ndarray
    gam: np.ndarray

    def as_row(self) -> np.ndarray:
        return np.concatenate([self.theta, [self.mu, self.lam_theta], self.lam, self.gam])


def coordinate_names(K: int) -> list[str]:
    """Column labels matching the recorded layout (p = 3K + 2)."""
    return (
        [f"theta_{i + 1}" for i in range(K)]
        + ["mu", "lam_theta"]
        + [f"lam_{i + 1}" for i in range(K)]
        + [f"gam_{i + 1}" for i in range(K)]
    )


def draw_shrinkage_precision(state: RandomEffectsState, hyper: RandomEffectsHyper,
                             rng: np.random.Generator) -> float:
    """lam_theta | rest ~ Gamma(a1 + K/2, b1 + sum(lam_i (theta_i - mu)^2)/2)."""
    K = state.theta.shape[0]
    rate = hyper.b1 + 0.5 * float(state.lam @ (state.theta - state.mu) ** 2)
    return float(rng.gamma(hyper.a1 + 0.5 * K, 1.0 / rate))


def draw_component_precisions(state: RandomEffectsState, hyper: RandomEffectsHyper,
                              rng: np.random.Generator) -> np.ndarray:
    """lam_i | rest ~ Gamma(a2 + 1/2, b2 + lam_theta (theta_i - mu)^2 / 2)."""
    rates = hyper.b2 + 0.5 * state.lam_theta * (state.theta - state.mu) ** 2
    return rng.gamma(hyper.a2 + 0.5, 1.0 / rates)


def draw_observation_precisions(state: RandomEffectsState, hyper: RandomEffectsHyper,
                                y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """gam_i | rest ~ Gamma(a3 + 1/2, b3 + (y_i - theta_i)^2 / 2)."""
    rates = hyper.b3 + 0.5 * (y - state.theta) ** 2
    return rng.gamma(hyper.a3 + 0.5, 1.0 / rates)


def location_precision(state: RandomEffectsState, hyper: RandomEffectsHyper,
                       y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Precision matrix and linear term of the (theta, mu) full conditional.

    The conditional is N(P^{-1} b, P^{-1}) with an arrow-shaped P:
    diagonal ``gam_i + lam_theta lam_i`` over theta, border
    ``-lam_theta lam_i`` coupling each theta_i to mu, and corner
    ``v0 + lam_theta sum(lam)``.
    """
    K = state.theta.shape[0]
    coupling = state.lam_theta * state.lam
    P = np.zeros((K + 1, K + 1))
    P[np.arange(K), np.arange(K)] = state.gam + coupling
    P[:K, K] = -coupling
    P[K, :K] = -coupling
    P[K, K] = hyper.v0 + coupling.sum()
    b = np.concatenate([state.gam * y, [hyper.v0 * hyper.m0]])
    return P, b


def draw_locations(state: RandomEffectsState, hyper: RandomEffectsHyper,
                   y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw of (theta_1..theta_K, mu) from the joint normal conditional."""
    P, b = location_precision(state, hyper, y)
    lower = np.linalg.cholesky(P)
    mean = np.linalg.solve(P, b)
    z = rng.standard_normal(P.shape[0])
    return mean + solve_triangular(lower.T, z, lower=False)


def simulate_dataset(K: int, seed: SeedLike = 0) -> np.ndarray:
    """A reproducible synthetic data vector: y_i = theta_i + noise, both standard normal."""
    rng = as_generator(seed)
    return rng.standard_normal(K) + rng.standard_normal(K)


def gibbs_random_effects(y, hyper: RandomEffectsHyper | None = None, n: int = 1,
                         seed: SeedLike = 0) -> Chain:
    """Run the random scan Gibbs sampler for n iterations.

    Starts from ``theta = y``, ``mu = mean(y)`` and unit precisions, and
    records all 3K+2 coordinates after every iteration.  Deterministic
    given the seed; every recorded precision is strictly positive.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    K = y.shape[0]
    if K < 1:
        raise ValueError("need K >= 1 observations")
    if not np.all(np.isfinite(y)):
        raise ValueError("y must be finite")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    hyper = hyper or RandomEffectsHyper()
    rng = as_generator(seed)
    state = RandomEffectsState(
        theta=y.copy(),
        mu=float(y.mean()),
        lam_theta=1.0,
        lam=np.ones(K),
        gam=np.ones(K),
    )
    out = np.empty((n, 3 * K + 2))
    for i in range(n):
        block = int(rng.integers(4))
        if block == 0:
            state.lam_theta = draw_shrinkage_precision(state, hyper, rng)
        elif block == 1:
            state.lam = draw_component_precisions(state, hyper, rng)
        elif block == 2:
            state.gam = draw_observation_precisions(state, hyper, y, rng)
        else:
            xi = draw_locations(state, hyper, y, rng)
            state.theta = xi[:K]
            state.mu = float(xi[K])
        out[i] = state.as_row()
    return Chain(out)
