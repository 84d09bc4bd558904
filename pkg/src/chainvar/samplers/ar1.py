"""Reversible vector AR(1) process with closed-form moments.

The process is ``X_{k+1} = A X_k + U_{k+1}`` with iid normal innovations
``U ~ N(theta, V)``.  It satisfies detailed balance exactly when ``A V``
is symmetric, and when the spectral radius of A is below one it has the
stationary law ``N((I-A)^{-1} theta, (I-A^2)^{-1} V)``.  This makes it the
one fixture with fully analytic lag autocovariances and long-run
covariance, so estimator output can be checked against ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.signal import lfilter

from ..chain import Chain
from ..symmat import symmetrize
from ._rng import SeedLike, as_generator
from .hadamard import hadamard

_AV_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Ar1Params:
    """Coefficient matrix, innovation covariance, and innovation mean.

    Validated on construction: ``A V`` symmetric to 1e-12 (the
    detailed-balance condition) and spectral radius of A below one.
    """

    A: np.ndarray
    V: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        A = np.atleast_2d(np.asarray(self.A, dtype=np.float64))
        V = np.atleast_2d(np.asarray(self.V, dtype=np.float64))
        theta = np.atleast_1d(np.asarray(self.theta, dtype=np.float64)).reshape(-1)
        p = A.shape[0]
        if A.shape != (p, p) or V.shape != (p, p) or theta.shape != (p,):
            raise ValueError(
                f"inconsistent shapes: A {A.shape}, V {V.shape}, theta {theta.shape}"
            )
        if not np.array_equal(V, V.T):
            raise ValueError("V must be exactly symmetric")
        if np.linalg.eigvalsh(V)[0] <= 0.0:
            raise ValueError("V must be positive definite")
        av = A @ V
        skew = np.abs(av - av.T).max()
        if skew > _AV_SYMMETRY_TOL * max(1.0, np.abs(av).max()):
            raise ValueError(
                f"A V must be symmetric for reversibility (max asymmetry {skew:.3e})"
            )
        d, _, _ = _modes(A, V)
        if np.abs(d).max() >= 1.0:
            raise ValueError(f"spectral radius of A must be < 1, got {np.abs(d).max()}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "theta", theta)

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @classmethod
    def scalar(cls, a: float, v: float = 1.0, theta: float = 1.0) -> "Ar1Params":
        return cls(np.array([[a]]), np.array([[v]]), np.array([theta]))

    @classmethod
    def hadamard_fixture(cls, p: int) -> "Ar1Params":
        """The benchmark fixture: A = H diag(2^-1..2^-p) H' / p, V = I, theta = 1."""
        h = hadamard(p).astype(np.float64)
        decay = 0.5 ** np.arange(1, p + 1)
        a = (h * decay) @ h.T / p
        return cls(a, np.eye(p), np.ones(p))


def _modes(A: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonalize the process: return (d, B, L) with A = B diag(d) B^{-1}.

    ``L`` is the lower Cholesky factor of V and ``B = L Q`` where Q holds
    the (orthonormal) eigenvectors of the symmetric matrix L^{-1} A L:
    symmetry of that matrix is exactly the detailed-balance condition, so
    d is real.  In B-coordinates the process decouples into independent
    scalar recursions with unit innovation variance.
    """
    L = np.linalg.cholesky(V)
    m = solve_triangular(L, A @ L, lower=True)
    d, q = np.linalg.eigh(symmetrize(m))
    return d, L @ q, L


@dataclass(frozen=True)
class Ar1Truth:
    """Closed-form moments of the stationary process.

    ``mu`` is the stationary mean, ``C`` the stationary covariance, and
    ``Sigma`` the long-run covariance of the sample mean.  ``gamma``,
    ``pair_sum`` and ``partial_sum`` give the lag-t autocovariance, the
    adjacent-pair sums and their truncated totals, all evaluated through
    the spectral decomposition of A so that arbitrarily fast-decaying
    terms keep their (positive) analytic spectra.
    """

    mu: np.ndarray
    C: np.ndarray
    Sigma: np.ndarray
    decays: np.ndarray
    _basis: np.ndarray = field(repr=False)
    _lag_exponent: int = 1

    def _assemble(self, mode_values: np.ndarray) -> np.ndarray:
        b = self._basis
        return symmetrize((b * mode_values) @ b.T)

    def _mode_c(self) -> np.ndarray:
        return 1.0 / (1.0 - self.decays**2)

    def gamma(self, t: int) -> np.ndarray:
        """Lag-t autocovariance matrix of the stationary process."""
        if t < 0:
            raise ValueError(f"lag must be >= 0, got {t}")
        return self._assemble(self.decays ** (self._lag_exponent * t) * self._mode_c())

    def pair_sum(self, i: int) -> np.ndarray:
        """Sum of the lag-(2i) and lag-(2i+1) autocovariances."""
        e = self._lag_exponent
        d = self.decays
        return self._assemble((d ** (2 * i * e) + d ** ((2 * i + 1) * e)) * self._mode_c())

    def pair_sum_eigenvalues(self, i: int) -> np.ndarray:
        """Spectrum of ``pair_sum(i)`` when V = I (basis orthonormal)."""
        e = self._lag_exponent
        d = self.decays
        return np.sort((d ** (2 * i * e) + d ** ((2 * i + 1) * e)) * self._mode_c())

    def partial_sum(self, m: int) -> np.ndarray:
        """Truncated long-run covariance: -gamma(0) + 2 * (pair sums 0..m)."""
        if m < 0:
            raise ValueError(f"index must be >= 0, got {m}")
        e = self._lag_exponent
        d = self.decays
        geom = (1.0 - d ** (e * (2 * m + 2))) / (1.0 - d**e)
        return self._assemble((2.0 * geom - 1.0) * self._mode_c())


def ar1_truth(params: Ar1Params, doubled_lag_decay: bool = False) -> Ar1Truth:
    """Closed-form stationary moments for the given process.

    With ``doubled_lag_decay`` the lag-t autocovariance is taken to decay
    like A^{2t} instead of A^t.  That variant exists only for comparison
    against an alternative published closed form; the default matches the
    recursion ``X_{k+1} = A X_k + U`` and is validated against the
    simulated long-run variance.
    """
    d, basis, _ = _modes(params.A, params.V)
    eye_minus_a = np.eye(params.p) - params.A
    mu = np.linalg.solve(eye_minus_a, params.theta)
    mode_c = 1.0 / (1.0 - d**2)
    exponent = 2 if doubled_lag_decay else 1
    geom = 1.0 / (1.0 - d**exponent)
    c = symmetrize((basis * mode_c) @ basis.T)
    sigma = symmetrize((basis * ((2.0 * geom - 1.0) * mode_c)) @ basis.T)
    return Ar1Truth(mu, c, sigma, d, basis, exponent)


def ar1_simulate(params: Ar1Params, n: int, seed: SeedLike) -> Chain:
    """Simulate n steps started from the stationary distribution.

    The recursion is run in the decoupling coordinates of
    :func:`Ar1Params` (independent scalar AR(1) components, evaluated
    with a compiled linear filter), then mapped back.  Deterministic:
    identical seeds give bit-identical chains.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = as_generator(seed)
    d, basis, L = _modes(params.A, params.V)
    p = params.p
    # innovation mean and X_0 in decoupled coordinates
    wbar = np.linalg.solve(basis, params.theta)
    z0 = wbar / (1.0 - d) + rng.standard_normal(p) / np.sqrt(1.0 - d**2)
    w = rng.standard_normal((n, p)) + wbar
    z = np.empty((n, p))
    for k in range(p):
        z[:, k], _ = lfilter([1.0], [1.0, -d[k]], w[:, k], zi=[d[k] * z0[k]])
    return Chain(z @ basis.T)
