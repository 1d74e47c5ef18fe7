"""Entangled N-call protocols and covariant phase measurements.

An input state sum_k c_k |k> picks up phase e^(i 2 pi k phi) on mode k.
Under the uniform prior the covariant measurement returns an estimate
whose error theta = phi_est - phi has density
p(theta) = |sum_k c_k e^(i 2 pi k theta)|^2, and the information it
extracts is exactly minus the differential entropy of p. Optimizing the
real coefficients c over the unit sphere therefore minimizes the
posterior entropy; the spectrum entropy -sum c_k^2 log2 c_k^2 caps the
achievable information at log2(N+1).

The two-seed experiment compares a single covariant seed against a pair
of seeds measured jointly or sorted into sub-ensembles, reporting the
mutual-information bookkeeping of each arrangement by plain double
quadrature over the torus.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, GridTooCoarseError, ValidationError
from .numerics import (
    LN2,
    PeriodicGridFunction,
    coefficients_to_density,
    differential_entropy,
    entropy_bits_of_weights,
)


@dataclass(frozen=True)
class EntangledState:
    """Real amplitudes c_0..c_N on the phase modes, sum c_k^2 = 1."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValidationError("coefficients must be a non-empty 1-d array")
        if abs((c * c).sum() - 1.0) > 1e-10:
            raise ValidationError("coefficients must satisfy sum c_k^2 = 1")
        object.__setattr__(self, "coefficients", c)

    @property
    def n_calls(self):
        return self.coefficients.size - 1

    @classmethod
    def uniform(cls, n_calls: int):
        if int(n_calls) < 0:
            raise ValidationError("n_calls must be nonnegative")
        n = int(n_calls) + 1
        return cls(np.full(n, 1.0 / np.sqrt(n)))


def default_grid(n_calls: int) -> int:
    """Synthesis grid 16*(N+1), the resolution used for posterior plots."""
    return 16 * (int(n_calls) + 1)


def covariant_posterior(state: EntangledState, n_grid=None) -> PeriodicGridFunction:
    """Error density p(theta) = |sum_k c_k e^(i 2 pi k theta)|^2 on [0, 1)."""
    if n_grid is None:
        n_grid = default_grid(state.n_calls)
    return coefficients_to_density(state.coefficients, n_grid)


def _entropy_bits(c, n_grid):
    """Posterior entropy of amplitude vector c, bits, via padded FFT."""
    padded = np.zeros(n_grid, dtype=complex)
    padded[: c.size] = c
    amp = np.fft.ifft(padded) * n_grid
    p = np.abs(amp) ** 2
    mass = p.sum() / n_grid
    plog = p * np.log(np.maximum(p, 1e-300))
    return -plog.sum() / (n_grid * LN2 * mass)


def posterior_entropy(state: EntangledState, n_grid=None) -> float:
    """Differential entropy of the covariant error density, in bits.

    Negative for concentrated posteriors; under the uniform prior the
    extracted information is exactly minus this value. The quadrature
    grid defaults to at least 4096 points because the integrand p log p
    has kinks at the zeros of p.
    """
    if n_grid is None:
        n_grid = max(default_grid(state.n_calls), 4096)
    if n_grid < 2 * (state.n_calls + 1):
        raise GridTooCoarseError("entropy grid must be at least 2*(N+1)")
    return float(_entropy_bits(state.coefficients.astype(complex), int(n_grid)))


def fourier_bound_ceiling(state: EntangledState) -> float:
    """Spectrum entropy -sum c_k^2 log2 c_k^2, at most log2(N+1) bits."""
    return entropy_bits_of_weights(state.coefficients**2)


def optimize_en_state(n_calls: int, *, restarts=8, seed=0, n_grid=None,
                      entropy_tol=1e-10, analytic_gradient=True):
    """Minimize the posterior entropy over real unit-norm amplitudes.

    Runs a quasi-Newton descent in the ambient coordinates x with
    c = x / |x| (the objective is scale-free), from one uniform start
    plus seeded random restarts (each restart draws from its own RNG
    stream keyed by (seed, restart index)), and keeps the best minimum.

    Returns (EntangledState, entropy_bits, mi_bits, trace) where
    mi_bits = -entropy_bits is the information extracted under the
    uniform prior and trace lists the converged entropy of every start.
    """
    n = int(n_calls) + 1
    if n < 1:
        raise ValidationError("n_calls must be nonnegative")
    if n_grid is None:
        n_grid = max(default_grid(n_calls), 4096)
    n_grid = int(n_grid)
    if n_grid < 2 * n:
        raise GridTooCoarseError("optimizer grid must be at least 2*(N+1)")

    def value_and_grad(x):
        r = np.linalg.norm(x)
        c = x / r
        padded = np.zeros(n_grid, dtype=complex)
        padded[:n] = c
        amp = np.fft.ifft(padded) * n_grid
        p = np.abs(amp) ** 2
        logp = np.log(np.maximum(p, 1e-300))
        val = -(p * logp).sum() / (n_grid * LN2)
        # d p_j / d c_k = 2 Re(conj(amp_j) e^{i 2 pi j k / G});
        # resumming over j is one more inverse FFT
        w = (1.0 + logp) * np.conj(amp)
        g_c = -(2.0 / LN2) * np.real(np.fft.ifft(w)[:n])
        g_x = (g_c - float(g_c @ c) * c) / r  # project out the scale direction
        return float(val), g_x

    def value_only(x):
        return value_and_grad(x)[0]

    starts = [np.full(n, 1.0)]
    for i in range(1, max(1, int(restarts))):
        stream = np.random.default_rng([int(seed), i])
        starts.append(np.abs(stream.standard_normal(n)) + 1e-3)

    best_c, best_val, trace = None, np.inf, []
    for x0 in starts:
        if analytic_gradient:
            res = minimize(
                value_and_grad, x0, jac=True, method="L-BFGS-B",
                options={"ftol": entropy_tol * 1e-2, "gtol": 1e-9,
                         "maxiter": 5000},
            )
        else:
            res = minimize(
                value_only, x0, method="L-BFGS-B",
                options={"ftol": entropy_tol * 1e-2, "maxiter": 5000},
            )
        c = res.x / np.linalg.norm(res.x)
        val = float(value_and_grad(c)[0])
        trace.append(val)
        if val < best_val:
            best_val, best_c = val, c
    if best_c.sum() < 0.0:
        best_c = -best_c  # global sign is immaterial, report the positive rep
    # renormalize exactly against accumulated roundoff
    best_c = best_c / np.linalg.norm(best_c)
    return (EntangledState(best_c), float(best_val), float(-best_val),
            tuple(trace))


@dataclass(frozen=True)
class SeedPair:
    """Two covariant seeds splitting the all-ones seed: |a_n|^2+|b_n|^2 = 1."""

    state: EntangledState
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        n = self.state.coefficients.size
        if a.shape != (n,) or b.shape != (n,):
            raise ValidationError("seed vectors must match the state length")
        mods = np.abs(a) ** 2 + np.abs(b) ** 2
        if np.max(np.abs(mods - 1.0)) > 1e-10:
            raise ValidationError(
                "seeds must satisfy |a_n|^2 + |b_n|^2 = 1 for every n"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class TwoSeedResult:
    lambda_1: float
    lambda_2: float
    mi_single: float
    mi_split: float
    mi_merged: float
    always_ok: bool
    fromconv_ok: bool
    wonder_violated: bool


def _circulant_joint(r_values, n_grid):
    """Joint density matrix P[s, t] = r((t - s) mod n) / n^2 on the torus.

    Row s indexes the estimate, column t the true phase under the uniform
    prior; mass equals the mean of r.
    """
    idx = np.mod(np.arange(n_grid)[None, :] - np.arange(n_grid)[:, None], n_grid)
    return r_values[idx] / (n_grid * n_grid)


def discrete_mi(joint) -> float:
    """Mutual information in bits of a nonnegative matrix (renormalized)."""
    joint = np.asarray(joint, dtype=float)
    if np.any(joint < 0.0):
        raise DomainError("joint weights must be nonnegative")
    mass = joint.sum()
    if mass <= 0.0:
        raise DomainError("joint weights must have positive mass")
    p = joint / mass
    rows = p.sum(axis=1)
    cols = p.sum(axis=0)
    outer = rows[:, None] * cols[None, :]
    mask = p > 0.0
    return float((p[mask] * np.log(p[mask] / outer[mask])).sum() / LN2)


def _synthesized(r_coeffs, n_grid):
    padded = np.zeros(n_grid, dtype=complex)
    padded[: r_coeffs.size] = r_coeffs
    return np.abs(np.fft.ifft(padded) * n_grid) ** 2


def two_seed_experiment(pair: SeedPair, n_grid=256) -> TwoSeedResult:
    """Compare one covariant seed against a split pair by double quadrature.

    All mutual informations are computed from explicit joint matrices on
    an n_grid x n_grid (estimate, phase) torus grid:

    * mi_single: the all-ones seed on the state;
    * mi_split:  lambda_1 I[q(.|1)] + lambda_2 I[q(.|2)], the outcome
      label i kept and each sub-ensemble renormalized;
    * mi_merged: the label discarded, densities summed.

    The attached booleans record mi_merged <= mi_single + 1e-9 (expected
    always), mi_merged <= mi_split + 1e-9 (convexity), and whether
    mi_split exceeds mi_single beyond 1e-9 (never observed).
    """
    n_grid = int(n_grid)
    c = pair.state.coefficients.astype(complex)
    if n_grid < 8 * c.size:
        raise GridTooCoarseError("two-seed grid must be at least 8*(N+1)")

    r_single = _synthesized(c, n_grid)
    r_1 = _synthesized(np.conj(pair.a) * c, n_grid)
    r_2 = _synthesized(np.conj(pair.b) * c, n_grid)

    # seed masses must not depend on the true phase: column sums of the
    # conditional are constant by covariance, kept as an explicit check
    lambda_1 = float(np.mean(r_1))
    lambda_2 = float(np.mean(r_2))
    if abs(lambda_1 + lambda_2 - 1.0) > 1e-8:
        raise ValidationError("seed masses do not add to one")

    joint_single = _circulant_joint(r_single, n_grid)
    joint_merged = _circulant_joint(r_1 + r_2, n_grid)

    mi_single = discrete_mi(joint_single)
    mi_merged = discrete_mi(joint_merged)

    mi_split = 0.0
    for lam, r in ((lambda_1, r_1), (lambda_2, r_2)):
        if lam > 1e-12:  # zero-mass seeds contribute nothing
            mi_split += lam * discrete_mi(_circulant_joint(r / lam, n_grid))

    return TwoSeedResult(
        lambda_1=lambda_1,
        lambda_2=lambda_2,
        mi_single=mi_single,
        mi_split=float(mi_split),
        mi_merged=mi_merged,
        always_ok=bool(mi_merged <= mi_single + 1e-9),
        fromconv_ok=bool(mi_merged <= mi_split + 1e-9),
        wonder_violated=bool(mi_split > mi_single + 1e-9),
    )


def random_seed_pair(n_calls: int, rng, base_state: EntangledState = None) -> SeedPair:
    """Draw a random real seed pair for a flat-amplitude base state.

    The base state defaults to uniform weights, the reference input for
    which the all-ones seed is the matched covariant measurement; the
    merged-versus-single comparison is only meaningful against a matched
    reference.  Each index splits its unit weight between the two seeds
    with an independent uniform fraction and independent random signs.
    An explicit ``base_state`` overrides the default.
    """
    n = int(n_calls) + 1
    if base_state is None:
        base_state = EntangledState.uniform(n_calls)
    u = rng.uniform(0.0, 1.0, size=n)
    a = np.sqrt(u) * rng.choice([-1.0, 1.0], size=n)
    b = np.sqrt(1.0 - u) * rng.choice([-1.0, 1.0], size=n)
    return SeedPair(base_state, a.astype(complex), b.astype(complex))
