"""Mutual-information bounds for parameter-estimation strategies.

Two upper-bound routes for the information I(m:phi) carried by any
measurement of a phase-encoded family |psi_phi> under a prior p(phi):

* the spectral route: project the amplitude-weighted family onto Fourier
  modes, f_k = <psihat_k|psihat_k> / L, and bound
  I <= -sum f_k log2 f_k - log2 L + H(phi);
* the Fisher route: bound the spectrum's second moment by
  sigma^2 = (L^2 / 16 pi^2) * integral [pdot^2/p + p F] dphi and use the
  max-entropy envelope, I <= 0.5 log2(1 + 2 pi e sigma^2) - log2 L + H(phi).

A matching asymptotic lower bound for maximum-likelihood estimation and
an entropic uncertainty check for number/phase pairs live here too.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (
    DivergenceError,
    DomainError,
    GridTooCoarseError,
    NonConvergenceError,
    NonNormalizedDensityError,
    NumericalFailureError,
    ValidationError,
)
from .numerics import (
    TWO_PI,
    FourierSpectrum,
    PeriodicGridFunction,
    coefficients_to_density,
    differential_entropy,
    entropy_bits_of_weights,
    fourier_modes,
)

# pointwise floors for the pdot^2/p convention
PROB_FLOOR = 1e-14
DERIV_FLOOR = 1e-7


@dataclass(frozen=True)
class PriorDensity:
    """Prior p(phi) on a period-L grid, with amplitude q, |q|^2 = p.

    q defaults to sqrt(p); a caller may pass any complex q with the same
    modulus (the bound depends on the choice, the default is the plain
    square root). finite_support marks priors that really live on a
    sub-interval and were embedded in a larger window.
    """

    period: float
    values: np.ndarray
    q_values: Optional[np.ndarray] = None
    finite_support: Optional[tuple] = None

    def __post_init__(self):
        pgf = PeriodicGridFunction(self.period, np.asarray(self.values, dtype=float))
        if np.any(pgf.values < -1e-12):
            raise ValidationError("prior density has negative samples")
        vals = np.clip(pgf.values, 0.0, None)
        h = self.period / vals.size
        total = float(vals.sum() * h)
        if abs(total - 1.0) > 1e-6:
            raise NonNormalizedDensityError(
                f"prior integrates to {total:.9g}, expected 1 within 1e-6"
            )
        object.__setattr__(self, "values", vals)
        if self.q_values is None:
            object.__setattr__(self, "q_values", np.sqrt(vals).astype(complex))
        else:
            q = np.asarray(self.q_values, dtype=complex)
            if q.shape != vals.shape:
                raise ValidationError("q_values shape does not match density")
            if np.max(np.abs(np.abs(q) ** 2 - vals)) > 1e-10:
                raise ValidationError("|q|^2 does not match the density")
            object.__setattr__(self, "q_values", q)

    @property
    def n_grid(self):
        return self.values.size

    @property
    def grid(self):
        return np.arange(self.n_grid) * (self.period / self.n_grid)

    @cached_property
    def entropy_bits(self):
        return differential_entropy(PeriodicGridFunction(self.period, self.values))

    @classmethod
    def uniform(cls, period=1.0, n_grid=4096):
        return cls(period, np.full(n_grid, 1.0 / period))

    @classmethod
    def from_callable(cls, fn, period=1.0, n_grid=4096, q_fn=None):
        phis = np.arange(n_grid) * (period / n_grid)
        q = None if q_fn is None else np.asarray(q_fn(phis), dtype=complex)
        return cls(period, np.asarray(fn(phis), dtype=float), q_values=q)


@dataclass(frozen=True)
class StateFamily:
    """Pure states |psi_phi> sampled on a period-L grid, one row per phi."""

    period: float
    states: np.ndarray

    def __post_init__(self):
        st = np.asarray(self.states, dtype=complex)
        if st.ndim != 2:
            raise ValidationError("states must be a (grid, dim) array")
        if st.shape[0] < 2 or st.shape[0] % 2 != 0:
            raise ValidationError("grid size must be even and at least 2")
        norms = np.linalg.norm(st, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-8:
            raise ValidationError("states must be normalized to 1 within 1e-8")
        object.__setattr__(self, "states", st)

    @property
    def n_grid(self):
        return self.states.shape[0]

    @classmethod
    def from_callable(cls, fn, period=1.0, n_grid=4096):
        phis = np.arange(n_grid) * (period / n_grid)
        return cls(period, np.asarray(fn(phis), dtype=complex))


@dataclass(frozen=True)
class EstimationModel:
    """Classical outcome model: prior plus p(m|phi) columns on its grid."""

    prior: PriorDensity
    conditional: np.ndarray

    def __post_init__(self):
        cond = np.asarray(self.conditional, dtype=float)
        if cond.ndim != 2 or cond.shape[0] != self.prior.n_grid:
            raise ValidationError(
                "conditional must be (grid, outcomes) on the prior grid"
            )
        if np.any(cond < -1e-12):
            raise ValidationError("conditional probabilities must be nonnegative")
        cond = np.clip(cond, 0.0, None)
        rows = cond.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > 1e-8:
            raise NonNormalizedDensityError(
                "conditional rows must sum to 1 within 1e-8"
            )
        object.__setattr__(self, "conditional", cond)

    @classmethod
    def from_callable(cls, prior, fn):
        return cls(prior, np.asarray(fn(prior.grid), dtype=float))


@dataclass(frozen=True)
class BoundReport:
    """One bound evaluation; serializes to a small flat JSON object."""

    method: str
    bound_bits: float
    prior_entropy_bits: float
    sigma2: Optional[float] = None
    tail_mass_bound: Optional[float] = None
    flags: tuple = ()
    spectrum: Optional[FourierSpectrum] = None
    history: tuple = ()

    def to_json_dict(self):
        finite = math.isfinite(self.bound_bits)

        def num(value):
            # +0.0 so a negative zero never leaks into serialized output
            return None if value is None else float(value) + 0.0

        return {
            "method": self.method,
            "bound_bits": num(self.bound_bits) if finite else None,
            "sigma2": num(self.sigma2),
            "prior_entropy_bits": num(self.prior_entropy_bits),
            "tail_mass_bound": num(self.tail_mass_bound),
            "flags": list(self.flags),
        }


def _spectrum_from_states(family: StateFamily, prior: PriorDensity, k_range):
    if abs(family.period - prior.period) > 1e-12 or family.n_grid != prior.n_grid:
        raise ValidationError("state family and prior must share one grid")
    k_min, k_max = int(k_range[0]), int(k_range[1])
    g = family.n_grid
    if k_min > k_max:
        raise ValidationError("k_min must not exceed k_max")
    need = 2 * (abs(k_min) + abs(k_max)) + 2
    if g < need:
        raise GridTooCoarseError(
            f"grid of {g} points cannot resolve k in [{k_min}, {k_max}]"
        )
    weighted = prior.q_values[:, None] * family.states
    coeffs = np.fft.fft(weighted, axis=0) / g
    ks = np.arange(k_min, k_max + 1)
    sel = coeffs[np.mod(ks, g), :]
    weights = family.period * (np.abs(sel) ** 2).sum(axis=1)
    total = float(weights.sum())
    if total > 1.0 + 1e-9:
        raise NumericalFailureError(
            f"spectrum mass {total:.12g} exceeds 1; grid or inputs are inconsistent"
        )
    return FourierSpectrum(ks, weights, tail_mass_bound=max(0.0, 1.0 - total))


def fourier_bound_from_states(
    family: StateFamily, prior: PriorDensity, k_range
) -> BoundReport:
    """Spectral upper bound from explicit state samples.

    Computes f_k = L * sum_d |(1/L) integral q psi_d e^(-i2pi k phi/L)|^2
    over the requested index window and returns
    -sum f_k log2 f_k - log2 L + H(phi).
    """
    spectrum = _spectrum_from_states(family, prior, k_range)
    bound = (
        spectrum.entropy_bits()
        - np.log2(prior.period)
        + prior.entropy_bits
    )
    flags = ()
    if spectrum.tail_mass_bound > 1e-9:
        flags = ("truncated_spectrum",)
    return BoundReport(
        method="fourier",
        bound_bits=float(bound),
        prior_entropy_bits=float(prior.entropy_bits),
        tail_mass_bound=spectrum.tail_mass_bound,
        flags=flags,
        spectrum=spectrum,
    )


def fourier_bound_from_overlap(f: PeriodicGridFunction, k_range=None) -> BoundReport:
    """Spectral upper bound from an overlap function f(phi) = <psi_0|psi_phi>.

    Valid for unitary encodings under the uniform prior, where the linear
    Fourier coefficients of f are exactly the spectral weights f_k.
    Requires f(0) = 1 within 1e-8.
    """
    if abs(f.values[0] - 1.0) > 1e-8:
        raise ValidationError("overlap must satisfy f(0) = 1 within 1e-8")
    if k_range is None:
        half = (f.n_grid - 2) // 4
        k_range = (-half, half)
    ks, coeffs = fourier_modes(f, k_range)
    if np.max(np.abs(coeffs.imag)) > 1e-9:
        raise NumericalFailureError("overlap spectrum has non-real coefficients")
    weights = coeffs.real
    if np.any(weights < -1e-10):
        raise NumericalFailureError(
            "overlap spectrum has negative weights beyond tolerance"
        )
    weights = np.clip(weights, 0.0, None)
    total = float(weights.sum())
    if total > 1.0 + 1e-9:
        raise NumericalFailureError(f"overlap spectrum mass {total:.12g} exceeds 1")
    spectrum = FourierSpectrum(ks, weights, tail_mass_bound=max(0.0, 1.0 - total))
    # uniform prior: -log2 L + H(phi) = 0, the bound is the spectrum entropy
    prior_entropy = float(np.log2(f.period))
    return BoundReport(
        method="fourier",
        bound_bits=spectrum.entropy_bits(),
        prior_entropy_bits=prior_entropy,
        tail_mass_bound=spectrum.tail_mass_bound,
        spectrum=spectrum,
    )


def _has_step_discontinuity(values):
    """Grid-scale jump test: largest |delta| against a robust slope scale."""
    diffs = np.abs(np.diff(values, append=values[:1]))
    jump = float(diffs.max())
    if jump <= 1e-5 * max(float(np.max(np.abs(values))), 1e-300):
        return False  # too small to matter even if it is a step
    scale = float(np.quantile(diffs, 0.99))
    return jump > 10.0 * scale


def _quotient_terms(p, h):
    """pdot^2 / p columnwise with the touching-zero convention.

    Where p < PROB_FLOOR and the centered slope is below DERIV_FLOOR the
    true limit at a quadratic touch is 2*pddot, which the second
    difference supplies; a flat zero gives 0 there. A sizable slope into
    a zero means the quotient genuinely diverges.
    """
    pdot = (np.roll(p, -1, axis=0) - np.roll(p, 1, axis=0)) / (2.0 * h)
    pddot = (np.roll(p, -1, axis=0) - 2.0 * p + np.roll(p, 1, axis=0)) / (h * h)
    tiny = p < PROB_FLOOR
    if np.any(tiny & (np.abs(pdot) >= DERIV_FLOOR)):
        raise DivergenceError("pdot^2/p diverges at a zero crossed with slope")
    out = np.zeros_like(p)
    ok = ~tiny
    out[ok] = pdot[ok] ** 2 / p[ok]
    touch = tiny & (pddot > 0.0)
    out[touch] = 2.0 * pddot[touch]
    return out


def fisher_profile(model: EstimationModel):
    """Classical Fisher information F(phi) = sum_m pdot(m|phi)^2 / p(m|phi).

    Derivatives are second-order central differences on the periodic
    grid. Raises DivergenceError when an outcome column has a grid-scale
    step or a zero approached with nonzero slope.
    """
    cond = model.conditional
    h = model.prior.period / model.prior.n_grid
    for m in range(cond.shape[1]):
        if _has_step_discontinuity(cond[:, m]):
            raise DivergenceError(f"outcome {m} has a grid-scale discontinuity")
    terms = _quotient_terms(cond, h)
    return PeriodicGridFunction(model.prior.period, terms.sum(axis=1))


def sigma_squared(prior: PriorDensity, model: EstimationModel = None,
                  fisher_avg: float = None):
    """Second-moment budget (L^2 / 16 pi^2) integral [pdot^2/p + p F] dphi.

    Exactly one of `model` (full outcome model) or `fisher_avg` (constant
    Fisher information) must describe the measurement. Returns
    (sigma2, flags); a detected discontinuity or divergence yields
    (inf, ("divergent",)) instead of a huge finite number.
    """
    if (model is None) == (fisher_avg is None):
        raise ValidationError("pass exactly one of model or fisher_avg")
    h = prior.period / prior.n_grid
    p = prior.values
    flags = ()
    if _has_step_discontinuity(p):
        return float("inf"), ("divergent",)
    try:
        prior_term = float(_quotient_terms(p[:, None], h).sum() * h)
    except DivergenceError:
        return float("inf"), ("divergent",)
    if fisher_avg is not None:
        if fisher_avg < 0.0:
            raise DomainError("fisher_avg must be nonnegative")
        fisher_term = float(fisher_avg)
    else:
        if model.prior is not prior and (
            model.prior.n_grid != prior.n_grid
            or abs(model.prior.period - prior.period) > 1e-12
        ):
            raise ValidationError("model grid does not match the prior grid")
        try:
            fvals = fisher_profile(model).values
        except DivergenceError:
            return float("inf"), ("divergent",)
        fisher_term = float((p * fvals).sum() * h)
    total = prior_term + fisher_term
    sigma2 = prior.period**2 / (16.0 * np.pi**2) * total
    return float(sigma2), flags


def fisher_bound(prior: PriorDensity, model: EstimationModel = None,
                 fisher_avg: float = None, sigma2: float = None) -> BoundReport:
    """Fisher-route upper bound 0.5 log2(1+2 pi e sigma^2) - log2 L + H(phi).

    sigma^2 may be passed directly (already in spectral units) or derived
    from a model / constant Fisher information via sigma_squared.
    """
    flags = ()
    if sigma2 is None:
        sigma2, flags = sigma_squared(prior, model=model, fisher_avg=fisher_avg)
    elif model is not None or fisher_avg is not None:
        raise ValidationError("pass sigma2 alone, or model/fisher_avg")
    elif sigma2 < 0.0:
        raise DomainError("sigma2 must be nonnegative")
    if not math.isfinite(sigma2):
        return BoundReport(
            method="fisher",
            bound_bits=float("inf"),
            prior_entropy_bits=float(prior.entropy_bits),
            sigma2=float("inf"),
            flags=tuple(flags) or ("divergent",),
        )
    bound = (
        0.5 * np.log2(1.0 + TWO_PI * np.e * sigma2)
        - np.log2(prior.period)
        + prior.entropy_bits
    )
    return BoundReport(
        method="fisher",
        bound_bits=float(bound),
        prior_entropy_bits=float(prior.entropy_bits),
        sigma2=float(sigma2),
        flags=tuple(flags),
    )


def _next_even(n):
    n = int(np.ceil(n))
    return n if n % 2 == 0 else n + 1


def nonperiodic_fourier_bound(
    family_fn,
    prior_fn,
    support,
    *,
    window_factor=4.0,
    k_band=16.0,
    max_doublings=6,
    tol_converged=1e-4,
    tol_fail=1e-3,
) -> BoundReport:
    """Spectral bound for a prior supported on a finite interval.

    Embeds the problem in a periodic window at least `window_factor`
    times the support, evaluates the periodic bound, and doubles the
    window until two successive values agree within `tol_converged` bits.
    The density of Fourier modes grows with the window, approaching the
    continuous-spectrum bound.

    family_fn(phis) must return normalized states (len(phis), dim);
    prior_fn(phis) the prior density, zero outside `support`; k_band is
    the starting absolute frequency band (cycles per unit phi) kept on
    each side.  The band is doubled automatically while the out-of-band
    spectral mass exceeds 1e-8: a fixed mass deficit eps would otherwise
    bias the bound by -eps bits per window doubling and fake a drift.

    Raises NonConvergenceError if the last doubling still moved the
    result by more than `tol_fail` bits, or if the band cannot be made
    wide enough to capture the spectrum.
    """
    a, b_end = float(support[0]), float(support[1])
    if not b_end > a:
        raise ValidationError("support must be a nonempty interval (a, b)")
    if window_factor < 2.0:
        raise ValidationError("window_factor must be at least 2")
    span = b_end - a
    history = []
    report = None
    band_widened = False
    window = window_factor * span
    for _ in range(max_doublings + 1):
        mid = 0.5 * (a + b_end)
        start = mid - 0.5 * window
        for widening in range(7):
            n_side = int(np.ceil(k_band * window))
            n_grid = _next_even(max(4 * n_side + 2, 256))
            phis = start + np.arange(n_grid) * (window / n_grid)
            dens = np.clip(np.asarray(prior_fn(phis), dtype=float), 0.0, None)
            dens[(phis < a) | (phis > b_end)] = 0.0
            h = window / n_grid
            mass = dens.sum() * h
            if mass <= 0.0:
                raise ValidationError("prior density vanishes on its support")
            if abs(mass - 1.0) > 1e-3:
                raise NonNormalizedDensityError(
                    f"prior mass on support is {mass:.6g}, expected about 1"
                )
            dens = dens / mass  # periodized prior is renormalized exactly
            prior = PriorDensity(window, dens, finite_support=(a, b_end))
            family = StateFamily(window, np.asarray(family_fn(phis), dtype=complex))
            rep = fourier_bound_from_states(family, prior, (-n_side, n_side))
            if rep.tail_mass_bound <= 1e-8:
                break
            k_band *= 2.0
            band_widened = True
        else:
            raise NonConvergenceError(
                "spectral band cannot be widened enough to capture the family"
            )
        history.append((window, rep.bound_bits))
        if len(history) >= 2:
            delta = abs(history[-1][1] - history[-2][1])
            if delta < tol_converged:
                report = rep
                break
        window *= 2.0
    flags = ("finite_support",)
    if band_widened:
        flags = flags + ("band_widened",)
    if report is None:
        delta = abs(history[-1][1] - history[-2][1])
        if delta > tol_fail:
            raise NonConvergenceError(
                f"window doubling still moves the bound by {delta:.3g} bits"
            )
        report = rep
        flags = flags + ("slow_convergence",)
    return BoundReport(
        method="fourier-nonperiodic",
        bound_bits=report.bound_bits,
        prior_entropy_bits=report.prior_entropy_bits,
        tail_mass_bound=report.tail_mass_bound,
        flags=flags + tuple(report.flags),
        spectrum=report.spectrum,
        history=tuple(history),
    )


def mle_lower_bound(n_repetitions: int, fisher: float, period: float = 1.0
                    ) -> BoundReport:
    """Asymptotic achievable information 0.5 log2(L^2 N F / (2 pi e)).

    Large-N maximum-likelihood performance; meaningful once L^2 N F is
    well above 2 pi e, hence the "asymptotic" flag.
    """
    if int(n_repetitions) < 1:
        raise ValidationError("n_repetitions must be at least 1")
    if fisher <= 0.0:
        raise DomainError("fisher must be positive for the MLE estimate")
    value = 0.5 * np.log2(period**2 * n_repetitions * fisher / (TWO_PI * np.e))
    return BoundReport(
        method="mle-lower",
        bound_bits=float(value),
        prior_entropy_bits=float(np.log2(period)),
        flags=("asymptotic",),
    )


MLE_GAP_LIMIT_BITS = float(np.log2(np.e / 2.0))  # about 0.4427


def companion_bound_comparison(fisher: float):
    """The Fisher-route bound against two weaker closed forms.

    Returns (fisher_form, sqrt_form, reference_form):
      fisher_form    = 0.5 log2(1 + (e / 8 pi) F)
      sqrt_form      = log2(1 + sqrt(e / 8 pi) sqrt(F))
      reference_form = log2(1 + 0.5 sqrt(F))
    with fisher_form <= sqrt_form <= reference_form for every F >= 0.
    """
    if fisher < 0.0:
        raise DomainError("fisher must be nonnegative")
    ratio = np.e / (8.0 * np.pi)
    fisher_form = 0.5 * np.log2(1.0 + ratio * fisher)
    sqrt_form = np.log2(1.0 + np.sqrt(ratio * fisher))
    reference_form = np.log2(1.0 + 0.5 * np.sqrt(fisher))
    return float(fisher_form), float(sqrt_form), float(reference_form)


def entropic_uncertainty_check(c, n_grid=8192):
    """Number/phase entropic uncertainty for amplitudes c_k, k = 0..len-1.

    Returns (phase_entropy_bits, number_entropy_bits, total_bits) where
    the phase entropy is the differential entropy of
    p(theta) = |sum_k c_k e^(i 2 pi k theta)|^2 and the number entropy is
    the Shannon entropy of |c_k|^2. The total is never below zero up to
    quadrature error; it approaches zero for single-mode states.
    """
    c = np.asarray(c, dtype=complex)
    weights = np.abs(c) ** 2
    if abs(weights.sum() - 1.0) > 1e-8:
        raise NonNormalizedDensityError("amplitudes must satisfy sum |c_k|^2 = 1")
    density = coefficients_to_density(c, max(int(n_grid), 2 * c.size))
    # the synthesized density integrates to sum |c|^2 exactly (Parseval)
    phase_entropy = differential_entropy(density)
    number_entropy = entropy_bits_of_weights(weights)
    return phase_entropy, number_entropy, phase_entropy + number_entropy
