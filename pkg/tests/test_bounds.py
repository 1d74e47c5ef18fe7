"""Fourier- and Fisher-route information bounds and their companions."""

import json
import math

import numpy as np
import pytest

from mibounds.bounds import (
    MLE_GAP_LIMIT_BITS,
    BoundReport,
    EstimationModel,
    PriorDensity,
    StateFamily,
    companion_bound_comparison,
    entropic_uncertainty_check,
    fisher_bound,
    fisher_profile,
    fourier_bound_from_overlap,
    fourier_bound_from_states,
    mle_lower_bound,
    nonperiodic_fourier_bound,
    sigma_squared,
)
from mibounds.errors import (
    DivergenceError,
    DomainError,
    NonNormalizedDensityError,
    ValidationError,
)
from mibounds.numerics import PeriodicGridFunction

TWO_PI = 2.0 * np.pi


def test_prior_density_validation():
    with pytest.raises(ValidationError):
        PriorDensity(1.0, np.full(64, -1.0))
    with pytest.raises(NonNormalizedDensityError):
        PriorDensity(1.0, np.full(64, 2.0))
    # q must reproduce the density in modulus
    with pytest.raises(ValidationError):
        PriorDensity(1.0, np.full(64, 1.0), q_values=np.full(64, 0.5 + 0j))
    prior = PriorDensity.uniform(1.0, 64)
    assert abs(prior.entropy_bits) < 1e-12
    assert abs(PriorDensity.uniform(2.0, 64).entropy_bits - 1.0) < 1e-12


def test_prior_accepts_phase_twisted_amplitude():
    phis = np.arange(64) / 64.0
    q = np.exp(1j * np.pi * phis)  # |q|^2 = 1 = uniform density
    prior = PriorDensity(1.0, np.ones(64), q_values=q)
    assert np.max(np.abs(np.abs(prior.q_values) ** 2 - 1.0)) < 1e-12


def test_sigma_squared_constant_fisher():
    # uniform prior: sigma^2 = L^2 F / (16 pi^2) exactly
    prior = PriorDensity.uniform(1.0, 1024)
    for fval in (1.0, 4.0 * np.pi**2, 333.0):
        s2, flags = sigma_squared(prior, fisher_avg=fval)
        assert abs(s2 - fval / (16.0 * np.pi**2)) < 1e-12
        assert flags == ()


def test_sigma_squared_requires_one_source():
    prior = PriorDensity.uniform(1.0, 64)
    with pytest.raises(ValidationError):
        sigma_squared(prior)
    with pytest.raises(ValidationError):
        sigma_squared(
            prior,
            model=EstimationModel(prior, np.ones((64, 1))),
            fisher_avg=1.0,
        )


def test_fisher_bound_constant_fisher_closed_form():
    """F = 4 pi^2 with the uniform prior gives 0.5*log2(1 + e pi / 2)."""
    prior = PriorDensity.uniform(1.0, 4096)
    rep = fisher_bound(prior, fisher_avg=4.0 * np.pi**2)
    expected = 0.5 * np.log2(1.0 + np.e * np.pi / 2.0)
    assert abs(rep.bound_bits - expected) < 1e-12
    assert abs(rep.bound_bits - 1.1988832911558522) < 1e-12
    assert rep.method == "fisher"
    assert rep.flags == ()


def test_fisher_bound_monotone_in_fisher():
    prior = PriorDensity.uniform(1.0, 512)
    values = [
        fisher_bound(prior, fisher_avg=f).bound_bits
        for f in np.logspace(-1, 4, 12)
    ]
    assert all(b2 > b1 for b1, b2 in zip(values, values[1:]))


def test_sigma_squared_cosine_model():
    """The two-outcome cos^2 model integrates to sigma^2 = 1/4."""
    prior = PriorDensity.uniform(1.0, 4096)
    phis = prior.grid
    cond = np.stack(
        [np.cos(np.pi * phis) ** 2, np.sin(np.pi * phis) ** 2], axis=1
    )
    s2, flags = sigma_squared(prior, model=EstimationModel(prior, cond))
    assert abs(s2 - 0.25) < 1e-5
    assert flags == ()


def test_fisher_profile_of_cosine_model_is_constant():
    # F(phi) = 4 pi^2 for p = cos^2(pi phi), away from the touch points
    prior = PriorDensity.uniform(1.0, 2048)
    phis = prior.grid
    cond = np.stack(
        [np.cos(np.pi * phis) ** 2, np.sin(np.pi * phis) ** 2], axis=1
    )
    prof = fisher_profile(EstimationModel(prior, cond))
    inner = prof.values[8:-8]
    assert np.max(np.abs(inner - 4.0 * np.pi**2)) < 1e-3


def test_fisher_profile_rejects_step_model():
    prior = PriorDensity.uniform(1.0, 512)
    p1 = np.where(prior.grid < 0.5, 0.8, 0.2)
    model = EstimationModel(prior, np.stack([p1, 1.0 - p1], axis=1))
    with pytest.raises(DivergenceError):
        fisher_profile(model)


def test_fisher_profile_rejects_sloped_zero():
    prior = PriorDensity.uniform(1.0, 512)
    p1 = np.abs(np.sin(2.0 * np.pi * prior.grid)) * 0.5
    p1[0] = 0.0
    p1[1] = 1e-20  # zero approached with a finite slope on one side
    model = EstimationModel(prior, np.stack([p1, 1.0 - p1], axis=1))
    with pytest.raises(DivergenceError):
        fisher_profile(model)


def test_sigma_squared_flags_divergent_prior():
    vals = np.where(np.arange(512) < 256, 2.0, 0.0)
    prior = PriorDensity(1.0, vals)
    s2, flags = sigma_squared(prior, fisher_avg=1.0)
    assert math.isinf(s2)
    assert flags == ("divergent",)
    rep = fisher_bound(prior, fisher_avg=1.0)
    assert math.isinf(rep.bound_bits)
    assert "divergent" in rep.flags


def test_fourier_bound_of_binary_superposition():
    """|psi> = (|0> + e^(i 2 pi phi)|1>)/sqrt(2) carries at most 1 bit."""
    phis = np.arange(256) / 256.0
    f = PeriodicGridFunction(1.0, 0.5 + 0.5 * np.exp(2j * np.pi * phis))
    rep = fourier_bound_from_overlap(f)
    assert abs(rep.bound_bits - 1.0) < 1e-10
    d = rep.spectrum.as_dict()
    assert abs(d[0] - 0.5) < 1e-12 and abs(d[1] - 0.5) < 1e-12


def test_states_route_matches_overlap_route():
    phis = np.arange(256) / 256.0
    states = np.stack(
        [np.full(256, 1.0 + 0j), np.exp(2j * np.pi * phis)], axis=1
    ) / np.sqrt(2.0)
    family = StateFamily(1.0, states)
    prior = PriorDensity.uniform(1.0, 256)
    rep_states = fourier_bound_from_states(family, prior, (-8, 9))
    f = PeriodicGridFunction(1.0, states @ states[0].conj())
    rep_overlap = fourier_bound_from_overlap(f)
    assert abs(rep_states.bound_bits - rep_overlap.bound_bits) < 1e-10
    assert abs(rep_states.bound_bits - 1.0) < 1e-10


def test_states_route_rejects_mismatched_grids():
    phis = np.arange(64) / 64.0
    states = np.stack(
        [np.full(64, 1.0 + 0j), np.exp(2j * np.pi * phis)], axis=1
    ) / np.sqrt(2.0)
    family = StateFamily(1.0, states)
    with pytest.raises(ValidationError):
        fourier_bound_from_states(family, PriorDensity.uniform(1.0, 128), (-2, 2))


def test_state_family_validation():
    with pytest.raises(ValidationError):
        StateFamily(1.0, np.ones((64, 2)))  # norm sqrt(2), not 1
    with pytest.raises(ValidationError):
        StateFamily(1.0, np.ones(64))  # not 2-d


def test_bound_report_json_schema():
    prior = PriorDensity.uniform(1.0, 256)
    rep = fisher_bound(prior, fisher_avg=1.0)
    d = rep.to_json_dict()
    assert set(d) == {
        "method",
        "bound_bits",
        "sigma2",
        "prior_entropy_bits",
        "tail_mass_bound",
        "flags",
    }
    assert d["tail_mass_bound"] is None
    assert isinstance(d["flags"], list)
    # negative zero must not leak into serialized numbers
    assert math.copysign(1.0, d["prior_entropy_bits"]) == 1.0
    json.dumps(d)


def test_mle_gap_shrinks_to_limit():
    """fisher_bound - mle_lower_bound falls monotonically to log2(e/2)."""
    prior = PriorDensity.uniform(1.0, 1024)
    gaps = []
    for nf in (1e2, 1e3, 1e4, 1e5, 1e6):
        upper = fisher_bound(prior, fisher_avg=nf)
        lower = mle_lower_bound(1, nf)
        gaps.append(upper.bound_bits - lower.bound_bits)
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    assert abs(gaps[-1] - MLE_GAP_LIMIT_BITS) < 0.01
    assert abs(MLE_GAP_LIMIT_BITS - np.log2(np.e / 2.0)) < 1e-15


def test_mle_lower_bound_validation():
    with pytest.raises(ValidationError):
        mle_lower_bound(0, 1.0)
    with pytest.raises(DomainError):
        mle_lower_bound(10, 0.0)


def test_companion_bound_ordering():
    for fval in np.logspace(-2, 6, 100):
        lo, mid, hi = companion_bound_comparison(fval)
        assert lo < mid < hi
    assert companion_bound_comparison(0.0) == (0.0, 0.0, 0.0)


def test_nonperiodic_gaussian_family():
    """Finite-support embedding settles once the window is wide enough."""
    sig = 0.05
    prior_fn = lambda x: np.exp(-(x**2) / (2 * sig**2)) / (
        sig * np.sqrt(2 * np.pi)
    )
    ks = np.arange(21)
    amps = np.ones(21) / np.sqrt(21.0)
    fam = lambda x: np.exp(2j * np.pi * np.outer(x, ks)) * amps
    rep = nonperiodic_fourier_bound(fam, prior_fn, (-0.5, 0.5))
    assert abs(rep.bound_bits - 2.311720837160207) < 1e-6
    deltas = [
        abs(b2 - b1)
        for (_, b1), (_, b2) in zip(rep.history, rep.history[1:])
    ]
    assert deltas and deltas[-1] < 1e-4
    assert "finite_support" in rep.flags
    assert rep.tail_mass_bound <= 1e-8


def test_nonperiodic_single_mode_floor():
    # one Fourier mode against a narrow Gaussian prior: the bound collapses
    # to the prior-independent floor log2(e/2) of the spectral route
    sig = 0.05
    prior_fn = lambda x: np.exp(-(x**2) / (2 * sig**2)) / (
        sig * np.sqrt(2 * np.pi)
    )
    const = lambda x: np.tile(np.array([1.0 + 0j, 0.0]), (len(x), 1))
    rep = nonperiodic_fourier_bound(const, prior_fn, (-0.5, 0.5))
    assert abs(rep.bound_bits - np.log2(np.e / 2.0)) < 1e-6


def test_nonperiodic_validation():
    fam = lambda x: np.tile(np.array([1.0 + 0j, 0.0]), (len(x), 1))
    prior_fn = lambda x: np.ones_like(x)
    with pytest.raises(ValidationError):
        nonperiodic_fourier_bound(fam, prior_fn, (0.5, 0.5))
    with pytest.raises(ValidationError):
        nonperiodic_fourier_bound(
            fam, prior_fn, (0.0, 1.0), window_factor=1.5
        )


def test_entropic_uncertainty_nonnegative():
    """Phase and number entropies never sum below zero (seeded sweep)."""
    rng = np.random.default_rng(5)
    worst = np.inf
    for _ in range(300):
        n = int(rng.integers(2, 33))
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c /= np.linalg.norm(c)
        phase_h, number_h, total = entropic_uncertainty_check(c)
        assert abs((phase_h + number_h) - total) < 1e-12
        worst = min(worst, total)
    assert worst > -1e-6


def test_entropic_uncertainty_single_mode():
    # a lone mode has flat phase density and zero number entropy
    phase_h, number_h, total = entropic_uncertainty_check(np.array([1.0]))
    assert abs(phase_h) < 1e-9
    assert number_h == 0.0
    assert abs(total) < 1e-9
