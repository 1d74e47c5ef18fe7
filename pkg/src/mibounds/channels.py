"""Noisy quantum-phase-estimation models on M qubits.

Qubit j picks up the phase 2^j * 2*pi*phi (N = 2^M - 1 calls in total)
and is degraded by one of three single-qubit noise channels with
retention parameter eta in [0, 1]:

* "dephasing": the off-diagonal element of qubit j survives with factor
  eta^(2^j), so the purified overlap factor carries the squared factor
  eta^(2^(j+1)) on its oscillating term;
* "amplitude-damping": excited population decays, survival eta per call;
* "erasure": the qubit is replaced by a flag state with probability
  1 - eta per call.

For each channel the overlap f(phi) = <psi_0|psi_phi> of the purified
run factorizes over qubits as prod_j (1 - x_j + x_j e^(i 2 pi 2^j phi)),
which makes the Fourier weights a product of binary distributions and
the spectrum entropy a sum of binary entropies.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .numerics import (
    PeriodicGridFunction,
    binary_entropy,
    entropy_bits_of_weights,
    fourier_modes,
)

CHANNEL_KINDS = ("dephasing", "amplitude-damping", "erasure")

# closed forms are sums over qubits; well past j ~ 50 the terms underflow,
# and 2^M overflows int64 bookkeeping long before that matters
MAX_QUBITS = 30


@dataclass(frozen=True)
class NoisyQpeModel:
    """A noisy phase-estimation run: channel kind, qubit count M, eta."""

    kind: str
    n_qubits: int
    eta: float

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValidationError(
                f"unknown channel {self.kind!r}, expected one of {CHANNEL_KINDS}"
            )
        if not (1 <= int(self.n_qubits) <= MAX_QUBITS):
            raise ValidationError(f"n_qubits must be in 1..{MAX_QUBITS}")
        if not (0.0 <= self.eta <= 1.0):
            raise DomainError("eta must lie in [0, 1]")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def n_calls(self):
        """Total phase-gate calls 2^M - 1."""
        return 2 ** self.n_qubits - 1


def mode_weight_args(model: NoisyQpeModel):
    """Oscillating-term coefficients x_j of the per-qubit overlap factors.

    Qubit j contributes the factor 1 - x_j + x_j e^(i 2 pi 2^j phi), so
    the chi increment of qubit j is the binary entropy of x_j.
    """
    j = np.arange(model.n_qubits, dtype=float)
    eta = model.eta
    if model.kind == "dephasing":
        return eta ** (2.0 ** (j + 1)) / 2.0
    if model.kind == "amplitude-damping":
        y = eta ** (2.0**j)
        return y / (4.0 - 2.0 * y)
    y = eta ** (2.0**j)  # erasure
    return y / 2.0


def overlap_function(model: NoisyQpeModel, n_grid=None) -> PeriodicGridFunction:
    """Overlap f(phi) = <psi_0|psi_phi> of the purified run on a period-1 grid.

    f(0) = 1 exactly and |f| <= 1 everywhere; the modes live on
    k = 0..2^M - 1. The default grid resolves them with a factor-4
    margin (at least 64 points).
    """
    if n_grid is None:
        n_grid = max(4 * (model.n_calls + 1), 64)
    xs = mode_weight_args(model)
    phis = np.arange(int(n_grid)) * (1.0 / int(n_grid))
    values = np.ones(int(n_grid), dtype=complex)
    for j, x in enumerate(xs):
        values *= (1.0 - x) + x * np.exp(1j * 2.0 * np.pi * (2**j) * phis)
    return PeriodicGridFunction(1.0, values)


def chi_closed_form(model: NoisyQpeModel) -> float:
    """Spectrum entropy chi in bits as a sum of per-qubit binary entropies."""
    return float(sum(binary_entropy(float(x)) for x in mode_weight_args(model)))


def chi_numeric(model: NoisyQpeModel, n_grid=None) -> float:
    """chi recomputed from the gridded overlap by Fourier projection.

    Kept to M <= 10: the mode count 2^M drives the grid size. Agrees with
    chi_closed_form to well within 1e-8 there.
    """
    if model.n_qubits > 10:
        raise ValidationError("numeric chi path kept to n_qubits <= 10")
    k_max = model.n_calls
    if n_grid is None:
        n_grid = 2 * (k_max + 1)
    f = overlap_function(model, n_grid)
    _, coeffs = fourier_modes(f, (0, k_max))
    if np.max(np.abs(coeffs.imag)) > 1e-9:
        raise ValidationError("overlap coefficients are not real")
    weights = np.clip(coeffs.real, 0.0, None)
    return entropy_bits_of_weights(weights)


def dephasing_qfi(n_qubits: int, eta: float) -> float:
    """Fisher information (2 pi)^2 sum_j 4^j eta^(2^j) of the dephased run.

    At eta = 1 this collapses to (2 pi)^2 (4^M - 1) / 3, the noiseless
    Heisenberg value for N = 2^M - 1 calls.
    """
    if not (1 <= int(n_qubits) <= MAX_QUBITS):
        raise ValidationError(f"n_qubits must be in 1..{MAX_QUBITS}")
    if not (0.0 <= eta <= 1.0):
        raise DomainError("eta must lie in [0, 1]")
    j = np.arange(int(n_qubits), dtype=float)
    return float((2.0 * np.pi) ** 2 * (4.0**j * eta ** (2.0**j)).sum())


def _factor_states(model: NoisyQpeModel, j: int, phis):
    """Purification factor of qubit j at each phi: array (len(phis), dim)."""
    eta = model.eta
    two_j = 2.0**j
    phase = np.exp(1j * 2.0 * np.pi * (2**j) * phis)
    if model.kind == "dephasing":
        # (|00> + (eta e^{i 2 pi phi})^{2^j} |10> + sqrt(1-eta^{2^{j+1}})|11>)/sqrt(2)
        out = np.zeros((phis.size, 4), dtype=complex)
        out[:, 0] = 1.0
        out[:, 2] = (eta**two_j) * phase
        out[:, 3] = np.sqrt(max(0.0, 1.0 - eta ** (2.0 * two_j)))
        return out / np.sqrt(2.0)
    if model.kind == "amplitude-damping":
        y = eta**two_j
        out = np.zeros((phis.size, 4), dtype=complex)
        out[:, 0] = np.sqrt(2.0 - y)
        out[:, 2] = np.sqrt(y) * phase / np.sqrt(2.0 - y)
        out[:, 1] = np.sqrt(y * (1.0 - y) / (2.0 - y))
        return out / np.sqrt(2.0)
    # erasure: system {|0>,|1>,|2>} times environment {|0>,|1>}
    y = eta**two_j
    out = np.zeros((phis.size, 6), dtype=complex)
    out[:, 0] = np.sqrt(y) / np.sqrt(2.0)
    out[:, 2] = np.sqrt(y) * phase / np.sqrt(2.0)
    out[:, 5] = np.sqrt(max(0.0, 1.0 - y))
    return out


def purified_state_family(model: NoisyQpeModel, phis):
    """Explicit tensor-product purified states |psi_phi>, one row per phi.

    The full Kronecker product grows as dim^M, so this construction is
    kept to M <= 6 and modest grids; it exists to cross-check the product
    overlap against honest state vectors.
    """
    if model.n_qubits > 6:
        raise ValidationError("purified family construction kept to n_qubits <= 6")
    phis = np.asarray(phis, dtype=float)
    states = np.ones((phis.size, 1), dtype=complex)
    for j in range(model.n_qubits):
        factor = _factor_states(model, j, phis)
        states = (states[:, :, None] * factor[:, None, :]).reshape(phis.size, -1)
    return states
