"""Number-conserving fermionic Gaussian states as correlation matrices.

A state of N modes is stored as the Hermitian N x N matrix C with
C[i, j] = <c_i^dag c_j>.  Throughout the package k_B*T = 1 and hbar = 1:
energies are in units of k_B*T, times in 1/(k_B*T), entropies in nats.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit, xlogy

HERMITIAN_TOL = 1e-12
SPECTRUM_TOL = 1e-10
PROB_TOL = 1e-12


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def require_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    m = as_square_matrix(a, name)
    if m.size:
        dev = np.abs(m - m.conj().T).max()
        if dev > tol:
            raise ValueError(
                f"{name} is not Hermitian: max deviation {dev:.3e} exceeds {tol:.0e}"
            )
    return m


def require_correlation(a, tol: float = SPECTRUM_TOL) -> np.ndarray:
    """Validate a correlation matrix: Hermitian with spectrum in [0, 1]."""
    c = require_hermitian(a, name="correlation matrix")
    if c.size:
        ev = np.linalg.eigvalsh(c)
        if ev[0] < -tol or ev[-1] > 1.0 + tol:
            raise ValueError(
                f"correlation matrix eigenvalues outside [0, 1]: "
                f"min={ev[0]:.3e}, max={ev[-1]:.3e}"
            )
    return c


def _mode_indices(modes, dim: int) -> np.ndarray:
    idx = [int(m) for m in modes]
    if not idx:
        raise ValueError("mode subset must be nonempty")
    for m in idx:
        if m < 0 or m >= dim:
            raise ValueError(f"mode index {m} out of range for {dim} modes")
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate mode indices")
    return np.array(sorted(idx), dtype=int)


def evolve_step(C, H, dt: float) -> np.ndarray:
    """Conjugate C by exp(+i*dt*H): one exact step of stepwise-constant evolution.

    The propagator comes from the eigendecomposition of H, so the step is
    exact (not a first-order scheme) and preserves trace, spectrum and
    Hermiticity of C.
    """
    C = require_hermitian(C, name="correlation matrix")
    H = require_hermitian(H, name="Hamiltonian")
    if C.shape != H.shape:
        raise ValueError(f"dimension mismatch: C is {C.shape}, H is {H.shape}")
    if dt < 0:
        raise ValueError(f"dt must be nonnegative, got {dt}")
    if dt == 0:
        return C.copy()
    w, V = np.linalg.eigh(H)
    U = (V * np.exp(1j * dt * w)) @ V.conj().T
    out = U @ C @ U.conj().T
    return 0.5 * (out + out.conj().T)


def binary_entropy(x: float) -> float:
    """h(x) = -x ln x - (1-x) ln(1-x), with h(0) = h(1) = 0."""
    x = float(x)
    if x < -PROB_TOL or x > 1.0 + PROB_TOL:
        raise ValueError(f"probability {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return float(-xlogy(x, x) - xlogy(1.0 - x, 1.0 - x))


def subsystem_entropy(C, modes) -> float:
    """Von Neumann entropy of the reduced Gaussian state on a mode subset.

    Equals the sum of binary entropies of the eigenvalues of the principal
    sub-block of C; eigenvalues are clipped to [0, 1] before evaluation.
    """
    C = require_hermitian(C, name="correlation matrix")
    idx = _mode_indices(modes, C.shape[0])
    block = C[np.ix_(idx, idx)]
    nu = np.clip(np.linalg.eigvalsh(block), 0.0, 1.0)
    return float(sum(binary_entropy(v) for v in nu))


def coherent_information(C, memory_modes) -> float:
    """S_memory - S_total; positive values certify entanglement across the cut."""
    C = require_hermitian(C, name="correlation matrix")
    dim = C.shape[0]
    idx = _mode_indices(memory_modes, dim)
    if len(idx) >= dim:
        raise ValueError("memory modes must be a proper subset of all modes")
    return subsystem_entropy(C, idx) - subsystem_entropy(C, range(dim))


def fermi_occupation(eps):
    """Fermi function 1/(1 + e^eps) at beta = 1, mu = 0 (no overflow)."""
    out = expit(-np.asarray(eps, dtype=float))
    if out.ndim == 0:
        return float(out)
    return out


def energy_expectation(C, H) -> float:
    """Tr(H C); raises if the imaginary residue exceeds 1e-10."""
    C = require_hermitian(C, name="correlation matrix")
    H = require_hermitian(H, name="Hamiltonian")
    if C.shape != H.shape:
        raise ValueError(f"dimension mismatch: C is {C.shape}, H is {H.shape}")
    val = complex(np.trace(H @ C))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"energy expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def thermal_correlation(levels) -> np.ndarray:
    """Diagonal correlation matrix of uncoupled modes at thermal equilibrium."""
    levels = np.asarray(levels, dtype=float)
    if levels.size == 0:
        return np.zeros((0, 0), dtype=complex)
    return np.diag(expit(-levels)).astype(complex)
