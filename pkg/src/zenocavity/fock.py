"""Truncated Fock-space states and operators for a single cavity mode.

States live in the number basis |0>, ..., |D-1>.  A :class:`FieldState`
carries a possibly sub-normalized amplitude vector together with the
probability mass that has leaked out of the truncated space, so that
``norm**2 + leaked_norm == 1`` at all times.  Global phase is not treated
as physical; states are compared through :func:`fidelity`.

All operations are pure functions returning new states, safe to share
between concurrent trajectory workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateStateError, InvalidDimensionError

_BUDGET_TOL = 1e-9


def _check_dim(dim) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"truncation dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


@dataclass(frozen=True)
class FieldState:
    """Pure field state over a truncated number basis.

    Attributes
    ----------
    amplitudes : np.ndarray
        Complex amplitudes of length D.  The vector norm may be below one;
        the deficit is accounted for in ``leaked_norm``.
    leaked_norm : float
        Cumulative probability lost to the truncation, >= 0.
    """

    amplitudes: np.ndarray
    leaked_norm: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        _check_dim(amp.shape[0])
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        if not 0.0 <= self.leaked_norm <= 1.0 + _BUDGET_TOL:
            raise ValueError(f"leaked_norm out of range: {self.leaked_norm}")
        budget = self.norm_sq + self.leaked_norm
        if abs(budget - 1.0) > _BUDGET_TOL:
            raise ValueError(f"norm budget violated: |psi|^2 + leak = {budget}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_sq(self) -> float:
        a = self.amplitudes
        return float(np.real(a @ a.conj()))


@dataclass(frozen=True)
class DensityMatrixState:
    """Density matrix over the truncated basis; exact-propagation oracle.

    Hermitian, positive semidefinite, unit trace (within numerical
    tolerance, see :meth:`validate`).
    """

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        _check_dim(mat.shape[0])
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, herm_tol=1e-10, trace_tol=1e-9, eig_tol=1e-9):
        """Raise ValueError unless Hermitian/trace-one/PSD within tolerance."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > herm_tol:
            raise ValueError(f"not Hermitian: max |rho - rho^+| = {herm}")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace deviates from one: {tr}")
        lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
        if lo < -eig_tol:
            raise ValueError(f"negative eigenvalue: {lo}")

    @classmethod
    def from_state(cls, state: FieldState) -> "DensityMatrixState":
        """Outer product of the state, conditioned on not having leaked."""
        nrm2 = state.norm_sq
        if nrm2 <= 0.0:
            raise DegenerateStateError("cannot build a density matrix from a zero-norm state")
        psi = state.amplitudes / np.sqrt(nrm2)
        return cls(np.outer(psi, psi.conj()))

    def photon_distribution(self) -> np.ndarray:
        p = np.real(np.diag(self.matrix)).copy()
        tr = p.sum()
        if tr <= 0.0:
            raise DegenerateStateError("zero-trace density matrix")
        return p / tr

    def mean_photon(self) -> float:
        p = self.photon_distribution()
        return float(p @ np.arange(self.dim))

    def field_expectation(self) -> complex:
        n = np.arange(1, self.dim)
        # <a> = sum_n sqrt(n+1) rho[n+1, n]
        return complex(np.sum(np.sqrt(n) * np.diag(self.matrix, -1)))


def vacuum(dim: int) -> FieldState:
    """The vacuum state |0> in a D-dimensional truncation."""
    dim = _check_dim(dim)
    amp = np.zeros(dim, dtype=np.complex128)
    amp[0] = 1.0
    return FieldState(amp, 0.0)


def fock_state(n: int, dim: int) -> FieldState:
    """Number state |n>."""
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise ValueError(f"Fock index {n} outside truncation 0..{dim - 1}")
    amp = np.zeros(dim, dtype=np.complex128)
    amp[n] = 1.0
    return FieldState(amp, 0.0)


def coherent_state(alpha: complex, dim: int) -> FieldState:
    """Coherent state with amplitude ``alpha``, leakage tracked explicitly.

    Amplitudes are exp(-|a|^2/2) a^n / sqrt(n!); whatever Poisson mass
    falls beyond the truncation is recorded in ``leaked_norm``.
    """
    dim = _check_dim(dim)
    alpha = complex(alpha)
    n = np.arange(dim)
    # log-space build avoids factorial overflow for large D
    with np.errstate(divide="ignore"):
        log_mag = -abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - 0.5 * _log_factorial(n) \
            if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    mags = np.exp(log_mag)
    phases = np.exp(1j * n * np.angle(alpha)) if alpha != 0 else np.ones(dim)
    amp = mags * phases
    leak = max(0.0, 1.0 - float(np.real(amp @ amp.conj())))
    return FieldState(amp, leak)


def _log_factorial(n: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln

    return gammaln(np.asarray(n, dtype=float) + 1.0)


def annihilation_matrix(dim: int) -> np.ndarray:
    """Truncated annihilation operator a, a|n> = sqrt(n)|n-1>."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(np.complex128)


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    """exp(alpha a^+ - alpha* a) on the truncated space.

    The truncated generator is exactly skew-Hermitian, so the matrix
    exponential is unitary; truncation error shows up near the top of the
    basis, not as norm loss.
    """
    a = annihilation_matrix(dim)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm(gen)


def displace(state: FieldState, alpha: complex) -> FieldState:
    """Apply the displacement operator to an arbitrary state.

    Implemented with the dense matrix exponential (not the closed-form
    coherent amplitudes) so it is correct on post-measurement states.
    """
    u = displacement_matrix(alpha, state.dim)
    before = state.norm_sq
    amp = u @ state.amplitudes
    after = float(np.real(amp @ amp.conj()))
    deficit = max(0.0, before - after)
    return FieldState(amp, state.leaked_norm + deficit)


def photon_distribution(state: FieldState) -> np.ndarray:
    """Normalized photon-number probabilities |c_n|^2 / |psi|^2."""
    nrm2 = state.norm_sq
    if nrm2 <= 0.0:
        raise DegenerateStateError("photon distribution of a zero-norm state")
    a = state.amplitudes
    return (a.real**2 + a.imag**2) / nrm2


def mean_photon(state: FieldState) -> float:
    p = photon_distribution(state)
    return float(p @ np.arange(state.dim))


def field_expectation(state: FieldState) -> complex:
    """<a> = sum_n sqrt(n+1) c_n* c_{n+1}, normalized."""
    nrm2 = state.norm_sq
    if nrm2 <= 0.0:
        raise DegenerateStateError("field expectation of a zero-norm state")
    a = state.amplitudes
    n = np.arange(1, state.dim)
    return complex(np.sum(np.sqrt(n) * a[:-1].conj() * a[1:]) / nrm2)


def fidelity(a: FieldState, b: FieldState) -> float:
    """|<a|b>|^2 between the normalized states (global phase ignored)."""
    na, nb = a.norm_sq, b.norm_sq
    if na <= 0.0 or nb <= 0.0:
        raise DegenerateStateError("fidelity with a zero-norm state")
    ov = np.vdot(a.amplitudes, b.amplitudes)
    return float(abs(ov) ** 2 / (na * nb))
