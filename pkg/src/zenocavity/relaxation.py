"""Thermal cavity damping: exact Lindblad propagation and jump unraveling.

The bath couples through two jump channels, photon loss ``a`` with rate
``(1 + n_thermal)/damping_time`` and thermal excitation ``a^+`` with rate
``n_thermal/damping_time``.  This is the standard thermal-oscillator form:
energy relaxes toward ``n_thermal`` with time constant ``damping_time``
and the field amplitude decays with twice that constant.

Two propagation paths are provided:

* :func:`lindblad_propagate` integrates the density matrix with a fixed
  fourth-order Runge-Kutta step (the slow, exact oracle);
* :func:`jump_step` / :func:`relax` evolve a pure state stochastically.
  Because the no-jump generator is diagonal in the number basis, the
  waiting time to the next jump is sampled exactly (Newton inversion of
  the survival probability), so the unraveling carries no time-step bias.

Truncation handling: the ``a^+`` jump out of the top basis state is
forbidden and its rate excluded from the no-jump normalization, so the
jump path never leaks probability; the bias is negligible as long as the
top-state occupancy stays tiny (the experiment layer enforces this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import DensityMatrixState, FieldState

_RK4_MAX_STEP_FRACTION = 1e-3  # integrator step <= damping_time / 1000


@dataclass(frozen=True)
class BathParams:
    """Thermal environment of the cavity mode.

    Attributes
    ----------
    damping_time : float
        Energy decay time T_c in seconds (> 0; ``math.inf`` = lossless).
    n_thermal : float
        Mean blackbody photon number at equilibrium, >= 0.
    """

    damping_time: float
    n_thermal: float = 0.0

    def __post_init__(self):
        if not self.damping_time > 0.0:
            raise ValueError(f"damping_time must be > 0, got {self.damping_time}")
        if self.n_thermal < 0.0:
            raise ValueError(f"n_thermal must be >= 0, got {self.n_thermal}")

    @classmethod
    def lossless(cls) -> "BathParams":
        return cls(damping_time=math.inf, n_thermal=0.0)

    @property
    def is_lossless(self) -> bool:
        return math.isinf(self.damping_time)


def jump_rate_vectors(bath: BathParams, dim: int):
    """Per-level jump rates (down, up, total) with the top a^+ rate zeroed."""
    n = np.arange(dim, dtype=float)
    if bath.is_lossless:
        zero = np.zeros(dim)
        return zero, zero.copy(), zero.copy()
    down = (1.0 + bath.n_thermal) / bath.damping_time * n
    up = bath.n_thermal / bath.damping_time * (n + 1.0)
    up[-1] = 0.0
    return down, up, down + up


def _abs2(psi: np.ndarray) -> np.ndarray:
    return psi.real**2 + psi.imag**2


def _apply_down(psi: np.ndarray, sqrt_n: np.ndarray) -> np.ndarray:
    out = np.empty_like(psi)
    out[:-1] = sqrt_n * psi[1:]
    out[-1] = 0.0
    return out


def _apply_up(psi: np.ndarray, sqrt_n: np.ndarray) -> np.ndarray:
    # truncated a^+: the top source component has zero rate and is dropped
    out = np.empty_like(psi)
    out[1:] = sqrt_n * psi[:-1]
    out[0] = 0.0
    return out


def _solve_jump_time(weights, gtot, target, t_max):
    """Solve sum_n w_n exp(-g_n t) = target for t in (0, t_max).

    The survival is convex and decreasing, so Newton from t = 0 converges
    monotonically from the left.
    """
    t = 0.0
    for _ in range(200):
        decay = np.exp(-gtot * t)
        s = float(weights @ decay)
        err = s - target
        if err <= 1e-14:
            break
        slope = float(weights @ (gtot * decay))
        if slope <= 0.0:
            break
        t = min(t + err / slope, t_max)
    return t


def evolve_jump(psi: np.ndarray, rates, duration: float, rng,
                first_u: float | None = None) -> tuple[np.ndarray, int]:
    """Exact stochastic evolution of a normalized amplitude vector.

    Parameters
    ----------
    psi : np.ndarray
        Normalized complex amplitudes; not modified.
    rates : tuple of np.ndarray
        ``(down, up, total)`` per-level rate vectors from
        :func:`jump_rate_vectors`.
    duration : float
        Evolution time in seconds.
    rng : np.random.Generator
        Source of the survival draws.
    first_u : float, optional
        Pre-drawn uniform for the first survival comparison (lets callers
        short-circuit the common no-jump case without disturbing the
        random stream).

    Returns
    -------
    (psi, n_jumps)
        The evolved, renormalized amplitudes and the number of jumps.
    """
    down, up, gtot = rates
    psi = np.array(psi, dtype=np.complex128)
    dim = psi.shape[0]
    sqrt_n = np.sqrt(np.arange(1, dim, dtype=float))
    n_jumps = 0
    t_left = float(duration)

    while t_left > 0.0:
        w = _abs2(psi)
        decay_full = np.exp(-gtot * t_left)
        survival = float(w @ decay_full)
        u = rng.random() if first_u is None else first_u
        first_u = None
        if u <= survival:
            psi = psi * np.sqrt(decay_full)
            nrm = math.sqrt(float(_abs2(psi).sum()))
            if nrm > 0.0:
                psi /= nrm
            return psi, n_jumps

        # a jump fires inside the window; invert the survival for its time
        t_star = _solve_jump_time(w, gtot, u, t_left)
        psi = psi * np.exp(-gtot * (t_star / 2.0))
        w = _abs2(psi)
        w_down = float(w @ down)
        w_up = float(w @ up)
        total = w_down + w_up
        if total <= 0.0:  # numerically dead channels; finish with pure decay
            nrm = math.sqrt(float(w.sum()))
            if nrm > 0.0:
                psi /= nrm
            t_left -= t_star
            continue
        if rng.random() * total < w_down:
            psi = _apply_down(psi, sqrt_n)
        else:
            psi = _apply_up(psi, sqrt_n)
        nrm = math.sqrt(float(_abs2(psi).sum()))
        psi /= nrm
        n_jumps += 1
        t_left -= t_star

    return psi, n_jumps


def _stochastic(state: FieldState, bath: BathParams, duration: float, rng) -> FieldState:
    if duration < 0.0:
        raise ValueError("duration must be >= 0")
    if duration == 0.0 or bath.is_lossless:
        return state
    nrm2 = state.norm_sq
    psi = state.amplitudes / math.sqrt(nrm2)
    rates = jump_rate_vectors(bath, state.dim)
    psi, _ = evolve_jump(psi, rates, duration, rng)
    return FieldState(psi * math.sqrt(nrm2), state.leaked_norm)


def jump_step(state: FieldState, bath: BathParams, dt: float, rng) -> FieldState:
    """One stochastic step of the jump unraveling over a time dt.

    With the no-jump probability the non-unitary no-jump evolution is
    applied and the state renormalized; otherwise an ``a`` or ``a^+``
    jump is applied at a time sampled from the exact waiting-time
    distribution inside the step.  Any dt is handled exactly, so no
    external step-size cap is needed.
    """
    return _stochastic(state, bath, dt, rng)


def relax(state: FieldState, bath: BathParams, duration: float, rng) -> FieldState:
    """Stochastic relaxation over a finite interval (composed jump steps)."""
    return _stochastic(state, bath, duration, rng)


def _lindblad_rhs(rho, rate_down, rate_up, outer_down, outer_up, n_down, n_up):
    out = np.zeros_like(rho)
    out[:-1, :-1] += rate_down * outer_down * rho[1:, 1:]
    out[1:, 1:] += rate_up * outer_up * rho[:-1, :-1]
    out -= 0.5 * (rate_down * (n_down[:, None] + n_down[None, :])
                  + rate_up * (n_up[:, None] + n_up[None, :])) * rho
    return out


def lindblad_propagate(rho: DensityMatrixState, bath: BathParams, t: float) -> DensityMatrixState:
    """Exact thermal relaxation of a density matrix for a time t.

    Fixed-step classical RK4 with step <= damping_time/1000; trace and
    Hermiticity are preserved to integrator accuracy.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if t == 0.0 or bath.is_lossless:
        return DensityMatrixState(rho.matrix)

    dim = rho.dim
    rate_down = (1.0 + bath.n_thermal) / bath.damping_time
    rate_up = bath.n_thermal / bath.damping_time
    n = np.arange(dim, dtype=float)
    sq = np.sqrt(n[1:])                      # sqrt(1..D-1)
    outer_down = np.outer(sq, sq)            # sqrt((m+1)(n+1)) on the shifted block
    outer_up = outer_down                    # same coefficients, shifted the other way
    n_down = n.copy()                        # diag a^+ a
    n_up = np.append(n[:-1] + 1.0, 0.0)      # diag a a^+ with the top excitation removed

    steps = max(1, math.ceil(t / (bath.damping_time * _RK4_MAX_STEP_FRACTION)))
    h = t / steps
    m = np.array(rho.matrix, dtype=np.complex128)
    for _ in range(steps):
        k1 = _lindblad_rhs(m, rate_down, rate_up, outer_down, outer_up, n_down, n_up)
        k2 = _lindblad_rhs(m + 0.5 * h * k1, rate_down, rate_up, outer_down, outer_up, n_down, n_up)
        k3 = _lindblad_rhs(m + 0.5 * h * k2, rate_down, rate_up, outer_down, outer_up, n_down, n_up)
        k4 = _lindblad_rhs(m + h * k3, rate_down, rate_up, outer_down, outer_up, n_down, n_up)
        m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return DensityMatrixState(m)


def thermal_state(bath: BathParams, dim: int) -> DensityMatrixState:
    """Truncated thermal equilibrium, p(n) proportional to (nb/(1+nb))^n."""
    if bath.n_thermal == 0.0:
        p = np.zeros(dim)
        p[0] = 1.0
    else:
        ratio = bath.n_thermal / (1.0 + bath.n_thermal)
        p = ratio ** np.arange(dim)
        p /= p.sum()
    return DensityMatrixState(np.diag(p).astype(np.complex128))
