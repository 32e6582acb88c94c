"""Closed-form growth laws for pulsed injection into a damped cavity.

Covers the coherent amplitude recurrence with damping and source-cavity
detuning, the quadratic (unwatched) and linear (watched) growth laws,
ideal-measurement vacuum survival, the phase-blurred random-walk energy
recurrence, and the linear no-inhibition law for thermal excitation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .relaxation import BathParams

_SINGULAR_DENOM = 1e-12


@dataclass(frozen=True)
class DriveParams:
    """Pulsed injection parameters.

    Attributes
    ----------
    alpha1 : complex
        Amplitude added by one pulse; the phase reference (conventionally
        real).
    cycle_period : float
        Time between successive pulses, seconds (> 0).
    detuning : float
        Source-cavity angular detuning, rad/s; enters as a phase slip of
        ``detuning * cycle_period`` per pulse.
    """

    alpha1: complex
    cycle_period: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.cycle_period > 0.0:
            raise ValueError(f"cycle_period must be > 0, got {self.cycle_period}")
        object.__setattr__(self, "alpha1", complex(self.alpha1))

    @property
    def pulse_energy(self) -> float:
        return abs(self.alpha1) ** 2


@dataclass(frozen=True)
class GrowthCurve:
    """Predicted mean photon number per cycle, optionally with amplitudes."""

    cycles: np.ndarray
    nbar: np.ndarray
    amplitude: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.asarray(self.nbar) < 0):
            raise ValueError("negative mean photon number in growth curve")


def _decay_per_cycle(drive: DriveParams, bath: BathParams) -> float:
    """Amplitude decay factor exp(-T_i / 2 T_c) over one cycle."""
    if bath.is_lossless:
        return 1.0
    return math.exp(-drive.cycle_period / (2.0 * bath.damping_time))


def _amplitude_recurrence(k: int, drive: DriveParams, bath: BathParams) -> complex:
    d = _decay_per_cycle(drive, bath)
    rot = np.exp(1j * drive.detuning * drive.cycle_period)
    alpha = 0.0 + 0.0j
    phase = 1.0 + 0.0j
    for _ in range(k):
        alpha = d * alpha + phase * drive.alpha1
        phase *= rot
    return complex(alpha)


def amplitude_after_k(k: int, drive: DriveParams, bath: BathParams) -> complex:
    """Coherent field amplitude immediately after the k-th pulse.

    Closed form of the pulse recurrence
    ``alpha_k = d * alpha_{k-1} + exp(i (k-1) delta T_i) * alpha_1`` with
    ``d = exp(-T_i / 2 T_c)``:

        alpha_k = (d**k - r**k) / (d - r) * alpha_1,   r = exp(i delta T_i).

    When the denominator is numerically singular (lossless and detuning a
    multiple of 2 pi per cycle) the recurrence is evaluated directly,
    which reduces to k * alpha_1 in the exact limit.
    """
    if k < 0:
        raise ValueError("pulse count must be >= 0")
    if k == 0:
        return 0.0 + 0.0j
    d = _decay_per_cycle(drive, bath)
    r = np.exp(1j * drive.detuning * drive.cycle_period)
    denom = d - r
    if abs(denom) < _SINGULAR_DENOM:
        return _amplitude_recurrence(k, drive, bath)
    return complex((d**k - r**k) / denom * drive.alpha1)


def amplitude_curve(n_cycles: int, drive: DriveParams, bath: BathParams) -> GrowthCurve:
    """Closed-form amplitude and energy for k = 0..n_cycles."""
    k = np.arange(n_cycles + 1)
    amp = np.array([amplitude_after_k(int(j), drive, bath) for j in k])
    return GrowthCurve(k, np.abs(amp) ** 2, amp)


def quadratic_growth(n_cycles: int, drive: DriveParams) -> GrowthCurve:
    """Unwatched lossless build-up: nbar(N) = N^2 |alpha_1|^2."""
    k = np.arange(n_cycles + 1)
    return GrowthCurve(k, (k.astype(float) ** 2) * drive.pulse_energy)


def zeno_linear_growth(n_cycles: int, drive: DriveParams) -> GrowthCurve:
    """Ideal projective watching: nbar(N) = N |alpha_1|^2."""
    k = np.arange(n_cycles + 1)
    return GrowthCurve(k, k.astype(float) * drive.pulse_energy)


def zeno_survival(n_cycles: int, drive: DriveParams) -> float:
    """Probability that N ideal inject-and-project cycles all find vacuum.

    Exact product form: each cycle finds vacuum with the Poisson weight
    exp(-|alpha_1|^2), so the survival is exp(-N |alpha_1|^2).
    """
    if n_cycles < 0:
        raise ValueError("cycle count must be >= 0")
    return math.exp(-n_cycles * drive.pulse_energy)


def zeno_survival_linearized(n_cycles: int, drive: DriveParams) -> float:
    """First-order survival 1 - N |alpha_1|^2 (floored at zero)."""
    if n_cycles < 0:
        raise ValueError("cycle count must be >= 0")
    return max(0.0, 1.0 - n_cycles * drive.pulse_energy)


def random_walk_prediction(n_cycles: int, drive: DriveParams, bath: BathParams) -> GrowthCurve:
    """Energy growth when the field phase is fully blurred between pulses.

    Each cycle adds one pulse energy incoherently while the stored energy
    relaxes exponentially toward the thermal occupation:

        nbar_k = q * nbar_{k-1} + |alpha_1|^2 + (1 - q) * n_thermal,

    with q = exp(-T_i / T_c) and nbar_0 = 0.  No adjustable parameter.
    """
    if n_cycles < 0:
        raise ValueError("cycle count must be >= 0")
    q = 1.0 if bath.is_lossless else math.exp(-drive.cycle_period / bath.damping_time)
    gain = drive.pulse_energy + (1.0 - q) * bath.n_thermal
    nbar = np.empty(n_cycles + 1)
    nbar[0] = 0.0
    for k in range(1, n_cycles + 1):
        nbar[k] = q * nbar[k - 1] + gain
    return GrowthCurve(np.arange(n_cycles + 1), nbar)


def random_walk_fixed_point(drive: DriveParams, bath: BathParams) -> float:
    """Steady state of the random-walk recurrence (inf when lossless)."""
    if bath.is_lossless:
        return math.inf
    q = math.exp(-drive.cycle_period / bath.damping_time)
    return drive.pulse_energy / (1.0 - q) + bath.n_thermal


def thermal_no_zeno(n_cycles: int, dt: float, bath: BathParams) -> float:
    """Vacuum survival of a watched, thermally relaxing empty cavity.

    The excitation probability is linear in time, so repeated projections
    do not slow it down: survival = 1 - n_thermal * (N dt) / T_c to first
    order, independent of how finely the watching divides the total time.
    """
    if n_cycles < 0 or dt < 0.0:
        raise ValueError("cycle count and dt must be >= 0")
    if bath.is_lossless:
        return 1.0
    return 1.0 - bath.n_thermal * n_cycles * dt / bath.damping_time
