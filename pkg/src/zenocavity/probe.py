"""Dispersive Ramsey atom as a QND photon-number probe.

Each probe atom enters the cavity as an equatorial spin, picks up a
rotation ``n * shift_per_photon`` from the photon-number light shift, and
is read out along a detection axis ``detection_phase``.  Convention (the
single source of truth for signs): the probability of finding the atom in
g is ``(1 + contrast * cos(n*phi0 - phi)) / 2``, so a vacuum field probed
along phi = 0 with full contrast always yields g.

Measurement back-action is the diagonal Kraus pair built from the
half-angle cosine/sine, which makes completeness a trigonometric
identity.  Imperfect contrast is modeled as classical readout noise (the
recorded label is replaced by a fair coin with probability 1 - contrast);
the back-action stays ideal.  An undetected atom (probability
1 - efficiency) collapses the field exactly like a detected one; only
the record is lost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateStateError
from .fock import FieldState


class Outcome(Enum):
    G = "G"
    E = "E"
    UNDETECTED = "U"


@dataclass(frozen=True)
class ProbeConfig:
    """QND probe atom parameters.

    Attributes
    ----------
    shift_per_photon : float
        Spin rotation per cavity photon (radians).
    detection_phase : float
        Read-out axis angle phi (radians).
    efficiency : float
        Probability that the detector registers the atom, in [0, 1].
    contrast : float
        Ramsey fringe contrast, in [0, 1].
    """

    shift_per_photon: float
    detection_phase: float
    efficiency: float = 1.0
    contrast: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency must be in [0, 1], got {self.efficiency}")
        if not 0.0 <= self.contrast <= 1.0:
            raise ValueError(f"contrast must be in [0, 1], got {self.contrast}")


@dataclass(frozen=True, slots=True)
class AtomRecord:
    """One probe atom crossing: when, along which axis, and what came out.

    UNDETECTED records exist on purpose: the atom crossed the cavity and
    decohered the field even though the detector missed it.
    """

    cycle_index: int
    time: float
    detection_phase: float
    outcome: Outcome


def detect_probability_g(n: int, probe: ProbeConfig) -> float:
    """P(g | n photons) = (1 + C cos(n*phi0 - phi)) / 2."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    return 0.5 * (1.0 + probe.contrast * math.cos(n * probe.shift_per_photon - probe.detection_phase))


def kraus_diagonals(probe: ProbeConfig, dim: int, detection_phase: float | None = None):
    """Diagonals of the back-action Kraus pair (M_g, M_e) up to dim - 1."""
    phi = probe.detection_phase if detection_phase is None else detection_phase
    half = (np.arange(dim) * probe.shift_per_photon - phi) / 2.0
    return np.cos(half), np.sin(half)


def kraus_completeness(probe: ProbeConfig, n_max: int = 1024) -> float:
    """max_n |cos^2 + sin^2 - 1| over n = 0..n_max; identically tiny."""
    cg, ce = kraus_diagonals(probe, n_max + 1)
    return float(np.max(np.abs(cg * cg + ce * ce - 1.0)))


def _atom_event(psi: np.ndarray, cos_half: np.ndarray, sin_half: np.ndarray,
                efficiency: float, contrast: float, rng) -> tuple[np.ndarray, bool, Outcome]:
    """Back-action plus readout on a normalized amplitude vector.

    Draw order (fixed for reproducibility): 1) outcome, 2) detection if
    efficiency < 1, 3) contrast flip and, when it fires, the coin, if
    contrast < 1 and the atom was detected.

    Returns (new amplitudes, true outcome was g, recorded outcome).
    """
    w = psi.real**2 + psi.imag**2
    p_g = min(float(w @ (cos_half * cos_half)), 1.0)
    if rng.random() < p_g:
        g_true = True
        psi = psi * cos_half / math.sqrt(p_g)
    else:
        g_true = False
        psi = psi * sin_half / math.sqrt(1.0 - p_g)

    if efficiency < 1.0 and rng.random() >= efficiency:
        return psi, g_true, Outcome.UNDETECTED

    label = g_true
    if contrast < 1.0 and rng.random() >= contrast:
        label = rng.random() < 0.5
    return psi, g_true, Outcome.G if label else Outcome.E


def measure_atom(state: FieldState, probe: ProbeConfig, rng, *,
                 cycle_index: int = 0, time: float = 0.0) -> tuple[FieldState, AtomRecord]:
    """Send one probe atom through the field and read it out.

    Samples g/e from the photon distribution, applies the matching
    diagonal Kraus operator, renormalizes (preserving the leakage
    budget), and returns the post-measurement state with the atom record.
    """
    nrm2 = state.norm_sq
    if nrm2 <= 0.0:
        raise DegenerateStateError("cannot probe a zero-norm state")
    psi = state.amplitudes / math.sqrt(nrm2)
    cg, ce = kraus_diagonals(probe, state.dim)
    psi, _, outcome = _atom_event(psi, cg, ce, probe.efficiency, probe.contrast, rng)
    record = AtomRecord(cycle_index, time, probe.detection_phase, outcome)
    return FieldState(psi * math.sqrt(nrm2), state.leaked_norm), record
