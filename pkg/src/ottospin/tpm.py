"""Two-point-measurement statistics for the engine strokes.

Work here is defined from projective energy measurements before and after
each drive stroke.  A full engine cycle has sixteen possible four-outcome
histories (two levels at each of the four measurements); their enumeration,
the resulting work and heat atom distributions, characteristic functions with
discrete Fourier inversion, and the closed-form means all live in this
module.

Sign convention: every per-history energy is the contribution to the
*extracted* work (measured drop of the medium's energy during expansion plus
measured drop during compression), so distribution means are positive when
the engine delivers net output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .spin import (
    PLANCK_PEV_PER_KHZ,
    DriveProtocol,
    ThermalParams,
    polarization,
    thermal_populations,
)

#: Atoms closer than this (peV) are merged into one.
MERGE_TOLERANCE_PEV = 1e-9

_KINDS = ("work", "heat")


@dataclass(frozen=True)
class EnergyDistribution:
    """Finite atom distribution over energies (peV)."""

    energies_pev: tuple[float, ...]
    probabilities: tuple[float, ...]
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if len(self.energies_pev) != len(self.probabilities):
            raise ValueError("energies and probabilities must have equal length")
        if len(self.energies_pev) == 0:
            raise ValueError("distribution needs at least one atom")
        if any(p < 0.0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")
        total = sum(self.probabilities)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        values = self.energies_pev
        if any(b - a <= MERGE_TOLERANCE_PEV for a, b in zip(values, values[1:])):
            raise ValueError("energies must be ascending with separated atoms")

    @classmethod
    def from_atoms(
        cls,
        energies_pev: Iterable[float],
        probabilities: Iterable[float],
        kind: str,
    ) -> "EnergyDistribution":
        """Normalize raw atoms: sort, merge near-coincident values, drop
        zero-probability entries.

        Merged atoms sit at the probability-weighted mean of their cluster.
        Tiny negative weights (above -1e-12, as produced by Fourier
        inversion round-off) are clipped to zero.
        """
        values = np.asarray(list(energies_pev), dtype=float)
        probs = np.asarray(list(probabilities), dtype=float)
        if values.shape != probs.shape or values.ndim != 1:
            raise ValueError("energies and probabilities must be 1d and equal length")
        if not (np.isfinite(values).all() and np.isfinite(probs).all()):
            raise ValueError("atoms must be finite")
        if (probs < -1e-12).any():
            raise ValueError("probabilities must be nonnegative")
        probs = np.clip(probs, 0.0, None)

        order = np.argsort(values, kind="stable")
        values, probs = values[order], probs[order]

        merged_values: list[float] = []
        merged_probs: list[float] = []
        cluster_start = 0
        for i in range(1, len(values) + 1):
            if i < len(values) and values[i] - values[cluster_start] <= MERGE_TOLERANCE_PEV:
                continue
            chunk_p = probs[cluster_start:i]
            weight = float(chunk_p.sum())
            if weight > 0.0:
                merged_values.append(
                    float(np.dot(values[cluster_start:i], chunk_p) / weight)
                )
                merged_probs.append(weight)
            cluster_start = i
        return cls(tuple(merged_values), tuple(merged_probs), kind)


@dataclass(frozen=True)
class TrajectoryHistory:
    """One four-outcome measurement history of a full cycle.

    ``expansion_start``/``expansion_end`` are the levels found before and
    after the expansion stroke, ``compression_start``/``compression_end``
    before and after the compression stroke (0 = ground, 1 = excited).
    """

    expansion_start: int
    expansion_end: int
    compression_start: int
    compression_end: int
    delta_e_pev: float
    probability: float


@dataclass(frozen=True, eq=False)
class CharacteristicSamples:
    """Samples of a distribution's characteristic function chi(u)."""

    u_per_pev: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u_per_pev, dtype=float)
        vals = np.asarray(self.values, dtype=np.complex128)
        if u.ndim != 1 or u.shape != vals.shape:
            raise ValueError("u grid and samples must be 1d and equal length")
        object.__setattr__(self, "u_per_pev", u)
        object.__setattr__(self, "values", vals)
        for idx in np.nonzero(np.abs(u) < 1e-15)[0]:
            if abs(vals[idx] - 1.0) > 1e-12:
                raise ValueError("chi(0) must equal 1")
        by_value = {round(float(x), 12): i for i, x in enumerate(u)}
        for i, x in enumerate(u):
            j = by_value.get(round(-float(x), 12))
            if j is not None and abs(vals[j] - vals[i].conjugate()) > 1e-12:
                raise ValueError("chi(-u) must equal conj(chi(u))")


def transition_matrix(transition_prob: float) -> np.ndarray:
    """Doubly stochastic level-transfer matrix of a drive stroke: the
    off-diagonal entries are the level-swap probability, the diagonal the
    stay probability."""
    if not 0.0 <= transition_prob <= 1.0:
        raise ValueError(
            f"transition probability must lie in [0, 1], got {transition_prob}"
        )
    stay = 1.0 - transition_prob
    return np.array([[stay, transition_prob], [transition_prob, stay]])


def enumerate_histories(
    cold_populations: Sequence[float],
    hot_populations: Sequence[float],
    transition_prob: float,
    spectra: tuple[Sequence[float], Sequence[float]],
) -> list[TrajectoryHistory]:
    """All sixteen cycle histories with their extracted-work contributions.

    ``spectra`` holds the (initial, final) endpoint energy pairs (ascending,
    peV).  The expansion stroke contributes the energy drop e_i[n] - e_f[m],
    the compression stroke e_f[k] - e_i[j]; both strokes share the same
    transfer matrix because the compression propagator is the adjoint of the
    expansion one.
    """
    p = _checked_populations(cold_populations, "cold")
    q = _checked_populations(hot_populations, "hot")
    e_initial, e_final = (_checked_spectrum(s) for s in spectra)
    transfer = transition_matrix(transition_prob)

    histories = []
    for n in (0, 1):
        for m in (0, 1):
            for k in (0, 1):
                for j in (0, 1):
                    prob = p[n] * transfer[m, n] * q[k] * transfer[j, k]
                    delta = (e_initial[n] - e_final[m]) + (e_final[k] - e_initial[j])
                    histories.append(
                        TrajectoryHistory(n, m, k, j, float(delta), float(prob))
                    )
    return histories


def work_distribution(histories: Sequence[TrajectoryHistory]) -> EnergyDistribution:
    """Collapse cycle histories into the engine work distribution."""
    return EnergyDistribution.from_atoms(
        (h.delta_e_pev for h in histories),
        (h.probability for h in histories),
        kind="work",
    )


def stroke_work_distribution(
    populations: Sequence[float],
    transition_prob: float,
    spectrum_initial: Sequence[float],
    spectrum_final: Sequence[float],
) -> EnergyDistribution:
    """Work distribution of a single drive stroke.

    ``populations`` are the level occupations at the stroke start;
    the spectra are the stroke's chronological initial/final energy pairs.
    """
    pops = _checked_populations(populations, "initial")
    e_i = _checked_spectrum(spectrum_initial)
    e_f = _checked_spectrum(spectrum_final)
    transfer = transition_matrix(transition_prob)
    values = []
    probs = []
    for n in (0, 1):
        for m in (0, 1):
            values.append(e_i[n] - e_f[m])
            probs.append(pops[n] * transfer[m, n])
    return EnergyDistribution.from_atoms(values, probs, kind="work")


def convolve(a: EnergyDistribution, b: EnergyDistribution) -> EnergyDistribution:
    """Distribution of the sum of two independent atom distributions."""
    if a.kind != b.kind:
        raise ValueError(f"cannot convolve kinds {a.kind!r} and {b.kind!r}")
    values = []
    probs = []
    for ea, pa in zip(a.energies_pev, a.probabilities):
        for eb, pb in zip(b.energies_pev, b.probabilities):
            values.append(ea + eb)
            probs.append(pa * pb)
    return EnergyDistribution.from_atoms(values, probs, a.kind)


def post_expansion_populations(
    cold_populations: Sequence[float], transition_prob: float
) -> tuple[float, float]:
    """Level occupations right after the expansion stroke."""
    p = _checked_populations(cold_populations, "cold")
    transfer = transition_matrix(transition_prob)
    s = transfer @ p
    return float(s[0]), float(s[1])


def heat_distribution(
    post_expansion: Sequence[float],
    hot_populations: Sequence[float],
    final_spectrum: Sequence[float],
) -> EnergyDistribution:
    """Distribution of heat absorbed from the hot reservoir.

    The heating stroke happens at the wide gap, so the only atoms are 0 and
    plus/minus that gap: the medium enters with occupations ``post_expansion``
    and leaves thermalized with occupations ``hot_populations``; level
    transfer during the stroke is unconstrained (full rethermalization), so
    the joint weight is the plain product s_m * q_k.
    """
    s = _checked_populations(post_expansion, "post-expansion")
    q = _checked_populations(hot_populations, "hot")
    e_f = _checked_spectrum(final_spectrum)
    values = []
    probs = []
    for m in (0, 1):
        for k in (0, 1):
            values.append(e_f[k] - e_f[m])
            probs.append(s[m] * q[k])
    return EnergyDistribution.from_atoms(values, probs, kind="heat")


def mean(dist: EnergyDistribution) -> float:
    """First moment of an atom distribution (peV)."""
    return float(np.dot(dist.energies_pev, dist.probabilities))


def characteristic_function(
    dist: EnergyDistribution, u_grid: Sequence[float]
) -> CharacteristicSamples:
    """chi(u) = sum_atoms p * exp(i u E) sampled on ``u_grid`` (1/peV)."""
    u = np.asarray(u_grid, dtype=float)
    energies = np.asarray(dist.energies_pev)
    probs = np.asarray(dist.probabilities)
    values = np.exp(1j * np.outer(u, energies)) @ probs
    return CharacteristicSamples(u, values)


def conjugate_u_grid(energy_spacing_pev: float, n_points: int) -> np.ndarray:
    """Uniform u grid (starting at 0) whose discrete inversion resolves atoms
    sitting on multiples of ``energy_spacing_pev``."""
    if energy_spacing_pev <= 0.0:
        raise ValueError("energy spacing must be positive")
    if n_points < 2:
        raise ValueError("need at least two grid points")
    du = 2.0 * np.pi / (n_points * energy_spacing_pev)
    return np.arange(n_points) * du


def invert_characteristic(
    samples: CharacteristicSamples, kind: str = "work"
) -> EnergyDistribution:
    """Recover an atom distribution from uniformly sampled chi(u).

    With N samples spaced du apart the implied energy grid has spacing
    dE = 2 pi / (N du); weights are recovered exactly (up to round-off) for
    any distribution whose atoms sit on that grid within a window of N
    consecutive multiples centered at zero.  Recovered weights below 1e-9 are
    discarded as inversion noise.
    """
    u = samples.u_per_pev
    if len(u) < 2:
        raise ValueError("need at least two samples to invert")
    du = u[1] - u[0]
    if du <= 0.0 or np.max(np.abs(np.diff(u) - du)) > 1e-9 * abs(du):
        raise ValueError("u grid must be uniformly spaced and increasing")
    n = len(u)
    indices = np.arange(-(n // 2), n - n // 2)
    energies = indices * (2.0 * np.pi / (n * du))
    weights = (samples.values @ np.exp(-1j * np.outer(u, energies))).real / n
    keep = np.abs(weights) > 1e-9
    if not keep.any():
        raise ValueError("inversion recovered no atoms above threshold")
    return EnergyDistribution.from_atoms(energies[keep], weights[keep], kind)


def lorentzian_broaden(
    dist: EnergyDistribution, fwhm_pev: float, grid_pev: Sequence[float]
) -> np.ndarray:
    """Sum of unit-area Lorentzians (one per atom, weighted by probability)
    sampled on ``grid_pev``; emulates a measured spectrum of sharp peaks."""
    if fwhm_pev <= 0.0:
        raise ValueError(f"fwhm must be positive, got {fwhm_pev}")
    grid = np.asarray(grid_pev, dtype=float)
    gamma = 0.5 * fwhm_pev
    curve = np.zeros_like(grid)
    for energy, prob in zip(dist.energies_pev, dist.probabilities):
        curve += prob * (gamma / np.pi) / ((grid - energy) ** 2 + gamma**2)
    return curve


# --- closed-form means ----------------------------------------------------

def mean_work_closed_form(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> float:
    """Mean extracted work per cycle (peV).

    In terms of the endpoint polarizations p_cold = tanh(gap_i / 2 kT_cold)
    and p_hot = tanh(gap_f / 2 kT_hot):

        (h/2)(nu_f - nu_i)(p_cold - p_hot)
            - h * transition_prob * (nu_f p_cold + nu_i p_hot)

    The transition_prob coefficient is strictly negative for positive
    temperatures, so faster (less adiabatic) driving always costs output.
    """
    h = PLANCK_PEV_PER_KHZ
    nu_i, nu_f = protocol.nu_initial_khz, protocol.nu_final_khz
    p_cold = polarization(nu_i, thermal.kt_cold_pev)
    p_hot = polarization(nu_f, thermal.kt_hot_pev)
    return 0.5 * h * (nu_f - nu_i) * (p_cold - p_hot) - h * transition_prob * (
        nu_f * p_cold + nu_i * p_hot
    )


def mean_heat_hot_closed_form(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> float:
    """Mean heat absorbed from the hot reservoir per cycle (peV):
    (gap_f / 2) * ((1 - 2 * transition_prob) * p_cold - p_hot)."""
    h = PLANCK_PEV_PER_KHZ
    nu_i, nu_f = protocol.nu_initial_khz, protocol.nu_final_khz
    p_cold = polarization(nu_i, thermal.kt_cold_pev)
    p_hot = polarization(nu_f, thermal.kt_hot_pev)
    return 0.5 * h * nu_f * ((1.0 - 2.0 * transition_prob) * p_cold - p_hot)


def mean_heat_cold_closed_form(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> float:
    """Mean heat absorbed from the cold reservoir per cycle (peV):
    (gap_i / 2) * ((1 - 2 * transition_prob) * p_hot - p_cold).  Negative
    while the engine runs."""
    h = PLANCK_PEV_PER_KHZ
    nu_i, nu_f = protocol.nu_initial_khz, protocol.nu_final_khz
    p_cold = polarization(nu_i, thermal.kt_cold_pev)
    p_hot = polarization(nu_f, thermal.kt_hot_pev)
    return 0.5 * h * nu_i * ((1.0 - 2.0 * transition_prob) * p_hot - p_cold)


# --- engine-level conveniences ---------------------------------------------

def endpoint_spectra(protocol: DriveProtocol) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint energy pairs (ascending, peV) of the expansion ramp."""
    gap_i = PLANCK_PEV_PER_KHZ * protocol.nu_initial_khz
    gap_f = PLANCK_PEV_PER_KHZ * protocol.nu_final_khz
    return (
        np.array([-0.5 * gap_i, 0.5 * gap_i]),
        np.array([-0.5 * gap_f, 0.5 * gap_f]),
    )


def engine_work_distribution(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> EnergyDistribution:
    """Work distribution of the full cycle at the given level-swap
    probability."""
    p = thermal_populations(protocol.nu_initial_khz, thermal.kt_cold_pev)
    q = thermal_populations(protocol.nu_final_khz, thermal.kt_hot_pev)
    spectra = endpoint_spectra(protocol)
    return work_distribution(enumerate_histories(p, q, transition_prob, spectra))


def engine_heat_distribution(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> EnergyDistribution:
    """Hot-reservoir heat distribution of the full cycle."""
    p = thermal_populations(protocol.nu_initial_khz, thermal.kt_cold_pev)
    q = thermal_populations(protocol.nu_final_khz, thermal.kt_hot_pev)
    _, e_final = endpoint_spectra(protocol)
    s = post_expansion_populations(p, transition_prob)
    return heat_distribution(s, q, e_final)


# --- shared validation ------------------------------------------------------

def _checked_populations(populations: Sequence[float], label: str) -> np.ndarray:
    pops = np.asarray(populations, dtype=float)
    if pops.shape != (2,):
        raise ValueError(f"{label} populations must be a pair, got shape {pops.shape}")
    if (pops < 0.0).any():
        raise ValueError(f"{label} populations must be nonnegative, got {pops}")
    if abs(pops.sum() - 1.0) > 1e-9:
        raise ValueError(f"{label} populations must sum to 1, got {pops.sum()}")
    return pops


def _checked_spectrum(spectrum: Sequence[float]) -> np.ndarray:
    energies = np.asarray(spectrum, dtype=float)
    if energies.shape != (2,):
        raise ValueError(f"spectrum must be an energy pair, got shape {energies.shape}")
    if energies[1] <= energies[0]:
        raise ValueError(f"spectrum must be ascending, got {energies}")
    return energies
