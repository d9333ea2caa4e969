"""Full four-stroke cycle composition and its figures of merit.

The cycle alternates two drive strokes (gap expansion, gap compression) with
two ideal thermal-contact strokes (full rethermalization with the hot and
cold reservoirs).  Everything here reduces to four states: the two reservoir
equilibria and the two drive outputs; all reported quantities are functions
of those states, which is also what makes the Monte Carlo error propagation a
straight resampling of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .propagator import (
    DEFAULT_N_STEPS,
    UnitaryMap,
    evolve_unitary,
    propagate_state,
    transition_probability,
)
from .spin import (
    DriveProtocol,
    Phase,
    ThermalParams,
    drive_hamiltonian,
    gibbs_state,
    polarization,
)


@dataclass(frozen=True)
class CycleConfig:
    """One engine configuration: drive ramp, reservoirs, stroke timing."""

    protocol: DriveProtocol
    thermal: ThermalParams
    n_steps: int = DEFAULT_N_STEPS
    t_thermalization_us: float = 7000.0
    t_cooling_us: float = 0.0

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.t_thermalization_us <= 0.0:
            raise ValueError("thermalization time must be positive")
        if self.t_cooling_us < 0.0:
            raise ValueError("cooling time must be nonnegative")


@dataclass(frozen=True)
class CycleReport:
    """All per-cycle figures of merit for one configuration.

    ``efficiency`` and ``efficiency_lag`` are NaN when no heat is exchanged
    with the hot reservoir (the ratio is undefined there).
    """

    tau_us: float
    transition_prob: float
    mean_work_pev: float
    mean_heat_hot_pev: float
    mean_heat_cold_pev: float
    efficiency: float
    efficiency_otto: float
    efficiency_carnot: float
    efficiency_lag: float
    entropy_production: float
    power_pev_per_ms: float
    extraction_ok: bool


class UncertaintyEstimate(NamedTuple):
    mean: float
    stddev: float


def endpoint_hamiltonians(protocol: DriveProtocol) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonians at the two ends of the expansion ramp (narrow, wide)."""
    expansion = replace(protocol, phase=Phase.EXPANSION)
    return (
        drive_hamiltonian(0.0, expansion),
        drive_hamiltonian(expansion.tau_us, expansion),
    )


def relative_entropy(a: np.ndarray, b: np.ndarray) -> float:
    """Quantum relative entropy S(a||b) = tr[a (ln a - ln b)] in nats.

    Infinite whenever ``a`` has weight outside the support of ``b``; that
    case is rejected rather than returned.
    """
    result = _relative_entropy_batch(
        np.asarray(a, dtype=np.complex128)[None, :, :],
        np.asarray(b, dtype=np.complex128)[None, :, :],
    )
    return float(result[0])


def efficiency_lag(
    after_expansion: np.ndarray,
    hot_equilibrium: np.ndarray,
    after_compression: np.ndarray,
    cold_equilibrium: np.ndarray,
    mean_heat_hot_pev: float,
    beta_cold_per_pev: float,
) -> float:
    """Irreversibility penalty subtracted from the ideal-reservoir efficiency.

    The lag is the summed relative entropy of the two drive outputs to the
    reference equilibria they fail to reach, per unit of hot heat:

        L = [S(rho_exp || rho_hot) + S(rho_comp || rho_cold)] / (beta_cold <Q_hot>)

    and satisfies efficiency = efficiency_carnot - L identically.
    """
    if mean_heat_hot_pev == 0.0:
        raise ValueError("efficiency lag undefined for zero hot heat")
    numerator = relative_entropy(after_expansion, hot_equilibrium) + relative_entropy(
        after_compression, cold_equilibrium
    )
    return numerator / (beta_cold_per_pev * mean_heat_hot_pev)


def entropy_production_drive(
    mean_heat_cold_pev: float,
    mean_heat_hot_pev: float,
    thermal: ThermalParams,
) -> float:
    """Total entropy produced by the two drive strokes (nats):
    -<Q_cold>/kT_cold - <Q_hot>/kT_hot.

    Equals beta_cold * <Q_hot> * lag (the relative-entropy sum) whenever the
    four cycle states are unitarily consistent; the two computation routes
    are kept separate precisely so that identity stays a checkable fact.
    """
    return (
        -mean_heat_cold_pev / thermal.kt_cold_pev
        - mean_heat_hot_pev / thermal.kt_hot_pev
    )


def extraction_bound(protocol: DriveProtocol, thermal: ThermalParams) -> float:
    """Largest transition probability that still permits work extraction.

    Zero when the gap ratio falls outside [1, kT_hot/kT_cold] (no extraction
    is possible at any transition probability there).  Otherwise the unique
    root of the mean-work closed form:

        (nu_f - nu_i)(p_cold - p_hot) / (2 (nu_f p_cold + nu_i p_hot))
    """
    nu_i, nu_f = protocol.nu_initial_khz, protocol.nu_final_khz
    ratio = nu_f / nu_i
    if not 1.0 <= ratio <= thermal.kt_hot_pev / thermal.kt_cold_pev:
        return 0.0
    p_cold = polarization(nu_i, thermal.kt_cold_pev)
    p_hot = polarization(nu_f, thermal.kt_hot_pev)
    denom = 2.0 * (nu_f * p_cold + nu_i * p_hot)
    if denom == 0.0:
        return 0.0
    return max((nu_f - nu_i) * (p_cold - p_hot) / denom, 0.0)


def efficiency_closed_form(
    protocol: DriveProtocol, thermal: ThermalParams, transition_prob: float
) -> float:
    """Engine efficiency as a function of the transition probability alone.

    With f = p_hot/(p_hot - p_cold) and g = p_cold/(p_hot - p_cold) built
    from the endpoint polarizations:

        1 - (nu_i/nu_f) * (1 - 2*transition_prob*f) / (1 + 2*transition_prob*g)

    which reduces to the ideal-ramp value 1 - nu_i/nu_f at zero transition
    probability and equals mean work over mean hot heat everywhere.
    """
    nu_i, nu_f = protocol.nu_initial_khz, protocol.nu_final_khz
    p_cold = polarization(nu_i, thermal.kt_cold_pev)
    p_hot = polarization(nu_f, thermal.kt_hot_pev)
    if math.isclose(p_cold, p_hot, rel_tol=0.0, abs_tol=1e-15):
        raise ValueError("efficiency undefined for equal cold and hot polarizations")
    f = p_hot / (p_hot - p_cold)
    g = p_cold / (p_hot - p_cold)
    return 1.0 - (nu_i / nu_f) * (1.0 - 2.0 * transition_prob * f) / (
        1.0 + 2.0 * transition_prob * g
    )


def run_cycle(cfg: CycleConfig) -> CycleReport:
    """Simulate one full cycle and report every figure of merit."""
    states = _cycle_states(cfg)
    return _report_from_states(cfg, *states)


def sweep_tau(cfg: CycleConfig, tau_list_us: Sequence[float]) -> list[CycleReport]:
    """Run the cycle across drive durations; order-preserving."""
    if len(tau_list_us) == 0:
        raise ValueError("tau list must be nonempty")
    return [
        run_cycle(replace(cfg, protocol=replace(cfg.protocol, tau_us=float(tau))))
        for tau in tau_list_us
    ]


#: CycleReport fields whose spread Monte Carlo resampling estimates.
MONTE_CARLO_FIELDS = (
    "mean_work_pev",
    "mean_heat_hot_pev",
    "mean_heat_cold_pev",
    "efficiency",
    "efficiency_lag",
    "entropy_production",
    "power_pev_per_ms",
)


def monte_carlo_uncertainty(
    cfg: CycleConfig,
    rel_noise: float = 0.01,
    n_samples: int = 1000,
    seed: int = 0,
) -> dict[str, UncertaintyEstimate]:
    """Propagate per-element state uncertainty into the cycle quantities.

    Each of the four cycle states is resampled ``n_samples`` times with
    additive complex Gaussian noise of width ``rel_noise`` per matrix
    element, repaired to a valid state (re-Hermitize, clip negative
    eigenvalues, renormalize the trace), and the report quantities are
    recomputed.  Sample i draws from its own RNG stream spawned as
    ``SeedSequence(seed, spawn_key=(i,))``, so any parallel fan-out of the
    sample loop reproduces the sequential results exactly.

    With ``rel_noise == 0`` the perturbation path is bypassed entirely and
    the means are the point estimates, bit for bit, with zero spread.
    """
    _, estimates = cycle_with_uncertainty(cfg, rel_noise, n_samples, seed)
    return estimates


def cycle_with_uncertainty(
    cfg: CycleConfig,
    rel_noise: float = 0.01,
    n_samples: int = 1000,
    seed: int = 0,
) -> tuple[CycleReport, dict[str, UncertaintyEstimate]]:
    """Point report plus Monte Carlo spread from a single state computation."""
    if rel_noise < 0.0:
        raise ValueError(f"noise width must be nonnegative, got {rel_noise}")
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")

    states = _cycle_states(cfg)
    point = _report_from_states(cfg, *states)
    if rel_noise == 0.0:
        return point, {
            name: UncertaintyEstimate(getattr(point, name), 0.0)
            for name in MONTE_CARLO_FIELDS
        }

    _, cold_eq, hot_eq, after_exp, after_comp = states
    clean = (cold_eq, hot_eq, after_exp, after_comp)
    stacks = [np.empty((n_samples, 2, 2), dtype=np.complex128) for _ in clean]
    for i in range(n_samples):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        for stack, state in zip(stacks, clean):
            noise = rng.normal(0.0, rel_noise, (2, 2)) + 1j * rng.normal(
                0.0, rel_noise, (2, 2)
            )
            stack[i] = state + noise
    cold_s, hot_s, exp_s, comp_s = (_repair_batch(stack) for stack in stacks)

    h_cold, h_hot = endpoint_hamiltonians(cfg.protocol)
    heat_hot = _trace_pairing(h_hot, hot_s - exp_s)
    heat_cold = _trace_pairing(h_cold, cold_s - comp_s)
    work = heat_hot + heat_cold
    with np.errstate(divide="ignore", invalid="ignore"):
        eff = work / heat_hot
        lag = (
            _relative_entropy_batch(exp_s, hot_s)
            + _relative_entropy_batch(comp_s, cold_s)
        ) * cfg.thermal.kt_cold_pev / heat_hot
    sigma = (
        -heat_cold / cfg.thermal.kt_cold_pev - heat_hot / cfg.thermal.kt_hot_pev
    )
    period = 2.0 * cfg.protocol.tau_us + cfg.t_thermalization_us + cfg.t_cooling_us
    power = 1000.0 * work / period

    samples = {
        "mean_work_pev": work,
        "mean_heat_hot_pev": heat_hot,
        "mean_heat_cold_pev": heat_cold,
        "efficiency": eff,
        "efficiency_lag": lag,
        "entropy_production": sigma,
        "power_pev_per_ms": power,
    }
    estimates = {
        name: UncertaintyEstimate(
            float(np.mean(values)),
            float(np.std(values, ddof=1)) if n_samples > 1 else 0.0,
        )
        for name, values in samples.items()
    }
    return point, estimates


# --- internals ---------------------------------------------------------------

def _cycle_states(
    cfg: CycleConfig,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(transition prob, cold equilibrium, hot equilibrium, after expansion,
    after compression)."""
    h_cold, h_hot = endpoint_hamiltonians(cfg.protocol)
    forward = evolve_unitary(
        replace(cfg.protocol, phase=Phase.EXPANSION), cfg.n_steps
    )
    backward = evolve_unitary(
        replace(cfg.protocol, phase=Phase.COMPRESSION), cfg.n_steps
    )
    swap_prob = transition_probability(forward, h_cold, h_hot)
    cold_eq = gibbs_state(h_cold, cfg.thermal.kt_cold_pev)
    hot_eq = gibbs_state(h_hot, cfg.thermal.kt_hot_pev)
    after_exp = propagate_state(cold_eq, forward)
    after_comp = propagate_state(hot_eq, backward)
    return swap_prob, cold_eq, hot_eq, after_exp, after_comp


def _report_from_states(
    cfg: CycleConfig,
    swap_prob: float,
    cold_eq: np.ndarray,
    hot_eq: np.ndarray,
    after_exp: np.ndarray,
    after_comp: np.ndarray,
) -> CycleReport:
    h_cold, h_hot = endpoint_hamiltonians(cfg.protocol)
    heat_hot = float(np.real(np.trace(h_hot @ (hot_eq - after_exp))))
    heat_cold = float(np.real(np.trace(h_cold @ (cold_eq - after_comp))))
    work = heat_hot + heat_cold
    eta_otto = 1.0 - cfg.protocol.nu_initial_khz / cfg.protocol.nu_final_khz
    eta_carnot = 1.0 - cfg.thermal.kt_cold_pev / cfg.thermal.kt_hot_pev
    if heat_hot == 0.0:
        eff = math.nan
        lag = math.nan
    else:
        eff = work / heat_hot
        lag = efficiency_lag(
            after_exp, hot_eq, after_comp, cold_eq, heat_hot,
            1.0 / cfg.thermal.kt_cold_pev,
        )
    sigma = entropy_production_drive(heat_cold, heat_hot, cfg.thermal)
    period = 2.0 * cfg.protocol.tau_us + cfg.t_thermalization_us + cfg.t_cooling_us
    return CycleReport(
        tau_us=cfg.protocol.tau_us,
        transition_prob=swap_prob,
        mean_work_pev=work,
        mean_heat_hot_pev=heat_hot,
        mean_heat_cold_pev=heat_cold,
        efficiency=eff,
        efficiency_otto=eta_otto,
        efficiency_carnot=eta_carnot,
        efficiency_lag=lag,
        entropy_production=sigma,
        power_pev_per_ms=1000.0 * work / period,
        extraction_ok=work > 0.0,
    )


def _trace_pairing(operator: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Re tr[operator @ state] for a stack of states."""
    return np.real(np.einsum("ij,nji->n", operator, states))


def _repair_batch(matrices: np.ndarray) -> np.ndarray:
    """Project noisy matrices back to valid states: Hermitize, clip negative
    eigenvalues, renormalize the trace."""
    herm = 0.5 * (matrices + np.conj(np.swapaxes(matrices, 1, 2)))
    eigvals, eigvecs = np.linalg.eigh(herm)
    eigvals = np.clip(eigvals, 0.0, None)
    totals = eigvals.sum(axis=1, keepdims=True)
    eigvals = np.where(totals > 0.0, eigvals / np.where(totals > 0.0, totals, 1.0), 0.5)
    return np.einsum("nij,nj,nkj->nik", eigvecs, eigvals, np.conj(eigvecs))


def _relative_entropy_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """S(a||b) for stacks of 2x2 states."""
    wa, va = np.linalg.eigh(a)
    wb, vb = np.linalg.eigh(b)
    if (wb < 1e-12).any():
        raise ValueError("relative entropy infinite")
    wa = np.clip(wa, 0.0, None)
    entropy_a = np.where(wa > 0.0, wa * np.log(np.where(wa > 0.0, wa, 1.0)), 0.0).sum(
        axis=-1
    )
    overlap = np.abs(np.einsum("nji,njk->nik", np.conj(va), vb)) ** 2
    cross = np.einsum("ni,nik,nk->n", wa, overlap, np.log(wb))
    return entropy_a - cross
