"""Optimal per-element phase shifts and common amplification factors.

Phases co-phase every per-element contribution of the cascade
h^H * Phi * S * Psi * g, so its magnitude becomes
amp * n_first * n_second * rho^{3/2} / (d1*d2*d3) regardless of angles.
The active surface's common amplitude is set so its output-power constraint
holds with equality; values below 1 are reported, never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelTriple, build_channels
from .errors import AmplitudeBelowOne
from .scenario import SystemParams, TAPR, Topology, check_scheme

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ReflectionConfig:
    """Per-element phases for both surfaces plus their common amplitudes.

    Exactly one surface is active (amplitude possibly > 1); the passive
    surface's amplitude is fixed to 1. Phases are reduced to [0, 2pi).
    """

    phases_first: np.ndarray
    phases_second: np.ndarray
    amp_first: float
    amp_second: float
    scheme: str

    def first_matrix(self) -> np.ndarray:
        return np.diag(self.amp_first * np.exp(1j * self.phases_first))

    def second_matrix(self) -> np.ndarray:
        return np.diag(self.amp_second * np.exp(1j * self.phases_second))

    @property
    def active_amplitude(self) -> float:
        return self.amp_first if self.scheme == TAPR else self.amp_second


def optimal_phases(channels: ChannelTriple) -> tuple[np.ndarray, np.ndarray]:
    """Co-phasing phases for both surfaces, each reduced to [0, 2pi).

    First surface: arg of the outgoing response minus arg of the incoming one
    (the outgoing response appears conjugated inside S). Second surface: arg
    of the response toward Rx minus arg of the one from the first surface
    (h appears conjugated in the cascade).
    """
    phases_first = np.mod(np.angle(channels.a_to_b) - np.angle(channels.a_from_tx), TWO_PI)
    phases_second = np.mod(np.angle(channels.b_to_rx) - np.angle(channels.b_from_a), TWO_PI)
    return phases_first, phases_second


def alpha_star(params: SystemParams, d1, x_act):
    """Active-first amplification factor saturating the output-power budget.

    Array-friendly in d1 and x_act.
    """
    pt, pv = params.transmit_power, params.amp_power_budget
    rho, sv2 = params.ref_gain, params.amp_noise_power
    return np.sqrt(pv * d1 ** 2 / (pt * rho * x_act + d1 ** 2 * sv2 * x_act))


def beta_star(params: SystemParams, d1, d2, x_act, x_pas):
    """Active-second amplification factor; the input signal has already
    traversed Tx -> passive surface -> active surface. Array-friendly."""
    pt, pv = params.transmit_power, params.amp_power_budget
    rho, sv2 = params.ref_gain, params.amp_noise_power
    return np.sqrt(pv * d2 ** 2 /
                   (pt * rho ** 2 * x_act * x_pas ** 2 / d1 ** 2 + d2 ** 2 * sv2 * x_act))


def optimal_alpha_tapr(params: SystemParams, topo: Topology, alloc) -> float:
    return float(alpha_star(params, topo.d1, alloc.n_act))


def optimal_beta_tpar(params: SystemParams, topo: Topology, alloc) -> float:
    return float(beta_star(params, topo.d1, topo.d2, alloc.n_act, alloc.n_pas))


def optimal_amplitude(params: SystemParams, topo: Topology, alloc) -> float:
    check_scheme(alloc.scheme)
    if alloc.scheme == TAPR:
        return optimal_alpha_tapr(params, topo, alloc)
    return optimal_beta_tpar(params, topo, alloc)


def validate_amplitude(value: float) -> float:
    """Return the amplitude, raising AmplitudeBelowOne for values < 1."""
    if value < 1.0:
        raise AmplitudeBelowOne(
            f"amplification factor {value:.6g} < 1: budget too small for the active count")
    return value


def amplitude_feasible(value) -> bool:
    return bool(np.all(np.asarray(value) >= 1.0))


def configure(params: SystemParams, topo: Topology, alloc,
              channels: ChannelTriple | None = None) -> ReflectionConfig:
    """Optimal phases plus the optimal amplitude on the scheme's active surface."""
    if channels is None:
        channels = build_channels(params, topo, alloc)
    phases_first, phases_second = optimal_phases(channels)
    amp = optimal_amplitude(params, topo, alloc)
    if alloc.scheme == TAPR:
        amp_first, amp_second = amp, 1.0
    else:
        amp_first, amp_second = 1.0, amp
    return ReflectionConfig(phases_first=phases_first, phases_second=phases_second,
                            amp_first=amp_first, amp_second=amp_second,
                            scheme=alloc.scheme)
