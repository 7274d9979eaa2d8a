"""SNR and rate for both deployment orders: exact matrix form, closed form,
large-inter-surface-distance approximations, scaling laws, the regime check
enabling those approximations, the scheme comparator, and a Monte-Carlo
signal-level power meter used as an independent oracle.

Closed-form denominators (active surface amplitude at its optimum):

  TAPR: zeta = Pv*sv2*rho^2*d1^2 / x_act
             + s02*d2^2*d3^2*(rho*Pt + sv2*d1^2) / (x_act * x_pas^2)
  TPAR: zeta = Pt*s02*rho^2*d3^2 / x_act
             + sv2*d1^2*d2^2*(rho*Pv + s02*d3^2) / (x_act * x_pas^2)

and snr = Pt*Pv*rho^3 / zeta in both cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelTriple, build_channels
from .errors import ConditionUndefined, DimensionMismatch
from .reflection import ReflectionConfig, alpha_star, beta_star
from .scenario import SystemParams, TAPR, TPAR, Topology, check_scheme


@dataclass(frozen=True)
class LinkBudget:
    """SNR/rate plus (when available) the constituent received powers."""

    scheme: str
    snr: float
    rate: float  # bps/Hz
    signal_power: float | None = None
    amp_noise_power_at_rx: float | None = None
    rx_noise_power: float | None = None


def _budget_from_powers(scheme: str, signal: float, amp_noise: float,
                        rx_noise: float) -> LinkBudget:
    total_noise = amp_noise + rx_noise
    snr = math.inf if total_noise == 0.0 else signal / total_noise
    return LinkBudget(scheme=scheme, snr=snr, rate=rate_from_snr(snr),
                      signal_power=signal, amp_noise_power_at_rx=amp_noise,
                      rx_noise_power=rx_noise)


def rate_from_snr(snr):
    return np.log2(1.0 + snr) if np.ndim(snr) else float(np.log2(1.0 + snr))


def zeta_value(params: SystemParams, scheme: str, x_act, x_pas, d1, d2, d3):
    """Closed-form SNR denominator; array-friendly in counts and distances."""
    check_scheme(scheme)
    pt, pv = params.transmit_power, params.amp_power_budget
    rho = params.ref_gain
    s02, sv2 = params.rx_noise_power, params.amp_noise_power
    if scheme == TAPR:
        return (pv * sv2 * rho ** 2 * d1 ** 2 / x_act
                + s02 * d2 ** 2 * d3 ** 2 * (rho * pt + sv2 * d1 ** 2) / (x_act * x_pas ** 2))
    return (pt * s02 * rho ** 2 * d3 ** 2 / x_act
            + sv2 * d1 ** 2 * d2 ** 2 * (rho * pv + s02 * d3 ** 2) / (x_act * x_pas ** 2))


def zeta_approx_value(params: SystemParams, scheme: str, x_act, x_pas, d1, d2, d3):
    """Dominant zeta term when the inter-surface distance is large."""
    check_scheme(scheme)
    pt, pv = params.transmit_power, params.amp_power_budget
    rho = params.ref_gain
    s02, sv2 = params.rx_noise_power, params.amp_noise_power
    if scheme == TAPR:
        return s02 * d2 ** 2 * d3 ** 2 * (rho * pt + sv2 * d1 ** 2) / (x_act * x_pas ** 2)
    return sv2 * d1 ** 2 * d2 ** 2 * rho * pv / (x_act * x_pas ** 2)


def snr_from_zeta(params: SystemParams, zeta):
    return params.transmit_power * params.amp_power_budget * params.ref_gain ** 3 / zeta


def snr_closed_form(params: SystemParams, topo: Topology, alloc) -> LinkBudget:
    """Closed-form link budget at optimal phases and optimal amplitude.

    Accepts continuous (non-integer) element counts.
    """
    check_scheme(alloc.scheme)
    pt, rho = params.transmit_power, params.ref_gain
    s02, sv2 = params.rx_noise_power, params.amp_noise_power
    d1, d2, d3 = topo.d1, topo.d2, topo.d3
    na, npas = alloc.n_act, alloc.n_pas
    if alloc.scheme == TAPR:
        a2 = alpha_star(params, d1, na) ** 2
        signal = pt * a2 * rho ** 3 * na ** 2 * npas ** 2 / (d1 ** 2 * d2 ** 2 * d3 ** 2)
        amp_noise = sv2 * a2 * rho ** 2 * na * npas ** 2 / (d2 ** 2 * d3 ** 2)
    else:
        b2 = beta_star(params, d1, d2, na, npas) ** 2
        signal = pt * b2 * rho ** 3 * na ** 2 * npas ** 2 / (d1 ** 2 * d2 ** 2 * d3 ** 2)
        amp_noise = sv2 * b2 * rho * na / d3 ** 2
    return _budget_from_powers(alloc.scheme, signal, amp_noise, s02)


def snr_exact_matrix(params: SystemParams, topo: Topology, alloc,
                     channels: ChannelTriple, reflection: ReflectionConfig) -> LinkBudget:
    """Link budget from the full matrix cascade; works for any phases/amplitudes."""
    channels.check_dims()
    if (reflection.phases_first.shape[0] != channels.n_first
            or reflection.phases_second.shape[0] != channels.n_second):
        raise DimensionMismatch("reflection phase vectors do not match channel dimensions")
    if reflection.scheme != channels.scheme or reflection.scheme != alloc.scheme:
        raise DimensionMismatch("scheme tags disagree between channels/reflection/allocation")

    psi = reflection.first_matrix()
    phi = reflection.second_matrix()
    h_row = channels.h.conj()                       # h^H
    through_second = h_row @ phi                    # h^H * Phi
    through_both = through_second @ channels.s @ psi  # h^H * Phi * S * Psi
    cascade = through_both @ channels.g

    signal = params.transmit_power * abs(cascade) ** 2
    if alloc.scheme == TAPR:
        # amplification noise enters at the first surface and traverses both hops
        amp_noise = params.amp_noise_power * float(np.linalg.norm(through_both) ** 2)
    else:
        amp_noise = params.amp_noise_power * float(np.linalg.norm(through_second) ** 2)
    return _budget_from_powers(alloc.scheme, signal, amp_noise, params.rx_noise_power)


def snr_approx(params: SystemParams, topo: Topology, alloc) -> LinkBudget:
    """Dominant-term SNR, valid when the regime check passes."""
    zeta = zeta_approx_value(params, alloc.scheme, alloc.n_act, alloc.n_pas,
                             topo.d1, topo.d2, topo.d3)
    snr = snr_from_zeta(params, zeta)
    return LinkBudget(scheme=alloc.scheme, snr=snr, rate=rate_from_snr(snr))


# -------------------------------------------------------------- regime check

@dataclass(frozen=True)
class RegimeReport:
    """Large-inter-surface-distance condition: lhs << d2, operationalized as
    lhs/d2 <= epsilon."""

    lemma1_lhs: float
    d2: float
    ratio: float
    satisfied: bool
    epsilon: float


def check_lemma1(params: SystemParams, topo: Topology, x_pas: float,
                 epsilon: float = 0.1) -> RegimeReport:
    pt, pv = params.transmit_power, params.amp_power_budget
    rho = params.ref_gain
    s0 = math.sqrt(params.rx_noise_power)
    sv = math.sqrt(params.amp_noise_power)
    d1, d2, d3 = topo.d1, topo.d2, topo.d3

    margin = rho * pv - s0 ** 2 * d3 ** 2
    if margin <= 0.0:
        raise ConditionUndefined(
            "rho*Pv <= sigma0^2*d3^2: second branch of the regime condition undefined")
    branch1 = math.sqrt(pv * rho) * sv * d1 * x_pas / (math.sqrt(pt) * s0 * d3)
    branch2 = math.sqrt(pt) * s0 * rho * d3 * x_pas / math.sqrt(sv ** 2 * d1 ** 2 * margin)
    lhs = max(branch1, branch2)
    ratio = lhs / d2
    return RegimeReport(lemma1_lhs=lhs, d2=d2, ratio=ratio,
                        satisfied=ratio <= epsilon, epsilon=epsilon)


# ------------------------------------------------- scaling law and comparator

def approx_snr_suboptimal(params: SystemParams, topo: Topology, scheme: str,
                          budget: float) -> LinkBudget:
    """Approximate SNR at the closed-form split: cubic in the total budget."""
    check_scheme(scheme)
    pt, pv = params.transmit_power, params.amp_power_budget
    rho = params.ref_gain
    s02, sv2 = params.rx_noise_power, params.amp_noise_power
    d1, d2, d3 = topo.d1, topo.d2, topo.d3
    wa, wp = params.cost_active, params.cost_passive
    if scheme == TAPR:
        snr = (4.0 * budget ** 3 * pt * pv * rho ** 3
               / (27.0 * s02 * d2 ** 2 * d3 ** 2 * (rho * pt + sv2 * d1 ** 2) * wa * wp ** 2))
    else:
        snr = (4.0 * budget ** 3 * pt * rho ** 3
               / (27.0 * d1 ** 2 * d2 ** 2 * sv2 * rho * wa * wp ** 2))
    return LinkBudget(scheme=scheme, snr=snr, rate=rate_from_snr(snr))


@dataclass(frozen=True)
class SchemeComparison:
    """Active-first vs active-second ordering of the approximate rates."""

    tapr_at_least_tpar: bool
    margin: float          # rhs - 1/rho; positive iff TAPR >= TPAR
    inv_ref_gain: float    # 1/rho
    rhs: float             # Pv/(d3^2*s0^2) - Pt/(d1^2*sv2)


def compare_schemes(params: SystemParams, topo: Topology) -> SchemeComparison:
    rhs = (params.amp_power_budget / (topo.d3 ** 2 * params.rx_noise_power)
           - params.transmit_power / (topo.d1 ** 2 * params.amp_noise_power))
    inv_rho = 1.0 / params.ref_gain
    margin = rhs - inv_rho
    return SchemeComparison(tapr_at_least_tpar=margin >= 0.0, margin=margin,
                            inv_ref_gain=inv_rho, rhs=rhs)


# ----------------------------------------------------------------- simulation

def simulate_empirical_snr(params: SystemParams, topo: Topology, alloc,
                           reflection: ReflectionConfig, num_samples: int,
                           seed: int, block_size: int = 100_000) -> LinkBudget:
    """Sample-level SNR estimate from the received-signal model.

    Unit-modulus symbols, per-element circular complex Gaussian amplification
    noise (variance sigma_v^2) and receiver noise (sigma_0^2) are drawn
    explicitly; signal and noise parts are tracked separately and the SNR is
    the ratio of their sample powers. Deterministic for a given seed (fixed
    block partitioning of the sample index space).
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    channels = build_channels(params, topo, alloc)
    psi = reflection.first_matrix()
    phi = reflection.second_matrix()
    through_second = channels.h.conj() @ phi
    through_both = through_second @ channels.s @ psi
    cascade = through_both @ channels.g
    noise_weights = through_both if alloc.scheme == TAPR else through_second
    n_elem = noise_weights.shape[0]

    sv = math.sqrt(params.amp_noise_power / 2.0)
    s0 = math.sqrt(params.rx_noise_power / 2.0)
    rng = np.random.default_rng(seed)
    signal_acc = 0.0
    noise_acc = 0.0
    done = 0
    while done < num_samples:
        m = min(block_size, num_samples - done)
        symbols = np.exp(2j * math.pi * rng.random(m))
        v = sv * (rng.standard_normal((m, n_elem)) + 1j * rng.standard_normal((m, n_elem)))
        n0 = s0 * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        signal_acc += float(np.sum(np.abs(cascade * symbols) ** 2))
        noise_acc += float(np.sum(np.abs(v @ noise_weights + n0) ** 2))
        done += m

    signal = signal_acc / num_samples * params.transmit_power
    noise = noise_acc / num_samples
    snr = math.inf if noise == 0.0 else signal / noise
    return LinkBudget(scheme=alloc.scheme, snr=snr, rate=rate_from_snr(snr),
                      signal_power=signal, amp_noise_power_at_rx=None,
                      rx_noise_power=None)
