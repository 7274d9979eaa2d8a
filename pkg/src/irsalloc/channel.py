"""Deterministic LOS channels built from uniform-planar-array responses.

The double-reflection link is g (Tx -> first IRS), S (first -> second IRS,
rank one) and h (second IRS -> Rx). Steering arguments use a half-wavelength
element grid, i.e. spacing factor 1; under optimal phase alignment the SNR
is angle-independent, so this choice does not affect any closed-form value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .scenario import SystemParams, TAPR, Topology, check_scheme

SPACING_FACTOR = 1.0  # 2 * (element spacing) / wavelength with lambda/2 spacing


def steering(w: float, n: int) -> np.ndarray:
    """Linear-array steering vector: entry k = exp(-j*pi*k*w), k = 0..n-1."""
    if n < 1:
        raise ValueError("steering vector length must be >= 1")
    return np.exp(-1j * math.pi * w * np.arange(n))


def grid_shape(n: int) -> tuple[int, int]:
    """Near-square factorization n = nx * ny with nx the largest divisor <= sqrt(n)."""
    if n < 1:
        raise ValueError("element count must be >= 1")
    nx = 1
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            nx = d
    return nx, n // nx


def upa_response(azimuth: float, elevation: float, n: int,
                 spacing_factor: float = SPACING_FACTOR) -> np.ndarray:
    """Planar-array response: x-axis steering (sin(az)sin(el)) kron y-axis (cos(el))."""
    nx, ny = grid_shape(n)
    wx = spacing_factor * math.sin(azimuth) * math.sin(elevation)
    wy = spacing_factor * math.cos(elevation)
    return np.kron(steering(wx, nx), steering(wy, ny))


@dataclass(frozen=True)
class ChannelTriple:
    """The three LOS channels plus the raw array responses they were built from.

    a_from_tx / a_to_b are the responses at the first surface (toward Tx and
    toward the second surface); b_from_a / b_to_rx the analogous ones at the
    second surface. S = scale * outer(b_from_a, conj(a_to_b)).
    """

    g: np.ndarray       # (n_first,)
    s: np.ndarray       # (n_second, n_first)
    h: np.ndarray       # (n_second,)
    scheme: str
    a_from_tx: np.ndarray
    a_to_b: np.ndarray
    b_from_a: np.ndarray
    b_to_rx: np.ndarray

    @property
    def n_first(self) -> int:
        return self.g.shape[0]

    @property
    def n_second(self) -> int:
        return self.h.shape[0]

    def check_dims(self):
        if self.s.shape != (self.n_second, self.n_first):
            raise DimensionMismatch(
                f"S has shape {self.s.shape}, expected {(self.n_second, self.n_first)}")


def surface_counts(alloc) -> tuple[int, int]:
    """(n_first, n_second) element counts: the active surface is first in TAPR."""
    check_scheme(alloc.scheme)
    for name in ("n_act", "n_pas"):
        value = getattr(alloc, name)
        if value < 1 or value != int(value):
            raise ValueError(f"{name}={value!r}: channel construction needs integer counts >= 1")
    n_act, n_pas = int(alloc.n_act), int(alloc.n_pas)
    return (n_act, n_pas) if alloc.scheme == TAPR else (n_pas, n_act)


def build_channels(params: SystemParams, topo: Topology, alloc) -> ChannelTriple:
    """Construct g, S, h for the allocation's scheme and element counts."""
    n_first, n_second = surface_counts(alloc)
    rho, lam = params.ref_gain, params.wavelength

    a_from_tx = upa_response(*topo.ang_a_to_tx, n_first)
    a_to_b = upa_response(*topo.ang_a_to_b, n_first)
    b_from_a = upa_response(*topo.ang_b_to_a, n_second)
    b_to_rx = upa_response(*topo.ang_b_to_rx, n_second)

    def scale(d):
        return math.sqrt(rho) / d * np.exp(-2j * math.pi * d / lam)

    g = scale(topo.d1) * a_from_tx
    s = scale(topo.d2) * np.outer(b_from_a, a_to_b.conj())
    h = scale(topo.d3) * b_to_rx
    return ChannelTriple(g=g, s=s, h=h, scheme=alloc.scheme,
                         a_from_tx=a_from_tx, a_to_b=a_to_b,
                         b_from_a=b_from_a, b_to_rx=b_to_rx)
