"""Physical parameters, unit conversions and 3D deployment geometry.

Everything downstream of this module works in linear SI units (watts,
meters, dimensionless gains); dBm/dB appear only at the config boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import yaml

from .errors import ConfigError, DistanceTooSmall

TAPR = "TAPR"  # Tx -> active IRS -> passive IRS -> Rx
TPAR = "TPAR"  # Tx -> passive IRS -> active IRS -> Rx
SCHEMES = (TAPR, TPAR)


def check_scheme(scheme: str) -> str:
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    return scheme


# ---------------------------------------------------------------- conversions

def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    return 10.0 * math.log10(p_watts) + 30.0


def db_to_linear(g_db: float) -> float:
    return 10.0 ** (g_db / 10.0)


def linear_to_db(g):
    return 10.0 * np.log10(g)


def free_space_ref_gain(wavelength: float) -> float:
    """Channel power gain at 1 m for an isotropic free-space link, (lambda/4pi)^2."""
    return (wavelength / (4.0 * math.pi)) ** 2


# ---------------------------------------------------------------------- types

@dataclass(frozen=True)
class SystemParams:
    """Scenario-wide powers, noise levels and element costs (linear units).

    ref_gain is an independent config key: it is *not* forced to equal
    free_space_ref_gain(wavelength).
    """

    transmit_power: float     # Pt [W]
    amp_power_budget: float   # Pv [W], total output power cap of the active surface
    rx_noise_power: float     # sigma_0^2 [W]
    amp_noise_power: float    # sigma_v^2 [W], per active element
    ref_gain: float           # channel power gain at 1 m, dimensionless
    wavelength: float         # [m]
    cost_active: float        # budget units per active element
    cost_passive: float       # budget units per passive element
    total_budget: float       # M, budget units

    def __post_init__(self):
        for name in ("transmit_power", "amp_power_budget", "rx_noise_power",
                     "amp_noise_power", "ref_gain", "wavelength",
                     "cost_active", "cost_passive", "total_budget"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
        if self.ref_gain > 1.0:
            raise ConfigError("ref_gain must not exceed 1 (passive channel)")
        if self.cost_active < self.cost_passive:
            raise ConfigError("cost_active must be >= cost_passive")
        if self.total_budget < self.cost_active + self.cost_passive:
            raise ConfigError("total_budget must afford at least one element of each kind")


def direction_angles(vec) -> tuple[float, float]:
    """(azimuth, elevation) of a displacement vector.

    Azimuth from the +x axis in the x-y plane; elevation measured from the
    +z axis, so elevation = pi/2 for a horizontal link.
    """
    v = np.asarray(vec, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0.0:
        raise ValueError("zero-length displacement has no direction")
    azimuth = math.atan2(v[1], v[0])
    elevation = math.acos(max(-1.0, min(1.0, v[2] / r)))
    return azimuth, elevation


def unit_from_angles(azimuth: float, elevation: float) -> np.ndarray:
    """Unit vector with the direction_angles convention."""
    se = math.sin(elevation)
    return np.array([se * math.cos(azimuth), se * math.sin(azimuth), math.cos(elevation)])


@dataclass(frozen=True)
class Topology:
    """Node positions plus derived link distances and per-endpoint angles.

    Each angle pair (azimuth, elevation) describes the unit vector pointing
    from the named node toward the other end of that link.
    """

    pos_tx: tuple[float, float, float]
    pos_irs_a: tuple[float, float, float]
    pos_irs_b: tuple[float, float, float]
    pos_rx: tuple[float, float, float]
    d1: float  # Tx <-> A-IRS
    d2: float  # A-IRS <-> B-IRS
    d3: float  # B-IRS <-> Rx
    ang_tx_to_a: tuple[float, float]
    ang_a_to_tx: tuple[float, float]
    ang_a_to_b: tuple[float, float]
    ang_b_to_a: tuple[float, float]
    ang_b_to_rx: tuple[float, float]
    ang_rx_to_b: tuple[float, float]
    d_min: float = 1.0


def build_topology(pos_tx, pos_irs_a, pos_irs_b, pos_rx, d_min: float = 1.0) -> Topology:
    """Derive link distances and angles from the four node positions."""
    tx = np.asarray(pos_tx, dtype=float)
    a = np.asarray(pos_irs_a, dtype=float)
    b = np.asarray(pos_irs_b, dtype=float)
    rx = np.asarray(pos_rx, dtype=float)
    d1 = float(np.linalg.norm(a - tx))
    d2 = float(np.linalg.norm(b - a))
    d3 = float(np.linalg.norm(rx - b))
    for label, d in (("Tx<->A-IRS", d1), ("A-IRS<->B-IRS", d2), ("B-IRS<->Rx", d3)):
        if d < d_min:
            raise DistanceTooSmall(f"{label} distance {d:.6g} m < d_min {d_min:.6g} m")
    return Topology(
        pos_tx=tuple(tx), pos_irs_a=tuple(a), pos_irs_b=tuple(b), pos_rx=tuple(rx),
        d1=d1, d2=d2, d3=d3,
        ang_tx_to_a=direction_angles(a - tx),
        ang_a_to_tx=direction_angles(tx - a),
        ang_a_to_b=direction_angles(b - a),
        ang_b_to_a=direction_angles(a - b),
        ang_b_to_rx=direction_angles(rx - b),
        ang_rx_to_b=direction_angles(b - rx),
        d_min=d_min,
    )


# --------------------------------------------------------------- config file

CONFIG_KEYS = (
    "pt_dbm", "pv_dbm", "sigma0_dbm", "sigmav_dbm", "rho_db", "wavelength_m",
    "w_act", "w_pas", "total_budget", "pos_tx", "pos_rx", "pos_irs_a",
    "pos_irs_b", "d_min_m",
)


def load_scenario(path) -> tuple[SystemParams, Topology]:
    """Read a scenario config file (YAML/JSON key-value text)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} did not parse to a mapping")
    missing = [k for k in CONFIG_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"config {path} missing keys: {', '.join(missing)}")
    try:
        params = SystemParams(
            transmit_power=dbm_to_watts(float(raw["pt_dbm"])),
            amp_power_budget=dbm_to_watts(float(raw["pv_dbm"])),
            rx_noise_power=dbm_to_watts(float(raw["sigma0_dbm"])),
            amp_noise_power=dbm_to_watts(float(raw["sigmav_dbm"])),
            ref_gain=db_to_linear(float(raw["rho_db"])),
            wavelength=float(raw["wavelength_m"]),
            cost_active=float(raw["w_act"]),
            cost_passive=float(raw["w_pas"]),
            total_budget=float(raw["total_budget"]),
        )
        topo = build_topology(
            raw["pos_tx"], raw["pos_irs_a"], raw["pos_irs_b"], raw["pos_rx"],
            d_min=float(raw["d_min_m"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config {path}: {exc}") from exc
    return params, topo
