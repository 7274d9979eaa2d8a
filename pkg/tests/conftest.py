"""Shared fixtures: the baseline desk-scale scenario and random generators."""

from pathlib import Path

import numpy as np
import pytest

from irsalloc import SystemParams, build_topology, dbm_to_watts

REPO_ROOT = Path(__file__).resolve().parents[1]


def baseline_params(**overrides) -> SystemParams:
    kw = dict(
        transmit_power=dbm_to_watts(20.0),
        amp_power_budget=dbm_to_watts(17.0),
        rx_noise_power=dbm_to_watts(-80.0),
        amp_noise_power=dbm_to_watts(-80.0),
        ref_gain=1e-3,
        wavelength=0.1,
        cost_active=5.0,
        cost_passive=1.0,
        total_budget=1500.0,
    )
    kw.update(overrides)
    return SystemParams(**kw)


def baseline_topology():
    return build_topology((0.0, 0.0, 0.0), (15.0, 5.0, 10.0),
                          (98.0, 5.0, 10.0), (100.0, 0.0, 0.0))


def random_scenario(rng: np.random.Generator, far_apart: bool = False):
    """Random but physically sane scenario for property tests.

    far_apart stretches the inter-surface distance so the dominant-term
    approximation regime holds.
    """
    params = SystemParams(
        transmit_power=dbm_to_watts(rng.uniform(10.0, 30.0)),
        amp_power_budget=dbm_to_watts(rng.uniform(5.0, 25.0)),
        rx_noise_power=dbm_to_watts(rng.uniform(-90.0, -70.0)),
        amp_noise_power=dbm_to_watts(rng.uniform(-90.0, -70.0)),
        ref_gain=10.0 ** rng.uniform(-4.0, -2.0),
        wavelength=0.1,
        cost_active=float(rng.uniform(2.0, 10.0)),
        cost_passive=1.0,
        total_budget=float(rng.uniform(100.0, 3000.0)),
    )
    xb = rng.uniform(2000.0, 6000.0) if far_apart else rng.uniform(60.0, 130.0)
    topo = build_topology(
        (0.0, 0.0, 0.0),
        (rng.uniform(5.0, 30.0), rng.uniform(0.0, 10.0), rng.uniform(5.0, 15.0)),
        (xb, rng.uniform(0.0, 10.0), rng.uniform(5.0, 15.0)),
        (xb + rng.uniform(5.0, 40.0), rng.uniform(0.0, 10.0), 0.0),
    )
    return params, topo


@pytest.fixture(scope="session")
def params():
    return baseline_params()


@pytest.fixture(scope="session")
def topo():
    return baseline_topology()


@pytest.fixture(scope="session")
def baseline_config():
    return REPO_ROOT / "configs" / "baseline.yaml"
