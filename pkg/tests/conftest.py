"""Shared fixtures: default link-budget models and a small reusable layout."""

import numpy as np
import pytest

from ulsim.engine import NetworkSnapshot, SimConfig
from ulsim.linkbudget import AmcCurve, NoiseModel
from ulsim.powerctl import CnbParams, ControllerSpec, MaxPowerParams
from ulsim.topology import PathLossMap, build_hex_layout


@pytest.fixture(scope="session")
def noise():
    return NoiseModel()


@pytest.fixture(scope="session")
def curve():
    return AmcCurve()


@pytest.fixture(scope="session")
def layout():
    return build_hex_layout(rings=2, isd=500.0)


@pytest.fixture(scope="session")
def small_layout():
    return build_hex_layout(rings=1, isd=500.0)


def make_snapshot(loss_db, serving):
    """Synthetic snapshot from an explicit loss matrix (no geometry)."""
    return NetworkSnapshot(layout=None, serving=np.asarray(serving),
                           plmap=PathLossMap(loss_db=np.asarray(loss_db, dtype=float)))


def maxpower_config(**kw):
    spec = ControllerSpec("maxpower", MaxPowerParams())
    return SimConfig(controller=spec, **kw)


def cnb_config(zeta=1.3, **kw):
    spec = ControllerSpec("cnb", CnbParams(zeta=zeta))
    return SimConfig(controller=spec, **kw)
