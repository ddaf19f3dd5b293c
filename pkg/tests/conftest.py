"""Shared fixtures; puts src/ on the import path."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from domain.value_objects.decoherence import DecoherenceParams  # noqa: E402
from domain.value_objects.environment import Environment  # noqa: E402
from domain.value_objects.noise_budget import NoiseBudget  # noqa: E402
from domain.value_objects.physical_constants import PhysicalConstants  # noqa: E402
from domain.value_objects.protocol_settings import ProtocolSettings  # noqa: E402


@pytest.fixture
def constants():
    return PhysicalConstants()


@pytest.fixture
def environment():
    """1.17 mT along the NV axis, no rotation."""
    return Environment()


@pytest.fixture
def decoherence():
    return DecoherenceParams()


@pytest.fixture
def no_decoherence():
    return DecoherenceParams.none()


@pytest.fixture
def noise():
    return NoiseBudget()


@pytest.fixture
def ideal_protocol():
    """Perfect polarization and pulses."""
    return ProtocolSettings(q_preserve=1.0, pulse_fidelity=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
