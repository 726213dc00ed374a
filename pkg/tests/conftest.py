"""Shared fixtures and scenario factories for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from wfsim import Ket, MemoryBinding, Scenario, Wing, Z, PM, preset
from wfsim.qcore import BasisSpec


@pytest.fixture
def hardy():
    return preset("hardy")


@pytest.fixture
def product():
    return preset("product")


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


def random_ket(rng, registers) -> Ket:
    """Haar-ish random pure state over the given registers."""
    dim = 1 << len(registers)
    raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket.normalized(tuple(registers), raw)


def random_basis(rng) -> BasisSpec:
    """Random orthonormal single-qubit basis from a QR decomposition."""
    raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(raw)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return BasisSpec.general(q[:, 0], q[:, 1])


def two_wing_scenario(initial: Ket, name: str = "custom", remeasure=(PM, PM)) -> Scenario:
    wings = (
        Wing("charlie", MemoryBinding("A", "MC", Z), "alice", remeasure[0]),
        Wing("debbie", MemoryBinding("B", "MD", Z), "bob", remeasure[1]),
    )
    return Scenario(name, ("A", "B"), ("MC", "MD"), initial, wings)


def random_two_wing_scenario(rng, name: str = "random") -> Scenario:
    return two_wing_scenario(random_ket(rng, ("A", "B")), name)


def rational_two_wing_scenario(seed: int) -> Scenario:
    """Scenario whose behavior probabilities are exact small fractions.

    Amplitudes are Gaussian-integer valued before normalization, so every
    Born probability is a ratio of integers with a denominator bounded by
    four times the squared norm. That keeps the feasibility step exact.
    """
    gen = random.Random(seed)
    while True:
        parts = [complex(gen.randint(-3, 3), gen.randint(-3, 3)) for _ in range(4)]
        if any(parts):
            break
    return two_wing_scenario(Ket.normalized(("A", "B"), parts), f"rational-{seed}")


def bell_scenario() -> Scenario:
    amp = 1.0 / np.sqrt(2.0)
    return two_wing_scenario(Ket(("A", "B"), [amp, 0.0, 0.0, amp]), "bell")
