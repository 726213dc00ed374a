"""State algebra: construction, validation, gates, Born rule, projection."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import random_basis, random_ket
from wfsim import (
    PM,
    Z,
    BasisSpec,
    DimensionMismatch,
    Distribution,
    DuplicateRegisterLabel,
    InvalidBasis,
    Ket,
    NonNormalizedState,
    NumericalError,
    Unitary,
    UnknownRegister,
    ZeroProbabilityBranch,
    apply_unitary,
    basis_change_unitary,
    born_distribution,
    canonical_phase,
    fidelity,
    project,
    tensor,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


class TestKet:
    def test_from_bits(self):
        psi = Ket.from_bits(("A", "B"), "10")
        assert psi.amplitude("10") == 1.0
        assert psi.amplitude("00") == 0.0
        assert psi.dim == 4

    def test_register_zero_is_most_significant(self):
        psi = Ket(("A", "B"), [0.0, 1.0, 0.0, 0.0])
        # index 1 = bitstring 01: A carries 0, B carries 1
        assert born_distribution(psi, "A", Z)["0"] == pytest.approx(1.0)
        assert born_distribution(psi, "B", Z)["1"] == pytest.approx(1.0)

    def test_rejects_non_normalized(self):
        with pytest.raises(NonNormalizedState):
            Ket(("A",), [1.0, 1.0])

    def test_accepts_within_tolerance(self):
        eps = 4e-10
        Ket(("A",), [np.sqrt(1.0 + eps), 0.0])

    def test_normalized_constructor(self):
        psi = Ket.normalized(("A", "B"), [1, 1, 1, 0])
        assert psi.norm_error() < 1e-12
        assert psi.amplitude("00") == pytest.approx(1 / np.sqrt(3))

    def test_normalized_rejects_zero_vector(self):
        with pytest.raises(NonNormalizedState):
            Ket.normalized(("A",), [0.0, 0.0])

    def test_duplicate_register(self):
        with pytest.raises(DuplicateRegisterLabel):
            Ket(("A", "A"), [1.0, 0.0, 0.0, 0.0])

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            Ket(("A", "B"), [1.0, 0.0])

    def test_rejects_nan(self):
        with pytest.raises(NumericalError):
            Ket(("A",), [float("nan"), 0.0])

    def test_amplitudes_immutable(self):
        psi = Ket.from_bits(("A",), "0")
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.5

    def test_unknown_register_lookup(self):
        psi = Ket.from_bits(("A",), "0")
        with pytest.raises(UnknownRegister):
            psi.position("B")


class TestUnitary:
    def test_accepts_hadamard(self):
        h = np.array([[1, 1], [1, -1]]) * INV_SQRT2
        assert Unitary(h).num_qubits == 1

    def test_rejects_non_unitary(self):
        with pytest.raises(InvalidBasis):
            Unitary(np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            Unitary(np.ones((2, 3)))

    def test_rejects_non_power_of_two(self):
        with pytest.raises(DimensionMismatch):
            Unitary(np.eye(3))

    def test_inverse_roundtrip(self):
        h = Unitary(np.array([[1, 1], [1, -1]]) * INV_SQRT2)
        assert np.allclose(h.inverse().matrix @ h.matrix, np.eye(2), atol=1e-15)


class TestBasisSpec:
    def test_z_and_pm_labels(self):
        assert Z.labels == ("0", "1")
        assert PM.labels == ("+", "-")

    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidBasis):
            BasisSpec.general([1, 0], [1, 0])

    def test_rejects_equal_labels(self):
        with pytest.raises(InvalidBasis):
            BasisSpec.general([1, 0], [0, 1], labels=("x", "x"))

    def test_general_accepts_complex(self):
        b = BasisSpec.general([INV_SQRT2, INV_SQRT2 * 1j], [INV_SQRT2, -INV_SQRT2 * 1j])
        assert b.labels == ("0", "1")


class TestDistribution:
    def test_clips_tiny_negative(self):
        d = Distribution({"0": 1.0, "1": -5e-16})
        assert d["1"] == 0.0

    def test_rejects_large_negative(self):
        with pytest.raises(NumericalError):
            Distribution({"0": 1.0, "1": -1e-9})

    def test_rejects_bad_sum(self):
        with pytest.raises(NumericalError):
            Distribution({"0": 0.5, "1": 0.4})

    def test_sum_tolerance_parameter(self):
        Distribution({"0": 0.5, "1": 0.5 + 1e-7}, atol=1e-6)

    def test_iteration_order_is_insertion_order(self):
        d = Distribution({"b": 0.5, "a": 0.5})
        assert list(d) == ["b", "a"]


class TestOperations:
    def test_tensor_order_and_values(self):
        a = Ket.from_bits(("A",), "1")
        b = Ket(("B",), [INV_SQRT2, INV_SQRT2])
        joint = tensor(a, b)
        assert joint.registers == ("A", "B")
        assert joint.amplitude("10") == pytest.approx(INV_SQRT2)
        assert joint.amplitude("11") == pytest.approx(INV_SQRT2)

    def test_tensor_rejects_shared_labels(self):
        with pytest.raises(DuplicateRegisterLabel):
            tensor(Ket.from_bits(("A",), "0"), Ket.from_bits(("A",), "0"))

    def test_apply_unitary_single_target(self):
        h = Unitary(np.array([[1, 1], [1, -1]]) * INV_SQRT2)
        psi = apply_unitary(h, Ket.from_bits(("A", "B"), "00"), ["B"])
        assert psi.amplitude("00") == pytest.approx(INV_SQRT2)
        assert psi.amplitude("01") == pytest.approx(INV_SQRT2)
        assert psi.amplitude("10") == 0.0

    def test_apply_unitary_dimension_mismatch(self):
        h = Unitary(np.array([[1, 1], [1, -1]]) * INV_SQRT2)
        with pytest.raises(DimensionMismatch):
            apply_unitary(h, Ket.from_bits(("A", "B"), "00"), ["A", "B"])

    def test_apply_unitary_unknown_register(self):
        h = Unitary(np.array([[1, 1], [1, -1]]) * INV_SQRT2)
        with pytest.raises(UnknownRegister):
            apply_unitary(h, Ket.from_bits(("A",), "0"), ["B"])

    def test_apply_unitary_matches_dense_kron(self, rng):
        psi = random_ket(rng, ("A", "B", "C"))
        gate = Unitary(np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0])
        # act on (C, A): permute into position, apply, permute back
        out = apply_unitary(gate, psi, ["C", "A"])
        cube = psi.amplitudes.reshape(2, 2, 2)
        moved = np.moveaxis(cube, (2, 0), (0, 1)).reshape(4, 2)
        expect = (gate.matrix @ moved).reshape(2, 2, 2)
        expect = np.moveaxis(expect, (0, 1), (2, 0)).reshape(8)
        assert np.allclose(out.amplitudes, expect, atol=1e-12)

    def test_basis_change_maps_basis_to_z(self, rng):
        for basis in (Z, PM, random_basis(rng)):
            v = basis_change_unitary(basis)
            for i in range(2):
                mapped = v.matrix @ basis.vectors[i]
                expect = np.zeros(2)
                expect[i] = 1.0
                assert np.allclose(mapped, expect, atol=1e-12)

    def test_born_distribution_pm(self):
        psi = Ket(("A",), [INV_SQRT2, INV_SQRT2])
        dist = born_distribution(psi, "A", PM)
        assert dist["+"] == pytest.approx(1.0, abs=1e-12)
        assert dist["-"] == pytest.approx(0.0, abs=1e-12)

    def test_born_distribution_entangled_marginal(self):
        psi = Ket.normalized(("A", "B"), [1, 1, 1, 0])
        dist = born_distribution(psi, "A", Z)
        assert dist["0"] == pytest.approx(2 / 3, abs=1e-12)
        assert dist["1"] == pytest.approx(1 / 3, abs=1e-12)

    def test_project_returns_branch_and_weight(self):
        psi = Ket.normalized(("A", "B"), [1, 1, 1, 0])
        branch, weight = project(psi, "A", Z, "0")
        assert weight == pytest.approx(2 / 3, abs=1e-12)
        assert branch.amplitude("00") == pytest.approx(INV_SQRT2)
        assert branch.amplitude("01") == pytest.approx(INV_SQRT2)
        assert branch.amplitude("10") == 0.0

    def test_project_zero_probability(self):
        psi = Ket.from_bits(("A",), "0")
        with pytest.raises(ZeroProbabilityBranch):
            project(psi, "A", Z, "1")

    def test_project_pm_branch(self):
        psi = Ket.from_bits(("A", "B"), "00")
        branch, weight = project(psi, "B", PM, "-")
        assert weight == pytest.approx(0.5, abs=1e-12)
        assert branch.amplitude("00") == pytest.approx(INV_SQRT2)
        assert branch.amplitude("01") == pytest.approx(-INV_SQRT2)

    def test_project_weights_match_born(self, rng):
        for _ in range(20):
            psi = random_ket(rng, ("A", "B"))
            basis = random_basis(rng)
            dist = born_distribution(psi, "B", basis)
            for label in basis.labels:
                if dist[label] > 1e-9:
                    _, weight = project(psi, "B", basis, label)
                    assert weight == pytest.approx(dist[label], abs=1e-12)

    def test_fidelity_identical_and_orthogonal(self):
        a = Ket.from_bits(("A",), "0")
        b = Ket.from_bits(("A",), "1")
        assert fidelity(a, a) == pytest.approx(1.0)
        assert fidelity(a, b) == pytest.approx(0.0)

    def test_fidelity_register_mismatch(self):
        with pytest.raises(UnknownRegister):
            fidelity(Ket.from_bits(("A",), "0"), Ket.from_bits(("B",), "0"))

    def test_canonical_phase(self):
        psi = Ket(("A",), [INV_SQRT2 * 1j, -INV_SQRT2])
        fixed = canonical_phase(psi)
        assert fixed.amplitude("0") == pytest.approx(INV_SQRT2)
        assert fixed.amplitude("1") == pytest.approx(INV_SQRT2 * 1j)
        assert fidelity(psi, fixed) == pytest.approx(1.0)
