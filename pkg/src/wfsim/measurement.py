"""Unitary measurement model: record to a memory qubit, undo, or read out.

A friend's measurement is modeled as a reversible interaction that copies
the system's value in the friend's basis onto a one-qubit memory initialized
to |0>. Undoing applies the inverse interaction. Asking the friend is a
projective Z readout of the memory qubit.

The quantum state never stores measurement status. Bookkeeping of which
records exist, and whether they were undone or read, is a classical ledger
kept by the Lab session type.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import (
    DuplicateRegisterLabel,
    InvalidTransition,
    MemoryNotReady,
    NothingToUndo,
)
from .qcore import (
    Z,
    BasisSpec,
    Distribution,
    Ket,
    Unitary,
    apply_unitary,
    basis_change_unitary,
    born_distribution,
    project,
)

#: Reduced probability of memory=|0> may deviate from 1 by at most this
#: before record() refuses; looser than state tolerance because composed
#: unitaries accumulate rounding.
READY_ATOL = 1e-9
#: Readout branches below this probability are dropped as numerically absent.
BRANCH_MIN = 1e-12

_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    dtype=np.complex128,
)


@dataclass(frozen=True)
class MemoryBinding:
    """Which system register a friend measures, in which basis, onto which memory."""

    system: str
    memory: str
    basis: BasisSpec

    def __post_init__(self):
        if self.system == self.memory:
            raise DuplicateRegisterLabel(
                f"system and memory must differ, both are {self.system!r}"
            )


class RecordStatus(Enum):
    RECORDED = "RECORDED"
    UNDONE = "UNDONE"
    READ = "READ"


@dataclass(frozen=True)
class MeasurementRecord:
    """Classical ledger entry for one friend measurement.

    Status moves only RECORDED -> UNDONE or RECORDED -> READ; a read record
    carries the outcome label it was read as.
    """

    binding: MemoryBinding
    status: RecordStatus = RecordStatus.RECORDED
    outcome: str | None = None

    def mark_undone(self) -> MeasurementRecord:
        if self.status is not RecordStatus.RECORDED:
            raise InvalidTransition(f"cannot undo a record with status {self.status.value}")
        return replace(self, status=RecordStatus.UNDONE)

    def mark_read(self, outcome: str) -> MeasurementRecord:
        if self.status is not RecordStatus.RECORDED:
            raise InvalidTransition(f"cannot read a record with status {self.status.value}")
        return replace(self, status=RecordStatus.READ, outcome=outcome)


def measurement_unitary(binding: MemoryBinding) -> Unitary:
    """Two-qubit interaction copying the system's basis value onto the memory.

    Acts on (system, memory) in that order: rotate the system into Z, copy
    with a controlled-NOT, rotate back. For the Z basis this is exactly CX.
    """
    v = basis_change_unitary(binding.basis).matrix
    eye = np.eye(2, dtype=np.complex128)
    rot = np.kron(v, eye)
    return Unitary(rot.conj().T @ _CX @ rot)


def record(psi: Ket, binding: MemoryBinding) -> Ket:
    """Entangle the memory with the system in the binding basis.

    The memory register must be in |0> (reduced probability within
    READY_ATOL of 1), otherwise MemoryNotReady is raised.
    """
    ready = born_distribution(psi, binding.memory, Z)["0"]
    if abs(1.0 - ready) > READY_ATOL:
        raise MemoryNotReady(
            f"memory {binding.memory!r} has p(0) = {ready!r}, expected 1"
        )
    return apply_unitary(measurement_unitary(binding), psi, [binding.system, binding.memory])


def undo(psi: Ket, binding: MemoryBinding) -> Ket:
    """Apply the inverse interaction; undo(record(psi, b), b) == psi.

    This is the raw reversal. It does not know whether a record actually
    happened; use Lab for sessions that enforce NothingToUndo.
    """
    u = measurement_unitary(binding).inverse()
    return apply_unitary(u, psi, [binding.system, binding.memory])


@dataclass(frozen=True)
class AskResult:
    """Z readout of a memory qubit: distribution plus collapsed branches.

    ``branches`` holds the renormalized post-readout state for every outcome
    whose probability exceeds BRANCH_MIN, keyed by the Z label.
    """

    distribution: Distribution
    branches: dict[str, Ket]


def ask(psi: Ket, memory: str) -> AskResult:
    """Read the memory register out in Z and collapse per outcome."""
    dist = born_distribution(psi, memory, Z)
    branches = {}
    for label, p in dist.items():
        if p > BRANCH_MIN:
            branch, _ = project(psi, memory, Z, label)
            branches[label] = branch
    return AskResult(dist, branches)


@dataclass(frozen=True)
class Lab:
    """Immutable session pairing a quantum state with its measurement ledger.

    Every operation returns a fresh Lab; the ledger is what turns the pure
    state-vector reversal into "undo the measurement that was made", with
    NothingToUndo when no live record matches.
    """

    state: Ket
    records: tuple[MeasurementRecord, ...] = ()

    def _live_index(self, system: str, memory: str) -> int | None:
        for i in range(len(self.records) - 1, -1, -1):
            rec = self.records[i]
            if (
                rec.status is RecordStatus.RECORDED
                and rec.binding.system == system
                and rec.binding.memory == memory
            ):
                return i
        return None

    def record(self, binding: MemoryBinding) -> Lab:
        new_state = record(self.state, binding)
        return Lab(new_state, self.records + (MeasurementRecord(binding),))

    def undo(self, binding: MemoryBinding) -> Lab:
        idx = self._live_index(binding.system, binding.memory)
        if idx is None:
            raise NothingToUndo(
                f"no live record for system {binding.system!r}, memory {binding.memory!r}"
            )
        rec = self.records[idx]
        new_state = undo(self.state, rec.binding)
        new_records = self.records[:idx] + (rec.mark_undone(),) + self.records[idx + 1 :]
        return Lab(new_state, new_records)

    def ask(self, memory: str) -> AskResult:
        return ask(self.state, memory)

    def read(self, memory: str, outcome: str) -> Lab:
        """Collapse the memory to one Z outcome and mark its record as read."""
        branch, _ = project(self.state, memory, Z, outcome)
        records = self.records
        for i in range(len(records) - 1, -1, -1):
            rec = records[i]
            if rec.status is RecordStatus.RECORDED and rec.binding.memory == memory:
                records = records[:i] + (rec.mark_read(outcome),) + records[i + 1 :]
                break
        return Lab(branch, records)
