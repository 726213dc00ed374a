"""Dense complex linear algebra for labeled multi-qubit states.

States are dense complex amplitude vectors over an ordered tuple of named
single-qubit registers. Register 0 is the most significant bit of the
amplitude index, so for registers ``(A, B)`` the amplitudes are ordered by
bitstring ``00, 01, 10, 11`` with the first character belonging to ``A``.
All values are immutable and all operations are pure functions, so they can
be shared freely across threads.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    DuplicateRegisterLabel,
    InvalidBasis,
    NonNormalizedState,
    NumericalError,
    UnknownRegister,
    ZeroProbabilityBranch,
)

#: Tolerance on the squared norm when accepting externally supplied amplitudes.
NORM_ATOL = 1e-9
#: Max entry deviation allowed in the unitarity check U†U = I.
UNITARY_ATOL = 1e-12
#: Orthonormality tolerance for measurement basis vectors.
BASIS_ATOL = 1e-12
#: Probabilities in [-NEGATIVE_CLIP, 0) are rounding noise and clipped to 0;
#: anything more negative indicates a bug and raises NumericalError.
NEGATIVE_CLIP = 1e-15
#: Projection weight at or below this is treated as a zero-probability branch.
BRANCH_EPS = 1e-12


def _as_complex_vector(values: Sequence[complex] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).reshape(-1).copy()
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise NumericalError("amplitudes must be finite (no NaN/Inf)")
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure state over an ordered tuple of labeled qubit registers."""

    registers: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        regs = tuple(self.registers)
        if len(regs) == 0:
            raise ValueError("a Ket needs at least one register")
        for label in regs:
            if not label or any(ch.isspace() for ch in label):
                raise ValueError(f"bad register label {label!r}")
        if len(set(regs)) != len(regs):
            raise DuplicateRegisterLabel(f"duplicate register label in {regs}")
        arr = _as_complex_vector(self.amplitudes)
        if arr.shape[0] != 1 << len(regs):
            raise DimensionMismatch(
                f"{len(regs)} registers need {1 << len(regs)} amplitudes, got {arr.shape[0]}"
            )
        norm_sq = float(np.sum(np.abs(arr) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise NonNormalizedState(f"squared norm {norm_sq!r} deviates from 1")
        arr.setflags(write=False)
        object.__setattr__(self, "registers", regs)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_bits(cls, registers: Sequence[str], bits: str) -> Ket:
        """Computational basis state, e.g. ``from_bits(("A", "B"), "10")``."""
        n = len(registers)
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"bitstring {bits!r} does not match {n} registers")
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(tuple(registers), amps)

    @classmethod
    def normalized(cls, registers: Sequence[str], amplitudes: Sequence[complex]) -> Ket:
        """Construct after rescaling the amplitudes to unit norm."""
        arr = _as_complex_vector(amplitudes)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise NonNormalizedState("cannot normalize the zero vector")
        return cls(tuple(registers), arr / norm)

    @property
    def num_registers(self) -> int:
        return len(self.registers)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def position(self, label: str) -> int:
        try:
            return self.registers.index(label)
        except ValueError:
            raise UnknownRegister(f"register {label!r} not in {self.registers}") from None

    def amplitude(self, bits: str) -> complex:
        """Amplitude of a basis bitstring in register order."""
        if len(bits) != self.num_registers or set(bits) - {"0", "1"}:
            raise ValueError(f"bitstring {bits!r} does not match registers {self.registers}")
        return complex(self.amplitudes[int(bits, 2)])

    def norm_error(self) -> float:
        """Absolute deviation of the squared norm from 1."""
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)

    def __repr__(self) -> str:
        return f"Ket(registers={self.registers}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Unitary:
    """Dense unitary operator on a power-of-two dimensional space."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128).copy()
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"unitary must be square, got shape {mat.shape}")
        dim = mat.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DimensionMismatch(f"unitary dimension {dim} is not a power of two")
        if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
            raise NumericalError("unitary entries must be finite")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
        if defect > UNITARY_ATOL:
            raise InvalidBasis(f"matrix is not unitary (U†U deviates by {defect:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def inverse(self) -> Unitary:
        return Unitary(self.matrix.conj().T)

    def __repr__(self) -> str:
        return f"Unitary(dim={self.dim})"


class BasisKind(Enum):
    Z = "Z"
    PM = "PM"
    GENERAL = "GENERAL"


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Orthonormal single-qubit measurement basis with display labels.

    ``vectors`` holds the two basis kets as rows; ``labels`` are the outcome
    names shown in distributions (``0``/``1`` for Z, ``+``/``-`` for the
    plus/minus basis).
    """

    kind: BasisKind
    vectors: np.ndarray
    labels: tuple[str, str]

    def __post_init__(self):
        vec = np.asarray(self.vectors, dtype=np.complex128).copy()
        if vec.shape != (2, 2):
            raise InvalidBasis(f"basis needs two 2-vectors, got shape {vec.shape}")
        gram = vec.conj() @ vec.T
        if np.max(np.abs(gram - np.eye(2))) > BASIS_ATOL:
            raise InvalidBasis("basis vectors are not orthonormal")
        if len(self.labels) != 2 or self.labels[0] == self.labels[1]:
            raise InvalidBasis(f"outcome labels must be two distinct strings: {self.labels}")
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def z(cls) -> BasisSpec:
        return cls(BasisKind.Z, np.eye(2), ("0", "1"))

    @classmethod
    def pm(cls) -> BasisSpec:
        h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
        return cls(BasisKind.PM, h, ("+", "-"))

    @classmethod
    def general(
        cls,
        b0: Sequence[complex],
        b1: Sequence[complex],
        labels: tuple[str, str] = ("0", "1"),
    ) -> BasisSpec:
        return cls(BasisKind.GENERAL, np.array([b0, b1]), labels)

    def __repr__(self) -> str:
        return f"BasisSpec({self.kind.value}, labels={self.labels})"


#: Computational (Z) basis singleton.
Z = BasisSpec.z()
#: Plus/minus (Hadamard) basis singleton.
PM = BasisSpec.pm()


class Distribution(Mapping):
    """Immutable probability distribution over outcome labels.

    Keys are outcome labels (strings) or tuples of labels for joint
    distributions. Tiny negative entries from float rounding are clipped to
    zero; anything past the clip window raises, since it signals a real bug
    rather than noise. Iteration order is the insertion order, which all
    producers keep canonical (basis label order).
    """

    __slots__ = ("_probs",)

    def __init__(self, probs: Mapping, *, atol: float = 1e-12):
        cleaned: dict = {}
        total = 0.0
        for key, value in probs.items():
            p = float(value)
            if p < 0.0:
                if p < -NEGATIVE_CLIP:
                    raise NumericalError(f"probability of {key!r} is {p!r}")
                p = 0.0
            elif p > 1.0:
                if p > 1.0 + NEGATIVE_CLIP:
                    raise NumericalError(f"probability of {key!r} is {p!r}")
                p = 1.0
            cleaned[key] = p
            total += p
        if abs(total - 1.0) > atol:
            raise NumericalError(f"probabilities sum to {total!r}, not 1 (atol={atol})")
        self._probs = cleaned

    def __getitem__(self, key) -> float:
        return self._probs[key]

    def __iter__(self) -> Iterator:
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v:.6g}" for k, v in self._probs.items())
        return f"Distribution({{{inner}}})"


# --- operations ------------------------------------------------------------


def tensor(a: Ket, b: Ket) -> Ket:
    """Tensor product of two states over disjoint register sets."""
    overlap = set(a.registers) & set(b.registers)
    if overlap:
        raise DuplicateRegisterLabel(f"registers appear on both sides: {sorted(overlap)}")
    return Ket(a.registers + b.registers, np.kron(a.amplitudes, b.amplitudes))


def apply_unitary(u: Unitary, psi: Ket, targets: Sequence[str]) -> Ket:
    """Apply ``u`` on the ordered target registers, identity elsewhere."""
    positions = [psi.position(t) for t in targets]
    if len(set(positions)) != len(positions):
        raise DuplicateRegisterLabel(f"repeated target register in {tuple(targets)}")
    if u.dim != 1 << len(positions):
        raise DimensionMismatch(
            f"unitary of dim {u.dim} cannot act on {len(positions)} registers"
        )
    out = kernels.apply_matrix(psi.amplitudes, psi.num_registers, u.matrix, positions)
    return Ket(psi.registers, out)


def basis_change_unitary(basis: BasisSpec) -> Unitary:
    """Single-qubit V with V|b0> = |0> and V|b1> = |1>."""
    return Unitary(np.conj(basis.vectors))


def _rotated_to_z(psi: Ket, target: str, basis: BasisSpec) -> Ket:
    if basis.kind is BasisKind.Z:
        return psi
    return apply_unitary(basis_change_unitary(basis), psi, [target])


def born_distribution(psi: Ket, target: str, basis: BasisSpec) -> Distribution:
    """Born-rule outcome distribution for measuring one register in a basis."""
    rotated = _rotated_to_z(psi, target, basis)
    w0, w1 = kernels.z_weights(rotated.amplitudes, rotated.num_registers, rotated.position(target))
    return Distribution({basis.labels[0]: w0, basis.labels[1]: w1})


def project(psi: Ket, target: str, basis: BasisSpec, outcome: str) -> tuple[Ket, float]:
    """Project one register onto a basis outcome.

    Returns the renormalized post-projection state and the pre-projection
    probability of the outcome. Raises ZeroProbabilityBranch when that
    probability is at or below the branch threshold.
    """
    try:
        bit = basis.labels.index(outcome)
    except ValueError:
        raise ValueError(f"outcome {outcome!r} not one of {basis.labels}") from None
    rotated = _rotated_to_z(psi, target, basis)
    flat, weight = kernels.project_z(
        rotated.amplitudes, rotated.num_registers, rotated.position(target), bit
    )
    if weight <= BRANCH_EPS:
        raise ZeroProbabilityBranch(
            f"outcome {outcome!r} on register {target!r} has probability {weight!r}"
        )
    projected = Ket(psi.registers, flat)
    if basis.kind is not BasisKind.Z:
        projected = apply_unitary(basis_change_unitary(basis).inverse(), projected, [target])
    return projected, weight


def fidelity(a: Ket, b: Ket) -> float:
    """|<a|b>|^2 for states over identical register tuples."""
    if a.registers != b.registers:
        raise UnknownRegister(f"register mismatch: {a.registers} vs {b.registers}")
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def canonical_phase(psi: Ket) -> Ket:
    """Fix the global phase so the first nonzero amplitude is real positive.

    Global phase is physically irrelevant; this convention is what makes
    amplitude printouts and golden comparisons deterministic.
    """
    amps = psi.amplitudes
    nonzero = np.flatnonzero(np.abs(amps) > 1e-14)
    if nonzero.size == 0:
        return psi
    pivot = amps[nonzero[0]]
    phase = pivot / abs(pivot)
    return Ket(psi.registers, amps * np.conj(phase))
