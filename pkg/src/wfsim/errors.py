"""Exception hierarchy shared by all wfsim layers."""

from __future__ import annotations


class WfsimError(Exception):
    """Base class for all errors raised by wfsim."""


# --- state algebra ---------------------------------------------------------


class DuplicateRegisterLabel(WfsimError):
    """Two registers in one state carry the same label."""


class UnknownRegister(WfsimError):
    """An operation referenced a register label not present in the state."""


class DimensionMismatch(WfsimError):
    """Operator dimension does not match the number of target registers."""


class InvalidBasis(WfsimError):
    """Measurement basis vectors are not orthonormal."""


class NonNormalizedState(WfsimError):
    """Amplitude vector deviates from unit norm beyond tolerance."""


class ZeroProbabilityBranch(WfsimError):
    """Requested projection onto an outcome of (numerically) zero weight."""


class NumericalError(WfsimError):
    """Internal numerical inconsistency, e.g. a significantly negative probability."""


# --- measurement model -----------------------------------------------------


class MemoryNotReady(WfsimError):
    """A friend's memory register is not in the ready state |0>."""


class NothingToUndo(WfsimError):
    """Undo requested for a binding with no recorded measurement."""


class InvalidTransition(WfsimError):
    """Illegal measurement-record status transition."""


# --- scenarios -------------------------------------------------------------


class UnknownPreset(WfsimError):
    """No built-in scenario with that name."""


class WrongWingCount(WfsimError):
    """Operation requires a different number of wings than the scenario has."""


class ScenarioSyntaxError(WfsimError):
    """Malformed scenario config document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ScenarioSyntaxError):
    """Unrecognized top-level key in a scenario config document."""


class BadRegisterReference(WfsimError):
    """A wing or amplitude references a register that was not declared."""


# --- no-go analysis --------------------------------------------------------


class MissingSetting(WfsimError):
    """Behavior lacks a row required by the analysis."""


class UnknownSetting(WfsimError):
    """Constraint carries a setting pair outside the two-wing protocol."""


class BehaviorSyntaxError(WfsimError):
    """Malformed behavior interchange file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RationalizationFailure(NumericalError):
    """A probability could not be snapped to a small exact fraction."""
