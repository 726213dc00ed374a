"""wfsim: state-vector simulation and analysis of undoable-measurement experiments.

Friends record qubit measurements reversibly onto memory qubits;
superobservers either ask the friends or undo their measurements and
remeasure. The package computes exact behavior tables for such scenarios
and mechanically checks whether any single joint assignment of all
outcomes could reproduce them.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BadRegisterReference,
    BehaviorSyntaxError,
    DimensionMismatch,
    DuplicateRegisterLabel,
    InvalidBasis,
    InvalidTransition,
    MemoryNotReady,
    MissingSetting,
    NonNormalizedState,
    NothingToUndo,
    NumericalError,
    RationalizationFailure,
    ScenarioSyntaxError,
    UnknownKey,
    UnknownPreset,
    UnknownRegister,
    UnknownSetting,
    WfsimError,
    WrongWingCount,
    ZeroProbabilityBranch,
)
from .kernels import BACKEND
from .qcore import (
    PM,
    Z,
    BasisKind,
    BasisSpec,
    Distribution,
    Ket,
    Unitary,
    apply_unitary,
    basis_change_unitary,
    born_distribution,
    canonical_phase,
    fidelity,
    project,
    tensor,
)
from .measurement import (
    AskResult,
    Lab,
    MeasurementRecord,
    MemoryBinding,
    RecordStatus,
    ask,
    measurement_unitary,
    record,
    undo,
)
from .scenario import (
    SETTING_PAIRS,
    Behavior,
    FriendBranch,
    PerspectiveReport,
    SampleResult,
    Scenario,
    Setting,
    Wing,
    behavior_table,
    perspective_report,
    preset,
    run_setting,
    sample,
)
from .config import parse_basis, parse_scenario
from .nogo import (
    EQUALITY_DEFS,
    VARIABLES,
    AssumptionSet,
    ChainStep,
    Constraint,
    ConstraintKind,
    DerivationTrace,
    EqualityCheck,
    Lifted,
    Observed,
    check_equalities,
    implication_chain,
    locality_lift,
    observed_constraints,
)
from .feasibility import (
    Certificate,
    CoverItem,
    JointModel,
    Verdict,
    format_behavior_file,
    lf_feasibility,
    parse_behavior,
    rationalize,
)

__all__ = [
    "__version__",
    "BACKEND",
    # errors
    "WfsimError",
    "DuplicateRegisterLabel",
    "UnknownRegister",
    "DimensionMismatch",
    "InvalidBasis",
    "NonNormalizedState",
    "ZeroProbabilityBranch",
    "NumericalError",
    "MemoryNotReady",
    "NothingToUndo",
    "InvalidTransition",
    "UnknownPreset",
    "WrongWingCount",
    "ScenarioSyntaxError",
    "UnknownKey",
    "BadRegisterReference",
    "MissingSetting",
    "UnknownSetting",
    "BehaviorSyntaxError",
    "RationalizationFailure",
    # state algebra
    "Ket",
    "Unitary",
    "BasisKind",
    "BasisSpec",
    "Distribution",
    "Z",
    "PM",
    "tensor",
    "apply_unitary",
    "basis_change_unitary",
    "born_distribution",
    "project",
    "fidelity",
    "canonical_phase",
    # measurement model
    "MemoryBinding",
    "MeasurementRecord",
    "RecordStatus",
    "AskResult",
    "Lab",
    "measurement_unitary",
    "record",
    "undo",
    "ask",
    # scenarios
    "Setting",
    "SETTING_PAIRS",
    "Wing",
    "Scenario",
    "Behavior",
    "SampleResult",
    "FriendBranch",
    "PerspectiveReport",
    "preset",
    "run_setting",
    "behavior_table",
    "sample",
    "perspective_report",
    "parse_scenario",
    "parse_basis",
    # analysis
    "VARIABLES",
    "EQUALITY_DEFS",
    "ConstraintKind",
    "Constraint",
    "Observed",
    "Lifted",
    "EqualityCheck",
    "AssumptionSet",
    "ChainStep",
    "DerivationTrace",
    "check_equalities",
    "observed_constraints",
    "locality_lift",
    "implication_chain",
    "JointModel",
    "CoverItem",
    "Certificate",
    "Verdict",
    "rationalize",
    "lf_feasibility",
    "parse_behavior",
    "format_behavior_file",
]
