"""Derivation layer over behaviors: equality checks, lifting, chain propagation.

Four hidden variables describe one round: c and d are the friends' recorded
outcomes, a1 and b1 the superobservers' remeasured outcomes. Each behavior
row reveals two of them. Zero entries at fixed settings become
setting-independent ZERO constraints once locality is assumed, and
constraint propagation over those zeros either forces a contradiction with
a POSITIVE entry or reaches a fixpoint without one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import UnknownSetting
from .scenario import Behavior, Setting

#: Variable names in canonical order: friend outcomes, then remeasured outcomes.
VARIABLES = ("c", "d", "a1", "b1")

#: Which (wing, setting) each variable is revealed by.
VARIABLE_ROLES: dict[str, tuple[int, Setting]] = {
    "c": (0, Setting.ASK),
    "d": (1, Setting.ASK),
    "a1": (0, Setting.UNDO_PM),
    "b1": (1, Setting.UNDO_PM),
}

#: Default outcome domains (Z labels for friend records, PM labels for remeasurements).
DEFAULT_DOMAINS: dict[str, tuple[str, str]] = {
    "c": ("0", "1"),
    "d": ("0", "1"),
    "a1": ("+", "-"),
    "b1": ("+", "-"),
}

#: The four audited behavior entries: id -> (setting pair, outcome pair, expected).
EQUALITY_DEFS: dict[int, tuple[tuple[Setting, Setting], tuple[str, str], float]] = {
    1: ((Setting.ASK, Setting.ASK), ("1", "1"), 0.0),
    2: ((Setting.ASK, Setting.UNDO_PM), ("0", "-"), 0.0),
    3: ((Setting.UNDO_PM, Setting.ASK), ("-", "0"), 0.0),
    4: ((Setting.UNDO_PM, Setting.UNDO_PM), ("-", "-"), 1.0 / 12.0),
}


class ConstraintKind(Enum):
    ZERO = "ZERO"
    POSITIVE = "POSITIVE"


@dataclass(frozen=True)
class Observed:
    """Provenance: seen directly in the behavior at one setting pair."""

    settings: tuple[Setting, Setting]
    equality_id: int | None = None


@dataclass(frozen=True)
class Lifted:
    """Provenance: re-scoped to be setting-independent by the locality step."""

    source_equality: int | None = None


@dataclass(frozen=True)
class Constraint:
    """A ZERO or POSITIVE(value) statement about a partial variable assignment."""

    kind: ConstraintKind
    assignment: tuple[tuple[str, str], ...]
    provenance: Observed | Lifted
    value: float | None = None

    def __post_init__(self):
        pairs = tuple(sorted(self.assignment, key=lambda p: VARIABLES.index(p[0])))
        if not pairs:
            raise ValueError("constraint needs a non-empty assignment")
        names = [var for var, _ in pairs]
        if len(set(names)) != len(names):
            raise ValueError(f"variable assigned twice in {pairs}")
        if self.kind is ConstraintKind.POSITIVE:
            if self.value is None or not 0.0 < self.value <= 1.0:
                raise ValueError(f"POSITIVE constraint needs a value in (0,1], got {self.value}")
        elif self.value is not None:
            raise ValueError("ZERO constraint carries no value")
        object.__setattr__(self, "assignment", pairs)

    def as_dict(self) -> dict[str, str]:
        return dict(self.assignment)

    def describe(self) -> str:
        inner = ",".join(f"{var}={label}" for var, label in self.assignment)
        if self.kind is ConstraintKind.ZERO:
            return f"ZERO{{{inner}}}"
        return f"POSITIVE({self.value:.6g}){{{inner}}}"


@dataclass(frozen=True)
class EqualityCheck:
    """Pass/fail audit of one behavior entry against its expected value."""

    equality_id: int
    expected: float
    computed: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class AssumptionSet:
    """The five hypotheses the contradiction consumes; all on by default."""

    locality: bool = True
    no_superdeterminism: bool = True
    universality: bool = True
    absoluteness: bool = True
    undoability: bool = True

    def enabled(self) -> tuple[str, ...]:
        pairs = (
            ("locality", self.locality),
            ("no-superdeterminism", self.no_superdeterminism),
            ("universality", self.universality),
            ("absoluteness", self.absoluteness),
            ("undoability", self.undoability),
        )
        return tuple(name for name, on in pairs if on)


def check_equalities(b: Behavior, tolerance: float = 1e-10) -> list[EqualityCheck]:
    """Audit the four key behavior entries against 0, 0, 0, 1/12."""
    checks = []
    for eq_id, (settings, pair, expected) in EQUALITY_DEFS.items():
        row = b.row(settings)
        computed = row.get(pair, 0.0)
        passed = abs(computed - expected) <= tolerance
        checks.append(EqualityCheck(eq_id, expected, computed, tolerance, passed))
    return checks


def observed_constraints(b: Behavior, zero_tolerance: float = 1e-10) -> list[Constraint]:
    """Express the four audited entries as constraints on (c, d, a1, b1)."""
    out = []
    for eq_id, (settings, pair, _) in EQUALITY_DEFS.items():
        assignment = []
        for wing in (0, 1):
            var = next(
                name
                for name, role in VARIABLE_ROLES.items()
                if role == (wing, settings[wing])
            )
            assignment.append((var, pair[wing]))
        p = b.row(settings).get(pair, 0.0)
        provenance = Observed(settings, eq_id)
        if abs(p) <= zero_tolerance:
            out.append(Constraint(ConstraintKind.ZERO, tuple(assignment), provenance))
        else:
            out.append(Constraint(ConstraintKind.POSITIVE, tuple(assignment), provenance, p))
    return out


def locality_lift(observed: list[Constraint]) -> list[Constraint]:
    """Re-scope observed constraints as setting-independent statements.

    Locality is what licenses this: a friend's record cannot depend on which
    protocol a distant superobserver later picks, so an entry pinned at one
    setting pair holds for the variables themselves. Value and labels are
    untouched; only provenance changes.
    """
    lifted = []
    for con in observed:
        if not isinstance(con.provenance, Observed):
            raise UnknownSetting(f"cannot lift {con.describe()}: provenance is not observed")
        lifted.append(
            Constraint(con.kind, con.assignment, Lifted(con.provenance.equality_id), con.value)
        )
    return lifted


@dataclass(frozen=True)
class ChainStep:
    """One forcing step: premise pins all but one variable of a ZERO constraint."""

    premise: tuple[tuple[str, str], ...]
    forced_var: str
    forced_value: str
    justification: Constraint


@dataclass(frozen=True)
class DerivationTrace:
    """Result of constraint propagation from a start assignment."""

    start: tuple[tuple[str, str], ...]
    steps: tuple[ChainStep, ...]
    conflict: Constraint | None
    notes: tuple[str, ...] = ()

    def final_assignment(self) -> dict[str, str]:
        out = dict(self.start)
        for step in self.steps:
            out[step.forced_var] = step.forced_value
        return out


def implication_chain(
    constraints: list[Constraint],
    start: dict[str, str],
    domains: dict[str, tuple[str, str]] | None = None,
) -> DerivationTrace:
    """Propagate ZERO constraints from a start assignment to a fixpoint.

    A ZERO constraint matched on all but one binary variable forces that
    variable's other value (on the start event, outcomes in the zero set
    carry no probability). A POSITIVE constraint conflicts when its
    assignment extends the start but the forced values exclude it: the
    positive mass it promises has nowhere to live.
    """
    if domains is None:
        domains = DEFAULT_DOMAINS
    if not start:
        raise ValueError("start must assign at least one variable")
    for var, label in start.items():
        if var not in domains:
            raise ValueError(f"unknown variable {var!r}")
        if label not in domains[var]:
            raise ValueError(f"label {label!r} not in domain of {var!r}")

    zeros = [c for c in constraints if c.kind is ConstraintKind.ZERO]
    positives = [c for c in constraints if c.kind is ConstraintKind.POSITIVE]
    accumulated = dict(start)
    steps: list[ChainStep] = []
    notes: list[str] = []
    annihilated: Constraint | None = None

    progress = True
    while progress and annihilated is None:
        progress = False
        for zero in zeros:
            matched = []
            unmatched = []
            contradicted = False
            for var, label in zero.assignment:
                have = accumulated.get(var)
                if have is None:
                    unmatched.append((var, label))
                elif have == label:
                    matched.append((var, label))
                else:
                    contradicted = True
                    break
            if contradicted:
                continue
            if not unmatched:
                annihilated = zero
                notes.append(
                    f"start event has probability 0: {zero.describe()} is fully satisfied"
                )
                break
            if len(unmatched) == 1:
                var, label = unmatched[0]
                domain = domains[var]
                if len(domain) != 2 or label not in domain:
                    continue
                forced = domain[0] if domain[1] == label else domain[1]
                accumulated[var] = forced
                steps.append(ChainStep(tuple(matched), var, forced, zero))
                progress = True
                break

    conflict = None
    start_pairs = set(start.items())
    for pos in positives:
        pos_pairs = set(pos.assignment)
        if not start_pairs <= pos_pairs:
            continue
        if annihilated is not None:
            conflict = pos
            break
        excluded = any(
            accumulated.get(var) is not None and accumulated[var] != label
            for var, label in pos.assignment
        )
        if excluded:
            conflict = pos
            break

    if not positives and (annihilated is not None or steps):
        notes.append("no positive constraint present; nothing to contradict")

    return DerivationTrace(
        tuple(sorted(start.items(), key=lambda p: VARIABLES.index(p[0]))),
        tuple(steps),
        conflict,
        tuple(notes),
    )
