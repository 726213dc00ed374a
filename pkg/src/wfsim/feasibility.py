"""Exact joint-model feasibility and the behavior interchange format.

If all four outcomes (c, d, a1, b1) are absolute facts of a single run,
some distribution q over the 16 complete tuples must reproduce every
behavior row as a marginal. Deciding whether such a q exists is a linear
feasibility problem. It is solved here in exact rational arithmetic,
after snapping float probabilities to small fractions, because the
argument turns on exact zeros that float linear programming would blur.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BehaviorSyntaxError, NumericalError, RationalizationFailure
from .nogo import AssumptionSet
from .qcore import Distribution
from .scenario import SETTING_PAIRS, Behavior, Setting

#: Largest denominator accepted when snapping a float probability to a fraction.
MAX_DENOMINATOR = 10**6
#: A float must sit within this distance of its snapped fraction.
RATIONAL_ATOL = 1e-9

#: Atom component index revealed by (wing, setting): atoms are (c, d, a1, b1).
_VAR_INDEX: dict[tuple[int, Setting], int] = {
    (0, Setting.ASK): 0,
    (1, Setting.ASK): 1,
    (0, Setting.UNDO_PM): 2,
    (1, Setting.UNDO_PM): 3,
}

_ATOM_VARS = ("c", "d", "a1", "b1")

Atom = tuple[str, str, str, str]
EntryRef = tuple[tuple[Setting, Setting], tuple[str, str]]


def rationalize(p: float) -> Fraction:
    """Snap a float probability to a fraction with a small denominator."""
    frac = Fraction(p).limit_denominator(MAX_DENOMINATOR)
    if abs(p - float(frac)) > RATIONAL_ATOL:
        raise RationalizationFailure(
            f"{p!r} is not within {RATIONAL_ATOL} of any fraction "
            f"with denominator <= {MAX_DENOMINATOR}"
        )
    return frac


def describe_entry(ref: EntryRef) -> str:
    (sx, sy), (a, b) = ref
    return f"p({a},{b}|{sx.word},{sy.word})"


def describe_atom(atom: Atom) -> str:
    inner = ",".join(f"{var}={label}" for var, label in zip(_ATOM_VARS, atom))
    return f"({inner})"


def _alphabet(b: Behavior, wing: int, setting: Setting) -> tuple[str, str]:
    default = ("0", "1") if setting is Setting.ASK else ("+", "-")
    return b.alphabets.get((wing, setting), default)


def _entry_matches(atom: Atom, ref: EntryRef) -> bool:
    (sx, sy), (a, b) = ref
    return atom[_VAR_INDEX[(0, sx)]] == a and atom[_VAR_INDEX[(1, sy)]] == b


@dataclass(frozen=True, eq=False)
class JointModel:
    """Exact distribution over all 16 complete outcome tuples."""

    entries: dict[Atom, Fraction]

    def __post_init__(self):
        for atom, value in self.entries.items():
            if value < 0:
                raise ValueError(f"negative weight {value} on atom {describe_atom(atom)}")
        total = sum(self.entries.values())
        if abs(float(total) - 1.0) > 1e-9:
            raise ValueError(f"joint model sums to {float(total)!r}, not 1")

    def behavior_entry(self, ref: EntryRef) -> Fraction:
        """Marginal probability this model assigns to one behavior entry."""
        return sum(
            (v for atom, v in self.entries.items() if _entry_matches(atom, ref)),
            Fraction(0),
        )


@dataclass(frozen=True)
class CoverItem:
    """One support atom of the positive entry and the zero entry excluding it."""

    atom: Atom
    zero_entry: EntryRef


@dataclass(frozen=True, eq=False)
class Certificate:
    """Proof of infeasibility.

    The preferred form is a cover: one positive behavior entry each of whose
    support atoms is forced to zero by some zero entry. When no such cover
    exists the fallback is a dual (Farkas) vector y with y.A <= 0 on every
    atom column yet y.b > 0.
    """

    kind: str
    positive_entry: EntryRef | None = None
    positive_value: Fraction | None = None
    cover: tuple[CoverItem, ...] = ()
    farkas: tuple[tuple[EntryRef, Fraction], ...] = ()

    def describe(self) -> list[str]:
        if self.kind == "cover":
            lines = [
                f"positive entry {describe_entry(self.positive_entry)} = "
                f"{self.positive_value} has every support atom excluded:"
            ]
            for item in self.cover:
                lines.append(
                    f"  atom {describe_atom(item.atom)} excluded by "
                    f"{describe_entry(item.zero_entry)} = 0"
                )
            return lines
        lines = ["dual certificate y with y.A <= 0 and y.b > 0; nonzero components:"]
        for ref, weight in self.farkas:
            if weight != 0:
                lines.append(f"  y[{describe_entry(ref)}] = {weight}")
        return lines


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of the joint-model feasibility decision."""

    feasible: bool
    model: JointModel | None
    certificate: Certificate | None
    assumptions: AssumptionSet
    residual: float = 0.0


def _rational_rows(b: Behavior) -> dict[EntryRef, Fraction]:
    """Snap every behavior entry to a fraction; each row must sum to exactly 1."""
    out: dict[EntryRef, Fraction] = {}
    for pair in SETTING_PAIRS:
        row = b.row(pair)
        total = Fraction(0)
        for a in _alphabet(b, 0, pair[0]):
            for bb in _alphabet(b, 1, pair[1]):
                value = rationalize(row.get((a, bb), 0.0))
                out[(pair, (a, bb))] = value
                total += value
        if total != 1:
            raise RationalizationFailure(
                f"row ({pair[0].word},{pair[1].word}) sums to {total} after rationalization"
            )
    return out


def _pivot(tab, red, basis, leave, enter):
    piv = tab[leave][enter]
    row = [v / piv for v in tab[leave]]
    tab[leave] = row
    for i in range(len(tab)):
        if i != leave and tab[i][enter] != 0:
            f = tab[i][enter]
            tab[i] = [v - f * r for v, r in zip(tab[i], row)]
    f = red[enter]
    if f != 0:
        for j in range(len(red)):
            red[j] -= f * row[j]
    basis[leave] = enter


def _phase_one(
    a_rows: list[list[Fraction]], b_vals: list[Fraction]
) -> tuple[bool, list[Fraction]]:
    """Exact phase-1 simplex with Bland's rule.

    Minimizes the sum of artificial variables for A q = b, q >= 0 with
    b >= 0. Returns (True, q) when the minimum is 0, else (False, y) where
    y is the dual infeasibility certificate.
    """
    zero, one = Fraction(0), Fraction(1)
    m, n = len(a_rows), len(a_rows[0])
    width = n + m
    tab: list[list[Fraction]] = []
    for i, row in enumerate(a_rows):
        t = list(row) + [zero] * m + [b_vals[i]]
        t[n + i] = one
        tab.append(t)
    basis = list(range(n, n + m))
    red = [zero] * (width + 1)
    for j in range(width):
        cost = one if j >= n else zero
        red[j] = cost - sum(tab[i][j] for i in range(m))
    red[width] = -sum(b_vals, zero)

    while True:
        enter = next((j for j in range(width) if red[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][width] / coef
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best, leave = ratio, i
        if leave is None:
            raise NumericalError("phase-1 objective unbounded below; inconsistent tableau")
        _pivot(tab, red, basis, leave, enter)

    objective = -red[width]
    if objective > 0:
        y = [one - red[n + i] for i in range(m)]
        return False, y
    solution = [zero] * n
    for i, var in enumerate(basis):
        if var < n:
            solution[var] = tab[i][width]
    return True, solution


def _cover_certificate(
    rational: dict[EntryRef, Fraction], atoms: list[Atom]
) -> Certificate | None:
    """First positive entry whose support atoms are all excluded by zero entries."""
    zero_refs = [ref for ref, v in rational.items() if v == 0]
    for ref, value in rational.items():
        if value == 0:
            continue
        support = [atom for atom in atoms if _entry_matches(atom, ref)]
        cover = []
        for atom in support:
            killer = next((z for z in zero_refs if _entry_matches(atom, z)), None)
            if killer is None:
                break
            cover.append(CoverItem(atom, killer))
        else:
            return Certificate("cover", ref, value, tuple(cover))
    return None


def lf_feasibility(b: Behavior) -> Verdict:
    """Decide whether one joint distribution reproduces all four rows.

    FEASIBLE verdicts carry an exact witness model with zero residual;
    INFEASIBLE verdicts carry a cover certificate when one exists, else
    the dual vector from the simplex.
    """
    rational = _rational_rows(b)
    domains = [
        _alphabet(b, 0, Setting.ASK),
        _alphabet(b, 1, Setting.ASK),
        _alphabet(b, 0, Setting.UNDO_PM),
        _alphabet(b, 1, Setting.UNDO_PM),
    ]
    atoms: list[Atom] = list(itertools.product(*domains))
    refs = list(rational)
    a_rows = [
        [Fraction(1 if _entry_matches(atom, ref) else 0) for atom in atoms] for ref in refs
    ]
    b_vals = [rational[ref] for ref in refs]

    feasible, payload = _phase_one(a_rows, b_vals)
    assumptions = AssumptionSet()
    if feasible:
        model = JointModel(dict(zip(atoms, payload)))
        for ref in refs:
            if model.behavior_entry(ref) != rational[ref]:
                raise NumericalError(
                    f"witness fails to reproduce {describe_entry(ref)}; solver bug"
                )
        return Verdict(True, model, None, assumptions, 0.0)

    certificate = _cover_certificate(rational, atoms)
    if certificate is None:
        certificate = Certificate("farkas", farkas=tuple(zip(refs, payload)))
    return Verdict(False, None, certificate, assumptions, 0.0)


# --- behavior interchange format -------------------------------------------


def parse_behavior(text: str) -> Behavior:
    """Parse the line format ``p a b | x y = value``.

    Settings are ``ask``/``undo``; outcomes are 0/1 under ask and +/- under
    undo; values are decimals or fraction literals like ``1/12``. Unlisted
    entries are 0. Every row must sum to 1 within 1e-6.
    """
    entries: dict[EntryRef, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, value_text = line.partition("=")
        if not sep:
            raise BehaviorSyntaxError(f"expected '= value' in {line!r}", lineno)
        head = head.strip()
        if not head.startswith("p ") and head != "p":
            raise BehaviorSyntaxError(f"line must start with 'p', got {line!r}", lineno)
        outcomes_part, sep, settings_part = head[1:].partition("|")
        if not sep:
            raise BehaviorSyntaxError("missing '|' between outcomes and settings", lineno)
        outcome_tokens = outcomes_part.split()
        setting_tokens = settings_part.split()
        if len(outcome_tokens) != 2 or len(setting_tokens) != 2:
            raise BehaviorSyntaxError(
                "expected two outcomes and two settings, as in 'p 0 1 | ask undo'", lineno
            )
        try:
            settings = (Setting.parse(setting_tokens[0]), Setting.parse(setting_tokens[1]))
        except Exception:
            raise BehaviorSyntaxError(
                f"settings must be ask or undo, got {setting_tokens}", lineno
            ) from None
        for wing, token in enumerate(outcome_tokens):
            allowed = ("0", "1") if settings[wing] is Setting.ASK else ("+", "-")
            if token not in allowed:
                raise BehaviorSyntaxError(
                    f"outcome {token!r} invalid under {settings[wing].word} "
                    f"(expected one of {allowed})",
                    lineno,
                )
        value_text = value_text.strip()
        try:
            if "/" in value_text:
                value = float(Fraction(value_text))
            else:
                value = float(value_text)
        except (ValueError, ZeroDivisionError):
            raise BehaviorSyntaxError(f"bad probability value {value_text!r}", lineno) from None
        if not 0.0 <= value <= 1.0:
            raise BehaviorSyntaxError(f"probability {value!r} outside [0, 1]", lineno)
        ref: EntryRef = (settings, (outcome_tokens[0], outcome_tokens[1]))
        if ref in entries:
            raise BehaviorSyntaxError(f"duplicate entry for {describe_entry(ref)}", lineno)
        entries[ref] = value

    rows: dict[tuple[Setting, Setting], Distribution] = {}
    for pair in SETTING_PAIRS:
        alpha0 = ("0", "1") if pair[0] is Setting.ASK else ("+", "-")
        alpha1 = ("0", "1") if pair[1] is Setting.ASK else ("+", "-")
        row = {
            (a, bb): entries.get((pair, (a, bb)), 0.0) for a in alpha0 for bb in alpha1
        }
        total = sum(row.values())
        if abs(total - 1.0) > 1e-6:
            raise BehaviorSyntaxError(
                f"row ({pair[0].word},{pair[1].word}) sums to {total!r}, expected 1"
            )
        rows[pair] = Distribution(row, atol=1e-5)
    alphabets = {
        (wing, setting): (("0", "1") if setting is Setting.ASK else ("+", "-"))
        for wing in (0, 1)
        for setting in Setting
    }
    return Behavior(rows, alphabets)


def format_behavior_file(b: Behavior) -> str:
    """Serialize a behavior to the interchange format (round-trips with parse)."""
    lines = []
    for pair in SETTING_PAIRS:
        row = b.row(pair)
        for (a, bb), p in row.items():
            lines.append(f"p {a} {bb} | {pair[0].word} {pair[1].word} = {p!r}")
    return "\n".join(lines) + "\n"
