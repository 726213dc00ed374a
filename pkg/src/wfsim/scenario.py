"""Scenario descriptions and execution.

A scenario is a set of system qubits in a prepared joint state, plus one or
two wings. Each wing is a friend who records one system qubit onto a memory
qubit, and a superobserver who later either asks the friend (reads the
memory in Z) or undoes the friend's measurement and remeasures the system
directly in the wing's remeasure basis.

Register order of the full state is systems in declared order followed by
memories in declared order.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import measurement
from .errors import (
    BadRegisterReference,
    DuplicateRegisterLabel,
    MissingSetting,
    UnknownPreset,
    UnknownSetting,
    WrongWingCount,
)
from .measurement import MemoryBinding
from .qcore import PM, Z, BasisSpec, Distribution, Ket, born_distribution, project, tensor

#: Branches below this probability are enumerated as exact zeros.
BRANCH_MIN = 1e-12

_SQRT3 = float(np.sqrt(3.0))


class Setting(Enum):
    """Superobserver protocol choice for one wing.

    ASK is conventionally written 0, UNDO_PM written 1.
    """

    ASK = 0
    UNDO_PM = 1

    @classmethod
    def parse(cls, text: str) -> Setting:
        token = text.strip().lower()
        if token in ("ask", "0"):
            return cls.ASK
        if token in ("undo", "undo_pm", "1"):
            return cls.UNDO_PM
        raise UnknownSetting(f"unknown setting {text!r}, expected ask or undo")

    @property
    def word(self) -> str:
        return "ask" if self is Setting.ASK else "undo"


#: Canonical evaluation order of the four setting pairs.
SETTING_PAIRS: tuple[tuple[Setting, Setting], ...] = (
    (Setting.ASK, Setting.ASK),
    (Setting.ASK, Setting.UNDO_PM),
    (Setting.UNDO_PM, Setting.ASK),
    (Setting.UNDO_PM, Setting.UNDO_PM),
)


@dataclass(frozen=True)
class Wing:
    """One friend-superobserver pair acting on one system qubit."""

    friend: str
    binding: MemoryBinding
    superobserver: str
    remeasure_basis: BasisSpec

    def measured(self, setting: Setting) -> tuple[str, BasisSpec]:
        """Register and basis the wing's final readout acts on."""
        if setting is Setting.ASK:
            return self.binding.memory, Z
        return self.binding.system, self.remeasure_basis

    def alphabet(self, setting: Setting) -> tuple[str, str]:
        if setting is Setting.ASK:
            return Z.labels
        return self.remeasure_basis.labels


@dataclass(frozen=True, eq=False)
class Scenario:
    """Validated immutable description of a full experiment."""

    name: str
    systems: tuple[str, ...]
    memories: tuple[str, ...]
    initial: Ket
    wings: tuple[Wing, ...]

    def __post_init__(self):
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "memories", tuple(self.memories))
        object.__setattr__(self, "wings", tuple(self.wings))
        labels = self.systems + self.memories
        if len(set(labels)) != len(labels):
            raise DuplicateRegisterLabel(f"register declared twice among {labels}")
        if not 1 <= len(self.wings) <= 2:
            raise WrongWingCount(f"scenarios support 1 or 2 wings, got {len(self.wings)}")
        if self.initial.registers != self.systems:
            raise BadRegisterReference(
                f"initial state registers {self.initial.registers} "
                f"do not match declared systems {self.systems}"
            )
        seen: set[str] = set()
        for wing in self.wings:
            b = wing.binding
            if b.system not in self.systems:
                raise BadRegisterReference(f"wing {wing.friend!r}: unknown system {b.system!r}")
            if b.memory not in self.memories:
                raise BadRegisterReference(f"wing {wing.friend!r}: unknown memory {b.memory!r}")
            if b.system in seen or b.memory in seen:
                raise BadRegisterReference(
                    f"wing {wing.friend!r} reuses a register already bound to another wing"
                )
            seen.update((b.system, b.memory))

    def full_initial(self) -> Ket:
        """Initial joint state with every memory qubit in |0>."""
        memories = Ket.from_bits(self.memories, "0" * len(self.memories))
        return tensor(self.initial, memories)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Joint outcome distributions for each setting pair, with their alphabets.

    ``rows`` maps a setting pair to a Distribution over outcome-label pairs;
    ``alphabets`` maps (wing index, setting) to that wing's outcome labels.
    """

    rows: dict[tuple[Setting, Setting], Distribution]
    alphabets: dict[tuple[int, Setting], tuple[str, str]]

    def row(self, settings: tuple[Setting, Setting]) -> Distribution:
        try:
            return self.rows[settings]
        except KeyError:
            pair = f"({settings[0].word}, {settings[1].word})"
            raise MissingSetting(f"behavior has no row for setting pair {pair}") from None

    def marginal(self, wing: int, settings: tuple[Setting, Setting]) -> dict[str, float]:
        """Marginal distribution of one wing's outcome under a setting pair."""
        out: dict[str, float] = {}
        for (a, b), p in self.row(settings).items():
            label = (a, b)[wing]
            out[label] = out.get(label, 0.0) + p
        return out

    def no_signalling_defect(self) -> float:
        """Largest change in one wing's marginal when only the other wing's setting varies."""
        worst = 0.0
        for wing in (0, 1):
            for own in Setting:
                margs = []
                for other in Setting:
                    settings = (own, other) if wing == 0 else (other, own)
                    margs.append(self.marginal(wing, settings))
                first, second = margs
                for label in set(first) | set(second):
                    delta = abs(first.get(label, 0.0) - second.get(label, 0.0))
                    worst = max(worst, delta)
        return worst


def preset(name: str) -> Scenario:
    """Built-in scenarios: hardy, single_friend, product."""
    if name == "hardy":
        amp = 1.0 / _SQRT3
        initial = Ket(("A", "B"), [amp, amp, amp, 0.0])
        return Scenario("hardy", ("A", "B"), ("MC", "MD"), initial, _two_z_wings())
    if name == "product":
        initial = Ket.from_bits(("A", "B"), "00")
        return Scenario("product", ("A", "B"), ("MC", "MD"), initial, _two_z_wings())
    if name == "single_friend":
        initial = Ket(("S",), [1 / np.sqrt(2.0), 1 / np.sqrt(2.0)])
        wing = Wing("friend", MemoryBinding("S", "M", Z), "wigner", PM)
        return Scenario("single_friend", ("S",), ("M",), initial, (wing,))
    raise UnknownPreset(f"unknown preset {name!r}, expected hardy, single_friend or product")


def _two_z_wings() -> tuple[Wing, Wing]:
    return (
        Wing("charlie", MemoryBinding("A", "MC", Z), "alice", PM),
        Wing("debbie", MemoryBinding("B", "MD", Z), "bob", PM),
    )


def _prepared_state(s: Scenario, settings: tuple[Setting, Setting]) -> Ket:
    """Record both friends, then undo on every wing that remeasures."""
    state = s.full_initial()
    for wing in s.wings:
        state = measurement.record(state, wing.binding)
    for wing, setting in zip(s.wings, settings):
        if setting is Setting.UNDO_PM:
            state = measurement.undo(state, wing.binding)
    return state


def run_setting(s: Scenario, settings: tuple[Setting, Setting]) -> Distribution:
    """Exact joint outcome distribution for one setting pair (no sampling)."""
    if len(s.wings) != 2:
        raise WrongWingCount(f"run_setting needs a 2-wing scenario, got {len(s.wings)}")
    state = _prepared_state(s, settings)
    reg0, basis0 = s.wings[0].measured(settings[0])
    reg1, basis1 = s.wings[1].measured(settings[1])
    joint: dict[tuple[str, str], float] = {}
    outer = born_distribution(state, reg0, basis0)
    for a, pa in outer.items():
        if pa <= BRANCH_MIN:
            for b in basis1.labels:
                joint[(a, b)] = 0.0
            continue
        branch, _ = project(state, reg0, basis0, a)
        inner = born_distribution(branch, reg1, basis1)
        for b, pb in inner.items():
            joint[(a, b)] = pa * pb
    return Distribution(joint)


def behavior_table(s: Scenario) -> Behavior:
    """Run all four setting pairs and assemble rows plus alphabets."""
    if len(s.wings) != 2:
        raise WrongWingCount(f"behavior_table needs a 2-wing scenario, got {len(s.wings)}")
    rows = {pair: run_setting(s, pair) for pair in SETTING_PAIRS}
    alphabets = {
        (i, setting): s.wings[i].alphabet(setting)
        for i in (0, 1)
        for setting in Setting
    }
    return Behavior(rows, alphabets)


@dataclass(frozen=True, eq=False)
class SampleResult:
    """Deterministic Monte Carlo draw from one setting pair."""

    settings: tuple[Setting, Setting]
    shots: int
    counts: dict[tuple[str, str], int]
    seed: int


def sample(s: Scenario, settings: tuple[Setting, Setting], shots: int, seed: int) -> SampleResult:
    """Draw shots outcomes by inverse CDF over the exact distribution.

    The generator is Python's Mersenne Twister, which is stable across
    platforms and versions; the same seed always gives identical counts.
    Zero-probability outcomes get zero-width buckets the inverse CDF can
    never land in, so their counts are exactly 0.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    dist = run_setting(s, settings)
    outcomes = list(dist)
    cumulative: list[float] = []
    total = 0.0
    for key in outcomes:
        total += dist[key]
        cumulative.append(total)
    positive = [i for i, key in enumerate(outcomes) if dist[key] > 0.0]
    last = positive[-1]
    rng = random.Random(seed)
    counts = {key: 0 for key in outcomes}
    for _ in range(shots):
        idx = bisect_right(cumulative, rng.random())
        if idx > last:
            idx = last
        counts[outcomes[idx]] += 1
    return SampleResult(settings, shots, counts, seed)


@dataclass(frozen=True, eq=False)
class FriendBranch:
    """One definite outcome in the friend's account, with the collapsed system."""

    outcome: str
    probability: float
    system_state: Ket


@dataclass(frozen=True, eq=False)
class PerspectiveReport:
    """The same experiment seen from inside and outside the lab.

    The friend experiences one branch with a definite outcome; the
    superobserver, before interacting, holds the unprojected entangled
    global state.
    """

    friend_branches: tuple[FriendBranch, ...]
    global_state: Ket


def perspective_report(s: Scenario) -> PerspectiveReport:
    """Contrast friend and superobserver views for a single-wing scenario."""
    if len(s.wings) != 1:
        raise WrongWingCount(f"perspective report needs exactly 1 wing, got {len(s.wings)}")
    wing = s.wings[0]
    recorded = measurement.record(s.full_initial(), wing.binding)
    dist = born_distribution(recorded, wing.binding.memory, Z)
    branches = []
    for label, p in dist.items():
        if p <= BRANCH_MIN:
            continue
        collapsed, _ = project(recorded, wing.binding.memory, Z, label)
        branches.append(FriendBranch(label, p, _drop_memory(collapsed, wing.binding.memory, label)))
    return PerspectiveReport(tuple(branches), recorded)


def _drop_memory(psi: Ket, memory: str, outcome: str) -> Ket:
    """Remove a memory register that is in the definite state |outcome>."""
    pos = psi.position(memory)
    bit = Z.labels.index(outcome)
    cube = psi.amplitudes.reshape([2] * psi.num_registers)
    rest = np.take(cube, bit, axis=pos).reshape(-1)
    registers = tuple(r for r in psi.registers if r != memory)
    return Ket(registers, rest)
