"""Parser for the line-oriented scenario config format.

Example document:

    name = hardy
    systems = A, B
    memories = MC, MD
    normalize = false
    amp 00 = 0.5773502691896258, 0.0
    amp 01 = 0.5773502691896258, 0.0
    amp 10 = 0.5773502691896258, 0.0
    wing charlie: system=A memory=MC friend_basis=Z superobserver=alice remeasure_basis=PM
    wing debbie:  system=B memory=MD friend_basis=Z superobserver=bob  remeasure_basis=PM

`#` starts a comment. Unlisted bitstrings have amplitude 0. Bases are `Z`,
`PM`, or `general(re,im re,im ; re,im re,im)` giving the two basis vectors.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import NonNormalizedState, ScenarioSyntaxError, UnknownKey
from .measurement import MemoryBinding
from .qcore import PM, Z, BasisSpec, Ket
from .scenario import Scenario, Wing

_WING_FIELDS = ("system", "memory", "friend_basis", "superobserver", "remeasure_basis")
_GENERAL_RE = re.compile(r"^general\((.+)\)$", re.IGNORECASE)


def _parse_complex(token: str, line: int) -> complex:
    parts = token.split(",")
    if len(parts) != 2:
        raise ScenarioSyntaxError(f"expected re,im pair, got {token!r}", line)
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ScenarioSyntaxError(f"bad number in {token!r}", line) from None


def parse_basis(text: str, line: int = 0) -> BasisSpec:
    """Parse a basis token: Z, PM, or general(...) with explicit vectors."""
    token = text.strip()
    upper = token.upper()
    if upper == "Z":
        return Z
    if upper == "PM":
        return PM
    match = _GENERAL_RE.match(token)
    if not match:
        raise ScenarioSyntaxError(f"unknown basis {text!r}", line)
    halves = match.group(1).split(";")
    if len(halves) != 2:
        raise ScenarioSyntaxError("general basis needs two vectors separated by ';'", line)
    vectors = []
    for half in halves:
        entries = half.split()
        if len(entries) != 2:
            raise ScenarioSyntaxError(
                f"basis vector needs two re,im entries, got {half.strip()!r}", line
            )
        vectors.append([_parse_complex(entry, line) for entry in entries])
    return BasisSpec.general(vectors[0], vectors[1])


def _split_labels(value: str, line: int) -> tuple[str, ...]:
    labels = tuple(part.strip() for part in value.split(","))
    if not labels or any(not lab for lab in labels):
        raise ScenarioSyntaxError(f"bad register list {value!r}", line)
    return labels


def _wing_tokens(fields_text: str) -> list[str]:
    # general(...) basis values contain spaces; keep parenthesized runs whole
    tokens: list[str] = []
    depth = 0
    for piece in fields_text.split():
        if depth > 0 and tokens:
            tokens[-1] += " " + piece
        else:
            tokens.append(piece)
        depth += piece.count("(") - piece.count(")")
    return tokens


def _parse_wing(rest: str, line: int) -> Wing:
    head, sep, fields_text = rest.partition(":")
    name = head.strip()
    if not sep or not name:
        raise ScenarioSyntaxError("wing line needs 'wing NAME: field=value ...'", line)
    fields: dict[str, str] = {}
    for token in _wing_tokens(fields_text):
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise ScenarioSyntaxError(f"expected field=value, got {token!r}", line)
        if key not in _WING_FIELDS:
            raise UnknownKey(f"unknown wing field {key!r}", line)
        if key in fields:
            raise ScenarioSyntaxError(f"duplicate wing field {key!r}", line)
        fields[key] = value
    for required in ("system", "memory"):
        if required not in fields:
            raise ScenarioSyntaxError(f"wing {name!r} is missing {required}=", line)
    binding = MemoryBinding(
        fields["system"],
        fields["memory"],
        parse_basis(fields.get("friend_basis", "Z"), line),
    )
    return Wing(
        friend=name,
        binding=binding,
        superobserver=fields.get("superobserver", "observer"),
        remeasure_basis=parse_basis(fields.get("remeasure_basis", "PM"), line),
    )


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario config document into a validated Scenario."""
    name = "scenario"
    systems: tuple[str, ...] | None = None
    memories: tuple[str, ...] | None = None
    normalize = False
    amps: list[tuple[int, str, complex]] = []
    wings: list[Wing] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("wing ") or line == "wing":
            wings.append(_parse_wing(line[4:], lineno))
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not value:
            raise ScenarioSyntaxError(f"expected 'key = value', got {line!r}", lineno)
        if key == "name":
            name = value
        elif key == "systems":
            systems = _split_labels(value, lineno)
        elif key == "memories":
            memories = _split_labels(value, lineno)
        elif key == "normalize":
            flag = value.lower()
            if flag not in ("true", "false"):
                raise ScenarioSyntaxError(f"normalize must be true or false, got {value!r}", lineno)
            normalize = flag == "true"
        elif key.startswith("amp ") and len(key.split()) == 2:
            bits = key.split()[1]
            if set(bits) - {"0", "1"}:
                raise ScenarioSyntaxError(f"bad bitstring {bits!r}", lineno)
            amps.append((lineno, bits, _parse_complex(value, lineno)))
        else:
            raise UnknownKey(f"unknown key {key.split()[0]!r}", lineno)

    if systems is None:
        raise ScenarioSyntaxError("missing 'systems =' declaration")
    if memories is None:
        raise ScenarioSyntaxError("missing 'memories =' declaration")
    if not amps:
        raise ScenarioSyntaxError("no 'amp BITS =' lines; the initial state is undefined")

    vector = np.zeros(1 << len(systems), dtype=np.complex128)
    seen_bits: set[str] = set()
    for lineno, bits, value in amps:
        if len(bits) != len(systems):
            raise ScenarioSyntaxError(
                f"bitstring {bits!r} does not match {len(systems)} system registers", lineno
            )
        if bits in seen_bits:
            raise ScenarioSyntaxError(f"amplitude for {bits!r} given twice", lineno)
        seen_bits.add(bits)
        vector[int(bits, 2)] = value

    if normalize:
        initial = Ket.normalized(systems, vector)
    else:
        norm_sq = float(np.sum(np.abs(vector) ** 2))
        if abs(norm_sq - 1.0) > 1e-9:
            raise NonNormalizedState(
                f"amplitudes have squared norm {norm_sq!r}; add 'normalize = true' to rescale"
            )
        initial = Ket(systems, vector)

    return Scenario(name, systems, memories, initial, tuple(wings))
