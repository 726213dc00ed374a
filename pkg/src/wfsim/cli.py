"""Command-line front end.

Subcommands: run (behavior tables), verify-nogo (full derivation report),
feasibility (joint-model check on a behavior file), sample (seeded Monte
Carlo), perspectives (friend vs superobserver view). Exit codes: 0 success
with expectation met, 1 completed but expectation unmet, 2 usage or parse
error, 3 internal numerical error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .config import parse_scenario
from .errors import NumericalError, WfsimError
from .feasibility import describe_entry, lf_feasibility, parse_behavior
from .nogo import (
    EQUALITY_DEFS,
    DerivationTrace,
    check_equalities,
    implication_chain,
    locality_lift,
    observed_constraints,
)
from .qcore import canonical_phase
from .scenario import (
    SETTING_PAIRS,
    Behavior,
    Scenario,
    Setting,
    behavior_table,
    perspective_report,
    preset,
    run_setting,
    sample,
)

#: Variable names as printed in chain summaries (drop the remeasure subscript).
_DISPLAY = {"c": "c", "d": "d", "a1": "a", "b1": "b"}


def _fmt(p: float) -> str:
    """Probabilities at 12 significant digits, trailing zeros kept."""
    return f"{p:#.12g}"


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("WFSIM_NO_COLOR")


def _style(text: str, code: str) -> str:
    if _use_color():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _parse_setting_pair(text: str) -> tuple[Setting, Setting]:
    parts = text.split(",")
    if len(parts) != 2:
        raise WfsimError(f"setting must be 'x,y' with x,y in ask/undo, got {text!r}")
    return Setting.parse(parts[0]), Setting.parse(parts[1])


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if args.preset is not None:
        return preset(args.preset)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WfsimError(f"cannot read scenario file {args.config!r}: {exc.strerror}") from exc
    return parse_scenario(text)


def _print_row(settings: tuple[Setting, Setting], b: Behavior, fmt: str) -> None:
    row = b.row(settings)
    x, y = settings[0].word, settings[1].word
    if fmt == "tsv":
        for (a, bb), p in row.items():
            print(f"{x}\t{y}\t{a}\t{bb}\t{_fmt(p)}")
        return
    print(f"setting {x},{y}:")
    for (a, bb), p in row.items():
        print(f"  ({a},{bb}) {_fmt(p)}")


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    table = behavior_table(scenario)
    if args.format == "text":
        print(f"scenario: {scenario.name}")
    if args.setting is not None:
        _print_row(_parse_setting_pair(args.setting), table, args.format)
    else:
        for pair in SETTING_PAIRS:
            _print_row(pair, table, args.format)
    return 0


def _chain_summary(trace: DerivationTrace) -> str:
    hops = [f"({_DISPLAY[var]}={label})" for var, label in trace.start]
    for step in trace.steps:
        hops.append(f"({_DISPLAY[step.forced_var]}={step.forced_value})")
    return "->".join(hops)


def cmd_verify_nogo(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    table = behavior_table(scenario)
    print(f"scenario: {scenario.name}")

    checks = check_equalities(table, args.tolerance)
    print(f"equalities (tolerance {args.tolerance:g}):")
    for check in checks:
        settings, pair, _ = EQUALITY_DEFS[check.equality_id]
        entry = describe_entry((settings, pair))
        status = _style("PASS", "32") if check.passed else _style("FAIL", "31")
        print(
            f"  eq{check.equality_id} {entry} = {_fmt(check.computed)} "
            f"expected {_fmt(check.expected)} {status}"
        )

    observed = observed_constraints(table, args.tolerance)
    lifted = locality_lift(observed)
    print("lifted constraints:")
    for con in lifted:
        source = con.provenance.source_equality
        lifted_id = f"eq{source + 4}" if source is not None else "ad-hoc"
        origin = f"from eq{source}" if source is not None else "from observation"
        print(f"  {lifted_id} {con.describe()} ({origin})")

    start = {"a1": "-"}
    trace = implication_chain(lifted, start)
    print("implication chain from a=-:")
    for step in trace.steps:
        premise = ",".join(f"{_DISPLAY[var]}={label}" for var, label in step.premise)
        print(
            f"  {premise} forces {_DISPLAY[step.forced_var]}={step.forced_value} "
            f"via {step.justification.describe()}"
        )
    if trace.conflict is not None:
        print(f"  conflict: {trace.conflict.describe()}")
    else:
        print("  conflict: NONE")
    for note in trace.notes:
        print(f"  note: {note}")

    verdict = lf_feasibility(table)
    print(f"feasibility: {'FEASIBLE' if verdict.feasible else 'INFEASIBLE'}")
    print(f"assumptions: {', '.join(verdict.assumptions.enabled())}")

    confirmed = (
        all(check.passed for check in checks)
        and trace.conflict is not None
        and not verdict.feasible
    )
    if confirmed:
        line = f"VERDICT: INFEASIBLE - contradiction {_chain_summary(trace)}"
        print(_style(line, "1"))
        return 0
    print(_style("VERDICT: no contradiction derived on this scenario", "1"))
    return 1


def cmd_feasibility(args: argparse.Namespace) -> int:
    try:
        with open(args.behavior, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WfsimError(f"cannot read behavior file {args.behavior!r}: {exc.strerror}") from exc
    behavior = parse_behavior(text)
    verdict = lf_feasibility(behavior)
    if verdict.feasible:
        print("FEASIBLE")
        print("witness joint model:")
        for atom, value in verdict.model.entries.items():
            inner = ",".join(
                f"{var}={label}" for var, label in zip(("c", "d", "a1", "b1"), atom)
            )
            print(f"  q({inner}) = {value}")
        print(f"residual: {verdict.residual:g}")
        return 0
    print("INFEASIBLE")
    for line in verdict.certificate.describe():
        print(line)
    return 1


def cmd_sample(args: argparse.Namespace) -> int:
    if args.shots < 1:
        raise WfsimError(f"shots must be >= 1, got {args.shots}")
    scenario = _load_scenario(args)
    settings = _parse_setting_pair(args.setting)
    result = sample(scenario, settings, args.shots, args.seed)
    x, y = settings[0].word, settings[1].word
    if args.format == "tsv":
        for (a, bb), n in result.counts.items():
            print(f"{x}\t{y}\t{a}\t{bb}\t{n}")
        return 0
    print(f"scenario: {scenario.name}")
    print(f"setting {x},{y} shots {result.shots} seed {result.seed}")
    for (a, bb), n in result.counts.items():
        print(f"  ({a},{bb}) {n}")
    return 0


def cmd_perspectives(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    report = perspective_report(scenario)
    print(f"scenario: {scenario.name}")
    print("friend view (one definite outcome per branch):")
    for branch in report.friend_branches:
        print(f"  {branch.outcome}: {_fmt(branch.probability)}")
        state = canonical_phase(branch.system_state)
        for bits, amp in _named_amplitudes(state):
            print(f"    system {bits}: {_fmt_amp(amp)}")
    print("superobserver view (global entangled state):")
    state = canonical_phase(report.global_state)
    for bits, amp in _named_amplitudes(state):
        print(f"  {bits}: {_fmt_amp(amp)}")
    return 0


def _named_amplitudes(state) -> list[tuple[str, complex]]:
    out = []
    n = state.num_registers
    for index, amp in enumerate(state.amplitudes):
        if abs(amp) > 1e-12:
            out.append((format(index, f"0{n}b"), complex(amp)))
    return out


def _fmt_amp(amp: complex) -> str:
    if abs(amp.imag) <= 1e-12:
        return _fmt(amp.real)
    return f"{_fmt(amp.real)}{amp.imag:+#.12g}i"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wfsim",
        description="State-vector simulator and no-go analyzer for undoable-measurement experiments",
    )
    parser.add_argument("--version", action="version", version=f"wfsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_source(p: argparse.ArgumentParser) -> None:
        p.add_argument("config", nargs="?", help="scenario config file")
        p.add_argument("--preset", choices=("hardy", "single_friend", "product"))

    run_p = sub.add_parser("run", help="print the behavior table of a scenario")
    add_scenario_source(run_p)
    run_p.add_argument("--setting", help="single setting pair x,y (ask/undo)")
    run_p.add_argument("--format", choices=("text", "tsv"), default="text")
    run_p.set_defaults(func=cmd_run)

    verify_p = sub.add_parser("verify-nogo", help="check equalities, chain, and feasibility")
    add_scenario_source(verify_p)
    verify_p.add_argument("--tolerance", type=float, default=1e-10)
    verify_p.set_defaults(func=cmd_verify_nogo)

    feas_p = sub.add_parser("feasibility", help="joint-model feasibility of a behavior file")
    feas_p.add_argument("behavior", help="behavior interchange file")
    feas_p.set_defaults(func=cmd_feasibility)

    sample_p = sub.add_parser("sample", help="seeded Monte Carlo draws from one setting pair")
    add_scenario_source(sample_p)
    sample_p.add_argument("--setting", required=True, help="setting pair x,y (ask/undo)")
    sample_p.add_argument("--shots", type=int, required=True)
    sample_p.add_argument("--seed", type=int, default=0)
    sample_p.add_argument("--format", choices=("text", "tsv"), default="text")
    sample_p.set_defaults(func=cmd_sample)

    persp_p = sub.add_parser("perspectives", help="friend vs superobserver view (single wing)")
    add_scenario_source(persp_p)
    persp_p.set_defaults(func=cmd_perspectives)

    return parser


def _check_source(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if hasattr(args, "preset"):
        if args.preset is None and args.config is None:
            parser.error(f"{args.command}: give a config file or --preset")
        if args.preset is not None and args.config is not None:
            parser.error(f"{args.command}: config file and --preset are mutually exclusive")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_source(args, parser)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WfsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))
