"""Scenario engine: presets, behavior tables, sampling, perspectives."""

from __future__ import annotations

import numpy as np
import pytest

import oracles
from conftest import (
    bell_scenario,
    random_basis,
    random_ket,
    random_two_wing_scenario,
    rational_two_wing_scenario,
    two_wing_scenario,
)
from wfsim import (
    PM,
    Z,
    BadRegisterReference,
    Ket,
    MemoryBinding,
    MissingSetting,
    Scenario,
    Setting,
    SETTING_PAIRS,
    UnknownPreset,
    UnknownSetting,
    Wing,
    WrongWingCount,
    behavior_table,
    born_distribution,
    fidelity,
    perspective_report,
    preset,
    record,
    run_setting,
    sample,
)

HARDY_ROWS = {
    (Setting.ASK, Setting.ASK): {
        ("0", "0"): 1 / 3, ("0", "1"): 1 / 3, ("1", "0"): 1 / 3, ("1", "1"): 0.0,
    },
    (Setting.ASK, Setting.UNDO_PM): {
        ("0", "+"): 2 / 3, ("0", "-"): 0.0, ("1", "+"): 1 / 6, ("1", "-"): 1 / 6,
    },
    (Setting.UNDO_PM, Setting.ASK): {
        ("+", "0"): 2 / 3, ("+", "1"): 1 / 6, ("-", "0"): 0.0, ("-", "1"): 1 / 6,
    },
    (Setting.UNDO_PM, Setting.UNDO_PM): {
        ("+", "+"): 3 / 4, ("+", "-"): 1 / 12, ("-", "+"): 1 / 12, ("-", "-"): 1 / 12,
    },
}


class TestSetting:
    def test_parse_words_and_digits(self):
        assert Setting.parse("ask") is Setting.ASK
        assert Setting.parse("0") is Setting.ASK
        assert Setting.parse("undo") is Setting.UNDO_PM
        assert Setting.parse("1") is Setting.UNDO_PM

    def test_parse_rejects_unknown(self):
        with pytest.raises(UnknownSetting):
            Setting.parse("both")


class TestPresets:
    def test_hardy_amplitudes(self, hardy):
        inv_sqrt3 = 1 / np.sqrt(3)
        assert hardy.initial.amplitude("00") == pytest.approx(inv_sqrt3)
        assert hardy.initial.amplitude("01") == pytest.approx(inv_sqrt3)
        assert hardy.initial.amplitude("10") == pytest.approx(inv_sqrt3)
        assert hardy.initial.amplitude("11") == 0.0

    def test_product_amplitudes(self, product):
        assert product.initial.amplitude("00") == 1.0

    def test_single_friend_shape(self):
        s = preset("single_friend")
        assert len(s.wings) == 1
        assert s.initial.amplitude("0") == pytest.approx(1 / np.sqrt(2))

    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            preset("bogus")


class TestScenarioValidation:
    def test_wing_with_undeclared_system(self):
        wing = Wing("f", MemoryBinding("X", "MC", Z), "o", PM)
        with pytest.raises(BadRegisterReference):
            Scenario("bad", ("A", "B"), ("MC", "MD"), Ket.from_bits(("A", "B"), "00"), (wing,))

    def test_initial_registers_must_match_systems(self):
        wing = Wing("f", MemoryBinding("A", "MC", Z), "o", PM)
        with pytest.raises(BadRegisterReference):
            Scenario("bad", ("A", "B"), ("MC",), Ket.from_bits(("A", "C"), "00"), (wing,))

    def test_too_many_wings(self):
        wings = tuple(
            Wing(f"f{i}", MemoryBinding(s, m, Z), "o", PM)
            for i, (s, m) in enumerate((("A", "MA"), ("B", "MB"), ("C", "MC")))
        )
        with pytest.raises(WrongWingCount):
            Scenario(
                "bad",
                ("A", "B", "C"),
                ("MA", "MB", "MC"),
                Ket.from_bits(("A", "B", "C"), "000"),
                wings,
            )

    def test_register_reuse_across_wings(self):
        wings = (
            Wing("f0", MemoryBinding("A", "MC", Z), "o", PM),
            Wing("f1", MemoryBinding("A", "MD", Z), "o", PM),
        )
        with pytest.raises(BadRegisterReference):
            Scenario("bad", ("A", "B"), ("MC", "MD"), Ket.from_bits(("A", "B"), "00"), wings)


class TestRunSetting:
    def test_hardy_rows_match_frozen_rationals(self, hardy):
        for pair, expected in HARDY_ROWS.items():
            row = run_setting(hardy, pair)
            for outcome, p in expected.items():
                assert row[outcome] == pytest.approx(p, abs=1e-12), (pair, outcome)

    def test_hardy_matches_independent_oracle(self, hardy):
        oracle_rows = oracles.behavior_rows(oracles.hardy_state())
        for pair in SETTING_PAIRS:
            row = run_setting(hardy, pair)
            oracle_row = oracle_rows[(pair[0].word, pair[1].word)]
            for outcome, p in oracle_row.items():
                assert row[outcome] == pytest.approx(p, abs=1e-12)

    def test_random_scenarios_match_oracle(self, rng):
        for _ in range(10):
            s = random_two_wing_scenario(rng)
            oracle_rows = oracles.behavior_rows(s.initial.amplitudes)
            for pair in SETTING_PAIRS:
                row = run_setting(s, pair)
                oracle_row = oracle_rows[(pair[0].word, pair[1].word)]
                for outcome, p in oracle_row.items():
                    assert row[outcome] == pytest.approx(p, abs=1e-12)

    def test_exact_zeros_are_exact(self, hardy):
        assert run_setting(hardy, (Setting.ASK, Setting.ASK))[("1", "1")] == 0.0
        assert run_setting(hardy, (Setting.ASK, Setting.UNDO_PM))[("0", "-")] == 0.0
        assert run_setting(hardy, (Setting.UNDO_PM, Setting.ASK))[("-", "0")] == 0.0

    def test_single_wing_rejected(self):
        with pytest.raises(WrongWingCount):
            run_setting(preset("single_friend"), (Setting.ASK, Setting.ASK))

    def test_record_order_is_irrelevant(self, hardy):
        state = hardy.full_initial()
        forward = record(record(state, hardy.wings[0].binding), hardy.wings[1].binding)
        backward = record(record(state, hardy.wings[1].binding), hardy.wings[0].binding)
        assert fidelity(forward, backward) >= 1 - 1e-12


class TestBehavior:
    def test_rows_sum_to_one(self, hardy):
        table = behavior_table(hardy)
        for pair in SETTING_PAIRS:
            assert sum(table.row(pair).values()) == pytest.approx(1.0, abs=1e-12)

    def test_alphabets(self, hardy):
        table = behavior_table(hardy)
        assert table.alphabets[(0, Setting.ASK)] == ("0", "1")
        assert table.alphabets[(1, Setting.UNDO_PM)] == ("+", "-")

    def test_missing_row_raises(self, hardy):
        table = behavior_table(hardy)
        partial = type(table)(
            {pair: table.rows[pair] for pair in SETTING_PAIRS[:3]}, table.alphabets
        )
        with pytest.raises(MissingSetting):
            partial.row(SETTING_PAIRS[3])

    def test_exchange_symmetry_of_hardy(self, hardy):
        """The initial state is symmetric under swapping wings."""
        table = behavior_table(hardy)
        ask_undo = table.row((Setting.ASK, Setting.UNDO_PM))
        undo_ask = table.row((Setting.UNDO_PM, Setting.ASK))
        for (a, b), p in ask_undo.items():
            assert undo_ask[(b, a)] == pytest.approx(p, abs=1e-12)

    def test_no_signalling_presets(self, hardy, product):
        assert behavior_table(hardy).no_signalling_defect() <= 1e-12
        assert behavior_table(product).no_signalling_defect() <= 1e-12

    def test_no_signalling_random(self, rng):
        for _ in range(5):
            s = random_two_wing_scenario(rng)
            assert behavior_table(s).no_signalling_defect() <= 1e-12


class TestSample:
    def test_determinism(self, hardy):
        a = sample(hardy, (Setting.UNDO_PM, Setting.UNDO_PM), 2000, 99)
        b = sample(hardy, (Setting.UNDO_PM, Setting.UNDO_PM), 2000, 99)
        assert a.counts == b.counts
        assert a.seed == b.seed == 99

    def test_zero_probability_never_drawn(self, hardy):
        result = sample(hardy, (Setting.ASK, Setting.ASK), 50000, 7)
        assert result.counts[("1", "1")] == 0
        assert sum(result.counts.values()) == 50000

    def test_counts_cover_all_outcomes(self, hardy):
        result = sample(hardy, (Setting.UNDO_PM, Setting.UNDO_PM), 100, 5)
        assert set(result.counts) == {
            ("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"),
        }

    def test_frequencies_within_binomial_bound(self, hardy):
        shots = 100000
        result = sample(hardy, (Setting.UNDO_PM, Setting.UNDO_PM), shots, 2024)
        row = run_setting(hardy, (Setting.UNDO_PM, Setting.UNDO_PM))
        for outcome, p in row.items():
            sigma = np.sqrt(p * (1 - p) / shots)
            freq = result.counts[outcome] / shots
            assert abs(freq - p) <= 4 * sigma + 1e-12, outcome

    def test_rejects_zero_shots(self, hardy):
        with pytest.raises(ValueError):
            sample(hardy, (Setting.ASK, Setting.ASK), 0, 1)


class TestPerspectives:
    def test_single_friend_branches(self):
        report = perspective_report(preset("single_friend"))
        outcomes = {b.outcome: b for b in report.friend_branches}
        assert outcomes["0"].probability == pytest.approx(0.5, abs=1e-12)
        assert outcomes["1"].probability == pytest.approx(0.5, abs=1e-12)
        assert outcomes["0"].system_state.amplitude("0") == pytest.approx(1.0)
        assert outcomes["1"].system_state.amplitude("1") == pytest.approx(1.0)
        inv_sqrt2 = 1 / np.sqrt(2)
        assert report.global_state.amplitude("00") == pytest.approx(inv_sqrt2, abs=1e-12)
        assert report.global_state.amplitude("11") == pytest.approx(inv_sqrt2, abs=1e-12)

    def test_eigenstate_single_branch(self):
        wing = Wing("friend", MemoryBinding("S", "M", Z), "wigner", PM)
        s = Scenario("e", ("S",), ("M",), Ket.from_bits(("S",), "0"), (wing,))
        report = perspective_report(s)
        assert len(report.friend_branches) == 1
        assert report.friend_branches[0].outcome == "0"
        assert report.global_state.amplitude("00") == pytest.approx(1.0)

    def test_friend_view_matches_born_rule(self, rng):
        for _ in range(50):
            system = random_ket(rng, ("S",))
            wing = Wing("friend", MemoryBinding("S", "M", Z), "wigner", PM)
            s = Scenario("r", ("S",), ("M",), system, (wing,))
            report = perspective_report(s)
            direct = born_distribution(system, "S", Z)
            for branch in report.friend_branches:
                assert branch.probability == pytest.approx(direct[branch.outcome], abs=1e-12)

    def test_two_wing_scenario_rejected(self, hardy):
        with pytest.raises(WrongWingCount):
            perspective_report(hardy)


class TestCorpusScenarios:
    def test_bell_rows(self):
        table = behavior_table(bell_scenario())
        row = table.row((Setting.ASK, Setting.ASK))
        assert row[("0", "0")] == pytest.approx(0.5, abs=1e-12)
        assert row[("0", "1")] == pytest.approx(0.0, abs=1e-12)
        undo_row = table.row((Setting.UNDO_PM, Setting.UNDO_PM))
        assert undo_row[("+", "+")] == pytest.approx(0.5, abs=1e-12)
        assert undo_row[("+", "-")] == pytest.approx(0.0, abs=1e-12)

    def test_rational_scenarios_match_oracle(self):
        for seed in range(5):
            s = rational_two_wing_scenario(seed)
            oracle_rows = oracles.behavior_rows(s.initial.amplitudes)
            for pair in SETTING_PAIRS:
                row = run_setting(s, pair)
                for outcome, p in oracle_rows[(pair[0].word, pair[1].word)].items():
                    assert row[outcome] == pytest.approx(p, abs=1e-12)

    def test_general_remeasure_basis_runs(self, rng):
        s = two_wing_scenario(
            random_ket(rng, ("A", "B")), "general", remeasure=(random_basis(rng), PM)
        )
        table = behavior_table(s)
        assert table.no_signalling_defect() <= 1e-12
