"""Merit figure and ranking tests.

Hand-checked anchors: averaging (88.84, 100, 83.13, 83.29, 88.85) gives
88.822, averaging (67.95, 91.04, 68.56, 98.14, 80.89) gives 81.316, and
averaging (49.05, 80.96, 88.08, 98.44, 65.64) gives 76.434.
"""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from evhres.criteria import CriteriaScores
from evhres.dispatch import Configuration
from evhres.errors import InvalidParameterError
from evhres.mcdm import (
    EQUAL_WEIGHTS,
    WeightVector,
    format_percent,
    merit_figure,
    rank_designs,
)

score_values = st.floats(0.0, 1.0)


def scores(*values) -> CriteriaScores:
    return CriteriaScores(*[v / 100.0 for v in values])


class TestMeritFigure:
    def test_equal_scores_pass_through(self):
        s = CriteriaScores(0.7, 0.7, 0.7, 0.7, 0.7)
        w = WeightVector(0.5, 0.1, 0.1, 0.2, 0.1)
        assert merit_figure(s, w) == pytest.approx(0.7)

    @pytest.mark.parametrize("row,expected", [
        ((88.84, 100.00, 83.13, 83.29, 88.85), 88.82),
        ((67.95, 91.04, 68.56, 98.14, 80.89), 81.32),
        ((49.05, 80.96, 88.08, 98.44, 65.64), 76.43),
    ])
    def test_hand_verified_rows(self, row, expected):
        cp = merit_figure(scores(*row), EQUAL_WEIGHTS) * 100.0
        assert cp == pytest.approx(expected, abs=0.01)

    def test_weights_not_summing_to_one_rejected(self):
        with pytest.raises(InvalidParameterError):
            WeightVector(0.3, 0.3, 0.3, 0.3, 0.3)

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidParameterError):
            WeightVector(-0.2, 0.4, 0.2, 0.3, 0.3)

    @settings(max_examples=50, deadline=None)
    @given(values=st.tuples(*([score_values] * 5)))
    def test_merit_within_score_envelope(self, values):
        s = CriteriaScores(*values)
        cp = merit_figure(s, EQUAL_WEIGHTS)
        assert min(values) - 1e-12 <= cp <= max(values) + 1e-12


class TestRanking:
    def _candidates(self):
        rows = [
            ("a", (88.84, 100.00, 83.13, 83.29, 88.85), 1000.0),
            ("b", (67.95, 91.04, 68.56, 98.14, 80.89), 2000.0),
            ("c", (49.05, 80.96, 88.08, 98.44, 65.64), 500.0),
        ]
        return [
            (Configuration(pv_kw=float(i + 1), label=label), scores(*row), npc_eur)
            for i, (label, row, npc_eur) in enumerate(rows)
        ]

    def test_descending_merit_order(self):
        ranked = rank_designs(self._candidates(), EQUAL_WEIGHTS)
        assert [d.configuration.label for d in ranked] == ["a", "b", "c"]
        assert [d.rank for d in ranked] == [1, 2, 3]
        assert all(x.cp >= y.cp for x, y in zip(ranked, ranked[1:]))

    def test_single_candidate_ranks_first(self):
        only = self._candidates()[:1]
        ranked = rank_designs(only, EQUAL_WEIGHTS)
        assert len(ranked) == 1 and ranked[0].rank == 1

    def test_empty_input_rejected(self):
        with pytest.raises(InvalidParameterError):
            rank_designs([], EQUAL_WEIGHTS)

    def test_input_permutation_does_not_change_ranks(self):
        candidates = self._candidates()
        forward = rank_designs(candidates, EQUAL_WEIGHTS)
        backward = rank_designs(list(reversed(candidates)), EQUAL_WEIGHTS)
        assert [d.configuration.label for d in forward] == [d.configuration.label for d in backward]

    def test_merit_ties_break_on_lower_npc(self):
        same = (50.0, 50.0, 50.0, 50.0, 50.0)
        candidates = [
            (Configuration(pv_kw=1.0, label="pricey"), scores(*same), 900.0),
            (Configuration(pv_kw=2.0, label="cheap"), scores(*same), 100.0),
        ]
        ranked = rank_designs(candidates, EQUAL_WEIGHTS)
        assert ranked[0].configuration.label == "cheap"

    @settings(max_examples=25, deadline=None)
    @given(factor=st.floats(0.1, 1.0))
    def test_common_scaling_preserves_order(self, factor):
        """Multiplying every score by one positive constant reorders nothing."""
        base = rank_designs(self._candidates(), EQUAL_WEIGHTS)
        scaled = [
            (cfg, CriteriaScores(*[v * factor for v in s.as_tuple()]), npc_eur)
            for cfg, s, npc_eur in self._candidates()
        ]
        ranked = rank_designs(scaled, EQUAL_WEIGHTS)
        assert [d.configuration.label for d in ranked] == [d.configuration.label for d in base]

    def test_weight_shift_favors_the_specialist(self):
        """Pushing weight onto one criterion never drops the candidate that
        leads on it below the candidate that trails on it."""
        specialist = scores(90.0, 50.0, 50.0, 50.0, 50.0)
        laggard = scores(10.0, 50.0, 50.0, 50.0, 50.0)
        candidates = [
            (Configuration(pv_kw=1.0, label="specialist"), specialist, None),
            (Configuration(pv_kw=2.0, label="laggard"), laggard, None),
        ]
        heavy = WeightVector(0.6, 0.1, 0.1, 0.1, 0.1)
        ranked = rank_designs(candidates, heavy)
        assert ranked[0].configuration.label == "specialist"


class TestPercentRendering:
    def test_half_up_two_decimals(self):
        assert format_percent(0.88825) == "88.83"
        assert format_percent(0.888249) == "88.82"
        assert format_percent(1.0) == "100.00"
