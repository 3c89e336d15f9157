import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import ConfigurationError
from cost import TIERS, CostProfile, assign_tier, explanation_cost, validate_thresholds

rates = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestExplanationCost:
    @pytest.mark.parametrize("mean_words, per_call, expected", [(63, 1, 64), (9, 1, 10), (9, 2, 20)])
    def test_examples(self, mean_words, per_call, expected):
        assert explanation_cost(mean_words, per_call) == expected

    def test_linear_in_per_call_cost(self):
        assert explanation_cost(17.5, 0.22) == pytest.approx(2 * explanation_cost(17.5, 0.11))

    @pytest.mark.parametrize("mean_words, per_call", [(0, 1), (5, 0), (-1, 2)])
    def test_non_positive_inputs(self, mean_words, per_call):
        with pytest.raises(ValueError):
            explanation_cost(mean_words, per_call)

    def test_profile(self):
        profile = CostProfile("llama-70b", 63.0, 9.9)
        assert profile.cost_multiplier == pytest.approx(633.6)
        assert profile.to_dict()["cost_multiplier"] == pytest.approx(633.6)


class TestTiers:
    @pytest.mark.parametrize("rate, tier", [(0.083, "regulatory"), (0.149, "balanced"), (0.470, "speed_first"),
                                            (0.10, "balanced"), (0.20, "speed_first"), (0.0, "regulatory")])
    def test_default_thresholds(self, rate, tier):
        assignment = assign_tier(rate)
        assert assignment.tier == tier
        assert assignment.thresholds == (0.10, 0.20)

    def test_custom_thresholds_are_echoed(self):
        assignment = assign_tier(0.149, (0.15, 0.30))
        assert assignment.tier == "regulatory"
        assert assignment.to_dict() == {"tier": "regulatory", "basis": 0.149, "thresholds": [0.15, 0.30]}

    @pytest.mark.parametrize("thresholds", [(0.2, 0.1), (0.0, 0.5), (0.1, 1.0), (0.1,), (0.1, 0.1)])
    def test_malformed_thresholds(self, thresholds):
        with pytest.raises(ConfigurationError):
            validate_thresholds(thresholds)

    def test_rate_outside_unit_interval(self):
        with pytest.raises(ValueError):
            assign_tier(1.2)

    @given(rates, rates)
    @settings(max_examples=200, deadline=None)
    def test_monotone(self, a, b):
        low, high = sorted((a, b))
        assert TIERS.index(assign_tier(low).tier) <= TIERS.index(assign_tier(high).tier)
