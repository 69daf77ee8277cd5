import io
import random

import pytest

from normcast import (
    ConfidentThresholdPolicy,
    ContextualThresholdPolicy,
    HardThresholdPolicy,
    HardThresholds,
    InvalidConfidenceError,
    MissingConfidenceError,
    NormOutcome,
    Prediction,
    PredictionRegime,
    RegimeThresholds,
    classify_regime,
    confident_thresholds,
    hard_threshold_norm,
    infer_norm,
    norm_for_value,
    write_norm_records,
)

QUARTER = HardThresholds(-0.25, 0.25)


class TestHardThresholdNorm:
    def test_strong_disapproval_prohibited(self):
        assert hard_threshold_norm("x", -0.6, QUARTER).outcome is NormOutcome.PROHIBITION

    def test_neutral_unregulated(self):
        assert hard_threshold_norm("x", 0.0, QUARTER).outcome is NormOutcome.NO_NORM

    def test_permission_boundary_inclusive(self):
        assert hard_threshold_norm("x", 0.25, QUARTER).outcome is NormOutcome.PERMISSION

    def test_prohibition_boundary_inclusive(self):
        assert hard_threshold_norm("x", -0.25, QUARTER).outcome is NormOutcome.PROHIBITION

    def test_trichotomy(self):
        rng = random.Random(3)
        for _ in range(2000):
            t = HardThresholds(rng.uniform(-1, 0), rng.uniform(0, 1))
            p = rng.uniform(-1, 1)
            decision = hard_threshold_norm("x", p, t)
            matches = [
                p <= t.eps_prh,
                t.eps_prh < p < t.eps_per,
                p >= t.eps_per,
            ]
            assert sum(matches) == 1
            expected = [
                NormOutcome.PROHIBITION,
                NormOutcome.NO_NORM,
                NormOutcome.PERMISSION,
            ][matches.index(True)]
            assert decision.outcome is expected

    def test_records_inputs(self):
        d = hard_threshold_norm("x3", -0.6, QUARTER)
        assert d.element == "x3"
        assert d.preference_used == -0.6
        assert d.thresholds_used == (-0.25, 0.25)
        assert d.norm is not None and d.norm.element == "x3"


class TestHardThresholds:
    @pytest.mark.parametrize("prh,per", [(0.1, 0.5), (-1.5, 0.5), (-0.5, -0.1), (-0.5, 1.1)])
    def test_out_of_range(self, prh, per):
        with pytest.raises(ValueError):
            HardThresholds(prh, per)

    def test_degenerate_pair_warns_and_regulates_everything(self):
        with pytest.warns(UserWarning, match="degenerate"):
            t = HardThresholds(0.0, 0.0)
        assert hard_threshold_norm("x", 0.0, t).outcome is not NormOutcome.NO_NORM
        assert hard_threshold_norm("x", 0.5, t).outcome is NormOutcome.PERMISSION
        assert hard_threshold_norm("x", -0.5, t).outcome is NormOutcome.PROHIBITION


class TestConfidentThresholds:
    def test_full_confidence(self):
        prh, per = confident_thresholds(1.0)
        assert prh == pytest.approx(-2 / 3, abs=1e-12)
        assert per == pytest.approx(1 / 3, abs=1e-12)

    def test_zero_confidence(self):
        assert confident_thresholds(0.0) == (-1.0, 1.0)

    def test_half_confidence(self):
        prh, per = confident_thresholds(0.5)
        assert prh == pytest.approx(-5 / 6, abs=1e-12)
        assert per == pytest.approx(2 / 3, abs=1e-12)

    def test_matches_formulas_on_dense_grid(self):
        for i in range(1001):
            conf = i / 1000
            prh, per = confident_thresholds(conf)
            assert abs(prh - (-1.0 + conf / 3.0)) <= 1e-12
            assert abs(per - (1.0 - 2.0 * conf / 3.0)) <= 1e-12
            assert -1.0 <= prh <= -2 / 3 + 1e-12
            assert 1 / 3 - 1e-12 <= per <= 1.0

    @pytest.mark.parametrize("conf", [-0.01, 1.01, 2.0])
    def test_out_of_range(self, conf):
        with pytest.raises(InvalidConfidenceError):
            confident_thresholds(conf)


class TestInferNorm:
    def test_confident_prohibition(self):
        pred = Prediction(user="u1", element="x3", value=-1.0, confidence=1.0)
        d = infer_norm(pred, ConfidentThresholdPolicy())
        assert d.outcome is NormOutcome.PROHIBITION
        assert d.thresholds_used[0] == pytest.approx(-2 / 3)

    def test_neutral_value_never_regulated(self):
        pred = Prediction(user="u", element="x", value=0.0, confidence=0.7)
        assert infer_norm(pred, ConfidentThresholdPolicy()).outcome is NormOutcome.NO_NORM
        assert infer_norm(pred, HardThresholdPolicy(QUARTER)).outcome is NormOutcome.NO_NORM

    def test_extreme_value_at_zero_confidence(self):
        pred = Prediction(user="u", element="x", value=1.0, confidence=0.0)
        assert infer_norm(pred, ConfidentThresholdPolicy()).outcome is NormOutcome.PERMISSION

    def test_missing_confidence(self):
        pred = Prediction(user="u", element="x", value=-1.0, confidence=None)
        with pytest.raises(MissingConfidenceError):
            infer_norm(pred, ConfidentThresholdPolicy())

    def test_monotone_in_confidence(self):
        # once a value produces a norm, more confidence cannot retract it
        rng = random.Random(4)
        policy = ConfidentThresholdPolicy()
        for _ in range(1000):
            value = rng.uniform(-1, 1)
            lo = rng.uniform(0, 1)
            hi = rng.uniform(lo, 1)
            out_lo = norm_for_value("x", value, lo, policy).outcome
            out_hi = norm_for_value("x", value, hi, policy).outcome
            if out_lo is NormOutcome.PROHIBITION:
                assert out_hi is NormOutcome.PROHIBITION
            if out_lo is NormOutcome.PERMISSION:
                assert out_hi is NormOutcome.PERMISSION


class TestPolicies:
    def test_hard_policy_is_constant(self):
        policy = HardThresholdPolicy(QUARTER)
        assert policy.thresholds() == (-0.25, 0.25)
        assert policy.thresholds(confidence=0.9) == (-0.25, 0.25)
        assert not policy.requires_confidence

    def test_contextual_lookup_and_default(self):
        policy = ContextualThresholdPolicy(
            {"sensitivity": {"sensitive": (-0.1, 0.9), "normal": (-0.5, 0.5)}},
            default=(-1.0, 1.0),
        )
        assert policy.thresholds(context_vars={"sensitivity": "sensitive"}) == (-0.1, 0.9)
        assert policy.thresholds(context_vars={"sensitivity": "normal"}) == (-0.5, 0.5)
        assert policy.thresholds(context_vars={"sensitivity": "odd"}) == (-1.0, 1.0)
        assert policy.thresholds(context_vars={}) == (-1.0, 1.0)
        assert policy.thresholds() == (-1.0, 1.0)

    def test_contextual_first_matching_variable_wins(self):
        policy = ContextualThresholdPolicy(
            {
                "place": {"home": (-0.9, 0.1)},
                "sensitivity": {"sensitive": (-0.1, 0.9)},
            }
        )
        both = {"place": "home", "sensitivity": "sensitive"}
        assert policy.thresholds(context_vars=both) == (-0.9, 0.1)

    def test_contextual_table_validated(self):
        with pytest.raises(ValueError):
            ContextualThresholdPolicy({"v": {"a": (0.5, 0.5)}})

    def test_policy_outputs_always_in_range(self):
        rng = random.Random(6)
        policies = [
            HardThresholdPolicy(HardThresholds(-0.4, 0.8)),
            ConfidentThresholdPolicy(),
            ContextualThresholdPolicy(
                {"ctx": {"a": (-0.2, 0.3), "b": (-0.9, 0.95)}}, default=(-0.6, 0.6)
            ),
        ]
        for _ in range(1000):
            policy = rng.choice(policies)
            conf = rng.random()
            ctx = {"ctx": rng.choice(["a", "b", "c"])}
            prh, per = policy.thresholds(conf, ctx)
            assert -1.0 <= prh <= 0.0
            assert 0.0 <= per <= 1.0


class TestClassifyRegime:
    CUTS = RegimeThresholds(apd_cut=0.5, psd_cut=0.5)

    def test_quadrants(self):
        assert classify_regime(0.1, 0.1, self.CUTS) is PredictionRegime.ANY_METHOD
        assert classify_regime(0.1, 0.9, self.CUTS) is PredictionRegime.AVOID_HARD_THRESHOLDS
        assert classify_regime(0.9, 0.1, self.CUTS) is PredictionRegime.DO_NOT_USE_PREDICTIONS
        assert (
            classify_regime(0.9, 0.9, self.CUTS)
            is PredictionRegime.FUNCTION_THRESHOLDS_PROVISIONAL
        )

    def test_cut_boundary_is_high(self):
        assert classify_regime(0.5, 0.0, self.CUTS) is PredictionRegime.DO_NOT_USE_PREDICTIONS
        assert classify_regime(0.0, 0.5, self.CUTS) is PredictionRegime.AVOID_HARD_THRESHOLDS

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            classify_regime(-0.1, 0.2, self.CUTS)

    def test_cuts_validated(self):
        with pytest.raises(ValueError):
            RegimeThresholds(apd_cut=0.0)


class TestNormRecords:
    def test_csv_shape(self):
        decisions = [
            norm_for_value("x1", -0.9, 1.0, ConfidentThresholdPolicy()),
            norm_for_value("x2", 0.0, None, HardThresholdPolicy(QUARTER)),
        ]
        out = io.StringIO()
        write_norm_records(out, "u1", decisions)
        lines = out.getvalue().strip().split("\n")
        assert lines[0] == (
            "user_id,element_id,outcome,preference,confidence,prh_threshold,per_threshold"
        )
        assert lines[1].startswith("u1,x1,PRH,-0.9,1.0,")
        assert lines[2].startswith("u1,x2,NONE,0.0,,")
