import numpy as np
import pytest

from ragalib.errors import (
    ConfigError,
    DegenerateScaleError,
    EmptyDataError,
    InsufficientDataError,
    SplitError,
)
from ragalib.series import (
    ScalerKind,
    ScalingSpec,
    SplitSpec,
    embed_lags,
    fit_pipeline_scalers,
    fit_scaler,
    split,
)


class TestEmbedLags:
    def test_inputs_are_most_recent_first(self):
        ds = embed_lags([1, 2, 3, 4], p=2)
        assert ds.rows == [((2.0, 1.0), 3.0), ((3.0, 2.0), 4.0)]
        np.testing.assert_array_equal(ds.origin_indices, [3, 4])

    def test_corpus_row_count(self, corpus):
        ds = embed_lags(corpus, p=2)
        assert len(ds) == 238
        assert ds.inputs.shape == (238, 2)
        # row for serial number 3: (y2, y1) -> y3
        assert ds.rows[0] == ((-2.0, 0.0), -3.0)

    @pytest.mark.parametrize("p", [1, 2, 5])
    def test_first_row_and_targets_rebuild_the_source(self, corpus, p):
        ds = embed_lags(corpus, p)
        rebuilt = list(ds.inputs[0][::-1]) + list(ds.targets)
        assert rebuilt == [float(v) for v in corpus]

    def test_p_must_leave_a_target(self):
        with pytest.raises(InsufficientDataError):
            embed_lags([5], p=1)

    def test_p_must_be_positive(self):
        with pytest.raises(ConfigError):
            embed_lags([1, 2, 3], p=0)

    def test_arrays_are_read_only(self):
        ds = embed_lags([1, 2, 3], p=1)
        with pytest.raises(ValueError):
            ds.inputs[0, 0] = 9.0


class TestScaler:
    def test_endpoints_and_midpoint(self):
        s = fit_scaler([-7, 17], -1.0, 1.0)
        assert s.apply(-7) == pytest.approx(-1.0)
        assert s.apply(17) == pytest.approx(1.0)
        assert s.apply(5) == pytest.approx(0.0)

    def test_invert(self):
        s = fit_scaler([-7, 0, 17], 0.0, 1.0)
        x = np.array([-7.0, 3.0, 17.0])
        np.testing.assert_allclose(s.invert(s.apply(x)), x, atol=1e-12)

    @pytest.mark.parametrize("lo, hi", [(-1.0, 1.0), (0.0, 1.0)])
    def test_invert_random_values(self, lo, hi):
        rng = np.random.default_rng(12)
        x = rng.uniform(-12, 23, size=1000)
        s = fit_scaler(x, lo, hi)
        scaled = s.apply(x)
        assert scaled.min() >= lo - 1e-12 and scaled.max() <= hi + 1e-12
        np.testing.assert_allclose(s.invert(scaled), x, rtol=0, atol=1e-12)

    def test_constant_input_is_degenerate(self):
        with pytest.raises(DegenerateScaleError):
            fit_scaler([3, 3, 3], -1.0, 1.0)

    def test_empty_input(self):
        with pytest.raises(EmptyDataError):
            fit_scaler([], -1.0, 1.0)

    def test_empty_target_interval(self):
        with pytest.raises(ConfigError):
            fit_scaler([0, 1], 1.0, 1.0)

    def test_dict_round_trip(self):
        s = fit_scaler([-7, 17], -1.0, 1.0)
        assert type(s).from_dict(s.to_dict()) == s


class TestPipelineScalers:
    def test_sigmoid_output_targets_unit_interval(self, corpus):
        scaler_in, scaler_out = fit_pipeline_scalers("sigmoid", corpus)
        assert (scaler_in.lo, scaler_in.hi) == (-1.0, 1.0)
        assert (scaler_out.lo, scaler_out.hi) == (0.0, 1.0)
        assert (scaler_out.src_min, scaler_out.src_max) == (-7.0, 17.0)

    @pytest.mark.parametrize("output_act", ["identity", "tanh"])
    def test_symmetric_outputs(self, corpus, output_act):
        _, scaler_out = fit_pipeline_scalers(output_act, corpus)
        assert (scaler_out.lo, scaler_out.hi) == (-1.0, 1.0)

    def test_none_is_identity(self, corpus):
        scaler_in, scaler_out = fit_pipeline_scalers(
            "identity", corpus, ScalingSpec(ScalerKind.NONE)
        )
        assert scaler_in.apply(12.0) == 12.0
        assert scaler_out.invert(-3.0) == -3.0


class TestSplit:
    def test_zero_fraction_is_identity(self, corpus):
        train, holdout = split(embed_lags(corpus, 2), SplitSpec(0.0))
        assert (len(train), len(holdout)) == (238, 0)

    def test_tenth_rounds_half_up(self, corpus):
        train, holdout = split(embed_lags(corpus, 2), SplitSpec(0.1))
        assert (len(train), len(holdout)) == (214, 24)
        assert holdout.origin_indices[0] == train.origin_indices[-1] + 1

    @pytest.mark.parametrize("fraction", [0.1, 0.25, 0.5, 0.9])
    def test_concatenation_is_the_original(self, corpus, fraction):
        ds = embed_lags(corpus, 3)
        train, holdout = split(ds, SplitSpec(fraction))
        np.testing.assert_array_equal(np.concatenate([train.inputs, holdout.inputs]), ds.inputs)
        np.testing.assert_array_equal(np.concatenate([train.targets, holdout.targets]), ds.targets)
        origins = np.concatenate([train.origin_indices, holdout.origin_indices])
        np.testing.assert_array_equal(origins, ds.origin_indices)
        assert np.all(np.diff(origins) == 1)

    def test_exact_half_rounds_up(self):
        assert SplitSpec(0.5).holdout_rows(5) == 3

    def test_no_training_rows(self):
        ds = embed_lags(list(range(11)), 1)
        with pytest.raises(SplitError):
            split(ds, SplitSpec(0.99))

    @pytest.mark.parametrize("fraction", [-0.1, 1.0, 1.5])
    def test_fraction_range(self, fraction):
        with pytest.raises(ConfigError):
            SplitSpec(fraction)
