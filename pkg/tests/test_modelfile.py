import json

import numpy as np
import pytest

from ragalib.errors import ModelFormatError
from ragalib.modelfile import ModelFile, load_model, save_model, table2_model
from ragalib.network import Activation, NetworkConfig, NetworkWeights, predict_series
from ragalib.series import ScalerKind, ScalingSpec, fit_scaler


class TestSaveLoad:
    def test_round_trip(self, tmp_path):
        cfg = NetworkConfig(2, 3, "sigmoid", "sigmoid")
        rng = np.random.default_rng(4)
        weights = NetworkWeights.from_flat(cfg, rng.normal(size=cfg.parameter_count))
        model = ModelFile(
            cfg,
            weights,
            fit_scaler([-7, 17], -1.0, 1.0),
            fit_scaler([-7, 17], 0.0, 1.0),
            {"seed": 3, "epochs": 120, "final_rmse": 2.5},
        )
        path = tmp_path / "nested" / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.config == cfg
        np.testing.assert_array_equal(loaded.weights.flatten(), weights.flatten())
        assert loaded.scaler_in == model.scaler_in
        assert loaded.scaler_out == model.scaler_out
        assert loaded.metadata == model.metadata

    def test_non_finite_metadata_written_as_null(self, tmp_path):
        cfg = NetworkConfig(1, 1)
        path = tmp_path / "model.json"
        save_model(
            ModelFile(cfg, NetworkWeights.zeros(cfg), metadata={"final_rmse": float("nan")}),
            path,
        )
        assert json.loads(path.read_text())["metadata"]["final_rmse"] is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_model(tmp_path / "absent.json")

    def test_truncated_json(self, tmp_path):
        cfg = NetworkConfig(1, 1)
        path = tmp_path / "model.json"
        save_model(ModelFile(cfg, NetworkWeights.zeros(cfg)), path)
        path.write_text(path.read_text()[:40])
        with pytest.raises(ModelFormatError):
            load_model(path)

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.update(format_version=2),
            lambda d: d.pop("w_out"),
            lambda d: d["config"].update(q=3),
            lambda d: d["config"].update(hidden_act="relu"),
        ],
    )
    def test_malformed_documents(self, mutate):
        cfg = NetworkConfig(2, 2)
        doc = ModelFile(cfg, NetworkWeights.zeros(cfg)).to_dict()
        mutate(doc)
        with pytest.raises(ModelFormatError):
            ModelFile.from_dict(doc)


class TestTable2Model:
    def test_published_weights(self):
        model = table2_model()
        assert model.config == NetworkConfig(2, 4, "tanh", "identity")
        assert model.weights.parameter_count == 17
        np.testing.assert_array_equal(model.weights.w_in[3], [0.429, -3.818, -2.988])
        np.testing.assert_array_equal(model.weights.w_out, [-0.852, -1.202, 2.845, -1.206, 1.222])

    def test_scalers_fitted_to_corpus(self):
        model = table2_model()
        assert model.scaler_in.kind is ScalerKind.MINMAX
        assert (model.scaler_out.src_min, model.scaler_out.src_max) == (-7.0, 17.0)

    def test_sigmoid_variant_and_raw_reading(self):
        model = table2_model(Activation.SIGMOID, ScalingSpec(ScalerKind.NONE))
        assert model.config.hidden_act is Activation.SIGMOID
        assert model.scaler_in.kind is ScalerKind.NONE

    def test_replay_is_finite(self, corpus):
        model = table2_model()
        preds = predict_series(model.weights, model.config, corpus, model.scaler_in, model.scaler_out)
        assert len(preds) == 238
        assert all(np.isfinite(p.predicted) for p in preds)
