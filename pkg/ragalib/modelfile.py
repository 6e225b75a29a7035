"""Versioned JSON model files.

Layout (format_version 1)::

    {
      "format_version": 1,
      "config": {"p": 2, "q": 4, "hidden_act": "tanh", "output_act": "identity"},
      "w_in": [[...], ...],          # q rows of [bias, w_1 .. w_p]
      "w_out": [...],                # [bias, w_1 .. w_q]
      "scaler_in": {...}, "scaler_out": {...},
      "metadata": {"seed": ..., "epochs": ..., "final_rmse": ...}
    }

json writes floats with repr(), which is the shortest decimal that
round-trips.
"""

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from ragalib.errors import ModelFormatError
from ragalib.network import Activation, NetworkConfig, NetworkWeights
from ragalib.notation import load_corpus
from ragalib.series import IDENTITY_SCALER, Scaler, ScalingSpec, fit_pipeline_scalers

FORMAT_VERSION = 1

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
TABLE2_MODEL_PATH = os.path.join(DATA_DIR, "table2_n241.json")


@dataclass(frozen=True)
class ModelFile:
    config: NetworkConfig
    weights: NetworkWeights
    scaler_in: Scaler = IDENTITY_SCALER
    scaler_out: Scaler = IDENTITY_SCALER
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "config": self.config.to_dict(),
            "w_in": self.weights.w_in.tolist(),
            "w_out": self.weights.w_out.tolist(),
            "scaler_in": self.scaler_in.to_dict(),
            "scaler_out": self.scaler_out.to_dict(),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelFile":
        if not isinstance(data, dict):
            raise ModelFormatError("model document must be a JSON object")
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported format_version {version!r} (expected {FORMAT_VERSION})"
            )
        try:
            cfg_data = data["config"]
            config = NetworkConfig(
                p=int(cfg_data["p"]),
                q=int(cfg_data["q"]),
                hidden_act=Activation.parse(cfg_data["hidden_act"]),
                output_act=Activation.parse(cfg_data["output_act"]),
            )
            weights = NetworkWeights(
                np.asarray(data["w_in"], dtype=float),
                np.asarray(data["w_out"], dtype=float),
            )
            weights.check(config)
            scaler_in = Scaler.from_dict(data.get("scaler_in", {"kind": "none"}))
            scaler_out = Scaler.from_dict(data.get("scaler_out", {"kind": "none"}))
        except ModelFormatError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"malformed model file: {type(e).__name__}: {e}") from e
        if not weights.is_finite():
            raise ModelFormatError("model weights contain non-finite values")
        return cls(config, weights, scaler_in, scaler_out, dict(data.get("metadata", {})))


def _json_safe(value):
    # JSON has no NaN/Infinity; write them as null.
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def save_model(model: ModelFile, path: Union[str, os.PathLike]) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(_json_safe(model.to_dict()), f, indent=2, allow_nan=False)
        f.write("\n")


def load_model(path: Union[str, os.PathLike]) -> ModelFile:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model file not found: {path}")
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path}: not valid JSON ({e})") from e
    return ModelFile.from_dict(data)


def table2_model(
    hidden_act: Union[str, Activation] = Activation.TANH,
    scaling: ScalingSpec = ScalingSpec(),
) -> ModelFile:
    """The published N^{2-4-1} weights with scalers fitted to the corpus.

    The bundled file fixes the weights only; whether the published fit used
    scaled inputs is unknown, so the scalers follow the pipeline default and
    `ScalingSpec("none")` gives the raw-pitch reading.
    """
    model = load_model(TABLE2_MODEL_PATH)
    config = NetworkConfig(
        model.config.p, model.config.q, Activation.parse(hidden_act), model.config.output_act
    )
    scaler_in, scaler_out = fit_pipeline_scalers(config.output_act, load_corpus(), scaling)
    return ModelFile(config, model.weights, scaler_in, scaler_out, model.metadata)
