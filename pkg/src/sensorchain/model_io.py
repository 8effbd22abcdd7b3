"""Versioned model file: parameters plus the full preprocessing state.

One JSON document (UTF-8, sorted keys) holds the model kind, its
parameters, and everything inference needs to turn a raw reading into a
feature vector. See docs/model-format.md for the exact layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import GbtModel, LinearModel, TreeNode, predict_baseline
from .ingest import PreprocessorState, ScalingParams
from .network import LayerParams, ModelParameters, predict

FORMAT_NAME = "sensorchain-model"
FORMAT_VERSION = 1


class UnsupportedModelFileError(ValueError):
    """File is not a model container this version can read."""


@dataclass
class ModelBundle:
    """A loaded model with its preprocessing state."""

    kind: str  # "dnn" | "linear" | "gbt"
    model: ModelParameters | LinearModel | GbtModel
    preprocessor: PreprocessorState

    def predict_raw(self, reading: dict) -> float:
        """Battery-life prediction for one raw reading dict."""
        x = self.preprocessor.transform_raw(reading)
        if self.kind == "dnn":
            return predict(self.model, x)
        return predict_baseline(self.model, x)


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"value": node.value}
    return {
        "value": node.value,
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(data: dict) -> TreeNode:
    if "feature" not in data:
        return TreeNode(value=data["value"])
    return TreeNode(
        value=data["value"],
        feature=data["feature"],
        threshold=data["threshold"],
        left=_tree_from_dict(data["left"]),
        right=_tree_from_dict(data["right"]),
    )


def _model_to_dict(kind: str, model) -> dict:
    if kind == "dnn":
        return {
            "layer_sizes": model.layer_sizes,
            "layers": [
                {"W": layer.W.ravel().tolist(), "b": layer.b.tolist()}
                for layer in model.layers
            ],
        }
    if kind == "linear":
        return {"weights": model.weights.tolist(), "bias": model.bias}
    if kind == "gbt":
        return {
            "base_prediction": model.base_prediction,
            "shrinkage": model.shrinkage,
            "max_depth": model.max_depth,
            "trees": [_tree_to_dict(t) for t in model.trees],
        }
    raise ValueError(f"unknown model kind {kind!r}")


def _model_from_dict(kind: str, data: dict):
    if kind == "dnn":
        sizes = data["layer_sizes"]
        layers = []
        for spec, fan_in, fan_out in zip(data["layers"], sizes[:-1], sizes[1:]):
            W = np.array(spec["W"], dtype=float).reshape(fan_out, fan_in)
            layers.append(LayerParams(W=W, b=np.array(spec["b"], dtype=float)))
        return ModelParameters(layers=layers)
    if kind == "linear":
        return LinearModel(weights=np.array(data["weights"], dtype=float), bias=float(data["bias"]))
    if kind == "gbt":
        return GbtModel(
            base_prediction=float(data["base_prediction"]),
            shrinkage=float(data["shrinkage"]),
            max_depth=int(data["max_depth"]),
            trees=[_tree_from_dict(t) for t in data["trees"]],
        )
    raise UnsupportedModelFileError(f"unknown model kind {kind!r}")


def save_model(path: str | Path, kind: str, model, pre: PreprocessorState) -> None:
    document = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": kind,
        "preprocessing": {
            "categories": pre.categories,
            "numeric_means": pre.numeric_means,
            "include_hour": pre.include_hour,
            "feature_names": pre.feature_names,
            "scaling": {
                "kind": pre.scaling.kind,
                "offset": pre.scaling.offset.tolist(),
                "scale": pre.scaling.scale.tolist(),
                "apply": pre.scaling.apply.astype(int).tolist(),
            },
        },
        "model": _model_to_dict(kind, model),
    }
    Path(path).write_text(json.dumps(document, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> ModelBundle:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UnsupportedModelFileError(f"not a JSON model file: {exc}") from None
    if document.get("format") != FORMAT_NAME:
        raise UnsupportedModelFileError("missing or wrong format marker")
    if document.get("version") != FORMAT_VERSION:
        raise UnsupportedModelFileError(f"unsupported version {document.get('version')!r}")
    pre_doc = document["preprocessing"]
    scaling_doc = pre_doc["scaling"]
    pre = PreprocessorState(
        categories=list(pre_doc["categories"]),
        numeric_means={k: float(v) for k, v in pre_doc["numeric_means"].items()},
        include_hour=bool(pre_doc["include_hour"]),
        feature_names=list(pre_doc["feature_names"]),
        scaling=ScalingParams(
            offset=np.array(scaling_doc["offset"], dtype=float),
            scale=np.array(scaling_doc["scale"], dtype=float),
            apply=np.array(scaling_doc["apply"], dtype=bool),
            kind=scaling_doc["kind"],
        ),
    )
    kind = document["kind"]
    return ModelBundle(kind=kind, model=_model_from_dict(kind, document["model"]), preprocessor=pre)
