"""Self-describing JSON bundles for fitted routers."""

from __future__ import annotations

import json

import numpy as np

from ..exceptions import SchemaError
from .estimators import ESTIMATORS, GBStumpsRouter, LogisticRouter

FORMAT_VERSION = 1


def _tree_to_json(tree):
    if not isinstance(tree, tuple):
        return {"leaf": tree}
    f, thr, left, right = tree
    return {"feature": f, "threshold": thr, "left": _tree_to_json(left), "right": _tree_to_json(right)}


def _tree_from_json(obj):
    if "leaf" in obj:
        return float(obj["leaf"])
    return (int(obj["feature"]), float(obj["threshold"]), _tree_from_json(obj["left"]), _tree_from_json(obj["right"]))


def model_to_dict(model) -> dict:
    if isinstance(model, LogisticRouter):
        params = {"coef": model.coef_.tolist(), "intercept": model.intercept_}
    elif isinstance(model, GBStumpsRouter):
        params = {"init": model.init_, "trees": [_tree_to_json(t) for t in model.trees_]}
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "feature_names": list(model.feature_names_),
        "hyper": model.get_params(),
        "train_seed": model.random_state,
        "standardization": {"mean": model.mean_.tolist(), "std": model.std_.tolist()},
        "feature_importances": model.feature_importances_.tolist(),
        "parameters": params,
    }


def model_from_dict(obj: dict):
    try:
        cls = ESTIMATORS[obj["kind"]]
        model = cls(**obj["hyper"])
        names = obj["feature_names"]
        model.feature_names_ = tuple(names)
        model.n_features_in_ = len(names)
        model.classes_ = np.array([0, 1])
        model.mean_ = np.asarray(obj["standardization"]["mean"], dtype=float)
        model.std_ = np.asarray(obj["standardization"]["std"], dtype=float)
        model.feature_importances_ = np.asarray(obj["feature_importances"], dtype=float)
        p = obj["parameters"]
        if cls is LogisticRouter:
            model.coef_ = np.asarray(p["coef"], dtype=float)
            model.intercept_ = float(p["intercept"])
        else:
            model.init_ = float(p["init"])
            model.trees_ = [_tree_from_json(t) for t in p["trees"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed model bundle: {exc}") from exc
    return model


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
