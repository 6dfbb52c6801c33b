"""Routing policies, features, learners and out-of-fold evaluation."""

from .estimators import GBStumpsRouter, LogisticRouter, feature_importance, fit, make_estimator
from .features import (
    FEATURE_NAMES,
    POST_GEN_FEATURES,
    PRE_GEN_FEATURES,
    FeatureVector,
    build_features,
    feature_matrix,
    hop_pred,
    infer_query_type,
    passages_meta,
)
from .persistence import load_model, save_model
from .policies import RoutingDecision, decide
from .selection import cv_oof, escalation_count, sample_efficiency, stratified_folds, threshold_for_rate

__all__ = [
    "FEATURE_NAMES",
    "POST_GEN_FEATURES",
    "PRE_GEN_FEATURES",
    "FeatureVector",
    "GBStumpsRouter",
    "LogisticRouter",
    "RoutingDecision",
    "build_features",
    "cv_oof",
    "decide",
    "escalation_count",
    "feature_importance",
    "feature_matrix",
    "fit",
    "hop_pred",
    "infer_query_type",
    "load_model",
    "make_estimator",
    "passages_meta",
    "sample_efficiency",
    "save_model",
    "stratified_folds",
    "threshold_for_rate",
]
