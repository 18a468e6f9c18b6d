"""Validation protocols, cross-validation and hyperparameter search."""

from har_chain.validate.ablation import AblationReport, AblationVariant, ablation_settings, run_ablation
from har_chain.validate.crossval import (
    CrossValReport,
    FoldResult,
    build_windows,
    normalize_fold,
    run_cross_validation,
    spec_for,
)
from har_chain.validate.protocols import (
    FoldSpec,
    Grouping,
    Protocol,
    kfold,
    loso,
    make_folds,
    split_train_val,
)
from har_chain.validate.search import (
    ParamRange,
    SearchResult,
    SearchSpace,
    TrialRecord,
    apply_params,
    default_search_space,
    random_search,
)

__all__ = [
    "AblationReport",
    "AblationVariant",
    "CrossValReport",
    "FoldResult",
    "FoldSpec",
    "Grouping",
    "ParamRange",
    "Protocol",
    "SearchResult",
    "SearchSpace",
    "TrialRecord",
    "ablation_settings",
    "apply_params",
    "build_windows",
    "default_search_space",
    "kfold",
    "loso",
    "make_folds",
    "normalize_fold",
    "random_search",
    "run_ablation",
    "run_cross_validation",
    "spec_for",
]
