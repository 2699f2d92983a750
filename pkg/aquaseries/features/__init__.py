from .formulas import line_height, norm_ratio, three_band
from .schemas import (
    BandFeature,
    FeatureExpr,
    FeatureMatrix,
    LineHeightFeature,
    NormRatioFeature,
    PowerFeature,
    ThreeBandFeature,
)
from .parser import PUBLISHED_SELECTIONS, parse_feature, parse_feature_list
from .feature_matrix import enumerate_candidates, evaluate_features, write_feature_matrix

__all__ = [
    "BandFeature",
    "FeatureExpr",
    "FeatureMatrix",
    "LineHeightFeature",
    "NormRatioFeature",
    "PowerFeature",
    "ThreeBandFeature",
    "PUBLISHED_SELECTIONS",
    "enumerate_candidates",
    "evaluate_features",
    "line_height",
    "norm_ratio",
    "parse_feature",
    "parse_feature_list",
    "three_band",
    "write_feature_matrix",
]
