"""Parse feature names into feature expressions.

Grammar (whitespace and `$` are ignored):

    feature := band | "(" band ")^" ("2" | "3")
             | "NR(" band "," band ")"
             | ("TB" | "LH") "(" band "," band "," band ")"
    band    := "B1" | "B2" | ... | "B8A" | "B11" | "B12"
"""

import logging
import re
import warnings
from typing import Dict, List, Sequence, Tuple

from pydantic import ValidationError

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.spectra import EXCLUDED_BANDS, BandId, ParameterId
from .schemas import (
    BandFeature,
    FeatureExpr,
    LineHeightFeature,
    NormRatioFeature,
    PowerFeature,
    ThreeBandFeature,
)

logger = logging.getLogger(__name__)

_BAND_PATTERN = re.compile(r"^(?P<band>B\w+)$")
_POWER_PATTERN = re.compile(r"^\((?P<band>B\w+)\)\^\{?(?P<exponent>\d+)\}?$")
_CALL_PATTERN = re.compile(r"^(?P<function>NR|TB|LH)\((?P<args>[^()]*)\)$")

_ARITY = {"NR": 2, "TB": 3, "LH": 3}

# Selected variables per parameter, as printed; the SS row repeats `B3`.
PUBLISHED_SELECTIONS: Dict[ParameterId, Tuple[str, ...]] = {
    ParameterId.CHLA: (
        "B2",
        "(B2)^2",
        "(B4)^3",
        "(B8A)^2",
        "(B8A)^3",
        "(B11)^2",
        "NR(B2,B3)",
        "TB(B2,B3,B4)",
        "LH(B1,B2,B3)",
        "LH(B3,B4,B5)",
        "LH(B7,B8A,B11)",
    ),
    ParameterId.SS: (
        "B3",
        "B3",
        "(B3)^3",
        "B4",
        "(B4)^2",
        "(B4)^3",
        "B5",
        "(B5)^3",
        "LH(B4,B5,B6)",
        "LH(B5,B6,B7)",
    ),
    ParameterId.TURBIDITY: (
        "B3",
        "(B3)^2",
        "(B3)^3",
        "(B5)^2",
        "(B5)^3",
        "LH(B2,B3,B4)",
        "LH(B4,B5,B6)",
        "LH(B5,B6,B7)",
    ),
}


def _parse_error(name: str, message: str, code: str = "FEATURE_PARSE_ERROR", **details):
    return AquaSeriesException(
        AquaSeriesError(
            error_code=code,
            error_message=f"{name!r}: {message}",
            category=ErrorCategory.CONFIG,
            details={"feature": name, **details},
        )
    )


def _band(token: str, name: str) -> BandId:
    if token in EXCLUDED_BANDS:
        raise _parse_error(name, f"band {token} is excluded", token=token)
    try:
        return BandId(token)
    except ValueError:
        raise _parse_error(name, f"unknown band token {token}", token=token)


def parse_feature(name: str) -> FeatureExpr:
    """Parse a feature name into its expression.

    Args:
        name (str): Feature name such as `LH(B7,B8A,B11)` or `(B4)^3`.

    Returns:
        FeatureExpr: The matching expression variant.

    Raises:
        AquaSeriesException: On an unknown or excluded band token, a malformed name,
            or a band combination that breaks the variant's constraints.
    """
    text = re.sub(r"[\s$]", "", name)

    match = _BAND_PATTERN.match(text)
    if match:
        return BandFeature(band=_band(match["band"], name))

    match = _POWER_PATTERN.match(text)
    if match:
        exponent = int(match["exponent"])
        if exponent not in (2, 3):
            raise _parse_error(name, f"exponent must be 2 or 3, got {exponent}")
        return PowerFeature(band=_band(match["band"], name), exponent=exponent)

    match = _CALL_PATTERN.match(text)
    if not match:
        raise _parse_error(name, "not a recognised feature expression")

    function = match["function"]
    tokens = match["args"].split(",")
    if len(tokens) != _ARITY[function]:
        raise _parse_error(
            name, f"{function} takes {_ARITY[function]} bands, got {len(tokens)}"
        )
    bands = [_band(token, name) for token in tokens]
    try:
        if function == "NR":
            return NormRatioFeature(first=bands[0], second=bands[1])
        if function == "TB":
            return ThreeBandFeature(bands=tuple(bands))
        return LineHeightFeature(bands=tuple(bands))
    except ValidationError as e:
        raise _parse_error(
            name, e.errors()[0]["msg"], code="FEATURE_CONSTRAINT_ERROR"
        )


def parse_feature_list(names: Sequence[str]) -> List[FeatureExpr]:
    """Parse a literal list of names, dropping repeated expressions with a warning.

    Repeats are detected on canonical names, so `B3` and ` B3 ` collapse together.
    """
    expressions: List[FeatureExpr] = []
    seen = set()
    for name in names:
        expression = parse_feature(name)
        if expression.name in seen:
            message = f"Feature {expression.name} is listed more than once; keeping one column."
            logger.warning(message)
            warnings.warn(message, UserWarning)
            continue
        seen.add(expression.name)
        expressions.append(expression)
    return expressions
