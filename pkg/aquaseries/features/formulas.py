"""Band-combination formulas evaluated on reflectances.

Every function accepts scalars or equally shaped numpy arrays. Where a formula is
undefined (zero denominator) or overflows to infinity the result is NaN; callers
decide the substitution.
"""

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory


def _finish(values):
    values = np.where(np.isfinite(values), values, np.nan)
    if np.ndim(values) == 0:
        return float(values)
    return values


def norm_ratio(r_i, r_j):
    """Normalized ratio (R(i) - R(j)) / (R(i) + R(j)).

    Returns NaN where R(i) + R(j) == 0.
    """
    r_i = np.asarray(r_i, dtype=np.float64)
    r_j = np.asarray(r_j, dtype=np.float64)
    denominator = r_i + r_j
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denominator != 0.0, (r_i - r_j) / denominator, np.nan)
    return _finish(values)


def three_band(r_i, r_j, r_k):
    """Three-band ratio [1/R(i) - 1/R(j)] * R(k).

    Returns NaN where R(i) or R(j) is zero.
    """
    r_i = np.asarray(r_i, dtype=np.float64)
    r_j = np.asarray(r_j, dtype=np.float64)
    r_k = np.asarray(r_k, dtype=np.float64)
    defined = (r_i != 0.0) & (r_j != 0.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.where(defined, (1.0 / r_i - 1.0 / r_j) * r_k, np.nan)
    return _finish(values)


def line_height(r_i, r_j, r_k, wavelength_i: float, wavelength_j: float, wavelength_k: float):
    """Height of R(j) above the chord joining (λi, R(i)) and (λk, R(k)).

    Args:
        r_i, r_j, r_k: Reflectances of the three bands.
        wavelength_i (float): Central wavelength of band i in nm.
        wavelength_j (float): Central wavelength of band j in nm.
        wavelength_k (float): Central wavelength of band k in nm.

    Raises:
        AquaSeriesException: If the wavelengths are not strictly increasing.
    """
    if not wavelength_i < wavelength_j < wavelength_k:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="DEGENERATE_WAVELENGTHS",
                error_message=(
                    "Line height needs strictly increasing wavelengths, got "
                    f"({wavelength_i}, {wavelength_j}, {wavelength_k})."
                ),
                category=ErrorCategory.DATA,
            )
        )
    r_i = np.asarray(r_i, dtype=np.float64)
    r_j = np.asarray(r_j, dtype=np.float64)
    r_k = np.asarray(r_k, dtype=np.float64)
    fraction = (wavelength_j - wavelength_i) / (wavelength_k - wavelength_i)
    return _finish(r_j - r_i - (r_k - r_i) * fraction)
