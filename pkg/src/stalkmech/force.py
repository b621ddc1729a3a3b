"""Conversion between normalized load and physical force, and stiffness calibration.

The stalk's flexural rigidity EI is never taken from material datasheets:
it is fitted from bending-test measurements, because the granular stalk is
a composite whose effective stiffness depends on the jamming state. The
fit assumes the linear cantilever tip relation delta = F L^3 / (3 EI).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .alpha import solve_alpha_for_angle
from .errors import CalibrationError, SolverError, TrialParseError
from .geometry import DEFAULT_CONFIG, BeamGeometry, SolverConfig
from .units import mm_cell_to_m

# Beyond this tip deflection (as a fraction of stalk length) the linear
# cantilever relation behind the EI fit degrades; inputs past it are
# accepted with a warning rather than rejected.
SMALL_DEFLECTION_LIMIT = 0.25

BENDING_HEADER = "deflection_mm,force_N"


@dataclass(frozen=True)
class StiffnessCalibration:
    """Effective flexural rigidity of a stalk fitted from bending data.

    ``linear_slope`` is the through-origin slope k of force against tip
    deflection (N/m); ``flexural_rigidity`` is EI = k L^3 / 3 for the
    ``stalk_length`` the fit was made with. ``fit_quality`` is the
    coefficient of determination of the through-origin fit.
    """

    flexural_rigidity: float
    linear_slope: float
    fit_quality: float
    source_label: str
    stalk_length: float

    def __post_init__(self):
        if not (self.flexural_rigidity > 0.0):
            raise ValueError("flexural_rigidity must be positive")
        if not (0.0 <= self.fit_quality <= 1.0):
            raise ValueError("fit_quality must be within [0, 1]")


@dataclass(frozen=True)
class AdaptationPrediction:
    """Predicted adaptation force for one surface angle.

    ``force`` satisfies force = alpha * EI / L^2 for the calibration and
    geometry it was built with. ``error`` is set (and the numeric fields
    are None) when the angle could not be solved.
    """

    surface_angle: float
    alpha: float | None
    force: float | None
    error: str | None = None


def alpha_to_force(
    alpha: float, calibration: StiffnessCalibration, geometry: BeamGeometry
) -> float:
    """Physical force in newtons for a normalized load: F = alpha EI / L^2."""
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return alpha * calibration.flexural_rigidity / geometry.stalk_length**2


def force_to_alpha(
    force: float, calibration: StiffnessCalibration, geometry: BeamGeometry
) -> float:
    """Inverse of :func:`alpha_to_force`: alpha = F L^2 / EI."""
    if force < 0.0:
        raise ValueError(f"force must be >= 0, got {force}")
    return force * geometry.stalk_length**2 / calibration.flexural_rigidity


def calibrate_ei(
    samples: Iterable[tuple[float, float]],
    geometry: BeamGeometry,
    source_label: str = "",
) -> StiffnessCalibration:
    """Fit effective EI from (deflection [m], force [N]) bending samples.

    Least-squares slope through the origin, k = sum(F d) / sum(d^2),
    converted by the cantilever tip relation EI = k L^3 / 3. Requires at
    least two samples with distinct positive deflections. Deflections
    beyond ``SMALL_DEFLECTION_LIMIT`` of the stalk length trigger a
    warning, since the linear relation is marginal there.
    """
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise CalibrationError("samples must be (deflection, force) pairs")
    deflection = data[:, 0]
    force = data[:, 1]
    if data.shape[0] < 2:
        raise CalibrationError("need at least two bending samples")
    if np.any(deflection < 0.0):
        raise CalibrationError("deflections must be non-negative")
    positive = deflection[deflection > 0.0]
    if positive.size < 2 or np.unique(positive).size < 2:
        raise CalibrationError("need at least two distinct positive deflections")

    L = geometry.stalk_length
    max_ratio = float(np.max(deflection)) / L
    if max_ratio > SMALL_DEFLECTION_LIMIT:
        warnings.warn(
            f"max deflection is {max_ratio:.2f} of the stalk length; the linear "
            f"tip relation is only trusted up to {SMALL_DEFLECTION_LIMIT:.2f}",
            stacklevel=2,
        )

    slope = float(np.dot(force, deflection) / np.dot(deflection, deflection))
    if slope <= 0.0:
        raise CalibrationError(f"non-positive stiffness slope {slope:g}")

    ss_res = float(np.sum((force - slope * deflection) ** 2))
    ss_tot = float(np.sum(force**2))
    fit_quality = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))

    return StiffnessCalibration(
        flexural_rigidity=slope * L**3 / 3.0,
        linear_slope=slope,
        fit_quality=fit_quality,
        source_label=source_label,
        stalk_length=L,
    )


def predict_force_curve(
    angles: list[float],
    calibration: StiffnessCalibration,
    geometry: BeamGeometry,
    config: SolverConfig = DEFAULT_CONFIG,
) -> list[AdaptationPrediction]:
    """Theory force curve: solve alpha per angle and convert to newtons.

    Order-preserving; angles that cannot be solved produce rows carrying
    the error message instead of being dropped.
    """
    predictions = []
    for angle in angles:
        try:
            result = solve_alpha_for_angle(angle, geometry, config)
            force = alpha_to_force(result.alpha, calibration, geometry)
        except (SolverError, ValueError) as exc:
            predictions.append(AdaptationPrediction(angle, None, None, str(exc)))
        else:
            predictions.append(AdaptationPrediction(angle, result.alpha, force))
    return predictions


def read_bending_samples(source: str | Path | TextIO) -> list[tuple[float, float]]:
    """Read a bending-test CSV (header ``deflection_mm,force_N``) into SI pairs.

    Accepts a path or an open text stream; ``#`` lines are comments.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return read_bending_samples(handle)

    samples: list[tuple[float, float]] = []
    header_seen = False
    for line_number, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != BENDING_HEADER:
                raise TrialParseError(
                    f"line {line_number}: expected header {BENDING_HEADER!r}, got {line!r}",
                    line_number=line_number,
                )
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise TrialParseError(
                f"line {line_number}: expected 2 fields, got {len(cells)}",
                line_number=line_number,
            )
        try:
            deflection = mm_cell_to_m(cells[0])
            force = float(cells[1])
        except ValueError as exc:
            raise TrialParseError(f"line {line_number}: {exc}", line_number=line_number) from None
        if not (math.isfinite(deflection) and math.isfinite(force)):
            raise TrialParseError(
                f"line {line_number}: non-finite value", line_number=line_number
            )
        samples.append((deflection, force))
    if not header_seen:
        raise TrialParseError("missing header line", line_number=None)
    return samples
