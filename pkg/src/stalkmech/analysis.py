"""Scenario-level reduction of adaptation trials and theory comparison.

A scenario is a set of repeated trials of one cup configuration over a
set of surface angles. Repetitions at an angle aggregate by mean over the
attached repetitions; trials that never attach contribute explicit
absence, never a zero force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoverageError, TrialValidationError
from .force import AdaptationPrediction
from .trials import (
    DEFAULT_ATTACH_THRESHOLD_KPA,
    TrialRecord,
    adaptation_force,
    detect_attachment,
)


@dataclass(frozen=True)
class AngleOutcome:
    """Aggregated result at one surface angle.

    ``rep_forces`` keeps the per-repetition adaptation forces (attached
    repetitions only, sorted ascending so aggregation is independent of
    trial order); ``adaptation_force`` is their mean, None when nothing
    attached.
    """

    surface_angle: float
    attached: bool
    adaptation_force: float | None
    rep_forces: tuple[float, ...]


@dataclass(frozen=True)
class AdaptationSummary:
    """Per-scenario digest: per-angle outcomes and the ultimate angle.

    The ultimate angle is the steepest angle with at least one attached
    repetition; both it and its force are None when no trial attached.
    """

    scenario: str
    ultimate_angle: float | None
    force_at_ultimate: float | None
    angles: tuple[AngleOutcome, ...]

    @property
    def attached_angles(self) -> tuple[AngleOutcome, ...]:
        return tuple(row for row in self.angles if row.attached)


@dataclass(frozen=True)
class ComparisonRow:
    """Measured vs predicted force at one angle; residual = predicted - measured."""

    surface_angle: float
    measured: float
    predicted: float
    residual: float
    relative_residual: float


@dataclass(frozen=True)
class TheoryComparison:
    """Per-angle residual report with the aggregate mean absolute relative error."""

    rows: tuple[ComparisonRow, ...]
    mean_abs_relative_error: float | None


def summarize_scenario(
    trials: list[TrialRecord],
    threshold: float = DEFAULT_ATTACH_THRESHOLD_KPA,
) -> AdaptationSummary:
    """Aggregate one scenario's trials into an :class:`AdaptationSummary`.

    Every trial must carry surface-angle metadata and the same scenario
    label. The result is invariant to the order of the input trials.
    """
    if not trials:
        raise TrialValidationError("need at least one trial")
    scenario = trials[0].scenario
    for trial in trials:
        if trial.surface_angle is None:
            raise TrialValidationError(
                f"trial in scenario {trial.scenario!r} is missing surface-angle metadata"
            )
        if trial.scenario != scenario:
            raise TrialValidationError(
                f"mixed scenarios in one summary: {scenario!r} and {trial.scenario!r}"
            )

    by_angle: dict[float, list[float | None]] = {}
    for trial in trials:
        event = detect_attachment(trial, threshold)
        force = adaptation_force(trial, event) if event is not None else None
        by_angle.setdefault(trial.surface_angle, []).append(force)

    outcomes = []
    for angle in sorted(by_angle):
        attached_forces = sorted(f for f in by_angle[angle] if f is not None)
        if attached_forces:
            mean = math.fsum(attached_forces) / len(attached_forces)
            outcomes.append(AngleOutcome(angle, True, mean, tuple(attached_forces)))
        else:
            outcomes.append(AngleOutcome(angle, False, None, ()))

    attached = [row for row in outcomes if row.attached]
    if attached:
        ultimate = attached[-1]
        return AdaptationSummary(scenario, ultimate.surface_angle, ultimate.adaptation_force, tuple(outcomes))
    return AdaptationSummary(scenario, None, None, tuple(outcomes))


def compare_theory(
    summary: AdaptationSummary,
    predictions: list[AdaptationPrediction],
) -> TheoryComparison:
    """Residuals of theory predictions against a measured summary.

    Each attached angle of the summary is matched against a successful
    prediction at the same angle; any measured angle without one raises
    :class:`CoverageError` listing the misses. Residuals are signed
    (predicted minus measured); the aggregate is the mean of the absolute
    relative residuals, None when there are no attached angles.
    """
    predicted_by_angle = {
        p.surface_angle: p for p in predictions if p.error is None and p.force is not None
    }
    missing = tuple(
        row.surface_angle
        for row in summary.attached_angles
        if row.surface_angle not in predicted_by_angle
    )
    if missing:
        degrees = ", ".join(f"{math.degrees(a):g}" for a in missing)
        raise CoverageError(
            f"predictions do not cover measured angles: {degrees} deg", missing_angles=missing
        )

    rows = []
    for outcome in summary.attached_angles:
        measured = outcome.adaptation_force
        predicted = predicted_by_angle[outcome.surface_angle].force
        residual = predicted - measured
        if measured != 0.0:
            relative = residual / measured
        else:
            relative = 0.0 if residual == 0.0 else math.inf
        rows.append(
            ComparisonRow(outcome.surface_angle, measured, predicted, residual, relative)
        )

    if rows:
        mare = math.fsum(abs(r.relative_residual) for r in rows) / len(rows)
    else:
        mare = None
    return TheoryComparison(tuple(rows), mare)
