"""Find the normalized load that bends the stalk tip to a target surface angle.

The map alpha -> tip_angle is strictly increasing in the working range, so
the outer search brackets the target angle and hands the interval to Brent's
method; every tip-angle evaluation is a full shooting solve of the
boundary-value problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .elastica import ElasticaSolution, solve_shape_shooting
from .errors import SolverError, UnreachableAngleError, OracleRangeError
from .geometry import DEFAULT_CONFIG, BeamGeometry, NormalizedLoad, SolverConfig


@dataclass(frozen=True)
class AlphaResult:
    """Normalized load solving tip_angle(alpha) = surface_angle."""

    surface_angle: float
    alpha: float
    tip_angle_achieved: float
    outer_iterations: int
    inner_solution: ElasticaSolution


@dataclass(frozen=True)
class AlphaTableRow:
    """One row of a load table; ``error`` is set when the angle failed."""

    surface_angle: float
    alpha: float | None
    result: AlphaResult | None
    error: str | None = None


def _validate_angle(surface_angle: float) -> None:
    if not (0.0 <= surface_angle < 0.5 * math.pi):
        raise ValueError(
            f"surface angle must be in [0, pi/2), got {surface_angle!r} rad"
        )


def solve_alpha_for_angle(
    surface_angle: float,
    geometry: BeamGeometry,
    config: SolverConfig = DEFAULT_CONFIG,
) -> AlphaResult:
    """Normalized load alpha whose solved tip angle equals ``surface_angle``.

    Brackets alpha by doubling until the tip angle passes the target (up to
    ``config.alpha_bracket_max``), then root-finds on the monotone map. The
    achieved tip angle matches the target within ``config.angle_tolerance``.

    Raises UnreachableAngleError when the target exceeds the tip angle
    attainable within the bracket bound, and ValueError for angles outside
    [0, pi/2).
    """
    _validate_angle(surface_angle)
    if surface_angle == 0.0:
        zero = solve_shape_shooting(NormalizedLoad(0.0), geometry, config)
        return AlphaResult(0.0, 0.0, 0.0, 0, zero)

    evals = 0
    last_alpha = 0.0
    last_slope: float | None = None

    def hint_for(a: float) -> float | None:
        # The converged base slope grows roughly linearly with alpha, so a
        # scaled previous slope keeps the shooting bracket tight even across
        # the doubling stages of the outer bracket search.
        if last_slope is None or last_alpha <= 0.0:
            return None
        return last_slope * (a / last_alpha)

    def tip_angle(a: float) -> float:
        nonlocal evals, last_alpha, last_slope
        evals += 1
        sol = solve_shape_shooting(
            NormalizedLoad(a), geometry, config, initial_slope_hint=hint_for(a)
        )
        if a > 0.0:
            last_alpha, last_slope = a, sol.initial_slope
        return sol.tip_angle

    hi = min(0.5, config.alpha_bracket_max)
    tip_hi = tip_angle(hi)
    while tip_hi < surface_angle:
        if hi >= config.alpha_bracket_max:
            raise UnreachableAngleError(
                f"tip angle {tip_hi:.6f} rad at alpha={hi:g} is below the "
                f"requested {surface_angle:.6f} rad; raise alpha_bracket_max "
                "if a solution is expected",
                max_tip_angle=tip_hi,
            )
        hi = min(2.0 * hi, config.alpha_bracket_max)
        tip_hi = tip_angle(hi)

    alpha_star = brentq(
        lambda a: tip_angle(a) - surface_angle,
        0.0,
        hi,
        xtol=1e-12,
        maxiter=config.max_iterations,
    )
    solution = solve_shape_shooting(
        NormalizedLoad(alpha_star), geometry, config, initial_slope_hint=hint_for(alpha_star)
    )
    evals += 1
    achieved = solution.tip_angle
    if abs(achieved - surface_angle) > config.angle_tolerance:
        raise UnreachableAngleError(
            f"root search left tip angle {achieved:.8f} rad off target "
            f"{surface_angle:.8f} rad",
            max_tip_angle=achieved,
        )
    return AlphaResult(surface_angle, alpha_star, achieved, evals, solution)


def generate_alpha_table(
    angles: list[float],
    geometry: BeamGeometry,
    config: SolverConfig = DEFAULT_CONFIG,
) -> list[AlphaTableRow]:
    """Solve :func:`solve_alpha_for_angle` for each angle, order preserved.

    Angles are computed independently; a failing angle yields a row with
    its error message instead of aborting the whole table.
    """
    rows = []
    for angle in angles:
        try:
            result = solve_alpha_for_angle(angle, geometry, config)
        except (SolverError, ValueError) as exc:
            rows.append(AlphaTableRow(angle, None, None, str(exc)))
        else:
            rows.append(AlphaTableRow(angle, result.alpha, result))
    return rows


def linearized_alpha(surface_angle: float, geometry: BeamGeometry) -> float:
    """Small-angle closed-form load: the root of sqrt(a) tan(sqrt(a)) = gamma L / R.

    Linearizing the pendulum-form beam equation gives
    tip_angle = (R/L) sqrt(a) tan(sqrt(a)), whose inversion requires
    sqrt(a) below the tangent singularity at pi/2. For small angles the
    relation reduces to alpha ~= gamma L / R. Intended as an independent
    check of the nonlinear solver at small angles, not as a production path.
    """
    if not (0.0 < surface_angle < 0.5 * math.pi):
        raise ValueError(
            f"surface angle must be in (0, pi/2), got {surface_angle!r} rad"
        )
    if geometry.radius_ratio <= 0.0:
        raise ValueError("the closed form needs a positive pad radius")
    target = surface_angle / geometry.radius_ratio

    def f(u: float) -> float:
        return u * math.tan(u) - target

    lo = 1e-12
    hi = 0.5 * math.pi * (1.0 - 1e-12)
    if f(hi) <= 0.0:
        raise OracleRangeError(
            f"no root below the tangent singularity for gamma*L/R = {target:g}"
        )
    u = brentq(f, lo, hi, xtol=1e-15)
    return u * u
