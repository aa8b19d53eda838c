"""Binary logit of mode-inference error, estimated by Newton-Raphson.

The outcome is 1 when the inferred mode disagrees with the validated mode.
Features follow the final specification: a constant, self-reported mode
dummies (taxi/ride-hail and motorcycle carry none), speed and distance
dummies, log population density at the leg origin, and two trip-maker
dummies. The log-likelihood is globally concave, so Newton iterations with
a step-halving safeguard converge from beta = 0; standard errors come from
the inverse negative Hessian at the optimum.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .diary import Employment, Respondent, TripLeg
from .errors import (
    EmptyZoneTableError,
    InvalidLikelihoodsError,
    MissingLabelError,
    NoConvergenceError,
    NonpositiveDensityError,
    RankDeficientError,
    SeparationError,
    ZeroDurationError,
)
from .geo import haversine_m
from .kml import GeoPoint

FEATURE_NAMES: tuple[str, ...] = (
    "constant",
    "mode_automobile",
    "mode_local_transit",
    "mode_regional_transit",
    "mode_cycle_walk",
    "speed_lt_5_kmh",
    "speed_5_19_kmh",
    "distance_ge_5_km",
    "ln_pop_density",
    "age_lt_30",
    "full_time_worker",
)

N_FEATURES = len(FEATURE_NAMES)

SPEED_LOW_KMH = 5.0
SPEED_REFERENCE_KMH = 20.0
DISTANCE_DUMMY_KM = 5.0


@dataclass(frozen=True, slots=True)
class OriginContext:
    """Land use at the trip-leg origin (thousand persons per square km)."""

    population_density_kppl_km2: float


@dataclass(frozen=True, slots=True)
class DesignRow:
    y: int
    x: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.y not in (0, 1):
            raise ValueError(f"outcome must be 0/1: {self.y}")
        if len(self.x) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} features, got {len(self.x)}")


# Self-reported modes that carry a dummy, and the feature it sets.
_MODE_DUMMY = {
    "automobile": 1,
    "local_transit": 2,
    "regional_transit": 3,
    "cycle": 4,
    "walk": 4,
}


def build_design(leg: TripLeg, respondent: Respondent, origin: OriginContext) -> DesignRow:
    """Turn one labeled trip leg into a design-matrix row.

    Raises:
        MissingLabelError: the leg lacks an inferred or validated mode.
        ZeroDurationError: average speed is undefined.
        NonpositiveDensityError: the log-density term cannot be computed.
    """
    if leg.validated_mode is None or leg.inferred_mode is None:
        raise MissingLabelError("leg must carry both an inferred and a validated mode")
    if leg.duration_s <= 0.0:
        raise ZeroDurationError("leg duration must be positive to compute speed")
    if origin.population_density_kppl_km2 <= 0.0:
        raise NonpositiveDensityError(
            f"population density must be positive: {origin.population_density_kppl_km2}"
        )

    x = [0.0] * N_FEATURES
    x[0] = 1.0
    dummy = _MODE_DUMMY.get(leg.validated_mode.value)
    if dummy is not None:
        x[dummy] = 1.0

    speed = leg.avg_speed_kmh
    assert speed is not None
    if speed < SPEED_LOW_KMH:
        x[5] = 1.0
    elif speed < SPEED_REFERENCE_KMH:
        x[6] = 1.0

    if leg.distance_m / 1000.0 >= DISTANCE_DUMMY_KM:
        x[7] = 1.0
    x[8] = math.log(origin.population_density_kppl_km2)
    if respondent.age < 30:
        x[9] = 1.0
    if respondent.employment is Employment.FULL_TIME:
        x[10] = 1.0

    return DesignRow(y=int(leg.inferred_mode != leg.validated_mode), x=tuple(x))


def _as_arrays(rows: Sequence[DesignRow]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([r.x for r in rows], dtype=float)
    y = np.array([r.y for r in rows], dtype=float)
    return X, y


def _ll(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    # y*ln p + (1-y)*ln(1-p) in log-sum-exp form, stable for large |X beta|.
    z = X @ beta
    return float(-(y * np.logaddexp(0.0, -z)).sum() - ((1.0 - y) * np.logaddexp(0.0, z)).sum())


def _probabilities(beta: np.ndarray, X: np.ndarray) -> np.ndarray:
    z = X @ beta
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _hessian_np(X: np.ndarray, p: np.ndarray) -> np.ndarray:
    H = -(X.T * (p * (1.0 - p))) @ X
    return (H + H.T) / 2.0  # exact symmetry; the math already is


def log_likelihood(beta: Sequence[float], rows: Sequence[DesignRow]) -> float:
    X, y = _as_arrays(rows)
    return _ll(np.asarray(beta, dtype=float), X, y)


def gradient(beta: Sequence[float], rows: Sequence[DesignRow]) -> np.ndarray:
    X, y = _as_arrays(rows)
    p = _probabilities(np.asarray(beta, dtype=float), X)
    return X.T @ (y - p)


def hessian(beta: Sequence[float], rows: Sequence[DesignRow]) -> np.ndarray:
    X, _ = _as_arrays(rows)
    return _hessian_np(X, _probabilities(np.asarray(beta, dtype=float), X))


def constant_only_log_likelihood(n_total: int, n_positive: int) -> float:
    """Closed-form LL of the intercept-only model at its optimum."""
    if not 0 < n_positive < n_total:
        raise InvalidLikelihoodsError(
            f"need both outcome classes: {n_positive} of {n_total} positive"
        )
    p = n_positive / n_total
    return n_positive * math.log(p) + (n_total - n_positive) * math.log(1.0 - p)


def rho_square(ll_full: float, ll_constant: float) -> float:
    """Goodness of fit against the constant-only model: 1 - LLfull/LLconst."""
    if ll_constant >= 0.0:
        raise InvalidLikelihoodsError(f"constant-only LL must be negative: {ll_constant}")
    if ll_full < ll_constant:
        raise InvalidLikelihoodsError(
            f"full-model LL {ll_full} below constant-only LL {ll_constant}"
        )
    return 1.0 - ll_full / ll_constant


@dataclass(frozen=True, slots=True)
class FitOptions:
    gradient_tol: float = 1e-8
    step_tol: float = 1e-10
    max_iterations: int = 100
    separation_threshold: float = 50.0


@dataclass(frozen=True, slots=True)
class LogitFit:
    feature_names: tuple[str, ...]
    beta: tuple[float, ...]
    se: tuple[float, ...]
    t: tuple[float, ...]
    ll_full: float
    ll_constant_only: float
    rho_square: float
    iterations: int
    converged: bool
    n_obs: int
    ll_path: tuple[float, ...]  # accepted LL after each iteration, never decreasing


def fit(rows: Sequence[DesignRow], options: FitOptions | None = None) -> LogitFit:
    """Maximum-likelihood fit by Newton-Raphson from beta = 0.

    Raises:
        RankDeficientError: collinear design columns.
        SeparationError: a coefficient diverges (|beta| beyond threshold).
        NoConvergenceError: iteration budget exhausted.
    """
    opts = options or FitOptions()
    X, y = _as_arrays(rows)
    n, k = X.shape
    n_positive = int(y.sum())
    if not 0 < n_positive < n:
        raise InvalidLikelihoodsError("need at least one row of each outcome class")
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficientError("design matrix is rank deficient")

    beta = np.zeros(k)
    ll = _ll(beta, X, y)
    ll_path = [ll]
    converged = False
    iterations = 0

    for iterations in range(1, opts.max_iterations + 1):
        p = _probabilities(beta, X)
        g = X.T @ (y - p)
        if float(np.abs(g).max()) < opts.gradient_tol:
            converged = True
            iterations -= 1
            break
        H = _hessian_np(X, p)
        try:
            step = np.linalg.solve(-H, g)
        except np.linalg.LinAlgError:
            raise RankDeficientError("Hessian is singular") from None

        # Step halving keeps the LL non-decreasing on every accepted iterate.
        scale = 1.0
        while scale > 2.0**-40:
            candidate = beta + scale * step
            ll_new = _ll(candidate, X, y)
            if ll_new >= ll:
                break
            scale /= 2.0
        else:
            converged = float(np.abs(g).max()) < opts.gradient_tol
            break

        beta = candidate
        ll = ll_new
        ll_path.append(ll)
        if float(np.abs(beta).max()) > opts.separation_threshold:
            raise SeparationError(
                "a coefficient diverged; the outcome is (quasi-)separated"
            )
        if float(np.abs(scale * step).max()) < opts.step_tol:
            converged = True
            break

    if not converged:
        raise NoConvergenceError(f"no convergence after {opts.max_iterations} iterations")

    p = _probabilities(beta, X)
    H = _hessian_np(X, p)
    covariance = np.linalg.inv(-H)
    se = np.sqrt(np.diag(covariance))
    ll_constant = constant_only_log_likelihood(n, n_positive)
    ll_full = _ll(beta, X, y)

    return LogitFit(
        feature_names=FEATURE_NAMES,
        beta=tuple(float(b) for b in beta),
        se=tuple(float(s) for s in se),
        t=tuple(float(b / s) for b, s in zip(beta, se)),
        ll_full=ll_full,
        ll_constant_only=ll_constant,
        rho_square=rho_square(ll_full, ll_constant),
        iterations=iterations,
        converged=converged,
        n_obs=n,
        ll_path=tuple(ll_path),
    )


# --- Zone density lookup -----------------------------------------------------


@dataclass(frozen=True, slots=True)
class Zone:
    zone_id: str
    centroid: GeoPoint
    density_kppl_km2: float


def load_zones_csv(path: str | Path) -> list[Zone]:
    """Read zones from a CSV of zone_id,centroid_lat,centroid_lon,density_kppl_km2."""
    zones = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            density = float(row["density_kppl_km2"])
            if density <= 0.0:
                raise NonpositiveDensityError(
                    f"zone {row['zone_id']}: density must be positive, got {density}"
                )
            zones.append(
                Zone(
                    zone_id=row["zone_id"].strip(),
                    centroid=GeoPoint(float(row["centroid_lat"]), float(row["centroid_lon"])),
                    density_kppl_km2=density,
                )
            )
    return zones


def lookup_density(point: GeoPoint, zones: Sequence[Zone]) -> OriginContext:
    """Density of the nearest zone centroid; distance ties go to the lower id."""
    if not zones:
        raise EmptyZoneTableError("zone table is empty")
    best = min(zones, key=lambda z: (haversine_m(point, z.centroid), z.zone_id))
    return OriginContext(population_density_kppl_km2=best.density_kppl_km2)


# --- Reporting ----------------------------------------------------------------


def fit_report_json(result: LogitFit) -> dict:
    return {
        "schema": "glh-logit-fit/1",
        "features": list(result.feature_names),
        "beta": list(result.beta),
        "se": list(result.se),
        "t": list(result.t),
        "ll_full": result.ll_full,
        "ll_constant_only": result.ll_constant_only,
        "rho_square": result.rho_square,
        "iterations": result.iterations,
        "converged": result.converged,
        "n_obs": result.n_obs,
    }


def fit_report_text(result: LogitFit) -> str:
    """Estimation table: coefficient and t-statistic per feature, then the
    log-likelihoods and rho-square."""
    width = max(len(name) for name in result.feature_names)
    lines = [f"{'':<{width}}  {'coefficient':>12}  {'t-statistic':>12}"]
    for name, b, t in zip(result.feature_names, result.beta, result.t):
        lines.append(f"{name:<{width}}  {b:>12.4f}  {t:>12.2f}")
    lines.append(f"{'Log-likelihood of the full model':<{width}}  {result.ll_full:>12.2f}")
    lines.append(
        f"{'Log-likelihood of the constant-only model':<{width}}  {result.ll_constant_only:>12.2f}"
    )
    lines.append(f"{'Rho-square against the constant-only model':<{width}}  {result.rho_square:>12.2f}")
    lines.append(
        f"converged: {result.converged} after {result.iterations} iterations on {result.n_obs} rows"
    )
    return "\n".join(lines) + "\n"
