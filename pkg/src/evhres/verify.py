"""Scaled fine-time-step verification of a selected design.

A design is shrunk by the ratio of full-scale peak demand to the test bench
power rating, then driven through one day at minute resolution. The run passes
when the per-step power balance stays within the allowed loss rate and the
battery state of charge never leaves its window. Designs are tried in rank
order until one passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .demand import DemandCurve, HOURS_PER_DAY
from .dispatch import BatteryParams, Configuration, dispatch_step
from .errors import InvalidParameterError
from .mcdm import RankedDesign
from .resources import (
    PowerCurve,
    SolarResource,
    WindResource,
    daily_irradiance_kw,
    diurnal_wind_speed,
)

CONDITION_POWER_BALANCE = "power-balance"
CONDITION_SOC_BOUNDS = "soc-bounds"
_SOC_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VerificationLimits:
    max_loss_rate: float = 0.05
    soc_min: float = 0.30
    soc_max: float = 1.00

    def __post_init__(self) -> None:
        if not 0.0 < self.max_loss_rate < 1.0:
            raise InvalidParameterError("max_loss_rate must be in (0, 1)")
        if not 0.0 <= self.soc_min < self.soc_max <= 1.0:
            raise InvalidParameterError("require 0 <= soc_min < soc_max <= 1")


@dataclass(frozen=True)
class ScaledScenario:
    """One day of demand and generation shrunk to bench size."""

    sf: float
    step_minutes: int
    start_hour: int
    demand_kw: np.ndarray
    pv_kw: float
    wind_kw: float
    diesel_kw: float
    grid_limit_kw: float
    battery_kwh: float
    pv_trace: np.ndarray | None = None
    wind_trace: np.ndarray | None = None
    label: str = ""

    @property
    def n_steps(self) -> int:
        return self.demand_kw.size

    @property
    def dt_h(self) -> float:
        return self.step_minutes / 60.0


@dataclass
class VerificationReport:
    label: str
    sf: float
    step_minutes: int
    start_hour: int
    passed: bool
    failed_condition: str | None
    max_loss_rate: float
    loss_rate: np.ndarray
    soc: np.ndarray
    demand_kw: np.ndarray
    pv_kw: np.ndarray
    wind_kw: np.ndarray
    battery_kw: np.ndarray  # +discharge / -charge
    grid_kw: np.ndarray  # +import / -export
    diesel_kw: np.ndarray
    unmet_kw: np.ndarray
    curtailed_kw: np.ndarray

    @property
    def soc_min_observed(self) -> float:
        return float(self.soc.min())

    @property
    def soc_max_observed(self) -> float:
        return float(self.soc.max())

    @property
    def start_soc(self) -> float:
        return float(self.soc[0])

    @property
    def end_soc(self) -> float:
        return float(self.soc[-1])

    def summary(self) -> dict:
        return {
            "label": self.label,
            "scale_factor": self.sf,
            "step_minutes": self.step_minutes,
            "start_hour": self.start_hour,
            "passed": self.passed,
            "failed_condition": self.failed_condition,
            "max_loss_rate": self.max_loss_rate,
            "soc_start": self.start_soc,
            "soc_end": self.end_soc,
            "soc_min": self.soc_min_observed,
            "soc_max": self.soc_max_observed,
        }


def scale(
    cfg: Configuration,
    demand: DemandCurve,
    p_lab_kw: float,
    step_minutes: int = 1,
    start_hour: int = 0,
) -> ScaledScenario:
    """Shrink a design and one demand day by peak demand over bench power.

    The demand template is held as an hourly staircase at the requested step,
    starting at ``start_hour`` and wrapping around midnight.
    """
    if p_lab_kw <= 0:
        raise InvalidParameterError("p_lab_kw must be > 0")
    if step_minutes <= 0 or (HOURS_PER_DAY * 60) % step_minutes != 0:
        raise InvalidParameterError("step must divide 24 h into whole steps")
    sf = demand.peak_kw / p_lab_kw
    if sf <= 0:
        raise InvalidParameterError("demand peak must be > 0")
    daily = np.asarray(demand.p[:HOURS_PER_DAY], dtype=float)
    if daily.size != HOURS_PER_DAY:
        raise InvalidParameterError("demand must cover at least one day")
    per_hour = 60 // step_minutes
    hours = np.roll(daily, -start_hour)
    stair = np.repeat(hours, per_hour) / sf
    return ScaledScenario(
        sf=sf,
        step_minutes=step_minutes,
        start_hour=start_hour,
        demand_kw=stair,
        pv_kw=cfg.pv_kw / sf,
        wind_kw=cfg.wind_kw / sf,
        diesel_kw=cfg.diesel_kw / sf,
        grid_limit_kw=cfg.grid_limit_kw / sf,
        battery_kwh=cfg.battery_kwh / sf,
        label=cfg.label,
    )


def with_generation_traces(
    sc: ScaledScenario,
    solar: SolarResource,
    wind: WindResource,
    power_curve: PowerCurve,
    derate: float,
    diurnal_amplitude: float,
    month: int = 3,
    wind_fluctuation: float = 0.3,
    seed: int = 0,
) -> ScaledScenario:
    """Attach one day of deterministic generation at scenario scale.

    The solar trace is the instantaneous half-sine of the chosen month; the
    wind trace is the diurnal speed overlaid with seeded multiplicative
    high-frequency fluctuation before the power curve.
    """
    if not 0 <= month <= 11:
        raise InvalidParameterError("month must be in 0..11")
    if wind_fluctuation < 0:
        raise InvalidParameterError("wind_fluctuation must be >= 0")
    n = sc.n_steps
    dt_h = sc.dt_h
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n)
    pv_trace = np.zeros(n)
    wind_trace = np.zeros(n)
    daily_kwh = solar.monthly_daily_irradiation[month]
    for i in range(n):
        hour = (sc.start_hour + (i + 0.5) * dt_h) % HOURS_PER_DAY
        if sc.pv_kw > 0:
            irr = daily_irradiance_kw(solar.latitude_deg, month, daily_kwh, hour)
            pv_trace[i] = min(sc.pv_kw, sc.pv_kw * derate * irr)
        if sc.wind_kw > 0:
            speed = diurnal_wind_speed(wind, month, hour, diurnal_amplitude)
            speed = max(0.0, speed * (1.0 + wind_fluctuation * noise[i]))
            wind_trace[i] = sc.wind_kw * power_curve.fraction(speed)
    return replace(sc, pv_trace=pv_trace, wind_trace=wind_trace)


def verify_run(
    sc: ScaledScenario,
    bat: BatteryParams,
    limits: VerificationLimits,
    diesel_min_load_fraction: float = 0.0,
) -> VerificationReport:
    """Drive the scaled day through the dispatch kernel and check both
    acceptance conditions.

    The per-step loss rate is |delivered - demanded| / delivered. Steps with
    neither supply nor demand are skipped; demand met by no supply at all is
    an immediate power-balance failure.
    """
    if sc.pv_trace is None or sc.wind_trace is None:
        raise InvalidParameterError("scenario has no generation traces")
    minutes = sc.n_steps * sc.step_minutes
    if minutes != HOURS_PER_DAY * 60:
        raise InvalidParameterError(
            f"scenario must cover exactly 24 h, got {minutes} minutes"
        )
    if not math.isclose(bat.capacity_kwh, sc.battery_kwh, rel_tol=1e-9, abs_tol=1e-12):
        raise InvalidParameterError("battery capacity does not match the scaled scenario")

    n = sc.n_steps
    dt_h = sc.dt_h
    charge = np.zeros(n)
    discharge = np.zeros(n)
    grid = np.zeros(n)
    export = np.zeros(n)
    diesel = np.zeros(n)
    unmet = np.zeros(n)
    curtailed = np.zeros(n)
    loss = np.zeros(n)
    soc = np.zeros(n + 1)

    capacity = sc.battery_kwh
    soc[0] = bat.initial_soc if capacity > 0 else 0.0
    eta = bat.one_way_efficiency
    power_limit = bat.max_c_rate * capacity
    diesel_min = diesel_min_load_fraction * sc.diesel_kw

    failed: str | None = None
    for t in range(n):
        load = float(sc.demand_kw[t])
        ren = float(sc.pv_trace[t] + sc.wind_trace[t])
        (charge[t], discharge[t], grid[t], export[t], diesel[t],
         unmet[t], curtailed[t], soc[t + 1]) = dispatch_step(
            load, ren, float(soc[t]), dt_h,
            capacity, bat.soc_min, bat.soc_max, eta, power_limit,
            sc.grid_limit_kw, sc.diesel_kw, diesel_min,
        )
        delivered = load - unmet[t]
        if delivered <= 0.0:
            if load > 0.0:
                loss[t] = math.inf
                if failed is None:
                    failed = CONDITION_POWER_BALANCE
            continue
        loss[t] = abs(delivered - load) / delivered

    max_loss = float(loss.max()) if n else 0.0
    if failed is None and max_loss > limits.max_loss_rate:
        failed = CONDITION_POWER_BALANCE
    if failed is None and capacity > 0:
        if soc.min() < limits.soc_min - _SOC_TOLERANCE or soc.max() > limits.soc_max + _SOC_TOLERANCE:
            failed = CONDITION_SOC_BOUNDS

    return VerificationReport(
        label=sc.label,
        sf=sc.sf,
        step_minutes=sc.step_minutes,
        start_hour=sc.start_hour,
        passed=failed is None,
        failed_condition=failed,
        max_loss_rate=max_loss,
        loss_rate=loss,
        soc=soc,
        demand_kw=sc.demand_kw.copy(),
        pv_kw=sc.pv_trace.copy(),
        wind_kw=sc.wind_trace.copy(),
        battery_kw=discharge - charge,
        grid_kw=grid - export,
        diesel_kw=diesel,
        unmet_kw=unmet,
        curtailed_kw=curtailed,
    )


def verify_cascade(
    ranked: list[RankedDesign],
    bat: BatteryParams,
    limits: VerificationLimits,
    scenario_builder: Callable[[Configuration], ScaledScenario],
    max_attempts: int | None = None,
    diesel_min_load_fraction: float = 0.0,
) -> tuple[RankedDesign | None, list[VerificationReport]]:
    """Verify designs in rank order, returning the first pass and all reports.

    ``scenario_builder`` turns a configuration into a trace-bearing scaled
    scenario; the battery template is resized per design.
    """
    if not ranked:
        raise InvalidParameterError("at least one ranked design is required")
    reports: list[VerificationReport] = []
    for design in ranked:
        if max_attempts is not None and len(reports) >= max_attempts:
            break
        sc = scenario_builder(design.configuration)
        report = verify_run(sc, bat.with_capacity(sc.battery_kwh), limits,
                            diesel_min_load_fraction)
        reports.append(report)
        if report.passed:
            return design, reports
    return None, reports
