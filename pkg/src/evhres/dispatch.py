"""Annual energy-balance simulation and lifetime cost of one configuration.

Dispatch is plain load following. Deficits are served by renewables first,
then the remaining sources in merit order: on grid the connection backstops
residual load before storage, off grid storage discharges before the diesel
generator. Surpluses are absorbed in the order battery charge, grid export,
curtailment. The state of charge carries the only inter-hour coupling, so the
year is simulated sequentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .demand import DAYS_PER_YEAR, DemandCurve, HOURS_PER_YEAR
from .errors import InvalidParameterError
from .resources import GenerationProfile

BALANCE_TOLERANCE_KWH = 1e-6


@dataclass(frozen=True)
class Configuration:
    """One candidate generation mix for the station."""

    pv_kw: float = 0.0
    wind_kw: float = 0.0
    grid_connected: bool = False
    grid_limit_kw: float = 0.0
    diesel_kw: float = 0.0
    battery_kwh: float = 0.0
    label: str = ""

    def __post_init__(self) -> None:
        for name in ("pv_kw", "wind_kw", "grid_limit_kw", "diesel_kw", "battery_kwh"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")
        if self.grid_connected != (self.grid_limit_kw > 0):
            raise InvalidParameterError("grid_limit_kw must be > 0 exactly when grid_connected")
        if not self.label:
            object.__setattr__(self, "label", self.default_label())

    def default_label(self) -> str:
        parts = []
        if self.pv_kw > 0 or self.wind_kw > 0:
            parts.append("Ren")
        if self.grid_connected:
            parts.append("grid")
        if self.diesel_kw > 0:
            parts.append("gen")
        if self.battery_kwh > 0:
            parts.append("bat")
        return " + ".join(parts) if parts else "none"

    @property
    def has_renewables(self) -> bool:
        return self.pv_kw > 0 or self.wind_kw > 0

    def key(self) -> tuple:
        return (self.pv_kw, self.wind_kw, self.grid_connected, self.grid_limit_kw,
                self.diesel_kw, self.battery_kwh)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "pv_kw": self.pv_kw,
            "wind_kw": self.wind_kw,
            "grid_connected": self.grid_connected,
            "grid_limit_kw": self.grid_limit_kw,
            "diesel_kw": self.diesel_kw,
            "battery_kwh": self.battery_kwh,
        }


@dataclass(frozen=True)
class BatteryParams:
    """Storage technology parameters; capacity matches the configuration."""

    capacity_kwh: float
    soc_min: float = 0.3
    soc_max: float = 1.0
    roundtrip_efficiency: float = 0.9
    max_c_rate: float = 0.25  # 1/h, bus-side power limit per kWh of capacity
    initial_soc: float = 0.5

    def __post_init__(self) -> None:
        if self.capacity_kwh < 0:
            raise InvalidParameterError("capacity_kwh must be >= 0")
        if not 0.0 <= self.soc_min < self.soc_max <= 1.0:
            raise InvalidParameterError("require 0 <= soc_min < soc_max <= 1")
        if not 0.0 < self.roundtrip_efficiency <= 1.0:
            raise InvalidParameterError("roundtrip_efficiency must be in (0, 1]")
        if self.max_c_rate <= 0:
            raise InvalidParameterError("max_c_rate must be > 0")
        if not self.soc_min <= self.initial_soc <= self.soc_max:
            raise InvalidParameterError("initial_soc must lie within [soc_min, soc_max]")

    def with_capacity(self, capacity_kwh: float) -> "BatteryParams":
        return replace(self, capacity_kwh=capacity_kwh)

    @property
    def one_way_efficiency(self) -> float:
        return math.sqrt(self.roundtrip_efficiency)


@dataclass(frozen=True)
class EconParams:
    """Investment, operating and fuel costs plus project financing."""

    pv_invest_per_kw: float = 1200.0
    pv_om_per_kw_yr: float = 40.0
    wind_invest_per_kw: float = 2020.0
    wind_om_per_kw_yr: float = 60.0
    diesel_invest_per_kw: float = 380.0
    diesel_om_per_hour: float = 1.5
    diesel_fuel_per_litre: float = 1.05
    diesel_litres_per_kwh: float = 0.3
    battery_invest_per_unit: float = 950.0
    battery_om_per_unit_yr: float = 10.0
    battery_unit_kwh: float = 8.0
    battery_float_life_yr: float = 12.0
    # Discharge throughput a unit survives, in kWh per kWh of capacity.
    battery_cycle_life_kwh_per_kwh: float = 840.0
    lifetime_yr: int = 25
    discount_rate: float = 0.08
    grid_price_per_kwh: float = 0.15
    grid_sellback_per_kwh: float | None = None  # None means net metering

    def __post_init__(self) -> None:
        if self.lifetime_yr <= 0:
            raise InvalidParameterError("lifetime_yr must be > 0")
        if not 0.0 <= self.discount_rate < 1.0:
            raise InvalidParameterError("discount_rate must be in [0, 1)")
        for name in (
            "pv_invest_per_kw", "pv_om_per_kw_yr", "wind_invest_per_kw", "wind_om_per_kw_yr",
            "diesel_invest_per_kw", "diesel_om_per_hour", "diesel_fuel_per_litre",
            "diesel_litres_per_kwh", "battery_invest_per_unit", "battery_om_per_unit_yr",
            "grid_price_per_kwh",
        ):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")
        if self.battery_unit_kwh <= 0:
            raise InvalidParameterError("battery_unit_kwh must be > 0")
        if self.battery_float_life_yr <= 0 or self.battery_cycle_life_kwh_per_kwh <= 0:
            raise InvalidParameterError("battery life parameters must be > 0")

    @property
    def sellback_price(self) -> float:
        if self.grid_sellback_per_kwh is None:
            return self.grid_price_per_kwh
        return self.grid_sellback_per_kwh

    def discount_sum(self) -> float:
        r = self.discount_rate
        return sum((1.0 + r) ** -t for t in range(1, self.lifetime_yr + 1))


@dataclass
class EnergyLedger:
    """Hourly traces and annual aggregates from one simulated year."""

    configuration: Configuration
    demand_kw: np.ndarray
    pv_kw: np.ndarray
    wind_kw: np.ndarray
    battery_charge_kw: np.ndarray
    battery_discharge_kw: np.ndarray
    grid_import_kw: np.ndarray
    grid_export_kw: np.ndarray
    diesel_kw: np.ndarray
    unmet_kw: np.ndarray
    curtailed_kw: np.ndarray
    soc: np.ndarray  # length n+1, fraction
    diesel_litres_per_kwh: float
    resolution_h: float = 1.0

    def __post_init__(self) -> None:
        residual = self.balance_residual_kwh()
        worst = float(np.abs(residual).max()) if residual.size else 0.0
        if worst >= BALANCE_TOLERANCE_KWH:
            raise InvalidParameterError(
                f"energy balance violated: max residual {worst:.3e} kWh"
            )

    def balance_residual_kwh(self) -> np.ndarray:
        """Per-step supply minus demand minus charge plus discharge minus
        curtailment plus unmet; zero when the ledger is consistent."""
        supply = self.pv_kw + self.wind_kw + self.grid_import_kw + self.diesel_kw
        return (
            supply - self.demand_kw - self.battery_charge_kw + self.battery_discharge_kw
            - self.curtailed_kw - self.grid_export_kw + self.unmet_kw
        ) * self.resolution_h

    # -- annual aggregates -------------------------------------------------

    def _sum(self, arr: np.ndarray) -> float:
        return float(arr.sum() * self.resolution_h)

    @property
    def demand_kwh(self) -> float:
        return self._sum(self.demand_kw)

    @property
    def pv_kwh(self) -> float:
        return self._sum(self.pv_kw)

    @property
    def wind_kwh(self) -> float:
        return self._sum(self.wind_kw)

    @property
    def diesel_kwh(self) -> float:
        return self._sum(self.diesel_kw)

    @property
    def grid_import_kwh(self) -> float:
        return self._sum(self.grid_import_kw)

    @property
    def grid_export_kwh(self) -> float:
        return self._sum(self.grid_export_kw)

    @property
    def unmet_kwh(self) -> float:
        return self._sum(self.unmet_kw)

    @property
    def curtailed_kwh(self) -> float:
        return self._sum(self.curtailed_kw)

    @property
    def battery_charge_kwh(self) -> float:
        return self._sum(self.battery_charge_kw)

    @property
    def battery_discharge_kwh(self) -> float:
        return self._sum(self.battery_discharge_kw)

    @property
    def battery_throughput_kwh(self) -> float:
        return self.battery_charge_kwh + self.battery_discharge_kwh

    @property
    def diesel_runtime_h(self) -> float:
        return float((self.diesel_kw > 0).sum() * self.resolution_h)

    @property
    def diesel_fuel_l(self) -> float:
        return self.diesel_kwh * self.diesel_litres_per_kwh

    @property
    def production_kwh(self) -> float:
        """Total energy entering the system: renewable production (including
        any later curtailed), diesel output and grid purchases."""
        return self.pv_kwh + self.wind_kwh + self.diesel_kwh + self.grid_import_kwh

    @property
    def served_kwh(self) -> float:
        return self.demand_kwh - self.unmet_kwh

    @property
    def shortage_fraction(self) -> float:
        if self.demand_kwh == 0:
            return 0.0
        return self.unmet_kwh / self.demand_kwh

    def source_energies(self) -> dict[str, float]:
        """Annual energy by source, kWh; renewables on a production basis."""
        return {
            "pv": self.pv_kwh,
            "wind": self.wind_kwh,
            "diesel": self.diesel_kwh,
            "grid": self.grid_import_kwh,
        }

    def summary(self) -> dict:
        return {
            "configuration": self.configuration.to_dict(),
            "demand_kwh": self.demand_kwh,
            "production_kwh": self.production_kwh,
            "served_kwh": self.served_kwh,
            "pv_kwh": self.pv_kwh,
            "wind_kwh": self.wind_kwh,
            "diesel_kwh": self.diesel_kwh,
            "grid_import_kwh": self.grid_import_kwh,
            "grid_export_kwh": self.grid_export_kwh,
            "unmet_kwh": self.unmet_kwh,
            "curtailed_kwh": self.curtailed_kwh,
            "battery_charge_kwh": self.battery_charge_kwh,
            "battery_discharge_kwh": self.battery_discharge_kwh,
            "battery_throughput_kwh": self.battery_throughput_kwh,
            "diesel_runtime_h": self.diesel_runtime_h,
            "diesel_fuel_l": self.diesel_fuel_l,
            "shortage_fraction": self.shortage_fraction,
            "soc_min": float(self.soc.min()),
            "soc_max": float(self.soc.max()),
        }


def dispatch_step(
    load_kw: float,
    renewable_kw: float,
    soc: float,
    dt_h: float,
    capacity_kwh: float,
    soc_min: float,
    soc_max: float,
    eta_one_way: float,
    power_limit_kw: float,
    grid_limit_kw: float,
    diesel_kw: float,
    diesel_min_kw: float = 0.0,
) -> tuple[float, float, float, float, float, float, float, float]:
    """One load-following step shared by the annual and fine-step simulators.

    Returns (charge, discharge, grid_import, grid_export, diesel, unmet,
    curtailed, new_soc); power values are bus-side kW.

    A grid connection is the designated backstop: residual load goes to the
    grid up to its rating before storage is touched, keeping storage in
    reserve. Off grid, storage discharges before the generator. A running
    generator never throttles below ``diesel_min_kw``; output beyond the
    residual recharges the battery and is otherwise curtailed.
    """
    charge = discharge = grid_import = grid_export = diesel = unmet = curtailed = 0.0
    deficit = load_kw - renewable_kw
    if deficit > 0:
        if grid_limit_kw > 0:
            grid_import = min(deficit, grid_limit_kw)
            deficit -= grid_import
        if deficit > 0 and capacity_kwh > 0:
            headroom_kw = (soc - soc_min) * capacity_kwh * eta_one_way / dt_h
            discharge = min(deficit, power_limit_kw, headroom_kw)
            if discharge > 0:
                soc -= discharge * dt_h / (eta_one_way * capacity_kwh)
                deficit -= discharge
        if deficit > 0 and diesel_kw > 0:
            needed = min(deficit, diesel_kw)
            diesel = max(needed, min(diesel_min_kw, diesel_kw))
            deficit -= needed
            excess = diesel - needed
            if excess > 0 and capacity_kwh > 0:
                room_kw = (soc_max - soc) * capacity_kwh / (eta_one_way * dt_h)
                gen_charge = min(excess, power_limit_kw - charge, room_kw)
                if gen_charge > 0:
                    soc += gen_charge * dt_h * eta_one_way / capacity_kwh
                    charge += gen_charge
                    excess -= gen_charge
            curtailed += max(0.0, excess)
        unmet = max(0.0, deficit)
    else:
        surplus = -deficit
        if capacity_kwh > 0 and surplus > 0:
            room_kw = (soc_max - soc) * capacity_kwh / (eta_one_way * dt_h)
            charge = min(surplus, power_limit_kw, room_kw)
            if charge > 0:
                soc += charge * dt_h * eta_one_way / capacity_kwh
                surplus -= charge
        if surplus > 0 and grid_limit_kw > 0:
            grid_export = min(surplus, grid_limit_kw)
            surplus -= grid_export
        curtailed = max(0.0, surplus)
    if capacity_kwh > 0:
        soc = min(soc_max, max(soc_min, soc))
    return charge, discharge, grid_import, grid_export, diesel, unmet, curtailed, soc


def simulate_year(
    cfg: Configuration,
    demand: DemandCurve,
    profiles: dict[str, GenerationProfile],
    bat: BatteryParams,
    diesel_litres_per_kwh: float = 0.3,
    diesel_min_load_fraction: float = 0.0,
) -> EnergyLedger:
    """Simulate one year at hourly resolution and return the ledger."""
    if not 0.0 <= diesel_min_load_fraction <= 1.0:
        raise InvalidParameterError("diesel_min_load_fraction must be in [0, 1]")
    load = np.asarray(demand.p, dtype=float)
    if demand.resolution_h != 1.0 or load.size != HOURS_PER_YEAR:
        raise InvalidParameterError(
            f"annual simulation needs an hourly curve of {HOURS_PER_YEAR} steps"
        )
    pv_profile = profiles.get("pv")
    wind_profile = profiles.get("wind")
    for name, profile, kw in (("pv", pv_profile, cfg.pv_kw), ("wind", wind_profile, cfg.wind_kw)):
        if kw > 0:
            if profile is None:
                raise InvalidParameterError(f"missing {name} profile for {kw} kW of capacity")
            if not math.isclose(profile.nameplate_kw, kw, rel_tol=1e-9, abs_tol=1e-9):
                raise InvalidParameterError(
                    f"{name} profile nameplate {profile.nameplate_kw} != configured {kw} kW"
                )
    if not math.isclose(bat.capacity_kwh, cfg.battery_kwh, rel_tol=1e-9, abs_tol=1e-9):
        raise InvalidParameterError(
            f"battery capacity {bat.capacity_kwh} != configured {cfg.battery_kwh} kWh"
        )

    pv = pv_profile.p if (pv_profile is not None and cfg.pv_kw > 0) else np.zeros(HOURS_PER_YEAR)
    wind = wind_profile.p if (wind_profile is not None and cfg.wind_kw > 0) else np.zeros(HOURS_PER_YEAR)

    n = HOURS_PER_YEAR
    charge = np.zeros(n)
    discharge = np.zeros(n)
    grid_import = np.zeros(n)
    grid_export = np.zeros(n)
    diesel = np.zeros(n)
    unmet = np.zeros(n)
    curtailed = np.zeros(n)
    soc = np.zeros(n + 1)

    capacity = cfg.battery_kwh
    soc[0] = bat.initial_soc if capacity > 0 else 0.0
    eta = bat.one_way_efficiency
    power_limit = bat.max_c_rate * capacity
    grid_limit = cfg.grid_limit_kw if cfg.grid_connected else 0.0
    diesel_min = diesel_min_load_fraction * cfg.diesel_kw
    ren = pv + wind

    for t in range(n):
        (charge[t], discharge[t], grid_import[t], grid_export[t], diesel[t],
         unmet[t], curtailed[t], soc[t + 1]) = dispatch_step(
            float(load[t]), float(ren[t]), float(soc[t]), 1.0,
            capacity, bat.soc_min, bat.soc_max, eta, power_limit,
            grid_limit, cfg.diesel_kw, diesel_min,
        )

    return EnergyLedger(
        configuration=cfg,
        demand_kw=load,
        pv_kw=pv.copy(),
        wind_kw=wind.copy(),
        battery_charge_kw=charge,
        battery_discharge_kw=discharge,
        grid_import_kw=grid_import,
        grid_export_kw=grid_export,
        diesel_kw=diesel,
        unmet_kw=unmet,
        curtailed_kw=curtailed,
        soc=soc,
        diesel_litres_per_kwh=diesel_litres_per_kwh,
    )


def battery_life_years(cfg: Configuration, ledger: EnergyLedger, econ: EconParams) -> float:
    """Service life of the battery bank under the simulated cycling.

    Cycling shortens life below the float life when the lifetime discharge
    throughput would exceed the cycle budget.
    """
    if cfg.battery_kwh <= 0:
        return math.inf
    annual_discharge = ledger.battery_discharge_kwh
    if annual_discharge <= 0:
        return econ.battery_float_life_yr
    cycle_budget_kwh = econ.battery_cycle_life_kwh_per_kwh * cfg.battery_kwh
    return min(econ.battery_float_life_yr, cycle_budget_kwh / annual_discharge)


def battery_replacement_years(cfg: Configuration, ledger: EnergyLedger, econ: EconParams) -> list[float]:
    """Replacement instants within the project lifetime.

    A replacement close to the end of the project (less than half a battery
    life remaining) is skipped; nothing is replaced when the bank outlives the
    project.
    """
    life = battery_life_years(cfg, ledger, econ)
    if not math.isfinite(life) or life >= econ.lifetime_yr:
        return []
    years = []
    t = life
    while t < econ.lifetime_yr - life / 2.0:
        years.append(t)
        t += life
    return years


def annual_operating_cost(cfg: Configuration, ledger: EnergyLedger, econ: EconParams) -> float:
    """Recurring yearly cost: O&M, fuel, and the net grid bill."""
    units = cfg.battery_kwh / econ.battery_unit_kwh
    cost = (
        cfg.pv_kw * econ.pv_om_per_kw_yr
        + cfg.wind_kw * econ.wind_om_per_kw_yr
        + ledger.diesel_runtime_h * econ.diesel_om_per_hour
        + ledger.diesel_fuel_l * econ.diesel_fuel_per_litre
        + units * econ.battery_om_per_unit_yr
        + ledger.grid_import_kwh * econ.grid_price_per_kwh
        - ledger.grid_export_kwh * econ.sellback_price
    )
    return cost


def investment_cost(cfg: Configuration, econ: EconParams) -> float:
    units = cfg.battery_kwh / econ.battery_unit_kwh
    return (
        cfg.pv_kw * econ.pv_invest_per_kw
        + cfg.wind_kw * econ.wind_invest_per_kw
        + cfg.diesel_kw * econ.diesel_invest_per_kw
        + units * econ.battery_invest_per_unit
    )


def total_discounted_cost(cfg: Configuration, ledger: EnergyLedger, econ: EconParams) -> float:
    """Present value of investment, recurring costs and battery replacements."""
    r = econ.discount_rate
    cost = investment_cost(cfg, econ)
    cost += annual_operating_cost(cfg, ledger, econ) * econ.discount_sum()
    units = cfg.battery_kwh / econ.battery_unit_kwh
    for year in battery_replacement_years(cfg, ledger, econ):
        cost += units * econ.battery_invest_per_unit * (1.0 + r) ** -year
    return cost


def npc(cfg: Configuration, ledger: EnergyLedger, econ: EconParams) -> float:
    """Net present cost over the project lifetime, EUR."""
    if econ.lifetime_yr <= 0:
        raise InvalidParameterError("lifetime must be > 0")
    if ledger.configuration.key() != cfg.key():
        raise InvalidParameterError("ledger was simulated for a different configuration")
    return total_discounted_cost(cfg, ledger, econ)


def feasible(ledger: EnergyLedger, max_shortage: float = 0.1) -> bool:
    """True when unmet demand stays within the allowed shortage (inclusive)."""
    if ledger.demand_kwh == 0:
        return True
    return ledger.unmet_kwh <= max_shortage * ledger.demand_kwh + 1e-9
