"""Five assessment criteria, each scored in [0, 1].

Environmental: carbon emissions reduction relative to a grid-only station and
renewable generation degree. Economic: normalized levelized cost of energy.
Technical: security of supply and sizing adequacy. Source energies enter on a
production basis (what each source injects, before any curtailment of use).
"""

from __future__ import annotations

from dataclasses import dataclass

from .demand import DAYS_PER_YEAR, DemandCurve
from .dispatch import Configuration, EconParams, EnergyLedger, total_discounted_cost
from .errors import InvalidParameterError


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class EmissivityTable:
    """Carbon intensity by source, gCO2/kWh, and the grid renewable share."""

    pv: float = 40.0
    wind: float = 20.0
    diesel: float = 600.0
    grid: float = 318.1
    grid_renewable_fraction: float = 0.271

    def __post_init__(self) -> None:
        for name in ("pv", "wind", "diesel", "grid"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"emissivity {name} must be >= 0")
        if not 0.0 <= self.grid_renewable_fraction <= 1.0:
            raise InvalidParameterError("grid_renewable_fraction must be in [0, 1]")


@dataclass(frozen=True)
class ReliabilityTable:
    """Availability coefficient by source, fraction of time."""

    pv: float = 0.198
    wind: float = 0.216
    diesel: float = 0.857
    grid: float = 0.98
    battery: float = 0.70

    def __post_init__(self) -> None:
        for name in ("pv", "wind", "diesel", "grid", "battery"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidParameterError(f"reliability {name} must be in [0, 1]")


@dataclass(frozen=True)
class CriteriaScores:
    emr: float
    reg: float
    ecf: float
    ss: float
    esa: float

    def __post_init__(self) -> None:
        for name in ("emr", "reg", "ecf", "ss", "esa"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidParameterError(f"score {name} must be in [0, 1]")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.emr, self.reg, self.ecf, self.ss, self.esa)

    def to_dict(self) -> dict[str, float]:
        return {"emr": self.emr, "reg": self.reg, "ecf": self.ecf, "ss": self.ss, "esa": self.esa}


def hres_emissivity(ledger: EnergyLedger, em: EmissivityTable) -> float:
    """Production-weighted carbon intensity of the supply mix, gCO2/kWh."""
    energies = ledger.source_energies()
    rates = {"pv": em.pv, "wind": em.wind, "diesel": em.diesel, "grid": em.grid}
    total = sum(energies.values())
    if total == 0:
        return 0.0
    return sum(energies[s] * rates[s] for s in energies) / total


def emissions_reduction(ledger: EnergyLedger, em: EmissivityTable) -> float:
    """Relative CO2 saving against serving the same demand from the grid alone.

    1 - (production * mix intensity) / (demand * grid intensity), clamped.
    """
    if ledger.demand_kwh <= 0:
        raise InvalidParameterError("demand must be > 0")
    baseline = ledger.demand_kwh * em.grid
    if baseline == 0:
        return 0.0
    energies = ledger.source_energies()
    rates = {"pv": em.pv, "wind": em.wind, "diesel": em.diesel, "grid": em.grid}
    emitted = sum(energies[s] * rates[s] for s in energies)
    return _clamp01(1.0 - emitted / baseline)


def renewable_degree(ledger: EnergyLedger, em: EmissivityTable) -> float:
    """Renewable share of all energy entering the system, counting the grid's
    own renewable fraction."""
    total = ledger.production_kwh
    if total <= 0:
        raise InvalidParameterError("system production must be > 0")
    renewable = ledger.pv_kwh + ledger.wind_kwh + em.grid_renewable_fraction * ledger.grid_import_kwh
    return _clamp01(renewable / total)


def lcoe(ledger: EnergyLedger, econ: EconParams) -> float:
    """Levelized cost of energy, EUR/kWh.

    Discounted lifetime costs divided by the discounted lifetime energy
    actually delivered to the station.
    """
    served = ledger.served_kwh
    discounted_energy = served * econ.discount_sum()
    if discounted_energy <= 0:
        raise InvalidParameterError("delivered energy must be > 0")
    cost = total_discounted_cost(ledger.configuration, ledger, econ)
    return cost / discounted_energy


def grid_lcoe(econ: EconParams) -> float:
    """Levelized cost of a grid-only station.

    With the only cost proportional to energy at the grid price, the discounted
    cost and energy terms cancel and the LCOE is the grid price itself.
    """
    return econ.grid_price_per_kwh


def economic_factor(lcoe_hres: float, lcoe_grid: float) -> float:
    """min(1, grid LCOE / system LCOE)."""
    if lcoe_hres <= 0:
        raise InvalidParameterError("system LCOE must be > 0")
    return min(1.0, lcoe_grid / lcoe_hres)


def security_of_supply(
    cfg: Configuration,
    ledger: EnergyLedger,
    rel: ReliabilityTable,
    demand: DemandCurve,
    battery_reference_days: float = 1.0,
) -> float:
    """Combined supply reliability, 1 - product of per-source failure terms.

    Non-dispatchable sources weigh their energy contribution against demand;
    dispatchable ones weigh rated power against peak demand; the battery weighs
    capacity against the demand energy of ``battery_reference_days`` days.
    """
    peak = demand.peak_kw
    if peak <= 0:
        raise InvalidParameterError("demand peak must be > 0")
    annual_demand = ledger.demand_kwh
    if annual_demand <= 0:
        raise InvalidParameterError("demand energy must be > 0")
    daily_demand = annual_demand / DAYS_PER_YEAR * battery_reference_days

    factors = []
    if cfg.pv_kw > 0:
        factors.append(min(1.0, ledger.pv_kwh / annual_demand) * rel.pv)
    if cfg.wind_kw > 0:
        factors.append(min(1.0, ledger.wind_kwh / annual_demand) * rel.wind)
    if cfg.grid_connected:
        factors.append(min(1.0, cfg.grid_limit_kw / peak) * rel.grid)
    if cfg.diesel_kw > 0:
        factors.append(min(1.0, cfg.diesel_kw / peak) * rel.diesel)
    if cfg.battery_kwh > 0:
        factors.append(min(1.0, cfg.battery_kwh / daily_demand) * rel.battery)
    if not factors:
        return 0.0
    failure = 1.0
    for f in factors:
        failure *= 1.0 - f
    return _clamp01(1.0 - failure)


def sizing_adequacy(ledger: EnergyLedger) -> float:
    """min(1, demand / production); penalizes oversized generation."""
    production = ledger.production_kwh
    if production <= 0:
        raise InvalidParameterError("system production must be > 0")
    return min(1.0, ledger.demand_kwh / production)


def evaluate(
    cfg: Configuration,
    ledger: EnergyLedger,
    em: EmissivityTable,
    rel: ReliabilityTable,
    econ: EconParams,
    demand: DemandCurve,
) -> CriteriaScores:
    """Score one candidate on all five criteria."""
    return CriteriaScores(
        emr=emissions_reduction(ledger, em),
        reg=renewable_degree(ledger, em),
        ecf=economic_factor(lcoe(ledger, econ), grid_lcoe(econ)),
        ss=security_of_supply(cfg, ledger, rel, demand),
        esa=sizing_adequacy(ledger),
    )
