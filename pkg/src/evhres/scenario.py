"""Scenario files: one JSON document wiring every stage of the pipeline.

A scenario names the EV classes, the traffic source, the resource data, the
component menu, and all cost, emission, reliability and verification tables.
Scenarios are addressed either by bundled name ("valencia") or by path.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

from .criteria import EmissivityTable, ReliabilityTable
from .demand import EvClass, EvClassId, TrafficProfile
from .dispatch import BatteryParams, EconParams
from .errors import InvalidParameterError
from .mcdm import WeightVector
from .predesign import ComponentMenu
from .resources import PowerCurve, SolarResource, WindResource
from .verify import VerificationLimits


@dataclass(frozen=True)
class VerificationConfig:
    p_lab_kw: float = 1.08
    limits: VerificationLimits = VerificationLimits()
    initial_soc: float = 0.40
    step_minutes: int = 1
    month: int = 3  # 0-based
    day_start_hour: int = 9
    wind_fluctuation: float = 0.30

    def __post_init__(self) -> None:
        if self.p_lab_kw <= 0:
            raise InvalidParameterError("p_lab_kw must be > 0")
        if not 0 <= self.month <= 11:
            raise InvalidParameterError("month must be in 0..11")
        if not 0 <= self.day_start_hour <= 23:
            raise InvalidParameterError("day_start_hour must be in 0..23")


@dataclass(frozen=True)
class Scenario:
    name: str
    ev_classes: tuple[EvClass, ...]
    traffic: TrafficProfile
    solar: SolarResource
    wind: WindResource
    power_curve: PowerCurve
    solar_derate: float
    wind_diurnal_amplitude: float
    wind_lull_amplitude: float
    wind_lull_period_days: float
    menu: ComponentMenu
    battery: BatteryParams
    econ: EconParams
    emissivity: EmissivityTable
    reliability: ReliabilityTable
    weights: WeightVector
    max_shortage: float
    diesel_min_load_fraction: float
    verification: VerificationConfig
    pv_profile_csv: str | None
    wind_profile_csv: str | None
    scenario_hash: str


def _require(raw: dict, key: str, context: str):
    if key not in raw:
        raise InvalidParameterError(f"{context}.{key}: missing required field")
    return raw[key]


def _section(raw: dict, key: str) -> dict:
    value = _require(raw, key, "scenario")
    if not isinstance(value, dict):
        raise InvalidParameterError(f"scenario.{key}: expected an object")
    return value


def scenario_digest(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(canonical).hexdigest()[:16]


def _parse_ev_classes(raw: dict) -> tuple[EvClass, ...]:
    entries = _require(raw, "ev_classes", "scenario")
    if not isinstance(entries, list) or not entries:
        raise InvalidParameterError("scenario.ev_classes: expected a non-empty list")
    classes = []
    for i, entry in enumerate(entries):
        ctx = f"scenario.ev_classes[{i}]"
        try:
            classes.append(EvClass(
                id=EvClassId(_require(entry, "id", ctx)),
                battery_kwh=float(_require(entry, "battery_kwh", ctx)),
                soc_max=float(_require(entry, "soc_max", ctx)),
                soc_init=float(_require(entry, "soc_init", ctx)),
                recharge_minutes=float(_require(entry, "recharge_minutes", ctx)),
                f=float(_require(entry, "penetration", ctx)),
                r=float(_require(entry, "recharge_rate", ctx)),
                fleet_share=float(_require(entry, "fleet_share", ctx)),
            ))
        except (ValueError, TypeError) as exc:
            raise InvalidParameterError(f"{ctx}: {exc}") from exc
    return tuple(classes)


def _parse_traffic(raw: dict, base_dir: Path) -> TrafficProfile:
    section = _section(raw, "traffic")
    if "csv" in section and section["csv"]:
        path = Path(section["csv"])
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise InvalidParameterError(f"scenario.traffic.csv: file not found: {path}")
        return TrafficProfile.from_csv(path)
    counts = _require(section, "hourly_counts", "scenario.traffic")
    try:
        return TrafficProfile(counts=tuple(float(c) for c in counts))
    except (ValueError, TypeError) as exc:
        raise InvalidParameterError(f"scenario.traffic.hourly_counts: {exc}") from exc


def _build(section_name: str, builder, **kwargs):
    try:
        return builder(**kwargs)
    except InvalidParameterError as exc:
        raise InvalidParameterError(f"scenario.{section_name}: {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise InvalidParameterError(f"scenario.{section_name}: {exc}") from exc


def parse_scenario(raw: dict, base_dir: Path | None = None) -> Scenario:
    """Validate a scenario document field by field."""
    if not isinstance(raw, dict):
        raise InvalidParameterError("scenario: expected a JSON object")
    base_dir = base_dir or Path.cwd()
    name = str(raw.get("name", "scenario"))

    solar_raw = _section(raw, "solar")
    solar = _build(
        "solar", SolarResource,
        monthly_daily_irradiation=tuple(_require(solar_raw, "monthly_daily_irradiation", "scenario.solar")),
        clearness_index=tuple(_require(solar_raw, "clearness_index", "scenario.solar")),
        latitude_deg=float(solar_raw.get("latitude_deg", 39.47)),
    )
    derate = float(solar_raw.get("derate", 0.95))
    if not 0.0 <= derate <= 1.0:
        raise InvalidParameterError("scenario.solar.derate: must be in [0, 1]")

    wind_raw = _section(raw, "wind")
    wind = _build(
        "wind", WindResource,
        monthly_mean_speed=tuple(_require(wind_raw, "monthly_mean_speed", "scenario.wind")),
        measurement_height_m=float(_require(wind_raw, "measurement_height_m", "scenario.wind")),
        hub_height_m=float(_require(wind_raw, "hub_height_m", "scenario.wind")),
        shear_exponent=float(_require(wind_raw, "shear_exponent", "scenario.wind")),
    )
    curve_raw = wind_raw.get("power_curve", {})
    power_curve = _build(
        "wind.power_curve", PowerCurve,
        cut_in_ms=float(curve_raw.get("cut_in_ms", 3.0)),
        rated_ms=float(curve_raw.get("rated_ms", 11.0)),
        cut_out_ms=float(curve_raw.get("cut_out_ms", 25.0)),
    )
    amplitude = float(wind_raw.get("diurnal_amplitude", 0.3))
    lull_amplitude = float(wind_raw.get("lull_amplitude", 0.0))
    lull_period = float(wind_raw.get("lull_period_days", 9.0))

    menu_raw = _section(raw, "menu")
    menu = _build(
        "menu", ComponentMenu,
        pv_kw=tuple(_require(menu_raw, "pv_kw", "scenario.menu")),
        wind_kw=tuple(_require(menu_raw, "wind_kw", "scenario.menu")),
        grid_limit_kw=tuple(_require(menu_raw, "grid_limit_kw", "scenario.menu")),
        diesel_kw=tuple(_require(menu_raw, "diesel_kw", "scenario.menu")),
        battery_kwh=tuple(_require(menu_raw, "battery_kwh", "scenario.menu")),
    )

    bat_raw = _section(raw, "battery")
    battery = _build(
        "battery", BatteryParams,
        capacity_kwh=0.0,
        soc_min=float(bat_raw.get("soc_min", 0.3)),
        soc_max=float(bat_raw.get("soc_max", 1.0)),
        roundtrip_efficiency=float(bat_raw.get("roundtrip_efficiency", 0.9)),
        max_c_rate=float(bat_raw.get("max_c_rate", 0.25)),
        initial_soc=float(bat_raw.get("initial_soc", 0.5)),
    )

    econ_raw = _section(raw, "economics")
    sellback = econ_raw.get("grid_sellback_per_kwh", None)
    econ = _build(
        "economics", EconParams,
        pv_invest_per_kw=float(econ_raw.get("pv_invest_per_kw", 1200.0)),
        pv_om_per_kw_yr=float(econ_raw.get("pv_om_per_kw_yr", 40.0)),
        wind_invest_per_kw=float(econ_raw.get("wind_invest_per_kw", 2020.0)),
        wind_om_per_kw_yr=float(econ_raw.get("wind_om_per_kw_yr", 60.0)),
        diesel_invest_per_kw=float(econ_raw.get("diesel_invest_per_kw", 380.0)),
        diesel_om_per_hour=float(econ_raw.get("diesel_om_per_hour", 1.5)),
        diesel_fuel_per_litre=float(econ_raw.get("diesel_fuel_per_litre", 1.05)),
        diesel_litres_per_kwh=float(econ_raw.get("diesel_litres_per_kwh", 0.3)),
        battery_invest_per_unit=float(econ_raw.get("battery_invest_per_unit", 950.0)),
        battery_om_per_unit_yr=float(econ_raw.get("battery_om_per_unit_yr", 10.0)),
        battery_unit_kwh=float(econ_raw.get("battery_unit_kwh", 8.0)),
        battery_float_life_yr=float(econ_raw.get("battery_float_life_yr", 12.0)),
        battery_cycle_life_kwh_per_kwh=float(econ_raw.get("battery_cycle_life_kwh_per_kwh", 840.0)),
        lifetime_yr=int(econ_raw.get("lifetime_yr", 25)),
        discount_rate=float(econ_raw.get("discount_rate", 0.08)),
        grid_price_per_kwh=float(econ_raw.get("grid_price_per_kwh", 0.15)),
        grid_sellback_per_kwh=None if sellback is None else float(sellback),
    )

    em_raw = _section(raw, "emissivity")
    emissivity = _build(
        "emissivity", EmissivityTable,
        pv=float(em_raw.get("pv", 40.0)),
        wind=float(em_raw.get("wind", 20.0)),
        diesel=float(em_raw.get("diesel", 600.0)),
        grid=float(em_raw.get("grid", 318.1)),
        grid_renewable_fraction=float(em_raw.get("grid_renewable_fraction", 0.271)),
    )

    rel_raw = _section(raw, "reliability")
    reliability = _build(
        "reliability", ReliabilityTable,
        pv=float(rel_raw.get("pv", 0.198)),
        wind=float(rel_raw.get("wind", 0.216)),
        diesel=float(rel_raw.get("diesel", 0.857)),
        grid=float(rel_raw.get("grid", 0.98)),
        battery=float(rel_raw.get("battery", 0.70)),
    )

    weights_raw = raw.get("weights", {})
    if isinstance(weights_raw, dict):
        weights = _build(
            "weights", WeightVector,
            emr=float(weights_raw.get("emr", 0.2)),
            reg=float(weights_raw.get("reg", 0.2)),
            ecf=float(weights_raw.get("ecf", 0.2)),
            ss=float(weights_raw.get("ss", 0.2)),
            esa=float(weights_raw.get("esa", 0.2)),
        )
    else:
        weights = _build("weights", WeightVector.from_sequence, values=weights_raw)

    max_shortage = float(raw.get("max_shortage", 0.10))
    if not 0.0 <= max_shortage < 1.0:
        raise InvalidParameterError("scenario.max_shortage: must be in [0, 1)")

    dispatch_raw = raw.get("dispatch", {})
    diesel_min_load = float(dispatch_raw.get("diesel_min_load_fraction", 0.0))
    if not 0.0 <= diesel_min_load <= 1.0:
        raise InvalidParameterError("scenario.dispatch.diesel_min_load_fraction: must be in [0, 1]")

    ver_raw = raw.get("verification", {})
    limits = _build(
        "verification", VerificationLimits,
        max_loss_rate=float(ver_raw.get("max_loss_rate", 0.05)),
        soc_min=float(ver_raw.get("soc_min", 0.30)),
        soc_max=float(ver_raw.get("soc_max", 1.00)),
    )
    verification = _build(
        "verification", VerificationConfig,
        p_lab_kw=float(ver_raw.get("p_lab_kw", 1.08)),
        limits=limits,
        initial_soc=float(ver_raw.get("initial_soc", 0.40)),
        step_minutes=int(ver_raw.get("step_minutes", 1)),
        month=int(ver_raw.get("month", 3)),
        day_start_hour=int(ver_raw.get("day_start_hour", 9)),
        wind_fluctuation=float(ver_raw.get("wind_fluctuation", 0.30)),
    )

    profiles_raw = raw.get("profiles", {})

    def resolve_csv(key: str) -> str | None:
        value = profiles_raw.get(key)
        if not value:
            return None
        path = Path(value)
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise InvalidParameterError(f"scenario.profiles.{key}: file not found: {path}")
        return str(path)

    return Scenario(
        name=name,
        ev_classes=_parse_ev_classes(raw),
        traffic=_parse_traffic(raw, base_dir),
        solar=solar,
        wind=wind,
        power_curve=power_curve,
        solar_derate=derate,
        wind_diurnal_amplitude=amplitude,
        wind_lull_amplitude=lull_amplitude,
        wind_lull_period_days=lull_period,
        menu=menu,
        battery=battery,
        econ=econ,
        emissivity=emissivity,
        reliability=reliability,
        weights=weights,
        max_shortage=max_shortage,
        diesel_min_load_fraction=diesel_min_load,
        verification=verification,
        pv_profile_csv=resolve_csv("pv_csv"),
        wind_profile_csv=resolve_csv("wind_csv"),
        scenario_hash=scenario_digest(raw),
    )


def bundled_scenario_text(name: str) -> str:
    ref = importlib_resources.files("evhres").joinpath(f"data/{name}.json")
    if not ref.is_file():
        raise InvalidParameterError(f"no bundled scenario named '{name}'")
    return ref.read_text()


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario by bundled name or file path."""
    source_str = str(source)
    if "/" not in source_str and not source_str.endswith(".json"):
        raw = json.loads(bundled_scenario_text(source_str))
        return parse_scenario(raw, base_dir=Path.cwd())
    path = Path(source)
    if not path.exists():
        raise InvalidParameterError(f"scenario file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"{path}: invalid JSON: {exc}") from exc
    return parse_scenario(raw, base_dir=path.parent)
