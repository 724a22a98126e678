"""Charging-station demand model.

The hourly station load is the product of three factors: road traffic passing
the station, the fraction of that traffic that is electric and stops to
recharge, and the power each vehicle class draws while recharging.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DataFormatError, InvalidParameterError

HOURS_PER_DAY = 24
DAYS_PER_YEAR = 365
HOURS_PER_YEAR = HOURS_PER_DAY * DAYS_PER_YEAR


class EvClassId(str, Enum):
    BEV_CAR = "BEV_CAR"
    PHEV_CAR = "PHEV_CAR"
    BEV_MOTO = "BEV_MOTO"


@dataclass(frozen=True)
class EvClass:
    """Recharge parameters for one vehicle class.

    ``f`` is the electric penetration within the class's fleet segment, ``r``
    the fraction of those vehicles that stop to recharge at the station, and
    ``fleet_share`` the segment's share of total traffic (cars vs motorcycles).
    """

    id: EvClassId
    battery_kwh: float
    soc_max: float
    soc_init: float
    recharge_minutes: float
    f: float
    r: float
    fleet_share: float

    def __post_init__(self) -> None:
        if self.battery_kwh <= 0:
            raise InvalidParameterError(f"{self.id}: battery_kwh must be > 0")
        if self.recharge_minutes <= 0:
            raise InvalidParameterError(f"{self.id}: recharge_minutes must be > 0")
        if not 0.0 <= self.soc_init < self.soc_max <= 1.0:
            raise InvalidParameterError(
                f"{self.id}: require 0 <= soc_init < soc_max <= 1, "
                f"got soc_init={self.soc_init}, soc_max={self.soc_max}"
            )
        for name in ("f", "r", "fleet_share"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParameterError(f"{self.id}: {name} must be in [0, 1]")


@dataclass(frozen=True)
class TrafficProfile:
    """Hourly vehicle counts passing the station, vehicles per hour."""

    counts: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.counts) == 0:
            raise InvalidParameterError("traffic profile must not be empty")
        if any(c < 0 for c in self.counts):
            raise InvalidParameterError("traffic counts must be non-negative")

    @classmethod
    def from_csv(cls, path: str | Path) -> "TrafficProfile":
        """Read a 24-row daily profile with columns ``hour, vehicles_per_hour``."""
        rows: dict[int, float] = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2 or not header[0].strip().lower().startswith("hour"):
                raise DataFormatError(f"{path}: expected header 'hour,vehicles_per_hour'")
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                try:
                    hour = int(row[0])
                    count = float(row[1])
                except (ValueError, IndexError) as exc:
                    raise DataFormatError(f"{path}: row {lineno}: {exc}") from exc
                if hour in rows:
                    raise DataFormatError(f"{path}: row {lineno}: duplicate hour {hour}")
                rows[hour] = count
        if sorted(rows) != list(range(HOURS_PER_DAY)):
            raise DataFormatError(f"{path}: expected exactly hours 0-23, got {sorted(rows)}")
        return cls(counts=tuple(rows[h] for h in range(HOURS_PER_DAY)))


@dataclass(frozen=True)
class DemandCurve:
    """Station power demand over time, kW per step."""

    p: np.ndarray
    resolution_h: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.p.size == 0:
            raise InvalidParameterError("demand curve must not be empty")
        if np.any(self.p < 0):
            raise InvalidParameterError("demand must be non-negative")

    @property
    def peak_kw(self) -> float:
        return float(self.p.max())

    @property
    def energy_kwh(self) -> float:
        return float(self.p.sum() * self.resolution_h)

    def tile(self, days: int = DAYS_PER_YEAR) -> "DemandCurve":
        """Repeat a daily template across ``days`` days (no seasonality)."""
        steps_per_day = round(HOURS_PER_DAY / self.resolution_h)
        if self.p.size != steps_per_day:
            raise InvalidParameterError(
                f"tile() needs a one-day curve ({steps_per_day} steps), got {self.p.size}"
            )
        return DemandCurve(p=np.tile(self.p, days), resolution_h=self.resolution_h)


def ev_recharge_power(cls: EvClass) -> float:
    """Power drawn by one recharging vehicle, kW.

    battery_kwh * (soc_max - soc_init) / recharge hours.
    """
    return cls.battery_kwh * (cls.soc_max - cls.soc_init) / (cls.recharge_minutes / 60.0)


def vehicles_recharging(n_t: float, cls: EvClass) -> float:
    """Vehicles of this class recharging when traffic is ``n_t`` vehicles/hour.

    The segment split (cars vs motorcycles) is applied before the per-segment
    electric penetration, so the product is n_t * fleet_share * f * r.
    """
    if n_t < 0:
        raise InvalidParameterError(f"traffic count must be >= 0, got {n_t}")
    return n_t * cls.fleet_share * cls.f * cls.r


def evcs_demand_curve(traffic: TrafficProfile, classes: list[EvClass]) -> DemandCurve:
    """Hourly station demand: sum over classes of count * per-vehicle power."""
    if not classes:
        raise InvalidParameterError("at least one EV class is required")
    counts = np.asarray(traffic.counts, dtype=float)
    p = np.zeros_like(counts)
    for cls in classes:
        p += counts * (cls.fleet_share * cls.f * cls.r) * ev_recharge_power(cls)
    return DemandCurve(p=p)


def class_demand_curves(traffic: TrafficProfile, classes: list[EvClass]) -> dict[EvClassId, DemandCurve]:
    """Per-class demand curves; they sum to the total station curve."""
    if not classes:
        raise InvalidParameterError("at least one EV class is required")
    counts = np.asarray(traffic.counts, dtype=float)
    return {
        cls.id: DemandCurve(p=counts * (cls.fleet_share * cls.f * cls.r) * ev_recharge_power(cls))
        for cls in classes
    }


def class_energy_shares(traffic: TrafficProfile, classes: list[EvClass]) -> dict[EvClassId, float]:
    """Fraction of total demand energy contributed by each class."""
    curves = class_demand_curves(traffic, classes)
    total = sum(c.energy_kwh for c in curves.values())
    if total == 0.0:
        return {cid: 0.0 for cid in curves}
    return {cid: c.energy_kwh / total for cid, c in curves.items()}
