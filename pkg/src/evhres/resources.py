"""Deterministic solar and wind production profiles.

Both synthesizers turn twelve monthly averages into an 8760-hour profile with
no hidden randomness: the solar shape is a half-sine over the daylight window
whose integral reproduces the monthly daily irradiation exactly, and the wind
shape is a diurnal modulation of the monthly mean speed mapped through a
turbine power curve.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .demand import HOURS_PER_DAY, HOURS_PER_YEAR
from .errors import DataFormatError, InvalidParameterError

MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
# Representative day of year per month for solar declination purposes.
_MONTH_MID_DOY = (17, 47, 75, 105, 135, 162, 198, 228, 258, 288, 318, 344)
_WIND_PEAK_HOUR = 15.0  # diurnal speed maximum, mid afternoon


def _check_monthly(values, name: str) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if len(values) != 12:
        raise InvalidParameterError(f"{name} must have 12 monthly values, got {len(values)}")
    return values


@dataclass(frozen=True)
class SolarResource:
    """Monthly solar climate for a site."""

    monthly_daily_irradiation: tuple[float, ...]  # kWh/m2/day
    clearness_index: tuple[float, ...]
    latitude_deg: float = 39.47

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "monthly_daily_irradiation",
            _check_monthly(self.monthly_daily_irradiation, "monthly_daily_irradiation"),
        )
        object.__setattr__(
            self, "clearness_index", _check_monthly(self.clearness_index, "clearness_index")
        )
        if any(v < 0 for v in self.monthly_daily_irradiation):
            raise InvalidParameterError("irradiation values must be >= 0")
        if any(not 0.0 <= v <= 1.0 for v in self.clearness_index):
            raise InvalidParameterError("clearness index values must be in [0, 1]")
        if not -66.0 < self.latitude_deg < 66.0:
            raise InvalidParameterError("latitude must be between polar circles")


@dataclass(frozen=True)
class WindResource:
    """Monthly wind climate for a site, measured below hub height."""

    monthly_mean_speed: tuple[float, ...]  # m/s at measurement height
    measurement_height_m: float
    hub_height_m: float
    shear_exponent: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "monthly_mean_speed", _check_monthly(self.monthly_mean_speed, "monthly_mean_speed")
        )
        if any(v < 0 for v in self.monthly_mean_speed):
            raise InvalidParameterError("wind speeds must be >= 0")
        if self.measurement_height_m <= 0 or self.hub_height_m <= 0:
            raise InvalidParameterError("heights must be > 0")

    @property
    def shear_factor(self) -> float:
        return (self.hub_height_m / self.measurement_height_m) ** self.shear_exponent


@dataclass(frozen=True)
class PowerCurve:
    """Piecewise turbine power curve: cubic rise from cut-in to rated."""

    cut_in_ms: float = 3.0
    rated_ms: float = 11.0
    cut_out_ms: float = 25.0

    def __post_init__(self) -> None:
        if self.cut_in_ms >= self.cut_out_ms:
            raise InvalidParameterError("cut-in speed must be below cut-out speed")
        if not self.cut_in_ms < self.rated_ms <= self.cut_out_ms:
            raise InvalidParameterError("require cut_in < rated <= cut_out")

    def fraction(self, speed_ms: float) -> float:
        """Output as a fraction of rated power at the given hub-height speed."""
        if speed_ms < self.cut_in_ms or speed_ms > self.cut_out_ms:
            return 0.0
        if speed_ms >= self.rated_ms:
            return 1.0
        num = speed_ms**3 - self.cut_in_ms**3
        den = self.rated_ms**3 - self.cut_in_ms**3
        return num / den


@dataclass(frozen=True)
class GenerationProfile:
    """Hourly power output of one source across a year, kW."""

    p: np.ndarray
    nameplate_kw: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.p.size != HOURS_PER_YEAR:
            raise InvalidParameterError(f"profile must have {HOURS_PER_YEAR} hours, got {self.p.size}")
        if self.nameplate_kw < 0:
            raise InvalidParameterError("nameplate must be >= 0")
        if np.any(self.p < 0):
            raise InvalidParameterError("profile power must be >= 0")
        if np.any(self.p > self.nameplate_kw * (1 + 1e-9) + 1e-9):
            raise InvalidParameterError("profile power must not exceed nameplate")

    @property
    def annual_energy_kwh(self) -> float:
        return float(self.p.sum())

    @property
    def equivalent_hours(self) -> float:
        """Annual energy per kW of nameplate (kWh/kW-year); 0 for a null source."""
        if self.nameplate_kw == 0:
            return 0.0
        return self.annual_energy_kwh / self.nameplate_kw

    def scaled(self, nameplate_kw: float) -> "GenerationProfile":
        """Linearly rescale the profile to a different nameplate."""
        if nameplate_kw < 0:
            raise InvalidParameterError("nameplate must be >= 0")
        if nameplate_kw == 0 or self.nameplate_kw == 0:
            return GenerationProfile(p=np.zeros(HOURS_PER_YEAR), nameplate_kw=nameplate_kw)
        return GenerationProfile(p=self.p * (nameplate_kw / self.nameplate_kw), nameplate_kw=nameplate_kw)


def day_length_hours(latitude_deg: float, month: int) -> float:
    """Daylight duration for the month's representative day, hours."""
    doy = _MONTH_MID_DOY[month]
    decl = math.radians(23.45 * math.sin(2 * math.pi * (284 + doy) / 365.0))
    lat = math.radians(latitude_deg)
    cos_ws = max(-1.0, min(1.0, -math.tan(lat) * math.tan(decl)))
    return 2.0 * math.degrees(math.acos(cos_ws)) / 15.0


def daily_irradiance_kw(latitude_deg: float, month: int, daily_kwh: float, hour: float) -> float:
    """Instantaneous half-sine irradiance at a fractional hour of day, kW/m2."""
    length = day_length_hours(latitude_deg, month)
    sunrise = 12.0 - length / 2.0
    if hour <= sunrise or hour >= sunrise + length:
        return 0.0
    peak = daily_kwh * math.pi / (2.0 * length)
    return peak * math.sin(math.pi * (hour - sunrise) / length)


def _solar_day_hourly_kwh(latitude_deg: float, month: int, daily_kwh: float) -> np.ndarray:
    """Hour-by-hour irradiation of one day, integrating the half-sine exactly.

    The 24 values sum to ``daily_kwh``, which keeps monthly energy consistent
    with the monthly average by construction.
    """
    length = day_length_hours(latitude_deg, month)
    sunrise = 12.0 - length / 2.0
    sunset = sunrise + length
    out = np.zeros(HOURS_PER_DAY)
    for h in range(HOURS_PER_DAY):
        a = max(float(h), sunrise)
        b = min(float(h) + 1.0, sunset)
        if b <= a:
            continue
        # integral of peak*sin(pi (t - sunrise)/length) over [a, b]
        out[h] = daily_kwh / 2.0 * (
            math.cos(math.pi * (a - sunrise) / length) - math.cos(math.pi * (b - sunrise) / length)
        )
    return out


def synthesize_solar(res: SolarResource, pv_kw: float, derate: float) -> GenerationProfile:
    """Hourly PV output for a year.

    Each month uses one repeated day whose hourly irradiation integrates to the
    monthly daily value; output is pv_kw * derate * irradiation at 1 kW/m2
    reference.
    """
    if pv_kw < 0:
        raise InvalidParameterError("pv_kw must be >= 0")
    if not 0.0 <= derate <= 1.0:
        raise InvalidParameterError("derate must be in [0, 1]")
    p = np.zeros(HOURS_PER_YEAR)
    if pv_kw > 0:
        pos = 0
        for month in range(12):
            day = _solar_day_hourly_kwh(
                res.latitude_deg, month, res.monthly_daily_irradiation[month]
            ) * pv_kw * derate
            for _ in range(MONTH_DAYS[month]):
                p[pos:pos + HOURS_PER_DAY] = day
                pos += HOURS_PER_DAY
    return GenerationProfile(p=p, nameplate_kw=pv_kw)


def diurnal_wind_speed(res: WindResource, month: int, hour: float, amplitude: float) -> float:
    """Hub-height speed at a fractional hour: sheared monthly mean with a
    sinusoidal diurnal swing peaking mid afternoon."""
    base = res.monthly_mean_speed[month] * res.shear_factor
    swing = 1.0 + amplitude * math.sin(2.0 * math.pi * (hour - (_WIND_PEAK_HOUR - 6.0)) / 24.0)
    return max(0.0, base * swing)


def lull_factors(month: int, amplitude: float, period_days: float) -> np.ndarray:
    """Day-to-day wind strength multipliers for one month.

    A fixed-phase sinusoid over the day of year alternates windy spells with
    calm ones; factors are renormalized so the monthly mean speed is exact.
    Amplitude 0 reproduces identical days.
    """
    start = sum(MONTH_DAYS[:month])
    days = np.arange(start, start + MONTH_DAYS[month])
    factors = 1.0 + amplitude * np.sin(2.0 * math.pi * days / period_days)
    return factors / factors.mean()


def synthesize_wind(
    res: WindResource,
    turbine_kw: float,
    power_curve: PowerCurve | None = None,
    diurnal_amplitude: float = 0.3,
    lull_amplitude: float = 0.0,
    lull_period_days: float = 9.0,
) -> GenerationProfile:
    """Hourly wind output for a year from diurnally modulated monthly means.

    ``lull_amplitude`` optionally overlays a deterministic multi-day cycle of
    windy and calm spells (period ``lull_period_days``) so that storage
    autonomy limits show up in annual simulations; the monthly mean speed is
    preserved exactly.
    """
    if turbine_kw < 0:
        raise InvalidParameterError("turbine_kw must be >= 0")
    if not 0.0 <= diurnal_amplitude < 1.0:
        raise InvalidParameterError("diurnal_amplitude must be in [0, 1)")
    if not 0.0 <= lull_amplitude < 1.0:
        raise InvalidParameterError("lull_amplitude must be in [0, 1)")
    if lull_period_days <= 0:
        raise InvalidParameterError("lull_period_days must be > 0")
    curve = power_curve or PowerCurve()
    p = np.zeros(HOURS_PER_YEAR)
    if turbine_kw > 0:
        pos = 0
        for month in range(12):
            factors = lull_factors(month, lull_amplitude, lull_period_days)
            speeds = [diurnal_wind_speed(res, month, h + 0.5, diurnal_amplitude)
                      for h in range(HOURS_PER_DAY)]
            for factor in factors:
                for h in range(HOURS_PER_DAY):
                    p[pos] = turbine_kw * curve.fraction(speeds[h] * factor)
                    pos += 1
    return GenerationProfile(p=p, nameplate_kw=turbine_kw)


def load_profile_csv(path: str | Path, nameplate_kw: float | None = None) -> GenerationProfile:
    """Read an ``hour_of_year, power_kw`` CSV into a profile.

    When ``nameplate_kw`` is omitted it is inferred as the profile maximum.
    Rows that are negative or exceed a given nameplate fail with the offending
    row number.
    """
    values: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise DataFormatError(f"{path}: expected header 'hour_of_year,power_kw'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                power = float(row[1])
            except (ValueError, IndexError) as exc:
                raise DataFormatError(f"{path}: row {lineno}: {exc}") from exc
            if power < 0:
                raise DataFormatError(f"{path}: row {lineno}: negative power {power}")
            if nameplate_kw is not None and power > nameplate_kw * (1 + 1e-9) + 1e-9:
                raise DataFormatError(
                    f"{path}: row {lineno}: power {power} exceeds nameplate {nameplate_kw}"
                )
            values.append(power)
    if len(values) != HOURS_PER_YEAR:
        raise DataFormatError(f"{path}: expected {HOURS_PER_YEAR} rows, got {len(values)}")
    arr = np.asarray(values)
    if nameplate_kw is None:
        nameplate_kw = float(arr.max())
    return GenerationProfile(p=arr, nameplate_kw=nameplate_kw)
