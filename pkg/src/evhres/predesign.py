"""Design-space enumeration, feasibility screening and cost ranking.

The component menu spans a full Cartesian product of sizes. Every combination
is simulated; combinations that cannot serve enough of the demand, that lack
renewable generation, or that pair a diesel generator with a grid connection
are logged with the reason, and the survivors are ordered by net present cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .demand import DemandCurve
from .dispatch import (
    BatteryParams,
    Configuration,
    EconParams,
    EnergyLedger,
    feasible,
    npc,
    simulate_year,
)
from .errors import InvalidParameterError
from .resources import GenerationProfile

REASON_NO_RENEWABLES = "no renewable generation"
REASON_GEN_WITH_GRID = "generator redundant with grid"


@dataclass(frozen=True)
class ComponentMenu:
    """Available sizes per component; 0 means the component is absent and a
    grid option of 0 means off-grid."""

    pv_kw: tuple[float, ...]
    wind_kw: tuple[float, ...]
    grid_limit_kw: tuple[float, ...]
    diesel_kw: tuple[float, ...]
    battery_kwh: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("pv_kw", "wind_kw", "grid_limit_kw", "diesel_kw", "battery_kwh"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise InvalidParameterError(f"menu {name} must not be empty")
            if any(v < 0 for v in values):
                raise InvalidParameterError(f"menu {name} values must be >= 0")
            object.__setattr__(self, name, values)

    @property
    def size(self) -> int:
        return (len(self.pv_kw) * len(self.wind_kw) * len(self.grid_limit_kw)
                * len(self.diesel_kw) * len(self.battery_kwh))


@dataclass(frozen=True)
class Candidate:
    configuration: Configuration
    ledger: EnergyLedger
    npc_eur: float


@dataclass(frozen=True)
class Discard:
    configuration: Configuration
    reason: str


@dataclass
class CandidateSet:
    """Survivors sorted by ascending NPC plus the log of discarded designs."""

    candidates: list[Candidate] = field(default_factory=list)
    discards: list[Discard] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.candidates) + len(self.discards)

    def configuration_keys(self) -> set[tuple]:
        return {c.configuration.key() for c in self.candidates}


def enumerate_configurations(menu: ComponentMenu) -> list[Configuration]:
    """Cartesian product of the menu options."""
    configs = []
    for pv, wind, grid, gen, bat in product(
        menu.pv_kw, menu.wind_kw, menu.grid_limit_kw, menu.diesel_kw, menu.battery_kwh
    ):
        configs.append(Configuration(
            pv_kw=pv,
            wind_kw=wind,
            grid_connected=grid > 0,
            grid_limit_kw=grid,
            diesel_kw=gen,
            battery_kwh=bat,
        ))
    return configs


def apply_discard_rules(
    cfgs: list[Configuration],
) -> tuple[list[Configuration], list[Discard]]:
    """Partition configurations by the qualitative screening rules.

    A design without renewable generation is rejected outright; a design that
    backs a grid connection with a diesel generator is rejected because the
    generator would never run. Order independent and idempotent.
    """
    kept: list[Configuration] = []
    discarded: list[Discard] = []
    for cfg in cfgs:
        if not cfg.has_renewables:
            discarded.append(Discard(cfg, REASON_NO_RENEWABLES))
        elif cfg.grid_connected and cfg.diesel_kw > 0:
            discarded.append(Discard(cfg, REASON_GEN_WITH_GRID))
        else:
            kept.append(cfg)
    return kept, discarded


def build_candidates(
    menu: ComponentMenu,
    demand: DemandCurve,
    profiles: dict[str, GenerationProfile],
    bat: BatteryParams,
    econ: EconParams,
    max_shortage: float = 0.1,
    diesel_min_load_fraction: float = 0.0,
) -> CandidateSet:
    """Enumerate, simulate, screen and rank the whole menu.

    ``profiles`` holds one reference profile per renewable source; each is
    rescaled linearly to the configuration under test. Every enumerated
    configuration ends up either in the candidate list or in the discard log.
    """
    result = CandidateSet()
    annual = demand if demand.p.size == 8760 else demand.tile()
    scored: list[Candidate] = []

    kept, rule_discards = apply_discard_rules(enumerate_configurations(menu))
    result.discards.extend(rule_discards)

    profile_cache: dict[tuple[str, float], GenerationProfile] = {}

    def profile_for(source: str, kw: float) -> GenerationProfile:
        key = (source, kw)
        if key not in profile_cache:
            base = profiles.get(source)
            if base is None:
                raise InvalidParameterError(f"missing reference profile for source '{source}'")
            profile_cache[key] = base.scaled(kw)
        return profile_cache[key]

    for cfg in kept:
        try:
            ledger = simulate_year(
                cfg,
                annual,
                {"pv": profile_for("pv", cfg.pv_kw), "wind": profile_for("wind", cfg.wind_kw)},
                bat.with_capacity(cfg.battery_kwh),
                diesel_litres_per_kwh=econ.diesel_litres_per_kwh,
                diesel_min_load_fraction=diesel_min_load_fraction,
            )
        except InvalidParameterError as exc:
            raise InvalidParameterError(f"{cfg.label} {cfg.key()}: {exc}") from exc
        if not feasible(ledger, max_shortage):
            result.discards.append(Discard(
                cfg,
                f"infeasible: unmet demand {ledger.shortage_fraction:.1%} "
                f"exceeds {max_shortage:.0%}",
            ))
            continue
        scored.append(Candidate(cfg, ledger, npc(cfg, ledger, econ)))

    scored.sort(key=lambda c: (c.npc_eur, c.configuration.label, c.configuration.key()))
    result.candidates = scored
    return result
