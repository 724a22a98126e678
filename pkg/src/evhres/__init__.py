"""Hybrid renewable supply design toolkit for EV charging stations."""

__version__ = "0.1.0"

from .criteria import (
    CriteriaScores,
    EmissivityTable,
    ReliabilityTable,
    economic_factor,
    emissions_reduction,
    evaluate,
    grid_lcoe,
    lcoe,
    renewable_degree,
    security_of_supply,
    sizing_adequacy,
)
from .demand import (
    DemandCurve,
    EvClass,
    EvClassId,
    TrafficProfile,
    class_demand_curves,
    class_energy_shares,
    ev_recharge_power,
    evcs_demand_curve,
    vehicles_recharging,
)
from .dispatch import (
    BatteryParams,
    Configuration,
    EconParams,
    EnergyLedger,
    feasible,
    npc,
    simulate_year,
)
from .errors import DataFormatError, InvalidParameterError, MissingArtifactError
from .mcdm import EQUAL_WEIGHTS, RankedDesign, WeightVector, merit_figure, rank_designs
from .predesign import (
    CandidateSet,
    ComponentMenu,
    apply_discard_rules,
    build_candidates,
    enumerate_configurations,
)
from .resources import (
    GenerationProfile,
    PowerCurve,
    SolarResource,
    WindResource,
    load_profile_csv,
    synthesize_solar,
    synthesize_wind,
)
from .scenario import Scenario, load_scenario
from .verify import (
    ScaledScenario,
    VerificationLimits,
    VerificationReport,
    scale,
    verify_cascade,
    verify_run,
    with_generation_traces,
)
