"""Shared fixtures: the bundled scenario and its simulated candidate set.

The full predesign run is expensive enough to share across test modules.
"""

from __future__ import annotations

import pytest

from evhres import load_scenario
from evhres.cli import build_demand, build_profiles, rank_candidate_set
from evhres.predesign import build_candidates


@pytest.fixture(scope="session")
def valencia():
    return load_scenario("valencia")


@pytest.fixture(scope="session")
def demand_daily(valencia):
    curve, _ = build_demand(valencia)
    return curve


@pytest.fixture(scope="session")
def demand_annual(demand_daily):
    return demand_daily.tile()


@pytest.fixture(scope="session")
def profiles(valencia):
    return build_profiles(valencia)


@pytest.fixture(scope="session")
def candidate_set(valencia, demand_annual, profiles):
    return build_candidates(
        valencia.menu, demand_annual, profiles, valencia.battery, valencia.econ,
        valencia.max_shortage,
        diesel_min_load_fraction=valencia.diesel_min_load_fraction,
    )


@pytest.fixture(scope="session")
def ranked_designs(valencia, candidate_set, demand_daily):
    return rank_candidate_set(valencia, candidate_set, demand_daily, valencia.weights)


def config_key(pv, wind, grid_limit, diesel, battery):
    """Key matching Configuration.key() for menu-sized components."""
    return (float(pv), float(wind), grid_limit > 0, float(grid_limit), float(diesel), float(battery))


def find_candidate(candidate_set, key):
    for cand in candidate_set.candidates:
        if cand.configuration.key() == key:
            return cand
    raise AssertionError(f"configuration {key} not among candidates")
