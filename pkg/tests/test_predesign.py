"""Enumeration, screening and NPC ordering tests.

Hand count for the bundled menu: 2 PV x 2 wind x 2 grid x 2 diesel x 5
battery options = 80 combinations.
"""

from __future__ import annotations

import numpy as np
import pytest

from evhres.demand import DemandCurve
from evhres.dispatch import BatteryParams, Configuration, EconParams
from evhres.errors import InvalidParameterError
from evhres.predesign import (
    REASON_GEN_WITH_GRID,
    REASON_NO_RENEWABLES,
    ComponentMenu,
    apply_discard_rules,
    build_candidates,
    enumerate_configurations,
)
from evhres.resources import GenerationProfile


class TestEnumeration:
    def test_bundled_menu_has_80_combinations(self, valencia):
        configs = enumerate_configurations(valencia.menu)
        assert len(configs) == 80
        assert valencia.menu.size == 80

    def test_singleton_menu(self):
        menu = ComponentMenu((500.0,), (330.0,), (270.0,), (0.0,), (960.0,))
        assert len(enumerate_configurations(menu)) == 1

    def test_menu_without_zero_entries(self):
        menu = ComponentMenu((500.0,), (330.0,), (270.0,), (280.0,), (960.0, 1920.0))
        configs = enumerate_configurations(menu)
        assert len(configs) == 2
        assert all(c.pv_kw == 500.0 for c in configs)

    def test_empty_option_set_rejected(self):
        with pytest.raises(InvalidParameterError):
            ComponentMenu((), (330.0,), (270.0,), (0.0,), (960.0,))

    def test_every_combination_distinct(self, valencia):
        configs = enumerate_configurations(valencia.menu)
        assert len({c.key() for c in configs}) == len(configs)


class TestDiscardRules:
    def test_grid_only_discarded_for_missing_renewables(self):
        cfg = Configuration(grid_connected=True, grid_limit_kw=270.0)
        kept, discarded = apply_discard_rules([cfg])
        assert not kept
        assert discarded[0].reason == REASON_NO_RENEWABLES

    def test_grid_plus_diesel_discarded_as_redundant(self):
        cfg = Configuration(pv_kw=500.0, grid_connected=True, grid_limit_kw=270.0,
                            diesel_kw=280.0)
        kept, discarded = apply_discard_rules([cfg])
        assert not kept
        assert discarded[0].reason == REASON_GEN_WITH_GRID

    def test_renewables_with_battery_retained(self):
        cfg = Configuration(pv_kw=500.0, wind_kw=330.0, battery_kwh=4800.0)
        kept, discarded = apply_discard_rules([cfg])
        assert kept == [cfg]
        assert not discarded

    def test_order_independent_and_idempotent(self, valencia):
        configs = enumerate_configurations(valencia.menu)
        kept_fwd, disc_fwd = apply_discard_rules(configs)
        kept_rev, disc_rev = apply_discard_rules(list(reversed(configs)))
        assert {c.key() for c in kept_fwd} == {c.key() for c in kept_rev}
        assert {d.configuration.key() for d in disc_fwd} == {d.configuration.key() for d in disc_rev}
        kept_again, disc_again = apply_discard_rules(kept_fwd)
        assert kept_again == kept_fwd
        assert not disc_again


class TestBuildCandidates:
    def test_partition_property(self, valencia, candidate_set):
        assert candidate_set.size == valencia.menu.size

    def test_candidates_sorted_by_npc(self, candidate_set):
        npcs = [c.npc_eur for c in candidate_set.candidates]
        assert npcs == sorted(npcs)

    def test_every_discard_carries_a_reason(self, candidate_set):
        assert all(d.reason for d in candidate_set.discards)

    def test_single_infeasible_menu(self, valencia, demand_annual, profiles):
        menu = ComponentMenu((500.0,), (0.0,), (0.0,), (0.0,), (0.0,))
        result = build_candidates(menu, demand_annual, profiles, valencia.battery,
                                  valencia.econ, valencia.max_shortage)
        assert not result.candidates
        assert len(result.discards) == 1
        assert "infeasible" in result.discards[0].reason

    def test_npc_orders_battery_sizes(self, valencia):
        """Oracle: direct cost-stack comparison on an idle-battery system.

        Supply equals demand every hour, so ledgers are identical and NPC
        ordering reduces to the battery capital and upkeep stack.
        """
        demand = DemandCurve(p=np.full(8760, 50.0))
        flat = GenerationProfile(p=np.full(8760, 50.0), nameplate_kw=50.0)
        profiles = {"pv": flat, "wind": GenerationProfile(p=np.zeros(8760), nameplate_kw=0.0)}
        menu = ComponentMenu((50.0,), (0.0,), (0.0,), (0.0,), (960.0, 1920.0))
        bat = BatteryParams(capacity_kwh=0.0, initial_soc=1.0, soc_min=0.3)
        result = build_candidates(menu, demand, profiles, bat, valencia.econ, 0.1)
        assert len(result.candidates) == 2
        small, large = result.candidates
        assert small.configuration.battery_kwh == 960.0
        assert large.configuration.battery_kwh == 1920.0
        assert small.npc_eur < large.npc_eur
