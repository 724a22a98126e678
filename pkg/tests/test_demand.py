"""Demand model tests.

Hand-derived anchors: with a 0.8 SOC window, every bundled class draws
40*0.8/(40/60) = 14*0.8/(14/60) = 3*0.8/(3/60) = 48 kW, and solving
48 * 0.06 * (0.94*0.05 + 0.06*0.05) * N = 270 gives N = 1875 veh/h for the
target peak.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evhres.demand import (
    DemandCurve,
    EvClass,
    EvClassId,
    TrafficProfile,
    class_energy_shares,
    ev_recharge_power,
    evcs_demand_curve,
    vehicles_recharging,
)
from evhres.errors import DataFormatError, InvalidParameterError


def make_class(**overrides) -> EvClass:
    params = dict(
        id=EvClassId.BEV_CAR, battery_kwh=40.0, soc_max=1.0, soc_init=0.2,
        recharge_minutes=40.0, f=0.025, r=0.06, fleet_share=0.94,
    )
    params.update(overrides)
    return EvClass(**params)


class TestRechargePower:
    @pytest.mark.parametrize("battery_kwh,minutes", [(40.0, 40.0), (14.0, 14.0), (3.0, 3.0)])
    def test_bundled_classes_draw_48_kw(self, battery_kwh, minutes):
        cls = make_class(battery_kwh=battery_kwh, recharge_minutes=minutes)
        assert ev_recharge_power(cls) == pytest.approx(48.0, abs=1e-9)

    def test_zero_soc_window_draws_nothing(self):
        cls = make_class(soc_max=0.2001, soc_init=0.2)
        assert ev_recharge_power(cls) == pytest.approx(0.0, abs=1e-2)

    def test_nonpositive_recharge_time_rejected(self):
        with pytest.raises(InvalidParameterError):
            make_class(recharge_minutes=0.0)

    def test_inverted_soc_window_rejected(self):
        with pytest.raises(InvalidParameterError):
            make_class(soc_init=0.9, soc_max=0.5)


class TestVehiclesRecharging:
    def test_direct_product(self):
        cls = make_class(fleet_share=1.0, f=0.025, r=0.06)
        assert vehicles_recharging(1000.0, cls) == pytest.approx(1.5)

    def test_zero_traffic(self):
        assert vehicles_recharging(0.0, make_class()) == 0.0

    def test_negative_traffic_rejected(self):
        with pytest.raises(InvalidParameterError):
            vehicles_recharging(-1.0, make_class())

    def test_peak_traffic_solves_to_270_kw(self, valencia):
        """48 * 0.06 * (0.94*0.05 + 0.06*0.05) * 1875 = 270."""
        classes = list(valencia.ev_classes)
        total = sum(
            vehicles_recharging(1875.0, c) * ev_recharge_power(c) for c in classes
        )
        assert total == pytest.approx(270.0, abs=1e-9)


class TestDemandCurve:
    def test_valencia_peak_270(self, demand_daily):
        assert demand_daily.peak_kw == pytest.approx(270.0, rel=0.02)

    def test_valencia_class_shares(self, valencia):
        shares = class_energy_shares(valencia.traffic, list(valencia.ev_classes))
        assert shares[EvClassId.BEV_MOTO] == pytest.approx(0.06, abs=0.01)
        assert shares[EvClassId.BEV_CAR] == pytest.approx(0.47, abs=0.03)
        assert shares[EvClassId.PHEV_CAR] == pytest.approx(0.47, abs=0.03)

    def test_all_zero_traffic_gives_zero_curve(self, valencia):
        traffic = TrafficProfile(counts=(0.0,) * 24)
        curve = evcs_demand_curve(traffic, list(valencia.ev_classes))
        assert np.all(curve.p == 0.0)

    def test_empty_class_list_rejected(self, valencia):
        with pytest.raises(InvalidParameterError):
            evcs_demand_curve(valencia.traffic, [])

    def test_tiling_repeats_the_day(self, demand_daily):
        year = demand_daily.tile()
        assert year.p.size == 8760
        assert np.array_equal(year.p[:24], demand_daily.p)
        assert year.energy_kwh == pytest.approx(365 * demand_daily.energy_kwh)

    @settings(max_examples=30, deadline=None)
    @given(scale=st.floats(0.0, 50.0))
    def test_linear_in_traffic(self, valencia, scale):
        classes = list(valencia.ev_classes)
        base = evcs_demand_curve(valencia.traffic, classes)
        scaled_traffic = TrafficProfile(
            counts=tuple(c * scale for c in valencia.traffic.counts)
        )
        scaled = evcs_demand_curve(scaled_traffic, classes)
        assert np.allclose(scaled.p, base.p * scale, rtol=1e-12, atol=1e-9)

    def test_class_contributions_independent(self, valencia):
        """Perturbing one class never changes another class's contribution."""
        classes = list(valencia.ev_classes)
        from evhres.demand import class_demand_curves

        base = class_demand_curves(valencia.traffic, classes)
        perturbed_classes = [
            make_class(id=c.id, battery_kwh=c.battery_kwh, soc_max=c.soc_max,
                       soc_init=c.soc_init, recharge_minutes=c.recharge_minutes,
                       f=c.f * (2.0 if c.id == EvClassId.BEV_CAR else 1.0),
                       r=c.r, fleet_share=c.fleet_share)
            for c in classes
        ]
        perturbed = class_demand_curves(valencia.traffic, perturbed_classes)
        for cid in (EvClassId.PHEV_CAR, EvClassId.BEV_MOTO):
            assert np.array_equal(base[cid].p, perturbed[cid].p)


class TestTrafficCsv:
    def test_round_trip(self, tmp_path, valencia):
        path = tmp_path / "traffic.csv"
        lines = ["hour,vehicles_per_hour"]
        lines += [f"{h},{c}" for h, c in enumerate(valencia.traffic.counts)]
        path.write_text("\n".join(lines) + "\n")
        loaded = TrafficProfile.from_csv(path)
        assert loaded.counts == valencia.traffic.counts

    def test_missing_hour_rejected(self, tmp_path):
        path = tmp_path / "traffic.csv"
        path.write_text("hour,vehicles_per_hour\n" + "\n".join(f"{h},10" for h in range(23)))
        with pytest.raises(DataFormatError):
            TrafficProfile.from_csv(path)

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "traffic.csv"
        path.write_text("\n".join(f"{h},10" for h in range(24)))
        with pytest.raises(DataFormatError):
            TrafficProfile.from_csv(path)

    def test_negative_count_rejected(self, tmp_path):
        path = tmp_path / "traffic.csv"
        rows = [f"{h},10" for h in range(24)]
        rows[5] = "5,-3"
        path.write_text("hour,vehicles_per_hour\n" + "\n".join(rows))
        with pytest.raises((DataFormatError, InvalidParameterError)):
            TrafficProfile.from_csv(path)
