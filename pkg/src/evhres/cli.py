"""Command-line pipeline driver.

``run`` executes the whole chain (demand, predesign, multicriteria ranking,
scaled verification) and persists every artifact; ``demand``, ``rank`` and
``verify`` re-run single stages against previously persisted artifacts. All
outputs are deterministic for a fixed scenario and seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import evaluate
from .demand import (
    DemandCurve,
    EvClassId,
    class_demand_curves,
    evcs_demand_curve,
)
from .dispatch import Configuration
from .errors import DataFormatError, InvalidParameterError, MissingArtifactError
from .mcdm import RankedDesign, WeightVector, format_percent, rank_designs
from .predesign import CandidateSet, build_candidates
from .report import render_demand_figure, render_ranking_figure, render_verification_figure
from .resources import GenerationProfile, load_profile_csv, synthesize_solar, synthesize_wind
from .scenario import Scenario, load_scenario
from .verify import ScaledScenario, scale, verify_cascade, verify_run, with_generation_traces

DEMAND_CSV = "demand_curve.csv"
CANDIDATES_JSON = "candidates.json"
RANKING_CSV = "ranking.csv"
RANKING_JSON = "ranking.json"
MANIFEST_JSON = "manifest.json"
SUMMARY_TXT = "summary.txt"

EXIT_OK = 0
EXIT_NO_PASS = 1
EXIT_INVALID = 2
EXIT_MISSING_ARTIFACT = 3

_CLASS_COLUMNS = {
    EvClassId.BEV_CAR: "bev_car_kw",
    EvClassId.PHEV_CAR: "phev_car_kw",
    EvClassId.BEV_MOTO: "bev_moto_kw",
}


# ----------------------------------------------------------------------
# Pipeline pieces
# ----------------------------------------------------------------------

def build_demand(scenario: Scenario) -> tuple[DemandCurve, dict[EvClassId, DemandCurve]]:
    classes = list(scenario.ev_classes)
    return evcs_demand_curve(scenario.traffic, classes), class_demand_curves(scenario.traffic, classes)


def build_profiles(scenario: Scenario) -> dict[str, GenerationProfile]:
    """Reference renewable profiles at the largest menu size of each source."""
    pv_ref = max(scenario.menu.pv_kw)
    wind_ref = max(scenario.menu.wind_kw)
    if scenario.pv_profile_csv:
        pv = load_profile_csv(scenario.pv_profile_csv, nameplate_kw=pv_ref or None)
    else:
        pv = synthesize_solar(scenario.solar, pv_ref, scenario.solar_derate)
    if scenario.wind_profile_csv:
        wind = load_profile_csv(scenario.wind_profile_csv, nameplate_kw=wind_ref or None)
    else:
        wind = synthesize_wind(
            scenario.wind, wind_ref, scenario.power_curve, scenario.wind_diurnal_amplitude,
            scenario.wind_lull_amplitude, scenario.wind_lull_period_days,
        )
    return {"pv": pv, "wind": wind}


def rank_candidate_set(
    scenario: Scenario,
    candidates: CandidateSet,
    demand_daily: DemandCurve,
    weights: WeightVector,
) -> list[RankedDesign]:
    scored = []
    for cand in candidates.candidates:
        scores = evaluate(
            cand.configuration, cand.ledger, scenario.emissivity,
            scenario.reliability, scenario.econ, demand_daily,
        )
        scored.append((cand.configuration, scores, cand.npc_eur))
    return rank_designs(scored, weights)


def verification_builder(scenario: Scenario, demand_daily: DemandCurve, seed: int, step_minutes: int):
    ver = scenario.verification

    def build(cfg: Configuration) -> ScaledScenario:
        sc = scale(cfg, demand_daily, ver.p_lab_kw, step_minutes, ver.day_start_hour)
        return with_generation_traces(
            sc, scenario.solar, scenario.wind, scenario.power_curve,
            scenario.solar_derate, scenario.wind_diurnal_amplitude,
            month=ver.month, wind_fluctuation=ver.wind_fluctuation, seed=seed,
        )

    return build


def verification_battery(scenario: Scenario):
    return replace(scenario.battery, initial_soc=scenario.verification.initial_soc)


# ----------------------------------------------------------------------
# Artifact writing
# ----------------------------------------------------------------------

def _provenance_line(scenario: Scenario, seed: int) -> str:
    return f"# scenario={scenario.name} hash={scenario.scenario_hash} tool_version={__version__} seed={seed}"


def _write_json(path: Path, scenario: Scenario, seed: int, payload: dict) -> None:
    document = {
        "scenario": scenario.name,
        "scenario_hash": scenario.scenario_hash,
        "tool_version": __version__,
        "seed": seed,
    }
    document.update(payload)
    path.write_text(json.dumps(document, indent=2, sort_keys=False) + "\n")


def write_demand_artifacts(
    out: Path, scenario: Scenario, seed: int,
    curve: DemandCurve, class_curves: dict[EvClassId, DemandCurve],
) -> list[str]:
    csv_path = out / DEMAND_CSV
    with open(csv_path, "w", newline="") as fh:
        fh.write(_provenance_line(scenario, seed) + "\n")
        writer = csv.writer(fh)
        writer.writerow(["hour", "total_kw"] + [_CLASS_COLUMNS[c] for c in class_curves])
        for h in range(curve.p.size):
            row = [h, repr(float(curve.p[h]))]
            row += [repr(float(class_curves[c].p[h])) for c in class_curves]
            writer.writerow(row)
    render_demand_figure(curve, out / "demand_curve.png", class_curves)
    return [DEMAND_CSV, "demand_curve.png"]


def read_demand_artifact(out: Path) -> DemandCurve:
    path = out / DEMAND_CSV
    if not path.exists():
        raise MissingArtifactError(
            f"missing demand artifact {path}; run the 'demand' stage first"
        )
    totals = []
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    for row in rows[1:]:
        totals.append(float(row[1]))
    if len(totals) not in (24, 8760):
        raise DataFormatError(f"{path}: expected 24 or 8760 rows, got {len(totals)}")
    return DemandCurve(p=np.asarray(totals))


def write_candidate_artifacts(out: Path, scenario: Scenario, seed: int, candidates: CandidateSet) -> list[str]:
    payload = {
        "enumerated": candidates.size,
        "candidates": [
            {
                "configuration": c.configuration.to_dict(),
                "npc_eur": c.npc_eur,
                "shortage_fraction": c.ledger.shortage_fraction,
                "summary": c.ledger.summary(),
            }
            for c in candidates.candidates
        ],
        "discards": [
            {"configuration": d.configuration.to_dict(), "reason": d.reason}
            for d in candidates.discards
        ],
    }
    _write_json(out / CANDIDATES_JSON, scenario, seed, payload)
    return [CANDIDATES_JSON]


def write_ranking_artifacts(
    out: Path, scenario: Scenario, seed: int, designs: list[RankedDesign], weights: WeightVector,
) -> list[str]:
    _write_json(out / RANKING_JSON, scenario, seed, {
        "weights": dict(zip(("emr", "reg", "ecf", "ss", "esa"), weights.as_tuple())),
        "designs": [d.to_dict() for d in designs],
    })
    with open(out / RANKING_CSV, "w", newline="") as fh:
        fh.write(_provenance_line(scenario, seed) + "\n")
        writer = csv.writer(fh)
        writer.writerow([
            "rank", "label", "pv_kw", "wind_kw", "grid_connected", "grid_limit_kw",
            "diesel_kw", "battery_kwh", "emr", "reg", "ecf", "ss", "esa", "cp", "npc_eur",
        ])
        for d in designs:
            cfg = d.configuration
            writer.writerow([
                d.rank, cfg.label, cfg.pv_kw, cfg.wind_kw, cfg.grid_connected,
                cfg.grid_limit_kw, cfg.diesel_kw, cfg.battery_kwh,
                *[repr(round(v, 10)) for v in d.scores.as_tuple()],
                repr(round(d.cp, 10)), repr(round(d.npc_eur, 2)) if d.npc_eur is not None else "",
            ])
    render_ranking_figure(designs, out / "ranking.png")
    return [RANKING_JSON, RANKING_CSV, "ranking.png"]


def read_ranking_artifact(out: Path) -> list[RankedDesign]:
    path = out / RANKING_JSON
    if not path.exists():
        raise MissingArtifactError(
            f"missing ranking artifact {path}; run the 'rank' stage first"
        )
    from .criteria import CriteriaScores

    raw = json.loads(path.read_text())
    designs = []
    for entry in raw["designs"]:
        cfg_raw = dict(entry["configuration"])
        cfg = Configuration(
            pv_kw=cfg_raw["pv_kw"], wind_kw=cfg_raw["wind_kw"],
            grid_connected=cfg_raw["grid_connected"], grid_limit_kw=cfg_raw["grid_limit_kw"],
            diesel_kw=cfg_raw["diesel_kw"], battery_kwh=cfg_raw["battery_kwh"],
            label=cfg_raw["label"],
        )
        designs.append(RankedDesign(
            configuration=cfg,
            scores=CriteriaScores(**entry["scores"]),
            cp=entry["cp"],
            rank=entry["rank"],
            npc_eur=entry.get("npc_eur"),
        ))
    return designs


def write_verification_artifacts(out: Path, scenario: Scenario, seed: int, reports) -> list[str]:
    """``reports`` is a list of (rank, report) pairs."""
    names: list[str] = []
    for rank, report in reports:
        stem = f"verification_{rank}"
        _write_json(out / f"{stem}.json", scenario, seed, {"report": report.summary()})
        trace_path = out / f"{stem}_trace.csv"
        with open(trace_path, "w", newline="") as fh:
            fh.write(_provenance_line(scenario, seed) + "\n")
            writer = csv.writer(fh)
            writer.writerow([
                "minute", "demand_kw", "pv_kw", "wind_kw", "battery_kw",
                "grid_kw", "diesel_kw", "unmet_kw", "curtailed_kw", "soc",
            ])
            for t in range(report.demand_kw.size):
                writer.writerow([
                    t * report.step_minutes,
                    *[repr(round(float(a[t]), 9)) for a in (
                        report.demand_kw, report.pv_kw, report.wind_kw, report.battery_kw,
                        report.grid_kw, report.diesel_kw, report.unmet_kw, report.curtailed_kw,
                    )],
                    repr(round(float(report.soc[t + 1]), 9)),
                ])
        render_verification_figure(report, out / f"{stem}.png")
        names += [f"{stem}.json", f"{stem}_trace.csv", f"{stem}.png"]
    return names


def write_summary(
    out: Path, scenario: Scenario, seed: int,
    designs: list[RankedDesign], winner: RankedDesign | None, reports,
) -> list[str]:
    lines = [
        f"scenario: {scenario.name} (hash {scenario.scenario_hash}, tool {__version__}, seed {seed})",
        "",
        "rank  label                     pv_kw  wind_kw  grid  gen_kw  bat_kwh     EmR     ReG     EcF      SS     ESA      CP",
    ]
    for d in designs:
        cfg = d.configuration
        scores = [format_percent(v).rjust(7) for v in d.scores.as_tuple()]
        lines.append(
            f"{d.rank:>4}  {cfg.label:<24}{cfg.pv_kw:>7.0f}{cfg.wind_kw:>9.0f}"
            f"{'yes' if cfg.grid_connected else 'no':>6}{cfg.diesel_kw:>8.0f}{cfg.battery_kwh:>9.0f}"
            f"{''.join(scores)}{format_percent(d.cp).rjust(8)}"
        )
    lines.append("")
    for i, report in enumerate(reports, start=1):
        verdict = "PASS" if report.passed else f"FAIL ({report.failed_condition})"
        lines.append(
            f"verification attempt {i}: {report.label} -> {verdict}, "
            f"max loss {format_percent(report.max_loss_rate)}%, "
            f"SOC {format_percent(report.soc_min_observed)}%..{format_percent(report.soc_max_observed)}%"
        )
    if winner is not None:
        lines.append(f"verified design: rank {winner.rank}, {winner.configuration.label}")
    else:
        lines.append("verified design: none passed")
    (out / SUMMARY_TXT).write_text("\n".join(lines) + "\n")
    return [SUMMARY_TXT]


def write_manifest(out: Path, scenario: Scenario, seed: int, artifacts: list[str], verified_rank) -> None:
    _write_json(out / MANIFEST_JSON, scenario, seed, {
        "artifacts": sorted(set(artifacts)),
        "verified_rank": verified_rank,
    })


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def _apply_overrides(scenario: Scenario, args) -> tuple[Scenario, WeightVector, float, int]:
    weights = scenario.weights
    if args.weights:
        weights = WeightVector.from_sequence(float(w) for w in args.weights.split(","))
    max_shortage = scenario.max_shortage if args.max_shortage is None else args.max_shortage
    if not 0.0 <= max_shortage < 1.0:
        raise InvalidParameterError("--max-shortage must be in [0, 1)")
    step_min = scenario.verification.step_minutes if args.step_min is None else args.step_min
    return scenario, weights, max_shortage, step_min


def cmd_demand(args) -> int:
    scenario = load_scenario(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curve, per_class = build_demand(scenario)
    artifacts = write_demand_artifacts(out, scenario, args.seed, curve, per_class)
    write_manifest(out, scenario, args.seed, artifacts, None)
    print(f"demand curve written to {out / DEMAND_CSV} (peak {curve.peak_kw:.1f} kW)")
    return EXIT_OK


def cmd_rank(args) -> int:
    scenario, weights, max_shortage, _ = _apply_overrides(load_scenario(args.scenario), args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    daily = read_demand_artifact(out)
    profiles = build_profiles(scenario)
    candidates = build_candidates(
        scenario.menu, daily.tile(), profiles, scenario.battery, scenario.econ, max_shortage,
        diesel_min_load_fraction=scenario.diesel_min_load_fraction,
    )
    designs = rank_candidate_set(scenario, candidates, daily, weights)
    artifacts = [DEMAND_CSV, "demand_curve.png"]
    artifacts += write_candidate_artifacts(out, scenario, args.seed, candidates)
    artifacts += write_ranking_artifacts(out, scenario, args.seed, designs, weights)
    write_manifest(out, scenario, args.seed, artifacts, None)
    top = designs[0]
    print(f"{len(designs)} candidates ranked; top design: {top.configuration.label} "
          f"(CP {format_percent(top.cp)}%)")
    return EXIT_OK


def cmd_verify(args) -> int:
    scenario, _, _, step_min = _apply_overrides(load_scenario(args.scenario), args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    daily = read_demand_artifact(out)
    designs = read_ranking_artifact(out)
    builder = verification_builder(scenario, daily, args.seed, step_min)
    bat = verification_battery(scenario)
    limits = scenario.verification.limits

    if args.design is not None:
        if not 1 <= args.design <= len(designs):
            raise InvalidParameterError(f"--design must be in 1..{len(designs)}")
        design = designs[args.design - 1]
        sc = builder(design.configuration)
        report = verify_run(sc, bat.with_capacity(sc.battery_kwh), limits,
                            scenario.diesel_min_load_fraction)
        winner = design if report.passed else None
        ranked_reports = [(design.rank, report)]
    else:
        winner, reports = verify_cascade(
            designs, bat, limits, builder,
            diesel_min_load_fraction=scenario.diesel_min_load_fraction,
        )
        ranked_reports = list(zip((d.rank for d in designs), reports))

    artifacts = write_verification_artifacts(out, scenario, args.seed, ranked_reports)
    artifacts += write_summary(out, scenario, args.seed, designs, winner,
                               [r for _, r in ranked_reports])
    write_manifest(out, scenario, args.seed, artifacts, winner.rank if winner else None)
    for rank, report in ranked_reports:
        verdict = "PASS" if report.passed else f"FAIL ({report.failed_condition})"
        print(f"rank {rank}: {report.label} -> {verdict}")
    return EXIT_OK if winner is not None else EXIT_NO_PASS


def cmd_run(args) -> int:
    scenario, weights, max_shortage, step_min = _apply_overrides(load_scenario(args.scenario), args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifacts: list[str] = []

    curve, per_class = build_demand(scenario)
    artifacts += write_demand_artifacts(out, scenario, args.seed, curve, per_class)

    profiles = build_profiles(scenario)
    candidates = build_candidates(
        scenario.menu, curve.tile(), profiles, scenario.battery, scenario.econ, max_shortage,
        diesel_min_load_fraction=scenario.diesel_min_load_fraction,
    )
    artifacts += write_candidate_artifacts(out, scenario, args.seed, candidates)

    designs = rank_candidate_set(scenario, candidates, curve, weights)
    artifacts += write_ranking_artifacts(out, scenario, args.seed, designs, weights)

    builder = verification_builder(scenario, curve, args.seed, step_min)
    winner, reports = verify_cascade(
        designs, verification_battery(scenario), scenario.verification.limits, builder,
        diesel_min_load_fraction=scenario.diesel_min_load_fraction,
    )
    ranked_reports = list(zip((d.rank for d in designs), reports))
    artifacts += write_verification_artifacts(out, scenario, args.seed, ranked_reports)
    artifacts += write_summary(out, scenario, args.seed, designs, winner, reports)
    write_manifest(out, scenario, args.seed, artifacts, winner.rank if winner else None)

    top = designs[0]
    print(f"demand peak {curve.peak_kw:.1f} kW; {len(designs)} candidates; "
          f"top design {top.configuration.label} (CP {format_percent(top.cp)}%)")
    if winner is not None:
        print(f"verification passed at rank {winner.rank} ({winner.configuration.label})")
        return EXIT_OK
    print("verification failed for all attempted designs")
    return EXIT_NO_PASS


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evhres",
        description="Design hybrid renewable supply systems for EV charging stations.",
    )
    parser.add_argument("--version", action="version", version=f"evhres {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", default="valencia",
                       help="bundled scenario name or path to a scenario JSON")
        p.add_argument("--out", default="out", help="artifact directory")
        p.add_argument("--seed", type=int, default=0, help="seed for the verification day")
        p.add_argument("--weights", default=None,
                       help="five comma-separated criterion weights summing to 1")
        p.add_argument("--max-shortage", type=float, default=None,
                       help="feasibility cutoff on unmet demand fraction")
        p.add_argument("--step-min", type=int, default=None,
                       help="verification time step in minutes")

    p_run = sub.add_parser("run", help="full pipeline: demand, rank, verify")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_demand = sub.add_parser("demand", help="build and persist the demand curve")
    add_common(p_demand)
    p_demand.set_defaults(func=cmd_demand)

    p_rank = sub.add_parser("rank", help="simulate, screen and rank the design menu")
    add_common(p_rank)
    p_rank.set_defaults(func=cmd_rank)

    p_verify = sub.add_parser("verify", help="scaled-day verification of ranked designs")
    add_common(p_verify)
    p_verify.add_argument("--design", type=int, default=None,
                          help="verify only the design at this rank")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MissingArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_ARTIFACT
    except (InvalidParameterError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
