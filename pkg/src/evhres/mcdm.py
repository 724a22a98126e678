"""Weighted aggregation of the five criteria into a merit figure and ranking."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP

from .criteria import CriteriaScores
from .dispatch import Configuration
from .errors import InvalidParameterError

_WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class WeightVector:
    """Criterion weights; non-negative and summing to one."""

    emr: float = 0.2
    reg: float = 0.2
    ecf: float = 0.2
    ss: float = 0.2
    esa: float = 0.2

    def __post_init__(self) -> None:
        values = self.as_tuple()
        if any(w < 0 for w in values):
            raise InvalidParameterError("weights must be non-negative")
        if abs(sum(values) - 1.0) > _WEIGHT_SUM_TOLERANCE:
            raise InvalidParameterError(f"weights must sum to 1, got {sum(values)!r}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.emr, self.reg, self.ecf, self.ss, self.esa)

    @classmethod
    def from_sequence(cls, values) -> "WeightVector":
        values = list(values)
        if len(values) != 5:
            raise InvalidParameterError(f"expected 5 weights, got {len(values)}")
        return cls(*[float(v) for v in values])


EQUAL_WEIGHTS = WeightVector()


@dataclass(frozen=True)
class RankedDesign:
    configuration: Configuration
    scores: CriteriaScores
    cp: float
    rank: int
    npc_eur: float | None = None

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "configuration": self.configuration.to_dict(),
            "scores": self.scores.to_dict(),
            "cp": self.cp,
            "npc_eur": self.npc_eur,
        }


def merit_figure(scores: CriteriaScores, weights: WeightVector) -> float:
    """Weighted sum of the five criterion scores."""
    s = scores.as_tuple()
    w = weights.as_tuple()
    return sum(si * wi for si, wi in zip(s, w))


def rank_designs(
    candidates: list[tuple[Configuration, CriteriaScores, float | None]],
    weights: WeightVector,
) -> list[RankedDesign]:
    """Order candidates by descending merit figure.

    Ties break toward the lower net present cost, then the label. The result
    does not depend on input order.
    """
    if not candidates:
        raise InvalidParameterError("at least one candidate is required")

    def sort_key(item):
        cfg, scores, npc_eur = item
        cp = merit_figure(scores, weights)
        npc_key = npc_eur if npc_eur is not None else 0.0
        return (-cp, npc_key, cfg.label, cfg.key())

    ordered = sorted(candidates, key=sort_key)
    return [
        RankedDesign(
            configuration=cfg,
            scores=scores,
            cp=merit_figure(scores, weights),
            rank=i + 1,
            npc_eur=npc_eur,
        )
        for i, (cfg, scores, npc_eur) in enumerate(ordered)
    ]


def format_percent(fraction: float, decimals: int = 2) -> str:
    """Render a fraction as a percentage with half-up rounding."""
    quantum = Decimal(1).scaleb(-decimals)
    return str((Decimal(repr(fraction)) * 100).quantize(quantum, rounding=ROUND_HALF_UP))
