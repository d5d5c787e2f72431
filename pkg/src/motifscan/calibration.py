"""Empirical null distributions and p-values for similarity scores.

Three null mechanisms, all permutation-test flavored: (1) the query
scored against each reference image, (2) decoy queries scored against
the target image itself, (3) all per-tile reference scores pooled.
p = (1 + #{null >= observed}) / (1 + null size): add-one smoothed, so
p is never 0, and ties count against significance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from motifscan.dataset import ImageRecord, QueryObject
from motifscan.scoring import Scorer
from motifscan.tiling import Tile

logger = logging.getLogger(__name__)

MECHANISMS = (1, 2, 3)
MIN_COMFORTABLE_NULL = 20


@dataclass(frozen=True)
class NullDistribution:
    mechanism: int
    samples: tuple[float, ...]
    source: str

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"mechanism must be one of {MECHANISMS}, got {self.mechanism}")
        if not self.samples:
            raise ValueError("null distribution needs at least one sample")
        if any(not math.isfinite(s) for s in self.samples):
            raise ValueError("null samples must be finite")
        if list(self.samples) != sorted(self.samples):
            raise ValueError("null samples must be sorted ascending")
        if len(self.samples) < MIN_COMFORTABLE_NULL:
            logger.warning(
                "null distribution has only %d samples; p-value resolution is %.3f",
                len(self.samples),
                1.0 / (len(self.samples) + 1),
            )

    @property
    def size(self) -> int:
        return len(self.samples)

    def to_json_dict(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "samples": list(self.samples),
            "source": self.source,
        }


@dataclass(frozen=True)
class PValueResult:
    image_id: str
    observed: float
    p: float
    null_size: int
    mechanism: int

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")


@dataclass(frozen=True)
class DecoyPool:
    decoys: tuple[QueryObject, ...]
    live_query_name: str | None = field(default=None)

    def __post_init__(self):
        if not self.decoys:
            raise ValueError("decoy pool must be nonempty")
        if self.live_query_name is not None:
            clashes = [d.name for d in self.decoys if d.name == self.live_query_name]
            if clashes:
                raise ValueError(f"decoy pool contains the live query: {clashes[0]!r}")


def _sorted_null(mechanism: int, values: list[float], source: str) -> NullDistribution:
    return NullDistribution(
        mechanism=mechanism, samples=tuple(sorted(float(v) for v in values)), source=source
    )


def build_null_m1(
    query: QueryObject,
    reference_images: list[ImageRecord],
    tiles_for: dict[str, list[Tile]],
    scorer: Scorer,
) -> NullDistribution:
    """Image-level similarity of the query against each reference."""
    if not reference_images:
        raise ValueError("mechanism 1 requires a nonempty reference set")
    values = [
        scorer.score_image(ref, tiles_for[ref.id]).similarity for ref in reference_images
    ]
    source = f"query={query.name} references={[r.id for r in reference_images]}"
    return _sorted_null(1, values, source)


def build_null_m2(
    target_image: ImageRecord,
    decoys: DecoyPool,
    tiles: list[Tile],
    scorer_factory,
) -> NullDistribution:
    """Each decoy query scored against this one target image.

    scorer_factory maps a QueryObject to a Scorer with the live
    configuration; the null is specific to the target image.
    """
    values = []
    for decoy in decoys.decoys:
        decoy_scorer = scorer_factory(decoy)
        values.append(decoy_scorer.score_image(target_image, tiles).similarity)
    source = f"target={target_image.id} decoys={[d.name for d in decoys.decoys]}"
    return _sorted_null(2, values, source)


def build_null_m3(
    query: QueryObject,
    reference_images: list[ImageRecord],
    tiles_for: dict[str, list[Tile]],
    scorer: Scorer,
) -> NullDistribution:
    """Every tile-level score across all references, pooled unreduced."""
    if not reference_images:
        raise ValueError("mechanism 3 requires a nonempty reference set")
    values = []
    for ref in reference_images:
        scored = scorer.score_image(ref, tiles_for[ref.id], keep_tile_scores=True)
        values.extend(v for _, v in scored.per_tile_scores)
    source = f"query={query.name} references={[r.id for r in reference_images]} level=tile"
    return _sorted_null(3, values, source)


def p_value(observed: float, null: NullDistribution, image_id: str = "") -> PValueResult:
    """Add-one smoothed empirical p-value; ties count as extreme."""
    if not math.isfinite(observed):
        raise ValueError(f"observed score must be finite, got {observed}")
    samples = np.asarray(null.samples)
    count_ge = int((samples >= observed).sum())
    p = (1 + count_ge) / (1 + null.size)
    return PValueResult(
        image_id=image_id,
        observed=float(observed),
        p=float(p),
        null_size=null.size,
        mechanism=null.mechanism,
    )
