"""Ranking and threshold-classification evaluation.

Two downstream tasks share one scoring pass: ranking a corpus by
similarity (search) and deciding presence per image by thresholding
calibrated p-values (classification). Metrics follow the usual 2x2
conventions with explicit degenerate-denominator choices so that
all-negative runs stay well defined.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .calibration import (
    DecoyPool,
    PValueResult,
    build_null_m1,
    build_null_m2,
    build_null_m3,
    p_value,
)
from .dataset import ImageRecord, Manifest, QueryObject, load_entry
from .scoring import Scorer, ScoredImage, ScorerConfig, make_scorer
from .tiling import TileSpec, generate_tiles

logger = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class RankedList:
    """ScoredImage entries sorted by descending similarity, ids ascending on ties."""

    entries: tuple[ScoredImage, ...]

    def __post_init__(self):
        sims = [e.similarity for e in self.entries]
        if any(a < b for a, b in zip(sims, sims[1:])):
            raise ValueError("ranked similarities must be nonincreasing")

    def ids(self) -> list[str]:
        return [e.image_id for e in self.entries]


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative int, got {value!r}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Rates:
    sensitivity: float
    specificity: float
    balanced_accuracy: float
    f1: float

    def __post_init__(self):
        for name in ("sensitivity", "specificity", "balanced_accuracy", "f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class MetricsReport:
    """One evaluation row: matches@K plus rates at a single p threshold."""

    matches_at_k: int
    k: int
    sensitivity: float
    specificity: float
    balanced_accuracy: float
    f1: float
    threshold: float
    mechanism: int
    scorer: str

    def __post_init__(self):
        Rates(self.sensitivity, self.specificity, self.balanced_accuracy, self.f1)
        if self.matches_at_k > self.k:
            raise ValueError(f"matches_at_k {self.matches_at_k} exceeds k {self.k}")


def rank_images(scored: Sequence[ScoredImage]) -> RankedList:
    ordered = sorted(scored, key=lambda s: (-s.similarity, s.image_id))
    return RankedList(tuple(ordered))


def matches_in_top_k(ranked: RankedList, labels: Mapping[str, str], k: int) -> int:
    """Count label-positive images among the first min(k, len) entries."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for entry in ranked.entries:
        if entry.image_id not in labels:
            raise ValueError(f"ranked image {entry.image_id!r} has no ground-truth label")
    return sum(1 for e in ranked.entries[:k] if labels[e.image_id] == POSITIVE)


def classify(pvalues: Sequence[PValueResult], threshold: float) -> dict[str, bool]:
    """Presence decision per image: strictly p < threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return {r.image_id: r.p < threshold for r in pvalues}


def confusion(decisions: Mapping[str, bool], labels: Mapping[str, str]) -> ConfusionMatrix:
    """2x2 counts against ground truth; unknown labels are skipped with a warning."""
    tp = fp = tn = fn = 0
    for image_id, decided in decisions.items():
        label = labels.get(image_id, "unknown")
        if label == POSITIVE:
            tp, fn = (tp + 1, fn) if decided else (tp, fn + 1)
        elif label == NEGATIVE:
            fp, tn = (fp + 1, tn) if decided else (fp, tn + 1)
        else:
            logger.warning("image %r has label %r; excluded from confusion counts", image_id, label)
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def metrics(cm: ConfusionMatrix) -> Rates:
    """Sensitivity/specificity/balanced accuracy/F1 with fixed degenerate conventions.

    Empty-denominator rates default to 1.0 (nothing to miss) while an
    empty F1 defaults to 0.0, so an all-negative run reports balanced
    accuracy 0.5 and F1 0.
    """
    sensitivity = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else 1.0
    specificity = cm.tn / (cm.tn + cm.fp) if cm.tn + cm.fp else 1.0
    f1_denominator = 2 * cm.tp + cm.fp + cm.fn
    f1 = 2 * cm.tp / f1_denominator if f1_denominator else 0.0
    return Rates(
        sensitivity=sensitivity,
        specificity=specificity,
        balanced_accuracy=(sensitivity + specificity) / 2.0,
        f1=f1,
    )


def scorer_summary(config: ScorerConfig) -> str:
    return config.backend if config.model_id is None else f"{config.backend}:{config.model_id}"


def evaluate_configuration(
    manifest: Manifest,
    query: QueryObject,
    scorer_config: ScorerConfig,
    mechanism: int,
    thresholds: Sequence[float],
    k: int,
    *,
    bundle=None,
    tile_spec: TileSpec | None = None,
    decoys: DecoyPool | None = None,
    images: Mapping[str, ImageRecord] | None = None,
    scorer_factory=None,
) -> list[MetricsReport]:
    """Score, rank, calibrate, and classify one (scorer, mechanism) configuration.

    Emits one MetricsReport per threshold, all sharing the ranking-task
    matches@K count. `images` is an optional id -> ImageRecord cache so
    repeated configurations over one corpus skip disk decodes;
    `scorer_factory` overrides Scorer construction (used for the decoy
    mechanism and by tests).
    """
    if mechanism not in (1, 2, 3):
        raise ValueError(f"mechanism must be 1, 2, or 3, got {mechanism}")
    if mechanism == 2 and decoys is None:
        raise ValueError("mechanism 2 requires a decoy pool")
    targets = manifest.targets()
    if not targets:
        raise ValueError("manifest has no target images to evaluate")
    if mechanism in (1, 3) and not manifest.references():
        raise ValueError(f"mechanism {mechanism} requires reference images")

    spec = tile_spec or TileSpec()
    if scorer_factory is None:
        scorer_factory = lambda q: make_scorer(q, scorer_config, bundle)  # noqa: E731
    scorer: Scorer = scorer_factory(query)

    def image_of(entry) -> ImageRecord:
        if images is not None and entry.id in images:
            return images[entry.id]
        return load_entry(entry)

    tile_cache: dict[tuple[int, int], list] = {}

    def tiles_of(image: ImageRecord) -> list:
        key = (image.width, image.height)
        if key not in tile_cache:
            tile_cache[key] = generate_tiles(image.width, image.height, spec)
        return tile_cache[key]

    labels = {e.id: e.label for e in targets}
    target_images = [image_of(e) for e in targets]
    scored = [scorer.score_image(img, tiles_of(img)) for img in target_images]
    ranked = rank_images(scored)
    matches = matches_in_top_k(ranked, labels, k)

    if mechanism == 2:
        pvalues = []
        for img, s in zip(target_images, scored):
            null = build_null_m2(img, decoys, tiles_of(img), scorer_factory)
            pvalues.append(p_value(s.similarity, null, s.image_id))
    else:
        reference_images = [image_of(e) for e in manifest.references()]
        tiles_for = {r.id: tiles_of(r) for r in reference_images}
        build = build_null_m1 if mechanism == 1 else build_null_m3
        null = build(query, reference_images, tiles_for, scorer)
        pvalues = [p_value(s.similarity, null, s.image_id) for s in scored]

    summary = scorer_summary(scorer_config)
    rows = []
    for threshold in thresholds:
        cm = confusion(classify(pvalues, threshold), labels)
        rates = metrics(cm)
        rows.append(
            MetricsReport(
                matches_at_k=matches,
                k=k,
                sensitivity=rates.sensitivity,
                specificity=rates.specificity,
                balanced_accuracy=rates.balanced_accuracy,
                f1=rates.f1,
                threshold=threshold,
                mechanism=mechanism,
                scorer=summary,
            )
        )
    return rows
