"""Run orchestration: corpus loading, parallel scoring, calibration.

Turns a RunConfig into scan results or evaluation rows. Scoring fans
out over a bounded thread pool; results are reduced by index so the
output never depends on completion order. The underlying scorers are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

from .calibration import (
    DecoyPool,
    NullDistribution,
    PValueResult,
    build_null_m2,
    p_value,
)
from .config import MOCK_BUNDLE, QuerySpec, RunConfig, ScorerSpec, load_decoy_specs
from .dataset import (
    ImageRecord,
    Manifest,
    ManifestError,
    QueryObject,
    load_entry,
    load_image,
    load_manifest,
)
from .embedding import create_mock_bundle, load_bundle
from .evaluation import (
    MetricsReport,
    RankedList,
    evaluate_configuration,
    matches_in_top_k,
    rank_images,
    scorer_summary,
)
from .keypoints import orb_detect, sift_detect
from .scoring import EMBED_BACKENDS, Scorer, ScorerConfig, make_scorer
from .tiling import generate_tiles


@dataclass
class ScanResult:
    manifest: Manifest
    images: dict[str, ImageRecord]
    query: QueryObject
    scorer_config: ScorerConfig
    mechanism: int
    ranked: RankedList
    pvalues: dict[str, PValueResult]
    reference_scores: dict[str, float]
    null: NullDistribution | None
    per_image_nulls: dict[str, NullDistribution] | None
    timings: dict[str, float]


@dataclass(frozen=True)
class EvaluationRow:
    """One metrics-table row: a (scorer, mechanism) pair across all thresholds."""

    object_type: str
    model_name: str
    mechanism: int
    matches_at_k: int
    k: int
    reports: tuple[MetricsReport, ...]


def _parallel_map(fn, items, threads: int) -> list:
    """Map preserving input order regardless of completion order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    results = [None] * len(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, item): i for i, item in enumerate(items)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def resolve_scorer(spec: ScorerSpec) -> tuple[ScorerConfig, object | None]:
    """ScorerSpec -> (ScorerConfig, bundle); 'mock' selects the builtin provider."""
    if spec.backend in EMBED_BACKENDS:
        bundle = create_mock_bundle() if spec.bundle == MOCK_BUNDLE else load_bundle(spec.bundle)
        return ScorerConfig(spec.backend, bundle.model_id, spec.params), bundle
    return ScorerConfig(spec.backend, None, spec.params), None


def build_query(spec: QuerySpec) -> QueryObject:
    if spec.kind == "text":
        return QueryObject(kind="text", name=spec.name, text_payload=spec.text)
    return QueryObject(
        kind="image", name=spec.name, image_payload=load_image(spec.path, image_id=spec.name)
    )


def load_corpus(config: RunConfig, threads: int = 1) -> tuple[Manifest, dict[str, ImageRecord]]:
    manifest = load_manifest(config.manifest_path)
    records = _parallel_map(load_entry, manifest.entries, threads)
    return manifest, {r.id: r for r in records}


def load_decoys(config: RunConfig, query: QueryObject) -> DecoyPool:
    specs, live_name = load_decoy_specs(config.decoy_pool_path)
    return DecoyPool(
        decoys=tuple(build_query(s) for s in specs),
        live_query_name=live_name or query.name,
    )


def scan_corpus(config: RunConfig) -> ScanResult:
    """Score every target, build the configured null, attach p-values.

    Uses the first listed scorer and mechanism; evaluate_corpus is the
    entry point for the full cartesian sweep.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    manifest, images = load_corpus(config, config.threads)
    query = build_query(config.query)
    scorer_config, bundle = resolve_scorer(config.scorers[0])
    mechanism = config.mechanisms[0]
    scorer = make_scorer(query, scorer_config, bundle)
    timings["load_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tile_cache: dict[tuple[int, int], list] = {}

    def tiles_of(image: ImageRecord) -> list:
        key = (image.width, image.height)
        if key not in tile_cache:
            tile_cache[key] = generate_tiles(image.width, image.height, config.tile_spec)
        return tile_cache[key]

    keep_tiles = mechanism == 3
    targets = [images[e.id] for e in manifest.targets()]
    references = [images[e.id] for e in manifest.references()]
    scored = _parallel_map(
        lambda img: scorer.score_image(img, tiles_of(img)), targets, config.threads
    )
    ref_scored = _parallel_map(
        lambda img: scorer.score_image(img, tiles_of(img), keep_tile_scores=keep_tiles),
        references,
        config.threads,
    )
    reference_scores = {s.image_id: s.similarity for s in ref_scored}
    timings["score_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    null = None
    per_image_nulls = None
    if mechanism == 2:
        pool = load_decoys(config, query)
        decoy_scorers = {d.name: make_scorer(d, scorer_config, bundle) for d in pool.decoys}
        per_image_nulls = {}

        def calibrate(pair) -> PValueResult:
            image, similarity = pair
            target_null = build_null_m2(
                image, pool, tiles_of(image), lambda q: decoy_scorers[q.name]
            )
            # dict insert keyed by a unique image id; GIL-atomic
            per_image_nulls[image.id] = target_null
            return p_value(similarity, target_null, image.id)

        results = _parallel_map(
            calibrate, [(img, s.similarity) for img, s in zip(targets, scored)], config.threads
        )
        pvalues = {r.image_id: r for r in results}
    else:
        if not references:
            raise ManifestError(f"mechanism {mechanism} requires reference images")
        if mechanism == 1:
            samples = sorted(s.similarity for s in ref_scored)
        else:
            samples = sorted(
                float(score) for s in ref_scored for _, score in s.per_tile_scores
            )
        source = f"query={query.name} references={[s.image_id for s in ref_scored]}"
        null = NullDistribution(mechanism, tuple(samples), source)
        pvalues = {
            s.image_id: p_value(s.similarity, null, s.image_id) for s in scored
        }
    timings["calibrate_s"] = time.perf_counter() - t0

    return ScanResult(
        manifest=manifest,
        images=images,
        query=query,
        scorer_config=scorer_config,
        mechanism=mechanism,
        ranked=rank_images(scored),
        pvalues=pvalues,
        reference_scores=reference_scores,
        null=null,
        per_image_nulls=per_image_nulls,
        timings=timings,
    )


def evaluate_corpus(config: RunConfig) -> list[EvaluationRow]:
    """Cartesian sweep: one EvaluationRow per configured scorer x mechanism."""
    manifest, images = load_corpus(config, config.threads)
    if not any(e.label in ("positive", "negative") for e in manifest.targets()):
        raise ManifestError("evaluation requires targets labeled positive or negative")
    query = build_query(config.query)
    decoys = load_decoys(config, query) if 2 in config.mechanisms else None

    resolved = [resolve_scorer(spec) for spec in config.scorers]
    jobs = [
        (scorer_config, bundle, mechanism)
        for scorer_config, bundle in resolved
        for mechanism in config.mechanisms
    ]

    def run(job) -> EvaluationRow:
        scorer_config, bundle, mechanism = job
        reports = evaluate_configuration(
            manifest,
            query,
            scorer_config,
            mechanism,
            config.thresholds,
            config.k,
            bundle=bundle,
            tile_spec=config.tile_spec,
            decoys=decoys,
            images=images,
        )
        return EvaluationRow(
            object_type=query.name,
            model_name=scorer_summary(scorer_config),
            mechanism=mechanism,
            matches_at_k=reports[0].matches_at_k,
            k=config.k,
            reports=tuple(reports),
        )

    return _parallel_map(run, jobs, config.threads)


def export_null(config: RunConfig) -> dict:
    """Build just the configured null distribution(s) as a JSON-ready dict."""
    result = scan_corpus(config)
    if result.mechanism == 2:
        return {
            "mechanism": 2,
            "per_image": {
                image_id: null.to_json_dict()
                for image_id, null in sorted(result.per_image_nulls.items())
            },
        }
    return result.null.to_json_dict()


def detect_keypoint_table(
    images: list[ImageRecord], backend: str, threads: int = 1
) -> dict[str, list[list[float]]]:
    """Per-image keypoints as [x, y, scale, orientation, response] rows."""
    if backend not in ("sift", "orb"):
        raise ValueError(f"keypoint dump requires a keypoint backend, got {backend!r}")
    detect = sift_detect if backend == "sift" else orb_detect

    def rows(image: ImageRecord) -> list[list[float]]:
        return [
            [kp.x, kp.y, kp.scale, kp.orientation, kp.response]
            for kp in detect(image.gray)
        ]

    tables = _parallel_map(rows, images, threads)
    return {image.id: table for image, table in zip(images, tables)}
