"""Scorer contract: per-tile similarity and image-level aggregation.

Backends: contrastive embeddings (image or text query), from-scratch
keypoint matchers, and raw pixel cosine. Image similarity is the max
(optionally mean) over tile scores, ties broken by tile order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from motifscan.dataset import ImageRecord, QueryObject, resize_bilinear
from motifscan.embedding import (
    ModelBundle,
    embed_image,
    embed_image_batch,
    embed_text,
    embedding_cosine,
)
from motifscan.keypoints import (
    inverse_distance_score,
    match_count,
    orb_describe,
    orb_detect,
    sift_describe,
    sift_detect,
)
from motifscan.tiling import Tile, crop

EMBED_BACKENDS = ("embed_image_query", "embed_text_query")
KEYPOINT_BACKENDS = ("sift", "orb")
BACKENDS = (*EMBED_BACKENDS, *KEYPOINT_BACKENDS, "pixel_cosine")
PIXEL_COSINE_SIDE = 64


class IncompatibleQueryError(ValueError):
    """Query kind not supported by the configured backend."""


@dataclass(frozen=True)
class ScorerConfig:
    backend: str
    model_id: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if self.backend in EMBED_BACKENDS and not self.model_id:
            raise ValueError(f"backend {self.backend!r} requires model_id")
        if self.backend not in EMBED_BACKENDS and self.model_id is not None:
            raise ValueError(f"backend {self.backend!r} takes no model_id")


@dataclass(frozen=True)
class ScoredImage:
    image_id: str
    similarity: float
    best_tile: Tile
    per_tile_scores: tuple[tuple[Tile, float], ...] | None = None

    def __post_init__(self):
        if not math.isfinite(self.similarity):
            raise ValueError(f"similarity must be finite, got {self.similarity}")


def pixel_cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine between grayscale buffers resized to 64x64; 0 for blanks."""
    side = PIXEL_COSINE_SIDE
    av = a if a.shape == (side, side) else resize_bilinear(a, side, side)
    bv = b if b.shape == (side, side) else resize_bilinear(b, side, side)
    av, bv = av.ravel(), bv.ravel()
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    if na == 0 or nb == 0:
        return 0.0
    return float(av @ bv / (na * nb))


class Scorer:
    """Precomputed query state plus a per-tile scoring function.

    Pure with respect to (query, tile): all mutable work happens in
    __init__, so instances are safe to share across worker threads.
    """

    def __init__(self, query: QueryObject, config: ScorerConfig, bundle: ModelBundle | None = None):
        self.config = config
        self.query = query
        backend = config.backend

        if query.kind == "text" and backend != "embed_text_query":
            raise IncompatibleQueryError(
                f"text queries require the embed_text_query backend, not {backend!r}"
            )
        if query.kind == "image" and backend == "embed_text_query":
            raise IncompatibleQueryError("embed_text_query scores text queries only")

        if backend in EMBED_BACKENDS:
            if bundle is None:
                raise ValueError("embedding backends need a loaded model bundle")
            self._bundle = bundle
            if backend == "embed_text_query":
                self._query_vec = embed_text(query.text_payload, bundle)
            else:
                self._query_vec = embed_image(query.image_payload, bundle)
            self._score_one = self._score_embedding
        elif backend in KEYPOINT_BACKENDS:
            image = query.image_payload
            if backend == "sift":
                kps = sift_detect(image.gray)
                _, self._query_descs = sift_describe(image.gray, kps)
            else:
                kps = orb_detect(image.gray, config.params.get("max_keypoints", 500))
                _, self._query_descs = orb_describe(image.gray, kps)
            self._use_inverse_distance = bool(config.params.get("inverse_distance", False))
            self._score_one = self._score_keypoints
        else:
            self._query_gray = query.image_payload.gray
            self._score_one = self._score_pixel_cosine

    def _score_embedding(self, tile_image: ImageRecord) -> float:
        vec = embed_image(tile_image, self._bundle)
        return embedding_cosine(self._query_vec, vec)

    def _score_keypoints(self, tile_image: ImageRecord) -> float:
        if self.config.backend == "sift":
            kps = sift_detect(tile_image.gray)
            _, descs = sift_describe(tile_image.gray, kps)
        else:
            kps = orb_detect(tile_image.gray, self.config.params.get("max_keypoints", 500))
            _, descs = orb_describe(tile_image.gray, kps)
        count, matches = match_count(self._query_descs, descs, self.config.backend)
        if self._use_inverse_distance:
            return inverse_distance_score(matches)
        return float(count)

    def _score_pixel_cosine(self, tile_image: ImageRecord) -> float:
        return pixel_cosine(self._query_gray, tile_image.gray)

    def score_tile(self, tile_image: ImageRecord) -> float:
        value = float(self._score_one(tile_image))
        if not math.isfinite(value):
            raise ValueError(f"backend produced non-finite tile score {value}")
        return value

    def score_image(
        self,
        image: ImageRecord,
        tiles: list[Tile],
        keep_tile_scores: bool = False,
        aggregation: str | None = None,
    ) -> ScoredImage:
        """Aggregate tile scores; max by default, mean via config."""
        if not tiles:
            raise ValueError(f"no tiles supplied for image {image.id!r}")
        agg = aggregation or self.config.params.get("aggregation", "max")
        if agg not in ("max", "mean"):
            raise ValueError(f"unknown aggregation {agg!r}")

        if self.config.backend in EMBED_BACKENDS:
            # batched graph invocations; batch size must not change scores
            vecs = embed_image_batch(
                [crop(image, t) for t in tiles],
                self._bundle,
                batch_size=int(self.config.params.get("batch_size", 16)),
            )
            scores = [embedding_cosine(self._query_vec, v) for v in vecs]
        else:
            scores = [self.score_tile(crop(image, tile)) for tile in tiles]

        best_index = int(np.argmax(scores))
        similarity = float(np.mean(scores)) if agg == "mean" else float(scores[best_index])
        return ScoredImage(
            image_id=image.id,
            similarity=similarity,
            best_tile=tiles[best_index],
            per_tile_scores=tuple(zip(tiles, scores)) if keep_tile_scores else None,
        )


def make_scorer(
    query: QueryObject, config: ScorerConfig, bundle: ModelBundle | None = None
) -> Scorer:
    return Scorer(query, config, bundle)
