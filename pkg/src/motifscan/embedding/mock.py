"""Deterministic stand-in encoders so the suite needs no real model.

The mock bundle follows the full real code path (preprocessing, BPE
tokenization, batch execution, normalization); only the two encoder
graphs are replaced by fixed-seed random projections. Outputs are
bit-for-bit reproducible across processes and batch sizes.
"""

from __future__ import annotations

import numpy as np

from motifscan.dataset import resize_bilinear
from motifscan.embedding.bundle import ModelBundle
from motifscan.embedding.preprocess import PreprocessConfig
from motifscan.embedding.tokenizer import build_byte_fallback_assets

MOCK_EMBED_DIM = 64
MOCK_RESOLUTION = 64
_IMAGE_POOL = 8
_TEXT_BUCKETS = 512
_HASH_MULTIPLIER = 2654435761
_IMAGE_SEED = 20240601
_TEXT_SEED = 20240602


def _image_projection() -> np.ndarray:
    rng = np.random.default_rng(_IMAGE_SEED)
    return rng.standard_normal((3 * _IMAGE_POOL * _IMAGE_POOL, MOCK_EMBED_DIM))


def _text_projection() -> np.ndarray:
    rng = np.random.default_rng(_TEXT_SEED)
    return rng.standard_normal((_TEXT_BUCKETS, MOCK_EMBED_DIM))


_IMAGE_PROJ = _image_projection()
_TEXT_PROJ = _text_projection()


def _mock_image_runner(batch: np.ndarray) -> np.ndarray:
    out = np.empty((len(batch), MOCK_EMBED_DIM))
    for i, tensor in enumerate(batch):
        pooled = np.stack(
            [
                resize_bilinear(np.asarray(ch, dtype=np.float64), _IMAGE_POOL, _IMAGE_POOL)
                for ch in tensor
            ]
        )
        out[i] = pooled.ravel() @ _IMAGE_PROJ
    return out


def _mock_text_runner(batch: np.ndarray) -> np.ndarray:
    out = np.empty((len(batch), MOCK_EMBED_DIM))
    for i, tokens in enumerate(batch):
        counts = np.zeros(_TEXT_BUCKETS)
        for t in tokens:
            if t == 0:
                continue
            counts[(int(t) * _HASH_MULTIPLIER) % _TEXT_BUCKETS] += 1.0
        out[i] = counts @ _TEXT_PROJ
    return out


def create_mock_bundle() -> ModelBundle:
    """A fully functional bundle backed by deterministic mock graphs."""
    return ModelBundle(
        model_id="mock",
        embed_dim=MOCK_EMBED_DIM,
        preprocess=PreprocessConfig(
            resolution=MOCK_RESOLUTION,
            channel_means=(0.5, 0.5, 0.5),
            channel_stds=(0.25, 0.25, 0.25),
        ),
        tokenizer=build_byte_fallback_assets(),
        image_runner=_mock_image_runner,
        text_runner=_mock_text_runner,
        checkpoint="mock",
    )
