"""Contrastive image/text embedding backend."""

from motifscan.embedding.bundle import (
    BackendModelError,
    ModelBundle,
    embed_image,
    embed_image_batch,
    embed_text,
    embed_text_batch,
    embedding_cosine,
    load_bundle,
)
from motifscan.embedding.mock import create_mock_bundle
from motifscan.embedding.preprocess import PreprocessConfig, preprocess_image
from motifscan.embedding.tokenizer import TokenizerAssets, load_tokenizer_assets, tokenize

__all__ = [
    "BackendModelError",
    "ModelBundle",
    "PreprocessConfig",
    "TokenizerAssets",
    "create_mock_bundle",
    "embed_image",
    "embed_image_batch",
    "embed_text",
    "embed_text_batch",
    "embedding_cosine",
    "load_bundle",
    "load_tokenizer_assets",
    "preprocess_image",
    "tokenize",
]
