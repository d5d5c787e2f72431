"""Model bundles: serialized encoder graphs plus their constants.

A bundle directory contains model.json (identity, embedding size,
preprocessing constants, tokenizer file names), two ONNX graph files,
the tokenizer text assets, and optionally reference_vectors.json with
fixture inputs and expected embeddings for parity checks.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from motifscan.dataset import ImageRecord
from motifscan.embedding.preprocess import PreprocessConfig, preprocess_image
from motifscan.embedding.tokenizer import TokenizerAssets, load_tokenizer_assets, tokenize

KNOWN_MODEL_IDS = ("ViT-B-32", "ViT-L-14-quickgelu", "ViT-H-14-378-quickgelu", "mock")
DEFAULT_BATCH_SIZE = 16


class BackendModelError(RuntimeError):
    """Bundle files missing/invalid or the inference runtime failed."""


@dataclass
class ModelBundle:
    """Loaded encoders with their preprocessing and tokenizer state.

    image_runner maps a float32 (n, 3, R, R) batch to (n, embed_dim)
    raw outputs; text_runner maps an int64 (n, context_length) batch
    likewise. Outputs are normalized by the embed_* functions.
    """

    model_id: str
    embed_dim: int
    preprocess: PreprocessConfig
    tokenizer: TokenizerAssets
    image_runner: Callable[[np.ndarray], np.ndarray]
    text_runner: Callable[[np.ndarray], np.ndarray]
    checkpoint: str | None = None
    reference_vectors: dict | None = None

    def __post_init__(self):
        if self.embed_dim < 1:
            raise BackendModelError(f"embed_dim must be positive, got {self.embed_dim}")
        if self.model_id not in KNOWN_MODEL_IDS:
            raise BackendModelError(
                f"unknown model_id {self.model_id!r}; expected one of {KNOWN_MODEL_IDS}"
            )


class _OnnxGraph:
    """Lazy ONNX session; serialized behind a lock for thread safety."""

    def __init__(self, path: Path, input_name: str | None = None):
        try:
            import onnxruntime
        except ImportError as exc:
            raise BackendModelError(
                "onnxruntime is required to run exported model bundles; "
                "install the 'onnx' extra or use the mock provider"
            ) from exc
        try:
            self._session = onnxruntime.InferenceSession(
                str(path), providers=["CPUExecutionProvider"]
            )
        except Exception as exc:
            raise BackendModelError(f"failed to load inference graph {path}: {exc}") from exc
        self._input = input_name or self._session.get_inputs()[0].name
        self._lock = threading.Lock()

    def __call__(self, batch: np.ndarray) -> np.ndarray:
        with self._lock:
            try:
                (out,) = self._session.run(None, {self._input: batch})
            except Exception as exc:
                raise BackendModelError(f"inference graph execution failed: {exc}") from exc
        return np.asarray(out)


def _require(doc: dict, key: str, path: Path):
    if key not in doc:
        raise BackendModelError(f"model.json at {path} lacks required field {key!r}")
    return doc[key]


def load_bundle(bundle_dir: str | Path) -> ModelBundle:
    """Load a bundle directory; raises BackendModelError on any defect."""
    root = Path(bundle_dir)
    meta_path = root / "model.json"
    if not meta_path.is_file():
        raise BackendModelError(f"no model.json in bundle directory {root}")
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise BackendModelError(f"unreadable model.json at {meta_path}: {exc}") from exc

    model_id = _require(meta, "model_id", meta_path)
    if model_id not in KNOWN_MODEL_IDS:
        raise BackendModelError(
            f"unknown model_id {model_id!r} in {meta_path}; expected one of {KNOWN_MODEL_IDS}"
        )
    embed_dim = int(_require(meta, "embed_dim", meta_path))
    pre = _require(meta, "preprocess", meta_path)
    try:
        preprocess_cfg = PreprocessConfig(
            resolution=int(pre["resolution"]),
            channel_means=tuple(pre["channel_means"]),
            channel_stds=tuple(pre["channel_stds"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BackendModelError(f"invalid preprocess block in {meta_path}: {exc}") from exc

    tok = _require(meta, "tokenizer", meta_path)
    try:
        assets = load_tokenizer_assets(
            root / tok["vocab_file"],
            root / tok["merges_file"],
            context_length=int(tok.get("context_length", 77)),
        )
    except (OSError, KeyError, ValueError) as exc:
        raise BackendModelError(f"invalid tokenizer assets for {meta_path}: {exc}") from exc

    image_path = root / meta.get("image_encoder", "image_encoder.onnx")
    text_path = root / meta.get("text_encoder", "text_encoder.onnx")
    for p in (image_path, text_path):
        if not p.is_file():
            raise BackendModelError(f"bundle graph file missing: {p}")

    reference = None
    ref_path = root / "reference_vectors.json"
    if ref_path.is_file():
        reference = json.loads(ref_path.read_text(encoding="utf-8"))

    return ModelBundle(
        model_id=model_id,
        embed_dim=embed_dim,
        preprocess=preprocess_cfg,
        tokenizer=assets,
        image_runner=_OnnxGraph(image_path),
        text_runner=_OnnxGraph(text_path),
        checkpoint=meta.get("checkpoint"),
        reference_vectors=reference,
    )


def _normalize_rows(raw: np.ndarray, embed_dim: int) -> np.ndarray:
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2 or raw.shape[1] != embed_dim:
        raise BackendModelError(
            f"encoder output shape {raw.shape} does not match embed_dim {embed_dim}"
        )
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    if (norms == 0).any():
        raise BackendModelError("encoder produced a zero vector; cannot normalize")
    return raw / norms


def embed_image_batch(
    images: list[ImageRecord], bundle: ModelBundle, batch_size: int = DEFAULT_BATCH_SIZE
) -> np.ndarray:
    """Unit-norm embeddings, one row per image, batch-size independent."""
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    if not images:
        return np.zeros((0, bundle.embed_dim))
    tensors = np.stack([preprocess_image(im, bundle.preprocess) for im in images])
    rows = []
    for start in range(0, len(tensors), batch_size):
        rows.append(bundle.image_runner(tensors[start : start + batch_size]))
    return _normalize_rows(np.concatenate(rows, axis=0), bundle.embed_dim)


def embed_image(image: ImageRecord, bundle: ModelBundle) -> np.ndarray:
    return embed_image_batch([image], bundle)[0]


def embed_text_batch(
    texts: list[str], bundle: ModelBundle, batch_size: int = DEFAULT_BATCH_SIZE
) -> np.ndarray:
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    if not texts:
        return np.zeros((0, bundle.embed_dim))
    tokens = np.array([tokenize(t, bundle.tokenizer) for t in texts], dtype=np.int64)
    rows = []
    for start in range(0, len(tokens), batch_size):
        rows.append(bundle.text_runner(tokens[start : start + batch_size]))
    return _normalize_rows(np.concatenate(rows, axis=0), bundle.embed_dim)


def embed_text(text: str, bundle: ModelBundle) -> np.ndarray:
    return embed_text_batch([text], bundle)[0]


def embedding_cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of two unit-norm embeddings, clipped to [-1, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"embedding dimensions differ: {a.shape} vs {b.shape}")
    return float(np.clip(a @ b, -1.0, 1.0))
