"""Corpus loading: manifests, image decoding, grayscale conversion, resizing.

A corpus is described by a JSON manifest listing images with a corpus role
(target images are searched, reference images supply null distributions) and a
ground-truth label used only by evaluation runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

ROLES = ("target", "reference")
LABELS = ("positive", "negative", "unknown")
SUPPORTED_FORMATS = ("PNG", "JPEG")

# Rec.601 luma weights; the dominant grayscale convention in classical CV.
LUMA_R = 0.299
LUMA_G = 0.587
LUMA_B = 0.114


class ManifestError(ValueError):
    """Raised when a manifest file is missing, malformed, or inconsistent."""


class ImageDecodeError(ValueError):
    """Raised when an image file cannot be decoded to a canonical record."""


@dataclass(frozen=True)
class ImageRecord:
    """A decoded image plus its identity and corpus bookkeeping.

    rgb is uint8 with shape (height, width, 3); gray is float64 in [0, 1]
    with shape (height, width). Both are row-major and immutable by
    convention: records are shared read-only across workers.
    """

    id: str
    source_path: Path
    width: int
    height: int
    rgb: np.ndarray
    gray: np.ndarray

    def __post_init__(self):
        if self.rgb.size != self.width * self.height * 3:
            raise ValueError(
                f"rgb buffer has {self.rgb.size} values, expected "
                f"{self.width * self.height * 3} for {self.width}x{self.height}"
            )
        if self.gray.size != self.width * self.height:
            raise ValueError(
                f"gray buffer has {self.gray.size} values, expected "
                f"{self.width * self.height}"
            )


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    path: Path
    role: str
    label: str = "unknown"


@dataclass(frozen=True)
class Manifest:
    entries: list[ManifestEntry] = field(default_factory=list)

    def targets(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.role == "target"]

    def references(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.role == "reference"]


@dataclass(frozen=True)
class QueryObject:
    """The thing to find: either a reference image or a text phrase."""

    kind: str
    name: str
    image_payload: ImageRecord | None = None
    text_payload: str | None = None

    def __post_init__(self):
        if self.kind not in ("image", "text"):
            raise ValueError(f"query kind must be 'image' or 'text', got {self.kind!r}")
        if self.kind == "image" and (self.image_payload is None or self.text_payload is not None):
            raise ValueError("image query must carry exactly an image payload")
        if self.kind == "text" and (self.text_payload is None or self.image_payload is not None):
            raise ValueError("text query must carry exactly a text payload")


def load_manifest(path: str | Path) -> Manifest:
    """Load and validate a corpus manifest.

    Entry paths are resolved relative to the manifest's directory. Raises
    ManifestError on a missing/malformed file, duplicate ids, unknown
    role/label tokens, unresolvable image paths, or an empty target set.
    """
    manifest_path = Path(path)
    if not manifest_path.is_file():
        raise ManifestError(f"manifest not found: {manifest_path}")
    try:
        doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"malformed manifest JSON in {manifest_path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ManifestError(f"manifest {manifest_path} must be an object with an 'entries' array")

    base = manifest_path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    missing: list[str] = []
    for i, raw in enumerate(doc["entries"]):
        if not isinstance(raw, dict) or "id" not in raw or "path" not in raw or "role" not in raw:
            raise ManifestError(f"entry {i} must be an object with id, path and role")
        entry_id = str(raw["id"])
        if entry_id in seen:
            raise ManifestError(f"duplicate id {entry_id!r} in manifest")
        seen.add(entry_id)
        role = raw["role"]
        if role not in ROLES:
            raise ManifestError(f"entry {entry_id!r}: unknown role {role!r} (allowed: {ROLES})")
        label = raw.get("label", "unknown")
        if label not in LABELS:
            raise ManifestError(f"entry {entry_id!r}: unknown label {label!r} (allowed: {LABELS})")
        resolved = (base / raw["path"]).resolve()
        if not resolved.is_file():
            missing.append(f"{entry_id!r} -> {resolved}")
        entries.append(ManifestEntry(id=entry_id, path=resolved, role=role, label=label))

    if missing:
        raise ManifestError("unresolvable image paths: " + "; ".join(missing))
    if not any(e.role == "target" for e in entries):
        raise ManifestError("manifest has no target entries")
    return Manifest(entries=entries)


def to_grayscale(r: int, g: int, b: int) -> float:
    """Rec.601 luma of one 8-bit RGB pixel, scaled to [0, 1]."""
    return (LUMA_R * r + LUMA_G * g + LUMA_B * b) / 255.0


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Vectorized to_grayscale over an (h, w, 3) uint8 buffer."""
    flat = rgb.astype(np.float64)
    return (LUMA_R * flat[..., 0] + LUMA_G * flat[..., 1] + LUMA_B * flat[..., 2]) / 255.0


def load_image(path: str | Path, image_id: str | None = None) -> ImageRecord:
    """Decode a PNG or JPEG file into an ImageRecord.

    Raises ImageDecodeError for unreadable files, unsupported formats, and
    zero-dimension images.
    """
    img_path = Path(path)
    try:
        with Image.open(img_path) as img:
            fmt = img.format
            if fmt not in SUPPORTED_FORMATS:
                raise ImageDecodeError(
                    f"{img_path}: unsupported format {fmt!r} (supported: {SUPPORTED_FORMATS})"
                )
            rgb = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except ImageDecodeError:
        raise
    except (OSError, UnidentifiedImageError, SyntaxError) as exc:
        raise ImageDecodeError(f"cannot decode {img_path}: {exc}") from exc

    height, width = rgb.shape[:2]
    if width == 0 or height == 0:
        raise ImageDecodeError(f"{img_path}: zero-dimension image")
    return ImageRecord(
        id=image_id if image_id is not None else img_path.stem,
        source_path=img_path,
        width=width,
        height=height,
        rgb=rgb,
        gray=rgb_to_gray(rgb),
    )


def load_entry(entry: ManifestEntry) -> ImageRecord:
    return load_image(entry.path, image_id=entry.id)


def resize_bilinear(gray: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resize of a 2D gray buffer with half-pixel centers.

    Same-size targets return an exact copy; constants are preserved exactly
    (lerp form) and outputs never leave [input min, input max].
    """
    if out_w < 1 or out_h < 1:
        raise ValueError(f"target dims must be >= 1, got {out_w}x{out_h}")
    h, w = gray.shape
    if (out_w, out_h) == (w, h):
        return gray.copy()

    xs = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    ys = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    x0 = xs.astype(np.int64)
    y0 = ys.astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xs - x0
    fy = ys - y0

    ga = gray[np.ix_(y0, x0)]
    gb = gray[np.ix_(y0, x1)]
    gc = gray[np.ix_(y1, x0)]
    gd = gray[np.ix_(y1, x1)]
    top = ga + fx[None, :] * (gb - ga)
    bot = gc + fx[None, :] * (gd - gc)
    return top + fy[:, None] * (bot - top)
