"""Image preprocessing for the embedding encoders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from motifscan.dataset import ImageRecord, resize_bilinear


@dataclass(frozen=True)
class PreprocessConfig:
    """Encoder input recipe; constants come from the model bundle."""

    resolution: int
    channel_means: tuple[float, float, float]
    channel_stds: tuple[float, float, float]

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution must be positive")
        if len(self.channel_means) != 3 or len(self.channel_stds) != 3:
            raise ValueError("means and stds must have 3 entries")
        if any(s <= 0 for s in self.channel_stds):
            raise ValueError("channel stds must be positive")


def preprocess_image(image: ImageRecord, cfg: PreprocessConfig) -> np.ndarray:
    """Resize shorter side to R, center-crop RxR, scale to [0,1],
    normalize per channel; returns a float32 (3, R, R) tensor."""
    r = cfg.resolution
    w, h = image.width, image.height
    if w <= h:
        new_w, new_h = r, max(int(round(h * r / w)), r)
    else:
        new_w, new_h = max(int(round(w * r / h)), r), r

    channels = image.rgb.astype(np.float64) / 255.0
    if (new_w, new_h) != (w, h):
        channels = np.stack(
            [resize_bilinear(channels[:, :, c], new_w, new_h) for c in range(3)], axis=2
        )
    top = (new_h - r) // 2
    left = (new_w - r) // 2
    cropped = channels[top : top + r, left : left + r, :]

    out = np.empty((3, r, r), dtype=np.float32)
    for c in range(3):
        out[c] = (cropped[:, :, c] - cfg.channel_means[c]) / cfg.channel_stds[c]
    return out
