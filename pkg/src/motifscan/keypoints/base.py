"""Shared types for the keypoint detectors and matchers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, order=True)
class Keypoint:
    """A detected interest point.

    x, y are subpixel column/row coordinates in the input image frame.
    scale is the absolute blur sigma for blob keypoints and the pyramid
    level for corner keypoints. orientation is in radians. response is
    the detector score (contrast magnitude or corner score).
    """

    x: float
    y: float
    scale: float
    orientation: float
    response: float

    def __post_init__(self):
        if not np.isfinite(self.response):
            raise ValueError(f"keypoint response must be finite, got {self.response}")


@dataclass(frozen=True, order=True)
class Match:
    query_index: int
    train_index: int
    distance: float

    def __post_init__(self):
        if self.query_index < 0 or self.train_index < 0:
            raise ValueError("match indices must be nonnegative")
        if self.distance < 0:
            raise ValueError(f"match distance must be nonnegative, got {self.distance}")


def image_gradients(image: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference gradients (dx, dy) with replicated borders."""
    padded = np.pad(image, 1, mode="edge")
    dx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    dy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    return dx, dy
