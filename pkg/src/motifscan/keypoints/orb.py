"""Corner keypoints with rotation-aware binary descriptors.

Segment-test corners over an image pyramid, ranked by Harris score,
oriented by the intensity centroid, and described by 256 pairwise
intensity comparisons rotated with the keypoint orientation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import maximum_filter, uniform_filter

from motifscan.dataset import resize_bilinear
from motifscan.keypoints.base import Keypoint
from motifscan.keypoints.orb_pattern import PATCH_RADIUS, SAMPLING_PAIRS

FAST_THRESHOLD = 0.08
FAST_ARC = 9
PYRAMID_LEVELS = 8
PYRAMID_SCALE = 1.2
MIN_IMAGE_SIDE = 32
MAX_KEYPOINTS = 500
HARRIS_K = 0.04
HARRIS_BLOCK = 7
CENTROID_RADIUS = 15
ROTATION_STEP_DEG = 12
SMOOTH_SIZE = 5
DESCRIPTOR_BYTES = 32

# circle of 16 pixels at radius 3, clockwise from 12 o'clock, as (dr, dc)
FAST_CIRCLE = (
    (-3, 0), (-3, 1), (-2, 2), (-1, 3), (0, 3), (1, 3), (2, 2), (3, 1),
    (3, 0), (3, -1), (2, -2), (1, -3), (0, -3), (-1, -3), (-2, -2), (-3, -1),
)


def _pyramid(gray: np.ndarray) -> list[tuple[np.ndarray, float]]:
    """(image, scale) per level; levels below the size floor are skipped."""
    h, w = gray.shape
    levels = []
    for level in range(PYRAMID_LEVELS):
        scale = PYRAMID_SCALE**level
        lw, lh = int(round(w / scale)), int(round(h / scale))
        if min(lw, lh) < MIN_IMAGE_SIDE:
            break
        image = gray if level == 0 else resize_bilinear(gray, lw, lh)
        levels.append((image, scale))
    return levels


def _fast_corners(image: np.ndarray) -> np.ndarray:
    """Boolean corner map: 9 contiguous circle pixels all brighter or
    all darker than center by the threshold."""
    h, w = image.shape
    if h <= 6 or w <= 6:
        return np.zeros((h, w), dtype=bool)
    center = image[3 : h - 3, 3 : w - 3]
    ring = np.stack(
        [image[3 + dr : h - 3 + dr, 3 + dc : w - 3 + dc] for dr, dc in FAST_CIRCLE]
    )
    brighter = ring > center + FAST_THRESHOLD
    darker = ring < center - FAST_THRESHOLD
    corner_inner = np.zeros(center.shape, dtype=bool)
    for flags in (brighter, darker):
        wrapped = np.concatenate([flags, flags[: FAST_ARC - 1]], axis=0)
        for start in range(16):
            corner_inner |= wrapped[start : start + FAST_ARC].all(axis=0)
    corners = np.zeros((h, w), dtype=bool)
    corners[3 : h - 3, 3 : w - 3] = corner_inner
    return corners


def _harris_response(image: np.ndarray) -> np.ndarray:
    padded = np.pad(image, 1, mode="edge")
    dx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    dy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    sxx = uniform_filter(dx * dx, size=HARRIS_BLOCK, mode="nearest")
    syy = uniform_filter(dy * dy, size=HARRIS_BLOCK, mode="nearest")
    sxy = uniform_filter(dx * dy, size=HARRIS_BLOCK, mode="nearest")
    det = sxx * syy - sxy * sxy
    trace = sxx + syy
    return det - HARRIS_K * trace * trace


def _centroid_disc() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    span = np.arange(-CENTROID_RADIUS, CENTROID_RADIUS + 1)
    dr, dc = np.meshgrid(span, span, indexing="ij")
    mask = dr * dr + dc * dc <= CENTROID_RADIUS * CENTROID_RADIUS
    return dr, dc, mask


_DISC_DR, _DISC_DC, _DISC_MASK = _centroid_disc()


def intensity_centroid_angle(image: np.ndarray, row: int, col: int) -> float:
    """Orientation of the intensity centroid over a radius-15 disc."""
    patch = image[
        row - CENTROID_RADIUS : row + CENTROID_RADIUS + 1,
        col - CENTROID_RADIUS : col + CENTROID_RADIUS + 1,
    ]
    if patch.shape != _DISC_MASK.shape:
        raise ValueError("centroid patch leaves the image")
    values = np.where(_DISC_MASK, patch, 0.0)
    m01 = float((_DISC_DR * values).sum())
    m10 = float((_DISC_DC * values).sum())
    return math.atan2(m01, m10) % (2 * math.pi)


def orb_detect(gray: np.ndarray, max_keypoints: int = MAX_KEYPOINTS) -> list[Keypoint]:
    """Detect corners across the pyramid; images below 32x32 yield [].

    Returned keypoints are in input-image coordinates, sorted by
    descending Harris response, at most max_keypoints of them. scale
    holds the pyramid level.
    """
    if max_keypoints < 1:
        raise ValueError("max_keypoints must be positive")
    h, w = gray.shape
    if min(h, w) < MIN_IMAGE_SIDE:
        return []

    candidates = []
    for level, (image, scale) in enumerate(_pyramid(gray)):
        corners = _fast_corners(image)
        lh, lw = image.shape
        margin = CENTROID_RADIUS
        interior = np.zeros_like(corners)
        interior[margin : lh - margin, margin : lw - margin] = True
        corners &= interior
        if not corners.any():
            continue
        harris = _harris_response(image)
        # non-max suppression: keep only the locally strongest corner
        masked = np.where(corners, harris, -np.inf)
        corners &= harris == maximum_filter(masked, size=3, mode="nearest")
        for r, c in zip(*np.nonzero(corners)):
            candidates.append(
                (
                    float(harris[r, c]),
                    level,
                    int(r),
                    int(c),
                    scale,
                    intensity_centroid_angle(image, int(r), int(c)),
                )
            )

    candidates.sort(key=lambda t: (-t[0], t[1], t[2], t[3]))
    keypoints = []
    for response, level, r, c, scale, angle in candidates[:max_keypoints]:
        keypoints.append(
            Keypoint(
                x=float(c * scale),
                y=float(r * scale),
                scale=float(level),
                orientation=angle,
                response=response,
            )
        )
    return keypoints


def _rotated_patterns() -> np.ndarray:
    """Sampling pairs rotated to each quantized orientation.

    Shape (steps, 256, 4) of integer offsets; rotation keeps every
    point inside the radius-15 disc by construction of the pattern.
    """
    base = np.asarray(SAMPLING_PAIRS, dtype=np.float64)
    steps = 360 // ROTATION_STEP_DEG
    out = np.zeros((steps, len(base), 4), dtype=np.int64)
    for i in range(steps):
        theta = math.radians(i * ROTATION_STEP_DEG)
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        for pair_idx, (r1, c1, r2, c2) in enumerate(base):
            out[i, pair_idx] = (
                round(cos_t * r1 + sin_t * c1),
                round(cos_t * c1 - sin_t * r1),
                round(cos_t * r2 + sin_t * c2),
                round(cos_t * c2 - sin_t * r2),
            )
    return out


_ROTATED = _rotated_patterns()


def orb_describe(gray: np.ndarray, keypoints: list[Keypoint]) -> tuple[list[Keypoint], np.ndarray]:
    """256-bit descriptors packed as uint8[32]; border keypoints drop.

    Bit = 1 iff the smoothed intensity at the first sample point is
    lower than at the second, with the pattern rotated by the keypoint
    orientation quantized to 12 degree steps.
    """
    levels = _pyramid(gray)
    kept, rows = [], []
    steps = _ROTATED.shape[0]
    smoothed_cache: dict[int, np.ndarray] = {}
    for kp in keypoints:
        level = int(kp.scale)
        if level < 0 or level >= len(levels):
            continue
        image, scale = levels[level]
        lh, lw = image.shape
        r, c = int(round(kp.y / scale)), int(round(kp.x / scale))
        if not (
            PATCH_RADIUS <= r < lh - PATCH_RADIUS and PATCH_RADIUS <= c < lw - PATCH_RADIUS
        ):
            continue
        if level not in smoothed_cache:
            smoothed_cache[level] = uniform_filter(image, size=SMOOTH_SIZE, mode="nearest")
        smooth = smoothed_cache[level]
        step = int(round(kp.orientation / math.radians(ROTATION_STEP_DEG))) % steps
        pat = _ROTATED[step]
        first = smooth[r + pat[:, 0], c + pat[:, 1]]
        second = smooth[r + pat[:, 2], c + pat[:, 3]]
        bits = first < second
        kept.append(kp)
        rows.append(np.packbits(bits))
    if not rows:
        return [], np.zeros((0, DESCRIPTOR_BYTES), dtype=np.uint8)
    return kept, np.stack(rows)
