"""Scale-space blob keypoints with gradient-histogram descriptors.

Difference-of-Gaussians extrema over a Gaussian pyramid, refined to
subpixel position by a second-order Taylor fit, filtered by contrast
and edge-response tests, oriented by a 36-bin gradient histogram, and
described by the classic 4x4x8 = 128-dimensional gradient layout.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import gaussian_filter, maximum_filter, minimum_filter

from motifscan.keypoints.base import Keypoint

BASE_SIGMA = 1.6
# the input is treated as already carrying this much blur
ASSUMED_BLUR = 0.5
SCALES_PER_OCTAVE = 3
MIN_OCTAVE_SIDE = 16
CONTRAST_THRESHOLD = 0.03
EDGE_RATIO = 10.0
MAX_REFINE_STEPS = 5
ORI_BINS = 36
ORI_PEAK_RATIO = 0.8
ORI_SIGMA_FACTOR = 1.5
ORI_RADIUS_FACTOR = 3.0
DESC_GRID = 4
DESC_ORI_BINS = 8
DESC_CELL_SCALE = 3.0
DESC_CLAMP = 0.2


def build_gaussian_pyramid(gray: np.ndarray) -> list[list[np.ndarray]]:
    """Octaves of progressively blurred images, 6 per octave.

    Each octave doubles the blur; the next octave starts from the
    third-from-last image downsampled by 2. Octaves stop once the
    shorter side would fall below the detector minimum.
    """
    sigma_diff = math.sqrt(max(BASE_SIGMA**2 - ASSUMED_BLUR**2, 0.01))
    base = gaussian_filter(gray.astype(np.float64), sigma_diff)

    k = 2.0 ** (1.0 / SCALES_PER_OCTAVE)
    increments = []
    for i in range(1, SCALES_PER_OCTAVE + 3):
        prev = BASE_SIGMA * k ** (i - 1)
        increments.append(math.sqrt((prev * k) ** 2 - prev**2))

    octaves = []
    current = base
    while min(current.shape) >= MIN_OCTAVE_SIDE:
        images = [current]
        for inc in increments:
            images.append(gaussian_filter(images[-1], inc))
        octaves.append(images)
        current = images[SCALES_PER_OCTAVE][::2, ::2]
    return octaves


def _dog_stack(images: list[np.ndarray]) -> np.ndarray:
    return np.stack([images[i + 1] - images[i] for i in range(len(images) - 1)])


def _refine(stack: np.ndarray, s: int, r: int, c: int):
    """Taylor-fit subpixel refinement; returns None when discarded."""
    n_s, n_r, n_c = stack.shape
    for _ in range(MAX_REFINE_STEPS):
        d = stack
        grad = np.array(
            [
                (d[s + 1, r, c] - d[s - 1, r, c]) / 2.0,
                (d[s, r + 1, c] - d[s, r - 1, c]) / 2.0,
                (d[s, r, c + 1] - d[s, r, c - 1]) / 2.0,
            ]
        )
        center = d[s, r, c]
        dss = d[s + 1, r, c] - 2 * center + d[s - 1, r, c]
        drr = d[s, r + 1, c] - 2 * center + d[s, r - 1, c]
        dcc = d[s, r, c + 1] - 2 * center + d[s, r, c - 1]
        dsr = (d[s + 1, r + 1, c] - d[s + 1, r - 1, c] - d[s - 1, r + 1, c] + d[s - 1, r - 1, c]) / 4.0
        dsc = (d[s + 1, r, c + 1] - d[s + 1, r, c - 1] - d[s - 1, r, c + 1] + d[s - 1, r, c - 1]) / 4.0
        drc = (d[s, r + 1, c + 1] - d[s, r + 1, c - 1] - d[s, r - 1, c + 1] + d[s, r - 1, c - 1]) / 4.0
        hessian = np.array([[dss, dsr, dsc], [dsr, drr, drc], [dsc, drc, dcc]])
        try:
            offset = -np.linalg.solve(hessian, grad)
        except np.linalg.LinAlgError:
            return None
        if np.all(np.abs(offset) < 0.5):
            contrast = center + 0.5 * float(grad @ offset)
            if abs(contrast) < CONTRAST_THRESHOLD:
                return None
            # edge test on the spatial Hessian
            tr = drr + dcc
            det = drr * dcc - drc * drc
            if det <= 0 or tr * tr * EDGE_RATIO >= (EDGE_RATIO + 1) ** 2 * det:
                return None
            return s + offset[0], r + offset[1], c + offset[2], contrast
        s += int(round(offset[0]))
        r += int(round(offset[1]))
        c += int(round(offset[2]))
        if not (1 <= s < n_s - 1 and 1 <= r < n_r - 1 and 1 <= c < n_c - 1):
            return None
    return None


def _orientations(image: np.ndarray, row: float, col: float, sigma_oct: float) -> list[float]:
    """Peaks of the gradient-orientation histogram around one point."""
    h, w = image.shape
    weight_sigma = ORI_SIGMA_FACTOR * sigma_oct
    radius = int(round(ORI_RADIUS_FACTOR * weight_sigma))
    r0, c0 = int(round(row)), int(round(col))
    r_lo, r_hi = max(r0 - radius, 1), min(r0 + radius, h - 2)
    c_lo, c_hi = max(c0 - radius, 1), min(c0 + radius, w - 2)
    if r_lo > r_hi or c_lo > c_hi:
        return []

    rows = np.arange(r_lo, r_hi + 1)
    cols = np.arange(c_lo, c_hi + 1)
    window = image[r_lo - 1 : r_hi + 2, c_lo - 1 : c_hi + 2]
    dx = (window[1:-1, 2:] - window[1:-1, :-2]) / 2.0
    dy = (window[2:, 1:-1] - window[:-2, 1:-1]) / 2.0
    mag = np.hypot(dx, dy)
    ang = np.arctan2(dy, dx) % (2 * np.pi)

    dr = rows[:, None] - row
    dc = cols[None, :] - col
    weights = np.exp(-(dr**2 + dc**2) / (2 * weight_sigma**2)) * mag
    bins = (ang / (2 * np.pi) * ORI_BINS).astype(int) % ORI_BINS
    hist = np.bincount(bins.ravel(), weights=weights.ravel(), minlength=ORI_BINS)

    # circular binomial smoothing, one pass
    kernel = np.array([1, 4, 6, 4, 1]) / 16.0
    smoothed = np.zeros_like(hist)
    for offset, kv in zip(range(-2, 3), kernel):
        smoothed += kv * np.roll(hist, offset)
    hist = smoothed

    peak_floor = ORI_PEAK_RATIO * hist.max()
    if hist.max() <= 0:
        return []
    result = []
    for i in range(ORI_BINS):
        left, right = hist[(i - 1) % ORI_BINS], hist[(i + 1) % ORI_BINS]
        if hist[i] > left and hist[i] > right and hist[i] >= peak_floor:
            denom = left - 2 * hist[i] + right
            shift = 0.5 * (left - right) / denom if denom != 0 else 0.0
            angle = (i + shift) * (2 * np.pi / ORI_BINS) % (2 * np.pi)
            result.append(float(angle))
    return result


def sift_detect(gray: np.ndarray) -> list[Keypoint]:
    """Detect oriented blob keypoints; images below 16x16 yield []."""
    h, w = gray.shape
    if min(h, w) < MIN_OCTAVE_SIDE:
        return []

    pyramid = build_gaussian_pyramid(gray)
    prefilter = 0.5 * CONTRAST_THRESHOLD
    found = []
    seen = set()
    for octave_index, images in enumerate(pyramid):
        stack = _dog_stack(images)
        maxima = stack == maximum_filter(stack, size=(3, 3, 3), mode="constant", cval=np.inf)
        minima = stack == minimum_filter(stack, size=(3, 3, 3), mode="constant", cval=-np.inf)
        candidate = (maxima | minima) & (np.abs(stack) > prefilter)
        candidate[0] = candidate[-1] = False
        candidate[:, 0, :] = candidate[:, -1, :] = False
        candidate[:, :, 0] = candidate[:, :, -1] = False

        scale_step = 2.0**octave_index
        for s, r, c in zip(*np.nonzero(candidate)):
            refined = _refine(stack, int(s), int(r), int(c))
            if refined is None:
                continue
            fs, fr, fc, contrast = refined
            sigma_oct = BASE_SIGMA * 2.0 ** (fs / SCALES_PER_OCTAVE)
            layer = min(max(int(round(fs)), 1), SCALES_PER_OCTAVE)
            for angle in _orientations(images[layer], fr, fc, sigma_oct):
                key = (
                    round(fc * scale_step, 2),
                    round(fr * scale_step, 2),
                    round(sigma_oct * scale_step, 2),
                    round(angle, 3),
                )
                if key in seen:
                    continue
                seen.add(key)
                found.append(
                    Keypoint(
                        x=float(fc * scale_step),
                        y=float(fr * scale_step),
                        scale=float(sigma_oct * scale_step),
                        orientation=angle,
                        response=abs(contrast),
                    )
                )
    found.sort(key=lambda kp: (-kp.response, kp.x, kp.y, kp.scale, kp.orientation))
    return found


def _locate_in_pyramid(kp: Keypoint, n_octaves: int) -> tuple[int, int]:
    """Octave and blur layer whose sigma best matches the keypoint."""
    octave = int(math.floor(math.log2(max(kp.scale, BASE_SIGMA) / BASE_SIGMA)))
    octave = min(max(octave, 0), n_octaves - 1)
    sigma_oct = kp.scale / 2.0**octave
    layer = int(round(SCALES_PER_OCTAVE * math.log2(sigma_oct / BASE_SIGMA)))
    layer = min(max(layer, 1), SCALES_PER_OCTAVE)
    return octave, layer


def _describe_one(image: np.ndarray, row: float, col: float, sigma_oct: float, angle: float):
    """128-d gradient histogram, or None when the window leaves the image."""
    h, w = image.shape
    cell = DESC_CELL_SCALE * sigma_oct
    radius = int(round(cell * math.sqrt(2) * (DESC_GRID + 1) * 0.5))
    r0, c0 = int(round(row)), int(round(col))
    if r0 - radius < 1 or r0 + radius > h - 2 or c0 - radius < 1 or c0 + radius > w - 2:
        return None

    rows = np.arange(r0 - radius, r0 + radius + 1)
    cols = np.arange(c0 - radius, c0 + radius + 1)
    window = image[r0 - radius - 1 : r0 + radius + 2, c0 - radius - 1 : c0 + radius + 2]
    dx = (window[1:-1, 2:] - window[1:-1, :-2]) / 2.0
    dy = (window[2:, 1:-1] - window[:-2, 1:-1]) / 2.0
    mag = np.hypot(dx, dy)
    ang = np.arctan2(dy, dx)

    dr = (rows[:, None] - row) * np.ones_like(dx)
    dc = (cols[None, :] - col) * np.ones_like(dx)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    r_rot = (-sin_a * dc + cos_a * dr) / cell
    c_rot = (cos_a * dc + sin_a * dr) / cell

    r_bin = r_rot + DESC_GRID / 2 - 0.5
    c_bin = c_rot + DESC_GRID / 2 - 0.5
    inside = (r_bin > -1) & (r_bin < DESC_GRID) & (c_bin > -1) & (c_bin < DESC_GRID)
    if not inside.any():
        return None

    o_bin = ((ang - angle) % (2 * np.pi)) / (2 * np.pi) * DESC_ORI_BINS
    weight = np.exp(-(r_rot**2 + c_rot**2) / (0.5 * DESC_GRID**2)) * mag

    r_bin, c_bin, o_bin, weight = (a[inside] for a in (r_bin, c_bin, o_bin, weight))
    hist = np.zeros((DESC_GRID + 2, DESC_GRID + 2, DESC_ORI_BINS))
    rf, cf, of = np.floor(r_bin), np.floor(c_bin), np.floor(o_bin)
    dr_f, dc_f, do_f = r_bin - rf, c_bin - cf, o_bin - of
    rf = rf.astype(int) + 1
    cf = cf.astype(int) + 1
    of = of.astype(int)
    for ir in (0, 1):
        wr = weight * (dr_f if ir else 1 - dr_f)
        for ic in (0, 1):
            wc = wr * (dc_f if ic else 1 - dc_f)
            for io in (0, 1):
                wo = wc * (do_f if io else 1 - do_f)
                np.add.at(hist, (rf + ir, cf + ic, (of + io) % DESC_ORI_BINS), wo)

    vec = hist[1 : DESC_GRID + 1, 1 : DESC_GRID + 1, :].ravel()
    norm = np.linalg.norm(vec)
    if norm == 0:
        return None
    vec = np.minimum(vec / norm, DESC_CLAMP)
    norm = np.linalg.norm(vec)
    if norm == 0:
        return None
    return vec / norm


def sift_describe(gray: np.ndarray, keypoints: list[Keypoint]) -> tuple[list[Keypoint], np.ndarray]:
    """Describe keypoints; border keypoints are dropped with their slot.

    Returns the surviving keypoints (input order preserved) and an
    (n, 128) float array of unit-norm descriptors aligned with them.
    """
    pyramid = build_gaussian_pyramid(gray)
    if not pyramid:
        return [], np.zeros((0, DESC_GRID * DESC_GRID * DESC_ORI_BINS))
    kept, descriptors = [], []
    for kp in keypoints:
        octave, layer = _locate_in_pyramid(kp, len(pyramid))
        scale_step = 2.0**octave
        vec = _describe_one(
            pyramid[octave][layer],
            kp.y / scale_step,
            kp.x / scale_step,
            kp.scale / scale_step,
            kp.orientation,
        )
        if vec is None:
            continue
        kept.append(kp)
        descriptors.append(vec)
    if not descriptors:
        return [], np.zeros((0, DESC_GRID * DESC_GRID * DESC_ORI_BINS))
    return kept, np.stack(descriptors)
