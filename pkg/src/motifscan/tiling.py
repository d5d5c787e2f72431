"""Sub-image window generation and cropping.

Square windows are sized as fractions of the shorter image side and placed on
an overlapping grid, with extra windows flushed to the right/bottom edges so
every pixel is covered. Window lists are deterministic: fraction-major order,
then row-major within a fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dataset import ImageRecord

# Defaults cover small motifs (mint letters, small symbols) through whole-face
# scenes; 0.5 overlap keeps any centered motif fully inside some window.
DEFAULT_WINDOW_FRACTIONS = (0.35, 0.6, 1.0)
DEFAULT_OVERLAP = 0.5


@dataclass(frozen=True)
class TileSpec:
    window_fractions: tuple[float, ...] = DEFAULT_WINDOW_FRACTIONS
    overlap_fraction: float = DEFAULT_OVERLAP
    include_full_image: bool = True

    def __post_init__(self):
        if not self.window_fractions:
            raise ValueError("window_fractions must be nonempty")
        if any(not 0.0 < f <= 1.0 for f in self.window_fractions):
            raise ValueError(f"window fractions must lie in (0, 1]: {self.window_fractions}")
        if list(self.window_fractions) != sorted(self.window_fractions):
            raise ValueError("window_fractions must be sorted ascending")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError(f"overlap_fraction must lie in [0, 1): {self.overlap_fraction}")


@dataclass(frozen=True, order=True)
class Tile:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"tile extents must be >= 1: {self}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"tile offsets must be >= 0: {self}")


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def _axis_offsets(extent: int, side: int, stride: int) -> list[int]:
    offsets = list(range(0, extent - side + 1, stride))
    flush = extent - side
    if offsets[-1] != flush:
        offsets.append(flush)
    return offsets


def generate_tiles(width: int, height: int, spec: TileSpec) -> list[Tile]:
    """Enumerate the square scoring windows for an image of the given size.

    For each fraction f the window side is round(f * min(w, h)) and the grid
    stride is max(1, round(side * (1 - overlap))); an edge-flush row/column is
    appended whenever the grid does not already reach the far edge. Duplicates
    (across fractions or with the optional full-image tile) are dropped while
    preserving first-occurrence order.
    """
    if width < 1 or height < 1:
        raise ValueError(f"image dims must be >= 1, got {width}x{height}")

    tiles: list[Tile] = []
    seen: set[tuple[int, int, int, int]] = set()

    def push(tile: Tile):
        key = (tile.x, tile.y, tile.w, tile.h)
        if key not in seen:
            seen.add(key)
            tiles.append(tile)

    short_side = min(width, height)
    for fraction in spec.window_fractions:
        side = max(1, _round_half_up(fraction * short_side))
        stride = max(1, _round_half_up(side * (1.0 - spec.overlap_fraction)))
        for y in _axis_offsets(height, side, stride):
            for x in _axis_offsets(width, side, stride):
                push(Tile(x=x, y=y, w=side, h=side))

    if spec.include_full_image:
        push(Tile(x=0, y=0, w=width, h=height))
    return tiles


def crop(image: ImageRecord, tile: Tile) -> ImageRecord:
    """Pixel-exact crop of a tile region; no resampling.

    The returned record reuses the parent's source path and derives its id
    from the tile geometry.
    """
    if tile.x + tile.w > image.width or tile.y + tile.h > image.height:
        raise ValueError(f"tile {tile} exceeds image bounds {image.width}x{image.height}")
    rgb = image.rgb[tile.y : tile.y + tile.h, tile.x : tile.x + tile.w].copy()
    gray = image.gray[tile.y : tile.y + tile.h, tile.x : tile.x + tile.w].copy()
    return ImageRecord(
        id=f"{image.id}:{tile.x},{tile.y},{tile.w}x{tile.h}",
        source_path=image.source_path,
        width=tile.w,
        height=tile.h,
        rgb=rgb,
        gray=gray,
    )
