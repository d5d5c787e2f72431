import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifscan.dataset import ImageRecord
from motifscan.tiling import DEFAULT_WINDOW_FRACTIONS, Tile, TileSpec, crop, generate_tiles


def spec(fractions, overlap, full=False):
    return TileSpec(
        window_fractions=tuple(fractions), overlap_fraction=overlap, include_full_image=full
    )


class TestGenerateTiles:
    def test_square_half_windows(self):
        # 100x100, fraction 0.5, overlap 0.5: side 50, stride 25,
        # offsets {0, 25, 50} on both axes -> 3x3 grid.
        tiles = generate_tiles(100, 100, spec([0.5], 0.5))
        assert len(tiles) == 9
        expected = {
            (x, y, 50, 50) for x in (0, 25, 50) for y in (0, 25, 50)
        }
        assert {(t.x, t.y, t.w, t.h) for t in tiles} == expected

    def test_rect_no_overlap_edge_flush(self):
        # 64x32, fraction 0.5 of min side: side 16, stride 16,
        # x offsets {0,16,32,48}, y offsets {0,16} -> 8 tiles.
        tiles = generate_tiles(64, 32, spec([0.5], 0.0))
        assert len(tiles) == 8
        xs = sorted({t.x for t in tiles})
        ys = sorted({t.y for t in tiles})
        assert xs == [0, 16, 32, 48]
        assert ys == [0, 16]

    def test_edge_flush_window_added_when_stride_misses(self):
        # 10x10, fraction 0.3: side 3, stride 2 (round(1.5) = 2, half up),
        # offsets 0,2,4,6 then flush 7.
        tiles = generate_tiles(10, 10, spec([0.3], 1.0 / 3.0))
        xs = sorted({t.x for t in tiles})
        assert xs == [0, 2, 4, 6, 7]

    def test_full_window_fraction_dedup(self):
        for w, h in [(48, 48), (64, 32)]:
            tiles = generate_tiles(w, h, spec([1.0], 0.5, full=True))
            covering = [t for t in tiles if (t.x, t.y, t.w, t.h) == (0, 0, w, h)]
            assert len(covering) == 1

    def test_full_image_tile_is_last(self):
        tiles = generate_tiles(64, 32, spec([0.5], 0.0, full=True))
        assert (tiles[-1].x, tiles[-1].y, tiles[-1].w, tiles[-1].h) == (0, 0, 64, 32)

    def test_fraction_major_row_major_order(self):
        tiles = generate_tiles(100, 100, spec([0.5, 1.0], 0.5))
        sides = [t.w for t in tiles]
        assert sides == sorted(sides)
        first = [t for t in tiles if t.w == 50]
        keys = [(t.y, t.x) for t in first]
        assert keys == sorted(keys)

    def test_default_spec_values(self):
        default = TileSpec()
        assert default.window_fractions == DEFAULT_WINDOW_FRACTIONS
        assert default.overlap_fraction == 0.5
        assert default.include_full_image is True

    def test_tiny_image_produces_one_by_one(self):
        tiles = generate_tiles(1, 1, spec([0.35], 0.5))
        assert len(tiles) == 1
        assert (tiles[0].x, tiles[0].y, tiles[0].w, tiles[0].h) == (0, 0, 1, 1)

    @given(
        st.integers(1, 80),
        st.integers(1, 80),
        st.lists(st.sampled_from([0.2, 0.35, 0.5, 0.6, 1.0]), min_size=1, max_size=3, unique=True),
        st.sampled_from([0.0, 0.25, 0.5, 0.75]),
    )
    @settings(max_examples=60, deadline=None)
    def test_invariants(self, w, h, fractions, overlap):
        tiles = generate_tiles(w, h, spec(sorted(fractions), overlap, full=True))
        assert tiles == generate_tiles(w, h, spec(sorted(fractions), overlap, full=True))
        boxes = [(t.x, t.y, t.w, t.h) for t in tiles]
        assert len(boxes) == len(set(boxes))
        covered = np.zeros((h, w), dtype=bool)
        for t in tiles:
            assert 0 <= t.x and 0 <= t.y
            assert t.x + t.w <= w and t.y + t.h <= h
            covered[t.y : t.y + t.h, t.x : t.x + t.w] = True
        assert covered.all()


class TestTileSpecValidation:
    def test_rejects_empty_fractions(self):
        with pytest.raises(ValueError):
            TileSpec(window_fractions=())

    @pytest.mark.parametrize("fractions", [(0.0,), (1.2,), (-0.5,)])
    def test_rejects_out_of_range_fraction(self, fractions):
        with pytest.raises(ValueError):
            TileSpec(window_fractions=fractions)

    def test_rejects_unsorted_fractions(self):
        with pytest.raises(ValueError):
            TileSpec(window_fractions=(0.6, 0.35))

    @pytest.mark.parametrize("overlap", [-0.1, 1.0, 1.5])
    def test_rejects_bad_overlap(self, overlap):
        with pytest.raises(ValueError):
            TileSpec(overlap_fraction=overlap)


class TestCrop:
    def make_record(self, w, h, seed=0):
        rng = np.random.default_rng(seed)
        rgb = rng.integers(0, 256, (h, w, 3), dtype=np.uint8)
        gray = rng.random((h, w))
        return ImageRecord(
            id="img", source_path="img.png", width=w, height=h, rgb=rgb, gray=gray
        )

    def test_pixel_exact_and_id(self):
        record = self.make_record(16, 12)
        tile = Tile(x=3, y=2, w=5, h=7)
        sub = crop(record, tile)
        assert sub.id == "img:3,2,5x7"
        assert sub.width == 5 and sub.height == 7
        assert np.array_equal(sub.rgb, record.rgb[2:9, 3:8])
        assert np.array_equal(sub.gray, record.gray[2:9, 3:8])

    def test_crop_is_a_copy(self):
        record = self.make_record(8, 8)
        sub = crop(record, Tile(x=0, y=0, w=4, h=4))
        record.rgb[0, 0] = 0
        assert sub.rgb.base is None or not np.shares_memory(sub.rgb, record.rgb)

    def test_out_of_bounds_rejected(self):
        record = self.make_record(8, 8)
        with pytest.raises(ValueError):
            crop(record, Tile(x=5, y=0, w=4, h=4))

    def test_full_crop_roundtrip(self):
        record = self.make_record(6, 4)
        sub = crop(record, Tile(x=0, y=0, w=6, h=4))
        assert np.array_equal(sub.rgb, record.rgb)
