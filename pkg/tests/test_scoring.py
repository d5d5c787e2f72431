import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motifscan.dataset import ImageRecord, QueryObject
from motifscan.embedding import create_mock_bundle
from motifscan.scoring import (
    IncompatibleQueryError,
    ScoredImage,
    Scorer,
    ScorerConfig,
    make_scorer,
    pixel_cosine,
)
from motifscan.tiling import Tile, TileSpec, generate_tiles


def make_image(w=64, h=64, seed=0, fill=None):
    if fill is not None:
        rgb = np.full((h, w, 3), fill, dtype=np.uint8)
    else:
        rgb = np.random.default_rng(seed).integers(0, 256, (h, w, 3), dtype=np.uint8)
    gray = rgb.astype(np.float64).mean(axis=2) / 255.0
    return ImageRecord(id=f"img{seed}", source_path="x.png", width=w, height=h, rgb=rgb, gray=gray)


def image_query(record):
    return QueryObject(kind="image", name="probe", image_payload=record)


@pytest.fixture(scope="module")
def bundle():
    return create_mock_bundle()


class TestPixelCosine:
    def test_identical_buffers(self):
        a = np.random.default_rng(1).random((64, 64))
        assert pixel_cosine(a, a) == pytest.approx(1.0, abs=1e-12)

    def test_parallel_constants(self):
        a = np.full((32, 48), 0.5)
        b = np.full((80, 20), 0.9)
        assert pixel_cosine(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_two_sparse_hand_value(self):
        # equal dims, no resize: <a,b> / (1 * sqrt(2)) = 1/sqrt(2)
        a = np.zeros((64, 64))
        b = np.zeros((64, 64))
        a[0, 0] = 1.0
        b[0, 0] = 1.0
        b[0, 1] = 1.0
        assert pixel_cosine(a, b) == pytest.approx(1.0 / np.sqrt(2), abs=1e-12)

    def test_zero_norm_returns_zero(self):
        assert pixel_cosine(np.zeros((16, 16)), np.ones((16, 16))) == 0.0
        assert pixel_cosine(np.ones((16, 16)), np.zeros((8, 8))) == 0.0

    @given(st.integers(0, 2**31 - 1), st.floats(0.1, 10.0))
    @settings(max_examples=30, deadline=None)
    def test_symmetry_bound_scale_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        a = rng.random((17, 23))
        b = rng.random((40, 12))
        v = pixel_cosine(a, b)
        assert v == pytest.approx(pixel_cosine(b, a), abs=1e-12)
        assert -1.0 <= v <= 1.0
        assert pixel_cosine(a, b * scale) == pytest.approx(v, abs=1e-9)


class TestScorerConfig:
    def test_embedding_requires_model_id(self):
        with pytest.raises(ValueError, match="model_id"):
            ScorerConfig(backend="embed_text_query")

    def test_non_embedding_rejects_model_id(self):
        with pytest.raises(ValueError, match="model_id"):
            ScorerConfig(backend="sift", model_id="mock")

    def test_unknown_backend(self):
        with pytest.raises(ValueError, match="backend"):
            ScorerConfig(backend="template_match")


class TestQueryCompatibility:
    def test_text_query_on_sift_rejected(self):
        query = QueryObject(kind="text", name="motif", text_payload="a dragon")
        with pytest.raises(IncompatibleQueryError):
            make_scorer(query, ScorerConfig(backend="sift"))

    def test_text_query_on_pixel_cosine_rejected(self):
        query = QueryObject(kind="text", name="motif", text_payload="a dragon")
        with pytest.raises(IncompatibleQueryError):
            make_scorer(query, ScorerConfig(backend="pixel_cosine"))

    def test_image_query_on_text_backend_rejected(self, bundle):
        query = image_query(make_image(seed=1))
        with pytest.raises(IncompatibleQueryError):
            make_scorer(query, ScorerConfig(backend="embed_text_query", model_id="mock"), bundle)

    def test_embedding_backend_needs_bundle(self):
        query = image_query(make_image(seed=1))
        with pytest.raises(ValueError, match="bundle"):
            make_scorer(query, ScorerConfig(backend="embed_image_query", model_id="mock"))


class TestScoreTile:
    def test_pixel_cosine_self_is_one(self):
        img = make_image(seed=2)
        scorer = make_scorer(image_query(img), ScorerConfig(backend="pixel_cosine"))
        assert scorer.score_tile(img) == pytest.approx(1.0, abs=1e-12)

    def test_embedding_scores_bounded(self, bundle):
        img = make_image(seed=3)
        scorer = make_scorer(
            image_query(img), ScorerConfig(backend="embed_image_query", model_id="mock"), bundle
        )
        for seed in range(4):
            v = scorer.score_tile(make_image(seed=seed))
            assert -1.0 <= v <= 1.0

    def test_text_backend_scores_bounded(self, bundle):
        query = QueryObject(kind="text", name="motif", text_payload="ancient coin")
        scorer = make_scorer(query, ScorerConfig(backend="embed_text_query", model_id="mock"), bundle)
        v = scorer.score_tile(make_image(seed=5))
        assert -1.0 <= v <= 1.0

    def test_keypoint_score_is_match_count(self):
        from scipy.ndimage import gaussian_filter

        rng = np.random.default_rng(6)
        tex = gaussian_filter(rng.random((128, 128)), 2.0)
        tex = (tex - tex.min()) / (tex.max() - tex.min())
        rgb = (np.stack([tex] * 3, axis=2) * 255).astype(np.uint8)
        img = ImageRecord(id="tex", source_path="t.png", width=128, height=128, rgb=rgb, gray=tex)
        scorer = make_scorer(image_query(img), ScorerConfig(backend="sift"))
        self_score = scorer.score_tile(img)
        assert self_score == int(self_score) and self_score > 0
        other = make_image(seed=7, w=128, h=128)
        assert scorer.score_tile(other) <= self_score

    def test_deterministic(self, bundle):
        img = make_image(seed=8)
        tile_img = make_image(seed=9)
        scorer = make_scorer(
            image_query(img), ScorerConfig(backend="embed_image_query", model_id="mock"), bundle
        )
        assert scorer.score_tile(tile_img) == scorer.score_tile(tile_img)


class TestScoreImage:
    def make_striped(self, w=96, h=48):
        rgb = np.zeros((h, w, 3), dtype=np.uint8)
        rgb[:, : w // 2] = 255
        gray = rgb.astype(np.float64).mean(axis=2) / 255.0
        return ImageRecord(id="striped", source_path="s.png", width=w, height=h, rgb=rgb, gray=gray)

    def test_empty_tiles_error(self):
        img = make_image(seed=10)
        scorer = make_scorer(image_query(img), ScorerConfig(backend="pixel_cosine"))
        with pytest.raises(ValueError, match="tiles"):
            scorer.score_image(img, [])

    def test_single_full_tile_equals_score_tile(self):
        img = make_image(seed=11)
        scorer = make_scorer(image_query(img), ScorerConfig(backend="pixel_cosine"))
        full = Tile(x=0, y=0, w=img.width, h=img.height)
        scored = scorer.score_image(img, [full])
        assert scored.similarity == pytest.approx(scorer.score_tile(img), abs=1e-12)
        assert scored.best_tile == full

    def test_max_aggregation_and_argmax(self):
        # white query: the all-white half-stripe tile wins
        white = make_image(seed=0, fill=255)
        target = self.make_striped()
        tiles = generate_tiles(
            target.width, target.height,
            TileSpec(window_fractions=(0.5,), overlap_fraction=0.0, include_full_image=True),
        )
        scorer = make_scorer(image_query(white), ScorerConfig(backend="pixel_cosine"))
        scored = scorer.score_image(target, tiles, keep_tile_scores=True)
        per_tile = dict(scored.per_tile_scores)
        assert scored.similarity == pytest.approx(max(per_tile.values()), abs=1e-12)
        assert per_tile[scored.best_tile] == pytest.approx(scored.similarity, abs=1e-12)
        assert scored.best_tile.x < target.width // 2

    def test_tie_breaks_to_first_tile(self):
        img = make_image(seed=12, fill=128)
        scorer = make_scorer(image_query(img), ScorerConfig(backend="pixel_cosine"))
        tiles = generate_tiles(
            img.width, img.height,
            TileSpec(window_fractions=(0.5,), overlap_fraction=0.5, include_full_image=False),
        )
        scored = scorer.score_image(img, tiles)
        # constant image: every tile scores 1.0, first must win
        assert scored.best_tile == tiles[0]

    def test_mean_aggregation_option(self):
        img = make_image(seed=13)
        scorer = make_scorer(
            image_query(img), ScorerConfig(backend="pixel_cosine", params={"aggregation": "mean"})
        )
        tiles = generate_tiles(img.width, img.height, TileSpec())
        scored = scorer.score_image(img, tiles, keep_tile_scores=True)
        values = [v for _, v in scored.per_tile_scores]
        assert scored.similarity == pytest.approx(np.mean(values), abs=1e-12)

    def test_max_invariant_under_tile_permutation(self, bundle):
        img = make_image(seed=14)
        query = image_query(make_image(seed=15))
        scorer = make_scorer(query, ScorerConfig(backend="embed_image_query", model_id="mock"), bundle)
        tiles = generate_tiles(img.width, img.height, TileSpec())
        forward = scorer.score_image(img, tiles)
        backward = scorer.score_image(img, list(reversed(tiles)))
        assert forward.similarity == pytest.approx(backward.similarity, abs=1e-12)

    def test_scored_image_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ScoredImage(image_id="x", similarity=float("nan"), best_tile=Tile(0, 0, 1, 1))
