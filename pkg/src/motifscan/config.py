"""Run configuration: one JSON document describing a whole run.

A config names the corpus manifest, the query, one or more scorers, the
tiling scheme, the calibration mechanisms, thresholds, and output
location. Command-line flags override config fields, which override
defaults. Paths inside the config resolve relative to the config file;
the output directory resolves relative to the working directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .scoring import BACKENDS, EMBED_BACKENDS
from .tiling import TileSpec

DEFAULT_THRESHOLDS = (0.01, 0.05, 0.1)
DEFAULT_K = 10
MOCK_BUNDLE = "mock"


class ConfigError(ValueError):
    """Raised when a run configuration is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class QuerySpec:
    """What to search for: a literal text prompt or a path to an example image."""

    kind: str
    name: str
    text: str | None = None
    path: Path | None = None

    def __post_init__(self):
        if self.kind not in ("image", "text"):
            raise ConfigError(f"query kind must be 'image' or 'text', got {self.kind!r}")
        if self.kind == "text" and (self.text is None or self.path is not None):
            raise ConfigError("text query needs exactly a 'text' field")
        if self.kind == "image" and (self.path is None or self.text is not None):
            raise ConfigError("image query needs exactly a 'path' field")


@dataclass(frozen=True)
class ScorerSpec:
    """Backend choice plus its model bundle ('mock' selects the builtin provider)."""

    backend: str
    bundle: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if self.backend in EMBED_BACKENDS and not self.bundle:
            raise ConfigError(f"backend {self.backend!r} requires a 'bundle' path or 'mock'")
        if self.backend not in EMBED_BACKENDS and self.bundle is not None:
            raise ConfigError(f"backend {self.backend!r} takes no bundle")


@dataclass(frozen=True)
class RunConfig:
    manifest_path: Path
    query: QuerySpec
    scorers: tuple[ScorerSpec, ...]
    tile_spec: TileSpec
    mechanisms: tuple[int, ...]
    thresholds: tuple[float, ...]
    k: int
    output_dir: Path
    threads: int
    seed: int
    decoy_pool_path: Path | None = None

    def __post_init__(self):
        if not self.scorers:
            raise ConfigError("config needs at least one scorer")
        if not self.mechanisms or any(m not in (1, 2, 3) for m in self.mechanisms):
            raise ConfigError(f"mechanisms must be a nonempty subset of (1, 2, 3), got {self.mechanisms}")
        if not self.thresholds or any(not 0.0 < t < 1.0 for t in self.thresholds):
            raise ConfigError(f"thresholds must lie strictly inside (0, 1), got {self.thresholds}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if 2 in self.mechanisms and self.decoy_pool_path is None:
            raise ConfigError("mechanism 2 requires a decoy pool path")
        if not self.manifest_path.is_file():
            raise ConfigError(f"manifest not found: {self.manifest_path}")
        if self.query.path is not None and not self.query.path.is_file():
            raise ConfigError(f"query image not found: {self.query.path}")
        if self.decoy_pool_path is not None and not self.decoy_pool_path.is_file():
            raise ConfigError(f"decoy pool not found: {self.decoy_pool_path}")
        for scorer in self.scorers:
            if scorer.bundle and scorer.bundle != MOCK_BUNDLE and not Path(scorer.bundle).is_dir():
                raise ConfigError(f"model bundle not found: {scorer.bundle}")

    def to_json_dict(self) -> dict:
        return {
            "manifest": str(self.manifest_path),
            "query": {
                "kind": self.query.kind,
                "name": self.query.name,
                "text": self.query.text,
                "path": str(self.query.path) if self.query.path else None,
            },
            "scorers": [
                {"backend": s.backend, "bundle": s.bundle, "params": s.params}
                for s in self.scorers
            ],
            "tiles": {
                "window_fractions": list(self.tile_spec.window_fractions),
                "overlap_fraction": self.tile_spec.overlap_fraction,
                "include_full_image": self.tile_spec.include_full_image,
            },
            "mechanisms": list(self.mechanisms),
            "thresholds": list(self.thresholds),
            "k": self.k,
            "output": str(self.output_dir),
            "threads": self.threads,
            "seed": self.seed,
            "decoy_pool": str(self.decoy_pool_path) if self.decoy_pool_path else None,
        }


def _parse_query(raw, base: Path) -> QuerySpec:
    if not isinstance(raw, dict):
        raise ConfigError("'query' must be an object")
    kind = raw.get("kind")
    text = raw.get("text")
    path = raw.get("path")
    name = raw.get("name")
    if name is None:
        name = text if kind == "text" else (Path(path).stem if path else None)
    if not name:
        raise ConfigError("query needs a 'name' (or a payload to derive one from)")
    return QuerySpec(
        kind=kind,
        name=name,
        text=text,
        path=(base / path) if path else None,
    )


def _parse_scorer(raw, base: Path) -> ScorerSpec:
    if not isinstance(raw, dict) or "backend" not in raw:
        raise ConfigError("each scorer needs a 'backend' field")
    bundle = raw.get("bundle")
    if bundle and bundle != MOCK_BUNDLE:
        bundle = str(base / bundle)
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("scorer 'params' must be an object")
    return ScorerSpec(backend=raw["backend"], bundle=bundle, params=params)


def _parse_tiles(raw) -> TileSpec:
    if raw is None:
        return TileSpec()
    if not isinstance(raw, dict):
        raise ConfigError("'tiles' must be an object")
    defaults = TileSpec()
    return TileSpec(
        window_fractions=tuple(raw.get("window_fractions", defaults.window_fractions)),
        overlap_fraction=raw.get("overlap_fraction", defaults.overlap_fraction),
        include_full_image=raw.get("include_full_image", defaults.include_full_image),
    )


def load_run_config(
    config_path: str | Path,
    *,
    output: str | None = None,
    backend: str | None = None,
    mechanism: int | None = None,
    k: int | None = None,
    threads: int | None = None,
) -> RunConfig:
    """Parse and validate a run config, applying flag overrides.

    Precedence is flag > config field > default. --backend narrows the
    scorer list to entries with that backend, or introduces a bare one
    when the config lists none (valid only for bundle-free backends).
    --mechanism narrows the mechanism list to a single entry.
    """
    config_path = Path(config_path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        raw = json.loads(config_path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    base = config_path.parent

    if "manifest" not in raw:
        raise ConfigError("config needs a 'manifest' field")
    if "query" not in raw:
        raise ConfigError("config needs a 'query' field")

    raw_scorers = raw.get("scorers")
    if raw_scorers is None:
        raw_scorers = [raw["scorer"]] if "scorer" in raw else []
    if not isinstance(raw_scorers, list):
        raise ConfigError("'scorers' must be a list")
    scorers = [_parse_scorer(s, base) for s in raw_scorers]
    if backend is not None:
        narrowed = [s for s in scorers if s.backend == backend]
        scorers = narrowed or [ScorerSpec(backend=backend)]
    if not scorers:
        raise ConfigError("config needs a 'scorer' or 'scorers' field")

    calibration = raw.get("calibration", {})
    if not isinstance(calibration, dict):
        raise ConfigError("'calibration' must be an object")
    mechanisms = calibration.get("mechanisms")
    if mechanisms is None:
        mechanisms = [calibration.get("mechanism", 1)]
    if mechanism is not None:
        mechanisms = [mechanism]
    decoy_pool = calibration.get("decoys")

    return RunConfig(
        manifest_path=base / raw["manifest"],
        query=_parse_query(raw["query"], base),
        scorers=tuple(scorers),
        tile_spec=_parse_tiles(raw.get("tiles")),
        mechanisms=tuple(int(m) for m in mechanisms),
        thresholds=tuple(sorted({float(t) for t in raw.get("thresholds", DEFAULT_THRESHOLDS)})),
        k=int(k if k is not None else raw.get("k", DEFAULT_K)),
        output_dir=Path(output if output is not None else raw.get("output", "out")),
        threads=int(threads if threads is not None else raw.get("threads", 1)),
        seed=int(raw.get("seed", 0)),
        decoy_pool_path=(base / decoy_pool) if decoy_pool else None,
    )


def load_decoy_specs(path: str | Path) -> tuple[list[QuerySpec], str | None]:
    """Decoy pool file: {"decoys": [query objects...], "live_query_name": optional}."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read decoy pool {path}: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("decoys"), list) or not raw["decoys"]:
        raise ConfigError(f"decoy pool {path} needs a nonempty 'decoys' list")
    specs = [_parse_query(d, path.parent) for d in raw["decoys"]]
    return specs, raw.get("live_query_name")
