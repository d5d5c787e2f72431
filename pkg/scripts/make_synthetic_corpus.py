"""Generate a small synthetic corpus for demos and pipeline tests.

Positives carry a bright ring-and-cross motif stamped onto noise;
negatives are plain noise; references are clean motif examples. Also
writes a ready-to-run config (image query against the builtin mock
embedding provider), a query image, and an image decoy pool so all
three calibration mechanisms work out of the box.

Fully deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np
from PIL import Image


def _noise(rng: np.random.Generator, size: int) -> np.ndarray:
    base = rng.integers(40, 180, size=(size, size, 3), dtype=np.uint8)
    return base


def _stamp_motif(img: np.ndarray, cx: float, cy: float, radius: float) -> None:
    """Bright ring with a cross through it; high contrast against noise."""
    h, w = img.shape[:2]
    yy, xx = np.ogrid[:h, :w]
    dist = np.sqrt((yy - cy) ** 2 + (xx - cx) ** 2)
    ring = np.abs(dist - radius) < 1.8
    arm = ((np.abs(yy - cy) < 1.5) | (np.abs(xx - cx) < 1.5)) & (dist < radius)
    img[ring] = (250, 250, 250)
    img[arm] = (60, 160, 250)


def _stripes(rng: np.random.Generator, size: int, period: int) -> np.ndarray:
    yy, xx = np.mgrid[:size, :size]
    mask = ((xx + yy) // period) % 2 == 0
    img = _noise(rng, size)
    img[mask] = (210, 210, 60)
    return img


def _save(img: np.ndarray, path: Path) -> None:
    Image.fromarray(img, "RGB").save(path)


def build_corpus(
    outdir: Path,
    positives: int = 6,
    negatives: int = 10,
    references: int = 4,
    size: int = 96,
    seed: int = 20240501,
) -> Path:
    """Write images, manifest, config, and decoy pool; returns the manifest path."""
    rng = np.random.default_rng(seed)
    outdir = Path(outdir)
    images_dir = outdir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    radius = size * 0.15

    entries = []
    margin = int(radius) + 4
    for i in range(positives):
        img = _noise(rng, size)
        cx = rng.uniform(margin, size - margin)
        cy = rng.uniform(margin, size - margin)
        _stamp_motif(img, cx, cy, radius)
        name = f"pos{i + 1:02d}"
        _save(img, images_dir / f"{name}.png")
        entries.append(
            {"id": name, "path": f"images/{name}.png", "role": "target", "label": "positive"}
        )
    for i in range(negatives):
        name = f"neg{i + 1:02d}"
        _save(_noise(rng, size), images_dir / f"{name}.png")
        entries.append(
            {"id": name, "path": f"images/{name}.png", "role": "target", "label": "negative"}
        )
    for i in range(references):
        img = _noise(rng, size)
        _stamp_motif(img, size / 2, size / 2, radius)
        name = f"ref{i + 1:02d}"
        _save(img, images_dir / f"{name}.png")
        entries.append(
            {"id": name, "path": f"images/{name}.png", "role": "reference", "label": "unknown"}
        )

    query = np.full((size, size, 3), 128, dtype=np.uint8)
    _stamp_motif(query, size / 2, size / 2, radius)
    _save(query, images_dir / "query.png")

    decoys = []
    for i in range(5):
        name = f"decoy{i + 1}"
        _save(_stripes(rng, size, period=4 + 2 * i), images_dir / f"{name}.png")
        decoys.append({"kind": "image", "name": name, "path": f"images/{name}.png"})

    manifest_path = outdir / "manifest.json"
    manifest_path.write_text(json.dumps({"entries": entries}, indent=2) + "\n")
    (outdir / "decoys.json").write_text(
        json.dumps({"live_query_name": "ring-query", "decoys": decoys}, indent=2) + "\n"
    )
    config = {
        "manifest": "manifest.json",
        "query": {"kind": "image", "name": "ring-query", "path": "images/query.png"},
        "scorers": [{"backend": "embed_image_query", "bundle": "mock"}],
        "calibration": {"mechanism": 1, "decoys": "decoys.json"},
        "thresholds": [0.01, 0.05, 0.1],
        "k": 10,
        "output": "out",
        "threads": 1,
        "seed": seed,
    }
    (outdir / "config.json").write_text(json.dumps(config, indent=2) + "\n")
    return manifest_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output", default="corpus", help="corpus directory")
    parser.add_argument("--positives", type=int, default=6)
    parser.add_argument("--negatives", type=int, default=10)
    parser.add_argument("--references", type=int, default=4)
    parser.add_argument("--size", type=int, default=96)
    parser.add_argument("--seed", type=int, default=20240501)
    args = parser.parse_args(argv)
    manifest = build_corpus(
        Path(args.output), args.positives, args.negatives, args.references, args.size, args.seed
    )
    total = args.positives + args.negatives + args.references
    print(f"wrote {total} corpus images + query + 5 decoys under {args.output}")
    print(f"manifest: {manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
