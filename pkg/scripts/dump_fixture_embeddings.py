"""Embed parity fixtures with an exported bundle and dump the vectors.

Reads a directory of fixture images plus a texts.json list, runs both
through the engine's embedding stack, and writes a JSON document that
exporter-side parity checks can compare against their reference
vectors. Entry shape:

    {"id": ..., "kind": "image"|"text", "embedding": [...],
     "tokens": [...]}            # tokens only for text entries

Requires onnxruntime for real bundles; pass --bundle mock to exercise
the flow without one.
"""
import argparse
import json
import sys
from pathlib import Path

from motifscan.embedding import (
    BackendModelError,
    create_mock_bundle,
    embed_image,
    embed_text,
    load_bundle,
    tokenize,
)
from motifscan.dataset import load_image


def dump_embeddings(bundle, images_dir: Path, texts_path: Path) -> dict:
    entries = []
    for path in sorted(images_dir.glob("*.png")):
        record = load_image(path, image_id=path.stem)
        entries.append(
            {
                "id": path.stem,
                "kind": "image",
                "source": path.name,
                "embedding": [float(v) for v in embed_image(record, bundle)],
            }
        )
    for spec in json.loads(texts_path.read_text()):
        entries.append(
            {
                "id": spec["id"],
                "kind": "text",
                "text": spec["text"],
                "tokens": [int(t) for t in tokenize(spec["text"], bundle.tokenizer)],
                "embedding": [float(v) for v in embed_text(spec["text"], bundle)],
            }
        )
    return {"model_id": bundle.model_id, "entries": entries}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bundle", required=True, help="bundle directory, or 'mock'")
    parser.add_argument("--images", required=True, type=Path, help="fixture image directory")
    parser.add_argument("--texts", required=True, type=Path, help="fixture texts.json")
    parser.add_argument("--output", type=Path, default=Path("engine_vectors.json"))
    args = parser.parse_args(argv)

    bundle = create_mock_bundle() if args.bundle == "mock" else load_bundle(args.bundle)
    try:
        doc = dump_embeddings(bundle, args.images, args.texts)
    except BackendModelError as err:
        print(f"backend error: {err}", file=sys.stderr)
        return 2
    args.output.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(doc['entries'])} fixture embeddings to {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
