"""Render the five committed parity fixture images.

All synthetic: gradients, a checkerboard, concentric rings, an
equestrian silhouette, and seeded noise. Re-running reproduces the
committed files byte for byte.
"""
import argparse
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

SIZE = 256


def gradient():
    ramp = np.linspace(0, 255, SIZE)
    img = np.zeros((SIZE, SIZE, 3), dtype=np.uint8)
    img[:, :, 0] = ramp[None, :].astype(np.uint8)
    img[:, :, 1] = ramp[:, None].astype(np.uint8)
    img[:, :, 2] = 96
    return img


def checker():
    cell = (np.indices((SIZE, SIZE)) // 16).sum(axis=0) % 2
    img = np.repeat(np.where(cell == 1, 235, 20)[..., None], 3, axis=2).astype(np.uint8)
    img[:, :, 2] = np.where(cell == 1, 225, 40).astype(np.uint8)
    return img


def rings():
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    dist = np.hypot(xx - SIZE / 2, yy - SIZE / 2)
    wave = (np.sin(dist / 7.0) * 0.5 + 0.5) * 255
    img = np.zeros((SIZE, SIZE, 3), dtype=np.uint8)
    img[:, :, 0] = wave.astype(np.uint8)
    img[:, :, 1] = (255 - wave).astype(np.uint8)
    img[:, :, 2] = (wave * 0.5 + 64).astype(np.uint8)
    return img


def silhouette():
    """Black horse-and-rider silhouette on white, drawn from fixed polygons."""
    canvas = Image.new("RGB", (SIZE, SIZE), (245, 245, 240))
    draw = ImageDraw.Draw(canvas)
    ink = (25, 22, 20)
    # horse body, neck, and head
    draw.ellipse((70, 120, 190, 175), fill=ink)
    draw.polygon([(165, 135), (205, 95), (222, 103), (196, 148)], fill=ink)
    draw.ellipse((203, 88, 235, 112), fill=ink)
    draw.polygon([(228, 104), (244, 116), (226, 114)], fill=ink)
    # legs
    for x in (82, 104, 150, 172):
        draw.polygon([(x, 165), (x + 12, 165), (x + 8, 225), (x - 2, 225)], fill=ink)
    # tail
    draw.polygon([(70, 125), (52, 150), (60, 158), (76, 140)], fill=ink)
    # rider torso, head, and lance
    draw.polygon([(118, 72), (140, 72), (146, 125), (112, 125)], fill=ink)
    draw.ellipse((118, 48, 142, 72), fill=ink)
    draw.line((132, 90, 230, 58), fill=ink, width=5)
    return np.asarray(canvas)


def noise():
    rng = np.random.default_rng(20240601)
    return rng.integers(0, 256, size=(SIZE, SIZE, 3), dtype=np.uint8)


RENDERERS = {
    "img-gradient": gradient,
    "img-checker": checker,
    "img-rings": rings,
    "img-silhouette": silhouette,
    "img-noise": noise,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--output",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "fixtures" / "images",
    )
    args = parser.parse_args()
    args.output.mkdir(parents=True, exist_ok=True)
    for name, render in RENDERERS.items():
        Image.fromarray(render()).save(args.output / f"{name}.png", optimize=True)
    print(f"wrote {len(RENDERERS)} images to {args.output}")


if __name__ == "__main__":
    main()
