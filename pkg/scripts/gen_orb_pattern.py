"""Regenerate the committed corner-descriptor sampling pattern.

The descriptor compares pixel intensities at 256 fixed point pairs
inside a 31x31 patch. Pairs are drawn once from a seeded uniform
distribution, constrained to the radius-15 disc so that every rotated
copy of the pattern stays inside the patch. The output file is
committed; rerunning this script must reproduce it bit for bit.
"""

from pathlib import Path

import numpy as np

SEED = 31415926
PATCH_RADIUS = 15
NUM_PAIRS = 256


def sample_point(rng):
    # rejection-sample an integer point inside the radius-15 disc
    while True:
        r, c = rng.integers(-PATCH_RADIUS, PATCH_RADIUS + 1, size=2)
        if r * r + c * c <= PATCH_RADIUS * PATCH_RADIUS:
            return int(r), int(c)


def generate_pairs():
    rng = np.random.default_rng(SEED)
    pairs = []
    while len(pairs) < NUM_PAIRS:
        p1 = sample_point(rng)
        p2 = sample_point(rng)
        if p1 != p2:
            pairs.append((*p1, *p2))
    return pairs


def main():
    pairs = generate_pairs()
    out = Path(__file__).resolve().parents[1] / "src" / "motifscan" / "keypoints" / "orb_pattern.py"
    lines = [
        '"""Fixed sampling pattern for the binary corner descriptor.',
        "",
        "Generated by scripts/gen_orb_pattern.py (seed %d); do not edit by" % SEED,
        "hand. Each row is (row1, col1, row2, col2), offsets from the patch",
        "center, all inside the radius-%d disc so rotated patterns stay" % PATCH_RADIUS,
        'within a 31x31 window."""',
        "",
        "PATCH_RADIUS = %d" % PATCH_RADIUS,
        "",
        "SAMPLING_PAIRS = (",
    ]
    for row in pairs:
        lines.append("    (%d, %d, %d, %d)," % row)
    lines.append(")")
    lines.append("")
    out.write_text("\n".join(lines))
    print(f"wrote {len(pairs)} pairs to {out}")


if __name__ == "__main__":
    main()
