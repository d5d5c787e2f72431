"""Nearest-neighbour descriptor matching with the ratio test."""

from __future__ import annotations

import numpy as np

from motifscan.keypoints.base import Match

LOWE_RATIO = 0.75

_POPCOUNT = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint16)


def euclidean_distances(query: np.ndarray, train: np.ndarray) -> np.ndarray:
    """Pairwise Euclidean distance matrix for float descriptors.

    Computed from explicit differences (in query chunks to bound
    memory) so identical rows give a distance of exactly zero; the
    ratio test relies on exact zeros for duplicate descriptors.
    """
    q = np.asarray(query, dtype=np.float64)
    t = np.asarray(train, dtype=np.float64)
    out = np.empty((len(q), len(t)))
    chunk = max(1, 2**22 // max(t.size, 1))
    for start in range(0, len(q), chunk):
        diff = q[start : start + chunk, None, :] - t[None, :, :]
        out[start : start + chunk] = np.sqrt((diff * diff).sum(axis=2))
    return out


def hamming_distances(query: np.ndarray, train: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distance matrix for packed binary descriptors."""
    q = np.asarray(query, dtype=np.uint8)
    t = np.asarray(train, dtype=np.uint8)
    xored = np.bitwise_xor(q[:, None, :], t[None, :, :])
    return _POPCOUNT[xored].sum(axis=2).astype(np.float64)


def match_count(
    query_descs: np.ndarray, train_descs: np.ndarray, kind: str
) -> tuple[int, list[Match]]:
    """Ratio-test matches from query to train descriptors.

    kind selects the metric: "sift" (Euclidean) or "orb" (Hamming).
    A query descriptor matches when its nearest train distance is below
    0.75x the second-nearest; an exact hit (distance 0) always passes.
    Either side empty yields (0, []).
    """
    if kind == "sift":
        metric = euclidean_distances
    elif kind == "orb":
        metric = hamming_distances
    else:
        raise ValueError(f"unknown descriptor kind: {kind!r}")

    n_query = 0 if query_descs is None else len(query_descs)
    n_train = 0 if train_descs is None else len(train_descs)
    if n_query == 0 or n_train == 0:
        return 0, []

    distances = metric(query_descs, train_descs)
    nearest = distances.argmin(axis=1)
    d1 = distances[np.arange(n_query), nearest]
    if n_train >= 2:
        d2 = np.partition(distances, 1, axis=1)[:, 1]
    else:
        d2 = np.full(n_query, np.inf)

    accepted = (d1 < LOWE_RATIO * d2) | (d1 == 0)
    matches = [
        Match(query_index=int(i), train_index=int(nearest[i]), distance=float(d1[i]))
        for i in np.nonzero(accepted)[0]
    ]
    return len(matches), matches


def inverse_distance_score(matches: list[Match]) -> float:
    """Alternative tile score: sum of 1/(1 + distance) over matches."""
    return float(sum(1.0 / (1.0 + m.distance) for m in matches))
