"""From-scratch keypoint detectors, descriptors, and matching."""

from motifscan.keypoints.base import Keypoint, Match
from motifscan.keypoints.matching import (
    euclidean_distances,
    hamming_distances,
    inverse_distance_score,
    match_count,
)
from motifscan.keypoints.orb import intensity_centroid_angle, orb_describe, orb_detect
from motifscan.keypoints.sift import sift_describe, sift_detect

__all__ = [
    "Keypoint",
    "Match",
    "euclidean_distances",
    "hamming_distances",
    "intensity_centroid_angle",
    "inverse_distance_score",
    "match_count",
    "orb_describe",
    "orb_detect",
    "sift_describe",
    "sift_detect",
]
