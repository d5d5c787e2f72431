"""Batch detection of visual motifs in image collections.

Scores sub-image tiles of every collection image against a query (an
example image or a text prompt), calibrates the scores against an
empirical null distribution, and reports ranked matches with p-values.
"""

__version__ = "0.1.0"
