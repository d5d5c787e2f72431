"""Fixed sampling pattern for the binary corner descriptor.

Generated by scripts/gen_orb_pattern.py (seed 31415926); do not edit by
hand. Each row is (row1, col1, row2, col2), offsets from the patch
center, all inside the radius-15 disc so rotated patterns stay
within a 31x31 window."""

PATCH_RADIUS = 15

SAMPLING_PAIRS = (
    (-1, 10, 12, -6),
    (-13, 5, 2, -14),
    (5, -8, 3, -11),
    (-9, 4, -8, -6),
    (7, -11, 1, 3),
    (-12, -5, -1, 10),
    (-1, -10, -9, 1),
    (4, 6, -1, -4),
    (1, -4, -6, 7),
    (-5, -5, 5, 9),
    (-1, 11, 12, -1),
    (-12, 6, 13, 2),
    (1, -5, -5, 12),
    (7, -2, -11, -6),
    (-4, -3, 12, 3),
    (-12, -2, -3, 9),
    (-1, -5, 11, -1),
    (-2, 7, -5, -6),
    (-14, -4, 6, 9),
    (-8, -3, 7, 3),
    (-5, 8, -4, -10),
    (-11, -3, 2, -1),
    (-5, 13, 6, 12),
    (-6, -5, 6, -7),
    (-4, -11, 7, 8),
    (-4, -13, -12, -7),
    (-14, -1, 1, 3),
    (2, 7, 1, 13),
    (-9, 0, 0, -15),
    (-3, 12, -13, -6),
    (6, 12, 2, -10),
    (-3, 3, 0, -11),
    (-10, 7, 8, 7),
    (-9, 12, -13, 2),
    (-4, -7, -3, 6),
    (-7, 10, 3, 3),
    (8, 10, 2, 3),
    (2, 13, -2, 13),
    (-2, 3, 2, 12),
    (-8, -7, 8, -2),
    (2, -5, -6, 13),
    (11, -4, -2, 5),
    (-5, 5, -7, 9),
    (9, -6, 12, 9),
    (6, 1, -5, 4),
    (-1, 0, -4, 0),
    (-3, -11, 11, -8),
    (-13, -4, 1, -1),
    (-5, -8, 4, -4),
    (-6, 12, 1, 11),
    (9, 12, 7, 13),
    (-1, -4, -1, 10),
    (6, -5, 9, -6),
    (0, -14, -2, 14),
    (-9, -8, -4, -2),
    (0, -11, 4, 6),
    (0, 0, -9, 7),
    (-9, 8, 9, -12),
    (-3, -1, -3, 0),
    (-3, -14, -5, -11),
    (6, -11, -6, -10),
    (-10, -7, -9, -2),
    (0, 3, 9, -7),
    (-2, -4, 4, -13),
    (-10, -4, -4, -7),
    (-1, 10, -11, 5),
    (-3, -1, 1, 3),
    (9, -10, 9, 5),
    (-5, 7, 11, 6),
    (9, -10, 13, 7),
    (15, 0, -3, 14),
    (2, 1, 0, 8),
    (-9, -12, -4, -2),
    (3, -7, -10, -7),
    (5, -5, 0, -5),
    (-11, -6, 2, -5),
    (7, -2, -2, 2),
    (6, 3, -10, -9),
    (-5, 5, -6, -13),
    (2, 12, 1, -5),
    (10, 0, -13, -3),
    (1, -13, -5, -10),
    (-4, -3, 5, 8),
    (13, 0, -7, 2),
    (-3, -4, -5, 11),
    (0, -9, -4, -4),
    (12, -4, -13, 7),
    (4, -2, -10, -11),
    (-11, -2, 6, 2),
    (3, 0, -5, -12),
    (5, 1, 5, -4),
    (7, 6, -10, 1),
    (9, -7, 4, 2),
    (9, -1, 6, 11),
    (13, -6, -12, 5),
    (11, -4, -6, 3),
    (0, -9, 0, 10),
    (1, -4, 8, -7),
    (5, -6, 8, 9),
    (5, 12, -5, 1),
    (-11, -3, -7, 12),
    (9, -8, -7, -9),
    (8, -12, -1, -9),
    (-6, 0, 10, -8),
    (-5, -4, 5, -11),
    (14, 0, 6, 9),
    (10, -2, 4, 4),
    (-10, -8, -4, 9),
    (5, 7, -3, -5),
    (-4, 3, -2, -6),
    (-10, 7, 3, -13),
    (-10, -3, 2, -3),
    (-14, -2, -3, -7),
    (14, 0, 6, 1),
    (8, 9, -6, -3),
    (-7, 9, 1, -1),
    (-13, -5, -8, 7),
    (8, 12, 5, -6),
    (6, -11, -13, -7),
    (7, 1, -1, -8),
    (-12, -9, -5, 0),
    (-5, 8, 13, 5),
    (-8, -2, -8, -6),
    (9, 6, -8, 10),
    (-4, 7, 3, 7),
    (-14, -3, 4, -11),
    (-7, 9, 9, 1),
    (-8, -7, -2, 6),
    (-9, 10, 11, -3),
    (-1, 11, 12, 6),
    (-14, -1, -3, 2),
    (5, 11, -12, -9),
    (10, 4, 8, -11),
    (-3, -8, -8, 8),
    (12, -9, -2, -5),
    (7, 6, 4, 13),
    (-9, -10, 10, -10),
    (0, 12, 3, 3),
    (2, -9, -7, 6),
    (-2, -9, 8, -4),
    (9, 6, 0, 13),
    (0, -7, 0, 2),
    (0, 15, -5, -6),
    (-4, 5, 0, -7),
    (9, -3, -12, 8),
    (9, 1, -4, -7),
    (-8, 7, -10, 10),
    (0, -2, 10, -3),
    (-2, -3, -3, 8),
    (1, 13, -1, -11),
    (-7, 4, 5, 2),
    (-5, 8, -7, 10),
    (-7, -2, -8, -8),
    (-1, -6, -9, -1),
    (-10, 4, -4, 9),
    (5, 2, 7, 3),
    (-6, 0, -14, 5),
    (-6, 4, 3, -2),
    (-11, -2, 7, 1),
    (-4, -13, 8, 4),
    (-7, -8, 0, 13),
    (1, 1, -6, -8),
    (-1, -10, 6, -1),
    (0, -7, -4, -12),
    (4, -2, -13, -2),
    (-8, -4, -11, -4),
    (8, -12, 6, 11),
    (4, 4, 13, -7),
    (1, 4, 13, 4),
    (-12, -9, -10, -1),
    (-6, -13, -5, 0),
    (2, -2, -8, 1),
    (3, 11, 2, 6),
    (-4, 7, 4, -4),
    (0, -12, 2, 1),
    (-4, -2, 8, 5),
    (4, -3, 10, 10),
    (2, -8, -6, -11),
    (3, 14, 6, -12),
    (9, 6, -6, -5),
    (-3, -14, 7, -11),
    (1, -3, 1, -13),
    (11, -6, -1, 14),
    (-9, 3, 4, 12),
    (0, 7, 15, 0),
    (-6, 5, -2, 4),
    (-3, 1, -3, 10),
    (-4, 0, 4, 6),
    (-9, -4, 11, 7),
    (3, -1, 1, -8),
    (14, -3, 11, -10),
    (2, -5, 3, -9),
    (4, -14, 13, -5),
    (5, -2, 9, 11),
    (-1, -14, 2, -1),
    (-6, -4, -6, -10),
    (8, 7, 10, -10),
    (6, -6, -4, 4),
    (3, -12, -2, 4),
    (11, -2, -6, 5),
    (5, -4, 9, -3),
    (-11, 4, 5, 7),
    (8, 1, 7, 8),
    (-13, -3, 7, 13),
    (-5, -11, 12, -3),
    (-12, 8, -6, 7),
    (5, 11, -2, 12),
    (12, 0, -10, 2),
    (10, -1, -1, -8),
    (4, 4, 9, 1),
    (5, -7, 2, 3),
    (11, 7, 0, -12),
    (-4, -2, 2, -12),
    (-5, -5, 5, 1),
    (-5, -11, -8, 2),
    (-3, 3, 6, -6),
    (12, 3, -6, 0),
    (-2, -13, -6, 7),
    (3, 12, 4, -11),
    (8, 7, 6, 8),
    (-3, 1, -3, -7),
    (-1, -6, 12, 2),
    (-9, -1, -8, -3),
    (-6, -6, -5, 12),
    (5, 12, 9, 6),
    (0, 1, -13, 1),
    (9, -7, 2, 4),
    (9, -11, 3, -6),
    (-7, -4, 13, -7),
    (8, 10, 10, -8),
    (-2, -9, -8, 12),
    (-7, 8, -10, 1),
    (-9, 10, -7, 9),
    (-8, 3, -1, -11),
    (-7, -3, -5, 0),
    (-13, -7, -6, -4),
    (-2, -4, -1, -5),
    (5, -2, 7, 3),
    (5, -3, 4, 8),
    (-9, -6, -12, 7),
    (8, 11, -1, -4),
    (-12, 1, 14, 5),
    (-13, 6, 7, -8),
    (-4, 9, 6, 13),
    (-4, -12, 8, -11),
    (10, -7, 3, 14),
    (-10, -7, -4, 3),
    (-5, 2, -9, -1),
    (-9, 6, -1, -12),
    (5, -1, 8, 5),
    (-13, 0, 6, 13),
    (-7, -1, 3, 11),
    (-14, -2, 3, -12),
    (6, 2, 14, -2),
    (10, -11, 9, -12),
    (-13, 5, 4, 2),
)
