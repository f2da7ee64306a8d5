//! Frozen reference commutator table.
//!
//! The 60 strictly-upper-triangle nonzero entries of the 15x15 table for
//! (O_2..O_16), encoded as `(i, j, q, k)` meaning `[O_i, O_j] = q*(i/4)*O_k`
//! with `q` in {+-1, +-4}.  The full table follows by antisymmetry, and
//! every entry not listed is zero.  This data was transcribed from the
//! published table and cross-checked numerically with an independent
//! implementation before being frozen here; [`super::verify_reference_table`]
//! compares freshly computed tables against it.

/// Upper-triangle nonzero entries: (i, j, quarters-of-i, k).
pub(super) const UPPER_ENTRIES: [(usize, usize, i8, usize); 60] = [
    (2, 5, 4, 6),
    (2, 6, -4, 5),
    (2, 7, 4, 8),
    (2, 8, -4, 7),
    (2, 13, 4, 16),
    (2, 14, -4, 15),
    (2, 15, 4, 14),
    (2, 16, -4, 13),
    (3, 9, 4, 10),
    (3, 10, -4, 9),
    (3, 11, 4, 12),
    (3, 12, -4, 11),
    (3, 13, 4, 15),
    (3, 14, -4, 16),
    (3, 15, -4, 13),
    (3, 16, 4, 14),
    (4, 5, 4, 8),
    (4, 6, -4, 7),
    (4, 7, 1, 6),
    (4, 8, -1, 5),
    (4, 9, 4, 12),
    (4, 10, -4, 11),
    (4, 11, 1, 10),
    (4, 12, -1, 9),
    (5, 6, 4, 2),
    (5, 8, 4, 4),
    (5, 11, -4, 16),
    (5, 12, -4, 14),
    (5, 14, 4, 12),
    (5, 16, 4, 11),
    (6, 7, -4, 4),
    (6, 11, 4, 13),
    (6, 12, 4, 15),
    (6, 13, -4, 11),
    (6, 15, -4, 12),
    (7, 8, 1, 2),
    (7, 9, 4, 15),
    (7, 10, -4, 13),
    (7, 13, 1, 10),
    (7, 15, -1, 9),
    (8, 9, 4, 14),
    (8, 10, -4, 16),
    (8, 14, -1, 9),
    (8, 16, 1, 10),
    (9, 10, 4, 3),
    (9, 12, 4, 4),
    (9, 14, 4, 8),
    (9, 15, 4, 7),
    (10, 11, -4, 4),
    (10, 13, -4, 7),
    (10, 16, -4, 8),
    (11, 12, 1, 3),
    (11, 13, 1, 6),
    (11, 16, -1, 5),
    (12, 14, -1, 5),
    (12, 15, 1, 6),
    (13, 15, 1, 3),
    (13, 16, 1, 2),
    (14, 15, -1, 2),
    (14, 16, -1, 3),
];
