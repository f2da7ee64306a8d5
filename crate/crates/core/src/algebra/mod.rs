//! The su(4) operator basis, its commutator table, and sub-algebra tools.
//!
//! Sixteen operators `O_1..O_16` — the identity plus fifteen traceless
//! Hermitian products of Pauli matrices on the two tensor factors — span
//! the operator space of a four-level (two-qubit) system.  Their pairwise
//! commutators close with coefficients in {0, ±i, ±i/4}; the full table is
//! computed here and verified against frozen reference data.  On top of
//! the table sit the structural tools: closure tests for generator sets,
//! the fifteen zero-pattern seven-element sub-algebras, the Bell-basis
//! similarity transform, the pseudo-spin operators that split the dynamics
//! into two commuting su(2) sectors, and the so(n) generator families in
//! [`son`].

mod reference;
pub mod son;
pub mod span;

use crate::error::Error;
use crate::linalg::{c64, commutator, ComplexMatrix, C64};
use crate::tol;
use crate::Result;
use span::span_of;

/// Number of basis operators (identity included).
pub const BASIS_SIZE: usize = 16;

// --- Pauli / tensor-factor builders -------------------------------------

fn pauli(which: char) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    match which {
        'x' => {
            m[(0, 1)] = c64(1.0, 0.0);
            m[(1, 0)] = c64(1.0, 0.0);
        }
        'y' => {
            m[(0, 1)] = c64(0.0, -1.0);
            m[(1, 0)] = c64(0.0, 1.0);
        }
        'z' => {
            m[(0, 0)] = c64(1.0, 0.0);
            m[(1, 1)] = c64(-1.0, 0.0);
        }
        _ => unreachable!("unknown Pauli label"),
    }
    m
}

/// Pauli matrix on the first qubit: `p (x) I`.
pub(crate) fn sigma(which: char) -> ComplexMatrix {
    pauli(which).kron(&ComplexMatrix::identity(2))
}

/// Pauli matrix on the second qubit: `I (x) p`.
pub(crate) fn tau(which: char) -> ComplexMatrix {
    ComplexMatrix::identity(2).kron(&pauli(which))
}

// --- Operator basis ------------------------------------------------------

/// The sixteen-operator basis, indexed 1-based as `O_1..O_16`.
///
/// `O_1 = I`; every other element is Hermitian, traceless, squares to a
/// positive multiple of the identity, and is trace-orthogonal to the rest.
/// The state ordering of the underlying 4-dimensional space is
/// |up,up>, |up,down>, |down,up>, |down,down>.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    ops: Vec<ComplexMatrix>,
    labels: Vec<&'static str>,
}

impl OperatorBasis {
    /// Basis operator by 1-based index (panics outside 1..=16).
    pub fn op(&self, i: usize) -> &ComplexMatrix {
        assert!(
            (1..=BASIS_SIZE).contains(&i),
            "basis index {i} out of 1..=16"
        );
        &self.ops[i - 1]
    }

    /// Human-readable label for `O_i` (e.g. `"sz/2"`, `"sx*tx/4"`).
    pub fn label(&self, i: usize) -> &'static str {
        assert!(
            (1..=BASIS_SIZE).contains(&i),
            "basis index {i} out of 1..=16"
        );
        self.labels[i - 1]
    }

    /// All sixteen operators in index order.
    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Trace normalization `tr(O_i^dagger O_i)` used in expansions.
    pub fn norm_sq(&self, i: usize) -> f64 {
        self.op(i).hs_inner(self.op(i)).re
    }

    /// Expand a 4x4 matrix in the basis; returns the 16 coefficients
    /// (index 0 is the `O_1` coefficient) and the expansion residual.
    pub(crate) fn expand(&self, m: &ComplexMatrix) -> Result<(Vec<C64>, f64)> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "basis expansion requires a 4x4 matrix, got {0}x{0}",
                m.dim()
            )));
        }
        let coeffs: Vec<C64> = (1..=BASIS_SIZE)
            .map(|k| self.op(k).hs_inner(m) / self.norm_sq(k))
            .collect();
        let mut recon = ComplexMatrix::zeros(4);
        for (k, c) in coeffs.iter().enumerate() {
            recon = &recon + &self.ops[k].scale(*c);
        }
        let residual = (&recon - m).frobenius_norm();
        Ok((coeffs, residual))
    }
}

/// Construct the operator basis.
///
/// Index assignment: `O_1 = I`; `O_2 = sz/2`, `O_3 = tz/2`, `O_4 = sz*tz/4`;
/// `O_5 = sx/2`, `O_6 = sy/2`; `O_7 = sx*tz/4`, `O_8 = sy*tz/4`;
/// `O_9 = tx/2`, `O_10 = ty/2`; `O_11 = sz*tx/4`, `O_12 = sz*ty/4`;
/// `O_13 = sx*tx/4`, `O_14 = sy*ty/4`, `O_15 = sx*ty/4`, `O_16 = sy*tx/4`
/// (s = first-qubit Pauli, t = second-qubit Pauli).  This is the unique
/// assignment consistent with the frozen commutator table.
pub fn build_operator_basis() -> OperatorBasis {
    let half = c64(0.5, 0.0);
    let quarter = c64(0.25, 0.0);
    let prod = |a: char, b: char| (&sigma(a) * &tau(b)).scale(quarter);

    let ops = vec![
        ComplexMatrix::identity(4),
        sigma('z').scale(half),
        tau('z').scale(half),
        prod('z', 'z'),
        sigma('x').scale(half),
        sigma('y').scale(half),
        prod('x', 'z'),
        prod('y', 'z'),
        tau('x').scale(half),
        tau('y').scale(half),
        prod('z', 'x'),
        prod('z', 'y'),
        prod('x', 'x'),
        prod('y', 'y'),
        prod('x', 'y'),
        prod('y', 'x'),
    ];
    let labels = vec![
        "I", "sz/2", "tz/2", "sz*tz/4", "sx/2", "sy/2", "sx*tz/4", "sy*tz/4", "tx/2", "ty/2",
        "sz*tx/4", "sz*ty/4", "sx*tx/4", "sy*ty/4", "sx*ty/4", "sy*tx/4",
    ];
    OperatorBasis { ops, labels }
}

// --- Commutator table -----------------------------------------------------

/// One nonzero table cell: `[O_i, O_j] = coeff * O_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    /// Structure constant, exactly one of ±i, ±i/4 after snapping.
    pub coeff: C64,
    /// 1-based index of the single basis operator in the expansion.
    pub k: usize,
}

/// The 15x15 commutator table over `O_2..O_16`.
///
/// Cells are stored independently for every ordered pair (antisymmetry is
/// a verified property, not a storage assumption, so injected faults on a
/// single cell stay local).
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorTable {
    /// Row-major 15x15 over indices 2..=16; `None` means zero commutator.
    cells: Vec<Option<TableEntry>>,
}

impl CommutatorTable {
    fn idx(i: usize, j: usize) -> usize {
        assert!(
            (2..=16).contains(&i) && (2..=16).contains(&j),
            "table indices are 2..=16"
        );
        (i - 2) * 15 + (j - 2)
    }

    /// A table with every cell zero (used by the decoder and the CSV
    /// importer, which fill it cell by cell).
    pub fn empty() -> Self {
        CommutatorTable {
            cells: vec![None; 15 * 15],
        }
    }

    /// Cell for `[O_i, O_j]`; `None` when the commutator vanishes.
    pub fn entry(&self, i: usize, j: usize) -> Option<TableEntry> {
        self.cells[Self::idx(i, j)]
    }

    /// Overwrite one cell (used by fault-injection tests and the decoder).
    pub fn set_entry(&mut self, i: usize, j: usize, e: Option<TableEntry>) {
        self.cells[Self::idx(i, j)] = e;
    }

    /// Column indices `j` (including `j = i`) with a zero commutator in row `i`.
    pub fn zero_set(&self, i: usize) -> Vec<usize> {
        (2..=16).filter(|&j| self.entry(i, j).is_none()).collect()
    }
}

/// Snap a numerically computed coefficient to the exact structure-constant
/// set {0, ±i, ±i/4}; `None` when it is not within [`tol::COEFF_SNAP`] of any.
fn snap_coefficient(c: C64) -> Option<C64> {
    const CANDIDATES: [(f64, f64); 5] = [
        (0.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (0.0, 0.25),
        (0.0, -0.25),
    ];
    CANDIDATES
        .iter()
        .find(|&&(re, im)| (c - c64(re, im)).norm() <= tol::COEFF_SNAP)
        .map(|&(re, im)| c64(re, im))
}

/// Compute the full commutator table from a basis.
///
/// Every `[O_i, O_j]` is expanded via trace inner products; the expansion
/// must have residual at most [`tol::EXPANSION_RESIDUAL`], at most one
/// nonzero coefficient, and that coefficient must snap to {±i, ±i/4}.
/// Any violation is an error (it would signal a wrong index assignment).
pub fn compute_commutator_table(basis: &OperatorBasis) -> Result<CommutatorTable> {
    let mut table = CommutatorTable::empty();
    for i in 2..=16 {
        for j in 2..=16 {
            if i == j {
                continue;
            }
            let comm = commutator(basis.op(i), basis.op(j))?;
            let (coeffs, residual) = basis.expand(&comm)?;
            if residual > tol::EXPANSION_RESIDUAL {
                return Err(Error::ExpansionResidual {
                    residual,
                    tol: tol::EXPANSION_RESIDUAL,
                });
            }
            let mut entry: Option<TableEntry> = None;
            for (km1, &c) in coeffs.iter().enumerate() {
                let snapped = snap_coefficient(c).ok_or(Error::UnexpectedCoefficient {
                    i,
                    j,
                    re: c.re,
                    im: c.im,
                })?;
                if snapped.norm() == 0.0 {
                    continue;
                }
                if entry.is_some() {
                    return Err(Error::Algebra(format!(
                        "[O_{i}, O_{j}] expands to more than one basis operator"
                    )));
                }
                entry = Some(TableEntry {
                    coeff: snapped,
                    k: km1 + 1,
                });
            }
            table.set_entry(i, j, entry);
        }
    }
    Ok(table)
}

/// The frozen reference table, decoded from the static upper-triangle data.
pub fn reference_table() -> CommutatorTable {
    let mut table = CommutatorTable::empty();
    for &(i, j, q, k) in reference::UPPER_ENTRIES.iter() {
        let coeff = c64(0.0, f64::from(q) * 0.25);
        table.set_entry(i, j, Some(TableEntry { coeff, k }));
        table.set_entry(j, i, Some(TableEntry { coeff: -coeff, k }));
    }
    table
}

/// One discrepancy between a computed table and the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMismatch {
    pub i: usize,
    pub j: usize,
    pub computed: Option<TableEntry>,
    pub reference: Option<TableEntry>,
}

/// Comparison report of a computed table against the frozen reference.
#[derive(Debug, Clone)]
pub struct TableVerification {
    /// All differing cells, in row-major (i, j) order.
    pub mismatches: Vec<TableMismatch>,
}

impl TableVerification {
    /// True when every one of the 225 cells matches.
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `computed` against the frozen reference table, cell by cell.
pub fn verify_reference_table(computed: &CommutatorTable) -> TableVerification {
    let reference = reference_table();
    let mut mismatches = Vec::new();
    for i in 2..=16 {
        for j in 2..=16 {
            let c = computed.entry(i, j);
            let r = reference.entry(i, j);
            let same = match (c, r) {
                (None, None) => true,
                (Some(a), Some(b)) => a.k == b.k && (a.coeff - b.coeff).norm() <= 1e-12,
                _ => false,
            };
            if !same {
                mismatches.push(TableMismatch {
                    i,
                    j,
                    computed: c,
                    reference: r,
                });
            }
        }
    }
    TableVerification { mismatches }
}

// --- Sub-algebras ---------------------------------------------------------

/// A named set of generator matrices.
#[derive(Debug, Clone)]
pub struct SubalgebraSpec {
    pub name: String,
    pub generators: Vec<ComplexMatrix>,
}

impl SubalgebraSpec {
    /// Build a spec, validating that the generators are nonempty, of equal
    /// dimension, and linearly independent (Gram matrix nonsingular within
    /// [`tol::GRAM_NONSINGULAR`]).
    pub fn new(name: impl Into<String>, generators: Vec<ComplexMatrix>) -> Result<Self> {
        let name = name.into();
        if generators.is_empty() {
            return Err(Error::Algebra(format!(
                "sub-algebra '{name}' has no generators"
            )));
        }
        let dim = generators[0].dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "sub-algebra '{name}' mixes generator dimensions"
            )));
        }
        // Gram matrix under the Hilbert-Schmidt inner product; for the
        // Hermitian generators used throughout this coincides with tr(G_i G_j).
        let n = generators.len();
        let gram = ComplexMatrix::from_fn(n, |r, c| generators[r].hs_inner(&generators[c]));
        let (eigs, _) = crate::linalg::eig_hermitian(&gram)?;
        let min_eig = eigs[0];
        if min_eig <= tol::GRAM_NONSINGULAR {
            return Err(Error::Algebra(format!(
                "sub-algebra '{name}' generators are linearly dependent (smallest Gram eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(SubalgebraSpec { name, generators })
    }
}

/// Test whether a generator set is closed under commutation.
///
/// Repeatedly adjoins commutators of everything found so far, re-spanning
/// by trace inner product, until stable.  Returns `(closed, closure)`:
/// `closed` is true when no commutator left the original span, and
/// `closure` is a spanning set of the full Lie closure (the generators
/// followed by any unit-normalized new directions).
pub fn is_closed_subalgebra(spec: &SubalgebraSpec) -> Result<(bool, Vec<ComplexMatrix>)> {
    let mut span = span_of(&spec.generators);
    let mut elems: Vec<ComplexMatrix> = spec.generators.clone();
    let mut closed = true;
    let mut i = 0;
    while i < elems.len() {
        for j in 0..i {
            let c = commutator(&elems[i], &elems[j])?;
            if c.frobenius_norm() <= tol::SPAN_RANK {
                continue;
            }
            if span.add(&c) {
                closed = false;
                let unit = c.scale((1.0 / c.frobenius_norm()).into());
                elems.push(unit);
            }
        }
        i += 1;
    }
    Ok((closed, elems))
}

/// The fifteen zero-pattern seven-element sub-algebras.
///
/// For each row `i` of the verified table, the seven operators `O_j` whose
/// commutator with `O_i` vanishes (including `O_i` itself) form a closed
/// sub-algebra; this enumerates all fifteen and machine-checks closure of
/// each, erroring if any row fails to have exactly seven zeros or fails
/// the closure check.
pub fn enumerate_zero_pattern_subalgebras(table: &CommutatorTable) -> Result<Vec<SubalgebraSpec>> {
    let basis = build_operator_basis();
    let mut out = Vec::with_capacity(15);
    for i in 2..=16 {
        let members = table.zero_set(i);
        if members.len() != 7 {
            return Err(Error::Algebra(format!(
                "row O_{i} has {} zero entries, expected 7",
                members.len()
            )));
        }
        let gens: Vec<ComplexMatrix> = members.iter().map(|&j| basis.op(j).clone()).collect();
        let label = members
            .iter()
            .map(|j| format!("O_{j}"))
            .collect::<Vec<_>>()
            .join(",");
        let spec = SubalgebraSpec::new(format!("zero-pattern row O_{i}: {{{label}}}"), gens)?;
        let (closed, _) = is_closed_subalgebra(&spec)?;
        if !closed {
            return Err(Error::Algebra(format!(
                "zero-pattern set of row O_{i} is not closed under commutation"
            )));
        }
        out.push(spec);
    }
    Ok(out)
}

// --- Bell similarity transform ---------------------------------------------

/// The Bell-basis change matrix `W` (symmetric, unitary, involutive):
/// rows are the Bell combinations of the product states with 1/sqrt(2) weights.
pub fn bell_matrix() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w = [
        [s, 0.0, 0.0, s],
        [0.0, s, s, 0.0],
        [0.0, s, -s, 0.0],
        [s, 0.0, 0.0, -s],
    ];
    ComplexMatrix::from_fn(4, |i, j| c64(w[i][j], 0.0))
}

/// Similarity transform `x -> W x W^dagger` with the Bell matrix.
///
/// `W` is its own inverse, so this is simultaneously the forward and
/// backward basis change; it is an algebra automorphism (it commutes with
/// the commutator).
pub fn bell_similarity_transform(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "Bell transform requires a 4x4 matrix, got {0}x{0}",
            x.dim()
        )));
    }
    let w = bell_matrix();
    Ok(&(&w * x) * &w.adjoint())
}

// --- Pseudo-spin operators --------------------------------------------------

/// The two commuting su(2) sectors of the driven two-qubit problem.
///
/// `big_*` is the (S_z, S_±) set, `small_*` the (s_z, s_±) set.  Both
/// satisfy `[z, ±] = ±2(±)`, `[+, -] = 4 z`, the ladder operators square
/// to zero exactly, and every cross-sector commutator vanishes.  Note the
/// factor 2: these are *not* spin-1/2-normalized, matching the product
/// parametrization of the evolution operator, whose exponents carry 1/2.
#[derive(Debug, Clone)]
pub struct PseudoSpins {
    pub big_z: ComplexMatrix,
    pub big_plus: ComplexMatrix,
    pub big_minus: ComplexMatrix,
    pub small_z: ComplexMatrix,
    pub small_plus: ComplexMatrix,
    pub small_minus: ComplexMatrix,
}

/// Construct the pseudo-spin operators:
/// `S_z = (sx + tx)/2`, `s_z = (sx - tx)/2`,
/// `S_± = (sy ± i sz)(ty ± i tz)/2`, `s_± = (sy ± i sz)(ty ∓ i tz)/2`.
pub fn pseudo_spin_operators() -> PseudoSpins {
    let half = c64(0.5, 0.0);
    let i = c64(0.0, 1.0);
    let sy_p = &sigma('y') + &sigma('z').scale(i); // sy + i sz
    let sy_m = &sigma('y') - &sigma('z').scale(i); // sy - i sz
    let ty_p = &tau('y') + &tau('z').scale(i); // ty + i tz
    let ty_m = &tau('y') - &tau('z').scale(i); // ty - i tz

    PseudoSpins {
        big_z: (&sigma('x') + &tau('x')).scale(half),
        big_plus: (&sy_p * &ty_p).scale(half),
        big_minus: (&sy_m * &ty_m).scale(half),
        small_z: (&sigma('x') - &tau('x')).scale(half),
        small_plus: (&sy_p * &ty_m).scale(half),
        small_minus: (&sy_m * &ty_p).scale(half),
    }
}
