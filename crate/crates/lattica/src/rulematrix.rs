//! Assembly of the mn x mn rule matrices.
//!
//! A rule matrix acts on the flattened state: column (i-1)n + j holds the
//! image of the indicator configuration at cell (i, j). Two builders exist:
//!
//! * [`build_from_resolver`] reads the matrix off the direct stepper column
//!   by column. It works for every boundary spec, including custom ones,
//!   and is the ground truth.
//! * [`build_closed_form`] assembles the closed-form block layout known
//!   for the nine named mixed/rotated specs: block-tridiagonal with a small
//!   set of corrected blocks and at most one corner block. It exists as a
//!   fast path and as a cross-check against the resolver.
//!
//! The resolver is authoritative: every closed-form layout below is pinned
//! to it entrywise by the equivalence tests.

use crate::boundary::{BoundarySpec, NamedSpec};
use crate::error::{Error, Result};
use crate::gfp::FieldSpec;
use crate::grid::{flatten, Configuration, LatticeDims};
use crate::linalg::DenseMatrix;
use crate::stepper::{step, RuleCoefficients};

/// The n x n building blocks of the closed-form layouts.
///
/// `super_shift` and `sub_shift` are the one-step shift matrices (ones on
/// the super-/subdiagonal). The three composites couple a lattice row to
/// itself and to its neighbors under the eight-weight stencil:
/// `same_row = d*P + h*Q`, `row_below = f*I + e*P + g*Q`,
/// `row_above = b*I + c*P + a*Q`.
#[derive(Debug, Clone)]
pub struct BlockPrimitives {
    pub super_shift: DenseMatrix,
    pub sub_shift: DenseMatrix,
    pub identity: DenseMatrix,
    pub same_row: DenseMatrix,
    pub row_below: DenseMatrix,
    pub row_above: DenseMatrix,
}

/// Builds the shift matrices and the three composite blocks for block
/// dimension `n`.
pub fn block_primitives(n: usize, coeffs: &RuleCoefficients) -> BlockPrimitives {
    let spec = coeffs.spec();
    let mut p_shift = DenseMatrix::zeros(spec, n, n);
    let mut q_shift = DenseMatrix::zeros(spec, n, n);
    for i in 0..n - 1 {
        p_shift.set(i, i + 1, 1);
        q_shift.set(i + 1, i, 1);
    }
    let identity = DenseMatrix::identity(spec, n);
    let same_row = p_shift
        .scale(coeffs.d())
        .add(&q_shift.scale(coeffs.h()))
        .expect("same shape");
    let row_below = identity
        .scale(coeffs.f())
        .add(&p_shift.scale(coeffs.e()))
        .and_then(|m| m.add(&q_shift.scale(coeffs.g())))
        .expect("same shape");
    let row_above = identity
        .scale(coeffs.b())
        .add(&p_shift.scale(coeffs.c()))
        .and_then(|m| m.add(&q_shift.scale(coeffs.a())))
        .expect("same shape");
    BlockPrimitives {
        super_shift: p_shift,
        sub_shift: q_shift,
        identity,
        same_row,
        row_below,
        row_above,
    }
}

/// A dense mn x mn rule matrix with its lattice geometry and, when built
/// from a named spec, the provenance needed for structured fast paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMatrix {
    spec: FieldSpec,
    dims: LatticeDims,
    dense: DenseMatrix,
    name: Option<NamedSpec>,
    coeffs: Option<RuleCoefficients>,
}

impl RuleMatrix {
    /// Wraps an arbitrary square matrix of the right size, with no
    /// provenance. Used for synthetic block instances in tests and by
    /// callers that assemble matrices themselves.
    pub fn from_dense(dims: LatticeDims, dense: DenseMatrix) -> Result<Self> {
        if dense.rows() != dims.cell_count() || dense.cols() != dims.cell_count() {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self {
            spec: dense.spec(),
            dims,
            dense,
            name: None,
            coeffs: None,
        })
    }

    #[inline]
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    #[inline]
    pub fn dense(&self) -> &DenseMatrix {
        &self.dense
    }

    pub fn name(&self) -> Option<NamedSpec> {
        self.name
    }

    pub fn coeffs(&self) -> Option<&RuleCoefficients> {
        self.coeffs.as_ref()
    }

    /// Extracts block (bi, bj) of the m x m block grid (0-indexed).
    pub fn block(&self, bi: usize, bj: usize) -> DenseMatrix {
        let n = self.dims.cols();
        let mut out = DenseMatrix::zeros(self.spec, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.dense.get(bi * n + i, bj * n + j));
            }
        }
        out
    }

    /// True when nonzero blocks appear only on the block tridiagonal plus
    /// at most one of the two far corners (1, m) / (m, 1).
    pub fn block_sparsity_ok(&self) -> bool {
        let m = self.dims.rows();
        let mut corners = 0;
        for bi in 0..m {
            for bj in 0..m {
                if bi.abs_diff(bj) <= 1 {
                    continue;
                }
                if self.block(bi, bj).is_zero() {
                    continue;
                }
                let is_corner = (bi == 0 && bj == m - 1) || (bi == m - 1 && bj == 0);
                if !is_corner {
                    return false;
                }
                corners += 1;
            }
        }
        corners <= 1
    }

    /// Dense CSV of the matrix entries, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let size = self.dims.cell_count();
        for i in 0..size {
            let row: Vec<String> = (0..size).map(|j| self.dense.get(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Ground-truth builder: column (i-1)n + j of the matrix is the flattened
/// image of the indicator configuration at cell (i, j) under [`step`].
pub fn build_from_resolver(
    boundary: &BoundarySpec,
    dims: LatticeDims,
    coeffs: &RuleCoefficients,
) -> RuleMatrix {
    let spec = coeffs.spec();
    let size = dims.cell_count();
    let mut dense = DenseMatrix::zeros(spec, size, size);
    for col in 0..size {
        let ind = Configuration::indicator(spec, dims, col / dims.cols(), col % dims.cols());
        let img = step(&ind, coeffs, boundary).expect("spec match by construction");
        let v = flatten(&img);
        for row in 0..size {
            dense.set(row, col, v.get(row));
        }
    }
    RuleMatrix {
        spec,
        dims,
        dense,
        name: boundary.name(),
        coeffs: Some(*coeffs),
    }
}

/// Adds the n x n `block` into the (bi, bj) slot of `dense`.
fn place_block(dense: &mut DenseMatrix, n: usize, bi: usize, bj: usize, block: &DenseMatrix) {
    for i in 0..n {
        for j in 0..n {
            dense.set(bi * n + i, bj * n + j, block.get(i, j));
        }
    }
}

/// Adds `v` at the 1-indexed (i, j) unit-matrix position of `block`.
fn bump(block: &mut DenseMatrix, i: usize, j: usize, v: u64) {
    block.add_assign_at(i - 1, j - 1, v);
}

/// Closed-form builder for the nine named mixed/rotated specs.
///
/// Each layout is block-tridiagonal — `same`-family blocks on the diagonal,
/// `below`-family on the superdiagonal, `above`-family on the subdiagonal —
/// with per-spec unit corrections and up to two special slots (a replaced
/// block row-1 or row-m block, or a far corner block).
///
/// Fails with [`Error::UnknownName`] for the four uniform base specs, which
/// have no closed form here; use [`build_from_resolver`] for those.
pub fn build_closed_form(
    name: NamedSpec,
    dims: LatticeDims,
    coeffs: &RuleCoefficients,
) -> Result<RuleMatrix> {
    if !name.has_closed_form() {
        return Err(Error::UnknownName(name.cli_name().to_string()));
    }
    let spec = coeffs.spec();
    let (m, n) = (dims.rows(), dims.cols());
    let prim = block_primitives(n, coeffs);
    // only the weights that appear in unit corrections are needed here
    let w = coeffs.weights();
    let (a, c, d, e, g, h) = (w[0], w[2], w[3], w[4], w[6], w[7]);
    let p = spec;
    let base_a = &prim.same_row;
    let base_b = &prim.row_below;
    let base_c = &prim.row_above;

    // diagonal, superdiagonal and subdiagonal blocks
    let mut diag = base_a.clone();
    let mut sup = base_b.clone();
    let mut sub = base_c.clone();
    // (slot, block) replacements applied after the tridiagonal fill
    let mut special: Vec<((usize, usize), DenseMatrix)> = Vec::new();

    match name {
        NamedSpec::Phi => {
            bump(&mut diag, n, n - 1, d);
            bump(&mut sup, n, n - 1, e);
            bump(&mut sub, n, n - 1, c);
            let mut corner = base_b.add(base_c)?;
            bump(&mut corner, n, n - 1, p.add(c, e));
            bump(&mut corner, 1, 2, g);
            special.push(((m - 1, m - 2), corner));
        }
        NamedSpec::Psi => {
            bump(&mut diag, n, 1, d);
            bump(&mut sup, n, 1, e);
            bump(&mut sub, n, 1, c);
            let mut corner = base_b.clone();
            bump(&mut corner, n, 1, e);
            bump(&mut corner, 1, n, g);
            special.push(((m - 1, 0), corner));
        }
        NamedSpec::Tau => {
            bump(&mut diag, n, n, d);
            bump(&mut sup, n, n, e);
            bump(&mut sub, n, n, c);
            let mut last = base_a.add(base_b)?;
            bump(&mut last, 1, 1, g);
            bump(&mut last, n, n, p.add(d, e));
            special.push(((m - 1, m - 1), last));
        }
        NamedSpec::Sigma => {
            bump(&mut diag, 1, 2, h);
            bump(&mut diag, n, n, d);
            bump(&mut sup, 1, 2, g);
            bump(&mut sup, n, n, e);
            bump(&mut sub, 1, 2, a);
            bump(&mut sub, n, n, c);
            let mut first = base_b.add(base_c)?;
            bump(&mut first, 1, 2, p.add(a, g));
            bump(&mut first, n, n - 1, c);
            bump(&mut first, n, n, e);
            special.push(((0, 1), first));
            let mut last = base_a.add(base_b)?;
            bump(&mut last, 1, 1, g);
            bump(&mut last, 1, 2, h);
            bump(&mut last, n, n, p.add(d, e));
            special.push(((m - 1, m - 1), last));
        }
        NamedSpec::Lambda => {
            bump(&mut diag, 1, 2, h);
            bump(&mut diag, n, 1, d);
            bump(&mut sup, 1, 2, g);
            bump(&mut sup, n, 1, e);
            bump(&mut sub, 1, 2, a);
            bump(&mut sub, n, 1, c);
            let mut first = base_b.add(base_c)?;
            bump(&mut first, 1, 2, p.add(a, g));
            bump(&mut first, n, n - 1, c);
            bump(&mut first, n, 1, e);
            special.push(((0, 1), first));
            let mut corner = base_b.clone();
            bump(&mut corner, n, 1, e);
            bump(&mut corner, 1, n, g);
            special.push(((m - 1, 0), corner));
        }
        NamedSpec::Xi => {
            bump(&mut diag, 1, n, h);
            bump(&mut diag, n, n, d);
            bump(&mut sup, 1, n, g);
            bump(&mut sup, n, n, e);
            bump(&mut sub, 1, n, a);
            bump(&mut sub, n, n, c);
            let mut corner = base_c.clone();
            bump(&mut corner, 1, n, a);
            bump(&mut corner, n, 1, c);
            special.push(((0, m - 1), corner));
            let mut last = base_a.add(base_b)?;
            bump(&mut last, 1, 1, g);
            bump(&mut last, 1, n, h);
            bump(&mut last, n, n, p.add(d, e));
            special.push(((m - 1, m - 1), last));
        }
        NamedSpec::Phi90 => {
            bump(&mut diag, 1, 2, h);
            bump(&mut sup, 1, 2, g);
            bump(&mut sub, 1, 2, a);
            let mut first = base_b.clone();
            bump(&mut first, 1, 2, p.add(a, g));
            special.push(((0, 1), first));
            let mut last_sub = base_b.add(base_c)?;
            bump(&mut last_sub, 1, 2, p.add(a, g));
            special.push(((m - 1, m - 2), last_sub));
        }
        NamedSpec::Phi180 => {
            bump(&mut diag, 1, 2, h);
            bump(&mut sup, 1, 2, g);
            bump(&mut sub, 1, 2, a);
            let mut first = base_b.add(base_c)?;
            bump(&mut first, 1, 2, p.add(a, g));
            bump(&mut first, n, n - 1, c);
            special.push(((0, 1), first));
        }
        NamedSpec::Phi270 => {
            bump(&mut diag, n, n - 1, d);
            bump(&mut sup, n, n - 1, e);
            bump(&mut sub, n, n - 1, c);
            let mut first = base_b.add(base_c)?;
            bump(&mut first, n, n - 1, p.add(c, e));
            special.push(((0, 1), first));
            let mut last_sub = base_c.clone();
            bump(&mut last_sub, n, n - 1, p.add(c, e));
            special.push(((m - 1, m - 2), last_sub));
        }
        _ => unreachable!("filtered above"),
    }

    let size = dims.cell_count();
    let mut dense = DenseMatrix::zeros(spec, size, size);
    for i in 0..m {
        place_block(&mut dense, n, i, i, &diag);
    }
    for i in 0..m - 1 {
        place_block(&mut dense, n, i, i + 1, &sup);
    }
    for i in 1..m {
        place_block(&mut dense, n, i, i - 1, &sub);
    }
    for ((bi, bj), block) in &special {
        place_block(&mut dense, n, *bi, *bj, block);
    }
    Ok(RuleMatrix {
        spec,
        dims,
        dense,
        name: Some(name),
        coeffs: Some(*coeffs),
    })
}

/// Point reflection of the Moore stencil: (a,b,c,d,e,f,g,h) maps to
/// (e,f,g,h,a,b,c,d). Applying it twice is the identity.
pub fn rotate180_coeffs(coeffs: &RuleCoefficients) -> RuleCoefficients {
    let w = coeffs.weights();
    RuleCoefficients::new(
        coeffs.spec(),
        [w[4], w[5], w[6], w[7], w[0], w[1], w[2], w[3]],
    )
}
