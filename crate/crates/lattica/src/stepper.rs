//! Direct one-step evolution of a configuration under the eight-weight
//! local rule, routing out-of-lattice reads through the boundary resolver.
//!
//! This path never touches the rule matrices, so it doubles as the
//! independent oracle the matrix builders are checked against.

use crate::boundary::{BoundarySpec, VirtualCellResolution};
use crate::error::Result;
use crate::gfp::FieldSpec;
use crate::grid::Configuration;

/// Neighbor offsets (di, dj) in coefficient order a..h:
/// NW, N, NE, E, SE, S, SW, W.
pub const NEIGHBOR_OFFSETS: [(i64, i64); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
];

/// The eight local-rule weights a..h for the Moore stencil.
///
/// The new state of cell (i, j) is
/// `a*x[i-1,j-1] + b*x[i-1,j] + c*x[i-1,j+1] + d*x[i,j+1] + e*x[i+1,j+1]
///  + f*x[i+1,j] + g*x[i+1,j-1] + h*x[i,j-1]  (mod p)`.
///
/// Any weight may be zero; setting the diagonal weights a, c, e, g to zero
/// restricts the stencil to the von Neumann neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleCoefficients {
    spec: FieldSpec,
    w: [u64; 8],
}

impl RuleCoefficients {
    /// Weights in a..h order, each reduced modulo p.
    pub fn new(spec: FieldSpec, weights: [u64; 8]) -> Self {
        let mut w = weights;
        for v in &mut w {
            *v %= spec.modulus();
        }
        Self { spec, w }
    }

    /// The von Neumann restriction: diagonal weights all zero.
    pub fn von_neumann(spec: FieldSpec, b: u64, d: u64, f: u64, h: u64) -> Self {
        Self::new(spec, [0, b, 0, d, 0, f, 0, h])
    }

    #[inline]
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Weights in a..h order.
    #[inline]
    pub fn weights(&self) -> [u64; 8] {
        self.w
    }

    pub fn a(&self) -> u64 {
        self.w[0]
    }
    pub fn b(&self) -> u64 {
        self.w[1]
    }
    pub fn c(&self) -> u64 {
        self.w[2]
    }
    pub fn d(&self) -> u64 {
        self.w[3]
    }
    pub fn e(&self) -> u64 {
        self.w[4]
    }
    pub fn f(&self) -> u64 {
        self.w[5]
    }
    pub fn g(&self) -> u64 {
        self.w[6]
    }
    pub fn h(&self) -> u64 {
        self.w[7]
    }

    pub fn is_von_neumann(&self) -> bool {
        self.a() == 0 && self.c() == 0 && self.e() == 0 && self.g() == 0
    }
}

/// Applies the local rule once at every cell, synchronously: all reads see
/// the input configuration (double-buffered update).
pub fn step(
    c: &Configuration,
    coeffs: &RuleCoefficients,
    boundary: &BoundarySpec,
) -> Result<Configuration> {
    c.spec().check_same(&coeffs.spec())?;
    let spec = c.spec();
    let dims = c.dims();
    let (m, n) = (dims.rows(), dims.cols());
    let mut out = Configuration::zero(spec, dims);
    for i in 1..=m {
        for j in 1..=n {
            let mut acc = 0u64;
            for (&w, &(di, dj)) in coeffs.w.iter().zip(NEIGHBOR_OFFSETS.iter()) {
                if w == 0 {
                    continue;
                }
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                let read = if (1..=m as i64).contains(&ni) && (1..=n as i64).contains(&nj) {
                    c.get(ni as usize - 1, nj as usize - 1)
                } else {
                    // in-range neighbors keep resolve's frame precondition satisfied
                    match boundary.resolve(dims, ni as usize, nj as usize)? {
                        VirtualCellResolution::ZeroState => 0,
                        VirtualCellResolution::InLattice { i: ri, j: rj } => {
                            c.get(ri - 1, rj - 1)
                        }
                    }
                };
                acc = spec.add(acc, spec.mul(w, read));
            }
            out.set(i - 1, j - 1, acc);
        }
    }
    Ok(out)
}

/// The t-fold composition of [`step`]; `t = 0` returns the input unchanged.
pub fn evolve(
    c: &Configuration,
    coeffs: &RuleCoefficients,
    boundary: &BoundarySpec,
    t: usize,
) -> Result<Configuration> {
    let mut state = c.clone();
    for _ in 0..t {
        state = step(&state, coeffs, boundary)?;
    }
    Ok(state)
}
