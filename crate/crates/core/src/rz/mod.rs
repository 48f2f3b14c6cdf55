//! Finite-level models of the quaternionic and paramodular Rapoport-Zink
//! point sets, as lattices over W(F_q)/p^m.

pub mod census;
pub mod param;
pub mod quat;

use serde::Serialize;

use crate::error::{Result, StrataError};
use crate::field::Fq;
use crate::lattice::{Lattice, SympSpace};
use crate::subspace::{FqGeometry, SMAX};

pub use census::{enumerate_ball_points, Ball, Candidate};
pub use param::ParamModel;
pub use quat::QuatModel;

/// Bruhat-Tits label with witness vertex lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BTLabel {
    Q0 { l0: Lattice },
    Q2 { l2: Lattice },
    Q1 { l1: Lattice },
    Q02 { l0: Lattice, l2: Lattice },
    P02 { l0: Lattice, l2: Lattice },
    P1 { l1: Lattice },
}

impl BTLabel {
    pub fn kind(&self) -> &'static str {
        match self {
            BTLabel::Q0 { .. } => "Q0",
            BTLabel::Q2 { .. } => "Q2",
            BTLabel::Q1 { .. } => "Q1",
            BTLabel::Q02 { .. } => "Q02",
            BTLabel::P02 { .. } => "P02",
            BTLabel::P1 { .. } => "P1",
        }
    }

    pub fn witnesses(&self) -> Vec<(&Lattice, u8)> {
        match self {
            BTLabel::Q0 { l0 } => vec![(l0, 0)],
            BTLabel::Q2 { l2 } => vec![(l2, 2)],
            BTLabel::Q1 { l1 } | BTLabel::P1 { l1 } => vec![(l1, 1)],
            BTLabel::Q02 { l0, l2 } | BTLabel::P02 { l0, l2 } => vec![(l0, 0), (l2, 2)],
        }
    }
}

/// Failed assertions: a count plus the first few witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Findings {
    pub count: usize,
    pub samples: Vec<String>,
}

impl Findings {
    const KEEP: usize = 8;

    pub fn push(&mut self, s: String) {
        self.count += 1;
        if self.samples.len() < Self::KEEP {
            self.samples.push(s);
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.count == 0
    }

    pub fn merge(&mut self, other: Findings) {
        self.count += other.count;
        for s in other.samples {
            if self.samples.len() < Self::KEEP {
                self.samples.push(s);
            }
        }
    }
}

/// The residue form on outer/p*outer: p^shift times the form on the
/// canonical basis of `outer`, reduced mod p.
pub fn residue_geometry(sp: &SympSpace, outer: &Lattice, shift: i32) -> Result<FqGeometry> {
    let c = sp.ctx();
    let n = sp.n();
    if n > SMAX {
        return Err(StrataError::DimensionMismatch { expected: SMAX, got: n });
    }
    let t = 2 * outer.scale() + shift;
    let mut gram = [[0 as Fq; SMAX]; SMAX];
    for i in 0..n {
        for j in 0..n {
            let f = sp.form(&outer.column(i), &outer.column(j));
            let v = if t >= 0 {
                c.mul_p(f, t as u32)
            } else {
                if !c.is_zero(f) && c.valuation(f) < (-t) as u32 {
                    return Err(StrataError::NotContained);
                }
                c.div_p(f, (-t) as u32)
            };
            gram[i][j] = c.residue_code(v) as Fq;
        }
    }
    let field = crate::field::FiniteField::from_ring(c);
    Ok(FqGeometry::with_gram(field, n, gram))
}

/// True when every basis entry of `l` is fixed by Frobenius, so residue
/// coordinates commute with sigma.
pub fn has_rational_basis(sp: &SympSpace, l: &Lattice) -> bool {
    let c = sp.ctx();
    sp.basis_matrix(l).iter().all(|&e| c.frobenius(e) == e)
}
