//! Submodules of p^-1 L / p L for the standard lattice L, i.e. every lattice
//! in the radius-1 ball. A submodule S of (R/p^2)^4 is determined by
//! A = {a : p a in S} / p, B = S mod p (B inside A) and a map
//! B -> F_q^4 / A, realized on the non-pivot coordinates of A.

use crate::error::{Result, StrataError};
use crate::field::{FiniteField, Fq};
use crate::lattice::{Lattice, SympSpace};
use crate::matrix::{zero_col, Col};
use crate::subspace::{FqGeometry, FqSubspace, FqVec, SMAX};

/// One submodule of the ball quotient, before its lattice is built.
pub struct Candidate<'a> {
    ball: &'a Ball<'a>,
    pub a: &'a FqSubspace,
    pub b: &'a [FqVec],
    pub phi: &'a [FqVec],
}

impl Candidate<'_> {
    /// Length of the submodule: [X : p L].
    pub fn length(&self) -> usize {
        self.a.dim() + self.b.len()
    }

    pub fn build(&self) -> Result<Lattice> {
        let sp = self.ball.sp;
        let c = sp.ctx();
        let lift = |v: &FqVec, shift: u32| -> Col {
            let mut col = zero_col();
            for i in 0..4 {
                col[i] = c.mul_p(c.digit_lift(v[i] as u32), shift);
            }
            col
        };
        let mut gens: Vec<Col> = Vec::with_capacity(12);
        for (b, f) in self.b.iter().zip(self.phi) {
            let mut g = lift(b, 0);
            let h = lift(f, 1);
            for i in 0..4 {
                g[i] = c.add(g[i], h[i]);
            }
            gens.push(g);
        }
        for a in self.a.rows() {
            gens.push(lift(a, 1));
        }
        for i in 0..4 {
            let mut e = zero_col();
            e[i] = c.mul_p(c.one(), 2);
            gens.push(e);
        }
        sp.lattice_from_columns(gens, -1)
    }
}

pub struct Ball<'a> {
    sp: &'a SympSpace,
    pub geom: FqGeometry,
    /// subspaces of F_q^k for k = 0..=4 (ambient coordinates of a basis)
    sub: Vec<Vec<Vec<FqSubspace>>>,
}

impl<'a> Ball<'a> {
    pub fn new(sp: &'a SympSpace) -> Result<Ball<'a>> {
        if sp.n() != 4 {
            return Err(StrataError::DimensionMismatch { expected: 4, got: sp.n() });
        }
        let field = FiniteField::from_ring(sp.ctx());
        let sub = (0..=4)
            .map(|k| {
                let g = FqGeometry::with_gram(field.clone(), k, [[0; SMAX]; SMAX]);
                (0..=k).map(|j| g.all_subspaces(j)).collect()
            })
            .collect();
        Ok(Ball { sp, geom: FqGeometry::standard(field), sub })
    }

    fn combine(&self, coeffs: &FqVec, basis: &[FqVec]) -> FqVec {
        let f = &self.geom.field;
        let mut out = [0 as Fq; SMAX];
        for (k, row) in basis.iter().enumerate() {
            if coeffs[k] == 0 {
                continue;
            }
            for i in 0..4 {
                out[i] = f.add(out[i], f.mul(coeffs[k], row[i]));
            }
        }
        out
    }

    /// Visits every submodule in a fixed order. `length` restricts to
    /// submodules of that length; `isotropic` keeps only B orthogonal to A
    /// (necessary for X inside its dual). The visitor returns false to stop.
    pub fn for_each(
        &self,
        length: Option<usize>,
        isotropic: bool,
        mut visit: impl FnMut(&Candidate) -> Result<bool>,
    ) -> Result<()> {
        let q = self.geom.field.q() as Fq;
        for adim in 0..=4 {
            for a in &self.sub[4][adim] {
                let pivots: Vec<usize> =
                    a.rows().iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
                let free: Vec<usize> = (0..4).filter(|i| !pivots.contains(i)).collect();
                for bdim in 0..=adim {
                    if length.is_some_and(|l| l != adim + bdim) {
                        continue;
                    }
                    for bsub in &self.sub[adim][bdim] {
                        let b: Vec<FqVec> = bsub.rows().iter().map(|cf| self.combine(cf, a.rows())).collect();
                        if isotropic && !b.iter().all(|x| a.rows().iter().all(|y| self.geom.form(x, y) == 0)) {
                            continue;
                        }
                        let slots = bdim * free.len();
                        let mut vals = vec![0 as Fq; slots];
                        let mut phi = vec![[0 as Fq; SMAX]; bdim];
                        loop {
                            for (i, v) in phi.iter_mut().enumerate() {
                                for (j, &col) in free.iter().enumerate() {
                                    v[col] = vals[i * free.len() + j];
                                }
                            }
                            let cand = Candidate { ball: self, a, b: &b, phi: &phi };
                            if !visit(&cand)? {
                                return Ok(());
                            }
                            let mut i = 0;
                            while i < slots {
                                vals[i] += 1;
                                if vals[i] < q {
                                    break;
                                }
                                vals[i] = 0;
                                i += 1;
                            }
                            if i == slots {
                                break;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// All ball lattices satisfying `pred` among the length-3 isotropic
    /// candidates, sorted canonically.
    pub fn census(&self, mut pred: impl FnMut(&Lattice) -> Result<bool>) -> Result<Vec<Lattice>> {
        let mut out = Vec::new();
        self.for_each(Some(3), true, |c| {
            let l = c.build()?;
            if pred(&l)? {
                out.push(l);
            }
            Ok(true)
        })?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Lattices between p^r L_std and p^-r L_std satisfying `pred`. Radius 0 is
/// the standard lattice alone; radius 1 runs the submodule enumeration.
pub fn enumerate_ball_points(
    sp: &SympSpace,
    radius: usize,
    pred: impl FnMut(&Lattice) -> Result<bool>,
) -> Result<Vec<Lattice>> {
    let mut pred = pred;
    match radius {
        0 => {
            let l = sp.standard_lattice();
            Ok(if pred(&l)? { vec![l] } else { vec![] })
        }
        1 => Ball::new(sp)?.census(pred),
        r => Err(StrataError::Envelope(format!("global census radius {r} exceeds 1"))),
    }
}
