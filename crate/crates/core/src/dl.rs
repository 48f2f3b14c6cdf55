//! The Deligne-Lusztig sets Y+ (lines) and Y- (hyperplanes) in F_q^4 with the
//! three-piece decomposition X_P(1), X_B(w1), X_B(w2).

use serde::Serialize;

use crate::error::{Result, StrataError};
use crate::field::FiniteField;
use crate::ring::make_ring;
use crate::subspace::{FqGeometry, FqSubspace, FqVec};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum StratumLabel {
    XP1,
    XBw1,
    XBw2,
    NotInY,
}

impl StratumLabel {
    /// Dimension of the Deligne-Lusztig piece: the length of its Weyl element.
    pub fn dimension(&self) -> Option<u32> {
        match self {
            StratumLabel::XP1 => Some(0),
            StratumLabel::XBw1 => Some(1),
            StratumLabel::XBw2 => Some(2),
            StratumLabel::NotInY => None,
        }
    }
}

/// Outcome of the two membership conditions for Y-, kept apart for
/// diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinusVerdict {
    pub label: StratumLabel,
    /// U^perp is inside U and sigma(U).
    pub perp_ok: bool,
    /// dim U / (U cap sigma U) <= 1.
    pub dim_ok: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrataCounts {
    pub xp1: u64,
    pub xbw1: u64,
    pub xbw2: u64,
    pub not_in_y: u64,
}

impl StrataCounts {
    pub fn add(&mut self, l: StratumLabel) {
        match l {
            StratumLabel::XP1 => self.xp1 += 1,
            StratumLabel::XBw1 => self.xbw1 += 1,
            StratumLabel::XBw2 => self.xbw2 += 1,
            StratumLabel::NotInY => self.not_in_y += 1,
        }
    }
    pub fn members(&self) -> u64 {
        self.xp1 + self.xbw1 + self.xbw2
    }
    pub fn total(&self) -> u64 {
        self.members() + self.not_in_y
    }
}

/// Symplectic F_{p^d}^4 with Frobenius relative to F_r, r = p^base.
#[derive(Clone, Debug)]
pub struct DlSpace {
    pub geom: FqGeometry,
    base: usize,
}

impl DlSpace {
    pub fn new(p: u32, d: usize) -> Result<DlSpace> {
        let field = FiniteField::from_ring(&make_ring(p, d, 1)?);
        Ok(DlSpace { geom: FqGeometry::standard(field), base: 1 })
    }

    /// Frobenius relative to F_{p^base} instead of F_p.
    pub fn with_base(mut self, base: usize) -> DlSpace {
        self.base = base;
        self
    }

    pub fn from_geometry(geom: FqGeometry) -> DlSpace {
        DlSpace { geom, base: 1 }
    }

    pub fn sigma(&self, u: &FqSubspace) -> FqSubspace {
        self.geom.frobenius_subspace(u, self.base)
    }

    pub fn verdict_minus(&self, u: &FqSubspace) -> Result<MinusVerdict> {
        if u.dim() != 3 {
            return Err(StrataError::DimensionMismatch { expected: 3, got: u.dim() });
        }
        let g = &self.geom;
        let su = self.sigma(u);
        let cap = g.intersect(u, &su);
        let perp_ok = g.contains(&cap, &g.perp(u));
        let dim_ok = u.dim() - cap.dim() <= 1;
        let label = if !(perp_ok && dim_ok) {
            StratumLabel::NotInY
        } else if su == *u {
            StratumLabel::XP1
        } else if self.sigma(&cap) == cap {
            StratumLabel::XBw1
        } else {
            assert!(cap.dim() == 2 && g.is_totally_isotropic(&cap), "U cap sigma U must be a Lagrangian plane");
            StratumLabel::XBw2
        };
        Ok(MinusVerdict { label, perp_ok, dim_ok })
    }

    pub fn classify_point_minus(&self, u: &FqSubspace) -> Result<StratumLabel> {
        Ok(self.verdict_minus(u)?.label)
    }

    /// Membership of a line in Y+ tested directly: (x, sigma x) = 0.
    pub fn in_y_plus_direct(&self, line: &FqSubspace) -> bool {
        let x = line.rows()[0];
        self.geom.form(&x, &self.geom.frob_vec(&x, self.base)) == 0
    }

    /// Y+ is identified with Y- through U -> U^perp.
    pub fn classify_point_plus(&self, line: &FqSubspace) -> Result<StratumLabel> {
        if line.dim() != 1 {
            return Err(StrataError::DimensionMismatch { expected: 1, got: line.dim() });
        }
        let label = self.classify_point_minus(&self.geom.perp(line))?;
        debug_assert_eq!(label != StratumLabel::NotInY, self.in_y_plus_direct(line));
        Ok(label)
    }

    pub fn count_strata(&self) -> StrataCounts {
        let mut c = StrataCounts::default();
        for u in self.geom.all_subspaces(3) {
            c.add(self.classify_point_minus(&u).expect("dim 3"));
        }
        c
    }
}

/// x3^p x0 - x0^p x3 + x2^p x1 - x1^p x2 = 0.
pub fn surface_member(field: &FiniteField, x: &FqVec) -> Result<bool> {
    if x.iter().all(|&c| c == 0) {
        return Err(StrataError::DimensionMismatch { expected: 1, got: 0 });
    }
    let f = field;
    let t = |a: usize, b: usize| f.mul(f.frob(x[a]), x[b]);
    let v = f.add(f.sub(t(3, 0), t(0, 3)), f.sub(t(2, 1), t(1, 2)));
    Ok(v == 0)
}

pub fn count_strata(p: u32, d: usize) -> Result<StrataCounts> {
    Ok(DlSpace::new(p, d)?.count_strata())
}

#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub plane: FqSubspace,
    pub lines: Vec<FqSubspace>,
}

/// Totally isotropic F_p-planes, each with its F_p-rational lines.
pub fn components_w1(p: u32) -> Result<Vec<Component>> {
    let g = DlSpace::new(p, 1)?.geom;
    let lines = g.all_subspaces(1);
    Ok(g.all_subspaces(2)
        .into_iter()
        .filter(|t| g.perp(t) == *t)
        .map(|plane| {
            let ls = lines.iter().filter(|l| g.contains(&plane, l)).copied().collect();
            Component { plane, lines: ls }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_points_are_all_xp1() {
        for p in [3, 5] {
            let c = count_strata(p, 1).unwrap();
            assert_eq!(c.xbw1 + c.xbw2, 0);
            assert_eq!(c.xp1, (p as u64 + 1) * (p as u64 * p as u64 + 1));
        }
    }

    #[test]
    fn quadratic_points_have_no_xbw2() {
        let c = count_strata(3, 2).unwrap();
        assert_eq!(c.xbw2, 0);
        assert_eq!(c.xp1, 40);
        assert!(c.xbw1 > 0);
        assert_eq!(c.total(), (9u64.pow(4) - 1) / 8);
    }

    #[test]
    fn minus_requires_dim_three() {
        let s = DlSpace::new(3, 1).unwrap();
        let l = s.geom.all_subspaces(1)[0];
        assert!(s.classify_point_minus(&l).is_err());
        assert!(s.classify_point_plus(&s.geom.perp(&l)).is_err());
    }

    #[test]
    fn plus_route_matches_minus_route_and_surface_over_f9() {
        let s = DlSpace::new(3, 2).unwrap();
        let lines = s.geom.all_subspaces(1);
        assert_eq!(lines.len(), 820);
        let mut first_non_member = None;
        for l in &lines {
            let plus = s.classify_point_plus(l).unwrap();
            assert_eq!(plus, s.classify_point_minus(&s.geom.perp(l)).unwrap());
            let x = l.rows()[0];
            let on = surface_member(&s.geom.field, &x).unwrap();
            assert_eq!(on, s.in_y_plus_direct(l));
            assert_eq!(on, plus != StratumLabel::NotInY);
            if !on && first_non_member.is_none() {
                first_non_member = Some(x);
            }
            // scaling invariance
            let y: FqVec = x.map(|c| s.geom.field.mul(c, 5));
            assert_eq!(surface_member(&s.geom.field, &y).unwrap(), on);
        }
        // first non-member in canonical order: <0,1,x,0> gives x^3 - x = -2x
        assert_eq!(first_non_member, Some([0, 1, 3, 0]));
    }

    #[test]
    fn rational_points_lie_on_surface() {
        let s = DlSpace::new(5, 2).unwrap();
        for l in s.geom.all_subspaces(1) {
            let x = l.rows()[0];
            if x.iter().all(|&c| c < 5) {
                assert!(surface_member(&s.geom.field, &x).unwrap());
            }
        }
        assert!(surface_member(&s.geom.field, &[0; 4]).is_err());
    }

    #[test]
    fn components_at_three() {
        let comps = components_w1(3).unwrap();
        assert_eq!(comps.len(), 40);
        let g = DlSpace::new(3, 1).unwrap().geom;
        for c in &comps {
            assert_eq!(g.perp(&c.plane), c.plane);
            assert_eq!(c.lines.len(), 4);
        }
    }
}
