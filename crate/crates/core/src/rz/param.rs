//! The paramodular point set {M : pM^v <2 M <2 M^v, pM <2 VM <2 M} with
//! F = Pi = ([[0, I], [pI, 0]], sigma), V = (same matrix, sigma^-1) and the
//! sigma^2-linear tau2 = V^-1 F.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::census::enumerate_ball_points;
use super::{has_rational_basis, BTLabel, Findings};
use crate::building::{classify_vertex, standard_pi, Residue, TypePair02};
use crate::error::{Result, StrataError};
use crate::field::FiniteField;
use crate::lattice::{identity_mat, Lattice, SemilinearOp, SympSpace};
use crate::ring::{make_ring, RingCtx};
use crate::subspace::{FqGeometry, SMAX};

pub struct ParamModel {
    sp: SympSpace,
    pub pi: SemilinearOp,
    pub v: SemilinearOp,
    pub tau2: SemilinearOp,
}

#[derive(Clone, Debug)]
pub struct ParamStratum {
    pub label: BTLabel,
    /// dim M / (FM + VM)
    pub a_number: u32,
    pub findings: Findings,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ParamBijectionReport {
    pub pair: String,
    pub lines: usize,
    pub points: usize,
    pub superspecial: usize,
    pub rational_lines: usize,
    pub findings: Findings,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ParamCensusReport {
    pub points: usize,
    pub labels: BTreeMap<String, usize>,
    pub a_numbers: BTreeMap<u32, usize>,
    pub findings: Findings,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PairIntersectionReport {
    pub pairs: usize,
    pub meeting_pairs: usize,
    pub findings: Findings,
}

impl ParamModel {
    pub fn new(p: u32, d: usize, m: u32) -> Result<ParamModel> {
        Self::from_ctx(Arc::new(make_ring(p, d, m)?))
    }

    pub fn from_ctx(ctx: Arc<RingCtx>) -> Result<ParamModel> {
        let d = ctx.d();
        if d != 2 && d != 4 {
            return Err(StrataError::UnsupportedDegree(d));
        }
        let sp = SympSpace::standard(ctx.clone(), 4);
        let pi = standard_pi(&sp, 1);
        let v = standard_pi(&sp, d as i64 - 1);
        let tau2 = SemilinearOp::new(4, identity_mat(&ctx, 4), 2);
        Ok(ParamModel { sp, pi, v, tau2 })
    }

    pub fn space(&self) -> &SympSpace {
        &self.sp
    }

    pub fn ctx(&self) -> &RingCtx {
        self.sp.ctx()
    }

    pub fn fmt(&self, l: &Lattice) -> String {
        l.format(self.ctx())
    }

    pub fn f(&self, l: &Lattice) -> Result<Lattice> {
        self.sp.apply_semilinear(&self.pi, l)
    }

    pub fn v(&self, l: &Lattice) -> Result<Lattice> {
        self.sp.apply_semilinear(&self.v, l)
    }

    pub fn tau2_image(&self, l: &Lattice) -> Result<Lattice> {
        self.sp.apply_semilinear(&self.tau2, l)
    }

    pub fn is_tau2_stable(&self, l: &Lattice) -> Result<bool> {
        Ok(self.tau2_image(l)? == *l)
    }

    fn idx(&self, inner: &Lattice, outer: &Lattice, k: u32) -> Result<bool> {
        Ok(self.sp.index_if_contained(inner, outer)? == Some(k))
    }

    pub fn is_param_point(&self, m: &Lattice) -> Result<bool> {
        let dual = self.sp.dual(m)?;
        if !self.idx(&dual.with_scale_shift(1), m, 2)? || !self.idx(m, &dual, 2)? {
            return Ok(false);
        }
        let vm = self.v(m)?;
        Ok(self.idx(&m.with_scale_shift(1), &vm, 2)? && self.idx(&vm, m, 2)?)
    }

    pub fn param_stratify(&self, m: &Lattice) -> Result<ParamStratum> {
        let sp = &self.sp;
        let mut f = Findings::default();
        let w = || self.fmt(m);
        let fm = self.f(m)?;
        let vm = self.v(m)?;
        let pm = m.with_scale_shift(1);
        let a_number = sp.colength(&sp.sum(&fm, &vm)?, m)?;
        f.check(a_number == 1 || a_number == 2, || format!("a-number {a_number} at {}", w()));
        if a_number == 1 {
            let f2 = sp.sum(&self.f(&fm)?, &pm)?;
            let v2 = sp.sum(&self.v(&vm)?, &pm)?;
            let cap = sp.intersect(&fm, &vm)?;
            f.check(f2 == cap && v2 == cap, || format!("F^2M + pM != FM cap VM at {}", w()));
        }
        let tm = self.tau2_image(m)?;
        let label = if tm == *m {
            f.check(fm == vm, || format!("stable but FM != VM at {}", w()));
            f.check(classify_vertex(sp, m)? == Some(1), || format!("stable point not type 1: {}", w()));
            BTLabel::P1 { l1: m.clone() }
        } else {
            let l0 = sp.sum(m, &tm)?;
            let l2 = sp.intersect(m, &tm)?;
            let l0d = sp.dual(&l0)?;
            let md = sp.dual(m)?;
            // M < L+ < L+^v < M^v and pM^v < pL-^v < L- < M
            let plus = classify_vertex(sp, &l0)? == Some(0)
                && self.is_tau2_stable(&l0)?
                && sp.contains(&l0, m)?
                && sp.contains(&l0d, &l0)?
                && sp.contains(&md, &l0d)?;
            let l2d = sp.dual(&l2)?.with_scale_shift(1);
            let minus = classify_vertex(sp, &l2)? == Some(2)
                && self.is_tau2_stable(&l2)?
                && sp.contains(&l2d, &md.with_scale_shift(1))?
                && sp.contains(&l2, &l2d)?
                && sp.contains(m, &l2)?;
            f.check(plus, || format!("L+ chain fails at {}", w()));
            f.check(minus, || format!("L- chain fails at {}", w()));
            f.check(self.f(&l0)? == l2, || format!("Pi L0 != L2 at {}", w()));
            BTLabel::P02 { l0, l2 }
        };
        Ok(ParamStratum { label, a_number, findings: f })
    }

    pub fn census(&self, radius: usize) -> Result<Vec<Lattice>> {
        if radius > 0 && self.ctx().d() > 2 {
            return Err(StrataError::Envelope("global census needs d <= 2".into()));
        }
        enumerate_ball_points(&self.sp, radius, |l| self.is_param_point(l))
    }

    /// First tau2-stable point of the radius-1 census.
    pub fn m_std(&self) -> Result<Option<Lattice>> {
        for m in self.census(1)? {
            if self.is_tau2_stable(&m)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// The base pair (L_std, Pi L_std).
    pub fn base_pair(&self) -> Result<TypePair02> {
        let l0 = self.sp.standard_lattice();
        let l2 = self.f(&l0)?;
        let v = |l: Lattice| crate::building::vertex(&self.sp, l);
        Ok(TypePair02 {
            l0: v(l0)?.ok_or(StrataError::NotContained)?,
            l2: v(l2)?.ok_or(StrataError::NotContained)?,
        })
    }

    pub fn census_report(&self, points: &[Lattice]) -> Result<ParamCensusReport> {
        let mut r = ParamCensusReport { points: points.len(), ..Default::default() };
        for m in points {
            let s = self.param_stratify(m)?;
            *r.labels.entry(s.label.kind().to_string()).or_default() += 1;
            *r.a_numbers.entry(s.a_number).or_default() += 1;
            r.findings.merge(s.findings);
        }
        Ok(r)
    }

    fn check_pair(&self, pair: &TypePair02) -> Result<()> {
        let ok = pair.l0.vtype == 0
            && pair.l2.vtype == 2
            && self.is_tau2_stable(&pair.l0.lat)?
            && self.v(&pair.l0.lat)? == pair.l2.lat;
        if !ok {
            return Err(StrataError::UnsupportedNeighbors { from: pair.l0.vtype, to: pair.l2.vtype });
        }
        if !has_rational_basis(&self.sp, &pair.l0.lat) {
            return Err(StrataError::Envelope("vertex basis is not Frobenius-fixed".into()));
        }
        Ok(())
    }

    /// Lattices M with L2 < M < L0 of index 1, i.e. lines of L0/L2.
    pub fn pair_stratum(&self, l0: &Lattice, l2: &Lattice) -> Result<Vec<Lattice>> {
        Residue::new(&self.sp, l0.clone()).lattices_between(l2, 1)
    }

    pub fn param_bijection_report(&self, pair: &TypePair02) -> Result<ParamBijectionReport> {
        self.check_pair(pair)?;
        let (l0, l2) = (&pair.l0.lat, &pair.l2.lat);
        let mut r = ParamBijectionReport { pair: format!("{} / {}", self.fmt(l0), self.fmt(l2)), ..Default::default() };
        let res = Residue::new(&self.sp, l0.clone());
        let geom = FqGeometry::with_gram(FiniteField::from_ring(self.ctx()), 4, [[0; SMAX]; SMAX]);
        for m in self.pair_stratum(l0, l2)? {
            r.lines += 1;
            let point = self.is_param_point(&m)?;
            r.findings.check(point, || format!("line is not a point: {}", self.fmt(&m)));
            if !point {
                continue;
            }
            r.points += 1;
            let u = res.image(&geom, &m)?;
            let rational = geom.frobenius_subspace(&u, 2) == u;
            let stable = self.is_tau2_stable(&m)?;
            r.rational_lines += rational as usize;
            r.superspecial += stable as usize;
            r.findings.check(rational == stable, || format!("stable={stable} rational={rational} at {}", self.fmt(&m)));
        }
        Ok(r)
    }

    /// Type-0 tau2-stable L0 above M with V L0 inside M.
    pub fn pairs_at(&self, m: &Lattice) -> Result<Vec<(Lattice, Lattice)>> {
        let sp = &self.sp;
        let md = sp.dual(m)?;
        let mut out = Vec::new();
        for x in Residue::new(sp, md).lattices_between(m, 1)? {
            if classify_vertex(sp, &x)? == Some(0) && self.is_tau2_stable(&x)? {
                let l2 = self.v(&x)?;
                if sp.contains(m, &l2)? {
                    out.push((x, l2));
                }
            }
        }
        Ok(out)
    }

    /// Pairs through the seed points: distinct pair strata meet in at most
    /// one point, and that point is superspecial.
    pub fn pair_intersections(&self, seeds: &[Lattice]) -> Result<PairIntersectionReport> {
        let mut strata: BTreeMap<(Lattice, Lattice), BTreeSet<Lattice>> = BTreeMap::new();
        for m in seeds {
            for pair in self.pairs_at(m)? {
                if !strata.contains_key(&pair) {
                    let pts = self.pair_stratum(&pair.0, &pair.1)?;
                    strata.insert(pair, pts.into_iter().collect());
                }
            }
        }
        let mut r = PairIntersectionReport { pairs: strata.len(), ..Default::default() };
        let keys: Vec<_> = strata.keys().cloned().collect();
        let mut by_point: BTreeMap<&Lattice, Vec<usize>> = BTreeMap::new();
        for (i, k) in keys.iter().enumerate() {
            for m in &strata[k] {
                by_point.entry(m).or_default().push(i);
            }
        }
        let mut seen = BTreeSet::new();
        for (m, idx) in &by_point {
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    if !seen.insert((i, j)) {
                        continue;
                    }
                    let shared: Vec<&Lattice> = strata[&keys[i]].intersection(&strata[&keys[j]]).collect();
                    let ok = shared.len() == 1 && self.is_tau2_stable(m)?;
                    r.findings.check(ok, || format!("pairs share {} points at {}", shared.len(), self.fmt(m)));
                }
            }
        }
        r.meeting_pairs = seen.len();
        Ok(r)
    }
}
