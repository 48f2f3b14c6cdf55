//! The quaternionic point set {D : pD^v <2 D <2 D^v, pD^v <2 tau D <2 D^v}
//! in the split model tau = (I, sigma).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::census::{enumerate_ball_points, Ball};
use super::{has_rational_basis, residue_geometry, BTLabel, Findings};
use crate::building::{classify_vertex, standard_pi, Residue, VertexLattice};
use crate::dl::{DlSpace, StrataCounts, StratumLabel};
use crate::error::{Result, StrataError};
use crate::lattice::{identity_mat, Lattice, SemilinearOp, SympSpace};
use crate::matrix::{zero_col, Col};
use crate::ring::{make_ring, RingCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrucialCase {
    Stable,
    Sum,
    Intersection,
}

#[derive(Clone, Debug)]
pub struct Crucial {
    pub case: CrucialCase,
    pub lattice: Lattice,
    /// tau-stable, of the type the case predicts, with the exact chain.
    pub sound: bool,
}

pub struct QuatModel {
    sp: SympSpace,
    full: SympSpace,
    pub tau: SemilinearOp,
    pub pi_full: SemilinearOp,
    pub f_full: SemilinearOp,
    pub v_full: SemilinearOp,
    /// [[0, I], [pI, 0]]: a similitude of factor -p exchanging types 0, 2.
    pub swap: SemilinearOp,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BijectionReport {
    pub vertex: String,
    pub candidates: usize,
    pub points: usize,
    pub residue: StrataCounts,
    pub labels: BTreeMap<String, usize>,
    pub injective: bool,
    pub findings: Findings,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.injective && self.findings.ok()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CensusReport {
    pub points: usize,
    pub labels: BTreeMap<String, usize>,
    pub crucial_cases: BTreeMap<String, usize>,
    pub max_pappas_defect: u32,
    pub pappas: Findings,
    pub crucial: Findings,
    pub partition: Findings,
    pub full_module: Findings,
    pub superspecial: Findings,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IntersectionReport {
    pub type0_strata: usize,
    pub type2_strata: usize,
    pub pairs00: usize,
    pub pairs22: usize,
    pub pairs02: usize,
    pub type1_vertices: usize,
    pub findings: Findings,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EquivalenceReport {
    pub enumerated: usize,
    pub checked: usize,
    pub points: usize,
    pub findings: Findings,
}

impl QuatModel {
    pub fn new(p: u32, d: usize, m: u32) -> Result<QuatModel> {
        Self::from_ctx(Arc::new(make_ring(p, d, m)?))
    }

    pub fn from_ctx(ctx: Arc<RingCtx>) -> Result<QuatModel> {
        let c = &*ctx;
        let sp = SympSpace::standard(ctx.clone(), 4);
        let mut g8 = vec![c.zero(); 64];
        for i in 0..4 {
            for j in 0..4 {
                let v = sp.gram(i, j);
                g8[(4 + j) * 8 + i] = v;
                g8[j * 8 + 4 + i] = v;
            }
        }
        let full = SympSpace::with_gram(ctx.clone(), 8, g8)?;
        // Pi e_i = f_i, Pi f_i = p e_i
        let mut pm = vec![c.zero(); 64];
        for i in 0..4 {
            pm[i * 8 + 4 + i] = c.one();
            pm[(4 + i) * 8 + i] = c.from_int(c.p() as i64);
        }
        let tau = SemilinearOp::new(4, identity_mat(c, 4), 1);
        let pi_full = SemilinearOp::new(8, pm.clone(), 0);
        let f_full = SemilinearOp::new(8, pm.clone(), 1 % c.d() as i64);
        let v_full = SemilinearOp::new(8, pm, (-1i64).rem_euclid(c.d() as i64));
        let swap = standard_pi(&sp, 0);
        Ok(QuatModel { sp, full, tau, pi_full, f_full, v_full, swap })
    }

    pub fn space(&self) -> &SympSpace {
        &self.sp
    }

    pub fn full_space(&self) -> &SympSpace {
        &self.full
    }

    pub fn ctx(&self) -> &RingCtx {
        self.sp.ctx()
    }

    pub fn fmt(&self, l: &Lattice) -> String {
        l.format(self.ctx())
    }

    pub fn tau_image(&self, l: &Lattice) -> Result<Lattice> {
        self.sp.apply_semilinear(&self.tau, l)
    }

    pub fn is_tau_stable(&self, l: &Lattice) -> Result<bool> {
        Ok(self.tau_image(l)? == *l)
    }

    pub fn is_quat_point(&self, d: &Lattice) -> Result<bool> {
        let sp = &self.sp;
        let dual = sp.dual(d)?;
        let pd = dual.with_scale_shift(1);
        if sp.index_if_contained(&pd, d)? != Some(2) || sp.index_if_contained(d, &dual)? != Some(2) {
            return Ok(false);
        }
        let td = self.tau_image(d)?;
        Ok(sp.index_if_contained(&pd, &td)? == Some(2) && sp.index_if_contained(&td, &dual)? == Some(2))
    }

    pub fn pappas_defect(&self, d: &Lattice) -> Result<u32> {
        let s = self.sp.sum(d, &self.tau_image(d)?)?;
        self.sp.colength(d, &s)
    }

    fn idx(&self, inner: &Lattice, outer: &Lattice, k: u32) -> Result<bool> {
        Ok(self.sp.index_if_contained(inner, outer)? == Some(k))
    }

    pub fn crucial_lattice(&self, d: &Lattice) -> Result<Crucial> {
        let sp = &self.sp;
        let td = self.tau_image(d)?;
        if td == *d {
            let sound = classify_vertex(sp, d)? == Some(1);
            return Ok(Crucial { case: CrucialCase::Stable, lattice: d.clone(), sound });
        }
        let dd = sp.dual(d)?;
        let pdd = dd.with_scale_shift(1);
        let s = sp.sum(d, &td)?;
        if self.is_tau_stable(&s)? {
            // pL^v <1 pD^v <2 D <1 L <0 L^v <1 D^v
            let sv = sp.dual(&s)?;
            let sound = classify_vertex(sp, &s)? == Some(0)
                && self.idx(&sv.with_scale_shift(1), &pdd, 1)?
                && self.idx(&pdd, d, 2)?
                && self.idx(d, &s, 1)?
                && s == sv
                && self.idx(&sv, &dd, 1)?;
            return Ok(Crucial { case: CrucialCase::Sum, lattice: s, sound });
        }
        let i = sp.intersect(d, &td)?;
        // pD^v <1 pL^v <0 L <1 D <2 D^v <1 L^v
        let iv = sp.dual(&i)?;
        let sound = self.is_tau_stable(&i)?
            && classify_vertex(sp, &i)? == Some(2)
            && self.idx(&pdd, &iv.with_scale_shift(1), 1)?
            && iv.with_scale_shift(1) == i
            && self.idx(&i, d, 1)?
            && self.idx(d, &dd, 2)?
            && self.idx(&dd, &iv, 1)?;
        Ok(Crucial { case: CrucialCase::Intersection, lattice: i, sound })
    }

    pub fn bt_label(&self, d: &Lattice) -> Result<BTLabel> {
        let td = self.tau_image(d)?;
        if td == *d {
            return Ok(BTLabel::Q1 { l1: d.clone() });
        }
        let s = self.sp.sum(d, &td)?;
        let i = self.sp.intersect(d, &td)?;
        Ok(match (self.is_tau_stable(&s)?, self.is_tau_stable(&i)?) {
            (true, true) => BTLabel::Q02 { l0: s, l2: i },
            (true, false) => BTLabel::Q0 { l0: s },
            _ => BTLabel::Q2 { l2: i },
        })
    }

    fn embed(&self, l: &Lattice, part: usize, scale: i32) -> Vec<Col> {
        let c = self.ctx();
        let shift = (l.scale() - scale) as u32;
        (0..4)
            .map(|j| {
                let src = l.column(j);
                let mut col = zero_col();
                for r in 0..4 {
                    col[4 * part + r] = c.mul_p(src[r], shift);
                }
                col
            })
            .collect()
    }

    /// M = D + Pi D^v inside N = N0 + N1.
    pub fn full_module(&self, d: &Lattice) -> Result<Lattice> {
        let dv = self.sp.dual(d)?;
        let e = d.scale().min(dv.scale());
        let mut gens = self.embed(d, 0, e);
        gens.extend(self.embed(&dv, 1, e));
        self.full.lattice_from_columns(gens, e)
    }

    /// Graded piece of an 8-dimensional lattice, as a 4-dimensional lattice.
    pub fn component(&self, x: &Lattice, part: usize) -> Result<Lattice> {
        let gens: Vec<Col> = (0..8)
            .map(|j| {
                let src = x.column(j);
                let mut col = zero_col();
                col[..4].copy_from_slice(&src[4 * part..4 * part + 4]);
                col
            })
            .collect();
        self.sp.lattice_from_columns(gens, x.scale())
    }

    pub fn full_module_check(&self, d: &Lattice) -> Result<bool> {
        let sp = &self.sp;
        let f = &self.full;
        let m = self.full_module(d)?;
        if f.dual(&m)? != m {
            return Ok(false);
        }
        let vm = f.apply_semilinear(&self.v_full, &m)?;
        if !f.contains(&vm, &m.with_scale_shift(1))? || !f.contains(&m, &vm)? {
            return Ok(false);
        }
        let pim = f.apply_semilinear(&self.pi_full, &m)?;
        let (m0, m1) = (self.component(&m, 0)?, self.component(&m, 1)?);
        // (Pi M)_1 = Pi M0, (Pi M)_0 = Pi M1, likewise for V
        let ok = self.idx(&self.component(&pim, 1)?, &m1, 2)?
            && self.idx(&self.component(&pim, 0)?, &m0, 2)?
            && self.idx(&self.component(&vm, 0)?, &m0, 2)?
            && self.idx(&self.component(&vm, 1)?, &m1, 2)?;
        let _ = sp;
        Ok(ok)
    }

    /// Superspecial on the full module: V M = Pi M.
    pub fn full_superspecial(&self, d: &Lattice) -> Result<bool> {
        let m = self.full_module(d)?;
        Ok(self.full.apply_semilinear(&self.v_full, &m)? == self.full.apply_semilinear(&self.pi_full, &m)?)
    }

    /// (F x, y) = sigma((x, V y)) on all pairs of basis vectors, times a
    /// generator, of the full model.
    pub fn form_identity_holds(&self) -> bool {
        let c = self.ctx();
        let f = &self.full;
        let xi = c.gen();
        (0..8).all(|a| {
            (0..8).all(|b| {
                let mut x = f.unit(a);
                x[a] = xi;
                let y = f.unit(b);
                let lhs = f.form(&self.f_full.apply_vec(c, &x), &y);
                let rhs = c.frobenius(f.form(&x, &self.v_full.apply_vec(c, &y)));
                lhs == rhs
            })
        })
    }

    /// D -> A D^v, exchanging M_{L0} and M_{A L0}.
    pub fn dual_swap(&self, d: &Lattice) -> Result<Lattice> {
        self.sp.apply_semilinear(&self.swap, &self.sp.dual(d)?)
    }

    pub fn census(&self, radius: usize) -> Result<Vec<Lattice>> {
        if radius > 0 && self.ctx().d() > 2 {
            return Err(StrataError::Envelope("global census needs d <= 2".into()));
        }
        enumerate_ball_points(&self.sp, radius, |l| self.is_quat_point(l))
    }

    fn check_vertex(&self, v: &VertexLattice, t: u8) -> Result<()> {
        if v.vtype != t || !self.is_tau_stable(&v.lat)? {
            return Err(StrataError::UnsupportedNeighbors { from: v.vtype, to: t });
        }
        if !has_rational_basis(&self.sp, &v.lat) {
            return Err(StrataError::Envelope("vertex basis is not Frobenius-fixed".into()));
        }
        Ok(())
    }

    /// M_{L0} against Y- in L0/pL0.
    pub fn bijection_report_l0(&self, l0: &VertexLattice) -> Result<BijectionReport> {
        self.check_vertex(l0, 0)?;
        let outer = l0.lat.clone();
        let inner = outer.with_scale_shift(1);
        let geom = residue_geometry(&self.sp, &outer, 0)?;
        let res = Residue::new(&self.sp, outer);
        self.bijection(l0, &res, &inner, 3, DlSpace::from_geometry(geom), false)
    }

    /// M_{L2} against Y+ in L2^v/L2.
    pub fn bijection_report_l2(&self, l2: &VertexLattice) -> Result<BijectionReport> {
        self.check_vertex(l2, 2)?;
        let outer = self.sp.dual(&l2.lat)?;
        let geom = residue_geometry(&self.sp, &outer, 1)?;
        let res = Residue::new(&self.sp, outer);
        self.bijection(l2, &res, &l2.lat, 1, DlSpace::from_geometry(geom), true)
    }

    fn bijection(
        &self,
        v: &VertexLattice,
        res: &Residue,
        inner: &Lattice,
        k: usize,
        dl: DlSpace,
        plus: bool,
    ) -> Result<BijectionReport> {
        let mut rep = BijectionReport { vertex: self.fmt(&v.lat), ..Default::default() };
        let mut images = HashSet::new();
        for d in res.lattices_between(inner, k)? {
            rep.candidates += 1;
            let u = res.image(&dl.geom, &d)?;
            let label = if plus { dl.classify_point_plus(&u)? } else { dl.classify_point_minus(&u)? };
            rep.residue.add(label);
            let point = self.is_quat_point(&d)?;
            rep.findings.check(point == (label != StratumLabel::NotInY), || {
                format!("point={point} residue={label:?} at {}", self.fmt(&d))
            });
            if !point {
                continue;
            }
            rep.points += 1;
            images.insert(u);
            let bt = self.bt_label(&d)?;
            *rep.labels.entry(bt.kind().to_string()).or_default() += 1;
            let expected = match (&bt, plus) {
                (BTLabel::Q1 { .. }, _) => Some(StratumLabel::XP1),
                (BTLabel::Q02 { .. }, _) => Some(StratumLabel::XBw1),
                (BTLabel::Q0 { .. }, false) | (BTLabel::Q2 { .. }, true) => Some(StratumLabel::XBw2),
                _ => None,
            };
            rep.findings.check(expected == Some(label), || {
                format!("{} vs {label:?} at {}", bt.kind(), self.fmt(&d))
            });
        }
        rep.injective = images.len() == rep.points;
        Ok(rep)
    }

    /// D -> A D^v maps M_{L0} onto M_{A L0} exchanging Q0 and Q2.
    pub fn duality_findings(&self, l0: &VertexLattice) -> Result<Findings> {
        let mut out = Findings::default();
        let l2 = self.dual_swap(&l0.lat)?;
        out.check(classify_vertex(&self.sp, &l2)? == Some(2), || format!("swap of L0 is {}", self.fmt(&l2)));
        let res = Residue::new(&self.sp, l0.lat.clone());
        for d in res.lattices_between(&l0.lat.with_scale_shift(1), 3)? {
            if !self.is_quat_point(&d)? {
                continue;
            }
            let e = self.dual_swap(&d)?;
            let back = self.dual_swap(&e)?;
            let ok = back == d
                && self.is_quat_point(&e)?
                && self.sp.contains(&e, &l2)?
                && swapped(self.bt_label(&d)?.kind()) == self.bt_label(&e)?.kind();
            out.check(ok, || format!("swap fails at {}", self.fmt(&d)));
        }
        Ok(out)
    }

    /// Pappas, crucial lemma, label partition, full module and superspecial
    /// checks over a list of points.
    pub fn census_report(&self, points: &[Lattice]) -> Result<CensusReport> {
        let mut r = CensusReport { points: points.len(), ..Default::default() };
        for d in points {
            let w = || self.fmt(d);
            let defect = self.pappas_defect(d)?;
            r.max_pappas_defect = r.max_pappas_defect.max(defect);
            r.pappas.check(defect <= 1, || format!("defect {defect} at {}", w()));
            let cr = self.crucial_lattice(d)?;
            *r.crucial_cases.entry(format!("{:?}", cr.case)).or_default() += 1;
            r.crucial.check(cr.sound, || format!("{:?} unsound at {}", cr.case, w()));
            let bt = self.bt_label(d)?;
            *r.labels.entry(bt.kind().to_string()).or_default() += 1;
            let stable = self.is_tau_stable(d)?;
            let mut ok = stable == matches!(bt, BTLabel::Q1 { .. });
            for (l, t) in bt.witnesses() {
                ok &= self.is_tau_stable(l)? && classify_vertex(&self.sp, l)? == Some(t);
            }
            r.partition.check(ok, || format!("{} at {}", bt.kind(), w()));
            r.full_module.check(self.full_module_check(d)?, || w());
            r.superspecial.check(self.full_superspecial(d)? == stable, || w());
        }
        Ok(r)
    }

    /// full_module_check against is_quat_point on ball lattices. Length-3
    /// isotropic candidates are all checked; the rest every `stride`-th.
    pub fn equivalence_scan(&self, stride: usize) -> Result<EquivalenceReport> {
        let ball = Ball::new(&self.sp)?;
        let mut r = EquivalenceReport::default();
        let mut n = 0usize;
        ball.for_each(None, false, |cand| {
            n += 1;
            let iso = cand.length() == 3
                && cand.b.iter().all(|x| cand.a.rows().iter().all(|y| ball.geom.form(x, y) == 0));
            if !iso && n % stride != 0 {
                return Ok(true);
            }
            let l = cand.build()?;
            r.checked += 1;
            let a = self.is_quat_point(&l)?;
            let b = self.full_module_check(&l)?;
            r.points += a as usize;
            r.findings.check(a == b, || format!("point={a} full={b} at {}", self.fmt(&l)));
            Ok(true)
        })?;
        r.enumerated = n;
        Ok(r)
    }

    /// Type-0 strata containing D and type-2 strata contained in D.
    fn vertices_at(&self, d: &Lattice) -> Result<(Vec<Lattice>, Vec<Lattice>)> {
        let sp = &self.sp;
        let dv = sp.dual(d)?;
        let mut up = Vec::new();
        for x in Residue::new(sp, dv.clone()).lattices_between(d, 1)? {
            if classify_vertex(sp, &x)? == Some(0) && self.is_tau_stable(&x)? {
                up.push(x);
            }
        }
        let mut down = Vec::new();
        for x in Residue::new(sp, d.clone()).lattices_between(&dv.with_scale_shift(1), 1)? {
            if classify_vertex(sp, &x)? == Some(2) && self.is_tau_stable(&x)? {
                down.push(x);
            }
        }
        Ok((up, down))
    }

    pub fn intersection_checks(&self, census: &[Lattice]) -> Result<IntersectionReport> {
        let sp = &self.sp;
        let mut r = IntersectionReport::default();
        let set: HashSet<&Lattice> = census.iter().collect();
        let mut s0: BTreeMap<Lattice, BTreeSet<Lattice>> = BTreeMap::new();
        let mut s2: BTreeMap<Lattice, BTreeSet<Lattice>> = BTreeMap::new();
        let mut at = Vec::with_capacity(census.len());
        for d in census {
            let (up, down) = self.vertices_at(d)?;
            for x in &up {
                s0.entry(x.clone()).or_default().insert(d.clone());
            }
            for x in &down {
                s2.entry(x.clone()).or_default().insert(d.clone());
            }
            at.push((up, down));
        }
        r.type0_strata = s0.len();
        r.type2_strata = s2.len();
        let mut seen00 = BTreeSet::new();
        let mut seen22 = BTreeSet::new();
        let mut seen02 = BTreeSet::new();
        for (d, (up, down)) in census.iter().zip(&at) {
            for (i, x) in up.iter().enumerate() {
                for y in &up[i + 1..] {
                    if !seen00.insert((x.clone(), y.clone())) {
                        continue;
                    }
                    let shared: Vec<&Lattice> = s0[x].intersection(&s0[y]).collect();
                    let ok = shared.len() == 1
                        && shared[0] == d
                        && self.is_tau_stable(d)?
                        && sp.intersect(x, y)? == *d
                        && classify_vertex(sp, d)? == Some(1);
                    r.findings.check(ok, || format!("type-0 pair shares {} at {}", shared.len(), self.fmt(d)));
                }
            }
            for (i, x) in down.iter().enumerate() {
                for y in &down[i + 1..] {
                    if !seen22.insert((x.clone(), y.clone())) {
                        continue;
                    }
                    let shared: Vec<&Lattice> = s2[x].intersection(&s2[y]).collect();
                    let ok = shared.len() == 1
                        && shared[0] == d
                        && self.is_tau_stable(d)?
                        && sp.sum(x, y)? == *d
                        && classify_vertex(sp, d)? == Some(1);
                    r.findings.check(ok, || format!("type-2 pair shares {} at {}", shared.len(), self.fmt(d)));
                }
            }
            for x in up {
                for y in down {
                    if !seen02.insert((x.clone(), y.clone())) {
                        continue;
                    }
                    let common: BTreeSet<Lattice> = s0[x].intersection(&s2[y]).cloned().collect();
                    let line: BTreeSet<Lattice> =
                        Residue::new(sp, x.clone()).lattices_between(y, 1)?.into_iter().collect();
                    // lines may leave the ball; inside it they must all be census points
                    let q = self.ctx().q();
                    let inside: BTreeSet<Lattice> = line.iter().filter(|l| set.contains(l)).cloned().collect();
                    let mut ok = line.len() == q + 1 && common == inside;
                    for l in &line {
                        ok = ok && self.is_quat_point(l)?;
                    }
                    r.findings.check(ok, || {
                        format!("(0,2) pair has {} common of {} lines at {}", common.len(), line.len(), self.fmt(d))
                    });
                }
            }
            if self.is_tau_stable(d)? {
                r.type1_vertices += 1;
                let dv = sp.dual(d)?;
                let res = Residue::new(sp, dv);
                let mut n = 0;
                for k in 0..=2 {
                    for e in res.lattices_between(d, k)? {
                        n += self.is_quat_point(&e)? as usize;
                    }
                }
                r.findings.check(n == 1, || format!("M_L1 has {n} points at {}", self.fmt(d)));
            }
        }
        r.pairs00 = seen00.len();
        r.pairs22 = seen22.len();
        r.pairs02 = seen02.len();
        Ok(r)
    }
}

fn swapped(kind: &str) -> &str {
    match kind {
        "Q0" => "Q2",
        "Q2" => "Q0",
        k => k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::vertex;

    #[test]
    fn point_examples() {
        let m = QuatModel::new(3, 2, 6).unwrap();
        let sp = m.space();
        assert!(!m.is_quat_point(&sp.standard_lattice()).unwrap());
        assert!(!m.full_module_check(&sp.standard_lattice()).unwrap());
        let l1 = sp.diag_lattice(&[0, 0, 0, 1]).unwrap();
        assert!(m.is_quat_point(&l1).unwrap());
        assert!(m.full_module_check(&l1).unwrap());
        assert!(m.full_superspecial(&l1).unwrap());
        assert_eq!(m.pappas_defect(&l1).unwrap(), 0);
        assert_eq!(m.crucial_lattice(&l1).unwrap().case, CrucialCase::Stable);
        assert_eq!(m.bt_label(&l1).unwrap(), BTLabel::Q1 { l1: l1.clone() });
        // diag(1,1,p,p) is a type-2 vertex, not a point
        assert!(!m.is_quat_point(&sp.diag_lattice(&[0, 0, 1, 1]).unwrap()).unwrap());
    }

    #[test]
    fn model_invariants() {
        let m = QuatModel::new(3, 2, 6).unwrap();
        let c = m.ctx();
        assert!(m.form_identity_holds());
        let pp = m.pi_full.compose(c, &m.pi_full);
        assert!(pp.mat.iter().enumerate().all(|(i, &e)| e == if i % 9 == 0 { c.from_int(3) } else { c.zero() }));
        let v = m.pi_full.compose(c, &SemilinearOp::new(8, identity_mat(c, 8), -1));
        assert_eq!(v, m.v_full);
        assert!(m.is_tau_stable(&m.space().standard_lattice()).unwrap());
    }

    #[test]
    fn rational_census_is_rational_type_one() {
        let m = QuatModel::new(3, 1, 6).unwrap();
        let census = m.census(1).unwrap();
        assert!(!census.is_empty());
        for d in &census {
            assert_eq!(classify_vertex(m.space(), d).unwrap(), Some(1));
        }
        // and every type-1 lattice in the ball is a point
        let ball = Ball::new(m.space()).unwrap();
        let mut t1 = Vec::new();
        ball.for_each(Some(3), true, |c| {
            let l = c.build()?;
            if classify_vertex(m.space(), &l)? == Some(1) {
                t1.push(l);
            }
            Ok(true)
        })
        .unwrap();
        t1.sort();
        assert_eq!(t1, census);
        assert_eq!(m.census(0).unwrap(), vec![]);
    }

    #[test]
    fn bijection_d1_all_rational() {
        let m = QuatModel::new(3, 1, 6).unwrap();
        let l0 = vertex(m.space(), m.space().standard_lattice()).unwrap().unwrap();
        let r = m.bijection_report_l0(&l0).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.points, 40);
        assert_eq!(r.residue.xp1, 40);
        let l2 = vertex(m.space(), m.dual_swap(&l0.lat).unwrap()).unwrap().unwrap();
        let r2 = m.bijection_report_l2(&l2).unwrap();
        assert!(r2.passed(), "{r2:?}");
        assert_eq!(r2.residue, r.residue);
        assert!(m.duality_findings(&l0).unwrap().ok());
    }
}
