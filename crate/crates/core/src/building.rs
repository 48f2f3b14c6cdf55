//! Vertex lattices of the C~2 building and their incidences.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Result, StrataError};
use crate::field::{FiniteField, Fq};
use crate::lattice::{Lattice, SemilinearOp, SympSpace};
use crate::matrix::{zero_col, Col};
use crate::subspace::{FqGeometry, FqSubspace, FqVec, SMAX};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexLattice {
    pub lat: Lattice,
    pub vtype: u8,
}

#[derive(Clone, Debug)]
pub struct TypePair02 {
    pub l0: VertexLattice,
    pub l2: VertexLattice,
}

pub fn classify_vertex(sp: &SympSpace, l: &Lattice) -> Result<Option<u8>> {
    let dual = sp.dual(l)?;
    if *l == dual {
        return Ok(Some(0));
    }
    let pd = dual.with_scale_shift(1);
    if *l == pd {
        return Ok(Some(2));
    }
    if sp.index_if_contained(l, &dual)? == Some(2) && sp.index_if_contained(&pd, l)? == Some(2) {
        return Ok(Some(1));
    }
    Ok(None)
}

pub fn vertex(sp: &SympSpace, l: Lattice) -> Result<Option<VertexLattice>> {
    Ok(classify_vertex(sp, &l)?.map(|vtype| VertexLattice { lat: l, vtype }))
}

/// The residue space outer / p*outer in the coordinates of outer's canonical
/// basis.
pub struct Residue<'a> {
    sp: &'a SympSpace,
    pub outer: Lattice,
    pub field: FiniteField,
}

impl<'a> Residue<'a> {
    pub fn new(sp: &'a SympSpace, outer: Lattice) -> Residue<'a> {
        Residue { sp, outer, field: FiniteField::from_ring(sp.ctx()) }
    }

    /// Residue coordinates of a vector given at scale `scale`.
    pub fn coords(&self, v: &Col, scale: i32) -> Option<FqVec> {
        let c = self.sp.ctx();
        let shift = scale - self.outer.scale();
        if shift < 0 {
            return None;
        }
        let mut w = *v;
        for e in w[..self.sp.n()].iter_mut() {
            *e = c.mul_p(*e, shift as u32);
        }
        let k = self.sp.coords(&self.outer, &w)?;
        let mut out = [0 as Fq; SMAX];
        for i in 0..self.sp.n() {
            out[i] = c.residue_code(k[i]) as Fq;
        }
        Some(out)
    }

    /// Image of an inner lattice (containing p*outer) in outer/p*outer.
    pub fn image(&self, geom: &FqGeometry, inner: &Lattice) -> Result<FqSubspace> {
        let vecs: Option<Vec<FqVec>> = (0..self.sp.n()).map(|j| self.coords(&inner.column(j), inner.scale())).collect();
        vecs.map(|v| geom.span(&v)).ok_or(StrataError::NotContained)
    }

    /// Lattice p*outer + lift(T).
    pub fn lift(&self, t: &FqSubspace) -> Result<Lattice> {
        let c = self.sp.ctx();
        let n = self.sp.n();
        let mut gens: Vec<Col> = (0..n)
            .map(|j| {
                let mut col = self.outer.column(j);
                for e in col[..n].iter_mut() {
                    *e = c.mul_p(*e, 1);
                }
                col
            })
            .collect();
        for row in t.rows() {
            let mut v = zero_col();
            for (j, &coef) in row[..n].iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                let k = c.digit_lift(coef as u32);
                let col = self.outer.column(j);
                for r in 0..n {
                    v[r] = c.add(v[r], c.mul(k, col[r]));
                }
            }
            gens.push(v);
        }
        self.sp.lattice_from_columns(gens, self.outer.scale())
    }

    /// Every lattice X with inner <= X <= outer and dim X/inner = k, where
    /// p*outer <= inner.
    pub fn lattices_between(&self, inner: &Lattice, k: usize) -> Result<Vec<Lattice>> {
        let geom = FqGeometry::with_gram(self.field.clone(), self.sp.n(), [[0; SMAX]; SMAX]);
        let base = self.image(&geom, inner)?;
        let mut out = Vec::new();
        for t in geom.all_subspaces(base.dim() + k) {
            if geom.contains(&t, &base) {
                out.push(self.lift(&t)?);
            }
        }
        Ok(out)
    }
}

pub fn neighbors(sp: &SympSpace, v: &VertexLattice, target: u8) -> Result<Vec<VertexLattice>> {
    let l = &v.lat;
    let dual = || sp.dual(l);
    let (outer, inner, k) = match (v.vtype, target) {
        (1, 0) => (dual()?, l.clone(), 1),
        (1, 2) => (l.clone(), dual()?.with_scale_shift(1), 1),
        (0, 1) => (l.clone(), l.with_scale_shift(1), 3),
        (0, 2) => (l.clone(), l.with_scale_shift(1), 2),
        (2, 1) => (l.with_scale_shift(-1), l.clone(), 1),
        (2, 0) => (l.with_scale_shift(-1), l.clone(), 2),
        (from, to) => return Err(StrataError::UnsupportedNeighbors { from, to }),
    };
    let res = Residue::new(sp, outer);
    let mut out = Vec::new();
    for x in res.lattices_between(&inner, k)? {
        if classify_vertex(sp, &x)? == Some(target) {
            out.push(VertexLattice { lat: x, vtype: target });
        }
    }
    out.sort();
    Ok(out)
}

/// u, v incident iff p^(k+1) v <= u <= p^k v for some k, or the same with
/// the roles swapped.
pub fn incident(sp: &SympSpace, u: &Lattice, v: &Lattice) -> Result<bool> {
    for (a, b) in [(u, v), (v, u)] {
        for k in -1..=1 {
            let top = b.with_scale_shift(k);
            let bottom = b.with_scale_shift(k + 1);
            if sp.contains(&top, a)? && sp.contains(a, &bottom)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, Default)]
pub struct Ball {
    pub nodes: BTreeMap<VertexLattice, usize>,
    pub edges: BTreeSet<(VertexLattice, VertexLattice)>,
}

impl Ball {
    pub fn count_by_type(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for v in self.nodes.keys() {
            c[v.vtype as usize] += 1;
        }
        c
    }
}

fn all_neighbors(sp: &SympSpace, v: &VertexLattice) -> Result<Vec<VertexLattice>> {
    let mut out = Vec::new();
    for t in 0..3u8 {
        if t != v.vtype {
            out.extend(neighbors(sp, v, t)?);
        }
    }
    Ok(out)
}

/// Breadth-first ball; node values are distances from the base.
pub fn enumerate_ball(sp: &SympSpace, base: &VertexLattice, radius: usize) -> Result<Ball> {
    if radius > 2 {
        return Err(StrataError::Envelope(format!("ball radius {radius} exceeds 2")));
    }
    let mut ball = Ball::default();
    ball.nodes.insert(base.clone(), 0);
    let mut queue = VecDeque::from([base.clone()]);
    while let Some(v) = queue.pop_front() {
        let dist = ball.nodes[&v];
        if dist == radius {
            continue;
        }
        for w in all_neighbors(sp, &v)? {
            let key = if v < w { (v.clone(), w.clone()) } else { (w.clone(), v.clone()) };
            ball.edges.insert(key);
            if !ball.nodes.contains_key(&w) {
                ball.nodes.insert(w.clone(), dist + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(ball)
}

/// Depth-first traversal that revisits a node whenever it is reached by a
/// shorter path; used to cross-check the breadth-first node set.
pub fn enumerate_ball_dfs(sp: &SympSpace, base: &VertexLattice, radius: usize) -> Result<BTreeSet<VertexLattice>> {
    let mut best: BTreeMap<VertexLattice, usize> = BTreeMap::new();
    let mut stack = vec![(base.clone(), 0usize)];
    let mut cache: BTreeMap<VertexLattice, Vec<VertexLattice>> = BTreeMap::new();
    while let Some((v, dist)) = stack.pop() {
        if best.get(&v).is_some_and(|&d| d <= dist) {
            continue;
        }
        best.insert(v.clone(), dist);
        if dist == radius {
            continue;
        }
        if !cache.contains_key(&v) {
            cache.insert(v.clone(), all_neighbors(sp, &v)?);
        }
        for w in cache[&v].iter().rev() {
            stack.push((w.clone(), dist + 1));
        }
    }
    Ok(best.into_keys().collect())
}

pub fn pair_check(sp: &SympSpace, l0: &VertexLattice, l2: &VertexLattice, pi: &SemilinearOp) -> Result<bool> {
    if l0.vtype != 0 || l2.vtype != 2 {
        return Err(StrataError::UnsupportedNeighbors { from: l0.vtype, to: l2.vtype });
    }
    Ok(sp.apply_semilinear(pi, &l0.lat)? == l2.lat)
}

/// Pi = [[0, I], [p I, 0]] with the given twist.
pub fn standard_pi(sp: &SympSpace, twist: i64) -> SemilinearOp {
    let c = sp.ctx();
    let n = sp.n();
    let h = n / 2;
    let mut mat = vec![c.zero(); n * n];
    for i in 0..h {
        mat[(h + i) * n + i] = c.one();
        mat[i * n + h + i] = c.from_int(c.p() as i64);
    }
    SemilinearOp::new(n, mat, twist)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BallSummary {
    pub nodes: usize,
    pub edges: usize,
    pub by_type: [usize; 3],
}

impl Ball {
    pub fn summary(&self) -> BallSummary {
        BallSummary { nodes: self.nodes.len(), edges: self.edges.len(), by_type: self.count_by_type() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;
    use std::sync::Arc;

    fn space(p: u32, d: usize, m: u32) -> SympSpace {
        SympSpace::standard(Arc::new(make_ring(p, d, m).unwrap()), 4)
    }

    /// Brute-force count of Lagrangian planes of F_p^4.
    fn lagrangian_count(p: u32) -> usize {
        let g = FqGeometry::standard(FiniteField::from_ring(&make_ring(p, 1, 1).unwrap()));
        g.all_subspaces(2).into_iter().filter(|t| g.perp(t) == *t).count()
    }

    #[test]
    fn classify_examples() {
        let sp = space(3, 1, 6);
        let l = sp.standard_lattice();
        assert_eq!(classify_vertex(&sp, &l).unwrap(), Some(0));
        // p L_std is not a vertex lattice under the strict index patterns
        assert_eq!(classify_vertex(&sp, &l.with_scale_shift(1)).unwrap(), None);
        // <e1, e2, p e3, p e4> equals p times its dual: type 2
        assert_eq!(classify_vertex(&sp, &sp.diag_lattice(&[0, 0, 1, 1]).unwrap()).unwrap(), Some(2));
        // <e1, e2, e3, p e4> has dual <p^-1 e1, e2, e3, e4>: type 1
        assert_eq!(classify_vertex(&sp, &sp.diag_lattice(&[0, 0, 0, 1]).unwrap()).unwrap(), Some(1));
        assert_eq!(classify_vertex(&sp, &sp.diag_lattice(&[0, 0, 0, 2]).unwrap()).unwrap(), None);
    }

    #[test]
    fn type_one_has_p_plus_one_neighbors_each_side() {
        for p in [3, 5] {
            let sp = space(p, 1, 6);
            let v = vertex(&sp, sp.diag_lattice(&[0, 0, 0, 1]).unwrap()).unwrap().unwrap();
            let n0 = neighbors(&sp, &v, 0).unwrap();
            let n2 = neighbors(&sp, &v, 2).unwrap();
            assert_eq!(n0.len(), p as usize + 1);
            assert_eq!(n2.len(), p as usize + 1);
            for w in n0.iter().chain(&n2) {
                assert_eq!(classify_vertex(&sp, &w.lat).unwrap(), Some(w.vtype));
                assert!(incident(&sp, &v.lat, &w.lat).unwrap());
            }
            assert!(n0.iter().all(|w| sp.contains(&w.lat, &v.lat).unwrap()));
            assert!(n2.iter().all(|w| sp.contains(&v.lat, &w.lat).unwrap()));
        }
    }

    #[test]
    fn type_zero_neighbor_counts() {
        let sp = space(3, 1, 6);
        let v = vertex(&sp, sp.standard_lattice()).unwrap().unwrap();
        let n1 = neighbors(&sp, &v, 1).unwrap();
        let n2 = neighbors(&sp, &v, 2).unwrap();
        assert_eq!(n1.len(), 40);
        assert_eq!(n2.len(), lagrangian_count(3));
        assert_eq!(n2.len(), 40);
        assert!(neighbors(&sp, &v, 0).is_err());
    }

    #[test]
    fn ball_examples() {
        let sp = space(3, 1, 6);
        let v = vertex(&sp, sp.standard_lattice()).unwrap().unwrap();
        let b0 = enumerate_ball(&sp, &v, 0).unwrap();
        assert_eq!(b0.nodes.len(), 1);
        let b1 = enumerate_ball(&sp, &v, 1).unwrap();
        assert_eq!(b1.count_by_type(), [1, 40, 40]);
        let dfs: BTreeSet<_> = enumerate_ball_dfs(&sp, &v, 1).unwrap();
        assert_eq!(dfs, b1.nodes.keys().cloned().collect());
        for (a, b) in &b1.edges {
            assert!(incident(&sp, &a.lat, &b.lat).unwrap());
            assert!(incident(&sp, &b.lat, &a.lat).unwrap());
        }
        assert!(enumerate_ball(&sp, &v, 3).is_err());
    }

    #[test]
    fn pair_check_examples() {
        let sp = space(3, 2, 6);
        let pi = standard_pi(&sp, 1);
        let l0 = vertex(&sp, sp.standard_lattice()).unwrap().unwrap();
        let img = sp.apply_semilinear(&pi, &l0.lat).unwrap();
        let l2 = vertex(&sp, img).unwrap().unwrap();
        assert_eq!(l2.vtype, 2);
        assert!(pair_check(&sp, &l0, &l2, &pi).unwrap());
        let others = neighbors(&sp, &l0, 2).unwrap();
        let failing = others.iter().filter(|w| !pair_check(&sp, &l0, w, &pi).unwrap()).count();
        assert_eq!(failing, others.len() - 1);
        let pipi = pi.compose(sp.ctx(), &pi);
        for w in others.iter().take(20) {
            // at d = 2 the square of Pi is p times sigma^2 = p
            assert_eq!(sp.apply_semilinear(&pipi, &w.lat).unwrap(), w.lat.with_scale_shift(1));
        }
    }
}
