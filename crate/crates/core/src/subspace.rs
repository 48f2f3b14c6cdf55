//! Subspaces of F_q^n (n <= 4) in reduced row echelon form, and the
//! symplectic geometry on them.

use serde::Serialize;

use crate::field::{FiniteField, Fq};

pub const SMAX: usize = 4;
pub type FqVec = [Fq; SMAX];

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FqSubspace {
    n: u8,
    dim: u8,
    rows: [FqVec; SMAX],
}

impl FqSubspace {
    pub fn dim(&self) -> usize {
        self.dim as usize
    }
    pub fn ambient(&self) -> usize {
        self.n as usize
    }
    pub fn rows(&self) -> &[FqVec] {
        &self.rows[..self.dim as usize]
    }
    pub fn format(&self) -> String {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let es: Vec<String> = r[..self.n as usize].iter().map(|c| c.to_string()).collect();
                format!("[{}]", es.join(" "))
            })
            .collect();
        format!("<{}>", rows.join(""))
    }
}

impl Serialize for FqSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.format())
    }
}

/// F_q^n with an alternating form given by `gram`.
#[derive(Clone, Debug)]
pub struct FqGeometry {
    pub field: FiniteField,
    n: usize,
    gram: [[Fq; SMAX]; SMAX],
}

impl FqGeometry {
    /// F_q^4 with the antidiagonal form (e_i, e_{3-i}) = +1 for i < 2.
    pub fn standard(field: FiniteField) -> FqGeometry {
        let m1 = field.neg(1);
        let mut gram = [[0; SMAX]; SMAX];
        gram[0][3] = 1;
        gram[1][2] = 1;
        gram[2][1] = m1;
        gram[3][0] = m1;
        FqGeometry { field, n: 4, gram }
    }

    pub fn with_gram(field: FiniteField, n: usize, gram: [[Fq; SMAX]; SMAX]) -> FqGeometry {
        FqGeometry { field, n, gram }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self, x: &FqVec, y: &FqVec) -> Fq {
        let f = &self.field;
        let mut s = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                let g = self.gram[i][j];
                if g != 0 && y[j] != 0 {
                    s = f.add(s, f.mul(f.mul(x[i], g), y[j]));
                }
            }
        }
        s
    }

    pub fn frob_vec(&self, x: &FqVec, k: usize) -> FqVec {
        let mut out = *x;
        for v in out[..self.n].iter_mut() {
            *v = self.field.frob_pow(*v, k);
        }
        out
    }

    /// Canonical span of arbitrary vectors.
    pub fn span(&self, vecs: &[FqVec]) -> FqSubspace {
        let f = &self.field;
        let n = self.n;
        let mut rows: Vec<FqVec> = vecs.to_vec();
        let mut r = 0;
        for col in 0..n {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
            rows.swap(r, piv);
            let inv = f.inv(rows[r][col]);
            for v in rows[r][..n].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let k = rows[i][col];
                    let pr = rows[r];
                    for c in 0..n {
                        rows[i][c] = f.sub(rows[i][c], f.mul(k, pr[c]));
                    }
                }
            }
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let mut out = FqSubspace { n: n as u8, dim: r as u8, rows: [[0; SMAX]; SMAX] };
        out.rows[..r].copy_from_slice(&rows[..r]);
        out
    }

    pub fn zero(&self) -> FqSubspace {
        FqSubspace { n: self.n as u8, dim: 0, rows: [[0; SMAX]; SMAX] }
    }

    pub fn whole(&self) -> FqSubspace {
        let vecs: Vec<FqVec> = (0..self.n)
            .map(|i| {
                let mut v = [0; SMAX];
                v[i] = 1;
                v
            })
            .collect();
        self.span(&vecs)
    }

    /// Null space {y : (rows) . y = 0} where rows are linear functionals.
    fn kernel(&self, funcs: &[FqVec]) -> FqSubspace {
        let f = &self.field;
        let n = self.n;
        let ech = self.span(funcs);
        let mut pivots = Vec::new();
        for row in ech.rows() {
            pivots.push(row.iter().position(|&c| c != 0).unwrap());
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = [0; SMAX];
            v[free] = 1;
            for (row, &pc) in ech.rows().iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            basis.push(v);
        }
        self.span(&basis)
    }

    pub fn perp(&self, u: &FqSubspace) -> FqSubspace {
        let f = &self.field;
        let funcs: Vec<FqVec> = u
            .rows()
            .iter()
            .map(|x| {
                let mut g = [0; SMAX];
                for j in 0..self.n {
                    let mut s = 0;
                    for i in 0..self.n {
                        s = f.add(s, f.mul(x[i], self.gram[i][j]));
                    }
                    g[j] = s;
                }
                g
            })
            .collect();
        self.kernel(&funcs)
    }

    pub fn sum(&self, a: &FqSubspace, b: &FqSubspace) -> FqSubspace {
        let mut v: Vec<FqVec> = a.rows().to_vec();
        v.extend_from_slice(b.rows());
        self.span(&v)
    }

    pub fn intersect(&self, a: &FqSubspace, b: &FqSubspace) -> FqSubspace {
        self.perp(&self.sum(&self.perp(a), &self.perp(b)))
    }

    pub fn contains(&self, outer: &FqSubspace, inner: &FqSubspace) -> bool {
        self.sum(outer, inner).dim == outer.dim
    }

    /// Entrywise x -> x^(p^k), i.e. Frobenius relative to F_{p^k}.
    pub fn frobenius_subspace(&self, u: &FqSubspace, k: usize) -> FqSubspace {
        let v: Vec<FqVec> = u.rows().iter().map(|x| self.frob_vec(x, k)).collect();
        self.span(&v)
    }

    pub fn is_totally_isotropic(&self, u: &FqSubspace) -> bool {
        let r = u.rows();
        r.iter().all(|x| r.iter().all(|y| self.form(x, y) == 0))
    }

    /// Every dim-k subspace, sorted lexicographically by canonical matrix.
    pub fn all_subspaces(&self, k: usize) -> Vec<FqSubspace> {
        let n = self.n;
        let q = self.field.q() as Fq;
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let pivots: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let mut free = Vec::new();
            for (r, &pc) in pivots.iter().enumerate() {
                for c in pc + 1..n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            let mut vals = vec![0 as Fq; free.len()];
            loop {
                let mut s = FqSubspace { n: n as u8, dim: k as u8, rows: [[0; SMAX]; SMAX] };
                for (r, &pc) in pivots.iter().enumerate() {
                    s.rows[r][pc] = 1;
                }
                for (&(r, c), &v) in free.iter().zip(&vals) {
                    s.rows[r][c] = v;
                }
                out.push(s);
                let mut i = 0;
                while i < vals.len() {
                    vals[i] += 1;
                    if vals[i] < q {
                        break;
                    }
                    vals[i] = 0;
                    i += 1;
                }
                if i == vals.len() {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn geom(p: u32, d: usize) -> FqGeometry {
        FqGeometry::standard(FiniteField::from_ring(&make_ring(p, d, 1).unwrap()))
    }

    /// Gaussian binomial count of k-subspaces of F_q^n.
    fn gauss(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        let g = geom(3, 2);
        for k in 0..=4 {
            assert_eq!(g.all_subspaces(k).len() as u64, gauss(4, k as u32, 9));
        }
    }

    #[test]
    fn perp_examples() {
        let g = geom(3, 2);
        assert_eq!(g.perp(&g.zero()), g.whole());
        for l in g.all_subspaces(1) {
            assert!(g.contains(&g.perp(&l), &l));
        }
        for u in g.all_subspaces(2).into_iter().step_by(13) {
            assert_eq!(g.perp(&g.perp(&u)), u);
            assert_eq!(g.perp(&u).dim(), 2);
        }
        // <e1, e2> is Lagrangian for the antidiagonal form; <e1, e4> is not
        let e = |i: usize| {
            let mut v = [0; SMAX];
            v[i] = 1;
            v
        };
        let p12 = g.span(&[e(0), e(1)]);
        assert_eq!(g.perp(&p12), p12);
        let p14 = g.span(&[e(0), e(3)]);
        assert_eq!(g.perp(&p14), g.span(&[e(1), e(2)]));
    }

    #[test]
    fn frobenius_subspace_examples() {
        let g = geom(3, 2);
        for u in g.all_subspaces(2) {
            let rational = u.rows().iter().all(|r| r.iter().all(|&c| c < 3));
            if rational {
                assert_eq!(g.frobenius_subspace(&u, 1), u);
            }
            assert_eq!(g.frobenius_subspace(&g.frobenius_subspace(&u, 1), 1), u);
        }
        // x = code 3 is the ring generator; sigma(x) = -x = code 6
        let u = g.span(&[[1, 3, 0, 0]]);
        let su = g.frobenius_subspace(&u, 1);
        assert_eq!(su, g.span(&[[1, 6, 0, 0]]));
        assert_ne!(su, u);
        for u in g.all_subspaces(1).into_iter().step_by(4).take(200) {
            assert_eq!(g.frobenius_subspace(&g.perp(&u), 1), g.perp(&g.frobenius_subspace(&u, 1)));
        }
    }
}
