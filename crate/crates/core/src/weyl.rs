//! The extended affine Weyl group of type C~2 acting on the apartment R^2,
//! in the adjoint realization W_a x {1, rho}.
//!
//! Base alcove: 1/2 > x1 > x2 > 0 with vertices (0,0) [type 0], (1/2,0)
//! [type 1], (1/2,1/2) [type 2]. Affine root hyperplanes are a(x) = k for
//! a in {2e1, 2e2, e1+e2, e1-e2}, k in Z. Points are handled in units of 1/12
//! and translations in units of 1/2, so everything stays integral.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

/// x -> fin.x + trans2/2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineWeylElem {
    fin: [[i32; 2]; 2],
    trans2: [i32; 2],
}

const UNIT: i64 = 12;
/// Barycenter of the base alcove, (1/3, 1/6).
const BARY: [i64; 2] = [4, 2];
const ROOTS: [[i64; 2]; 4] = [[2, 0], [0, 2], [1, 1], [1, -1]];
const COROOTS: [[i32; 2]; 4] = [[1, 0], [0, 1], [1, 1], [1, -1]];

impl AffineWeylElem {
    pub fn new(fin: [[i32; 2]; 2], trans2: [i32; 2]) -> AffineWeylElem {
        AffineWeylElem { fin, trans2 }
    }

    pub fn identity() -> AffineWeylElem {
        Self::new([[1, 0], [0, 1]], [0, 0])
    }

    /// Translation by (a/2, b/2).
    pub fn translation(a: i32, b: i32) -> AffineWeylElem {
        Self::new([[1, 0], [0, 1]], [a, b])
    }

    pub fn fin(&self) -> [[i32; 2]; 2] {
        self.fin
    }

    pub fn trans2(&self) -> [i32; 2] {
        self.trans2
    }

    /// self o other
    pub fn compose(&self, o: &AffineWeylElem) -> AffineWeylElem {
        let a = &self.fin;
        let b = &o.fin;
        let mut fin = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                fin[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let t = o.trans2;
        let trans2 = [
            a[0][0] * t[0] + a[0][1] * t[1] + self.trans2[0],
            a[1][0] * t[0] + a[1][1] * t[1] + self.trans2[1],
        ];
        Self::new(fin, trans2)
    }

    pub fn inverse(&self) -> AffineWeylElem {
        // signed permutation matrices are orthogonal
        let a = self.fin;
        let fin = [[a[0][0], a[1][0]], [a[0][1], a[1][1]]];
        let t = self.trans2;
        let tr = [-(fin[0][0] * t[0] + fin[0][1] * t[1]), -(fin[1][0] * t[0] + fin[1][1] * t[1])];
        Self::new(fin, tr)
    }

    /// Action on a point in units of 1/12.
    pub fn apply(&self, x: [i64; 2]) -> [i64; 2] {
        let a = &self.fin;
        let s = UNIT / 2;
        [
            a[0][0] as i64 * x[0] + a[0][1] as i64 * x[1] + s * self.trans2[0] as i64,
            a[1][0] as i64 * x[0] + a[1][1] as i64 * x[1] + s * self.trans2[1] as i64,
        ]
    }

    /// Component in Omega = {1, rho}: half-integral translation part.
    pub fn omega(&self) -> bool {
        self.trans2[0].rem_euclid(2) == 1
    }

    pub fn in_affine_weyl(&self) -> bool {
        self.trans2[0] % 2 == 0 && self.trans2[1] % 2 == 0
    }
}

impl fmt::Display for AffineWeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = reduced_word(self);
        let mut s: String = w.letters.iter().map(|i| format!("s{i}")).collect();
        if w.omega {
            s.push_str("rho");
        }
        if s.is_empty() {
            s.push('1');
        }
        f.write_str(&s)
    }
}

impl Serialize for AffineWeylElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// s0: x1 -> 1 - x1; s1: swap; s2: x2 -> -x2.
pub fn simple_reflection(i: u8) -> AffineWeylElem {
    match i {
        0 => AffineWeylElem::new([[-1, 0], [0, 1]], [2, 0]),
        1 => AffineWeylElem::new([[0, 1], [1, 0]], [0, 0]),
        2 => AffineWeylElem::new([[1, 0], [0, -1]], [0, 0]),
        _ => panic!("simple reflection index {i} out of range"),
    }
}

pub fn simple_reflections() -> [AffineWeylElem; 3] {
    [simple_reflection(0), simple_reflection(1), simple_reflection(2)]
}

/// (x1, x2) -> (1/2 - x2, 1/2 - x1).
pub fn rho_element() -> AffineWeylElem {
    AffineWeylElem::new([[0, -1], [-1, 0]], [1, 1])
}

/// Vertices of the base alcove by type, in units of 1/12.
pub fn base_vertices() -> [[i64; 2]; 3] {
    [[0, 0], [6, 0], [6, 6]]
}

/// Number of root hyperplanes strictly between two generic points.
fn separating(x: [i64; 2], y: [i64; 2]) -> u32 {
    ROOTS
        .iter()
        .map(|r| {
            let a = r[0] * x[0] + r[1] * x[1];
            let b = r[0] * y[0] + r[1] * y[1];
            (a.div_euclid(UNIT) - b.div_euclid(UNIT)).unsigned_abs() as u32
        })
        .sum()
}

pub fn length(w: &AffineWeylElem) -> u32 {
    separating(BARY, w.apply(BARY))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedWord {
    pub letters: Vec<u8>,
    pub omega: bool,
}

pub fn from_word(letters: &[u8], omega: bool) -> AffineWeylElem {
    let mut w = AffineWeylElem::identity();
    for &i in letters {
        w = w.compose(&simple_reflection(i));
    }
    if omega {
        w = w.compose(&rho_element());
    }
    w
}

/// Alcove walk from the base alcove to w(base), crossing the lowest-indexed
/// separating wall each step.
pub fn reduced_word(w: &AffineWeylElem) -> ReducedWord {
    let target = w.apply(BARY);
    let mut g = AffineWeylElem::identity();
    let mut letters = Vec::new();
    let mut dist = separating(BARY, target);
    while dist > 0 {
        let (i, h, dd) = (0..3u8)
            .map(|i| {
                let h = g.compose(&simple_reflection(i));
                (i, h, separating(h.apply(BARY), target))
            })
            .find(|&(_, _, dd)| dd < dist)
            .expect("some wall separates distinct alcoves");
        letters.push(i);
        g = h;
        dist = dd;
    }
    ReducedWord { letters, omega: w.omega() }
}

/// The W_a-part u rho^-eps.
fn affine_part(w: &AffineWeylElem) -> AffineWeylElem {
    if w.omega() {
        w.compose(&rho_element())
    } else {
        *w
    }
}

/// Bruhat order via property Z along a reduced word of w.
pub fn bruhat_leq(u: &AffineWeylElem, w: &AffineWeylElem) -> bool {
    if u.omega() != w.omega() {
        return false;
    }
    let mut u = affine_part(u);
    let wa = affine_part(w);
    for &i in reduced_word(&wa).letters.iter().rev() {
        let us = u.compose(&simple_reflection(i));
        if length(&us) < length(&u) {
            u = us;
        }
    }
    u == AffineWeylElem::identity()
}

/// All products of subwords of a reduced word of w (same Omega part).
pub fn subword_products(w: &AffineWeylElem) -> BTreeSet<AffineWeylElem> {
    let rw = reduced_word(w);
    let n = rw.letters.len();
    (0u32..1 << n)
        .map(|mask| {
            let sub: Vec<u8> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| rw.letters[k]).collect();
            from_word(&sub, rw.omega)
        })
        .collect()
}

/// Subword criterion, exhaustive.
pub fn bruhat_leq_subword(u: &AffineWeylElem, w: &AffineWeylElem) -> bool {
    u.omega() == w.omega() && subword_products(w).contains(u)
}

/// Elements of length <= max_len in both Omega cosets.
pub fn ball(max_len: u32) -> Vec<AffineWeylElem> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for w in [AffineWeylElem::identity(), rho_element()] {
        seen.insert(w);
        queue.push_back(w);
    }
    while let Some(w) = queue.pop_front() {
        for i in 0..3 {
            let v = simple_reflection(i).compose(&w);
            if length(&v) <= max_len && seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by_key(|w| (length(w), *w));
    out
}

/// r w for every affine reflection r whose hyperplane separates the base
/// alcove from w(base): the elements one reflection below w.
pub fn reflection_drops(w: &AffineWeylElem) -> Vec<AffineWeylElem> {
    let y = w.apply(BARY);
    let mut out = Vec::new();
    for (r, cv) in ROOTS.iter().zip(COROOTS) {
        let a = (r[0] * BARY[0] + r[1] * BARY[1]).div_euclid(UNIT);
        let b = (r[0] * y[0] + r[1] * y[1]).div_euclid(UNIT);
        let lin = [
            [1 - 2 * r[0] as i32 * cv[0] / 2, -(r[1] as i32) * cv[0]],
            [-(r[0] as i32) * cv[1], 1 - 2 * r[1] as i32 * cv[1] / 2],
        ];
        for k in a.min(b) + 1..=a.max(b) {
            let k = k as i32;
            let refl = AffineWeylElem::new(lin, [2 * k * cv[0], 2 * k * cv[1]]);
            out.push(refl.compose(w));
        }
    }
    out
}

/// t_{x(lambda)} for lambda = (1/2, 1/2), x in W0.
pub fn maximal_translations() -> Vec<AffineWeylElem> {
    let mut v: Vec<_> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .map(|&(a, b)| AffineWeylElem::translation(a, b))
        .collect();
    v.sort();
    v
}

/// Adm(mu) by filtering the length-3 ball with bruhat_leq.
pub fn adm_set() -> Vec<AffineWeylElem> {
    let maxes = maximal_translations();
    let mut out: Vec<_> = ball(3)
        .into_iter()
        .filter(|u| maxes.iter().any(|t| bruhat_leq(u, t)))
        .collect();
    out.sort_by_key(|w| (length(w), *w));
    out
}

/// Adm(mu) as the union of subword products of the maximal elements.
pub fn adm_set_by_subwords() -> Vec<AffineWeylElem> {
    let set: BTreeSet<_> = maximal_translations().iter().flat_map(subword_products).collect();
    let mut out: Vec<_> = set.into_iter().collect();
    out.sort_by_key(|w| (length(w), *w));
    out
}

/// Elements of `set` not strictly below another element of it.
pub fn maximal_elements(set: &[AffineWeylElem]) -> Vec<AffineWeylElem> {
    let mut out: Vec<_> = set
        .iter()
        .filter(|u| !set.iter().any(|w| w != *u && bruhat_leq(u, w)))
        .copied()
        .collect();
    out.sort();
    out
}

pub fn in_min_coset_reps(w: &AffineWeylElem, k: &[u8]) -> bool {
    let l = length(w);
    k.iter().all(|&i| length(&simple_reflection(i).compose(w)) > l)
}

/// The finite parabolic subgroup W_K.
pub fn parabolic_subgroup(k: &[u8]) -> Vec<AffineWeylElem> {
    let mut seen = BTreeSet::from([AffineWeylElem::identity()]);
    let mut queue = VecDeque::from([AffineWeylElem::identity()]);
    while let Some(w) = queue.pop_front() {
        for &i in k {
            let v = simple_reflection(i).compose(&w);
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().collect()
}

/// w is the strict length minimum of W_K w.
pub fn is_coset_minimum_brute(w: &AffineWeylElem, wk: &[AffineWeylElem]) -> bool {
    let l = length(w);
    wk.iter().all(|x| *x == AffineWeylElem::identity() || length(&x.compose(w)) > l)
}

/// EO^K(mu): minimal representatives in ^K W whose double coset
/// W_K w W_K meets Adm(mu).
pub fn eo_set(k: &[u8]) -> Vec<AffineWeylElem> {
    let wk = parabolic_subgroup(k);
    let mut dbl = BTreeSet::new();
    for a in adm_set() {
        for x in &wk {
            for y in &wk {
                dbl.insert(x.compose(&a).compose(y));
            }
        }
    }
    let mut out: Vec<_> = dbl.into_iter().filter(|w| in_min_coset_reps(w, k)).collect();
    out.sort_by_key(|w| (length(w), *w));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Quaternionic,
    Paramodular,
}

/// Frobenius on the affine Dynkin diagram 0 - 1 - 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynkinAction {
    pub perm: [u8; 3],
    pub case: Case,
}

impl DynkinAction {
    pub fn of(case: Case) -> DynkinAction {
        let perm = match case {
            Case::Quaternionic => [2, 1, 0],
            Case::Paramodular => [0, 1, 2],
        };
        DynkinAction { perm, case }
    }

    /// rho-conjugation after sigma.
    pub fn composite(&self) -> [u8; 3] {
        let r = rho_permutation();
        [r[self.perm[0] as usize], r[self.perm[1] as usize], r[self.perm[2] as usize]]
    }
}

/// i -> j where rho s_i rho^-1 = s_j.
pub fn rho_permutation() -> [u8; 3] {
    let rho = rho_element();
    let ri = rho.inverse();
    let mut out = [0; 3];
    for i in 0..3u8 {
        let c = rho.compose(&simple_reflection(i)).compose(&ri);
        out[i as usize] = (0..3u8).find(|&j| simple_reflection(j) == c).expect("rho permutes generators");
    }
    out
}

fn orbit_closure(set: &BTreeSet<u8>, perm: [u8; 3]) -> BTreeSet<u8> {
    let mut out = set.clone();
    loop {
        let next: BTreeSet<u8> = out.iter().map(|&i| perm[i as usize]).collect();
        let before = out.len();
        out.extend(next);
        if out.len() == before {
            return out;
        }
    }
}

/// supp_sigma(w) for w = w_a rho.
pub fn sigma_support(w: &AffineWeylElem, act: &DynkinAction) -> BTreeSet<u8> {
    let supp: BTreeSet<u8> = reduced_word(&affine_part(w)).letters.into_iter().collect();
    orbit_closure(&supp, act.composite())
}

pub fn is_sigma_coxeter(w: &AffineWeylElem, act: &DynkinAction) -> bool {
    let supp = sigma_support(w, act);
    if supp.len() == 3 {
        return false;
    }
    let perm = act.composite();
    let mut orbits = 0;
    let mut left = supp.clone();
    while let Some(&i) = left.iter().next() {
        for j in orbit_closure(&BTreeSet::from([i]), perm) {
            left.remove(&j);
        }
        orbits += 1;
    }
    length(&affine_part(w)) == orbits
}

/// The unique node outside K.
fn outside(k: &[u8]) -> u8 {
    let out: Vec<u8> = (0..3).filter(|i| !k.contains(i)).collect();
    assert_eq!(out.len(), 1, "K must omit exactly one node");
    out[0]
}

/// Nonempty composite-stable subsets equidistant from the node outside K.
pub fn j_set(k: &[u8], act: &DynkinAction) -> Vec<BTreeSet<u8>> {
    let v = outside(k) as i32;
    let dist = |i: u8| (i as i32 - v).unsigned_abs();
    let mut out: Vec<BTreeSet<u8>> = (1u8..8)
        .map(|mask| (0..3).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<u8>>())
        .filter(|s| orbit_closure(s, act.composite()) == *s)
        .filter(|s| s.iter().all(|&i| dist(i) == dist(*s.iter().next().unwrap())))
        .collect();
    out.sort_by_key(|s| (dist(*s.iter().next().unwrap()), std::cmp::Reverse(s.len()), s.iter().copied().collect::<Vec<_>>()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EoRow {
    pub sigma: Vec<u8>,
    pub w: String,
    pub complement: Vec<u8>,
    pub support: Vec<u8>,
}

pub const TABLE_K: [u8; 2] = [0, 2];

/// For each Sigma in J, the sigma-Coxeter EO element of maximal length with
/// supp_sigma inside S - Sigma. None when that element is not unique.
pub fn eo_table(case: Case) -> Option<Vec<EoRow>> {
    let act = DynkinAction::of(case);
    let cox: Vec<_> = eo_set(&TABLE_K).into_iter().filter(|w| is_sigma_coxeter(w, &act)).collect();
    let mut rows = Vec::new();
    for sigma in j_set(&TABLE_K, &act) {
        let comp: BTreeSet<u8> = (0..3).filter(|i| !sigma.contains(i)).collect();
        let fits: Vec<_> = cox.iter().filter(|w| sigma_support(w, &act).is_subset(&comp)).collect();
        let top = fits.iter().map(|w| length(w)).max()?;
        let best: Vec<_> = fits.into_iter().filter(|w| length(w) == top).collect();
        if best.len() != 1 {
            return None;
        }
        rows.push(EoRow {
            sigma: sigma.into_iter().collect(),
            w: best[0].to_string(),
            complement: comp.into_iter().collect(),
            support: sigma_support(best[0], &act).into_iter().collect(),
        });
    }
    Some(rows)
}

/// The reference tables the computation is compared against.
pub fn expected_table(case: Case) -> Vec<EoRow> {
    let row = |s: &[u8], w: &str, c: &[u8], sp: &[u8]| EoRow {
        sigma: s.to_vec(),
        w: w.to_string(),
        complement: c.to_vec(),
        support: sp.to_vec(),
    };
    let mut rows = vec![row(&[1], "rho", &[0, 2], &[]), row(&[0, 2], "s1rho", &[1], &[1])];
    if case == Case::Quaternionic {
        rows.push(row(&[0], "s1s2rho", &[1, 2], &[1, 2]));
        rows.push(row(&[2], "s1s0rho", &[0, 1], &[0, 1]));
    }
    rows
}

/// Length of w_Sigma per row, keyed by Sigma.
pub fn table_lengths(rows: &[EoRow]) -> BTreeMap<Vec<u8>, u32> {
    rows.iter()
        .map(|r| {
            let letters = r.w.matches('s').count() as u32;
            (r.sigma.clone(), letters)
        })
        .collect()
}
