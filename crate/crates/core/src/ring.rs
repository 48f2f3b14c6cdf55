//! Truncated unramified Witt rings W(F_q)/p^m, realized as (Z/p^m)[x]/f with
//! f the Teichmuller lift of an irreducible factor of x^(q-1) - 1. With that
//! choice the Frobenius is simply x -> x^p at every precision.

use crate::error::{Result, StrataError};

pub const MAX_DEG: usize = 4;

/// An element of W(F_q)/p^m in the basis 1, x, .., x^(d-1). Arithmetic goes
/// through the owning [`RingCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct RingElem(pub [u32; MAX_DEG]);

#[derive(Clone, Debug)]
pub struct RingCtx {
    p: u32,
    d: usize,
    m: u32,
    pm: u64,
    pows: Vec<u64>,
    /// Low coefficients of the monic f.
    f: [u64; MAX_DEG],
    /// x^d = sum red[i] x^i.
    red: [u64; MAX_DEG],
    /// sigma(x^i) for i < d.
    frob: [RingElem; MAX_DEG],
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

impl RingCtx {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Residue field size p^d.
    pub fn q(&self) -> usize {
        (self.p as usize).pow(self.d as u32)
    }
    pub fn modulus(&self) -> u64 {
        self.pm
    }
    pub fn p_pow(&self, k: u32) -> u64 {
        self.pows[k as usize]
    }

    /// Coefficients of f, lowest first, including the leading 1.
    pub fn defining_poly(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.f[..self.d].to_vec();
        v.push(1);
        v
    }

    pub fn zero(&self) -> RingElem {
        RingElem::default()
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// The generator x (equal to 1 when d = 1).
    pub fn gen(&self) -> RingElem {
        if self.d == 1 {
            return self.one();
        }
        let mut e = RingElem::default();
        e.0[1] = 1;
        e
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let mut e = RingElem::default();
        e.0[0] = n.rem_euclid(self.pm as i64) as u32;
        e
    }

    pub fn from_coeffs(&self, c: &[i64]) -> RingElem {
        let mut e = RingElem::default();
        for (i, &v) in c.iter().enumerate().take(self.d) {
            e.0[i] = v.rem_euclid(self.pm as i64) as u32;
        }
        e
    }

    pub fn is_zero(&self, a: RingElem) -> bool {
        a.0 == [0; MAX_DEG]
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        let mut r = RingElem::default();
        for i in 0..self.d {
            r.0[i] = ((a.0[i] as u64 + b.0[i] as u64) % self.pm) as u32;
        }
        r
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        let mut r = RingElem::default();
        for i in 0..self.d {
            r.0[i] = ((self.pm - a.0[i] as u64) % self.pm) as u32;
        }
        r
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let pm = self.pm;
        let d = self.d;
        if d == 1 {
            let mut r = RingElem::default();
            r.0[0] = ((a.0[0] as u64 * b.0[0] as u64) % pm) as u32;
            return r;
        }
        let mut t = [0u64; 2 * MAX_DEG - 1];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                t[i + j] += a.0[i] as u64 * b.0[j] as u64;
            }
        }
        for v in t.iter_mut().take(2 * d - 1) {
            *v %= pm;
        }
        for k in (d..2 * d - 1).rev() {
            let c = t[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                t[k - d + i] = (t[k - d + i] + c * self.red[i]) % pm;
            }
        }
        let mut r = RingElem::default();
        for i in 0..d {
            r.0[i] = t[i] as u32;
        }
        r
    }

    /// Multiply by the rational integer n.
    pub fn mul_int(&self, a: RingElem, n: u64) -> RingElem {
        let n = n % self.pm;
        let mut r = RingElem::default();
        for i in 0..self.d {
            r.0[i] = ((a.0[i] as u64 * n) % self.pm) as u32;
        }
        r
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn int_val(&self, mut c: u64) -> u32 {
        if c == 0 {
            return self.m;
        }
        let mut v = 0;
        while c % self.p as u64 == 0 {
            c /= self.p as u64;
            v += 1;
        }
        v
    }

    /// Largest v <= m with a in p^v; m exactly for zero.
    pub fn valuation(&self, a: RingElem) -> u32 {
        (0..self.d).map(|i| self.int_val(a.0[i] as u64)).min().unwrap()
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.valuation(a) == 0
    }

    /// Exact division by p^k; caller guarantees valuation(a) >= k.
    pub fn div_p(&self, a: RingElem, k: u32) -> RingElem {
        let pk = self.pows[k as usize] as u32;
        let mut r = RingElem::default();
        for i in 0..self.d {
            debug_assert_eq!(a.0[i] % pk, 0);
            r.0[i] = a.0[i] / pk;
        }
        r
    }

    /// Coefficientwise floor quotient by p^k; a - p^k * quo_p(a, k) has all
    /// coefficients below p^k.
    pub fn quo_p(&self, a: RingElem, k: u32) -> RingElem {
        let pk = self.pows[k as usize] as u32;
        let mut r = RingElem::default();
        for i in 0..self.d {
            r.0[i] = a.0[i] / pk;
        }
        r
    }

    pub fn mul_p(&self, a: RingElem, k: u32) -> RingElem {
        if k >= self.m {
            return RingElem::default();
        }
        self.mul_int(a, self.pows[k as usize])
    }

    /// Inverse of a unit: residue inverse by a^(q-2), then Newton lifting.
    pub fn inv(&self, a: RingElem) -> Option<RingElem> {
        if !self.is_unit(a) {
            return None;
        }
        let mut y = self.pow(a, self.q() as u64 - 2);
        let two = self.from_int(2);
        for _ in 0..40 {
            let ay = self.mul(a, y);
            if ay == self.one() {
                return Some(y);
            }
            y = self.mul(y, self.sub(two, ay));
        }
        unreachable!("Newton iteration for a unit inverse did not converge")
    }

    /// The ring automorphism x -> x^p.
    pub fn frobenius(&self, a: RingElem) -> RingElem {
        if self.d == 1 {
            return a;
        }
        let mut r = RingElem::default();
        for i in 0..self.d {
            if a.0[i] != 0 {
                r = self.add(r, self.mul_int(self.frob[i], a.0[i] as u64));
            }
        }
        r
    }

    /// sigma^s for any integer s (taken mod d).
    pub fn frobenius_pow(&self, a: RingElem, s: i64) -> RingElem {
        let k = s.rem_euclid(self.d as i64);
        (0..k).fold(a, |acc, _| self.frobenius(acc))
    }

    /// Residue of a in F_q, encoded as sum (c_i mod p) p^i.
    pub fn residue_code(&self, a: RingElem) -> u32 {
        let mut code = 0u32;
        for i in (0..self.d).rev() {
            code = code * self.p + a.0[i] % self.p;
        }
        code
    }

    /// Digit lift of a residue code: coefficients in 0..p.
    pub fn digit_lift(&self, mut code: u32) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.d {
            e.0[i] = code % self.p;
            code /= self.p;
        }
        e
    }

    /// The unique (q-1)-st root of unity with the given nonzero residue.
    pub fn teichmuller(&self, code: u32) -> Result<RingElem> {
        let lift = self.digit_lift(code);
        if self.is_zero(lift) || code as usize >= self.q() {
            return Err(StrataError::ZeroElement);
        }
        let e = (self.q() as u64).pow(self.m - 1);
        Ok(self.pow(lift, e))
    }

    /// Every element of the ring in coefficient order; only sensible for tiny
    /// rings (tests).
    pub fn all_elements(&self) -> Vec<RingElem> {
        let total = (self.pm as usize).pow(self.d as u32);
        (0..total)
            .map(|mut k| {
                let mut e = RingElem::default();
                for i in 0..self.d {
                    e.0[i] = (k % self.pm as usize) as u32;
                    k /= self.pm as usize;
                }
                e
            })
            .collect()
    }

    pub fn format(&self, a: RingElem) -> String {
        if self.d == 1 {
            return a.0[0].to_string();
        }
        let parts: Vec<String> = a.0[..self.d].iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    fn raw(p: u32, d: usize, m: u32, f: [u64; MAX_DEG]) -> RingCtx {
        let pows: Vec<u64> = (0..=m).map(|k| (p as u64).pow(k)).collect();
        let pm = pows[m as usize];
        let mut red = [0u64; MAX_DEG];
        for i in 0..d {
            red[i] = (pm - f[i] % pm) % pm;
        }
        let mut ctx = RingCtx { p, d, m, pm, pows, f, red, frob: [RingElem::default(); MAX_DEG] };
        let xp = ctx.pow(ctx.gen(), p as u64);
        let mut acc = ctx.one();
        for i in 0..d {
            ctx.frob[i] = acc;
            acc = ctx.mul(acc, xp);
        }
        ctx
    }
}

/// Remainder of a by the monic b over F_p (coefficients lowest first).
fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * bc % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_polys(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(deg as u32);
    (0..count).map(move |mut k| {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(k % p);
            k /= p;
        }
        v.push(1);
        v
    })
}

pub fn irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    (1..=deg / 2).all(|k| monic_polys(p, k).all(|g| poly_rem_mod_p(f, &g, p).iter().any(|&c| c != 0)))
}

/// Lexicographically least (on c_0, c_1, ..) monic irreducible of degree d
/// over F_p.
pub fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    let mut cands: Vec<Vec<u64>> = monic_polys(p, d).filter(|f| irreducible_mod_p(f, p)).collect();
    cands.sort();
    cands.into_iter().next().expect("irreducible polynomials exist in every degree")
}

/// Builds W(F_{p^d})/p^m. Degree 1 uses f = x - 1, i.e. plain Z/p^m.
pub fn make_ring(p: u32, d: usize, m: u32) -> Result<RingCtx> {
    if p < 3 || !is_prime(p) {
        return Err(StrataError::BadPrime(p));
    }
    if !matches!(d, 1 | 2 | 4) {
        return Err(StrataError::UnsupportedDegree(d));
    }
    if m == 0 || (p as f64).powi(m as i32) >= (1u64 << 31) as f64 {
        return Err(StrataError::BadPrecision(m));
    }
    if d == 1 {
        let pm = (p as u64).pow(m);
        return Ok(RingCtx::raw(p, 1, m, [pm - 1, 0, 0, 0]));
    }
    let g = least_irreducible(p as u64, d);
    let mut graw = [0u64; MAX_DEG];
    graw[..d].copy_from_slice(&g[..d]);
    // In (Z/p^m)[y]/(g) the element y^(q^(m-1)) is the Teichmuller lift of
    // the root y mod p; f is the product over its Frobenius conjugates.
    let aux = RingCtx::raw(p, d, m, graw);
    let q = (p as u64).pow(d as u32);
    let omega = aux.pow(aux.gen(), q.pow(m - 1));
    let mut poly = vec![aux.one()];
    let mut root = omega;
    for _ in 0..d {
        let mut next = vec![aux.zero(); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = aux.add(next[i + 1], c);
            next[i] = aux.sub(next[i], aux.mul(c, root));
        }
        poly = next;
        root = aux.pow(root, p as u64);
    }
    let mut f = [0u64; MAX_DEG];
    for i in 0..d {
        let c = poly[i];
        assert!(c.0[1..].iter().all(|&v| v == 0), "conjugate product must be rational");
        f[i] = c.0[0] as u64;
    }
    Ok(RingCtx::raw(p, d, m, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Remainder of x^e - 1 by f over Z/p^m, by repeated squaring on
    /// polynomials; an oracle independent of RingCtx::mul.
    fn xpow_minus_one_rem(f: &[u64], e: u64, pm: u64) -> Vec<u64> {
        let d = f.len() - 1;
        let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut t = vec![0u64; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    t[i + j] = (t[i + j] + a[i] * b[j]) % pm;
                }
            }
            for k in (d..2 * d).rev() {
                let c = t[k];
                for i in 0..=d {
                    t[k - d + i] = (t[k - d + i] + pm * pm - c * f[i] % pm) % pm;
                }
            }
            t.truncate(d);
            t
        };
        let mut acc = vec![0u64; d];
        acc[0] = 1;
        let mut base = vec![0u64; d];
        if d == 1 {
            base[0] = (pm - f[0]) % pm;
        } else {
            base[1] = 1;
        }
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base);
            }
            base = mulmod(&base, &base);
            e >>= 1;
        }
        acc[0] = (acc[0] + pm - 1) % pm;
        acc
    }

    #[test]
    fn degree_one_is_plain_integers_mod_p_power() {
        let r = make_ring(3, 1, 2).unwrap();
        assert_eq!(r.defining_poly(), vec![8, 1]);
        assert_eq!(r.modulus(), 9);
        assert_eq!(r.mul(r.from_int(4), r.from_int(7)), r.from_int(1));
    }

    #[test]
    fn quadratic_ring_uses_x_squared_plus_one() {
        let r = make_ring(3, 2, 3).unwrap();
        assert_eq!(r.defining_poly(), vec![1, 0, 1]);
        assert!(xpow_minus_one_rem(&[1, 0, 1], 8, 27).iter().all(|&c| c == 0));
        assert!(irreducible_mod_p(&[1, 0, 1], 3));
    }

    #[test]
    fn quartic_ring_divides_x80_minus_one() {
        let r = make_ring(3, 4, 2).unwrap();
        let f = r.defining_poly();
        assert!(xpow_minus_one_rem(&f, 80, 9).iter().all(|&c| c == 0));
        let fbar: Vec<u64> = f.iter().map(|c| c % 3).collect();
        assert!(irreducible_mod_p(&fbar, 3));
        // brute-force lex-least quartic factor of x^80 - 1 over F_3
        let mut best = None;
        for k in 0..81u64 {
            let c = [k % 3, k / 3 % 3, k / 9 % 3, k / 27];
            let cand = vec![c[0], c[1], c[2], c[3], 1];
            if irreducible_mod_p(&cand, 3) && xpow_minus_one_rem(&cand, 80, 3).iter().all(|&v| v == 0) {
                if best.as_ref().map_or(true, |b: &Vec<u64>| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        assert_eq!(best.unwrap(), fbar);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_ring(2, 1, 2).unwrap_err(), StrataError::BadPrime(2));
        assert_eq!(make_ring(9, 1, 2).unwrap_err(), StrataError::BadPrime(9));
        assert_eq!(make_ring(3, 3, 2).unwrap_err(), StrataError::UnsupportedDegree(3));
    }

    #[test]
    fn frobenius_examples() {
        let r = make_ring(3, 1, 3).unwrap();
        for e in r.all_elements() {
            assert_eq!(r.frobenius(e), e);
        }
        let r = make_ring(3, 2, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                let e = r.from_coeffs(&[a, b]);
                assert_eq!(r.frobenius(e), r.from_coeffs(&[a, -b]));
            }
        }
        let r = make_ring(3, 4, 3).unwrap();
        let mut s = 12345u64;
        for _ in 0..100 {
            let mut c = [0i64; 4];
            for v in c.iter_mut() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = ((s >> 33) % 27) as i64;
            }
            let e = r.from_coeffs(&c);
            assert_eq!(r.frobenius_pow(e, 4), e);
            assert_ne!(r.frobenius_pow(r.gen(), 1), r.gen());
        }
    }

    #[test]
    fn frobenius_is_ring_automorphism_fixing_only_rationals() {
        let r = make_ring(3, 2, 2).unwrap();
        let all = r.all_elements();
        for &a in &all {
            for &b in &all {
                assert_eq!(r.frobenius(r.mul(a, b)), r.mul(r.frobenius(a), r.frobenius(b)));
                assert_eq!(r.frobenius(r.add(a, b)), r.add(r.frobenius(a), r.frobenius(b)));
            }
            let fixed = r.frobenius(a) == a;
            assert_eq!(fixed, a.0[1] == 0);
        }
    }

    #[test]
    fn valuation_examples() {
        let r = make_ring(3, 2, 3).unwrap();
        assert_eq!(r.valuation(r.zero()), 3);
        assert_eq!(r.valuation(r.from_int(3)), 1);
        assert_eq!(r.valuation(r.from_coeffs(&[3, 3])), 1);
        let all = make_ring(3, 2, 2).unwrap();
        for &a in &all.all_elements() {
            for &b in &all.all_elements() {
                let v = (all.valuation(a) + all.valuation(b)).min(2);
                assert_eq!(all.valuation(all.mul(a, b)), v);
            }
        }
    }

    #[test]
    fn teichmuller_examples() {
        let r = make_ring(3, 1, 2).unwrap();
        assert_eq!(r.teichmuller(1).unwrap(), r.one());
        assert_eq!(r.teichmuller(2).unwrap(), r.from_int(8));
        assert_eq!(r.teichmuller(0).unwrap_err(), StrataError::ZeroElement);
        let r = make_ring(3, 2, 2).unwrap();
        let fq = crate::field::FiniteField::from_ring(&r);
        let g = fq.generator();
        let t = r.teichmuller(g as u32).unwrap();
        assert_eq!(r.pow(t, 8), r.one());
        assert_ne!(r.pow(t, 4), r.one());
        for a in 1..9u32 {
            for b in 1..9u32 {
                let ab = fq.mul(a as u16, b as u16) as u32;
                let lhs = r.teichmuller(ab).unwrap();
                let rhs = r.mul(r.teichmuller(a).unwrap(), r.teichmuller(b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn residue_map_is_homomorphism_intertwining_frobenius() {
        let r = make_ring(3, 2, 2).unwrap();
        let fq = crate::field::FiniteField::from_ring(&r);
        for &a in &r.all_elements() {
            let ra = r.residue_code(a) as u16;
            assert_eq!(r.residue_code(r.frobenius(a)) as u16, fq.frob(ra));
            for &b in r.all_elements().iter().step_by(7) {
                let rb = r.residue_code(b) as u16;
                assert_eq!(r.residue_code(r.mul(a, b)) as u16, fq.mul(ra, rb));
                assert_eq!(r.residue_code(r.add(a, b)) as u16, fq.add(ra, rb));
            }
        }
    }

    #[test]
    fn unit_inverse() {
        let r = make_ring(5, 4, 3).unwrap();
        let e = r.from_coeffs(&[2, 7, 0, 11]);
        let i = r.inv(e).unwrap();
        assert_eq!(r.mul(e, i), r.one());
        assert!(r.inv(r.from_int(5)).is_none());
    }
}
