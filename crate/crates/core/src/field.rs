//! Table-driven F_q for q <= 625, sharing its defining polynomial with the
//! Witt ring it is the residue field of. Elements are codes sum c_i p^i.

use crate::ring::RingCtx;

pub type Fq = u16;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    d: usize,
    q: usize,
    add: Vec<Fq>,
    mul: Vec<Fq>,
    neg: Vec<Fq>,
    inv: Vec<Fq>,
    frob: Vec<Fq>,
}

impl FiniteField {
    pub fn from_ring(ctx: &RingCtx) -> FiniteField {
        let p = ctx.p();
        let d = ctx.d();
        let q = ctx.q();
        let f: Vec<u64> = ctx.defining_poly().iter().map(|c| c % p as u64).collect();
        let digits = |mut c: usize| -> Vec<u64> {
            (0..d)
                .map(|_| {
                    let v = (c % p as usize) as u64;
                    c /= p as usize;
                    v
                })
                .collect()
        };
        let code = |v: &[u64]| -> Fq { v.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c) as Fq };
        let pp = p as u64;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = (0..d).map(|i| (da[i] + db[i]) % pp).collect();
                add[a * q + b] = code(&s);
                let mut t = vec![0u64; 2 * d];
                for i in 0..d {
                    for j in 0..d {
                        t[i + j] = (t[i + j] + da[i] * db[j]) % pp;
                    }
                }
                for k in (d..2 * d).rev() {
                    let c = t[k];
                    for i in 0..=d {
                        t[k - d + i] = (t[k - d + i] + pp * pp - c * f[i] % pp) % pp;
                    }
                }
                mul[a * q + b] = code(&t[..d]);
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Fq;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Fq;
                }
            }
        }
        let mut frob = vec![0; q];
        for (a, slot) in frob.iter_mut().enumerate() {
            let mut acc: Fq = 1;
            for _ in 0..p {
                acc = mul[acc as usize * q + a];
            }
            *slot = acc;
        }
        FiniteField { p, d, q, add, mul, neg, inv, frob }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.mul[a as usize * self.q + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }
    /// Inverse of a nonzero element (0 maps to 0).
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        self.inv[a as usize]
    }
    #[inline]
    pub fn frob(&self, a: Fq) -> Fq {
        self.frob[a as usize]
    }

    /// x -> x^(p^k).
    pub fn frob_pow(&self, a: Fq, k: usize) -> Fq {
        (0..k % self.d.max(1)).fold(a, |acc, _| self.frob(acc))
    }

    /// Least code generating the multiplicative group.
    pub fn generator(&self) -> Fq {
        (1..self.q as Fq)
            .find(|&g| {
                let mut acc = g;
                let mut order = 1;
                while acc != 1 {
                    acc = self.mul(acc, g);
                    order += 1;
                }
                order == self.q - 1
            })
            .unwrap()
    }

    pub fn is_prime_field_elem(&self, a: Fq) -> bool {
        (a as u32) < self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn field_axioms_f9() {
        let fq = FiniteField::from_ring(&make_ring(3, 2, 1).unwrap());
        for a in 0..9 {
            if a != 0 {
                assert_eq!(fq.mul(a, fq.inv(a)), 1);
            }
            assert_eq!(fq.add(a, fq.neg(a)), 0);
            assert_eq!(fq.frob_pow(a, 2), a);
            assert_eq!(fq.frob(a) == a, fq.is_prime_field_elem(a));
        }
        // x^2 = -1 in F_9
        assert_eq!(fq.mul(3, 3), 2);
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field_f81() {
        let fq = FiniteField::from_ring(&make_ring(3, 4, 1).unwrap());
        let fixed = (0..81).filter(|&a| fq.frob(a) == a).count();
        assert_eq!(fixed, 3);
        assert_eq!((0..81).filter(|&a| fq.frob_pow(a, 2) == a).count(), 9);
    }
}
