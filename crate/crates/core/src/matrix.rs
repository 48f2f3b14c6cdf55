//! Echelon and Smith forms over the chain ring W/p^m.

use crate::error::{Result, StrataError};
use crate::ring::{RingCtx, RingElem};

pub const NMAX: usize = 8;
/// Pivots must stay at or below m - GUARD.
pub const GUARD: u32 = 2;

/// A column vector of length <= NMAX.
pub type Col = [RingElem; NMAX];

pub fn zero_col() -> Col {
    [RingElem::default(); NMAX]
}

pub fn unit_col(ctx: &RingCtx, i: usize) -> Col {
    let mut c = zero_col();
    c[i] = ctx.one();
    c
}

fn col_is_zero(c: &Col, n: usize) -> bool {
    c[..n].iter().all(|e| e.0 == [0; 4])
}

/// c -= k * piv on rows 0..rows
#[inline]
fn axpy(ctx: &RingCtx, c: &mut Col, k: RingElem, piv: &Col, rows: usize) {
    for r in 0..rows {
        if piv[r].0 != [0; 4] {
            c[r] = ctx.sub(c[r], ctx.mul(k, piv[r]));
        }
    }
}

/// Column Hermite form of the span of `gens` (which must contain p^m W^n
/// modulo p^m, i.e. describe a full lattice). Returns the upper triangular
/// basis, column-major, pivots p^a_i on the diagonal and entries above a
/// pivot reduced coefficientwise mod p^a_i.
pub fn hermite(ctx: &RingCtx, n: usize, mut gens: Vec<Col>) -> Result<Vec<RingElem>> {
    let m = ctx.m();
    let mut piv_cols = vec![zero_col(); n];
    let mut avals = [0u32; NMAX];
    gens.retain(|g| !col_is_zero(g, n));
    for i in (0..n).rev() {
        let mut best = (m, usize::MAX);
        for (j, g) in gens.iter().enumerate() {
            let v = ctx.valuation(g[i]);
            if v < best.0 {
                best = (v, j);
                if v == 0 {
                    break;
                }
            }
        }
        let (a, j) = best;
        if a > m - GUARD {
            return Err(StrataError::PrecisionExhausted { val: a, m });
        }
        let mut pc = gens.swap_remove(j);
        let u = ctx.div_p(pc[i], a);
        if u != ctx.one() {
            let ui = ctx.inv(u).expect("pivot quotient is a unit");
            for r in 0..=i {
                pc[r] = ctx.mul(pc[r], ui);
            }
        }
        for g in gens.iter_mut() {
            if g[i].0 != [0; 4] {
                let k = ctx.div_p(g[i], a);
                axpy(ctx, g, k, &pc, i + 1);
                debug_assert!(ctx.is_zero(g[i]));
            }
        }
        if a > 0 {
            let mut extra = zero_col();
            for r in 0..i {
                extra[r] = ctx.mul_p(pc[r], m - a);
            }
            gens.push(extra);
        }
        gens.retain(|g| !col_is_zero(g, i));
        piv_cols[i] = pc;
        avals[i] = a;
    }
    for k in 1..n {
        for i in (0..k).rev() {
            let e = piv_cols[k][i];
            if e.0 == [0; 4] {
                continue;
            }
            let t = ctx.quo_p(e, avals[i]);
            if t.0 != [0; 4] {
                let pi = piv_cols[i];
                axpy(ctx, &mut piv_cols[k], t, &pi, i + 1);
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for c in piv_cols.iter() {
        out.extend_from_slice(&c[..n]);
    }
    Ok(out)
}

/// Smith form over W/p^m of a rows x cols matrix (column-major), tracking the
/// column transform C with A C = P S. Returns the diagonal valuations (m for
/// a vanishing diagonal entry) and C (cols x cols, column-major).
pub fn smith_with_transform(
    ctx: &RingCtx,
    rows: usize,
    cols: usize,
    data: &[RingElem],
) -> (Vec<u32>, Vec<RingElem>) {
    let m = ctx.m();
    let mut a = data.to_vec();
    let idx = |r: usize, c: usize| c * rows + r;
    let mut cm = vec![ctx.zero(); cols * cols];
    for i in 0..cols {
        cm[i * cols + i] = ctx.one();
    }
    let steps = rows.min(cols);
    let mut vals = Vec::with_capacity(steps);
    for t in 0..steps {
        let mut best = (m, t, t);
        'search: for c in t..cols {
            for r in t..rows {
                let v = ctx.valuation(a[idx(r, c)]);
                if v < best.0 {
                    best = (v, r, c);
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, br, bc) = best;
        if v == m {
            vals.extend(std::iter::repeat(m).take(steps - t));
            break;
        }
        if br != t {
            for c in 0..cols {
                a.swap(idx(br, c), idx(t, c));
            }
        }
        if bc != t {
            for r in 0..rows {
                a.swap(idx(r, bc), idx(r, t));
            }
            for r in 0..cols {
                cm.swap(bc * cols + r, t * cols + r);
            }
        }
        let u = ctx.div_p(a[idx(t, t)], v);
        let ui = ctx.inv(u).expect("unit");
        for r in 0..rows {
            a[idx(r, t)] = ctx.mul(a[idx(r, t)], ui);
        }
        for r in 0..cols {
            cm[t * cols + r] = ctx.mul(cm[t * cols + r], ui);
        }
        // clear row t to the right by column operations
        for c in t + 1..cols {
            let e = a[idx(t, c)];
            if ctx.is_zero(e) {
                continue;
            }
            let k = ctx.div_p(e, v);
            for r in 0..rows {
                a[idx(r, c)] = ctx.sub(a[idx(r, c)], ctx.mul(k, a[idx(r, t)]));
            }
            for r in 0..cols {
                cm[c * cols + r] = ctx.sub(cm[c * cols + r], ctx.mul(k, cm[t * cols + r]));
            }
        }
        // clear column t below by row operations (not tracked)
        for r in t + 1..rows {
            let e = a[idx(r, t)];
            if ctx.is_zero(e) {
                continue;
            }
            let k = ctx.div_p(e, v);
            for c in t..cols {
                a[idx(r, c)] = ctx.sub(a[idx(r, c)], ctx.mul(k, a[idx(t, c)]));
            }
        }
        vals.push(v);
    }
    (vals, cm)
}

/// Nondecreasing Smith valuations of a square matrix (column-major).
pub fn smith_valuations(ctx: &RingCtx, n: usize, data: &[RingElem]) -> Result<Vec<u32>> {
    let (mut vals, _) = smith_with_transform(ctx, n, n, data);
    vals.sort_unstable();
    if let Some(&v) = vals.iter().find(|&&v| v > ctx.m() - GUARD) {
        return Err(StrataError::PrecisionExhausted { val: v, m: ctx.m() });
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn smith_examples() {
        let r = make_ring(3, 1, 8).unwrap();
        let mut id = vec![r.zero(); 16];
        for i in 0..4 {
            id[i * 4 + i] = r.one();
        }
        assert_eq!(smith_valuations(&r, 4, &id).unwrap(), vec![0, 0, 0, 0]);
        let mut dg = vec![r.zero(); 9];
        dg[0] = r.one();
        dg[4] = r.from_int(3);
        dg[8] = r.from_int(9);
        assert_eq!(smith_valuations(&r, 3, &dg).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn smith_of_unit_matrix_times_diagonal() {
        let r = make_ring(3, 2, 6).unwrap();
        // U is unipotent upper triangular with unit entries, hence invertible
        let mut u = vec![r.zero(); 16];
        for c in 0..4 {
            for row in 0..4 {
                u[c * 4 + row] = if row <= c { r.from_coeffs(&[1 + (row + c) as i64, 2]) } else { r.zero() };
            }
            u[c * 4 + c] = r.one();
        }
        let dg = [1i64, 1, 3, 3];
        let prod: Vec<_> = (0..16)
            .map(|k| {
                let (c, row) = (k / 4, k % 4);
                r.mul_int(u[c * 4 + row], dg[c] as u64)
            })
            .collect();
        assert_eq!(smith_valuations(&r, 4, &prod).unwrap(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn smith_transform_relation_holds() {
        let r = make_ring(5, 1, 5).unwrap();
        let data: Vec<_> = [5, 10, 3, 25, 7, 1, 50, 2, 0, 15, 4, 9].iter().map(|&v| r.from_int(v)).collect();
        let (vals, c) = smith_with_transform(&r, 3, 4, &data);
        // A C has column j divisible by p^vals[j]
        for j in 0..4 {
            for row in 0..3 {
                let mut s = r.zero();
                for k in 0..4 {
                    s = r.add(s, r.mul(data[k * 3 + row], c[j * 4 + k]));
                }
                let need = if j < 3 { vals[j] } else { r.m() };
                assert!(r.valuation(s) >= need.min(r.m()));
            }
        }
    }
}
