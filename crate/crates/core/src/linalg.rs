//! Linear algebra over Z/m.
//!
//! The workhorse is a sparse Howell-form echelon over a local ring Z/p^e:
//! pivots are chosen by column, leading entries are normalized to p^v, and
//! every pivot row of valuation v > 0 is saturated by inserting p^(e-v)·row.
//! Saturation makes back-substitution consistent, which gives both particular
//! solutions and kernel generators. Composite moduli are handled by CRT.

use crate::arith::{factor, inv_mod, ipow, mul_mod, prime_power};
use crate::{Error, Result};

/// Sparse row: (column, value) pairs with increasing columns and nonzero values.
pub type Row = Vec<(usize, u64)>;

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Returns r + q·s mod m.
fn axpy(r: &[(usize, u64)], q: u64, s: &[(usize, u64)], m: u64) -> Row {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        let ci = r.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = s.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(r[i]);
            i += 1;
        } else if cj < ci {
            let v = mul_mod(q, s[j].1, m);
            if v != 0 {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = (r[i].1 + mul_mod(q, s[j].1, m)) % m;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_row(r: &[(usize, u64)], q: u64, m: u64) -> Row {
    r.iter()
        .filter_map(|&(c, v)| {
            let w = mul_mod(q, v, m);
            (w != 0).then_some((c, w))
        })
        .collect()
}

/// Sparse Howell form over Z/p^e.
#[derive(Clone, Debug)]
pub struct Howell {
    p: u64,
    e: u32,
    m: u64,
    pivots: Vec<Option<(u32, Row)>>,
}

impl Howell {
    pub fn new(p: u64, e: u32, ncols: usize) -> Self {
        Howell { p, e, m: ipow(p, e), pivots: vec![None; ncols] }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn ncols(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts a row (entries need not be reduced or sorted).
    pub fn insert(&mut self, row: Row) {
        let m = self.m;
        let mut row: Row = row.into_iter().map(|(c, v)| (c, v % m)).filter(|x| x.1 != 0).collect();
        row.sort_unstable_by_key(|x| x.0);
        let mut stack = vec![row];
        while let Some(mut r) = stack.pop() {
            loop {
                let Some(&(c, a)) = r.first() else { break };
                let v = valuation(a, self.p);
                let pv = ipow(self.p, v);
                match &self.pivots[c] {
                    None => {
                        let u = inv_mod(a / pv, m).expect("unit");
                        let r = scale_row(&r, u, m);
                        if v > 0 {
                            let s = scale_row(&r, ipow(self.p, self.e - v), m);
                            stack.push(s);
                        }
                        self.pivots[c] = Some((v, r));
                        break;
                    }
                    Some((w, piv)) => {
                        let w = *w;
                        if v >= w {
                            let q = a / ipow(self.p, w);
                            r = axpy(&r, m - q % m, piv, m);
                        } else {
                            let u = inv_mod(a / pv, m).expect("unit");
                            let newr = scale_row(&r, u, m);
                            let (_, old) = self.pivots[c].take().unwrap();
                            let q = ipow(self.p, w - v);
                            stack.push(axpy(&old, m - q, &newr, m));
                            stack.push(scale_row(&newr, ipow(self.p, self.e - v), m));
                            self.pivots[c] = Some((v, newr));
                            break;
                        }
                    }
                }
            }
        }
    }

    /// log_p of the size of the row space.
    pub fn log_size(&self) -> u64 {
        self.pivots.iter().flatten().map(|(v, _)| (self.e - v) as u64).sum()
    }

    /// Fills x[0..upto] by back-substitution given x[upto..] (and any preset
    /// torsion values in pivot columns). Returns false if some step is inconsistent.
    fn back_substitute(&self, x: &mut [u64], upto: usize) -> bool {
        let m = self.m;
        for c in (0..upto).rev() {
            if let Some((v, r)) = &self.pivots[c] {
                let mut s = 0u64;
                for &(j, a) in &r[1..] {
                    if x[j] != 0 {
                        s = (s + mul_mod(a, x[j], m)) % m;
                    }
                }
                let s = (m - s) % m;
                let pv = ipow(self.p, *v);
                if !s.is_multiple_of(pv) {
                    return false;
                }
                x[c] = (x[c] + s / pv) % m;
            }
        }
        true
    }

    /// Generators of {x in (Z/p^e)^n : r·x = 0 for all rows}, restricted to the
    /// first `n` columns (columns from `n` on are set to zero).
    pub fn kernel(&self, n: usize) -> Vec<Vec<u64>> {
        let mut gens = Vec::new();
        let total = self.ncols();
        for c0 in 0..n {
            let preset = match &self.pivots[c0] {
                None => 1,
                Some((0, _)) => continue,
                Some((v, _)) => ipow(self.p, self.e - v),
            };
            let mut x = vec![0u64; total];
            x[c0] = preset;
            let ok = self.back_substitute(&mut x, c0);
            debug_assert!(ok);
            x.truncate(n);
            gens.push(x);
        }
        gens
    }

    /// Solution of the homogeneous system with the variable in column `n + j`
    /// fixed to -1 and the other trailing variables fixed to 0; i.e. a solution
    /// of A x = b_j when the rows were [A | b_0 .. b_k].
    pub fn solve_rhs(&self, n: usize, j: usize) -> Option<Vec<u64>> {
        let m = self.m;
        let total = self.ncols();
        let mut x = vec![0u64; total];
        x[n + j] = m - 1;
        // rows pivoting in the trailing columns must vanish on x
        for c in n..total {
            if let Some((_, r)) = &self.pivots[c] {
                let s = r.iter().fold(0u64, |s, &(col, a)| (s + mul_mod(a, x[col], m)) % m);
                if s != 0 {
                    return None;
                }
            }
        }
        if !self.back_substitute(&mut x, n) {
            return None;
        }
        x.truncate(n);
        Some(x)
    }

    /// Pivot valuations, in column order.
    pub fn valuations(&self) -> Vec<u32> {
        self.pivots.iter().flatten().map(|(v, _)| *v).collect()
    }
}

/// A solution of a linear system together with generators of the solution kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSolution {
    pub x: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solves `a·x ≡ b (mod m)` for a dense integer matrix `a` (rows = equations).
/// Returns None when the system is inconsistent.
pub fn solve_mod(a: &[Vec<i64>], b: &[i64], m: u64) -> Option<ModSolution> {
    assert!(m >= 1);
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if m == 1 {
        return Some(ModSolution { x: vec![0; ncols], kernel: vec![] });
    }
    let parts = factor(m);
    let mut x = vec![0u64; ncols];
    let mut kernel = Vec::new();
    for &(p, e) in &parts {
        let q = ipow(p, e);
        // CRT idempotent: ≡ 1 mod q, ≡ 0 mod m/q
        let rest = m / q;
        let idem = mul_mod(rest, inv_mod(rest % q, q).unwrap_or(1), m);
        let mut h = Howell::new(p, e, ncols + 1);
        for (row, &bi) in a.iter().zip(b) {
            assert_eq!(row.len(), ncols);
            let mut r: Row = row
                .iter()
                .enumerate()
                .map(|(c, &v)| (c, v.rem_euclid(q as i64) as u64))
                .filter(|x| x.1 != 0)
                .collect();
            let bv = bi.rem_euclid(q as i64) as u64;
            if bv != 0 {
                r.push((ncols, bv));
            }
            h.insert(r);
        }
        let xq = h.solve_rhs(ncols, 0)?;
        for (xi, v) in x.iter_mut().zip(xq) {
            *xi = (*xi + mul_mod(idem, v, m)) % m;
        }
        for g in h.kernel(ncols) {
            kernel.push(g.iter().map(|&v| mul_mod(idem, v, m)).collect());
        }
    }
    Some(ModSolution { x, kernel })
}

/// A Z-linear map between finite abelian p-groups given in coordinates:
/// the source is ⊕ Z/src[j], the target ⊕ Z/tgt[i], and `rows[i]` lists the
/// sparse entries of equation i.
#[derive(Clone, Debug)]
pub struct LinearMap {
    pub src: Vec<u64>,
    pub tgt: Vec<u64>,
    pub rows: Vec<Row>,
}

impl LinearMap {
    fn prime_and_exp(&self) -> Result<(u64, u32)> {
        let mut p = 0;
        let mut e = 0;
        for &o in self.src.iter().chain(self.tgt.iter()) {
            if o == 1 {
                continue;
            }
            let (q, k) = prime_power(o)
                .ok_or_else(|| Error::Unsupported(format!("coordinate order {o} is not a prime power")))?;
            if p != 0 && q != p {
                return Err(Error::Unsupported("coefficients mix different primes".into()));
            }
            p = q;
            e = e.max(k);
        }
        if p == 0 {
            return Ok((2, 0));
        }
        Ok((p, e))
    }

    /// Howell form of the scaled system with `extra` trailing right-hand sides.
    fn howell(&self, rhs: &[&[u64]]) -> Result<Howell> {
        let (p, e) = self.prime_and_exp()?;
        let n = self.src.len();
        let mut h = Howell::new(p, e.max(1), n + rhs.len());
        let m = h.modulus();
        // late rows first: for coboundary matrices this keeps fill-in low
        for (i, row) in self.rows.iter().enumerate().rev() {
            let t = self.tgt[i];
            let f = m / t.max(1);
            let mut r: Row = row.iter().map(|&(c, v)| (c, mul_mod(v % t, f, m))).filter(|x| x.1 != 0).collect();
            for (k, b) in rhs.iter().enumerate() {
                let v = mul_mod(b[i] % t, f, m);
                if v != 0 {
                    r.push((n + k, v));
                }
            }
            if !r.is_empty() {
                h.insert(r);
            }
        }
        Ok(h)
    }

    /// log_p of the order of the image, with the prime p.
    pub fn image_log(&self) -> Result<(u64, u64)> {
        let (p, _) = self.prime_and_exp()?;
        Ok((p, self.howell(&[])?.log_size()))
    }

    /// log_p of the order of the source group.
    pub fn source_log(&self) -> Result<u64> {
        let (p, _) = self.prime_and_exp()?;
        Ok(self.src.iter().map(|&o| valuation_of_power(o, p)).sum())
    }

    /// Generators of the kernel, as source elements.
    pub fn kernel(&self) -> Result<Vec<Vec<u64>>> {
        let h = self.howell(&[])?;
        let n = self.src.len();
        let mut gens: Vec<Vec<u64>> = h
            .kernel(n)
            .into_iter()
            .map(|g| g.iter().zip(&self.src).map(|(&v, &s)| v % s).collect::<Vec<u64>>())
            .filter(|g: &Vec<u64>| g.iter().any(|&v| v != 0))
            .collect();
        gens.dedup();
        Ok(gens)
    }

    /// One preimage of each target element in `bs`, or None where inconsistent.
    pub fn solve_many(&self, bs: &[Vec<u64>]) -> Result<Vec<Option<Vec<u64>>>> {
        let refs: Vec<&[u64]> = bs.iter().map(|b| b.as_slice()).collect();
        let h = self.howell(&refs)?;
        let n = self.src.len();
        Ok((0..bs.len())
            .map(|j| h.solve_rhs(n, j).map(|x| x.iter().zip(&self.src).map(|(&v, &s)| v % s).collect()))
            .collect())
    }

    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        Ok(self.solve_many(&[b.to_vec()])?.pop().unwrap())
    }

    /// Applies the map to a source element.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.rows
            .iter()
            .zip(&self.tgt)
            .map(|(r, &t)| r.iter().fold(0u64, |s, &(c, a)| (s + mul_mod(a % t, x[c] % t, t)) % t))
            .collect()
    }
}

fn valuation_of_power(o: u64, p: u64) -> u64 {
    if o <= 1 {
        0
    } else {
        valuation(o, p) as u64
    }
}

/// Smith normal form over Z/p^e of a dense relation matrix (rows are relations
/// among k generators). Returns the exponents v_i (one per generator, so the
/// quotient is ⊕ Z/p^{v_i}) and the matrix whose rows express the new
/// generators in terms of the old ones.
pub fn quotient_structure(p: u64, e: u32, k: usize, rels: &[Vec<u64>]) -> (Vec<u32>, Vec<Vec<u64>>) {
    let m = ipow(p, e);
    let mut a: Vec<Vec<u64>> = rels.iter().map(|r| r.iter().map(|&v| v % m).collect()).collect();
    let mut vinv: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
    let mut exps = vec![e; k];
    let rows = a.len();
    let mut t = 0;
    while t < k && t < rows {
        // entry of minimal valuation in the trailing block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = valuation(x, p);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        vinv.swap(t, j);
        let pv = ipow(p, v);
        let u = inv_mod(a[t][t] / pv, m).unwrap();
        for x in a[t].iter_mut() {
            *x = mul_mod(*x, u, m);
        }
        for i2 in t + 1..rows {
            let q = a[i2][t] / pv;
            if q != 0 {
                for c in 0..k {
                    let s = mul_mod(q, a[t][c], m);
                    a[i2][c] = (a[i2][c] + m - s) % m;
                }
            }
        }
        for j2 in t + 1..k {
            let q = a[t][j2] / pv;
            if q != 0 {
                for row in a.iter_mut() {
                    let s = mul_mod(q, row[t], m);
                    row[j2] = (row[j2] + m - s) % m;
                }
                // V' = V(I - q e_t e_j2^T), so V'^{-1} = (I + q e_t e_j2^T) V^{-1}
                for c in 0..k {
                    let s = mul_mod(q, vinv[j2][c], m);
                    vinv[t][c] = (vinv[t][c] + s) % m;
                }
            }
        }
        exps[t] = v;
        t += 1;
    }
    (exps, vinv)
}

/// Smith normal form of an integer relation matrix (rows are relations in Z^k).
/// Returns the diagonal (length k, zero for free directions) and the column
/// transform Q with rowspace(R)·Q = rowspace(D).
pub fn integer_snf(k: usize, rels: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut a: Vec<Vec<i128>> = rels.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut q: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i128).collect()).collect();
    let rows = a.len();
    let mut diag = vec![0i64; k];
    let mut t = 0;
    while t < k && t < rows {
        // pick the nonzero entry of least absolute value
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|b| x.abs() < b.0) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in q.iter_mut() {
            row.swap(t, j);
        }
        loop {
            let piv = a[t][t];
            let mut done = true;
            for i2 in t + 1..rows {
                let f = a[i2][t] / piv;
                if f != 0 {
                    for c in 0..k {
                        a[i2][c] -= f * a[t][c];
                    }
                }
                if a[i2][t] != 0 {
                    done = false;
                }
            }
            for j2 in t + 1..k {
                let f = a[t][j2] / piv;
                if f != 0 {
                    for row in a.iter_mut() {
                        row[j2] -= f * row[t];
                    }
                    for row in q.iter_mut() {
                        row[j2] -= f * row[t];
                    }
                }
                if a[t][j2] != 0 {
                    done = false;
                }
            }
            if done {
                // divisibility of the rest of the block by the pivot
                let mut fix = None;
                'scan: for (i2, row) in a.iter().enumerate().skip(t + 1) {
                    for &x in row.iter().skip(t + 1) {
                        if x % piv != 0 {
                            fix = Some(i2);
                            break 'scan;
                        }
                    }
                }
                match fix {
                    None => break,
                    Some(i2) => {
                        for c in 0..k {
                            let v = a[i2][c];
                            a[t][c] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (a[t][t].abs(), t, t);
            for i2 in t + 1..rows {
                if a[i2][t] != 0 && a[i2][t].abs() < best.0 {
                    best = (a[i2][t].abs(), i2, t);
                }
            }
            for j2 in t + 1..k {
                if a[t][j2] != 0 && a[t][j2].abs() < best.0 {
                    best = (a[t][j2].abs(), t, j2);
                }
            }
            let (_, bi, bj) = best;
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut().skip(t) {
                let _ = row;
            }
            for c in 0..k {
                a[t][c] = -a[t][c];
            }
        }
        diag[t] = a[t][t] as i64;
        t += 1;
    }
    let q = q.into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect();
    (diag, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        // 2x ≡ 2 (mod 4): x = 1 (or 3), kernel {0, 2}
        let s = solve_mod(&[vec![2]], &[2], 4).unwrap();
        assert_eq!(2 * s.x[0] % 4, 2);
        assert_eq!(s.kernel, vec![vec![2]]);
        assert!(solve_mod(&[vec![2]], &[1], 4).is_none());
        let s = solve_mod(&[vec![1, 0], vec![0, 1]], &[3, 5], 7).unwrap();
        assert_eq!(s.x, vec![3, 5]);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn composite_modulus() {
        // 3x ≡ 3 mod 6 -> x odd... x ∈ {1,3,5}; kernel generated by 2
        let s = solve_mod(&[vec![3]], &[3], 6).unwrap();
        assert_eq!(3 * s.x[0] % 6, 3);
        let mut span = std::collections::BTreeSet::new();
        for k in &s.kernel {
            for t in 0..6 {
                span.insert(k[0] * t % 6);
            }
        }
        assert_eq!(span.into_iter().collect::<Vec<_>>(), vec![0, 2, 4]);
    }

    #[test]
    fn howell_saturation() {
        // row (2, 1) mod 4: solutions need y even.
        let mut h = Howell::new(2, 2, 2);
        h.insert(vec![(0, 2), (1, 1)]);
        assert_eq!(h.log_size(), 2);
        for g in h.kernel(2) {
            assert_eq!((2 * g[0] + g[1]) % 4, 0);
        }
    }

    #[test]
    fn mixed_orders() {
        // Z/4 -> Z/2, x ↦ x mod 2: kernel {0,2}, image size 2
        let f = LinearMap { src: vec![4], tgt: vec![2], rows: vec![vec![(0, 1)]] };
        assert_eq!(f.image_log().unwrap(), (2, 1));
        assert_eq!(f.kernel().unwrap(), vec![vec![2]]);
        assert_eq!(f.solve(&[1]).unwrap(), Some(vec![1]));
        // Z/2 -> Z/4, x ↦ 2x
        let g = LinearMap { src: vec![2], tgt: vec![4], rows: vec![vec![(0, 2)]] };
        assert_eq!(g.solve(&[2]).unwrap(), Some(vec![1]));
        assert_eq!(g.solve(&[1]).unwrap(), None);
        assert!(g.kernel().unwrap().is_empty());
    }

    #[test]
    fn snf_quotients() {
        // Z^2 / <(2,0),(0,4),(2,2)>  ≅ Z/2 × Z/4? relations give Z/2 ⊕ Z/4 / <(1,1)·2>
        let (d, _) = integer_snf(2, &[vec![2, 0], vec![0, 4], vec![2, 2]]);
        let mut d: Vec<i64> = d.into_iter().filter(|&x| x != 1).collect();
        d.sort();
        assert_eq!(d, vec![2, 2]);
        let (exps, _) = quotient_structure(2, 2, 2, &[vec![2, 2]]);
        let mut ex = exps.clone();
        ex.sort();
        assert_eq!(ex, vec![1, 2]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn solutions_substitute(rows in prop::collection::vec(prop::collection::vec(0i64..27, 4), 1..6),
                                    xs in prop::collection::vec(0i64..27, 4),
                                    m in prop::sample::select(vec![4u64, 8, 9, 27, 12, 5])) {
                // build a consistent right-hand side from xs
                let b: Vec<i64> = rows.iter().map(|r| r.iter().zip(&xs).map(|(a, x)| a * x).sum::<i64>()).collect();
                let s = solve_mod(&rows, &b, m).expect("consistent by construction");
                for (r, bi) in rows.iter().zip(&b) {
                    let lhs: i64 = r.iter().zip(&s.x).map(|(a, &x)| a * x as i64).sum();
                    prop_assert_eq!((lhs - bi).rem_euclid(m as i64), 0);
                    for k in &s.kernel {
                        let v: i64 = r.iter().zip(k).map(|(a, &x)| a * x as i64).sum();
                        prop_assert_eq!(v.rem_euclid(m as i64), 0);
                    }
                }
            }

            #[test]
            fn kernel_is_complete(rows in prop::collection::vec(prop::collection::vec(0i64..8, 3), 1..4)) {
                // brute force the kernel over (Z/8)^3 and compare its size with the span of the generators
                let m = 8u64;
                let s = solve_mod(&rows, &vec![0; rows.len()], m).unwrap();
                let mut brute = 0usize;
                for a in 0..8i64 { for b in 0..8i64 { for c in 0..8i64 {
                    if rows.iter().all(|r| (r[0]*a + r[1]*b + r[2]*c).rem_euclid(8) == 0) { brute += 1; }
                }}}
                let mut span = std::collections::HashSet::new();
                span.insert(vec![0u64; 3]);
                loop {
                    let mut next = span.clone();
                    for v in &span { for k in &s.kernel {
                        next.insert((0..3).map(|i| (v[i] + k[i]) % m).collect::<Vec<u64>>());
                    }}
                    if next.len() == span.len() { break; }
                    span = next;
                }
                prop_assert_eq!(span.len(), brute);
            }
        }
    }
}
