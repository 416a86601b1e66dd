//! Ordinary and projective character tables.
//!
//! Nonabelian groups use the Burnside–Dixon method: the class-sum algebra is
//! diagonalized over F_ℓ with ℓ ≡ 1 (mod exp G), and each character value is
//! lifted to Q(ζ) from the eigenvalue multiplicities of ρ(g). Abelian groups
//! are handled directly by enumerating homomorphisms to μ_exp.

use serde::Serialize;

use super::{FiniteGroup, CHAR_CAP};
use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::cyclotomic::{CycloNumber, RootExponent};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    /// Class representatives in canonical class order.
    pub classes: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// rows[χ][class]
    pub rows: Vec<Vec<CycloNumber>>,
    pub dims: Vec<u64>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl CharacterTable {
    pub(super) fn compute(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        if n > CHAR_CAP {
            return Err(Error::cap("group for character table", n as u64, CHAR_CAP as u64));
        }
        let cs = g.class_structure();
        let classes = cs.reps();
        let class_sizes: Vec<usize> = cs.classes.iter().map(|c| c.len()).collect();
        let mut rows = if g.is_abelian() { abelian_rows(g, &classes) } else { dixon_rows(g)? };
        // canonical order: trivial first, then by dimension and values
        rows.sort_by(|a, b| {
            let ta = a.iter().all(|v| *v == CycloNumber::one());
            let tb = b.iter().all(|v| *v == CycloNumber::one());
            tb.cmp(&ta).then_with(|| a[0].cmp(&b[0])).then_with(|| a.cmp(b))
        });
        let dims = rows.iter().map(|r| r[0].to_integer().expect("integral degree") as u64).collect();
        let t = CharacterTable { classes, class_sizes, rows, dims, class_of: cs.class_of.clone() };
        if t.rows.len() != t.classes.len() || t.dims.iter().map(|d| d * d).sum::<u64>() != n as u64 {
            return Err(Error::Invalid("character table construction failed".into()));
        }
        Ok(t)
    }

    /// χ(g) for an element index g.
    pub fn value(&self, chi: usize, g: usize) -> &CycloNumber {
        &self.rows[chi][self.class_of[g]]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Σ_classes |cl|·χ_i·conj(χ_j), which is |G|·δ_ij for a correct table.
    pub fn inner_product(&self, i: usize, j: usize) -> CycloNumber {
        let mut s = CycloNumber::zero();
        for (c, &sz) in self.class_sizes.iter().enumerate() {
            s += &(&self.rows[i][c] * &self.rows[j][c].conj()).scale((sz as i64).into());
        }
        s
    }
}

fn abelian_rows(g: &FiniteGroup, classes: &[usize]) -> Vec<Vec<CycloNumber>> {
    let e = g.exponent() as u64;
    let gens = g.generators();
    let orders: Vec<u64> = gens.iter().map(|&x| g.element_order(x) as u64).collect();
    let mut rows = Vec::new();
    let mut choice = vec![0u64; gens.len()];
    loop {
        // exponents a_i with ζ_e^{a_i} of order dividing o_i
        let imgs: Vec<u64> = choice.iter().zip(&orders).map(|(&c, &o)| c * (e / o)).collect();
        if let Some(phi) = extend_exponents(g, &gens, &imgs, e) {
            rows.push(
                classes.iter().map(|&x| CycloNumber::root_of_unity(RootExponent::new(phi[x] as i64, e))).collect(),
            );
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return rows;
            }
            choice[k] += 1;
            if choice[k] < orders[k] {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Homomorphism G → Z/e determined by generator images, if consistent.
fn extend_exponents(g: &FiniteGroup, gens: &[usize], imgs: &[u64], e: u64) -> Option<Vec<u64>> {
    let n = g.order();
    let mut phi = vec![u64::MAX; n];
    phi[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let v = (phi[x] + t) % e;
            if phi[y] == u64::MAX {
                phi[y] = v;
                queue.push(y);
            } else if phi[y] != v {
                return None;
            }
        }
        i += 1;
    }
    Some(phi)
}

fn dixon_rows(g: &FiniteGroup) -> Result<Vec<Vec<CycloNumber>>> {
    let n = g.order();
    let cs = g.class_structure();
    let r = cs.classes.len();
    let e = g.exponent() as u64;
    let mut ell = e + 1;
    while !(is_prime(ell) && ell > 2 * n as u64 + 1) {
        ell += e;
    }
    let z = primitive_root_of_order(ell, e);
    // a[i][j][k] = #{(x, y) ∈ C_i × C_j : xy = rep_k}
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (k, cl) in cs.classes.iter().enumerate() {
        let gk = cl[0];
        for x in 0..n {
            let y = g.mul(g.inv(x), gk);
            a[cs.class_of[x]][cs.class_of[y]][k] += 1;
        }
    }
    // simultaneous eigenspaces of M_i, (M_i)_{jk} = a[i][j][k]
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity(r)];
    for ai in a.iter().skip(1) {
        if spaces.iter().all(|w| w.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for w in spaces {
            if w.len() == 1 {
                next.push(w);
                continue;
            }
            next.extend(split(&w, ai, ell));
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(Error::Invalid("class algebra did not split".into()));
    }
    let inv_class: Vec<usize> = cs.classes.iter().map(|c| cs.class_of[g.inv(c[0])]).collect();
    let mut rows = Vec::new();
    for w in spaces {
        let v = &w[0];
        let s0 = inv_mod(v[0], ell).ok_or_else(|| Error::Invalid("degenerate eigenvector".into()))?;
        let omega: Vec<u64> = v.iter().map(|&x| mul_mod(x, s0, ell)).collect();
        // d² = |G| / Σ ω_i ω_{i*} / |C_i|
        let mut s = 0u64;
        for i in 0..r {
            let t = mul_mod(omega[i], omega[inv_class[i]], ell);
            s = (s + mul_mod(t, inv_mod(cs.classes[i].len() as u64, ell).unwrap(), ell)) % ell;
        }
        let d2 = mul_mod(n as u64 % ell, inv_mod(s, ell).ok_or_else(|| Error::Invalid("zero norm".into()))?, ell);
        let d = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % ell == d2)
            .ok_or_else(|| Error::Invalid("no integral degree".into()))?;
        let chi: Vec<u64> = (0..r)
            .map(|i| mul_mod(mul_mod(omega[i], d, ell), inv_mod(cs.classes[i].len() as u64, ell).unwrap(), ell))
            .collect();
        // lift each value through eigenvalue multiplicities of ρ(g)
        let mut row = Vec::with_capacity(r);
        for cl in &cs.classes {
            let x = cl[0];
            let o = g.element_order(x) as u64;
            let zo = pow_mod(z, e / o, ell);
            let inv_o = inv_mod(o % ell, ell).unwrap();
            let powers: Vec<u64> = (0..o).map(|j| chi[cs.class_of[g.pow(x, j)]]).collect();
            let mut counts = vec![0i64; o as usize];
            for (k, c) in counts.iter_mut().enumerate() {
                let step = pow_mod(zo, (o - k as u64 % o) % o, ell);
                let mut acc = 0u64;
                let mut zz = 1u64;
                for &p in &powers {
                    acc = (acc + mul_mod(p, zz, ell)) % ell;
                    zz = mul_mod(zz, step, ell);
                }
                let m = mul_mod(acc, inv_o, ell);
                if m > d {
                    return Err(Error::Invalid("eigenvalue multiplicity out of range".into()));
                }
                *c = m as i64;
            }
            row.push(CycloNumber::from_root_counts(o, &counts));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn primitive_root_of_order(ell: u64, e: u64) -> u64 {
    let fac = crate::arith::factor(e);
    (2..ell)
        .map(|g| pow_mod(g, (ell - 1) / e, ell))
        .find(|&z| fac.iter().all(|&(p, _)| pow_mod(z, e / p, ell) != 1))
        .expect("prime ≡ 1 mod e has a primitive e-th root")
}

fn identity(r: usize) -> Vec<Vec<u64>> {
    (0..r).map(|i| (0..r).map(|j| (i == j) as u64).collect()).collect()
}

/// Reduced row echelon form mod ℓ (in place); returns pivot columns.
fn rref(m: &mut Vec<Vec<u64>>, ell: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = inv_mod(m[r][c], ell).unwrap();
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, ell);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    let s = mul_mod(f, m[r][k], ell);
                    m[i][k] = (m[i][k] + ell - s) % ell;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    m.truncate(r);
    piv
}

/// Right nullspace basis of a square or rectangular matrix mod ℓ.
fn nullspace(mut m: Vec<Vec<u64>>, ncols: usize, ell: u64) -> Vec<Vec<u64>> {
    let piv = rref(&mut m, ell);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (row, &p) in m.iter().zip(&piv) {
            v[p] = (ell - row[f]) % ell;
        }
        out.push(v);
    }
    out
}

/// Splits the invariant subspace W (rows form a basis) into eigenspaces of M.
fn split(w: &[Vec<u64>], mat: &[Vec<u64>], ell: u64) -> Vec<Vec<Vec<u64>>> {
    let mut basis = w.to_vec();
    let piv = rref(&mut basis, ell);
    let d = basis.len();
    let r = mat.len();
    // A[j][k]: coordinate j of M·w_k
    let mut amat = vec![vec![0u64; d]; d];
    for (k, wk) in basis.iter().enumerate() {
        for (j, &p) in piv.iter().enumerate() {
            let mut s = 0u64;
            for t in 0..r {
                if mat[p][t] != 0 && wk[t] != 0 {
                    s = (s + mul_mod(mat[p][t] % ell, wk[t], ell)) % ell;
                }
            }
            amat[j][k] = s;
        }
    }
    let cp = charpoly(&amat, ell);
    let mut out = Vec::new();
    for lam in 0..ell {
        // Horner evaluation
        let val = cp.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, lam, ell) + c) % ell);
        if val != 0 {
            continue;
        }
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|j| (0..d).map(|k| if j == k { (amat[j][k] + ell - lam) % ell } else { amat[j][k] }).collect())
            .collect();
        let ys = nullspace(shifted, d, ell);
        let vs: Vec<Vec<u64>> = ys
            .iter()
            .map(|y| {
                let mut v = vec![0u64; r];
                for (k, &c) in y.iter().enumerate() {
                    if c != 0 {
                        for t in 0..r {
                            v[t] = (v[t] + mul_mod(c, basis[k][t], ell)) % ell;
                        }
                    }
                }
                v
            })
            .collect();
        out.push(vs);
    }
    out
}

/// Characteristic polynomial (coefficients, constant first) via Hessenberg reduction.
fn charpoly(a: &[Vec<u64>], ell: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], ell).unwrap();
        for i in c + 2..n {
            let f = mul_mod(h[i][c], inv, ell);
            if f == 0 {
                continue;
            }
            for k in 0..n {
                let s = mul_mod(f, h[c + 1][k], ell);
                h[i][k] = (h[i][k] + ell - s) % ell;
            }
            for row in h.iter_mut() {
                let s = mul_mod(f, row[i], ell);
                row[c + 1] = (row[c + 1] + s) % ell;
            }
        }
    }
    // p_0 = 1, p_{k+1}(x) = (x - h_kk) p_k - Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j-1}) p_i
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let mut next = vec![0u64; k + 2];
        for (i, &c) in polys[k].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % ell;
            next[i] = (next[i] + ell - mul_mod(c, h[k][k], ell)) % ell;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], ell);
            let f = mul_mod(h[i][k], prod, ell);
            if f != 0 {
                for (t, &c) in polys[i].iter().enumerate() {
                    next[t] = (next[t] + ell - mul_mod(f, c, ell)) % ell;
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Projective irreducible characters for a Q/Z-valued 2-cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveIrreps {
    /// Order of the cocycle values; the extension is by Z/m.
    pub m: u64,
    pub dims: Vec<u64>,
    /// values[i][g]: trace of the projective representation at the element g.
    pub values: Vec<Vec<CycloNumber>>,
}

/// Projective irreducibles of G for the normalized 2-cocycle τ (given as an n×n
/// table), computed from the central extension Z/m → E → G defined by τ.
pub fn projective_irreps(g: &FiniteGroup, tau: &[Vec<RootExponent>]) -> Result<ProjectiveIrreps> {
    let n = g.order();
    if tau.len() != n || tau.iter().any(|r| r.len() != n) {
        return Err(Error::NotACocycle("cocycle table has the wrong shape".into()));
    }
    for x in 0..n {
        if !tau[0][x].is_zero() || !tau[x][0].is_zero() {
            return Err(Error::NotACocycle(format!("not normalized at element {x}")));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let l = tau[b][c] + tau[a][g.mul(b, c)];
                let r = tau[g.mul(a, b)][c] + tau[a][b];
                if l != r {
                    return Err(Error::NotACocycle(format!("cocycle identity fails at ({a},{b},{c})")));
                }
            }
        }
    }
    let m = tau.iter().flatten().fold(1u64, |acc, t| num_integer::lcm(acc, t.den()));
    if n as u64 * m > CHAR_CAP as u64 {
        return Err(Error::cap("central extension for projective characters", n as u64 * m, CHAR_CAP as u64));
    }
    let mu = m as usize;
    let ext = FiniteGroup::from_fn(n * mu, |x, y| {
        let (gx, ax) = (x / mu, x % mu);
        let (gy, ay) = (y / mu, y % mu);
        g.mul(gx, gy) * mu + (ax + ay + tau[gx][gy].over(m) as usize) % mu
    })?;
    let table = ext.character_table()?;
    let zeta = CycloNumber::root_of_unity(RootExponent::new(1, m));
    let mut dims = Vec::new();
    let mut values = Vec::new();
    for (i, &d) in table.dims.iter().enumerate() {
        // (0, 1) generates the central Z/m
        if *table.value(i, if mu == 1 { 0 } else { 1 }) != zeta.scale((d as i64).into()) {
            continue;
        }
        dims.push(d);
        values.push((0..n).map(|x| table.value(i, x * mu).clone()).collect());
    }
    Ok(ProjectiveIrreps { m, dims, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_orthogonality(g: &FiniteGroup) {
        let t = g.character_table().unwrap();
        for i in 0..t.len() {
            for j in 0..t.len() {
                let expect = if i == j { g.order() as i64 } else { 0 };
                assert_eq!(t.inner_product(i, j), CycloNumber::from_int(expect), "rows {i},{j}");
            }
        }
        assert_eq!(t.dims.iter().map(|d| d * d).sum::<u64>(), g.order() as u64);
    }

    #[test]
    fn small_tables() {
        let z2 = FiniteGroup::cyclic(2);
        let t = z2.character_table().unwrap();
        assert_eq!(t.rows, vec![vec![CycloNumber::one(), CycloNumber::one()], vec![
            CycloNumber::one(),
            CycloNumber::from_int(-1)
        ]]);
        let q8 = FiniteGroup::dicyclic(2);
        let t = q8.character_table().unwrap();
        assert_eq!(t.dims, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn orthogonality() {
        for g in [
            FiniteGroup::cyclic(7),
            FiniteGroup::abelian(&[2, 4]),
            FiniteGroup::dihedral(4),
            FiniteGroup::dihedral(5),
            FiniteGroup::dicyclic(2),
            FiniteGroup::dicyclic(3),
            // S4 and A4 via permutations
            FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 100).unwrap(),
            FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 100).unwrap(),
        ] {
            check_orthogonality(&g);
        }
    }

    #[test]
    fn a4_has_irrational_values() {
        let a4 = FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 100).unwrap();
        let t = a4.character_table().unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(t.dims, vec![1, 1, 1, 3]);
        assert!(t.rows.iter().flatten().any(|v| v.conductor() == 3));
    }

    fn alternating(n: usize) -> Vec<Vec<RootExponent>> {
        // (Z/2)², τ((a1,a2),(b1,b2)) = a1·b2 / 2 (index = 2·a1 + a2)
        (0..n)
            .map(|x| (0..n).map(|y| RootExponent::new(((x >> 1) & (y & 1)) as i64, 2)).collect())
            .collect()
    }

    #[test]
    fn projective_klein() {
        let v4 = FiniteGroup::abelian(&[2, 2]);
        let p = projective_irreps(&v4, &alternating(4)).unwrap();
        assert_eq!(p.dims, vec![2]);
        assert_eq!(p.m, 2);
        let trivial = vec![vec![RootExponent::zero(); 4]; 4];
        let p = projective_irreps(&v4, &trivial).unwrap();
        assert_eq!(p.dims, vec![1, 1, 1, 1]);
        let mut bad = trivial.clone();
        bad[1][2] = RootExponent::new(1, 3);
        assert!(matches!(projective_irreps(&v4, &bad), Err(Error::NotACocycle(_))));
    }
}
