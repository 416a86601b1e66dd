//! Modular data: pointed data of metric groups, twisted doubles of finite
//! groups, Gauss sums and central charge, Verlinde fusion, Deligne products.
//!
//! S is unnormalized: S_{00} = 1 and the unit row is the vector of dimensions.
//! The global dimension is D² = Σ d_i², and S·S̄ = D²·1.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycloNumber, RootCounts, RootExponent};
use crate::fingrp::{projective_irreps, FiniteGroup};
use crate::groupcoh::{coboundary, Cochain};
use crate::metric::{tuple_key, MetricGroup};
use crate::{Error, Result};

/// Largest group accepted by `double_modular_data`.
pub const DOUBLE_CAP: usize = 32;

/// Sparse fusion coefficients N_ij^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fusion {
    rank: usize,
    /// table[i·rank + j] lists (k, N_ij^k) for the nonzero coefficients, by k.
    table: Vec<Vec<(usize, u64)>>,
}

impl Fusion {
    pub fn from_fn(rank: usize, f: impl Fn(usize, usize) -> Vec<(usize, u64)>) -> Self {
        let table = (0..rank * rank)
            .map(|ij| {
                let mut v: Vec<(usize, u64)> = f(ij / rank, ij % rank).into_iter().filter(|e| e.1 != 0).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Fusion { rank, table }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let row = &self.table[i * self.rank + j];
        row.binary_search_by_key(&k, |e| e.0).map(|p| row[p].1).unwrap_or(0)
    }

    /// The decomposition of i ⊗ j.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.table[i * self.rank + j]
    }

    /// (i⊗j)⊗k = i⊗(j⊗k) for all triples.
    pub fn is_associative(&self) -> bool {
        let n = self.rank;
        (0..n).into_par_iter().all(|i| {
            let mut left = vec![0u64; n];
            let mut right = vec![0u64; n];
            (0..n).all(|j| {
                (0..n).all(|k| {
                    for &(m, c) in self.product(i, j) {
                        for &(l, d) in self.product(m, k) {
                            left[l] += c * d;
                        }
                    }
                    for &(m, c) in self.product(j, k) {
                        for &(l, d) in self.product(i, m) {
                            right[l] += c * d;
                        }
                    }
                    let same = left == right;
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    same
                })
            })
        })
    }

    /// Whether label 0 is a two-sided unit.
    pub fn has_unit(&self) -> bool {
        (0..self.rank).all(|i| self.product(0, i) == [(i, 1)] && self.product(i, 0) == [(i, 1)])
    }
}

impl Serialize for Fusion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let quads: Vec<[u64; 4]> = (0..self.rank * self.rank)
            .flat_map(|ij| {
                self.table[ij].iter().map(move |&(k, c)| [(ij / self.rank) as u64, (ij % self.rank) as u64, k as u64, c])
            })
            .collect();
        quads.serialize(s)
    }
}

/// Numerical modular data with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularData {
    pub labels: Vec<String>,
    pub dims: Vec<u64>,
    pub twists: Vec<RootExponent>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<CycloNumber>>,
    #[serde(skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub fusion: Option<Fusion>,
}

impl ModularData {
    /// Checks shapes, positivity of dimensions, symmetry of S and S_{0i} = d_i.
    pub fn new(labels: Vec<String>, dims: Vec<u64>, twists: Vec<RootExponent>, s: Vec<Vec<CycloNumber>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || dims.len() != n || twists.len() != n || s.len() != n || s.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("labels, dims, twists and S must have matching sizes".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Invalid("dimensions must be positive".into()));
        }
        if !twists[0].is_zero() || dims[0] != 1 {
            return Err(Error::Invalid("the first label must be the unit".into()));
        }
        for i in 0..n {
            if s[0][i] != CycloNumber::from_int(dims[i] as i64) {
                return Err(Error::Invalid(format!("S row of the unit differs from dims at {}", labels[i])));
            }
            for j in 0..i {
                if s[i][j] != s[j][i] {
                    return Err(Error::Invalid(format!("S is not symmetric at ({}, {})", labels[i], labels[j])));
                }
            }
        }
        Ok(ModularData { labels, dims, twists, s, fusion: None })
    }

    /// Revalidates after deserialization.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let d: ModularData = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        ModularData::new(d.labels, d.dims, d.twists, d.s)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// D² = Σ d_i².
    pub fn global_dim(&self) -> u64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// S·S̄ᵀ = D²·1, checked exactly.
    pub fn check_unitarity(&self) -> Result<()> {
        let sp = SparseMatrix::new(&self.s);
        let rc = RootCounts::new(sp.n);
        let d2 = self.global_dim() as i128 * sp.den * sp.den;
        let n = self.rank();
        let ok = (0..n).into_par_iter().all(|i| {
            let mut counts = vec![0i64; sp.n as usize];
            (0..n).all(|k| {
                counts.iter_mut().for_each(|c| *c = 0);
                for m in 0..n {
                    sp.accumulate(sp.entry(i, m), sp.entry(k, m), 1, true, &mut counts);
                }
                rc.to_integer(&counts) == Some(if i == k { d2 } else { 0 })
            })
        });
        if ok {
            Ok(())
        } else {
            Err(Error::SingularS)
        }
    }
}

/// Entries of an S-matrix as integer combinations of powers of ζ_n over a common
/// denominator, stored row-major in one flat array.
struct SparseMatrix {
    n: u64,
    den: i128,
    size: usize,
    offsets: Vec<usize>,
    terms: Vec<(u32, i64)>,
    /// Every entry is a single term c·ζ^e: exponents and coefficients, row-major.
    monomial: Option<(Vec<u32>, Vec<i64>)>,
}

impl SparseMatrix {
    fn new(s: &[Vec<CycloNumber>]) -> Self {
        let size = s.len();
        let n = s.iter().flatten().fold(1u64, |a, z| num_integer::lcm(a, z.conductor()));
        let den = s.iter().flatten().fold(1i64, |a, z| num_integer::lcm(a, z.numerators_at(n).1));
        let mut offsets = vec![0];
        let mut terms = Vec::new();
        for z in s.iter().flatten() {
            let (num, d) = z.numerators_at(n);
            let f = (den / d) as i128;
            for (e, &c) in num.iter().enumerate() {
                if c != 0 {
                    terms.push((e as u32, i64::try_from(c * f).expect("S coefficient overflow")));
                }
            }
            offsets.push(terms.len());
        }
        let monomial = offsets.windows(2).all(|w| w[1] - w[0] <= 1).then(|| {
            offsets
                .windows(2)
                .map(|w| if w[1] > w[0] { terms[w[0]] } else { (0, 0) })
                .unzip()
        });
        SparseMatrix { n, den: den as i128, size, offsets, terms, monomial }
    }

    fn entry(&self, i: usize, j: usize) -> &[(u32, i64)] {
        let p = i * self.size + j;
        &self.terms[self.offsets[p]..self.offsets[p + 1]]
    }

    /// counts += scale · x · y (or x · ȳ), in Z[Z/n].
    fn accumulate(&self, x: &[(u32, i64)], y: &[(u32, i64)], scale: i64, conj_y: bool, counts: &mut [i64]) {
        let n = self.n as u32;
        for &(e1, c1) in x {
            for &(e2, c2) in y {
                let e = if conj_y { (e1 + n - e2) % n } else { (e1 + e2) % n };
                counts[e as usize] += scale * c1 * c2;
            }
        }
    }
}

/// e^{2πi q} for a root of unity given as a cyclotomic number.
fn root_exponent_of(z: &CycloNumber) -> Option<RootExponent> {
    let c = z.conductor();
    let m = if c % 2 == 1 { 2 * c } else { c };
    (0..m).map(|k| RootExponent::new(k as i64, m)).find(|&q| CycloNumber::root_of_unity(q) == *z)
}

/// M(A, θ): labels A, dims 1, twists θ, S_{ab} = e(b(a,b)), fusion the group law.
pub fn pointed_modular_data(m: &MetricGroup) -> ModularData {
    let a = m.group();
    let n = a.order() as usize;
    let labels = a.elements().map(|x| tuple_key(&x)).collect();
    let twists: Vec<RootExponent> = (0..n).map(|i| m.q(i)).collect();
    let s = (0..n)
        .map(|i| (0..n).map(|j| CycloNumber::root_of_unity(m.form().b(i, j))).collect())
        .collect();
    let mut d = ModularData::new(labels, vec![1; n], twists, s).expect("pointed data is well formed");
    d.fusion = Some(Fusion::from_fn(n, |i, j| vec![(a.add_index(i, j), 1)]));
    d
}

/// Precomputed ω together with the derived 2-cochains of the twisted double:
/// θ_g(x,y) = ω(g,x,y) + ω(x,y,(xy)⁻¹gxy) − ω(x,x⁻¹gx,y) and
/// γ_x(g,h) = ω(g,h,x) + ω(x,x⁻¹gx,x⁻¹hx) − ω(g,x,x⁻¹hx).
struct Twisting<'a> {
    g: &'a FiniteGroup,
    w: Vec<RootExponent>,
}

impl Twisting<'_> {
    fn w(&self, a: usize, b: usize, c: usize) -> RootExponent {
        let n = self.g.order();
        self.w[(a * n + b) * n + c]
    }

    fn theta(&self, g: usize, x: usize, y: usize) -> RootExponent {
        let gr = self.g;
        let xy = gr.mul(x, y);
        self.w(g, x, y) + self.w(x, y, gr.conj(gr.inv(xy), g)) - self.w(x, gr.conj(gr.inv(x), g), y)
    }

    fn gamma(&self, x: usize, g: usize, h: usize) -> RootExponent {
        let gr = self.g;
        let xi = gr.inv(x);
        self.w(g, h, x) + self.w(x, gr.conj(xi, g), gr.conj(xi, h)) - self.w(g, x, gr.conj(xi, h))
    }
}

/// One simple object of the double: class representative, projective character
/// of its centralizer, and the trace function Φ(g, h) = tr(P_g h) on its class.
struct DoubleLabel {
    class: usize,
    rep: usize,
    irrep: usize,
    dim: u64,
    twist: RootExponent,
    /// phi[pos(g)·|Γ| + h] for g in the class and h in C(g).
    phi: Vec<Option<CycloNumber>>,
}

/// Modular data of the twisted double of Γ for a normalized Q/Z-valued 3-cocycle ω.
/// Simple objects are pairs (class of a, θ_a-projective irreducible of C(a)),
/// labelled "a:r" with a the class representative and r the irreducible's position
/// (trivial first, then by dimension and values).
pub fn double_modular_data(gamma: &FiniteGroup, omega: &Cochain) -> Result<ModularData> {
    let n = gamma.order();
    if n > DOUBLE_CAP {
        return Err(Error::cap("group for the twisted double", n as u64, DOUBLE_CAP as u64));
    }
    if omega.degree() != 3 || omega.group() != gamma {
        return Err(Error::Invalid("ω must be a 3-cochain on Γ".into()));
    }
    if !omega.action().is_trivial() || omega.module().rank() > 1 {
        return Err(Error::Invalid("ω must take values in Q/Z with trivial action".into()));
    }
    if !coboundary(omega).is_zero() {
        return Err(Error::NotACocycle("ω".into()));
    }
    let w = (0..n * n * n).map(|i| omega.value_qz(&[i / (n * n), (i / n) % n, i % n])).collect();
    let tw = Twisting { g: gamma, w };
    let cs = gamma.class_structure();
    let mut labels: Vec<DoubleLabel> = Vec::new();
    // x_g with x_g a x_g⁻¹ = g, least such x
    let mut transporter = vec![usize::MAX; n];
    let mut pos_in_class = vec![0usize; n];
    for (ci, class) in cs.classes.iter().enumerate() {
        let a = class[0];
        for (p, &g) in class.iter().enumerate() {
            pos_in_class[g] = p;
            transporter[g] = (0..n).find(|&x| gamma.conj(x, a) == g).expect("conjugate");
        }
        let cent = &cs.centralizers[ci];
        let mut local = vec![usize::MAX; n];
        for (i, &x) in cent.iter().enumerate() {
            local[x] = i;
        }
        let cg = FiniteGroup::from_fn(cent.len(), |x, y| local[gamma.mul(cent[x], cent[y])])?;
        let tau: Vec<Vec<RootExponent>> =
            cent.iter().map(|&x| cent.iter().map(|&y| tw.theta(a, x, y)).collect()).collect();
        let irr = projective_irreps(&cg, &tau)?;
        let mut order: Vec<usize> = (0..irr.dims.len()).collect();
        let one = CycloNumber::one();
        order.sort_by(|&i, &j| {
            let ti = irr.values[i].iter().all(|v| *v == one);
            let tj = irr.values[j].iter().all(|v| *v == one);
            tj.cmp(&ti).then(irr.dims[i].cmp(&irr.dims[j])).then_with(|| irr.values[i].cmp(&irr.values[j]))
        });
        for (r, &i) in order.iter().enumerate() {
            let chi = &irr.values[i];
            let d = irr.dims[i];
            let ratio = chi[local[a]].scale((1, d as i64).into());
            let twist = root_exponent_of(&ratio)
                .ok_or_else(|| Error::Invalid(format!("χ(a)/χ(e) is not a root of unity for class {a}")))?;
            let mut phi = vec![None; class.len() * n];
            for &g in class {
                let x = transporter[g];
                let xi = gamma.inv(x);
                for h in 0..n {
                    if gamma.mul(g, h) != gamma.mul(h, g) {
                        continue;
                    }
                    let k = gamma.mul(gamma.mul(xi, h), x);
                    let e = tw.theta(g, h, x) - tw.theta(g, x, k);
                    phi[pos_in_class[g] * n + h] = Some(&CycloNumber::root_of_unity(e) * &chi[local[k]]);
                }
                // the ribbon element Σ P_g g acts by the twist on every component
                let diag = phi[pos_in_class[g] * n + g].as_ref().expect("g commutes with itself");
                if *diag != chi[local[a]] {
                    return Err(Error::Invalid(format!("twist is not constant on the class of {a}")));
                }
            }
            labels.push(DoubleLabel { class: ci, rep: a, irrep: r, dim: class.len() as u64 * d, twist, phi });
        }
    }
    // S_VW = θ_V⁻¹θ_W⁻¹ Σ_{g∈A, h∈B, gh=hg} e(γ_{gh}(g,h)) Φ_V(g,gh) Φ_W(h,gh)
    let pairs: Vec<Vec<Vec<(usize, usize, CycloNumber)>>> = cs
        .classes
        .iter()
        .map(|ca| {
            cs.classes
                .iter()
                .map(|cb| {
                    let mut v = Vec::new();
                    for &g in ca {
                        for &h in cb {
                            let gh = gamma.mul(g, h);
                            if gh == gamma.mul(h, g) {
                                v.push((g, h, CycloNumber::root_of_unity(tw.gamma(gh, g, h))));
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let nl = labels.len();
    let s: Vec<Vec<CycloNumber>> = (0..nl)
        .into_par_iter()
        .map(|i| {
            let v = &labels[i];
            (0..nl)
                .map(|j| {
                    let u = &labels[j];
                    let mut acc = CycloNumber::zero();
                    for (g, h, c) in &pairs[v.class][u.class] {
                        let gh = gamma.mul(*g, *h);
                        let a = v.phi[pos_in_class[*g] * n + gh].as_ref().expect("commuting pair");
                        let b = u.phi[pos_in_class[*h] * n + gh].as_ref().expect("commuting pair");
                        acc += &(&(c * a) * b);
                    }
                    &acc * &CycloNumber::root_of_unity(-(v.twist + u.twist))
                })
                .collect()
        })
        .collect();
    let names = labels.iter().map(|l| format!("{}:{}", l.rep, l.irrep)).collect();
    let dims: Vec<u64> = labels.iter().map(|l| l.dim).collect();
    if dims.iter().map(|d| d * d).sum::<u64>() != (n * n) as u64 {
        return Err(Error::Invalid("dimensions of the double do not add up to |Γ|²".into()));
    }
    ModularData::new(names, dims, labels.iter().map(|l| l.twist).collect(), s)
}

/// The untwisted double of Γ.
pub fn double_untwisted(gamma: &FiniteGroup) -> Result<ModularData> {
    let g = std::sync::Arc::new(gamma.clone());
    let omega = Cochain::from_qz(&g, 3, |_| RootExponent::zero())?;
    double_modular_data(gamma, &omega)
}

/// Multiplicative central charge τ+/√D².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Charge {
    #[serde(rename = "1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
    /// τ+ = ±√D² with D² not a square; the sign is not resolved.
    #[serde(rename = "irrational")]
    Irrational,
    #[serde(rename = "non-real")]
    NonReal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussCharge {
    pub tau_plus: CycloNumber,
    pub tau_minus: CycloNumber,
    pub charge: Charge,
    pub fpdim: u64,
}

/// τ± = Σ d_i² e(±θ_i), the central charge and FPdim = Σ d_i².
pub fn gauss_charge(d: &ModularData) -> GaussCharge {
    let tau = |sign: i64| {
        d.dims.iter().zip(&d.twists).fold(CycloNumber::zero(), |acc, (&di, t)| {
            &acc + &CycloNumber::root_of_unity(t.scale(sign)).scale(((di * di) as i64).into())
        })
    };
    let tau_plus = tau(1);
    let tau_minus = tau(-1);
    let fpdim = d.global_dim();
    let charge = if &tau_plus * &tau_plus != CycloNumber::from_int(fpdim as i64) {
        Charge::NonReal
    } else {
        match tau_plus.to_integer() {
            Some(t) if t > 0 => Charge::Plus,
            Some(_) => Charge::Minus,
            None => Charge::Irrational,
        }
    };
    GaussCharge { tau_plus, tau_minus, charge, fpdim }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CpVerdict {
    CpPlus,
    CpMinus,
    /// Number of the first failing condition: 1 FPdim is an even power of p,
    /// 2 dimensions are positive integers, 3 the charge is ±1.
    FailsCriterion(u8),
}

impl CpVerdict {
    pub fn as_str(&self) -> String {
        match self {
            CpVerdict::CpPlus => "CpPlus".into(),
            CpVerdict::CpMinus => "CpMinus".into(),
            CpVerdict::FailsCriterion(i) => format!("FailsCriterion({i})"),
        }
    }
}

/// Checks FPdim = p^{2k}, integrality and positivity of dimensions, and charge ±1.
pub fn check_cp_criteria(d: &ModularData, p: u64) -> CpVerdict {
    let gc = gauss_charge(d);
    let mut f = gc.fpdim;
    let mut k = 0;
    while p > 1 && f.is_multiple_of(p) {
        f /= p;
        k += 1;
    }
    if f != 1 || k % 2 != 0 {
        return CpVerdict::FailsCriterion(1);
    }
    if d.dims.contains(&0) {
        return CpVerdict::FailsCriterion(2);
    }
    match gc.charge {
        Charge::Plus => CpVerdict::CpPlus,
        Charge::Minus => CpVerdict::CpMinus,
        _ => CpVerdict::FailsCriterion(3),
    }
}

/// N_ij^k = D⁻² Σ_m S_im S_jm S̄_km / d_m, required to be nonnegative integers.
pub fn verlinde_fusion(d: &ModularData) -> Result<Fusion> {
    d.check_unitarity()?;
    let n = d.rank();
    let sp = SparseMatrix::new(&d.s);
    let rc = RootCounts::new(sp.n);
    let l = d.dims.iter().fold(1u64, |a, &x| num_integer::lcm(a, x)) as i64;
    let scale = d.global_dim() as i128 * l as i128 * sp.den * sp.den * sp.den;
    let nn = sp.n as usize;
    let weight: Vec<i64> = d.dims.iter().map(|&x| l / x as i64).collect();
    let coefficient = |i: usize, j: usize, k: usize, counts: &[i64]| -> Result<u64> {
        rc.to_integer(counts).filter(|x| x % scale == 0 && *x >= 0).map(|x| (x / scale) as u64).ok_or_else(|| {
            Error::Invalid(format!(
                "Verlinde coefficient N_({},{})^{} is not a nonnegative integer",
                d.labels[i], d.labels[j], d.labels[k]
            ))
        })
    };
    let rows: Vec<Result<Vec<Vec<(usize, u64)>>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![Vec::new(); n];
            let mut counts = vec![0i64; nn];
            if let Some((exps, coefs)) = &sp.monomial {
                // fast path: every entry is c·ζ^e
                let conj: Vec<u32> = exps.iter().map(|&e| (nn as u32 - e) % nn as u32).collect();
                let mut ve = vec![0u32; n];
                let mut vc = vec![0i64; n];
                for j in i..n {
                    for m in 0..n {
                        ve[m] = (exps[i * n + m] + exps[j * n + m]) % nn as u32;
                        vc[m] = coefs[i * n + m] * coefs[j * n + m] * weight[m];
                    }
                    for k in 0..n {
                        counts.iter_mut().for_each(|c| *c = 0);
                        let (ce, cc) = (&conj[k * n..(k + 1) * n], &coefs[k * n..(k + 1) * n]);
                        for m in 0..n {
                            let mut e = (ve[m] + ce[m]) as usize;
                            if e >= nn {
                                e -= nn;
                            }
                            counts[e] += vc[m] * cc[m];
                        }
                        let x = coefficient(i, j, k, &counts)?;
                        if x != 0 {
                            out[j].push((k, x));
                        }
                    }
                }
                return Ok(out);
            }
            let mut v: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n];
            for j in i..n {
                for m in 0..n {
                    counts.iter_mut().for_each(|c| *c = 0);
                    sp.accumulate(sp.entry(i, m), sp.entry(j, m), weight[m], false, &mut counts);
                    v[m] = counts.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| (e as u32, c)).collect();
                }
                for k in 0..n {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for m in 0..n {
                        sp.accumulate(&v[m], sp.entry(k, m), 1, true, &mut counts);
                    }
                    let x = coefficient(i, j, k, &counts)?;
                    if x != 0 {
                        out[j].push((k, x));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut table = vec![Vec::new(); n * n];
    for (i, r) in rows.into_iter().enumerate() {
        for (j, v) in r?.into_iter().enumerate().skip(i) {
            table[j * n + i] = v.clone();
            table[i * n + j] = v;
        }
    }
    Ok(Fusion { rank: n, table })
}

/// D1 ⊠ D2 with labels "l1|l2".
pub fn deligne_product(d1: &ModularData, d2: &ModularData) -> ModularData {
    let (n1, n2) = (d1.rank(), d2.rank());
    let idx = |i: usize| (i / n2, i % n2);
    let labels = (0..n1 * n2).map(|i| format!("{}|{}", d1.labels[i / n2], d2.labels[i % n2])).collect();
    let dims = (0..n1 * n2).map(|i| d1.dims[i / n2] * d2.dims[i % n2]).collect();
    let twists = (0..n1 * n2).map(|i| d1.twists[i / n2] + d2.twists[i % n2]).collect();
    let s = (0..n1 * n2)
        .map(|i| {
            let (a, b) = idx(i);
            (0..n1 * n2)
                .map(|j| {
                    let (c, e) = idx(j);
                    &d1.s[a][c] * &d2.s[b][e]
                })
                .collect()
        })
        .collect();
    let mut d = ModularData::new(labels, dims, twists, s).expect("product of modular data");
    if let (Some(f1), Some(f2)) = (&d1.fusion, &d2.fusion) {
        d.fusion = Some(Fusion::from_fn(n1 * n2, |i, j| {
            let ((a, b), (c, e)) = (idx(i), idx(j));
            let mut v = Vec::new();
            for &(k1, x) in f1.product(a, c) {
                for &(k2, y) in f2.product(b, e) {
                    v.push((k1 * n2 + k2, x * y));
                }
            }
            v
        }));
    }
    d
}

/// For Γ abelian and an untwisted double, the bijection from double labels to
/// the hyperbolic metric group on Γ ⊕ Γ̂, read off from S: label (g, χ) goes to
/// (g, c) with χ(e_i) = e(c_i/o_i). Returns the image index of every label after
/// checking that twists and S agree.
pub fn match_abelian_double(a: &crate::finab::FinAbGroup, double: &ModularData) -> Result<Vec<usize>> {
    let hyp = crate::metric::hyperbolic(a);
    let pointed = pointed_modular_data(&hyp);
    let na = a.order() as usize;
    if double.rank() != na * na {
        return Err(Error::Invalid("rank does not match |Γ|²".into()));
    }
    let parse = |l: &str| -> Option<(usize, usize)> {
        let (g, r) = l.split_once(':')?;
        Some((g.parse().ok()?, r.parse().ok()?))
    };
    let mut trivial_of = vec![usize::MAX; na];
    let mut parsed = Vec::with_capacity(double.rank());
    for (i, l) in double.labels.iter().enumerate() {
        let (g, r) = parse(l).ok_or_else(|| Error::Invalid(format!("unexpected label {l}")))?;
        if g >= na {
            return Err(Error::Invalid(format!("unexpected label {l}")));
        }
        if r == 0 {
            trivial_of[g] = i;
        }
        parsed.push(g);
    }
    let mut image = Vec::with_capacity(double.rank());
    for (i, &g) in parsed.iter().enumerate() {
        let mut c = Vec::with_capacity(a.rank());
        for (k, &o) in a.orders().iter().enumerate() {
            let t = trivial_of[a.index(&a.basis(k))];
            let q = root_exponent_of(&double.s[i][t]).ok_or_else(|| Error::Invalid("S entry is not a root of unity".into()))?;
            if o % q.den() != 0 {
                return Err(Error::Invalid("character value of the wrong order".into()));
            }
            c.push(q.over(o));
        }
        image.push(g * na + a.index(&c));
    }
    let mut seen = image.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != image.len() {
        return Err(Error::Invalid("label map is not a bijection".into()));
    }
    for i in 0..double.rank() {
        if double.twists[i] != pointed.twists[image[i]] {
            return Err(Error::Invalid(format!("twist mismatch at {}", double.labels[i])));
        }
        for j in 0..double.rank() {
            if double.s[i][j] != pointed.s[image[i]][image[j]] {
                return Err(Error::Invalid(format!("S mismatch at ({}, {})", double.labels[i], double.labels[j])));
            }
        }
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finab::{AbAction, FinAbGroup};
    use crate::frobalg::norm_form;
    use crate::groupcoh::cohomology_group;
    use crate::metric::validate;
    use std::sync::Arc;

    fn r(n: i64, d: u64) -> RootExponent {
        RootExponent::new(n, d)
    }

    fn twist_multiset(d: &ModularData) -> Vec<RootExponent> {
        let mut t = d.twists.clone();
        t.sort();
        t
    }

    fn toric() -> MetricGroup {
        validate(&FinAbGroup::new(vec![2, 2]).unwrap(), vec![r(0, 1), r(0, 1), r(0, 1), r(1, 2)]).unwrap()
    }

    #[test]
    fn pointed_examples() {
        let t = pointed_modular_data(&MetricGroup::trivial());
        assert_eq!(t.rank(), 1);
        assert_eq!(gauss_charge(&t).tau_plus, CycloNumber::one());
        let d = pointed_modular_data(&toric());
        assert_eq!(twist_multiset(&d), vec![r(0, 1), r(0, 1), r(0, 1), r(1, 2)]);
        assert_eq!(gauss_charge(&d).tau_plus, CycloNumber::from_int(2));
        for p in [2, 3, 5] {
            let d = pointed_modular_data(&norm_form(p).unwrap());
            let g = gauss_charge(&d);
            assert_eq!(g.tau_plus, CycloNumber::from_int(-(p as i64)));
            assert_eq!(g.charge, Charge::Minus);
            assert_eq!(g.fpdim, p * p);
            assert_eq!(check_cp_criteria(&d, p), CpVerdict::CpMinus);
            d.check_unitarity().unwrap();
            assert_eq!(verlinde_fusion(&d).unwrap(), *d.fusion.as_ref().unwrap());
        }
        let z3 = validate(&FinAbGroup::cyclic(3), (0..3).map(|x| r(x * x, 3)).collect()).unwrap();
        assert_eq!(check_cp_criteria(&pointed_modular_data(&z3), 3), CpVerdict::FailsCriterion(1));
        assert_eq!(gauss_charge(&pointed_modular_data(&z3)).charge, Charge::NonReal);
    }

    #[test]
    fn double_z2() {
        let g = FiniteGroup::cyclic(2);
        let d = double_untwisted(&g).unwrap();
        assert_eq!(d.rank(), 4);
        assert_eq!(twist_multiset(&d), vec![r(0, 1), r(0, 1), r(0, 1), r(1, 2)]);
        let gc = gauss_charge(&d);
        assert_eq!(gc.tau_plus, CycloNumber::from_int(2));
        assert_eq!(gc.fpdim, 4);
        assert_eq!(gc.charge, Charge::Plus);
        match_abelian_double(&FinAbGroup::cyclic(2), &d).unwrap();
        let f = verlinde_fusion(&d).unwrap();
        assert!(f.is_associative() && f.has_unit());
        // fusion of (Z/2)²: every label squares to the unit
        for i in 0..4 {
            assert_eq!(f.product(i, i), [(0, 1)]);
        }
    }

    #[test]
    fn double_z2_twisted() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let act = Arc::new(AbAction::trivial(g.clone(), FinAbGroup::cyclic(2)));
        let h3 = cohomology_group(&act, 3).unwrap();
        let om = &h3.representatives[0];
        let d = double_modular_data(&g, om).unwrap();
        assert_eq!(d.dims, vec![1; 4]);
        assert_eq!(twist_multiset(&d), vec![r(0, 1), r(0, 1), r(1, 4), r(3, 4)]);
        let gc = gauss_charge(&d);
        assert_eq!(gc.tau_plus, CycloNumber::from_int(2));
        assert_eq!(gc.tau_minus, CycloNumber::from_int(2));
        assert_eq!(check_cp_criteria(&d, 2), CpVerdict::CpPlus);
        let f = verlinde_fusion(&d).unwrap();
        assert!(f.is_associative() && f.has_unit());
    }

    #[test]
    fn double_dihedral() {
        let g = FiniteGroup::dihedral(4);
        let d = double_untwisted(&g).unwrap();
        assert_eq!(d.rank(), 22);
        assert_eq!(d.global_dim(), 64);
        let gc = gauss_charge(&d);
        assert_eq!(gc.tau_plus, CycloNumber::from_int(8));
        assert_eq!(&gc.tau_plus * &gc.tau_minus, CycloNumber::from_int(64));
        assert_eq!(check_cp_criteria(&d, 2), CpVerdict::CpPlus);
        let f = verlinde_fusion(&d).unwrap();
        assert!(f.is_associative() && f.has_unit());
        let q8 = double_untwisted(&FiniteGroup::dicyclic(2)).unwrap();
        assert_eq!(q8.rank(), 22);
        verlinde_fusion(&q8).unwrap();
    }

    #[test]
    fn double_abelian_matches_hyperbolic() {
        for orders in [vec![4], vec![2, 2], vec![3]] {
            let a = FinAbGroup::new(orders).unwrap();
            let d = double_untwisted(&a.to_finite_group()).unwrap();
            match_abelian_double(&a, &d).unwrap();
        }
    }

    #[test]
    fn twisted_doubles_of_small_abelian_groups() {
        for orders in [vec![4], vec![2, 2], vec![3]] {
            let a = FinAbGroup::new(orders).unwrap();
            let g = Arc::new(a.to_finite_group());
            let p = crate::arith::prime_power(a.order()).unwrap().0;
            let act = Arc::new(AbAction::trivial(g.clone(), FinAbGroup::cyclic(p)));
            for om in cohomology_group(&act, 3).unwrap().classes(&act) {
                let d = double_modular_data(&g, &om).unwrap();
                let gc = gauss_charge(&d);
                assert_eq!(gc.tau_plus, CycloNumber::from_int(a.order() as i64));
                assert_eq!(check_cp_criteria(&d, p), CpVerdict::CpPlus);
                verlinde_fusion(&d).unwrap();
            }
        }
    }

    #[test]
    fn deligne() {
        let n = pointed_modular_data(&norm_form(3).unwrap());
        let t = pointed_modular_data(&MetricGroup::trivial());
        let nt = deligne_product(&n, &t);
        assert_eq!(nt.twists, n.twists);
        assert_eq!(nt.s, n.s);
        let nn = deligne_product(&n, &n);
        assert_eq!(gauss_charge(&nn).tau_plus, CycloNumber::from_int(9));
        assert_eq!(check_cp_criteria(&nn, 3), CpVerdict::CpPlus);
        assert_eq!(verlinde_fusion(&nn).unwrap(), *nn.fusion.as_ref().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let d = double_untwisted(&FiniteGroup::cyclic(2)).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(ModularData::from_json(&v).unwrap(), d);
    }
}
