//! Finite fields, additive polynomials and the finite fake-Heisenberg model.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::{ipow, is_prime};
use crate::cyclotomic::RootExponent;
use crate::finab::FinAbGroup;
use crate::fingrp::FiniteGroup;
use crate::metric::{validate, MetricGroup};
use crate::{Error, Result};

/// Largest field order supported.
pub const FIELD_CAP: u64 = 1 << 16;
/// Largest fake-Heisenberg group order (the table is materialized and checked).
pub const HEISENBERG_CAP: u64 = 1024;

/// Field element: the index Σ c_i p^i of the coefficient vector in the power basis.
pub type Fq = u32;

/// F_{p^m} = F_p[x]/(f) with f the lexicographically least monic irreducible of degree m.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<Fq>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.m == o.m
    }
}
impl Eq for FiniteField {}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bc % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_of_degree(p: u64, d: u32, k: u64) -> Vec<u64> {
    let mut f: Vec<u64> = (0..d).map(|i| k / ipow(p, i) % p).collect();
    f.push(1);
    f
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u32;
    for d in 1..=m / 2 {
        for k in 0..ipow(p, d) {
            let g = monic_of_degree(p, d, k);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::Invalid("field degree must be at least 1".into()));
        }
        let q = p.checked_pow(m).filter(|&q| q <= FIELD_CAP).ok_or_else(|| {
            Error::cap("field order", p.saturating_pow(m), FIELD_CAP)
        })?;
        let modulus = (0..ipow(p, m))
            .map(|k| monic_of_degree(p, m, k))
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");
        let mut f = FiniteField { p, m, q, modulus, exp: vec![], log: vec![] };
        // find a primitive element and build log tables
        for g in 1..q as Fq {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x: Fq = 1;
            loop {
                exp.push(x);
                x = f.mul_slow(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() as u64 == q - 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                f.exp = exp;
                f.log = log;
                break;
            }
        }
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.m
    }
    pub fn order(&self) -> u64 {
        self.q
    }
    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn digits(&self, x: Fq) -> Vec<u64> {
        (0..self.m).map(|i| x as u64 / ipow(self.p, i) % self.p).collect()
    }

    pub fn from_digits(&self, d: &[u64]) -> Fq {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c % self.p) as Fq
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Fq {
        k.rem_euclid(self.p as i64) as Fq
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q as Fq
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as Fq
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out as Fq
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.m as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_digits(&r)
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as usize - 1;
        self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % n]
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let n = self.q as usize - 1;
        Some(self.exp[(n - self.log[a as usize] as usize) % n])
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u128;
        self.exp[((self.log[a as usize] as u128 * e as u128) % n) as usize]
    }

    /// x ↦ x^p
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p)
    }

    /// x ↦ x^{p^k}, with k taken modulo m (so negative powers are allowed).
    pub fn frobenius_pow(&self, a: Fq, k: i64) -> Fq {
        let k = k.rem_euclid(self.m as i64) as u32;
        self.pow(a, ipow(self.p, k))
    }

    /// Trace to F_p, as an integer in 0..p.
    pub fn trace(&self, a: Fq) -> u64 {
        let mut s = 0;
        let mut x = a;
        for _ in 0..self.m {
            s = self.add(s, x);
            x = self.frobenius(x);
        }
        debug_assert!((s as u64) < self.p);
        s as u64
    }

    /// Norm to F_p, as an integer in 0..p.
    pub fn norm(&self, a: Fq) -> u64 {
        let e = (self.q - 1) / (self.p - 1);
        let v = self.pow(a, e);
        debug_assert!((v as u64) < self.p);
        v as u64
    }

    /// The subfield F_{p^k} ∩ F_q = {x : x^{p^k} = x}.
    pub fn subfield(&self, k: u32) -> Vec<Fq> {
        self.elements().filter(|&x| self.pow(x, ipow(self.p, k)) == x).collect()
    }
}

/// φ(y) = F^{-s}(Σ a_i y^{p^i}), stored as coefficients and the shift s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivePoly {
    pub coeffs: Vec<Fq>,
    pub frobshift: u32,
}

impl AdditivePoly {
    /// Σ a_i y^{p^i}, without the Frobenius shift.
    pub fn eval_unshifted(&self, k: &FiniteField, y: Fq) -> Fq {
        let mut acc = 0;
        let mut yp = y;
        for &a in &self.coeffs {
            acc = k.add(acc, k.mul(a, yp));
            yp = k.frobenius(yp);
        }
        acc
    }

    pub fn eval(&self, k: &FiniteField, y: Fq) -> Fq {
        k.frobenius_pow(self.eval_unshifted(k, y), -(self.frobshift as i64))
    }
}

/// An F_p-subspace of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpSubspace {
    pub basis: Vec<Fq>,
    pub elements: Vec<Fq>,
}

fn fp_span(k: &FiniteField, elems: &[Fq]) -> FpSubspace {
    let mut span = vec![0 as Fq];
    let mut inside = vec![false; k.order() as usize];
    inside[0] = true;
    let mut basis = Vec::new();
    for &x in elems {
        if inside[x as usize] {
            continue;
        }
        basis.push(x);
        let mut next = Vec::with_capacity(span.len() * k.p() as usize);
        for c in 0..k.p() {
            let cx = k.mul(k.from_int(c as i64), x);
            for &s in &span {
                let v = k.add(s, cx);
                inside[v as usize] = true;
                next.push(v);
            }
        }
        span = next;
    }
    span.sort_unstable();
    FpSubspace { basis, elements: span }
}

/// Roots of φ in K; the shift does not change the kernel, since Frobenius is bijective.
pub fn additive_kernel(phi: &AdditivePoly, k: &FiniteField) -> FpSubspace {
    let roots: Vec<Fq> = k.elements().filter(|&y| phi.eval_unshifted(k, y) == 0).collect();
    fp_span(k, &roots)
}

/// (F_{p²}, Nm/p) on (Z/p)², coordinates the power-basis digits of field(p, 2).
pub fn norm_form(p: u64) -> Result<MetricGroup> {
    let k = FiniteField::new(p, 2)?;
    let a = FinAbGroup::new(vec![p, p])?;
    let values: Vec<RootExponent> = a
        .elements()
        .map(|v| RootExponent::new(k.norm(k.from_digits(&v)) as i64, p))
        .collect();
    validate(&a, values)
}

/// Group of pairs (x, a) ∈ F_q × F_q with (x,a)(y,b) = (x+y, a+b+x·y^p).
#[derive(Clone, Debug)]
pub struct FakeHeisenberg {
    pub field: FiniteField,
    pub group: Arc<FiniteGroup>,
    /// Element indices of 0 × F_q.
    pub center: Vec<usize>,
    /// {λ : Tr B(λ, μ) = 0 for all μ}.
    pub radical: Vec<Fq>,
    /// The norm form attached to the radical.
    pub attached: MetricGroup,
}

impl FakeHeisenberg {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m == 1 {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            return Err(Error::DegenerateModel);
        }
        let field = FiniteField::new(p, m)?;
        let q = field.order();
        if q * q > HEISENBERG_CAP {
            return Err(Error::cap("fake Heisenberg group", q * q, HEISENBERG_CAP));
        }
        let qq = q as usize;
        let f = &field;
        let group = FiniteGroup::from_fn(qq * qq, |u, v| {
            let (x, a) = ((u / qq) as Fq, (u % qq) as Fq);
            let (y, b) = ((v / qq) as Fq, (v % qq) as Fq);
            let z = f.add(x, y);
            let c = f.add(f.add(a, b), f.mul(x, f.frobenius(y)));
            z as usize * qq + c as usize
        })?;
        let center = group.center().to_vec();
        let radical: Vec<Fq> = field
            .elements()
            .filter(|&l| field.elements().all(|mu| field.trace(Self::pairing_in(&field, l, mu)) == 0))
            .collect();
        Ok(FakeHeisenberg { attached: norm_form(p)?, field, group: Arc::new(group), center, radical })
    }

    fn pairing_in(k: &FiniteField, l1: Fq, l2: Fq) -> Fq {
        k.sub(k.mul(l1, k.frobenius(l2)), k.mul(k.frobenius(l1), l2))
    }

    /// B(λ1, λ2) = λ1 λ2^p − λ1^p λ2.
    pub fn pairing(&self, l1: Fq, l2: Fq) -> Fq {
        Self::pairing_in(&self.field, l1, l2)
    }

    pub fn element(&self, x: Fq, a: Fq) -> usize {
        x as usize * self.field.order() as usize + a as usize
    }

    pub fn coords(&self, g: usize) -> (Fq, Fq) {
        let q = self.field.order() as usize;
        ((g / q) as Fq, (g % q) as Fq)
    }
}
