//! Exact arithmetic in Q/Z and in cyclotomic fields.
//!
//! A [`CycloNumber`] is stored in the power basis of Q(ζ_N) modulo the N-th
//! cyclotomic polynomial, with a common denominator, and is always re-embedded
//! into the smallest cyclotomic field containing it. Conductors are never
//! congruent to 2 mod 4 and rationals have conductor 1, so equality is
//! coefficient comparison.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factor, gcd, lcm};

/// An element of Q/Z, kept as `num/den` with `0 <= num < den` and `gcd = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RootExponent {
    num: u64,
    den: u64,
}

impl RootExponent {
    /// The class of `num/den` in Q/Z. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = gcd(r, den);
        if r == 0 {
            return RootExponent { num: 0, den: 1 };
        }
        RootExponent { num: r / g, den: den / g }
    }

    pub fn zero() -> Self {
        RootExponent { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `k * self` in Q/Z.
    pub fn scale(&self, k: i64) -> Self {
        let r = ((self.num as i128 * k as i128).rem_euclid(self.den as i128)) as i64;
        RootExponent::new(r, self.den)
    }

    pub fn from_rational(r: Rational64) -> Self {
        assert!(*r.denom() > 0);
        RootExponent::new(r.numer().rem_euclid(*r.denom()), *r.denom() as u64)
    }

    pub fn to_rational(&self) -> Rational64 {
        Rational64::new(self.num as i64, self.den as i64)
    }

    /// The numerator of this class written over `n`; `n` must be a multiple of `den`.
    pub fn over(&self, n: u64) -> u64 {
        assert!(n.is_multiple_of(self.den), "{n} is not a multiple of {}", self.den);
        self.num * (n / self.den)
    }
}

impl Default for RootExponent {
    fn default() -> Self {
        RootExponent::zero()
    }
}

impl Add for RootExponent {
    type Output = RootExponent;
    fn add(self, o: RootExponent) -> RootExponent {
        let d = lcm(self.den, o.den);
        let n = self.num * (d / self.den) + o.num * (d / o.den);
        RootExponent::new((n % d) as i64, d)
    }
}

impl AddAssign for RootExponent {
    fn add_assign(&mut self, o: RootExponent) {
        *self = *self + o;
    }
}

impl Neg for RootExponent {
    type Output = RootExponent;
    fn neg(self) -> RootExponent {
        RootExponent::new(-(self.num as i64), self.den)
    }
}

impl Sub for RootExponent {
    type Output = RootExponent;
    fn sub(self, o: RootExponent) -> RootExponent {
        self + (-o)
    }
}

impl PartialOrd for RootExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootExponent {
    /// Orders by the representative in [0, 1).
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as u128 * o.den as u128).cmp(&(o.num as u128 * self.den as u128))
    }
}

impl fmt::Display for RootExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RootExponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let r = parse_rational(s)?;
        Ok(RootExponent::from_rational(r))
    }
}

impl Serialize for RootExponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RootExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses "a/b" or "a" into a rational.
pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let a: i64 = a.parse().map_err(|_| format!("bad rational '{s}'"))?;
    let b: i64 = b.parse().map_err(|_| format!("bad rational '{s}'"))?;
    if b == 0 {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Rational64::new(a, b))
}

// ---------------------------------------------------------------------------
// Field tables

struct Field {
    phi: usize,
    /// `pow[e]` is x^e reduced modulo the n-th cyclotomic polynomial, e in 0..n.
    pow: Vec<Vec<i64>>,
}

fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by every Φ_d with d | n, d < n. Coefficients low to high.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly_cached(d));
        }
    }
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                r[i + j] -= c * b[j];
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly_cached(n: u64) -> Vec<i64> {
    static POLYS: OnceLock<RwLock<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = POLYS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let p = cyclotomic_poly(n);
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn field(n: u64) -> Arc<Field> {
    static FIELDS: OnceLock<RwLock<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().unwrap().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_poly_cached(n);
    let phi = poly.len() - 1;
    let mut pow = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        pow.push(cur.clone());
        // multiply by x and reduce with the monic polynomial
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
        if top != 0 {
            for j in 0..phi {
                next[j] -= top * poly[j];
            }
        }
        cur = next;
    }
    let f = Arc::new(Field { phi, pow });
    cache.write().unwrap().insert(n, f.clone());
    f
}

/// Data to test membership of Q(ζ_n) elements in Q(ζ_m), m | n.
struct Descent {
    rows: Vec<usize>,
    inv: Vec<Vec<Rational64>>,
    /// embedded power basis of Q(ζ_m) inside Q(ζ_n)
    basis: Vec<Vec<i64>>,
}

fn descent(n: u64, m: u64) -> Arc<Descent> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), Arc<Descent>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().unwrap().get(&(n, m)) {
        return d.clone();
    }
    let fnn = field(n);
    let fm = field(m);
    let step = (n / m) as usize;
    let basis: Vec<Vec<i64>> = (0..fm.phi).map(|j| fnn.pow[j * step].clone()).collect();
    // choose pivot rows of the phi(n) x phi(m) matrix whose columns are `basis`
    let k = fm.phi;
    let mat: Vec<Vec<Rational64>> = (0..fnn.phi)
        .map(|r| (0..k).map(|c| Rational64::from_integer(basis[c][r])).collect())
        .collect();
    let mut rows = Vec::new();
    let mut echelon: Vec<Vec<Rational64>> = Vec::new();
    // row reduce greedily to find k independent rows
    for r in 0..fnn.phi {
        let mut v = mat[r].clone();
        for e in &echelon {
            let lead = e.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead] / e[lead];
                for c in 0..k {
                    v[c] -= f * e[c];
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            rows.push(r);
            if rows.len() == k {
                break;
            }
        }
    }
    assert_eq!(rows.len(), k);
    // invert the k x k submatrix
    let sub: Vec<Vec<Rational64>> = rows.iter().map(|&r| mat[r].clone()).collect();
    let inv = invert(sub);
    let d = Arc::new(Descent { rows, inv, basis });
    cache.write().unwrap().insert((n, m), d.clone());
    d
}

fn invert(mut a: Vec<Vec<Rational64>>) -> Vec<Vec<Rational64>> {
    let k = a.len();
    let mut inv: Vec<Vec<Rational64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }).collect())
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero()).expect("singular");
        a.swap(c, p);
        inv.swap(c, p);
        let f = a[c][c];
        for j in 0..k {
            a[c][j] /= f;
            inv[c][j] /= f;
        }
        for r in 0..k {
            if r != c && !a[r][c].is_zero() {
                let g = a[r][c];
                for j in 0..k {
                    let t = a[c][j];
                    a[r][j] -= g * t;
                    let t = inv[c][j];
                    inv[r][j] -= g * t;
                }
            }
        }
    }
    inv
}

// ---------------------------------------------------------------------------
// CycloNumber

/// An element of a cyclotomic field, stored at its minimal conductor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloNumber {
    n: u64,
    num: Vec<i64>,
    den: i64,
}

fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("cyclotomic coefficient overflow")
}

impl CycloNumber {
    pub fn zero() -> Self {
        CycloNumber { n: 1, num: vec![0], den: 1 }
    }

    pub fn one() -> Self {
        CycloNumber::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        CycloNumber { n: 1, num: vec![k], den: 1 }
    }

    pub fn from_rational(r: Rational64) -> Self {
        CycloNumber { n: 1, num: vec![*r.numer()], den: *r.denom() }
    }

    /// e^{2πi q}.
    pub fn root_of_unity(q: RootExponent) -> Self {
        let n = q.den();
        let f = field(n);
        CycloNumber::build(n, f.pow[q.num() as usize].iter().map(|&c| c as i128).collect(), 1)
    }

    /// Σ_e counts[e]·ζ_n^e for a histogram of exponents modulo n.
    pub fn from_root_counts(n: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, n);
        let f = field(n);
        let mut acc = vec![0i128; f.phi];
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(f.pow[e].iter()) {
                    *a += c as i128 * b as i128;
                }
            }
        }
        CycloNumber::build(n, acc, 1)
    }

    /// Σ_q root_of_unity(q) over an iterator of exponents, summed in one field.
    pub fn sum_roots<I: IntoIterator<Item = RootExponent>>(it: I) -> Self {
        let qs: Vec<RootExponent> = it.into_iter().collect();
        let n = qs.iter().fold(1u64, |a, q| lcm(a, q.den()));
        let mut counts = vec![0i64; n as usize];
        for q in &qs {
            counts[q.over(n) as usize] += 1;
        }
        CycloNumber::from_root_counts(n, &counts)
    }

    /// Normalizes raw data at conductor n (coefficients in the power basis of Q(ζ_n)).
    fn build(n: u64, mut num: Vec<i128>, mut den: i128) -> Self {
        assert!(den != 0);
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        let mut g = den as u128;
        for &c in &num {
            if g == 1 {
                break;
            }
            g = num_integer::gcd(g, c.unsigned_abs());
        }
        let g = g as i128;
        let num: Vec<i64> = num.iter().map(|&c| to_i64(c / g)).collect();
        let den = to_i64(den / g);
        CycloNumber::minimize(n, num, den)
    }

    fn minimize(mut n: u64, mut num: Vec<i64>, den: i64) -> Self {
        if num.iter().skip(1).all(|&c| c == 0) {
            return CycloNumber { n: 1, num: vec![num[0]], den };
        }
        'outer: loop {
            for (r, _) in factor(n) {
                let mut m = n / r;
                if m % 4 == 2 {
                    m /= 2;
                }
                if m == n {
                    continue;
                }
                if let Some(c) = descend(n, m, &num) {
                    n = m;
                    num = c;
                    continue 'outer;
                }
            }
            if n % 4 == 2 {
                let m = n / 2;
                if let Some(c) = descend(n, m, &num) {
                    n = m;
                    num = c;
                    continue 'outer;
                }
            }
            break;
        }
        if num.iter().skip(1).all(|&c| c == 0) {
            return CycloNumber { n: 1, num: vec![num[0]], den };
        }
        CycloNumber { n, num, den }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// Coefficients in the power basis of Q(ζ_N), N the conductor.
    pub fn coeffs(&self) -> Vec<Rational64> {
        self.num.iter().map(|&c| Rational64::new(c, self.den)).collect()
    }

    /// Builds from power-basis coefficients at conductor `n`.
    pub fn from_coeffs(n: u64, coeffs: &[Rational64]) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let f = field(n);
        if coeffs.len() != f.phi {
            return None;
        }
        let den = coeffs.iter().fold(1i64, |a, c| num_integer::lcm(a, *c.denom()));
        let num = coeffs.iter().map(|c| (*c.numer() as i128) * (den / *c.denom()) as i128).collect();
        Some(CycloNumber::build(n, num, den as i128))
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1 && self.num[0] == 0
    }

    pub fn try_rational(&self) -> Option<Rational64> {
        if self.n == 1 {
            Some(Rational64::new(self.num[0], self.den))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<i64> {
        match self.try_rational() {
            Some(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    /// Numerators re-embedded into Q(ζ_m), m a multiple of the conductor.
    fn embed(&self, m: u64) -> Vec<i128> {
        let f = field(m);
        let step = (m / self.n) as usize;
        if step == 1 {
            return self.num.iter().map(|&c| c as i128).collect();
        }
        let mut out = vec![0i128; f.phi];
        for (j, &c) in self.num.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(f.pow[j * step].iter()) {
                    *o += c as i128 * b as i128;
                }
            }
        }
        out
    }

    /// Applies the Galois automorphism ζ ↦ ζ^u (u coprime to the conductor).
    pub fn galois(&self, u: i64) -> Self {
        let n = self.n;
        let f = field(n);
        let mut out = vec![0i128; f.phi];
        for (j, &c) in self.num.iter().enumerate() {
            if c != 0 {
                let e = ((j as i128 * u as i128).rem_euclid(n as i128)) as usize;
                for (o, &b) in out.iter_mut().zip(f.pow[e].iter()) {
                    *o += c as i128 * b as i128;
                }
            }
        }
        CycloNumber::build(n, out, self.den as i128)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        self.galois(-1)
    }

    /// x·conj(x).
    pub fn abs2(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, r: Rational64) -> Self {
        let num = self.num.iter().map(|&c| c as i128 * *r.numer() as i128).collect();
        CycloNumber::build(self.n, num, self.den as i128 * *r.denom() as i128)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycloNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerators over the common denominator together with the denominator, at conductor n.
    /// `n` must be a multiple of the conductor.
    pub fn numerators_at(&self, n: u64) -> (Vec<i128>, i64) {
        (self.embed(n), self.den)
    }

    /// Image under the ring map Z[ζ_n][1/den] → F_ℓ sending ζ_n to `root`,
    /// where `root` is a primitive n-th root of unity mod ℓ and n is a multiple
    /// of the conductor. Returns None when the denominator is not invertible.
    pub fn reduce_mod(&self, n: u64, ell: u64, root: u64) -> Option<u64> {
        use crate::arith::{inv_mod, mul_mod, pow_mod};
        let step = n / self.n;
        let zeta = pow_mod(root, step, ell);
        let mut acc = 0u64;
        let mut z = 1u64;
        for &c in &self.num {
            let cm = (c as i128).rem_euclid(ell as i128) as u64;
            acc = (acc + mul_mod(cm, z, ell)) % ell;
            z = mul_mod(z, zeta, ell);
        }
        let d = inv_mod((self.den as u64) % ell, ell)?;
        Some(mul_mod(acc, d, ell))
    }
}

/// Evaluates histograms of exponents Σ_e counts[e]·ζ_n^e at a fixed n without
/// building a `CycloNumber`; used in hot loops that only need integrality.
pub struct RootCounts {
    n: u64,
    f: Arc<Field>,
}

impl RootCounts {
    pub fn new(n: u64) -> Self {
        RootCounts { n, f: field(n) }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The value when it is a rational integer.
    pub fn to_integer(&self, counts: &[i64]) -> Option<i128> {
        let mut stack = [0i128; 64];
        let mut heap = Vec::new();
        let acc: &mut [i128] = if self.f.phi <= 64 {
            &mut stack[..self.f.phi]
        } else {
            heap.resize(self.f.phi, 0);
            &mut heap
        };
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(self.f.pow[e].iter()) {
                    *a += c as i128 * b as i128;
                }
            }
        }
        acc[1..].iter().all(|&c| c == 0).then_some(acc[0])
    }
}

fn descend(n: u64, m: u64, num: &[i64]) -> Option<Vec<i64>> {
    if let Some((p, k)) = crate::arith::prime_power(n) {
        if k >= 2 && m == n / p {
            if num.iter().enumerate().any(|(j, &c)| c != 0 && !(j as u64).is_multiple_of(p)) {
                return None;
            }
            let phi_m = field(m).phi;
            return Some((0..phi_m).map(|j| num[j * p as usize]).collect());
        }
    }
    let d = descent(n, m);
    let k = d.rows.len();
    // c = inv * num[rows]; must be integral combination over the same denominator
    let mut c = vec![Rational64::zero(); k];
    for i in 0..k {
        let mut s = Rational64::zero();
        for j in 0..k {
            s += d.inv[i][j] * Rational64::from_integer(num[d.rows[j]]);
        }
        c[i] = s;
    }
    if c.iter().any(|x| !x.is_integer()) {
        return None;
    }
    let ci: Vec<i64> = c.iter().map(|x| *x.numer()).collect();
    // verify on all coordinates
    for (r, &v) in num.iter().enumerate() {
        let mut s: i128 = 0;
        for j in 0..k {
            s += ci[j] as i128 * d.basis[j][r] as i128;
        }
        if s != v as i128 {
            return None;
        }
    }
    Some(ci)
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, o: &CycloNumber) -> CycloNumber {
        let n = lcm(self.n, o.n);
        let a = self.embed(n);
        let b = o.embed(n);
        let (da, db) = (self.den as i128, o.den as i128);
        let num = a.iter().zip(b.iter()).map(|(x, y)| x * db + y * da).collect();
        CycloNumber::build(n, num, da * db)
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: &CycloNumber) -> CycloNumber {
        self + &(-o)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, o: &CycloNumber) -> CycloNumber {
        if self.n == 1 {
            return o.scale(Rational64::new(self.num[0], self.den));
        }
        if o.n == 1 {
            return self.scale(Rational64::new(o.num[0], o.den));
        }
        let n = lcm(self.n, o.n);
        let f = field(n);
        let a = self.embed(n);
        let b = o.embed(n);
        let mut raw = vec![0i128; n as usize];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    raw[(i + j) % n as usize] += x * y;
                }
            }
        }
        let mut out = vec![0i128; f.phi];
        for (e, &c) in raw.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(f.pow[e].iter()) {
                    *o += c * b as i128;
                }
            }
        }
        CycloNumber::build(n, out, self.den as i128 * o.den as i128)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: CycloNumber) -> CycloNumber {
                (&self).$m(&o)
            }
        }
        impl $tr<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: &CycloNumber) -> CycloNumber {
                (&self).$m(o)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, o: &CycloNumber) {
        *self = &*self + o;
    }
}

impl std::iter::Sum for CycloNumber {
    fn sum<I: Iterator<Item = CycloNumber>>(it: I) -> Self {
        it.fold(CycloNumber::zero(), |a, b| a + b)
    }
}

impl PartialOrd for CycloNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloNumber {
    /// A deterministic total order (conductor first, then coefficients); not a field order.
    fn cmp(&self, o: &Self) -> Ordering {
        self.n.cmp(&o.n).then_with(|| self.coeffs().cmp(&o.coeffs()))
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.try_rational() {
            return write!(f, "{r}");
        }
        let terms: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        write!(f, "cyc{}[{}]", self.n, terms.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloJson { conductor: self.n, coeffs: self.coeffs().iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        let cs: Result<Vec<Rational64>, String> = j.coeffs.iter().map(|c| parse_rational(c)).collect();
        let cs = cs.map_err(serde::de::Error::custom)?;
        CycloNumber::from_coeffs(j.conductor, &cs)
            .ok_or_else(|| serde::de::Error::custom("coefficient count does not match the conductor"))
    }
}
