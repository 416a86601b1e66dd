//! Quadratic forms on finite abelian groups, stored additively in Q/Z.

use std::collections::HashMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycloNumber, RootExponent};
use crate::finab::{
    quotient, subgroup_coords, subgroups_filtered, AbAction, AbHom, Elem, FinAbGroup, Subgroup,
};
use crate::{Error, Result};

/// q: A → Q/Z stored as numerators over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    group: FinAbGroup,
    den: u64,
    num: Vec<u64>,
}

impl QuadraticForm {
    /// Checks q(a) = q(−a) and biadditivity of b(a,c) = q(a+c) − q(a) − q(c).
    pub fn new(group: &FinAbGroup, values: Vec<RootExponent>) -> Result<Self> {
        let n = group.order() as usize;
        if values.len() != n {
            return Err(Error::Invalid(format!("form has {} values for a group of order {n}", values.len())));
        }
        let den = values.iter().fold(1u64, |a, v| num_integer::lcm(a, v.den()));
        let num = values.iter().map(|v| v.over(den)).collect();
        let f = QuadraticForm { group: group.clone(), den, num };
        for i in 0..n {
            if f.num[i] != f.num[group.neg_index(i)] {
                return Err(Error::NotEven { elt: group.element(i) });
            }
        }
        let gens: Vec<usize> = (0..group.rank()).map(|i| group.index(&group.basis(i))).collect();
        for a in 0..n {
            for &e in &gens {
                let ae = group.add_index(a, e);
                for c in 0..n {
                    if f.b_num(ae, c) != (f.b_num(a, c) + f.b_num(e, c)) % den {
                        return Err(Error::NotBilinear {
                            a: group.element(a),
                            b: group.element(e),
                            c: group.element(c),
                        });
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Common denominator of the values.
    pub fn den(&self) -> u64 {
        self.den
    }

    /// Numerator of q at an element index (over `den`).
    pub fn q_num(&self, i: usize) -> u64 {
        self.num[i]
    }

    pub fn q(&self, i: usize) -> RootExponent {
        RootExponent::new(self.num[i] as i64, self.den)
    }

    pub fn q_elem(&self, x: &[u64]) -> RootExponent {
        self.q(self.group.index(x))
    }

    /// Numerator of b(a, c) over `den`.
    pub fn b_num(&self, a: usize, c: usize) -> u64 {
        let d = self.den;
        (self.num[self.group.add_index(a, c)] + 2 * d - self.num[a] - self.num[c]) % d
    }

    pub fn b(&self, a: usize, c: usize) -> RootExponent {
        RootExponent::new(self.b_num(a, c) as i64, self.den)
    }

    /// {a : b(a, ·) = 0}
    pub fn radical(&self) -> Vec<Elem> {
        let n = self.group.order() as usize;
        let gens: Vec<usize> = (0..self.group.rank()).map(|i| self.group.index(&self.group.basis(i))).collect();
        (0..n).filter(|&a| gens.iter().all(|&e| self.b_num(a, e) == 0)).map(|a| self.group.element(a)).collect()
    }

    pub fn values(&self) -> Vec<RootExponent> {
        (0..self.num.len()).map(|i| self.q(i)).collect()
    }

    /// τ± = Σ_a e^{±2πi q(a)}
    pub fn gauss_sum(&self, sign: Sign) -> CycloNumber {
        let d = self.den as usize;
        let mut counts = vec![0i64; d];
        for &v in &self.num {
            let k = match sign {
                Sign::Plus => v as usize,
                Sign::Minus => (d - v as usize) % d,
            };
            counts[k] += 1;
        }
        CycloNumber::from_root_counts(self.den, &counts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// A nondegenerate quadratic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGroup {
    form: QuadraticForm,
}

/// Validates a value table (indexed by element index) as a metric group.
pub fn validate(group: &FinAbGroup, values: Vec<RootExponent>) -> Result<MetricGroup> {
    let form = QuadraticForm::new(group, values)?;
    let radical = form.radical();
    if radical.len() > 1 {
        return Err(Error::Degenerate { radical });
    }
    Ok(MetricGroup { form })
}

impl MetricGroup {
    pub fn trivial() -> Self {
        validate(&FinAbGroup::trivial(), vec![RootExponent::zero()]).expect("trivial form")
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.form.group
    }

    pub fn order(&self) -> u64 {
        self.form.group.order()
    }

    pub fn q(&self, i: usize) -> RootExponent {
        self.form.q(i)
    }

    pub fn q_elem(&self, x: &[u64]) -> RootExponent {
        self.form.q_elem(x)
    }

    pub fn gauss_sum(&self, sign: Sign) -> CycloNumber {
        self.form.gauss_sum(sign)
    }

    pub fn is_isotropic(&self, s: &Subgroup) -> bool {
        s.elements.iter().all(|x| self.form.q_num(self.group().index(x)) == 0)
    }

    pub fn is_anisotropic(&self) -> bool {
        (1..self.order() as usize).all(|i| self.form.q_num(i) != 0)
    }

    /// The prime p when |A| is a power of p (None for the trivial group).
    pub fn prime(&self) -> Option<u64> {
        crate::arith::prime_power(self.order()).map(|x| x.0)
    }
}

/// Gauss sum τ± of a metric group.
pub fn gauss_sum(m: &MetricGroup, sign: Sign) -> CycloNumber {
    m.gauss_sum(sign)
}

pub fn orthogonal_sum(m1: &MetricGroup, m2: &MetricGroup) -> MetricGroup {
    let a = m1.group().direct_sum(m2.group());
    let n2 = m2.order() as usize;
    let values = (0..a.order() as usize).map(|i| m1.q(i / n2) + m2.q(i % n2)).collect();
    validate(&a, values).expect("orthogonal sum of metric groups is metric")
}

/// The hyperbolic form on A ⊕ Â with Â identified with A: q(x, y) = Σ x_i y_i / o_i.
/// Element (x, y) has index idx(x)·|A| + idx(y).
pub fn hyperbolic(a: &FinAbGroup) -> MetricGroup {
    let h = a.direct_sum(a);
    let r = a.rank();
    let values = h
        .elements()
        .map(|v| {
            (0..r).fold(RootExponent::zero(), |acc, i| {
                acc + RootExponent::new((v[i] * v[r + i]) as i64, a.orders()[i])
            })
        })
        .collect();
    validate(&h, values).expect("hyperbolic form is nondegenerate")
}

/// An isotropic subgroup with a flag for maximality within the returned family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropicSubgroup {
    pub subgroup: Subgroup,
    pub maximal: bool,
}

/// Isotropic subgroups (setwise invariant under the action if given), sorted
/// by (order, elements). `maximal` marks those not properly contained in
/// another member of the list.
pub fn isotropic_subgroups(m: &MetricGroup, action: Option<&AbAction>) -> Result<Vec<IsotropicSubgroup>> {
    let f = &m.form;
    let a = m.group();
    if let Some(act) = action {
        if act.module() != a {
            return Err(Error::Invalid("action is on a different module".into()));
        }
    }
    let subs = subgroups_filtered(
        a,
        action,
        &|atom| atom.iter().all(|&x| f.q_num(x) == 0),
        &|s, t| s.iter().all(|&x| t.iter().all(|&y| f.b_num(x, y) == 0)),
    )?;
    Ok(mark_maximal(subs))
}

fn mark_maximal(subs: Vec<Subgroup>) -> Vec<IsotropicSubgroup> {
    let flags: Vec<bool> = subs
        .iter()
        .map(|s| !subs.iter().any(|t| t.order() > s.order() && s.is_subgroup_of(t)))
        .collect();
    subs.into_iter().zip(flags).map(|(subgroup, maximal)| IsotropicSubgroup { subgroup, maximal }).collect()
}

/// A subquotient B^⊥/B with the map from B^⊥ onto it.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub metric: MetricGroup,
    /// Elements of B^⊥ (in A) with their images in B^⊥/B.
    pub images: Vec<(Elem, Elem)>,
}

/// The metric group B^⊥/B for an isotropic subgroup B.
pub fn subquotient(m: &MetricGroup, b: &Subgroup) -> Result<MetricGroup> {
    Ok(subquotient_with_map(m, b)?.metric)
}

pub fn subquotient_with_map(m: &MetricGroup, b: &Subgroup) -> Result<Subquotient> {
    let a = m.group();
    let f = &m.form;
    let b = a.subgroup_from_elements(&b.elements)?;
    if !m.is_isotropic(&b) {
        return Err(Error::NotIsotropic);
    }
    let bidx: Vec<usize> = b.gens.iter().map(|g| a.index(g)).collect();
    let perp: Vec<Elem> = (0..a.order() as usize)
        .filter(|&x| bidx.iter().all(|&g| f.b_num(x, g) == 0))
        .map(|x| a.element(x))
        .collect();
    let perp = a.subgroup_from_elements(&perp)?;
    let pc = subgroup_coords(a, &perp);
    let h = &pc.group;
    let b_in_h: Vec<Elem> = b.elements.iter().map(|x| pc.coords(x).expect("B ⊂ B^⊥").clone()).collect();
    let quo = quotient(h, &b_in_h)?;
    let values: Vec<RootExponent> =
        quo.group.elements().map(|y| m.q_elem(&pc.embedding.apply(&quo.lift(&y)))).collect();
    let mut images = Vec::with_capacity(perp.order());
    for x in &perp.elements {
        let y = quo.project(pc.coords(x).unwrap());
        if m.q_elem(x) != values[quo.group.index(&y)] {
            return Err(Error::NotIsotropic);
        }
        images.push((x.clone(), y));
    }
    Ok(Subquotient { metric: validate(&quo.group, values)?, images })
}

/// Subquotient chain ending at an anisotropic residue.
#[derive(Clone, Debug)]
pub struct WittWitness {
    /// Each isotropic subgroup, in the coordinates of the group at that step.
    pub chain: Vec<Subgroup>,
    pub residue: MetricGroup,
}

/// Reduces along maximal isotropic subgroups (least generating set first).
/// With an action, the first step uses a Γ-invariant subgroup that is
/// maximal among invariant isotropic subgroups; later steps are not equivariant.
pub fn witt_reduce(m: &MetricGroup, action: Option<&AbAction>) -> Result<WittWitness> {
    let mut cur = m.clone();
    let mut chain = Vec::new();
    let mut act = action;
    loop {
        let iso = isotropic_subgroups(&cur, act)?;
        let best = iso
            .into_iter()
            .filter(|s| s.maximal && s.subgroup.order() > 1)
            .map(|s| s.subgroup)
            .min_by(|x, y| x.gens.cmp(&y.gens));
        let Some(b) = best else {
            if act.is_some() {
                act = None;
                continue;
            }
            break;
        };
        cur = subquotient(&cur, &b)?;
        chain.push(b);
        act = None;
    }
    Ok(WittWitness { chain, residue: cur })
}

/// Residues of every chain of subquotients by nonzero isotropic subgroups.
pub fn witt_residues_all_chains(m: &MetricGroup) -> Result<Vec<MetricGroup>> {
    let iso = isotropic_subgroups(m, None)?;
    if iso.len() == 1 {
        return Ok(vec![m.clone()]);
    }
    let mut out = Vec::new();
    for s in iso.iter().skip(1) {
        let sq = subquotient(m, &s.subgroup)?;
        for r in witt_residues_all_chains(&sq)? {
            if !out.iter().any(|o: &MetricGroup| is_isomorphic(o, &r).is_some()) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// A form-preserving isomorphism M1 → M2, found by backtracking over images
/// of the coordinate generators.
pub fn is_isomorphic(m1: &MetricGroup, m2: &MetricGroup) -> Option<AbHom> {
    let (a1, a2) = (m1.group(), m2.group());
    if a1.order() != a2.order() {
        return None;
    }
    let (f1, f2) = (&m1.form, &m2.form);
    if f1.den != f2.den && !(a1.order() == 1) {
        // values agree as fractions, so the reduced denominators must match
        let d1: std::collections::BTreeSet<RootExponent> = (0..a1.order() as usize).map(|i| f1.q(i)).collect();
        let d2: std::collections::BTreeSet<RootExponent> = (0..a2.order() as usize).map(|i| f2.q(i)).collect();
        if d1 != d2 {
            return None;
        }
    }
    let gens1: Vec<usize> = (0..a1.rank()).map(|i| a1.index(&a1.basis(i))).collect();
    let cands: Vec<Vec<usize>> = gens1
        .iter()
        .map(|&g| {
            let o = a1.element_order(&a1.element(g));
            (0..a2.order() as usize)
                .filter(|&y| a2.element_order(&a2.element(y)) == o && f2.q(y) == f1.q(g))
                .collect()
        })
        .collect();
    let mut imgs = Vec::new();
    if search_iso(m1, m2, &gens1, &cands, &mut imgs) {
        let matrix = (0..a2.rank()).map(|r| imgs.iter().map(|&y| a2.element(y)[r] as i64).collect()).collect();
        return AbHom::new(a1.clone(), a2.clone(), matrix).ok();
    }
    None
}

fn search_iso(m1: &MetricGroup, m2: &MetricGroup, gens: &[usize], cands: &[Vec<usize>], imgs: &mut Vec<usize>) -> bool {
    let k = imgs.len();
    if k == gens.len() {
        let (a1, a2) = (m1.group(), m2.group());
        let matrix: Vec<Vec<i64>> =
            (0..a2.rank()).map(|r| imgs.iter().map(|&y| a2.element(y)[r] as i64).collect()).collect();
        let Ok(h) = AbHom::new(a1.clone(), a2.clone(), matrix) else { return false };
        return h.is_bijective() && a1.elements().all(|x| m1.q_elem(&x) == m2.q_elem(&h.apply(&x)));
    }
    for &y in &cands[k] {
        if imgs.iter().zip(gens).all(|(&yi, &gi)| m2.form.b(yi, y) == m1.form.b(gi, gens[k])) {
            imgs.push(y);
            if search_iso(m1, m2, gens, cands, imgs) {
                return true;
            }
            imgs.pop();
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WittClass {
    CpPlusCompatible,
    CpMinusCompatible,
    Neither,
}

#[derive(Clone, Debug)]
pub struct WittVerdict {
    pub class: WittClass,
    pub witness: WittWitness,
    /// Isomorphism from the residue to norm_form(p) in the CpMinus case.
    pub iso: Option<AbHom>,
}

/// Classifies a metric p-group by its anisotropic residue.
pub fn classify_cp_witt(m: &MetricGroup) -> Result<WittVerdict> {
    let n = m.order();
    if n > 1 && m.prime().is_none() {
        return Err(Error::Invalid(format!("metric group of order {n} is not a p-group")));
    }
    let witness = witt_reduce(m, None)?;
    let r = &witness.residue;
    if r.order() == 1 {
        return Ok(WittVerdict { class: WittClass::CpPlusCompatible, witness, iso: None });
    }
    let p = m.prime().unwrap();
    let norm = crate::frobalg::norm_form(p)?;
    if let Some(iso) = is_isomorphic(r, &norm) {
        return Ok(WittVerdict { class: WittClass::CpMinusCompatible, witness, iso: Some(iso) });
    }
    Ok(WittVerdict { class: WittClass::Neither, witness, iso: None })
}

// JSON: {"group":{"cyclic":[...]}, "q":{"(0,1)":"1/2", ...}}

pub fn tuple_key(x: &[u64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn parse_tuple_key(s: &str) -> Result<Vec<u64>> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if t.trim().is_empty() {
        return Ok(vec![]);
    }
    t.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Invalid(format!("bad element tuple {s:?}"))))
        .collect()
}

struct Values<'a>(&'a QuadraticForm);

impl Serialize for Values<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let a = &self.0.group;
        let mut map = s.serialize_map(Some(a.order() as usize))?;
        for (i, x) in a.elements().enumerate() {
            map.serialize_entry(&tuple_key(&x), &self.0.q(i))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct FormOut<'a> {
    group: &'a FinAbGroup,
    q: Values<'a>,
}

#[derive(Deserialize)]
struct FormIn {
    group: FinAbGroup,
    q: HashMap<String, RootExponent>,
}

fn values_from_map(group: &FinAbGroup, q: HashMap<String, RootExponent>) -> Result<Vec<RootExponent>> {
    let mut vals: Vec<Option<RootExponent>> = vec![None; group.order() as usize];
    for (k, v) in q {
        let x = parse_tuple_key(&k)?;
        if !group.contains(&x) {
            return Err(Error::Invalid(format!("{k} is not an element of {group}")));
        }
        vals[group.index(&x)] = Some(v);
    }
    vals.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("missing value at {}", tuple_key(&group.element(i))))))
        .collect()
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormOut { group: &self.group, q: Values(self) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = FormIn::deserialize(d)?;
        let vals = values_from_map(&f.group, f.q).map_err(serde::de::Error::custom)?;
        QuadraticForm::new(&f.group, vals).map_err(serde::de::Error::custom)
    }
}

impl Serialize for MetricGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.form.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MetricGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = FormIn::deserialize(d)?;
        let vals = values_from_map(&f.group, f.q).map_err(serde::de::Error::custom)?;
        validate(&f.group, vals).map_err(serde::de::Error::custom)
    }
}

impl MetricGroup {
    /// Parses the JSON form, keeping domain errors distinct from syntax errors.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let f: FormIn = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        validate(&f.group, values_from_map(&f.group, f.q)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobalg::norm_form;
    use crate::fingrp::FiniteGroup;
    use std::sync::Arc;

    fn r(n: i64, d: u64) -> RootExponent {
        RootExponent::new(n, d)
    }

    pub(crate) fn toric() -> MetricGroup {
        let a = FinAbGroup::new(vec![2, 2]).unwrap();
        validate(&a, vec![r(0, 1), r(0, 1), r(0, 1), r(1, 2)]).unwrap()
    }

    /// Forms x ↦ u·x²/(2n) style on Z/n (n even) or u·x²/n (n odd).
    fn cyclic_form(n: u64, u: i64) -> Result<MetricGroup> {
        let a = FinAbGroup::cyclic(n);
        let d = if n.is_multiple_of(2) { 2 * n } else { n };
        validate(&a, (0..n as i64).map(|x| r(u * x * x, d)).collect())
    }

    #[test]
    fn validation() {
        assert!(toric().form().radical().len() == 1);
        let z3 = cyclic_form(3, 1).unwrap();
        assert_eq!(z3.order(), 3);
        let z4 = FinAbGroup::cyclic(4);
        assert!(matches!(
            validate(&z4, vec![r(0, 1), r(1, 4), r(0, 1), r(1, 2)]),
            Err(Error::NotEven { .. })
        ));
        let z2 = FinAbGroup::cyclic(2);
        // even, but b(1,1) = 1/3 and b(2,1) = 1/3 ≠ 2/3
        let z4b = validate(&z4, vec![r(0, 1), r(1, 3), r(1, 3), r(1, 3)]);
        assert!(matches!(z4b, Err(Error::NotBilinear { .. })));
        assert!(matches!(validate(&z2, vec![r(0, 1), r(0, 1)]), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn gauss_sums() {
        assert_eq!(MetricGroup::trivial().gauss_sum(Sign::Plus), CycloNumber::one());
        assert_eq!(toric().gauss_sum(Sign::Plus), CycloNumber::from_int(2));
        for p in [2, 3, 5] {
            let n = norm_form(p).unwrap();
            assert_eq!(n.gauss_sum(Sign::Plus), CycloNumber::from_int(-(p as i64)));
            assert_eq!(n.gauss_sum(Sign::Minus), CycloNumber::from_int(-(p as i64)));
            let nn = orthogonal_sum(&n, &n);
            assert_eq!(nn.gauss_sum(Sign::Plus), CycloNumber::from_int((p * p) as i64));
        }
    }

    #[test]
    fn gauss_norm_identity() {
        for n in [2u64, 3, 4, 5, 8, 9, 16] {
            for u in [1, 3, 5, 7] {
                if num_integer::gcd(u as u64, 2 * n) != 1 {
                    continue;
                }
                let m = cyclic_form(n, u).unwrap();
                let t = m.gauss_sum(Sign::Plus);
                assert_eq!(t.abs2(), CycloNumber::from_int(n as i64));
            }
        }
    }

    #[test]
    fn isotropic_examples() {
        for p in [2, 3, 5] {
            let n = norm_form(p).unwrap();
            assert_eq!(isotropic_subgroups(&n, None).unwrap().len(), 1);
        }
        let t = isotropic_subgroups(&toric(), None).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t[1].maximal && t[2].maximal && !t[0].maximal);
        // norm ⊕ norm with swap: the diagonal is invariant and isotropic for p = 2
        let n = norm_form(2).unwrap();
        let nn = orthogonal_sum(&n, &n);
        let act = swap_action(nn.group());
        let inv = isotropic_subgroups(&nn, Some(&act)).unwrap();
        let diag: Vec<Elem> = nn.group().elements().filter(|x| x[0] == x[2] && x[1] == x[3]).collect();
        assert!(inv.iter().any(|s| s.subgroup.elements == diag));
    }

    fn swap_action(a: &FinAbGroup) -> AbAction {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let k = a.rank() / 2;
        let mat: Vec<Vec<i64>> = (0..2 * k).map(|i| (0..2 * k).map(|j| ((i + k) % (2 * k) == j) as i64).collect()).collect();
        let swap = AbHom::new(a.clone(), a.clone(), mat).unwrap();
        AbAction::from_generators(g, a.clone(), &[(1, swap)]).unwrap()
    }

    #[test]
    fn subquotients() {
        let t = toric();
        assert_eq!(subquotient(&t, &t.group().span(&[])).unwrap(), t);
        let iso = isotropic_subgroups(&t, None).unwrap();
        assert_eq!(subquotient(&t, &iso[1].subgroup).unwrap().order(), 1);
        let all = t.group().span(&[vec![1, 0], vec![0, 1]]);
        assert!(matches!(subquotient(&t, &all), Err(Error::NotIsotropic)));
        for p in [2, 3] {
            let n = norm_form(p).unwrap();
            let nn = orthogonal_sum(&n, &n);
            let w = witt_reduce(&nn, None).unwrap();
            assert_eq!(w.residue.order(), 1);
            assert_eq!(witt_reduce(&n, None).unwrap().residue, n);
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify_cp_witt(&toric()).unwrap().class, WittClass::CpPlusCompatible);
        for p in [2, 3, 5] {
            let v = classify_cp_witt(&norm_form(p).unwrap()).unwrap();
            assert_eq!(v.class, WittClass::CpMinusCompatible);
            assert!(v.iso.is_some());
        }
        assert_eq!(classify_cp_witt(&cyclic_form(3, 1).unwrap()).unwrap().class, WittClass::Neither);
        // Z/9 with x²/9 has isotropic 3Z/9, residue trivial
        assert_eq!(classify_cp_witt(&cyclic_form(9, 1).unwrap()).unwrap().class, WittClass::CpPlusCompatible);
    }

    #[test]
    fn all_chains_agree() {
        let forms = vec![
            toric(),
            orthogonal_sum(&toric(), &toric()),
            orthogonal_sum(&norm_form(2).unwrap(), &toric()),
            cyclic_form(16, 1).unwrap(),
            orthogonal_sum(&cyclic_form(4, 1).unwrap(), &cyclic_form(4, 3).unwrap()),
            orthogonal_sum(&cyclic_form(9, 1).unwrap(), &cyclic_form(3, 1).unwrap()),
        ];
        for m in forms {
            let res = witt_residues_all_chains(&m).unwrap();
            assert_eq!(res.len(), 1, "{m:?}");
            assert!(res[0].is_anisotropic());
        }
    }

    #[test]
    fn json_roundtrip() {
        let n = norm_form(3).unwrap();
        let s = serde_json::to_string(&n).unwrap();
        assert!(s.starts_with(r#"{"group":{"cyclic":[3,3]},"q":{"(0,0)":"0/1""#));
        let back: MetricGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, n);
    }
}
