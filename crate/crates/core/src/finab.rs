//! Finite abelian groups ⊕ Z/n_i in coordinates.
//!
//! Factor orders are kept in the order given so that element tuples keep
//! their meaning across serialization. Element indices are mixed radix with
//! the first coordinate most significant, so index order is lexicographic.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fingrp::FiniteGroup;
use crate::linalg::{integer_snf, ModSolution};
use crate::{Error, Result};

/// Default cap on |A| for subgroup enumeration.
pub const SUBGROUP_CAP: u64 = 4096;
/// Cap on the number of subgroups produced by one enumeration.
pub const SUBGROUP_COUNT_CAP: usize = 500_000;

pub type Elem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec")]
pub struct FinAbGroup {
    cyclic: Vec<u64>,
}

#[derive(Deserialize)]
struct GroupSpec {
    cyclic: Vec<u64>,
}

impl TryFrom<GroupSpec> for FinAbGroup {
    type Error = Error;
    fn try_from(s: GroupSpec) -> Result<Self> {
        FinAbGroup::new(s.cyclic)
    }
}

impl FinAbGroup {
    /// Factor orders must be ≥ 1; trivial factors are dropped.
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Invalid("cyclic factor of order 0".into()));
        }
        let cyclic: Vec<u64> = orders.into_iter().filter(|&o| o > 1).collect();
        if cyclic.iter().try_fold(1u64, |a, &o| a.checked_mul(o)).is_none() {
            return Err(Error::Invalid("group order overflows".into()));
        }
        Ok(FinAbGroup { cyclic })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("valid order")
    }

    pub fn trivial() -> Self {
        FinAbGroup { cyclic: vec![] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.cyclic
    }

    pub fn rank(&self) -> usize {
        self.cyclic.len()
    }

    pub fn order(&self) -> u64 {
        self.cyclic.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.cyclic.iter().fold(1, |a, &o| num_integer::lcm(a, o))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn index(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.cyclic).fold(0usize, |acc, (&v, &o)| acc * o as usize + (v % o) as usize)
    }

    pub fn element(&self, mut i: usize) -> Elem {
        let mut out = vec![0; self.rank()];
        for k in (0..self.rank()).rev() {
            let o = self.cyclic[k] as usize;
            out[k] = (i % o) as u64;
            i /= o;
        }
        out
    }

    /// All elements in index (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order() as usize).map(move |i| self.element(i))
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.cyclic[i];
        e
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.cyclic).all(|(&v, &o)| v < o)
    }

    pub fn reduce(&self, x: &[i64]) -> Elem {
        x.iter().zip(&self.cyclic).map(|(&v, &o)| v.rem_euclid(o as i64) as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).zip(&self.cyclic).map(|((&x, &y), &o)| (x + y) % o).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Elem {
        a.iter().zip(&self.cyclic).map(|(&x, &o)| (o - x % o) % o).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &[u64]) -> Elem {
        a.iter()
            .zip(&self.cyclic)
            .map(|(&x, &o)| ((k.rem_euclid(o as i64) as u128 * x as u128) % o as u128) as u64)
            .collect()
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.cyclic).fold(1, |acc, (&x, &o)| num_integer::lcm(acc, o / num_integer::gcd(x, o)))
    }

    /// Index of the sum of the elements with indices i and j.
    pub fn add_index(&self, mut i: usize, mut j: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &o in self.cyclic.iter().rev() {
            let o = o as usize;
            out += (i % o + j % o) % o * place;
            i /= o;
            j /= o;
            place *= o;
        }
        out
    }

    /// Index of the negative of the element with index i.
    pub fn neg_index(&self, mut i: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &o in self.cyclic.iter().rev() {
            let o = o as usize;
            out += (o - i % o) % o * place;
            i /= o;
            place *= o;
        }
        out
    }

    /// The subgroup k·A.
    pub fn multiples(&self, k: i64) -> Subgroup {
        let gens: Vec<Elem> = (0..self.rank()).map(|i| self.scale(k, &self.basis(i))).collect();
        self.span(&gens)
    }

    /// Direct sum; elements of the sum are concatenated tuples.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut cyclic = self.cyclic.clone();
        cyclic.extend_from_slice(&other.cyclic);
        FinAbGroup { cyclic }
    }

    /// The same group as a multiplication-table group (index order preserved).
    pub fn to_finite_group(&self) -> FiniteGroup {
        let a = self.clone();
        FiniteGroup::from_fn(self.order() as usize, |x, y| a.index(&a.add(&a.element(x), &a.element(y))))
            .expect("abelian group table")
    }

    /// Subgroup generated by the given elements.
    pub fn span(&self, gens: &[Elem]) -> Subgroup {
        let mut mark = vec![false; self.order() as usize];
        let mut elems = vec![self.zero()];
        mark[0] = true;
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i].clone();
            for g in gens {
                let y = self.add(&x, g);
                let k = self.index(&y);
                if !mark[k] {
                    mark[k] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_mask(self, &mark)
    }

    /// Checks that a list of elements is a subgroup.
    pub fn subgroup_from_elements(&self, elems: &[Elem]) -> Result<Subgroup> {
        let mut mark = vec![false; self.order() as usize];
        for x in elems {
            if !self.contains(x) {
                return Err(Error::NotASubgroup(format!("{x:?} is not an element of the group")));
            }
            mark[self.index(x)] = true;
        }
        if !mark[0] {
            return Err(Error::NotASubgroup("missing the identity".into()));
        }
        for x in elems {
            for y in elems {
                if !mark[self.index(&self.sub(x, y))] {
                    return Err(Error::NotASubgroup(format!("not closed: {x:?} - {y:?}")));
                }
            }
        }
        Ok(Subgroup::from_mask(self, &mark))
    }
}

impl std::fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.cyclic.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.cyclic.iter().map(|o| format!("Z/{o}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A subgroup, with its canonical generating set and its elements in index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    pub gens: Vec<Elem>,
    pub elements: Vec<Elem>,
}

impl Subgroup {
    fn from_mask(a: &FinAbGroup, mark: &[bool]) -> Self {
        let elements: Vec<Elem> = mark.iter().enumerate().filter(|x| *x.1).map(|(i, _)| a.element(i)).collect();
        let gens = canonical_gens(a, &elements);
        Subgroup { gens, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(x)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }
}

/// Greedy generating set: elements in index order that enlarge the span.
fn canonical_gens(a: &FinAbGroup, elements: &[Elem]) -> Vec<Elem> {
    let mut gens: Vec<Elem> = Vec::new();
    let mut span: HashSet<Elem> = HashSet::from([a.zero()]);
    for x in elements {
        if span.len() == elements.len() {
            break;
        }
        if span.contains(x) {
            continue;
        }
        gens.push(x.clone());
        // enlarge span by multiples of x
        let mut frontier: Vec<Elem> = span.iter().cloned().collect();
        let mut i = 0;
        while i < frontier.len() {
            let y = a.add(&frontier[i], x);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
            i += 1;
        }
    }
    gens
}

/// Bit mask over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Mask(Vec<u64>);

impl Mask {
    fn new(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Subgroups that are joins of the given atoms (subgroups as element masks),
/// where an atom may be added to S only if `allowed(S, atom)`.
fn joins(
    a: &FinAbGroup,
    atoms: &[Mask],
    allowed: &dyn Fn(&[usize], &[usize]) -> bool,
) -> Result<Vec<Mask>> {
    let n = a.order() as usize;
    let mut zero = Mask::new(n);
    zero.set(0);
    let mut seen: HashSet<Mask> = HashSet::from([zero.clone()]);
    let mut out = vec![zero];
    let mut i = 0;
    let atom_elems: Vec<Vec<usize>> = atoms.iter().map(|m| m.ones().collect()).collect();
    while i < out.len() {
        let s = out[i].clone();
        let s_elems: Vec<usize> = s.ones().collect();
        for ae in &atom_elems {
            if ae.iter().all(|&x| s.get(x)) || !allowed(&s_elems, ae) {
                continue;
            }
            let joined = sum_masks(a, &s_elems, ae, n);
            if seen.insert(joined.clone()) {
                if out.len() >= SUBGROUP_COUNT_CAP {
                    return Err(Error::cap("subgroup count", out.len() as u64 + 1, SUBGROUP_COUNT_CAP as u64));
                }
                out.push(joined);
            }
        }
        i += 1;
    }
    Ok(out)
}

fn sum_masks(a: &FinAbGroup, s: &[usize], t: &[usize], n: usize) -> Mask {
    let mut m = Mask::new(n);
    let te: Vec<Elem> = t.iter().map(|&j| a.element(j)).collect();
    for &i in s {
        let x = a.element(i);
        for y in &te {
            m.set(a.index(&a.add(&x, y)));
        }
    }
    m
}

fn to_subgroup(a: &FinAbGroup, m: &Mask) -> Subgroup {
    let n = a.order() as usize;
    let mark: Vec<bool> = (0..n).map(|i| m.get(i)).collect();
    Subgroup::from_mask(a, &mark)
}

fn sort_subgroups(v: &mut [Subgroup]) {
    v.sort_by(|x, y| x.order().cmp(&y.order()).then_with(|| x.elements.cmp(&y.elements)));
}

/// Atoms for subgroup enumeration: cyclic subgroups, or Γ-submodules
/// generated by one element when an action is given.
fn atoms(a: &FinAbGroup, action: Option<&AbAction>) -> Vec<Mask> {
    let n = a.order() as usize;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in a.elements().skip(1) {
        let gens: Vec<Elem> = match action {
            None => vec![x],
            Some(act) => {
                let mut orbit: Vec<Elem> = (0..act.group().order()).map(|g| act.apply(g, &x)).collect();
                orbit.sort();
                orbit.dedup();
                orbit
            }
        };
        let s = a.span(&gens);
        let mut m = Mask::new(n);
        for e in &s.elements {
            m.set(a.index(e));
        }
        if seen.insert(m.clone()) {
            out.push(m);
        }
    }
    out
}

fn check_cap(a: &FinAbGroup) -> Result<()> {
    if a.order() > SUBGROUP_CAP {
        return Err(Error::cap("group for subgroup enumeration", a.order(), SUBGROUP_CAP));
    }
    Ok(())
}

/// All subgroups (setwise invariant under the action when given), sorted by
/// (order, element list).
pub fn subgroups(a: &FinAbGroup, invariant_under: Option<&AbAction>) -> Result<Vec<Subgroup>> {
    check_cap(a)?;
    if let Some(act) = invariant_under {
        if act.module() != a {
            return Err(Error::Invalid("action is on a different module".into()));
        }
    }
    let at = atoms(a, invariant_under);
    let masks = joins(a, &at, &|_, _| true)?;
    let mut out: Vec<Subgroup> = masks.iter().map(|m| to_subgroup(a, m)).collect();
    sort_subgroups(&mut out);
    Ok(out)
}

/// Subgroups generated by atoms that are pairwise compatible with the
/// current subgroup; `allowed(S, atom)` receives element indices. Used for
/// isotropic enumeration, where the condition is q|_atom = 0 and b(S, atom) = 0.
pub(crate) fn subgroups_filtered(
    a: &FinAbGroup,
    action: Option<&AbAction>,
    atom_ok: &dyn Fn(&[usize]) -> bool,
    allowed: &dyn Fn(&[usize], &[usize]) -> bool,
) -> Result<Vec<Subgroup>> {
    check_cap(a)?;
    let at: Vec<Mask> = atoms(a, action).into_iter().filter(|m| atom_ok(&m.ones().collect::<Vec<_>>())).collect();
    let masks = joins(a, &at, allowed)?;
    let mut out: Vec<Subgroup> = masks.iter().map(|m| to_subgroup(a, m)).collect();
    sort_subgroups(&mut out);
    Ok(out)
}

/// A homomorphism of finite abelian groups: `matrix[i][j]` is coordinate i of
/// the image of generator j of the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub matrix: Vec<Vec<u64>>,
}

impl AbHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Invalid("matrix shape does not match the groups".into()));
        }
        let matrix: Vec<Vec<u64>> = matrix
            .iter()
            .zip(target.orders())
            .map(|(r, &o)| r.iter().map(|&v| v.rem_euclid(o as i64) as u64).collect())
            .collect();
        let h = AbHom { source, target, matrix };
        for j in 0..h.source.rank() {
            let col: Elem = (0..h.target.rank()).map(|i| h.matrix[i][j]).collect();
            if !h.target.is_zero(&h.target.scale(h.source.orders()[j] as i64, &col)) {
                return Err(Error::Invalid(format!("generator {j} has an image of incompatible order")));
            }
        }
        Ok(h)
    }

    pub fn identity(a: &FinAbGroup) -> Self {
        let r = a.rank();
        AbHom {
            source: a.clone(),
            target: a.clone(),
            matrix: (0..r).map(|i| (0..r).map(|j| (i == j) as u64 % a.orders()[i]).collect()).collect(),
        }
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        self.matrix
            .iter()
            .zip(self.target.orders())
            .map(|(row, &o)| row.iter().zip(x).fold(0u64, |s, (&a, &v)| ((s as u128 + a as u128 * v as u128) % o as u128) as u64))
            .collect()
    }

    /// self ∘ other
    pub fn compose(&self, other: &AbHom) -> AbHom {
        let cols: Vec<Elem> = (0..other.source.rank()).map(|j| self.apply(&other.apply(&other.source.basis(j)))).collect();
        AbHom {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: (0..self.target.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        self.kernel_is_trivial()
    }

    fn kernel_is_trivial(&self) -> bool {
        self.source.elements().skip(1).all(|x| !self.target.is_zero(&self.apply(&x)))
    }
}

/// A Γ-module: a homomorphism Γ → Aut(A) given by one matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbAction {
    group: Arc<FiniteGroup>,
    module: FinAbGroup,
    maps: Vec<AbHom>,
}

impl AbAction {
    pub fn new(group: Arc<FiniteGroup>, module: FinAbGroup, maps: Vec<AbHom>) -> Result<Self> {
        let n = group.order();
        if maps.len() != n {
            return Err(Error::Invalid(format!("expected {n} action matrices, got {}", maps.len())));
        }
        if maps.iter().any(|m| m.source != module || m.target != module) {
            return Err(Error::Invalid("action matrices must be endomorphisms of the module".into()));
        }
        if maps[0] != AbHom::identity(&module) {
            return Err(Error::Invalid("identity of the group must act trivially".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if maps[a].compose(&maps[b]) != maps[group.mul(a, b)] {
                    return Err(Error::Invalid(format!("action is not a homomorphism at ({a},{b})")));
                }
            }
        }
        Ok(AbAction { group, module, maps })
    }

    /// Builds an action from images of generators of Γ, given as matrices.
    pub fn from_generators(group: Arc<FiniteGroup>, module: FinAbGroup, gens: &[(usize, AbHom)]) -> Result<Self> {
        let n = group.order();
        let mut maps: Vec<Option<AbHom>> = vec![None; n];
        maps[0] = Some(AbHom::identity(&module));
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (g, m) in gens {
                let y = group.mul(x, *g);
                let v = maps[x].as_ref().unwrap().compose(m);
                match &maps[y] {
                    None => {
                        maps[y] = Some(v);
                        queue.push(y);
                    }
                    Some(w) if *w != v => return Err(Error::Invalid("generator images violate a relation".into())),
                    _ => {}
                }
            }
            i += 1;
        }
        let maps: Option<Vec<AbHom>> = maps.into_iter().collect();
        let maps = maps.ok_or_else(|| Error::Invalid("generators do not generate the group".into()))?;
        Self::new(group, module, maps)
    }

    pub fn trivial(group: Arc<FiniteGroup>, module: FinAbGroup) -> Self {
        let maps = vec![AbHom::identity(&module); group.order()];
        AbAction { group, module, maps }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn module(&self) -> &FinAbGroup {
        &self.module
    }

    pub fn map(&self, g: usize) -> &AbHom {
        &self.maps[g]
    }

    pub fn apply(&self, g: usize, x: &[u64]) -> Elem {
        self.maps[g].apply(x)
    }

    pub fn is_trivial(&self) -> bool {
        let id = AbHom::identity(&self.module);
        self.maps.iter().all(|m| *m == id)
    }

    pub fn is_invariant(&self, s: &Subgroup) -> bool {
        (0..self.group.order()).all(|g| s.elements.iter().all(|x| s.contains(&self.apply(g, x))))
    }
}

/// A subgroup S ⊂ A presented as an abstract group H ≅ S, with the
/// embedding H → A and coordinates for the elements of S.
#[derive(Clone, Debug)]
pub struct SubgroupCoords {
    pub group: FinAbGroup,
    pub embedding: AbHom,
    coords: std::collections::HashMap<Elem, Elem>,
}

impl SubgroupCoords {
    pub fn coords(&self, x: &[u64]) -> Option<&Elem> {
        self.coords.get(x)
    }
}

/// Computes coordinates for a subgroup: relations among its generators come
/// from a breadth-first enumeration, and Smith form diagonalizes them.
pub fn subgroup_coords(a: &FinAbGroup, s: &Subgroup) -> SubgroupCoords {
    let gens = &s.gens;
    let k = gens.len();
    let mut vecs: std::collections::HashMap<Elem, Vec<i64>> = std::collections::HashMap::new();
    vecs.insert(a.zero(), vec![0; k]);
    let mut order = vec![a.zero()];
    let mut rels: Vec<Vec<i64>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let x = order[i].clone();
        let cx = vecs[&x].clone();
        for (j, g) in gens.iter().enumerate() {
            let y = a.add(&x, g);
            let mut c = cx.clone();
            c[j] += 1;
            match vecs.get(&y) {
                None => {
                    vecs.insert(y.clone(), c);
                    order.push(y);
                }
                Some(cy) => {
                    let r: Vec<i64> = c.iter().zip(cy).map(|(u, v)| u - v).collect();
                    if r.iter().any(|&v| v != 0) {
                        rels.push(r);
                    }
                }
            }
        }
        i += 1;
    }
    rels.sort();
    rels.dedup();
    let (diag, q) = integer_snf(k, &rels);
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let group = FinAbGroup::new(keep.iter().map(|&i| diag[i] as u64).collect()).expect("finite subgroup");
    let coords: std::collections::HashMap<Elem, Elem> = vecs
        .iter()
        .map(|(x, c)| {
            let y: Vec<i64> = keep.iter().map(|&i| (0..k).map(|r| c[r] * q[r][i]).sum()).collect();
            (x.clone(), group.reduce(&y))
        })
        .collect();
    let mut cols: Vec<Elem> = vec![a.zero(); group.rank()];
    for (x, y) in &coords {
        if let Some(j) = (0..group.rank()).find(|&j| *y == group.basis(j)) {
            cols[j] = x.clone();
        }
    }
    let matrix = (0..a.rank()).map(|r| cols.iter().map(|c| c[r] as i64).collect()).collect();
    let embedding = AbHom::new(group.clone(), a.clone(), matrix).expect("embedding is well defined");
    SubgroupCoords { group, embedding, coords }
}

/// A quotient A/B with its projection and a minimal-index section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quotient {
    pub group: FinAbGroup,
    pub projection: AbHom,
    /// section[i] is the least-index preimage of quotient element i.
    pub section: Vec<Elem>,
}

impl Quotient {
    pub fn project(&self, x: &[u64]) -> Elem {
        self.projection.apply(x)
    }

    pub fn lift(&self, y: &[u64]) -> Elem {
        self.section[self.group.index(y)].clone()
    }
}

/// A/B, where B is given by its elements (or any generating set contained in it).
pub fn quotient(a: &FinAbGroup, b: &[Elem]) -> Result<Quotient> {
    let sub = a.subgroup_from_elements(b)?;
    quotient_by(a, &sub.gens)
}

/// A/⟨gens⟩.
pub fn quotient_by(a: &FinAbGroup, gens: &[Elem]) -> Result<Quotient> {
    let k = a.rank();
    let mut rels: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { a.orders()[i] as i64 } else { 0 }).collect())
        .collect();
    for g in gens {
        if !a.contains(g) {
            return Err(Error::NotASubgroup(format!("{g:?} is not an element of the group")));
        }
        rels.push(g.iter().map(|&v| v as i64).collect());
    }
    let (diag, q) = integer_snf(k, &rels);
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let group = FinAbGroup::new(keep.iter().map(|&i| diag[i] as u64).collect())?;
    let matrix: Vec<Vec<i64>> = keep.iter().map(|&i| (0..k).map(|r| q[r][i]).collect()).collect();
    let projection = AbHom::new(a.clone(), group.clone(), matrix)?;
    let mut section: Vec<Option<Elem>> = vec![None; group.order() as usize];
    let mut missing = section.len();
    for x in a.elements() {
        let i = group.index(&projection.apply(&x));
        if section[i].is_none() {
            section[i] = Some(x);
            missing -= 1;
            if missing == 0 {
                break;
            }
        }
    }
    let section = section.into_iter().map(|s| s.expect("projection is surjective")).collect();
    Ok(Quotient { group, projection, section })
}

/// Solves M·x ≡ v where equation i is taken modulo `moduli[i]` (a single
/// modulus applies to every equation). Unknowns live in Z/L with L the lcm of
/// the moduli.
pub fn solve_mod(m: &[Vec<i64>], v: &[i64], moduli: &[u64]) -> Option<ModSolution> {
    assert!(moduli.len() == 1 || moduli.len() == m.len(), "one modulus or one per equation");
    let modulus = |i: usize| if moduli.len() == 1 { moduli[0] } else { moduli[i] };
    let l = (0..m.len()).fold(moduli.first().copied().unwrap_or(1), |acc, i| num_integer::lcm(acc, modulus(i)));
    let rows: Vec<Vec<i64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let f = (l / modulus(i)) as i128;
            r.iter().map(|&a| ((a as i128 * f).rem_euclid(l as i128)) as i64).collect()
        })
        .collect();
    let rhs: Vec<i64> = v
        .iter()
        .enumerate()
        .map(|(i, &b)| ((b as i128 * (l / modulus(i)) as i128).rem_euclid(l as i128)) as i64)
        .collect();
    crate::linalg::solve_mod(&rows, &rhs, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_subgroup_count(a: &FinAbGroup) -> usize {
        // every subgroup is generated by at most rank elements
        let elems: Vec<Elem> = a.elements().collect();
        let mut set = HashSet::new();
        for x in &elems {
            for y in &elems {
                for z in &elems {
                    let gens: Vec<Elem> = [x, y, z].iter().take(a.rank().max(1)).map(|e| (*e).clone()).collect();
                    set.insert(a.span(&gens).elements);
                }
            }
        }
        set.len()
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroups(&FinAbGroup::cyclic(4), None).unwrap().len(), 3);
        let v4 = FinAbGroup::new(vec![2, 2]).unwrap();
        assert_eq!(subgroups(&v4, None).unwrap().len(), 5);
        let g = Arc::new(FiniteGroup::cyclic(2));
        let swap = AbHom::new(v4.clone(), v4.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let act = AbAction::from_generators(g, v4.clone(), &[(1, swap)]).unwrap();
        let inv = subgroups(&v4, Some(&act)).unwrap();
        // {0}, the diagonal and the whole group; the two axes are swapped
        let brute = subgroups(&v4, None).unwrap().into_iter().filter(|s| act.is_invariant(s)).count();
        assert_eq!(inv.len(), brute);
        assert_eq!(inv.len(), 3);
        assert!(inv.iter().any(|s| s.elements == vec![vec![0, 0], vec![1, 1]]));
        assert!(!inv.iter().any(|s| s.elements == vec![vec![0, 0], vec![1, 0]]));
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for orders in [vec![2, 4], vec![4, 4], vec![3, 9], vec![2, 2, 2], vec![6, 2], vec![8]] {
            let a = FinAbGroup::new(orders).unwrap();
            let subs = subgroups(&a, None).unwrap();
            assert_eq!(subs.len(), brute_subgroup_count(&a), "{a}");
            for s in &subs {
                for x in &s.elements {
                    assert!(s.contains(&a.neg(x)));
                    for y in &s.elements {
                        assert!(s.contains(&a.add(x, y)));
                    }
                }
                assert_eq!(a.span(&s.gens).elements, s.elements);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let a = FinAbGroup::new(vec![2; 13]).unwrap();
        assert!(matches!(subgroups(&a, None), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn quotients() {
        let z4 = FinAbGroup::cyclic(4);
        let q = quotient(&z4, &[vec![0], vec![2]]).unwrap();
        assert_eq!(q.group, FinAbGroup::cyclic(2));
        let q = quotient(&z4, &[vec![0]]).unwrap();
        assert_eq!(q.group, z4);
        for x in z4.elements() {
            assert_eq!(q.project(&x), x);
        }
        let v4 = FinAbGroup::new(vec![2, 2]).unwrap();
        let q = quotient(&v4, &[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(q.group, FinAbGroup::cyclic(2));
        assert!(matches!(quotient(&z4, &[vec![0], vec![1]]), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn quotient_kernel_is_exact() {
        for orders in [vec![4, 2], vec![4, 4], vec![9, 3], vec![2, 2, 2], vec![12]] {
            let a = FinAbGroup::new(orders).unwrap();
            for s in subgroups(&a, None).unwrap() {
                let q = quotient(&a, &s.elements).unwrap();
                assert_eq!(a.order(), s.order() as u64 * q.group.order());
                for x in a.elements() {
                    let y = q.project(&x);
                    assert_eq!(q.group.is_zero(&y), s.contains(&x));
                    assert_eq!(q.project(&q.lift(&y)), y);
                }
            }
        }
    }

    #[test]
    fn subgroup_coordinates() {
        for orders in [vec![4, 2], vec![8, 4], vec![9, 3], vec![2, 2, 2]] {
            let a = FinAbGroup::new(orders).unwrap();
            for s in subgroups(&a, None).unwrap() {
                let c = subgroup_coords(&a, &s);
                assert_eq!(c.group.order() as usize, s.order());
                for x in &s.elements {
                    assert_eq!(&c.embedding.apply(c.coords(x).unwrap()), x);
                }
            }
        }
    }

    #[test]
    fn index_arithmetic() {
        let a = FinAbGroup::new(vec![3, 4, 2]).unwrap();
        for i in 0..24 {
            assert_eq!(a.neg_index(i), a.index(&a.neg(&a.element(i))));
            for j in 0..24 {
                assert_eq!(a.add_index(i, j), a.index(&a.add(&a.element(i), &a.element(j))));
            }
        }
        assert_eq!(FinAbGroup::cyclic(9).multiples(3).order(), 3);
    }

    #[test]
    fn solve_examples() {
        let s = solve_mod(&[vec![2]], &[2], &[4]).unwrap();
        assert_eq!(s.x, vec![1]);
        assert_eq!(s.kernel, vec![vec![2]]);
        assert!(solve_mod(&[vec![2]], &[1], &[4]).is_none());
        let s = solve_mod(&[vec![1, 0], vec![0, 1]], &[1, 2], &[5]).unwrap();
        assert_eq!(s.x, vec![1, 2]);
        assert!(s.kernel.is_empty());
        // mixed moduli: x ≡ 1 mod 2, x ≡ 2 mod 3
        let s = solve_mod(&[vec![1], vec![1]], &[1, 2], &[2, 3]).unwrap();
        assert_eq!(s.x, vec![5]);
    }

    #[test]
    fn action_validation() {
        let z4 = FinAbGroup::cyclic(4);
        let g = Arc::new(FiniteGroup::cyclic(2));
        let neg = AbHom::new(z4.clone(), z4.clone(), vec![vec![-1]]).unwrap();
        assert!(AbAction::from_generators(g.clone(), z4.clone(), &[(1, neg)]).is_ok());
        let dbl = AbHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        assert!(AbAction::from_generators(g, z4.clone(), &[(1, dbl)]).is_err());
        assert!(AbHom::new(FinAbGroup::cyclic(2), z4, vec![vec![1]]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn index_roundtrip(orders in prop::collection::vec(2u64..6, 1..4), seed in 0usize..10_000) {
                let a = FinAbGroup::new(orders).unwrap();
                let i = seed % a.order() as usize;
                prop_assert_eq!(a.index(&a.element(i)), i);
            }

            #[test]
            fn solutions_substitute(m in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 1..4),
                                    x in prop::collection::vec(0i64..36, 3),
                                    moduli in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 9, 12]), 3)) {
                let moduli = &moduli[..m.len()];
                let v: Vec<i64> = m.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
                let s = solve_mod(&m, &v, moduli).expect("consistent");
                for (i, r) in m.iter().enumerate() {
                    let md = moduli[i] as i64;
                    let lhs: i64 = r.iter().zip(&s.x).map(|(a, &b)| a * b as i64).sum();
                    prop_assert_eq!((lhs - v[i]).rem_euclid(md), 0);
                    for k in &s.kernel {
                        let z: i64 = r.iter().zip(k).map(|(a, &b)| a * b as i64).sum();
                        prop_assert_eq!(z.rem_euclid(md), 0);
                    }
                }
            }
        }
    }
}
