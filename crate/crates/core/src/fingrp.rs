//! Finite groups given by multiplication tables.
//!
//! Element 0 is always the identity. Class data and character tables are
//! computed lazily and cached.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub mod catalog;
mod characters;
pub use characters::{projective_irreps, CharacterTable, ProjectiveIrreps};

/// Default cap on the number of elements produced by closing permutation generators.
pub const GROUP_CAP: usize = 1 << 16;
/// Cap on |G| for the automorphism search.
pub const AUT_CAP: usize = 256;
/// Cap on the number of automorphisms materialized.
pub const AUT_COUNT_CAP: usize = 200_000;
/// Cap on |G| for character tables.
pub const CHAR_CAP: usize = 512;

#[derive(Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    classes: OnceLock<ClassStructure>,
    chars: OnceLock<std::result::Result<CharacterTable, Error>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            n: self.n,
            table: self.table.clone(),
            inv: self.inv.clone(),
            classes: self.classes.clone(),
            chars: self.chars.clone(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from its multiplication table, checking the group axioms.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty multiplication table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("row {i} has length {} instead of {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::Invalid(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x as u32);
            }
        }
        Self::from_flat(n, flat)
    }

    fn from_flat(n: usize, table: Vec<u32>) -> Result<Self> {
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(Error::Invalid("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                let c = table[a * n + b] as usize;
                if seen[c] {
                    return Err(Error::Invalid(format!("row {a} is not a permutation")));
                }
                seen[c] = true;
                if c == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        for a in 0..n {
            if table[inv[a] as usize * n + a] != 0 {
                return Err(Error::Invalid(format!("element {a} has no two-sided inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(Error::Invalid(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { n, table, inv, classes: OnceLock::new(), chars: OnceLock::new() })
    }

    /// Builds a group from a multiplication function on 0..n (0 must be the identity).
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = f(a, b);
                if c >= n {
                    return Err(Error::Invalid(format!("product {a}*{b} out of range")));
                }
                table.push(c as u32);
            }
        }
        Self::from_flat(n, table)
    }

    /// Closure of permutation generators (acting on 0..d), composed as
    /// (στ)(i) = σ(τ(i)). Elements are numbered in breadth-first order.
    pub fn from_permutations(gens: &[Vec<usize>], cap: usize) -> Result<Self> {
        let d = gens.first().map(|g| g.len()).unwrap_or(0);
        for g in gens {
            let mut seen = vec![false; d];
            if g.len() != d || g.iter().any(|&i| i >= d || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::Invalid("generators must be permutations of the same degree".into()));
            }
        }
        let id: Vec<usize> = (0..d).collect();
        let mut elts = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x: Vec<usize> = (0..d).map(|k| g[elts[i][k]]).collect();
                if !index.contains_key(&x) {
                    if elts.len() >= cap {
                        return Err(Error::cap("permutation group", elts.len() as u64 + 1, cap as u64));
                    }
                    index.insert(x.clone(), elts.len());
                    queue.push_back(elts.len());
                    elts.push(x);
                }
            }
        }
        let n = elts.len();
        Self::from_fn(n, |a, b| {
            let x: Vec<usize> = (0..d).map(|k| elts[a][elts[b][k]]).collect();
            index[&x]
        })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// Direct product; the pair (a, b) has index a·|H| + b.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.n;
        Self::from_fn(g.n * m, |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).expect("product")
    }

    /// Product of cyclic groups with mixed-radix indices (first factor most significant).
    pub fn abelian(orders: &[usize]) -> Self {
        orders.iter().fold(Self::cyclic(1), |acc, &o| Self::product(&acc, &Self::cyclic(o)))
    }

    /// Dihedral group of order 2n: r^k ↦ k, s·r^k ↦ n + k.
    pub fn dihedral(n: usize) -> Self {
        Self::from_fn(2 * n, |a, b| {
            let (sa, ka) = (a / n, a % n);
            let (sb, kb) = (b / n, b % n);
            // r^ka s^sa... elements are s^sa r^ka
            let k = if sb == 1 { (n - ka % n + kb) % n } else { (ka + kb) % n };
            ((sa ^ sb) * n) + k
        })
        .expect("dihedral")
    }

    /// Generalized quaternion (dicyclic) group of order 4n: x^k ↦ k, y·x^k ↦ 2n + k,
    /// with x^{2n} = 1, y² = x^n, x^y = x^{-1}.
    pub fn dicyclic(n: usize) -> Self {
        let m = 2 * n;
        Self::from_fn(2 * m, |a, b| {
            let (ya, ka) = (a / m, a % m);
            let (yb, kb) = (b / m, b % m);
            match (ya, yb) {
                (0, 0) => (ka + kb) % m,
                (0, 1) => m + (kb + m - ka) % m,
                (1, 0) => m + (ka + kb) % m,
                _ => (n + kb + m - ka) % m,
            }
        })
        .expect("dicyclic")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// g·x·g⁻¹
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Commutator a·b·a⁻¹·b⁻¹.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, a| num_integer::lcm(acc, self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// A small generating set: elements of decreasing order added greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut cand: Vec<usize> = (1..self.n).collect();
        cand.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for a in cand {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        // drop redundant generators
        let mut i = 0;
        while i < gens.len() {
            let mut rest = gens.clone();
            rest.remove(i);
            if self.generated(&rest).len() == self.n {
                gens = rest;
            } else {
                i += 1;
            }
        }
        gens
    }

    /// Conjugacy classes, centralizers and center (cached).
    pub fn class_structure(&self) -> &ClassStructure {
        self.classes.get_or_init(|| ClassStructure::compute(self))
    }

    pub fn center(&self) -> &[usize] {
        &self.class_structure().center
    }

    /// Whether the subset is a normal subgroup.
    pub fn is_normal_subgroup(&self, sub: &[usize]) -> bool {
        let set: BTreeSet<usize> = sub.iter().copied().collect();
        set.contains(&0)
            && sub.iter().all(|&a| sub.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
            && (0..self.n).all(|g| sub.iter().all(|&a| set.contains(&self.conj(g, a))))
    }

    /// All automorphisms, with the inner subgroup and the cosets of Inn(G).
    pub fn automorphisms(&self) -> Result<Automorphisms> {
        Automorphisms::compute(self)
    }

    /// Irreducible character table (cached).
    pub fn character_table(&self) -> Result<&CharacterTable> {
        self.chars.get_or_init(|| CharacterTable::compute(self)).as_ref().map_err(|e| e.clone())
    }
}

/// Minimal group interface shared by table groups and large extensions
/// whose products are computed on demand. Element 0 is the identity.
pub trait GroupLike {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
}

impl GroupLike for FiniteGroup {
    fn order(&self) -> usize {
        self.n
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        FiniteGroup::mul(self, a, b)
    }
    fn inv(&self, a: usize) -> usize {
        FiniteGroup::inv(self, a)
    }
}

/// Conjugacy classes in canonical order: by (element order, least element index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassStructure {
    /// Each class, sorted; the representative is the first (least) element.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Centralizer of each class representative, sorted.
    pub centralizers: Vec<Vec<usize>>,
    pub center: Vec<usize>,
}

impl ClassStructure {
    fn compute(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut done = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if done[a] {
                continue;
            }
            let mut cl: Vec<usize> = (0..n).map(|x| g.conj(x, a)).collect();
            cl.sort_unstable();
            cl.dedup();
            for &c in &cl {
                done[c] = true;
            }
            classes.push(cl);
        }
        classes.sort_by_key(|c| (g.element_order(c[0]), c[0]));
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        let centralizers =
            classes.iter().map(|c| (0..n).filter(|&x| g.mul(x, c[0]) == g.mul(c[0], x)).collect()).collect();
        let center = classes.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect::<BTreeSet<_>>();
        ClassStructure { classes, class_of, centralizers, center: center.into_iter().collect() }
    }

    pub fn reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }
}

/// A homomorphism between finite groups given by element images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupMap {
    pub images: Vec<usize>,
}

impl GroupMap {
    pub fn identity(n: usize) -> Self {
        GroupMap { images: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// self ∘ other
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> GroupMap {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        GroupMap { images: inv }
    }

    pub fn is_homomorphism(&self, src: &FiniteGroup, tgt: &FiniteGroup) -> bool {
        self.images.len() == src.order()
            && self.images.iter().all(|&y| y < tgt.order())
            && (0..src.order()).all(|a| {
                (0..src.order()).all(|b| self.images[src.mul(a, b)] == tgt.mul(self.images[a], self.images[b]))
            })
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images.iter().all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
    }

    /// Conjugation x ↦ g x g⁻¹.
    pub fn inner(g: &FiniteGroup, h: usize) -> GroupMap {
        GroupMap { images: (0..g.order()).map(|x| g.conj(h, x)).collect() }
    }
}

/// The automorphism group, sorted lexicographically by image list (identity first).
#[derive(Clone, Debug)]
pub struct Automorphisms {
    pub maps: Vec<GroupMap>,
    /// Indices of inner automorphisms.
    pub inner: Vec<usize>,
    /// Cosets α·Inn(G), each sorted; ordered by least member.
    pub cosets: Vec<Vec<usize>>,
    pub coset_of: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl Automorphisms {
    fn compute(g: &FiniteGroup) -> Result<Self> {
        let n = g.order();
        if n > AUT_CAP {
            return Err(Error::cap("group for automorphism search", n as u64, AUT_CAP as u64));
        }
        let gens = g.generators();
        let orders: Vec<usize> = (0..n).map(|a| g.element_order(a)).collect();
        let mut maps = Vec::new();
        let mut assign = Vec::new();
        search(g, &gens, &orders, &mut assign, &mut maps)?;
        maps.sort();
        let index: HashMap<Vec<usize>, usize> =
            maps.iter().enumerate().map(|(i, m)| (m.images.clone(), i)).collect();
        let mut inner: Vec<usize> = (0..n).map(|h| index[&GroupMap::inner(g, h).images]).collect();
        inner.sort_unstable();
        inner.dedup();
        let mut coset_of = vec![usize::MAX; maps.len()];
        let mut cosets = Vec::new();
        for a in 0..maps.len() {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = inner.iter().map(|&i| index[&maps[a].compose(&maps[i]).images]).collect();
            c.sort_unstable();
            for &x in &c {
                coset_of[x] = cosets.len();
            }
            cosets.push(c);
        }
        Ok(Automorphisms { maps, inner, cosets, coset_of, index })
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn index_of(&self, m: &GroupMap) -> Option<usize> {
        self.index.get(&m.images).copied()
    }

    /// Number of outer automorphism classes.
    pub fn out_order(&self) -> usize {
        self.cosets.len()
    }
}

/// Backtracking over generator images; extends a partial assignment to a
/// homomorphism by closing over words and rejects conflicts.
fn search(
    g: &FiniteGroup,
    gens: &[usize],
    orders: &[usize],
    assign: &mut Vec<usize>,
    out: &mut Vec<GroupMap>,
) -> Result<()> {
    let n = g.order();
    if assign.len() == gens.len() {
        if let Some(m) = extend(g, gens, assign) {
            if m.is_bijective() {
                if out.len() >= AUT_COUNT_CAP {
                    return Err(Error::cap("automorphism count", out.len() as u64 + 1, AUT_COUNT_CAP as u64));
                }
                out.push(m);
            }
        }
        return Ok(());
    }
    let k = assign.len();
    for y in 0..n {
        if orders[y] != orders[gens[k]] {
            continue;
        }
        assign.push(y);
        // prune: the partial assignment must already extend consistently
        if extend(g, &gens[..=k], assign).is_some_and(|m| is_injective_partial(&m)) {
            search(g, gens, orders, assign, out)?;
        }
        assign.pop();
    }
    Ok(())
}

fn is_injective_partial(m: &GroupMap) -> bool {
    let mut seen = std::collections::HashSet::new();
    m.images.iter().filter(|&&y| y != usize::MAX).all(|&y| seen.insert(y))
}

/// Extends generator images to the generated subgroup; unassigned elements
/// map to usize::MAX. Returns None on a conflict.
fn extend(g: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<GroupMap> {
    let n = g.order();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let v = g.mul(phi[x], t);
            if phi[y] == usize::MAX {
                phi[y] = v;
                queue.push(y);
            } else if phi[y] != v {
                return None;
            }
        }
        i += 1;
    }
    Some(GroupMap { images: phi })
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Table { table: Vec<Vec<usize>> },
    Permutations { permutations: Vec<Vec<usize>> },
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson::Table { table: self.table() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match GroupJson::deserialize(d)? {
            GroupJson::Table { table } => FiniteGroup::from_table(table),
            GroupJson::Permutations { permutations } => FiniteGroup::from_permutations(&permutations, GROUP_CAP),
        }
        .map_err(serde::de::Error::custom)
    }
}
