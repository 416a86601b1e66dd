//! Finite shadows of twisted central extensions: multiplicative local systems
//! on a finite abelian N, the radical K, the lifts K_γ, the central extension
//! K_Γ with its 2-cocycle, the obstruction 3-cocycle ω and β = χ∘δω.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cyclotomic::RootExponent;
use crate::finab::{solve_mod, subgroup_coords, AbAction, AbHom, Elem, FinAbGroup};
use crate::fingrp::{Automorphisms, FiniteGroup, GroupLike, GroupMap};
use crate::groupcoh::{
    coboundary, cocycle_from_extension, cohomology_order_log, connecting_map, induced_ses, Cochain, SESData, Section,
    CAP_DEG3, CAP_DEG4,
};
use crate::linalg::integer_snf;
use crate::{Error, Result};

/// Breadth-first words in the generators; returns the element order, the word
/// vector of every reached element and the abelianized relations.
fn bfs_words(g: &dyn GroupLike, gens: &[usize]) -> (Vec<usize>, HashMap<usize, Vec<i64>>, Vec<Vec<i64>>) {
    let k = gens.len();
    let mut words = HashMap::new();
    words.insert(0usize, vec![0i64; k]);
    let mut order = vec![0usize];
    let mut rels = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let wx = words[&x].clone();
        for (j, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let mut w = wx.clone();
            w[j] += 1;
            match words.get(&y) {
                None => {
                    words.insert(y, w);
                    order.push(y);
                }
                Some(wy) => {
                    let r: Vec<i64> = w.iter().zip(wy).map(|(a, b)| a - b).collect();
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
    (order, words, rels)
}

fn closure(g: &dyn GroupLike, gens: &[usize]) -> Vec<usize> {
    let mut v = bfs_words(g, gens).0;
    v.sort_unstable();
    v
}

/// Coordinates for an abelian subgroup given by its elements: the abstract
/// group and the element for each module index.
pub fn abelian_coords(g: &dyn GroupLike, elems: &[usize]) -> Result<(FinAbGroup, Vec<usize>)> {
    let mut sorted = elems.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for &x in &sorted {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = closure(g, &gens);
        }
    }
    if span != sorted {
        return Err(Error::NotASubgroup("elements do not form a subgroup".into()));
    }
    for &a in &gens {
        for &b in &gens {
            if g.mul(a, b) != g.mul(b, a) {
                return Err(Error::Invalid("subgroup is not abelian".into()));
            }
        }
    }
    let k = gens.len();
    let (order, words, rels) = bfs_words(g, &gens);
    let (diag, q) = integer_snf(k, &rels);
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let a = FinAbGroup::new(keep.iter().map(|&i| diag[i] as u64).collect())?;
    let mut embed = vec![usize::MAX; a.order() as usize];
    for x in order {
        let w = &words[&x];
        let y: Vec<i64> = keep.iter().map(|&i| (0..k).map(|r| w[r] * q[r][i]).sum()).collect();
        embed[a.index(&a.reduce(&y))] = x;
    }
    debug_assert!(embed.iter().all(|&x| x != usize::MAX));
    Ok((a, embed))
}

/// H/[H,H] with the coordinates of every element.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FinAbGroup,
    pub gens: Vec<usize>,
    pub coords: Vec<Elem>,
}

pub fn abelianization(h: &FiniteGroup) -> Abelianization {
    let gens = h.generators();
    let k = gens.len();
    let (_, words, rels) = bfs_words(h, &gens);
    let (diag, q) = integer_snf(k, &rels);
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let group = FinAbGroup::new(keep.iter().map(|&i| diag[i] as u64).collect()).expect("finite abelianization");
    let coords = (0..h.order())
        .map(|x| {
            let w = &words[&x];
            group.reduce(&keep.iter().map(|&i| (0..k).map(|r| w[r] * q[r][i]).sum()).collect::<Vec<i64>>())
        })
        .collect();
    Abelianization { group, gens, coords }
}

/// A multiplicative local system on a finite Γ-module N: an extension
/// 0 → C → Ñ → N → 0 of Γ-modules with a faithful character χ_C of C.
#[derive(Clone, Debug)]
pub struct LocalSystemDatum {
    pub extension: SESData,
    /// χ_C on the basis of C.
    pub chi: Vec<RootExponent>,
}

impl LocalSystemDatum {
    pub fn new(extension: SESData, chi: Vec<RootExponent>) -> Result<Self> {
        let c = extension.sub.module();
        if chi.len() != c.rank() {
            return Err(Error::Invalid("χ needs one value per generator of C".into()));
        }
        for (v, &o) in chi.iter().zip(c.orders()) {
            if o % v.den() != 0 {
                return Err(Error::Invalid(format!("χ value {v} is incompatible with order {o}")));
            }
        }
        if !extension.sub.is_trivial() {
            return Err(Error::Invalid("Γ must act trivially on C".into()));
        }
        let c = c.clone();
        let l = LocalSystemDatum { extension, chi };
        for x in c.elements().skip(1) {
            if l.chi_of(&x).is_zero() {
                return Err(Error::Invalid(format!("χ is not faithful: it kills {x:?}")));
            }
        }
        Ok(l)
    }

    /// The Γ-module N.
    pub fn n(&self) -> &Arc<AbAction> {
        &self.extension.quo
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        self.extension.quo.group()
    }

    pub fn chi_of(&self, c: &[u64]) -> RootExponent {
        c.iter().zip(&self.chi).fold(RootExponent::zero(), |acc, (&k, v)| acc + v.scale(k as i64))
    }

    /// |C|, the order of the image of χ.
    pub fn chi_order(&self) -> u64 {
        self.extension.sub.module().order()
    }

    /// χ as a homomorphism C → Z/|C|.
    pub fn chi_hom(&self) -> AbHom {
        let m = self.chi_order();
        let target = FinAbGroup::cyclic(m);
        let row: Vec<i64> = self.chi.iter().map(|v| v.over(m) as i64).collect();
        let matrix = if target.rank() == 0 { vec![] } else { vec![row] };
        AbHom::new(self.extension.sub.module().clone(), target, matrix).expect("χ is a homomorphism")
    }

    /// Trivial Γ-module Z/|C| receiving χ-valued cochains.
    pub fn qz_action(&self) -> Arc<AbAction> {
        Arc::new(AbAction::trivial(self.gamma().clone(), FinAbGroup::cyclic(self.chi_order())))
    }

    /// χ_C ∘ c for a C-valued cochain.
    pub fn apply_chi(&self, c: &Cochain) -> Cochain {
        c.map_module(&self.chi_hom(), &self.qz_action())
    }

    /// The local system attached to a character χ: N → (1/p)Z/Z. The extension is
    /// the fibre product Ñ = N ×_{Z/p} Z/p^{depth+1} with C = pZ/p^{depth+1}.
    /// Pullbacks along homomorphisms from groups of exponent dividing p^depth are
    /// trivial exactly when χ∘φ = 0.
    pub fn from_character(n: &Arc<AbAction>, chi: &[RootExponent], p: u64, depth: u32) -> Result<Self> {
        let a = n.module();
        if chi.len() != a.rank() || chi.iter().any(|v| !p.is_multiple_of(v.den())) {
            return Err(Error::Invalid("χ must have values in (1/p)Z/Z on each generator".into()));
        }
        let chi_n = |x: &[u64]| -> u64 {
            x.iter().zip(chi).fold(RootExponent::zero(), |acc, (&k, v)| acc + v.scale(k as i64)).over(p)
        };
        for (i, &o) in a.orders().iter().enumerate() {
            if chi_n(&a.scale(o as i64, &a.basis(i))) != 0 || !(chi[i].over(p) * o).is_multiple_of(p) {
                return Err(Error::Invalid("χ is not a character of N".into()));
            }
        }
        for g in 0..n.group().order() {
            for i in 0..a.rank() {
                if chi_n(&n.apply(g, &a.basis(i))) != chi_n(&a.basis(i)) {
                    return Err(Error::Invalid("χ is not Γ-invariant".into()));
                }
            }
        }
        let top = crate::arith::ipow(p, depth + 1);
        let big = a.direct_sum(&FinAbGroup::cyclic(top));
        let r = a.rank();
        let mut gens: Vec<Elem> = (0..r)
            .map(|i| {
                let mut v = a.basis(i);
                v.push(chi_n(&a.basis(i)));
                v
            })
            .collect();
        let mut cgen = a.zero();
        cgen.push(p % top);
        gens.push(cgen.clone());
        let sub = big.span(&gens);
        let sc = subgroup_coords(&big, &sub);
        let mid = sc.group.clone();
        let to_mid = |v: &[u64]| sc.coords(v).expect("element of the fibre product").clone();
        let from_mid = |v: &[u64]| sc.embedding.apply(v);
        let gamma = n.group().clone();
        let col_matrix = |cols: Vec<Elem>, rows: usize| -> Vec<Vec<i64>> {
            (0..rows).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect()
        };
        let maps: Vec<AbHom> = (0..gamma.order())
            .map(|g| {
                let cols: Vec<Elem> = (0..mid.rank())
                    .map(|j| {
                        let v = from_mid(&mid.basis(j));
                        let mut w = n.apply(g, &v[..r]);
                        w.push(v[r]);
                        to_mid(&w)
                    })
                    .collect();
                AbHom::new(mid.clone(), mid.clone(), col_matrix(cols, mid.rank()))
            })
            .collect::<Result<_>>()?;
        let mid_act = Arc::new(AbAction::new(gamma.clone(), mid.clone(), maps)?);
        let c = FinAbGroup::cyclic(crate::arith::ipow(p, depth));
        let sub_act = Arc::new(AbAction::trivial(gamma, c.clone()));
        let inclusion = AbHom::new(c, mid.clone(), col_matrix(vec![to_mid(&cgen)], mid.rank()))?;
        let proj_cols: Vec<Elem> = (0..mid.rank()).map(|j| from_mid(&mid.basis(j))[..r].to_vec()).collect();
        let projection = AbHom::new(mid.clone(), a.clone(), col_matrix(proj_cols, r))?;
        let table: Vec<Elem> = a
            .elements()
            .map(|x| {
                let mut v = x.clone();
                v.push(chi_n(&x));
                to_mid(&v)
            })
            .collect();
        let ses = SESData::new(sub_act, mid_act, n.clone(), inclusion, projection, Section::Table(table))?;
        let chi_c = if depth == 0 { vec![] } else { vec![RootExponent::new(1, crate::arith::ipow(p, depth))] };
        LocalSystemDatum::new(ses, chi_c)
    }
}

/// The local system of the group ring: Ñ = (Z/pⁿ)[Γ], C the diagonal, N = Ñ/C,
/// χ_C the standard embedding Z/pⁿ → Q/Z.
pub fn induced_local_system(gamma: &Arc<FiniteGroup>, p: u64, n: u32) -> Result<LocalSystemDatum> {
    if gamma.order() > CAP_DEG3 {
        return Err(Error::cap("Γ for the induced local system", gamma.order() as u64, CAP_DEG3 as u64));
    }
    let ses = induced_ses(gamma, p, n)?;
    if gamma.order() <= CAP_DEG4 {
        for deg in 1..=3 {
            if cohomology_order_log(&ses.mid, deg)?.1 != 0 {
                return Err(Error::Invalid(format!("H^{deg}(Γ, Ñ) does not vanish")));
            }
        }
    }
    let chi = vec![RootExponent::new(1, crate::arith::ipow(p, n))];
    LocalSystemDatum::new(ses, chi)
}

/// Precomputed abelianization used to decide liftings of homomorphisms H → N.
struct Lifter<'a> {
    h: &'a FiniteGroup,
    ab: Abelianization,
}

impl<'a> Lifter<'a> {
    fn new(h: &'a FiniteGroup) -> Self {
        Lifter { h, ab: abelianization(h) }
    }

    /// A homomorphism s: H → Ñ with π∘s = φ, if one exists. φ must be a homomorphism.
    fn lift(&self, local: &LocalSystemDatum, phi: &[Elem]) -> Option<Vec<Elem>> {
        let ses = &local.extension;
        let nt = ses.mid.module();
        let nm = ses.quo.module();
        let d = self.ab.group.orders();
        let rn = nt.rank();
        let unknowns = d.len() * rn;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut rhs = Vec::new();
        let mut moduli = Vec::new();
        for (j, &dj) in d.iter().enumerate() {
            for (l, &o) in nt.orders().iter().enumerate() {
                let mut row = vec![0i64; unknowns];
                row[j * rn + l] = dj as i64;
                rows.push(row);
                rhs.push(0);
                moduli.push(o);
            }
        }
        let p = &ses.projection.matrix;
        for &g in &self.ab.gens {
            let a = &self.ab.coords[g];
            for (l2, &o) in nm.orders().iter().enumerate() {
                let mut row = vec![0i64; unknowns];
                for j in 0..d.len() {
                    for l in 0..rn {
                        row[j * rn + l] = (a[j] as i64 * p[l2][l] as i64).rem_euclid(o as i64);
                    }
                }
                rows.push(row);
                rhs.push(phi[g][l2] as i64);
                moduli.push(o);
            }
        }
        let w: Vec<Elem> = if unknowns == 0 {
            if phi.iter().any(|v| !nm.is_zero(v)) {
                return None;
            }
            vec![]
        } else if rows.is_empty() {
            vec![nt.zero(); d.len()]
        } else {
            let sol = solve_mod(&rows, &rhs, &moduli)?;
            (0..d.len())
                .map(|j| nt.reduce(&sol.x[j * rn..(j + 1) * rn].iter().map(|&v| v as i64).collect::<Vec<_>>()))
                .collect()
        };
        let s: Vec<Elem> = (0..self.h.order())
            .map(|x| {
                let a = &self.ab.coords[x];
                w.iter().zip(a).fold(nt.zero(), |acc, (wj, &aj)| nt.add(&acc, &nt.scale(aj as i64, wj)))
            })
            .collect();
        // the witness is re-verified by substitution
        let ok = (0..self.h.order()).all(|x| ses.projection.apply(&s[x]) == phi[x])
            && self.h.generators().iter().all(|&g| (0..self.h.order()).all(|x| s[self.h.mul(x, g)] == nt.add(&s[x], &s[g])));
        assert!(ok, "lifting witness failed verification");
        Some(s)
    }
}

fn check_hom_to_module(h: &FiniteGroup, a: &FinAbGroup, phi: &[Elem]) -> Result<()> {
    if phi.len() != h.order() || phi.iter().any(|v| !a.contains(v)) {
        return Err(Error::Invalid("φ must assign an element of N to every element of H".into()));
    }
    for x in 0..h.order() {
        for y in 0..h.order() {
            if phi[h.mul(x, y)] != a.add(&phi[x], &phi[y]) {
                return Err(Error::Invalid(format!("φ is not a homomorphism at ({x},{y})")));
            }
        }
    }
    Ok(())
}

/// Whether the pullback of the local system along φ: H → N is trivial, i.e.
/// φ lifts to a homomorphism H → Ñ. The lifting is returned as a witness.
pub fn pullback_trivial(local: &LocalSystemDatum, h: &FiniteGroup, phi: &[Elem]) -> Result<Option<Vec<Elem>>> {
    check_hom_to_module(h, local.n().module(), phi)?;
    Ok(Lifter::new(h).lift(local, phi))
}

/// A group H with a central subgroup N ≅ (abstract abelian group) such that H/N is abelian.
#[derive(Clone, Debug)]
pub struct ClassTwoData {
    pub group: Arc<FiniteGroup>,
    pub n: FinAbGroup,
    /// embed[i] is the element of H for the element of N with index i.
    pub embed: Vec<usize>,
    n_index: Vec<Option<usize>>,
}

impl ClassTwoData {
    pub fn new(group: Arc<FiniteGroup>, n: FinAbGroup, embed: Vec<usize>) -> Result<Self> {
        if embed.len() as u64 != n.order() || embed.iter().any(|&x| x >= group.order()) {
            return Err(Error::Invalid("embedding must list one element of H per element of N".into()));
        }
        let mut n_index = vec![None; group.order()];
        for (i, &x) in embed.iter().enumerate() {
            if n_index[x].replace(i).is_some() {
                return Err(Error::Invalid("embedding of N is not injective".into()));
            }
        }
        for i in 0..n.order() as usize {
            for j in 0..n.order() as usize {
                if embed[n.add_index(i, j)] != group.mul(embed[i], embed[j]) {
                    return Err(Error::Invalid("embedding of N is not a homomorphism".into()));
                }
            }
        }
        let center = group.center();
        if embed.iter().any(|x| center.binary_search(x).is_err()) {
            return Err(Error::Invalid("N is not central".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if n_index[group.commutator(a, b)].is_none() {
                    return Err(Error::Invalid(format!("commutator [{a},{b}] is not in N, so H/N is not abelian")));
                }
            }
        }
        Ok(ClassTwoData { group, n, embed, n_index })
    }

    /// N = Z(H).
    pub fn with_center(group: Arc<FiniteGroup>) -> Result<Self> {
        let (n, embed) = abelian_coords(group.as_ref(), group.center())?;
        Self::new(group, n, embed)
    }

    pub fn n_elem(&self, h: usize) -> Option<Elem> {
        self.n_index[h].map(|i| self.n.element(i))
    }

    pub fn n_embed(&self, x: &[u64]) -> usize {
        self.embed[self.n.index(x)]
    }

    /// c_k: h ↦ [h, k] as elements of N.
    pub fn commutator_map(&self, k: usize) -> Vec<Elem> {
        (0..self.group.order()).map(|h| self.n_elem(self.group.commutator(h, k)).expect("class two")).collect()
    }
}

fn check_same_n(data: &ClassTwoData, local: &LocalSystemDatum) -> Result<()> {
    if &data.n != local.n().module() {
        return Err(Error::Invalid(format!("N = {} does not match the local system on {}", data.n, local.n().module())));
    }
    Ok(())
}

/// K = {k ∈ H : c_k^*L trivial}, sorted.
pub fn radical_k(data: &ClassTwoData, local: &LocalSystemDatum) -> Result<Vec<usize>> {
    check_same_n(data, local)?;
    let lifter = Lifter::new(&data.group);
    let k: Vec<usize> =
        (0..data.group.order()).filter(|&x| lifter.lift(local, &data.commutator_map(x)).is_some()).collect();
    debug_assert!(data.embed.iter().all(|x| k.binary_search(x).is_ok()));
    debug_assert_eq!(closure(data.group.as_ref(), &k), k);
    Ok(k)
}

/// An outer action γ ↦ α_γ·Inn(H) respecting N and the local system.
#[derive(Clone, Debug)]
pub struct OuterActionData {
    pub base: ClassTwoData,
    pub local: LocalSystemDatum,
    pub gamma: Arc<FiniteGroup>,
    /// α_γ for each element of Γ.
    pub reps: Vec<GroupMap>,
}

impl OuterActionData {
    pub fn new(base: ClassTwoData, local: LocalSystemDatum, gamma: Arc<FiniteGroup>, reps: Vec<GroupMap>) -> Result<Self> {
        check_same_n(&base, &local)?;
        let h = &base.group;
        if local.gamma().as_ref() != gamma.as_ref() {
            return Err(Error::Invalid("the local system is over a different Γ".into()));
        }
        if reps.len() != gamma.order() {
            return Err(Error::Invalid(format!("expected {} automorphisms, got {}", gamma.order(), reps.len())));
        }
        if h.center().len() != base.embed.len() {
            return Err(Error::Invalid("N must be the full center of H, so that Inn(H) = H/N".into()));
        }
        for (g, a) in reps.iter().enumerate() {
            if !a.is_bijective() || !a.is_homomorphism(h, h) {
                return Err(Error::Invalid(format!("α_{g} is not an automorphism of H")));
            }
            for x in local.n().module().elements() {
                if a.apply(base.n_embed(&x)) != base.n_embed(&local.n().apply(g, &x)) {
                    return Err(Error::Invalid(format!("α_{g} does not restrict to the Γ-action on N")));
                }
            }
            for x in 0..h.order() {
                if base.n_elem(h.mul(h.inv(x), a.apply(x))).is_none() {
                    return Err(Error::Invalid(format!("α_{g} acts nontrivially on H/N")));
                }
            }
        }
        let d = OuterActionData { base, local, gamma, reps };
        for a in 0..d.gamma.order() {
            for b in 0..d.gamma.order() {
                let ab = d.gamma.mul(a, b);
                let m = d.reps[a].compose(&d.reps[b]).compose(&d.reps[ab].inverse());
                if !d.is_inner(&m) {
                    return Err(Error::Invalid(format!("α_{a} α_{b} α_{ab}⁻¹ is not inner")));
                }
            }
        }
        Ok(d)
    }

    fn is_inner(&self, m: &GroupMap) -> bool {
        let h = &self.base.group;
        (0..h.order()).any(|x| GroupMap::inner(h, x) == *m)
    }

    /// The outer action of an honest extension G ⊇ H: α_γ = conjugation by s(γ).
    pub fn from_extension(
        base: ClassTwoData,
        local: LocalSystemDatum,
        gamma: Arc<FiniteGroup>,
        g: &FiniteGroup,
        h_embed: &[usize],
        section: &[usize],
    ) -> Result<Self> {
        let back = inverse_embedding(g, h_embed)?;
        let reps = section
            .iter()
            .map(|&s| {
                let images = h_embed
                    .iter()
                    .map(|&x| back[g.conj(s, x)].ok_or_else(|| Error::Invalid("H is not normal in G".into())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupMap { images })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, local, gamma, reps)
    }
}

fn inverse_embedding(g: &FiniteGroup, h_embed: &[usize]) -> Result<Vec<Option<usize>>> {
    let mut back = vec![None; g.order()];
    for (i, &x) in h_embed.iter().enumerate() {
        if x >= g.order() || back[x].replace(i).is_some() {
            return Err(Error::Invalid("embedding of H is not injective".into()));
        }
    }
    Ok(back)
}

/// Aut(H) as a group under composition.
struct AutGroup<'a>(&'a Automorphisms);

impl GroupLike for AutGroup<'_> {
    fn order(&self) -> usize {
        self.0.maps.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.0.index_of(&self.0.maps[a].compose(&self.0.maps[b])).expect("closed under composition")
    }
    fn inv(&self, a: usize) -> usize {
        self.0.index_of(&self.0.maps[a].inverse()).expect("closed under inverses")
    }
}

/// 0 → K/N → K_Γ → Γ → 0 with the chosen lifts and the 2-cocycle f.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub auts: Automorphisms,
    /// K_γ as indices into `auts.maps`.
    pub fibers: Vec<Vec<usize>>,
    /// The chosen γ̃ (least member of K_γ).
    pub lifts: Vec<usize>,
    /// K ⊆ H.
    pub k: Vec<usize>,
    /// K_1 ≅ K/N.
    pub kn: FinAbGroup,
    /// Automorphism index of each element of K/N.
    pub kn_embed: Vec<usize>,
    /// Elements of K_Γ as (γ, automorphism index), sorted.
    pub elements: Vec<(usize, usize)>,
    pub group: FiniteGroup,
    /// f(a,b) = ã b̃ (ab)~⁻¹ in K/N.
    pub f: Cochain,
    kn_of_aut: HashMap<usize, usize>,
}

impl CentralExtension {
    /// Coordinates in K/N of an inner automorphism in K_1.
    pub fn kn_coords(&self, aut: usize) -> Option<Elem> {
        self.kn_of_aut.get(&aut).map(|&i| self.kn.element(i))
    }

    /// The least k ∈ K with Inn_k = f(a,b), for all (a,b).
    pub fn default_lift(&self, data: &OuterActionData) -> Vec<usize> {
        let ng = data.gamma.order();
        let h = &data.base.group;
        let mut least: HashMap<usize, usize> = HashMap::new();
        for &x in &self.k {
            let idx = self.auts.index_of(&GroupMap::inner(h, x)).expect("inner automorphism");
            least.entry(idx).or_insert(x);
        }
        (0..ng * ng)
            .map(|i| {
                let v = self.f.value(&[i / ng, i % ng]);
                least[&self.kn_embed[self.kn.index(v)]]
            })
            .collect()
    }
}

pub fn central_extension(data: &OuterActionData) -> Result<CentralExtension> {
    let h = &data.base.group;
    let gamma = &data.gamma;
    let ng = gamma.order();
    let auts = h.automorphisms()?;
    let k = radical_k(&data.base, &data.local)?;
    let lifter = Lifter::new(h);
    // c_α(x) = x·α(x⁻¹)
    let c_map = |a: &GroupMap| -> Vec<Elem> {
        (0..h.order()).map(|x| data.base.n_elem(h.mul(x, a.apply(h.inv(x)))).expect("trivial on H/N")).collect()
    };
    let mut fibers = Vec::with_capacity(ng);
    for g in 0..ng {
        let idx = auts.index_of(&data.reps[g]).expect("automorphism");
        let coset = &auts.cosets[auts.coset_of[idx]];
        let fib: Vec<usize> =
            coset.iter().copied().filter(|&a| lifter.lift(&data.local, &c_map(&auts.maps[a])).is_some()).collect();
        if fib.is_empty() {
            return Err(Error::EmptyFiber(g));
        }
        fibers.push(fib);
    }
    // c_{αβ}(x) = c_α(x)·α(c_β(x)), and K_a K_b ⊆ K_{ab}
    let n = &data.base.n;
    let aut_group = AutGroup(&auts);
    for a in 0..ng {
        for b in 0..ng {
            let ab = gamma.mul(a, b);
            for &x in &fibers[a] {
                for &y in &fibers[b] {
                    let xy = aut_group.mul(x, y);
                    if fibers[ab].binary_search(&xy).is_err() {
                        return Err(Error::Invalid(format!("K_{a}·K_{b} is not contained in K_{ab}")));
                    }
                    let (cx, cy, cxy) = (c_map(&auts.maps[x]), c_map(&auts.maps[y]), c_map(&auts.maps[xy]));
                    for z in 0..h.order() {
                        let rhs = n.add(&cx[z], &data.local.n().apply(a, &cy[z]));
                        if cxy[z] != rhs {
                            return Err(Error::Invalid("the cocycle identity for c fails".into()));
                        }
                    }
                }
            }
        }
    }
    let lifts: Vec<usize> = fibers.iter().map(|f| f[0]).collect();
    let (kn, kn_embed) = abelian_coords(&aut_group, &fibers[0])?;
    let kn_of_aut: HashMap<usize, usize> = kn_embed.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let elements: Vec<(usize, usize)> =
        fibers.iter().enumerate().flat_map(|(g, f)| f.iter().map(move |&a| (g, a))).collect();
    let pos: HashMap<(usize, usize), usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let group = FiniteGroup::from_fn(elements.len(), |u, v| {
        let (g1, a1) = elements[u];
        let (g2, a2) = elements[v];
        pos[&(gamma.mul(g1, g2), aut_group.mul(a1, a2))]
    })?;
    let kn_action = Arc::new(AbAction::trivial(gamma.clone(), kn.clone()));
    let section: Vec<usize> = (0..ng).map(|g| pos[&(g, lifts[g])]).collect();
    let f = cocycle_from_extension(
        &group,
        &kn_action,
        &|m| pos[&(0, kn_embed[kn.index(m)])],
        &|u| {
            let (g, a) = elements[u];
            (g == 0).then(|| kn.element(kn_of_aut[&a]))
        },
        &section,
    )?;
    Ok(CentralExtension { auts, fibers, lifts, k, kn, kn_embed, elements, group, f, kn_of_aut })
}

/// ω(a,b,c) = ã(F(b,c))·F(a,bc)·(F(a,b)·F(ab,c))⁻¹ ∈ N, for F a lift of f to K.
/// F is a table indexed by a·|Γ| + b.
pub fn obstruction_omega(data: &OuterActionData, ce: &CentralExtension, lift: &[usize]) -> Result<Cochain> {
    let gamma = &data.gamma;
    let ng = gamma.order();
    let h = &data.base.group;
    if lift.len() != ng * ng {
        return Err(Error::LiftInvalid(format!("F needs {} entries", ng * ng)));
    }
    for a in 0..ng {
        for b in 0..ng {
            let x = lift[a * ng + b];
            if x >= h.order() || ce.k.binary_search(&x).is_err() {
                return Err(Error::LiftInvalid(format!("F({a},{b}) is not in K")));
            }
            let idx = ce.auts.index_of(&GroupMap::inner(h, x)).expect("inner automorphism");
            if ce.kn_coords(idx).as_deref() != Some(ce.f.value(&[a, b])) {
                return Err(Error::LiftInvalid(format!("F({a},{b}) does not reduce to f({a},{b})")));
            }
            if (a == 0 || b == 0) && x != 0 {
                return Err(Error::LiftInvalid(format!("F({a},{b}) must be the identity")));
            }
        }
    }
    let fv = |a: usize, b: usize| lift[a * ng + b];
    let bad = std::cell::Cell::new(None);
    let omega = Cochain::from_fn(data.local.n(), 3, |args| {
        let (a, b, c) = (args[0], args[1], args[2]);
        let left = h.mul(ce.auts.maps[ce.lifts[a]].apply(fv(b, c)), fv(a, gamma.mul(b, c)));
        let right = h.mul(fv(a, b), fv(gamma.mul(a, b), c));
        data.base.n_elem(h.mul(left, h.inv(right))).unwrap_or_else(|| {
            bad.set(Some((a, b, c)));
            data.base.n.zero()
        })
    });
    if let Some((a, b, c)) = bad.get() {
        return Err(Error::LiftInvalid(format!("ω({a},{b},{c}) is not in N")));
    }
    let omega = omega?;
    if !coboundary(&omega).is_zero() {
        return Err(Error::NotACocycle("ω".into()));
    }
    Ok(omega)
}

/// F' = η·F for an N-valued 2-cochain η.
pub fn shift_lift(data: &OuterActionData, lift: &[usize], eta: &Cochain) -> Vec<usize> {
    let ng = data.gamma.order();
    let h = &data.base.group;
    (0..ng * ng).map(|i| h.mul(data.base.n_embed(eta.value(&[i / ng, i % ng])), lift[i])).collect()
}

/// β = χ_C ∘ δω, a 4-cochain in Z/|C| ⊂ Q/Z.
pub fn beta(data: &OuterActionData, omega: &Cochain) -> Result<Cochain> {
    beta_for(&data.local, omega)
}

pub fn beta_for(local: &LocalSystemDatum, omega: &Cochain) -> Result<Cochain> {
    let d = connecting_map(&local.extension, omega)?;
    Ok(local.apply_chi(&d))
}

/// For ω = dη, a Q/Z cochain ξ with dξ = χ∘δω: writing d(s∘η) − s∘(dη) = ι(ε), ξ = −χ∘ε.
pub fn transport_witness(local: &LocalSystemDatum, eta: &Cochain) -> Result<Cochain> {
    let ses = &local.extension;
    let n = eta.degree();
    let lifted = Cochain::from_fn(&ses.mid, n, |args| ses.lift(eta.value(args)))?;
    let d_eta = coboundary(eta);
    let lifted_d = Cochain::from_fn(&ses.mid, n + 1, |args| ses.lift(d_eta.value(args)))?;
    let diff = coboundary(&lifted).sub(&lifted_d);
    let bad = std::cell::Cell::new(false);
    let eps = Cochain::from_fn(&ses.sub, n + 1, |args| {
        ses.restrict(diff.value(args)).cloned().unwrap_or_else(|| {
            bad.set(true);
            ses.sub.module().zero()
        })
    })?;
    if bad.get() {
        return Err(Error::Invalid("d(s∘η) − s∘dη leaves C".into()));
    }
    Ok(local.apply_chi(&eps).scale(-1))
}

/// Witnesses that ω and β vanish in cohomology when an honest extension exists.
#[derive(Clone, Debug)]
pub struct ExtensionWitness {
    /// F_G(a,b) = s′(a)s′(b)s′(ab)⁻¹ with s′(γ) inducing the chosen lift γ̃; it has ω = 0.
    pub compatible_lift: Vec<usize>,
    /// η = F·F_G⁻¹, with dη = ω(F).
    pub eta: Cochain,
    /// ξ with dξ = β.
    pub beta_witness: Cochain,
}

pub fn honest_extension_witness(
    data: &OuterActionData,
    ce: &CentralExtension,
    lift: &[usize],
    g: &FiniteGroup,
    h_embed: &[usize],
    section: &[usize],
) -> Result<ExtensionWitness> {
    let h = &data.base.group;
    let gamma = &data.gamma;
    let ng = gamma.order();
    let back = inverse_embedding(g, h_embed)?;
    if section.len() != ng {
        return Err(Error::SectionInvalid("section must have one entry per element of Γ".into()));
    }
    // s′(γ) = k·s(γ) where Inn_k = γ̃ ∘ (conj by s(γ))⁻¹
    let mut s2 = Vec::with_capacity(ng);
    for gm in 0..ng {
        let images = h_embed
            .iter()
            .map(|&x| back[g.conj(section[gm], x)].ok_or_else(|| Error::SectionInvalid("H is not normal".into())))
            .collect::<Result<Vec<_>>>()?;
        let conj = GroupMap { images };
        let target = ce.auts.maps[ce.lifts[gm]].compose(&conj.inverse());
        let k = (0..h.order())
            .find(|&x| GroupMap::inner(h, x) == target)
            .ok_or_else(|| Error::SectionInvalid(format!("conjugation by s({gm}) is not in the outer class of α_{gm}")))?;
        s2.push(g.mul(h_embed[k], section[gm]));
    }
    let mut compatible = Vec::with_capacity(ng * ng);
    for a in 0..ng {
        for b in 0..ng {
            let u = g.mul(g.mul(s2[a], s2[b]), g.inv(s2[gamma.mul(a, b)]));
            compatible.push(back[u].ok_or_else(|| Error::SectionInvalid("section does not cover Γ".into()))?);
        }
    }
    let om0 = obstruction_omega(data, ce, &compatible)?;
    if !om0.is_zero() {
        return Err(Error::Invalid("the compatible lift has nonzero ω".into()));
    }
    let bad = std::cell::Cell::new(false);
    let eta = Cochain::from_fn(data.local.n(), 2, |args| {
        let i = args[0] * ng + args[1];
        data.base.n_elem(h.mul(lift[i], h.inv(compatible[i]))).unwrap_or_else(|| {
            bad.set(true);
            data.base.n.zero()
        })
    })?;
    if bad.get() {
        return Err(Error::LiftInvalid("F and the compatible lift differ outside N".into()));
    }
    let omega = obstruction_omega(data, ce, lift)?;
    if coboundary(&eta) != omega {
        return Err(Error::Invalid("dη ≠ ω".into()));
    }
    let beta_witness = transport_witness(&data.local, &eta)?;
    if coboundary(&beta_witness) != beta(data, &omega)? {
        return Err(Error::Invalid("transported witness does not bound β".into()));
    }
    Ok(ExtensionWitness { compatible_lift: compatible, eta, beta_witness })
}

/// The extension class of G ⊇ N = H and its image ω′ = χ_C∘δ(f_G) in Q/Z.
#[derive(Clone, Debug)]
pub struct Associator {
    pub f: Cochain,
    pub omega: Cochain,
}

/// ω′ for an extension 1 → N → G → Γ → 1 presented through an embedding of the
/// module N, its inverse on the image, and a section of G → Γ with s(e) = e.
pub fn associator_from_extension(
    g: &dyn GroupLike,
    local: &LocalSystemDatum,
    embed: &dyn Fn(&[u64]) -> usize,
    unembed: &dyn Fn(usize) -> Option<Elem>,
    section: &[usize],
) -> Result<Associator> {
    let f = cocycle_from_extension(g, local.n(), embed, unembed, section)?;
    let omega = beta_for(local, &f)?;
    Ok(Associator { f, omega })
}

/// Same as `associator_from_extension` for a table group with N given by its elements.
pub fn associator_from_table(
    g: &FiniteGroup,
    local: &LocalSystemDatum,
    n_embed: &[usize],
    section: &[usize],
) -> Result<Associator> {
    let n = local.n().module();
    if n_embed.len() as u64 != n.order() {
        return Err(Error::Invalid("embedding must list one element per element of N".into()));
    }
    let back = inverse_embedding(g, n_embed)?;
    associator_from_extension(g, local, &|m| n_embed[n.index(m)], &|u| back[u].map(|i| n.element(i)), section)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobalg::FakeHeisenberg;
    use crate::groupcoh::{cocycle_tests, cohomology_group, extension_from_cocycle, shapiro_lift};

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    /// Z/4 → Z/2 over a given Γ acting trivially.
    fn z4_over_z2(gamma: &Arc<FiniteGroup>) -> LocalSystemDatum {
        let c = FinAbGroup::cyclic(2);
        let mid = FinAbGroup::cyclic(4);
        let n = FinAbGroup::cyclic(2);
        let sub = Arc::new(AbAction::trivial(gamma.clone(), c.clone()));
        let mid_a = Arc::new(AbAction::trivial(gamma.clone(), mid.clone()));
        let quo = Arc::new(AbAction::trivial(gamma.clone(), n.clone()));
        let ses = SESData::new(
            sub,
            mid_a,
            quo,
            AbHom::new(c, mid.clone(), vec![vec![2]]).unwrap(),
            AbHom::new(mid, n, vec![vec![1]]).unwrap(),
            Section::Linear(vec![vec![1]]),
        )
        .unwrap();
        LocalSystemDatum::new(ses, vec![RootExponent::new(1, 2)]).unwrap()
    }

    #[test]
    fn induced_system_shapes() {
        let l = induced_local_system(&z(2), 2, 1).unwrap();
        assert_eq!(l.n().module(), &FinAbGroup::cyclic(2));
        assert!(l.n().is_trivial());
        for (g, p, n) in [(z(3), 2u64, 1u32), (z(4), 3, 2), (Arc::new(FiniteGroup::abelian(&[2, 2])), 2, 2)] {
            let l = induced_local_system(&g, p, n).unwrap();
            assert_eq!(l.n().module().order(), crate::arith::ipow(p, n).pow(g.order() as u32 - 1));
        }
        let l = induced_local_system(&z(4), 2, 1).unwrap();
        assert_eq!(cohomology_order_log(&l.extension.mid, 1).unwrap().1, 0);
    }

    #[test]
    fn pullbacks() {
        let g1 = z(1);
        let l = z4_over_z2(&g1);
        let h = FiniteGroup::cyclic(2);
        let zero = vec![vec![0], vec![0]];
        assert!(pullback_trivial(&l, &h, &zero).unwrap().is_some());
        let id = vec![vec![0], vec![1]];
        assert!(pullback_trivial(&l, &h, &id).unwrap().is_none());
        // through Z/4 the identity lifts
        let h4 = FiniteGroup::cyclic(4);
        let red: Vec<Elem> = (0..4).map(|x| vec![x % 2]).collect();
        let s = pullback_trivial(&l, &h4, &red).unwrap().unwrap();
        for x in 0..4 {
            assert_eq!(l.extension.projection.apply(&s[x]), red[x]);
        }
        assert!(pullback_trivial(&l, &h, &[vec![1], vec![1]]).is_err());
    }

    #[test]
    fn radicals() {
        let g1 = z(1);
        let l = z4_over_z2(&g1);
        let q8 = Arc::new(FiniteGroup::dicyclic(2));
        let data = ClassTwoData::with_center(q8.clone()).unwrap();
        let k = radical_k(&data, &l).unwrap();
        assert_eq!(k, q8.center().to_vec());
        let d4 = Arc::new(FiniteGroup::dihedral(4));
        let data = ClassTwoData::with_center(d4.clone()).unwrap();
        assert_eq!(radical_k(&data, &l).unwrap(), d4.center().to_vec());
        // abelian H: all commutators vanish
        let v = z(4);
        let (n, embed) = abelian_coords(v.as_ref(), &[0, 2]).unwrap();
        assert_eq!(n.order(), 2);
        let data = ClassTwoData::new(v, n, embed).unwrap();
        assert_eq!(radical_k(&data, &l).unwrap(), vec![0, 1, 2, 3]);
    }

    fn heisenberg_radical(p: u64, m: u32) {
        let fh = FakeHeisenberg::new(p, m).unwrap();
        let k = &fh.field;
        let q = k.order() as usize;
        let data = ClassTwoData::with_center(fh.group.clone()).unwrap();
        // N coordinates versus field digits: χ = Tr/p evaluated through the embedding
        let n = data.n.clone();
        let chi: Vec<RootExponent> = (0..n.rank())
            .map(|i| {
                let (_, a) = fh.coords(data.n_embed(&n.basis(i)));
                RootExponent::new(k.trace(a) as i64, p)
            })
            .collect();
        let exp = fh.group.exponent() as u64;
        let depth = crate::arith::prime_power(exp).unwrap().1;
        let act = Arc::new(AbAction::trivial(z(1), n));
        let l = LocalSystemDatum::from_character(&act, &chi, p, depth).unwrap();
        let kk = radical_k(&data, &l).unwrap();
        let mut xs: Vec<u32> = kk.iter().map(|&g| fh.coords(g).0).collect();
        xs.sort();
        xs.dedup();
        let mut sub = k.subfield(2);
        sub.sort();
        assert_eq!(xs, sub);
        assert_eq!(kk.len(), sub.len() * q);
    }

    #[test]
    fn heisenberg_radicals() {
        heisenberg_radical(2, 2);
        heisenberg_radical(3, 2);
    }

    fn q8_inner_data(gamma: &Arc<FiniteGroup>, twist: &[usize]) -> OuterActionData {
        let q8 = Arc::new(FiniteGroup::dicyclic(2));
        let base = ClassTwoData::with_center(q8.clone()).unwrap();
        let l = z4_over_z2(gamma);
        let reps = twist.iter().map(|&x| GroupMap::inner(&q8, x)).collect();
        OuterActionData::new(base, l, gamma.clone(), reps).unwrap()
    }

    #[test]
    fn q8_inner_outer_action() {
        let g = z(2);
        let data = q8_inner_data(&g, &[0, 0]);
        let ce = central_extension(&data).unwrap();
        assert_eq!(ce.kn.order(), 1);
        assert!(ce.f.is_zero());
        assert_eq!(ce.group.order(), 2);
        let lift = ce.default_lift(&data);
        let om = obstruction_omega(&data, &ce, &lift).unwrap();
        assert!(om.is_zero());
        assert!(beta(&data, &om).unwrap().is_zero());
        // Γ trivial: K_Γ = K/N
        let data1 = q8_inner_data(&z(1), &[0]);
        let ce1 = central_extension(&data1).unwrap();
        assert_eq!(ce1.group.order() as u64, ce1.kn.order());
    }

    #[test]
    fn fiber_over_identity_is_k_mod_n() {
        // H = D4 with the split local system on its center: K = H
        let d4 = Arc::new(FiniteGroup::dihedral(4));
        let base = ClassTwoData::with_center(d4.clone()).unwrap();
        let g = z(2);
        let act = Arc::new(AbAction::trivial(g.clone(), base.n.clone()));
        let l = LocalSystemDatum::from_character(&act, &[RootExponent::zero()], 2, 2).unwrap();
        let reps = vec![GroupMap::identity(8), GroupMap::inner(&d4, 1)];
        let data = OuterActionData::new(base, l, g.clone(), reps).unwrap();
        let ce = central_extension(&data).unwrap();
        assert_eq!(ce.k.len(), 8);
        assert_eq!(ce.kn.order(), 4);
        assert_eq!(ce.group.order(), 8);
        let lift = ce.default_lift(&data);
        let om = obstruction_omega(&data, &ce, &lift).unwrap();
        // the honest extension D4 × Z/2 realizes the action
        let gg = FiniteGroup::product(&d4, &g);
        let h_embed: Vec<usize> = (0..8).map(|x| x * 2).collect();
        let w = honest_extension_witness(&data, &ce, &lift, &gg, &h_embed, &[0, 1]).unwrap();
        assert_eq!(coboundary(&w.eta), om);
    }

    #[test]
    fn shifting_lift_shifts_omega() {
        let d4 = Arc::new(FiniteGroup::dihedral(4));
        let base = ClassTwoData::with_center(d4.clone()).unwrap();
        let g = z(2);
        let act = Arc::new(AbAction::trivial(g.clone(), base.n.clone()));
        let l = LocalSystemDatum::from_character(&act, &[RootExponent::zero()], 2, 2).unwrap();
        let reps = vec![GroupMap::identity(8), GroupMap::inner(&d4, 1)];
        let data = OuterActionData::new(base, l, g, reps).unwrap();
        let ce = central_extension(&data).unwrap();
        let lift = ce.default_lift(&data);
        let om = obstruction_omega(&data, &ce, &lift).unwrap();
        // every normalized N-valued 2-cochain on Z/2: η(1,1) ∈ N
        for v in 0..2u64 {
            let eta = Cochain::from_fn(data.local.n(), 2, |a| vec![if a == [1, 1] { v } else { 0 }]).unwrap();
            let om2 = obstruction_omega(&data, &ce, &shift_lift(&data, &lift, &eta)).unwrap();
            assert_eq!(om2, om.add(&coboundary(&eta)));
        }
        let mut bad = lift.clone();
        bad[3] = 1;
        assert!(matches!(obstruction_omega(&data, &ce, &bad), Err(Error::LiftInvalid(_))));
    }

    #[test]
    fn beta_of_nontrivial_class() {
        let g = z(2);
        let l = induced_local_system(&g, 2, 1).unwrap();
        let h3 = cohomology_group(l.n(), 3).unwrap();
        assert_eq!(h3.invariant_factors, vec![2]);
        let om = &h3.representatives[0];
        let b = beta_for(&l, om).unwrap();
        let zero = Cochain::zero(b.action(), 4);
        assert!(!cocycle_tests(&b, &zero).unwrap().cohomologous);
        // a coboundary maps to a coboundary with the transported witness
        let eta = Cochain::from_fn(l.n(), 2, |a| vec![if a == [1, 1] { 1 } else { 0 }]).unwrap();
        let b2 = beta_for(&l, &coboundary(&eta)).unwrap();
        let xi = transport_witness(&l, &eta).unwrap();
        assert_eq!(coboundary(&xi), b2);
    }

    #[test]
    fn associator_round_trip_z2() {
        let g = z(2);
        let l = induced_local_system(&g, 2, 1).unwrap();
        let c = Arc::new(AbAction::trivial(g.clone(), FinAbGroup::cyclic(2)));
        for om in cohomology_group(&c, 3).unwrap().classes(&c) {
            let sl = shapiro_lift(&g, 2, 1, &om).unwrap();
            let ext = extension_from_cocycle(&sl.f.with_action(l.n())).unwrap();
            let ng = 2;
            let assoc = associator_from_extension(
                &ext,
                &l,
                &|m| ext.embed(m),
                &|u| (u % ng == 0).then(|| ext.split(u).0),
                &ext.section(),
            )
            .unwrap();
            let t = cocycle_tests(&assoc.omega, &om.with_action(assoc.omega.action())).unwrap();
            assert!(t.cohomologous);
            assert_eq!(coboundary(&t.witness.unwrap()), assoc.omega.sub(&om.with_action(assoc.omega.action())));
        }
        // G = Z/4 as a table
        let z4 = FiniteGroup::cyclic(4);
        let a = associator_from_table(&z4, &l, &[0, 2], &[0, 1]).unwrap();
        assert!(!a.omega.is_zero());
    }

    #[test]
    fn character_local_system() {
        let g = z(1);
        let act = Arc::new(AbAction::trivial(g.clone(), FinAbGroup::new(vec![2, 2]).unwrap()));
        let l = LocalSystemDatum::from_character(&act, &[RootExponent::new(1, 2), RootExponent::zero()], 2, 1).unwrap();
        assert_eq!(l.extension.mid.module().order(), 8);
        let h = FiniteGroup::cyclic(2);
        // φ with χ∘φ = 0 lifts, χ∘φ ≠ 0 does not
        assert!(pullback_trivial(&l, &h, &[vec![0, 0], vec![0, 1]]).unwrap().is_some());
        assert!(pullback_trivial(&l, &h, &[vec![0, 0], vec![1, 0]]).unwrap().is_none());
        assert!(pullback_trivial(&l, &h, &[vec![0, 0], vec![1, 1]]).unwrap().is_none());
    }
}
