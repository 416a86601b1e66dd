//! Fixture corpus shared by the acceptance and property suites.
#![allow(dead_code)]

use std::sync::Arc;

use modcat::centerdata::{double_modular_data, pointed_modular_data, ModularData};
use modcat::cyclotomic::RootExponent;
use modcat::extlab::{ClassTwoData, LocalSystemDatum, OuterActionData};
use modcat::finab::{AbAction, AbHom, FinAbGroup};
use modcat::fingrp::catalog::small_p_groups;
use modcat::fingrp::{FiniteGroup, GroupMap};
use modcat::frobalg::{norm_form, FakeHeisenberg};
use modcat::groupcoh::Cochain;
use modcat::metric::{hyperbolic, orthogonal_sum, validate, MetricGroup};

/// A metric group built from named orthogonal summands.
#[derive(Clone, Debug)]
pub struct Form {
    pub name: String,
    pub metric: MetricGroup,
}

fn form_on(orders: Vec<u64>, q: impl Fn(&[u64]) -> RootExponent) -> MetricGroup {
    let a = FinAbGroup::new(orders).unwrap();
    let values = a.elements().map(|x| q(&x)).collect();
    validate(&a, values).unwrap()
}

/// Z/p^k with q(x) = u x²/p^k for odd p, and Z/2^k with q(x) = u x²/2^{k+1}.
pub fn cyclic_form(p: u64, k: u32, u: i64) -> MetricGroup {
    let n = p.pow(k);
    let den = if p == 2 { 2 * n } else { n };
    form_on(vec![n], |x| RootExponent::new(u * (x[0] * x[0]) as i64, den))
}

/// (x² + xy + y²)/2^k on (Z/2^k)².
pub fn e_form(k: u32) -> MetricGroup {
    let n = 2u64.pow(k);
    form_on(vec![n, n], |x| RootExponent::new((x[0] * x[0] + x[0] * x[1] + x[1] * x[1]) as i64, n))
}

pub fn h_form(k: u32) -> MetricGroup {
    hyperbolic(&FinAbGroup::cyclic(2u64.pow(k)))
}

/// Indecomposable forms of order ≤ max, one per (group, form) up to the value table.
pub fn blocks(max: u64) -> Vec<Form> {
    let mut out: Vec<Form> = Vec::new();
    let mut push = |name: String, m: MetricGroup| {
        if m.order() <= max && !out.iter().any(|f| f.metric == m) {
            out.push(Form { name, metric: m });
        }
    };
    for k in 1..=5u32 {
        for u in [1, 3, 5, 7] {
            push(format!("Z{}<{u}>", 2u64.pow(k)), cyclic_form(2, k, u));
        }
        push(format!("H{}", 2u64.pow(k)), h_form(k));
        push(format!("E{}", 2u64.pow(k)), e_form(k));
    }
    for (p, nonresidue) in [(3u64, 2i64), (5, 2), (7, 3)] {
        for k in 1..=3u32 {
            for u in [1, nonresidue] {
                push(format!("Z{}<{u}>", p.pow(k)), cyclic_form(p, k, u));
            }
        }
    }
    out
}

/// Orthogonal sums of blocks (multisets, non-decreasing block index) of order ≤ max,
/// the trivial form first.
pub fn forms(max: u64) -> Vec<Form> {
    let bs = blocks(max);
    let mut out = vec![Form { name: "0".into(), metric: MetricGroup::trivial() }];
    fn rec(bs: &[Form], start: usize, cur: &Form, max: u64, out: &mut Vec<Form>) {
        for (i, b) in bs.iter().enumerate().skip(start) {
            if cur.metric.order() * b.metric.order() > max {
                continue;
            }
            let next = if cur.name == "0" {
                b.clone()
            } else {
                Form { name: format!("{}+{}", cur.name, b.name), metric: orthogonal_sum(&cur.metric, &b.metric) }
            };
            out.push(next.clone());
            rec(bs, i, &next, max, out);
        }
    }
    let zero = out[0].clone();
    rec(&bs, 0, &zero, max, &mut out);
    out
}

pub fn is_p_group(m: &MetricGroup, p: u64) -> bool {
    let mut o = m.order();
    while o.is_multiple_of(p) {
        o /= p;
    }
    o == 1 && m.order() > 1
}

/// A Γ-module structure on a metric group by isometries.
#[derive(Clone, Debug)]
pub struct ActionFixture {
    pub name: String,
    pub metric: MetricGroup,
    pub action: Arc<AbAction>,
}

fn scaled_identity(rank: usize, k: i64) -> Vec<Vec<i64>> {
    (0..rank).map(|i| (0..rank).map(|j| if i == j { k } else { 0 }).collect()).collect()
}

/// Block matrix on B ⊕ B ⊕ C: [[a·I, b·I], [c·I, d·I]] ⊕ I.
fn two_by_two(rb: usize, rc: usize, [a, b, c, d]: [i64; 4]) -> Vec<Vec<i64>> {
    let n = 2 * rb + rc;
    let mut m = vec![vec![0; n]; n];
    for i in 0..rb {
        m[i][i] = a;
        m[i][rb + i] = b;
        m[rb + i][i] = c;
        m[rb + i][rb + i] = d;
    }
    for i in 2 * rb..n {
        m[i][i] = 1;
    }
    m
}

fn build_action(name: String, m: &MetricGroup, gamma: FiniteGroup, gens: Vec<(usize, Vec<Vec<i64>>)>) -> ActionFixture {
    let a = m.group().clone();
    let gens: Vec<(usize, AbHom)> =
        gens.into_iter().map(|(g, mat)| (g, AbHom::new(a.clone(), a.clone(), mat).unwrap())).collect();
    let action = Arc::new(AbAction::from_generators(Arc::new(gamma), a.clone(), &gens).unwrap());
    for g in 0..action.group().order() {
        for x in a.elements() {
            assert_eq!(m.q_elem(&action.apply(g, &x)), m.q_elem(&x), "{name}: not an isometry");
        }
    }
    ActionFixture { name, metric: m.clone(), action }
}

/// Metric 2-groups of order ≤ max with 2-group actions: −1 on every 2-primary form,
/// the coordinate swap on H and E blocks, and swap, swap × (−1), the quarter turn
/// (x, y) ↦ (−y, x) and the dihedral group they generate on B ⊕ B ⊕ C.
pub fn two_group_actions(max: u64) -> Vec<ActionFixture> {
    let mut out = Vec::new();
    let twos: Vec<Form> = forms(max).into_iter().filter(|f| is_p_group(&f.metric, 2)).collect();
    for f in &twos {
        let r = f.metric.group().rank();
        out.push(build_action(format!("{} / -1", f.name), &f.metric, FiniteGroup::cyclic(2), vec![(1, scaled_identity(r, -1))]));
    }
    for b in blocks(max).into_iter().filter(|b| is_p_group(&b.metric, 2)) {
        if b.metric.group().rank() == 2 {
            out.push(build_action(format!("{} / swap", b.name), &b.metric, FiniteGroup::cyclic(2), vec![(1, two_by_two(1, 0, [0, 1, 1, 0]))]));
        }
        let bb = orthogonal_sum(&b.metric, &b.metric);
        let rest = std::iter::once(Form { name: "0".into(), metric: MetricGroup::trivial() })
            .chain(twos.iter().cloned())
            .filter(|c| bb.order() * c.metric.order() <= max);
        for c in rest {
            let m = orthogonal_sum(&bb, &c.metric);
            let (rb, rc) = (b.metric.group().rank(), c.metric.group().rank());
            let name = format!("{0}+{0}+{1}", b.name, c.name);
            let swap = two_by_two(rb, rc, [0, 1, 1, 0]);
            let neg = two_by_two(rb, rc, [-1, 0, 0, -1]);
            let turn = two_by_two(rb, rc, [0, -1, 1, 0]);
            out.push(build_action(format!("{name} / swap"), &m, FiniteGroup::cyclic(2), vec![(1, swap.clone())]));
            out.push(build_action(
                format!("{name} / swap x -1"),
                &m,
                FiniteGroup::abelian(&[2, 2]),
                vec![(2, swap.clone()), (1, neg)],
            ));
            out.push(build_action(format!("{name} / turn"), &m, FiniteGroup::cyclic(4), vec![(1, turn.clone())]));
            // dihedral(4): rotation is element 1, reflection element 4
            out.push(build_action(format!("{name} / D8"), &m, FiniteGroup::dihedral(4), vec![(1, turn), (4, swap)]));
        }
    }
    out
}

/// An outer action of Γ on H with an honest extension G ⊇ H when one is recorded.
pub struct OuterFixture {
    pub name: String,
    pub data: OuterActionData,
    /// (G, embedding of H, section of G → Γ).
    pub honest: Option<(FiniteGroup, Vec<usize>, Vec<usize>)>,
}

/// H ⋊ Z/n with the generator acting by α (α^n = 1); (h, e) has index h·n + e.
fn semidirect(h: &FiniteGroup, alpha: &GroupMap, n: usize) -> FiniteGroup {
    let mut powers = vec![GroupMap::identity(h.order())];
    for i in 1..n {
        powers.push(powers[i - 1].compose(alpha));
    }
    assert_eq!(powers[n - 1].compose(alpha), powers[0], "α^n ≠ 1");
    FiniteGroup::from_fn(h.order() * n, |u, v| {
        let (h1, e1) = (u / n, u % n);
        let (h2, e2) = (v / n, v % n);
        h.mul(h1, powers[e1].apply(h2)) * n + (e1 + e2) % n
    })
    .unwrap()
}

/// N = Z(H) with χ given on the coordinates of N and Γ acting trivially on N.
fn center_system(h: &Arc<FiniteGroup>, gamma: &Arc<FiniteGroup>, chi: impl Fn(usize) -> RootExponent, p: u64) -> (ClassTwoData, LocalSystemDatum) {
    let base = ClassTwoData::with_center(h.clone()).unwrap();
    let n = base.n.clone();
    let values: Vec<RootExponent> = (0..n.rank()).map(|i| chi(base.n_embed(&n.basis(i)))).collect();
    let mut depth = 0;
    let mut e = h.exponent() as u64;
    while e > 1 {
        e /= p;
        depth += 1;
    }
    let act = Arc::new(AbAction::trivial(gamma.clone(), n));
    let local = LocalSystemDatum::from_character(&act, &values, p, depth).unwrap();
    (base, local)
}

/// Γ = Z/n acting through α^γ, with the honest extension H ⋊ Z/n.
fn cyclic_outer(name: &str, h: Arc<FiniteGroup>, alpha: GroupMap, n: usize, chi: impl Fn(usize) -> RootExponent, p: u64) -> OuterFixture {
    let gamma = Arc::new(FiniteGroup::cyclic(n));
    let (base, local) = center_system(&h, &gamma, chi, p);
    let mut reps = vec![GroupMap::identity(h.order())];
    for i in 1..n {
        reps.push(reps[i - 1].compose(&alpha));
    }
    let g = semidirect(&h, &alpha, n);
    let h_embed: Vec<usize> = (0..h.order()).map(|x| x * n).collect();
    let data = OuterActionData::new(base, local, gamma, reps).unwrap();
    OuterFixture { name: name.into(), data, honest: Some((g, h_embed, (0..n).collect())) }
}

/// (x, a) ↦ (x, a + x^p − x): a central automorphism of the fake Heisenberg group
/// preserving ψ∘Tr on the center, since Tr(x^p − x) = 0.
fn central_shift(fh: &FakeHeisenberg) -> GroupMap {
    let k = &fh.field;
    let images = (0..fh.group.order())
        .map(|u| {
            let (x, a) = fh.coords(u);
            fh.element(x, k.add(a, k.sub(k.frobenius(x), x)))
        })
        .collect();
    GroupMap { images }
}

pub fn outer_actions() -> Vec<OuterFixture> {
    let mut out = Vec::new();
    let half = |x: usize| RootExponent::new((x != 0) as i64, 2);
    let d8 = Arc::new(FiniteGroup::dihedral(4));
    let q8 = Arc::new(FiniteGroup::dicyclic(2));
    // the nontrivial central element of D8 is r² = 2 and of Q8 is x² = 2
    out.push(cyclic_outer("D8, Z/2 by conjugation", d8.clone(), GroupMap::inner(&d8, 4), 2, half, 2));
    out.push(cyclic_outer("D8, Z/4 through conjugation", d8.clone(), GroupMap::inner(&d8, 4), 4, half, 2));
    out.push(cyclic_outer("Q8, Z/2 by conjugation", q8.clone(), GroupMap::inner(&q8, 1), 2, half, 2));

    // Q8 with Γ = Z/2 × Z/2 acting by conjugation by 1, x and y: realized in Q8 × Γ
    let gamma = Arc::new(FiniteGroup::abelian(&[2, 2]));
    let (base, local) = center_system(&q8, &gamma, half, 2);
    let conj = [0usize, 4, 1, 5];
    let reps = conj.iter().map(|&x| GroupMap::inner(&q8, x)).collect();
    let data = OuterActionData::new(base, local, gamma.clone(), reps).unwrap();
    let g = FiniteGroup::product(&q8, &gamma);
    out.push(OuterFixture {
        name: "Q8, Z/2 x Z/2 by conjugation".into(),
        data,
        honest: Some((g, (0..8).map(|x| x * 4).collect(), (0..4).collect())),
    });

    for (p, m) in [(2u64, 2u32), (3, 2)] {
        let fh = FakeHeisenberg::new(p, m).unwrap();
        let k = fh.field.clone();
        let chi = |u: usize| {
            let (_, a) = fh.coords(u);
            RootExponent::new(k.trace(a) as i64, p)
        };
        let alpha = central_shift(&fh);
        let name = format!("fake Heisenberg ({p},{m}), Z/{p} by a central automorphism");
        out.push(cyclic_outer(&name, fh.group.clone(), alpha, p as usize, chi, p));
    }
    out
}

/// Twisted and untwisted doubles, pointed categories of forms and a few products.
/// Each entry carries the prime used for the C_p^± test.
pub fn modular_corpus() -> Vec<(String, ModularData, u64)> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let max = if p == 2 { 8 } else { 3 };
        for (name, g) in small_p_groups(p, max).unwrap() {
            let g = Arc::new(g);
            let zero = Cochain::zero(&Arc::new(AbAction::trivial(g.clone(), FinAbGroup::cyclic(p))), 3);
            out.push((format!("D({name})"), double_modular_data(&g, &zero).unwrap(), p));
        }
    }
    for f in forms(25) {
        if let Some(p) = [2u64, 3, 5].into_iter().find(|&p| f.metric.order() == 1 || is_p_group(&f.metric, p)) {
            out.push((format!("pointed({})", f.name), pointed_modular_data(&f.metric), p));
        }
    }
    for p in [2u64, 3, 5] {
        out.push((format!("pointed(norm {p})"), pointed_modular_data(&norm_form(p).unwrap()), p));
    }
    out
}
