//! All groups of order p^k ≤ 16 for p = 2 and ≤ 9 for p = 3, up to isomorphism.

use super::FiniteGroup;
use crate::finab::FinAbGroup;
use crate::{Error, Result};

/// A ⋊ Z/n where the generator of Z/n acts by `phi` (images of the basis of A).
/// The pair (x, j) has index idx(x)·n + j.
pub fn semidirect(a: &FinAbGroup, n: usize, phi: &[Vec<u64>]) -> Result<FiniteGroup> {
    let na = a.order() as usize;
    let apply = |x: &[u64]| -> Vec<u64> {
        let mut y = a.zero();
        for (i, &c) in x.iter().enumerate() {
            y = a.add(&y, &a.scale(c as i64, &phi[i]));
        }
        y
    };
    // powers[j][idx] = φ^j(x)
    let mut powers = vec![(0..na).collect::<Vec<usize>>()];
    for j in 1..=n {
        let prev = &powers[j - 1];
        powers.push((0..na).map(|i| a.index(&apply(&a.element(prev[i])))).collect());
    }
    if powers[n] != powers[0] {
        return Err(Error::Invalid("φ^n is not the identity".into()));
    }
    FiniteGroup::from_fn(na * n, |x, y| {
        let (x1, j1) = (x / n, x % n);
        let (x2, j2) = (y / n, y % n);
        a.add_index(x1, powers[j1][x2]) * n + (j1 + j2) % n
    })
}

/// Z/m ⋊ Z/n with the generator acting by r ↦ r^k.
pub fn metacyclic(m: u64, n: usize, k: u64) -> Result<FiniteGroup> {
    semidirect(&FinAbGroup::cyclic(m), n, &[vec![k % m]])
}

/// Named groups of p-power order up to `max_order`, one per isomorphism class.
pub fn small_p_groups(p: u64, max_order: usize) -> Result<Vec<(String, FiniteGroup)>> {
    let limit = match p {
        2 => 16,
        3 => 9,
        _ => return Err(Error::Unsupported(format!("catalog of {p}-groups"))),
    };
    if max_order > limit {
        return Err(Error::cap("order in the p-group catalog", max_order as u64, limit as u64));
    }
    let ab = |o: &[usize]| FiniteGroup::abelian(o);
    let z = FiniteGroup::cyclic;
    let mut out: Vec<(String, FiniteGroup)> = vec![("1".into(), z(1))];
    let p = p as usize;
    if p == 3 {
        out.push(("Z3".into(), z(3)));
        out.push(("Z9".into(), z(9)));
        out.push(("Z3xZ3".into(), ab(&[3, 3])));
    } else {
        out.extend([
            ("Z2".into(), z(2)),
            ("Z4".into(), z(4)),
            ("Z2xZ2".into(), ab(&[2, 2])),
            ("Z8".into(), z(8)),
            ("Z4xZ2".into(), ab(&[4, 2])),
            ("Z2^3".into(), ab(&[2, 2, 2])),
            ("D8".into(), FiniteGroup::dihedral(4)),
            ("Q8".into(), FiniteGroup::dicyclic(2)),
            ("Z16".into(), z(16)),
            ("Z4xZ4".into(), ab(&[4, 4])),
            ("Z8xZ2".into(), ab(&[8, 2])),
            ("Z4xZ2^2".into(), ab(&[4, 2, 2])),
            ("Z2^4".into(), ab(&[2, 2, 2, 2])),
            ("D16".into(), FiniteGroup::dihedral(8)),
            ("Q16".into(), FiniteGroup::dicyclic(4)),
            ("SD16".into(), metacyclic(8, 2, 3)?),
            ("M16".into(), metacyclic(8, 2, 5)?),
            ("Z4:Z4".into(), metacyclic(4, 4, 3)?),
            ("D8xZ2".into(), FiniteGroup::product(&FiniteGroup::dihedral(4), &z(2))),
            ("Q8xZ2".into(), FiniteGroup::product(&FiniteGroup::dicyclic(2), &z(2))),
            // (Z4×Z2) ⋊ Z2 with a ↦ ab
            ("Z2^2:Z4".into(), semidirect(&FinAbGroup::new(vec![4, 2])?, 2, &[vec![1, 1], vec![0, 1]])?),
            // Pauli group: <i> × <Z> ⋊ <X>, Z ↦ i²Z
            ("Pauli".into(), semidirect(&FinAbGroup::new(vec![4, 2])?, 2, &[vec![1, 0], vec![2, 1]])?),
        ]);
    }
    out.retain(|(_, g)| g.order() <= max_order);
    Ok(out)
}

/// Isomorphism invariants: order statistics of elements, |Z(G)|,
/// |[G,G]|, the number of distinct squares and the order statistics of the center.
pub fn fingerprint(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut stats = vec![0usize; n + 1];
    for x in 0..n {
        stats[g.element_order(x)] += 1;
    }
    let center = g.center();
    let mut zstats = vec![0usize; n + 1];
    for &x in center {
        zstats[g.element_order(x)] += 1;
    }
    let comms: Vec<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let derived = g.generated(&comms).len();
    let mut squares: Vec<usize> = (0..n).map(|x| g.mul(x, x)).collect();
    squares.sort_unstable();
    squares.dedup();
    let mut v = vec![n, center.len(), derived, squares.len()];
    v.extend(stats);
    v.extend(zstats);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_counts_and_distinctness() {
        let g2 = small_p_groups(2, 16).unwrap();
        for (order, count) in [(1, 1), (2, 1), (4, 2), (8, 5), (16, 14)] {
            assert_eq!(g2.iter().filter(|(_, g)| g.order() == order).count(), count, "order {order}");
        }
        let g3 = small_p_groups(3, 9).unwrap();
        assert_eq!(g3.len(), 4);
        for gs in [&g2, &g3] {
            for i in 0..gs.len() {
                for j in 0..i {
                    if gs[i].1.order() == gs[j].1.order() {
                        assert_ne!(fingerprint(&gs[i].1), fingerprint(&gs[j].1), "{} vs {}", gs[i].0, gs[j].0);
                    }
                }
            }
        }
        assert!(small_p_groups(2, 32).is_err());
    }
}
