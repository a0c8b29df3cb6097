//! Shared helpers for integration tests: small gluing-table enumeration
//! and fixture loading.

pub mod fixtures;

use spunnorm::qcoords::{build_matching, is_admissible, OrientedQuadVector};
use spunnorm::tri::{Gluing, IdealTriangulation, Perm};

pub fn all_perms() -> Vec<Perm> {
    let mut out = Vec::new();
    let mut vals = [0u8, 1, 2, 3];
    permute(&mut vals, 0, &mut out);
    out.sort_by_key(|p| p.0);
    out
}

fn permute(vals: &mut [u8; 4], k: usize, out: &mut Vec<Perm>) {
    if k == 4 {
        out.push(Perm(*vals));
        return;
    }
    for i in k..4 {
        vals.swap(k, i);
        permute(vals, k + 1, out);
        vals.swap(k, i);
    }
}

/// All fixed-point-free pairings of the 4t (tet, face) slots.
pub fn pairings(t: usize) -> Vec<Vec<((usize, u8), (usize, u8))>> {
    let slots: Vec<(usize, u8)> = (0..t)
        .flat_map(|tet| (0..4u8).map(move |f| (tet, f)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(&slots, &mut current, &mut out);
    out
}

fn rec(
    remaining: &[(usize, u8)],
    current: &mut Vec<((usize, u8), (usize, u8))>,
    out: &mut Vec<Vec<((usize, u8), (usize, u8))>>,
) {
    if remaining.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = remaining[0];
    for i in 1..remaining.len() {
        let partner = remaining[i];
        let rest: Vec<_> = remaining[1..]
            .iter()
            .copied()
            .filter(|&s| s != partner)
            .collect();
        current.push((first, partner));
        rec(&rest, current, out);
        current.pop();
    }
}

/// All valid gluing tables on `t` tetrahedra, passed through a filter on
/// the built triangulation.
pub fn enumerate_tables(
    t: usize,
    mut keep: impl FnMut(&IdealTriangulation) -> bool,
) -> Vec<Vec<[Gluing; 4]>> {
    let perms = all_perms();
    let mut found = Vec::new();
    for pairing in pairings(t) {
        let perm_choices: Vec<Vec<Perm>> = pairing
            .iter()
            .map(|&((_, f1), (_, f2))| {
                perms
                    .iter()
                    .copied()
                    .filter(|p| p.apply(f1) == f2)
                    .collect()
            })
            .collect();
        let npairs = pairing.len();
        let mut idx = vec![0usize; npairs];
        'outer: loop {
            let mut gluings = vec![
                [Gluing {
                    tet: 0,
                    perm: Perm::identity(),
                }; 4];
                t
            ];
            for (k, &((t1, f1), (t2, f2))) in pairing.iter().enumerate() {
                let p = perm_choices[k][idx[k]];
                gluings[t1][f1 as usize] = Gluing { tet: t2, perm: p };
                gluings[t2][f2 as usize] = Gluing {
                    tet: t1,
                    perm: p.inverse(),
                };
            }
            if let Ok(tri) = IdealTriangulation::new(t, gluings.clone(), Vec::new()) {
                if keep(&tri) {
                    found.push(gluings.clone());
                }
            }
            for k in 0..npairs {
                idx[k] += 1;
                if idx[k] < perm_choices[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    found
}

/// Two-tetrahedron tables with the figure-8 derived counts for which the
/// vector q03^0 = q12^0 = q02^1 = 1 lies in the oriented matching cone.
pub fn two_tet_candidates() -> Vec<Vec<[Gluing; 4]>> {
    enumerate_tables(2, |tri| {
        let edges = tri.edges();
        if !(edges.len() == 2 && edges.iter().all(|e| e.valence() == 6) && tri.cusps().len() == 1) {
            return false;
        }
        let x = OrientedQuadVector::from_ints(2, &[(0, (0, 3), 1), (0, (1, 2), 1), (1, (0, 2), 1)]);
        let m = build_matching(tri);
        is_admissible(&x) && m.satisfies_oriented(&x)
    })
}
