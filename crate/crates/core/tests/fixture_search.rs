//! Random search over small gluing tables for valid orientable
//! triangulations with torus cusps, used to stock the fixture menagerie.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spunnorm::homology::HomologyData;
use spunnorm::tri::{Gluing, IdealTriangulation, Perm};

fn random_table(rng: &mut StdRng, t: usize) -> Vec<[Gluing; 4]> {
    // Random fixed-point-free pairing of slots with random face-to-face
    // permutations.
    let mut slots: Vec<(usize, u8)> = (0..t)
        .flat_map(|tet| (0..4u8).map(move |f| (tet, f)))
        .collect();
    // Fisher-Yates.
    for i in (1..slots.len()).rev() {
        let j = rng.random_range(0..=i);
        slots.swap(i, j);
    }
    let mut gluings = vec![
        [Gluing {
            tet: 0,
            perm: Perm::identity(),
        }; 4];
        t
    ];
    for pair in slots.chunks(2) {
        let ((t1, f1), (t2, f2)) = (pair[0], pair[1]);
        // Random bijection of the complementary vertices.
        let mut others: Vec<u8> = (0..4u8).filter(|&v| v != f2).collect();
        for i in (1..3).rev() {
            let j = rng.random_range(0..=i);
            others.swap(i, j);
        }
        let mut perm = [0u8; 4];
        perm[f1 as usize] = f2;
        for (src, dst) in (0..4u8).filter(|&v| v != f1).zip(others) {
            perm[src as usize] = dst;
        }
        let p = Perm(perm);
        gluings[t1][f1 as usize] = Gluing { tet: t2, perm: p };
        gluings[t2][f2 as usize] = Gluing {
            tet: t1,
            perm: p.inverse(),
        };
    }
    gluings
}

#[test]
#[ignore]
fn survey_multicusp() {
    let mut rng = StdRng::seed_from_u64(99);
    let mut found = 0;
    for t in [4usize, 5, 6] {
        for i in 0..300000 {
            let g = random_table(&mut rng, t);
            let Ok(tri) = IdealTriangulation::new(t, g.clone(), Vec::new()) else {
                continue;
            };
            if tri.cusps().len() < 2 {
                continue;
            }
            let Ok(h) = HomologyData::new(&tri) else {
                continue;
            };
            println!(
                "t={t} i={i} cusps={} b1={} torsion={:?} peripheral={} table={:?}",
                tri.cusps().len(),
                h.b1,
                h.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                h.peripheral_available,
                g
            );
            found += 1;
            if found > 6 {
                return;
            }
        }
    }
}

#[test]
#[ignore]
fn survey_small_tables() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut stats: std::collections::BTreeMap<String, usize> = Default::default();
    let mut examples: std::collections::BTreeMap<String, Vec<[Gluing; 4]>> = Default::default();
    for t in [3usize, 4] {
        for _ in 0..40000 {
            let g = random_table(&mut rng, t);
            let Ok(tri) = IdealTriangulation::new(t, g.clone(), Vec::new()) else {
                continue;
            };
            let Ok(h) = HomologyData::new(&tri) else {
                continue;
            };
            let key = format!(
                "t={} cusps={} b1={} torsion={:?} peripheral={}",
                t,
                tri.cusps().len(),
                h.b1,
                h.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                h.peripheral_available
            );
            *stats.entry(key.clone()).or_default() += 1;
            examples.entry(key).or_insert_with(|| g.clone());
        }
    }
    for (k, v) in &stats {
        println!("{v:6}  {k}");
    }
    // Print one multi-cusp b1 >= 2 example if found.
    for (k, g) in &examples {
        if k.contains("b1=2") || k.contains("b1=3") {
            println!("example for {k}: {g:?}");
        }
    }
}
