//! Larger random fixtures: the full pipeline must stay exact and
//! reasonably fast as the triangulation grows.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spunnorm::ball::{compute_norm_ball, report_json, Pipeline};
use spunnorm::tri::{Gluing, IdealTriangulation, Perm};

fn random_table(rng: &mut StdRng, t: usize) -> Vec<[Gluing; 4]> {
    let mut slots: Vec<(usize, u8)> = (0..t)
        .flat_map(|tet| (0..4u8).map(move |f| (tet, f)))
        .collect();
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
#[ignore = "expensive; run with --release -- --ignored"]
fn pipeline_on_larger_random_triangulations() {
    // Random gluing tables are usually degenerate (edges of valence 1 or
    // 2, hence isotopic into a cusp); the pipeline must either complete
    // or fail with a classified, actionable error, never crash.
    let mut rng = StdRng::seed_from_u64(4242);
    let mut completions = 0;
    let mut classified = 0;
    for t in [5usize] {
        let mut found = 0;
        for _ in 0..300000 {
            let g = random_table(&mut rng, t);
            let Ok(tri) = IdealTriangulation::new(t, g, Vec::new()) else {
                continue;
            };
            let degenerate = tri.edges().iter().any(|e| e.valence() < 3);
            let Ok(pipeline) = Pipeline::new(tri) else {
                continue;
            };
            let start = std::time::Instant::now();
            match pipeline.enumerate_qtons() {
                Ok(table) => match compute_norm_ball(&pipeline, &table) {
                    Ok(o) => {
                        let report = report_json(&pipeline, &table, &o);
                        assert!(report.contains("spunnorm-report/1"));
                        completions += 1;
                    }
                    Err(spunnorm::Error::PositiveEulerRay) => {
                        classified += 1;
                    }
                    Err(e) => panic!("unexpected norm-ball error: {e}"),
                },
                Err(spunnorm::Error::NonStabilizing(msg)) => {
                    assert!(
                        degenerate,
                        "stabilization failed on a non-degenerate triangulation: {msg}"
                    );
                    assert!(
                        msg.contains("not 0-efficient"),
                        "diagnostic should identify the cause: {msg}"
                    );
                    classified += 1;
                }
                Err(e) => panic!("unexpected enumeration error: {e}"),
            }
            assert!(start.elapsed().as_secs() < 120, "t={t} pipeline too slow");
            found += 1;
            if found >= 10 {
                break;
            }
        }
    }
    assert!(completions >= 2, "completions: {completions}");
    assert!(classified >= 2, "classified errors: {classified}");
}
