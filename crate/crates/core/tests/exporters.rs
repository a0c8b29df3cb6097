//! Exporter checks on synthetic balls.

use spunnorm::ball::{export_off, export_svg, NormBall, VertexRecord};
use spunnorm::Rat;
use spunnorm_exact::{convex_hull, rat, ratio};

fn ball_from_points(points: Vec<Vec<Rat>>) -> NormBall {
    let polytope = convex_hull(&points);
    let vertices = polytope
        .vertices
        .iter()
        .map(|v| VertexRecord {
            coords: v.iter().map(|c| c.to_string()).collect(),
            qtons_index: None,
            scale: "1".into(),
            surface: None,
            embedded: None,
            description: String::new(),
        })
        .collect();
    NormBall {
        polytope,
        vertices,
        warnings: Vec::new(),
        homology_map: "peripheral",
    }
}

#[test]
fn off_export_octahedron() {
    let mut pts = Vec::new();
    for s in [1i64, -1] {
        pts.push(vec![rat(s), rat(0), rat(0)]);
        pts.push(vec![rat(0), rat(s), rat(0)]);
    }
    pts.push(vec![rat(0), rat(0), ratio(1, 2)]);
    pts.push(vec![rat(0), rat(0), ratio(-1, 2)]);
    let ball = ball_from_points(pts);
    let off = export_off(&ball).unwrap();
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("6 8 0"));
    // Every face line is a triangle.
    let face_lines: Vec<&str> = off.lines().skip(2 + 6).collect();
    assert_eq!(face_lines.len(), 8);
    assert!(face_lines.iter().all(|l| l.starts_with("3 ")));
}

#[test]
fn off_export_rejects_other_dimensions() {
    let ball = ball_from_points(vec![vec![rat(-1)], vec![rat(1)]]);
    assert!(export_off(&ball).is_err());
}

#[test]
fn svg_export_square_and_octahedron() {
    let square = ball_from_points(vec![
        vec![rat(1), rat(0)],
        vec![rat(-1), rat(0)],
        vec![rat(0), rat(1)],
        vec![rat(0), rat(-1)],
    ]);
    let svg = export_svg(&square).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line").count(), 4);
    assert_eq!(svg.matches("<circle").count(), 4);

    let mut pts = Vec::new();
    for s in [1i64, -1] {
        pts.push(vec![rat(s), rat(0), rat(0)]);
        pts.push(vec![rat(0), rat(s), rat(0)]);
        pts.push(vec![rat(0), rat(0), rat(s)]);
    }
    let octa = ball_from_points(pts);
    let svg3 = export_svg(&octa).unwrap();
    assert_eq!(svg3.matches("<line").count(), 12);

    // 4-dimensional cross polytope through the Schlegel projection.
    let mut pts4 = Vec::new();
    for axis in 0..4 {
        for s in [1i64, -1] {
            let mut v = vec![rat(0); 4];
            v[axis] = rat(s);
            pts4.push(v);
        }
    }
    let cross4 = ball_from_points(pts4);
    let svg4 = export_svg(&cross4).unwrap();
    assert_eq!(svg4.matches("<circle").count(), 8);
    assert_eq!(svg4.matches("<line").count(), 24);
}
