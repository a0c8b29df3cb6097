//! The end-to-end norm ball pipeline: qtons enumeration, the norm-ball
//! algorithm with its b1 = 1 upper-bound branch, and exporters.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use spunnorm_exact::{convex_hull, ConeDescription, Int, Polytope, Rat};

use crate::angles::{euler_char, solve_gas, GeneralizedAngleStructure, HolonomyLedger};
use crate::boundary::{
    boundary_classes, ends_embeddable, num_boundary_components, spinning_slopes, BoundaryClass,
};
use crate::error::{Error, Result};
use crate::homology::HomologyData;
use crate::qcoords::{build_matching, forget_orientation, is_admissible, OrientedQuadVector};
use crate::surface::{analyze, is_embedded, reconstruct, SurfaceReport};
use crate::tri::IdealTriangulation;

/// One admissible extreme ray of the oriented matching cone with all its
/// annotations.
#[derive(Clone, Debug)]
pub struct QtonsEntry {
    pub index: usize,
    pub vector: Vec<Int>,
    pub chi_star: Rat,
    pub boundary: BoundaryClass,
    pub spinning: Vec<(Rat, Rat)>,
    pub num_boundary: Vec<(Int, Int)>,
    pub total_boundary: Int,
    pub embedded: bool,
    pub ends_embedded: bool,
    pub report: SurfaceReport,
    pub homology: Vec<Rat>,
}

pub struct QtonsTable {
    pub entries: Vec<QtonsEntry>,
}

/// Shared context for the pipeline.
pub struct Pipeline {
    pub tri: IdealTriangulation,
    pub gas: GeneralizedAngleStructure,
    pub ledger: HolonomyLedger,
    pub homology: HomologyData,
}

impl Pipeline {
    pub fn new(tri: IdealTriangulation) -> Result<Self> {
        let (gas, ledger) = solve_gas(&tri)?;
        let homology = HomologyData::new(&tri)?;
        Ok(Pipeline {
            tri,
            gas,
            ledger,
            homology,
        })
    }

    pub fn oriented_vector(&self, ray: &[Int]) -> OrientedQuadVector {
        let rats: Vec<Rat> = ray.iter().map(|v| Rat::from_integer(v.clone())).collect();
        OrientedQuadVector::from_dense(&rats)
    }

    pub fn annotate(&self, index: usize, ray: &[Int]) -> Result<QtonsEntry> {
        let x = self.oriented_vector(ray);
        let chi_star = euler_char(&self.gas, &x);
        let boundary = boundary_classes(&self.tri, &x);
        let spinning = spinning_slopes(&self.tri, &forget_orientation(&x));
        let (num_boundary, total_boundary) = num_boundary_components(&self.tri, &x);
        let embedded = is_embedded(&self.tri, &self.gas, &x)?;
        let ends = ends_embeddable(&self.tri, &x);
        let complex = reconstruct(&self.tri, &self.gas, Some(&x), &forget_orientation(&x))?;
        let report = analyze(&complex);
        let homology = self
            .homology
            .class_for_ball(&self.tri, &x, &boundary.per_cusp)?;
        Ok(QtonsEntry {
            index,
            vector: ray.to_vec(),
            chi_star,
            boundary,
            spinning,
            num_boundary,
            total_boundary,
            embedded,
            ends_embedded: ends,
            report,
            homology,
        })
    }

    /// Extreme rays of the oriented matching cone, filtered to the
    /// admissible ones, annotated in parallel, in stable lexicographic
    /// ray order.
    pub fn enumerate_qtons(&self) -> Result<QtonsTable> {
        let matching = build_matching(&self.tri);
        let cone = ConeDescription::new(matching.oriented.clone(), 6 * self.tri.num_tets());
        let rays = spunnorm_exact::extreme_rays(&cone);
        let admissible: Vec<Vec<Int>> = rays
            .into_iter()
            .filter(|r| {
                let rats: Vec<Rat> = r.iter().map(|v| Rat::from_integer(v.clone())).collect();
                is_admissible(&OrientedQuadVector::from_dense(&rats))
            })
            .collect();
        let entries: Result<Vec<QtonsEntry>> = admissible
            .par_iter()
            .enumerate()
            .map(|(i, ray)| self.annotate(i, ray))
            .collect();
        Ok(QtonsTable { entries: entries? })
    }
}

/// One vertex of the computed ball.
#[derive(Clone, Debug, Serialize)]
pub struct VertexRecord {
    pub coords: Vec<String>,
    /// Index into the qtons table, when a ray represents this vertex.
    pub qtons_index: Option<usize>,
    /// The class at the vertex is (1/scale) times the representative
    /// surface's class.
    pub scale: String,
    pub surface: Option<String>,
    pub embedded: Option<bool>,
    pub description: String,
}

#[derive(Debug)]
pub struct NormBall {
    pub polytope: Polytope,
    pub vertices: Vec<VertexRecord>,
    pub warnings: Vec<String>,
    pub homology_map: &'static str,
}

#[derive(Debug, Serialize)]
pub struct UpperBoundVertex {
    pub coord: String,
    pub qtons_index: Option<usize>,
    pub scale: String,
    pub surface: Option<String>,
    pub description: String,
}

/// Non-certified report for the b1 = 1 branch.
#[derive(Debug, Serialize)]
pub struct UpperBoundReport {
    pub certified: bool,
    pub bound: Option<String>,
    pub vertices: Vec<UpperBoundVertex>,
    pub note: String,
}

#[derive(Debug)]
pub enum BallOutcome {
    Ball(NormBall),
    UpperBound(UpperBoundReport),
}

fn pick_representative<'a>(
    candidates: impl Iterator<Item = &'a QtonsEntry>,
) -> Option<&'a QtonsEntry> {
    candidates.min_by_key(|e| (e.chi_star.abs().to_integer(), !e.embedded, e.index))
}

/// The algorithm of the norm-ball theorem. Requires no admissible ray
/// with positive Euler bound; with b1 = 1 the upper-bound report is
/// produced instead of a certified ball.
pub fn compute_norm_ball(pipeline: &Pipeline, table: &QtonsTable) -> Result<BallOutcome> {
    let mut warnings = Vec::new();
    for e in &table.entries {
        if e.chi_star.is_positive() {
            return Err(Error::PositiveEulerRay);
        }
        if e.chi_star.is_zero() && e.homology.iter().any(|v| !v.is_zero()) {
            warnings.push(format!(
                "qtons {} has zero Euler bound but nonzero homology class; manifold may be toroidal",
                e.index
            ));
        }
    }

    if pipeline.homology.b1 == 1 {
        return Ok(BallOutcome::UpperBound(knot_upper_bound(table)));
    }

    let dim = table
        .entries
        .first()
        .map(|e| e.homology.len())
        .unwrap_or(pipeline.homology.b2_pair);
    let mut points: Vec<Vec<Rat>> = Vec::new();
    for e in &table.entries {
        if e.chi_star.is_negative() {
            let scale = e.chi_star.abs();
            points.push(e.homology.iter().map(|h| h / &scale).collect());
        }
    }
    points.sort();
    points.dedup();
    let polytope = convex_hull(&points);
    if !polytope.centrally_symmetric() {
        warnings.push("computed ball is not centrally symmetric".to_string());
    }
    if polytope.affine_dim != dim {
        warnings.push(format!(
            "ball spans dimension {} inside homology of rank {}",
            polytope.affine_dim, dim
        ));
    }

    let mut vertices = Vec::new();
    for v in &polytope.vertices {
        let rep = pick_representative(table.entries.iter().filter(|e| {
            e.chi_star.is_negative()
                && e.homology
                    .iter()
                    .zip(v)
                    .all(|(h, c)| h == &(c * e.chi_star.abs()))
        }));
        let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        match rep {
            Some(e) => {
                let n = e.chi_star.abs();
                let scale_str = format!("1/{n}");
                let prefix = if n == spunnorm_exact::rat(1) {
                    String::new()
                } else {
                    format!("({scale_str})*")
                };
                let kind = if e.embedded { "embedded" } else { "immersed" };
                vertices.push(VertexRecord {
                    coords: coords.clone(),
                    qtons_index: Some(e.index),
                    scale: scale_str,
                    surface: Some(e.report.name.clone()),
                    embedded: Some(e.embedded),
                    description: format!(
                        "represented by {prefix}{} at ({}), mapped from {kind} qtons with index {}",
                        e.report.name,
                        coords.join(", "),
                        e.index
                    ),
                });
            }
            None => {
                vertices.push(VertexRecord {
                    coords: coords.clone(),
                    qtons_index: None,
                    scale: "1".into(),
                    surface: None,
                    embedded: None,
                    description: format!(
                        "vertex at ({}), not represented by any qtons",
                        coords.join(", ")
                    ),
                });
            }
        }
    }
    vertices.sort_by(|a, b| a.coords.cmp(&b.coords));
    let homology_map = if pipeline.homology.peripheral_available {
        "peripheral"
    } else {
        "simplicial"
    };
    Ok(BallOutcome::Ball(NormBall {
        polytope,
        vertices,
        warnings,
        homology_map,
    }))
}

/// The b1 = 1 branch: reports min |chi*(v)| / |H(v)| as an upper bound on
/// the generator's norm, explicitly not certified.
pub fn knot_upper_bound(table: &QtonsTable) -> UpperBoundReport {
    let mut best: Option<Rat> = None;
    for e in &table.entries {
        if e.homology.len() != 1 || e.homology[0].is_zero() || !e.chi_star.is_negative() {
            continue;
        }
        let bound = e.chi_star.abs() / e.homology[0].abs();
        if best.as_ref().map_or(true, |b| &bound < b) {
            best = Some(bound);
        }
    }
    let Some(bound) = best else {
        return UpperBoundReport {
            certified: false,
            bound: None,
            vertices: Vec::new(),
            note: "no bound available: no qtons ray has nonzero homology class".into(),
        };
    };
    let mut vertices = Vec::new();
    for sign in [1i64, -1] {
        let coord = Rat::from_integer(sign.into()) / &bound;
        let rep = pick_representative(table.entries.iter().filter(|e| {
            e.homology.len() == 1
                && e.chi_star.is_negative()
                && e.homology[0] == coord.clone() * e.chi_star.abs()
        }));
        match rep {
            Some(e) => {
                let n = e.chi_star.abs();
                let prefix = if n == spunnorm_exact::rat(1) {
                    String::new()
                } else {
                    format!("(1/{n})*")
                };
                let kind = if e.embedded { "embedded" } else { "immersed" };
                vertices.push(UpperBoundVertex {
                    coord: coord.to_string(),
                    qtons_index: Some(e.index),
                    scale: format!("1/{n}"),
                    surface: Some(e.report.name.clone()),
                    description: format!(
                        "represented by {prefix}{} at ({}), mapped from {kind} qtons with index {}",
                        e.report.name, coord, e.index
                    ),
                });
            }
            None => vertices.push(UpperBoundVertex {
                coord: coord.to_string(),
                qtons_index: None,
                scale: "1".into(),
                surface: None,
                description: format!("vertex at ({coord}), not represented by any qtons"),
            }),
        }
    }
    UpperBoundReport {
        certified: false,
        bound: Some(bound.to_string()),
        vertices,
        note: "not a certified norm ball: b1 = 1, the certified algorithm requires b1 >= 2".into(),
    }
}

// ---------------------------------------------------------------------
// Report assembly and exporters.

#[derive(Serialize)]
struct QtonsJson {
    index: usize,
    vector: Vec<String>,
    euler_bound: String,
    connected: bool,
    orientable: bool,
    euler: i64,
    boundary: usize,
    surface: String,
    embedded: bool,
    ends_embedded: bool,
    outward: Vec<(String, String)>,
    inward: Vec<(String, String)>,
    spinning_slopes: Vec<(String, String)>,
    num_boundary_comps: Vec<(String, String)>,
    homology_class: Vec<String>,
}

#[derive(Serialize)]
struct BallJson {
    kind: &'static str,
    homology_map: Option<&'static str>,
    dimension: Option<usize>,
    vertices: Vec<VertexRecord>,
    facets: Option<Vec<FacetJson>>,
    upper_bound: Option<UpperBoundReport>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct FacetJson {
    normal: Vec<String>,
    offset: String,
    vertices: Vec<usize>,
}

#[derive(Serialize)]
struct ReportJson {
    format: &'static str,
    num_tetrahedra: usize,
    num_cusps: usize,
    b1: usize,
    torsion: Vec<String>,
    internal_basis: bool,
    qtons: Vec<QtonsJson>,
    ball: BallJson,
}

fn rat_pair(p: &(Rat, Rat)) -> (String, String) {
    (p.0.to_string(), p.1.to_string())
}

pub fn report_json(pipeline: &Pipeline, table: &QtonsTable, outcome: &BallOutcome) -> String {
    let qtons = table
        .entries
        .iter()
        .map(|e| QtonsJson {
            index: e.index,
            vector: e.vector.iter().map(|v| v.to_string()).collect(),
            euler_bound: e.chi_star.to_string(),
            connected: e.report.connected,
            orientable: e.report.orientable,
            euler: e.report.euler,
            boundary: e.report.boundary,
            surface: e.report.name.clone(),
            embedded: e.embedded,
            ends_embedded: e.ends_embedded,
            outward: e.boundary.per_cusp.iter().map(|c| rat_pair(&c.0)).collect(),
            inward: e.boundary.per_cusp.iter().map(|c| rat_pair(&c.1)).collect(),
            spinning_slopes: e.spinning.iter().map(rat_pair).collect(),
            num_boundary_comps: e
                .num_boundary
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            homology_class: e.homology.iter().map(|v| v.to_string()).collect(),
        })
        .collect();
    let ball = match outcome {
        BallOutcome::Ball(ball) => BallJson {
            kind: "norm_ball",
            homology_map: Some(ball.homology_map),
            dimension: Some(ball.polytope.affine_dim),
            vertices: ball.vertices.clone(),
            facets: Some(
                ball.polytope
                    .facets
                    .iter()
                    .map(|f| FacetJson {
                        normal: f.normal.iter().map(|v| v.to_string()).collect(),
                        offset: f.offset.to_string(),
                        vertices: ball.polytope.facet_vertices(f),
                    })
                    .collect(),
            ),
            upper_bound: None,
            warnings: ball.warnings.clone(),
        },
        BallOutcome::UpperBound(ub) => BallJson {
            kind: "upper_bound",
            homology_map: None,
            dimension: None,
            vertices: Vec::new(),
            facets: None,
            upper_bound: Some(UpperBoundReport {
                certified: ub.certified,
                bound: ub.bound.clone(),
                vertices: ub
                    .vertices
                    .iter()
                    .map(|v| UpperBoundVertex {
                        coord: v.coord.clone(),
                        qtons_index: v.qtons_index,
                        scale: v.scale.clone(),
                        surface: v.surface.clone(),
                        description: v.description.clone(),
                    })
                    .collect(),
                note: ub.note.clone(),
            }),
            warnings: Vec::new(),
        },
    };
    let report = ReportJson {
        format: "spunnorm-report/1",
        num_tetrahedra: pipeline.tri.num_tets(),
        num_cusps: pipeline.tri.cusps().len(),
        b1: pipeline.homology.b1,
        torsion: pipeline
            .homology
            .torsion
            .iter()
            .map(|t| t.to_string())
            .collect(),
        internal_basis: pipeline.tri.bases().iter().any(|b| b.internal),
        qtons,
        ball,
    };
    serde_json::to_string_pretty(&report).expect("report serialization")
}

fn to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

/// OFF polyhedron output for 3-dimensional balls.
pub fn export_off(ball: &NormBall) -> Result<String> {
    let p = &ball.polytope;
    if p.ambient_dim != 3 {
        return Err(Error::Other(format!(
            "OFF export requires a 3-dimensional ball, got dimension {}",
            p.ambient_dim
        )));
    }
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} 0\n", p.vertices.len(), p.facets.len()));
    for v in &p.vertices {
        let coords: Vec<String> = v.iter().map(|c| format!("{:.12}", to_f64(c))).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    for f in &p.facets {
        let idx = order_facet_cycle(p, f);
        out.push_str(&format!("{}", idx.len()));
        for i in idx {
            out.push_str(&format!(" {i}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Orders the vertices of a facet into a polygon cycle (presentation
/// only; computed in floating point).
fn order_facet_cycle(p: &Polytope, f: &spunnorm_exact::Facet) -> Vec<usize> {
    let idx = p.facet_vertices(f);
    if idx.len() <= 3 {
        return idx;
    }
    let pts: Vec<[f64; 3]> = idx
        .iter()
        .map(|&i| {
            let v = &p.vertices[i];
            [to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])]
        })
        .collect();
    let centroid = [
        pts.iter().map(|q| q[0]).sum::<f64>() / pts.len() as f64,
        pts.iter().map(|q| q[1]).sum::<f64>() / pts.len() as f64,
        pts.iter().map(|q| q[2]).sum::<f64>() / pts.len() as f64,
    ];
    let n = [
        to_f64(&f.normal[0]),
        to_f64(&f.normal[1]),
        to_f64(&f.normal[2]),
    ];
    // Build a tangent frame.
    let pick = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let u = cross(n, pick);
    let u = normalize(u);
    let w = cross(n, u);
    let mut order: Vec<(f64, usize)> = idx
        .iter()
        .zip(&pts)
        .map(|(&i, q)| {
            let d = [q[0] - centroid[0], q[1] - centroid[1], q[2] - centroid[2]];
            (dot3(d, u).atan2(dot3(d, w)), i)
        })
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    order.into_iter().map(|(_, i)| i).collect()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot3(a, a).sqrt();
    if n == 0.0 {
        a
    } else {
        [a[0] / n, a[1] / n, a[2] / n]
    }
}

/// Edges of the polytope: vertex pairs whose common tight facets span a
/// subspace of rank affine_dim - 1.
fn polytope_edges(p: &Polytope) -> Vec<(usize, usize)> {
    use spunnorm_exact::RatMatrix;
    let d = p.affine_dim;
    let mut edges = Vec::new();
    for i in 0..p.vertices.len() {
        for j in i + 1..p.vertices.len() {
            let common: Vec<Vec<Rat>> = p
                .facets
                .iter()
                .filter(|f| f.tight_at(&p.vertices[i]) && f.tight_at(&p.vertices[j]))
                .map(|f| f.normal.clone())
                .collect();
            if common.len() >= d.saturating_sub(1) && RatMatrix::from_rows(common).rank() == d - 1 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// SVG rendering: direct polygon in 2D, orthographic wireframe in 3D,
/// Schlegel projection through the first facet in 4D.
pub fn export_svg(ball: &NormBall) -> Result<String> {
    let p = &ball.polytope;
    let d = p.ambient_dim;
    if !(2..=4).contains(&d) || p.vertices.is_empty() {
        return Err(Error::Other(format!(
            "SVG export supports dimensions 2-4, got {d}"
        )));
    }
    let mut pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .map(|v| v.iter().map(to_f64).collect())
        .collect();
    if d == 4 {
        // Schlegel projection: project from a point just beyond the first
        // facet onto that facet's hyperplane.
        let f = p
            .facets
            .first()
            .ok_or_else(|| Error::Other("no facets".into()))?;
        let n: Vec<f64> = f.normal.iter().map(to_f64).collect();
        let off = to_f64(&f.offset);
        let nn = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        // Inward-pointing facet: <n, x> >= off on the ball; camera sits
        // outside: <n, camera> < off.
        let camera: Vec<f64> = n.iter().map(|x| x / nn * (off / nn - 1.5)).collect();
        pts = pts
            .iter()
            .map(|q| {
                let qc: Vec<f64> = q.iter().zip(&camera).map(|(a, b)| a - b).collect();
                let denom: f64 = qc.iter().zip(&n).map(|(a, b)| a * b).sum();
                let target = off - n.iter().zip(&camera).map(|(a, b)| a * b).sum::<f64>();
                let t = if denom.abs() < 1e-12 {
                    1.0
                } else {
                    target / denom
                };
                let proj: Vec<f64> = qc.iter().zip(&camera).map(|(a, c)| c + a * t).collect();
                proj
            })
            .collect();
        // Drop the normal direction: build an orthonormal basis of the
        // facet hyperplane and take coordinates.
        let basis = hyperplane_basis(&n);
        pts = pts
            .iter()
            .map(|q| {
                basis
                    .iter()
                    .map(|b| q.iter().zip(b).map(|(a, c)| a * c).sum())
                    .collect()
            })
            .collect();
    }
    // Orthographic 3D -> 2D.
    let pts2: Vec<[f64; 2]> = pts
        .iter()
        .map(|q| match q.len() {
            2 => [q[0], q[1]],
            _ => [
                q[0] * 0.866 - q[1] * 0.5 * 0.866,
                q[2].mul_add(1.0, -q[1] * 0.45) + q[0] * 0.25,
            ],
        })
        .collect();
    let edges = polytope_edges(p);
    let (mut minx, mut maxx, mut miny, mut maxy) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for q in &pts2 {
        minx = minx.min(q[0]);
        maxx = maxx.max(q[0]);
        miny = miny.min(q[1]);
        maxy = maxy.max(q[1]);
    }
    let scale = 360.0 / (maxx - minx).max(maxy - miny).max(1e-9);
    let map = |q: [f64; 2]| (20.0 + (q[0] - minx) * scale, 20.0 + (maxy - q[1]) * scale);
    let mut svg = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n",
    );
    for (i, j) in &edges {
        let (x1, y1) = map(pts2[*i]);
        let (x2, y2) = map(pts2[*j]);
        svg.push_str(&format!(
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n"
        ));
    }
    for q in &pts2 {
        let (x, y) = map(*q);
        svg.push_str(&format!(
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"crimson\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn hyperplane_basis(n: &[f64]) -> Vec<Vec<f64>> {
    // Gram-Schmidt of the coordinate vectors against n.
    let dim = n.len();
    let nn: f64 = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    let unit: Vec<f64> = n.iter().map(|x| x / nn).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        let d: f64 = v.iter().zip(&unit).map(|(a, b)| a * b).sum();
        for (x, u) in v.iter_mut().zip(&unit) {
            *x -= d * u;
        }
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (x, c) in v.iter_mut().zip(b) {
                *x -= d * c;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            basis.push(v.iter().map(|x| x / norm).collect());
            if basis.len() == dim - 1 {
                break;
            }
        }
    }
    basis
}
