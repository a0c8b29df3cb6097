use num_traits::Zero;

use crate::matrix::{dot, RatMatrix};
use crate::solve::{solve, LinearSolution};
use crate::{primitive_integer, Rat};

/// Supporting halfspace {x : <normal, x> >= offset}, with the normal
/// scaled to a primitive integer vector. Valid on the affine hull of the
/// polytope when that hull is lower-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Facet {
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) >= self.offset
    }

    pub fn tight_at(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) == self.offset
    }
}

/// Exact convex polytope: irredundant vertices plus supporting facets.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub ambient_dim: usize,
    pub affine_dim: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub facets: Vec<Facet>,
}

/// Exact convex hull of a finite rational point set via lifting to a cone
/// and running double description on the polar.
pub fn convex_hull(points: &[Vec<Rat>]) -> Polytope {
    let ambient_dim = points.first().map_or(0, |p| p.len());
    assert!(points.iter().all(|p| p.len() == ambient_dim));
    let mut pts: Vec<Vec<Rat>> = points.to_vec();
    pts.sort();
    pts.dedup();

    if pts.is_empty() {
        return Polytope {
            ambient_dim,
            affine_dim: 0,
            vertices: Vec::new(),
            facets: Vec::new(),
        };
    }

    // Affine hull: basis of span{p_i - p_0} by row reduction.
    let p0 = pts[0].clone();
    let mut diff = RatMatrix::from_rows(
        pts.iter()
            .map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
            .collect(),
    );
    let pivots = diff.rref();
    let affine_dim = pivots.len();
    let basis: Vec<Vec<Rat>> = (0..affine_dim).map(|r| diff.row(r).to_vec()).collect();

    if affine_dim == 0 {
        return Polytope {
            ambient_dim,
            affine_dim,
            vertices: vec![p0],
            facets: Vec::new(),
        };
    }

    // Coordinates of each point in the affine basis. Because `basis` is in
    // reduced row echelon form, the coordinate at basis vector r is just
    // the entry of p - p0 at the pivot column of r.
    let coords: Vec<Vec<Rat>> = pts
        .iter()
        .map(|p| pivots.iter().map(|&c| &p[c] - &p0[c]).collect::<Vec<Rat>>())
        .collect();

    // Homogenize to rays (1, q) and enumerate the polar cone's extreme
    // rays: these are the facet normals of the hull.
    let lifted = RatMatrix::from_rows(
        coords
            .iter()
            .map(|q| {
                let mut row = Vec::with_capacity(1 + affine_dim);
                row.push(crate::rat(1));
                row.extend(q.iter().cloned());
                row
            })
            .collect(),
    );
    let dual_rays = crate::dd::dd_pointed(&lifted, 1 + affine_dim);

    // Vertices: a point is extreme iff its tight facets span a rank
    // affine_dim subspace of the lifted space.
    let mut vertex_idx: Vec<usize> = Vec::new();
    for (i, _) in pts.iter().enumerate() {
        let tight: Vec<Vec<Rat>> = dual_rays
            .iter()
            .filter(|y| dot(y, lifted.row(i)).is_zero())
            .cloned()
            .collect();
        if tight.len() >= affine_dim && RatMatrix::from_rows(tight).rank() == affine_dim {
            vertex_idx.push(i);
        }
    }
    // Pull facet functionals back to ambient coordinates: find w with
    // <w, basis_r> = n_r for every affine basis vector, then the facet is
    // <w, x> >= <w, p0> - c for the dual ray (c, n).
    let basis_mat = RatMatrix::from_rows(basis.clone());
    let mut facets: Vec<Facet> = Vec::new();
    for y in &dual_rays {
        let c = y[0].clone();
        let n: Vec<Rat> = y[1..].to_vec();
        // We need <w, basis_r> = n_r for every r, i.e. basis_mat * w = n.
        let w = match solve(&basis_mat, &n) {
            LinearSolution::Solution(w) => w,
            LinearSolution::Infeasible { .. } => unreachable!("facet normal outside basis span"),
        };
        let offset = dot(&w, &p0) - c;
        facets.push(canonical_facet(w, offset));
    }
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    facets.dedup();

    let vertices: Vec<Vec<Rat>> = vertex_idx.into_iter().map(|i| pts[i].clone()).collect();

    let poly = Polytope {
        ambient_dim,
        affine_dim,
        vertices,
        facets,
    };
    debug_assert!(poly.check_consistency());
    poly
}

/// Scales the facet functional to primitive integer form.
fn canonical_facet(normal: Vec<Rat>, offset: Rat) -> Facet {
    let mut all = normal.clone();
    all.push(offset.clone());
    match primitive_integer(&all) {
        Some(ints) => {
            let scaled: Vec<Rat> = ints.iter().map(|x| Rat::from_integer(x.clone())).collect();
            // primitive_integer preserves direction (positive scaling).
            let (n, o) = scaled.split_at(normal.len());
            Facet {
                normal: n.to_vec(),
                offset: o[0].clone(),
            }
        }
        None => Facet { normal, offset },
    }
}

impl Polytope {
    pub fn check_consistency(&self) -> bool {
        self.vertices.iter().all(|v| {
            self.facets.iter().all(|f| f.satisfied_by(v))
                && self.facets.iter().filter(|f| f.tight_at(v)).count() >= self.affine_dim
        })
    }

    /// Vertex indices lying on the given facet.
    pub fn facet_vertices(&self, f: &Facet) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| f.tight_at(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// True if the vertex set is invariant under negation.
    pub fn centrally_symmetric(&self) -> bool {
        let set: std::collections::BTreeSet<&Vec<Rat>> = self.vertices.iter().collect();
        self.vertices
            .iter()
            .all(|v| set.contains(&v.iter().map(|x| -x.clone()).collect::<Vec<Rat>>()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    #[test]
    fn hull_1d() {
        let pts = vec![vec![rat(1)], vec![rat(-1)], vec![ratio(1, 2)]];
        let p = convex_hull(&pts);
        assert_eq!(p.affine_dim, 1);
        let mut vs = p.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![vec![rat(-1)], vec![rat(1)]]);
        assert_eq!(p.facets.len(), 2);
    }

    #[test]
    fn hull_octahedron() {
        let mut pts = Vec::new();
        for s in [1i64, -1] {
            pts.push(vec![rat(s), rat(0), rat(0)]);
            pts.push(vec![rat(0), rat(s), rat(0)]);
        }
        pts.push(vec![rat(0), rat(0), ratio(1, 2)]);
        pts.push(vec![rat(0), rat(0), ratio(-1, 2)]);
        let p = convex_hull(&pts);
        assert_eq!(p.affine_dim, 3);
        assert_eq!(p.vertices.len(), 6);
        assert_eq!(p.facets.len(), 8);
        assert!(p.centrally_symmetric());
    }

    #[test]
    fn hull_idempotent_on_vertices() {
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(0), rat(2)],
            vec![rat(1), rat(1)],
            vec![ratio(1, 3), ratio(1, 3)],
        ];
        let p = convex_hull(&pts);
        let q = convex_hull(&p.vertices);
        let mut a = p.vertices.clone();
        let mut b = q.vertices.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn hull_lower_dimensional() {
        // Three collinear points in the plane.
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(2), rat(2)],
        ];
        let p = convex_hull(&pts);
        assert_eq!(p.affine_dim, 1);
        assert_eq!(p.vertices.len(), 2);
    }

    #[test]
    fn hull_single_point() {
        let p = convex_hull(&[vec![rat(3), rat(4)]]);
        assert_eq!(p.affine_dim, 0);
        assert_eq!(p.vertices.len(), 1);
    }
}
