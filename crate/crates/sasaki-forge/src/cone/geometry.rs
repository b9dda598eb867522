//! Floating-point side of the cone module: Reeb vectors, hyperplane
//! slices, apex-fan volumes and barycenters.

use super::{FanRoot, GorensteinPoint, MomentCone};
use crate::error::{Error, Result};
use crate::real::{compensated_sum, Real};

/// A vector in the interior of the dual cone: `<xi, r> > 0` on every
/// extreme ray `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReebVector<F> {
    xi: Vec<F>,
}

impl<F: Real> ReebVector<F> {
    /// Validate interiority against the cone's rays.
    pub fn interior(cone: &MomentCone, xi: Vec<F>) -> Result<Self> {
        if xi.len() != cone.dim() {
            return Err(Error::DimensionMismatch(format!(
                "xi has length {}, cone dimension is {}",
                xi.len(),
                cone.dim()
            )));
        }
        for (i, ray) in ray_vectors(cone).iter().enumerate() {
            let margin = dot(&xi, ray);
            if margin <= F::zero() {
                return Err(Error::UnboundedSlice {
                    ray_index: i,
                    margin: margin.as_f64(),
                });
            }
        }
        Ok(ReebVector { xi })
    }

    /// Validate interiority and membership of the Reeb hyperplane
    /// `<xi, beta> = m + 1` to 1e-12 relative.
    pub fn on_hyperplane(cone: &MomentCone, beta: &GorensteinPoint, xi: Vec<F>) -> Result<Self> {
        let level = F::int(cone.dim() as i64);
        let beta_f: Vec<F> = beta.to_f64().iter().map(|&x| F::lit(x)).collect();
        let pairing = dot(&xi, &beta_f);
        if ((pairing - level) / level).abs() > F::lit(1e-12) {
            return Err(Error::InvalidConfig(format!(
                "xi is off the Reeb hyperplane: <xi, beta> = {} != {}",
                pairing.as_f64(),
                level.as_f64()
            )));
        }
        Self::interior(cone, xi)
    }

    pub fn components(&self) -> &[F] {
        &self.xi
    }
}

pub(crate) fn ray_vectors<F: Real>(cone: &MomentCone) -> Vec<Vec<F>> {
    cone.rays_f64()
        .iter()
        .map(|r| r.iter().map(|&x| F::lit(x)).collect())
        .collect()
}

pub(crate) fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// The compact section `P_xi = { y in C : <xi, y> = m + 1 }`, stored as its
/// vertex list together with the simplices of a deterministic triangulation.
#[derive(Debug, Clone)]
pub struct SlicePolytope<F> {
    /// Vertices in lexicographic order.
    vertices: Vec<Vec<F>>,
    /// The hyperplane level `m + 1`.
    level: F,
    /// Slice dimension `m`.
    m: usize,
    /// Triangulation as (m+1)-element sets of vertex indices.
    simplices: Vec<Vec<usize>>,
    /// Originating cone ray of each vertex.
    vertex_ray: Vec<usize>,
}

impl<F: Real> SlicePolytope<F> {
    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn level(&self) -> F {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Which cone ray vertex `i` scales.
    pub fn vertex_ray(&self, i: usize) -> usize {
        self.vertex_ray[i]
    }

    /// `(m+1)! x` Euclidean volume of the cone truncated at this slice,
    /// i.e. the sum of `|det|` over the apex fan of the triangulation.
    pub fn apex_fan_volume(&self) -> F {
        let dets: Vec<F> = self
            .simplices
            .iter()
            .map(|s| {
                let mat: Vec<Vec<F>> = s.iter().map(|&i| self.vertices[i].clone()).collect();
                det_small(mat).abs()
            })
            .collect();
        compensated_sum(dets)
    }
}

/// Slice the cone at level `m + 1` along `xi`, using the default lex-min
/// fan triangulation.
pub fn slice_polytope<F: Real>(cone: &MomentCone, xi: &ReebVector<F>) -> Result<SlicePolytope<F>> {
    slice_polytope_with_root(cone, xi, FanRoot::LexMin)
}

/// Same slice with an explicit fan root, so callers can compare two
/// genuinely different triangulations of one polytope.
pub fn slice_polytope_with_root<F: Real>(
    cone: &MomentCone,
    xi: &ReebVector<F>,
    root: FanRoot,
) -> Result<SlicePolytope<F>> {
    let level = F::int(cone.dim() as i64);
    let rays = ray_vectors::<F>(cone);
    let mut scaled: Vec<(Vec<F>, usize)> = Vec::with_capacity(rays.len());
    for (i, ray) in rays.iter().enumerate() {
        let margin = dot(xi.components(), ray);
        if margin <= F::zero() {
            return Err(Error::UnboundedSlice {
                ray_index: i,
                margin: margin.as_f64(),
            });
        }
        let v: Vec<F> = ray.iter().map(|&x| x * level / margin).collect();
        scaled.push((v, i));
    }
    scaled.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite vertices"));

    let mut ray_to_vertex = vec![0usize; rays.len()];
    for (vi, (_, ri)) in scaled.iter().enumerate() {
        ray_to_vertex[*ri] = vi;
    }
    let (vertices, vertex_ray): (Vec<Vec<F>>, Vec<usize>) = scaled.into_iter().unzip();

    let tri = if root == FanRoot::LexMin {
        cone.slice_triangulation().to_vec()
    } else {
        cone.triangulate(root)
    };
    let mut simplices: Vec<Vec<usize>> = tri
        .iter()
        .map(|s| {
            let mut t: Vec<usize> = s.iter().map(|&ri| ray_to_vertex[ri]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    simplices.sort();

    Ok(SlicePolytope {
        vertices,
        level,
        m: cone.m(),
        simplices,
        vertex_ray,
    })
}

/// The volume functional `Vol(xi)`: `(m+1)!` times the Euclidean volume of
/// `{ y in C : <xi, y> <= m+1 }`, computed by fanning the truncated cone
/// into apex simplices over the slice triangulation.
pub fn volume_functional<F: Real>(cone: &MomentCone, xi: &ReebVector<F>) -> Result<F> {
    Ok(slice_polytope(cone, xi)?.apex_fan_volume())
}

/// Barycenter of the slice with respect to Lebesgue measure on its affine
/// hull: volume-weighted average of simplex centroids. Invariant under the
/// choice of triangulation.
pub fn barycenter<F: Real>(poly: &SlicePolytope<F>) -> Result<Vec<F>> {
    let n = poly.m + 1;
    if affine_rank(&poly.vertices) < poly.m {
        return Err(Error::DegeneratePolytope {
            found: affine_rank(&poly.vertices),
            expected: poly.m,
        });
    }
    // the m-volume of a slice simplex is a fixed multiple of the
    // determinant of its apex simplex, so |det| weights are exact here
    let mut weighted: Vec<Vec<F>> = vec![Vec::new(); n];
    let mut weights: Vec<F> = Vec::new();
    for s in &poly.simplices {
        let mat: Vec<Vec<F>> = s.iter().map(|&i| poly.vertices[i].clone()).collect();
        let w = det_small(mat).abs();
        let inv_card = F::one() / F::int(s.len() as i64);
        for c in 0..n {
            let centroid_c = s
                .iter()
                .fold(F::zero(), |acc, &i| acc + poly.vertices[i][c])
                * inv_card;
            weighted[c].push(w * centroid_c);
        }
        weights.push(w);
    }
    let total = compensated_sum(weights);
    Ok(weighted
        .into_iter()
        .map(|terms| compensated_sum(terms) / total)
        .collect())
}

/// Determinant of a small square matrix by Gaussian elimination with
/// partial pivoting; deterministic for a fixed input.
pub(crate) fn det_small<F: Real>(mut mat: Vec<Vec<F>>) -> F {
    let n = mat.len();
    let mut det = F::one();
    for c in 0..n {
        let mut p = c;
        for r in (c + 1)..n {
            if mat[r][c].abs() > mat[p][c].abs() {
                p = r;
            }
        }
        if mat[p][c] == F::zero() {
            return F::zero();
        }
        if p != c {
            mat.swap(p, c);
            det = -det;
        }
        det = det * mat[c][c];
        for r in (c + 1)..n {
            let f = mat[r][c] / mat[c][c];
            for k in c..n {
                let sub = f * mat[c][k];
                mat[r][k] = mat[r][k] - sub;
            }
        }
    }
    det
}

fn affine_rank<F: Real>(vertices: &[Vec<F>]) -> usize {
    if vertices.len() < 2 {
        return 0;
    }
    let n = vertices[0].len();
    let mut rows: Vec<Vec<F>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    // float elimination with a relative pivot threshold
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(F::zero(), |acc, &x| acc.max(x.abs()));
    let tol = scale * F::lit(1e-9);
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..rows.len())
            .max_by(|&a, &b| rows[a][c].abs().partial_cmp(&rows[b][c].abs()).unwrap())
        else {
            break;
        };
        if rows[p][c].abs() <= tol {
            continue;
        }
        rows.swap(rank, p);
        for r in (rank + 1)..rows.len() {
            let f = rows[r][c] / rows[rank][c];
            for k in c..n {
                let sub = f * rows[rank][k];
                rows[r][k] = rows[r][k] - sub;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::build_cone;

    fn quadrant() -> MomentCone {
        build_cone(&[vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn simplex3() -> MomentCone {
        build_cone(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
    }

    #[test]
    fn quadrant_slice_vertices() {
        let cone = quadrant();
        let xi = ReebVector::interior(&cone, vec![1.0, 1.0]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        assert_eq!(poly.vertices(), &[vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert_eq!(poly.level(), 2.0);
    }

    #[test]
    fn simplex3_slice_vertices() {
        let cone = simplex3();
        let xi = ReebVector::interior(&cone, vec![1.0, 1.0, 1.0]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        assert_eq!(
            poly.vertices(),
            &[
                vec![0.0, 0.0, 3.0],
                vec![0.0, 3.0, 0.0],
                vec![3.0, 0.0, 0.0]
            ]
        );
    }

    #[test]
    fn boundary_reeb_vector_is_unbounded() {
        let cone = quadrant();
        let err = ReebVector::interior(&cone, vec![2.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::UnboundedSlice { .. }));
    }

    #[test]
    fn quadrant_volume_is_four() {
        let cone = quadrant();
        let xi = ReebVector::interior(&cone, vec![1.0, 1.0]).unwrap();
        assert_eq!(volume_functional(&cone, &xi).unwrap(), 4.0);
    }

    #[test]
    fn quadrant_volume_closed_form_on_hyperplane() {
        // on the hyperplane xi1 + xi2 = 2 the functional is 4/(xi1 xi2)
        let cone = quadrant();
        for &(a, b) in &[(0.5_f64, 1.5), (1.2, 0.8), (1.9, 0.1)] {
            let xi = ReebVector::interior(&cone, vec![a, b]).unwrap();
            let vol = volume_functional(&cone, &xi).unwrap();
            assert!((vol - 4.0 / (a * b)).abs() < 1e-12 * vol);
        }
    }

    #[test]
    fn simplex3_volume_is_twenty_seven() {
        let cone = simplex3();
        let xi = ReebVector::interior(&cone, vec![1.0_f64, 1.0, 1.0]).unwrap();
        assert!((volume_functional(&cone, &xi).unwrap() - 27.0).abs() < 1e-12);
    }

    #[test]
    fn segment_barycenter_is_midpoint() {
        let cone = quadrant();
        let xi = ReebVector::interior(&cone, vec![1.0, 1.0]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        assert_eq!(barycenter(&poly).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn triangle_barycenter_is_vertex_average() {
        let cone = simplex3();
        let xi = ReebVector::interior(&cone, vec![1.0_f64, 1.0, 1.0]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        let b = barycenter(&poly).unwrap();
        for c in b {
            assert!((c - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn off_center_quadrant_barycenter() {
        let cone = quadrant();
        let xi = ReebVector::interior(&cone, vec![1.5_f64, 0.5]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        let b = barycenter(&poly).unwrap();
        assert!((b[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((b[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn slice_vertices_are_positive_ray_scalings() {
        let cone =
            build_cone(&[vec![1, 1, 0], vec![1, 0, 1], vec![1, -1, -1], vec![1, 1, 1]]).unwrap();
        let xi = ReebVector::interior(&cone, vec![3.0_f64, 0.2, -0.1]).unwrap();
        let poly = slice_polytope(&cone, &xi).unwrap();
        let rays = cone.rays_f64();
        for (i, v) in poly.vertices().iter().enumerate() {
            let ray = &rays[poly.vertex_ray(i)];
            // find the scaling from the first nonzero ray component
            let k = (0..3).find(|&k| ray[k] != 0.0).unwrap();
            let s = v[k] / ray[k];
            assert!(s > 0.0);
            for c in 0..3 {
                assert!((v[c] - s * ray[c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn volume_homogeneity_degree() {
        let cone =
            build_cone(&[vec![1, 1, 0], vec![1, 0, 1], vec![1, -1, -1], vec![1, 1, 1]]).unwrap();
        let base = vec![3.0_f64, 0.3, 0.2];
        let xi = ReebVector::interior(&cone, base.clone()).unwrap();
        let v1 = volume_functional(&cone, &xi).unwrap();
        for &s in &[0.5, 2.0, 7.25] {
            let scaled: Vec<f64> = base.iter().map(|&x| s * x).collect();
            let xi_s = ReebVector::interior(&cone, scaled).unwrap();
            let v2 = volume_functional(&cone, &xi_s).unwrap();
            let expected = v1 * s.powi(-3);
            assert!((v2 - expected).abs() <= 1e-10 * expected.abs());
        }
    }

    #[test]
    fn triangulation_independence_of_volume_and_barycenter() {
        let cone =
            build_cone(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]]).unwrap();
        let xi = ReebVector::interior(&cone, vec![3.0_f64, 0.4, 0.2]).unwrap();
        let a = slice_polytope_with_root(&cone, &xi, FanRoot::LexMin).unwrap();
        let b = slice_polytope_with_root(&cone, &xi, FanRoot::LexNext).unwrap();
        assert_ne!(a.simplices(), b.simplices());
        let (va, vb) = (a.apex_fan_volume(), b.apex_fan_volume());
        assert!((va - vb).abs() <= 1e-12 * va.abs());
        let (ba, bb) = (barycenter(&a).unwrap(), barycenter(&b).unwrap());
        for (x, y) in ba.iter().zip(&bb) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn f32_instantiation_slices_and_measures() {
        let cone = quadrant();
        let xi = ReebVector::interior(&cone, vec![1.0_f32, 1.0]).unwrap();
        assert_eq!(volume_functional(&cone, &xi).unwrap(), 4.0_f32);
        let poly = slice_polytope(&cone, &xi).unwrap();
        assert_eq!(barycenter(&poly).unwrap(), vec![1.0_f32, 1.0]);
    }

    #[test]
    fn hyperplane_constructor_rejects_off_slice_vectors() {
        let cone = quadrant();
        let beta = crate::cone::gorenstein_point(&cone).unwrap();
        assert!(ReebVector::on_hyperplane(&cone, &beta, vec![1.0_f64, 1.0]).is_ok());
        assert!(ReebVector::on_hyperplane(&cone, &beta, vec![1.0_f64, 1.5]).is_err());
    }
}
