//! Toric moment cone: facet-normal description, exact ray enumeration,
//! the Gorenstein point, and hyperplane slices with volumes and barycenters.
//!
//! The cone is `C = { y : <lambda_j, y> >= 0 for all j }` for integer facet
//! normals `lambda_j`. Construction and the Gorenstein point run in exact
//! rational arithmetic; slice volumes and barycenters are floating point.

mod exact;
mod geometry;

pub use geometry::{
    barycenter, slice_polytope, slice_polytope_with_root, volume_functional, ReebVector,
    SlicePolytope,
};

use crate::error::{Error, Result};
use exact::{Rat, SolveOutcome};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// Which vertex a fan triangulation is rooted at. The two choices give two
/// genuinely different triangulations of the same slice, which is what the
/// triangulation-independence checks compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanRoot {
    /// Fan from the lexicographically smallest ray of each face.
    LexMin,
    /// Fan from the second-smallest ray of each face.
    LexNext,
}

/// A full-dimensional pointed polyhedral cone with integer facet normals
/// and derived primitive extreme rays. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MomentCone {
    n: usize,
    normals: Vec<Vec<i64>>,
    rays: Vec<Vec<BigInt>>,
    /// For each ray, the sorted indices of normals vanishing on it.
    ray_active: Vec<Vec<usize>>,
    /// Simplices (sets of ray indices) of the default slice triangulation.
    triangulation: Vec<Vec<usize>>,
}

/// The point `beta` with `<lambda_j, beta> = 1` for every facet normal,
/// kept as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinPoint {
    beta: Vec<Rat>,
}

impl GorensteinPoint {
    pub fn components(&self) -> &[Rat] {
        &self.beta
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.beta.iter().map(rational_to_f64).collect()
    }

    /// `"p/q"` strings, the serialization format for exact rationals.
    pub fn to_strings(&self) -> Vec<String> {
        self.beta
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect()
    }
}

fn rational_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("rational within f64 range")
}

/// Build and validate a moment cone from integer facet normals.
///
/// Normals are sorted lexicographically and deduplicated, so any input
/// ordering produces the same cone object (and therefore bit-identical
/// volumes downstream). Rays are enumerated by intersecting all
/// `(n-1)`-subsets of normals, the double-description step at the small
/// dimensions (`2 <= n <= 4`) this crate supports.
pub fn build_cone(normals: &[Vec<i64>]) -> Result<MomentCone> {
    let n = normals
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no normals given".into()))?
        .len();
    if !(2..=4).contains(&n) {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimension must be 2..=4 for the exact path, got {n}"
        )));
    }
    for (j, row) in normals.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "normal #{j} has length {}, expected {n}",
                row.len()
            )));
        }
        if row.iter().all(|&x| x == 0) {
            return Err(Error::DimensionMismatch(format!("normal #{j} is zero")));
        }
    }

    let mut sorted: Vec<Vec<i64>> = normals.to_vec();
    sorted.sort();
    sorted.dedup();
    let d = sorted.len();
    if d < n {
        return Err(Error::NotPointed {
            rank: exact::rank_int(&to_bigint_rows(&sorted)),
            dim: n,
        });
    }

    let big: Vec<Vec<BigInt>> = to_bigint_rows(&sorted);
    let rank = exact::rank_int(&big);
    if rank < n {
        return Err(Error::NotPointed { rank, dim: n });
    }

    // double description at small dimension: every extreme ray is the
    // kernel of some (n-1)-subset of facet normals
    let mut rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for subset in subsets(d, n - 1) {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&j| big[j].clone()).collect();
        let Some(dir) = exact::kernel_direction(&rows) else {
            continue;
        };
        let prim = exact::primitive_integer(&dir);
        if exact::is_zero_vec(&prim) {
            continue;
        }
        for candidate in [prim.clone(), prim.iter().map(|x| -x).collect()] {
            let feasible = big
                .iter()
                .all(|lam| !exact::dot_int(lam, &candidate).is_negative());
            if feasible {
                rays.insert(candidate);
                break;
            }
        }
    }
    let rays: Vec<Vec<BigInt>> = rays.into_iter().collect();
    if rays.is_empty() || exact::rank_int(&rays) < n {
        return Err(Error::NotFullDimensional {
            rank: exact::rank_int(&rays),
            dim: n,
        });
    }

    let ray_active: Vec<Vec<usize>> = rays
        .iter()
        .map(|r| {
            (0..d)
                .filter(|&j| exact::dot_int(&big[j], r).is_zero())
                .collect()
        })
        .collect();

    let mut cone = MomentCone {
        n,
        normals: sorted,
        rays,
        ray_active,
        triangulation: Vec::new(),
    };
    cone.triangulation = cone.triangulate(FanRoot::LexMin);
    Ok(cone)
}

fn to_bigint_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    rec(0, d, k, &mut cur, &mut out);
    out
}

impl MomentCone {
    /// Ambient dimension `n = m + 1`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Base complex dimension `m = n - 1`.
    pub fn m(&self) -> usize {
        self.n - 1
    }

    /// Facet normals, sorted and deduplicated.
    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    /// Primitive extreme-ray generators in lexicographic order.
    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// Rays as `f64` vectors.
    pub fn rays_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.rays
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_f64().expect("small ray entry"))
                    .collect()
            })
            .collect()
    }

    /// Indices of the normals vanishing on ray `i`.
    pub fn ray_active_normals(&self, i: usize) -> &[usize] {
        &self.ray_active[i]
    }

    /// The default (lex-min rooted) slice triangulation as ray-index
    /// simplices, each of size `n`.
    pub fn slice_triangulation(&self) -> &[Vec<usize>] {
        &self.triangulation
    }

    /// Deterministic fan triangulation of the slice, recursing through the
    /// exact face lattice. Every simplex is a set of `n` ray indices.
    pub fn triangulate(&self, root: FanRoot) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let mut out = self.triangulate_face(&all, root);
        out.sort();
        out
    }

    fn face_rank(&self, face: &[usize]) -> usize {
        let rows: Vec<Vec<BigInt>> = face.iter().map(|&i| self.rays[i].clone()).collect();
        exact::rank_int(&rows)
    }

    fn triangulate_face(&self, face: &[usize], root: FanRoot) -> Vec<Vec<usize>> {
        let rank = self.face_rank(face);
        if rank == 1 {
            debug_assert_eq!(face.len(), 1, "a 1-dim cone face has a single extreme ray");
            return vec![face.to_vec()];
        }
        let mut by_lex: Vec<usize> = face.to_vec();
        by_lex.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let apex = match root {
            FanRoot::LexMin => by_lex[0],
            FanRoot::LexNext => by_lex[1.min(by_lex.len() - 1)],
        };

        // facets of this face: cut by one more normal, dropping rank by one
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for j in 0..self.normals.len() {
            let sub: Vec<usize> = face
                .iter()
                .copied()
                .filter(|&i| self.ray_active[i].contains(&j))
                .collect();
            if sub.is_empty() || sub.len() == face.len() {
                continue;
            }
            if self.face_rank(&sub) == rank - 1 {
                facets.insert(sub);
            }
        }

        let mut out = Vec::new();
        for facet in facets {
            if facet.contains(&apex) {
                continue;
            }
            for mut simplex in self.triangulate_face(&facet, root) {
                simplex.push(apex);
                simplex.sort_unstable();
                out.push(simplex);
            }
        }
        out
    }
}

/// Solve `<lambda_j, beta> = 1` exactly over the rationals.
///
/// Fails with `NotGorenstein` when the (generally overdetermined) system is
/// inconsistent, which is exactly when the Q-Gorenstein hypothesis fails.
pub fn gorenstein_point(cone: &MomentCone) -> Result<GorensteinPoint> {
    let a = to_bigint_rows(&cone.normals);
    let b = vec![Rat::from_integer(BigInt::from(1)); a.len()];
    let beta = match exact::solve_int(&a, &b) {
        SolveOutcome::Unique(x) => x,
        SolveOutcome::Inconsistent => return Err(Error::NotGorenstein),
        // unreachable once pointedness (full normal rank) is validated
        SolveOutcome::Underdetermined => return Err(Error::NotGorenstein),
    };
    // every facet product is exactly 1 > 0, but keep the interior check as
    // a guard on the solver itself
    for lam in &a {
        if !exact::dot_int_rat(lam, &beta).is_positive() {
            return Err(Error::BetaNotInterior);
        }
    }
    Ok(GorensteinPoint { beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    fn ray_i64(cone: &MomentCone) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        cone.rays()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let cone = build_cone(&v(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(ray_i64(&cone), v(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn simplicial_three_cone_rays_are_axes() {
        let cone = build_cone(&v(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(ray_i64(&cone), v(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn conifold_has_four_rays_each_on_two_facets() {
        let cone = build_cone(&v(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]])).unwrap();
        assert_eq!(cone.rays().len(), 4);
        for i in 0..4 {
            assert_eq!(cone.ray_active_normals(i).len(), 2);
        }
        let mut rays = ray_i64(&cone);
        rays.sort();
        assert_eq!(rays, v(&[&[0, 0, 1], &[0, 1, 0], &[1, -1, 0], &[1, 0, -1]]));
    }

    /// Brute-force double-description oracle: try every (n-1)-subset of
    /// normals, solve for the orthogonal direction by integer cross-product
    /// style elimination, keep the feasible orientations, dedup.
    fn dd_oracle(normals: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = normals[0].len();
        assert_eq!(n, 3, "oracle written for n = 3");
        let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
        for a in 0..normals.len() {
            for b in (a + 1)..normals.len() {
                let u = &normals[a];
                let w = &normals[b];
                let cross = vec![
                    u[1] * w[2] - u[2] * w[1],
                    u[2] * w[0] - u[0] * w[2],
                    u[0] * w[1] - u[1] * w[0],
                ];
                if cross.iter().all(|&x| x == 0) {
                    continue;
                }
                let g = cross
                    .iter()
                    .fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()));
                let prim: Vec<i64> = cross.iter().map(|&x| x / g).collect();
                for cand in [prim.clone(), prim.iter().map(|&x| -x).collect::<Vec<_>>()] {
                    if normals
                        .iter()
                        .all(|lam| lam.iter().zip(&cand).map(|(&l, &c)| l * c).sum::<i64>() >= 0)
                    {
                        found.insert(cand);
                    }
                }
            }
        }
        found.into_iter().collect()
    }

    #[test]
    fn conifold_rays_match_brute_force_oracle() {
        let normals = v(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]]);
        let cone = build_cone(&normals).unwrap();
        assert_eq!(ray_i64(&cone), dd_oracle(&normals));
    }

    #[test]
    fn del_pezzo_rays_match_brute_force_oracle() {
        let normals = v(&[&[1, 1, 0], &[1, 0, 1], &[1, -1, -1], &[1, 1, 1]]);
        let cone = build_cone(&normals).unwrap();
        assert_eq!(ray_i64(&cone), dd_oracle(&normals));
        assert_eq!(cone.rays().len(), 4);
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let err = build_cone(&v(&[&[1, 0], &[-1, 0]])).unwrap_err();
        assert!(matches!(err, Error::NotPointed { rank: 1, dim: 2 }));
    }

    #[test]
    fn opposing_normals_leave_no_interior() {
        let err = build_cone(&v(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap_err();
        assert!(matches!(err, Error::NotFullDimensional { .. }));
    }

    #[test]
    fn ragged_input_is_rejected() {
        let err = build_cone(&v(&[&[1, 0], &[0, 1, 0]])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn gorenstein_point_quadrant_and_simplex() {
        let quad = build_cone(&v(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(gorenstein_point(&quad).unwrap().to_f64(), vec![1.0, 1.0]);
        let simp = build_cone(&v(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(
            gorenstein_point(&simp).unwrap().to_f64(),
            vec![1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn gorenstein_point_conifold_overdetermined_consistent() {
        let cone = build_cone(&v(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]])).unwrap();
        let beta = gorenstein_point(&cone).unwrap();
        assert_eq!(beta.to_f64(), vec![1.0, 0.0, 0.0]);
        assert_eq!(beta.to_strings(), vec!["1/1", "0/1", "0/1"]);
    }

    #[test]
    fn non_gorenstein_cone_is_reported() {
        // normals (1,0),(0,1),(1,1): system beta1=1, beta2=1, beta1+beta2=1
        let cone = build_cone(&v(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(matches!(gorenstein_point(&cone), Err(Error::NotGorenstein)));
    }

    #[test]
    fn fractional_gorenstein_point() {
        let cone = build_cone(&v(&[&[2, 1], &[1, 2]])).unwrap();
        let beta = gorenstein_point(&cone).unwrap();
        assert_eq!(beta.to_strings(), vec!["1/3", "1/3"]);
    }

    #[test]
    fn triangulations_cover_with_n_rays_per_simplex() {
        let cone = build_cone(&v(&[&[1, 1, 0], &[1, 0, 1], &[1, -1, -1], &[1, 1, 1]])).unwrap();
        for root in [FanRoot::LexMin, FanRoot::LexNext] {
            let tri = cone.triangulate(root);
            assert_eq!(
                tri.len(),
                2,
                "a quadrilateral slice splits into two triangles"
            );
            for s in &tri {
                assert_eq!(s.len(), 3);
            }
        }
        assert_ne!(
            cone.triangulate(FanRoot::LexMin),
            cone.triangulate(FanRoot::LexNext)
        );
    }

    #[test]
    fn build_is_invariant_under_input_permutation() {
        let a = build_cone(&v(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[1, 0, 1]])).unwrap();
        let b = build_cone(&v(&[&[1, 1, 1], &[1, 0, 0], &[1, 0, 1], &[1, 1, 0]])).unwrap();
        assert_eq!(a.normals(), b.normals());
        assert_eq!(a.rays(), b.rays());
        assert_eq!(a.slice_triangulation(), b.slice_triangulation());
    }
}
