//! Lattice-point generating functions of pointed rational polyhedral cones.
//!
//! A cone is triangulated by a placing triangulation, the simplices are made
//! disjoint by opening facets (half-open decomposition), and each half-open
//! simplicial cone contributes
//! `(sum of t^w over its fundamental parallelepiped) / prod (1 - t^v_i)`.

mod dd;
mod rational;
mod weighted;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, dot, independent_subset, primitive, primitive_from_rational, solve_columns};
use crate::series_algebra::{GradedTruncation, Grading, Point};

pub use rational::{expand_sum, ConeRationalFunction};
pub use weighted::weighted_cone_series;

pub(crate) use dd::dual_extreme_rays;

/// A pointed cone spanned by primitive integer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    rank: usize,
    generators: Vec<Point>,
    geometry: Geometry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Geometry {
    /// Indices of generators forming a basis of the linear span.
    basis: Vec<usize>,
    /// Every generator in basis coordinates, scaled to a primitive integer vector.
    coords: Vec<Vec<i64>>,
    /// Inner facet normals as ambient functionals.
    facets: Vec<Point>,
    /// Integer basis of the functionals vanishing on the span.
    equations: Vec<Point>,
}

impl RationalCone {
    /// Normalizes the generators (primitive, sorted, deduplicated) and
    /// rejects zero vectors and cones containing a line.
    pub fn new(rank: usize, generators: Vec<Point>) -> Result<Self> {
        let mut gens = BTreeSet::new();
        for g in generators {
            if g.len() != rank {
                return invalid(format!("generator {g:?} does not have rank {rank}"));
            }
            if g.iter().all(|&x| x == 0) {
                return invalid("zero generator");
            }
            gens.insert(primitive(&g));
        }
        let generators: Vec<Point> = gens.into_iter().collect();
        let geometry = Geometry::compute(rank, &generators)?;
        let cone = Self { rank, generators, geometry };
        let psi = cone.positive_functional_unchecked();
        if cone.generators.iter().any(|g| dot(&psi, g) <= 0) {
            return invalid("cone is not pointed");
        }
        Ok(cone)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.geometry.basis.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim()
    }

    /// Inner facet normals `f` with `f . x >= 0` on the cone.
    pub fn facets(&self) -> &[Point] {
        &self.geometry.facets
    }

    /// Functionals cutting out the linear span.
    pub fn equations(&self) -> &[Point] {
        &self.geometry.equations
    }

    fn positive_functional_unchecked(&self) -> Point {
        let mut psi = vec![0; self.rank];
        for f in &self.geometry.facets {
            for (a, b) in psi.iter_mut().zip(f) {
                *a += b;
            }
        }
        psi
    }

    /// An integer functional strictly positive on every nonzero point of the
    /// cone, witnessing that it is pointed.
    pub fn positive_functional(&self) -> Point {
        self.positive_functional_unchecked()
    }

    /// Membership by the facet description.
    pub fn contains(&self, x: &[i64]) -> bool {
        self.geometry.equations.iter().all(|e| dot(e, x) == 0) && self.geometry.facets.iter().all(|f| dot(f, x) >= 0)
    }
}

impl Geometry {
    fn compute(rank: usize, generators: &[Point]) -> Result<Self> {
        let basis = independent_subset(generators);
        let m = basis.len();
        let basis_vecs: Vec<Point> = basis.iter().map(|&i| generators[i].clone()).collect();
        let coords: Vec<Vec<i64>> = generators
            .iter()
            .map(|g| {
                let c = solve_columns(&basis_vecs, g).expect("generator lies in its own span");
                primitive_from_rational(&c)
            })
            .collect();
        let equations = if m == 0 {
            (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect()
        } else {
            linalg::integer_kernel(&basis_vecs, rank)
        };
        let facets = if m == 0 {
            Vec::new()
        } else {
            let coord_facets = dual_extreme_rays(&coords)?;
            // Lift each functional on basis coordinates to the ambient space:
            // find psi with psi . b_j = phi_j for every basis vector b_j.
            let columns: Vec<Point> = (0..rank).map(|k| basis_vecs.iter().map(|b| b[k]).collect()).collect();
            coord_facets
                .iter()
                .map(|phi| {
                    let psi = solve_columns(&columns, phi).expect("basis vectors are independent");
                    primitive_from_rational(&psi)
                })
                .collect()
        };
        Ok(Self { basis, coords, facets, equations })
    }
}

/// A simplicial cone with some facets removed. `open[i]` excludes the facet
/// opposite `generators[i]`, i.e. forces a strictly positive coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenSimplicialCone {
    rank: usize,
    generators: Vec<Point>,
    open: Vec<bool>,
}

impl HalfOpenSimplicialCone {
    pub fn new(rank: usize, generators: Vec<Point>, open: Vec<bool>) -> Result<Self> {
        if generators.len() != open.len() {
            return invalid("one open flag per generator is required");
        }
        if generators.iter().any(|g| g.len() != rank) {
            return invalid("generator rank mismatch");
        }
        if linalg::rank(&generators) != generators.len() {
            return invalid("generators of a simplicial cone must be linearly independent");
        }
        Ok(Self { rank, generators, open })
    }

    /// The closed simplicial cone.
    pub fn closed(cone: &RationalCone) -> Result<Self> {
        Self::new(cone.rank, cone.generators.clone(), vec![false; cone.generators.len()])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn open_flags(&self) -> &[bool] {
        &self.open
    }

    /// Coordinates of `x` in the generator basis, if `x` lies in the span.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<BigRational>> {
        solve_columns(&self.generators, x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match self.coordinates(x) {
            None => false,
            Some(lambda) => {
                lambda.iter().zip(&self.open).all(|(l, &open)| if open { l.is_positive() } else { !l.is_negative() })
            }
        }
    }
}

/// Placing triangulation, seeded by the lexicographically first basis among
/// the sorted generators and then placing the remaining generators in order.
pub fn triangulate(cone: &RationalCone) -> Result<Vec<RationalCone>> {
    let geo = &cone.geometry;
    let m = geo.basis.len();
    if m == 0 || cone.is_simplicial() {
        return Ok(vec![cone.clone()]);
    }
    let in_basis: BTreeSet<usize> = geo.basis.iter().copied().collect();
    let mut simplices: Vec<Vec<usize>> = vec![geo.basis.clone()];
    let mut current: Vec<usize> = geo.basis.clone();
    for v in (0..cone.generators.len()).filter(|i| !in_basis.contains(i)) {
        let pts: Vec<Vec<i64>> = current.iter().map(|&i| geo.coords[i].clone()).collect();
        let facets = dual_extreme_rays(&pts)?;
        let visible: Vec<&Vec<i64>> = facets.iter().filter(|f| dot(f, &geo.coords[v]) < 0).collect();
        if visible.is_empty() {
            continue;
        }
        let mut added = Vec::new();
        for s in &simplices {
            for skip in 0..m {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                if visible.iter().any(|f| face.iter().all(|&g| dot(f, &geo.coords[g]) == 0)) {
                    let mut simplex = face;
                    simplex.push(v);
                    simplex.sort_unstable();
                    added.push(simplex);
                }
            }
        }
        simplices.extend(added);
        current.push(v);
    }
    simplices
        .into_iter()
        .map(|s| RationalCone::new(cone.rank, s.iter().map(|&i| cone.generators[i].clone()).collect()))
        .collect()
}

/// Turns a triangulation into disjoint half-open simplicial cones.
///
/// A generic interior point `q` decides every shared facet: a point on a
/// facet belongs to the simplex that `x + eps q` enters. Facets whose
/// barycentric coordinate of `q` is negative are opened.
pub fn half_open_decompose(simplices: &[RationalCone]) -> Result<Vec<HalfOpenSimplicialCone>> {
    if simplices.is_empty() {
        return Ok(Vec::new());
    }
    let rank = simplices[0].rank;
    for s in simplices {
        if !s.is_simplicial() || s.rank != rank {
            return invalid("half-open decomposition needs simplicial cones of one rank");
        }
    }
    if simplices.len() == 1 {
        return Ok(vec![HalfOpenSimplicialCone::closed(&simplices[0])?]);
    }
    let all: BTreeSet<&Point> = simplices.iter().flat_map(|s| s.generators.iter()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let mut qv = vec![0i64; rank];
        for g in &all {
            let c: i64 = rng.gen_range(1..=997);
            for (a, b) in qv.iter_mut().zip(g.iter()) {
                *a += c * b;
            }
        }
        let mut pieces = Vec::with_capacity(simplices.len());
        let mut generic = true;
        for s in simplices {
            let Some(lambda) = solve_columns(&s.generators, &qv) else {
                return invalid("simplices do not share one linear span");
            };
            if lambda.iter().any(Zero::is_zero) {
                generic = false;
                break;
            }
            let open = lambda.iter().map(Signed::is_negative).collect();
            pieces.push(HalfOpenSimplicialCone::new(rank, s.generators.clone(), open)?);
        }
        if generic {
            return Ok(pieces);
        }
    }
    Err(Error::Inconsistent("no generic interior point found".into()))
}

/// Gcd of the maximal minors of the generator matrix: the index of the
/// lattice they span inside the saturated lattice of their span.
pub fn lattice_index(generators: &[Point]) -> BigInt {
    let m = generators.len();
    if m == 0 {
        return BigInt::one();
    }
    let n = generators[0].len();
    let mut g = BigInt::zero();
    for rows in combinations(n, m) {
        let minor: Vec<Vec<i64>> = rows.iter().map(|&r| generators.iter().map(|v| v[r]).collect()).collect();
        g = num_integer::Integer::gcd(&g, &linalg::determinant(&minor));
    }
    g
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Lattice points `sum a_i v_i` with `a_i in [0, 1)`, or `(0, 1]` on opened
/// facets, enumerated through a lower-triangular basis of a coordinate
/// projection so that no floating point is involved.
pub fn fundamental_domain(c: &HalfOpenSimplicialCone) -> Vec<Point> {
    let m = c.generators.len();
    if m == 0 {
        return vec![vec![0; c.rank]];
    }
    // Coordinate projection with the smallest nonzero minor keeps the
    // residue enumeration short.
    let mut best: Option<(BigInt, Vec<Vec<i64>>)> = None;
    for rows in combinations(c.rank, m) {
        let minor: Vec<Vec<i64>> = rows.iter().map(|&r| c.generators.iter().map(|v| v[r]).collect()).collect();
        let det = linalg::determinant(&minor).abs();
        if det.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(d, _)| det < *d) {
            best = Some((det, minor));
        }
    }
    let (_, proj) = best.expect("independent generators have a nonzero minor");
    let hermite = linalg::lower_hermite(&proj);
    let inv = linalg::inverse(&proj).expect("nonsingular projection");
    let diag: Vec<i64> = (0..m).map(|i| hermite[i][i]).collect();

    let mut out = Vec::new();
    let mut y = vec![0i64; m];
    loop {
        // lambda = proj^{-1} y, reduced into the half-open unit box.
        let lambda: Vec<BigRational> =
            inv.iter().map(|row| row.iter().zip(&y).map(|(a, &b)| a * linalg::q(b)).sum()).collect();
        let frac: Vec<BigRational> = lambda
            .iter()
            .zip(&c.open)
            .map(|(l, &open)| {
                let f = l - l.floor();
                if open && f.is_zero() {
                    BigRational::one()
                } else {
                    f
                }
            })
            .collect();
        let point: Vec<BigRational> =
            (0..c.rank).map(|k| frac.iter().zip(&c.generators).map(|(f, v)| f * linalg::q(v[k])).sum()).collect();
        if point.iter().all(BigRational::is_integer) {
            out.push(point.iter().map(|x| i64::try_from(x.to_integer()).expect("point exceeds i64")).collect());
        }
        // Next residue in the box prod [0, diag_i).
        let mut i = 0;
        loop {
            if i == m {
                out.sort();
                return out;
            }
            y[i] += 1;
            if y[i] < diag[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

/// The generating function of a half-open simplicial cone.
pub fn cone_series(c: &HalfOpenSimplicialCone) -> ConeRationalFunction {
    let mut numerator = crate::series_algebra::LaurentPoly::zero(c.rank);
    for w in fundamental_domain(c) {
        numerator.add_term(w, BigInt::one());
    }
    ConeRationalFunction::new(numerator, c.generators.clone())
}

/// Rational generating function of all lattice points of `cone`, as a sum
/// over the half-open pieces of its triangulation.
pub fn cone_rational_pieces(cone: &RationalCone) -> Result<Vec<ConeRationalFunction>> {
    let pieces = half_open_decompose(&triangulate(cone)?)?;
    Ok(pieces.iter().map(cone_series).collect())
}

/// Truncated generating function of the lattice points of `cone`.
pub fn cone_truncation(cone: &RationalCone, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
    expand_sum(&cone_rational_pieces(cone)?, grading, bound)
}

fn check_positive_on(cone: &RationalCone, grading: &Grading) -> Result<()> {
    if grading.rank() != cone.rank {
        return invalid("grading rank mismatch");
    }
    if let Some(g) = cone.generators.iter().find(|g| grading.eval(g) <= 0) {
        return invalid(format!("grading is not strictly positive on generator {g:?}; slice is unbounded"));
    }
    Ok(())
}

/// Brute-force enumeration of the lattice points of `cone` with
/// `delta <= bound`, scanning the bounding box of the slice and testing the
/// facet inequalities.
pub fn cone_lattice_points(cone: &RationalCone, grading: &Grading, bound: i64) -> Result<Vec<Point>> {
    check_positive_on(cone, grading)?;
    if bound < 0 {
        return Ok(Vec::new());
    }
    let n = cone.rank;
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for g in &cone.generators {
        let dg = grading.eval(g);
        for k in 0..n {
            let scaled = bound * g[k];
            lo[k] = lo[k].min(scaled.div_euclid(dg));
            hi[k] = hi[k].max(-((-scaled).div_euclid(dg)));
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let d = grading.eval(&x);
        if (0..=bound).contains(&d) && cone.contains(&x) {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(out);
            }
            x[k] += 1;
            if x[k] <= hi[k] {
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(gens: &[&[i64]]) -> RationalCone {
        RationalCone::new(gens[0].len(), gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn simplicial_cone_triangulates_to_itself() {
        let c = cone(&[&[1, 0], &[1, 2]]);
        assert_eq!(triangulate(&c).unwrap(), vec![c]);
    }

    #[test]
    fn three_rays_in_the_plane() {
        let c = cone(&[&[1, 0], &[1, 1], &[1, 2]]);
        let t = triangulate(&c).unwrap();
        assert_eq!(t, vec![cone(&[&[1, 0], &[1, 1]]), cone(&[&[1, 1], &[1, 2]])]);
    }

    #[test]
    fn non_pointed_and_degenerate_inputs() {
        assert!(RationalCone::new(2, vec![vec![1, 0], vec![-1, 0]]).is_err());
        assert!(RationalCone::new(2, vec![vec![0, 0]]).is_err());
        assert!(RationalCone::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).is_err());
        let c = RationalCone::new(2, vec![vec![2, 4]]).unwrap();
        assert_eq!(c.generators(), &[vec![1, 2]]);
    }

    #[test]
    fn fundamental_domains() {
        let c = HalfOpenSimplicialCone::new(2, vec![vec![1, 0], vec![1, 2]], vec![false, false]).unwrap();
        assert_eq!(fundamental_domain(&c), vec![vec![0, 0], vec![1, 1]]);
        let c = HalfOpenSimplicialCone::new(2, vec![vec![1, 0], vec![0, 1]], vec![false, false]).unwrap();
        assert_eq!(fundamental_domain(&c), vec![vec![0, 0]]);
        let c = HalfOpenSimplicialCone::new(2, vec![vec![2, 0], vec![0, 2]], vec![false, false]).unwrap();
        assert_eq!(fundamental_domain(&c), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let c = HalfOpenSimplicialCone::new(1, vec![vec![1]], vec![true]).unwrap();
        assert_eq!(fundamental_domain(&c), vec![vec![1]]);
    }

    #[test]
    fn lower_dimensional_fundamental_domain() {
        // (1,1,0) and (1,-1,2) in rank 3: index 2 in the saturated lattice.
        let gens = vec![vec![1, 1, 0], vec![1, -1, 2]];
        let c = HalfOpenSimplicialCone::new(3, gens.clone(), vec![false, false]).unwrap();
        let dom = fundamental_domain(&c);
        assert_eq!(BigInt::from(dom.len()), lattice_index(&gens));
        assert_eq!(dom, vec![vec![0, 0, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn origin_cone() {
        let c = RationalCone::new(2, vec![]).unwrap();
        assert_eq!(c.dim(), 0);
        let g = Grading::new(vec![1, 1]);
        assert_eq!(cone_lattice_points(&c, &g, 5).unwrap(), vec![vec![0, 0]]);
        let t = cone_truncation(&c, &g, 5).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&[0, 0]), BigInt::one());
    }

    #[test]
    fn shared_ray_counted_once() {
        let c = cone(&[&[1, 0], &[1, 1], &[1, 2]]);
        let pieces = half_open_decompose(&triangulate(&c).unwrap()).unwrap();
        let opened: usize = pieces.iter().map(|p| p.open_flags().iter().filter(|&&o| o).count()).sum();
        assert_eq!(opened, 1);
        let g = Grading::new(vec![1, 0]);
        for x in cone_lattice_points(&c, &g, 6).unwrap() {
            assert_eq!(pieces.iter().filter(|p| p.contains(&x)).count(), 1, "{x:?}");
        }
    }

    #[test]
    fn quadrant_points() {
        let c = cone(&[&[1, 0], &[0, 1]]);
        let pts = cone_lattice_points(&c, &Grading::new(vec![1, 1]), 2).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(cone_lattice_points(&c, &Grading::new(vec![1, 0]), 2).is_err());
    }
}
