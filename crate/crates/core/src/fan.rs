//! Stacky fans: validation, face structure, multiplicities and star
//! subdivision.
//!
//! A fan is given by its rank `d`, one distinguished lattice vector per ray
//! and a list of cones, each a set of ray indices. Only the maximal cones need
//! to be listed; the face closure is computed on construction. All geometric
//! tests are exact and brute force: supporting hyperplanes of a cone are found
//! by trying every `(dim - 1)`-subset of its rays.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::artin::PullbackMap;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::Rational;

/// A cone of a fan together with its cached face data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    rays: Vec<usize>,
    dim: usize,
    facets: Vec<Vec<usize>>,
}

impl Cone {
    /// Sorted ray indices.
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facets as sorted ray-index sets. The facet of a ray is the origin,
    /// represented by the empty set.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }
}

/// Geometry of a finitely generated cone, in ambient coordinates.
#[derive(Debug, Clone)]
struct ConeGeometry {
    dim: usize,
    /// `(ray set, inward normal)` for every facet.
    facets: Vec<(Vec<usize>, Vec<Rational>)>,
    /// Functionals cutting out the linear span.
    equalities: Vec<Vec<Rational>>,
}

impl ConeGeometry {
    /// Smallest face containing the given rays, as a ray set.
    fn face_closure(&self, all: &[usize], subset: &[usize]) -> Vec<usize> {
        let mut closure: BTreeSet<usize> = all.iter().copied().collect();
        for (facet, _) in &self.facets {
            if subset.iter().all(|r| facet.contains(r)) {
                closure.retain(|r| facet.contains(r));
            }
        }
        closure.into_iter().collect()
    }
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn dot(f: &[Rational], v: &[BigInt]) -> Rational {
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn dot_q(f: &[Rational], v: &[Rational]) -> Rational {
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// True if `u` and `v` are positive multiples of each other.
fn same_ray(u: &[BigInt], v: &[BigInt]) -> bool {
    linalg::rank(&[u, v]) == 1 && linalg::pairing(u, v).is_positive()
}

fn same_direction(u: &[Rational], v: &[BigInt]) -> bool {
    let uq = linalg::clear_denominators(u);
    same_ray(&uq, v)
}

fn cone_geometry(rank: usize, rays: &[Vec<BigInt>], cone: &[usize]) -> Result<ConeGeometry> {
    let vecs: Vec<&[BigInt]> = cone.iter().map(|&i| rays[i].as_slice()).collect();
    let dim = linalg::rank(&vecs);
    let span_rows: Vec<Vec<Rational>> = vecs.iter().map(|v| to_rational(v)).collect();
    let equalities = linalg::kernel(&span_rows, rank);

    if dim <= 1 {
        if cone.len() > 1 {
            return Err(Error::NotPointed { cone: cone.to_vec() });
        }
        let facets = match cone.first() {
            Some(&r) => vec![(Vec::new(), to_rational(&rays[r]))],
            None => Vec::new(),
        };
        return Ok(ConeGeometry { dim, facets, equalities });
    }

    let mut facets: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    for subset in combinations(cone.len(), dim - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| span_rows[i].clone()).collect();
        if linalg::rank_rational(&rows) != dim - 1 {
            continue;
        }
        let Some(normal) = linalg::kernel(&rows, rank).into_iter().find(|f| vecs.iter().any(|v| !dot(f, v).is_zero()))
        else {
            continue;
        };
        let values: Vec<Rational> = vecs.iter().map(|v| dot(&normal, v)).collect();
        let normal = if values.iter().all(|x| !x.is_negative()) {
            normal
        } else if values.iter().all(|x| !x.is_positive()) {
            normal.into_iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let zero_set: Vec<usize> = cone.iter().zip(&values).filter(|(_, x)| x.is_zero()).map(|(&r, _)| r).collect();
        if !facets.iter().any(|(z, _)| *z == zero_set) {
            facets.push((zero_set, normal));
        }
    }
    facets.sort();

    let mut rows: Vec<Vec<Rational>> = facets.iter().map(|(_, n)| n.clone()).collect();
    rows.extend(equalities.iter().cloned());
    if linalg::rank_rational(&rows) != rank {
        return Err(Error::NotPointed { cone: cone.to_vec() });
    }
    for &r in cone {
        let mut rows: Vec<Vec<Rational>> =
            facets.iter().filter(|(z, _)| z.contains(&r)).map(|(_, n)| n.clone()).collect();
        rows.extend(equalities.iter().cloned());
        if linalg::rank_rational(&rows) != rank - 1 {
            return Err(Error::NotExtremal { cone: cone.to_vec(), ray: r });
        }
    }
    Ok(ConeGeometry { dim, facets, equalities })
}

/// Extreme rays of the pointed cone `{x : ineq(x) >= 0, eq(x) = 0}`.
fn extreme_rays(rank: usize, ineq: &[Vec<Rational>], eq: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let eq_rank = linalg::rank_rational(eq);
    if eq_rank >= rank {
        return Vec::new();
    }
    let need = rank - 1 - eq_rank;
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(ineq.len(), need) {
        let mut rows: Vec<Vec<Rational>> = eq.to_vec();
        rows.extend(subset.iter().map(|&i| ineq[i].clone()));
        if linalg::rank_rational(&rows) != rank - 1 {
            continue;
        }
        let kernel = linalg::kernel(&rows, rank);
        let x = &kernel[0];
        let candidate = if ineq.iter().all(|f| !dot_q(f, x).is_negative()) {
            x.clone()
        } else if ineq.iter().all(|f| !dot_q(f, x).is_positive()) {
            x.iter().map(|c| -c).collect()
        } else {
            continue;
        };
        let primitive = linalg::clear_denominators(&candidate);
        if !found.iter().any(|f| linalg::clear_denominators(f) == primitive) {
            found.push(candidate);
        }
    }
    found
}

/// A stacky fan `(Z^d, Sigma, {v_rho})` with torsion-free lattice.
#[derive(Debug, Clone)]
pub struct StackyFan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
    cones: BTreeMap<Vec<usize>, Cone>,
}

impl PartialEq for StackyFan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for StackyFan {}

impl StackyFan {
    /// Validates the fan axioms and builds the face closure.
    ///
    /// `cones` may list any cones of the fan; cones contained in another
    /// listed cone are dropped from the maximal-cone list.
    pub fn new(rank: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        for (i, v) in rays.iter().enumerate() {
            if v.len() != rank {
                return Err(Error::RayLength { ray: i, len: v.len(), rank });
            }
            if v.iter().all(Zero::is_zero) {
                return Err(Error::ZeroRay { ray: i });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if same_ray(&rays[i], &rays[j]) {
                    return Err(Error::DuplicateRay { first: i, second: j });
                }
            }
        }

        let mut listed: Vec<Vec<usize>> = Vec::new();
        for cone in cones {
            if cone.is_empty() {
                return Err(Error::EmptyCone { cone });
            }
            if let Some(&r) = cone.iter().find(|&&r| r >= rays.len()) {
                return Err(Error::RayOutOfRange { cone, ray: r });
            }
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedRay { cone, ray: w[0] });
            }
            if !listed.contains(&sorted) {
                listed.push(sorted);
            }
        }
        if let Some(r) = (0..rays.len()).find(|r| !listed.iter().any(|c| c.contains(r))) {
            return Err(Error::UnusedRay { ray: r });
        }

        let geometry: Vec<ConeGeometry> =
            listed.iter().map(|c| cone_geometry(rank, &rays, c)).collect::<Result<_>>()?;

        for a in 0..listed.len() {
            for b in a + 1..listed.len() {
                Self::check_intersection(rank, &rays, (&listed[a], &geometry[a]), (&listed[b], &geometry[b]))?;
            }
        }

        let mut max_cones: Vec<Vec<usize>> =
            listed.iter().filter(|c| !listed.iter().any(|o| o.len() > c.len() && is_subset(c, o))).cloned().collect();
        max_cones.sort();

        let mut cones = BTreeMap::new();
        let mut pending: Vec<Vec<usize>> = max_cones.clone();
        while let Some(c) = pending.pop() {
            if cones.contains_key(&c) {
                continue;
            }
            let g = match listed.iter().position(|l| *l == c) {
                Some(i) => geometry[i].clone(),
                None => cone_geometry(rank, &rays, &c)?,
            };
            let facets: Vec<Vec<usize>> = g.facets.iter().map(|(z, _)| z.clone()).collect();
            pending.extend(facets.iter().filter(|f| !cones.contains_key(*f)).cloned());
            cones.insert(c.clone(), Cone { rays: c, dim: g.dim, facets });
        }

        Ok(StackyFan { rank, rays, max_cones, cones })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rank: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Self> {
        let rays = rays.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(rank, rays, cones.to_vec())
    }

    fn check_intersection(
        rank: usize,
        rays: &[Vec<BigInt>],
        (a, ga): (&[usize], &ConeGeometry),
        (b, gb): (&[usize], &ConeGeometry),
    ) -> Result<()> {
        let bad = || Error::BadIntersection { first: a.to_vec(), second: b.to_vec() };
        let common: Vec<usize> = a.iter().copied().filter(|r| b.contains(r)).collect();

        let ineq: Vec<Vec<Rational>> = ga.facets.iter().chain(&gb.facets).map(|(_, n)| n.clone()).collect();
        let eq: Vec<Vec<Rational>> = ga.equalities.iter().chain(&gb.equalities).cloned().collect();
        for x in extreme_rays(rank, &ineq, &eq) {
            if !common.iter().any(|&r| same_direction(&x, &rays[r])) {
                return Err(bad());
            }
        }
        if ga.face_closure(a, &common) != common || gb.face_closure(b, &common) != common {
            return Err(bad());
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    /// Maximal cones, each sorted, in lexicographic order.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Every cone of the fan, including the origin (empty ray set).
    pub fn cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.values()
    }

    pub fn cone(&self, rays: &[usize]) -> Option<&Cone> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.cones.get(&key)
    }

    fn require_cone(&self, rays: &[usize]) -> Result<&Cone> {
        self.cone(rays).ok_or_else(|| Error::ConeNotFound { cone: rays.to_vec() })
    }

    /// True if the given rays all lie in one cone of the fan.
    pub fn in_some_cone(&self, rays: &[usize]) -> bool {
        self.max_cones.iter().any(|c| is_subset(rays, c))
    }

    pub fn facets(&self, cone: &[usize]) -> Result<&[Vec<usize>]> {
        Ok(self.require_cone(cone)?.facets())
    }

    /// Cones whose ray count exceeds their dimension, smallest dimension first.
    pub fn nonsimplicial_cones(&self) -> Vec<&Cone> {
        let mut ns: Vec<&Cone> = self.cones().filter(|c| !c.is_simplicial()).collect();
        ns.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        ns
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones().all(Cone::is_simplicial)
    }

    /// Complete iff the fan is pure of full dimension and every facet of a
    /// maximal cone lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        let d = self.rank;
        let full = self.max_cones.iter().all(|c| self.cones[c].dim == d);
        full && self.max_cones.iter().all(|c| {
            self.cones[c].facets.iter().all(|f| self.max_cones.iter().filter(|m| is_subset(f, m)).count() == 2)
        })
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::NotComplete)
        }
    }

    pub(crate) fn require_simplicial(&self) -> Result<()> {
        match self.nonsimplicial_cones().first() {
            None => Ok(()),
            Some(c) => Err(Error::NotSimplicial { cone: c.rays.clone() }),
        }
    }

    /// Matrix whose columns are the distinguished vectors of `cone`.
    pub fn ray_matrix(&self, cone: &[usize]) -> IntMatrix {
        let cols: Vec<&[BigInt]> = cone.iter().map(|&i| self.ray(i)).collect();
        IntMatrix::from_columns(&cols).unwrap_or_else(|_| IntMatrix::zeros(self.rank, 0))
    }

    /// Order of `N_sigma / Z<v_1, ..., v_s>` for a simplicial cone `sigma`.
    pub fn stacky_multiplicity(&self, cone: &[usize]) -> Result<BigInt> {
        let c = self.require_cone(cone)?;
        if !c.is_simplicial() {
            return Err(Error::NotSimplicial { cone: c.rays.clone() });
        }
        if c.rays.is_empty() {
            return Ok(BigInt::one());
        }
        Ok(linalg::elementary_divisors(&self.ray_matrix(&c.rays)).into_iter().product())
    }

    /// Stacky star subdivision at `cone`, adding the ray `v_0 = sum of v_rho`
    /// with index `num_rays()`.
    ///
    /// Each cone `tau` containing `cone` is replaced by the cones spanned by
    /// `v_0` and the facets of `tau` that do not contain `cone`.
    pub fn star_subdivide(&self, cone: &[usize]) -> Result<(StackyFan, PullbackMap)> {
        let sigma = self.require_cone(cone)?.rays.clone();
        if sigma.len() < 2 || self.cones[&sigma].dim < 2 {
            return Err(Error::ConeIsRay { cone: sigma });
        }
        let new_index = self.rays.len();
        let mut v0 = vec![BigInt::zero(); self.rank];
        for &r in &sigma {
            for (a, b) in v0.iter_mut().zip(&self.rays[r]) {
                *a += b;
            }
        }

        let mut max_cones: Vec<Vec<usize>> = Vec::new();
        for tau in &self.max_cones {
            if !is_subset(&sigma, tau) {
                max_cones.push(tau.clone());
                continue;
            }
            for facet in &self.cones[tau].facets {
                if !is_subset(&sigma, facet) {
                    let mut c = facet.clone();
                    c.push(new_index);
                    max_cones.push(c);
                }
            }
        }
        let mut rays = self.rays.clone();
        rays.push(v0);
        let fan = StackyFan::new(self.rank, rays, max_cones)?;
        let map = PullbackMap::star(self.num_rays(), &sigma);
        Ok((fan, map))
    }
}

/// Summary of a successfully validated fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub rank: usize,
    pub rays: usize,
    pub max_cones: usize,
    pub cones: usize,
    pub complete: bool,
    pub simplicial: bool,
}

/// Checks every fan axiom, returning the first violation as a named error.
pub fn validate(rank: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<ValidationReport> {
    let fan = StackyFan::new(rank, rays, cones)?;
    Ok(ValidationReport::of(&fan))
}

impl ValidationReport {
    pub fn of(fan: &StackyFan) -> Self {
        ValidationReport {
            rank: fan.rank(),
            rays: fan.num_rays(),
            max_cones: fan.max_cones().len(),
            // The origin is not counted.
            cones: fan.cones().filter(|c| !c.rays().is_empty()).count(),
            complete: fan.is_complete(),
            simplicial: fan.is_simplicial(),
        }
    }
}
