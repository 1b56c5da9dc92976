//! Integration on non-simplicial stacky fans by pulling back along a
//! simplicialization, and Euler characteristics of toric Artin stacks.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chow::ChowRing;
use crate::class::{self, ChowClass};
use crate::error::{Error, Result};
use crate::fan::StackyFan;
use crate::linalg;
use crate::Rational;

/// The ring map `f^*: SR(source) -> SR(target)` induced by a sequence of
/// stacky star subdivisions, stored as the image of each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackMap {
    target_rays: usize,
    /// `images[rho]` is a sorted list of `(target generator, coefficient)`.
    images: Vec<Vec<(usize, i64)>>,
}

impl PullbackMap {
    pub fn identity(n: usize) -> Self {
        PullbackMap { target_rays: n, images: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    /// The elementary map of a star subdivision of a fan with `n` rays at
    /// `cone`: `x_rho -> y_rho + y_n` for rays of the cone, `x_rho -> y_rho`
    /// otherwise.
    pub fn star(n: usize, cone: &[usize]) -> Self {
        let images = (0..n).map(|i| if cone.contains(&i) { vec![(i, 1), (n, 1)] } else { vec![(i, 1)] }).collect();
        PullbackMap { target_rays: n + 1, images }
    }

    pub fn source_rays(&self) -> usize {
        self.images.len()
    }

    pub fn target_rays(&self) -> usize {
        self.target_rays
    }

    pub fn image(&self, ray: usize) -> &[(usize, i64)] {
        &self.images[ray]
    }

    /// Applies `self` first, then `next`.
    pub fn then(&self, next: &PullbackMap) -> Result<PullbackMap> {
        if self.target_rays != next.source_rays() {
            return Err(Error::DimensionMismatch { expected: self.target_rays, found: next.source_rays() });
        }
        let images = self
            .images
            .iter()
            .map(|img| {
                let mut acc = vec![0i64; next.target_rays];
                for &(j, c) in img {
                    for &(k, d) in next.image(j) {
                        acc[k] += c * d;
                    }
                }
                acc.into_iter().enumerate().filter(|(_, c)| *c != 0).collect()
            })
            .collect();
        Ok(PullbackMap { target_rays: next.target_rays, images })
    }

    pub fn image_class(&self, ray: usize) -> ChowClass {
        let mut c = ChowClass::zero(self.target_rays);
        for &(j, a) in &self.images[ray] {
            let mut e = vec![0; self.target_rays];
            e[j] = 1;
            c.add_term(e, Rational::from_integer(a.into()));
        }
        c
    }

    /// Substitutes every generator by its image and expands.
    pub fn apply(&self, class: &ChowClass) -> Result<ChowClass> {
        self.apply_filtered(class, |_| true)
    }

    /// As [`apply`](Self::apply), dropping target monomials rejected by
    /// `keep` during expansion; see [`ChowClass::mul_filtered`] for the
    /// requirement on `keep`.
    pub fn apply_filtered(&self, class: &ChowClass, mut keep: impl FnMut(&[u32]) -> bool) -> Result<ChowClass> {
        if class.nvars() != self.source_rays() {
            return Err(Error::VariableCount { expected: self.source_rays(), found: class.nvars() });
        }
        let images: Vec<ChowClass> = (0..self.source_rays()).map(|r| self.image_class(r)).collect();
        let mut out = ChowClass::zero(self.target_rays);
        for (e, c) in class.terms() {
            let mut term = ChowClass::constant(self.target_rays, c.clone());
            for (r, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    term = term.mul_filtered(&images[r], &mut keep);
                }
            }
            out.add_scaled(&term, &Rational::one());
        }
        Ok(out)
    }
}

pub fn pullback(map: &PullbackMap, class: &ChowClass) -> Result<ChowClass> {
    map.apply(class)
}

/// One stacky star subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionStep {
    pub cone: Vec<usize>,
    pub new_ray_index: usize,
    pub new_ray: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplicialization {
    pub target: StackyFan,
    pub map: PullbackMap,
    pub steps: Vec<SubdivisionStep>,
}

impl Simplicialization {
    /// Re-applies the recorded steps to `source`.
    pub fn replay(&self, source: &StackyFan) -> Result<StackyFan> {
        let mut fan = source.clone();
        for step in &self.steps {
            fan = fan.star_subdivide(&step.cone)?.0;
        }
        Ok(fan)
    }
}

/// Star-subdivides nonsimplicial cones until the fan is simplicial, always
/// picking the nonsimplicial cone of least dimension and, among those, the
/// lexicographically smallest ray set.
pub fn simplicialize(fan: &StackyFan) -> Result<Simplicialization> {
    let mut current = fan.clone();
    let mut map = PullbackMap::identity(fan.num_rays());
    let mut steps = Vec::new();
    while let Some(cone) = current.nonsimplicial_cones().first().map(|c| c.rays().to_vec()) {
        let (next, step_map) = current.star_subdivide(&cone)?;
        let new_ray_index = current.num_rays();
        steps.push(SubdivisionStep { cone, new_ray_index, new_ray: next.ray(new_ray_index).to_vec() });
        map = map.then(&step_map)?;
        current = next;
    }
    Ok(Simplicialization { target: current, map, steps })
}

fn check_top_degree(fan: &StackyFan, class: &ChowClass) -> Result<()> {
    if class.nvars() != fan.num_rays() {
        return Err(Error::VariableCount { expected: fan.num_rays(), found: class.nvars() });
    }
    let d = fan.rank();
    match class.degrees().into_iter().find(|&k| k != d) {
        Some(found) => Err(Error::WrongDegree { expected: d, found }),
        None => Ok(()),
    }
}

/// `int_Sigma alpha := int_{Sigma'} f^* alpha` over the simplicialization.
pub fn integrate_artin(fan: &StackyFan, class: &ChowClass) -> Result<Rational> {
    fan.require_complete()?;
    check_top_degree(fan, class)?;
    let simp = simplicialize(fan)?;
    let target = &simp.target;
    let pulled = simp.map.apply_filtered(class, |e| target.in_some_cone(&class::support(e)))?;
    ChowRing::new(target)?.integrate(&pulled)
}

/// Degree of `c_d` of the tangent bundle stack: the pullback of
/// `prod_rho (1 + x_rho)` integrated over the simplicialization.
pub fn euler_artin(fan: &StackyFan) -> Result<Rational> {
    fan.require_complete()?;
    let d = fan.rank();
    let simp = simplicialize(fan)?;
    let target = &simp.target;
    let n = target.num_rays();
    let keep = |e: &[u32]| class::degree(e) <= d && target.in_some_cone(&class::support(e));
    let mut chern = ChowClass::one(n);
    for rho in 0..fan.num_rays() {
        let factor = &ChowClass::one(n) + &simp.map.image_class(rho);
        chern = chern.mul_filtered(&factor, keep);
    }
    ChowRing::new(target)?.integrate(&chern.homogeneous_part(d))
}

/// Change of the Euler characteristic under star subdivision at `cone`,
/// checked against the Euler characteristics before and after.
///
/// Each maximal cone `tau` containing the `s` rays of `cone` is replaced by
/// `s` cones of the same multiplicity, so the change is the sum of
/// `(s - 1) / D_tau` over those `tau`. For a maximal cone this is
/// `(s - 1) / D_sigma`.
pub fn subdivision_euler_delta(fan: &StackyFan, cone: &[usize]) -> Result<Rational> {
    let ring = ChowRing::new(fan)?;
    let c = fan.cone(cone).ok_or_else(|| Error::ConeNotFound { cone: cone.to_vec() })?;
    let s = c.rays().len();
    if s < 2 {
        return Ok(Rational::zero());
    }
    let mut delta = Rational::zero();
    for tau in fan.max_cones().iter().filter(|t| c.rays().iter().all(|r| t.contains(r))) {
        delta += Rational::new(BigInt::from(s - 1), ring.multiplicity(tau)?.clone());
    }
    let (sub, _) = fan.star_subdivide(c.rays())?;
    let recomputed = ChowRing::new(&sub)?.euler() - ring.euler();
    if recomputed != delta {
        return Err(Error::Internal(format!(
            "Euler characteristic changed by {recomputed}, expected {delta} for cone {:?}",
            c.rays()
        )));
    }
    Ok(delta)
}

/// One `(s - 3) / D_tau` summand for a new maximal cone `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewConeTerm {
    pub cone: Vec<usize>,
    pub multiplicity: BigInt,
    pub value: Rational,
}

/// One summand per ray `rho` of a subdivided cone `sigma`:
/// `weight * b_{sigma,rho} / (beta+ D_{tau+})` with
/// `weight = C(s-1, 2) - C(s, 3) <m, v_rho> / <m, v_sigma>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayTerm {
    pub ray: usize,
    pub plus: usize,
    pub minus: usize,
    pub b_sigma: Rational,
    pub beta_plus: Rational,
    pub multiplicity_plus: BigInt,
    pub weight: Rational,
    pub value: Rational,
}

/// The correction contributed by one nonsimplicial cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeCorrection {
    pub cone: Vec<usize>,
    pub new_ray_index: usize,
    pub new_ray: Vec<BigInt>,
    /// The dual vector `m_sigma` used to eliminate the triple self-intersection.
    pub dual: Vec<BigInt>,
    pub new_cone_terms: Vec<NewConeTerm>,
    pub ray_terms: Vec<RayTerm>,
    pub total: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Euler3dReport {
    pub simplicial_euler: Rational,
    pub corrections: Vec<ConeCorrection>,
    pub euler: Rational,
}

/// The first standard dual basis vector pairing nonzero with `v`.
pub fn default_dual(v: &[BigInt]) -> Vec<BigInt> {
    let i = v.iter().position(|x| !x.is_zero()).expect("interior vector is nonzero");
    (0..v.len()).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }).collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Closed-form Euler characteristic of a complete rank-3 stacky fan.
pub fn euler_artin_3d(fan: &StackyFan) -> Result<Euler3dReport> {
    euler_artin_3d_with(fan, |_, v| default_dual(v))
}

/// As [`euler_artin_3d`], with `dual(sigma, v_sigma)` choosing `m_sigma`.
pub fn euler_artin_3d_with(
    fan: &StackyFan,
    mut dual: impl FnMut(&[usize], &[BigInt]) -> Vec<BigInt>,
) -> Result<Euler3dReport> {
    if fan.rank() != 3 {
        return Err(Error::WrongRank { expected: 3, found: fan.rank() });
    }
    fan.require_complete()?;
    let simp = simplicialize(fan)?;
    let ring = ChowRing::new(&simp.target)?;
    let simplicial_euler = ring.euler();

    let mut corrections = Vec::new();
    for step in &simp.steps {
        let sigma = &step.cone;
        let k = step.new_ray_index;
        let v_sigma = &step.new_ray;
        let s = sigma.len();

        let m = dual(sigma, v_sigma);
        if m.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: m.len() });
        }
        let m_sigma = linalg::pairing(&m, v_sigma);
        if m_sigma.is_zero() {
            return Err(Error::DegenerateDual { cone: sigma.clone(), dual: m.iter().map(|x| x.to_string()).collect() });
        }

        let mut new_cone_terms = Vec::new();
        for tau in simp.target.max_cones().iter().filter(|c| c.contains(&k)) {
            let d = ring.multiplicity(tau)?.clone();
            let value = Rational::new(BigInt::from(s) - 3, d.clone());
            new_cone_terms.push(NewConeTerm { cone: tau.clone(), multiplicity: d, value });
        }

        let mut ray_terms = Vec::new();
        for &rho in sigma {
            let wall = ring.wall_relation(&[rho, k])?;
            let b_sigma = wall.coefficient(k).cloned().expect("new ray lies on the ridge");
            let d_plus = ring.multiplicity(&wall.tau_plus)?.clone();
            let ratio = Rational::new(linalg::pairing(&m, simp.target.ray(rho)), m_sigma.clone());
            let weight = Rational::from_integer(binomial(s - 1, 2)) - Rational::from_integer(binomial(s, 3)) * ratio;
            let value = &weight * &b_sigma / (&wall.beta_plus * Rational::from_integer(d_plus.clone()));
            ray_terms.push(RayTerm {
                ray: rho,
                plus: wall.plus,
                minus: wall.minus,
                b_sigma,
                beta_plus: wall.beta_plus,
                multiplicity_plus: d_plus,
                weight,
                value,
            });
        }

        let total = new_cone_terms.iter().map(|t| &t.value).chain(ray_terms.iter().map(|t| &t.value)).sum();
        corrections.push(ConeCorrection {
            cone: sigma.clone(),
            new_ray_index: k,
            new_ray: v_sigma.clone(),
            dual: m,
            new_cone_terms,
            ray_terms,
            total,
        });
    }

    let euler = corrections.iter().map(|c| &c.total).sum::<Rational>() + &simplicial_euler;
    Ok(Euler3dReport { simplicial_euler, corrections, euler })
}
