//! The Stanley–Reisner presentation of the rational Chow ring of a toric
//! stack, reduction of monomials to square-free form, and integration on
//! complete simplicial stacky fans.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::class::{self, ChowClass, Exponents};
use crate::error::{Error, Result};
use crate::fan::StackyFan;
use crate::linalg;
use crate::Rational;

/// Generators of `I + J` for the Stanley–Reisner ring of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrPresentation {
    /// Row `k` holds `<e_k^*, v_rho>` for every ray `rho`, i.e. the linear
    /// form `sum_rho <e_k^*, v_rho> x_rho`.
    pub linear_relations: Vec<Vec<BigInt>>,
    /// Inclusion-minimal ray sets not contained in any cone.
    pub minimal_nonfaces: Vec<Vec<usize>>,
}

impl SrPresentation {
    /// The linear generators as classes.
    pub fn linear_classes(&self, nvars: usize) -> Vec<ChowClass> {
        self.linear_relations
            .iter()
            .map(|row| {
                let mut c = ChowClass::zero(nvars);
                for (i, a) in row.iter().enumerate() {
                    let mut e = vec![0; nvars];
                    e[i] = 1;
                    c.add_term(e, Rational::from_integer(a.clone()));
                }
                c
            })
            .collect()
    }

    /// The monomial generators as classes.
    pub fn monomial_classes(&self, nvars: usize) -> Vec<ChowClass> {
        self.minimal_nonfaces.iter().map(|s| ChowClass::product_of(nvars, s)).collect()
    }
}

pub fn sr_presentation(fan: &StackyFan) -> SrPresentation {
    let linear_relations = (0..fan.rank()).map(|k| fan.rays().iter().map(|v| v[k].clone()).collect()).collect();

    // Level-wise search: a set is a minimal nonface iff it is not in a cone
    // while all of its maximal proper subsets are.
    let mut minimal_nonfaces = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = BTreeSet::new();
    level.insert(Vec::new());
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for base in &level {
            let start = base.last().map_or(0, |&r| r + 1);
            for r in start..fan.num_rays() {
                let mut cand = base.clone();
                cand.push(r);
                let subsets_ok = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> =
                        cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    level.contains(&sub)
                });
                if !subsets_ok {
                    continue;
                }
                if fan.in_some_cone(&cand) {
                    next.insert(cand);
                } else {
                    minimal_nonfaces.push(cand);
                }
            }
        }
        level = next;
    }
    minimal_nonfaces.sort();
    SrPresentation { linear_relations, minimal_nonfaces }
}

/// True iff the support of the monomial lies in no cone, i.e. the monomial
/// lies in the Stanley–Reisner ideal.
pub fn monomial_is_zero(fan: &StackyFan, exponents: &[u32]) -> bool {
    !fan.in_some_cone(&class::support(exponents))
}

/// Membership of a Cox monomial in the irrelevant ideal, decided two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrrelevantMembership {
    /// Divisible by some generator `prod_{rho not in sigma} X_rho`.
    pub by_generators: bool,
    /// Lies in `(X_rho : rho in S)` for every ray set `S` contained in no cone.
    pub by_components: bool,
}

impl IrrelevantMembership {
    pub fn agree(&self) -> bool {
        self.by_generators == self.by_components
    }
}

/// Largest ray count for which the component route enumerates subsets.
pub const MAX_SUBSET_RAYS: usize = 24;

pub fn irrelevant_membership(fan: &StackyFan, exponents: &[u32]) -> Result<IrrelevantMembership> {
    let n = fan.num_rays();
    if exponents.len() != n {
        return Err(Error::VariableCount { expected: n, found: exponents.len() });
    }
    if n > MAX_SUBSET_RAYS {
        return Err(Error::TooManyRays { rays: n });
    }
    let present = |r: usize| exponents[r] > 0;

    let by_generators = fan.cones().any(|c| (0..n).all(|r| c.rays().contains(&r) || present(r)));

    let by_components = (1u32..(1 << n)).all(|mask| {
        let set: Vec<usize> = (0..n).filter(|&r| mask & (1 << r) != 0).collect();
        fan.in_some_cone(&set) || set.iter().any(|&r| present(r))
    });

    Ok(IrrelevantMembership { by_generators, by_components })
}

/// Which variable with exponent at least two the reduction eliminates first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum PivotRule {
    #[default]
    LowestIndex,
    HighestIndex,
    /// The first listed variable that qualifies; falls back to the lowest.
    Priority(Vec<usize>),
}

/// Which maximal cone containing the support is used as basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ConeRule {
    /// Lexicographically smallest sorted ray set.
    #[default]
    LexFirst,
    LexLast,
    /// The candidate at this position, modulo the number of candidates.
    Nth(usize),
}

/// Choices made by the self-intersection recursion. The reduced
/// representative depends on them; its class does not.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TieBreak {
    pub pivot: PivotRule,
    pub cone: ConeRule,
}

impl TieBreak {
    fn pivot(&self, e: &[u32]) -> usize {
        let eligible = |i: &usize| e[*i] >= 2;
        let lowest = || (0..e.len()).find(eligible).expect("monomial is not square-free");
        match &self.pivot {
            PivotRule::LowestIndex => lowest(),
            PivotRule::HighestIndex => (0..e.len()).rev().find(eligible).expect("monomial is not square-free"),
            PivotRule::Priority(order) => {
                order.iter().copied().find(|i| *i < e.len() && eligible(i)).unwrap_or_else(lowest)
            }
        }
    }

    fn cone<'a>(&self, candidates: &[&'a Vec<usize>]) -> &'a Vec<usize> {
        match self.cone {
            ConeRule::LexFirst => candidates[0],
            ConeRule::LexLast => candidates[candidates.len() - 1],
            ConeRule::Nth(k) => candidates[k % candidates.len()],
        }
    }
}

/// The relation `beta+ v_{rho+} + beta- v_{rho-} + sum_{rho in ridge} b_rho v_rho = 0`
/// across a ridge, normalized by `beta+ = 1` with `rho+` the neighbor of
/// smaller index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRelation {
    pub ridge: Vec<usize>,
    pub plus: usize,
    pub minus: usize,
    pub tau_plus: Vec<usize>,
    pub tau_minus: Vec<usize>,
    pub beta_plus: Rational,
    pub beta_minus: Rational,
    /// `(rho, b_rho)` for every ray of the ridge, in ridge order.
    pub coefficients: Vec<(usize, Rational)>,
}

impl WallRelation {
    pub fn coefficient(&self, ray: usize) -> Option<&Rational> {
        self.coefficients.iter().find(|(r, _)| *r == ray).map(|(_, b)| b)
    }
}

/// The rational Chow ring of a complete simplicial stacky fan.
#[derive(Debug)]
pub struct ChowRing<'f> {
    fan: &'f StackyFan,
    multiplicities: BTreeMap<Vec<usize>, BigInt>,
}

impl<'f> ChowRing<'f> {
    pub fn new(fan: &'f StackyFan) -> Result<Self> {
        fan.require_complete()?;
        fan.require_simplicial()?;
        let multiplicities =
            fan.cones().map(|c| Ok((c.rays().to_vec(), fan.stacky_multiplicity(c.rays())?))).collect::<Result<_>>()?;
        Ok(ChowRing { fan, multiplicities })
    }

    pub fn fan(&self) -> &'f StackyFan {
        self.fan
    }

    /// `D_{sigma}` for a cone of the fan.
    pub fn multiplicity(&self, cone: &[usize]) -> Result<&BigInt> {
        let mut key = cone.to_vec();
        key.sort_unstable();
        self.multiplicities.get(&key).ok_or(Error::ConeNotFound { cone: key })
    }

    fn check_vars(&self, class: &ChowClass) -> Result<()> {
        if class.nvars() != self.fan.num_rays() {
            return Err(Error::VariableCount { expected: self.fan.num_rays(), found: class.nvars() });
        }
        Ok(())
    }

    /// Square-free representative with the default tie-breaks.
    pub fn reduce_squarefree(&self, class: &ChowClass) -> Result<ChowClass> {
        self.reduce_with(class, &TieBreak::default())
    }

    pub fn reduce_with(&self, class: &ChowClass, tie: &TieBreak) -> Result<ChowClass> {
        self.check_vars(class)?;
        let mut reducer = Reducer { ring: self, tie, memo: HashMap::new() };
        let mut out = ChowClass::zero(class.nvars());
        for (e, c) in class.terms() {
            let reduced = reducer.monomial(e)?;
            out.add_scaled(&reduced, c);
        }
        Ok(out)
    }

    /// `phi(x_sigma) = [V(sigma)] / D_sigma`, returned as the cone and the
    /// coefficient. `None` is the zero class (support not a cone).
    pub fn phi_squarefree(&self, exponents: &[u32]) -> Result<Option<(Vec<usize>, Rational)>> {
        if exponents.len() != self.fan.num_rays() {
            return Err(Error::VariableCount { expected: self.fan.num_rays(), found: exponents.len() });
        }
        if !class::is_square_free(exponents) {
            let m = ChowClass::monomial(exponents.to_vec(), Rational::one());
            return Err(Error::NotSquareFree { monomial: m.to_string() });
        }
        let support = class::support(exponents);
        Ok(self.multiplicities.get(&support).map(|d| (support, Rational::new(BigInt::one(), d.clone()))))
    }

    /// Degree of a class of pure degree `d = rank`.
    pub fn integrate(&self, class: &ChowClass) -> Result<Rational> {
        self.integrate_with(class, &TieBreak::default())
    }

    pub fn integrate_with(&self, class: &ChowClass, tie: &TieBreak) -> Result<Rational> {
        self.check_vars(class)?;
        let d = self.fan.rank();
        if let Some(&found) = class.degrees().iter().find(|&&k| k != d) {
            return Err(Error::WrongDegree { expected: d, found });
        }
        let reduced = self.reduce_with(class, tie)?;
        let mut total = Rational::zero();
        for (e, c) in reduced.terms() {
            if let Some((_, w)) = self.phi_squarefree(e)? {
                total += c * w;
            }
        }
        Ok(total)
    }

    /// Zero test in `SR ⊗ Q` via the perfect pairing with square-free cone
    /// monomials of complementary degree.
    pub fn is_zero(&self, class: &ChowClass) -> Result<bool> {
        self.check_vars(class)?;
        let d = self.fan.rank();
        let n = self.fan.num_rays();
        for k in class.degrees() {
            if k > d {
                continue;
            }
            let part = class.homogeneous_part(k);
            if k == 0 {
                return Ok(false);
            }
            for cone in self.fan.cones().filter(|c| c.dim() == d - k) {
                let dual = ChowClass::product_of(n, cone.rays());
                if !self.integrate(&(&part * &dual))?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn wall_relation(&self, ridge: &[usize]) -> Result<WallRelation> {
        let mut ridge = ridge.to_vec();
        ridge.sort_unstable();
        let d = self.fan.rank();
        let neighbors: Vec<&Vec<usize>> =
            self.fan.max_cones().iter().filter(|m| ridge.iter().all(|r| m.contains(r))).collect();
        let is_ridge = self.fan.cone(&ridge).is_some_and(|c| c.dim() + 1 == d);
        if !is_ridge || neighbors.len() != 2 {
            return Err(Error::NotARidge { ridge, count: neighbors.len() });
        }
        let extra = |m: &Vec<usize>| *m.iter().find(|r| !ridge.contains(r)).expect("maximal cone extends ridge");
        let (a, b) = (extra(neighbors[0]), extra(neighbors[1]));
        let (plus, minus, tau_plus, tau_minus) = if a < b {
            (a, b, neighbors[0].clone(), neighbors[1].clone())
        } else {
            (b, a, neighbors[1].clone(), neighbors[0].clone())
        };

        let mut basis: Vec<&[BigInt]> = vec![self.fan.ray(minus)];
        basis.extend(ridge.iter().map(|&r| self.fan.ray(r)));
        let b = linalg::solve_unique(&basis, self.fan.ray(plus))?;
        Ok(WallRelation {
            plus,
            minus,
            tau_plus,
            tau_minus,
            beta_plus: Rational::one(),
            beta_minus: b[0].clone(),
            coefficients: ridge.iter().copied().zip(b[1..].iter().cloned()).collect(),
            ridge,
        })
    }

    /// `sum over maximal cones of 1 / D_sigma`.
    pub fn euler(&self) -> Rational {
        self.fan.max_cones().iter().map(|c| Rational::new(BigInt::one(), self.multiplicities[c].clone())).sum()
    }
}

struct Reducer<'r, 'f> {
    ring: &'r ChowRing<'f>,
    tie: &'r TieBreak,
    memo: HashMap<Exponents, ChowClass>,
}

impl Reducer<'_, '_> {
    fn monomial(&mut self, e: &Exponents) -> Result<ChowClass> {
        if let Some(hit) = self.memo.get(e) {
            return Ok(hit.clone());
        }
        let fan = self.ring.fan;
        let n = e.len();
        let support = class::support(e);
        let result = if !fan.in_some_cone(&support) {
            ChowClass::zero(n)
        } else if class::is_square_free(e) {
            ChowClass::monomial(e.clone(), Rational::one())
        } else {
            let pivot = self.tie.pivot(e);
            let candidates: Vec<&Vec<usize>> =
                fan.max_cones().iter().filter(|m| support.iter().all(|r| m.contains(r))).collect();
            if candidates.is_empty() {
                return Err(Error::Internal(format!("no maximal cone contains support {support:?}")));
            }
            let sigma = self.tie.cone(&candidates);
            let position = sigma.iter().position(|&r| r == pivot).expect("pivot lies in its cone");
            let basis: Vec<&[BigInt]> = sigma.iter().map(|&r| fan.ray(r)).collect();

            let mut out = ChowClass::zero(n);
            for rho in (0..n).filter(|r| !sigma.contains(r)) {
                let mut extended = support.clone();
                extended.push(rho);
                if !fan.in_some_cone(&extended) {
                    continue;
                }
                let b = linalg::solve_unique(&basis, fan.ray(rho))?;
                let coefficient = &b[position];
                if coefficient.is_zero() {
                    continue;
                }
                let mut next = e.clone();
                next[pivot] -= 1;
                next[rho] += 1;
                let reduced = self.monomial(&next)?;
                out.add_scaled(&reduced, coefficient);
            }
            out
        };
        self.memo.insert(e.clone(), result.clone());
        Ok(result)
    }
}

pub fn reduce_squarefree(fan: &StackyFan, class: &ChowClass) -> Result<ChowClass> {
    ChowRing::new(fan)?.reduce_squarefree(class)
}

pub fn phi_squarefree(fan: &StackyFan, exponents: &[u32]) -> Result<Option<(Vec<usize>, Rational)>> {
    ChowRing::new(fan)?.phi_squarefree(exponents)
}

pub fn integrate_simplicial(fan: &StackyFan, class: &ChowClass) -> Result<Rational> {
    ChowRing::new(fan)?.integrate(class)
}

pub fn wall_relation(fan: &StackyFan, ridge: &[usize]) -> Result<WallRelation> {
    ChowRing::new(fan)?.wall_relation(ridge)
}

pub fn euler_simplicial(fan: &StackyFan) -> Result<Rational> {
    Ok(ChowRing::new(fan)?.euler())
}
