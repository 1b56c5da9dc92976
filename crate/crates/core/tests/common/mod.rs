//! Independent reference computations and random fan generators.
//!
//! Nothing here calls the crate's linear algebra or Chow ring code: the
//! oracles work from ray vectors and maximal cones alone.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_artin::StackyFan;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A fan given by plain data.
#[derive(Debug, Clone)]
pub struct FanData {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanData {
    pub fn build(&self) -> StackyFan {
        StackyFan::from_i64(self.rank, &self.rays, &self.cones).expect("generated fan is valid")
    }

    pub fn from_fan(fan: &StackyFan) -> FanData {
        use num_traits::ToPrimitive;
        FanData {
            rank: fan.rank(),
            rays: fan.rays().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect(),
            cones: fan.max_cones().to_vec(),
        }
    }
}

// Polynomials -------------------------------------------------------------

pub type Poly = BTreeMap<Vec<u32>, Q>;

pub fn var(n: usize, i: usize) -> Poly {
    let mut e = vec![0; n];
    e[i] = 1;
    Poly::from([(e, Q::one())])
}

pub fn constant(n: usize, c: Q) -> Poly {
    Poly::from([(vec![0; n], c)])
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        let slot = out.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            out.remove(e);
        }
    }
    out
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e.clone()).or_insert_with(Q::zero);
            *slot += ca * cb;
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

/// All exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            go(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, d, &mut Vec::new(), &mut out);
    }
    out
}

// Integer matrices ----------------------------------------------------------

/// Determinant by the permutation expansion.
pub fn leibniz_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = BigInt::one();
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        if inversions % 2 == 1 {
            term = -term;
        }
        total += term;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Gcd of all `k x k` minors.
pub fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = g.gcd(&leibniz_det(&sub));
        }
    }
    g
}

/// Nonzero invariant factors `g_k / g_{k-1}` from gcds of minors.
pub fn divisors_from_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let bound = m.len().min(m.first().map_or(0, |r| r.len()));
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=bound {
        let g = minor_gcd(m, k);
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// `d x s` matrix with the given rays as columns.
pub fn columns(rays: &[Vec<i64>], cone: &[usize]) -> Vec<Vec<BigInt>> {
    let d = rays[0].len();
    (0..d).map(|k| cone.iter().map(|&r| BigInt::from(rays[r][k])).collect()).collect()
}

/// Index of the sublattice spanned by the cone's rays in its saturation.
pub fn multiplicity(rays: &[Vec<i64>], cone: &[usize]) -> BigInt {
    if cone.is_empty() {
        return BigInt::one();
    }
    minor_gcd(&columns(rays, cone), cone.len())
}

// Rational linear algebra ----------------------------------------------------

/// Basis of `{ x : rows * x = 0 }`.
pub fn nullspace(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}

// Integration -----------------------------------------------------------------

/// The degree map of a complete simplicial fan, found as the unique linear
/// functional on degree-`d` monomials killing the Stanley–Reisner relations,
/// normalized by `x_sigma -> 1 / D_sigma` on one maximal cone.
pub struct IntegrationOracle {
    n: usize,
    d: usize,
    index: HashMap<Vec<u32>, usize>,
    values: Vec<Q>,
}

impl IntegrationOracle {
    pub fn new(data: &FanData) -> Self {
        let n = data.rays.len();
        let d = data.rank;
        let faces: BTreeSet<Vec<usize>> = data
            .cones
            .iter()
            .flat_map(|c| {
                (0u64..1 << c.len()).map(move |m| (0..c.len()).filter(|i| m >> i & 1 == 1).map(|i| c[i]).collect())
            })
            .collect();
        let is_face = |e: &[u32]| faces.contains(&(0..n).filter(|&i| e[i] > 0).collect::<Vec<_>>());

        let unknowns: Vec<Vec<u32>> = monomials(n, d as u32).into_iter().filter(|e| is_face(e)).collect();
        let index: HashMap<Vec<u32>, usize> = unknowns.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

        let mut rows = Vec::new();
        for base in monomials(n, d as u32 - 1) {
            for k in 0..d {
                let mut row = vec![Q::zero(); unknowns.len()];
                let mut any = false;
                for (rho, v) in data.rays.iter().enumerate() {
                    let mut e = base.clone();
                    e[rho] += 1;
                    if let Some(&j) = index.get(&e) {
                        row[j] += Q::from_integer(v[k].into());
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
        let kernel = nullspace(rows, unknowns.len());
        assert_eq!(kernel.len(), 1, "top degree of the Chow ring should be one-dimensional");

        let sigma = &data.cones[0];
        let mut e = vec![0; n];
        for &r in sigma {
            e[r] = 1;
        }
        let det = leibniz_det(&columns(&data.rays, sigma)).abs();
        let at_sigma = kernel[0][index[&e]].clone();
        let scale = Q::new(BigInt::one(), det) / at_sigma;
        let values = kernel[0].iter().map(|x| x * &scale).collect();
        IntegrationOracle { n, d, index, values }
    }

    pub fn integrate(&self, p: &Poly) -> Q {
        let mut total = Q::zero();
        for (e, c) in p {
            assert_eq!(e.iter().sum::<u32>() as usize, self.d, "oracle integrates top degree only");
            if let Some(&j) = self.index.get(e) {
                total += c * &self.values[j];
            }
        }
        total
    }

    /// Degree of `prod_rho (1 + x_rho)`.
    pub fn euler(&self) -> Q {
        let mut total = constant(self.n, Q::one());
        for i in 0..self.n {
            total = mul(&total, &add(&constant(self.n, Q::one()), &var(self.n, i)));
        }
        let top: Poly = total.into_iter().filter(|(e, _)| e.iter().sum::<u32>() as usize == self.d).collect();
        self.integrate(&top)
    }

    /// Whether a homogeneous class pairs to zero with every monomial of
    /// complementary degree.
    pub fn is_zero(&self, p: &Poly) -> bool {
        let Some(k) = p.keys().next().map(|e| e.iter().sum::<u32>() as usize) else { return true };
        monomials(self.n, (self.d - k) as u32).iter().all(|m| {
            let mut term = Poly::new();
            term.insert(m.clone(), Q::one());
            self.integrate(&mul(p, &term)).is_zero()
        })
    }
}

// Random fans --------------------------------------------------------------------

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    v.iter().map(|x| x / g).collect()
}

/// Complete simplicial rank-2 fan on 3 to 7 rays with random ray scalings.
pub fn random_fan_2d(rng: &mut ChaCha8Rng) -> FanData {
    loop {
        let k = rng.gen_range(3..=7);
        let mut dirs: Vec<Vec<i64>> = Vec::new();
        while dirs.len() < k {
            let v = vec![rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
            if v != [0, 0] && !dirs.contains(&primitive(&v)) {
                dirs.push(primitive(&v));
            }
        }
        dirs.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).total_cmp(&(b[1] as f64).atan2(b[0] as f64)));
        // Consecutive rays must turn strictly counterclockwise by less than pi.
        let ok = (0..k).all(|i| {
            let (a, b) = (&dirs[i], &dirs[(i + 1) % k]);
            a[0] * b[1] - a[1] * b[0] > 0
        });
        if !ok {
            continue;
        }
        let rays = dirs.iter().map(|v| {
            let s = rng.gen_range(1..=3);
            v.iter().map(|x| x * s).collect()
        });
        let cones = (0..k).map(|i| {
            let mut c = vec![i, (i + 1) % k];
            c.sort_unstable();
            c
        });
        return FanData { rank: 2, rays: rays.collect(), cones: cones.collect() };
    }
}

fn random_transform(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let det = leibniz_det(&big);
        if !det.is_zero() && det.abs() <= BigInt::from(4) {
            return m;
        }
    }
}

fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn transform_and_scale(rng: &mut ChaCha8Rng, data: FanData) -> FanData {
    let m = random_transform(rng);
    let rays = data
        .rays
        .iter()
        .map(|v| {
            let s = rng.gen_range(1..=2);
            apply(&m, v).into_iter().map(|x| x * s).collect()
        })
        .collect();
    FanData { rays, ..data }
}

pub fn simplex_fan() -> FanData {
    FanData {
        rank: 3,
        rays: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
        cones: vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    }
}

pub fn octahedral_fan() -> FanData {
    let rays = vec![vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]];
    let mut cones = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                cones.push(vec![a, b, c]);
            }
        }
    }
    FanData { rank: 3, rays, cones }
}

/// Complete simplicial rank-3 fan: a simplex or octahedral fan under a random
/// nonsingular linear map, with random ray scalings and up to two random
/// star subdivisions.
pub fn random_fan_3d(rng: &mut ChaCha8Rng) -> FanData {
    let base = if rng.gen_bool(0.5) { simplex_fan() } else { octahedral_fan() };
    let data = transform_and_scale(rng, base);
    let mut fan = data.build();
    for _ in 0..rng.gen_range(0..=2) {
        let cones: Vec<Vec<usize>> = fan.cones().filter(|c| c.rays().len() >= 2).map(|c| c.rays().to_vec()).collect();
        let sigma = cones.choose(rng).unwrap();
        fan = fan.star_subdivide(sigma).unwrap().0;
    }
    FanData::from_fan(&fan)
}

pub fn random_simplicial_fan(rng: &mut ChaCha8Rng) -> FanData {
    if rng.gen_bool(0.4) {
        random_fan_2d(rng)
    } else {
        random_fan_3d(rng)
    }
}

/// Complete rank-3 fan over a pyramid: one cone over a convex lattice polygon
/// at height one with 4 to 6 vertices around the axis, and a triangle cone to
/// the downward apex for every polygon edge. Then a random linear map and
/// ray scalings.
pub fn random_pyramid(rng: &mut ChaCha8Rng) -> FanData {
    loop {
        let k = rng.gen_range(4..=6);
        let mut pts: Vec<(i64, i64)> = Vec::new();
        while pts.len() < k {
            let p = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if p != (0, 0) && !pts.contains(&p) {
                pts.push(p);
            }
        }
        pts.sort_by(|a, b| (a.1 as f64).atan2(a.0 as f64).total_cmp(&(b.1 as f64).atan2(b.0 as f64)));
        let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
        // Strictly convex polygon with the origin strictly inside.
        let convex = (0..k).all(|i| cross(pts[i], pts[(i + 1) % k], pts[(i + 2) % k]) > 0);
        let inside = (0..k).all(|i| cross(pts[i], pts[(i + 1) % k], (0, 0)) > 0);
        if !(convex && inside) {
            continue;
        }
        let mut rays: Vec<Vec<i64>> = pts.iter().map(|&(x, y)| vec![x, y, 1]).collect();
        rays.push(vec![0, 0, -1]);
        let mut cones = vec![(0..k).collect::<Vec<_>>()];
        for i in 0..k {
            let mut c = vec![i, (i + 1) % k, k];
            c.sort_unstable();
            cones.push(c);
        }
        return transform_and_scale(rng, FanData { rank: 3, rays, cones });
    }
}

/// A random top-degree class with small coefficients and a few terms.
pub fn random_class(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Poly {
    let all = monomials(n, d);
    let mut p = Poly::new();
    for _ in 0..rng.gen_range(1..=5) {
        let e = all.choose(rng).unwrap().clone();
        let c = q(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        p = add(&p, &Poly::from([(e, c)]));
    }
    if p.is_empty() {
        p.insert(all[0].clone(), Q::one());
    }
    p
}

/// Renders a polynomial in the crate's class grammar.
pub fn to_text(p: &Poly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        if k > 0 || c.is_negative() {
            out.push_str(&format!("{sign} "));
        }
        out.push_str(&c.abs().to_string());
        for (i, &a) in e.iter().enumerate() {
            if a > 0 {
                out.push_str(&format!("*x{i}^{a}"));
            }
        }
        out.push(' ');
    }
    out.trim_end().to_string()
}

pub fn to_class(p: &Poly, n: usize) -> toric_artin::ChowClass {
    let mut c = toric_artin::ChowClass::zero(n);
    for (e, k) in p {
        c.add_term(e.clone(), k.clone());
    }
    c
}

pub fn to_poly(c: &toric_artin::ChowClass) -> Poly {
    c.terms().map(|(e, k)| (e.clone(), k.clone())).collect()
}

/// The square pyramid fan: rays 0..4 are the four base corners and the
/// downward apex.
pub fn example_sigma() -> FanData {
    FanData {
        rank: 3,
        rays: vec![vec![1, 0, 1], vec![0, 2, 1], vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, -1]],
        cones: vec![vec![0, 1, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]],
    }
}

/// Its star subdivision at the base, listing the new ray `(0, 1, 4)` first.
pub fn example_subdivided() -> FanData {
    FanData {
        rank: 3,
        rays: vec![vec![0, 1, 4], vec![1, 0, 1], vec![0, 2, 1], vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, -1]],
        cones: vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 1, 4],
            vec![1, 2, 5],
            vec![2, 3, 5],
            vec![3, 4, 5],
            vec![1, 4, 5],
        ],
    }
}
