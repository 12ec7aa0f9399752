//! Minimal resolution of a toric surface and the intersection theory of the resolved surface.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactalg::{cokernel, FgAbelianGroup, GroupElement, IntMatrix};
use crate::hjfrac::{hj_expand, HJExpansion};
use crate::toricfan::{
    cone_type, det, divisor_class_groups, singularity_type, unimodular_complement, ClassGroups,
    Fan, PointData, Ray,
};

/// Lattice points `u_0 = v, u_1, ..., u_m, u_{m+1} = w` on the compact boundary of the
/// convex hull of the nonzero lattice points of the cone `(v, w)`, with the digits
/// `d_p` satisfying `u_{p-1} + u_{p+1} = d_p·u_p`.
pub fn resolve_cone(v: Ray, w: Ray) -> (Vec<Ray>, HJExpansion) {
    let ty = cone_type(v, w);
    let ds = hj_expand(ty);
    let mut hull = vec![v];
    if !ty.is_smooth() {
        let r = i128::from(ty.r());
        let c = unimodular_complement(v);
        // u = c + t·v has det(v, u) = 1 and det(u, w) = det(c, w) + t·r.
        let t = -Integer::div_floor(&det(c, w), &r);
        let u1 = [c[0] + t as i64 * v[0], c[1] + t as i64 * v[1]];
        debug_assert_eq!(det(u1, w), i128::from(ty.a()));
        hull.push(u1);
        for &d in ds.digits() {
            let (prev, cur) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            hull.push([d * cur[0] - prev[0], d * cur[1] - prev[1]]);
        }
        let last = hull.pop().expect("chain is nonempty");
        assert_eq!(last, w, "continued fraction does not close up the cone");
    }
    hull.push(w);
    (hull, ds)
}

/// Label `(i, p)` of a ray of the resolution: `p = 0` for the strict transform of `C_i`,
/// `1 ≤ p ≤ m_i` for the exceptional curve `E_{i,p}`. Points are indexed from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RayLabel {
    pub point: usize,
    pub p: usize,
}

#[derive(Clone, Debug)]
pub struct ResolvedSurface {
    base: Fan,
    rays: Vec<Ray>,
    labels: Vec<RayLabel>,
    d: Vec<i64>,
    chain_start: Vec<usize>,
    points: Vec<PointData>,
    base_groups: ClassGroups,
    cl: FgAbelianGroup,
}

/// Integer combination of the toric divisors of a resolved surface (or of a fan).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        DivisorClass { coeffs: vec![0; n] }
    }

    pub fn new(coeffs: Vec<i64>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[k] = 1;
        d
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn scaled(&self, k: i64) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|x| x * k).collect(),
        }
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        crate::exactalg::to_big(&self.coeffs)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "classes on different surfaces");
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        self.scaled(-1)
    }
}

pub fn minimal_resolution(f: &Fan) -> ResolvedSurface {
    let n = f.len();
    let mut rays = Vec::new();
    let mut labels = Vec::new();
    let mut chain_start = Vec::with_capacity(n);
    for i in 0..n {
        chain_start.push(rays.len());
        let (hull, _) = resolve_cone(f.ray(i), f.ray(i + 1));
        for (p, &u) in hull[..hull.len() - 1].iter().enumerate() {
            rays.push(u);
            labels.push(RayLabel { point: i, p });
        }
    }
    let total = rays.len();
    let d = (0..total)
        .map(|k| {
            let (prev, cur, next) = (rays[(k + total - 1) % total], rays[k], rays[(k + 1) % total]);
            let s = [prev[0] + next[0], prev[1] + next[1]];
            // s = c·cur; read c off a nonzero coordinate.
            let c = if cur[0] != 0 { s[0] / cur[0] } else { s[1] / cur[1] };
            debug_assert_eq!([c * cur[0], c * cur[1]], s);
            c
        })
        .collect();
    let refined = IntMatrix::from_i64_columns(2, &rays);
    ResolvedSurface {
        base: f.clone(),
        cl: cokernel(&refined.transpose()),
        rays,
        labels,
        d,
        chain_start,
        points: f.points(),
        base_groups: divisor_class_groups(f),
    }
}

impl ResolvedSurface {
    pub fn base(&self) -> &Fan {
        &self.base
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn labels(&self) -> &[RayLabel] {
        &self.labels
    }

    /// `Ñ`, the number of rays of the resolution.
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// `−D_ρ²` for every ray.
    pub fn self_intersections(&self) -> &[i64] {
        &self.d
    }

    pub fn n_points(&self) -> usize {
        self.base.len()
    }

    pub fn point(&self, i: usize) -> PointData {
        self.points[i]
    }

    pub fn points(&self) -> &[PointData] {
        &self.points
    }

    /// Chain length `m_i`.
    pub fn chain_len(&self, i: usize) -> usize {
        let end = self.chain_start.get(i + 1).copied().unwrap_or(self.len());
        end - self.chain_start[i] - 1
    }

    /// Position of the ray labelled `(i, p)`.
    pub fn position(&self, i: usize, p: usize) -> usize {
        assert!(p <= self.chain_len(i), "no ray ({i},{p})");
        self.chain_start[i] + p
    }

    /// `d_{i,p}`.
    pub fn d(&self, i: usize, p: usize) -> i64 {
        self.d[self.position(i, p)]
    }

    pub fn chain_digits(&self, i: usize) -> Vec<i64> {
        (1..=self.chain_len(i)).map(|p| self.d(i, p)).collect()
    }

    /// Positions of all exceptional rays, ordered by `(i, p)`.
    pub fn exceptional_index(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.labels[k].p > 0).collect()
    }

    pub fn divisor(&self, i: usize, p: usize) -> DivisorClass {
        DivisorClass::unit(self.len(), self.position(i, p))
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass::zero(self.len())
    }

    /// `K = −Σ D_ρ`.
    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::new(vec![-1; self.len()])
    }

    pub fn base_groups(&self) -> &ClassGroups {
        &self.base_groups
    }

    /// `Cl(X̃)`, free of rank `Ñ − 2`.
    pub fn class_group(&self) -> &FgAbelianGroup {
        &self.cl
    }

    /// The pairing `D_ρ·D_σ` on toric divisors.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut m = vec![vec![0; n]; n];
        for k in 0..n {
            m[k][k] = -self.d[k];
            m[k][(k + 1) % n] = 1;
            m[(k + 1) % n][k] = 1;
        }
        m
    }

    /// Relation vectors `(⟨e_j, v_ρ⟩)_ρ` spanning principal divisors.
    pub fn relations(&self) -> [DivisorClass; 2] {
        [0, 1].map(|j| DivisorClass::new(self.rays.iter().map(|v| v[j]).collect()))
    }

    /// `D·E` for every exceptional `E`, ordered like `exceptional_index`.
    pub fn exceptional_degrees(&self, d: &DivisorClass) -> Vec<i64> {
        self.exceptional_index()
            .into_iter()
            .map(|k| self.degree_on(d, k))
            .collect()
    }

    /// `D·D_k` for the toric divisor at position `k`.
    pub fn degree_on(&self, d: &DivisorClass, k: usize) -> i64 {
        let n = self.len();
        let c = &d.coeffs;
        c[(k + n - 1) % n] + c[(k + 1) % n] - self.d[k] * c[k]
    }
}

pub fn intersection_number(s: &ResolvedSurface, d1: &DivisorClass, d2: &DivisorClass) -> i64 {
    (0..s.len()).map(|k| d1.coeffs[k] * s.degree_on(d2, k)).sum()
}

/// `π_*D ∈ Cl(X)`: exceptional curves contract, `E_{i,0} ↦ C_i`.
pub fn pushforward_class(s: &ResolvedSurface, d: &DivisorClass) -> GroupElement {
    let coeffs: Vec<BigInt> = (0..s.n_points())
        .map(|i| BigInt::from(d.coeffs[s.position(i, 0)]))
        .collect();
    s.base_groups.class_of(&coeffs)
}

/// Number of lattice points `m` with `⟨m, u_ρ⟩ ≥ −a_ρ` for all rays.
pub fn h0(s: &ResolvedSurface, d: &DivisorClass) -> u64 {
    polytope_points(s.rays(), d.coeffs())
}

fn polytope_points(rays: &[Ray], a: &[i64]) -> u64 {
    let n = rays.len();
    let feasible = |px: i128, py: i128, q: i128| {
        (0..n).all(|k| {
            let u = rays[k];
            i128::from(u[0]) * px + i128::from(u[1]) * py >= -i128::from(a[k]) * q
        })
    };
    let mut lo: Option<i128> = None;
    let mut hi: Option<i128> = None;
    for i in 0..n {
        for j in i + 1..n {
            let (u, v) = (rays[i], rays[j]);
            let q = det(u, v);
            if q == 0 {
                continue;
            }
            // ⟨m,u⟩ = −a_i and ⟨m,v⟩ = −a_j by Cramer's rule.
            let (bi, bj) = (-i128::from(a[i]), -i128::from(a[j]));
            let mut px = bi * i128::from(v[1]) - bj * i128::from(u[1]);
            let mut py = i128::from(u[0]) * bj - i128::from(v[0]) * bi;
            let mut q = q;
            if q < 0 {
                (px, py, q) = (-px, -py, -q);
            }
            if !feasible(px, py, q) {
                continue;
            }
            let ceil = Integer::div_ceil(&px, &q);
            let floor = Integer::div_floor(&px, &q);
            lo = Some(lo.map_or(ceil, |l| l.min(ceil)));
            hi = Some(hi.map_or(floor, |h| h.max(floor)));
        }
    }
    let (Some(x0), Some(x1)) = (lo, hi) else {
        return 0;
    };
    let mut count = 0u64;
    for x in x0..=x1 {
        let mut ylo = i128::MIN;
        let mut yhi = i128::MAX;
        let mut ok = true;
        for k in 0..n {
            let (ux, uy) = (i128::from(rays[k][0]), i128::from(rays[k][1]));
            let rhs = -i128::from(a[k]) - ux * x;
            match uy.signum() {
                1 => ylo = ylo.max(Integer::div_ceil(&rhs, &uy)),
                -1 => yhi = yhi.min(Integer::div_floor(&rhs, &uy)),
                _ => ok &= rhs <= 0,
            }
        }
        if ok && ylo <= yhi {
            count += (yhi - ylo + 1) as u64;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
}

impl Cohomology {
    pub fn is_zero(&self) -> bool {
        self.h0 == 0 && self.h1 == 0 && self.h2 == 0
    }

    pub fn as_tuple(&self) -> (u64, u64, u64) {
        (self.h0, self.h1, self.h2)
    }
}

/// `χ(O(D)) = 1 + D·(D − K)/2`.
pub fn euler_characteristic(s: &ResolvedSurface, d: &DivisorClass) -> i64 {
    let dk = d - &s.canonical();
    1 + intersection_number(s, d, &dk) / 2
}

pub fn cohomology(s: &ResolvedSurface, d: &DivisorClass) -> Result<Cohomology> {
    let h0 = h0(s, d);
    let h2 = self::h0(s, &(&s.canonical() - d));
    let chi = euler_characteristic(s, d);
    let h1 = h0 as i128 + h2 as i128 - i128::from(chi);
    if h1 < 0 {
        return Err(Error::NegativeH1);
    }
    Ok(Cohomology {
        h0,
        h1: h1 as u64,
        h2,
    })
}

/// Summary of one chain: the point, its type and the digits of its curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSummary {
    pub point: usize,
    pub r: i64,
    pub a: i64,
    pub ds: Vec<i64>,
}

pub fn chain_summaries(s: &ResolvedSurface) -> Vec<ChainSummary> {
    (0..s.n_points())
        .map(|i| {
            let ty = singularity_type(s.base(), i).ty;
            ChainSummary {
                point: i,
                r: ty.r(),
                a: ty.a(),
                ds: s.chain_digits(i),
            }
        })
        .collect()
}
