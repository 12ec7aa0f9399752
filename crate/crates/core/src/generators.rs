//! Reflexivity predicates for pushforwards of line bundles along a chain and the
//! rank-one reflexive generators `R_i` of torsion-free toric surfaces.

use num_bigint::BigInt;

use crate::brauer_groth::{ip_cokernel, IpPresentation};
use crate::error::{Error, Result};
use crate::exactalg::{hermite_basis, kernel_basis, reduce_modulo_lattice, GroupElement, IntMatrix};
use crate::hjfrac::mod_inverse;
use crate::resolution::{pushforward_class, DivisorClass, ResolvedSurface};
use crate::sodbuilder::untwist_with;
use crate::toricfan::check_weights;

/// Digits `d_j` of a chain and the degrees `L·E_j` of a line bundle on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDegrees {
    ds: Vec<i64>,
    degs: Vec<i64>,
}

impl ChainDegrees {
    pub fn new(ds: Vec<i64>, degs: Vec<i64>) -> Result<Self> {
        if ds.iter().any(|&d| d < 2) {
            return Err(Error::InvalidDigits);
        }
        if ds.len() != degs.len() {
            return Err(Error::LengthMismatch {
                expected: ds.len(),
                found: degs.len(),
            });
        }
        Ok(ChainDegrees { ds, degs })
    }

    /// Degrees of `l` along the chain of point `i`.
    pub fn of_class(s: &ResolvedSurface, i: usize, l: &DivisorClass) -> Self {
        let m = s.chain_len(i);
        ChainDegrees {
            ds: s.chain_digits(i),
            degs: (1..=m).map(|p| s.degree_on(l, s.position(i, p))).collect(),
        }
    }

    pub fn ds(&self) -> &[i64] {
        &self.ds
    }

    pub fn degs(&self) -> &[i64] {
        &self.degs
    }
}

/// `L(D)·E_j ≤ 0` for all `j` and `Σ L(D)·E_j < 0`, where `D` is the whole chain.
pub fn reflexive_pushforward_test(c: &ChainDegrees) -> bool {
    let m = c.ds.len();
    if m == 0 {
        return true;
    }
    let twisted: Vec<i64> = (0..m)
        .map(|j| {
            let de = 2 - i64::from(j == 0) - i64::from(j == m - 1) - c.ds[j];
            c.degs[j] + de
        })
        .collect();
    twisted.iter().all(|&x| x <= 0) && twisted.iter().sum::<i64>() < 0
}

/// `L − K` is nef along the chain.
pub fn higher_pushforward_vanishes(c: &ChainDegrees) -> bool {
    c.degs.iter().zip(&c.ds).all(|(&l, &d)| l >= d - 2)
}

/// Trivial on every curve, so the pushforward is invertible near the point.
pub fn descends_test(c: &ChainDegrees) -> bool {
    c.degs.iter().all(|&l| l == 0)
}

/// Least `s ≥ 0` with `s ≡ 0 mod r1` and `s ≡ −1 mod rn`.
pub fn crt_shift(r1: i64, rn: i64) -> Result<i64> {
    if r1 < 1 || rn < 1 {
        return Err(Error::NotCoprime);
    }
    if rn == 1 {
        return Ok(0);
    }
    let inv = mod_inverse(r1 % rn, rn).ok_or(Error::NotCoprime)?;
    Ok(r1 * ((rn - inv) % rn))
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    /// Solution of the untwisting system.
    pub m: DivisorClass,
    /// `π_* M`, reduced modulo Cartier classes.
    pub c: GroupElement,
    /// `R_i = K_X + C + C_1 + … + C_i`.
    pub classes: Vec<GroupElement>,
    pub divisor_classes: Vec<GroupElement>,
    pub canonical: GroupElement,
    pub ranks: Vec<i64>,
    /// Points (positions in the ordering) where `R_i` is certified locally free.
    pub locally_free_at: Vec<Vec<usize>>,
    /// Points where `R_i` is certified reflexive.
    pub reflexive_at: Vec<Vec<usize>>,
    /// Degree pattern of `M_{i,0}` on each chain.
    pub base_degrees: Vec<Vec<ChainDegrees>>,
    degree_of: Option<BigInt>,
}

impl GeneratorSet {
    /// Degrees of `R_1..R_n` when `Cl(X)` has rank one.
    pub fn degrees(&self) -> Option<Vec<BigInt>> {
        let sign = self.degree_of.as_ref()?;
        Some(self.classes.iter().map(|r| &r.free()[0] * sign).collect())
    }

    pub fn c_degree(&self) -> Option<BigInt> {
        self.degree_of.as_ref().map(|sign| &self.c.free()[0] * sign)
    }
}

/// Canonical representative of `g` modulo the image of `Pic(X)`; when `Cl(X)` has rank one
/// this is the least non-negative degree.
fn reduce_modulo_cartier(s: &ResolvedSurface, p: &IpPresentation, g: &GroupElement, sign: &BigInt) -> GroupElement {
    let bg = s.base_groups();
    let kernel = kernel_basis(&p.ip);
    let columns: Vec<Vec<BigInt>> = (0..kernel.cols())
        .map(|j| {
            let amb: Vec<i64> = p
                .basis
                .mul_vec(&kernel.column(j))
                .iter()
                .map(|x| i64::try_from(x).expect("pullback coefficients fit in i64"))
                .collect();
            let c = pushforward_class(s, &DivisorClass::new(amb));
            c.free().iter().map(|x| x * sign).collect()
        })
        .collect();
    let k = bg.cl.free_rank();
    let gens = IntMatrix::from_columns(k, &columns);
    let h = hermite_basis(&gens).expect("Cartier classes have finite index");
    let v: Vec<BigInt> = g.free().iter().map(|x| x * sign).collect();
    let reduced: Vec<BigInt> = reduce_modulo_lattice(&v, &h).iter().map(|x| x * sign).collect();
    bg.cl.element(g.torsion(), &reduced)
}

pub fn generator_classes(s: &ResolvedSurface) -> Result<GeneratorSet> {
    let p = ip_cokernel(s);
    let u = untwist_with(s, &p).ok_or(Error::ObstructionPresent)?;
    let bg = s.base_groups();
    let n = s.n_points();
    let degree_of = bg.degree(&bg.cl.element(&[], &[BigInt::from(1)]));
    let sign = degree_of.clone().unwrap_or_else(|| BigInt::from(1));
    let c = reduce_modulo_cartier(s, &p, &pushforward_class(s, &u.m), &sign);
    let canonical = -&bg.anticanonical();
    let mut acc = &canonical + &c;
    let mut classes = Vec::with_capacity(n);
    for ci in &bg.divisor_classes {
        acc = &acc + ci;
        classes.push(acc.clone());
    }
    let base_degrees: Vec<Vec<ChainDegrees>> = u
        .blocks
        .iter()
        .map(|b| (0..n).map(|k| ChainDegrees::of_class(s, k, &b.classes[0])).collect())
        .collect();
    let locally_free_at = (0..n)
        .map(|i| (0..n).filter(|&k| k < i || descends_test(&base_degrees[i][k])).collect())
        .collect();
    let reflexive_at = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k < i || reflexive_pushforward_test(&base_degrees[i][k]))
                .collect()
        })
        .collect();
    Ok(GeneratorSet {
        m: u.m,
        c,
        classes,
        divisor_classes: bg.divisor_classes.clone(),
        canonical,
        ranks: s.points().iter().map(|q| q.ty.r()).collect(),
        locally_free_at,
        reflexive_at,
        base_degrees,
        degree_of,
    })
}

/// Degrees of `R_1, R_2, R_3` on `P(w1, w2, w3)` with `x_i` of order `w_i`.
pub fn wpp_generators(w: [i64; 3]) -> Result<[i64; 3]> {
    check_weights(w)?;
    let s = crt_shift(w[0], w[2])?;
    let c = s.checked_mul(w[1]).ok_or(Error::Overflow)?;
    Ok([c - w[0] - w[2], c - w[0], c])
}
