use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`,
/// presented as the cokernel of an integer matrix acting on column vectors.
///
/// Coordinates are ordered torsion first, then free. `projection` maps an
/// ambient vector to raw coordinates; `lifts` holds one ambient
/// representative per coordinate generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
    presentation: IntMatrix,
    projection: IntMatrix,
    lifts: IntMatrix,
}

/// An element of a [`FgAbelianGroup`] in canonical coordinates.
///
/// Torsion residues live in `[0, d_i)`. Equality is coordinate equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    torsion: Vec<BigInt>,
    free: Vec<BigInt>,
    factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// `Z^rows / A·Z^cols`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let m = a.rows();
        let mut coords = Vec::new();
        let mut factors = Vec::new();
        for i in 0..snf.rank {
            let d = &snf.s[(i, i)];
            if !d.is_one() {
                coords.push(i);
                factors.push(d.clone());
            }
        }
        coords.extend(snf.rank..m);
        FgAbelianGroup {
            free_rank: m - snf.rank,
            invariant_factors: factors,
            presentation: a.clone(),
            projection: snf.u.select_rows(coords.iter().copied()),
            lifts: snf.u_inv.select_columns(coords.iter().copied()),
        }
    }

    /// The group with the given invariants, presented on its own coordinates.
    pub fn from_invariants(free_rank: usize, factors: &[BigInt]) -> Self {
        let t = factors.len();
        let mut rel = IntMatrix::zeros(t + free_rank, t);
        for (i, d) in factors.iter().enumerate() {
            rel[(i, i)] = d.clone();
        }
        Self::cokernel(&rel)
    }

    pub fn trivial() -> Self {
        Self::from_invariants(0, &[])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.presentation
    }

    pub fn ambient_dim(&self) -> usize {
        self.presentation.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    /// Same invariants as `other`, regardless of presentation.
    pub fn is_isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            torsion: vec![BigInt::zero(); self.invariant_factors.len()],
            free: vec![BigInt::zero(); self.free_rank],
            factors: self.invariant_factors.clone(),
        }
    }

    /// Builds an element from coordinates, reducing the torsion part.
    pub fn element(&self, torsion: &[BigInt], free: &[BigInt]) -> GroupElement {
        assert_eq!(torsion.len(), self.invariant_factors.len(), "wrong torsion length");
        assert_eq!(free.len(), self.free_rank, "wrong free length");
        GroupElement {
            torsion: torsion
                .iter()
                .zip(&self.invariant_factors)
                .map(|(x, d)| x.mod_floor(d))
                .collect(),
            free: free.to_vec(),
            factors: self.invariant_factors.clone(),
        }
    }

    /// Image of an ambient integer vector.
    pub fn project(&self, v: &[BigInt]) -> GroupElement {
        let raw = self.projection.mul_vec(v);
        let t = self.invariant_factors.len();
        self.element(&raw[..t], &raw[t..])
    }

    pub fn project_i64(&self, v: &[i64]) -> GroupElement {
        self.project(&super::to_big(v))
    }

    /// An ambient representative of `g`.
    pub fn lift(&self, g: &GroupElement) -> Vec<BigInt> {
        let coords: Vec<BigInt> = g.torsion.iter().chain(&g.free).cloned().collect();
        self.lifts.mul_vec(&coords)
    }

    /// Ambient representatives of the coordinate generators, torsion first.
    pub fn generator_lifts(&self) -> &IntMatrix {
        &self.lifts
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.factors == self.invariant_factors && g.free.len() == self.free_rank
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl GroupElement {
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }

    /// Order of the element, `None` when it has infinite order.
    pub fn order(&self) -> Option<BigInt> {
        if self.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.torsion
                .iter()
                .zip(&self.factors)
                .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d)))),
        )
    }

    pub fn scaled(&self, k: &BigInt) -> GroupElement {
        GroupElement {
            torsion: self
                .torsion
                .iter()
                .zip(&self.factors)
                .map(|(x, d)| (x * k).mod_floor(d))
                .collect(),
            free: self.free.iter().map(|x| x * k).collect(),
            factors: self.factors.clone(),
        }
    }

    /// Coordinates in order torsion then free.
    pub fn coords(&self) -> Vec<BigInt> {
        self.torsion.iter().chain(&self.free).cloned().collect()
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.factors, rhs.factors, "elements of different groups");
        assert_eq!(self.free.len(), rhs.free.len(), "elements of different groups");
        GroupElement {
            torsion: self
                .torsion
                .iter()
                .zip(&rhs.torsion)
                .zip(&self.factors)
                .map(|((a, b), d)| (a + b).mod_floor(d))
                .collect(),
            free: self.free.iter().zip(&rhs.free).map(|(a, b)| a + b).collect(),
            factors: self.factors.clone(),
        }
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        self.scaled(&BigInt::from(-1))
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self + &(-rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Cokernel `Z^rows / A·Z^cols` of `a`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    FgAbelianGroup::cokernel(a)
}

/// Columns form a basis of `{x ∈ Z^cols : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    snf.v.select_columns(snf.rank..a.cols())
}

/// Some integer solution of `A x = b`, or `None` when there is none over `Z`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side has wrong length");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = ci.div_rem(&snf.s[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// The torsion subgroup, which is `Ext^1(G, Z)` up to isomorphism.
pub fn ext1_torsion(g: &FgAbelianGroup) -> FgAbelianGroup {
    FgAbelianGroup::from_invariants(0, g.invariant_factors())
}

/// `G / <g>` in canonical form.
pub fn quotient_by_element(g: &FgAbelianGroup, x: &GroupElement) -> FgAbelianGroup {
    assert!(g.contains(x), "element does not belong to the group");
    let t = g.invariant_factors().len();
    let dim = t + g.free_rank();
    let mut rel = IntMatrix::zeros(dim, t + 1);
    for (i, d) in g.invariant_factors().iter().enumerate() {
        rel[(i, i)] = d.clone();
    }
    for (i, c) in x.coords().into_iter().enumerate() {
        rel[(i, t)] = c;
    }
    FgAbelianGroup::cokernel(&rel)
}

/// Hermite basis of the lattice spanned by the columns of `gens`, which must
/// have full row rank: a square upper-triangular matrix with positive
/// diagonal whose off-diagonal entries in each row are reduced into
/// `[0, h_ii)`.
pub fn hermite_basis(gens: &IntMatrix) -> Option<IntMatrix> {
    let k = gens.rows();
    let mut a = gens.clone();
    let n = a.cols();
    // Column operations; pivot row walks from the bottom up so the result is upper triangular.
    let mut col = n;
    for row in (0..k).rev() {
        if col == 0 {
            return None;
        }
        let target = col - 1;
        loop {
            let nz: Vec<usize> = (0..col).filter(|&j| !a[(row, j)].is_zero()).collect();
            if nz.is_empty() {
                return None;
            }
            let p = *nz.iter().min_by_key(|&&j| a[(row, j)].abs()).unwrap();
            a.swap_cols(p, target);
            let mut done = true;
            for j in 0..target {
                if a[(row, j)].is_zero() {
                    continue;
                }
                let q = a[(row, j)].div_floor(&a[(row, target)]);
                a.add_col_multiple(j, target, &-q);
                if !a[(row, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(row, target)].is_negative() {
            a.negate_col(target);
        }
        col = target;
    }
    let mut h = a.select_columns(n - k..n);
    for j in 0..k {
        for c in j + 1..k {
            let q = h[(j, c)].div_floor(&h[(j, j)]);
            h.add_col_multiple(c, j, &-q);
        }
    }
    Some(h)
}

/// Canonical representative of `v` modulo the full-rank lattice with Hermite basis `h`.
pub fn reduce_modulo_lattice(v: &[BigInt], h: &IntMatrix) -> Vec<BigInt> {
    let k = h.rows();
    let mut out = v.to_vec();
    for j in (0..k).rev() {
        let q = out[j].div_floor(&h[(j, j)]);
        for i in 0..k {
            out[i] -= &q * &h[(i, j)];
        }
    }
    out
}
