//! Complete fans of projective toric surfaces and their singular points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{cokernel, kernel_basis, smith_normal_form, FgAbelianGroup, GroupElement, IntMatrix};
use crate::hjfrac::SingularityType;

pub type Ray = [i64; 2];

pub fn det(v: Ray, w: Ray) -> i128 {
    i128::from(v[0]) * i128::from(w[1]) - i128::from(v[1]) * i128::from(w[0])
}

/// Rays `v_1..v_n` in strict counterclockwise order, winding once around the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    rays: Vec<Ray>,
}

/// The torus-fixed point `x_i` of the cone `(v_i, v_{i+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointData {
    pub index: usize,
    pub ty: SingularityType,
    pub gorenstein: bool,
}

pub fn validate_fan(rays: &[Ray]) -> Result<Fan> {
    let n = rays.len();
    if n < 3 {
        return Err(Error::TooFewRays(n));
    }
    for (index, &[x, y]) in rays.iter().enumerate() {
        if x.gcd(&y) != 1 {
            return Err(Error::NonPrimitiveRay { index, x, y });
        }
    }
    for i in 0..n {
        let next = (i + 1) % n;
        if det(rays[i], rays[next]) <= 0 {
            return Err(Error::NonConvexOrClockwise { index: i, next });
        }
    }
    // Count the arcs [v_i, v_{i+1}) that contain the direction (1,0).
    let winding = (0..n)
        .filter(|&i| {
            let (v, w) = (rays[i], rays[(i + 1) % n]);
            (v[1] == 0 && v[0] > 0) || (v[1] < 0 && w[1] > 0)
        })
        .count() as i64;
    if winding != 1 {
        return Err(Error::WrongWinding(winding));
    }
    Ok(Fan {
        rays: rays.to_vec(),
    })
}

/// `(s, t)` with `p·s + q·t = 1` for a primitive `(p, q)`.
fn bezout(v: Ray) -> (i64, i64) {
    let e = v[0].extended_gcd(&v[1]);
    debug_assert_eq!(e.gcd, 1);
    (e.x, e.y)
}

/// Some `w` with `det(v, w) = 1`.
pub fn unimodular_complement(v: Ray) -> Ray {
    let (s, t) = bezout(v);
    [-t, s]
}

/// Type of the cone `(v, w)` with respect to the completion `c` of `v`.
fn cone_type_with(v: Ray, w: Ray, c: Ray) -> (i64, i64) {
    let r = det(v, w);
    let alpha = det(w, c);
    (r as i64, (-alpha).rem_euclid(r) as i64)
}

/// Type `1/r(1,a)` of the cone spanned by primitive `v, w` with `det(v, w) > 0`.
pub fn cone_type(v: Ray, w: Ray) -> SingularityType {
    let c = unimodular_complement(v);
    let (r, a) = cone_type_with(v, w, c);
    debug_assert_eq!((r, a), cone_type_with(v, w, [c[0] + v[0], c[1] + v[1]]));
    SingularityType::new(r, if r == 1 { 0 } else { a }).expect("primitive cone")
}

impl Fan {
    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, i: usize) -> Ray {
        self.rays[i % self.rays.len()]
    }

    /// Order `r_i = det(v_i, v_{i+1})`.
    pub fn order(&self, i: usize) -> i64 {
        det(self.ray(i), self.ray(i + 1)) as i64
    }

    pub fn orders(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.order(i)).collect()
    }

    pub fn points(&self) -> Vec<PointData> {
        (0..self.len()).map(|i| singularity_type(self, i)).collect()
    }

    /// `υ`, the 2×n matrix with columns `v_i`.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_columns(2, &self.rays)
    }

    /// Starts the cyclic order at ray `k`.
    pub fn rotated(&self, k: usize) -> Fan {
        let n = self.len();
        Fan {
            rays: (0..n).map(|j| self.ray(j + k)).collect(),
        }
    }

    /// The mirror image under `(x, y) ↦ (x, −y)`, reindexed so that the old point
    /// `x_j` becomes `x_{n+1−j}` (1-based).
    pub fn reflected(&self) -> Fan {
        let n = self.len();
        let sigma = |v: Ray| [v[0], -v[1]];
        let rays = std::iter::once(sigma(self.rays[0]))
            .chain((1..n).rev().map(|j| sigma(self.rays[j])))
            .collect();
        Fan { rays }
    }

    /// Applies an integer matrix `[[a, b], [c, d]]` to every ray.
    pub fn transformed(&self, m: [[i64; 2]; 2]) -> Result<Fan> {
        let rays: Vec<Ray> = self
            .rays
            .iter()
            .map(|v| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]])
            .collect();
        validate_fan(&rays)
    }
}

/// Sorts primitive rays counterclockwise starting from the positive x-axis, then validates.
pub fn fan_from_unordered(rays: &[Ray]) -> Result<Fan> {
    let half = |v: &Ray| i32::from(!(v[1] > 0 || (v[1] == 0 && v[0] > 0)));
    let mut sorted = rays.to_vec();
    sorted.sort_by(|a, b| half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(*a, *b))));
    sorted.dedup();
    validate_fan(&sorted)
}

pub fn singularity_type(f: &Fan, i: usize) -> PointData {
    let ty = cone_type(f.ray(i), f.ray(i + 1));
    PointData {
        index: i,
        ty,
        gorenstein: ty.is_gorenstein(),
    }
}

/// The fan of `ℙ(w1, w2, w3)` with the weight of each fixed point recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WppFan {
    pub fan: Fan,
    pub weights: [i64; 3],
}

impl WppFan {
    /// Point `x_i` has order `w_i`.
    pub fn point_weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    /// The divisors `C_1, C_2, C_3` have degrees `w_2, w_3, w_1`.
    pub fn ray_degree(&self, i: usize) -> i64 {
        self.weights[(i + 1) % 3]
    }
}

pub fn check_weights(w: [i64; 3]) -> Result<()> {
    let coprime = (0..3).all(|i| w[i].gcd(&w[(i + 1) % 3]) == 1);
    if w.iter().all(|&x| x > 0) && coprime {
        Ok(())
    } else {
        Err(Error::InvalidWeights)
    }
}

pub fn wpp_fan(w: [i64; 3]) -> Result<WppFan> {
    check_weights(w)?;
    let col = IntMatrix::from_rows(&[[w[0]], [w[1]], [w[2]]]);
    let u = smith_normal_form(&col).u;
    // Rows 2 and 3 of U map Z^3 onto N = Z^3 / Z·w.
    let image = |j: usize| -> Result<Ray> {
        let x = u[(1, j)].to_i64().ok_or(Error::Overflow)?;
        let y = u[(2, j)].to_i64().ok_or(Error::Overflow)?;
        let g = x.gcd(&y);
        Ok([x / g, y / g])
    };
    let mut rays = [image(1)?, image(2)?, image(0)?];
    if det(rays[0], rays[1]) < 0 {
        for v in &mut rays {
            v[1] = -v[1];
        }
    }
    Ok(WppFan {
        fan: validate_fan(&rays)?,
        weights: w,
    })
}

/// `Cl(X) = coker(υ^T)` with the classes of the toric divisors `C_i`.
#[derive(Clone, Debug)]
pub struct ClassGroups {
    pub cl: FgAbelianGroup,
    pub pic_rank: usize,
    pub divisor_classes: Vec<GroupElement>,
    degree_sign: i64,
}

impl ClassGroups {
    /// Degree on the free part when `Cl(X)` has rank one, positive on `−K_X`.
    pub fn degree(&self, g: &GroupElement) -> Option<BigInt> {
        (self.cl.free_rank() == 1).then(|| &g.free()[0] * self.degree_sign)
    }

    pub fn class_of(&self, coeffs: &[BigInt]) -> GroupElement {
        self.cl.project(coeffs)
    }

    pub fn anticanonical(&self) -> GroupElement {
        self.divisor_classes
            .iter()
            .fold(self.cl.zero(), |acc, c| &acc + c)
    }
}

pub fn divisor_class_groups(f: &Fan) -> ClassGroups {
    let ups_t = f.ray_matrix().transpose();
    let cl = cokernel(&ups_t);
    let n = f.len();
    let divisor_classes: Vec<GroupElement> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            cl.project(&e)
        })
        .collect();
    let pic_rank = kernel_basis(&f.ray_matrix()).cols();
    let mut groups = ClassGroups {
        cl,
        pic_rank,
        divisor_classes,
        degree_sign: 1,
    };
    if groups.cl.free_rank() == 1 && groups.anticanonical().free()[0].is_negative() {
        groups.degree_sign = -1;
    }
    groups
}

/// `Br(X) = N / N_Σ`.
pub fn brauer_from_rays(f: &Fan) -> FgAbelianGroup {
    cokernel(&f.ray_matrix())
}

/// Named example surfaces.
pub mod samples {
    use super::{validate_fan, Fan};

    pub fn p2() -> Fan {
        validate_fan(&[[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    pub fn p123() -> Fan {
        validate_fan(&[[1, 1], [-2, 1], [1, -1]]).unwrap()
    }

    pub fn p1p1_mu2() -> Fan {
        validate_fan(&[[1, 1], [-1, 1], [-1, -1], [1, -1]]).unwrap()
    }

    pub fn p2_mu3() -> Fan {
        validate_fan(&[[1, 1], [-2, 1], [1, -2]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        crate::exactalg::to_big(v)
    }

    fn sorted_orders(f: &Fan) -> Vec<i64> {
        let mut o = f.orders();
        o.sort();
        o
    }

    #[test]
    fn unordered_rays_are_sorted() {
        let f = fan_from_unordered(&[[1, -2], [-2, 1], [1, 1]]).unwrap();
        assert_eq!(f.rays(), &[[1, 1], [-2, 1], [1, -2]]);
        let g = fan_from_unordered(&[[0, -1], [-1, 0], [1, 0], [0, 1], [1, 0]]).unwrap();
        assert_eq!(g.rays(), &[[1, 0], [0, 1], [-1, 0], [0, -1]]);
        assert!(fan_from_unordered(&[[1, 0], [0, 1]]).is_err());
    }

    #[test]
    fn validation_errors() {
        assert!(validate_fan(&[[1, 0], [0, 1], [-1, -1]]).is_ok());
        assert_eq!(validate_fan(&[[1, 0], [0, 1]]), Err(Error::TooFewRays(2)));
        assert!(matches!(
            validate_fan(&[[2, 0], [0, 1], [-1, -1]]),
            Err(Error::NonPrimitiveRay { index: 0, .. })
        ));
        assert!(matches!(
            validate_fan(&[[1, 0], [-1, -1], [0, 1]]),
            Err(Error::NonConvexOrClockwise { .. })
        ));
        assert!(matches!(
            validate_fan(&[[1, 0], [2, 1], [0, 1], [-1, -1]]),
            Ok(_)
        ));
        let twice = [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 0], [0, 1], [-1, 0], [0, -1]];
        assert_eq!(validate_fan(&twice[..8]), Err(Error::WrongWinding(2)));
    }

    #[test]
    fn p123_points() {
        let f = samples::p123();
        assert_eq!(f.orders(), vec![3, 1, 2]);
        assert_eq!(singularity_type(&f, 0).ty, SingularityType::new(3, 2).unwrap());
        assert!(singularity_type(&f, 1).ty.is_smooth());
        assert!(f.points().iter().all(|p| p.gorenstein));
    }

    #[test]
    fn p2_mu3_points() {
        let f = samples::p2_mu3();
        for p in f.points() {
            assert_eq!(p.ty, SingularityType::new(3, 2).unwrap());
        }
    }

    #[test]
    fn class_groups() {
        let g = divisor_class_groups(&samples::p123());
        assert_eq!(g.cl.free_rank(), 1);
        assert!(g.cl.is_torsion_free());
        assert_eq!(g.pic_rank, 1);
        let degs: Vec<BigInt> = g.divisor_classes.iter().map(|c| g.degree(c).unwrap()).collect();
        assert_eq!(degs, big(&[1, 2, 3]));

        let g = divisor_class_groups(&samples::p1p1_mu2());
        assert_eq!(g.cl.free_rank(), 2);
        assert_eq!(g.cl.invariant_factors(), &big(&[2])[..]);

        let g = divisor_class_groups(&samples::p2_mu3());
        assert_eq!(g.cl.free_rank(), 1);
        assert_eq!(g.cl.invariant_factors(), &big(&[3])[..]);

        let g = divisor_class_groups(&samples::p2());
        for c in &g.divisor_classes {
            assert_eq!(g.degree(c), Some(BigInt::from(1)));
        }
    }

    #[test]
    fn brauer_groups() {
        assert_eq!(brauer_from_rays(&samples::p2_mu3()).order(), Some(BigInt::from(3)));
        assert_eq!(brauer_from_rays(&samples::p1p1_mu2()).order(), Some(BigInt::from(2)));
        assert!(brauer_from_rays(&samples::p123()).is_trivial());
    }

    #[test]
    fn weighted_planes() {
        let w = wpp_fan([1, 2, 3]).unwrap();
        assert_eq!(w.fan.orders(), vec![1, 2, 3]);
        let w = wpp_fan([1, 1, 1]).unwrap();
        assert!(w.fan.points().iter().all(|p| p.ty.is_smooth()));
        let w = wpp_fan([2, 3, 11]).unwrap();
        assert_eq!(w.fan.orders(), vec![2, 3, 11]);
        assert_eq!(singularity_type(&w.fan, 1).ty, SingularityType::new(3, 1).unwrap());
        assert!(brauer_from_rays(&w.fan).is_trivial());
        assert_eq!(wpp_fan([2, 4, 3]), Err(Error::InvalidWeights));
        assert_eq!(wpp_fan([0, 1, 1]), Err(Error::InvalidWeights));
    }

    #[test]
    fn weighted_plane_degrees() {
        for w in [[1, 2, 3], [2, 3, 5], [3, 1, 7], [5, 7, 11]] {
            let wf = wpp_fan(w).unwrap();
            let g = divisor_class_groups(&wf.fan);
            assert!(g.cl.is_torsion_free() && g.cl.free_rank() == 1);
            for i in 0..3 {
                assert_eq!(g.degree(&g.divisor_classes[i]), Some(BigInt::from(wf.ray_degree(i))));
                assert_eq!(wf.fan.order(i), wf.point_weight(i));
            }
        }
    }

    #[test]
    fn reflection_swaps_types_for_inverses() {
        let f = wpp_fan([2, 3, 11]).unwrap().fan;
        let g = f.reflected();
        let n = f.len();
        for j in 0..n {
            let old = singularity_type(&f, j).ty;
            let new = singularity_type(&g, n - 1 - j).ty;
            assert_eq!(new.r(), old.r());
            if !old.is_smooth() {
                assert_eq!(new, crate::hjfrac::inverse_type(old).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn brauer_order_is_gcd_of_orders(f in crate::testutil::random_fan()) {
            let orders = f.orders();
            let g = orders.iter().fold(0i64, |a, &b| a.gcd(&b));
            prop_assert_eq!(brauer_from_rays(&f).order(), Some(BigInt::from(g)));
            for skip in 0..orders.len() {
                let h = orders.iter().enumerate().filter(|&(i, _)| i != skip).fold(0i64, |a, (_, &b)| a.gcd(&b));
                prop_assert_eq!(h, g);
            }
            let cl = divisor_class_groups(&f).cl;
            prop_assert!(crate::exactalg::ext1_torsion(&cl).is_isomorphic(&brauer_from_rays(&f)));
            prop_assert_eq!(divisor_class_groups(&f).pic_rank, f.len() - 2);
        }

        #[test]
        fn invariants_under_basis_change_and_rotation(f in crate::testutil::random_fan(), k in 0usize..6, m in 0usize..4) {
            let mats = [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 1], [1, 1]]];
            let g = f.transformed(mats[m]).unwrap();
            prop_assert_eq!(f.points(), g.points());
            let k = k % f.len();
            let h = f.rotated(k);
            for i in 0..f.len() {
                prop_assert_eq!(singularity_type(&h, i).ty, singularity_type(&f, i + k).ty);
            }
            prop_assert_eq!(sorted_orders(&h), sorted_orders(&f));
        }
    }
}
