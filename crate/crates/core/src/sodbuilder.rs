//! Block exceptional collections of line bundles on the minimal resolution, their twists,
//! untwisting, and the resulting decomposition data.

use num_bigint::BigInt;
use serde::Serialize;

use crate::brauer_groth::{beta_relations, ip_cokernel, standard_beta, BetaRelations, IpPresentation};
use crate::exactalg::{solve_integer, FgAbelianGroup, GroupElement, IntMatrix};
use crate::hjfrac::SingularityType;
use crate::kkalg::{kk_presentation, KKPresentation};
use crate::resolution::{
    cohomology, euler_characteristic, minimal_resolution, DivisorClass, ResolvedSurface,
};
use crate::toricfan::Fan;

/// A cyclic rotation of the points, optionally preceded by the reflection that reverses them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PointOrdering {
    pub rotate: usize,
    pub reflect: bool,
}

impl PointOrdering {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn apply(&self, f: &Fan) -> Fan {
        let g = if self.reflect { f.reflected() } else { f.clone() };
        g.rotated(self.rotate % f.len())
    }

    /// Index in `f` of the point placed at position `j`.
    pub fn point_map(&self, n: usize, j: usize) -> usize {
        let k = (j + self.rotate) % n;
        if self.reflect {
            n - 1 - k
        } else {
            k
        }
    }

    /// Puts the first smooth point last; the identity if there is none.
    pub fn smooth_last(f: &Fan) -> Self {
        let n = f.len();
        match f.points().iter().position(|p| p.ty.is_smooth()) {
            Some(i) => PointOrdering {
                rotate: (i + 1) % n,
                reflect: false,
            },
            None => Self::identity(),
        }
    }

    /// Puts point `i` of `f` first.
    pub fn first(i: usize) -> Self {
        PointOrdering {
            rotate: i,
            reflect: false,
        }
    }
}

/// `⟨L_{i,0}, …, L_{i,m_i}⟩` together with its twist `b_{i,1..m_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdherentBlock {
    pub point: usize,
    pub classes: Vec<DivisorClass>,
    pub twist: Vec<i64>,
}

pub fn build_collection(s: &ResolvedSurface) -> Vec<AdherentBlock> {
    let n = s.n_points();
    let mut prefix = s.zero_class();
    let mut blocks = Vec::with_capacity(n);
    for i in 0..n {
        let m = s.chain_len(i);
        let mut cur = &prefix + &s.divisor(i, 0);
        let mut classes = vec![cur.clone()];
        for p in 1..=m {
            cur = &cur + &s.divisor(i, p);
            classes.push(cur.clone());
        }
        let twist = (1..=m)
            .map(|p| {
                let extra = i64::from(i == n - 1 && p == m);
                2 - s.d(i, p) + extra
            })
            .collect();
        blocks.push(AdherentBlock {
            point: i,
            classes,
            twist,
        });
        for p in 0..=m {
            prefix = &prefix + &s.divisor(i, p);
        }
    }
    blocks
}

pub fn flatten(blocks: &[AdherentBlock]) -> Vec<DivisorClass> {
    blocks.iter().flat_map(|b| b.classes.iter().cloned()).collect()
}

pub fn verify_adherence(s: &ResolvedSurface, block: &AdherentBlock) -> bool {
    let i = block.point;
    if i >= s.n_points() {
        return false;
    }
    let m = s.chain_len(i);
    if block.classes.len() != m + 1 || block.twist.len() != m {
        return false;
    }
    let steps_ok = (1..=m)
        .all(|p| block.classes[p] == &block.classes[p - 1] + &s.divisor(i, p));
    let l0 = &block.classes[0];
    let degrees_ok = (1..=m).all(|p| {
        let expected = s.d(i, p) + block.twist[p - 1] - if p == 1 { 1 } else { 2 };
        s.degree_on(l0, s.position(i, p)) == expected
    });
    steps_ok && degrees_ok
}

/// `H^•(L' − L) = 0` whenever `L'` precedes `L`, and `H^•(O) = k`.
pub fn verify_semiorthogonality(s: &ResolvedSurface, collection: &[DivisorClass]) -> bool {
    let exceptional = matches!(cohomology(s, &s.zero_class()), Ok(c) if c.as_tuple() == (1, 0, 0));
    exceptional
        && collection.iter().enumerate().all(|(j, later)| {
            collection[..j]
                .iter()
                .all(|earlier| matches!(cohomology(s, &(earlier - later)), Ok(c) if c.is_zero()))
        })
}

/// `χ(L_i, L_j) = χ(L_j − L_i)`.
pub fn gram_matrix(s: &ResolvedSurface, collection: &[DivisorClass]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = collection
        .iter()
        .map(|li| {
            collection
                .iter()
                .map(|lj| euler_characteristic(s, &(lj - li)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

/// The collection has `rank G_0(X̃)` members and an upper unitriangular Gram matrix.
pub fn numeric_fullness(s: &ResolvedSurface, collection: &[DivisorClass]) -> bool {
    if collection.len() != s.len() {
        return false;
    }
    let g = gram_matrix(s, collection);
    let one = BigInt::from(1);
    let unitriangular = (0..g.rows()).all(|i| {
        g[(i, i)] == one && (0..i).all(|j| g[(i, j)] == BigInt::from(0))
    });
    unitriangular && g.determinant() == one
}

/// `M` with `M·E = 0` except `M·E_{n,m_n} = −1`, and the blocks `L_{i,p} + M + K`.
#[derive(Clone, Debug)]
pub struct Untwisted {
    pub m: DivisorClass,
    pub blocks: Vec<AdherentBlock>,
}

pub fn untwist(s: &ResolvedSurface) -> Option<Untwisted> {
    untwist_with(s, &ip_cokernel(s))
}

pub fn untwist_with(s: &ResolvedSurface, p: &IpPresentation) -> Option<Untwisted> {
    let n = s.n_points() - 1;
    let idx = s.exceptional_index();
    let target: Vec<BigInt> = idx
        .iter()
        .map(|&k| {
            let l = s.labels()[k];
            if l.point == n && l.p == s.chain_len(n) {
                BigInt::from(-1)
            } else {
                BigInt::from(0)
            }
        })
        .collect();
    let x = solve_integer(&p.ip, &target)?;
    let coeffs = p
        .basis
        .mul_vec(&x)
        .iter()
        .map(|c| i64::try_from(c).ok())
        .collect::<Option<Vec<i64>>>()?;
    let m = DivisorClass::new(coeffs);
    let shift = &m + &s.canonical();
    let blocks = build_collection(s)
        .into_iter()
        .map(|b| AdherentBlock {
            point: b.point,
            classes: b.classes.iter().map(|c| c + &shift).collect(),
            twist: vec![0; b.twist.len()],
        })
        .collect();
    Some(Untwisted { m, blocks })
}

/// One component of the decomposition.
#[derive(Clone, Debug)]
pub struct SodBlock {
    /// Index of the point in the input fan.
    pub point: usize,
    pub ty: SingularityType,
    pub ds: Vec<i64>,
    pub twist: Vec<i64>,
    pub algebra: KKPresentation,
    pub gorenstein: bool,
}

#[derive(Clone, Debug)]
pub struct SODReport {
    pub ordering: PointOrdering,
    pub surface: ResolvedSurface,
    pub blocks: Vec<SodBlock>,
    pub collection: Vec<AdherentBlock>,
    pub br: FgAbelianGroup,
    pub beta: GroupElement,
    pub untwisted: Option<Untwisted>,
    /// Every point after the first is Gorenstein.
    pub perf_valid: bool,
    pub beta_relations: BetaRelations,
}

impl SODReport {
    pub fn is_untwisted(&self) -> bool {
        self.untwisted.is_some()
    }

    /// `D^b(X) = < D^b(k), D^b(k[z]/z^2), … >`, with `β` when it is nonzero.
    pub fn render(&self) -> String {
        let lhs = if self.beta.is_zero() { "D^b(X)" } else { "D^b(X, beta)" };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("D^b({})", b.algebra.name()))
            .collect();
        format!("{lhs} = < {} >", parts.join(", "))
    }
}

pub fn sod_report(f: &Fan, ordering: PointOrdering) -> SODReport {
    let g = ordering.apply(f);
    let s = minimal_resolution(&g);
    let p = ip_cokernel(&s);
    let collection = build_collection(&s);
    let blocks = collection
        .iter()
        .map(|b| {
            let pd = s.point(b.point);
            SodBlock {
                point: ordering.point_map(f.len(), b.point),
                ty: pd.ty,
                ds: s.chain_digits(b.point),
                twist: b.twist.clone(),
                algebra: kk_presentation(pd.ty),
                gorenstein: pd.gorenstein,
            }
        })
        .collect();
    let beta = standard_beta(&s, &p);
    let untwisted = untwist_with(&s, &p);
    let perf_valid = s.points().iter().skip(1).all(|q| q.gorenstein);
    let beta_relations = beta_relations(&s, &p);
    SODReport {
        ordering,
        blocks,
        collection,
        br: p.br,
        beta,
        untwisted,
        perf_valid,
        beta_relations,
        surface: s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::kernel_basis;
    use crate::toricfan::{brauer_from_rays, samples, wpp_fan};
    use proptest::prelude::*;

    fn names(r: &SODReport) -> Vec<String> {
        r.blocks.iter().map(|b| b.algebra.name()).collect()
    }

    #[test]
    fn orderings_map_points() {
        let f = samples::p123();
        for reflect in [false, true] {
            for rotate in 0..3 {
                let o = PointOrdering { rotate, reflect };
                let g = o.apply(&f);
                for j in 0..3 {
                    assert_eq!(g.order(j), f.order(o.point_map(3, j)));
                }
            }
        }
        let o = PointOrdering::smooth_last(&f);
        assert!(o.apply(&f).points()[2].ty.is_smooth());
        assert_eq!(PointOrdering::smooth_last(&samples::p2_mu3()), PointOrdering::identity());
    }

    #[test]
    fn p123_collection() {
        let f = samples::p123();
        let s = minimal_resolution(&PointOrdering::smooth_last(&f).apply(&f));
        let blocks = build_collection(&s);
        let sizes: Vec<usize> = blocks.iter().map(|b| b.classes.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 6);
        assert_eq!(sizes[2], 1);
        let coll = flatten(&blocks);
        assert!(blocks.iter().all(|b| verify_adherence(&s, b)));
        assert!(verify_semiorthogonality(&s, &coll));
        assert!(numeric_fullness(&s, &coll));
        assert_eq!(gram_matrix(&s, &coll).determinant(), BigInt::from(1));
        assert!(!numeric_fullness(&s, &coll[1..]));
    }

    #[test]
    fn intersection_pattern_of_base_bundles() {
        for f in [samples::p2_mu3(), samples::p1p1_mu2(), samples::p123()] {
            let s = minimal_resolution(&f);
            let n = s.n_points();
            for b in build_collection(&s) {
                for k in b.point..n {
                    for p in 1..=s.chain_len(k) {
                        let expected = i64::from(b.point == k && p == 1)
                            + i64::from(k == n - 1 && p == s.chain_len(n - 1));
                        assert_eq!(s.degree_on(&b.classes[0], s.position(k, p)), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn p2_collection() {
        let s = minimal_resolution(&samples::p2());
        let blocks = build_collection(&s);
        assert!(blocks.iter().all(|b| b.classes.len() == 1 && b.twist.is_empty()));
        let coll = flatten(&blocks);
        assert!(verify_semiorthogonality(&s, &coll));
        let g = gram_matrix(&s, &coll);
        assert_eq!(g[(0, 1)], BigInt::from(3));
        assert_eq!(g[(0, 2)], BigInt::from(6));
        assert!(numeric_fullness(&s, &coll));
        let swapped = vec![coll[1].clone(), coll[0].clone(), coll[2].clone()];
        assert!(!verify_semiorthogonality(&s, &swapped));
    }

    #[test]
    fn adherence_is_sensitive_to_exceptional_degrees() {
        let s = minimal_resolution(&samples::p2_mu3());
        let p = ip_cokernel(&s);
        let kernel = kernel_basis(&p.ip);
        assert!(kernel.cols() > 0);
        let pullback: Vec<i64> = p
            .basis
            .mul_vec(&kernel.column(0))
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        let pullback = DivisorClass::new(pullback);
        assert!(s.exceptional_degrees(&pullback).iter().all(|&d| d == 0));
        for b in build_collection(&s) {
            let shifted = |c: &DivisorClass| AdherentBlock {
                point: b.point,
                classes: b.classes.iter().map(|x| x + c).collect(),
                twist: b.twist.clone(),
            };
            assert!(verify_adherence(&s, &shifted(&pullback)));
            assert!(!verify_adherence(&s, &shifted(&s.divisor(b.point, 1))));
        }
    }

    #[test]
    fn untwisting() {
        let f = samples::p123();
        let s = minimal_resolution(&f);
        let u = untwist(&s).expect("torsion-free");
        assert!(u.blocks.iter().all(|b| verify_adherence(&s, b)));
        assert!(verify_semiorthogonality(&s, &flatten(&u.blocks)));
        for b in &u.blocks {
            for k in b.point..s.n_points() {
                for p in 1..=s.chain_len(k) {
                    let expected = i64::from(b.point == k && p == 1) + s.d(k, p) - 2;
                    assert_eq!(s.degree_on(&b.classes[0], s.position(k, p)), expected);
                }
            }
        }
        assert!(untwist(&minimal_resolution(&samples::p2_mu3())).is_none());
        assert!(untwist(&minimal_resolution(&samples::p1p1_mu2())).is_none());

        let s = minimal_resolution(&PointOrdering::smooth_last(&f).apply(&f));
        let u = untwist(&s).unwrap();
        assert!(s.exceptional_degrees(&u.m).iter().all(|&d| d == 0));
    }

    #[test]
    fn reports() {
        let w = wpp_fan([1, 2, 3]).unwrap();
        let r = sod_report(&w.fan, PointOrdering::identity());
        assert_eq!(names(&r), ["k", "k[z]/z^2", "k[z]/z^3"]);
        assert!(r.beta.is_zero() && r.is_untwisted() && r.perf_valid);
        assert_eq!(r.render(), "D^b(X) = < D^b(k), D^b(k[z]/z^2), D^b(k[z]/z^3) >");

        for d in 2..=6 {
            let w = wpp_fan([1, 1, d]).unwrap();
            let r = sod_report(&w.fan, PointOrdering::first(2));
            assert_eq!(r.blocks[0].algebra.generators(), (d - 1) as usize);
            assert!(r.blocks[0].algebra.is_square_zero());
            assert_eq!(names(&r)[1..], ["k", "k"]);
            assert!(r.perf_valid);
        }

        let r = sod_report(&samples::p2_mu3(), PointOrdering::identity());
        assert_eq!(names(&r), vec!["k[z]/z^3"; 3]);
        assert_eq!(r.beta.order(), Some(BigInt::from(3)));
        assert!(!r.is_untwisted());
        assert!(r.render().starts_with("D^b(X, beta)"));

        let r = sod_report(&samples::p1p1_mu2(), PointOrdering { rotate: 1, reflect: true });
        assert_eq!(names(&r), vec!["k[z]/z^2"; 4]);
        assert_eq!(r.beta.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn reflection_inverts_types() {
        let f = wpp_fan([2, 3, 11]).unwrap().fan;
        let a = sod_report(&f, PointOrdering::identity());
        let b = sod_report(&f, PointOrdering { rotate: 0, reflect: true });
        for blk in &b.blocks {
            let orig = a.blocks.iter().find(|x| x.point == blk.point).unwrap();
            assert_eq!(orig.ty.r(), blk.ty.r());
            if !orig.ty.is_smooth() {
                assert_eq!((orig.ty.a() * blk.ty.a()) % orig.ty.r(), 1);
                assert_eq!(orig.ds.iter().rev().copied().collect::<Vec<_>>(), blk.ds);
            }
        }
    }

    fn ordered_fan() -> impl Strategy<Value = (Fan, PointOrdering)> {
        crate::testutil::random_fan().prop_flat_map(|f| {
            let n = f.len();
            (Just(f), 0..n, any::<bool>()).prop_map(|(f, rotate, reflect)| (f, PointOrdering { rotate, reflect }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn collections_are_full_and_exceptional((f, o) in ordered_fan()) {
            let r = sod_report(&f, o);
            let s = &r.surface;
            prop_assert_eq!(r.blocks.len(), s.n_points());
            let coll = flatten(&r.collection);
            prop_assert_eq!(coll.len(), s.len());
            prop_assert!(r.collection.iter().all(|b| verify_adherence(s, b)));
            prop_assert!(verify_semiorthogonality(s, &coll));
            prop_assert!(numeric_fullness(s, &coll));

            let n = s.n_points();
            for b in &r.collection {
                for (p, &t) in b.twist.iter().enumerate() {
                    let last = b.point == n - 1 && p + 1 == s.chain_len(n - 1);
                    prop_assert_eq!(t, 2 - s.d(b.point, p + 1) + i64::from(last));
                }
            }

            prop_assert_eq!(r.is_untwisted(), brauer_from_rays(&f).is_trivial());
            if let Some(u) = &r.untwisted {
                prop_assert!(r.beta.is_zero());
                prop_assert!(u.blocks.iter().all(|b| verify_adherence(s, b)));
                prop_assert!(verify_semiorthogonality(s, &flatten(&u.blocks)));
            }

            let mut dims: Vec<usize> = r.blocks.iter().map(|b| b.algebra.expected_dim()).collect();
            let mut orders: Vec<usize> = f.orders().iter().map(|&x| x as usize).collect();
            dims.sort_unstable();
            orders.sort_unstable();
            prop_assert_eq!(dims, orders);
        }
    }
}
