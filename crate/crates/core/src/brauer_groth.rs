//! The intersection-pairing presentation of `Br(X)`, Brauer classes of twists, and
//! Grothendieck groups of (twisted) derived categories.

use num_bigint::BigInt;

use crate::exactalg::{cokernel, quotient_by_element, FgAbelianGroup, GroupElement, IntMatrix};
use crate::resolution::{intersection_number, DivisorClass, ResolvedSurface};
use crate::toricfan::{divisor_class_groups, Fan};

/// `f = Σ b_E δ_E`, indexed like `ResolvedSurface::exceptional_index`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaFunction {
    pub coeffs: Vec<i64>,
}

impl DeltaFunction {
    pub fn zero(s: &ResolvedSurface) -> Self {
        DeltaFunction {
            coeffs: vec![0; s.exceptional_index().len()],
        }
    }

    /// `δ_{E_{i,p}}`.
    pub fn delta(s: &ResolvedSurface, i: usize, p: usize) -> Self {
        let pos = s.position(i, p);
        let mut f = Self::zero(s);
        let k = s
            .exceptional_index()
            .iter()
            .position(|&q| q == pos)
            .expect("not an exceptional curve");
        f.coeffs[k] = 1;
        f
    }

    /// `IP(D) = Σ (D·E) δ_E`.
    pub fn of_class(s: &ResolvedSurface, d: &DivisorClass) -> Self {
        DeltaFunction {
            coeffs: s.exceptional_degrees(d),
        }
    }

    pub fn add(&self, other: &DeltaFunction) -> DeltaFunction {
        DeltaFunction {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `IP: Cl(X̃) → Cl(X̃/X)^∨` in a fixed basis of `Cl(X̃)`, and its cokernel `Br(X)`.
#[derive(Clone, Debug)]
pub struct IpPresentation {
    /// Columns: images of the basis classes. Rows: exceptional curves.
    pub ip: IntMatrix,
    /// Columns: toric-divisor representatives of the chosen `Cl(X̃)` basis.
    pub basis: IntMatrix,
    pub br: FgAbelianGroup,
}

pub fn ip_cokernel(s: &ResolvedSurface) -> IpPresentation {
    let basis = s.class_group().generator_lifts().clone();
    let columns: Vec<Vec<BigInt>> = (0..basis.cols())
        .map(|j| {
            let coeffs: Vec<i64> = basis
                .column(j)
                .iter()
                .map(|x| i64::try_from(x).expect("basis coefficients fit in i64"))
                .collect();
            crate::exactalg::to_big(&s.exceptional_degrees(&DivisorClass::new(coeffs)))
        })
        .collect();
    let ip = IntMatrix::from_columns(s.exceptional_index().len(), &columns);
    let br = cokernel(&ip);
    IpPresentation { ip, basis, br }
}

/// The Brauer class map `B`.
pub fn brauer_class_of(p: &IpPresentation, f: &DeltaFunction) -> GroupElement {
    p.br.project_i64(&f.coeffs)
}

/// `β = B(δ_{E_{n,m_n}})`, zero when the last point is smooth.
pub fn standard_beta(s: &ResolvedSurface, p: &IpPresentation) -> GroupElement {
    let n = s.n_points() - 1;
    match s.chain_len(n) {
        0 => p.br.zero(),
        m => brauer_class_of(p, &DeltaFunction::delta(s, n, m)),
    }
}

/// The twist `b_{i,p}` of the standard adherent collection: `2 − d`, or `3 − d` on `E_{n,m_n}`.
pub fn standard_twist(s: &ResolvedSurface) -> DeltaFunction {
    let idx = s.exceptional_index();
    let last = s.n_points() - 1;
    let coeffs = idx
        .iter()
        .map(|&k| {
            let l = s.labels()[k];
            let d = s.self_intersections()[k];
            if l.point == last && l.p == s.chain_len(last) {
                3 - d
            } else {
                2 - d
            }
        })
        .collect();
    DeltaFunction { coeffs }
}

/// The classes `β_i` (point `x_i` last) and `β_i'` (same, opposite orientation) and
/// which relations between them hold.
#[derive(Clone, Debug)]
pub struct BetaRelations {
    pub betas: Vec<GroupElement>,
    pub betas_prime: Vec<GroupElement>,
    /// `β_i' = a_i β_i` for all `i`.
    pub prime_relation: bool,
    /// `β_{i+1}' = −β_i` for all `i`.
    pub shift_relation: bool,
    /// `a_{i+1} β_{i+1} = −β_i` for all `i`, the combination of the two above.
    pub step_relation: bool,
    /// `β_i = a_i β_i'` for all `i`.
    pub stated_prime_relation: bool,
    /// `β_{i+1} = −a_{i+1} β_i` for all `i`.
    pub stated_step_relation: bool,
    /// `β_i = β_1` and `β_i' = −β_1`; `None` unless every point is Gorenstein.
    pub gorenstein_relation: Option<bool>,
}

impl BetaRelations {
    pub fn all_hold(&self) -> bool {
        self.prime_relation
            && self.shift_relation
            && self.step_relation
            && self.gorenstein_relation.unwrap_or(true)
    }
}

pub fn beta_relations(s: &ResolvedSurface, p: &IpPresentation) -> BetaRelations {
    let n = s.n_points();
    let class = |i: usize, p_: usize| brauer_class_of(p, &DeltaFunction::delta(s, i, p_));
    let betas: Vec<GroupElement> = (0..n)
        .map(|i| match s.chain_len(i) {
            0 => p.br.zero(),
            m => class(i, m),
        })
        .collect();
    let betas_prime: Vec<GroupElement> = (0..n)
        .map(|i| match s.chain_len(i) {
            0 => p.br.zero(),
            _ => class(i, 1),
        })
        .collect();
    let a = |i: usize| BigInt::from(s.point(i % n).ty.a());
    let all = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    let gorenstein = s.points().iter().all(|q| q.gorenstein);
    BetaRelations {
        prime_relation: all(&|i| betas_prime[i] == betas[i].scaled(&a(i))),
        shift_relation: all(&|i| betas_prime[(i + 1) % n] == -&betas[i]),
        step_relation: all(&|i| betas[(i + 1) % n].scaled(&a(i + 1)) == -&betas[i]),
        stated_prime_relation: all(&|i| betas[i] == betas_prime[i].scaled(&a(i))),
        stated_step_relation: all(&|i| betas[(i + 1) % n] == (-&betas[i]).scaled(&a(i + 1))),
        gorenstein_relation: gorenstein.then(|| {
            all(&|i| betas[i] == betas[0] && betas_prime[i] == -&betas[0])
        }),
        betas,
        betas_prime,
    }
}

/// `(rank, c_1, χ)` in the Mukai lattice of `X̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiVector {
    pub rank: i64,
    pub cls: DivisorClass,
    pub chi: i64,
}

impl MukaiVector {
    /// The vector `(1, D, χ(O(D)))` of a line bundle.
    pub fn line_bundle(s: &ResolvedSurface, d: &DivisorClass) -> Self {
        MukaiVector {
            rank: 1,
            cls: d.clone(),
            chi: crate::resolution::euler_characteristic(s, d),
        }
    }
}

pub fn mukai_pairing(s: &ResolvedSurface, v: &MukaiVector, w: &MukaiVector) -> i64 {
    v.rank * w.chi + w.rank * v.chi - intersection_number(s, &v.cls, &w.cls)
}

/// `G_0(X) ≅ Z ⊕ Cl(X) ⊕ Z`.
pub fn g0_untwisted(f: &Fan) -> FgAbelianGroup {
    let cl = divisor_class_groups(f).cl;
    FgAbelianGroup::from_invariants(cl.free_rank() + 2, cl.invariant_factors())
}

/// `Z ⊕ Cl(X̃) ⊕ Z` modulo the classes `(0, [E], b_E)`.
pub fn g0_twisted(s: &ResolvedSurface, b: &DeltaFunction) -> FgAbelianGroup {
    let cl = s.class_group();
    let dim = cl.free_rank() + 2;
    let columns: Vec<Vec<BigInt>> = s
        .exceptional_index()
        .iter()
        .zip(&b.coeffs)
        .map(|(&k, &bk)| {
            let e = DivisorClass::unit(s.len(), k);
            let mut col = vec![BigInt::from(0)];
            col.extend(cl.project(&e.to_big()).coords());
            col.push(BigInt::from(bk));
            col
        })
        .collect();
    cokernel(&IntMatrix::from_columns(dim, &columns))
}

/// Compares the torsion of `G_0(X, B(b))` with `Br(X)/⟨B(b)⟩`.
pub fn g0_ext1_check(s: &ResolvedSurface, b: &DeltaFunction) -> bool {
    let p = ip_cokernel(s);
    let quotient = quotient_by_element(&p.br, &brauer_class_of(&p, b));
    g0_twisted(s, b).invariant_factors() == quotient.invariant_factors()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::minimal_resolution;
    use crate::toricfan::{brauer_from_rays, samples, validate_fan};
    use proptest::prelude::*;

    fn order(g: &GroupElement) -> i64 {
        i64::try_from(g.order().unwrap()).unwrap()
    }

    #[test]
    fn ip_presentations() {
        let s = minimal_resolution(&samples::p2_mu3());
        let p = ip_cokernel(&s);
        assert_eq!(p.br.order(), Some(BigInt::from(3)));
        assert_eq!((p.ip.rows(), p.ip.cols()), (6, 7));
        assert!(ip_cokernel(&minimal_resolution(&samples::p123())).br.is_trivial());
        let smooth = ip_cokernel(&minimal_resolution(&samples::p2()));
        assert!(smooth.br.is_trivial());
        assert_eq!(smooth.ip.rows(), 0);
    }

    #[test]
    fn standard_classes() {
        let s = minimal_resolution(&samples::p2_mu3());
        let p = ip_cokernel(&s);
        assert_eq!(order(&standard_beta(&s, &p)), 3);
        assert!(brauer_class_of(&p, &DeltaFunction::zero(&s)).is_zero());
        assert_eq!(brauer_class_of(&p, &standard_twist(&s)), standard_beta(&s, &p));

        let s = minimal_resolution(&samples::p1p1_mu2());
        let p = ip_cokernel(&s);
        assert_eq!(order(&standard_beta(&s, &p)), 2);

        // Smooth point last.
        let s = minimal_resolution(&samples::p123().rotated(2));
        assert_eq!(s.chain_len(2), 0);
        assert!(standard_beta(&s, &ip_cokernel(&s)).is_zero());
    }

    #[test]
    fn gorenstein_beta_relations() {
        let s = minimal_resolution(&samples::p2_mu3());
        let rel = beta_relations(&s, &ip_cokernel(&s));
        assert!(rel.all_hold());
        assert_eq!(rel.gorenstein_relation, Some(true));
        assert!(rel.stated_prime_relation && rel.stated_step_relation);
        assert!(rel.betas.iter().all(|b| order(b) == 3));

        let s = minimal_resolution(&samples::p1p1_mu2());
        let rel = beta_relations(&s, &ip_cokernel(&s));
        assert!(rel.all_hold() && rel.stated_step_relation);
        assert!(rel.betas.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn beta_relation_direction_on_a_non_involutive_type() {
        // All orders are divisible by 5 and x_1 has type 1/5(1,2), with 2·2 ≢ 1 mod 5.
        let f = validate_fan(&[[1, 0], [3, 5], [-1, 0], [-3, -5]]).unwrap();
        assert_eq!(f.orders(), vec![5, 5, 5, 5]);
        assert_eq!(f.points()[0].ty.a(), 2);
        let s = minimal_resolution(&f);
        let p = ip_cokernel(&s);
        assert_eq!(p.br.order(), Some(BigInt::from(5)));
        let rel = beta_relations(&s, &p);
        assert!(rel.prime_relation && rel.shift_relation && rel.step_relation);
        assert!(!rel.stated_prime_relation);
    }

    #[test]
    fn grothendieck_groups() {
        assert!(g0_untwisted(&samples::p123()).is_isomorphic(&FgAbelianGroup::from_invariants(3, &[])));
        let g = g0_untwisted(&samples::p2_mu3());
        assert_eq!(g.free_rank(), 3);
        assert_eq!(g.invariant_factors(), &[BigInt::from(3)]);

        let s = minimal_resolution(&samples::p2_mu3());
        let twisted = g0_twisted(&s, &standard_twist(&s));
        assert!(twisted.is_isomorphic(&FgAbelianGroup::from_invariants(3, &[])));
        assert!(g0_ext1_check(&s, &standard_twist(&s)));
        let untwisted = g0_twisted(&s, &DeltaFunction::zero(&s));
        assert!(untwisted.is_isomorphic(&g0_untwisted(&samples::p2_mu3())));
        assert!(g0_ext1_check(&s, &DeltaFunction::zero(&s)));

        let s = minimal_resolution(&samples::p123());
        assert!(g0_twisted(&s, &standard_twist(&s)).is_isomorphic(&FgAbelianGroup::from_invariants(3, &[])));
    }

    #[test]
    fn mukai_examples() {
        let s = minimal_resolution(&samples::p2_mu3());
        let o = MukaiVector { rank: 1, cls: s.zero_class(), chi: 0 };
        let pt = MukaiVector { rank: 0, cls: s.zero_class(), chi: 1 };
        assert_eq!(mukai_pairing(&s, &o, &pt), 1);
    }

    fn random_resolved() -> impl Strategy<Value = ResolvedSurface> {
        crate::testutil::random_fan().prop_map(|f| minimal_resolution(&f))
    }

    proptest! {
        #[test]
        fn presentations_agree(s in random_resolved()) {
            let p = ip_cokernel(&s);
            prop_assert!(p.br.is_isomorphic(&brauer_from_rays(s.base())));
            let rel = beta_relations(&s, &p);
            prop_assert!(rel.all_hold());
            prop_assert!(g0_ext1_check(&s, &standard_twist(&s)));
            prop_assert!(g0_ext1_check(&s, &DeltaFunction::zero(&s)));
            let beta = standard_beta(&s, &p);
            if s.chain_len(s.n_points() - 1) > 0 {
                prop_assert_eq!(beta.order(), p.br.order());
            }
        }

        #[test]
        fn brauer_map_kills_line_bundles(s in random_resolved(), c in prop::collection::vec(-5i64..=5, 24), b in prop::collection::vec(-3i64..=3, 24)) {
            let p = ip_cokernel(&s);
            let d = crate::testutil::cycle_class(&c, s.len());
            let ip = DeltaFunction::of_class(&s, &d);
            prop_assert!(brauer_class_of(&p, &ip).is_zero());
            let m = ip.coeffs.len();
            let f = DeltaFunction { coeffs: (0..m).map(|k| b[k % b.len()]).collect() };
            prop_assert_eq!(brauer_class_of(&p, &f.add(&ip)), brauer_class_of(&p, &f));
        }

        #[test]
        fn mukai_matches_intersection_on_exceptional_vectors(s in random_resolved(), b1 in -3i64..=3, b2 in -3i64..=3) {
            for &k in &s.exceptional_index() {
                for &l in &s.exceptional_index() {
                    let v = MukaiVector { rank: 0, cls: DivisorClass::unit(s.len(), k), chi: b1 };
                    let w = MukaiVector { rank: 0, cls: DivisorClass::unit(s.len(), l), chi: b2 };
                    prop_assert_eq!(mukai_pairing(&s, &v, &w), -intersection_number(&s, &v.cls, &w.cls));
                }
            }
        }
    }
}
