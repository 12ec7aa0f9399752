//! The golden-example suite behind `toricsod selftest`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::Report;
use crate::brauer_groth::{
    brauer_class_of, g0_ext1_check, g0_twisted, g0_untwisted, ip_cokernel, mukai_pairing,
    standard_twist, DeltaFunction, MukaiVector,
};
use crate::exactalg::{smith_normal_form, FgAbelianGroup, IntMatrix};
use crate::generators::{
    generator_classes, higher_pushforward_vanishes, reflexive_pushforward_test, wpp_generators,
};
use crate::hjfrac::{dual_fraction, hj_eval, hj_expand, inverse_type, SingularityType};
use crate::kkalg::{
    enumerate_words, is_commutative, kk_presentation, monomial_basis, opposite_check,
    relation_monomials, KKPresentation, Word,
};
use crate::resolution::{intersection_number, minimal_resolution, DivisorClass};
use crate::sodbuilder::{
    build_collection, flatten, numeric_fullness, sod_report, untwist, verify_adherence,
    verify_semiorthogonality, PointOrdering, SODReport,
};
use crate::toricfan::{
    brauer_from_rays, divisor_class_groups, fan_from_unordered, samples, wpp_fan, Fan, Ray,
};

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub corrupt_kk_table: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ty(r: i64, a: i64) -> SingularityType {
    SingularityType::new(r, a).expect("valid type")
}

fn names(r: &SODReport) -> Vec<String> {
    r.blocks.iter().map(|b| b.algebra.name()).collect()
}

fn cyclic(n: i64) -> FgAbelianGroup {
    FgAbelianGroup::from_invariants(0, &[BigInt::from(n)])
}

fn free(n: usize) -> FgAbelianGroup {
    FgAbelianGroup::from_invariants(n, &[])
}

fn kk_75(opts: Options) -> Check {
    let t = ty(7, 5);
    let p = if opts.corrupt_kk_table {
        KKPresentation::with_forbidden(t, relation_monomials(&[4, 3]))
    } else {
        kk_presentation(t)
    };
    let basis = monomial_basis(&p).map_err(|e| format!("dimension check: {e}"))?;
    ensure(basis.len() == 7, || format!("basis has {} words", basis.len()))?;
    let rel: BTreeSet<String> = p.relation_strings().into_iter().collect();
    let expected: BTreeSet<String> = ["z1^4", "z2^2", "z1*z2", "z2*z1^3"].iter().map(|s| s.to_string()).collect();
    ensure(rel == expected, || format!("relations {rel:?}"))?;
    ensure(p.cs() == [4, 2], || format!("cs = {:?}", p.cs()))?;
    let dual = dual_fraction(t).map_err(|e| e.to_string())?;
    ensure(dual.digits() == [4, 2], || format!("dual fraction {dual}"))
}

fn hj_sweep() -> Check {
    for r in 2..=200i64 {
        for a in (1..r).filter(|a| a.gcd(&r) == 1) {
            let t = ty(r, a);
            let e = hj_expand(t);
            ensure(hj_eval(&e) == Ok(t), || format!("round trip fails for {t}"))?;
            let inv = inverse_type(t).map_err(|e| e.to_string())?;
            ensure(e.reversed() == hj_expand(inv), || format!("reversal fails for {t}"))?;
            if r <= 60 {
                let p = kk_presentation(t);
                let dim = monomial_basis(&p).map_err(|e| format!("{t}: {e}"))?.len();
                ensure(dim == r as usize, || format!("dim K{t} = {dim}"))?;
                let comm = is_commutative(&p).map_err(|e| e.to_string())?;
                ensure(comm == (a == 1 || a == r - 1), || format!("commutativity of K{t}"))?;
            }
            if r <= 30 {
                ensure(opposite_check(t) == Ok(true), || format!("opposite check fails for {t}"))?;
            }
        }
    }
    Ok(())
}

fn p123() -> Check {
    let f = wpp_fan([1, 2, 3]).map_err(|e| e.to_string())?.fan;
    let mut orders = f.orders();
    orders.sort_unstable();
    ensure(orders == [1, 2, 3], || format!("orders {orders:?}"))?;
    let groups = divisor_class_groups(&f);
    ensure(groups.cl.is_isomorphic(&free(1)), || format!("Cl = {}", groups.cl))?;
    ensure(groups.pic_rank == 1, || "Picard rank".into())?;
    ensure(brauer_from_rays(&f).is_trivial(), || "Br nontrivial".into())?;
    let r = sod_report(&f, PointOrdering::identity());
    ensure(names(&r) == ["k", "k[z]/z^2", "k[z]/z^3"], || format!("algebras {:?}", names(&r)))?;
    ensure(r.perf_valid && r.beta.is_zero(), || "perf_valid or beta".into())?;
    ensure(g0_untwisted(&f).is_isomorphic(&free(3)), || "G0".into())
}

fn p11d() -> Check {
    for d in 2..=12i64 {
        let f = wpp_fan([1, 1, d]).map_err(|e| e.to_string())?.fan;
        let s = minimal_resolution(&f);
        let chains: Vec<Vec<i64>> = (0..3).map(|i| s.chain_digits(i)).filter(|c| !c.is_empty()).collect();
        ensure(chains == [vec![d]], || format!("P(1,1,{d}) chains {chains:?}"))?;
        let r = sod_report(&f, PointOrdering::first(2));
        let k = &r.blocks[0].algebra;
        ensure(k.source_type() == ty(d, 1), || format!("first point is {}", k.source_type()))?;
        ensure(k.generators() == (d - 1) as usize && k.is_square_zero(), || format!("K({d},1) = {k}"))?;
        let dim = monomial_basis(k).map_err(|e| e.to_string())?.len();
        ensure(dim == d as usize, || format!("dim K({d},1) = {dim}"))?;
        ensure(names(&r)[1..] == ["k", "k"], || format!("algebras {:?}", names(&r)))?;
        ensure(r.perf_valid, || format!("perf_valid fails for P(1,1,{d})"))?;
    }
    Ok(())
}

/// Variant relation set for 1/11(1,8) with `z2^2*z1^2` in place of `z2^2*z1^3`.
pub fn p2311_variant_relations() -> Vec<Word> {
    vec![
        Word::from_runs([(1, 4)]),
        Word::from_runs([(1, 1), (2, 1)]),
        Word::from_runs([(2, 2), (1, 2)]),
        Word::from_runs([(2, 3)]),
    ]
}

fn p2311() -> Check {
    let f = wpp_fan([2, 3, 11]).map_err(|e| e.to_string())?.fan;
    let r = sod_report(&f, PointOrdering::identity());
    let dims: Vec<usize> = r.blocks.iter().map(|b| b.algebra.expected_dim()).collect();
    ensure(dims == [2, 3, 11], || format!("dims {dims:?}"))?;
    let [a2, a3, a11] = [&r.blocks[0].algebra, &r.blocks[1].algebra, &r.blocks[2].algebra];
    ensure(a2.name() == "k[z]/z^2", || a2.to_string())?;
    ensure(a3.generators() == 2 && a3.cs() == [2, 2] && a3.is_square_zero(), || a3.to_string())?;
    ensure(a11.generators() == 2, || a11.to_string())?;
    let basis = monomial_basis(a11).map_err(|e| e.to_string())?;
    ensure(basis.len() == 11, || format!("order-11 basis has {} words", basis.len()))?;
    let variant = p2311_variant_relations();
    let variant_dim = enumerate_words(2, &variant, 100).len();
    ensure(variant_dim == 10, || format!("variant relation set gives dim {variant_dim}"))?;
    let table: BTreeSet<&Word> = a11.forbidden().iter().collect();
    ensure(table != variant.iter().collect(), || "relation sets coincide".into())
}

fn p2mu3() -> Check {
    let f = samples::p2_mu3();
    let s = minimal_resolution(&f);
    let p = ip_cokernel(&s);
    ensure(brauer_from_rays(&f).is_isomorphic(&cyclic(3)), || "ray presentation".into())?;
    ensure(p.br.is_isomorphic(&cyclic(3)), || "IP presentation".into())?;
    let r = sod_report(&f, PointOrdering::identity());
    ensure(r.beta.order() == Some(BigInt::from(3)), || format!("beta = {}", r.beta))?;
    ensure(names(&r) == vec!["k[z]/z^3"; 3], || format!("algebras {:?}", names(&r)))?;
    let rel = &r.beta_relations;
    ensure(rel.all_hold() && rel.gorenstein_relation == Some(true), || format!("{rel:?}"))?;
    ensure(rel.stated_prime_relation && rel.stated_step_relation, || "stated relations".into())?;
    let b = standard_twist(&s);
    ensure(g0_twisted(&s, &b).is_isomorphic(&free(3)), || "twisted G0".into())?;
    ensure(g0_ext1_check(&s, &b), || "Ext1 check".into())?;
    ensure(untwist(&s).is_none(), || "untwist succeeded".into())
}

fn p1p1mu2() -> Check {
    let f = samples::p1p1_mu2();
    let s = minimal_resolution(&f);
    ensure(brauer_from_rays(&f).is_isomorphic(&cyclic(2)), || "ray presentation".into())?;
    ensure(ip_cokernel(&s).br.is_isomorphic(&cyclic(2)), || "IP presentation".into())?;
    let r = sod_report(&f, PointOrdering::identity());
    ensure(names(&r) == vec!["k[z]/z^2"; 4], || format!("algebras {:?}", names(&r)))?;
    ensure(untwist(&s).is_none(), || "untwist succeeded".into())?;
    ensure(r.beta.order() == Some(BigInt::from(2)), || format!("beta = {}", r.beta))
}

/// Primitive rays in `[−4, 4]²` with 3 to 6 rays and orders at most 12.
pub fn random_fan(rng: &mut impl Rng) -> Fan {
    loop {
        let n = rng.gen_range(3..=6);
        let rays: Vec<Ray> = (0..n)
            .map(|_| [rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4)])
            .filter(|v| v[0].gcd(&v[1]) == 1)
            .collect();
        if let Ok(f) = fan_from_unordered(&rays) {
            if f.orders().iter().all(|&r| r <= 12) {
                return f;
            }
        }
    }
}

fn suite() -> Vec<Fan> {
    let mut fans = vec![samples::p2(), samples::p123(), samples::p1p1_mu2(), samples::p2_mu3()];
    for w in [[1, 2, 3], [2, 3, 11], [1, 3, 5], [2, 5, 7]] {
        fans.push(wpp_fan(w).expect("coprime").fan);
    }
    fans.extend((2..=12).map(|d| wpp_fan([1, 1, d]).expect("coprime").fan));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    fans.extend((0..20).map(|_| random_fan(&mut rng)));
    fans
}

fn collections() -> Check {
    for f in suite() {
        for o in [
            PointOrdering::identity(),
            PointOrdering::smooth_last(&f),
            PointOrdering { rotate: 1, reflect: true },
        ] {
            let s = minimal_resolution(&o.apply(&f));
            let blocks = build_collection(&s);
            let coll = flatten(&blocks);
            let tag = || format!("{:?} with {o:?}", f.rays());
            ensure(blocks.iter().all(|b| verify_adherence(&s, b)), || format!("adherence: {}", tag()))?;
            ensure(verify_semiorthogonality(&s, &coll), || format!("vanishing: {}", tag()))?;
            ensure(numeric_fullness(&s, &coll), || format!("fullness: {}", tag()))?;
        }
    }
    Ok(())
}

fn generators() -> Check {
    for b in 2..=20i64 {
        for a in (1..b).filter(|a| a.gcd(&b) == 1) {
            // Points ordered as 1/b(1,a), 1/a(1,b), smooth.
            let w = [b, a, 1];
            let closed = wpp_generators(w).map_err(|e| e.to_string())?;
            ensure(closed == [-b - 1, -b, 0], || format!("P(1,{a},{b}): {closed:?}"))?;
        }
    }
    for w1 in 1..=30i64 {
        for w2 in 1..=30i64 {
            for w3 in 1..=30i64 {
                if w1.gcd(&w2) != 1 || w2.gcd(&w3) != 1 || w1.gcd(&w3) != 1 {
                    continue;
                }
                let w = [w1, w2, w3];
                let s = minimal_resolution(&wpp_fan(w).map_err(|e| e.to_string())?.fan);
                let g = generator_classes(&s).map_err(|e| format!("{w:?}: {e}"))?;
                let degrees: Vec<BigInt> = g.degrees().ok_or("Cl rank")?;
                let closed: Vec<BigInt> = wpp_generators(w).map_err(|e| e.to_string())?.iter().map(|&x| BigInt::from(x)).collect();
                ensure(degrees == closed, || format!("{w:?}: {degrees:?} vs {closed:?}"))?;
                let n = g.classes.len();
                ensure(g.classes[n - 1] == g.c, || format!("{w:?}: R_n ≠ C"))?;
                let mut prev = &g.canonical + &g.c;
                for i in 0..n {
                    ensure(&g.classes[i] - &prev == g.divisor_classes[i], || format!("{w:?}: telescoping at {i}"))?;
                    prev = g.classes[i].clone();
                    let own = &g.base_degrees[i][i];
                    ensure(reflexive_pushforward_test(own) && higher_pushforward_vanishes(own), || {
                        format!("{w:?}: predicates on block {i}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&a);
        ensure(&(&snf.u * &a) * &snf.v == snf.s, || format!("U A V ≠ S for {rows:?}"))?;
        ensure(snf.u.is_unimodular() && snf.v.is_unimodular(), || format!("not unimodular for {rows:?}"))?;
        ensure(snf.s.is_diagonal(), || format!("S not diagonal for {rows:?}"))?;
        let d = snf.diagonal();
        ensure(d.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || format!("divisibility for {rows:?}"))?;
    }
    for _ in 0..50 {
        let f = random_fan(&mut rng);
        let s = minimal_resolution(&f);
        let p = ip_cokernel(&s);
        let orders = f.orders();
        let g = orders.iter().fold(0i64, |acc, &r| acc.gcd(&r));
        let br = brauer_from_rays(&f);
        ensure(br.is_isomorphic(&cyclic(g)) || (g == 1 && br.is_trivial()), || format!("{:?}: Br vs gcd", f.rays()))?;
        ensure(p.br.is_isomorphic(&br), || format!("{:?}: presentations differ", f.rays()))?;
        for i in 0..orders.len() {
            let h = orders.iter().enumerate().filter(|&(j, _)| j != i).fold(0i64, |acc, (_, &r)| acc.gcd(&r));
            ensure(h == g, || format!("{:?}: leave-one-out at {i}", f.rays()))?;
        }
        let m = s.exceptional_index().len();
        for _ in 0..100 {
            let d = DivisorClass::new((0..s.len()).map(|_| rng.gen_range(-5..=5)).collect());
            let ip = DeltaFunction::of_class(&s, &d);
            ensure(ip.coeffs.len() == m && brauer_class_of(&p, &ip).is_zero(), || format!("{:?}: B∘IP ≠ 0", f.rays()))?;
        }
        for &k in &s.exceptional_index() {
            for &l in &s.exceptional_index() {
                let v = MukaiVector { rank: 0, cls: DivisorClass::unit(s.len(), k), chi: rng.gen_range(-3..=3) };
                let w = MukaiVector { rank: 0, cls: DivisorClass::unit(s.len(), l), chi: rng.gen_range(-3..=3) };
                ensure(mukai_pairing(&s, &v, &w) == -intersection_number(&s, &v.cls, &w.cls), || {
                    format!("{:?}: Mukai sign", f.rays())
                })?;
            }
        }
    }
    Ok(())
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "K(7,5) presentation, dual fraction and basis"),
    (2, "continued fractions and algebra dimensions"),
    (3, "P(1,2,3)"),
    (4, "P(1,1,d), d <= 12"),
    (5, "P(2,3,11)"),
    (6, "P2/mu3"),
    (7, "(P1xP1)/mu2"),
    (8, "exceptional collections"),
    (9, "reflexive generators"),
    (10, "property suite"),
];

fn run_one(id: u8, opts: Options) -> Check {
    match id {
        1 => kk_75(opts),
        2 => hj_sweep(),
        3 => p123(),
        4 => p11d(),
        5 => p2311(),
        6 => p2mu3(),
        7 => p1p1mu2(),
        8 => collections(),
        9 => generators(),
        _ => properties(),
    }
}

pub fn run_check(id: u8, opts: Options) -> CheckResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1);
    let outcome = catch_unwind(AssertUnwindSafe(|| run_one(id, opts)))
        .unwrap_or_else(|_| Err("panicked".to_string()));
    CheckResult {
        id,
        name,
        pass: outcome.is_ok(),
        detail: outcome.err().unwrap_or_default(),
    }
}

pub fn run_selftest(opts: Options) -> Vec<CheckResult> {
    CRITERIA.iter().map(|&(id, _)| run_check(id, opts)).collect()
}

pub fn render_line(c: &CheckResult) -> String {
    let status = if c.pass { "PASS" } else { "FAIL" };
    if c.detail.is_empty() {
        format!("{status} {:>2} {}", c.id, c.name)
    } else {
        format!("{status} {:>2} {}: {}", c.id, c.name, c.detail)
    }
}

pub fn report(results: &[CheckResult]) -> Report {
    let passed = results.iter().filter(|c| c.pass).count();
    let mut text = String::new();
    for c in results {
        let _ = writeln!(text, "{}", render_line(c));
    }
    let _ = writeln!(text, "{passed}/{} passed", results.len());
    let checks: Vec<_> = results
        .iter()
        .map(|c| json!({"id": c.id, "name": c.name, "pass": c.pass, "detail": c.detail}))
        .collect();
    Report {
        json: json!({"checks": checks, "passed": passed, "failed": results.len() - passed}),
        text,
        success: passed == results.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_table_trips_the_dimension_check() {
        let ok = run_check(1, Options::default());
        assert!(ok.pass, "{}", ok.detail);
        let bad = run_check(1, Options { corrupt_kk_table: true });
        assert!(!bad.pass);
        assert!(bad.detail.starts_with("dimension check"));
    }

    #[test]
    fn random_fans_are_deterministic() {
        let a: Vec<Fan> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..5).map(|_| random_fan(&mut rng)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b: Vec<Fan> = (0..5).map(|_| random_fan(&mut rng)).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.orders().iter().all(|&r| r <= 12)));
    }
}
