use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::brauer_groth::{brauer_class_of, ip_cokernel, DeltaFunction};
use crate::error::Result;
use crate::exactalg::{FgAbelianGroup, GroupElement};
use crate::generators::generator_classes;
use crate::hjfrac::{dual_fraction, SingularityType};
use crate::kkalg::{is_commutative, kk_presentation, monomial_basis};
use crate::resolution::{chain_summaries, minimal_resolution, ResolvedSurface};
use crate::sodbuilder::{PointOrdering, SODReport};
use crate::toricfan::{brauer_from_rays, divisor_class_groups, ClassGroups, Fan};

/// A rendered result in both output formats.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub success: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            success: true,
        }
    }
}

fn big(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

pub(crate) fn group_json(g: &FgAbelianGroup) -> Value {
    json!({"free_rank": g.free_rank(), "torsion": bigs(g.invariant_factors())})
}

pub(crate) fn element_json(g: &GroupElement) -> Value {
    let order = g.order().map_or(Value::Null, |o| big(&o));
    json!({"order": order, "coords": bigs(&g.coords())})
}

fn class_json(groups: &ClassGroups, g: &GroupElement) -> Value {
    let degree = groups.degree(g).map_or(Value::Null, |d| big(&d));
    json!({"free": bigs(g.free()), "torsion": bigs(g.torsion()), "degree": degree})
}

fn class_text(groups: &ClassGroups, g: &GroupElement) -> String {
    match groups.degree(g) {
        Some(d) => format!("O({d})"),
        None => format!("{g}"),
    }
}

fn ordering_json(o: PointOrdering) -> Value {
    json!({"rotate": o.rotate, "reflect": o.reflect})
}

pub fn analyze(f: &Fan, o: PointOrdering) -> Report {
    let g = o.apply(f);
    let groups = divisor_class_groups(f);
    let br = brauer_from_rays(f);
    let points: Vec<Value> = g
        .points()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            json!({
                "point": o.point_map(f.len(), j) + 1,
                "r": p.ty.r(),
                "a": p.ty.a(),
                "type": p.ty.to_string(),
                "gorenstein": p.gorenstein,
                "smooth": p.ty.is_smooth(),
            })
        })
        .collect();
    let mut text = String::new();
    for (j, p) in g.points().iter().enumerate() {
        let kind = if p.ty.is_smooth() {
            "smooth"
        } else if p.gorenstein {
            "Gorenstein"
        } else {
            "non-Gorenstein"
        };
        let _ = writeln!(text, "x{}: {} ({kind})", o.point_map(f.len(), j) + 1, p.ty);
    }
    let _ = writeln!(text, "Cl(X) = {}", groups.cl);
    let _ = writeln!(text, "rank Pic(X) = {}", groups.pic_rank);
    let _ = writeln!(text, "Br(X) = {br}");
    let json = json!({
        "ordering": ordering_json(o),
        "points": points,
        "orders": g.orders(),
        "class_group": group_json(&groups.cl),
        "pic_rank": groups.pic_rank,
        "brauer": group_json(&br),
        "torsion_free": br.is_trivial(),
    });
    Report::ok(json, text)
}

fn label_json(s: &ResolvedSurface, f: &Fan, o: PointOrdering) -> Vec<Value> {
    s.labels()
        .iter()
        .map(|l| json!({"point": o.point_map(f.len(), l.point) + 1, "p": l.p}))
        .collect()
}

pub fn resolve(f: &Fan, o: PointOrdering) -> Report {
    let s = minimal_resolution(&o.apply(f));
    let chains: Vec<Value> = chain_summaries(&s)
        .iter()
        .map(|c| {
            json!({"point": o.point_map(f.len(), c.point) + 1, "r": c.r, "a": c.a, "ds": c.ds})
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "{} rays on the resolution", s.len());
    for c in chain_summaries(&s) {
        let _ = writeln!(
            text,
            "x{}: 1/{}(1,{}) chain {:?}",
            o.point_map(f.len(), c.point) + 1,
            c.r,
            c.a,
            c.ds
        );
    }
    let json = json!({
        "ordering": ordering_json(o),
        "rays": s.rays(),
        "labels": label_json(&s, f, o),
        "self_intersections": s.self_intersections().iter().map(|d| -d).collect::<Vec<_>>(),
        "chains": chains,
        "class_group": group_json(s.class_group()),
    });
    Report::ok(json, text)
}

pub fn sod(r: &SODReport) -> Report {
    let s = &r.surface;
    let blocks: Vec<Value> = r
        .blocks
        .iter()
        .zip(&r.collection)
        .map(|(b, c)| {
            let collection: Vec<Value> = c
                .classes
                .iter()
                .map(|l| json!({"class": l.coeffs(), "exceptional_degrees": s.exceptional_degrees(l)}))
                .collect();
            json!({
                "point": b.point + 1,
                "r": b.ty.r(),
                "a": b.ty.a(),
                "ds": b.ds,
                "twist": b.twist,
                "algebra": {
                    "generators": b.algebra.generators(),
                    "relations": b.algebra.relation_strings(),
                    "dim": b.algebra.expected_dim(),
                    "name": b.algebra.name(),
                },
                "gorenstein": b.gorenstein,
                "collection": collection,
            })
        })
        .collect();
    let mut text = r.render();
    text.push('\n');
    for b in &r.blocks {
        let _ = writeln!(
            text,
            "x{}: {} ds={:?} twist={:?} algebra {}",
            b.point + 1,
            b.ty,
            b.ds,
            b.twist,
            b.algebra
        );
    }
    let _ = writeln!(text, "beta order {}", r.beta.order().unwrap_or_default());
    let _ = writeln!(text, "untwisted: {}", r.is_untwisted());
    let _ = writeln!(text, "perf_valid: {}", r.perf_valid);
    let json = json!({
        "ordering": ordering_json(r.ordering),
        "decomposition": r.render(),
        "rays": s.rays(),
        "blocks": blocks,
        "beta": element_json(&r.beta),
        "untwisted": r.is_untwisted(),
        "perf_valid": r.perf_valid,
    });
    Report::ok(json, text)
}

pub fn brauer(r: &SODReport) -> Report {
    let rel = &r.beta_relations;
    let order = r.br.order().unwrap_or_default();
    let n = r.blocks.len();
    let per_point: Vec<Value> = (0..n)
        .map(|j| {
            json!({
                "point": r.blocks[j].point + 1,
                "beta": element_json(&rel.betas[j]),
                "beta_prime": element_json(&rel.betas_prime[j]),
            })
        })
        .collect();
    let relations = json!({
        "prime_relation": rel.prime_relation,
        "shift_relation": rel.shift_relation,
        "step_relation": rel.step_relation,
        "stated_prime_relation": rel.stated_prime_relation,
        "stated_step_relation": rel.stated_step_relation,
        "gorenstein_relation": rel.gorenstein_relation,
    });
    let mut text = String::new();
    let _ = writeln!(text, "Br(X) = {}", r.br);
    let _ = writeln!(text, "beta = {} of order {}", r.beta, r.beta.order().unwrap_or_default());
    let json = json!({
        "order": big(&order),
        "group": group_json(&r.br),
        "ray_presentation": group_json(&brauer_from_rays(r.surface.base())),
        "beta": element_json(&r.beta),
        "points": per_point,
        "relations": relations,
    });
    Report::ok(json, text)
}

pub fn g0(s: &ResolvedSurface, b: &DeltaFunction, untwisted: &FgAbelianGroup, twisted: &FgAbelianGroup) -> Report {
    let p = ip_cokernel(s);
    let cls = brauer_class_of(&p, b);
    let check = crate::brauer_groth::g0_ext1_check(s, b);
    let mut text = String::new();
    let _ = writeln!(text, "G0(X) = {untwisted}");
    let _ = writeln!(text, "G0(X, beta) = {twisted}");
    let _ = writeln!(text, "beta order {}", cls.order().unwrap_or_default());
    let _ = writeln!(text, "Ext1 check: {check}");
    let json = json!({
        "untwisted": group_json(untwisted),
        "twist": b.coeffs,
        "brauer_class": element_json(&cls),
        "twisted": group_json(twisted),
        "ext1_check": check,
    });
    Report {
        json,
        text,
        success: check,
    }
}

pub fn kk(t: SingularityType) -> Result<Report> {
    let p = kk_presentation(t);
    let basis = monomial_basis(&p)?;
    let words: Vec<String> = basis.iter().map(ToString::to_string).collect();
    let dual: Vec<i64> = dual_fraction(t).map(|e| e.digits().to_vec()).unwrap_or_default();
    let commutative = is_commutative(&p)?;
    let mut text = String::new();
    let _ = writeln!(text, "K({},{}) = {}", t.r(), t.a(), p);
    let _ = writeln!(text, "basis ({}): {}", words.len(), words.join(", "));
    let json = json!({
        "type": {"r": t.r(), "a": t.a()},
        "dual_fraction": dual,
        "generators": p.generators(),
        "relations": p.relation_strings(),
        "presentation": p.to_string(),
        "name": p.name(),
        "basis": words,
        "dim": basis.len(),
        "commutative": commutative,
        "square_zero": p.is_square_zero(),
    });
    Ok(Report::ok(json, text))
}

pub fn generators(f: &Fan, o: PointOrdering) -> Result<Report> {
    let s = minimal_resolution(&o.apply(f));
    let g = generator_classes(&s)?;
    let groups = s.base_groups();
    let idx = |k: &usize| o.point_map(f.len(), *k) + 1;
    let gens: Vec<Value> = (0..g.classes.len())
        .map(|i| {
            json!({
                "point": idx(&i),
                "class": class_json(groups, &g.classes[i]),
                "rank": g.ranks[i],
                "locally_free_at": g.locally_free_at[i].iter().map(idx).collect::<Vec<_>>(),
                "reflexive_at": g.reflexive_at[i].iter().map(idx).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "C = {}", class_text(groups, &g.c));
    for (i, r) in g.classes.iter().enumerate() {
        let _ = writeln!(text, "R{} = {} (rank {} at x{})", i + 1, class_text(groups, r), g.ranks[i], idx(&i));
    }
    let json = json!({
        "ordering": ordering_json(o),
        "C": class_json(groups, &g.c),
        "K": class_json(groups, &g.canonical),
        "generators": gens,
    });
    Ok(Report::ok(json, text))
}
