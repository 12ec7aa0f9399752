use num_integer::Integer;
use proptest::prelude::*;

use crate::resolution::DivisorClass;
use crate::toricfan::{fan_from_unordered, Fan, Ray};

/// Valid fans with at most 6 rays, coordinates in [−4, 4] and orders at most 12.
pub fn random_fan() -> impl Strategy<Value = Fan> {
    prop::collection::vec((-4i64..=4, -4i64..=4), 3..=6).prop_filter_map("valid fan", |pts| {
        let rays: Vec<Ray> = pts
            .into_iter()
            .filter(|&(x, y)| x.gcd(&y) == 1)
            .map(|(x, y)| [x, y])
            .collect();
        let f = fan_from_unordered(&rays).ok()?;
        f.orders().iter().all(|&r| r <= 12).then_some(f)
    })
}

/// A class with `n` coefficients taken cyclically from `c`.
pub fn cycle_class(c: &[i64], n: usize) -> DivisorClass {
    DivisorClass::new((0..n).map(|k| c[k % c.len()]).collect())
}
