//! Kalck–Karmazyn algebras `K(r,a)` as monomial algebras with explicit word bases.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::hjfrac::{dual_fraction, inverse_type, SingularityType};

/// A monomial in the generators `z_1, ..., z_l`, stored as runs `(generator, exponent)`.
///
/// Adjacent runs always have distinct generators and every exponent is positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<(usize, u32)>,
}

impl Word {
    pub fn unit() -> Self {
        Word::default()
    }

    /// Builds a word from `(generator, exponent)` pairs, dropping zero exponents
    /// and merging equal neighbours.
    pub fn from_runs(runs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut w = Word::unit();
        for (g, e) in runs {
            w.push(g, e);
        }
        w
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word::from_runs(letters.iter().map(|&g| (g, 1)))
    }

    fn push(&mut self, g: usize, e: u32) {
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((last, k)) if *last == g => *k += e,
            _ => self.runs.push((g, e)),
        }
    }

    pub fn runs(&self) -> &[(usize, u32)] {
        &self.runs
    }

    pub fn letters(&self) -> Vec<usize> {
        self.runs
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.runs {
            w.push(g, e);
        }
        w
    }

    /// Whether `f` occurs as a contiguous factor.
    pub fn contains_factor(&self, f: &Word) -> bool {
        let k = f.runs.len();
        match k {
            0 => true,
            1 => {
                let (g, e) = f.runs[0];
                self.runs.iter().any(|&(h, x)| h == g && x >= e)
            }
            _ => self.runs.windows(k).any(|win| {
                let (first, last) = (f.runs[0], f.runs[k - 1]);
                win[0].0 == first.0
                    && win[0].1 >= first.1
                    && win[k - 1].0 == last.0
                    && win[k - 1].1 >= last.1
                    && win[1..k - 1] == f.runs[1..k - 1]
            }),
        }
    }

    /// Reverses the word and relabels `z_j` as `z_{l+1-j}`.
    pub fn opposite(&self, l: usize) -> Word {
        Word::from_runs(self.runs.iter().rev().map(|&(g, e)| (l + 1 - g, e)))
    }

    fn render(&self, single: bool) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(g, e)| {
                let name = if single { "z".to_string() } else { format!("z{g}") };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for Word {
    /// Shortlex on letter sequences with `z_1 < z_2 < ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters().cmp(&other.letters()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Words over `l` generators avoiding every forbidden factor, in shortlex order.
///
/// Stops after `limit + 1` words so that infinite or oversized algebras are detected.
pub fn enumerate_words(l: usize, forbidden: &[Word], limit: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut queue = VecDeque::from([Word::unit()]);
    while let Some(w) = queue.pop_front() {
        for g in 1..=l {
            let mut next = w.clone();
            next.push(g, 1);
            if forbidden.iter().any(|f| next.contains_factor(f)) {
                continue;
            }
            if out.len() > limit {
                return out;
            }
            out.push(next.clone());
            queue.push_back(next);
        }
    }
    out
}

/// Presentation `k<z_1..z_l>/(forbidden)` of the algebra attached to a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KKPresentation {
    source: SingularityType,
    cs: Vec<i64>,
    forbidden: Vec<Word>,
}

pub fn kk_presentation(t: SingularityType) -> KKPresentation {
    let cs = match dual_fraction(t) {
        Ok(e) => e.digits().to_vec(),
        Err(_) => Vec::new(),
    };
    let forbidden = relation_monomials(&cs);
    KKPresentation {
        source: t,
        cs,
        forbidden,
    }
}

/// The relation monomials determined by the dual digits `c_1..c_l`.
pub fn relation_monomials(cs: &[i64]) -> Vec<Word> {
    let l = cs.len();
    let exp = |j: usize, shift: i64| (cs[j - 1] - shift) as u32;
    let mut rels: Vec<Word> = (1..=l).map(|j| Word::from_runs([(j, exp(j, 0))])).collect();
    for j in 1..=l {
        for k in j + 1..=l {
            rels.push(Word::from_runs([(j, 1), (k, 1)]));
        }
    }
    for j in 2..=l {
        for k in (1..j).rev() {
            let mut runs = vec![(j, exp(j, 1))];
            runs.extend((k + 1..j).rev().map(|q| (q, exp(q, 2))));
            runs.push((k, exp(k, 1)));
            rels.push(Word::from_runs(runs));
        }
    }
    rels
}

impl KKPresentation {
    /// A presentation with a replaced relation table, used to exercise the basis guard.
    pub fn with_forbidden(t: SingularityType, forbidden: Vec<Word>) -> Self {
        let mut p = kk_presentation(t);
        p.forbidden = forbidden;
        p
    }

    pub fn source_type(&self) -> SingularityType {
        self.source
    }

    pub fn generators(&self) -> usize {
        self.cs.len()
    }

    pub fn cs(&self) -> &[i64] {
        &self.cs
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn expected_dim(&self) -> usize {
        self.source.r() as usize
    }

    pub fn is_basis_word(&self, w: &Word) -> bool {
        w.runs.iter().all(|&(g, _)| (1..=self.generators()).contains(&g))
            && !self.forbidden.iter().any(|f| w.contains_factor(f))
    }

    /// Short display name, e.g. `k`, `k[z]/z^3`, or the full presentation.
    pub fn name(&self) -> String {
        match self.generators() {
            0 => "k".to_string(),
            1 => format!("k[z]/z^{}", self.cs[0]),
            _ => self.to_string(),
        }
    }

    /// All generators multiply to zero pairwise.
    pub fn is_square_zero(&self) -> bool {
        self.cs.iter().all(|&c| c == 2)
    }

    pub fn relation_strings(&self) -> Vec<String> {
        let single = self.generators() == 1;
        self.forbidden.iter().map(|w| w.render(single)).collect()
    }
}

impl fmt::Display for KKPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generators() {
            0 => write!(f, "k"),
            1 => write!(f, "k[z]/({})", self.relation_strings().join(", ")),
            l => {
                let gens: Vec<String> = (1..=l).map(|j| format!("z{j}")).collect();
                write!(f, "k<{}>/({})", gens.join(","), self.relation_strings().join(", "))
            }
        }
    }
}

/// The word basis, checked against the expected dimension `r`.
pub fn monomial_basis(p: &KKPresentation) -> Result<Vec<Word>> {
    let r = p.expected_dim();
    let words = enumerate_words(p.generators(), &p.forbidden, r);
    if words.len() != r {
        return Err(Error::BasisMismatch {
            expected: r,
            found: words.len(),
        });
    }
    Ok(words)
}

/// Product of two basis words; `None` is the zero element.
pub fn multiply(p: &KKPresentation, w1: &Word, w2: &Word) -> Result<Option<Word>> {
    if !p.is_basis_word(w1) || !p.is_basis_word(w2) {
        return Err(Error::NonBasisWord);
    }
    let w = w1.concat(w2);
    Ok(p.is_basis_word(&w).then_some(w))
}

/// Whether reversing and relabeling the basis of `K(r,a)` gives the basis of `K(r,a')`.
pub fn opposite_check(t: SingularityType) -> Result<bool> {
    let p = kk_presentation(t);
    let q = kk_presentation(inverse_type(t)?);
    if p.generators() != q.generators() {
        return Ok(false);
    }
    let l = p.generators();
    let mapped: BTreeSet<Word> = monomial_basis(&p)?.iter().map(|w| w.opposite(l)).collect();
    let target: BTreeSet<Word> = monomial_basis(&q)?.into_iter().collect();
    Ok(mapped == target)
}

pub fn is_commutative(p: &KKPresentation) -> Result<bool> {
    let basis = monomial_basis(p)?;
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            if multiply(p, x, y)? != multiply(p, y, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ty(r: i64, a: i64) -> SingularityType {
        SingularityType::new(r, a).unwrap()
    }

    fn w(runs: &[(usize, u32)]) -> Word {
        Word::from_runs(runs.iter().copied())
    }

    #[test]
    fn seven_five_presentation() {
        let p = kk_presentation(ty(7, 5));
        assert_eq!(p.cs(), &[4, 2]);
        assert_eq!(p.to_string(), "k<z1,z2>/(z1^4, z2^2, z1*z2, z2*z1^3)");
        let basis = monomial_basis(&p).unwrap();
        let shown: Vec<String> = basis.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["1", "z1", "z2", "z1^2", "z2*z1", "z1^3", "z2*z1^2"]);
        assert!(!is_commutative(&p).unwrap());
    }

    #[test]
    fn extreme_types() {
        let p = kk_presentation(ty(5, 4));
        assert_eq!(p.name(), "k[z]/z^5");
        assert_eq!(monomial_basis(&p).unwrap().len(), 5);
        let q = kk_presentation(ty(5, 1));
        assert_eq!(q.generators(), 4);
        assert!(q.is_square_zero());
        assert_eq!(monomial_basis(&q).unwrap().len(), 5);
        let k = kk_presentation(SingularityType::smooth());
        assert_eq!(k.name(), "k");
        assert_eq!(monomial_basis(&k).unwrap(), vec![Word::unit()]);
        assert!(is_commutative(&k).unwrap());
    }

    #[test]
    fn multiplication_examples() {
        let p = kk_presentation(ty(7, 5));
        assert_eq!(multiply(&p, &w(&[(2, 1)]), &w(&[(1, 2)])).unwrap(), Some(w(&[(2, 1), (1, 2)])));
        assert_eq!(multiply(&p, &w(&[(1, 1)]), &w(&[(2, 1)])).unwrap(), None);
        let x = w(&[(2, 1), (1, 1)]);
        assert_eq!(multiply(&p, &Word::unit(), &x).unwrap(), Some(x));
        assert_eq!(multiply(&p, &w(&[(1, 4)]), &Word::unit()), Err(Error::NonBasisWord));
    }

    #[test]
    fn factor_search() {
        let word = w(&[(3, 2), (2, 1), (1, 3)]);
        assert!(word.contains_factor(&w(&[(3, 1), (2, 1), (1, 2)])));
        assert!(!word.contains_factor(&w(&[(3, 1), (2, 2)])));
        assert!(word.contains_factor(&w(&[(1, 3)])));
        assert!(!word.contains_factor(&w(&[(2, 2)])));
    }

    #[test]
    fn corrupted_relations_trip_the_guard() {
        let t = ty(7, 5);
        let p = KKPresentation::with_forbidden(t, relation_monomials(&[4, 3]));
        assert!(matches!(monomial_basis(&p), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn commutativity_sweep() {
        for r in 2..=40i64 {
            for a in (1..r).filter(|a| num_integer::Integer::gcd(a, &r) == 1) {
                let p = kk_presentation(ty(r, a));
                assert_eq!(is_commutative(&p).unwrap(), a == 1 || a == r - 1, "({r},{a})");
            }
        }
    }

    fn coprime_type(max: i64) -> impl Strategy<Value = SingularityType> {
        (2i64..=max)
            .prop_flat_map(|r| (Just(r), 1..r))
            .prop_filter("coprime", |(r, a)| num_integer::Integer::gcd(r, a) == 1)
            .prop_map(|(r, a)| ty(r, a))
    }

    proptest! {
        #[test]
        fn dimension_is_r(t in coprime_type(60)) {
            prop_assert_eq!(monomial_basis(&kk_presentation(t)).unwrap().len() as i64, t.r());
        }

        #[test]
        fn opposite_algebra(t in coprime_type(30)) {
            prop_assert!(opposite_check(t).unwrap());
        }

        #[test]
        fn associativity_and_locality(t in coprime_type(20)) {
            let p = kk_presentation(t);
            let basis = monomial_basis(&p).unwrap();
            let mul = |x: &Option<Word>, y: &Word| match x {
                Some(x) => multiply(&p, x, y).unwrap(),
                None => None,
            };
            for x in &basis {
                for y in &basis {
                    let xy = multiply(&p, x, y).unwrap();
                    if !x.is_unit() && !y.is_unit() {
                        prop_assert!(xy.as_ref().map_or(true, |z| !z.is_unit()));
                    }
                    for z in &basis {
                        let left = mul(&xy, z);
                        let right = multiply(&p, y, z).unwrap().and_then(|yz| multiply(&p, x, &yz).unwrap());
                        prop_assert_eq!(left, right);
                    }
                }
                if !x.is_unit() {
                    let mut power = Some(x.clone());
                    for _ in 0..=basis.len() {
                        power = mul(&power, x);
                    }
                    prop_assert!(power.is_none());
                }
            }
        }
    }
}
