use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Result of a Smith normal form computation: `u * a * v == s`.
///
/// `u_inv` is the inverse of `u`, accumulated alongside it so that
/// generators of a cokernel can be lifted without a separate inversion.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero |entry| in the trailing block starting at (t, t).
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row and column `t` except for the pivot, returning false if a
    /// nonzero remainder was left somewhere in the pivot row or column.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
            self.add_row(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
            self.add_col(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    /// Moves the smallest nonzero entry of row/column `t` onto the diagonal.
    fn repivot(&mut self, t: usize) {
        let mut best = (t, t);
        for i in t + 1..self.a.rows() {
            let x = &self.a[(i, t)];
            if !x.is_zero() && x.abs() < self.a[best].abs() {
                best = (i, t);
            }
        }
        for j in t + 1..self.a.cols() {
            let x = &self.a[(t, j)];
            if !x.is_zero() && x.abs() < self.a[best].abs() {
                best = (t, j);
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.a[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form with unimodular transforms, pivoting on the entry of
/// smallest absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut red = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = red.smallest_in_block(t) else {
            break;
        };
        red.swap_rows(t, pi);
        red.swap_cols(t, pj);
        loop {
            if !red.eliminate(t) {
                red.repivot(t);
                continue;
            }
            match red.non_divisible_row(t) {
                Some(i) => {
                    red.add_row(t, i, &BigInt::one());
                    red.repivot(t);
                }
                None => break,
            }
        }
        if red.a[(t, t)].is_negative() {
            red.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        u: red.u,
        u_inv: red.u_inv,
        s: red.a,
        v: red.v,
        rank: t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(&(&f.u * a) * &f.v, f.s);
        assert!(f.u.is_unimodular() && f.v.is_unimodular());
        assert_eq!(&f.u * &f.u_inv, IntMatrix::identity(a.rows()));
        assert!(f.s.is_diagonal());
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn diag_two_three() {
        let f = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_keeps_identity_transforms() {
        let f = check(&IntMatrix::zeros(2, 2));
        assert_eq!(f.rank, 0);
        assert_eq!(f.u, IntMatrix::identity(2));
        assert_eq!(f.v, IntMatrix::identity(2));
    }

    #[test]
    fn identity_is_fixed() {
        let f = check(&IntMatrix::identity(2));
        assert_eq!(f.s, IntMatrix::identity(2));
    }

    #[test]
    fn rectangular_and_empty() {
        check(&IntMatrix::from_rows(&[[4, 6, 10]]));
        check(&IntMatrix::from_rows(&[[4], [6], [9]]));
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
        let f = check(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }
}
