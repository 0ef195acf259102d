//! Exact rational arithmetic for operator coefficients and identity checks.
//!
//! All stencil and norm coefficients are small fractions, so an `i128`
//! numerator/denominator pair is far more headroom than needed. Overflow
//! aborts rather than rounding; nothing in this crate is allowed to lose
//! exactness before the float conversion at assembly time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// `num/den`, normalized. Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational with zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Rational {
            num: n as i128,
            den: 1,
        }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(self.num != 0, "reciprocal of zero");
        Rational::new(self.den, self.num)
    }

    /// Both num and den stay far below 2^53 here, so the two conversions and
    /// the division are each correctly rounded.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Rational::ONE;
        for _ in 0..e {
            out = out * *self;
        }
        out
    }

    /// Exact square root, if the fraction is a perfect rational square.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.num < 0 {
            return None;
        }
        let ns = isqrt(self.num)?;
        let ds = isqrt(self.den)?;
        Some(Rational { num: ns, den: ds })
    }
}

fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    (r * r == v).then_some(r)
}

fn checked(num: Option<i128>, den: Option<i128>) -> Rational {
    match (num, den) {
        (Some(n), Some(d)) => Rational::new(n, d),
        _ => panic!("rational arithmetic overflow"),
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        let g = gcd(self.den, rhs.den).max(1);
        let (da, db) = (self.den / g, rhs.den / g);
        checked(
            self.num
                .checked_mul(db)
                .and_then(|a| rhs.num.checked_mul(da).and_then(|b| a.checked_add(b))),
            self.den.checked_mul(db),
        )
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = *self + rhs;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        let g1 = gcd(self.num, rhs.den).max(1);
        let g2 = gcd(rhs.num, self.den).max(1);
        checked(
            (self.num / g1).checked_mul(rhs.num / g2),
            (self.den / g2).checked_mul(rhs.den / g1),
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self * rhs.recip()
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand used by the operator tables.
pub const fn rat(num: i128, den: i128) -> Rational {
    // Table entries are written in lowest terms with positive denominators,
    // so no normalization is needed in const context.
    Rational { num, den }
}

/// Dense matrix of rationals, row-major. Sized for operator blocks, not bulk
/// numerics; everything stays exact.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::ZERO; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn zero_row(&mut self, i: usize) {
        self.row_mut(i).fill(Rational::ZERO);
    }

    pub fn zero_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.set(i, j, Rational::ZERO);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Scales row `i` by `s` for every row, i.e. `diag(s) * self`.
    pub fn scale_rows(&self, s: &[Rational]) -> RationalMatrix {
        assert_eq!(s.len(), self.rows);
        let mut out = self.clone();
        for i in 0..self.rows {
            for v in out.row_mut(i) {
                *v = *v * s[i];
            }
        }
        out
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
        out
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rational::to_f64).collect())
            .collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_ordering() {
        assert_eq!(Rational::new(2, 4), rat(1, 2));
        assert_eq!(Rational::new(3, -6), rat(-1, 2));
        assert!(rat(-1, 2) < Rational::ZERO);
        assert!(rat(9, 8) > Rational::ONE);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = rat(1, 24) + rat(-9, 8) + rat(9, 8) + rat(-1, 24);
        assert!(a.is_zero());
        assert_eq!(rat(7, 18) * rat(79, 28), rat(79, 72) * rat(7, 14) + rat(553, 1008));
        assert_eq!((rat(15, 8) - rat(5, 4) + rat(3, 8)), Rational::ONE);
    }

    #[test]
    fn sqrt_exact_only_for_squares() {
        assert_eq!(rat(36, 49).sqrt_exact(), Some(rat(6, 7)));
        assert_eq!(rat(2, 1).sqrt_exact(), None);
        assert_eq!(rat(-4, 9).sqrt_exact(), None);
    }

    #[test]
    fn display_formats() {
        assert_eq!(rat(-9, 8).to_string(), "-9/8");
        assert_eq!(Rational::ZERO.to_string(), "0");
        assert_eq!(rat(3, 1).to_string(), "3");
    }
}
