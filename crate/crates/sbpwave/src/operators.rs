//! 1D staggered SBP operator sets in exact rational arithmetic.
//!
//! The two sub-grids are the N-grid (integer offsets, both boundary points
//! included) and the M-grid (half offsets, boundaries excluded). For a set
//! with `n_count` N-points there are `m_count = n_count - 1` M-points.
//! `DN` maps N-grid values to derivatives at M-points, `DM` maps M-grid
//! values to derivatives at N-points, `AM`/`AN` are the diagonal norm
//! (quadrature) matrices. Everything is stored for unit grid spacing; users
//! scale `DN`/`DM` by `1/dx` and `AM`/`AN` by `dx`.
//!
//! Two variants exist. They share `AM`, `AN` and `DN` and differ only in the
//! first/last row of `DM`: the extrapolating variant closes the boundary with
//! a one-sided extrapolation row, while the intertwined variant carries a
//! truncated row whose omitted surface coefficient embodies a zero surface
//! value. The matrix `Q = AN·DM + (AM·DN)^T` is the boundary fingerprint:
//! extrapolating leaves exactly the first and last rows of `Q` nonzero,
//! intertwined makes `Q` vanish identically.

use crate::rational::{rat, Rational, RationalMatrix};
use std::fmt::Write as _;
use thiserror::Error;

/// Smallest supported set; below this the two boundary blocks would overlap.
pub const MIN_N_COUNT: usize = 9;

const INTERIOR: [Rational; 4] = [rat(1, 24), rat(-9, 8), rat(9, 8), rat(-1, 24)];

const AM_HEAD: [Rational; 3] = [rat(13, 12), rat(7, 8), rat(25, 24)];
const AN_HEAD: [Rational; 4] = [rat(7, 18), rat(9, 8), rat(1, 1), rat(71, 72)];

const DN_HEAD: [[Rational; 5]; 3] = [
    [rat(-79, 78), rat(27, 26), rat(-1, 26), rat(1, 78), rat(0, 1)],
    [rat(2, 21), rat(-9, 7), rat(9, 7), rat(-2, 21), rat(0, 1)],
    [rat(1, 75), rat(0, 1), rat(-27, 25), rat(83, 75), rat(-1, 25)],
];

const DM_HEAD_TAIL: [[Rational; 5]; 3] = [
    [rat(-1, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
    [rat(1, 24), rat(-9, 8), rat(9, 8), rat(-1, 24), rat(0, 1)],
    [rat(-1, 71), rat(6, 71), rat(-83, 71), rat(81, 71), rat(-3, 71)],
];

const DM_ROW0_EXTRAPOLATING: [Rational; 5] =
    [rat(-2, 1), rat(3, 1), rat(-1, 1), rat(0, 1), rat(0, 1)];
const DM_ROW0_INTERTWINED: [Rational; 5] =
    [rat(79, 28), rat(-3, 14), rat(-1, 28), rat(0, 1), rat(0, 1)];

/// Coefficient at the conceptual surface M-point that the intertwined first
/// row of `DM` omits; reinstated when checking that row's accuracy.
pub const INTERTWINED_SURFACE_COEFF: Rational = rat(-18, 7);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Extrapolating,
    Intertwined,
}

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("n_count = {n_count} is too small; boundary blocks need n_count >= {min}")]
    TooSmall { n_count: usize, min: usize },
    #[error("operator set unsuitable for boundary projection: Q has a nonzero interior row {row}")]
    QStructure { row: usize },
    #[error("projection vectors require the unreset extrapolating variant")]
    WrongVariant,
}

/// One 1D staggered SBP operator pair with its norm matrices, unit spacing.
#[derive(Clone)]
pub struct OperatorSet1d {
    pub variant: Variant,
    pub n_count: usize,
    pub m_count: usize,
    /// Diagonal of the M-grid norm matrix, length `m_count`.
    pub am: Vec<Rational>,
    /// Diagonal of the N-grid norm matrix, length `n_count`.
    pub an: Vec<Rational>,
    /// `m_count x n_count`, derivative of N-grid data at M-points.
    pub dn: RationalMatrix,
    /// `n_count x m_count`, derivative of M-grid data at N-points.
    pub dm: RationalMatrix,
    pub reset_left: bool,
    pub reset_right: bool,
}

/// Builds the unit-spacing operator set for `variant` with `n_count` N-points.
pub fn build_operator_set(variant: Variant, n_count: usize) -> Result<OperatorSet1d, OperatorError> {
    if n_count < MIN_N_COUNT {
        return Err(OperatorError::TooSmall {
            n_count,
            min: MIN_N_COUNT,
        });
    }
    let m = n_count - 1;
    let n = n_count;

    let mut am = vec![Rational::ONE; m];
    for (i, &v) in AM_HEAD.iter().enumerate() {
        am[i] = v;
        am[m - 1 - i] = v;
    }
    let mut an = vec![Rational::ONE; n];
    for (i, &v) in AN_HEAD.iter().enumerate() {
        an[i] = v;
        an[n - 1 - i] = v;
    }

    let mut dn = RationalMatrix::zeros(m, n);
    for i in 3..m - 3 {
        for (k, &c) in INTERIOR.iter().enumerate() {
            dn.set(i, i - 1 + k, c);
        }
    }
    for (i, row) in DN_HEAD.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            dn.set(i, j, c);
            dn.set(m - 1 - i, n - 1 - j, -c);
        }
    }

    let mut dm = RationalMatrix::zeros(n, m);
    for i in 4..n - 4 {
        for (k, &c) in INTERIOR.iter().enumerate() {
            dm.set(i, i - 2 + k, c);
        }
    }
    let row0 = match variant {
        Variant::Extrapolating => DM_ROW0_EXTRAPOLATING,
        Variant::Intertwined => DM_ROW0_INTERTWINED,
    };
    for (j, &c) in row0.iter().enumerate() {
        dm.set(0, j, c);
        dm.set(n - 1, m - 1 - j, -c);
    }
    for (i, row) in DM_HEAD_TAIL.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            dm.set(i + 1, j, c);
            dm.set(n - 2 - i, m - 1 - j, -c);
        }
    }

    Ok(OperatorSet1d {
        variant,
        n_count,
        m_count: m,
        am,
        an,
        dn,
        dm,
        reset_left: false,
        reset_right: false,
    })
}

impl OperatorSet1d {
    /// Zeroes the `DM` row and `DN` column of the requested sides. Idempotent.
    pub fn apply_strong_reset(&self, left: bool, right: bool) -> OperatorSet1d {
        let mut out = self.clone();
        if left {
            out.dm.zero_row(0);
            out.dn.zero_col(0);
            out.reset_left = true;
        }
        if right {
            out.dm.zero_row(self.n_count - 1);
            out.dn.zero_col(self.n_count - 1);
            out.reset_right = true;
        }
        out
    }

    /// `Q = AN·DM + (AM·DN)^T`, exact.
    pub fn compute_q(&self) -> RationalMatrix {
        let mut q = RationalMatrix::zeros(self.n_count, self.m_count);
        for i in 0..self.n_count {
            for j in 0..self.m_count {
                q.set(
                    i,
                    j,
                    self.an[i] * self.dm.get(i, j) + self.am[j] * self.dn.get(j, i),
                );
            }
        }
        q
    }

    /// Boundary projection vectors `PL = -(row 0 of Q)^T`, `PR = (last row)^T`.
    ///
    /// Applied to an M-grid vector they approximate its value at the left and
    /// right boundary; only the unreset extrapolating variant carries them.
    pub fn projection_vectors(&self) -> Result<(Vec<Rational>, Vec<Rational>), OperatorError> {
        if self.variant != Variant::Extrapolating || self.reset_left || self.reset_right {
            return Err(OperatorError::WrongVariant);
        }
        let q = self.compute_q();
        for i in 1..self.n_count - 1 {
            if q.row(i).iter().any(|v| !v.is_zero()) {
                return Err(OperatorError::QStructure { row: i });
            }
        }
        let pl = q.row(0).iter().map(|v| -*v).collect();
        let pr = q.row(self.n_count - 1).to_vec();
        Ok((pl, pr))
    }

    /// N-grid coordinates at unit spacing with the left boundary at 0.
    pub fn n_coords(&self) -> Vec<Rational> {
        (0..self.n_count as i64).map(Rational::from_int).collect()
    }

    /// M-grid coordinates at unit spacing: j + 1/2.
    pub fn m_coords(&self) -> Vec<Rational> {
        (0..self.m_count as i64)
            .map(|j| Rational::from_int(j) + rat(1, 2))
            .collect()
    }

    pub fn verify_accuracy(&self) -> AccuracyReport {
        verify_accuracy(self)
    }

    /// Plain-text dump of the rational tables, one section per matrix.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let diag = |name: &str, d: &[Rational], out: &mut String| {
            writeln!(out, "[{name}] diagonal {}", d.len()).unwrap();
            let row: Vec<String> = d.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        };
        let full = |name: &str, mat: &RationalMatrix, out: &mut String| {
            writeln!(out, "[{name}] {} x {}", mat.rows(), mat.cols()).unwrap();
            for i in 0..mat.rows() {
                let row: Vec<String> = mat.row(i).iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        };
        diag("AM", &self.am, &mut s);
        diag("AN", &self.an, &mut s);
        full("DN", &self.dn, &mut s);
        full("DM", &self.dm, &mut s);
        full("Q", &self.compute_q(), &mut s);
        if let Ok((pl, pr)) = self.projection_vectors() {
            diag("PL", &pl, &mut s);
            diag("PR", &pr, &mut s);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSide {
    Dn,
    Dm,
}

#[derive(Debug, Clone)]
pub struct RowAccuracy {
    pub op: OperatorSide,
    pub row: usize,
    /// Highest polynomial degree the row differentiates exactly.
    pub degree: u32,
    pub required: u32,
}

#[derive(Debug, Clone)]
pub struct AccuracyReport {
    pub rows: Vec<RowAccuracy>,
}

impl AccuracyReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.degree >= r.required)
    }

    pub fn failures(&self) -> Vec<&RowAccuracy> {
        self.rows.iter().filter(|r| r.degree < r.required).collect()
    }
}

/// Exact degree up to which `coeffs` at `sources` reproduce d/dx of monomials
/// at `target`: checks `sum c_j x_j^d == d * target^(d-1)` for d = 0..=4.
fn row_degree(coeffs: &[(Rational, Rational)], target: Rational) -> u32 {
    let mut degree = 0;
    for d in 0..=4u32 {
        let mut lhs = Rational::ZERO;
        for &(c, x) in coeffs {
            lhs += c * x.pow(d);
        }
        let rhs = if d == 0 {
            Rational::ZERO
        } else {
            Rational::from_int(d as i64) * target.pow(d - 1)
        };
        if lhs == rhs {
            degree = d;
        } else {
            break;
        }
    }
    degree
}

/// Per-row polynomial exactness of both difference operators.
///
/// Boundary-block rows must be at least second order, interior rows at least
/// fourth. The truncated intertwined `DM` rows are tested with the omitted
/// surface coefficient reinstated at the surface coordinate, and reset rows
/// are skipped (they no longer approximate anything).
pub fn verify_accuracy(set: &OperatorSet1d) -> AccuracyReport {
    let n = set.n_count;
    let m = set.m_count;
    let n_coords = set.n_coords();
    let m_coords = set.m_coords();
    let mut rows = Vec::new();

    for i in 0..m {
        // DN row i: sources on the N-grid, target at M-point i.
        let coeffs: Vec<(Rational, Rational)> = (0..n)
            .filter(|&j| !set.dn.get(i, j).is_zero())
            .map(|j| (set.dn.get(i, j), n_coords[j]))
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        let required = if i < 3 || i >= m - 3 { 2 } else { 4 };
        rows.push(RowAccuracy {
            op: OperatorSide::Dn,
            row: i,
            degree: row_degree(&coeffs, m_coords[i]),
            required,
        });
    }

    for i in 0..n {
        let skip = (i == 0 && set.reset_left) || (i == n - 1 && set.reset_right);
        if skip {
            continue;
        }
        let mut coeffs: Vec<(Rational, Rational)> = (0..m)
            .filter(|&j| !set.dm.get(i, j).is_zero())
            .map(|j| (set.dm.get(i, j), m_coords[j]))
            .collect();
        if set.variant == Variant::Intertwined {
            // Reinstate the surface coefficient at the conceptual M-point.
            if i == 0 && !set.reset_left {
                coeffs.push((INTERTWINED_SURFACE_COEFF, Rational::ZERO));
            }
            if i == n - 1 && !set.reset_right {
                coeffs.push((-INTERTWINED_SURFACE_COEFF, Rational::from_int((n - 1) as i64)));
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        let required = if i < 4 || i >= n - 4 { 2 } else { 4 };
        rows.push(RowAccuracy {
            op: OperatorSide::Dm,
            row: i,
            degree: row_degree(&coeffs, n_coords[i]),
            required,
        });
    }

    AccuracyReport { rows }
}

/// Structural invariants every set must satisfy; returns human-readable
/// failures. Used by the `operators` CLI command as its exit-code gate.
pub fn check_invariants(set: &OperatorSet1d) -> Vec<String> {
    let mut fails = Vec::new();
    let m = set.m_count;
    let n = set.n_count;

    let sum_am: Rational = set.am.iter().fold(Rational::ZERO, |a, &b| a + b);
    if sum_am != Rational::from_int(m as i64) {
        fails.push(format!("sum(AM) = {sum_am}, expected {m}"));
    }
    let sum_an: Rational = set.an.iter().fold(Rational::ZERO, |a, &b| a + b);
    if sum_an != Rational::from_int((n - 1) as i64) {
        fails.push(format!("sum(AN) = {sum_an}, expected {}", n - 1));
    }

    for i in 0..m {
        if set.am[i] != set.am[m - 1 - i] {
            fails.push(format!("AM mirror symmetry broken at {i}"));
        }
    }
    for i in 0..n {
        if set.an[i] != set.an[n - 1 - i] {
            fails.push(format!("AN mirror symmetry broken at {i}"));
        }
    }
    for i in 0..m {
        for j in 0..n {
            if set.dn.get(i, j) != -set.dn.get(m - 1 - i, n - 1 - j) {
                fails.push(format!("DN negative mirror broken at ({i},{j})"));
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            if set.dm.get(i, j) != -set.dm.get(n - 1 - i, m - 1 - j) {
                fails.push(format!("DM negative mirror broken at ({i},{j})"));
            }
        }
    }

    let q = set.compute_q();
    let fully_reset = set.reset_left && set.reset_right;
    let expect_zero = set.variant == Variant::Intertwined || fully_reset;
    if expect_zero {
        if !q.is_zero() {
            fails.push("Q expected to vanish but has nonzero entries".into());
        }
    } else if set.variant == Variant::Extrapolating && !set.reset_left && !set.reset_right {
        for i in 1..n - 1 {
            if q.row(i).iter().any(|v| !v.is_zero()) {
                fails.push(format!("Q has nonzero interior row {i}"));
            }
        }
        if q.row(0).iter().all(Rational::is_zero) || q.row(n - 1).iter().all(Rational::is_zero) {
            fails.push("Q boundary rows unexpectedly zero".into());
        }
    }

    let acc = verify_accuracy(set);
    for r in acc.failures() {
        fails.push(format!(
            "accuracy failure: {:?} row {} reaches degree {} < required {}",
            r.op, r.row, r.degree, r.required
        ));
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rvec(v: &[Rational]) -> Vec<Rational> {
        v.to_vec()
    }

    #[test]
    fn rejects_small_sets() {
        assert!(matches!(
            build_operator_set(Variant::Extrapolating, 8),
            Err(OperatorError::TooSmall { .. })
        ));
        assert!(build_operator_set(Variant::Intertwined, 9).is_ok());
    }

    #[test]
    fn printed_boundary_rows() {
        let set = build_operator_set(Variant::Extrapolating, 20).unwrap();
        assert_eq!(
            &set.dm.row(0)[..4],
            &[rat(-2, 1), rat(3, 1), rat(-1, 1), rat(0, 1)]
        );
        assert_eq!(
            rvec(&set.an[..5]),
            vec![rat(7, 18), rat(9, 8), rat(1, 1), rat(71, 72), rat(1, 1)]
        );
        assert_eq!(rvec(&set.am[..4]), vec![rat(13, 12), rat(7, 8), rat(25, 24), rat(1, 1)]);

        let int = build_operator_set(Variant::Intertwined, 20).unwrap();
        assert_eq!(
            &int.dm.row(0)[..4],
            &[rat(79, 28), rat(-3, 14), rat(-1, 28), rat(0, 1)]
        );
        // Everything but the first/last DM row matches the extrapolating set.
        assert_eq!(int.dn, set.dn);
        assert_eq!(int.am, set.am);
        assert_eq!(int.an, set.an);
        for i in 1..19 {
            assert_eq!(int.dm.row(i), set.dm.row(i), "row {i}");
        }
    }

    #[test]
    fn minimal_set_mirror_row() {
        let set = build_operator_set(Variant::Extrapolating, 9).unwrap();
        let last = set.dm.row(8);
        assert_eq!(&last[4..], &[rat(0, 1), rat(0, 1), rat(1, 1), rat(-3, 1), rat(2, 1)]);
    }

    #[test]
    fn q_matches_printed_form() {
        let set = build_operator_set(Variant::Extrapolating, 20).unwrap();
        let q = set.compute_q();
        assert_eq!(&q.row(0)[..4], &[rat(-15, 8), rat(5, 4), rat(-3, 8), rat(0, 1)]);
        assert_eq!(
            &q.row(19)[16..],
            &[rat(3, 8), rat(-5, 4), rat(15, 8)]
        );
        for i in 1..19 {
            assert!(q.row(i).iter().all(Rational::is_zero), "row {i}");
        }
    }

    #[test]
    fn q_vanishes_for_intertwined_and_reset() {
        let int = build_operator_set(Variant::Intertwined, 20).unwrap();
        assert!(int.compute_q().is_zero());

        let ext = build_operator_set(Variant::Extrapolating, 20).unwrap();
        assert!(ext.apply_strong_reset(true, true).compute_q().is_zero());

        let left = ext.apply_strong_reset(true, false);
        let q = left.compute_q();
        assert!(q.row(0).iter().all(Rational::is_zero));
        assert!(!q.row(19).iter().all(Rational::is_zero));
    }

    #[test]
    fn reset_makes_variants_identical() {
        let a = build_operator_set(Variant::Extrapolating, 16)
            .unwrap()
            .apply_strong_reset(true, true);
        let b = build_operator_set(Variant::Intertwined, 16)
            .unwrap()
            .apply_strong_reset(true, true);
        assert_eq!(a.dm, b.dm);
        assert_eq!(a.dn, b.dn);
        // Double reset is a no-op.
        let c = a.apply_strong_reset(true, true);
        assert_eq!(c.dm, b.dm);
    }

    #[test]
    fn projection_vectors_values() {
        let set = build_operator_set(Variant::Extrapolating, 20).unwrap();
        let (pl, pr) = set.projection_vectors().unwrap();
        assert_eq!(&pl[..4], &[rat(15, 8), rat(-5, 4), rat(3, 8), rat(0, 1)]);
        assert_eq!(&pr[16..], &[rat(3, 8), rat(-5, 4), rat(15, 8)]);

        // Constant field projects to 1, linear field to the boundary value 0.
        let ones = Rational::ONE;
        let s: Rational = pl.iter().fold(Rational::ZERO, |a, &b| a + b * ones);
        assert_eq!(s, Rational::ONE);
        let xm = set.m_coords();
        let lin: Rational = pl
            .iter()
            .zip(&xm)
            .fold(Rational::ZERO, |a, (&c, &x)| a + c * x);
        assert!(lin.is_zero());

        assert!(build_operator_set(Variant::Intertwined, 20)
            .unwrap()
            .projection_vectors()
            .is_err());
        assert!(set
            .apply_strong_reset(true, false)
            .projection_vectors()
            .is_err());
    }

    #[test]
    fn accuracy_degrees() {
        for variant in [Variant::Extrapolating, Variant::Intertwined] {
            let set = build_operator_set(variant, 20).unwrap();
            let report = set.verify_accuracy();
            assert!(report.pass(), "{variant:?}: {:?}", report.failures());
            for r in &report.rows {
                let interior = match r.op {
                    OperatorSide::Dn => r.row >= 3 && r.row < set.m_count - 3,
                    OperatorSide::Dm => r.row >= 4 && r.row < set.n_count - 4,
                };
                if interior {
                    assert!(r.degree >= 4, "{:?} row {}", r.op, r.row);
                }
            }
        }
    }

    #[test]
    fn dump_sections() {
        let set = build_operator_set(Variant::Extrapolating, 9).unwrap();
        let dump = set.dump();
        for sec in ["[AM]", "[AN]", "[DN]", "[DM]", "[Q]", "[PL]", "[PR]"] {
            assert!(dump.contains(sec), "missing {sec}");
        }
        assert!(dump.contains("-15/8 5/4 -3/8"));
        let reset = set.apply_strong_reset(true, true);
        assert!(!reset.dump().contains("[PL]"));
    }

    proptest! {
        #[test]
        fn invariants_hold_for_all_sizes(n in 9usize..=64, intertwined: bool, reset: bool) {
            let variant = if intertwined { Variant::Intertwined } else { Variant::Extrapolating };
            let mut set = build_operator_set(variant, n).unwrap();
            if reset {
                set = set.apply_strong_reset(true, true);
            }
            prop_assert!(check_invariants(&set).is_empty());
        }

        #[test]
        fn shared_parts_between_variants(n in 9usize..=48) {
            let a = build_operator_set(Variant::Extrapolating, n).unwrap();
            let b = build_operator_set(Variant::Intertwined, n).unwrap();
            prop_assert!(a.am == b.am && a.an == b.an && a.dn == b.dn);
        }
    }
}
