//! Compound-determinant identities: bordered minors of an n×n matrix, the
//! condensation identity `c11^{p-2}|C| = |C̃|`, the four 3×3 displays and the
//! bordered-determinant dependence test, with seeded randomized trials.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, ExactMatrix, GR};
use crate::sample::int_matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("duplicate index {0}")]
    Duplicate(usize),
    #[error("malformed index sets: {0}")]
    Malformed(String),
    #[error("matrix of the b-columns is singular")]
    Singular,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn check_indices(ix: &[usize], bound: usize) -> Result<(), DetError> {
    for (k, &i) in ix.iter().enumerate() {
        if i >= bound {
            return Err(DetError::OutOfRange(i));
        }
        if ix[..k].contains(&i) {
            return Err(DetError::Duplicate(i));
        }
    }
    Ok(())
}

/// `B(rows; cols)`, zero-based, in the given order.
pub fn minor_det(b: &ExactMatrix, rows: &[usize], cols: &[usize]) -> Result<GR, DetError> {
    if rows.len() != cols.len() {
        return Err(DetError::Malformed(format!("{} rows but {} columns", rows.len(), cols.len())));
    }
    check_indices(rows, b.rows())?;
    check_indices(cols, b.cols())?;
    Ok(b.submatrix(rows, cols).det()?)
}

/// Both sides of an identity and whether they agree exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: GR,
    pub rhs: GR,
    pub equal: bool,
}

impl IdentityCheck {
    fn new(lhs: GR, rhs: GR) -> Self {
        let equal = lhs == rhs;
        Self { lhs, rhs, equal }
    }
}

/// The 2×2 determinant of bordered minors
/// `|B(I₀;I₀)  B(I₀;J,n) ; B(I,n;I₀)  B(I,n;J,n)|` with `I₀ = {0..n-2}`
/// against `B(I;J)·|B|`. Index sets are zero-based, increasing, inside `0..n-1`.
pub fn lemma44_check(b: &ExactMatrix, i_set: &[usize], j_set: &[usize]) -> Result<IdentityCheck, DetError> {
    let n = b.rows();
    if !b.is_square() || n < 3 {
        return Err(DetError::Malformed("B must be square with n >= 3".into()));
    }
    for s in [i_set, j_set] {
        if s.len() != n - 2 || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&x| x >= n - 1) {
            return Err(DetError::Malformed(format!("need {} increasing indices below {}", n - 2, n - 1)));
        }
    }
    let head: Vec<usize> = (0..n - 1).collect();
    let with_last = |s: &[usize]| -> Vec<usize> { s.iter().copied().chain([n - 1]).collect() };
    let m11 = minor_det(b, &head, &head)?;
    let m12 = minor_det(b, &head, &with_last(j_set))?;
    let m21 = minor_det(b, &with_last(i_set), &head)?;
    let m22 = minor_det(b, &with_last(i_set), &with_last(j_set))?;
    let lhs = &(&m11 * &m22) - &(&m12 * &m21);
    let rhs = &minor_det(b, i_set, j_set)? * &b.det()?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `C̃_ij = |c11 c1,j+1 ; c_{i+1},1 c_{i+1},{j+1}|`.
pub fn condensed(c: &ExactMatrix) -> ExactMatrix {
    let p = c.rows();
    ExactMatrix::from_fn(p - 1, p - 1, |i, j| &(&c[(0, 0)] * &c[(i + 1, j + 1)]) - &(&c[(0, j + 1)] * &c[(i + 1, 0)]))
}

/// `c11^{p-2}|C|` against `|C̃|`.
pub fn lemma45_check(c: &ExactMatrix) -> Result<IdentityCheck, DetError> {
    let p = c.rows();
    if !c.is_square() || p < 3 {
        return Err(DetError::Malformed("C must be square with p >= 3".into()));
    }
    let lhs = &c[(0, 0)].pow(p as u32 - 2) * &c.det()?;
    let rhs = condensed(c).det()?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// The four displays of 2×2 determinants of 2×2 minors of a 3×3 matrix `A`;
/// display `k` equals `a_rs |A|` with `(r,s)` = (1,1), (1,2), (2,1), (2,2).
pub fn lemma46_check(a: &ExactMatrix) -> Result<Vec<IdentityCheck>, DetError> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(DetError::Malformed("A must be 3x3".into()));
    }
    let det = a.det()?;
    // (row pairs of the two block rows, column pairs of the two block columns, common entry)
    type Pairs = [[usize; 2]; 2];
    let layouts: [(Pairs, Pairs, (usize, usize)); 4] = [
        ([[0, 1], [0, 2]], [[0, 1], [0, 2]], (0, 0)),
        ([[0, 1], [0, 2]], [[0, 1], [1, 2]], (0, 1)),
        ([[0, 1], [1, 2]], [[0, 1], [0, 2]], (1, 0)),
        ([[0, 1], [1, 2]], [[0, 1], [1, 2]], (1, 1)),
    ];
    layouts
        .iter()
        .map(|(rows, cols, (r, s))| {
            let m = |ri: usize, ci: usize| minor_det(a, &rows[ri], &cols[ci]);
            let lhs = &(&m(0, 0)? * &m(1, 1)?) - &(&m(0, 1)? * &m(1, 0)?);
            Ok(IdentityCheck::new(lhs, &a[(*r, *s)] * &det))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DependenceOutcome {
    /// Every bordered determinant vanishes and the exact coordinates of `a` are zero.
    Zero,
    /// `det(b_{i_1}, …, b_{i_{n-1}}, a) ≠ 0` for these zero-based indices.
    Witness { columns: Vec<usize>, det: GR },
}

/// Certifies `a = 0` from the vanishing of all `det(b_{i_1}, …, b_{i_{n-1}}, a)`,
/// or returns a nonvanishing one.
pub fn lemma47_solve(b_cols: &[Vec<GR>], a: &[GR]) -> Result<DependenceOutcome, DetError> {
    let n = b_cols.len();
    if n == 0 || b_cols.iter().any(|c| c.len() != n) || a.len() != n {
        return Err(DetError::Malformed("need n columns of length n and a of length n".into()));
    }
    let b = ExactMatrix::from_fn(n, n, |i, j| b_cols[j][i].clone());
    if b.det()?.is_zero() {
        return Err(DetError::Singular);
    }
    for skip in (0..n).rev() {
        let columns: Vec<usize> = (0..n).filter(|&j| j != skip).collect();
        let m = ExactMatrix::from_fn(n, n, |i, j| if j + 1 < n { b_cols[columns[j]][i].clone() } else { a[i].clone() });
        let det = m.det()?;
        if !det.is_zero() {
            return Ok(DependenceOutcome::Witness { columns, det });
        }
    }
    let lambda = b.solve(a)?;
    assert!(lambda.iter().all(Zero::is_zero), "vanishing bordered determinants force a = 0");
    Ok(DependenceOutcome::Zero)
}

/// Leading principal minors produced by fraction-free elimination without pivoting.
pub fn bareiss_pivots(c: &ExactMatrix) -> Vec<GR> {
    let n = c.rows();
    let mut m = c.clone();
    let mut prev = GR::one();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(m[(k, k)].clone());
        if m[(k, k)].is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                m[(i, j)] = &v / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    out
}

/// Per-dimension tallies of randomized trials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrialTally {
    pub dim: usize,
    pub trials: usize,
    pub lemma44_checks: usize,
    pub lemma44_failures: usize,
    pub lemma45_failures: usize,
    pub lemma45_zero_corner: usize,
    pub lemma46_failures: usize,
    pub lemma47_failures: usize,
    pub singular_cases: usize,
}

impl TrialTally {
    pub fn failures(&self) -> usize {
        self.lemma44_failures + self.lemma45_failures + self.lemma46_failures + self.lemma47_failures
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

struct TrialOutcome {
    l44_checks: usize,
    l44_fail: usize,
    l45_fail: bool,
    zero_corner: bool,
    l46_fail: bool,
    l47_fail: bool,
    singular: bool,
}

fn one_trial(dim: usize, seed: u64, t: usize) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((dim as u64) << 32) ^ t as u64);
    let mut b = int_matrix(&mut rng, dim, dim, 9, true);
    // every fourth trial has c11 = 0, every fifth a dependent last row
    let zero_corner = t % 4 == 1;
    if zero_corner {
        b[(0, 0)] = GR::zero();
    }
    let singular = t % 5 == 2;
    if singular {
        let (x, y) = (GR::from(rng.gen_range(-3..=3)), GR::from(rng.gen_range(-3..=3)));
        for j in 0..dim {
            b[(dim - 1, j)] = &(&x * &b[(0, j)]) + &(&y * &b[(1, j)]);
        }
    }
    let pairs = subsets(dim - 1, dim - 2);
    let mut l44_checks = 0;
    let mut l44_fail = 0;
    for i in &pairs {
        for j in &pairs {
            l44_checks += 1;
            if !lemma44_check(&b, i, j).map(|c| c.equal).unwrap_or(false) {
                l44_fail += 1;
            }
        }
    }
    let l45_fail = !lemma45_check(&b).map(|c| c.equal).unwrap_or(false);
    let a3 = b.submatrix(&[0, 1, 2], &[0, 1, 2]);
    let l46_fail = !lemma46_check(&a3).map(|v| v.iter().all(|c| c.equal)).unwrap_or(false);

    let mut cols;
    loop {
        cols = int_matrix(&mut rng, dim, dim, 9, true);
        if !cols.det().map(|d| d.is_zero()).unwrap_or(true) {
            break;
        }
    }
    let b_cols: Vec<Vec<GR>> = (0..dim).map(|j| (0..dim).map(|i| cols[(i, j)].clone()).collect()).collect();
    let a: Vec<GR> = if t.is_multiple_of(2) {
        vec![GR::zero(); dim]
    } else {
        let mut v: Vec<GR> = (0..dim).map(|_| GR::from_ints(rng.gen_range(-9..=9), rng.gen_range(-9..=9))).collect();
        if v.iter().all(Zero::is_zero) {
            v[0] = GR::one();
        }
        v
    };
    let truly_zero = a.iter().all(Zero::is_zero);
    let l47_fail = match lemma47_solve(&b_cols, &a) {
        Ok(DependenceOutcome::Zero) => !truly_zero,
        Ok(DependenceOutcome::Witness { .. }) => truly_zero,
        Err(_) => true,
    };
    TrialOutcome { l44_checks, l44_fail, l45_fail, zero_corner, l46_fail, l47_fail, singular }
}

/// Runs `trials` seeded random trials for each dimension in `dims`.
pub fn run_trials(dims: std::ops::RangeInclusive<usize>, trials: usize, seed: u64) -> Vec<TrialTally> {
    dims.map(|dim| {
        let outcomes: Vec<TrialOutcome> = crate::par::map_range(trials, |t| one_trial(dim, seed, t));
        let mut tally = TrialTally { dim, trials, ..Default::default() };
        for o in outcomes {
            tally.lemma44_checks += o.l44_checks;
            tally.lemma44_failures += o.l44_fail;
            tally.lemma45_failures += o.l45_fail as usize;
            tally.lemma45_zero_corner += o.zero_corner as usize;
            tally.lemma46_failures += o.l46_fail as usize;
            tally.lemma47_failures += o.l47_fail as usize;
            tally.singular_cases += o.singular as usize;
        }
        tally
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> ExactMatrix {
        ExactMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(GR::from).collect()).collect()).unwrap()
    }

    fn cofactor(b: &ExactMatrix) -> GR {
        let n = b.rows();
        if n == 0 {
            return GR::one();
        }
        let mut acc = GR::zero();
        for j in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sub = b.submatrix(&(1..n).collect::<Vec<_>>(), &rest);
            let term = &b[(0, j)] * &cofactor(&sub);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn minors() {
        let i3 = ExactMatrix::identity(3);
        assert!(minor_det(&i3, &[0, 1], &[0, 2]).unwrap().is_zero());
        assert_eq!(minor_det(&m(vec![vec![1, 2], vec![3, 4]]), &[0, 1], &[0, 1]).unwrap(), GR::from(-2));
        assert!(matches!(minor_det(&i3, &[0, 0], &[0, 1]), Err(DetError::Duplicate(0))));
        assert!(matches!(minor_det(&i3, &[0, 3], &[0, 1]), Err(DetError::OutOfRange(3))));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let b = int_matrix(&mut rng, 5, 5, 7, true);
            assert_eq!(b.det().unwrap(), cofactor(&b));
        }
    }

    #[test]
    fn worked_examples() {
        let c = lemma44_check(&ExactMatrix::identity(3), &[0], &[0]).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (GR::one(), GR::one()));
        let d = lemma45_check(&m(vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])).unwrap();
        assert_eq!((d.lhs, d.rhs), (GR::from(4), GR::from(4)));
        let z = lemma45_check(&m(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]])).unwrap();
        assert!(z.lhs.is_zero() && z.equal);
        let e2 = vec![vec![GR::one(), GR::zero()], vec![GR::zero(), GR::one()]];
        assert_eq!(lemma47_solve(&e2, &[GR::zero(), GR::zero()]).unwrap(), DependenceOutcome::Zero);
        match lemma47_solve(&e2, &[GR::one(), GR::zero()]).unwrap() {
            DependenceOutcome::Witness { columns, det } => {
                assert_eq!(columns, vec![1]);
                assert_eq!(det, GR::from(-1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condensation_reproduces_elimination_pivots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c = int_matrix(&mut rng, 5, 5, 9, true);
            let piv = bareiss_pivots(&c);
            // repeated condensation divided by the previous corner
            let mut cur = c.clone();
            let mut prev = GR::one();
            let mut corners = vec![cur[(0, 0)].clone()];
            while cur.rows() > 1 && !cur[(0, 0)].is_zero() {
                let next = condensed(&cur);
                let corner = cur[(0, 0)].clone();
                cur = ExactMatrix::from_fn(next.rows(), next.cols(), |i, j| &next[(i, j)] / &prev);
                prev = corner;
                corners.push(cur[(0, 0)].clone());
            }
            assert_eq!(corners, piv);
        }
    }

    #[test]
    fn small_trial_run() {
        let t = run_trials(3..=4, 30, 42);
        assert!(t.iter().all(|x| x.failures() == 0));
        assert!(t.iter().all(|x| x.lemma45_zero_corner > 0 && x.singular_cases > 0));
    }
}
