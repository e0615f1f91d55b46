//! Exact dense linear algebra over the Gaussian rationals and over the
//! polynomial ring (fraction-free, exact division only).

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::gaussian::GR;
use super::poly::Poly;
use super::AlgebraError;

/// Dense row-major matrix of Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GR>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GR::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GR::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GR>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> GR>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GR] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<GR>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix, AlgebraError> {
        if self.cols != o.rows {
            return Err(AlgebraError::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = GR::zero();
            for k in 0..self.cols {
                acc += &(&self[(i, k)] * &o[(k, j)]);
            }
            acc
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row echelon form by exact Gaussian elimination; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().unwrap();
            for i in r + 1..self.rows {
                if self[(i, c)].is_zero() {
                    continue;
                }
                let f = &self[(i, c)] * &inv;
                for j in c..self.cols {
                    let t = &f * &self[(r, j)];
                    self[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<GR, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(GR::one());
        }
        if let Some(d) = self.gaussian_integer_det() {
            return Ok(d);
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = GR::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else { return Ok(GR::zero()) };
                m.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = &v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign { -d } else { d })
    }

    /// Bareiss over `Z[i]` in `i128` when every entry is a Gaussian integer;
    /// `None` on non-integral entries or overflow.
    fn gaussian_integer_det(&self) -> Option<GR> {
        type Zi = (i128, i128);
        let small = |r: &BigRational| -> Option<i128> { r.is_integer().then(|| r.to_integer().to_i64()).flatten().map(i128::from) };
        let mut m: Vec<Zi> = self.data.iter().map(|x| Some((small(&x.re)?, small(&x.im)?))).collect::<Option<_>>()?;
        let mul = |a: Zi, b: Zi| -> Option<Zi> {
            Some((a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?, a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?))
        };
        let sub = |a: Zi, b: Zi| -> Option<Zi> { Some((a.0.checked_sub(b.0)?, a.1.checked_sub(b.1)?)) };
        // exact quotient a / b; Bareiss guarantees divisibility
        let div = |a: Zi, b: Zi| -> Option<Zi> {
            let nb = b.0.checked_mul(b.0)?.checked_add(b.1.checked_mul(b.1)?)?;
            let (re, im) = mul(a, (b.0, -b.1))?;
            (re % nb == 0 && im % nb == 0).then(|| (re / nb, im / nb))
        };
        let n = self.rows;
        let at = |i: usize, j: usize| i * n + j;
        let mut prev: Zi = (1, 0);
        let mut negate = false;
        for k in 0..n - 1 {
            if m[at(k, k)] == (0, 0) {
                let Some(p) = (k + 1..n).find(|&i| m[at(i, k)] != (0, 0)) else { return Some(GR::zero()) };
                for j in 0..n {
                    m.swap(at(k, j), at(p, j));
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = sub(mul(m[at(k, k)], m[at(i, j)])?, mul(m[at(i, k)], m[at(k, j)])?)?;
                    m[at(i, j)] = div(v, prev)?;
                }
            }
            prev = m[at(k, k)];
        }
        let d = m[at(n - 1, n - 1)];
        let d = if negate { (-d.0, -d.1) } else { d };
        Some(GR::new(BigRational::from_integer(d.0.into()), BigRational::from_integer(d.1.into())))
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[GR]) -> Result<Vec<GR>, AlgebraError> {
        if !self.is_square() || b.len() != self.rows {
            return Err(AlgebraError::Shape("solve needs a square system".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let piv = aug.echelon();
        if piv.len() < n || piv.iter().any(|&c| c >= n) {
            return Err(AlgebraError::Singular);
        }
        let mut x = vec![GR::zero(); n];
        for i in (0..n).rev() {
            let mut acc = aug[(i, n)].clone();
            for j in i + 1..n {
                acc -= &(&aug[(i, j)] * &x[j]);
            }
            x[i] = &acc / &aug[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ExactMatrix, AlgebraError> {
        let n = self.rows;
        if !self.is_square() {
            return Err(AlgebraError::Shape("inverse of a non-square matrix".into()));
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<GR> = (0..n).map(|i| if i == j { GR::one() } else { GR::zero() }).collect();
            cols.push(self.solve(&e)?);
        }
        Ok(Self::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<GR>> {
        let mut m = self.clone();
        let piv = m.echelon();
        // back-substitute to reduced form
        for (r, &c) in piv.iter().enumerate().rev() {
            let inv = m[(r, c)].inv().unwrap();
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..r {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![GR::zero(); m.cols];
                x[f] = GR::one();
                for (r, &c) in piv.iter().enumerate() {
                    x[c] = -&m[(r, f)];
                }
                x
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = GR;
    fn index(&self, (i, j): (usize, usize)) -> &GR {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GR {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank of `rows` viewed as vectors over the Gaussian rationals.
pub fn rank_of_rows(rows: &[Vec<GR>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    ExactMatrix::from_rows(rows.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

/// Rank over the fraction field of the polynomial ring, by Bareiss
/// elimination with complete pivoting. Intermediate entries are minors of the
/// input, so every division is exact.
pub fn poly_rank(rows: &[Vec<Poly>]) -> usize {
    let mut m: Vec<Vec<Poly>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut rank = 0;
    for k in 0..nr.min(nc) {
        // pick the sparsest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if !e.is_zero() && best.is_none_or(|b| e.len() < b.2) {
                    best = Some((i, j, e.len()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..nr {
            for j in k + 1..nc {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
        rank += 1;
    }
    rank
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn poly_det(rows: &[Vec<Poly>]) -> Result<Poly, AlgebraError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::Shape("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut m = rows.to_vec();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return Ok(Poly::zero()) };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn g(v: i64) -> GR {
        GR::from(v)
    }

    #[test]
    fn det_and_rank() {
        let m = ExactMatrix::from_rows(vec![vec![g(1), g(2)], vec![g(3), g(4)]]).unwrap();
        assert_eq!(m.det().unwrap(), g(-2));
        assert_eq!(m.rank(), 2);
        let s = ExactMatrix::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.det().unwrap(), g(0));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));
    }

    #[test]
    fn integer_fast_path_matches_rational_elimination() {
        let m = ExactMatrix::from_fn(4, 4, |i, j| GR::from_ints((i * 7 + j * 3) as i64 % 5 - 2, (i + 2 * j) as i64 % 3 - 1));
        let scaled = ExactMatrix::from_fn(4, 4, |i, j| &m[(i, j)] * &GR::ratio(1, 3));
        let d = m.det().unwrap();
        assert!(m.gaussian_integer_det().is_some());
        assert!(scaled.gaussian_integer_det().is_none());
        // det(A/3) = det(A)/81 through the rational path
        assert_eq!(&scaled.det().unwrap() * &GR::from(81), d);
        let big = ExactMatrix::from_fn(3, 3, |i, j| GR::from(if i == j { i64::MAX } else { 1 }));
        assert_eq!(big.det().unwrap(), {
            let s = ExactMatrix::from_fn(3, 3, |i, j| GR::from(if i == j { i64::MAX } else { 1 }));
            let mut acc = GR::zero();
            // cofactor expansion along the first row
            for c in 0..3 {
                let rest: Vec<usize> = (0..3).filter(|&k| k != c).collect();
                let minor = &(&s[(1, rest[0])] * &s[(2, rest[1])]) - &(&s[(1, rest[1])] * &s[(2, rest[0])]);
                let t = &s[(0, c)] * &minor;
                if c % 2 == 0 { acc += &t } else { acc -= &t }
            }
            acc
        });
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = ExactMatrix::from_rows(vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), GR::i()]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in ns {
            for i in 0..2 {
                let mut acc = GR::zero();
                for j in 0..3 {
                    acc += &(&m[(i, j)] * &v[j]);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn polynomial_rank_and_det() {
        let p = |s: &str| parse_poly(s).unwrap();
        let rows = vec![vec![p("conj(z1)"), p("-conj(z1)"), p("i/2")], vec![p("-i/2"), p("i/2"), p("0")]];
        assert_eq!(poly_rank(&rows), 2);
        let sq = vec![vec![p("z1"), p("z2")], vec![p("z1^2"), p("z1*z2")]];
        assert_eq!(poly_rank(&sq), 1);
        assert!(poly_det(&sq).unwrap().is_zero());
        let d = poly_det(&[vec![p("z1"), p("1")], vec![p("1"), p("z2")]]).unwrap();
        assert_eq!(d, p("z1*z2 - 1"));
    }
}
