use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::{Error, Result};

/// An ordered list of four coordinate labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame(pub [&'static str; 4]);

impl Frame {
    /// `(c1, c2, t1, t2)`, flow times on the local model.
    pub const CT: Frame = Frame(["c1", "c2", "t1", "t2"]);
    /// `(c1, c2, theta_m, theta_e)`, the standardized angles.
    pub const ANGLES: Frame = Frame(["c1", "c2", "theta_m", "theta_e"]);
    /// `(c1, c2, theta_e, theta_m)`, the Ooguri-Vafa ordering.
    pub const OV: Frame = Frame(["c1", "c2", "theta_e", "theta_m"]);
    pub const CARTESIAN: Frame = Frame(["x0", "x1", "x2", "x3"]);

    pub fn names(&self) -> [&'static str; 4] {
        self.0
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(", "))
    }
}

const SUBSETS_0: [&[usize]; 1] = [&[]];
const SUBSETS_1: [&[usize]; 4] = [&[0], &[1], &[2], &[3]];
const SUBSETS_2: [&[usize]; 6] = [&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]];
const SUBSETS_3: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
const SUBSETS_4: [&[usize]; 1] = [&[0, 1, 2, 3]];

/// Increasing index sets of size `degree`, in lexicographic order.
pub fn subsets(degree: usize) -> &'static [&'static [usize]] {
    match degree {
        0 => &SUBSETS_0,
        1 => &SUBSETS_1,
        2 => &SUBSETS_2,
        3 => &SUBSETS_3,
        4 => &SUBSETS_4,
        _ => &[],
    }
}

fn position(indices: &[usize]) -> usize {
    subsets(indices.len()).iter().position(|s| *s == indices).expect("sorted index set")
}

/// Sort `indices`, returning the permutation sign, or `None` on a repeated index.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// A complex exterior form at one point, stored by its `C(4, degree)` independent components.
#[derive(Debug, Clone, PartialEq)]
pub struct FormAtPoint {
    degree: usize,
    frame: Frame,
    coeffs: Vec<Complex64>,
}

impl FormAtPoint {
    pub fn zero(degree: usize, frame: Frame) -> Result<Self> {
        if degree > 4 {
            return Err(Error::DegreeOverflow(degree));
        }
        Ok(Self { degree, frame, coeffs: vec![Complex64::new(0.0, 0.0); subsets(degree).len()] })
    }

    pub fn scalar(value: Complex64, frame: Frame) -> Self {
        Self { degree: 0, frame, coeffs: vec![value] }
    }

    pub fn one_form(frame: Frame, coeffs: [Complex64; 4]) -> Self {
        Self { degree: 1, frame, coeffs: coeffs.to_vec() }
    }

    pub fn real_one_form(frame: Frame, coeffs: [f64; 4]) -> Self {
        Self::one_form(frame, coeffs.map(|x| Complex64::new(x, 0.0)))
    }

    /// `dx_{i1} ^ ... ^ dx_{ik}` for any ordering of distinct indices.
    pub fn basis(frame: Frame, indices: &[usize]) -> Result<Self> {
        let mut f = Self::zero(indices.len(), frame)?;
        if indices.iter().any(|&i| i > 3) {
            return Err(Error::InvalidParameter(format!("index out of range in {indices:?}")));
        }
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            f.coeffs[position(&sorted)] = Complex64::new(sign, 0.0);
        }
        Ok(f)
    }

    /// 2-form with `W[(i, j)] = form(e_i, e_j)`; only the upper triangle is read.
    pub fn from_matrix(frame: Frame, w: &Matrix4<Complex64>) -> Self {
        let coeffs = SUBSETS_2.iter().map(|s| w[(s[0], s[1])]).collect();
        Self { degree: 2, frame, coeffs }
    }

    pub fn from_real_matrix(frame: Frame, w: &Matrix4<f64>) -> Self {
        Self::from_matrix(frame, &w.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// Independent components in lexicographic order of index sets.
    pub fn components(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Component on `dx_I` for any ordering of `I`, with the permutation sign.
    pub fn coeff(&self, indices: &[usize]) -> Complex64 {
        assert_eq!(indices.len(), self.degree, "index count must match degree");
        match sort_with_sign(indices) {
            Some((sorted, sign)) => self.coeffs[position(&sorted)] * sign,
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Set the component on the increasing index set `indices`.
    pub fn set(&mut self, indices: &[usize], value: Complex64) {
        let (sorted, sign) = sort_with_sign(indices).expect("distinct indices");
        self.coeffs[position(&sorted)] = value * sign;
    }

    /// The antisymmetric matrix of a 2-form.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        assert_eq!(self.degree, 2, "to_matrix needs a 2-form");
        let mut w = Matrix4::zeros();
        for (s, &v) in SUBSETS_2.iter().zip(&self.coeffs) {
            w[(s[0], s[1])] = v;
            w[(s[1], s[0])] = -v;
        }
        w
    }

    /// Real part of [`to_matrix`](Self::to_matrix).
    pub fn to_real_matrix(&self) -> Matrix4<f64> {
        self.to_matrix().map(|z| z.re)
    }

    /// The single component of a 4-form on the frame volume element.
    pub fn volume_coefficient(&self) -> Complex64 {
        assert_eq!(self.degree, 4, "volume coefficient needs a 4-form");
        self.coeffs[0]
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::frame_mismatch(self.frame, other.frame));
        }
        if self.degree != other.degree {
            return Err(Error::InvalidParameter(format!("degree {} vs {}", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * k).collect(), ..*self }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.conj()).collect(), ..*self }
    }

    pub fn re(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| Complex64::new(a.re, 0.0)).collect(), ..*self }
    }

    pub fn im(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| Complex64::new(a.im, 0.0)).collect(), ..*self }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.frame != other.frame {
            return Err(Error::frame_mismatch(self.frame, other.frame));
        }
        let degree = self.degree + other.degree;
        let mut out = Self::zero(degree, self.frame)?;
        for (i, a) in subsets(self.degree).iter().zip(&self.coeffs) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in subsets(other.degree).iter().zip(&other.coeffs) {
                let joined: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    out.coeffs[position(&sorted)] += a * b * sign;
                }
            }
        }
        Ok(out)
    }

    /// Pullback under a change of coordinates with `jacobian[(a, b)] = d x_a / d y_b`,
    /// `x` the current frame and `y` the new one.
    pub fn pullback(&self, jacobian: &Matrix4<f64>, new_frame: Frame) -> Self {
        let k = self.degree;
        let coeffs = subsets(k)
            .iter()
            .map(|target| {
                subsets(k).iter().zip(&self.coeffs).map(|(source, a)| a * minor(jacobian, source, target)).sum()
            })
            .collect();
        Self { degree: k, frame: new_frame, coeffs }
    }
}

/// Determinant of the submatrix with the given rows and columns.
fn minor(m: &Matrix4<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    match rows.len() {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => m[(rows[0], cols[0])] * m[(rows[1], cols[1])] - m[(rows[0], cols[1])] * m[(rows[1], cols[0])],
        n => {
            // Laplace expansion along the first row.
            let mut acc = 0.0;
            for (j, &col) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * m[(rows[0], col)] * minor(m, &rows[1..n], &rest);
            }
            acc
        }
    }
}

/// Free-standing form of [`FormAtPoint::wedge`].
pub fn wedge(a: &FormAtPoint, b: &FormAtPoint) -> Result<FormAtPoint> {
    a.wedge(b)
}
