use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::ComplexField as _;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Complex, Real};

/// Dense complex square matrix acting on a tensor product of factor spaces.
///
/// `dims` lists the factor dimensions in order; the matrix side is their
/// product. Hamiltonians, unitaries and density operators all use this type.
#[derive(Clone, PartialEq)]
pub struct Operator<T: Real> {
    dims: Vec<usize>,
    data: DMatrix<Complex<T>>,
}

impl<T: Real> fmt::Debug for Operator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("dims", &self.dims)
            .field("data", &self.data)
            .finish()
    }
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

impl<T: Real> Operator<T> {
    pub fn new(dims: Vec<usize>, data: DMatrix<Complex<T>>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!(
                "factor dimensions must be positive, got {dims:?}"
            )));
        }
        let side = product(&dims);
        if data.nrows() != side || data.ncols() != side {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but dims {dims:?} require {side}x{side}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("operator has non-finite entries".into()));
        }
        Ok(Self { dims, data })
    }

    /// Single-factor operator from a row-major list of entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex<T>]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Self::new(vec![dim], DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&x| cr(T::lit(x))));
        }
        Self::from_row_slice(dim, &entries)
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, data: DMatrix<Complex<T>>) -> Self {
        debug_assert_eq!(data.nrows(), product(&dims));
        Self { dims, data }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = product(dims);
        Self::from_parts_unchecked(dims.to_vec(), DMatrix::zeros(n, n))
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = product(dims);
        Self::from_parts_unchecked(dims.to_vec(), DMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            data[(i, i)] = cr(v);
        }
        Self::from_parts_unchecked(vec![n], data)
    }

    /// Rank-one projector |v><v| on a single factor of dimension `v.len()`.
    pub fn projector(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let data = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        Self::from_parts_unchecked(vec![n], data)
    }

    pub fn pauli_x() -> Self {
        Self::diagonal(&[T::zero(), T::zero()]).with_entries(&[(0, 1, T::one()), (1, 0, T::one())])
    }

    pub fn pauli_y() -> Self {
        let mut op = Self::zeros(&[2]);
        op.data[(0, 1)] = c(T::zero(), -T::one());
        op.data[(1, 0)] = c(T::zero(), T::one());
        op
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[T::one(), -T::one()])
    }

    /// Truncated bosonic annihilation operator on Fock levels 0..cutoff.
    pub fn annihilation(cutoff: usize) -> Self {
        let mut op = Self::zeros(&[cutoff]);
        for n in 1..cutoff {
            op.data[(n - 1, n)] = cr(T::lit(n as f64).sqrt());
        }
        op
    }

    fn with_entries(mut self, entries: &[(usize, usize, T)]) -> Self {
        for &(i, j, v) in entries {
            self.data[(i, j)] = cr(v);
        }
        self
    }

    /// Same matrix, regrouped into different tensor factors.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        Self::new(dims, self.data)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts_unchecked(self.dims.clone(), self.data.adjoint())
    }

    pub fn trace(&self) -> Complex<T> {
        self.data.trace()
    }

    pub fn scale(&self, s: T) -> Self {
        self.scale_complex(cr(s))
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self::from_parts_unchecked(self.dims.clone(), self.data.map(|z| z * s))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.modulus()))
    }

    /// Max-norm distance; panics if the sides differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "operator sides differ");
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).modulus()))
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_residual(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).modulus());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn require_hermitian(&self, what: &str) -> Result<()> {
        let tol = T::tol(super::TOL_HERMITIAN) * self.max_abs().max(T::one());
        let res = self.hermiticity_residual();
        if res > tol {
            return Err(Error::Validation(format!(
                "{what} is not Hermitian (residual {})",
                res.as_f64()
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!(
                "cannot multiply operators on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self::from_parts_unchecked(self.dims.clone(), &self.data * &other.data))
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        tensor(self, other)
    }

    /// Hermitian part `(A + A^dagger)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = cr(T::lit(0.5));
        let data = (&self.data + self.data.adjoint()).map(|z| z * half);
        Self::from_parts_unchecked(self.dims.clone(), data)
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> Operator<U> {
        let data = self
            .data
            .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())));
        Operator::from_parts_unchecked(self.dims.clone(), data)
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: &Operator<T>) -> Operator<T> {
        self.matmul(rhs).expect("operator product dimension mismatch")
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dims, rhs.dims, "operator sum dimension mismatch");
        Operator::from_parts_unchecked(self.dims.clone(), &self.data + &rhs.data)
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dims, rhs.dims, "operator difference dimension mismatch");
        Operator::from_parts_unchecked(self.dims.clone(), &self.data - &rhs.data)
    }
}

/// Kronecker product; the factor lists are concatenated.
pub fn tensor<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Operator<T> {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    Operator::from_parts_unchecked(dims, a.data.kronecker(&b.data))
}

/// Tensor product of a list of operators, left to right.
pub fn tensor_all<T: Real>(ops: &[Operator<T>]) -> Option<Operator<T>> {
    let (first, rest) = ops.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, op| tensor(&acc, op)))
}

fn split_dims(dims: &[usize], n_system_factors: usize) -> Result<(usize, usize)> {
    if n_system_factors == 0 || n_system_factors >= dims.len() {
        return Err(Error::Dimension(format!(
            "cannot split {} factors into {n_system_factors} system factors plus a bath",
            dims.len()
        )));
    }
    Ok((
        product(&dims[..n_system_factors]),
        product(&dims[n_system_factors..]),
    ))
}

/// Traces out every factor after the first `n_system_factors`.
pub fn partial_trace_bath<T: Real>(o: &Operator<T>, n_system_factors: usize) -> Result<Operator<T>> {
    let (ds, db) = split_dims(&o.dims, n_system_factors)?;
    let data = DMatrix::from_fn(ds, ds, |i, j| {
        (0..db).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
            acc + o.data[(i * db + k, j * db + k)]
        })
    });
    Ok(Operator::from_parts_unchecked(
        o.dims[..n_system_factors].to_vec(),
        data,
    ))
}

/// Traces out the first `n_system_factors` factors, keeping the bath.
pub fn partial_trace_system<T: Real>(
    o: &Operator<T>,
    n_system_factors: usize,
) -> Result<Operator<T>> {
    let (ds, db) = split_dims(&o.dims, n_system_factors)?;
    let data = DMatrix::from_fn(db, db, |a, b| {
        (0..ds).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
            acc + o.data[(k * db + a, k * db + b)]
        })
    });
    Ok(Operator::from_parts_unchecked(
        o.dims[n_system_factors..].to_vec(),
        data,
    ))
}

/// Splits `o` into `A (x) I + I (x) B + R` where `R` has no local part.
///
/// Returns `(A, B, R)` with the identity component assigned to `A`.
pub fn local_decomposition<T: Real>(
    o: &Operator<T>,
    n_system_factors: usize,
) -> Result<(Operator<T>, Operator<T>, Operator<T>)> {
    let (ds, db) = split_dims(&o.dims, n_system_factors)?;
    let sys_dims = &o.dims[..n_system_factors];
    let bath_dims = &o.dims[n_system_factors..];
    let tr = o.trace();
    let a = partial_trace_bath(o, n_system_factors)?.scale(T::one() / T::lit(db as f64));
    let b_full = partial_trace_system(o, n_system_factors)?.scale(T::one() / T::lit(ds as f64));
    let shift = tr * cr(T::one() / T::lit((ds * db) as f64));
    let b = &b_full - &Operator::identity(bath_dims).scale_complex(shift);
    let local = &tensor(&a, &Operator::identity(bath_dims))
        + &tensor(&Operator::identity(sys_dims), &b);
    let rest = o - &local;
    Ok((a, b, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(rows: &[&[f64]]) -> Operator<f64> {
        Operator::from_real_rows(rows).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = Operator::<f64>::identity(&[2]);
        let i4 = tensor(&i2, &i2);
        assert_eq!(i4.dims(), &[2, 2]);
        assert_eq!(i4.max_abs_diff(&Operator::identity(&[2, 2])), 0.0);
    }

    #[test]
    fn tensor_z_x_has_signed_blocks() {
        let zx = tensor(&Operator::<f64>::pauli_z(), &Operator::pauli_x());
        let expected = op(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, -1.0, 0.0],
        ]);
        assert_eq!(zx.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn tensor_of_diagonals() {
        let d = tensor(&Operator::<f64>::diagonal(&[1.0, 2.0]), &Operator::diagonal(&[3.0, 4.0]));
        assert_eq!(d.max_abs_diff(&Operator::diagonal(&[3.0, 4.0, 6.0, 8.0])), 0.0);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho_s = op(&[&[0.7, 0.2], &[0.2, 0.3]]);
        let rho_b = op(&[&[0.1, 0.0, 0.0], &[0.0, 0.5, 0.1], &[0.0, 0.1, 0.4]]);
        let reduced = partial_trace_bath(&tensor(&rho_s, &rho_b), 1).unwrap();
        assert!(reduced.max_abs_diff(&rho_s) < 1e-15);
        let bath = partial_trace_system(&tensor(&rho_s, &rho_b), 1).unwrap();
        assert!(bath.max_abs_diff(&rho_b) < 1e-15);
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let mixed = Operator::<f64>::identity(&[2, 2]).scale(0.25);
        let reduced = partial_trace_bath(&mixed, 1).unwrap();
        assert!(reduced.max_abs_diff(&Operator::identity(&[2]).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        // Direct index sum: <i|Tr_B|j> = sum_k <ik|Phi+><Phi+|jk>.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [cr(h), cr(0.0), cr(0.0), cr(h)];
        let bell = Operator::projector(&v).with_dims(vec![2, 2]).unwrap();
        let reduced = partial_trace_bath(&bell, 1).unwrap();
        let mut expected = [[0.0f64; 2]; 2];
        for (i, row) in expected.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    *e += (v[2 * i + k] * v[2 * j + k].conj()).re;
                }
            }
        }
        assert!((reduced.get(0, 0).re - expected[0][0]).abs() < 1e-15);
        assert!((reduced.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((reduced.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(reduced.get(0, 1).modulus() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_split() {
        let o = Operator::<f64>::identity(&[2, 2]);
        assert!(matches!(partial_trace_bath(&o, 2), Err(Error::Dimension(_))));
        assert!(matches!(partial_trace_bath(&o, 0), Err(Error::Dimension(_))));
    }

    #[test]
    fn constructor_rejects_bad_shapes_and_nan() {
        let m = DMatrix::<Complex<f64>>::zeros(3, 3);
        assert!(matches!(Operator::new(vec![2, 2], m), Err(Error::Dimension(_))));
        let mut m = DMatrix::<Complex<f64>>::zeros(2, 2);
        m[(0, 1)] = Complex::new(f64::NAN, 0.0);
        assert!(matches!(Operator::new(vec![2], m), Err(Error::Validation(_))));
    }

    #[test]
    fn local_decomposition_recovers_parts() {
        let a = op(&[&[1.0, 0.5], &[0.5, -2.0]]);
        let b = op(&[&[0.3, 0.0], &[0.0, 0.9]]);
        let v = tensor(&Operator::pauli_x(), &Operator::pauli_z()).scale(0.25);
        let total = &(&tensor(&a, &Operator::identity(&[2])) + &tensor(&Operator::identity(&[2]), &b)) + &v;
        let (_, _, rest) = local_decomposition(&total, 1).unwrap();
        assert!(rest.max_abs_diff(&v) < 1e-14);
        let local_only = &tensor(&a, &Operator::identity(&[2])) + &tensor(&Operator::identity(&[2]), &b);
        let (_, _, rest) = local_decomposition(&local_only, 1).unwrap();
        assert!(rest.max_abs() < 1e-14);
    }

    #[test]
    fn annihilation_lowers_number() {
        let a = Operator::<f64>::annihilation(4);
        let n = &a.adjoint() * &a;
        assert!(n.max_abs_diff(&Operator::diagonal(&[0.0, 1.0, 2.0, 3.0])) < 1e-14);
    }
}
