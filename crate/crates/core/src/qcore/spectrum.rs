use std::cmp::Ordering;

use nalgebra::ComplexField as _;
use nalgebra::{DMatrix, SymmetricEigen};

use super::operator::Operator;
use super::TOL_DEGENERATE_GAP;
use crate::error::{Error, Result};
use crate::scalar::{c, cr, Complex, Real};

/// Eigen-decomposition `H = V diag(eigenvalues) V^dagger` of a Hermitian operator.
///
/// Eigenvalues ascend. Each eigenvector has its first largest-magnitude
/// component made real and positive, and vectors inside a numerically
/// degenerate cluster are ordered lexicographically (descending) by their
/// real parts, so the decomposition is a deterministic function of the input.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    dims: Vec<usize>,
    eigenvalues: Vec<T>,
    eigenvectors: DMatrix<Complex<T>>,
    clusters: Vec<std::ops::Range<usize>>,
}

impl<T: Real> Spectrum<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Column `i` is the eigenvector of `eigenvalues()[i]`.
    pub fn eigenvectors(&self) -> &DMatrix<Complex<T>> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Index ranges of eigenvalue clusters closer than the degeneracy gap.
    pub fn clusters(&self) -> &[std::ops::Range<usize>] {
        &self.clusters
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|r| r.len() > 1)
    }

    /// `|v_i><v_i|` with the operator's factor layout.
    pub fn projector(&self, i: usize) -> Operator<T> {
        let v = self.eigenvector(i);
        let n = v.len();
        let data = DMatrix::from_fn(n, n, |r, s| v[r] * v[s].conj());
        Operator::from_parts_unchecked(self.dims.clone(), data)
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn map(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        self.map_indexed(|_, l| f(l))
    }

    /// Like `map`, with the eigenvalue index passed along.
    pub fn map_indexed(&self, f: impl Fn(usize, T) -> Complex<T>) -> Operator<T> {
        let n = self.len();
        let weights: Vec<Complex<T>> = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| f(k, l))
            .collect();
        let scaled = DMatrix::from_fn(n, n, |r, k| self.eigenvectors[(r, k)] * weights[k]);
        let data = scaled * self.eigenvectors.adjoint();
        Operator::from_parts_unchecked(self.dims.clone(), data)
    }

    pub fn reconstruct(&self) -> Operator<T> {
        self.map(cr)
    }

    /// `max |V^dagger V - I|`.
    pub fn orthonormality_residual(&self) -> T {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let n = self.len();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram[(i, j)] - cr(target)).modulus());
            }
        }
        worst
    }
}

fn lexicographic_desc<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.re.partial_cmp(&x.re) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

fn fix_phase<T: Real>(v: &mut [Complex<T>]) {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.modulus()));
    if max == T::zero() {
        return;
    }
    let cutoff = max * (T::one() - T::tol(1e-9));
    let pivot = v.iter().position(|z| z.modulus() >= cutoff).unwrap_or(0);
    let z = v[pivot];
    let phase = z.conj() * cr(T::one() / z.modulus());
    for x in v.iter_mut() {
        *x *= phase;
    }
    v[pivot] = c(v[pivot].re, T::zero());
}

/// Hermitian eigen-decomposition with deterministic ordering and phases.
pub fn eig_hermitian<T: Real>(h: &Operator<T>) -> Result<Spectrum<T>> {
    h.require_hermitian("eig_hermitian input")?;
    let n = h.dim();
    let sym = h.hermitian_part().into_matrix();
    let eig = SymmetricEigen::try_new(sym, T::default_epsilon(), 0)
        .ok_or_else(|| Error::Validation("eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors: Vec<Vec<Complex<T>>> = order
        .iter()
        .map(|&i| {
            let mut v: Vec<Complex<T>> = eig.eigenvectors.column(i).iter().copied().collect();
            fix_phase(&mut v);
            v
        })
        .collect();

    let gap = T::tol(TOL_DEGENERATE_GAP) * h.max_abs();
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || eigenvalues[i] - eigenvalues[i - 1] > gap {
            clusters.push(start..i);
            start = i;
        }
    }
    for range in &clusters {
        if range.len() > 1 {
            vectors[range.clone()].sort_by(|a, b| lexicographic_desc(a, b));
        }
    }

    let eigenvectors = DMatrix::from_fn(n, n, |r, k| vectors[k][r]);
    Ok(Spectrum {
        dims: h.dims().to_vec(),
        eigenvalues,
        eigenvectors,
        clusters,
    })
}

/// `exp(-i H t)` through the spectral decomposition of `H`.
pub fn expm_unitary<T: Real>(h: &Operator<T>, t: T) -> Result<Operator<T>> {
    let spectrum = eig_hermitian(h)?;
    Ok(unitary_from_spectrum(&spectrum, t))
}

pub fn unitary_from_spectrum<T: Real>(spectrum: &Spectrum<T>, t: T) -> Operator<T> {
    spectrum.map(|l| {
        let phase = -l * t;
        c(phase.cos(), phase.sin())
    })
}
