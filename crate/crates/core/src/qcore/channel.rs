use nalgebra::ComplexField as _;
use nalgebra::DMatrix;

use super::operator::{partial_trace_bath, tensor, Operator};
use super::spectrum::{eig_hermitian, Spectrum};
use super::{TOL_NEGATIVE_EIGENVALUE, TOL_TRACE};
use crate::error::{Error, Result};
use crate::scalar::{cr, Complex, Real};

/// Unit-trace positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real> {
    op: Operator<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(op: Operator<T>) -> Result<Self> {
        let rho = Self::checked_cheap(op)?;
        let min = rho.spectrum()?.eigenvalues()[0];
        if min < -T::tol(TOL_NEGATIVE_EIGENVALUE) {
            return Err(Error::Validation(format!(
                "density operator has eigenvalue {}",
                min.as_f64()
            )));
        }
        Ok(rho)
    }

    /// Hermiticity and trace only; for states produced by trusted maps.
    pub(crate) fn checked_cheap(op: Operator<T>) -> Result<Self> {
        op.require_hermitian("density operator")?;
        let tr = op.trace();
        if (tr - cr(T::one())).modulus() > T::tol(TOL_TRACE) {
            return Err(Error::Validation(format!(
                "density operator trace is {} + {}i",
                tr.re.as_f64(),
                tr.im.as_f64()
            )));
        }
        Ok(Self { op })
    }

    pub fn pure(dims: &[usize], v: &[Complex<T>]) -> Result<Self> {
        let norm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        let unit: Vec<Complex<T>> = v.iter().map(|z| *z * cr(T::one() / norm)).collect();
        Self::checked_cheap(Operator::projector(&unit).with_dims(dims.to_vec())?)
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let id = Operator::identity(dims);
        let d = T::lit(id.dim() as f64);
        Self { op: id.scale(T::one() / d) }
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        eig_hermitian(&self.op)
    }

    /// Eigenvalues clipped into `[0, 1]`.
    pub fn clipped_eigenvalues(&self) -> Result<Vec<T>> {
        Ok(self
            .spectrum()?
            .eigenvalues()
            .iter()
            .map(|&l| l.max(T::zero()).min(T::one()))
            .collect())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { op: tensor(&self.op, &other.op) }
    }

    pub fn conjugate_by(&self, u: &Operator<T>) -> Result<Self> {
        Self::checked_cheap(self.op.conjugate_by(u)?)
    }

    pub fn partial_trace_bath(&self, n_system_factors: usize) -> Result<Self> {
        Self::checked_cheap(partial_trace_bath(&self.op, n_system_factors)?)
    }

    /// Convex combination `sum_k w_k rho_k`; weights must sum to one.
    pub fn mixture(parts: &[(T, &Self)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::Parameter("empty mixture".into()))?;
        let mut acc = DMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.dims() != first.dims() {
                return Err(Error::Dimension("mixture components differ in dims".into()));
            }
            acc += rho.op.matrix().map(|z| z * cr(*w));
        }
        Self::checked_cheap(Operator::new(first.dims().to_vec(), acc)?)
    }
}

fn system_factor_count<T: Real>(u: &Operator<T>, bath: &DensityOperator<T>) -> Result<usize> {
    let nb = bath.dims().len();
    let nu = u.dims().len();
    if nu <= nb || u.dims()[nu - nb..] != *bath.dims() {
        return Err(Error::Dimension(format!(
            "unitary on {:?} does not end with bath factors {:?}",
            u.dims(),
            bath.dims()
        )));
    }
    Ok(nu - nb)
}

/// Linear map `X -> Tr_B[U (X (x) rho_B) U^dagger]` on arbitrary system operators.
pub fn channel_map<T: Real>(
    u: &Operator<T>,
    bath_state: &DensityOperator<T>,
    x: &Operator<T>,
) -> Result<Operator<T>> {
    let ns = system_factor_count(u, bath_state)?;
    if x.dims() != &u.dims()[..ns] {
        return Err(Error::Dimension(format!(
            "system operator on {:?} does not match unitary system factors {:?}",
            x.dims(),
            &u.dims()[..ns]
        )));
    }
    let joint = tensor(x, bath_state.as_operator()).conjugate_by(u)?;
    partial_trace_bath(&joint, ns)
}

/// `Tr_B[U (rho_S (x) rho_B) U^dagger]`.
pub fn apply_channel<T: Real>(
    u: &Operator<T>,
    bath_state: &DensityOperator<T>,
    system_state: &DensityOperator<T>,
) -> Result<DensityOperator<T>> {
    DensityOperator::checked_cheap(channel_map(u, bath_state, system_state.as_operator())?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiReport<T: Real> {
    pub trace_preserving: bool,
    /// `max |Tr_out J - I|`.
    pub trace_residual: T,
    pub min_choi_eigenvalue: T,
}

/// `J = sum_ij |i><j| (x) Phi(|i><j|)`.
pub fn choi_matrix<T: Real>(
    u: &Operator<T>,
    bath_state: &DensityOperator<T>,
    d_system: usize,
) -> Result<Operator<T>> {
    let ns = system_factor_count(u, bath_state)?;
    let sys_dims = u.dims()[..ns].to_vec();
    let ds: usize = sys_dims.iter().product();
    if ds != d_system {
        return Err(Error::Dimension(format!(
            "system dimension {ds} differs from requested {d_system}"
        )));
    }
    let mut choi = DMatrix::zeros(ds * ds, ds * ds);
    for i in 0..ds {
        for j in 0..ds {
            let mut unit = Operator::zeros(&sys_dims);
            let mut m = unit.clone().into_matrix();
            m[(i, j)] = cr(T::one());
            unit = Operator::from_parts_unchecked(sys_dims.clone(), m);
            let image = channel_map(u, bath_state, &unit)?;
            for a in 0..ds {
                for b in 0..ds {
                    choi[(i * ds + a, j * ds + b)] = image.get(a, b);
                }
            }
        }
    }
    Operator::new(vec![ds, ds], choi)
}

/// Choi-matrix positivity and trace preservation of the Stinespring channel.
pub fn choi_cptp_check<T: Real>(
    u: &Operator<T>,
    bath_state: &DensityOperator<T>,
    d_system: usize,
) -> Result<ChoiReport<T>> {
    let choi = choi_matrix(u, bath_state, d_system)?;
    // Trace over the output factor must give the identity on the input.
    let mut worst = T::zero();
    for i in 0..d_system {
        for j in 0..d_system {
            let mut s = Complex::new(T::zero(), T::zero());
            for a in 0..d_system {
                s += choi.get(i * d_system + a, j * d_system + a);
            }
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((s - cr(target)).modulus());
        }
    }
    let min_choi_eigenvalue = eig_hermitian(&choi.hermitian_part())?.eigenvalues()[0];
    Ok(ChoiReport {
        trace_preserving: worst <= T::tol(1e-9),
        trace_residual: worst,
        min_choi_eigenvalue,
    })
}

/// Kraus operators `sqrt(p_b) <a|_B U |b>_B` from the bath eigenbasis.
pub fn kraus_operators<T: Real>(
    u: &Operator<T>,
    bath_state: &DensityOperator<T>,
) -> Result<Vec<Operator<T>>> {
    let ns = system_factor_count(u, bath_state)?;
    let sys_dims = u.dims()[..ns].to_vec();
    let ds: usize = sys_dims.iter().product();
    let db = bath_state.dim();
    let bath = bath_state.spectrum()?;
    let mut out = Vec::new();
    for (b, &p) in bath.eigenvalues().iter().enumerate() {
        if p <= T::zero() {
            continue;
        }
        let weight = cr(p.sqrt());
        let vb = bath.eigenvector(b);
        for a in 0..db {
            let k = DMatrix::from_fn(ds, ds, |i, j| {
                let mut s = Complex::new(T::zero(), T::zero());
                for (beta, vbeta) in vb.iter().enumerate() {
                    s += u.get(i * db + a, j * db + beta) * *vbeta;
                }
                s * weight
            });
            out.push(Operator::from_parts_unchecked(sys_dims.clone(), k));
        }
    }
    Ok(out)
}
