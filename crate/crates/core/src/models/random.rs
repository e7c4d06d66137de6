use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::otm::ThermalModel;
use crate::qcore::{expm_unitary, tensor, DensityOperator, Operator, Protocol, Segment};
use crate::scalar::{c, Real};

/// Shape and ranges of a random model; every draw is a deterministic function of the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomModelSpec {
    pub d_system: usize,
    pub d_bath: usize,
    pub n_segments: usize,
    /// Draw a fresh system Hamiltonian for every segment.
    pub time_dependent_system: bool,
    /// Typical eigenvalue scale of the system-bath coupling.
    pub interaction_scale: f64,
    pub beta_range: (f64, f64),
    pub duration_range: (f64, f64),
}

impl RandomModelSpec {
    pub fn new(d_system: usize, d_bath: usize, n_segments: usize, time_dependent_system: bool) -> Self {
        Self {
            d_system,
            d_bath,
            n_segments,
            time_dependent_system,
            interaction_scale: 1.0,
            beta_range: (0.25, 2.0),
            duration_range: (0.2, 1.5),
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.d_system * self.d_bath;
        if self.d_system < 1 || self.d_bath < 1 || !(2..=256).contains(&d) {
            return Err(Error::Parameter(format!(
                "need 2 <= d_system * d_bath <= 256, got {} x {}",
                self.d_system, self.d_bath
            )));
        }
        if self.n_segments < 1 {
            return Err(Error::Parameter("need at least one segment".into()));
        }
        let (b0, b1) = self.beta_range;
        let (t0, t1) = self.duration_range;
        if !(b0 > 0.0 && b1 >= b0 && t0 >= 0.0 && t1 >= t0 && self.interaction_scale >= 0.0) {
            return Err(Error::Parameter("invalid random model ranges".into()));
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Gaussian Hermitian matrix whose eigenvalues are of order `scale`.
pub fn random_hermitian<T: Real>(rng: &mut impl Rng, dims: &[usize], scale: f64) -> Operator<T> {
    let d: usize = dims.iter().product();
    let norm = scale / (2.0 * d as f64).sqrt();
    let a = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(T::lit(re * norm), T::lit(im * norm))
    });
    let h = (&a + &a.adjoint()) * c(T::lit(0.5), T::zero());
    Operator::new(dims.to_vec(), h).expect("dims match")
}

/// Full-rank mixed state `A A^dagger / Tr[A A^dagger]` with Gaussian `A`.
pub fn random_density<T: Real>(rng: &mut impl Rng, dims: &[usize]) -> DensityOperator<T> {
    let d: usize = dims.iter().product();
    let a = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(T::lit(re), T::lit(im))
    });
    let w = &a * a.adjoint();
    let tr = w.trace();
    let op = Operator::new(dims.to_vec(), w / tr).expect("dims match");
    DensityOperator::new(op.hermitian_part()).expect("Wishart matrices are positive")
}

/// `exp(-i H)` for a random Hermitian `H` of unit scale.
pub fn random_unitary<T: Real>(rng: &mut impl Rng, dims: &[usize]) -> Operator<T> {
    let h = random_hermitian::<T>(rng, dims, std::f64::consts::PI);
    expm_unitary(&h, T::one()).expect("Hermitian by construction")
}

/// Random model with default ranges: `beta_s = beta_b` in `[0.25, 2]`, durations in `[0.2, 1.5]`.
pub fn random_model<T: Real>(
    seed: u64,
    d_system: usize,
    d_bath: usize,
    n_segments: usize,
    time_dependent_system: bool,
) -> Result<ThermalModel<T>> {
    random_model_with(
        seed,
        &RandomModelSpec::new(d_system, d_bath, n_segments, time_dependent_system),
    )
}

/// Piecewise-constant `H_S^(k) (x) I + I (x) H_B + V^(k)` with Gaussian blocks.
///
/// The measurement Hamiltonians are the first and last system blocks.
pub fn random_model_with<T: Real>(seed: u64, spec: &RandomModelSpec) -> Result<ThermalModel<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = [spec.d_system];
    let bath = [spec.d_bath];
    let joint = [spec.d_system, spec.d_bath];
    let beta = T::lit(uniform(&mut rng, spec.beta_range));
    let h_b = random_hermitian::<T>(&mut rng, &bath, 1.0);
    let id_s = Operator::identity(&sys);
    let id_b = Operator::identity(&bath);

    let mut h_s = random_hermitian::<T>(&mut rng, &sys, 1.0);
    let h_s_initial = h_s.clone();
    let mut segments = Vec::with_capacity(spec.n_segments);
    for k in 0..spec.n_segments {
        if k > 0 && spec.time_dependent_system {
            h_s = random_hermitian(&mut rng, &sys, 1.0);
        }
        let v = random_hermitian::<T>(&mut rng, &joint, spec.interaction_scale);
        let generator = &(&tensor(&h_s, &id_b) + &tensor(&id_s, &h_b)) + &v;
        segments.push(Segment {
            duration: T::lit(uniform(&mut rng, spec.duration_range)),
            generator,
        });
    }
    ThermalModel::new(Protocol::new(segments)?, h_s_initial, h_s, h_b, beta, beta)
}
