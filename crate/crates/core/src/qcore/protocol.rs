use super::operator::Operator;
use super::spectrum::expm_unitary;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One piece of a piecewise-constant Hamiltonian.
#[derive(Debug, Clone)]
pub struct Segment<T: Real> {
    pub duration: T,
    pub generator: Operator<T>,
}

/// Piecewise-constant Hamiltonian on the full space; segments run in order.
#[derive(Debug, Clone)]
pub struct Protocol<T: Real> {
    segments: Vec<Segment<T>>,
    total_time: T,
}

impl<T: Real> Protocol<T> {
    /// Zero-length segments are allowed and act as the identity.
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::Validation("protocol has no segments".into()))?;
        let dims = first.generator.dims().to_vec();
        let mut total_time = T::zero();
        for (k, seg) in segments.iter().enumerate() {
            if !seg.duration.is_finite() || seg.duration < T::zero() {
                return Err(Error::Validation(format!(
                    "segment {k} has invalid duration {}",
                    seg.duration.as_f64()
                )));
            }
            if seg.generator.dims() != dims.as_slice() {
                return Err(Error::Dimension(format!(
                    "segment {k} acts on {:?}, expected {dims:?}",
                    seg.generator.dims()
                )));
            }
            seg.generator.require_hermitian(&format!("segment {k} generator"))?;
            total_time += seg.duration;
        }
        Ok(Self {
            segments,
            total_time,
        })
    }

    pub fn single(duration: T, generator: Operator<T>) -> Result<Self> {
        Self::new(vec![Segment {
            duration,
            generator,
        }])
    }

    /// Midpoint discretisation of a time-dependent generator `h(t)` on `[0, total_time]`.
    pub fn sampled(total_time: T, steps: usize, h: impl Fn(T) -> Operator<T>) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Parameter("need at least one step".into()));
        }
        let dt = total_time / T::lit(steps as f64);
        let half = T::lit(0.5);
        let segments = (0..steps)
            .map(|k| Segment {
                duration: dt,
                generator: h((T::lit(k as f64) + half) * dt),
            })
            .collect();
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn total_time(&self) -> T {
        self.total_time
    }

    pub fn dims(&self) -> &[usize] {
        self.segments[0].generator.dims()
    }
}

/// Time-ordered product `exp(-i H_n t_n) ... exp(-i H_1 t_1)`.
pub fn propagator<T: Real>(p: &Protocol<T>) -> Result<Operator<T>> {
    let mut u = Operator::identity(p.dims());
    for seg in &p.segments {
        if seg.duration == T::zero() {
            continue;
        }
        let step = expm_unitary(&seg.generator, seg.duration)?;
        u = step.matmul(&u)?;
    }
    Ok(u)
}
