//! Physical and dimensionless parameters of the driven δ-atom.
//!
//! The Hamiltonian `H = p²/2 − α δ(x) + μ x cos(ωt)` is rescaled by
//! `x → μx/ω²`, `t → t/ω`, which leaves the effective Planck constant
//! `h = ω³/μ²` and the Keldysh parameter `γ = αω/μ` as the only parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Whether the oscillating field is switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    #[default]
    Cosine,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub alpha: T,
    pub mu: T,
    pub omega: T,
    pub gamma: T,
    /// Ponderomotive energy in photons, `μ²/(4ω³)`.
    pub z: T,
    pub h: T,
    /// Ionization potential in photons, `α²/(2ω)`.
    pub n_io: T,
}

fn positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::param(
            name,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

impl<T: Scalar> ModelParams<T> {
    pub fn from_physical(alpha: T, mu: T, omega: T) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("mu", mu)?;
        positive("omega", omega)?;
        let w3 = omega * omega * omega;
        Ok(Self {
            alpha,
            mu,
            omega,
            gamma: alpha * omega / mu,
            z: mu * mu / (T::lit(4.0) * w3),
            h: w3 / (mu * mu),
            n_io: alpha * alpha / (T::lit(2.0) * omega),
        })
    }

    /// Embeds `(γ, z)` at `ω = 1`.
    pub fn from_dimensionless(gamma: T, z: T) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("z", z)?;
        let omega = T::one();
        let mu = T::lit(2.0) * omega * (z * omega).sqrt();
        let alpha = gamma * mu / omega;
        Self::from_physical(alpha, mu, omega)
    }

    /// Inverse width of the ground state in scaled units, `γ/h`.
    pub fn kappa(&self) -> T {
        self.gamma / self.h
    }

    pub fn ground_state(&self) -> GroundState<T> {
        GroundState {
            gamma: self.gamma,
            h: self.h,
        }
    }

    pub fn to_f64(&self) -> ModelParams<f64> {
        ModelParams {
            alpha: self.alpha.to_f64_lossy(),
            mu: self.mu.to_f64_lossy(),
            omega: self.omega.to_f64_lossy(),
            gamma: self.gamma.to_f64_lossy(),
            z: self.z.to_f64_lossy(),
            h: self.h.to_f64_lossy(),
            n_io: self.n_io.to_f64_lossy(),
        }
    }
}

/// Field-free bound state `ψ0(x) = sqrt(γ/h) exp(−γ|x|/h)` with energy `−γ²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState<T> {
    pub gamma: T,
    pub h: T,
}

impl<T: Scalar> GroundState<T> {
    pub fn energy(&self) -> T {
        -self.gamma * self.gamma / T::lit(2.0)
    }

    pub fn amplitude(&self, x: T) -> T {
        let k = self.gamma / self.h;
        k.sqrt() * (-k * x.abs()).exp()
    }
}

/// Field strength at which the k-photon channel closes, `z_k = k/(1+2γ²)`.
pub fn channel_threshold<T: Scalar>(k: u32, gamma: T) -> Result<T> {
    if k == 0 {
        return Err(Error::param("k", "photon number must be >= 1"));
    }
    if !(gamma.is_finite() && gamma >= T::zero()) {
        return Err(Error::param(
            "gamma",
            format!("must be finite and >= 0, got {gamma}"),
        ));
    }
    let k = T::from_u32(k).unwrap();
    Ok(k / (T::one() + T::lit(2.0) * gamma * gamma))
}

/// Kinetic energy in photons left after absorbing `k` photons, `k − 2γ²z − z`.
pub fn energy_balance<T: Scalar>(k: u32, gamma: T, z: T) -> Result<T> {
    if k == 0 {
        return Err(Error::param("k", "photon number must be >= 1"));
    }
    if !(gamma.is_finite() && gamma >= T::zero()) {
        return Err(Error::param(
            "gamma",
            format!("must be finite and >= 0, got {gamma}"),
        ));
    }
    if !(z.is_finite() && z >= T::zero()) {
        return Err(Error::param(
            "z",
            format!("must be finite and >= 0, got {z}"),
        ));
    }
    let k = T::from_u32(k).unwrap();
    Ok(k - T::lit(2.0) * gamma * gamma * z - z)
}
