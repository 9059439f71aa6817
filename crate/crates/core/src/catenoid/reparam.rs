use alloc::vec::Vec;
use num_traits::Float;

use super::{check_dimension, PROFILE_NODES};
use crate::quad;
use crate::root::{first_sign_change, refine_root};
use crate::{Error, Result};

const SCAN_SAMPLES: usize = 512;

/// The profile in the parametrization `r = φ(t) = cosh((n−1)t)^{1/(n−1)}`,
/// `z = ψ(t) = ∫₀ᵗ φ^{2−n}`, in which `ṙ = sinh((n−1)t)` is explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ReparamProfile {
    n: u32,
    t: Vec<f64>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    /// Root of `sinh((n−1)t) ψ(t) = φ(t)`, the unshifted tangency point.
    pub t0: f64,
    /// `arccosh(√n)/(n−1)`
    pub v: f64,
}

fn phi(n: u32, t: f64) -> f64 {
    let k = (n - 1) as f64;
    (k * t).cosh().powf(1.0 / k)
}

fn speed(n: u32, t: f64) -> f64 {
    let k = (n - 1) as f64;
    (k * t).cosh().powf((2.0 - n as f64) / k)
}

fn psi(n: u32, t: f64) -> Result<f64> {
    Ok(quad::integrate(|s| speed(n, s), 0.0, t, 1e-15, 1e-15)?.value)
}

pub fn reparam_profile(n: u32, t_max: f64) -> Result<ReparamProfile> {
    check_dimension(n, 2)?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::DomainError { what: "t_max", value: t_max });
    }
    let k = (n - 1) as f64;
    let last = (PROFILE_NODES - 1) as f64;
    let t: Vec<f64> = (0..PROFILE_NODES).map(|j| t_max * j as f64 / last).collect();
    let mut psi_grid = Vec::with_capacity(t.len());
    psi_grid.push(0.0);
    for w in t.windows(2) {
        let step = quad::integrate(|s| speed(n, s), w[0], w[1], 1e-16, 1e-15)?.value;
        psi_grid.push(psi_grid[psi_grid.len() - 1] + step);
    }
    let tangency = |s: f64| (k * s).sinh() * psi(n, s).unwrap_or(f64::NAN) - phi(n, s);
    let bracket = first_sign_change(tangency, 0.0, t_max, SCAN_SAMPLES).ok_or(Error::RootNotBracketed { t_max })?;
    let t0 = refine_root(tangency, bracket, 1e-15)?;
    Ok(ReparamProfile {
        n,
        phi: t.iter().map(|&s| phi(n, s)).collect(),
        t,
        psi: psi_grid,
        t0,
        v: (n as f64).sqrt().acosh() / k,
    })
}

impl ReparamProfile {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    /// `ψ(t)` by quadrature.
    pub fn psi_at(&self, t: f64) -> Result<f64> {
        psi(self.n, t)
    }

    pub fn phi_at(&self, t: f64) -> f64 {
        phi(self.n, t)
    }

    /// Tangency height `z₀ = ψ(t₀)`.
    pub fn z0(&self) -> Result<f64> {
        self.psi_at(self.t0)
    }

    /// `r(z₀) = φ(t₀)`.
    pub fn r0(&self) -> f64 {
        phi(self.n, self.t0)
    }

    /// `sinh((n−1)v) ψ(v)`, to be compared with [`Self::claim_bound`].
    pub fn claim_lhs(&self) -> Result<f64> {
        Ok(((self.n - 1) as f64 * self.v).sinh() * self.psi_at(self.v)?)
    }

    /// `n^{1/(2n−2)} = φ(v)`.
    pub fn claim_bound(&self) -> f64 {
        let n = self.n as f64;
        n.powf(1.0 / (2.0 * n - 2.0))
    }

    /// `max |ψ'(t_j) − φ(t_j)^{2−n}|` over interior nodes, with `ψ'` from
    /// fourth-order central differences of the tabulated `ψ`.
    pub fn derivative_defect(&self) -> f64 {
        let h = self.t[1] - self.t[0];
        (2..self.t.len() - 2)
            .map(|j| {
                let p = &self.psi;
                let d = (p[j - 2] - 8.0 * p[j - 1] + 8.0 * p[j + 1] - p[j + 2]) / (12.0 * h);
                (d - speed(self.n, self.t[j])).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangency_height_for_n3() {
        let rp = reparam_profile(3, 4.0).unwrap();
        // oracle: independent root of the shooting equation in z
        assert!((rp.z0().unwrap() - 0.677_147_307_756_554_7).abs() < 1e-10);
    }

    #[test]
    fn bracket_required() {
        assert!(matches!(reparam_profile(3, 0.05), Err(Error::RootNotBracketed { .. })));
    }
}
