use psc_channels::Channel;
use psc_matqi::linalg::{self, CMat};
use psc_matqi::DensityOperator;

use crate::{Error, Result};

/// S(ρ) in bits.
pub fn von_neumann(rho: &DensityOperator) -> Result<f64> {
    if !rho.is_normalized() {
        return Err(Error::NotNormalized);
    }
    Ok(rho.von_neumann())
}

/// S(A|B) = S(AB) − S(B) for the named subsystems; other factors are traced out.
pub fn conditional_entropy(rho: &DensityOperator, a: &[&str], b: &[&str]) -> Result<f64> {
    let ab: Vec<&str> = a.iter().chain(b).copied().collect();
    let s_ab = rho.partial_trace(&ab)?.von_neumann();
    let s_b = if b.is_empty() { 0.0 } else { rho.partial_trace(b)?.von_neumann() };
    Ok(s_ab - s_b)
}

/// I(A⟩B) evaluated on the purification of `input`.
pub fn coherent_information(channel: &Channel, input: &DensityOperator) -> Result<f64> {
    if input.dim() != channel.din() {
        return Err(psc_matqi::Error::DimensionMismatch(format!("input dim {} vs channel {}", input.dim(), channel.din())).into());
    }
    if !input.is_normalized() {
        return Err(Error::NotNormalized);
    }
    Ok(coherent_information_raw(channel, input.matrix()))
}

/// S(N(ρ)) − S(N^c(ρ)), which equals S(B) − S(AB) for the purified input.
pub fn coherent_information_raw(channel: &Channel, rho: &CMat) -> f64 {
    let d = channel.dilation();
    let out = d.output(rho);
    let env = env_output(channel, rho);
    linalg::von_neumann_raw(&out) - linalg::von_neumann_raw(&env)
}

pub(crate) fn env_output(channel: &Channel, rho: &CMat) -> CMat {
    let mut e = linalg::zeros(channel.dilation().env_dim(), channel.dilation().env_dim());
    for f in channel.dilation().complementary_kraus() {
        e += &f * rho * f.adjoint();
    }
    e
}
